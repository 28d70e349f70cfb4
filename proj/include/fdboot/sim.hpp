// Gaussian-process samples and Monte Carlo coverage experiments.

#ifndef FDBOOT_SIM_HPP
#define FDBOOT_SIM_HPP

#include "fdboot/boot.hpp"
#include "fdboot/core.hpp"
#include "fdboot/rng.hpp"
#include "fdboot/stats.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fdboot {

struct Kernel {
    enum class Kind { Exponential, BrownianMin };

    Kind kind = Kind::Exponential;
    /// Length scale of exp(-|s - t| / scale); unused by BrownianMin.
    double scale = 0.3;

    static Kernel exponential(double scale = 0.3) { return {Kind::Exponential, scale}; }
    static Kernel brownian_min() { return {Kind::BrownianMin, 0.0}; }

    double operator()(double s, double t) const;
};

/// "exp" / "exponential" or "brownian" / "min".
Kernel parse_kernel(std::string_view text, double scale = 0.3);
std::string_view to_string(Kernel::Kind kind);

struct GpSpec {
    Kernel kernel;
    GridPtr grid;
    std::size_t n = 100;
    /// Multiplies the kernel; 0 turns every curve into the mean function.
    double amplitude = 1.0;
};

/// Mean function of the simulated process: 0.95 * 10 t(1-t) + 0.05 * 30 t(1-t).
double gp_mean(double t);

/// Draws curves m + L z with L L^T = amplitude * K on the grid.
class GpSampler {
public:
    explicit GpSampler(GpSpec spec);

    const GpSpec& spec() const noexcept { return spec_; }
    const Eigen::VectorXd& mean() const noexcept { return mean_; }
    FunctionalSample sample(RngStream& rng) const;

private:
    GpSpec spec_;
    Eigen::VectorXd mean_;
    Eigen::MatrixXd factor_;
};

FunctionalSample simulate_gp(const GpSpec& spec, RngStream& rng);

/// theta = psi(F0) for the simulated process.
Curve population_target(const StatisticKind& stat, const GpSpec& spec);

struct ExperimentConfig {
    GpSpec gp;
    StatisticKind statistic;
    MetricKind metric = MetricKind::L2;
    BootstrapMethod bootstrap;
    std::size_t B1 = 399;
    std::size_t B2 = 399;
    std::size_t R = 200;
    std::vector<double> nominal_levels;
    std::uint64_t seed = 1;
    /// Workers across replications; the table does not depend on it.
    unsigned threads = 0;
};

/// 0.50, 0.55, ..., 0.95.
std::vector<double> default_levels();

/// Throws ValidationError naming the offending parameter.
void validate(const ExperimentConfig& config);

struct CoverageRow {
    std::string statistic;
    std::string depth;
    std::string metric;
    std::string bootstrap;
    BootstrapLevel method = BootstrapLevel::Single;
    std::size_t n = 0;
    std::size_t B1 = 0;
    std::size_t B2 = 0;
    std::size_t R = 0;
    double nominal = 0.0;
    double empirical = 0.0;
    double mc_stderr = 0.0;
};

struct CoverageTable {
    std::vector<CoverageRow> rows;
    /// Replications whose bootstrap distances were all zero while the
    /// estimate missed the target; they count as non-covering.
    std::size_t degenerate_replications = 0;
};

/// Rows are grouped by method (single, then double) and ordered by nominal level.
CoverageTable run_coverage_experiment(const ExperimentConfig& config);

/// One experiment per (B1, B2) pair, rows concatenated in pair order.
CoverageTable run_sensitivity(const ExperimentConfig& base,
                              const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

}  // namespace fdboot

#endif  // FDBOOT_SIM_HPP
