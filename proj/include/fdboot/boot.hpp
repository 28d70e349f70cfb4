// Single and double bootstrap for functional statistics.
//
// The single bootstrap draws B1 resamples of the original curves and records
// d_b = D(theta_b, theta_hat). The double bootstrap additionally draws B2
// resamples from every first-level resample and records the pooled
// d_{b,eta} = D(theta_{b,eta}, theta_b). A confidence region at level 1 - delta
// is the ball of radius cutoff(delta) around theta_hat, where the cutoff is
// the ceil((1 - delta) * M)-th smallest of the M recorded distances.

#ifndef FDBOOT_BOOT_HPP
#define FDBOOT_BOOT_HPP

#include "fdboot/core.hpp"
#include "fdboot/metrics.hpp"
#include "fdboot/rng.hpp"
#include "fdboot/stats.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fdboot {

struct BootstrapMethod {
    enum class Kind { Plain, Smooth };

    Kind kind = Kind::Plain;
    double beta = 0.05;

    static BootstrapMethod plain() { return {Kind::Plain, 0.0}; }
    static BootstrapMethod smooth(double beta = 0.05) { return {Kind::Smooth, beta}; }
};

/// "plain" or "smooth" (smooth uses `beta`).
BootstrapMethod parse_bootstrap(std::string_view text, double beta = 0.05);
std::string_view to_string(BootstrapMethod::Kind kind);

enum class BootstrapLevel { Single, Double };
std::string_view to_string(BootstrapLevel level);

struct BootstrapDistances {
    BootstrapLevel level = BootstrapLevel::Single;
    /// Single: d_b at index b. Double: d_{b,eta} at index b * B2 + eta.
    std::vector<double> distances;
    /// First-level statistics theta_b, one per b.
    std::vector<Curve> statistic_curves;
};

/// Stream assignment for one bootstrap run: every (b) and (b, eta) resample
/// draws from its own stream keyed by (seed, replication).
struct BootstrapStreams {
    std::uint64_t seed = 0;
    std::uint64_t replication = 0;

    RngStream level_one(std::size_t b) const;
    RngStream level_two(std::size_t b, std::size_t eta) const;
};

/// n draws with replacement; every output row is a bitwise copy of an input row.
FunctionalSample iid_resample(const FunctionalSample& sample, RngStream& rng);

/// iid_resample plus Gaussian noise with covariance beta * Sigma, where Sigma
/// is the empirical covariance of `sample`. Row indices come from `rng`, the
/// noise from rng.derive(SmoothingNoise), so beta = 0 reproduces
/// iid_resample exactly. Requires n >= 2.
FunctionalSample smooth_resample(const FunctionalSample& sample, double beta, RngStream& rng);

FunctionalSample resample(const FunctionalSample& sample, const BootstrapMethod& method,
                          RngStream& rng);

struct BootstrapSpec {
    StatisticKind statistic;
    MetricKind metric = MetricKind::L2;
    BootstrapMethod method;
    std::size_t B1 = 399;
    /// 0 disables the second level.
    std::size_t B2 = 0;
    /// Parallel workers across first-level draws; results do not depend on it.
    unsigned threads = 1;
};

struct BootstrapRun {
    Curve estimate;
    BootstrapDistances single;
    std::optional<BootstrapDistances> double_level;
};

/// Runs the first level and, if spec.B2 > 0, the second level on the same
/// first-level draws.
BootstrapRun run_bootstrap(const FunctionalSample& sample, const BootstrapSpec& spec,
                           const BootstrapStreams& streams);

BootstrapDistances single_bootstrap(const FunctionalSample& sample, const StatisticKind& stat,
                                    MetricKind metric, const BootstrapMethod& method,
                                    std::size_t B1, const BootstrapStreams& streams,
                                    unsigned threads = 1);

BootstrapDistances double_bootstrap(const FunctionalSample& sample, const StatisticKind& stat,
                                    MetricKind metric, const BootstrapMethod& method,
                                    std::size_t B1, std::size_t B2,
                                    const BootstrapStreams& streams, unsigned threads = 1);

/// ceil((1 - delta) * M)-th order statistic (1-based) of the distances.
double cutoff(std::span<const double> distances, double delta);
double cutoff(const BootstrapDistances& distances, double delta);

/// Cutoffs for several deltas from one sort of the distances.
std::vector<double> cutoffs(std::span<const double> distances, std::span<const double> deltas);

struct ConfidenceBand {
    Curve estimate;
    Curve lower;
    Curve upper;
    double cutoff = 0.0;
    double level = 0.95;
    BootstrapLevel method = BootstrapLevel::Single;
    std::size_t accepted = 0;
    /// No first-level statistic fell within the cutoff; the band falls back
    /// to the single nearest one.
    bool degenerate = false;
};

/// Pointwise envelope of theta_hat and every theta_b with D(theta_b, theta_hat)
/// <= cutoff, where the cutoff comes from the requested level's distances.
ConfidenceBand band_from_run(const BootstrapRun& run, double level, BootstrapLevel method);

struct BandSet {
    ConfidenceBand single;
    std::optional<ConfidenceBand> double_level;
};

BandSet confidence_band(const FunctionalSample& sample, const BootstrapSpec& spec, double level,
                        const BootstrapStreams& streams);

/// D(estimate, target) <= cutoff (closed ball).
bool covers(const Curve& estimate, const Curve& target, double cutoff, MetricKind metric);

}  // namespace fdboot

#endif  // FDBOOT_BOOT_HPP
