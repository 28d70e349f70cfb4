#include "fdboot/sim.hpp"

#include "fdboot/parallel.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace fdboot {

double Kernel::operator()(double s, double t) const {
    if (kind == Kind::Exponential) return std::exp(-std::abs(s - t) / scale);
    return std::min(s, t);
}

Kernel parse_kernel(std::string_view text, double scale) {
    if (text == "exp" || text == "exponential") {
        if (!(scale > 0.0) || !std::isfinite(scale)) {
            throw InfeasibleParameterError("scale", fmt::format("kernel scale {} must be > 0", scale));
        }
        return Kernel::exponential(scale);
    }
    if (text == "brownian" || text == "min") return Kernel::brownian_min();
    throw ValidationError(fmt::format("unknown kernel '{}' (expected exp or brownian)", text));
}

std::string_view to_string(Kernel::Kind kind) {
    return kind == Kernel::Kind::Exponential ? "exp" : "brownian";
}

double gp_mean(double t) {
    const double bump = t * (1.0 - t);
    return 0.95 * 10.0 * bump + 0.05 * 30.0 * bump;
}

GpSampler::GpSampler(GpSpec spec) : spec_(std::move(spec)) {
    if (!spec_.grid) throw ValidationError("GP spec has no grid");
    if (spec_.n < 1) throw InsufficientSampleError("a simulated sample", 1, 0);
    if (!(spec_.amplitude >= 0.0) || !std::isfinite(spec_.amplitude)) {
        throw InfeasibleParameterError("amplitude", "must be finite and >= 0");
    }
    if (spec_.kernel.kind == Kernel::Kind::Exponential && !(spec_.kernel.scale > 0.0)) {
        throw InfeasibleParameterError("scale", "exponential kernel scale must be > 0");
    }
    const Grid& grid = *spec_.grid;
    const auto width = static_cast<Eigen::Index>(grid.size());
    mean_.resize(width);
    Eigen::MatrixXd cov(width, width);
    for (Eigen::Index j = 0; j < width; ++j) {
        mean_[j] = gp_mean(grid[static_cast<std::size_t>(j)]);
        for (Eigen::Index k = 0; k < width; ++k) {
            cov(j, k) = spec_.amplitude *
                        spec_.kernel(grid[static_cast<std::size_t>(j)], grid[static_cast<std::size_t>(k)]);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw ValidationError("eigendecomposition of the kernel matrix failed");
    }
    const double smallest = eig.eigenvalues().minCoeff();
    const double largest = eig.eigenvalues().maxCoeff();
    if (smallest < -1e-8 * std::max(1.0, largest)) {
        throw ValidationError(fmt::format(
            "kernel matrix is not positive semidefinite (smallest eigenvalue {})", smallest));
    }
    const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    factor_ = eig.eigenvectors() * root.asDiagonal();
}

FunctionalSample GpSampler::sample(RngStream& rng) const {
    const auto width = mean_.size();
    RowMatrix values(static_cast<Eigen::Index>(spec_.n), width);
    Eigen::VectorXd z(width);
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < width; ++j) z[j] = rng.standard_normal();
        values.row(i) = (mean_ + factor_ * z).transpose();
    }
    return FunctionalSample(spec_.grid, std::move(values));
}

FunctionalSample simulate_gp(const GpSpec& spec, RngStream& rng) {
    return GpSampler(spec).sample(rng);
}

Curve population_target(const StatisticKind& stat, const GpSpec& spec) {
    const Grid& grid = *spec.grid;
    Eigen::VectorXd values(static_cast<Eigen::Index>(grid.size()));
    switch (stat.kind) {
        case StatisticKind::Kind::Mean:
        case StatisticKind::Kind::Median:
        case StatisticKind::Kind::TrimmedMean:
            for (std::size_t j = 0; j < grid.size(); ++j) {
                values[static_cast<Eigen::Index>(j)] = gp_mean(grid[j]);
            }
            break;
        case StatisticKind::Kind::Variance:
            for (std::size_t j = 0; j < grid.size(); ++j) {
                values[static_cast<Eigen::Index>(j)] = spec.amplitude * spec.kernel(grid[j], grid[j]);
            }
            break;
        default:
            throw ValidationError("no population target for this statistic");
    }
    return Curve(spec.grid, std::move(values));
}

std::vector<double> default_levels() {
    std::vector<double> levels;
    for (int k = 10; k <= 19; ++k) levels.push_back(static_cast<double>(k) / 20.0);
    return levels;
}

void validate(const ExperimentConfig& config) {
    if (!config.gp.grid) throw ValidationError("experiment has no grid");
    if (config.B1 < 1) throw InfeasibleParameterError("B1", "must be at least 1");
    if (config.B2 < 1) throw InfeasibleParameterError("B2", "must be at least 1");
    if (config.R < 1) throw InfeasibleParameterError("R", "must be at least 1");
    if (config.nominal_levels.empty()) throw InfeasibleParameterError("levels", "list is empty");
    for (std::size_t i = 0; i < config.nominal_levels.size(); ++i) {
        const double level = config.nominal_levels[i];
        if (!(level > 0.0 && level < 1.0)) {
            throw InfeasibleParameterError("levels", fmt::format("{} is outside (0, 1)", level));
        }
        if (i > 0 && !(level > config.nominal_levels[i - 1])) {
            throw InfeasibleParameterError("levels", "must be strictly increasing");
        }
    }
    check_feasible(config.statistic, config.gp.n);
    if (config.bootstrap.kind == BootstrapMethod::Kind::Smooth && config.gp.n < 2) {
        throw InsufficientSampleError("smooth bootstrap", 2, config.gp.n);
    }
}

namespace {

struct ReplicationOutcome {
    std::vector<char> single;
    std::vector<char> double_level;
    bool degenerate = false;
};

}  // namespace

CoverageTable run_coverage_experiment(const ExperimentConfig& config) {
    validate(config);
    const GpSampler sampler(config.gp);
    const Curve target = population_target(config.statistic, config.gp);
    const auto& levels = config.nominal_levels;
    std::vector<double> deltas;
    for (const double level : levels) deltas.push_back(1.0 - level);

    const BootstrapSpec spec{config.statistic, config.metric, config.bootstrap, config.B1,
                             config.B2, 1};
    std::vector<ReplicationOutcome> outcomes(config.R);

    parallel_for(config.R, config.threads, [&](std::size_t r) {
        RngStream sim(config.seed, stream_id(StreamRole::Simulation, r));
        const FunctionalSample sample = sampler.sample(sim);
        const BootstrapRun run = run_bootstrap(sample, spec, {config.seed, r});
        const auto single_cut = cutoffs(run.single.distances, deltas);
        const auto double_cut = cutoffs(run.double_level->distances, deltas);

        ReplicationOutcome out;
        for (std::size_t k = 0; k < levels.size(); ++k) {
            out.single.push_back(covers(run.estimate, target, single_cut[k], config.metric));
            out.double_level.push_back(covers(run.estimate, target, double_cut[k], config.metric));
        }
        const bool miss = distance(config.metric, run.estimate, target) > 0.0;
        const auto all_zero = [](const std::vector<double>& d) {
            return std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; });
        };
        out.degenerate = miss && (all_zero(run.single.distances) ||
                                  all_zero(run.double_level->distances));
        outcomes[r] = std::move(out);
    });

    CoverageTable table;
    const double reps = static_cast<double>(config.R);
    for (const BootstrapLevel method : {BootstrapLevel::Single, BootstrapLevel::Double}) {
        for (std::size_t k = 0; k < levels.size(); ++k) {
            std::size_t hits = 0;
            for (const auto& o : outcomes) {
                hits += static_cast<std::size_t>(method == BootstrapLevel::Single ? o.single[k]
                                                                                  : o.double_level[k]);
            }
            const double p = static_cast<double>(hits) / reps;
            CoverageRow row;
            row.statistic = statistic_label(config.statistic);
            row.depth = depth_label(config.statistic);
            row.metric = to_string(config.metric);
            row.bootstrap = to_string(config.bootstrap.kind);
            row.method = method;
            row.n = config.gp.n;
            row.B1 = config.B1;
            row.B2 = config.B2;
            row.R = config.R;
            row.nominal = levels[k];
            row.empirical = p;
            row.mc_stderr = std::sqrt(p * (1.0 - p) / reps);
            table.rows.push_back(std::move(row));
        }
    }
    for (const auto& o : outcomes) table.degenerate_replications += o.degenerate ? 1 : 0;
    return table;
}

CoverageTable run_sensitivity(const ExperimentConfig& base,
                              const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    if (pairs.empty()) throw InfeasibleParameterError("pairs", "no (B1, B2) pairs given");
    CoverageTable all;
    for (const auto& [b1, b2] : pairs) {
        ExperimentConfig config = base;
        config.B1 = b1;
        config.B2 = b2;
        CoverageTable part = run_coverage_experiment(config);
        all.rows.insert(all.rows.end(), part.rows.begin(), part.rows.end());
        all.degenerate_replications += part.degenerate_replications;
    }
    return all;
}

}  // namespace fdboot
