#include "fdboot/boot.hpp"

#include "fdboot/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace fdboot {

namespace {

// T x T factor L with L * L^T = beta * Sigma, from a clamped eigendecomposition.
Eigen::MatrixXd noise_factor(const FunctionalSample& sample, double beta) {
    const CovMatrix cov = empirical_covariance(sample);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov.matrix());
    if (eig.info() != Eigen::Success) {
        throw ValidationError("eigendecomposition of the sample covariance failed");
    }
    const Eigen::VectorXd scale = (beta * eig.eigenvalues().cwiseMax(0.0)).cwiseSqrt();
    return eig.eigenvectors() * scale.asDiagonal();
}

std::vector<std::size_t> draw_indices(std::size_t n, RngStream& rng) {
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) i = rng.uniform_index(n);
    return idx;
}

FunctionalSample gather_rows(const FunctionalSample& sample, const std::vector<std::size_t>& idx) {
    RowMatrix values(static_cast<Eigen::Index>(idx.size()), sample.values().cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        values.row(static_cast<Eigen::Index>(i)) =
            sample.values().row(static_cast<Eigen::Index>(idx[i]));
    }
    return FunctionalSample(sample.grid(), std::move(values));
}

void add_noise(RowMatrix& values, const Eigen::MatrixXd& factor, RngStream& noise) {
    const Eigen::Index width = values.cols();
    Eigen::VectorXd z(width);
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < width; ++j) z[j] = noise.standard_normal();
        values.row(i) += (factor * z).transpose();
    }
}

// Resampler with the smoothing factor of its source sample computed once.
class Resampler {
public:
    Resampler(const FunctionalSample& source, const BootstrapMethod& method)
        : source_(source), method_(method) {
        if (method.kind == BootstrapMethod::Kind::Smooth) {
            if (source.size() < 2) throw InsufficientSampleError("smooth bootstrap", 2, source.size());
            if (method.beta > 0.0) factor_ = noise_factor(source, method.beta);
        }
    }

    FunctionalSample draw(RngStream& rng) const {
        const auto idx = draw_indices(source_.size(), rng);
        if (!factor_) return gather_rows(source_, idx);
        RowMatrix values = gather_rows(source_, idx).values();
        RngStream noise = rng.derive(StreamRole::SmoothingNoise);
        add_noise(values, *factor_, noise);
        return FunctionalSample(source_.grid(), std::move(values));
    }

private:
    const FunctionalSample& source_;
    BootstrapMethod method_;
    std::optional<Eigen::MatrixXd> factor_;
};

void check_beta(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw InfeasibleParameterError("beta", fmt::format("{} must be finite and >= 0", beta));
    }
}

}  // namespace

BootstrapMethod parse_bootstrap(std::string_view text, double beta) {
    if (text == "plain") return BootstrapMethod::plain();
    if (text == "smooth") {
        check_beta(beta);
        return BootstrapMethod::smooth(beta);
    }
    throw ValidationError(fmt::format("unknown bootstrap method '{}' (expected plain or smooth)", text));
}

std::string_view to_string(BootstrapMethod::Kind kind) {
    return kind == BootstrapMethod::Kind::Plain ? "plain" : "smooth";
}

std::string_view to_string(BootstrapLevel level) {
    return level == BootstrapLevel::Single ? "single" : "double";
}

RngStream BootstrapStreams::level_one(std::size_t b) const {
    return RngStream(seed, stream_id(StreamRole::LevelOne, replication, b));
}

RngStream BootstrapStreams::level_two(std::size_t b, std::size_t eta) const {
    return RngStream(seed, stream_id(StreamRole::LevelTwo, replication, b, eta));
}

FunctionalSample iid_resample(const FunctionalSample& sample, RngStream& rng) {
    return gather_rows(sample, draw_indices(sample.size(), rng));
}

FunctionalSample smooth_resample(const FunctionalSample& sample, double beta, RngStream& rng) {
    check_beta(beta);
    return Resampler(sample, BootstrapMethod::smooth(beta)).draw(rng);
}

FunctionalSample resample(const FunctionalSample& sample, const BootstrapMethod& method,
                          RngStream& rng) {
    if (method.kind == BootstrapMethod::Kind::Plain) return iid_resample(sample, rng);
    return smooth_resample(sample, method.beta, rng);
}

BootstrapRun run_bootstrap(const FunctionalSample& sample, const BootstrapSpec& spec,
                           const BootstrapStreams& streams) {
    if (spec.B1 < 1) throw InfeasibleParameterError("B1", "must be at least 1");
    if (spec.method.kind == BootstrapMethod::Kind::Smooth) check_beta(spec.method.beta);
    check_feasible(spec.statistic, sample.size());

    const Curve estimate = evaluate_statistic(spec.statistic, sample);
    const Grid& grid = *sample.grid();
    const std::size_t B1 = spec.B1;
    const std::size_t B2 = spec.B2;
    const Resampler first(sample, spec.method);

    std::vector<double> single(B1);
    std::vector<std::optional<Curve>> curves(B1);
    std::vector<double> pooled(B1 * B2);

    auto view = [](const Curve& c) { return std::span<const double>(c.values().data(), c.size()); };

    parallel_for(B1, spec.threads, [&](std::size_t b) {
        RngStream rng = streams.level_one(b);
        const FunctionalSample level_one = first.draw(rng);
        Curve theta_b = evaluate_statistic(spec.statistic, level_one);
        single[b] = distance(spec.metric, grid, view(theta_b), view(estimate));
        if (B2 > 0) {
            const Resampler second(level_one, spec.method);
            for (std::size_t eta = 0; eta < B2; ++eta) {
                RngStream rng2 = streams.level_two(b, eta);
                const Curve theta_b_eta = evaluate_statistic(spec.statistic, second.draw(rng2));
                pooled[b * B2 + eta] = distance(spec.metric, grid, view(theta_b_eta), view(theta_b));
            }
        }
        curves[b].emplace(std::move(theta_b));
    });

    std::vector<Curve> statistic_curves;
    statistic_curves.reserve(B1);
    for (auto& c : curves) statistic_curves.push_back(std::move(*c));

    BootstrapRun run{estimate, {BootstrapLevel::Single, std::move(single), statistic_curves}, std::nullopt};
    if (B2 > 0) {
        run.double_level = BootstrapDistances{BootstrapLevel::Double, std::move(pooled),
                                              std::move(statistic_curves)};
    }
    return run;
}

BootstrapDistances single_bootstrap(const FunctionalSample& sample, const StatisticKind& stat,
                                    MetricKind metric, const BootstrapMethod& method,
                                    std::size_t B1, const BootstrapStreams& streams,
                                    unsigned threads) {
    return run_bootstrap(sample, {stat, metric, method, B1, 0, threads}, streams).single;
}

BootstrapDistances double_bootstrap(const FunctionalSample& sample, const StatisticKind& stat,
                                    MetricKind metric, const BootstrapMethod& method,
                                    std::size_t B1, std::size_t B2,
                                    const BootstrapStreams& streams, unsigned threads) {
    if (B2 < 1) throw InfeasibleParameterError("B2", "must be at least 1");
    return *run_bootstrap(sample, {stat, metric, method, B1, B2, threads}, streams).double_level;
}

std::vector<double> cutoffs(std::span<const double> distances, std::span<const double> deltas) {
    if (distances.empty()) throw ValidationError("cannot take a cutoff of an empty distance set");
    std::vector<double> sorted(distances.begin(), distances.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    std::vector<double> out;
    out.reserve(deltas.size());
    for (const double delta : deltas) {
        if (!(delta > 0.0 && delta < 1.0)) {
            throw InfeasibleParameterError("delta", fmt::format("{} is outside (0, 1)", delta));
        }
        const std::size_t k =
            std::clamp<std::size_t>(ceil_count((1.0 - delta) * static_cast<double>(m)), 1, m);
        out.push_back(sorted[k - 1]);
    }
    return out;
}

double cutoff(std::span<const double> distances, double delta) {
    const double deltas[] = {delta};
    return cutoffs(distances, deltas).front();
}

double cutoff(const BootstrapDistances& distances, double delta) {
    return cutoff(distances.distances, delta);
}

ConfidenceBand band_from_run(const BootstrapRun& run, double level, BootstrapLevel method) {
    if (!(level > 0.0 && level < 1.0)) {
        throw InfeasibleParameterError("level", fmt::format("{} is outside (0, 1)", level));
    }
    const BootstrapDistances* source = &run.single;
    if (method == BootstrapLevel::Double) {
        if (!run.double_level) throw ValidationError("double band requested without a second level");
        source = &*run.double_level;
    }
    const double c = cutoff(*source, 1.0 - level);

    Eigen::VectorXd lower = run.estimate.values();
    Eigen::VectorXd upper = run.estimate.values();
    std::size_t accepted = 0;
    const auto& first = run.single.distances;
    for (std::size_t b = 0; b < first.size(); ++b) {
        if (first[b] <= c) {
            const auto& v = run.single.statistic_curves[b].values();
            lower = lower.cwiseMin(v);
            upper = upper.cwiseMax(v);
            ++accepted;
        }
    }
    bool degenerate = false;
    if (accepted == 0) {
        const auto nearest = static_cast<std::size_t>(
            std::min_element(first.begin(), first.end()) - first.begin());
        const auto& v = run.single.statistic_curves[nearest].values();
        lower = lower.cwiseMin(v);
        upper = upper.cwiseMax(v);
        degenerate = true;
    }
    const GridPtr& grid = run.estimate.grid();
    return ConfidenceBand{run.estimate,  Curve(grid, std::move(lower)), Curve(grid, std::move(upper)),
                          c,             level,                         method,
                          accepted,      degenerate};
}

BandSet confidence_band(const FunctionalSample& sample, const BootstrapSpec& spec, double level,
                        const BootstrapStreams& streams) {
    const BootstrapRun run = run_bootstrap(sample, spec, streams);
    BandSet out{band_from_run(run, level, BootstrapLevel::Single), std::nullopt};
    if (run.double_level) {
        out.double_level = band_from_run(run, level, BootstrapLevel::Double);
    }
    return out;
}

bool covers(const Curve& estimate, const Curve& target, double cutoff, MetricKind metric) {
    return distance(metric, estimate, target) <= cutoff;
}

}  // namespace fdboot
