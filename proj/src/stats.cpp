#include "fdboot/stats.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

namespace fdboot {

namespace {

std::vector<std::size_t> iota_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

// Sort indices by score; stable sort keeps lower indices first among ties.
std::vector<std::size_t> rank_order(const std::vector<double>& scores, bool descending) {
    auto order = iota_indices(scores.size());
    if (descending) {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    } else {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    }
    return order;
}

void check_alpha(double alpha, std::size_t n) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InfeasibleParameterError("alpha", fmt::format("{} is outside (0, 1]", alpha));
    }
    if (n < 2) throw InsufficientSampleError("alpha-radius depth", 2, n);
    const std::size_t k = ceil_count(alpha * static_cast<double>(n));
    if (k > n - 1) {
        throw InfeasibleParameterError(
            "alpha", fmt::format("ceil({} * {}) = {} exceeds the {} other curves", alpha, n, k,
                                 n - 1));
    }
}

std::size_t trim_count(double gamma, std::size_t n) {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw InfeasibleParameterError("gamma", fmt::format("{} is outside [0, 1)", gamma));
    }
    const std::size_t trimmed = ceil_count(gamma * static_cast<double>(n));
    if (trimmed >= n) {
        throw InfeasibleParameterError(
            "gamma", fmt::format("ceil({} * {}) = {} trims every curve", gamma, n, trimmed));
    }
    return trimmed;
}

}  // namespace

StatisticKind parse_statistic(std::string_view text) {
    if (text == "mean") return StatisticKind::mean();
    if (text == "variance") return StatisticKind::variance();
    if (text == "median-fm") return StatisticKind::median(DepthMethod::fraiman_muniz());
    if (text == "median-radius") return StatisticKind::median(DepthMethod::alpha_radius());
    if (text == "trimmed-fm") return StatisticKind::trimmed_mean(DepthMethod::fraiman_muniz());
    if (text == "trimmed-radius") return StatisticKind::trimmed_mean(DepthMethod::alpha_radius());
    throw ValidationError(fmt::format("unknown statistic '{}'", text));
}

std::string_view statistic_label(const StatisticKind& kind) {
    switch (kind.kind) {
        case StatisticKind::Kind::Mean: return "mean";
        case StatisticKind::Kind::Variance: return "variance";
        case StatisticKind::Kind::Median: return "median";
        case StatisticKind::Kind::TrimmedMean: return "trimmed";
    }
    return "?";
}

std::string_view depth_label(const StatisticKind& kind) {
    if (!kind.uses_depth()) return "none";
    return kind.depth.kind == DepthMethod::Kind::FraimanMuniz ? "fm" : "radius";
}

Curve functional_mean(const FunctionalSample& sample) {
    const auto all = iota_indices(sample.size());
    return Curve(sample.grid(), mean_of_rows(sample.values(), all));
}

Curve functional_variance(const FunctionalSample& sample) {
    const std::size_t n = sample.size();
    if (n < 2) throw InsufficientSampleError("functional variance", 2, n);
    const auto all = iota_indices(n);
    const Eigen::VectorXd mean = mean_of_rows(sample.values(), all);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(mean.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto diff = sample.values().row(static_cast<Eigen::Index>(i)).transpose() - mean;
        sum += diff.cwiseProduct(diff);
    }
    return Curve(sample.grid(), Eigen::VectorXd(sum / static_cast<double>(n - 1)));
}

DepthScores fm_depth(const FunctionalSample& sample) {
    const std::size_t n = sample.size();
    const std::size_t width = sample.grid_size();
    const Grid& grid = *sample.grid();
    const auto& values = sample.values();
    const double inv_n = 1.0 / static_cast<double>(n);

    // z(i, j) = 1 - |1/2 - F(x_i(t_j))| with F(x) = #{k : x_k <= x} / n.
    RowMatrix univariate(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(width));
    std::vector<double> column(n);
    for (std::size_t j = 0; j < width; ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        for (std::size_t i = 0; i < n; ++i) column[i] = values(static_cast<Eigen::Index>(i), col);
        std::sort(column.begin(), column.end());
        for (std::size_t i = 0; i < n; ++i) {
            const double x = values(static_cast<Eigen::Index>(i), col);
            const auto at_most = static_cast<std::size_t>(
                std::upper_bound(column.begin(), column.end(), x) - column.begin());
            const double cdf = static_cast<double>(at_most) * inv_n;
            univariate(static_cast<Eigen::Index>(i), col) = 1.0 - std::abs(0.5 - cdf);
        }
    }

    DepthScores out;
    out.method = DepthMethod::fraiman_muniz();
    out.scores.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.scores[i] = trapezoid(
            grid, {univariate.data() + i * width, width});
    }
    out.order = rank_order(out.scores, /*descending=*/true);
    return out;
}

DepthScores alpha_radius_depth(const FunctionalSample& sample, double alpha, MetricKind metric) {
    const std::size_t n = sample.size();
    check_alpha(alpha, n);
    const std::size_t k = ceil_count(alpha * static_cast<double>(n));
    const Grid& grid = *sample.grid();

    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                 static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = distance(metric, grid, sample.row(i), sample.row(j));
            dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
            dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
        }
    }

    DepthScores out;
    out.method = DepthMethod::alpha_radius(alpha, metric);
    out.scores.resize(n);
    std::vector<double> others;
    others.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        others.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) others.push_back(dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
        const auto kth = others.begin() + static_cast<std::ptrdiff_t>(k - 1);
        std::nth_element(others.begin(), kth, others.end());
        out.scores[i] = *kth;
    }
    out.order = rank_order(out.scores, /*descending=*/false);
    return out;
}

DepthScores compute_depth(const FunctionalSample& sample, const DepthMethod& method) {
    if (method.kind == DepthMethod::Kind::FraimanMuniz) return fm_depth(sample);
    return alpha_radius_depth(sample, method.alpha, method.metric);
}

MedianResult functional_median(const FunctionalSample& sample, const DepthMethod& depth) {
    const DepthScores scores = compute_depth(sample, depth);
    const std::size_t deepest = scores.order.front();
    return {sample.curve(deepest), deepest};
}

Curve trimmed_mean(const FunctionalSample& sample, double gamma, const DepthMethod& depth) {
    const std::size_t n = sample.size();
    const std::size_t trimmed = trim_count(gamma, n);
    if (trimmed == 0) return functional_mean(sample);

    const DepthScores scores = compute_depth(sample, depth);
    std::vector<std::size_t> kept(scores.order.begin(),
                                  scores.order.begin() + static_cast<std::ptrdiff_t>(n - trimmed));
    // Accumulate in sample order so gamma = 0 and the plain mean agree bitwise.
    std::sort(kept.begin(), kept.end());
    return Curve(sample.grid(), mean_of_rows(sample.values(), kept));
}

void check_feasible(const StatisticKind& kind, std::size_t n) {
    if (n < 1) throw InsufficientSampleError("a statistic", 1, n);
    switch (kind.kind) {
        case StatisticKind::Kind::Mean: return;
        case StatisticKind::Kind::Variance:
            if (n < 2) throw InsufficientSampleError("functional variance", 2, n);
            return;
        case StatisticKind::Kind::Median:
        case StatisticKind::Kind::TrimmedMean:
            if (kind.kind == StatisticKind::Kind::TrimmedMean) trim_count(kind.gamma, n);
            if (kind.depth.kind == DepthMethod::Kind::AlphaRadius) check_alpha(kind.depth.alpha, n);
            return;
    }
}

Curve evaluate_statistic(const StatisticKind& kind, const FunctionalSample& sample) {
    switch (kind.kind) {
        case StatisticKind::Kind::Mean: return functional_mean(sample);
        case StatisticKind::Kind::Variance: return functional_variance(sample);
        case StatisticKind::Kind::Median: return functional_median(sample, kind.depth).curve;
        case StatisticKind::Kind::TrimmedMean: return trimmed_mean(sample, kind.gamma, kind.depth);
    }
    throw ValidationError("unknown statistic kind");
}

}  // namespace fdboot
