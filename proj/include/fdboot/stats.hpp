// Descriptive statistics of a functional sample.
//
// Two depth notions rank curves from the centre outwards:
//   * Fraiman-Muniz: integrate the pointwise univariate depth
//     1 - |1/2 - F(x_i(t))| over the grid (larger is deeper);
//   * alpha-radius: distance from a curve to its ceil(alpha * n)-th nearest
//     other curve (smaller is deeper).
// The functional median is the deepest observed curve, and the trimmed mean
// averages the n - ceil(gamma * n) deepest curves.

#ifndef FDBOOT_STATS_HPP
#define FDBOOT_STATS_HPP

#include "fdboot/core.hpp"
#include "fdboot/metrics.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace fdboot {

struct DepthMethod {
    enum class Kind { FraimanMuniz, AlphaRadius };

    Kind kind = Kind::FraimanMuniz;
    double alpha = 0.5;
    MetricKind metric = MetricKind::L2;

    static DepthMethod fraiman_muniz() { return {}; }
    static DepthMethod alpha_radius(double alpha = 0.5, MetricKind metric = MetricKind::L2) {
        return {Kind::AlphaRadius, alpha, metric};
    }

    friend bool operator==(const DepthMethod&, const DepthMethod&) = default;
};

struct DepthScores {
    DepthMethod method;
    std::vector<double> scores;
    /// Zero-based curve indices, deepest first. Ties go to the lower index.
    std::vector<std::size_t> order;
};

struct StatisticKind {
    enum class Kind { Mean, Variance, Median, TrimmedMean };

    Kind kind = Kind::Mean;
    DepthMethod depth;
    double gamma = 0.05;

    static StatisticKind mean() { return {Kind::Mean, {}, 0.0}; }
    static StatisticKind variance() { return {Kind::Variance, {}, 0.0}; }
    static StatisticKind median(DepthMethod depth) { return {Kind::Median, depth, 0.0}; }
    static StatisticKind trimmed_mean(DepthMethod depth, double gamma = 0.05) {
        return {Kind::TrimmedMean, depth, gamma};
    }

    bool uses_depth() const noexcept { return kind == Kind::Median || kind == Kind::TrimmedMean; }
};

/// "mean", "variance", "median-fm", "median-radius", "trimmed-fm", "trimmed-radius".
StatisticKind parse_statistic(std::string_view text);

/// "mean", "variance", "median", "trimmed".
std::string_view statistic_label(const StatisticKind& kind);
/// "none", "fm", "radius".
std::string_view depth_label(const StatisticKind& kind);

Curve functional_mean(const FunctionalSample& sample);
Curve functional_variance(const FunctionalSample& sample);

DepthScores fm_depth(const FunctionalSample& sample);
DepthScores alpha_radius_depth(const FunctionalSample& sample, double alpha,
                               MetricKind metric = MetricKind::L2);
DepthScores compute_depth(const FunctionalSample& sample, const DepthMethod& method);

struct MedianResult {
    Curve curve;
    std::size_t index;  // zero-based position in the sample
};

MedianResult functional_median(const FunctionalSample& sample, const DepthMethod& depth);

Curve trimmed_mean(const FunctionalSample& sample, double gamma, const DepthMethod& depth);

/// Throws InfeasibleParameterError / InsufficientSampleError if `kind` cannot
/// be evaluated on samples of size n.
void check_feasible(const StatisticKind& kind, std::size_t n);

Curve evaluate_statistic(const StatisticKind& kind, const FunctionalSample& sample);

}  // namespace fdboot

#endif  // FDBOOT_STATS_HPP
