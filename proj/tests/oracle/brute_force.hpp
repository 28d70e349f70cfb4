// Exhaustive reference implementations used only by the tests.
//
// Everything here works on plain nested vectors and recomputes each quantity
// from its definition (full pairwise counts, full sorts, selection by linear
// scan) without calling into the library's statistics code. Quadrature and
// accumulation use the same floating-point expressions as the library so
// that results can be compared for exact equality.

#ifndef FDBOOT_TESTS_BRUTE_FORCE_HPP
#define FDBOOT_TESTS_BRUTE_FORCE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

inline double integrate(const std::vector<double>& grid, const std::vector<double>& v) {
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < v.size(); ++j) {
        total += 0.5 * (grid[j + 1] - grid[j]) * (v[j] + v[j + 1]);
    }
    return total;
}

inline double l2(const std::vector<double>& grid, const std::vector<double>& f,
                 const std::vector<double>& g) {
    std::vector<double> sq(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) sq[j] = (f[j] - g[j]) * (f[j] - g[j]);
    return std::sqrt(integrate(grid, sq));
}

inline double linf(const std::vector<double>& f, const std::vector<double>& g) {
    double worst = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double d = std::abs(f[j] - g[j]);
        if (d > worst) worst = d;
    }
    return worst;
}

// Smallest m with m >= x, treating values within 1e-9 of an integer as that integer.
inline std::size_t ceiling(double x) {
    std::size_t m = 0;
    while (static_cast<double>(m) < x - 1e-9 * std::max(1.0, x)) ++m;
    return m;
}

// Repeatedly pick the best remaining index; strict comparison keeps the
// lowest index among ties.
inline std::vector<std::size_t> select_order(const std::vector<double>& scores, bool larger_is_deeper) {
    std::vector<std::size_t> order;
    std::vector<bool> used(scores.size(), false);
    for (std::size_t round = 0; round < scores.size(); ++round) {
        std::size_t best = scores.size();
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (used[i]) continue;
            if (best == scores.size()) {
                best = i;
                continue;
            }
            const bool better = larger_is_deeper ? scores[i] > scores[best] : scores[i] < scores[best];
            if (better) best = i;
        }
        used[best] = true;
        order.push_back(best);
    }
    return order;
}

struct Depth {
    std::vector<double> scores;
    std::vector<std::size_t> order;
};

inline Depth fm_depth(const std::vector<double>& grid, const Rows& x) {
    const std::size_t n = x.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    Depth out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> z(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            std::size_t count = 0;
            for (std::size_t k = 0; k < n; ++k) count += x[k][j] <= x[i][j] ? 1 : 0;
            z[j] = 1.0 - std::abs(0.5 - static_cast<double>(count) * inv_n);
        }
        out.scores.push_back(integrate(grid, z));
    }
    out.order = select_order(out.scores, true);
    return out;
}

inline Depth alpha_radius(const std::vector<double>& grid, const Rows& x, double alpha, bool use_l2 = true) {
    const std::size_t n = x.size();
    const std::size_t k = ceiling(alpha * static_cast<double>(n));
    Depth out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> d;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            // Same argument order as the library's upper-triangle fill.
            const auto& a = x[std::min(i, j)];
            const auto& b = x[std::max(i, j)];
            d.push_back(use_l2 ? l2(grid, a, b) : linf(a, b));
        }
        std::sort(d.begin(), d.end());
        out.scores.push_back(d[k - 1]);
    }
    out.order = select_order(out.scores, false);
    return out;
}

// Running mean over the given rows, in the given order.
inline std::vector<double> running_mean(const Rows& x, const std::vector<std::size_t>& rows) {
    std::vector<double> mean(x.front().size(), 0.0);
    std::size_t count = 0;
    for (const std::size_t i : rows) {
        ++count;
        for (std::size_t j = 0; j < mean.size(); ++j) {
            mean[j] = count == 1 ? x[i][j] : mean[j] + (x[i][j] - mean[j]) / static_cast<double>(count);
        }
    }
    return mean;
}

inline std::vector<double> trimmed_mean(const Depth& depth, const Rows& x, double gamma) {
    const std::size_t trimmed = ceiling(gamma * static_cast<double>(x.size()));
    std::vector<std::size_t> kept(depth.order.begin(),
                                  depth.order.begin() + static_cast<std::ptrdiff_t>(x.size() - trimmed));
    std::sort(kept.begin(), kept.end());
    return running_mean(x, kept);
}

inline std::vector<double> plain_mean(const Rows& x) {
    std::vector<double> mean(x.front().size(), 0.0);
    for (const auto& row : x) {
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += row[j];
    }
    for (auto& v : mean) v /= static_cast<double>(x.size());
    return mean;
}

}  // namespace oracle

#endif  // FDBOOT_TESTS_BRUTE_FORCE_HPP
