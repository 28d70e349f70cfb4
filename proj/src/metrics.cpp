#include "fdboot/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include <fmt/format.h>

namespace fdboot {

namespace {

void require_same_grid(const Curve& f, const Curve& g) {
    if (!same_grid(f.grid(), g.grid())) {
        throw GridMismatchError(fmt::format("curves live on different grids ({} vs {} points)",
                                            f.size(), g.size()));
    }
}

std::span<const double> view(const Curve& c) {
    return {c.values().data(), c.size()};
}

double l2_raw(const Grid& grid, std::span<const double> f, std::span<const double> g) {
    double total = 0.0;
    double left = (f[0] - g[0]) * (f[0] - g[0]);
    for (std::size_t j = 0; j + 1 < f.size(); ++j) {
        const double diff = f[j + 1] - g[j + 1];
        const double right = diff * diff;
        total += 0.5 * (grid[j + 1] - grid[j]) * (left + right);
        left = right;
    }
    return std::sqrt(total);
}

double linf_raw(std::span<const double> f, std::span<const double> g) {
    double worst = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        worst = std::max(worst, std::abs(f[j] - g[j]));
    }
    return worst;
}

}  // namespace

MetricKind parse_metric(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "l2") return MetricKind::L2;
    if (lower == "linf") return MetricKind::LInf;
    throw ValidationError(fmt::format("unknown metric '{}' (expected l2 or linf)", text));
}

std::string_view to_string(MetricKind kind) {
    return kind == MetricKind::L2 ? "l2" : "linf";
}

double l2_distance(const Curve& f, const Curve& g) {
    require_same_grid(f, g);
    return l2_raw(*f.grid(), view(f), view(g));
}

double linf_distance(const Curve& f, const Curve& g) {
    require_same_grid(f, g);
    return linf_raw(view(f), view(g));
}

double distance(MetricKind kind, const Curve& f, const Curve& g) {
    return kind == MetricKind::L2 ? l2_distance(f, g) : linf_distance(f, g);
}

double distance(MetricKind kind, const Grid& grid, std::span<const double> f,
                std::span<const double> g) {
    return kind == MetricKind::L2 ? l2_raw(grid, f, g) : linf_raw(f, g);
}

}  // namespace fdboot
