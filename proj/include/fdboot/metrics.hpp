// Distances between curves on a shared grid.

#ifndef FDBOOT_METRICS_HPP
#define FDBOOT_METRICS_HPP

#include "fdboot/core.hpp"

#include <span>
#include <string_view>

namespace fdboot {

enum class MetricKind { L2, LInf };

/// Accepts "l2" and "linf" in any letter case.
MetricKind parse_metric(std::string_view text);
std::string_view to_string(MetricKind kind);

/// Trapezoidal approximation of the L2 norm of f - g over the grid.
double l2_distance(const Curve& f, const Curve& g);

/// Largest absolute difference over the grid points.
double linf_distance(const Curve& f, const Curve& g);

double distance(MetricKind kind, const Curve& f, const Curve& g);

/// Unchecked variant for hot loops; spans must both have grid.size() entries.
double distance(MetricKind kind, const Grid& grid, std::span<const double> f,
                std::span<const double> g);

}  // namespace fdboot

#endif  // FDBOOT_METRICS_HPP
