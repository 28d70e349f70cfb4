#include "fdboot/core.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include <fmt/format.h>

namespace fdboot {

DimensionError::DimensionError(std::size_t row, std::size_t expected, std::size_t actual)
    : ValidationError(fmt::format("row {} has {} values, expected {}", row, actual, expected)),
      row_(row) {}

NonFiniteError::NonFiniteError(std::size_t row, std::size_t column)
    : ValidationError(fmt::format("non-finite value at row {}, column {}", row, column)),
      row_(row),
      column_(column) {}

InsufficientSampleError::InsufficientSampleError(const std::string& what, std::size_t required,
                                                 std::size_t actual)
    : ValidationError(
          fmt::format("{} needs at least {} curves, sample has {}", what, required, actual)) {}

InfeasibleParameterError::InfeasibleParameterError(std::string parameter,
                                                   const std::string& message)
    : ValidationError(fmt::format("infeasible {}: {}", parameter, message)),
      parameter_(std::move(parameter)) {}

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) {
        throw ValidationError(
            fmt::format("grid needs at least 2 points, got {}", points_.size()));
    }
    for (std::size_t j = 0; j < points_.size(); ++j) {
        if (!std::isfinite(points_[j])) {
            throw ValidationError(fmt::format("grid point {} is not finite", j));
        }
        if (j > 0 && !(points_[j] > points_[j - 1])) {
            throw ValidationError(
                fmt::format("grid is not strictly increasing at point {}", j));
        }
    }
}

Grid Grid::uniform(std::size_t size, double lo, double hi) {
    if (size < 2) {
        throw ValidationError(fmt::format("grid needs at least 2 points, got {}", size));
    }
    std::vector<double> points(size);
    const double span = hi - lo;
    const double last = static_cast<double>(size - 1);
    for (std::size_t j = 0; j < size; ++j) {
        points[j] = lo + span * (static_cast<double>(j) / last);
    }
    points.back() = hi;
    return Grid(std::move(points));
}

GridPtr make_grid(Grid grid) { return std::make_shared<const Grid>(std::move(grid)); }

bool same_grid(const GridPtr& a, const GridPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

Curve::Curve(GridPtr grid, Eigen::VectorXd values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw ValidationError("curve has no grid");
    if (static_cast<std::size_t>(values_.size()) != grid_->size()) {
        throw DimensionError(0, grid_->size(), static_cast<std::size_t>(values_.size()));
    }
    for (Eigen::Index j = 0; j < values_.size(); ++j) {
        if (!std::isfinite(values_[j])) throw NonFiniteError(0, static_cast<std::size_t>(j));
    }
}

Curve::Curve(GridPtr grid, std::span<const double> values)
    : Curve(std::move(grid),
            Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
                values.data(), static_cast<Eigen::Index>(values.size())))) {}

Curve Curve::constant(GridPtr grid, double value) {
    const auto size = static_cast<Eigen::Index>(grid->size());
    return Curve(std::move(grid), Eigen::VectorXd::Constant(size, value));
}

FunctionalSample::FunctionalSample(GridPtr grid, RowMatrix values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw ValidationError("sample has no grid");
    if (values_.rows() < 1) throw InsufficientSampleError("a functional sample", 1, 0);
    if (static_cast<std::size_t>(values_.cols()) != grid_->size()) {
        throw DimensionError(0, grid_->size(), static_cast<std::size_t>(values_.cols()));
    }
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
        for (Eigen::Index j = 0; j < values_.cols(); ++j) {
            if (!std::isfinite(values_(i, j))) {
                throw NonFiniteError(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            }
        }
    }
}

std::span<const double> FunctionalSample::row(std::size_t i) const {
    return {values_.data() + i * grid_size(), grid_size()};
}

Curve FunctionalSample::curve(std::size_t i) const { return Curve(grid_, row(i)); }

FunctionalSample build_sample(GridPtr grid, const std::vector<std::vector<double>>& rows) {
    if (!grid) throw ValidationError("sample has no grid");
    if (rows.empty()) throw InsufficientSampleError("a functional sample", 1, 0);
    const std::size_t width = grid->size();
    RowMatrix values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != width) throw DimensionError(i, width, rows[i].size());
        for (std::size_t j = 0; j < width; ++j) {
            if (!std::isfinite(rows[i][j])) throw NonFiniteError(i, j);
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return FunctionalSample(std::move(grid), std::move(values));
}

CovMatrix::CovMatrix(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) throw ValidationError("covariance matrix is not square");
    const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < matrix_.rows(); ++j) {
        for (Eigen::Index k = j + 1; k < matrix_.cols(); ++k) {
            if (std::abs(matrix_(j, k) - matrix_(k, j)) > 1e-12 * scale) {
                throw ValidationError(
                    fmt::format("covariance matrix is not symmetric at ({}, {})", j, k));
            }
        }
    }
}

CovMatrix empirical_covariance(const FunctionalSample& sample) {
    const std::size_t n = sample.size();
    if (n < 2) throw InsufficientSampleError("empirical covariance", 2, n);

    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const Eigen::RowVectorXd mean = mean_of_rows(sample.values(), all).transpose();
    const RowMatrix centered = sample.values().rowwise() - mean;

    const Eigen::Index width = centered.cols();
    Eigen::MatrixXd cov(width, width);
    const double scale = 1.0 / static_cast<double>(n - 1);
    for (Eigen::Index j = 0; j < width; ++j) {
        for (Eigen::Index k = j; k < width; ++k) {
            const double value = centered.col(j).dot(centered.col(k)) * scale;
            cov(j, k) = value;
            cov(k, j) = value;
        }
    }
    return CovMatrix(std::move(cov));
}

double trapezoid(const Grid& grid, std::span<const double> values) {
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < values.size(); ++j) {
        total += 0.5 * (grid[j + 1] - grid[j]) * (values[j] + values[j + 1]);
    }
    return total;
}

std::size_t ceil_count(double x) {
    if (!(x > 0.0)) return 0;
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, nearest)) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::ceil(x));
}

Eigen::VectorXd mean_of_rows(const RowMatrix& values, std::span<const std::size_t> rows) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(values.cols());
    std::size_t count = 0;
    for (const std::size_t i : rows) {
        ++count;
        const auto row = values.row(static_cast<Eigen::Index>(i)).transpose();
        if (count == 1) {
            mean = row;
        } else {
            mean += (row - mean) / static_cast<double>(count);
        }
    }
    return mean;
}

}  // namespace fdboot
