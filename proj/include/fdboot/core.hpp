// Grids, curves and functional samples.
//
// Every curve lives on a shared, strictly increasing grid of evaluation
// points. Samples hold n curves as the rows of an n x T matrix. All types are
// immutable after construction and can be shared freely between threads.

#ifndef FDBOOT_CORE_HPP
#define FDBOOT_CORE_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdboot {

/// Input that violates a documented precondition. The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionError : public ValidationError {
public:
    DimensionError(std::size_t row, std::size_t expected, std::size_t actual);
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class NonFiniteError : public ValidationError {
public:
    NonFiniteError(std::size_t row, std::size_t column);
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class InsufficientSampleError : public ValidationError {
public:
    InsufficientSampleError(const std::string& what, std::size_t required, std::size_t actual);
};

/// A tuning parameter (alpha, gamma, level, ...) is infeasible for the sample at hand.
class InfeasibleParameterError : public ValidationError {
public:
    InfeasibleParameterError(std::string parameter, const std::string& message);
    const std::string& parameter() const noexcept { return parameter_; }

private:
    std::string parameter_;
};

class GridMismatchError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// File-system or stream failure. The CLI maps this to exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Grid {
public:
    /// Validates: at least two points, all finite, strictly increasing.
    explicit Grid(std::vector<double> points);

    /// `size` equally spaced points spanning [lo, hi].
    static Grid uniform(std::size_t size, double lo = 0.0, double hi = 1.0);

    std::size_t size() const noexcept { return points_.size(); }
    std::span<const double> points() const noexcept { return points_; }
    double operator[](std::size_t j) const { return points_[j]; }
    double front() const noexcept { return points_.front(); }
    double back() const noexcept { return points_.back(); }
    double length() const noexcept { return points_.back() - points_.front(); }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::vector<double> points_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(Grid grid);

/// True when both pointers refer to grids with identical points.
bool same_grid(const GridPtr& a, const GridPtr& b);

class Curve {
public:
    Curve(GridPtr grid, Eigen::VectorXd values);
    Curve(GridPtr grid, std::span<const double> values);

    /// Constant function on the grid.
    static Curve constant(GridPtr grid, double value);

    const GridPtr& grid() const noexcept { return grid_; }
    const Eigen::VectorXd& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
    double operator[](std::size_t j) const { return values_[static_cast<Eigen::Index>(j)]; }

private:
    GridPtr grid_;
    Eigen::VectorXd values_;
};

class FunctionalSample {
public:
    /// Row i is curve i. Throws on empty input, width mismatch or non-finite values.
    FunctionalSample(GridPtr grid, RowMatrix values);

    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t grid_size() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    const GridPtr& grid() const noexcept { return grid_; }
    const RowMatrix& values() const noexcept { return values_; }

    std::span<const double> row(std::size_t i) const;
    Curve curve(std::size_t i) const;

private:
    GridPtr grid_;
    RowMatrix values_;
};

/// Validating constructor from nested rows; errors name the offending row (and column).
FunctionalSample build_sample(GridPtr grid, const std::vector<std::vector<double>>& rows);

/// Symmetric T x T covariance matrix of the curve values at the grid points.
class CovMatrix {
public:
    explicit CovMatrix(Eigen::MatrixXd matrix);

    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

private:
    Eigen::MatrixXd matrix_;
};

/// Unbiased (n - 1 denominator) covariance across curves. Requires n >= 2.
CovMatrix empirical_covariance(const FunctionalSample& sample);

/// Trapezoidal integral of `values` over the grid.
double trapezoid(const Grid& grid, std::span<const double> values);

/// Ceiling of a count such as gamma * n or level * B, tolerant to decimal
/// representation error (0.07 * 100 is 7, not 8).
std::size_t ceil_count(double x);

/// Pointwise mean of the selected rows, accumulated in the given order with a
/// running update so that identical rows reproduce themselves exactly.
Eigen::VectorXd mean_of_rows(const RowMatrix& values, std::span<const std::size_t> rows);

}  // namespace fdboot

#endif  // FDBOOT_CORE_HPP
