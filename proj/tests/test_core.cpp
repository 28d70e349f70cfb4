#include <catch2/catch_amalgamated.hpp>

#include "fdboot/core.hpp"
#include "test_support.hpp"

#include <random>

using namespace fdboot;
using fdboot::testing::unit_grid;

TEST_CASE("grid invariants", "[core]") {
    const Grid g = Grid::uniform(101);
    CHECK(g.size() == 101);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g[50] == Catch::Approx(0.5));

    CHECK_THROWS_AS(Grid({0.0}), ValidationError);
    CHECK_THROWS_AS(Grid({0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(Grid({0.0, 1.0, 0.5}), ValidationError);
    CHECK_THROWS_AS(Grid({0.0, std::numeric_limits<double>::infinity()}), ValidationError);
    CHECK_THROWS_AS(Grid::uniform(1), ValidationError);
}

TEST_CASE("build_sample validates shape and values", "[core]") {
    SECTION("weather-shaped sample") {
        auto grid = unit_grid(101);
        std::vector<std::vector<double>> rows(35, std::vector<double>(101, 1.5));
        const auto s = build_sample(grid, rows);
        CHECK(s.size() == 35);
        CHECK(s.grid_size() == 101);
    }
    SECTION("minimal single curve") {
        const auto s = build_sample(unit_grid(2), {{0.0, 0.0}});
        CHECK(s.size() == 1);
    }
    SECTION("dimension mismatch names the row") {
        try {
            build_sample(unit_grid(3), {{1.0, 2.0, 3.0}, {1.0, 2.0}});
            FAIL("expected DimensionError");
        } catch (const DimensionError& e) {
            CHECK(e.row() == 1);
        }
    }
    SECTION("non-finite value names row and column") {
        try {
            build_sample(unit_grid(3), {{1.0, 2.0, 3.0}, {1.0, std::nan(""), 3.0}});
            FAIL("expected NonFiniteError");
        } catch (const NonFiniteError& e) {
            CHECK(e.row() == 1);
            CHECK(e.column() == 1);
        }
    }
    SECTION("empty") {
        CHECK_THROWS_AS(build_sample(unit_grid(3), {}), InsufficientSampleError);
    }
}

TEST_CASE("build_sample round-trips every value exactly", "[core][property]") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rows = fdboot::testing::random_rows(gen, 1 + trial % 7, 2 + trial % 5, false);
        const auto s = build_sample(unit_grid(rows[0].size()), rows);
        CHECK(fdboot::testing::to_rows(s) == rows);
    }
}

TEST_CASE("empirical covariance", "[core]") {
    SECTION("identical curves give the zero matrix") {
        const auto cov = empirical_covariance(fdboot::testing::identical_curves(6));
        CHECK(cov.matrix().isZero(0.0));
    }
    SECTION("constants 0 and 2 give 2 everywhere") {
        const auto cov = empirical_covariance(fdboot::testing::constant_curves({0.0, 2.0}, 7));
        CHECK((cov.matrix().array() == 2.0).all());
    }
    SECTION("needs two curves") {
        CHECK_THROWS_AS(empirical_covariance(fdboot::testing::constant_curves({1.0}, 5)),
                        InsufficientSampleError);
    }
    SECTION("GP sample has unit variance on the diagonal") {
        const auto cov = empirical_covariance(fdboot::testing::gp_sample(100, 11));
        for (Eigen::Index j = 0; j < cov.matrix().rows(); ++j) {
            CHECK(std::abs(cov.matrix()(j, j) - 1.0) <= 0.35);
        }
    }
}

TEST_CASE("empirical covariance is exactly symmetric with non-negative diagonal", "[core][property]") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 40; ++trial) {
        const auto rows = fdboot::testing::random_rows(gen, 2 + trial % 9, 2 + trial % 6, trial % 2 == 0);
        const auto cov = empirical_covariance(build_sample(unit_grid(rows[0].size()), rows)).matrix();
        CHECK(cov == cov.transpose());
        CHECK((cov.diagonal().array() >= 0.0).all());
    }
}

TEST_CASE("ceil_count absorbs decimal representation error", "[core]") {
    CHECK(ceil_count(0.0) == 0);
    CHECK(ceil_count(0.25) == 1);
    CHECK(ceil_count(1.5) == 2);
    CHECK(ceil_count(0.07 * 100) == 7);
    CHECK(ceil_count(0.05 * 100) == 5);
    CHECK(ceil_count(0.95 * 399) == 380);
    CHECK(ceil_count(0.7 * 10) == 7);
}

TEST_CASE("trapezoid integrates linear functions exactly", "[core]") {
    const Grid g({0.0, 0.5, 2.0});
    const std::vector<double> v{1.0, 2.0, 5.0};
    CHECK(trapezoid(g, v) == Catch::Approx(0.5 * 1.5 + 1.5 * 3.5));
}

TEST_CASE("curves and samples reject grid/value mismatches", "[core]") {
    auto grid = unit_grid(4);
    CHECK_THROWS_AS(Curve(grid, Eigen::VectorXd::Zero(3)), DimensionError);
    RowMatrix m(2, 5);
    m.setZero();
    CHECK_THROWS_AS(FunctionalSample(grid, m), DimensionError);
    CHECK(same_grid(grid, unit_grid(4)));
    CHECK_FALSE(same_grid(grid, unit_grid(5)));
}
