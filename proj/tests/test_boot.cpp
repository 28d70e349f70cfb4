#include <catch2/catch_amalgamated.hpp>

#include "fdboot/boot.hpp"
#include "oracle/brute_force.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace fdboot;
using fdboot::testing::constant_curves;
using fdboot::testing::gp_sample;
using fdboot::testing::identical_curves;
using fdboot::testing::to_rows;

namespace {

const StatisticKind kMedianFm = StatisticKind::median(DepthMethod::fraiman_muniz());

bool all_zero(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

// Straight-line double bootstrap with plain resampling, written against the
// stream contract only: level one draws n indices from stream (LevelOne, r, b),
// level two from (LevelTwo, r, b, eta).
struct Reference {
    std::vector<double> single;
    std::vector<double> pooled;
};

Reference reference_bootstrap(const std::vector<double>& grid, const oracle::Rows& x, bool median,
                              std::uint64_t seed, std::size_t B1, std::size_t B2) {
    const auto stat = [&](const oracle::Rows& rows) {
        if (!median) return oracle::plain_mean(rows);
        return rows[oracle::fm_depth(grid, rows).order[0]];
    };
    const auto draw = [&](const oracle::Rows& from, RngStream rng) {
        oracle::Rows out;
        for (std::size_t i = 0; i < from.size(); ++i) out.push_back(from[rng.uniform_index(from.size())]);
        return out;
    };
    Reference ref;
    const auto theta = stat(x);
    for (std::size_t b = 0; b < B1; ++b) {
        const auto xb = draw(x, RngStream(seed, stream_id(StreamRole::LevelOne, 0, b)));
        const auto tb = stat(xb);
        ref.single.push_back(oracle::l2(grid, tb, theta));
        for (std::size_t e = 0; e < B2; ++e) {
            const auto xbe = draw(xb, RngStream(seed, stream_id(StreamRole::LevelTwo, 0, b, e)));
            ref.pooled.push_back(oracle::l2(grid, stat(xbe), tb));
        }
    }
    return ref;
}

}  // namespace

TEST_CASE("iid resampling", "[boot]") {
    SECTION("single curve") {
        const auto s = constant_curves({3.0}, 5);
        RngStream rng(1, 1);
        CHECK(iid_resample(s, rng).values() == s.values());
    }
    SECTION("identical curves") {
        const auto s = identical_curves(6);
        RngStream rng(1, 2);
        CHECK(iid_resample(s, rng).values() == s.values());
    }
    SECTION("rows are bitwise copies of input rows") {
        const auto s = gp_sample(20, 3, 9);
        const auto rows = to_rows(s);
        RngStream rng(5, 5);
        for (int rep = 0; rep < 20; ++rep) {
            for (const auto& row : to_rows(iid_resample(s, rng))) {
                CHECK(std::find(rows.begin(), rows.end(), row) != rows.end());
            }
        }
    }
    SECTION("selection frequencies are uniform") {
        const auto s = constant_curves({0, 1, 2, 3, 4}, 3);
        std::vector<double> counts(5, 0.0);
        for (std::uint64_t b = 0; b < 10000; ++b) {
            RngStream rng(77, b);
            const auto r = iid_resample(s, rng);
            for (std::size_t i = 0; i < 5; ++i) counts[static_cast<std::size_t>(r.row(i)[0])] += 1.0;
        }
        for (const double c : counts) CHECK(std::abs(c / 50000.0 - 0.2) <= 0.02);
    }
}

TEST_CASE("smooth resampling", "[boot]") {
    const auto s = gp_sample(30, 4, 21);
    SECTION("beta = 0 reproduces iid resampling") {
        RngStream a(9, 1);
        RngStream b(9, 1);
        CHECK(smooth_resample(s, 0.0, a).values() == iid_resample(s, b).values());
    }
    SECTION("identical curves get no noise") {
        const auto same = identical_curves(5);
        RngStream rng(9, 2);
        CHECK(smooth_resample(same, 0.3, rng).values() == same.values());
    }
    SECTION("needs two curves") {
        RngStream rng(9, 3);
        CHECK_THROWS_AS(smooth_resample(constant_curves({1.0}, 4), 0.05, rng), InsufficientSampleError);
        CHECK_THROWS_AS(smooth_resample(s, -0.1, rng), InfeasibleParameterError);
    }
    SECTION("noise variance is beta times the sample variance") {
        const auto gp = gp_sample(100, 12);
        const double mean_diag = empirical_covariance(gp).matrix().diagonal().mean();
        double sum_sq = 0.0;
        double count = 0.0;
        for (std::uint64_t d = 0; d < 1000; ++d) {
            RngStream a(21, d);
            RngStream b(21, d);
            const RowMatrix noise = smooth_resample(gp, 0.05, a).values() - iid_resample(gp, b).values();
            sum_sq += noise.squaredNorm();
            count += static_cast<double>(noise.size());
        }
        const double ratio = (sum_sq / count) / (0.05 * mean_diag);
        CHECK(std::abs(ratio - 1.0) <= 0.2);
    }
}

TEST_CASE("single bootstrap", "[boot]") {
    SECTION("identical curves give zero distances") {
        for (const auto& stat : {StatisticKind::mean(), StatisticKind::variance(), kMedianFm,
                                 StatisticKind::trimmed_mean(DepthMethod::alpha_radius())}) {
            const auto d = single_bootstrap(identical_curves(6), stat, MetricKind::L2,
                                            BootstrapMethod::plain(), 25, {3, 0});
            CHECK(all_zero(d.distances));
        }
    }
    SECTION("GP sample with B1 = 399") {
        const auto d = single_bootstrap(gp_sample(100, 1), StatisticKind::mean(), MetricKind::L2,
                                        BootstrapMethod::plain(), 399, {5, 0});
        CHECK(d.distances.size() == 399);
        CHECK(d.statistic_curves.size() == 399);
        CHECK(std::all_of(d.distances.begin(), d.distances.end(), [](double x) { return x >= 0.0; }));
        CHECK(std::any_of(d.distances.begin(), d.distances.end(), [](double x) { return x > 0.0; }));
    }
    SECTION("result is independent of the thread count") {
        const auto s = gp_sample(40, 2, 31);
        for (const auto& method : {BootstrapMethod::plain(), BootstrapMethod::smooth(0.05)}) {
            const BootstrapSpec one{kMedianFm, MetricKind::L2, method, 30, 4, 1};
            BootstrapSpec many = one;
            many.threads = 4;
            const auto a = run_bootstrap(s, one, {8, 2});
            const auto b = run_bootstrap(s, many, {8, 2});
            CHECK(a.single.distances == b.single.distances);
            CHECK(a.double_level->distances == b.double_level->distances);
        }
    }
    SECTION("first level is shared with the double bootstrap") {
        const auto s = gp_sample(25, 6, 11);
        const auto single = single_bootstrap(s, StatisticKind::variance(), MetricKind::LInf,
                                             BootstrapMethod::smooth(), 20, {4, 1});
        const auto run = run_bootstrap(
            s, {StatisticKind::variance(), MetricKind::LInf, BootstrapMethod::smooth(), 20, 3, 1}, {4, 1});
        CHECK(run.single.distances == single.distances);
    }
}

TEST_CASE("double bootstrap", "[boot]") {
    SECTION("identical curves give zero pooled distances") {
        const auto d = double_bootstrap(identical_curves(5), kMedianFm, MetricKind::L2,
                                        BootstrapMethod::smooth(), 6, 5, {1, 0});
        CHECK(d.distances.size() == 30);
        CHECK(all_zero(d.distances));
    }
    SECTION("B2 = 1 pools B1 distances") {
        const auto d = double_bootstrap(gp_sample(30, 9, 11), StatisticKind::mean(), MetricKind::L2,
                                        BootstrapMethod::plain(), 399, 1, {2, 0});
        CHECK(d.distances.size() == 399);
        CHECK(d.statistic_curves.size() == 399);
    }
    SECTION("pooled count is B1 * B2") {
        const auto d = double_bootstrap(gp_sample(12, 9, 5), StatisticKind::variance(), MetricKind::L2,
                                        BootstrapMethod::plain(), 7, 3, {2, 0});
        CHECK(d.distances.size() == 21);
        CHECK_THROWS_AS(double_bootstrap(gp_sample(12, 9, 5), StatisticKind::mean(), MetricKind::L2,
                                         BootstrapMethod::plain(), 7, 0, {2, 0}),
                        InfeasibleParameterError);
    }
}

TEST_CASE("bootstrap distances match a straight-line reference", "[boot][oracle]") {
    std::mt19937_64 gen(61);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(gen() % 4);
        const std::size_t width = 2 + static_cast<std::size_t>(gen() % 2);
        const std::size_t B1 = 1 + static_cast<std::size_t>(gen() % 3);
        const std::size_t B2 = 1 + static_cast<std::size_t>(gen() % 3);
        const auto g = fdboot::testing::random_grid(gen, width);
        const auto rows = fdboot::testing::random_rows(gen, n, width, trial % 2 == 0);
        const auto s = build_sample(make_grid(Grid(g)), rows);
        const std::uint64_t seed = gen();
        const bool median = trial % 3 == 0;

        const auto run = run_bootstrap(
            s, {median ? kMedianFm : StatisticKind::mean(), MetricKind::L2, BootstrapMethod::plain(), B1, B2, 1},
            {seed, 0});
        const auto ref = reference_bootstrap(g, rows, median, seed, B1, B2);
        REQUIRE(run.single.distances.size() == ref.single.size());
        REQUIRE(run.double_level->distances.size() == ref.pooled.size());
        for (std::size_t k = 0; k < ref.single.size(); ++k) {
            CHECK(run.single.distances[k] == Catch::Approx(ref.single[k]).margin(1e-12));
        }
        for (std::size_t k = 0; k < ref.pooled.size(); ++k) {
            CHECK(run.double_level->distances[k] == Catch::Approx(ref.pooled[k]).margin(1e-12));
        }
        if (median) {
            CHECK(run.single.distances == ref.single);
            CHECK(run.double_level->distances == ref.pooled);
        }
    }
}

TEST_CASE("cutoff order statistics", "[boot]") {
    CHECK(cutoff(std::vector<double>(10, 0.0), 0.05) == 0.0);

    std::vector<double> d(399);
    std::iota(d.begin(), d.end(), 1.0);
    std::shuffle(d.begin(), d.end(), std::mt19937_64(3));
    CHECK(cutoff(d, 0.05) == 380.0);

    std::vector<double> hundred(100);
    std::iota(hundred.begin(), hundred.end(), 1.0);
    CHECK(cutoff(hundred, 0.5) == 50.0);
    CHECK(cutoff(hundred, 0.3) == 70.0);

    CHECK_THROWS_AS(cutoff(std::vector<double>{}, 0.05), ValidationError);
    CHECK_THROWS_AS(cutoff(hundred, 0.0), InfeasibleParameterError);
    CHECK_THROWS_AS(cutoff(hundred, 1.0), InfeasibleParameterError);
}

TEST_CASE("cutoff is non-increasing in delta", "[boot][property]") {
    std::mt19937_64 gen(8);
    std::exponential_distribution<double> dist(1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> d(1 + gen() % 500);
        for (auto& x : d) x = dist(gen);
        double previous = std::numeric_limits<double>::infinity();
        for (int k = 1; k < 100; ++k) {
            const double c = cutoff(d, k / 100.0);
            CHECK(c <= previous);
            previous = c;
        }
    }
}

TEST_CASE("confidence bands", "[boot]") {
    SECTION("identical curves give zero-width bands") {
        const auto s = identical_curves(8);
        const auto bands = confidence_band(
            s, {StatisticKind::mean(), MetricKind::L2, BootstrapMethod::plain(), 50, 10, 1}, 0.95, {1, 0});
        CHECK(bands.single.lower.values() == bands.single.estimate.values());
        CHECK(bands.single.upper.values() == bands.single.estimate.values());
        CHECK(bands.double_level->lower.values() == bands.single.estimate.values());
        CHECK(bands.double_level->upper.values() == bands.single.estimate.values());
    }
    SECTION("single band accepts at least ceil(level * B1) curves") {
        const auto s = gp_sample(60, 3, 41);
        for (const double level : {0.5, 0.8, 0.95}) {
            const auto bands = confidence_band(
                s, {StatisticKind::mean(), MetricKind::L2, BootstrapMethod::plain(), 199, 0, 1}, level, {2, 0});
            CHECK(bands.single.accepted >= ceil_count(level * 199));
            CHECK_FALSE(bands.double_level.has_value());
            const auto& b = bands.single;
            CHECK((b.lower.values().array() <= b.estimate.values().array()).all());
            CHECK((b.estimate.values().array() <= b.upper.values().array()).all());
        }
    }
    SECTION("empty accepted set falls back to the nearest curve") {
        const auto s = gp_sample(30, 5, 11);
        BootstrapRun run = run_bootstrap(
            s, {StatisticKind::mean(), MetricKind::L2, BootstrapMethod::plain(), 20, 2, 1}, {3, 0});
        const double smallest = *std::min_element(run.single.distances.begin(), run.single.distances.end());
        std::fill(run.double_level->distances.begin(), run.double_level->distances.end(), 0.5 * smallest);
        const auto band = band_from_run(run, 0.95, BootstrapLevel::Double);
        CHECK(band.degenerate);
        CHECK(band.accepted == 0);
        CHECK((band.upper.values() - band.lower.values()).maxCoeff() > 0.0);
    }
}

TEST_CASE("coverage indicator", "[boot]") {
    auto grid = fdboot::testing::unit_grid(11);
    const Curve zero = Curve::constant(grid, 0.0);
    const Curve one = Curve::constant(grid, 1.0);
    CHECK(covers(zero, zero, 0.0, MetricKind::L2));
    CHECK_FALSE(covers(zero, one, 0.5, MetricKind::LInf));
    CHECK(covers(zero, one, 1.0, MetricKind::LInf));
    CHECK_THROWS_AS(covers(zero, Curve::constant(fdboot::testing::unit_grid(5), 0.0), 1.0, MetricKind::L2),
                    GridMismatchError);
}

TEST_CASE("bootstrap method names", "[boot]") {
    CHECK(parse_bootstrap("plain").kind == BootstrapMethod::Kind::Plain);
    const auto smooth = parse_bootstrap("smooth", 0.1);
    CHECK(smooth.kind == BootstrapMethod::Kind::Smooth);
    CHECK(smooth.beta == 0.1);
    CHECK_THROWS_AS(parse_bootstrap("wild"), ValidationError);
}
