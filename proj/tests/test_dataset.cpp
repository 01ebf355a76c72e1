#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <set>

#include <doctest.h>

#include "helpers.hpp"
#include "rtann/dataset.hpp"

using namespace rtann;
using testutil::TempDir;
using testutil::write_file;

TEST_CASE("load_csv reads a minimal one-row file") {
    TempDir dir;
    const auto path = dir.file("tiny.csv");
    write_file(path, "x,y\n1,0\n");
    const Dataset ds = load_csv(path.string(), "y");
    CHECK(ds.n == 1);
    CHECK(ds.p == 1);
    CHECK(ds.features == std::vector<double>{1.0});
    CHECK(ds.targets == std::vector<double>{0.0});
    CHECK(ds.column_names == std::vector<std::string>{"x", "y"});
    CHECK(ds.response_bound == 0.0);
}

TEST_CASE("load_csv handles a flotation-style schema row") {
    TempDir dir;
    const auto path = dir.file("tissue.csv");
    write_file(path,
               "Inlet Flow,Water Pressure,Air Pressure,Air-Left,Air-Right,"
               "ADT-D Left,ADT-D Right,Amount of chemical,Recovery Percentage\n"
               "2804,5.8,5.0,2.6,2.4,2.3,2.7,2.0,49.74\n");
    const Dataset ds = load_csv(path.string(), "Recovery Percentage");
    CHECK(ds.n == 1);
    CHECK(ds.p == 8);
    CHECK(ds.targets[0] == doctest::Approx(49.74));
    CHECK(ds.feature(0, 0) == doctest::Approx(2804.0));
    CHECK(ds.feature(0, 7) == doctest::Approx(2.0));
    CHECK(ds.target_name() == "Recovery Percentage");
    // K is the ceiling of the largest |target|.
    CHECK(ds.response_bound == 50.0);
}

TEST_CASE("load_csv moves an interior target column to the end") {
    TempDir dir;
    const auto path = dir.file("mid.csv");
    write_file(path, "a,mid,b\n1,7,2\n3,9,4\n");
    const Dataset ds = load_csv(path.string(), "mid");
    CHECK(ds.column_names == std::vector<std::string>{"a", "b", "mid"});
    CHECK(ds.features == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(ds.targets == std::vector<double>{7.0, 9.0});
}

TEST_CASE("load_csv reports the cell position of a parse failure") {
    TempDir dir;
    const auto path = dir.file("bad.csv");
    write_file(path, "a,b\n1,2\n3,abc\n");
    CHECK_THROWS_WITH_AS(load_csv(path.string(), "b"),
                         doctest::Contains("row 3, column 2"), std::runtime_error);
}

TEST_CASE("load_csv error paths") {
    TempDir dir;
    CHECK_THROWS_AS(load_csv(dir.file("absent.csv").string(), "y"), std::runtime_error);

    const auto empty = dir.file("empty.csv");
    write_file(empty, "");
    CHECK_THROWS_WITH_AS(load_csv(empty.string(), "y"), doctest::Contains("empty file"),
                         std::runtime_error);

    const auto ok = dir.file("ok.csv");
    write_file(ok, "x,y\n1,2\n");
    CHECK_THROWS_WITH_AS(load_csv(ok.string(), "z"),
                         doctest::Contains("unknown target column"),
                         std::invalid_argument);

    const auto headeronly = dir.file("h.csv");
    write_file(headeronly, "x,y\n");
    CHECK_THROWS_AS(load_csv(headeronly.string(), "y"), std::runtime_error);
}

TEST_CASE("write_csv then load_csv reproduces the dataset exactly") {
    TempDir dir;
    const Dataset ds = testutil::random_dataset(37, 4, 901);
    const auto path = dir.file("round.csv");
    write_csv(ds, path.string());
    const Dataset back = load_csv(path.string(), ds.target_name());
    CHECK(back.column_names == ds.column_names);
    CHECK(back.n == ds.n);
    CHECK(back.p == ds.p);
    // format_double emits shortest round-trip decimals, so equality is bitwise.
    CHECK(back.features == ds.features);
    CHECK(back.targets == ds.targets);
}

TEST_CASE("efficiency matches the recovery formula") {
    CHECK(efficiency(100.0, 100.0) == doctest::Approx(0.0));
    CHECK(efficiency(100.0, 0.0) == doctest::Approx(100.0));
    CHECK(efficiency(2500.0, 1000.0) == doctest::Approx(60.0));
    CHECK_THROWS_AS(efficiency(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(efficiency(-5.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(efficiency(10.0, -1.0), std::domain_error);
}

TEST_CASE("standardize centers and scales with the sample deviation") {
    const Dataset ds = testutil::make_dataset({"c", "v", "y"},
                                              {2.0, 0.0, 2.0, 2.0}, {0.0, 1.0}, 1.0);
    const auto [std_ds, stats] = standardize(ds);

    // Constant column maps to zeros and is flagged.
    CHECK(std_ds.feature(0, 0) == 0.0);
    CHECK(std_ds.feature(1, 0) == 0.0);
    CHECK(stats.constant[0]);

    // Column [0, 2]: mean 1, sample sd sqrt(2).
    CHECK_FALSE(stats.constant[1]);
    CHECK(std_ds.feature(0, 1) == doctest::Approx(-0.7071067811865475).epsilon(1e-12));
    CHECK(std_ds.feature(1, 1) == doctest::Approx(0.7071067811865475).epsilon(1e-12));
    CHECK(stats.apply_one(4.0, 1) == doctest::Approx(2.1213203435596424).epsilon(1e-12));
}

TEST_CASE("standardize inverts within 1e-12") {
    const Dataset ds = testutil::random_dataset(25, 3, 5150);
    const auto [std_ds, stats] = standardize(ds);
    for (std::size_t i = 0; i < ds.n; ++i) {
        for (std::size_t j = 0; j < ds.p; ++j) {
            const double back = stats.invert_one(std_ds.feature(i, j), j);
            CHECK(back == doctest::Approx(ds.feature(i, j)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(standardize(testutil::random_dataset(1, 2, 1)),
                    std::invalid_argument);
}

TEST_CASE("standardized columns have mean 0 and sample sd 1") {
    const Dataset ds = testutil::random_dataset(40, 2, 77);
    const auto [std_ds, stats] = standardize(ds);
    for (std::size_t j = 0; j < ds.p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < ds.n; ++i) mean += std_ds.feature(i, j);
        mean /= static_cast<double>(ds.n);
        double ss = 0.0;
        for (std::size_t i = 0; i < ds.n; ++i) {
            const double d = std_ds.feature(i, j) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(ds.n - 1));
        CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(sd == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("split is deterministic and sized by the floor rule") {
    const Dataset ds = testutil::random_dataset(10, 2, 3);
    const SplitPlan a = split(ds, 0.3, 7);
    const SplitPlan b = split(ds, 0.3, 7);
    CHECK(a.train_indices == b.train_indices);
    CHECK(a.test_indices == b.test_indices);
    CHECK(a.test_indices.size() == 3);
    CHECK(a.train_indices.size() == 7);

    const Dataset two = testutil::random_dataset(2, 1, 4);
    const SplitPlan half = split(two, 0.5, 1);
    CHECK(half.test_indices.size() == 1);
    CHECK(half.train_indices.size() == 1);
}

TEST_CASE("split partitions the index range") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Dataset ds = testutil::random_dataset(23, 2, seed);
        const SplitPlan plan = split(ds, 0.25, seed);
        std::set<std::size_t> all(plan.train_indices.begin(), plan.train_indices.end());
        all.insert(plan.test_indices.begin(), plan.test_indices.end());
        CHECK(all.size() == ds.n);
        CHECK(*all.rbegin() == ds.n - 1);
    }
    const Dataset ds = testutil::random_dataset(10, 2, 9);
    CHECK_THROWS_AS(split(ds, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(split(ds, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(split(ds, 0.05, 1), std::invalid_argument);  // floor gives 0 test rows
}

TEST_CASE("subset copies the chosen rows in order") {
    const Dataset ds = testutil::random_dataset(6, 2, 12);
    const std::vector<std::size_t> rows = {4, 1};
    const Dataset sub = subset(ds, rows);
    CHECK(sub.n == 2);
    CHECK(sub.feature(0, 0) == ds.feature(4, 0));
    CHECK(sub.feature(1, 1) == ds.feature(1, 1));
    CHECK(sub.targets[0] == ds.targets[4]);
    CHECK_THROWS_AS(subset(ds, std::vector<std::size_t>{}), std::invalid_argument);
    CHECK_THROWS_AS(subset(ds, std::vector<std::size_t>{6}), std::out_of_range);
}

TEST_CASE("generator registry") {
    const auto names = generator_names();
    CHECK(names.size() == 3);
    CHECK(std::find(names.begin(), names.end(), "axis-steps") != names.end());
    CHECK(std::find(names.begin(), names.end(), "friedman-like") != names.end());
    CHECK(std::find(names.begin(), names.end(), "linear") != names.end());

    CHECK(generator_info("axis-steps").p == 2);
    CHECK(generator_info("axis-steps").response_bound == 15.0);
    CHECK(generator_info("friedman-like").p == 5);
    CHECK(generator_info("friedman-like").response_bound == 35.0);
    CHECK(generator_info("linear").p == 3);
    CHECK(generator_info("linear").response_bound == 5.0);
    CHECK_THROWS_WITH_AS(generator_info("nope"), doctest::Contains("unknown generator"),
                         std::invalid_argument);
}

TEST_CASE("noiseless axis-steps targets sit on the two plateaus") {
    const Dataset ds = synthesize({"axis-steps", 300, 0.0, 21});
    for (double y : ds.targets) {
        CHECK((y == 0.0 || y == 10.0));
    }
    CHECK(ds.column_names == std::vector<std::string>{"x1", "x2", "y"});
}

TEST_CASE("synthesize is bit-identical under a repeated seed") {
    const Dataset a = synthesize({"friedman-like", 64, 1.5, 99});
    const Dataset b = synthesize({"friedman-like", 64, 1.5, 99});
    CHECK(a.features == b.features);
    CHECK(a.targets == b.targets);
    CHECK_THROWS_AS(synthesize({"mystery", 10, 0.0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(synthesize({"linear", 0, 0.0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(synthesize({"linear", 10, -1.0, 1}), std::invalid_argument);
}

TEST_CASE("synthesized targets stay within the declared bound") {
    const Dataset ds = synthesize({"linear", 500, 50.0, 8});
    for (double y : ds.targets) {
        CHECK(std::abs(y) <= ds.response_bound);
    }
}

TEST_CASE("friedman-like sample mean matches a Monte-Carlo oracle") {
    // Oracle: average m(x) over 1e6 uniform draws with an independent engine.
    const GeneratorInfo& gen = generator_info("friedman-like");
    std::mt19937 eng(12345);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double oracle = 0.0;
    std::vector<double> x(gen.p);
    const std::size_t draws = 1000000;
    for (std::size_t d = 0; d < draws; ++d) {
        for (double& xi : x) xi = unit(eng);
        oracle += gen.mean(x);
    }
    oracle /= static_cast<double>(draws);

    const Dataset ds = synthesize({"friedman-like", 100, 1.0, 3});
    double mean = 0.0;
    for (double y : ds.targets) mean += y;
    mean /= static_cast<double>(ds.n);
    double ss = 0.0;
    for (double y : ds.targets) ss += (y - mean) * (y - mean);
    const double sd = std::sqrt(ss / static_cast<double>(ds.n - 1));

    CHECK(std::abs(mean - oracle) <= 3.0 * sd / std::sqrt(static_cast<double>(ds.n)));
}

TEST_CASE("format_double round-trips arbitrary values") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.5) == "-2.5");
    std::mt19937_64 eng(314);
    std::uniform_real_distribution<double> wide(-1e6, 1e6);
    for (int i = 0; i < 200; ++i) {
        const double v = wide(eng);
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("validate rejects structural damage") {
    Dataset ds = testutil::random_dataset(4, 2, 6);
    ds.features[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ds.validate(), std::invalid_argument);
    ds = testutil::random_dataset(4, 2, 6);
    ds.targets[1] = ds.response_bound + 1.0;
    CHECK_THROWS_AS(ds.validate(), std::invalid_argument);
    ds = testutil::random_dataset(4, 2, 6);
    ds.column_names.pop_back();
    CHECK_THROWS_AS(ds.validate(), std::invalid_argument);
}
