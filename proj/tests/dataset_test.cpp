#include <cmath>
#include <cstdlib>
#include <filesystem>

#include <doctest.h>

#include "fraudkit/dataset.hpp"
#include "fraudkit/error.hpp"
#include "fraudkit/pipeline.hpp"
#include "fraudkit/rng.hpp"
#include "test_util.hpp"

using namespace fraudkit;

namespace {

// Optimal linear score for the synthetic task: the class means differ by the
// same shift in every coordinate, so the coordinate sum is the Bayes scorer.
double optimal_score(std::span<const double> row) {
    double s = 0.0;
    for (const double v : row) s += v;
    return s;
}

constexpr double kPhiSqrt2 = 0.9213503964748574;  // Phi(sqrt(2)) = (1 + erf(1)) / 2

}  // namespace

TEST_CASE("load_csv reads a small file back verbatim") {
    testutil::TempDir tmp;
    const std::string path = tmp.file("small.csv");
    testutil::write_text(path,
                         "time,V1,amount,class\n"
                         "1,0.5,10.0,0\n"
                         "2,-0.25,3.5,0\n"
                         "3,1.75,99.5,1\n");
    const Dataset data = load_csv(path, "class");
    CHECK(data.n_features() == 3);
    CHECK(data.n_rows() == 3);
    CHECK(data.feature_names() == std::vector<std::string>{"time", "V1", "amount"});
    const ClassCounts counts = class_counts(data);
    CHECK(counts.negatives == 2);
    CHECK(counts.positives == 1);
    CHECK(data.value(0, 1) == 0.5);
    CHECK(data.value(2, 2) == 99.5);
    CHECK(data.label(2) == 1);
}

TEST_CASE("load_csv rejects NaN cells naming row and column") {
    testutil::TempDir tmp;
    const std::string path = tmp.file("nan.csv");
    testutil::write_text(path, "a,b,class\n1,NaN,0\n");
    try {
        load_csv(path, "class");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("'b'") != std::string::npos);
    }
}

TEST_CASE("load_csv error paths") {
    testutil::TempDir tmp;
    CHECK_THROWS_AS(load_csv(tmp.file("missing.csv"), "class"), IoError);

    const std::string dup = tmp.file("dup.csv");
    testutil::write_text(dup, "a,a,class\n1,2,0\n");
    CHECK_THROWS_AS(load_csv(dup, "class"), DataError);

    const std::string nolabel = tmp.file("nolabel.csv");
    testutil::write_text(nolabel, "a,b\n1,2\n");
    CHECK_THROWS_AS(load_csv(nolabel, "class"), DataError);

    const std::string badlabel = tmp.file("badlabel.csv");
    testutil::write_text(badlabel, "a,class\n1,2\n");
    CHECK_THROWS_AS(load_csv(badlabel, "class"), DataError);

    const std::string empty = tmp.file("empty.csv");
    testutil::write_text(empty, "");
    CHECK_THROWS_AS(load_csv(empty, "class"), DataError);

    const std::string headeronly = tmp.file("headeronly.csv");
    testutil::write_text(headeronly, "a,class\n");
    CHECK_THROWS_AS(load_csv(headeronly, "class"), DataError);

    const std::string ragged = tmp.file("ragged.csv");
    testutil::write_text(ragged, "a,b,class\n1,2,0\n1,0\n");
    CHECK_THROWS_AS(load_csv(ragged, "class"), DataError);
}

TEST_CASE("load_csv on the public credit-card CSV (when available)") {
    std::string path;
    if (const char* env = std::getenv("FRAUDKIT_CREDITCARD_CSV")) path = env;
    if (path.empty() && std::filesystem::exists("data/creditcard.csv")) {
        path = "data/creditcard.csv";
    }
    if (path.empty()) {
        MESSAGE("skipped: set FRAUDKIT_CREDITCARD_CSV to run");
        return;
    }
    const Dataset data = load_csv(path, "Class");
    CHECK(data.n_features() == 30);
    const ClassCounts counts = class_counts(data);
    // Published distribution of the ULB dataset.
    CHECK(data.n_rows() == 284807);
    CHECK(counts.positives == 492);
}

TEST_CASE("inspect prints the documented imbalance of the public CSV (when available)") {
    std::string path;
    if (const char* env = std::getenv("FRAUDKIT_CREDITCARD_CSV")) path = env;
    if (path.empty() && std::filesystem::exists("data/creditcard.csv")) {
        path = "data/creditcard.csv";
    }
    if (path.empty()) {
        MESSAGE("skipped: set FRAUDKIT_CREDITCARD_CSV to run");
        return;
    }
    const std::string summary = inspect_csv(path, "Class");
    // 492 / 284807 to three significant digits.
    CHECK(summary.find("positive fraction: 0.00173") != std::string::npos);
}

TEST_CASE("write_csv then load_csv is the identity") {
    SyntheticSpec spec;
    spec.n_total = 50;
    spec.positive_fraction = 0.2;
    spec.n_features = 3;
    spec.class_mean_separation = 1.0;
    spec.noise_stddev = 2.5;
    const Dataset data = generate_synthetic(spec, 11);

    testutil::TempDir tmp;
    const std::string path = tmp.file("roundtrip.csv");
    write_csv(data, path);
    const Dataset back = load_csv(path, "class");
    CHECK(back == data);
}

TEST_CASE("generate_synthetic honours the exact positive count") {
    SyntheticSpec spec;
    spec.n_total = 10000;
    spec.positive_fraction = 0.002;
    spec.n_features = 8;
    spec.class_mean_separation = 3.0;
    spec.noise_stddev = 1.0;
    const Dataset data = generate_synthetic(spec, 7);
    CHECK(data.n_rows() == 10000);
    CHECK(class_counts(data).positives == 20);
}

TEST_CASE("generate_synthetic is a pure function of spec and seed") {
    SyntheticSpec spec;
    spec.n_total = 500;
    spec.positive_fraction = 0.1;
    spec.n_features = 4;
    const Dataset a = generate_synthetic(spec, 123);
    const Dataset b = generate_synthetic(spec, 123);
    CHECK(a == b);
    const Dataset c = generate_synthetic(spec, 124);
    CHECK(a != c);
}

TEST_CASE("generate_synthetic with zero separation draws both classes alike") {
    SyntheticSpec spec;
    spec.n_total = 1000;
    spec.positive_fraction = 0.5;
    spec.n_features = 2;
    spec.class_mean_separation = 0.0;
    spec.noise_stddev = 1.0;
    const Dataset data = generate_synthetic(spec, 999);

    // Per-class sample means should both sit near zero (4 sigma of the mean).
    double pos_mean = 0.0;
    double neg_mean = 0.0;
    const auto counts = class_counts(data);
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        for (std::size_t j = 0; j < data.n_features(); ++j) {
            (data.label(i) == 1 ? pos_mean : neg_mean) += data.value(i, j);
        }
    }
    pos_mean /= static_cast<double>(counts.positives * data.n_features());
    neg_mean /= static_cast<double>(counts.negatives * data.n_features());
    const double bound = 4.0 / std::sqrt(500.0 * 2.0);
    CHECK(std::abs(pos_mean) < bound);
    CHECK(std::abs(neg_mean) < bound);
}

TEST_CASE("generate_synthetic rejects invalid specs") {
    SyntheticSpec spec;
    spec.n_total = 5;  // below the minimum
    CHECK_THROWS_AS(generate_synthetic(spec, 1), ConfigError);

    spec = SyntheticSpec{};
    spec.positive_fraction = 1.5;
    CHECK_THROWS_AS(generate_synthetic(spec, 1), ConfigError);

    spec = SyntheticSpec{};
    spec.n_total = 100;
    spec.positive_fraction = 0.001;  // expected positives below 1
    CHECK_THROWS_AS(generate_synthetic(spec, 1), ConfigError);

    spec = SyntheticSpec{};
    spec.noise_stddev = 0.0;
    CHECK_THROWS_AS(generate_synthetic(spec, 1), ConfigError);
}

TEST_CASE("synthetic Bayes AUC matches the closed form (Monte-Carlo oracle)") {
    // Closed form for two isotropic gaussians sep apart with unit noise:
    // AUC = Phi(sep / sqrt(2)). Estimated over 1e6 sampled pairs.
    const double sep = 2.0;
    const std::size_t d = 4;
    const double half_shift = 0.5 * sep / std::sqrt(static_cast<double>(d));

    Rng rng(271828);
    double wins = 0.0;
    const int pairs = 1000000;
    for (int p = 0; p < pairs; ++p) {
        double pos = 0.0;
        double neg = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            pos += rng.gaussian(half_shift, 1.0);
            neg += rng.gaussian(-half_shift, 1.0);
        }
        if (pos > neg) wins += 1.0;
    }
    const double mc = wins / pairs;
    CHECK(std::abs(mc - kPhiSqrt2) < 0.01);

    // The optimal linear scorer on a generated dataset lands at the same AUC.
    SyntheticSpec spec;
    spec.n_total = 20000;
    spec.positive_fraction = 0.5;
    spec.n_features = d;
    spec.class_mean_separation = sep;
    spec.noise_stddev = 1.0;
    const Dataset data = generate_synthetic(spec, 31415);
    std::vector<double> scores(data.n_rows());
    for (std::size_t i = 0; i < data.n_rows(); ++i) scores[i] = optimal_score(data.row(i));
    const double empirical = testutil::mann_whitney_auc(data.labels(), scores);
    CHECK(std::abs(empirical - kPhiSqrt2) < 0.01);
}

TEST_CASE("stratified_split keeps per-class proportions") {
    SyntheticSpec spec;
    spec.n_total = 100;
    spec.positive_fraction = 0.1;
    spec.n_features = 2;
    const Dataset data = generate_synthetic(spec, 5);
    REQUIRE(class_counts(data).positives == 10);

    const SplitResult split = stratified_split(data, 0.2, 42);
    const ClassCounts test_counts = class_counts(split.test);
    CHECK(test_counts.negatives == 18);
    CHECK(test_counts.positives == 2);
    CHECK(split.train.n_rows() + split.test.n_rows() == data.n_rows());

    const ClassCounts train_counts = class_counts(split.train);
    CHECK(train_counts.negatives + test_counts.negatives == 90);
    CHECK(train_counts.positives + test_counts.positives == 10);
}

TEST_CASE("stratified_split on 2+2 rows at one half") {
    const Dataset data({"x"}, {1.0, 2.0, 3.0, 4.0}, {0, 0, 1, 1});
    const SplitResult split = stratified_split(data, 0.5, 9);
    CHECK(class_counts(split.test).positives == 1);
    CHECK(class_counts(split.test).negatives == 1);
    CHECK(class_counts(split.train).positives == 1);
    CHECK(class_counts(split.train).negatives == 1);
}

TEST_CASE("stratified_split is deterministic") {
    SyntheticSpec spec;
    spec.n_total = 200;
    spec.positive_fraction = 0.25;
    spec.n_features = 3;
    const Dataset data = generate_synthetic(spec, 77);
    const SplitResult a = stratified_split(data, 0.3, 1234);
    const SplitResult b = stratified_split(data, 0.3, 1234);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
}

TEST_CASE("stratified_split refuses a class with zero test rows") {
    // 3 positives at 10%: round(0.3) = 0 test rows.
    const Dataset data({"x"}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13},
                       {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1});
    CHECK_THROWS_AS(stratified_split(data, 0.1, 1), DataError);
    // Single positive cannot be split at all.
    const Dataset tiny({"x"}, {1, 2, 3}, {0, 0, 1});
    CHECK_THROWS_AS(stratified_split(tiny, 0.5, 1), DataError);
}

TEST_CASE("class_counts") {
    const Dataset data({"x"}, {1.0, 2.0, 3.0}, {0, 0, 1});
    const ClassCounts counts = class_counts(data);
    CHECK(counts.negatives == 2);
    CHECK(counts.positives == 1);

    const ClassCounts none = class_counts(Dataset{});
    CHECK(none.negatives == 0);
    CHECK(none.positives == 0);
}

TEST_CASE("Dataset constructor enforces invariants") {
    CHECK_THROWS_AS(Dataset({"a"}, {1.0}, {2}), DataError);                    // label not 0/1
    CHECK_THROWS_AS(Dataset({"a"}, {1.0, 2.0}, {0}), DataError);               // shape mismatch
    CHECK_THROWS_AS(Dataset({"a"}, {std::nan("")}, {0}), DataError);           // non-finite
    CHECK_THROWS_AS(Dataset({}, {}, {0}), DataError);                          // rows without columns
}
