#include <cmath>

#include <doctest.h>
#include <json.hpp>

#include "fraudkit/error.hpp"
#include "fraudkit/metrics.hpp"
#include "fraudkit/rng.hpp"
#include "test_util.hpp"

using namespace fraudkit;

namespace {

EvalReport fake_report(const std::string& name, double precision, double recall, double f1,
                       double auc) {
    EvalReport r;
    r.model_name = name;
    r.confusion = {10, 2, 3, 20};
    r.prf.precision = precision;
    r.prf.recall = recall;
    r.prf.f1 = f1;
    r.roc.auc = auc;
    r.threshold = 0.5;
    return r;
}

}  // namespace

TEST_CASE("confusion_matrix counts the four cells") {
    const ConfusionMatrix cm = confusion_matrix({1, 1, 0, 0}, {1, 0, 0, 1});
    CHECK(cm.tp == 1);
    CHECK(cm.fn == 1);
    CHECK(cm.tn == 1);
    CHECK(cm.fp == 1);
    CHECK(cm.total() == 4);
}

TEST_CASE("confusion_matrix edge cases") {
    const ConfusionMatrix perfect = confusion_matrix({1, 0, 1}, {1, 0, 1});
    CHECK(perfect.fp == 0);
    CHECK(perfect.fn == 0);

    const ConfusionMatrix all_negative = confusion_matrix({1, 0, 1}, {0, 0, 0});
    CHECK(all_negative.tp == 0);
    CHECK(all_negative.fp == 0);
    CHECK(all_negative.fn == 2);

    CHECK_THROWS_AS(confusion_matrix({1, 0}, {1}), DataError);
    CHECK_THROWS_AS(confusion_matrix({}, {}), DataError);
}

TEST_CASE("confusion_matrix counts sum to n on random inputs") {
    Rng rng(3131);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(100);
        std::vector<int> labels(n);
        std::vector<int> preds(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = rng.uniform() < 0.5 ? 1 : 0;
            preds[i] = rng.uniform() < 0.5 ? 1 : 0;
        }
        CHECK(confusion_matrix(labels, preds).total() == n);
    }
}

TEST_CASE("precision_recall_f1 on the worked example") {
    const PrfResult r = precision_recall_f1(ConfusionMatrix{50, 10, 20, 0});
    CHECK(r.precision == doctest::Approx(0.8333).epsilon(1e-4));
    CHECK(r.recall == doctest::Approx(0.7143).epsilon(1e-4));
    CHECK(r.f1 == doctest::Approx(0.7692).epsilon(1e-4));
    CHECK(!r.precision_degenerate);
    CHECK(!r.recall_degenerate);
    CHECK(!r.f1_degenerate);
}

TEST_CASE("precision_recall_f1 degenerate flags") {
    const PrfResult no_pred_pos = precision_recall_f1(ConfusionMatrix{0, 0, 5, 5});
    CHECK(no_pred_pos.precision == 0.0);
    CHECK(no_pred_pos.precision_degenerate);
    CHECK(no_pred_pos.f1_degenerate);

    const PrfResult no_actual_pos = precision_recall_f1(ConfusionMatrix{0, 3, 0, 5});
    CHECK(no_actual_pos.recall == 0.0);
    CHECK(no_actual_pos.recall_degenerate);
}

TEST_CASE("f1 equals precision and recall when they coincide") {
    // tp=3, fp=1, fn=1: P = R = 0.75.
    const PrfResult r = precision_recall_f1(ConfusionMatrix{3, 1, 1, 10});
    CHECK(r.precision == 0.75);
    CHECK(r.recall == 0.75);
    CHECK(r.f1 == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("f1 harmonic bounds on random confusion matrices") {
    Rng rng(777);
    for (int trial = 0; trial < 200; ++trial) {
        const ConfusionMatrix cm{rng.uniform_below(50), rng.uniform_below(50),
                                 rng.uniform_below(50), rng.uniform_below(50)};
        const PrfResult r = precision_recall_f1(cm);
        CHECK(r.precision >= 0.0);
        CHECK(r.precision <= 1.0);
        CHECK(r.recall >= 0.0);
        CHECK(r.recall <= 1.0);
        CHECK(r.f1 >= 0.0);
        CHECK(r.f1 <= 1.0);
        CHECK(r.f1 <= 2.0 * std::min(r.precision, r.recall) + 1e-12);
        CHECK(r.f1 <= (r.precision + r.recall) / 2.0 + 1e-12);
    }
}

TEST_CASE("roc_curve on perfectly separating scores") {
    const RocCurve curve = roc_curve({1, 1, 0, 0}, {0.9, 0.8, 0.2, 0.1});
    CHECK(curve.auc == 1.0);
    bool passes_topleft = false;
    for (const auto& p : curve.points) passes_topleft |= (p.fpr == 0.0 && p.tpr == 1.0);
    CHECK(passes_topleft);
    CHECK(curve.points.front().fpr == 0.0);
    CHECK(curve.points.front().tpr == 0.0);
    CHECK(curve.points.back().fpr == 1.0);
    CHECK(curve.points.back().tpr == 1.0);
}

TEST_CASE("roc_curve with all scores tied is the two endpoints") {
    const RocCurve curve = roc_curve({1, 0, 1, 0}, {0.3, 0.3, 0.3, 0.3});
    REQUIRE(curve.points.size() == 2);
    CHECK(curve.points[0].fpr == 0.0);
    CHECK(curve.points[0].tpr == 0.0);
    CHECK(curve.points[1].fpr == 1.0);
    CHECK(curve.points[1].tpr == 1.0);
    CHECK(curve.auc == 0.5);
}

TEST_CASE("roc_curve matches the worked four-point example") {
    const std::vector<int> labels = {1, 0, 1, 0};
    const std::vector<double> scores = {0.9, 0.8, 0.7, 0.1};
    const RocCurve curve = roc_curve(labels, scores);

    const std::vector<RocPoint> expected = {
        {0.0, 0.0}, {0.0, 0.5}, {0.5, 0.5}, {0.5, 1.0}, {1.0, 1.0}};
    REQUIRE(curve.points.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(curve.points[i].fpr == expected[i].fpr);
        CHECK(curve.points[i].tpr == expected[i].tpr);
    }
    CHECK(curve.auc == doctest::Approx(0.75).epsilon(1e-15));
    // Independent oracle: 3 correctly ordered pairs of 4.
    CHECK(testutil::mann_whitney_auc(labels, scores) == 0.75);
}

TEST_CASE("roc_curve error paths") {
    CHECK_THROWS_AS(roc_curve({1, 1}, {0.5, 0.5}), DataError);   // single class
    CHECK_THROWS_AS(roc_curve({1, 0}, {0.5}), DataError);        // length mismatch
    CHECK_THROWS_AS(roc_curve({}, {}), DataError);
}

TEST_CASE("reversed ranking gives AUC 0") {
    const RocCurve curve = roc_curve({1, 1, 0, 0}, {0.1, 0.2, 0.8, 0.9});
    CHECK(curve.auc == 0.0);
}

TEST_CASE("trapezoidal AUC equals the Mann-Whitney statistic") {
    Rng rng(424242);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.uniform_below(199);
        std::vector<int> labels(n);
        std::vector<double> scores(n);
        bool has_pos = false;
        bool has_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = rng.uniform() < 0.3 ? 1 : 0;
            (labels[i] == 1 ? has_pos : has_neg) = true;
            // Quantized scores produce plenty of exact ties.
            scores[i] = std::floor(rng.uniform() * 8.0) / 8.0;
        }
        if (!has_pos) labels[0] = 1;
        if (!has_neg) labels[n - 1] = 0;

        const RocCurve curve = roc_curve(labels, scores);
        const double oracle = testutil::mann_whitney_auc(labels, scores);
        REQUIRE(std::abs(curve.auc - oracle) < 1e-12);
    }
}

TEST_CASE("roc_curve is invariant under strictly monotone score transforms") {
    Rng rng(5757);
    const std::size_t n = 60;
    std::vector<int> labels(n);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = i % 3 == 0 ? 1 : 0;
        scores[i] = std::floor(rng.uniform() * 20.0) / 20.0;  // gaps and ties
    }
    const RocCurve base = roc_curve(labels, scores);

    std::vector<double> affine(n);
    std::vector<double> exponential(n);
    for (std::size_t i = 0; i < n; ++i) {
        affine[i] = 2.0 * scores[i] + 1.0;
        exponential[i] = std::exp(scores[i]);
    }
    for (const auto& transformed : {affine, exponential}) {
        const RocCurve curve = roc_curve(labels, transformed);
        REQUIRE(curve.points.size() == base.points.size());
        for (std::size_t i = 0; i < curve.points.size(); ++i) {
            CHECK(curve.points[i].fpr == base.points[i].fpr);
            CHECK(curve.points[i].tpr == base.points[i].tpr);
        }
        CHECK(curve.auc == base.auc);
    }
}

TEST_CASE("mean AUC of exchangeable scores is one half") {
    Rng rng(31337);
    double sum = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const std::size_t n = 50;
        std::vector<int> labels(n);
        std::vector<double> scores(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = i < 25 ? 1 : 0;  // fixed balanced labels
            scores[i] = rng.uniform();   // scores carry no signal
        }
        sum += roc_curve(labels, scores).auc;
    }
    CHECK(std::abs(sum / trials - 0.5) < 0.02);
}

TEST_CASE("decimal_round_half_even") {
    CHECK(decimal_round_half_even(0.125, 2) == "0.12");   // exact tie, 2 is even
    CHECK(decimal_round_half_even(0.875, 2) == "0.88");   // exact tie, 7 is odd
    CHECK(decimal_round_half_even(0.135, 2) == "0.14");   // double sits above the tie
    CHECK(decimal_round_half_even(2.5, 0) == "2");
    CHECK(decimal_round_half_even(3.5, 0) == "4");
    CHECK(decimal_round_half_even(0.98912, 3) == "0.989");
    CHECK(decimal_round_half_even(0.8612, 2) == "0.86");
    CHECK(decimal_round_half_even(0.8349, 2) == "0.83");
    CHECK(decimal_round_half_even(1.0, 2) == "1.00");
    CHECK(decimal_round_half_even(0.995, 2) == "0.99");   // 0.995 is below its decimal
    CHECK(decimal_round_half_even(-0.125, 2) == "-0.12");
    CHECK(decimal_round_half_even(-0.001, 2) == "0.00");  // no negative zero
    CHECK(decimal_round_half_even(9.999, 2) == "10.00");  // carry across the point
}

TEST_CASE("render_report table matches the rounding contract") {
    const std::vector<EvalReport> reports = {
        fake_report("logreg", 0.8612, 0.8349, 0.8478, 0.98912)};
    const std::string table = render_report(reports, ReportFormat::Table);
    CHECK(table.find("logreg") != std::string::npos);
    CHECK(table.find("0.86") != std::string::npos);
    CHECK(table.find("0.83") != std::string::npos);
    CHECK(table.find("0.989") != std::string::npos);
    CHECK(table.find("precision") != std::string::npos);  // labeled precision, not accuracy

    // Single model renders as exactly one data row.
    std::size_t newlines = 0;
    for (const char c : table) newlines += c == '\n';
    CHECK(newlines == 2);  // header + one row
}

TEST_CASE("render_report json round-trips with no value loss") {
    const std::vector<EvalReport> reports = {
        fake_report("logreg", 0.8612341234, 0.8349000001, 0.84782, 0.989123456789),
        fake_report("svm", 0.5, 1.0 / 3.0, 0.25, 0.75)};
    const std::string text = render_report(reports, ReportFormat::Json);
    const nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j.at("format_version") == 1);
    REQUIRE(j.at("reports").size() == 2);
    CHECK(j.at("reports")[0].at("precision").get<double>() == 0.8612341234);
    CHECK(j.at("reports")[1].at("recall").get<double>() == 1.0 / 3.0);
    CHECK(j.at("reports")[1].at("auc").get<double>() == 0.75);
    CHECK(j.at("reports")[0].at("confusion").at("tp").get<int>() == 10);
}

TEST_CASE("render_report csv carries full precision") {
    const std::vector<EvalReport> reports = {fake_report("knn", 1.0 / 3.0, 0.2, 0.25, 0.5)};
    const std::string text = render_report(reports, ReportFormat::Csv);
    CHECK(text.find("model,tp,fp,fn,tn,precision") == 0);
    CHECK(text.find("0.3333333333333333") != std::string::npos);
    CHECK_THROWS_AS(render_report({}, ReportFormat::Csv), DataError);
}

TEST_CASE("degenerate metrics are marked in the table") {
    EvalReport r = fake_report("tree", 0.0, 0.0, 0.0, 0.5);
    r.prf.precision_degenerate = true;
    r.prf.f1_degenerate = true;
    const std::string table = render_report({r}, ReportFormat::Table);
    CHECK(table.find("0.00*") != std::string::npos);
    CHECK(table.find("degenerate") != std::string::npos);
}

TEST_CASE("write_roc_csv emits threshold, fpr, tpr rows") {
    const RocCurve curve = roc_curve({1, 0}, {0.9, 0.1});
    testutil::TempDir tmp;
    const std::string path = tmp.file("roc.csv");
    write_roc_csv(curve, path);
    const std::string text = testutil::read_text(path);
    CHECK(text.find("threshold,fpr,tpr\n") == 0);
    CHECK(text.find("inf,0,0\n") != std::string::npos);
    CHECK(text.find("0.1,1,1\n") != std::string::npos);
}

TEST_CASE("make_eval_report composes the pieces") {
    const std::vector<int> labels = {1, 0, 1, 0};
    const std::vector<double> scores = {0.9, 0.2, 0.6, 0.4};
    const EvalReport report = make_eval_report("logreg", labels, scores, 0.5);
    CHECK(report.model_name == "logreg");
    CHECK(report.confusion.tp == 2);
    CHECK(report.confusion.tn == 2);
    CHECK(report.prf.precision == 1.0);
    CHECK(report.prf.recall == 1.0);
    CHECK(report.roc.auc == 1.0);
    CHECK(report.threshold == 0.5);
}
