#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace fraudkit {

// Positive class is fraud (label 1).
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
};

ConfusionMatrix confusion_matrix(const std::vector<int>& labels, const std::vector<int>& preds);

// Each metric reports 0 with its degenerate flag set when the denominator
// vanishes, instead of throwing.
struct PrfResult {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_degenerate = false;
    bool recall_degenerate = false;
    bool f1_degenerate = false;
};

PrfResult precision_recall_f1(const ConfusionMatrix& cm);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

// Threshold sweep over the distinct scores, descending, predicting positive at
// score >= threshold. Tied scores collapse into one point. points[0] is (0,0)
// (threshold sentinel +inf) and the last point is (1,1).
struct RocCurve {
    std::vector<double> thresholds;  // parallel to points
    std::vector<RocPoint> points;
    double auc = 0.0;
};

RocCurve roc_curve(const std::vector<int>& labels, const std::vector<double>& scores);

// Trapezoidal area under an (fpr, tpr) polyline; on roc_curve output this
// equals the Mann-Whitney pair statistic.
double trapezoid_auc(const std::vector<RocPoint>& points);

struct EvalReport {
    std::string model_name;
    ConfusionMatrix confusion;
    PrfResult prf;
    RocCurve roc;
    double threshold = 0.5;
};

// Thresholds scores into predictions and assembles the full per-model report.
EvalReport make_eval_report(const std::string& model_name, const std::vector<int>& labels,
                            const std::vector<double>& scores, double threshold);

enum class ReportFormat { Table, Json, Csv };

ReportFormat report_format_from_name(const std::string& name);  // throws ConfigError
std::string report_format_name(ReportFormat format);

// Table output rounds half-even (default 2 decimals for precision/recall/F1,
// 3 for AUC); JSON and CSV carry full precision.
struct ReportRounding {
    int prf_decimals = 2;
    int auc_decimals = 3;
};

std::string render_report(const std::vector<EvalReport>& reports, ReportFormat format,
                          const ReportRounding& rounding = {});

// Three-column per-model export of the ROC sweep.
void write_roc_csv(const RocCurve& curve, const std::string& path);

// Exact decimal rounding of a double, ties to even. Exposed for tests.
std::string decimal_round_half_even(double value, int decimals);

}  // namespace fraudkit
