#include "fraudkit/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "fraudkit/error.hpp"

namespace fraudkit {

namespace {

constexpr int kReportFormatVersion = 1;

void append_double(std::string& out, double v) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, result.ptr);
}

}  // namespace

ConfusionMatrix confusion_matrix(const std::vector<int>& labels, const std::vector<int>& preds) {
    if (labels.size() != preds.size()) {
        throw DataError("confusion matrix: " + std::to_string(labels.size()) + " labels vs " +
                        std::to_string(preds.size()) + " predictions");
    }
    if (labels.empty()) {
        throw DataError("confusion matrix: no rows");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            preds[i] == 1 ? ++cm.tp : ++cm.fn;
        } else {
            preds[i] == 1 ? ++cm.fp : ++cm.tn;
        }
    }
    return cm;
}

PrfResult precision_recall_f1(const ConfusionMatrix& cm) {
    PrfResult r;
    const std::size_t predicted_pos = cm.tp + cm.fp;
    const std::size_t actual_pos = cm.tp + cm.fn;
    if (predicted_pos == 0) {
        r.precision_degenerate = true;
    } else {
        r.precision = static_cast<double>(cm.tp) / static_cast<double>(predicted_pos);
    }
    if (actual_pos == 0) {
        r.recall_degenerate = true;
    } else {
        r.recall = static_cast<double>(cm.tp) / static_cast<double>(actual_pos);
    }
    if (r.precision + r.recall == 0.0) {
        r.f1_degenerate = true;
    } else {
        r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    }
    return r;
}

RocCurve roc_curve(const std::vector<int>& labels, const std::vector<double>& scores) {
    if (labels.size() != scores.size()) {
        throw DataError("roc curve: " + std::to_string(labels.size()) + " labels vs " +
                        std::to_string(scores.size()) + " scores");
    }
    if (labels.empty()) {
        throw DataError("roc curve: no rows");
    }
    std::size_t positives = 0;
    for (const int label : labels) positives += static_cast<std::size_t>(label);
    const std::size_t negatives = labels.size() - positives;
    if (positives == 0 || negatives == 0) {
        throw DataError("roc curve: both classes must be present");
    }

    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.thresholds.push_back(std::numeric_limits<double>::infinity());
    curve.points.push_back({0.0, 0.0});

    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double threshold = scores[order[i]];
        // Whole tie block enters at once: one sweep step per distinct score.
        while (i < order.size() && scores[order[i]] == threshold) {
            labels[order[i]] == 1 ? ++tp : ++fp;
            ++i;
        }
        curve.thresholds.push_back(threshold);
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                                static_cast<double>(tp) / static_cast<double>(positives)});
    }
    curve.auc = trapezoid_auc(curve.points);
    return curve;
}

double trapezoid_auc(const std::vector<RocPoint>& points) {
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) * 0.5;
    }
    return area;
}

EvalReport make_eval_report(const std::string& model_name, const std::vector<int>& labels,
                            const std::vector<double>& scores, double threshold) {
    std::vector<int> preds(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        preds[i] = scores[i] >= threshold ? 1 : 0;
    }
    EvalReport report;
    report.model_name = model_name;
    report.confusion = confusion_matrix(labels, preds);
    report.prf = precision_recall_f1(report.confusion);
    report.roc = roc_curve(labels, scores);
    report.threshold = threshold;
    return report;
}

ReportFormat report_format_from_name(const std::string& name) {
    if (name == "table") return ReportFormat::Table;
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw ConfigError("unknown report format '" + name + "' (expected table, json, or csv)");
}

std::string report_format_name(ReportFormat format) {
    switch (format) {
        case ReportFormat::Table: return "table";
        case ReportFormat::Json: return "json";
        case ReportFormat::Csv: return "csv";
    }
    return "table";
}

std::string decimal_round_half_even(double value, int decimals) {
    const bool negative = std::signbit(value) && value != 0.0;
    // 90 extra digits cover the exact decimal expansion of any double in the
    // metric range, so tie detection is exact.
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals + 90, std::abs(value));
    const std::string text(buf);
    const std::size_t dot = text.find('.');

    // All kept digits without the dot: integer part plus `decimals` fraction digits.
    std::string kept = text.substr(0, dot) + text.substr(dot + 1, static_cast<std::size_t>(decimals));
    const std::string rest = text.substr(dot + 1 + static_cast<std::size_t>(decimals));

    bool round_up = false;
    if (rest[0] > '5') {
        round_up = true;
    } else if (rest[0] == '5') {
        const bool nonzero_tail = rest.find_first_not_of('0', 1) != std::string::npos;
        round_up = nonzero_tail || ((kept.back() - '0') % 2 == 1);
    }
    if (round_up) {
        std::size_t pos = kept.size();
        while (pos > 0) {
            --pos;
            if (kept[pos] == '9') {
                kept[pos] = '0';
            } else {
                ++kept[pos];
                break;
            }
            if (pos == 0) kept.insert(kept.begin(), '1');
        }
    }

    std::string integer_part = kept.substr(0, kept.size() - static_cast<std::size_t>(decimals));
    const std::string fraction = kept.substr(kept.size() - static_cast<std::size_t>(decimals));
    const std::size_t nonzero = integer_part.find_first_not_of('0');
    integer_part = nonzero == std::string::npos ? "0" : integer_part.substr(nonzero);

    std::string result = integer_part;
    if (decimals > 0) {
        result += '.';
        result += fraction;
    }
    if (negative && result.find_first_not_of("0.") != std::string::npos) {
        result.insert(result.begin(), '-');
    }
    return result;
}

namespace {

std::string render_table(const std::vector<EvalReport>& reports, const ReportRounding& rounding) {
    const std::vector<std::string> headers = {"model", "precision", "recall", "f1", "auc"};
    std::vector<std::vector<std::string>> cells;
    bool any_degenerate = false;
    for (const auto& r : reports) {
        auto cell = [&](double v, int decimals, bool degenerate) {
            any_degenerate |= degenerate;
            return decimal_round_half_even(v, decimals) + (degenerate ? "*" : "");
        };
        cells.push_back({r.model_name,
                         cell(r.prf.precision, rounding.prf_decimals, r.prf.precision_degenerate),
                         cell(r.prf.recall, rounding.prf_decimals, r.prf.recall_degenerate),
                         cell(r.prf.f1, rounding.prf_decimals, r.prf.f1_degenerate),
                         cell(r.roc.auc, rounding.auc_decimals, false)});
    }

    std::vector<std::size_t> widths(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        widths[c] = headers[c].size();
        for (const auto& row : cells) widths[c] = std::max(widths[c], row[c].size());
    }
    auto emit_row = [&widths](std::string& out, const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += row[c];
            if (c + 1 < row.size()) out.append(widths[c] - row[c].size() + 2, ' ');
        }
        out += '\n';
    };

    std::string out;
    emit_row(out, headers);
    for (const auto& row : cells) emit_row(out, row);
    if (any_degenerate) {
        out += "* degenerate: denominator was zero\n";
    }
    return out;
}

nlohmann::json report_to_json(const EvalReport& r) {
    return nlohmann::json{
        {"model", r.model_name},
        {"confusion", {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}, {"tn", r.confusion.tn}}},
        {"precision", r.prf.precision},
        {"recall", r.prf.recall},
        {"f1", r.prf.f1},
        {"precision_degenerate", r.prf.precision_degenerate},
        {"recall_degenerate", r.prf.recall_degenerate},
        {"f1_degenerate", r.prf.f1_degenerate},
        {"auc", r.roc.auc},
        {"threshold", r.threshold},
    };
}

std::string render_json(const std::vector<EvalReport>& reports) {
    nlohmann::json j;
    j["format_version"] = kReportFormatVersion;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : reports) rows.push_back(report_to_json(r));
    j["reports"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string render_csv(const std::vector<EvalReport>& reports) {
    std::string out =
        "model,tp,fp,fn,tn,precision,recall,f1,auc,threshold,"
        "precision_degenerate,recall_degenerate,f1_degenerate\n";
    for (const auto& r : reports) {
        out += r.model_name;
        out += ',';
        out += std::to_string(r.confusion.tp) + ',' + std::to_string(r.confusion.fp) + ',' +
               std::to_string(r.confusion.fn) + ',' + std::to_string(r.confusion.tn) + ',';
        append_double(out, r.prf.precision);
        out += ',';
        append_double(out, r.prf.recall);
        out += ',';
        append_double(out, r.prf.f1);
        out += ',';
        append_double(out, r.roc.auc);
        out += ',';
        append_double(out, r.threshold);
        out += ',';
        out += r.prf.precision_degenerate ? '1' : '0';
        out += ',';
        out += r.prf.recall_degenerate ? '1' : '0';
        out += ',';
        out += r.prf.f1_degenerate ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace

std::string render_report(const std::vector<EvalReport>& reports, ReportFormat format,
                          const ReportRounding& rounding) {
    if (reports.empty()) {
        throw DataError("render_report: no reports");
    }
    switch (format) {
        case ReportFormat::Table: return render_table(reports, rounding);
        case ReportFormat::Json: return render_json(reports);
        case ReportFormat::Csv: return render_csv(reports);
    }
    throw DataError("render_report: unknown format");
}

void write_roc_csv(const RocCurve& curve, const std::string& path) {
    std::string out = "threshold,fpr,tpr\n";
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        append_double(out, curve.thresholds[i]);
        out += ',';
        append_double(out, curve.points[i].fpr);
        out += ',';
        append_double(out, curve.points[i].tpr);
        out += '\n';
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) {
        throw IoError("failed writing '" + path + "'");
    }
}

}  // namespace fraudkit
