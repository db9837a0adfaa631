#include "fraudkit/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fraudkit/dataset.hpp"
#include "fraudkit/error.hpp"
#include "fraudkit/models.hpp"
#include "fraudkit/preprocess.hpp"

namespace fraudkit {

namespace {

using nlohmann::json;

constexpr int kManifestFormatVersion = 1;

std::string read_file_bytes(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return std::string((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!file) {
        throw IoError("failed writing '" + path + "'");
    }
}

// Tracks artifacts so a failed run leaves no partial output behind.
class ArtifactTracker {
public:
    explicit ArtifactTracker(std::string dir) : dir_(std::move(dir)) {}

    std::string path(const std::string& name) const {
        return (std::filesystem::path(dir_) / name).string();
    }

    void record(const std::string& full_path) { written_.push_back(full_path); }

    void remove_all() noexcept {
        for (const auto& p : written_) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
    }

    const std::vector<std::string>& written() const { return written_; }

private:
    std::string dir_;
    std::vector<std::string> written_;
};

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        const std::string message = std::string("stage '") + stage + "': " + e.what();
        switch (e.category()) {
            case ErrorCategory::Config: throw ConfigError(message);
            case ErrorCategory::Data: throw DataError(message);
            case ErrorCategory::Training: throw TrainingError(message);
            case ErrorCategory::Io: throw IoError(message);
        }
        throw DataError(message);
    }
}

json config_to_json(const PipelineConfig& config) {
    json j = json::object();
    std::stringstream ss(canonical_config(config));
    std::string line;
    while (std::getline(ss, line)) {
        const std::size_t eq = line.find('=');
        j[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return j;
}

json report_entry(const EvalReport& r) {
    return json{
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

struct FeatureStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
};

FeatureStats column_stats(const Dataset& data, std::size_t col) {
    FeatureStats s;
    const std::size_t n = data.n_rows();
    s.min = data.value(0, col);
    s.max = s.min;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = data.value(i, col);
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        sum += v;
    }
    s.mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dev = data.value(i, col) - s.mean;
        sq += dev * dev;
    }
    s.stddev = std::sqrt(sq / static_cast<double>(n));
    return s;
}

std::string inspect_dataset(const Dataset& data, const std::string& source) {
    const ClassCounts counts = class_counts(data);
    const double positive_fraction =
        static_cast<double>(counts.positives) / static_cast<double>(data.n_rows());

    char line[256];
    std::string out;
    out += "source: " + source + "\n";
    out += "rows: " + std::to_string(data.n_rows()) + "\n";
    out += "features: " + std::to_string(data.n_features()) + "\n";
    out += "negatives (label 0): " + std::to_string(counts.negatives) + "\n";
    out += "positives (label 1): " + std::to_string(counts.positives) + "\n";
    std::snprintf(line, sizeof(line), "positive fraction: %.3g\n", positive_fraction);
    out += line;
    out += "missing/non-finite cells: none (all cells finite by construction)\n";
    out += "\n";

    std::size_t name_width = 7;  // "feature"
    for (const auto& name : data.feature_names()) name_width = std::max(name_width, name.size());
    std::snprintf(line, sizeof(line), "%-*s  %12s  %12s  %12s  %12s\n",
                  static_cast<int>(name_width), "feature", "min", "max", "mean", "stddev");
    out += line;
    for (std::size_t j = 0; j < data.n_features(); ++j) {
        const FeatureStats s = column_stats(data, j);
        std::snprintf(line, sizeof(line), "%-*s  %12.6g  %12.6g  %12.6g  %12.6g\n",
                      static_cast<int>(name_width), data.feature_names()[j].c_str(), s.min, s.max,
                      s.mean, s.stddev);
        out += line;
    }
    return out;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    config.validate();

    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + config.out_dir + "': " + ec.message());
    }

    ArtifactTracker artifacts(config.out_dir);
    PipelineResult result;
    json stages = json::array();

    try {
        // load
        std::string input_hash = "synthetic";
        const Dataset full = run_stage("load", [&] {
            if (config.input == InputKind::Csv) {
                input_hash = fnv1a64_hex(read_file_bytes(config.csv_path));
                return load_csv(config.csv_path, config.label_column);
            }
            return generate_synthetic(config.synthetic, config.seed + seed_offset::kGenerate);
        });
        stages.push_back({{"name", "load"}, {"rows", full.n_rows()}});

        // undersample
        const Dataset subsample = run_stage("undersample", [&] {
            return random_undersample(full, config.undersample_ratio,
                                      config.seed + seed_offset::kUndersample);
        });
        stages.push_back({{"name", "undersample"}, {"rows", subsample.n_rows()}});
        run_stage("undersample", [&] {
            const std::string path = artifacts.path("subsample.csv");
            write_csv(subsample, path, config.label_column);
            artifacts.record(path);
            return 0;
        });

        // scale
        const Dataset scaled = run_stage("scale", [&] {
            const ScalerParams params = fit_scaler(subsample, config.scaler);
            for (const auto& name : params.degenerate_features()) {
                result.warnings.push_back("scale: feature '" + name +
                                          "' is degenerate under " +
                                          scaler_method_name(config.scaler) +
                                          "; scaled values set to 0");
            }
            return apply_scaler(subsample, params);
        });
        stages.push_back({{"name", "scale"}, {"rows", scaled.n_rows()}});

        // correlate
        const CorrelationMatrix correlation = run_stage("correlate", [&] {
            return correlation_matrix(scaled, config.label_column);
        });
        stages.push_back({{"name", "correlate"}, {"rows", scaled.n_rows()}});
        run_stage("correlate", [&] {
            const std::string path = artifacts.path("correlation.csv");
            write_correlation_csv(correlation, path);
            artifacts.record(path);
            return 0;
        });

        // outlier filter
        Dataset filtered = scaled;
        if (config.outlier_enabled) {
            const std::size_t k = std::min(config.outlier_top_k, scaled.n_features());
            if (k < config.outlier_top_k) {
                result.warnings.push_back("outlier: top_k reduced to " + std::to_string(k) +
                                          " (dataset has only " + std::to_string(k) +
                                          " features)");
            }
            const OutlierReport report = run_stage("outlier", [&] {
                const auto features = top_correlated_features(correlation, k);
                return remove_extreme_outliers(scaled, features, config.outlier_iqr_multiplier);
            });
            filtered = report.filtered;
            json flagged = json::object();
            for (const auto& [name, count] : report.flagged_per_feature) flagged[name] = count;
            stages.push_back({{"name", "outlier"},
                              {"enabled", true},
                              {"rows", filtered.n_rows()},
                              {"rows_removed", report.rows_removed},
                              {"flagged_per_feature", std::move(flagged)}});
        } else {
            stages.push_back({{"name", "outlier"}, {"enabled", false}, {"rows", filtered.n_rows()}});
        }

        // split
        const SplitResult split = run_stage("split", [&] {
            return stratified_split(filtered, config.test_fraction,
                                    config.seed + seed_offset::kSplit);
        });
        stages.push_back({{"name", "split"},
                          {"rows", filtered.n_rows()},
                          {"train_rows", split.train.n_rows()},
                          {"test_rows", split.test.n_rows()}});

        // train + evaluate, fixed model order
        std::vector<int> test_labels = split.test.labels();
        for (std::size_t m = 0; m < std::size(kAllModelKinds); ++m) {
            const ModelKind kind = kAllModelKinds[m];
            if (std::find(config.models.begin(), config.models.end(), kind) ==
                config.models.end()) {
                continue;
            }
            const std::string name = model_kind_name(kind);
            const std::uint64_t seed = config.seed + seed_offset::kTrainBase + m;

            const TrainedModel model = run_stage("train", [&] {
                switch (kind) {
                    case ModelKind::LogReg:
                        return train_logreg(split.train, config.hyperparams.logreg, seed);
                    case ModelKind::Knn:
                        return train_knn(split.train, config.hyperparams.knn);
                    case ModelKind::Tree:
                        return train_tree(split.train, config.hyperparams.tree, seed);
                    case ModelKind::LinearSvm:
                        return train_svm(split.train, config.hyperparams.svm, seed);
                }
                throw TrainingError("unknown model kind");
            });

            run_stage("train", [&] {
                const std::string path = artifacts.path(name + "_model.json");
                save_model(model, path);
                artifacts.record(path);
                return 0;
            });

            const EvalReport report = run_stage("evaluate", [&] {
                std::vector<double> scores(split.test.n_rows());
                for (std::size_t i = 0; i < split.test.n_rows(); ++i) {
                    scores[i] = score(model, split.test.row(i));
                }
                return make_eval_report(name, test_labels, scores, default_threshold(model));
            });
            run_stage("evaluate", [&] {
                const std::string path = artifacts.path(name + "_roc.csv");
                write_roc_csv(report.roc, path);
                artifacts.record(path);
                return 0;
            });
            result.reports.push_back(report);
        }

        // report files
        run_stage("report", [&] {
            for (const ReportFormat format : config.report_formats) {
                const std::string path = artifacts.path("report." + report_format_name(format));
                write_file_bytes(path, render_report(result.reports, format));
                artifacts.record(path);
            }
            return 0;
        });

        // manifest
        run_stage("report", [&] {
            json manifest;
            manifest["format_version"] = kManifestFormatVersion;
            manifest["config"] = config_to_json(config);
            manifest["config_hash"] = config_hash(config);
            manifest["seed"] = config.seed;
            manifest["input_hash"] = input_hash;
            manifest["stages"] = stages;
            json reports = json::array();
            for (const auto& r : result.reports) reports.push_back(report_entry(r));
            manifest["reports"] = std::move(reports);
            manifest["warnings"] = result.warnings;

            result.manifest_json = manifest.dump(2) + "\n";
            const std::string path = artifacts.path("manifest.json");
            write_file_bytes(path, result.manifest_json);
            artifacts.record(path);
            return 0;
        });
    } catch (...) {
        artifacts.remove_all();
        throw;
    }

    result.written_files = artifacts.written();
    return result;
}

std::string inspect_csv(const std::string& path, const std::string& label_column) {
    return inspect_dataset(load_csv(path, label_column), "csv '" + path + "'");
}

std::string inspect_input(const PipelineConfig& config) {
    config.validate();
    if (config.input == InputKind::Csv) {
        return inspect_csv(config.csv_path, config.label_column);
    }
    const Dataset data = generate_synthetic(config.synthetic, config.seed + seed_offset::kGenerate);
    return inspect_dataset(data, "synthetic (seed " +
                                     std::to_string(config.seed + seed_offset::kGenerate) + ")");
}

std::string render_report_from_manifest(const std::string& manifest_path, ReportFormat format) {
    json manifest;
    try {
        manifest = json::parse(read_file_bytes(manifest_path));
    } catch (const json::parse_error& e) {
        throw DataError("manifest '" + manifest_path + "' is malformed: " + e.what());
    }
    try {
        if (manifest.at("format_version").get<int>() != kManifestFormatVersion) {
            throw DataError("unsupported manifest format version");
        }
        std::vector<EvalReport> reports;
        for (const auto& r : manifest.at("reports")) {
            EvalReport report;
            report.model_name = r.at("model").get<std::string>();
            report.confusion.tp = r.at("confusion").at("tp").get<std::size_t>();
            report.confusion.fp = r.at("confusion").at("fp").get<std::size_t>();
            report.confusion.fn = r.at("confusion").at("fn").get<std::size_t>();
            report.confusion.tn = r.at("confusion").at("tn").get<std::size_t>();
            report.prf.precision = r.at("precision").get<double>();
            report.prf.recall = r.at("recall").get<double>();
            report.prf.f1 = r.at("f1").get<double>();
            report.prf.precision_degenerate = r.at("precision_degenerate").get<bool>();
            report.prf.recall_degenerate = r.at("recall_degenerate").get<bool>();
            report.prf.f1_degenerate = r.at("f1_degenerate").get<bool>();
            report.roc.auc = r.at("auc").get<double>();
            report.threshold = r.at("threshold").get<double>();
            reports.push_back(std::move(report));
        }
        return render_report(reports, format);
    } catch (const json::exception& e) {
        throw DataError("manifest '" + manifest_path + "' is missing required fields: " + e.what());
    }
}

}  // namespace fraudkit
