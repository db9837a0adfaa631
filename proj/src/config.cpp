#include "fraudkit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fraudkit/error.hpp"

namespace fraudkit {

namespace {

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const char* end = value.data() + value.size();
    const auto result = std::from_chars(value.data(), end, v);
    if (result.ec != std::errc() || result.ptr != end || !std::isfinite(v)) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not a finite number");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const char* end = value.data() + value.size();
    const auto result = std::from_chars(value.data(), end, v);
    if (result.ec != std::errc() || result.ptr != end) {
        throw ConfigError("config key '" + key + "': '" + value +
                          "' is not an unsigned integer");
    }
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
    return static_cast<std::size_t>(parse_u64(key, value));
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "on" || value == "1") return true;
    if (value == "false" || value == "off" || value == "0") return false;
    throw ConfigError("config key '" + key + "': '" + value + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

void append_double_text(std::string& out, double v) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, result.ptr);
}

}  // namespace

void PipelineConfig::validate() const {
    if (input == InputKind::Csv && csv_path.empty()) {
        throw ConfigError("input = csv requires csv_path");
    }
    if (input == InputKind::Synthetic) {
        synthetic.validate();
    }
    if (label_column.empty()) {
        throw ConfigError("label_column must not be empty");
    }
    if (!(undersample_ratio > 0.0) || !std::isfinite(undersample_ratio)) {
        throw ConfigError("undersample_ratio must be a positive real");
    }
    if (outlier_enabled) {
        if (outlier_top_k < 1) {
            throw ConfigError("outlier_top_k must be at least 1");
        }
        if (!(outlier_iqr_multiplier > 0.0) || !std::isfinite(outlier_iqr_multiplier)) {
            throw ConfigError("outlier_iqr_multiplier must be positive");
        }
    }
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError("test_fraction must lie in (0, 1)");
    }
    if (models.empty()) {
        throw ConfigError("at least one model must be enabled");
    }
    {
        std::set<ModelKind> seen;
        for (const ModelKind kind : models) {
            if (!seen.insert(kind).second) {
                throw ConfigError("model '" + model_kind_name(kind) + "' listed twice");
            }
        }
    }
    if (report_formats.empty()) {
        throw ConfigError("at least one report format must be enabled");
    }
    {
        std::set<ReportFormat> seen;
        for (const ReportFormat f : report_formats) {
            if (!seen.insert(f).second) {
                throw ConfigError("report format '" + report_format_name(f) + "' listed twice");
            }
        }
    }
    if (out_dir.empty()) {
        throw ConfigError("out_dir must not be empty");
    }
    hyperparams.logreg.validate();
    hyperparams.knn.validate();
    hyperparams.tree.validate();
    hyperparams.svm.validate();
}

PipelineConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> entries;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        if (!entries.emplace(key, value).second) {
            throw ConfigError("config key '" + key + "' appears more than once");
        }
    }

    PipelineConfig config;
    bool seed_seen = false;
    for (const auto& [key, value] : entries) {
        if (key == "input") {
            if (value == "csv") {
                config.input = InputKind::Csv;
            } else if (value == "synthetic") {
                config.input = InputKind::Synthetic;
            } else {
                throw ConfigError("config key 'input': expected csv or synthetic, got '" + value +
                                  "'");
            }
        } else if (key == "csv_path") {
            config.csv_path = value;
        } else if (key == "label_column") {
            config.label_column = value;
        } else if (key == "synthetic_n") {
            config.synthetic.n_total = parse_count(key, value);
        } else if (key == "synthetic_positive_fraction") {
            config.synthetic.positive_fraction = parse_double(key, value);
        } else if (key == "synthetic_features") {
            config.synthetic.n_features = parse_count(key, value);
        } else if (key == "synthetic_separation") {
            config.synthetic.class_mean_separation = parse_double(key, value);
        } else if (key == "synthetic_noise_stddev") {
            config.synthetic.noise_stddev = parse_double(key, value);
        } else if (key == "seed") {
            config.seed = parse_u64(key, value);
            seed_seen = true;
        } else if (key == "scaler") {
            config.scaler = scaler_method_from_name(value);
        } else if (key == "undersample_ratio") {
            config.undersample_ratio = parse_double(key, value);
        } else if (key == "outlier_enabled") {
            config.outlier_enabled = parse_bool(key, value);
        } else if (key == "outlier_top_k") {
            config.outlier_top_k = parse_count(key, value);
        } else if (key == "outlier_iqr_multiplier") {
            config.outlier_iqr_multiplier = parse_double(key, value);
        } else if (key == "test_fraction") {
            config.test_fraction = parse_double(key, value);
        } else if (key == "models") {
            config.models.clear();
            for (const auto& name : split_list(value)) {
                config.models.push_back(model_kind_from_name(name));
            }
        } else if (key == "logreg_learning_rate") {
            config.hyperparams.logreg.learning_rate = parse_double(key, value);
        } else if (key == "logreg_epochs") {
            config.hyperparams.logreg.epochs = parse_count(key, value);
        } else if (key == "logreg_l2") {
            config.hyperparams.logreg.l2 = parse_double(key, value);
        } else if (key == "knn_k") {
            config.hyperparams.knn.k = parse_count(key, value);
        } else if (key == "tree_max_depth") {
            config.hyperparams.tree.max_depth = parse_count(key, value);
        } else if (key == "tree_min_samples_leaf") {
            config.hyperparams.tree.min_samples_leaf = parse_count(key, value);
        } else if (key == "svm_c") {
            config.hyperparams.svm.c = parse_double(key, value);
        } else if (key == "svm_epochs") {
            config.hyperparams.svm.epochs = parse_count(key, value);
        } else if (key == "out_dir") {
            config.out_dir = value;
        } else if (key == "report_formats") {
            config.report_formats.clear();
            for (const auto& name : split_list(value)) {
                config.report_formats.push_back(report_format_from_name(name));
            }
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    if (!seed_seen) {
        throw ConfigError("config must set 'seed' explicitly");
    }
    config.validate();
    return config;
}

PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open config '" + path + "'");
    }
    std::string text((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

std::string canonical_config(const PipelineConfig& config) {
    std::map<std::string, std::string> kv;
    kv["input"] = config.input == InputKind::Csv ? "csv" : "synthetic";
    kv["csv_path"] = config.csv_path;
    kv["label_column"] = config.label_column;
    kv["synthetic_n"] = std::to_string(config.synthetic.n_total);
    {
        std::string v;
        append_double_text(v, config.synthetic.positive_fraction);
        kv["synthetic_positive_fraction"] = v;
    }
    kv["synthetic_features"] = std::to_string(config.synthetic.n_features);
    {
        std::string v;
        append_double_text(v, config.synthetic.class_mean_separation);
        kv["synthetic_separation"] = v;
    }
    {
        std::string v;
        append_double_text(v, config.synthetic.noise_stddev);
        kv["synthetic_noise_stddev"] = v;
    }
    kv["seed"] = std::to_string(config.seed);
    kv["scaler"] = scaler_method_name(config.scaler);
    {
        std::string v;
        append_double_text(v, config.undersample_ratio);
        kv["undersample_ratio"] = v;
    }
    kv["outlier_enabled"] = config.outlier_enabled ? "true" : "false";
    kv["outlier_top_k"] = std::to_string(config.outlier_top_k);
    {
        std::string v;
        append_double_text(v, config.outlier_iqr_multiplier);
        kv["outlier_iqr_multiplier"] = v;
    }
    {
        std::string v;
        append_double_text(v, config.test_fraction);
        kv["test_fraction"] = v;
    }
    {
        std::string v;
        for (const ModelKind kind : config.models) {
            if (!v.empty()) v += ',';
            v += model_kind_name(kind);
        }
        kv["models"] = v;
    }
    {
        std::string v;
        append_double_text(v, config.hyperparams.logreg.learning_rate);
        kv["logreg_learning_rate"] = v;
    }
    kv["logreg_epochs"] = std::to_string(config.hyperparams.logreg.epochs);
    {
        std::string v;
        append_double_text(v, config.hyperparams.logreg.l2);
        kv["logreg_l2"] = v;
    }
    kv["knn_k"] = std::to_string(config.hyperparams.knn.k);
    kv["tree_max_depth"] = std::to_string(config.hyperparams.tree.max_depth);
    kv["tree_min_samples_leaf"] = std::to_string(config.hyperparams.tree.min_samples_leaf);
    {
        std::string v;
        append_double_text(v, config.hyperparams.svm.c);
        kv["svm_c"] = v;
    }
    kv["svm_epochs"] = std::to_string(config.hyperparams.svm.epochs);
    {
        std::string v;
        for (const ReportFormat f : config.report_formats) {
            if (!v.empty()) v += ',';
            v += report_format_name(f);
        }
        kv["report_formats"] = v;
    }

    std::string out;
    for (const auto& [key, value] : kv) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string fnv1a64_hex(std::string_view bytes) {
    const std::uint64_t hash = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) {
        out[15 - i] = "0123456789abcdef"[(hash >> (4 * i)) & 0xF];
    }
    return out;
}

std::string config_hash(const PipelineConfig& config) {
    return fnv1a64_hex(canonical_config(config));
}

}  // namespace fraudkit
