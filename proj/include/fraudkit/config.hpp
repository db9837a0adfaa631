#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fraudkit/dataset.hpp"
#include "fraudkit/metrics.hpp"
#include "fraudkit/models.hpp"
#include "fraudkit/preprocess.hpp"

namespace fraudkit {

enum class InputKind { Csv, Synthetic };

// One deterministic run, fully parameterized. Parsed from a flat key = value
// file; the seed is mandatory so no run ever depends on the wall clock.
struct PipelineConfig {
    InputKind input = InputKind::Synthetic;
    std::string csv_path;
    std::string label_column = "class";
    SyntheticSpec synthetic;

    std::uint64_t seed = 0;

    ScalerMethod scaler = ScalerMethod::Standardize;
    double undersample_ratio = 1.0;

    bool outlier_enabled = true;
    std::size_t outlier_top_k = 3;
    double outlier_iqr_multiplier = 2.5;

    double test_fraction = 0.30;

    Hyperparams hyperparams;
    std::vector<ModelKind> models = {ModelKind::LogReg, ModelKind::Knn, ModelKind::Tree,
                                     ModelKind::LinearSvm};

    std::string out_dir = "out";
    std::vector<ReportFormat> report_formats = {ReportFormat::Table, ReportFormat::Json,
                                                ReportFormat::Csv};

    void validate() const;  // throws ConfigError
};

PipelineConfig parse_config_text(const std::string& text);
PipelineConfig parse_config_file(const std::string& path);

// Sorted key=value lines of the effective configuration. The output directory
// is excluded: it determines where artifacts land, not what they contain.
std::string canonical_config(const PipelineConfig& config);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// Hash of canonical_config(); identical for runs that must produce identical
// artifacts.
std::string config_hash(const PipelineConfig& config);

}  // namespace fraudkit
