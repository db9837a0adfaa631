#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

enum class ScalerMethod { MinMax, MeanNorm, Standardize };

std::string scaler_method_name(ScalerMethod method);
ScalerMethod scaler_method_from_name(const std::string& name);  // throws ConfigError

// Per-feature statistics captured at fit time. stddev is the population form
// (divide by n). A feature is degenerate when the divisor of the configured
// method vanishes: max == min for MinMax/MeanNorm, stddev == 0 for Standardize.
struct ScalerParams {
    ScalerMethod method = ScalerMethod::Standardize;
    std::vector<std::string> feature_names;
    std::vector<double> min;
    std::vector<double> max;
    std::vector<double> mean;
    std::vector<double> stddev;

    bool is_degenerate(std::size_t feature) const;
    std::vector<std::string> degenerate_features() const;
};

ScalerParams fit_scaler(const Dataset& data, ScalerMethod method);

// Applies the fitted transform. Degenerate features map to 0.0; callers can
// surface ScalerParams::degenerate_features() as a warning.
Dataset apply_scaler(const Dataset& data, const ScalerParams& params);

// Pearson coefficients over all feature columns plus the 0/1 label column
// (last axis). Pairs involving a zero-variance column are marked undefined
// instead of propagating NaN.
class CorrelationMatrix {
public:
    CorrelationMatrix(std::vector<std::string> axis_names, std::vector<double> values,
                      std::vector<bool> defined);

    std::size_t size() const { return axis_names_.size(); }
    const std::vector<std::string>& axis_names() const { return axis_names_; }
    double value(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
    bool defined(std::size_t i, std::size_t j) const { return defined_[i * size() + j]; }

private:
    std::vector<std::string> axis_names_;
    std::vector<double> values_;
    std::vector<bool> defined_;
};

CorrelationMatrix correlation_matrix(const Dataset& data, const std::string& label_name = "class");

// Axis names in the header and first column; undefined entries as empty cells.
void write_correlation_csv(const CorrelationMatrix& matrix, const std::string& path);

// Keeps every minority row and a uniform no-replacement sample of the majority
// sized round(majority_per_minority * minority_count). Output row order is
// shuffled deterministically.
Dataset random_undersample(const Dataset& data, double majority_per_minority, std::uint64_t seed);

// The k features with the largest |r| against the label, descending; ties are
// broken by feature-name order. Undefined correlations rank below all defined.
std::vector<std::string> top_correlated_features(const CorrelationMatrix& matrix, std::size_t k);

struct OutlierReport {
    Dataset filtered;
    // (feature, rows whose value fell outside that feature's fence); a row
    // flagged by several features is counted under each.
    std::vector<std::pair<std::string, std::size_t>> flagged_per_feature;
    std::size_t rows_removed = 0;
};

// Single-pass Tukey fences: per listed feature the bounds
// [Q1 - mult*IQR, Q3 + mult*IQR] are computed once over the input (quartiles
// by linear interpolation) and every row outside any fence is dropped.
// Boundary values stay.
OutlierReport remove_extreme_outliers(const Dataset& data, const std::vector<std::string>& features,
                                      double iqr_multiplier);

}  // namespace fraudkit
