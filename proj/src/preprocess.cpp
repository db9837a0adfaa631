#include "fraudkit/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "fraudkit/error.hpp"
#include "fraudkit/rng.hpp"

namespace fraudkit {

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, result.ptr);
}

// Quantile of a sorted vector, linear interpolation between order statistics.
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::string scaler_method_name(ScalerMethod method) {
    switch (method) {
        case ScalerMethod::MinMax: return "minmax";
        case ScalerMethod::MeanNorm: return "meannorm";
        case ScalerMethod::Standardize: return "standardize";
    }
    return "standardize";
}

ScalerMethod scaler_method_from_name(const std::string& name) {
    if (name == "minmax") return ScalerMethod::MinMax;
    if (name == "meannorm") return ScalerMethod::MeanNorm;
    if (name == "standardize") return ScalerMethod::Standardize;
    throw ConfigError("unknown scaler method '" + name +
                      "' (expected minmax, meannorm, or standardize)");
}

bool ScalerParams::is_degenerate(std::size_t feature) const {
    if (method == ScalerMethod::Standardize) return stddev[feature] == 0.0;
    return max[feature] == min[feature];
}

std::vector<std::string> ScalerParams::degenerate_features() const {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < feature_names.size(); ++j) {
        if (is_degenerate(j)) names.push_back(feature_names[j]);
    }
    return names;
}

ScalerParams fit_scaler(const Dataset& data, ScalerMethod method) {
    const std::size_t n = data.n_rows();
    const std::size_t d = data.n_features();
    if (n < 2) {
        throw DataError("fitting a scaler needs at least 2 rows, got " + std::to_string(n));
    }

    ScalerParams params;
    params.method = method;
    params.feature_names = data.feature_names();
    params.min.resize(d);
    params.max.resize(d);
    params.mean.resize(d);
    params.stddev.resize(d);

    for (std::size_t j = 0; j < d; ++j) {
        double lo = data.value(0, j);
        double hi = lo;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = data.value(i, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        const double mean = sum / static_cast<double>(n);
        double sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dev = data.value(i, j) - mean;
            sq += dev * dev;
        }
        params.min[j] = lo;
        params.max[j] = hi;
        params.mean[j] = mean;
        params.stddev[j] = std::sqrt(sq / static_cast<double>(n));
    }
    return params;
}

Dataset apply_scaler(const Dataset& data, const ScalerParams& params) {
    if (data.feature_names() != params.feature_names) {
        throw DataError("scaler was fitted on different feature columns");
    }
    const std::size_t n = data.n_rows();
    const std::size_t d = data.n_features();
    std::vector<double> values(n * d);
    for (std::size_t j = 0; j < d; ++j) {
        if (params.is_degenerate(j)) {
            for (std::size_t i = 0; i < n; ++i) values[i * d + j] = 0.0;
            continue;
        }
        double shift = 0.0;
        double scale = 1.0;
        switch (params.method) {
            case ScalerMethod::MinMax:
                shift = params.min[j];
                scale = params.max[j] - params.min[j];
                break;
            case ScalerMethod::MeanNorm:
                shift = params.mean[j];
                scale = params.max[j] - params.min[j];
                break;
            case ScalerMethod::Standardize:
                shift = params.mean[j];
                scale = params.stddev[j];
                break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            values[i * d + j] = (data.value(i, j) - shift) / scale;
        }
    }
    return Dataset(data.feature_names(), std::move(values), data.labels());
}

CorrelationMatrix::CorrelationMatrix(std::vector<std::string> axis_names,
                                     std::vector<double> values, std::vector<bool> defined)
    : axis_names_(std::move(axis_names)),
      values_(std::move(values)),
      defined_(std::move(defined)) {}

CorrelationMatrix correlation_matrix(const Dataset& data, const std::string& label_name) {
    const std::size_t n = data.n_rows();
    const std::size_t d = data.n_features();
    if (n < 2) {
        throw DataError("correlation needs at least 2 rows, got " + std::to_string(n));
    }
    const std::size_t k = d + 1;  // features + label

    // Centered columns; the label enters as a numeric 0/1 column.
    std::vector<std::vector<double>> centered(k, std::vector<double>(n));
    std::vector<double> norm(k);
    for (std::size_t c = 0; c < k; ++c) {
        auto& col = centered[c];
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = c < d ? data.value(i, c) : static_cast<double>(data.label(i));
            sum += col[i];
        }
        const double mean = sum / static_cast<double>(n);
        double sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            col[i] -= mean;
            sq += col[i] * col[i];
        }
        norm[c] = std::sqrt(sq);
    }

    std::vector<double> values(k * k, 0.0);
    std::vector<bool> defined(k * k, false);
    for (std::size_t a = 0; a < k; ++a) {
        values[a * k + a] = 1.0;
        defined[a * k + a] = true;
        for (std::size_t b = a + 1; b < k; ++b) {
            if (norm[a] == 0.0 || norm[b] == 0.0) continue;  // zero variance: undefined
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += centered[a][i] * centered[b][i];
            const double r = std::clamp(dot / (norm[a] * norm[b]), -1.0, 1.0);
            values[a * k + b] = r;
            values[b * k + a] = r;
            defined[a * k + b] = true;
            defined[b * k + a] = true;
        }
    }

    std::vector<std::string> axis_names = data.feature_names();
    axis_names.push_back(label_name);
    return CorrelationMatrix(std::move(axis_names), std::move(values), std::move(defined));
}

void write_correlation_csv(const CorrelationMatrix& matrix, const std::string& path) {
    std::string out;
    for (const auto& name : matrix.axis_names()) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        out += matrix.axis_names()[i];
        for (std::size_t j = 0; j < matrix.size(); ++j) {
            out += ',';
            if (matrix.defined(i, j)) append_double(out, matrix.value(i, j));
        }
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

Dataset random_undersample(const Dataset& data, double majority_per_minority,
                           std::uint64_t seed) {
    if (!(majority_per_minority > 0.0) || !std::isfinite(majority_per_minority)) {
        throw DataError("undersample ratio must be a positive real");
    }
    std::vector<std::size_t> pos_rows;
    std::vector<std::size_t> neg_rows;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        (data.label(i) == 1 ? pos_rows : neg_rows).push_back(i);
    }
    if (pos_rows.empty() || neg_rows.empty()) {
        throw DataError("undersampling needs both classes present");
    }

    auto& minority = pos_rows.size() <= neg_rows.size() ? pos_rows : neg_rows;
    auto& majority = pos_rows.size() <= neg_rows.size() ? neg_rows : pos_rows;
    const std::size_t target = static_cast<std::size_t>(
        std::llround(majority_per_minority * static_cast<double>(minority.size())));
    if (target > majority.size()) {
        throw DataError("undersample ratio " + std::to_string(majority_per_minority) +
                        " needs " + std::to_string(target) + " majority rows, only " +
                        std::to_string(majority.size()) + " available");
    }
    if (target == 0) {
        throw DataError("undersample ratio " + std::to_string(majority_per_minority) +
                        " would drop the majority class entirely");
    }

    Rng rng(seed);
    rng.shuffle(majority);
    std::vector<std::size_t> kept(minority);
    kept.insert(kept.end(), majority.begin(), majority.begin() + static_cast<std::ptrdiff_t>(target));
    rng.shuffle(kept);
    return data.select_rows(kept);
}

std::vector<std::string> top_correlated_features(const CorrelationMatrix& matrix, std::size_t k) {
    const std::size_t d = matrix.size() - 1;  // last axis is the label
    if (k > d) {
        throw DataError("requested top " + std::to_string(k) + " features, only " +
                        std::to_string(d) + " available");
    }
    struct Entry {
        double strength;
        std::string name;
    };
    std::vector<Entry> entries;
    entries.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double strength =
            matrix.defined(j, d) ? std::abs(matrix.value(j, d)) : -1.0;
        entries.push_back({strength, matrix.axis_names()[j]});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.strength != b.strength) return a.strength > b.strength;
        return a.name < b.name;
    });
    std::vector<std::string> names;
    names.reserve(k);
    for (std::size_t j = 0; j < k; ++j) names.push_back(entries[j].name);
    return names;
}

OutlierReport remove_extreme_outliers(const Dataset& data, const std::vector<std::string>& features,
                                      double iqr_multiplier) {
    if (!(iqr_multiplier > 0.0)) {
        throw DataError("IQR multiplier must be positive");
    }
    const std::size_t n = data.n_rows();
    if (n < 4) {
        throw DataError("outlier removal needs at least 4 rows, got " + std::to_string(n));
    }

    std::vector<std::string> unique_features;
    for (const auto& f : features) {
        if (std::find(unique_features.begin(), unique_features.end(), f) == unique_features.end()) {
            unique_features.push_back(f);
        }
    }

    OutlierReport report;
    std::vector<bool> drop(n, false);
    for (const auto& name : unique_features) {
        const std::size_t col = data.feature_index(name);
        std::vector<double> sorted(n);
        for (std::size_t i = 0; i < n; ++i) sorted[i] = data.value(i, col);
        std::sort(sorted.begin(), sorted.end());
        const double q1 = quantile_sorted(sorted, 0.25);
        const double q3 = quantile_sorted(sorted, 0.75);
        const double iqr = q3 - q1;
        const double lo = q1 - iqr_multiplier * iqr;
        const double hi = q3 + iqr_multiplier * iqr;

        std::size_t flagged = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = data.value(i, col);
            if (v < lo || v > hi) {
                drop[i] = true;
                ++flagged;
            }
        }
        report.flagged_per_feature.emplace_back(name, flagged);
    }

    std::vector<std::size_t> kept;
    kept.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!drop[i]) kept.push_back(i);
    }
    report.rows_removed = n - kept.size();
    report.filtered = data.select_rows(kept);
    return report;
}

}  // namespace fraudkit
