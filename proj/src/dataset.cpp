#include "fraudkit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <system_error>

#include "fraudkit/error.hpp"
#include "fraudkit/rng.hpp"

namespace fraudkit {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

bool parse_finite_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    // from_chars accepts "nan"/"inf" spellings; those fail the finite check below.
    const auto result = std::from_chars(begin, end, out);
    if (result.ec != std::errc() || result.ptr != end) return false;
    return std::isfinite(out);
}

// Shortest decimal form that parses back to the identical double.
void append_double(std::string& out, double v) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, result.ptr);
}

}  // namespace

Dataset::Dataset(std::vector<std::string> feature_names, std::vector<double> values,
                 std::vector<int> labels)
    : feature_names_(std::move(feature_names)),
      values_(std::move(values)),
      labels_(std::move(labels)) {
    const std::size_t d = feature_names_.size();
    if (d == 0 && !labels_.empty()) {
        throw DataError("dataset has rows but no feature columns");
    }
    if (d != 0 && values_.size() != labels_.size() * d) {
        throw DataError("dataset shape mismatch: " + std::to_string(values_.size()) +
                        " values for " + std::to_string(labels_.size()) + " rows of " +
                        std::to_string(d) + " features");
    }
    for (const int label : labels_) {
        if (label != 0 && label != 1) {
            throw DataError("label must be 0 or 1, got " + std::to_string(label));
        }
    }
    for (const double v : values_) {
        if (!std::isfinite(v)) {
            throw DataError("dataset contains a non-finite feature value");
        }
    }
}

std::size_t Dataset::feature_index(const std::string& name) const {
    const auto it = std::find(feature_names_.begin(), feature_names_.end(), name);
    if (it == feature_names_.end()) {
        throw DataError("unknown feature '" + name + "'");
    }
    return static_cast<std::size_t>(it - feature_names_.begin());
}

Dataset Dataset::select_rows(std::span<const std::size_t> indices) const {
    const std::size_t d = n_features();
    std::vector<double> values;
    values.reserve(indices.size() * d);
    std::vector<int> labels;
    labels.reserve(indices.size());
    for (const std::size_t i : indices) {
        const auto r = row(i);
        values.insert(values.end(), r.begin(), r.end());
        labels.push_back(labels_[i]);
    }
    return Dataset(feature_names_, std::move(values), std::move(labels));
}

ClassCounts class_counts(const Dataset& data) {
    ClassCounts counts;
    for (const int label : data.labels()) {
        if (label == 1) {
            ++counts.positives;
        } else {
            ++counts.negatives;
        }
    }
    return counts;
}

void SyntheticSpec::validate() const {
    if (n_total < 10) {
        throw ConfigError("synthetic spec: n_total must be at least 10");
    }
    if (!(positive_fraction > 0.0 && positive_fraction < 1.0)) {
        throw ConfigError("synthetic spec: positive_fraction must lie in (0, 1)");
    }
    if (static_cast<double>(n_total) * positive_fraction < 1.0) {
        throw ConfigError("synthetic spec: expected positive count below 1");
    }
    if (n_features == 0) {
        throw ConfigError("synthetic spec: feature count must be positive");
    }
    if (!(class_mean_separation >= 0.0) || !std::isfinite(class_mean_separation)) {
        throw ConfigError("synthetic spec: class_mean_separation must be nonnegative");
    }
    if (!(noise_stddev > 0.0) || !std::isfinite(noise_stddev)) {
        throw ConfigError("synthetic spec: noise_stddev must be positive");
    }
}

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t d = spec.n_features;
    const std::size_t n = spec.n_total;
    const std::size_t n_pos = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * spec.positive_fraction));

    // Separation is spread evenly over all coordinates so every feature
    // carries signal; the Euclidean distance between the class means is
    // exactly class_mean_separation.
    const double half_shift = 0.5 * spec.class_mean_separation / std::sqrt(static_cast<double>(d));

    Rng rng(seed);
    std::vector<double> values(n * d);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool positive = i < n_pos;
        const double mean = positive ? half_shift : -half_shift;
        labels[i] = positive ? 1 : 0;
        for (std::size_t j = 0; j < d; ++j) {
            values[i * d + j] = rng.gaussian(mean, spec.noise_stddev);
        }
    }

    // Deterministic row shuffle so the file is not sorted by class.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);

    std::vector<double> shuffled_values(n * d);
    std::vector<int> shuffled_labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = order[i];
        std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(src * d), d,
                    shuffled_values.begin() + static_cast<std::ptrdiff_t>(i * d));
        shuffled_labels[i] = labels[src];
    }

    std::vector<std::string> names(d);
    for (std::size_t j = 0; j < d; ++j) {
        names[j] = "V" + std::to_string(j + 1);
    }
    return Dataset(std::move(names), std::move(shuffled_values), std::move(shuffled_labels));
}

Dataset load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open '" + path + "' for reading");
    }

    std::string line;
    if (!std::getline(file, line)) {
        throw DataError("'" + path + "': empty file, expected a header row");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> headers = split_fields(line);
    {
        std::set<std::string> seen;
        for (const auto& h : headers) {
            if (h.empty()) {
                throw DataError("'" + path + "': empty column name in header");
            }
            if (!seen.insert(h).second) {
                throw DataError("'" + path + "': duplicate header '" + h + "'");
            }
        }
    }

    std::size_t label_col = headers.size();
    std::vector<std::string> feature_names;
    for (std::size_t c = 0; c < headers.size(); ++c) {
        if (headers[c] == label_column) {
            label_col = c;
        } else {
            feature_names.push_back(headers[c]);
        }
    }
    if (label_col == headers.size()) {
        throw DataError("'" + path + "': label column '" + label_column + "' not found in header");
    }
    if (feature_names.empty()) {
        throw DataError("'" + path + "': no feature columns besides the label");
    }

    std::vector<double> values;
    std::vector<int> labels;
    std::size_t line_no = 1;  // header is line 1
    while (std::getline(file, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != headers.size()) {
            throw DataError("'" + path + "' line " + std::to_string(line_no) + ": expected " +
                            std::to_string(headers.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            double v = 0.0;
            if (!parse_finite_double(fields[c], v)) {
                throw DataError("'" + path + "' line " + std::to_string(line_no) + ", column '" +
                                headers[c] + "': cell '" + fields[c] +
                                "' is not a finite number");
            }
            if (c == label_col) {
                if (v != 0.0 && v != 1.0) {
                    throw DataError("'" + path + "' line " + std::to_string(line_no) +
                                    ", column '" + headers[c] + "': label '" + fields[c] +
                                    "' is not 0 or 1");
                }
                labels.push_back(v == 1.0 ? 1 : 0);
            } else {
                values.push_back(v);
            }
        }
    }
    if (labels.empty()) {
        throw DataError("'" + path + "': no data rows");
    }
    return Dataset(std::move(feature_names), std::move(values), std::move(labels));
}

void write_csv(const Dataset& data, const std::string& path, const std::string& label_column) {
    std::string out;
    for (const auto& name : data.feature_names()) {
        out += name;
        out += ',';
    }
    out += label_column;
    out += '\n';

    const std::size_t d = data.n_features();
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            append_double(out, data.value(i, j));
            out += ',';
        }
        out += data.label(i) == 1 ? '1' : '0';
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

SplitResult stratified_split(const Dataset& data, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw DataError("test_fraction must lie in (0, 1)");
    }
    std::vector<std::size_t> pos_rows;
    std::vector<std::size_t> neg_rows;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        (data.label(i) == 1 ? pos_rows : neg_rows).push_back(i);
    }
    if (pos_rows.size() < 2 || neg_rows.size() < 2) {
        throw DataError("stratified split needs at least 2 rows of each class");
    }

    Rng rng(seed);
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (auto* class_rows : {&neg_rows, &pos_rows}) {
        const std::size_t count = class_rows->size();
        const std::size_t n_test = static_cast<std::size_t>(
            std::llround(static_cast<double>(count) * test_fraction));
        if (n_test == 0) {
            throw DataError("test_fraction " + std::to_string(test_fraction) +
                            " leaves a class with 0 test rows");
        }
        if (n_test == count) {
            throw DataError("test_fraction " + std::to_string(test_fraction) +
                            " leaves a class with 0 train rows");
        }
        rng.shuffle(*class_rows);
        test_rows.insert(test_rows.end(), class_rows->begin(),
                         class_rows->begin() + static_cast<std::ptrdiff_t>(n_test));
        train_rows.insert(train_rows.end(),
                          class_rows->begin() + static_cast<std::ptrdiff_t>(n_test),
                          class_rows->end());
    }
    // Restore original row order inside each side.
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return SplitResult{data.select_rows(train_rows), data.select_rows(test_rows)};
}

}  // namespace fraudkit
