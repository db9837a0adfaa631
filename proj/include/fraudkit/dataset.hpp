#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fraudkit {

// Immutable numeric table: n rows of d features plus a 0/1 label per row.
// All values are finite; invariants are enforced at construction. Safe to
// share across threads once built.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<std::string> feature_names, std::vector<double> values,
            std::vector<int> labels);

    std::size_t n_rows() const { return labels_.size(); }
    std::size_t n_features() const { return feature_names_.size(); }

    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * n_features(), n_features()};
    }
    double value(std::size_t row, std::size_t col) const {
        return values_[row * n_features() + col];
    }
    int label(std::size_t i) const { return labels_[i]; }

    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<int>& labels() const { return labels_; }

    // Index of a named feature; throws DataError if unknown.
    std::size_t feature_index(const std::string& name) const;

    // New Dataset holding the given rows in the given order.
    Dataset select_rows(std::span<const std::size_t> indices) const;

    bool operator==(const Dataset&) const = default;

private:
    std::vector<std::string> feature_names_;
    std::vector<double> values_;  // row-major, n_rows x n_features
    std::vector<int> labels_;
};

struct ClassCounts {
    std::size_t negatives = 0;
    std::size_t positives = 0;
};

ClassCounts class_counts(const Dataset& data);

// Parameters for the synthetic transaction generator: two isotropic gaussian
// clouds whose means sit class_mean_separation apart (Euclidean), one cloud
// per class, with an exact positive count of round(n_total * positive_fraction).
struct SyntheticSpec {
    std::size_t n_total = 20000;
    double positive_fraction = 0.00219;
    std::size_t n_features = 8;
    double class_mean_separation = 2.5;
    double noise_stddev = 1.0;

    void validate() const;  // throws ConfigError on violation
};

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// CSV dialect: comma separator, '.' decimal point, header row, no quoting.
// Values are written in shortest round-trip form, so load(write(x)) == x.
Dataset load_csv(const std::string& path, const std::string& label_column);
void write_csv(const Dataset& data, const std::string& path,
               const std::string& label_column = "class");

struct SplitResult {
    Dataset train;
    Dataset test;
};

// Per-class random split: each class contributes round(count * test_fraction)
// rows to the test side. Deterministic in the seed.
SplitResult stratified_split(const Dataset& data, double test_fraction, std::uint64_t seed);

}  // namespace fraudkit
