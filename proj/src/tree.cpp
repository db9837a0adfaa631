#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "fraudkit/error.hpp"
#include "fraudkit/models.hpp"

namespace fraudkit {

namespace {

double gini(std::size_t positives, std::size_t total) {
    const double p = static_cast<double>(positives) / static_cast<double>(total);
    return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double weighted_gini = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const Dataset& data, const TreeParams& params)
        : data_(data), params_(params) {}

    std::vector<TreeNode> build() {
        std::vector<std::size_t> rows(data_.n_rows());
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        grow(std::move(rows), 0);
        return std::move(nodes_);
    }

private:
    std::int32_t make_leaf(std::size_t positives, std::size_t total) {
        TreeNode node;
        node.leaf = true;
        node.positive_fraction = static_cast<double>(positives) / static_cast<double>(total);
        nodes_.push_back(node);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }

    std::int32_t grow(std::vector<std::size_t> rows, std::size_t depth) {
        const std::size_t n = rows.size();
        std::size_t positives = 0;
        for (const std::size_t i : rows) positives += static_cast<std::size_t>(data_.label(i));

        const bool pure = positives == 0 || positives == n;
        if (pure || depth >= params_.max_depth || n < 2 * params_.min_samples_leaf) {
            return make_leaf(positives, n);
        }

        const SplitChoice split = best_split(rows, positives);
        if (!split.found) {
            return make_leaf(positives, n);
        }

        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        for (const std::size_t i : rows) {
            (data_.value(i, split.feature) <= split.threshold ? left_rows : right_rows).push_back(i);
        }
        rows.clear();
        rows.shrink_to_fit();

        const std::int32_t self = static_cast<std::int32_t>(nodes_.size());
        TreeNode node;
        node.leaf = false;
        node.feature = split.feature;
        node.threshold = split.threshold;
        nodes_.push_back(node);

        const std::int32_t left = grow(std::move(left_rows), depth + 1);
        const std::int32_t right = grow(std::move(right_rows), depth + 1);
        nodes_[self].left = left;
        nodes_[self].right = right;
        return self;
    }

    // Exhaustive scan over (feature, midpoint threshold) pairs minimizing the
    // weighted Gini of the children. An impure node accepts the best valid
    // split even at zero impurity decrease; scanning features ascending and
    // thresholds ascending makes tie-breaking deterministic (lowest feature,
    // then lowest threshold wins).
    SplitChoice best_split(const std::vector<std::size_t>& rows, std::size_t positives) {
        const std::size_t n = rows.size();
        const std::size_t d = data_.n_features();
        const double parent = gini(positives, n);

        SplitChoice best;
        std::vector<std::pair<double, int>> column(n);  // (value, label)
        for (std::size_t f = 0; f < d; ++f) {
            for (std::size_t i = 0; i < n; ++i) {
                column[i] = {data_.value(rows[i], f), data_.label(rows[i])};
            }
            std::sort(column.begin(), column.end());

            std::size_t left_n = 0;
            std::size_t left_pos = 0;
            for (std::size_t s = 0; s + 1 < n; ++s) {
                ++left_n;
                left_pos += static_cast<std::size_t>(column[s].second);
                if (column[s].first == column[s + 1].first) continue;
                const std::size_t right_n = n - left_n;
                if (left_n < params_.min_samples_leaf || right_n < params_.min_samples_leaf) {
                    continue;
                }
                const std::size_t right_pos = positives - left_pos;
                const double weighted =
                    (static_cast<double>(left_n) * gini(left_pos, left_n) +
                     static_cast<double>(right_n) * gini(right_pos, right_n)) /
                    static_cast<double>(n);
                if (weighted > parent + 1e-12) continue;  // never happens in exact arithmetic
                if (!best.found || weighted < best.weighted_gini) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = column[s].first + 0.5 * (column[s + 1].first - column[s].first);
                    best.weighted_gini = weighted;
                }
            }
        }
        return best;
    }

    const Dataset& data_;
    const TreeParams& params_;
    std::vector<TreeNode> nodes_;
};

}  // namespace

TrainedModel train_tree(const Dataset& train, const TreeParams& params, std::uint64_t seed) {
    params.validate();
    if (train.n_rows() == 0) {
        throw TrainingError("tree: training data is empty");
    }
    TreeModel model;
    model.params = params;
    model.nodes = TreeBuilder(train, params).build();
    return TrainedModel{ModelKind::Tree, train.n_features(), seed, std::move(model)};
}

}  // namespace fraudkit
