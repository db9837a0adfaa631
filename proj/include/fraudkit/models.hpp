#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

struct LogRegParams {
    double learning_rate = 0.1;
    std::size_t epochs = 500;
    double l2 = 1e-4;
    void validate() const;
};

struct KnnParams {
    std::size_t k = 5;
    void validate() const;
};

struct TreeParams {
    std::size_t max_depth = 6;
    std::size_t min_samples_leaf = 5;
    void validate() const;
};

struct SvmParams {
    double c = 1.0;
    std::size_t epochs = 200;
    void validate() const;
};

struct Hyperparams {
    LogRegParams logreg;
    KnnParams knn;
    TreeParams tree;
    SvmParams svm;
};

struct LogRegModel {
    LogRegParams params;
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<double> loss_history;  // entry 0 is the pre-training loss
};

struct KnnModel {
    KnnParams params;
    Dataset train;
};

struct TreeNode {
    bool leaf = true;
    std::size_t feature = 0;
    double threshold = 0.0;
    std::int32_t left = -1;   // index into TreeModel::nodes
    std::int32_t right = -1;
    double positive_fraction = 0.0;
};

struct TreeModel {
    TreeParams params;
    std::vector<TreeNode> nodes;  // node 0 is the root
};

struct SvmModel {
    SvmParams params;
    std::vector<double> weights;
    double bias = 0.0;
};

enum class ModelKind { LogReg, Knn, Tree, LinearSvm };

// Fixed evaluation and report order.
inline constexpr ModelKind kAllModelKinds[] = {ModelKind::LogReg, ModelKind::Knn,
                                               ModelKind::Tree, ModelKind::LinearSvm};

std::string model_kind_name(ModelKind kind);               // logreg | knn | tree | svm
ModelKind model_kind_from_name(const std::string& name);   // throws ConfigError

struct TrainedModel {
    ModelKind kind = ModelKind::LogReg;
    std::size_t n_features = 0;
    std::uint64_t seed = 0;
    std::variant<LogRegModel, KnnModel, TreeModel, SvmModel> impl;
};

// Full-batch gradient descent on mean binary cross-entropy with an L2 penalty
// on the weights; weights start at zero.
TrainedModel train_logreg(const Dataset& train, const LogRegParams& params, std::uint64_t seed);

// Lazy learner; stores the training set verbatim.
TrainedModel train_knn(const Dataset& train, const KnnParams& params);

// CART: greedy binary splits minimizing weighted Gini impurity. Thresholds sit
// at midpoints of consecutive sorted unique values; ties go to the lowest
// feature index, then the lowest threshold.
TrainedModel train_tree(const Dataset& train, const TreeParams& params, std::uint64_t seed);

// Primal linear SVM via Pegasos-style stochastic subgradient descent on hinge
// loss with L2 regularization (lambda = 1 / (c * n), step 1 / (lambda * t)).
TrainedModel train_svm(const Dataset& train, const SvmParams& params, std::uint64_t seed);

// LogReg: sigmoid(w.x + b); KNN: fraction of the k nearest labeled 1;
// Tree: leaf positive fraction; SVM: raw margin. Scores are rank-meaningful
// per model only.
double score(const TrainedModel& model, std::span<const double> row);

// 1 iff score >= threshold.
int predict(const TrainedModel& model, std::span<const double> row, double threshold);

// 0.5 for probability-like scores, 0.0 for the SVM margin.
double default_threshold(const TrainedModel& model);

// Training objective and its analytic gradient, exposed so tests can compare
// against finite differences.
double logreg_loss(const Dataset& data, std::span<const double> weights, double bias, double l2);
void logreg_gradient(const Dataset& data, std::span<const double> weights, double bias, double l2,
                     std::span<double> grad_weights, double& grad_bias);

// Versioned JSON document; scores after a round trip are bit-identical.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace fraudkit
