#include "fraudkit/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fraudkit/error.hpp"
#include "fraudkit/rng.hpp"

namespace fraudkit {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(z)) - y*z without overflow for large |z|.
double bce_term(double z, int y) {
    return std::max(z, 0.0) - static_cast<double>(y) * z + std::log1p(std::exp(-std::abs(z)));
}

double dot_row(std::span<const double> weights, std::span<const double> row) {
    double z = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * row[j];
    return z;
}

void require_both_classes(const Dataset& train, const char* model) {
    const auto counts = class_counts(train);
    if (train.n_rows() == 0 || counts.positives == 0 || counts.negatives == 0) {
        throw TrainingError(std::string(model) + ": training data must contain both classes");
    }
}

}  // namespace

void LogRegParams::validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("logreg learning rate must be positive");
    if (epochs < 1) throw ConfigError("logreg epochs must be at least 1");
    if (!(l2 >= 0.0)) throw ConfigError("logreg L2 strength must be nonnegative");
}

void KnnParams::validate() const {
    if (k < 1) throw ConfigError("knn k must be at least 1");
}

void TreeParams::validate() const {
    if (max_depth < 1) throw ConfigError("tree max depth must be at least 1");
    if (min_samples_leaf < 1) throw ConfigError("tree min samples per leaf must be at least 1");
}

void SvmParams::validate() const {
    if (!(c > 0.0)) throw ConfigError("svm C must be positive");
    if (epochs < 1) throw ConfigError("svm epochs must be at least 1");
}

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::LogReg: return "logreg";
        case ModelKind::Knn: return "knn";
        case ModelKind::Tree: return "tree";
        case ModelKind::LinearSvm: return "svm";
    }
    return "logreg";
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "logreg") return ModelKind::LogReg;
    if (name == "knn") return ModelKind::Knn;
    if (name == "tree") return ModelKind::Tree;
    if (name == "svm") return ModelKind::LinearSvm;
    throw ConfigError("unknown model '" + name + "' (expected logreg, knn, tree, or svm)");
}

double logreg_loss(const Dataset& data, std::span<const double> weights, double bias, double l2) {
    const std::size_t n = data.n_rows();
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = dot_row(weights, data.row(i)) + bias;
        loss += bce_term(z, data.label(i));
    }
    loss /= static_cast<double>(n);
    double penalty = 0.0;
    for (const double w : weights) penalty += w * w;
    return loss + 0.5 * l2 * penalty;
}

void logreg_gradient(const Dataset& data, std::span<const double> weights, double bias, double l2,
                     std::span<double> grad_weights, double& grad_bias) {
    const std::size_t n = data.n_rows();
    const std::size_t d = weights.size();
    std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
    grad_bias = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = data.row(i);
        const double z = dot_row(weights, row) + bias;
        const double err = sigmoid(z) - static_cast<double>(data.label(i));
        for (std::size_t j = 0; j < d; ++j) grad_weights[j] += err * row[j];
        grad_bias += err;
    }
    for (std::size_t j = 0; j < d; ++j) {
        grad_weights[j] = grad_weights[j] / static_cast<double>(n) + l2 * weights[j];
    }
    grad_bias /= static_cast<double>(n);
}

TrainedModel train_logreg(const Dataset& train, const LogRegParams& params, std::uint64_t seed) {
    params.validate();
    require_both_classes(train, "logreg");

    const std::size_t d = train.n_features();
    LogRegModel model;
    model.params = params;
    model.weights.assign(d, 0.0);
    model.loss_history.reserve(params.epochs + 1);
    model.loss_history.push_back(logreg_loss(train, model.weights, model.bias, params.l2));

    std::vector<double> grad(d);
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        double grad_bias = 0.0;
        logreg_gradient(train, model.weights, model.bias, params.l2, grad, grad_bias);
        for (std::size_t j = 0; j < d; ++j) {
            model.weights[j] -= params.learning_rate * grad[j];
        }
        model.bias -= params.learning_rate * grad_bias;
        model.loss_history.push_back(logreg_loss(train, model.weights, model.bias, params.l2));
    }
    return TrainedModel{ModelKind::LogReg, d, seed, std::move(model)};
}

TrainedModel train_knn(const Dataset& train, const KnnParams& params) {
    params.validate();
    if (train.n_rows() == 0) {
        throw TrainingError("knn: training data is empty");
    }
    if (params.k > train.n_rows()) {
        throw TrainingError("knn: k = " + std::to_string(params.k) + " exceeds training size " +
                            std::to_string(train.n_rows()));
    }
    return TrainedModel{ModelKind::Knn, train.n_features(), 0, KnnModel{params, train}};
}

TrainedModel train_svm(const Dataset& train, const SvmParams& params, std::uint64_t seed) {
    params.validate();
    require_both_classes(train, "svm");

    const std::size_t n = train.n_rows();
    const std::size_t d = train.n_features();
    const double lambda = 1.0 / (params.c * static_cast<double>(n));

    SvmModel model;
    model.params = params;
    model.weights.assign(d, 0.0);

    Rng rng(seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::size_t t = 1;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(order);
        for (const std::size_t i : order) {
            const auto row = train.row(i);
            const double y = train.label(i) == 1 ? 1.0 : -1.0;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double margin = y * (dot_row(model.weights, row) + model.bias);
            const double keep = 1.0 - eta * lambda;  // == (t-1)/t
            for (std::size_t j = 0; j < d; ++j) model.weights[j] *= keep;
            if (margin < 1.0) {
                for (std::size_t j = 0; j < d; ++j) model.weights[j] += eta * y * row[j];
                model.bias += eta * y;
            }
            ++t;
        }
    }
    return TrainedModel{ModelKind::LinearSvm, d, seed, std::move(model)};
}

namespace {

double score_knn(const KnnModel& model, std::span<const double> row) {
    const Dataset& train = model.train;
    const std::size_t n = train.n_rows();
    const std::size_t d = train.n_features();

    // (squared distance, training index); sorting the pair breaks distance
    // ties by row index.
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = train.row(i);
        double sq = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = row[j] - r[j];
            sq += diff * diff;
        }
        dist[i] = {sq, i};
    }
    std::sort(dist.begin(), dist.end());

    std::size_t positives = 0;
    for (std::size_t i = 0; i < model.params.k; ++i) {
        positives += static_cast<std::size_t>(train.label(dist[i].second));
    }
    return static_cast<double>(positives) / static_cast<double>(model.params.k);
}

double score_tree(const TreeModel& model, std::span<const double> row) {
    std::int32_t node = 0;
    while (!model.nodes[node].leaf) {
        const TreeNode& split = model.nodes[node];
        node = row[split.feature] <= split.threshold ? split.left : split.right;
    }
    return model.nodes[node].positive_fraction;
}

}  // namespace

double score(const TrainedModel& model, std::span<const double> row) {
    if (row.size() != model.n_features) {
        throw DataError("score: row has " + std::to_string(row.size()) + " features, model expects " +
                        std::to_string(model.n_features));
    }
    switch (model.kind) {
        case ModelKind::LogReg: {
            const auto& m = std::get<LogRegModel>(model.impl);
            return sigmoid(dot_row(m.weights, row) + m.bias);
        }
        case ModelKind::Knn:
            return score_knn(std::get<KnnModel>(model.impl), row);
        case ModelKind::Tree:
            return score_tree(std::get<TreeModel>(model.impl), row);
        case ModelKind::LinearSvm: {
            const auto& m = std::get<SvmModel>(model.impl);
            return dot_row(m.weights, row) + m.bias;
        }
    }
    throw DataError("score: unknown model kind");
}

int predict(const TrainedModel& model, std::span<const double> row, double threshold) {
    return score(model, row) >= threshold ? 1 : 0;
}

double default_threshold(const TrainedModel& model) {
    return model.kind == ModelKind::LinearSvm ? 0.0 : 0.5;
}

}  // namespace fraudkit
