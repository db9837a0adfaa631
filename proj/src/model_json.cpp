#include <fstream>

#include <json.hpp>

#include "fraudkit/error.hpp"
#include "fraudkit/models.hpp"

namespace fraudkit {

namespace {

using nlohmann::json;

constexpr int kModelFormatVersion = 1;

json dataset_to_json(const Dataset& data) {
    return json{{"feature_names", data.feature_names()},
                {"values", data.values()},
                {"labels", data.labels()}};
}

Dataset dataset_from_json(const json& j) {
    return Dataset(j.at("feature_names").get<std::vector<std::string>>(),
                   j.at("values").get<std::vector<double>>(),
                   j.at("labels").get<std::vector<int>>());
}

json node_to_json(const TreeNode& node) {
    if (node.leaf) {
        return json{{"leaf", true}, {"positive_fraction", node.positive_fraction}};
    }
    return json{{"leaf", false},
                {"feature", node.feature},
                {"threshold", node.threshold},
                {"left", node.left},
                {"right", node.right}};
}

TreeNode node_from_json(const json& j) {
    TreeNode node;
    node.leaf = j.at("leaf").get<bool>();
    if (node.leaf) {
        node.positive_fraction = j.at("positive_fraction").get<double>();
    } else {
        node.feature = j.at("feature").get<std::size_t>();
        node.threshold = j.at("threshold").get<double>();
        node.left = j.at("left").get<std::int32_t>();
        node.right = j.at("right").get<std::int32_t>();
    }
    return node;
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
    json j;
    j["format_version"] = kModelFormatVersion;
    j["kind"] = model_kind_name(model.kind);
    j["n_features"] = model.n_features;
    j["seed"] = model.seed;

    switch (model.kind) {
        case ModelKind::LogReg: {
            const auto& m = std::get<LogRegModel>(model.impl);
            j["hyperparams"] = {{"learning_rate", m.params.learning_rate},
                                {"epochs", m.params.epochs},
                                {"l2", m.params.l2}};
            j["weights"] = m.weights;
            j["bias"] = m.bias;
            j["loss_history"] = m.loss_history;
            break;
        }
        case ModelKind::Knn: {
            const auto& m = std::get<KnnModel>(model.impl);
            j["hyperparams"] = {{"k", m.params.k}};
            j["train"] = dataset_to_json(m.train);
            break;
        }
        case ModelKind::Tree: {
            const auto& m = std::get<TreeModel>(model.impl);
            j["hyperparams"] = {{"max_depth", m.params.max_depth},
                                {"min_samples_leaf", m.params.min_samples_leaf}};
            json nodes = json::array();
            for (const auto& node : m.nodes) nodes.push_back(node_to_json(node));
            j["nodes"] = std::move(nodes);
            break;
        }
        case ModelKind::LinearSvm: {
            const auto& m = std::get<SvmModel>(model.impl);
            j["hyperparams"] = {{"c", m.params.c}, {"epochs", m.params.epochs}};
            j["weights"] = m.weights;
            j["bias"] = m.bias;
            break;
        }
    }
    return j.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("model JSON is malformed: ") + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != kModelFormatVersion) {
            throw DataError("unsupported model format version");
        }
        TrainedModel model;
        model.kind = model_kind_from_name(j.at("kind").get<std::string>());
        model.n_features = j.at("n_features").get<std::size_t>();
        model.seed = j.at("seed").get<std::uint64_t>();
        const json& hp = j.at("hyperparams");

        switch (model.kind) {
            case ModelKind::LogReg: {
                LogRegModel m;
                m.params.learning_rate = hp.at("learning_rate").get<double>();
                m.params.epochs = hp.at("epochs").get<std::size_t>();
                m.params.l2 = hp.at("l2").get<double>();
                m.weights = j.at("weights").get<std::vector<double>>();
                m.bias = j.at("bias").get<double>();
                m.loss_history = j.at("loss_history").get<std::vector<double>>();
                model.impl = std::move(m);
                break;
            }
            case ModelKind::Knn: {
                KnnParams params{hp.at("k").get<std::size_t>()};
                model.impl = KnnModel{params, dataset_from_json(j.at("train"))};
                break;
            }
            case ModelKind::Tree: {
                TreeModel m;
                m.params.max_depth = hp.at("max_depth").get<std::size_t>();
                m.params.min_samples_leaf = hp.at("min_samples_leaf").get<std::size_t>();
                for (const auto& node : j.at("nodes")) m.nodes.push_back(node_from_json(node));
                model.impl = std::move(m);
                break;
            }
            case ModelKind::LinearSvm: {
                SvmModel m;
                m.params.c = hp.at("c").get<double>();
                m.params.epochs = hp.at("epochs").get<std::size_t>();
                m.weights = j.at("weights").get<std::vector<double>>();
                m.bias = j.at("bias").get<double>();
                model.impl = std::move(m);
                break;
            }
        }
        return model;
    } catch (const json::exception& e) {
        throw DataError(std::string("model JSON is missing required fields: ") + e.what());
    }
}

void save_model(const TrainedModel& model, const std::string& path) {
    const std::string text = model_to_json(model);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!file) {
        throw IoError("failed writing '" + path + "'");
    }
}

TrainedModel load_model(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::string text((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

}  // namespace fraudkit
