#include "rtann/model_io.hpp"

#include <fstream>
#include <functional>
#include <stdexcept>

#include <json.hpp>

namespace rtann {

namespace {

using nlohmann::json;

json tree_node_to_json(const TreeModel& model, int idx) {
    const TreeNode& node = model.nodes[static_cast<std::size_t>(idx)];
    if (node.is_leaf())
        return json{{"prediction", node.prediction}, {"count", node.count}};
    return json{{"feature", node.feature},
                {"threshold", node.threshold},
                {"left", tree_node_to_json(model, node.left)},
                {"right", tree_node_to_json(model, node.right)}};
}

json tree_to_json(const TreeModel& model) {
    json cfg{{"minsplit_fraction", model.config.minsplit_fraction},
             {"min_impurity_decrease", model.config.min_impurity_decrease},
             {"seed", model.config.seed}};
    cfg["max_leaves"] =
        model.config.max_leaves ? json(*model.config.max_leaves) : json(nullptr);
    return json{{"root", tree_node_to_json(model, 0)},
                {"importance", model.importance},
                {"leaf_count", model.leaf_count},
                {"response_bound", model.response_bound},
                {"train_count", model.train_count},
                {"config", cfg}};
}

int tree_node_from_json(const json& j, TreeModel& model) {
    const int idx = static_cast<int>(model.nodes.size());
    model.nodes.emplace_back();
    if (j.contains("prediction")) {
        model.nodes[static_cast<std::size_t>(idx)].prediction =
            j.at("prediction").get<double>();
        model.nodes[static_cast<std::size_t>(idx)].count =
            j.at("count").get<std::size_t>();
        return idx;
    }
    const int feature = j.at("feature").get<int>();
    const double threshold = j.at("threshold").get<double>();
    const int left = tree_node_from_json(j.at("left"), model);
    const int right = tree_node_from_json(j.at("right"), model);
    TreeNode& node = model.nodes[static_cast<std::size_t>(idx)];
    node.feature = feature;
    node.threshold = threshold;
    node.left = left;
    node.right = right;
    node.count = model.nodes[static_cast<std::size_t>(left)].count +
                 model.nodes[static_cast<std::size_t>(right)].count;
    return idx;
}

TreeModel tree_from_json(const json& j) {
    TreeModel model;
    tree_node_from_json(j.at("root"), model);
    model.importance = j.at("importance").get<std::vector<double>>();
    model.leaf_count = j.at("leaf_count").get<std::size_t>();
    model.response_bound = j.at("response_bound").get<double>();
    model.train_count = j.at("train_count").get<std::size_t>();
    const json& cfg = j.at("config");
    model.config.minsplit_fraction = cfg.at("minsplit_fraction").get<double>();
    model.config.min_impurity_decrease =
        cfg.at("min_impurity_decrease").get<double>();
    model.config.seed = cfg.at("seed").get<std::uint64_t>();
    if (!cfg.at("max_leaves").is_null())
        model.config.max_leaves = cfg.at("max_leaves").get<std::size_t>();
    return model;
}

json standardization_to_json(const Standardization& s) {
    return json{{"means", s.means}, {"sds", s.sds}, {"constant", s.constant}};
}

Standardization standardization_from_json(const json& j) {
    Standardization s;
    s.means = j.at("means").get<std::vector<double>>();
    s.sds = j.at("sds").get<std::vector<double>>();
    s.constant = j.at("constant").get<std::vector<bool>>();
    return s;
}

json mlp_to_json(const MlpModel& model) {
    return json{{"input_dim", model.input_dim},
                {"hidden_weights", model.hidden_weights},
                {"hidden_biases", model.hidden_biases},
                {"output_weights", model.output_weights},
                {"output_bias", model.output_bias},
                {"beta", model.beta},
                {"standardization", standardization_to_json(model.standardization)},
                {"response_bound", model.response_bound},
                {"final_risk", model.final_risk},
                {"epochs_run", model.epochs_run}};
}

MlpModel mlp_from_json(const json& j) {
    MlpModel model;
    model.input_dim = j.at("input_dim").get<std::size_t>();
    model.hidden_weights = j.at("hidden_weights").get<std::vector<double>>();
    model.hidden_biases = j.at("hidden_biases").get<std::vector<double>>();
    model.output_weights = j.at("output_weights").get<std::vector<double>>();
    model.output_bias = j.at("output_bias").get<double>();
    model.beta = j.at("beta").get<double>();
    model.standardization = standardization_from_json(j.at("standardization"));
    model.response_bound = j.at("response_bound").get<double>();
    model.final_risk = j.at("final_risk").get<double>();
    model.epochs_run = j.at("epochs_run").get<std::size_t>();
    return model;
}

json linear_to_json(const LinearModel& model) {
    json j{{"coefficients", model.coefficients},
           {"intercept", model.intercept},
           {"used_features", model.used_features},
           {"response_bound", model.response_bound},
           {"degenerate", model.degenerate}};
    j["components"] = model.components ? json(*model.components) : json(nullptr);
    return j;
}

LinearModel linear_from_json(const json& j) {
    LinearModel model;
    model.coefficients = j.at("coefficients").get<std::vector<double>>();
    model.intercept = j.at("intercept").get<double>();
    model.used_features = j.at("used_features").get<std::vector<std::size_t>>();
    model.response_bound = j.at("response_bound").get<double>();
    model.degenerate = j.at("degenerate").get<bool>();
    if (!j.at("components").is_null())
        model.components = j.at("components").get<std::size_t>();
    return model;
}

json hybrid_to_json(const HybridModel& model) {
    return json{{"selected", model.selected},
                {"used_fallback", model.used_fallback},
                {"tree", tree_to_json(model.tree)},
                {"mlp", mlp_to_json(model.mlp)},
                {"response_bound", model.response_bound}};
}

HybridModel hybrid_from_json(const json& j, const std::vector<std::string>& schema) {
    HybridModel model;
    model.selected = j.at("selected").get<std::vector<std::size_t>>();
    model.used_fallback = j.at("used_fallback").get<bool>();
    model.tree = tree_from_json(j.at("tree"));
    model.mlp = mlp_from_json(j.at("mlp"));
    model.response_bound = j.at("response_bound").get<double>();
    model.column_names = schema;
    return model;
}

bool linear_kind(const std::string& kind) {
    return kind == "ols" || kind == "stepwise" || kind == "pls";
}

}  // namespace

void save_model(const SavedModel& model, const std::filesystem::path& path) {
    json j;
    j["format_version"] = model.format_version;
    j["kind"] = model.kind;
    j["schema"] = model.schema;
    if (const auto* tree = std::get_if<TreeModel>(&model.payload))
        j["payload"] = tree_to_json(*tree);
    else if (const auto* mlp = std::get_if<MlpModel>(&model.payload))
        j["payload"] = mlp_to_json(*mlp);
    else if (const auto* linear = std::get_if<LinearModel>(&model.payload))
        j["payload"] = linear_to_json(*linear);
    else
        j["payload"] = hybrid_to_json(std::get<HybridModel>(model.payload));

    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write model file: " + path.string());
    file << j.dump(2) << "\n";
    if (!file) throw std::runtime_error("write failed: " + path.string());
}

SavedModel load_model(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open model file: " + path.string());
    json j;
    try {
        file >> j;
        SavedModel model;
        model.format_version = j.at("format_version").get<std::uint32_t>();
        if (model.format_version > kModelFormatVersion)
            throw std::runtime_error(
                "model format version " + std::to_string(model.format_version) +
                " is newer than supported version " +
                std::to_string(kModelFormatVersion));
        model.kind = j.at("kind").get<std::string>();
        model.schema = j.at("schema").get<std::vector<std::string>>();
        const json& payload = j.at("payload");
        if (model.kind == "tree")
            model.payload = tree_from_json(payload);
        else if (model.kind == "mlp")
            model.payload = mlp_from_json(payload);
        else if (model.kind == "hybrid")
            model.payload = hybrid_from_json(payload, model.schema);
        else if (linear_kind(model.kind))
            model.payload = linear_from_json(payload);
        else
            throw std::runtime_error("unknown model kind: " + model.kind);
        return model;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed model file " + path.string() + ": " +
                                 e.what());
    }
}

double predict_model(const SavedModel& model, std::span<const double> x) {
    if (const auto* tree = std::get_if<TreeModel>(&model.payload))
        return predict_tree(*tree, x);
    if (const auto* mlp = std::get_if<MlpModel>(&model.payload))
        return predict_mlp(*mlp, x);
    if (const auto* linear = std::get_if<LinearModel>(&model.payload))
        return predict_linear(*linear, x);
    return predict_hybrid(std::get<HybridModel>(model.payload), x);
}

std::size_t predictor_count(const SavedModel& model) {
    if (const auto* tree = std::get_if<TreeModel>(&model.payload))
        return tree->importance.size();
    if (const auto* mlp = std::get_if<MlpModel>(&model.payload))
        return mlp->input_dim;
    if (const auto* linear = std::get_if<LinearModel>(&model.payload))
        return linear->used_features.size();
    return std::get<HybridModel>(model.payload).mlp.input_dim;
}

}  // namespace rtann
