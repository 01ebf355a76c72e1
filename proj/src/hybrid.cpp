#include "rtann/hybrid.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rtann {

HybridModel fit_hybrid(const Dataset& ds, const HybridConfig& cfg) {
    HybridModel model;
    model.tree = fit_tree(ds, cfg.tree);
    model.response_bound = ds.response_bound;
    model.column_names = ds.column_names;

    FeatureSelection selection = select_features(model.tree, cfg.selection);
    if (selection.indices.empty()) {
        // No informative split: keep every feature rather than fail.
        model.used_fallback = true;
        model.selected.resize(ds.p);
        std::iota(model.selected.begin(), model.selected.end(), std::size_t{0});
    } else {
        model.selected = std::move(selection.indices);
    }

    // Augmented inputs: selected columns in selection order, then the in-sample
    // tree prediction as one extra column, so the network sees d_m = m + 1.
    Dataset augmented;
    augmented.n = ds.n;
    augmented.p = model.selected.size() + 1;
    augmented.response_bound = ds.response_bound;
    augmented.targets = ds.targets;
    for (std::size_t j : model.selected)
        augmented.column_names.push_back(ds.column_names[j]);
    augmented.column_names.push_back("tree_output");
    augmented.column_names.push_back(ds.target_name());
    augmented.features.reserve(augmented.n * augmented.p);
    for (std::size_t i = 0; i < ds.n; ++i) {
        const auto row = ds.row(i);
        for (std::size_t j : model.selected) augmented.features.push_back(row[j]);
        augmented.features.push_back(predict_tree(model.tree, row));
    }

    model.mlp = fit_mlp(augmented, cfg.mlp);
    return model;
}

double predict_hybrid(const HybridModel& model, std::span<const double> x_raw) {
    const std::size_t p = model.tree.importance.size();
    if (x_raw.size() != p)
        throw std::invalid_argument("expected " + std::to_string(p) +
                                    " features, got " +
                                    std::to_string(x_raw.size()));
    std::vector<double> augmented;
    augmented.reserve(model.selected.size() + 1);
    for (std::size_t j : model.selected) augmented.push_back(x_raw[j]);
    augmented.push_back(predict_tree(model.tree, x_raw));
    return predict_mlp(model.mlp, augmented);
}

std::string explain(const HybridModel& model) {
    std::ostringstream out;
    if (model.used_fallback)
        out << "fallback: no informative split (all features kept)\n";
    out << "selected features (descending importance):\n";
    for (std::size_t j : model.selected)
        out << "  " << model.column_names[j] << ": "
            << format_double(model.tree.importance[j]) << "\n";
    out << "tree leaves: " << model.tree.leaf_count << "\n";
    out << "network inputs (d_m): " << model.mlp.input_dim << "\n";
    out << "hidden units (k): " << model.mlp.hidden_count() << "\n";
    out << "output weight bound (beta): " << format_double(model.mlp.beta) << "\n";
    out << "final training risk: " << format_double(model.mlp.final_risk) << "\n";
    return out.str();
}

}  // namespace rtann
