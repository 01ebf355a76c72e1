#pragma once

#include <span>
#include <string>
#include <vector>

#include "rtann/mlp.hpp"
#include "rtann/tree.hpp"

namespace rtann {

struct HybridConfig {
    TreeConfig tree;
    MlpConfig mlp;
    SelectionRule selection = SelectionRule::used();
};

/// Two-stage model: tree for feature selection, then a network over the
/// selected columns plus the tree's prediction as one extra input, so
/// mlp.input_dim == selected.size() + 1.
struct HybridModel {
    std::vector<std::size_t> selected;  // descending importance order
    bool used_fallback = false;         // empty selection -> all features kept
    TreeModel tree;
    MlpModel mlp;
    double response_bound = 0.0;
    std::vector<std::string> column_names;  // training schema, target last
};

HybridModel fit_hybrid(const Dataset& ds, const HybridConfig& cfg);
double predict_hybrid(const HybridModel& model, std::span<const double> x_raw);

/// Human-readable summary: selected features with importance, tree leaf count,
/// d_m, k, beta, final training risk.
std::string explain(const HybridModel& model);

}  // namespace rtann
