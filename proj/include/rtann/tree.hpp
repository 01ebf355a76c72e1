#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtann/dataset.hpp"

namespace rtann {

/// Stopping and capacity controls for tree induction.
struct TreeConfig {
    /// alpha = ceil(minsplit_fraction * n): minimum node size eligible to split,
    /// computed once from the full training size.
    double minsplit_fraction = 0.10;
    /// Leaf budget; growth is best-first so a budget of k yields the k-leaf
    /// tree with the largest total SSE reduction reachable greedily.
    std::optional<std::size_t> max_leaves;
    double min_impurity_decrease = 0.0;
    std::uint64_t seed = 0;
};

struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;   // child indices into TreeModel::nodes; -1 for leaves
    int right = -1;
    double prediction = 0.0;
    std::size_t count = 0;
    bool is_leaf() const { return left < 0; }
};

/// Fitted binary axis-parallel partition with per-leaf constants. Routing rule:
/// go left iff feature value <= threshold. Immutable after fit.
struct TreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    std::vector<double> importance;  // per-feature total SSE reduction
    std::size_t leaf_count = 0;
    double response_bound = 0.0;
    std::size_t train_count = 0;
    TreeConfig config;
};

struct SelectionRule {
    enum class Kind { Used, TopM };
    Kind kind = Kind::Used;
    std::size_t top_m = 0;

    static SelectionRule used() { return {Kind::Used, 0}; }
    static SelectionRule top(std::size_t m) { return {Kind::TopM, m}; }
};

/// Feature indices ordered by descending importance (ties: ascending index).
/// fewer_than_requested is set when a top-m request exceeded the number of
/// features with positive importance.
struct FeatureSelection {
    std::vector<std::size_t> indices;
    bool fewer_than_requested = false;
};

/// Leaf-count growth schedules for the consistency sweep.
enum class ScheduleRule {
    Sublog,           // ceil(n / (ln n)^2), an o(n/log n) schedule
    LinearViolation,  // ceil(n / 2), deliberately breaks the o(n/log n) rate
};

TreeModel fit_tree(const Dataset& ds, const TreeConfig& cfg);
double predict_tree(const TreeModel& model, std::span<const double> x);
const std::vector<double>& feature_importance(const TreeModel& model);
FeatureSelection select_features(const TreeModel& model, const SelectionRule& rule);
std::size_t leaf_schedule(std::size_t n, ScheduleRule rule);

ScheduleRule parse_schedule(const std::string& name);
std::string schedule_name(ScheduleRule rule);

}  // namespace rtann
