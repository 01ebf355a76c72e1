#include "rtann/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace rtann {

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double reduction = -std::numeric_limits<double>::infinity();
};

double sse_from_sums(double sum, double sumsq, std::size_t m) {
    const double sse = sumsq - sum * sum / static_cast<double>(m);
    return std::max(sse, 0.0);
}

// Exhaustive search over (feature, midpoint) pairs. Features ascending and
// thresholds ascending with a strictly-greater comparison realizes the
// tie-break: lowest feature index, then lowest threshold.
SplitChoice best_split(const Dataset& ds, const std::vector<std::size_t>& rows) {
    const std::size_t m = rows.size();
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i : rows) {
        sum += ds.targets[i];
        sumsq += ds.targets[i] * ds.targets[i];
    }
    const double node_sse = sse_from_sums(sum, sumsq, m);

    SplitChoice best;
    std::vector<std::pair<double, double>> order(m);  // (value, target)
    for (std::size_t j = 0; j < ds.p; ++j) {
        for (std::size_t r = 0; r < m; ++r)
            order[r] = {ds.feature(rows[r], j), ds.targets[rows[r]]};
        std::sort(order.begin(), order.end());

        double left_sum = 0.0, left_sumsq = 0.0;
        for (std::size_t r = 0; r + 1 < m; ++r) {
            left_sum += order[r].second;
            left_sumsq += order[r].second * order[r].second;
            if (order[r].first == order[r + 1].first) continue;
            const double left_sse = sse_from_sums(left_sum, left_sumsq, r + 1);
            const double right_sse =
                sse_from_sums(sum - left_sum, sumsq - left_sumsq, m - r - 1);
            const double reduction = node_sse - left_sse - right_sse;
            if (reduction > best.reduction) {
                best.feature = static_cast<int>(j);
                best.threshold = (order[r].first + order[r + 1].first) / 2.0;
                best.reduction = reduction;
            }
        }
    }
    return best;
}

struct Candidate {
    double reduction;
    std::uint64_t seq;  // creation order; earlier wins reduction ties
    std::size_t node;
    int feature;
    double threshold;
};

struct CandidateOrder {
    bool operator()(const Candidate& a, const Candidate& b) const {
        if (a.reduction != b.reduction) return a.reduction < b.reduction;
        return a.seq > b.seq;
    }
};

bool all_equal(const Dataset& ds, const std::vector<std::size_t>& rows) {
    for (std::size_t i : rows)
        if (ds.targets[i] != ds.targets[rows[0]]) return false;
    return true;
}

double target_mean(const Dataset& ds, const std::vector<std::size_t>& rows) {
    double sum = 0.0;
    for (std::size_t i : rows) sum += ds.targets[i];
    return sum / static_cast<double>(rows.size());
}

void check_config(const TreeConfig& cfg) {
    if (!(cfg.minsplit_fraction > 0.0 && cfg.minsplit_fraction <= 1.0))
        throw std::invalid_argument("minsplit fraction must lie in (0, 1]");
    if (cfg.max_leaves && *cfg.max_leaves < 1)
        throw std::invalid_argument("leaf budget must be at least 1");
    if (cfg.min_impurity_decrease < 0.0)
        throw std::invalid_argument("impurity decrease floor must be nonnegative");
}

}  // namespace

TreeModel fit_tree(const Dataset& ds, const TreeConfig& cfg) {
    ds.validate();
    check_config(cfg);
    const std::size_t alpha = static_cast<std::size_t>(
        std::ceil(cfg.minsplit_fraction * static_cast<double>(ds.n)));

    TreeModel model;
    model.importance.assign(ds.p, 0.0);
    model.response_bound = ds.response_bound;
    model.train_count = ds.n;
    model.config = cfg;

    std::vector<std::vector<std::size_t>> node_rows;
    std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> frontier;
    std::uint64_t seq = 0;

    auto add_node = [&](std::vector<std::size_t> rows) -> std::size_t {
        TreeNode node;
        node.count = rows.size();
        node.prediction = target_mean(ds, rows);
        const std::size_t idx = model.nodes.size();
        model.nodes.push_back(node);
        // Propose a split only when the node is eligible: large enough,
        // non-constant targets, and a strictly positive gain over the floor.
        if (rows.size() >= alpha && !all_equal(ds, rows)) {
            const SplitChoice choice = best_split(ds, rows);
            if (choice.feature >= 0 && choice.reduction > cfg.min_impurity_decrease)
                frontier.push({choice.reduction, seq++, idx, choice.feature,
                               choice.threshold});
        }
        node_rows.push_back(std::move(rows));
        return idx;
    };

    std::vector<std::size_t> root_rows(ds.n);
    for (std::size_t i = 0; i < ds.n; ++i) root_rows[i] = i;
    add_node(std::move(root_rows));
    model.leaf_count = 1;

    const std::size_t budget =
        cfg.max_leaves ? *cfg.max_leaves : std::numeric_limits<std::size_t>::max();
    while (model.leaf_count < budget && !frontier.empty()) {
        const Candidate cand = frontier.top();
        frontier.pop();

        std::vector<std::size_t> rows = std::move(node_rows[cand.node]);
        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t i : rows) {
            if (ds.feature(i, static_cast<std::size_t>(cand.feature)) <=
                cand.threshold)
                left_rows.push_back(i);
            else
                right_rows.push_back(i);
        }

        model.nodes[cand.node].feature = cand.feature;
        model.nodes[cand.node].threshold = cand.threshold;
        const std::size_t left = add_node(std::move(left_rows));
        const std::size_t right = add_node(std::move(right_rows));
        model.nodes[cand.node].left = static_cast<int>(left);
        model.nodes[cand.node].right = static_cast<int>(right);
        model.importance[static_cast<std::size_t>(cand.feature)] += cand.reduction;
        ++model.leaf_count;
    }
    return model;
}

double predict_tree(const TreeModel& model, std::span<const double> x) {
    if (x.size() != model.importance.size())
        throw std::invalid_argument("expected " +
                                    std::to_string(model.importance.size()) +
                                    " features, got " + std::to_string(x.size()));
    std::size_t idx = 0;
    while (!model.nodes[idx].is_leaf()) {
        const TreeNode& node = model.nodes[idx];
        idx = static_cast<std::size_t>(
            x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                        : node.right);
    }
    return model.nodes[idx].prediction;
}

const std::vector<double>& feature_importance(const TreeModel& model) {
    return model.importance;
}

FeatureSelection select_features(const TreeModel& model, const SelectionRule& rule) {
    std::vector<std::size_t> used;
    for (std::size_t j = 0; j < model.importance.size(); ++j)
        if (model.importance[j] > 0.0) used.push_back(j);
    std::stable_sort(used.begin(), used.end(), [&](std::size_t a, std::size_t b) {
        return model.importance[a] > model.importance[b];
    });

    FeatureSelection selection;
    if (rule.kind == SelectionRule::Kind::TopM) {
        if (rule.top_m < used.size())
            used.resize(rule.top_m);
        else if (rule.top_m > used.size())
            selection.fewer_than_requested = true;
    }
    selection.indices = std::move(used);
    return selection;
}

std::size_t leaf_schedule(std::size_t n, ScheduleRule rule) {
    if (n < 2) throw std::invalid_argument("schedule needs n >= 2");
    switch (rule) {
        case ScheduleRule::Sublog: {
            const double ln_n = std::log(static_cast<double>(n));
            return static_cast<std::size_t>(
                std::ceil(static_cast<double>(n) / (ln_n * ln_n)));
        }
        case ScheduleRule::LinearViolation:
            return (n + 1) / 2;
    }
    throw std::invalid_argument("unknown schedule rule");
}

ScheduleRule parse_schedule(const std::string& name) {
    if (name == "sublog") return ScheduleRule::Sublog;
    if (name == "linear-violation") return ScheduleRule::LinearViolation;
    throw std::invalid_argument("unknown schedule: " + name);
}

std::string schedule_name(ScheduleRule rule) {
    return rule == ScheduleRule::Sublog ? "sublog" : "linear-violation";
}

}  // namespace rtann
