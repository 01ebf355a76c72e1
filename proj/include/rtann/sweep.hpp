#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rtann/tree.hpp"

namespace rtann {

struct SweepSpec {
    std::string generator = "axis-steps";
    std::vector<std::size_t> sizes;  // strictly increasing
    ScheduleRule schedule = ScheduleRule::Sublog;
    std::size_t repeats = 5;
    double noise_sd = 1.0;
    std::uint64_t seed = 42;
};

struct SweepCell {
    std::size_t n = 0;
    std::size_t repeat = 0;    // 0-based
    std::size_t capacity = 0;  // leaf budget (tree) or hidden count (mlp)
    double train_risk = 0.0;
    double holdout_risk = 0.0;  // mean squared deviation from noiseless m(x)
};

struct SweepResult {
    std::vector<SweepCell> cells;  // size-major, repeat-minor
    std::vector<double> median_holdout;  // one per size
    std::string verdict;  // "decreasing" / "not decreasing" / "insufficient points"
    std::string csv;      // header "n,repeat,capacity,train_risk,holdout_risk"
};

SweepResult run_tree_sweep(const SweepSpec& spec);
SweepResult run_mlp_sweep(const SweepSpec& spec);

}  // namespace rtann
