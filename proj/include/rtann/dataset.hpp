#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rtann {

/// Tabular regression data: an n x p feature matrix plus a bounded response
/// vector. Immutable by convention once constructed; safe for concurrent reads.
struct Dataset {
    /// p feature names in column order, then the target name last.
    std::vector<std::string> column_names;
    /// Row-major n*p matrix; every entry finite.
    std::vector<double> features;
    /// Length-n response vector, each value in [-response_bound, response_bound].
    std::vector<double> targets;
    std::size_t n = 0;
    std::size_t p = 0;
    /// K: declared bound on |target|. Model predictions are clamped to [-K, K].
    double response_bound = 0.0;

    double feature(std::size_t row, std::size_t col) const {
        return features[row * p + col];
    }
    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * p, p};
    }
    const std::string& target_name() const { return column_names.back(); }

    /// Throws std::invalid_argument if any structural invariant is broken.
    void validate() const;
};

/// Per-column (mean, sd) statistics captured by standardize(). Columns flagged
/// constant map to zero and invert back to their mean.
struct Standardization {
    std::vector<double> means;
    std::vector<double> sds;       // sample sd (n-1 denominator); 0 for constant columns
    std::vector<bool> constant;

    std::size_t columns() const { return means.size(); }
    double apply_one(double value, std::size_t col) const;
    double invert_one(double z, std::size_t col) const;
    void apply_row(std::span<const double> in, std::span<double> out) const;
};

/// Deterministic train/test index split. Indices are disjoint and cover 0..n-1.
struct SplitPlan {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    std::uint64_t seed = 0;
};

/// Synthetic data request. Generator names are part of the CLI contract.
struct SynthSpec {
    std::string generator;
    std::size_t n = 0;
    double noise_sd = 0.0;
    std::uint64_t seed = 0;
};

/// One registered synthetic generator: feature dimension, declared response
/// bound, column names, and the noiseless mean function m(x) on [0,1]^p.
struct GeneratorInfo {
    std::string name;
    std::size_t p;
    double response_bound;
    std::vector<std::string> column_names;
    double (*mean)(std::span<const double> x);
};

Dataset load_csv(const std::string& path, const std::string& target_column);
void write_csv(const Dataset& ds, const std::string& path);

/// Recovery percentage from inlet/outlet particle concentrations.
double efficiency(double inlet_ppm, double outlet_ppm);

/// Returns a copy of ds with each non-constant feature column scaled to mean 0,
/// sample sd 1, plus the statistics needed to map new data the same way.
std::pair<Dataset, Standardization> standardize(const Dataset& ds);

SplitPlan split(const Dataset& ds, double test_fraction, std::uint64_t seed);

Dataset subset(const Dataset& ds, std::span<const std::size_t> rows);

const GeneratorInfo& generator_info(const std::string& name);
std::vector<std::string> generator_names();

/// Row-major count x p feature draws from the generator's input distribution.
std::vector<double> sample_features(const GeneratorInfo& gen, std::size_t count,
                                    std::uint64_t seed);

Dataset synthesize(const SynthSpec& spec);

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

}  // namespace rtann
