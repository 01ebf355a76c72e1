#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rtann/dataset.hpp"

namespace rtann {

/// Training controls for the one-hidden-layer network. Unset hidden_count or
/// beta means "auto": hidden_count_auto(n, d_m) and 2*K*ln(n) respectively.
struct MlpConfig {
    std::optional<std::size_t> hidden_count;
    std::optional<double> beta;
    double learning_rate = 0.05;
    std::size_t max_epochs = 2000;
    /// Stop when the risk improvement over 25 consecutive epochs falls below
    /// this. 0 keeps training until max_epochs unless the risk worsens.
    double tolerance = 0.0;
    std::uint64_t seed = 0;
};

struct EpochInfo {
    std::size_t epoch;            // 1-based update count
    double risk;                  // empirical L2 risk before this update
    double output_weight_l1;      // |c0| + sum |c_i| after update + projection
};
using EpochCallback = std::function<void(const EpochInfo&)>;

/// One-hidden-layer sigmoid network f(z) = c0 + sum_i c_i * sigmoid(a_i.z + b_i)
/// with |c0| + sum |c_i| <= beta. Inputs are standardized internally; raw
/// outputs are clamped to [-K, K] at prediction time.
struct MlpModel {
    std::size_t input_dim = 0;            // d_m
    std::vector<double> hidden_weights;   // k x d_m, row-major (a)
    std::vector<double> hidden_biases;    // length k (b)
    std::vector<double> output_weights;   // length k (c)
    double output_bias = 0.0;             // c0
    double beta = 0.0;
    Standardization standardization;
    double response_bound = 0.0;
    double final_risk = 0.0;
    std::size_t epochs_run = 0;

    std::size_t hidden_count() const { return hidden_biases.size(); }
};

/// Parameter-shaped gradient of the empirical L2 risk.
struct MlpGradient {
    std::vector<double> hidden_weights;
    std::vector<double> hidden_biases;
    std::vector<double> output_weights;
    double output_bias = 0.0;
};

/// Numerically stable logistic squasher 1/(1+exp(-x)).
double sigmoid(double x);

/// max(1, round(sqrt(n / (d_m * ln n)))), round half away from zero.
std::size_t hidden_count_auto(std::size_t n, std::size_t d_m);

/// Seeded initial model: parameters drawn, no training epochs run.
MlpModel init_mlp(const Dataset& ds, const MlpConfig& cfg);

/// Full-batch gradient descent on the empirical L2 risk, projecting the output
/// weights back onto the l1 ball of radius beta after every update.
MlpModel fit_mlp(const Dataset& ds, const MlpConfig& cfg,
                 const EpochCallback& callback = {});

double predict_mlp(const MlpModel& model, std::span<const double> x_raw);

/// Analytic gradient of the unclamped empirical L2 risk at the model's current
/// parameters, over the given raw dataset.
MlpGradient risk_gradient(const MlpModel& model, const Dataset& ds);

/// Unclamped empirical L2 risk of the model on a raw dataset.
double training_risk(const MlpModel& model, const Dataset& ds);

}  // namespace rtann
