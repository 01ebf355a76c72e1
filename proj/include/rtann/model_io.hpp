#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rtann/baselines.hpp"
#include "rtann/hybrid.hpp"

namespace rtann {

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// On-disk model wrapper. schema is the training column list, target last;
/// predict-time inputs are matched to it by name.
struct SavedModel {
    std::uint32_t format_version = kModelFormatVersion;
    std::string kind;  // "tree", "mlp", "hybrid", "ols", "stepwise", "pls"
    std::vector<std::string> schema;
    std::variant<TreeModel, MlpModel, LinearModel, HybridModel> payload;
};

void save_model(const SavedModel& model, const std::filesystem::path& path);
SavedModel load_model(const std::filesystem::path& path);

double predict_model(const SavedModel& model, std::span<const double> x);

/// Predictor count for the adjusted-R^2 denominator: inputs the fit actually
/// consumes (tree/mlp/hybrid: model input width; linear: selected features).
std::size_t predictor_count(const SavedModel& model);

}  // namespace rtann
