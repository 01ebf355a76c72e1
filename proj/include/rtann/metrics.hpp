#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rtann {

/// Error summary for one model on one sample. Percent-scaled fields are
/// absent when undefined (MAPE with a zero observation, R^2 with constant
/// observations, adjusted R^2 when n <= k + 1).
struct MetricsReport {
    double mae = 0.0;
    double rmse = 0.0;
    std::optional<double> mape_percent;
    std::optional<double> r2_percent;
    std::optional<double> adj_r2_percent;
    std::size_t n = 0;
    std::size_t k = 0;  // predictor count used for the adjustment
};

MetricsReport evaluate(std::span<const double> y, std::span<const double> yhat,
                       std::size_t k);

double adjusted_r2_percent(double r2_percent, std::size_t n, std::size_t k);

struct ComparisonRow {
    std::string model;
    MetricsReport metrics;
};

struct ComparisonTable {
    std::string text;  // aligned columns for terminals
    std::string csv;   // header "model,mae,rmse,mape,r2,adj_r2"
};

/// Rows render in the order given; undefined metrics print as "n/a".
ComparisonTable comparison_table(const std::vector<ComparisonRow>& rows);

}  // namespace rtann
