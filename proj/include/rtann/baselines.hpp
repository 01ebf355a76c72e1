#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtann/dataset.hpp"

namespace rtann {

/// Linear predictor over raw (unstandardized) feature space.
/// coefficients has one entry per dataset feature; features a fit dropped
/// (rank deficiency, stepwise exclusion) carry coefficient 0.
struct LinearModel {
    std::vector<double> coefficients;
    double intercept = 0.0;
    std::vector<std::size_t> used_features;  // ascending
    std::optional<std::size_t> components;   // set for projection fits
    double response_bound = 0.0;
    bool degenerate = false;  // design matrix was rank-deficient
};

LinearModel fit_ols(const Dataset& ds);

/// Forward selection from the empty set; criterion is "aic" (the only one).
/// Adds the feature with the best strict criterion improvement each round.
LinearModel fit_stepwise(const Dataset& ds, const std::string& criterion = "aic");

/// Partial least squares (single response, NIPALS). 0 means the default
/// min(2, p); otherwise n_components must lie in [1, min(n-1, p)].
LinearModel fit_pls(const Dataset& ds, std::size_t n_components = 0);

double predict_linear(const LinearModel& model, std::span<const double> x);

}  // namespace rtann
