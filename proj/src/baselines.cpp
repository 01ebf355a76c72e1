#include "rtann/baselines.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rtann {

namespace {

Eigen::MatrixXd feature_matrix(const Dataset& ds) {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(
        ds.features.data(), static_cast<Eigen::Index>(ds.n),
        static_cast<Eigen::Index>(ds.p));
}

Eigen::VectorXd target_vector(const Dataset& ds) {
    return Eigen::Map<const Eigen::VectorXd>(ds.targets.data(),
                                             static_cast<Eigen::Index>(ds.n));
}

struct LstsqResult {
    Eigen::VectorXd coef;    // full length; dropped columns carry 0
    std::vector<bool> kept;
    double sse = 0.0;
    bool degenerate = false;
};

// Least squares with in-order rank screening: a column is dropped when it is
// numerically in the span of the kept columns before it. Keeps the earliest of
// any duplicated pair and always keeps a leading intercept column.
LstsqResult lstsq(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::Index n = X.rows();
    const Eigen::Index cols = X.cols();
    LstsqResult result;
    result.kept.assign(static_cast<std::size_t>(cols), false);

    Eigen::MatrixXd basis(n, cols);
    Eigen::Index rank = 0;
    std::vector<Eigen::Index> kept_idx;
    for (Eigen::Index j = 0; j < cols; ++j) {
        Eigen::VectorXd u = X.col(j);
        for (int pass = 0; pass < 2; ++pass)  // reorthogonalize for stability
            u -= basis.leftCols(rank) * (basis.leftCols(rank).transpose() * u);
        const double tol = 1e-10 * std::max(X.col(j).norm(), 1.0);
        if (u.norm() > tol) {
            basis.col(rank) = u / u.norm();
            ++rank;
            kept_idx.push_back(j);
            result.kept[static_cast<std::size_t>(j)] = true;
        } else {
            result.degenerate = true;
        }
    }

    Eigen::MatrixXd Xk(n, rank);
    for (Eigen::Index r = 0; r < rank; ++r) Xk.col(r) = X.col(kept_idx[static_cast<std::size_t>(r)]);
    const Eigen::VectorXd beta = Xk.householderQr().solve(y);

    result.coef = Eigen::VectorXd::Zero(cols);
    for (Eigen::Index r = 0; r < rank; ++r)
        result.coef[kept_idx[static_cast<std::size_t>(r)]] = beta[r];
    result.sse = (y - X * result.coef).squaredNorm();
    return result;
}

// Design matrix [1 | selected feature columns], selection in ascending order.
Eigen::MatrixXd design(const Eigen::MatrixXd& X,
                       const std::vector<std::size_t>& features) {
    Eigen::MatrixXd D(X.rows(), static_cast<Eigen::Index>(features.size()) + 1);
    D.col(0).setOnes();
    for (std::size_t j = 0; j < features.size(); ++j)
        D.col(static_cast<Eigen::Index>(j) + 1) =
            X.col(static_cast<Eigen::Index>(features[j]));
    return D;
}

LinearModel from_design_fit(const Dataset& ds,
                            const std::vector<std::size_t>& features,
                            const LstsqResult& fit) {
    LinearModel model;
    model.coefficients.assign(ds.p, 0.0);
    model.intercept = fit.coef[0];
    model.degenerate = fit.degenerate;
    model.response_bound = ds.response_bound;
    for (std::size_t j = 0; j < features.size(); ++j) {
        if (!fit.kept[j + 1]) continue;
        model.coefficients[features[j]] = fit.coef[static_cast<Eigen::Index>(j) + 1];
        model.used_features.push_back(features[j]);
    }
    return model;
}

double aic(double sse, std::size_t n, std::size_t q, double scale) {
    // Interpolating fits leave SSE at rounding-noise level, where the log
    // ratio between candidates is meaningless; floor it so selection freezes
    // instead of chasing that noise. The floor sits far below any real
    // residual (relative rounding is ~1e-16 per coordinate).
    const double floor = static_cast<double>(n) * (1e-12 * scale) * (1e-12 * scale);
    sse = std::max(sse, floor);
    return static_cast<double>(n) * std::log(sse / static_cast<double>(n)) +
           2.0 * static_cast<double>(q + 1);
}

}  // namespace

LinearModel fit_ols(const Dataset& ds) {
    ds.validate();
    if (ds.n <= ds.p)
        throw std::invalid_argument("underdetermined: need n > p rows");
    const Eigen::MatrixXd X = feature_matrix(ds);
    const Eigen::VectorXd y = target_vector(ds);
    std::vector<std::size_t> all(ds.p);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return from_design_fit(ds, all, lstsq(design(X, all), y));
}

LinearModel fit_stepwise(const Dataset& ds, const std::string& criterion) {
    ds.validate();
    if (criterion != "aic")
        throw std::invalid_argument("unknown stepwise criterion: " + criterion);
    if (ds.n < 3)
        throw std::invalid_argument("stepwise needs at least three rows");
    const Eigen::MatrixXd X = feature_matrix(ds);
    const Eigen::VectorXd y = target_vector(ds);

    std::vector<std::size_t> current;
    std::vector<bool> in_model(ds.p, false);
    const double y_scale = std::max(1.0, y.cwiseAbs().maxCoeff());
    const double base_sse = (y.array() - y.mean()).square().sum();
    double current_aic = aic(base_sse, ds.n, 0, y_scale);

    while (current.size() + 2 <= ds.n && current.size() < ds.p) {
        double best_aic = current_aic;
        std::size_t best_feature = ds.p;
        for (std::size_t j = 0; j < ds.p; ++j) {
            if (in_model[j]) continue;
            std::vector<std::size_t> candidate = current;
            candidate.push_back(j);
            std::sort(candidate.begin(), candidate.end());
            const LstsqResult fit = lstsq(design(X, candidate), y);
            const double candidate_aic = aic(fit.sse, ds.n, candidate.size(), y_scale);
            if (candidate_aic < best_aic) {  // strict: ties keep the lower index
                best_aic = candidate_aic;
                best_feature = j;
            }
        }
        if (best_feature == ds.p) break;
        current.push_back(best_feature);
        in_model[best_feature] = true;
        current_aic = best_aic;
    }

    std::sort(current.begin(), current.end());
    LinearModel model = from_design_fit(ds, current, lstsq(design(X, current), y));
    return model;
}

LinearModel fit_pls(const Dataset& ds, std::size_t n_components) {
    ds.validate();
    if (ds.n < 2) throw std::invalid_argument("pls needs at least two rows");
    const std::size_t limit = std::min(ds.n - 1, ds.p);
    std::size_t requested = n_components == 0 ? std::min<std::size_t>(2, ds.p)
                                              : n_components;
    if (requested < 1 || requested > limit)
        throw std::invalid_argument("component count out of range [1, " +
                                    std::to_string(limit) + "]");

    // Center and scale X, center y. Constant columns become all-zero and get
    // raw coefficient 0.
    const Eigen::Index n = static_cast<Eigen::Index>(ds.n);
    const Eigen::Index p = static_cast<Eigen::Index>(ds.p);
    Eigen::MatrixXd X = feature_matrix(ds);
    const Eigen::VectorXd mean = X.colwise().mean();
    Eigen::VectorXd sd(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double ss = (X.col(j).array() - mean[j]).square().sum();
        sd[j] = std::sqrt(ss / static_cast<double>(n - 1));
        if (sd[j] > 0.0)
            X.col(j) = (X.col(j).array() - mean[j]) / sd[j];
        else
            X.col(j).setZero();
    }
    Eigen::VectorXd y = target_vector(ds);
    const double y_mean = y.mean();
    y.array() -= y_mean;

    Eigen::MatrixXd W(p, static_cast<Eigen::Index>(requested));
    Eigen::MatrixXd P(p, static_cast<Eigen::Index>(requested));
    Eigen::VectorXd q(static_cast<Eigen::Index>(requested));
    Eigen::Index extracted = 0;
    for (std::size_t h = 0; h < requested; ++h) {
        Eigen::VectorXd w = X.transpose() * y;
        const double wn = w.norm();
        if (wn < 1e-12) break;  // response variance exhausted
        w /= wn;
        const Eigen::VectorXd t = X * w;
        const double tt = t.squaredNorm();
        if (tt <= 0.0) break;
        const Eigen::VectorXd load = X.transpose() * t / tt;
        const double qh = y.dot(t) / tt;
        X.noalias() -= t * load.transpose();
        y.noalias() -= qh * t;
        W.col(extracted) = w;
        P.col(extracted) = load;
        q[extracted] = qh;
        ++extracted;
    }

    LinearModel model;
    model.coefficients.assign(ds.p, 0.0);
    model.response_bound = ds.response_bound;
    model.components = static_cast<std::size_t>(std::max<Eigen::Index>(extracted, 0));
    model.used_features.resize(ds.p);
    std::iota(model.used_features.begin(), model.used_features.end(),
              std::size_t{0});
    if (extracted == 0) {
        model.intercept = y_mean;
        return model;
    }

    const Eigen::MatrixXd Wh = W.leftCols(extracted);
    const Eigen::MatrixXd Ph = P.leftCols(extracted);
    const Eigen::VectorXd qh = q.head(extracted);
    const Eigen::VectorXd scaled_coef =
        Wh * (Ph.transpose() * Wh).colPivHouseholderQr().solve(qh);

    double intercept = y_mean;
    for (Eigen::Index j = 0; j < p; ++j) {
        const double raw = sd[j] > 0.0 ? scaled_coef[j] / sd[j] : 0.0;
        model.coefficients[static_cast<std::size_t>(j)] = raw;
        intercept -= raw * mean[j];
    }
    model.intercept = intercept;
    return model;
}

double predict_linear(const LinearModel& model, std::span<const double> x) {
    if (x.size() != model.coefficients.size())
        throw std::invalid_argument("expected " +
                                    std::to_string(model.coefficients.size()) +
                                    " features, got " + std::to_string(x.size()));
    double value = model.intercept;
    for (std::size_t j = 0; j < x.size(); ++j)
        value += model.coefficients[j] * x[j];
    return std::clamp(value, -model.response_bound, model.response_bound);
}

}  // namespace rtann
