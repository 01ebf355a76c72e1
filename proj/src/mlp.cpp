#include "rtann/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace rtann {

namespace {

void check_config(const MlpConfig& cfg) {
    if (cfg.hidden_count && *cfg.hidden_count < 1)
        throw std::invalid_argument("hidden count must be at least 1");
    if (cfg.beta && !(*cfg.beta > 0.0))
        throw std::invalid_argument("output weight bound must be positive");
    if (cfg.learning_rate < 0.0)
        throw std::invalid_argument("learning rate must be nonnegative");
    if (cfg.max_epochs < 1)
        throw std::invalid_argument("need at least one epoch");
    if (cfg.tolerance < 0.0)
        throw std::invalid_argument("tolerance must be nonnegative");
}

std::vector<double> standardized_matrix(const MlpModel& model, const Dataset& ds) {
    std::vector<double> z(ds.n * ds.p);
    for (std::size_t i = 0; i < ds.n; ++i)
        model.standardization.apply_row(ds.row(i),
                                        std::span(z.data() + i * ds.p, ds.p));
    return z;
}

// Empirical L2 risk over standardized inputs z (n x d_m, row-major); when grad
// is non-null, accumulates the exact analytic gradient alongside.
double risk_and_gradient(const MlpModel& model, const std::vector<double>& z,
                         const std::vector<double>& y, MlpGradient* grad) {
    const std::size_t n = y.size();
    const std::size_t k = model.hidden_count();
    const std::size_t d = model.input_dim;
    if (grad) {
        grad->hidden_weights.assign(k * d, 0.0);
        grad->hidden_biases.assign(k, 0.0);
        grad->output_weights.assign(k, 0.0);
        grad->output_bias = 0.0;
    }

    double risk = 0.0;
    std::vector<double> act(k);
    for (std::size_t j = 0; j < n; ++j) {
        const double* zj = z.data() + j * d;
        double f = model.output_bias;
        for (std::size_t i = 0; i < k; ++i) {
            double pre = model.hidden_biases[i];
            const double* ai = model.hidden_weights.data() + i * d;
            for (std::size_t l = 0; l < d; ++l) pre += ai[l] * zj[l];
            act[i] = sigmoid(pre);
            f += model.output_weights[i] * act[i];
        }
        const double resid = f - y[j];
        risk += resid * resid;
        if (grad) {
            const double g = 2.0 * resid / static_cast<double>(n);
            grad->output_bias += g;
            for (std::size_t i = 0; i < k; ++i) {
                grad->output_weights[i] += g * act[i];
                const double h =
                    g * model.output_weights[i] * act[i] * (1.0 - act[i]);
                grad->hidden_biases[i] += h;
                double* gai = grad->hidden_weights.data() + i * d;
                for (std::size_t l = 0; l < d; ++l) gai[l] += h * zj[l];
            }
        }
    }
    return risk / static_cast<double>(n);
}

double output_l1(const MlpModel& model) {
    double s = std::abs(model.output_bias);
    for (double c : model.output_weights) s += std::abs(c);
    return s;
}

// Rescale (c, c0) back onto the l1 ball of radius beta when the constraint
// is violated.
void project(MlpModel& model) {
    const double s = output_l1(model);
    if (s > model.beta) {
        const double scale = model.beta / s;
        model.output_bias *= scale;
        for (double& c : model.output_weights) c *= scale;
    }
}

}  // namespace

double sigmoid(double x) {
    // Two-branch form: exp of a non-positive argument only.
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

std::size_t hidden_count_auto(std::size_t n, std::size_t d_m) {
    if (n < 2) throw std::invalid_argument("hidden width rule needs n >= 2");
    if (d_m < 1) throw std::invalid_argument("need at least one input");
    const double value = std::sqrt(static_cast<double>(n) /
                                   (static_cast<double>(d_m) *
                                    std::log(static_cast<double>(n))));
    const double rounded = std::round(value);  // half away from zero
    return rounded < 1.0 ? 1 : static_cast<std::size_t>(rounded);
}

MlpModel init_mlp(const Dataset& ds, const MlpConfig& cfg) {
    ds.validate();
    check_config(cfg);
    if (ds.n < 2) throw std::invalid_argument("training needs at least two rows");

    MlpModel model;
    model.input_dim = ds.p;
    model.standardization = standardize(ds).second;
    model.response_bound = ds.response_bound;

    const std::size_t k =
        cfg.hidden_count ? *cfg.hidden_count : hidden_count_auto(ds.n, ds.p);
    if (cfg.beta) {
        model.beta = *cfg.beta;
    } else {
        model.beta = 2.0 * ds.response_bound * std::log(static_cast<double>(ds.n));
        if (model.beta <= 0.0) model.beta = 1.0;  // all-zero targets
    }

    // Hidden parameters uniform on +-1/sqrt(d_m); output weights uniform on
    // +-beta/(4(k+1)) so the l1 constraint starts slack. Draw order fixed:
    // a row-major, then b, then c, then c0.
    std::mt19937_64 rng(cfg.seed);
    const double hidden_radius = 1.0 / std::sqrt(static_cast<double>(ds.p));
    const double output_radius = model.beta / (4.0 * static_cast<double>(k + 1));
    std::uniform_real_distribution<double> hidden_draw(-hidden_radius,
                                                       hidden_radius);
    std::uniform_real_distribution<double> output_draw(-output_radius,
                                                       output_radius);
    model.hidden_weights.resize(k * ds.p);
    for (double& w : model.hidden_weights) w = hidden_draw(rng);
    model.hidden_biases.resize(k);
    for (double& b : model.hidden_biases) b = hidden_draw(rng);
    model.output_weights.resize(k);
    for (double& c : model.output_weights) c = output_draw(rng);
    model.output_bias = output_draw(rng);

    model.final_risk = training_risk(model, ds);
    model.epochs_run = 0;
    return model;
}

MlpModel fit_mlp(const Dataset& ds, const MlpConfig& cfg,
                 const EpochCallback& callback) {
    MlpModel model = init_mlp(ds, cfg);
    const std::vector<double> z = standardized_matrix(model, ds);

    std::vector<double> risks;
    risks.reserve(cfg.max_epochs);
    MlpGradient grad;
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const double risk = risk_and_gradient(model, z, ds.targets, &grad);
        if (!std::isfinite(risk))
            throw std::runtime_error("diverged at epoch " + std::to_string(epoch));
        risks.push_back(risk);

        const double lr = cfg.learning_rate;
        for (std::size_t i = 0; i < grad.hidden_weights.size(); ++i)
            model.hidden_weights[i] -= lr * grad.hidden_weights[i];
        for (std::size_t i = 0; i < grad.hidden_biases.size(); ++i)
            model.hidden_biases[i] -= lr * grad.hidden_biases[i];
        for (std::size_t i = 0; i < grad.output_weights.size(); ++i)
            model.output_weights[i] -= lr * grad.output_weights[i];
        model.output_bias -= lr * grad.output_bias;
        project(model);

        model.epochs_run = epoch;
        if (callback) callback({epoch, risk, output_l1(model)});

        // Stop when the improvement across a 25-update window drops below
        // tolerance (with tolerance 0: only when the risk actually worsened).
        if (risks.size() >= 26 &&
            risks[risks.size() - 26] - risks.back() < cfg.tolerance)
            break;
    }

    model.final_risk = risk_and_gradient(model, z, ds.targets, nullptr);
    if (!std::isfinite(model.final_risk))
        throw std::runtime_error("diverged at epoch " +
                                 std::to_string(model.epochs_run + 1));
    return model;
}

double predict_mlp(const MlpModel& model, std::span<const double> x_raw) {
    if (x_raw.size() != model.input_dim)
        throw std::invalid_argument("expected " + std::to_string(model.input_dim) +
                                    " inputs, got " + std::to_string(x_raw.size()));
    std::vector<double> z(model.input_dim);
    model.standardization.apply_row(x_raw, z);

    double f = model.output_bias;
    for (std::size_t i = 0; i < model.hidden_count(); ++i) {
        double pre = model.hidden_biases[i];
        const double* ai = model.hidden_weights.data() + i * model.input_dim;
        for (std::size_t l = 0; l < model.input_dim; ++l) pre += ai[l] * z[l];
        f += model.output_weights[i] * sigmoid(pre);
    }
    return std::clamp(f, -model.response_bound, model.response_bound);
}

MlpGradient risk_gradient(const MlpModel& model, const Dataset& ds) {
    if (ds.p != model.input_dim)
        throw std::invalid_argument("dataset width does not match model input");
    const std::vector<double> z = standardized_matrix(model, ds);
    MlpGradient grad;
    risk_and_gradient(model, z, ds.targets, &grad);
    return grad;
}

double training_risk(const MlpModel& model, const Dataset& ds) {
    if (ds.p != model.input_dim)
        throw std::invalid_argument("dataset width does not match model input");
    const std::vector<double> z = standardized_matrix(model, ds);
    return risk_and_gradient(model, z, ds.targets, nullptr);
}

}  // namespace rtann
