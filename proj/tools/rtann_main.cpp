#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "rtann/baselines.hpp"
#include "rtann/hybrid.hpp"
#include "rtann/metrics.hpp"
#include "rtann/model_io.hpp"
#include "rtann/sweep.hpp"

namespace {

using namespace rtann;

// ---------------------------------------------------------------------------
// Raw CSV table (header + numeric cells), for prediction inputs that need not
// carry a target column.

struct RawTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

RawTable read_table(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(file, line))
        if (!trim(line).empty()) lines.push_back(line);
    if (lines.empty()) throw std::runtime_error("empty file: " + path);

    RawTable table;
    table.columns = split_cells(lines[0]);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> cells = split_cells(lines[i]);
        if (cells.size() != table.columns.size())
            throw std::runtime_error("row " + std::to_string(i + 1) + " has " +
                                     std::to_string(cells.size()) +
                                     " cells, expected " +
                                     std::to_string(table.columns.size()));
        std::vector<double> row(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const std::string& c = cells[j];
            char* end = nullptr;
            row[j] = std::strtod(c.c_str(), &end);
            if (c.empty() || end != c.c_str() + c.size() || !std::isfinite(row[j]))
                throw std::runtime_error("non-numeric cell \"" + c + "\" at row " +
                                         std::to_string(i + 1) + ", column " +
                                         std::to_string(j + 1));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

// Reorders a raw table's feature columns into the model schema's order,
// matching by name. The schema's target column is tolerated; any other column
// not named in the schema is an error.
struct SchemaView {
    std::vector<std::vector<double>> features;  // schema feature order
    std::vector<double> targets;                // filled when target present
    bool has_target = false;
};

SchemaView match_schema(const RawTable& table, const std::vector<std::string>& schema,
                        bool require_target) {
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        if (!position.emplace(table.columns[j], j).second)
            throw std::runtime_error("duplicate column: " + table.columns[j]);
    }

    const std::string& target = schema.back();
    std::vector<std::size_t> feature_pos;
    for (std::size_t j = 0; j + 1 < schema.size(); ++j) {
        const auto it = position.find(schema[j]);
        if (it == position.end())
            throw std::runtime_error("missing column: " + schema[j]);
        feature_pos.push_back(it->second);
    }
    const auto target_it = position.find(target);
    if (require_target && target_it == position.end())
        throw std::runtime_error("missing column: " + target);
    for (const std::string& name : table.columns) {
        if (name == target) continue;
        if (std::find(schema.begin(), schema.end() - 1, name) == schema.end() - 1)
            throw std::runtime_error("unexpected column: " + name);
    }

    SchemaView view;
    view.has_target = target_it != position.end();
    for (const std::vector<double>& row : table.rows) {
        std::vector<double> x(feature_pos.size());
        for (std::size_t j = 0; j < feature_pos.size(); ++j)
            x[j] = row[feature_pos[j]];
        view.features.push_back(std::move(x));
        if (view.has_target) view.targets.push_back(row[target_it->second]);
    }
    return view;
}

// ---------------------------------------------------------------------------
// Shared option blocks.

struct TreeFlags {
    double minsplit_fraction = 0.10;
    std::optional<std::size_t> max_leaves;
    double min_impurity_decrease = 0.0;
};

struct MlpFlags {
    std::optional<std::size_t> hidden;
    std::optional<double> beta;
    double learning_rate = 0.05;
    std::size_t epochs = 2000;
    double tolerance = 0.0;
};

void add_tree_flags(CLI::App* cmd, TreeFlags& flags) {
    cmd->add_option("--minsplit-fraction", flags.minsplit_fraction,
                    "Minimum split fraction of n (default 0.10)");
    cmd->add_option("--max-leaves", flags.max_leaves, "Leaf budget");
    cmd->add_option("--min-impurity-decrease", flags.min_impurity_decrease,
                    "Minimum SSE reduction to accept a split");
}

void add_mlp_flags(CLI::App* cmd, MlpFlags& flags) {
    cmd->add_option("--hidden", flags.hidden, "Hidden unit count (default auto)");
    cmd->add_option("--beta", flags.beta, "Output weight l1 bound (default auto)");
    cmd->add_option("--learning-rate", flags.learning_rate,
                    "Gradient step size (default 0.05)");
    cmd->add_option("--epochs", flags.epochs, "Epoch budget (default 2000)");
    cmd->add_option("--tolerance", flags.tolerance,
                    "25-epoch improvement stop threshold (default 0)");
}

TreeConfig tree_config(const TreeFlags& flags, std::uint64_t seed) {
    TreeConfig cfg;
    cfg.minsplit_fraction = flags.minsplit_fraction;
    cfg.max_leaves = flags.max_leaves;
    cfg.min_impurity_decrease = flags.min_impurity_decrease;
    cfg.seed = seed;
    return cfg;
}

MlpConfig mlp_config(const MlpFlags& flags, std::uint64_t seed) {
    MlpConfig cfg;
    cfg.hidden_count = flags.hidden;
    cfg.beta = flags.beta;
    cfg.learning_rate = flags.learning_rate;
    cfg.max_epochs = flags.epochs;
    cfg.tolerance = flags.tolerance;
    cfg.seed = seed;
    return cfg;
}

const std::vector<std::string> kModelKinds = {"ols", "stepwise", "pls",
                                              "tree", "mlp",     "hybrid"};

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
    std::string data;
    std::string target;
    std::string kind;
    std::string out;
    std::optional<double> test_fraction;
    std::uint64_t seed = 42;
    TreeFlags tree;
    MlpFlags mlp;
    std::optional<std::size_t> top_m;
    std::size_t components = 0;  // 0: default min(2, p)
};

std::string linear_report(const LinearModel& model,
                          const std::vector<std::string>& names) {
    std::ostringstream out;
    out << "intercept: " << format_double(model.intercept) << "\n";
    out << "coefficients:\n";
    for (std::size_t j = 0; j < model.coefficients.size(); ++j)
        out << "  " << names[j] << ": " << format_double(model.coefficients[j])
            << "\n";
    if (model.components) out << "components: " << *model.components << "\n";
    if (model.degenerate) out << "note: rank-deficient design, dropped columns\n";
    return out.str();
}

void run_train(const TrainOptions& opt) {
    const Dataset full = load_csv(opt.data, opt.target);
    Dataset fit_ds = full;
    if (opt.test_fraction) {
        const SplitPlan plan = split(full, *opt.test_fraction, opt.seed);
        fit_ds = subset(full, plan.train_indices);
        std::cout << "training rows: " << fit_ds.n << " of " << full.n << "\n";
    }

    SavedModel saved;
    saved.kind = opt.kind;
    saved.schema = full.column_names;
    std::string report;
    if (opt.kind == "tree") {
        const TreeModel model = fit_tree(fit_ds, tree_config(opt.tree, opt.seed));
        std::ostringstream r;
        r << "tree leaves: " << model.leaf_count << "\n";
        r << "feature importance:\n";
        for (std::size_t j = 0; j < model.importance.size(); ++j)
            r << "  " << full.column_names[j] << ": "
              << format_double(model.importance[j]) << "\n";
        report = r.str();
        saved.payload = model;
    } else if (opt.kind == "mlp") {
        const MlpModel model = fit_mlp(fit_ds, mlp_config(opt.mlp, opt.seed));
        std::ostringstream r;
        r << "hidden units (k): " << model.hidden_count() << "\n";
        r << "output weight bound (beta): " << format_double(model.beta) << "\n";
        r << "epochs run: " << model.epochs_run << "\n";
        r << "final training risk: " << format_double(model.final_risk) << "\n";
        report = r.str();
        saved.payload = model;
    } else if (opt.kind == "hybrid") {
        HybridConfig cfg;
        cfg.tree = tree_config(opt.tree, opt.seed);
        cfg.mlp = mlp_config(opt.mlp, opt.seed);
        if (opt.top_m) cfg.selection = SelectionRule::top(*opt.top_m);
        const HybridModel model = fit_hybrid(fit_ds, cfg);
        report = explain(model);
        saved.payload = model;
    } else if (opt.kind == "ols") {
        const LinearModel model = fit_ols(fit_ds);
        report = linear_report(model, full.column_names);
        saved.payload = model;
    } else if (opt.kind == "stepwise") {
        const LinearModel model = fit_stepwise(fit_ds);
        std::ostringstream r;
        r << linear_report(model, full.column_names);
        r << "used features:";
        for (std::size_t j : model.used_features)
            r << " " << full.column_names[j];
        r << "\n";
        report = r.str();
        saved.payload = model;
    } else {  // pls; kind list enforced by the parser
        const LinearModel model = fit_pls(fit_ds, opt.components);
        report = linear_report(model, full.column_names);
        saved.payload = model;
    }

    save_model(saved, opt.out);
    std::cout << report;
    std::cout << "model written to " << opt.out << "\n";
}

// ---------------------------------------------------------------------------
// predict

struct PredictOptions {
    std::string model;
    std::string data;
    std::string out;  // empty: stdout
};

void run_predict(const PredictOptions& opt) {
    const SavedModel model = load_model(opt.model);
    const RawTable table = read_table(opt.data);
    const SchemaView view = match_schema(table, model.schema, false);

    std::ostringstream out;
    out << "prediction\n";
    for (const std::vector<double>& x : view.features)
        out << format_double(predict_model(model, x)) << "\n";

    if (opt.out.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream file(opt.out);
        if (!file) throw std::runtime_error("cannot write file: " + opt.out);
        file << out.str();
    }
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
    std::string model;
    std::string data;
    std::string csv_out;
};

void run_evaluate(const EvaluateOptions& opt) {
    const SavedModel model = load_model(opt.model);
    const RawTable table = read_table(opt.data);
    const SchemaView view = match_schema(table, model.schema, true);

    std::vector<double> yhat;
    yhat.reserve(view.features.size());
    for (const std::vector<double>& x : view.features)
        yhat.push_back(predict_model(model, x));

    const MetricsReport report =
        evaluate(view.targets, yhat, predictor_count(model));
    const ComparisonTable tbl = comparison_table({{model.kind, report}});
    std::cout << tbl.text;
    if (!opt.csv_out.empty()) {
        std::ofstream file(opt.csv_out);
        if (!file) throw std::runtime_error("cannot write file: " + opt.csv_out);
        file << tbl.csv;
    }
}

// ---------------------------------------------------------------------------
// benchmark

struct BenchmarkOptions {
    std::string data;
    std::string target;
    std::optional<double> test_fraction;
    std::optional<std::size_t> folds;
    std::uint64_t seed = 42;
    MlpFlags mlp;
    std::string out_in_sample;
    std::string out_holdout;
};

struct BenchRow {
    std::string name;
    std::optional<MetricsReport> metrics;  // empty: the fit failed
};

std::string metric_cell(const std::optional<double>& value) {
    if (!value) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", *value);
    return buf;
}

std::pair<std::string, std::string> bench_table(const std::vector<BenchRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"model", "mae", "rmse", "mape", "r2", "adj_r2"});
    for (const BenchRow& row : rows) {
        if (!row.metrics) {
            cells.push_back(
                {row.name, "failed", "failed", "failed", "failed", "failed"});
            continue;
        }
        const MetricsReport& m = *row.metrics;
        cells.push_back({row.name, metric_cell(m.mae), metric_cell(m.rmse),
                         metric_cell(m.mape_percent), metric_cell(m.r2_percent),
                         metric_cell(m.adj_r2_percent)});
    }

    std::vector<std::size_t> widths(6, 0);
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());

    std::ostringstream text, csv;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) {
                text << "  ";
                csv << ",";
            }
            const std::string pad(widths[c] - row[c].size(), ' ');
            text << (c == 0 ? row[c] + pad : pad + row[c]);
            csv << row[c];
        }
        text << "\n";
        csv << "\n";
    }
    return {text.str(), csv.str()};
}

struct FittedModel {
    SavedModel saved;
    std::string error;  // nonempty: fit failed
};

FittedModel fit_kind(const std::string& kind, const Dataset& ds,
                     const BenchmarkOptions& opt) {
    FittedModel fitted;
    fitted.saved.kind = kind;
    fitted.saved.schema = ds.column_names;
    try {
        if (kind == "ols")
            fitted.saved.payload = fit_ols(ds);
        else if (kind == "stepwise")
            fitted.saved.payload = fit_stepwise(ds);
        else if (kind == "pls")
            fitted.saved.payload = fit_pls(ds);
        else if (kind == "tree")
            fitted.saved.payload = fit_tree(ds, tree_config(TreeFlags{}, opt.seed));
        else if (kind == "mlp")
            fitted.saved.payload = fit_mlp(ds, mlp_config(opt.mlp, opt.seed));
        else {
            HybridConfig cfg;
            cfg.tree = tree_config(TreeFlags{}, opt.seed);
            cfg.mlp = mlp_config(opt.mlp, opt.seed);
            fitted.saved.payload = fit_hybrid(ds, cfg);
        }
    } catch (const std::exception& e) {
        fitted.error = e.what();
    }
    return fitted;
}

std::vector<double> predict_rows(const SavedModel& model, const Dataset& ds) {
    std::vector<double> yhat;
    yhat.reserve(ds.n);
    for (std::size_t i = 0; i < ds.n; ++i)
        yhat.push_back(predict_model(model, ds.row(i)));
    return yhat;
}

void run_benchmark(const BenchmarkOptions& opt) {
    if (!opt.test_fraction && !opt.folds)
        throw CLI::ValidationError("benchmark",
                                   "give either --test-fraction or --folds");
    if (opt.folds && *opt.folds < 2)
        throw CLI::ValidationError("benchmark", "--folds must be at least 2");

    const Dataset full = load_csv(opt.data, opt.target);
    std::vector<BenchRow> in_sample, holdout;
    std::vector<std::string> failures;
    std::string holdout_title;

    if (opt.test_fraction) {
        holdout_title = "holdout (test fraction " +
                        format_double(*opt.test_fraction) + ", seed " +
                        std::to_string(opt.seed) + "):";
        const SplitPlan plan = split(full, *opt.test_fraction, opt.seed);
        const Dataset train = subset(full, plan.train_indices);
        const Dataset test = subset(full, plan.test_indices);
        for (const std::string& kind : kModelKinds) {
            const FittedModel fitted = fit_kind(kind, train, opt);
            if (!fitted.error.empty()) {
                in_sample.push_back({kind, std::nullopt});
                holdout.push_back({kind, std::nullopt});
                failures.push_back(kind + ": " + fitted.error);
                continue;
            }
            const std::size_t k = predictor_count(fitted.saved);
            in_sample.push_back(
                {kind, evaluate(train.targets, predict_rows(fitted.saved, train), k)});
            holdout.push_back(
                {kind, evaluate(test.targets, predict_rows(fitted.saved, test), k)});
        }
    } else {
        holdout_title = "out-of-fold (" + std::to_string(*opt.folds) +
                        " folds, seed " + std::to_string(opt.seed) + "):";
        const std::size_t folds = *opt.folds;
        if (full.n < folds)
            throw std::invalid_argument("more folds than rows");
        // Deterministic fold assignment: seed-shuffled order, round-robin.
        std::vector<std::size_t> order(full.n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::mt19937_64 rng(opt.seed);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<std::size_t> fold_of(full.n);
        for (std::size_t i = 0; i < full.n; ++i) fold_of[order[i]] = i % folds;

        for (const std::string& kind : kModelKinds) {
            const FittedModel full_fit = fit_kind(kind, full, opt);
            if (!full_fit.error.empty()) {
                in_sample.push_back({kind, std::nullopt});
                holdout.push_back({kind, std::nullopt});
                failures.push_back(kind + ": " + full_fit.error);
                continue;
            }
            const std::size_t k = predictor_count(full_fit.saved);
            in_sample.push_back(
                {kind, evaluate(full.targets, predict_rows(full_fit.saved, full), k)});

            std::vector<double> oof(full.n, 0.0);
            std::string error;
            for (std::size_t f = 0; f < folds && error.empty(); ++f) {
                std::vector<std::size_t> train_rows, test_rows;
                for (std::size_t i = 0; i < full.n; ++i)
                    (fold_of[i] == f ? test_rows : train_rows).push_back(i);
                const FittedModel fold_fit =
                    fit_kind(kind, subset(full, train_rows), opt);
                if (!fold_fit.error.empty()) {
                    error = fold_fit.error;
                    break;
                }
                for (std::size_t i : test_rows)
                    oof[i] = predict_model(fold_fit.saved, full.row(i));
            }
            if (!error.empty()) {
                holdout.push_back({kind, std::nullopt});
                failures.push_back(kind + " (out-of-fold): " + error);
            } else {
                holdout.push_back({kind, evaluate(full.targets, oof, k)});
            }
        }
    }

    const auto [in_text, in_csv] = bench_table(in_sample);
    const auto [out_text, out_csv] = bench_table(holdout);
    std::cout << "in-sample:\n" << in_text << "\n";
    std::cout << holdout_title << "\n" << out_text << "\n";
    std::cout << "note: MARS from the original comparison is omitted; "
                 "no published algorithm to implement.\n";
    for (const std::string& f : failures) std::cout << "failed: " << f << "\n";

    if (!opt.out_in_sample.empty()) {
        std::ofstream file(opt.out_in_sample);
        if (!file)
            throw std::runtime_error("cannot write file: " + opt.out_in_sample);
        file << in_csv;
    }
    if (!opt.out_holdout.empty()) {
        std::ofstream file(opt.out_holdout);
        if (!file)
            throw std::runtime_error("cannot write file: " + opt.out_holdout);
        file << out_csv;
    }
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
    std::string model = "tree";
    std::string generator = "axis-steps";
    std::vector<std::size_t> sizes;
    std::string schedule = "sublog";
    std::size_t repeats = 5;
    double noise = 1.0;
    std::uint64_t seed = 42;
    std::string out;
};

void run_sweep(const SweepOptions& opt) {
    SweepSpec spec;
    spec.generator = opt.generator;
    spec.sizes = opt.sizes;
    spec.schedule = parse_schedule(opt.schedule);
    spec.repeats = opt.repeats;
    spec.noise_sd = opt.noise;
    spec.seed = opt.seed;

    const SweepResult result =
        opt.model == "mlp" ? run_mlp_sweep(spec) : run_tree_sweep(spec);
    if (opt.out.empty()) {
        std::cout << result.csv;
    } else {
        std::ofstream file(opt.out);
        if (!file) throw std::runtime_error("cannot write file: " + opt.out);
        file << result.csv;
    }
    std::cout << "verdict: " << result.verdict << "\n";
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
    std::string generator = "axis-steps";
    std::size_t n = 0;
    double noise = 0.0;
    std::uint64_t seed = 42;
    std::string out;
};

void run_synth(const SynthOptions& opt) {
    const Dataset ds = synthesize({opt.generator, opt.n, opt.noise, opt.seed});
    write_csv(ds, opt.out);
    std::cout << "wrote " << ds.n << " rows to " << opt.out << "\n";
}

// ---------------------------------------------------------------------------
// Config files. The parser only consults config files attached to the top
// level, never to a subcommand, so the per-subcommand "--config" is layered in
// by hand: every key the command line does not already mention is appended as
// a regular "--key value" pair before parsing. Explicit flags therefore win,
// and unknown keys fail with the parser's own diagnostics.

void add_config_flag(CLI::App* cmd) {
    static std::string sink;  // consumed by apply_config_layer before parsing
    cmd->add_option("--config", sink,
                    "Flat key=value file supplying any of these flags");
}

void apply_config_layer(std::vector<std::string>& args) {
    if (args.empty() || args.front().empty() || args.front().front() == '-')
        return;

    std::string path;
    for (std::size_t i = 1; i < args.size() && path.empty(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty()) return;

    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open config file: " + path);

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos || trim(text.substr(0, eq)).empty())
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key=value");
        const std::string flag = "--" + trim(text.substr(0, eq));
        bool given = false;
        for (const std::string& arg : args)
            if (arg == flag || arg.rfind(flag + "=", 0) == 0) given = true;
        if (!given) {
            args.push_back(flag);
            args.push_back(trim(text.substr(eq + 1)));
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regression tree / sigmoid network hybrid toolkit", "rtann"};
    app.require_subcommand(1);

    TrainOptions train;
    CLI::App* train_cmd = app.add_subcommand("train", "Fit a model and save it");
    add_config_flag(train_cmd);
    train_cmd->add_option("--data", train.data, "Training CSV")->required();
    train_cmd->add_option("--target", train.target, "Target column name")
        ->required();
    train_cmd->add_option("--kind", train.kind, "Model kind")
        ->required()
        ->check(CLI::IsMember(kModelKinds));
    train_cmd->add_option("--out", train.out, "Model file path")->required();
    train_cmd->add_option("--test-fraction", train.test_fraction,
                          "Hold this fraction out of training");
    train_cmd->add_option("--seed", train.seed, "RNG seed (default 42)");
    add_tree_flags(train_cmd, train.tree);
    add_mlp_flags(train_cmd, train.mlp);
    train_cmd->add_option("--top-m", train.top_m,
                          "Keep only the top-m tree-selected features");
    train_cmd->add_option("--components", train.components,
                          "PLS component count (default min(2, p))");
    train_cmd->callback([&] { run_train(train); });

    PredictOptions predict;
    CLI::App* predict_cmd =
        app.add_subcommand("predict", "Apply a saved model to feature rows");
    add_config_flag(predict_cmd);
    predict_cmd->add_option("--model", predict.model, "Model file")->required();
    predict_cmd->add_option("--data", predict.data, "Feature CSV")->required();
    predict_cmd->add_option("--out", predict.out,
                            "Prediction CSV path (default stdout)");
    predict_cmd->callback([&] { run_predict(predict); });

    EvaluateOptions evaluate;
    CLI::App* evaluate_cmd =
        app.add_subcommand("evaluate", "Score a saved model on labeled rows");
    add_config_flag(evaluate_cmd);
    evaluate_cmd->add_option("--model", evaluate.model, "Model file")->required();
    evaluate_cmd->add_option("--data", evaluate.data, "Labeled CSV")->required();
    evaluate_cmd->add_option("--csv-out", evaluate.csv_out,
                             "Write the metric table as CSV");
    evaluate_cmd->callback([&] { run_evaluate(evaluate); });

    BenchmarkOptions benchmark;
    CLI::App* benchmark_cmd = app.add_subcommand(
        "benchmark", "Compare all model kinds under one split");
    add_config_flag(benchmark_cmd);
    benchmark_cmd->add_option("--data", benchmark.data, "CSV file")->required();
    benchmark_cmd->add_option("--target", benchmark.target, "Target column name")
        ->required();
    benchmark_cmd->add_option("--test-fraction", benchmark.test_fraction,
                              "Holdout fraction");
    benchmark_cmd->add_option("--folds", benchmark.folds,
                              "Cross-validation fold count");
    benchmark_cmd->add_option("--seed", benchmark.seed, "RNG seed (default 42)");
    add_mlp_flags(benchmark_cmd, benchmark.mlp);
    benchmark_cmd->add_option("--out-in-sample", benchmark.out_in_sample,
                              "Write the in-sample table as CSV");
    benchmark_cmd->add_option("--out-holdout", benchmark.out_holdout,
                              "Write the holdout table as CSV");
    benchmark_cmd->callback([&] { run_benchmark(benchmark); });

    SweepOptions sweep;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Risk trend over growing sample sizes");
    add_config_flag(sweep_cmd);
    sweep_cmd->add_option("--model", sweep.model, "tree or mlp")
        ->check(CLI::IsMember({"tree", "mlp"}));
    sweep_cmd->add_option("--generator", sweep.generator, "Synthetic generator");
    sweep_cmd->add_option("--sizes", sweep.sizes, "Sample sizes, ascending")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--schedule", sweep.schedule,
                          "sublog or linear-violation");
    sweep_cmd->add_option("--repeats", sweep.repeats, "Repeats per size");
    sweep_cmd->add_option("--noise", sweep.noise, "Noise standard deviation");
    sweep_cmd->add_option("--seed", sweep.seed, "RNG seed (default 42)");
    sweep_cmd->add_option("--out", sweep.out, "Sweep CSV path (default stdout)");
    sweep_cmd->callback([&] { run_sweep(sweep); });

    SynthOptions synth;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Write a synthetic dataset to CSV");
    add_config_flag(synth_cmd);
    synth_cmd->add_option("--generator", synth.generator, "Synthetic generator");
    synth_cmd->add_option("--n", synth.n, "Row count")->required();
    synth_cmd->add_option("--noise", synth.noise, "Noise standard deviation");
    synth_cmd->add_option("--seed", synth.seed, "RNG seed (default 42)");
    synth_cmd->add_option("--out", synth.out, "Output CSV path")->required();
    synth_cmd->callback([&] { run_synth(synth); });

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        apply_config_layer(args);
        std::reverse(args.begin(), args.end());  // the parser pops from the back
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
