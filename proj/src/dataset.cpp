#include "rtann/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace rtann {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

double parse_cell(const std::string& cell, std::size_t file_row, std::size_t col) {
    const std::string t = trim(cell);
    const char* begin = t.c_str();
    char* end = nullptr;
    errno = 0;
    double value = std::strtod(begin, &end);
    if (t.empty() || end != begin + t.size() || !std::isfinite(value)) {
        throw std::runtime_error("non-numeric cell \"" + cell + "\" at row " +
                                 std::to_string(file_row) + ", column " +
                                 std::to_string(col));
    }
    return value;
}

double mean_axis_steps(std::span<const double> x) {
    return x[0] < 0.5 ? 0.0 : 10.0;
}

double mean_friedman_like(std::span<const double> x) {
    const double pi = 3.14159265358979323846;
    return 10.0 * std::sin(pi * x[0] * x[1]) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) +
           10.0 * x[3] + 5.0 * x[4];
}

double mean_linear(std::span<const double> x) {
    return 1.0 + 2.0 * x[0] - 3.0 * x[1] + 0.5 * x[2];
}

std::vector<std::string> numbered_columns(std::size_t p) {
    std::vector<std::string> names;
    names.reserve(p + 1);
    for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
    names.push_back("y");
    return names;
}

const std::vector<GeneratorInfo>& generators() {
    static const std::vector<GeneratorInfo> table = {
        {"axis-steps", 2, 15.0, numbered_columns(2), &mean_axis_steps},
        {"friedman-like", 5, 35.0, numbered_columns(5), &mean_friedman_like},
        {"linear", 3, 5.0, numbered_columns(3), &mean_linear},
    };
    return table;
}

}  // namespace

void Dataset::validate() const {
    if (n < 1) throw std::invalid_argument("dataset needs at least one row");
    if (p < 1) throw std::invalid_argument("dataset needs at least one feature");
    if (column_names.size() != p + 1)
        throw std::invalid_argument("expected " + std::to_string(p + 1) +
                                    " column names, got " +
                                    std::to_string(column_names.size()));
    if (features.size() != n * p)
        throw std::invalid_argument("feature matrix size mismatch");
    if (targets.size() != n)
        throw std::invalid_argument("target vector size mismatch");
    for (double v : features)
        if (!std::isfinite(v))
            throw std::invalid_argument("non-finite feature value");
    for (double v : targets) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite target value");
        if (std::abs(v) > response_bound)
            throw std::invalid_argument("target exceeds response bound");
    }
}

double Standardization::apply_one(double value, std::size_t col) const {
    if (constant[col]) return 0.0;
    return (value - means[col]) / sds[col];
}

double Standardization::invert_one(double z, std::size_t col) const {
    if (constant[col]) return means[col];
    return z * sds[col] + means[col];
}

void Standardization::apply_row(std::span<const double> in, std::span<double> out) const {
    for (std::size_t j = 0; j < columns(); ++j) out[j] = apply_one(in[j], j);
}

Dataset load_csv(const std::string& path, const std::string& target_column) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(file, line)) {
        if (!trim(line).empty()) lines.push_back(line);
    }
    if (lines.empty()) throw std::runtime_error("empty file: " + path);

    const std::vector<std::string> header = split_line(lines[0]);
    const auto target_it = std::find(header.begin(), header.end(), target_column);
    if (target_it == header.end())
        throw std::invalid_argument("unknown target column: " + target_column);
    const std::size_t target_idx =
        static_cast<std::size_t>(target_it - header.begin());
    const std::size_t total_cols = header.size();
    if (total_cols < 2)
        throw std::runtime_error("need at least one feature besides the target");
    if (lines.size() < 2) throw std::runtime_error("no data rows in " + path);

    Dataset ds;
    ds.p = total_cols - 1;
    ds.n = lines.size() - 1;
    for (std::size_t j = 0; j < total_cols; ++j)
        if (j != target_idx) ds.column_names.push_back(header[j]);
    ds.column_names.push_back(header[target_idx]);

    ds.features.reserve(ds.n * ds.p);
    ds.targets.reserve(ds.n);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> cells = split_line(lines[i]);
        if (cells.size() != total_cols)
            throw std::runtime_error("row " + std::to_string(i + 1) + " has " +
                                     std::to_string(cells.size()) +
                                     " cells, expected " +
                                     std::to_string(total_cols));
        for (std::size_t j = 0; j < total_cols; ++j) {
            const double value = parse_cell(cells[j], i + 1, j + 1);
            if (j == target_idx)
                ds.targets.push_back(value);
            else
                ds.features.push_back(value);
        }
    }

    double max_abs = 0.0;
    for (double t : ds.targets) max_abs = std::max(max_abs, std::abs(t));
    ds.response_bound = std::ceil(max_abs);
    ds.validate();
    return ds;
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write file: " + path);
    for (std::size_t j = 0; j + 1 < ds.column_names.size(); ++j)
        file << ds.column_names[j] << ',';
    file << ds.column_names.back() << '\n';
    for (std::size_t i = 0; i < ds.n; ++i) {
        for (std::size_t j = 0; j < ds.p; ++j)
            file << format_double(ds.feature(i, j)) << ',';
        file << format_double(ds.targets[i]) << '\n';
    }
    if (!file) throw std::runtime_error("write failed: " + path);
}

double efficiency(double inlet_ppm, double outlet_ppm) {
    if (inlet_ppm <= 0.0)
        throw std::domain_error("inlet concentration must be positive");
    if (outlet_ppm < 0.0)
        throw std::domain_error("outlet concentration must be nonnegative");
    return (inlet_ppm - outlet_ppm) * 100.0 / inlet_ppm;
}

std::pair<Dataset, Standardization> standardize(const Dataset& ds) {
    if (ds.n < 2)
        throw std::invalid_argument("standardize needs at least two rows");

    Standardization stats;
    stats.means.resize(ds.p);
    stats.sds.resize(ds.p);
    stats.constant.resize(ds.p);
    for (std::size_t j = 0; j < ds.p; ++j) {
        double sum = 0.0, lo = ds.feature(0, j), hi = lo;
        for (std::size_t i = 0; i < ds.n; ++i) {
            const double v = ds.feature(i, j);
            sum += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double mean = sum / static_cast<double>(ds.n);
        stats.means[j] = mean;
        if (lo == hi) {
            stats.constant[j] = true;
            stats.sds[j] = 0.0;
            continue;
        }
        double ss = 0.0;
        for (std::size_t i = 0; i < ds.n; ++i) {
            const double d = ds.feature(i, j) - mean;
            ss += d * d;
        }
        stats.constant[j] = false;
        stats.sds[j] = std::sqrt(ss / static_cast<double>(ds.n - 1));
    }

    Dataset out = ds;
    for (std::size_t i = 0; i < ds.n; ++i)
        for (std::size_t j = 0; j < ds.p; ++j)
            out.features[i * ds.p + j] = stats.apply_one(ds.feature(i, j), j);
    return {std::move(out), std::move(stats)};
}

SplitPlan split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("test fraction must lie in (0, 1)");
    const std::size_t test_count =
        static_cast<std::size_t>(std::floor(static_cast<double>(ds.n) * test_fraction));
    if (test_count < 1 || ds.n - test_count < 1)
        throw std::invalid_argument("split would leave an empty side");

    std::vector<std::size_t> order(ds.n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    SplitPlan plan;
    plan.seed = seed;
    plan.test_indices.assign(order.begin(),
                             order.begin() + static_cast<std::ptrdiff_t>(test_count));
    plan.train_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(test_count),
                              order.end());
    std::sort(plan.test_indices.begin(), plan.test_indices.end());
    std::sort(plan.train_indices.begin(), plan.train_indices.end());
    return plan;
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> rows) {
    if (rows.empty()) throw std::invalid_argument("subset needs at least one row");
    Dataset out;
    out.column_names = ds.column_names;
    out.n = rows.size();
    out.p = ds.p;
    out.response_bound = ds.response_bound;
    out.features.reserve(out.n * out.p);
    out.targets.reserve(out.n);
    for (std::size_t i : rows) {
        if (i >= ds.n) throw std::out_of_range("subset row index out of range");
        const auto r = ds.row(i);
        out.features.insert(out.features.end(), r.begin(), r.end());
        out.targets.push_back(ds.targets[i]);
    }
    return out;
}

const GeneratorInfo& generator_info(const std::string& name) {
    for (const GeneratorInfo& g : generators())
        if (g.name == name) return g;
    throw std::invalid_argument("unknown generator: " + name);
}

std::vector<std::string> generator_names() {
    std::vector<std::string> names;
    for (const GeneratorInfo& g : generators()) names.push_back(g.name);
    return names;
}

std::vector<double> sample_features(const GeneratorInfo& gen, std::size_t count,
                                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> features(count * gen.p);
    for (double& v : features) v = unit(rng);
    return features;
}

Dataset synthesize(const SynthSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("need at least one sample");
    if (spec.noise_sd < 0.0)
        throw std::invalid_argument("noise sd must be nonnegative");
    const GeneratorInfo& gen = generator_info(spec.generator);

    // One engine, features first then noise, so feature draws match
    // sample_features() with the same seed.
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);

    Dataset ds;
    ds.column_names = gen.column_names;
    ds.n = spec.n;
    ds.p = gen.p;
    ds.response_bound = gen.response_bound;
    ds.features.resize(spec.n * gen.p);
    for (double& v : ds.features) v = unit(rng);

    ds.targets.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        double y = gen.mean(ds.row(i));
        if (spec.noise_sd > 0.0) y += spec.noise_sd * noise(rng);
        ds.targets[i] = std::clamp(y, -gen.response_bound, gen.response_bound);
    }
    return ds;
}

std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

}  // namespace rtann
