#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rtann/dataset.hpp"

namespace testutil {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::string tmpl =
            (std::filesystem::temp_directory_path() / "rtann_test_XXXXXX").string();
        if (::mkdtemp(tmpl.data()) == nullptr) {
            throw std::runtime_error("mkdtemp failed");
        }
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path file(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Hand-assembled dataset for tests that need exact control over every cell.
inline rtann::Dataset make_dataset(std::vector<std::string> names,
                                   std::vector<double> features,
                                   std::vector<double> targets, double bound) {
    rtann::Dataset ds;
    ds.column_names = std::move(names);
    ds.n = targets.size();
    ds.p = ds.column_names.size() - 1;
    ds.features = std::move(features);
    ds.targets = std::move(targets);
    ds.response_bound = bound;
    ds.validate();
    return ds;
}

/// Uniform random dataset on [-1,1] cells, seeded; independent of library RNG use.
inline rtann::Dataset random_dataset(std::size_t n, std::size_t p, std::uint64_t seed,
                                     double bound = 10.0) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    rtann::Dataset ds;
    for (std::size_t j = 0; j < p; ++j) ds.column_names.push_back("f" + std::to_string(j));
    ds.column_names.push_back("y");
    ds.n = n;
    ds.p = p;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) ds.features.push_back(unit(eng));
        ds.targets.push_back(bound * unit(eng));
    }
    ds.response_bound = bound;
    ds.validate();
    return ds;
}

inline double rmse_against(const rtann::Dataset& ds, const std::vector<double>& yhat) {
    double sum = 0.0;
    for (std::size_t i = 0; i < ds.n; ++i) {
        const double d = ds.targets[i] - yhat[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(ds.n));
}

}  // namespace testutil
