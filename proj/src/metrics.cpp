#include "rtann/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace rtann {

namespace {

std::string two_decimals(const std::optional<double>& value) {
    if (!value) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", *value);
    return buf;
}

}  // namespace

MetricsReport evaluate(std::span<const double> y, std::span<const double> yhat,
                       std::size_t k) {
    if (y.size() != yhat.size())
        throw std::invalid_argument("prediction and observation counts differ");
    const std::size_t n = y.size();
    if (n < 2) throw std::invalid_argument("evaluation needs at least two points");

    double abs_sum = 0.0, sq_sum = 0.0, ratio_sum = 0.0, y_sum = 0.0;
    bool mape_defined = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double err = y[i] - yhat[i];
        abs_sum += std::abs(err);
        sq_sum += err * err;
        y_sum += y[i];
        if (y[i] == 0.0)
            mape_defined = false;
        else
            ratio_sum += std::abs(err / y[i]);
    }

    MetricsReport report;
    report.n = n;
    report.k = k;
    report.mae = abs_sum / static_cast<double>(n);
    report.rmse = std::sqrt(sq_sum / static_cast<double>(n));
    if (mape_defined)
        report.mape_percent = 100.0 * ratio_sum / static_cast<double>(n);

    const double y_mean = y_sum / static_cast<double>(n);
    double sst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        sst += (y[i] - y_mean) * (y[i] - y_mean);
    if (sst > 0.0) {
        report.r2_percent = 100.0 * (1.0 - sq_sum / sst);
        if (n > k + 1)
            report.adj_r2_percent = adjusted_r2_percent(*report.r2_percent, n, k);
    }
    return report;
}

double adjusted_r2_percent(double r2_percent, std::size_t n, std::size_t k) {
    if (n <= k + 1)
        throw std::invalid_argument("adjusted R^2 needs n > k + 1");
    const double r2 = r2_percent / 100.0;
    const double adj = 1.0 - (1.0 - r2) * static_cast<double>(n - 1) /
                                 static_cast<double>(n - k - 1);
    return 100.0 * adj;
}

ComparisonTable comparison_table(const std::vector<ComparisonRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("comparison table needs rows");

    const std::vector<std::string> headers = {"model", "mae",  "rmse",
                                              "mape",  "r2",   "adj_r2"};
    std::vector<std::vector<std::string>> cells;
    cells.push_back(headers);
    for (const ComparisonRow& row : rows) {
        const MetricsReport& m = row.metrics;
        cells.push_back({row.model, two_decimals(m.mae), two_decimals(m.rmse),
                         two_decimals(m.mape_percent), two_decimals(m.r2_percent),
                         two_decimals(m.adj_r2_percent)});
    }

    std::vector<std::size_t> widths(headers.size(), 0);
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());

    ComparisonTable table;
    std::ostringstream text;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) text << "  ";
            // Model column left-aligned, numeric columns right-aligned.
            const std::string pad(widths[c] - row[c].size(), ' ');
            text << (c == 0 ? row[c] + pad : pad + row[c]);
        }
        text << "\n";
    }
    table.text = text.str();

    std::ostringstream csv;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) csv << ",";
            csv << row[c];
        }
        csv << "\n";
    }
    table.csv = csv.str();
    return table;
}

}  // namespace rtann
