#pragma once

// Fidelity of a surrogate to the black box: mean absolute error and the
// coefficient of determination, both unweighted.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpslime/error.hpp"
#include "mpslime/surrogate.hpp"

namespace mpslime {

inline double mae(std::span<const double> y_true, std::span<const double> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw ShapeError("mae: length mismatch " + std::to_string(y_true.size()) + " vs " +
                         std::to_string(y_pred.size()));
    }
    if (y_true.empty()) throw ShapeError("mae: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) sum += std::abs(y_true[i] - y_pred[i]);
    return sum / static_cast<double>(y_true.size());
}

// 1 - SSE/SST. Throws UndefinedMetricError when y_true is constant.
inline double r_squared(std::span<const double> y_true, std::span<const double> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw ShapeError("r_squared: length mismatch " + std::to_string(y_true.size()) + " vs " +
                         std::to_string(y_pred.size()));
    }
    if (y_true.size() < 2) throw ShapeError("r_squared needs at least 2 values");
    if (std::all_of(y_true.begin(), y_true.end(), [&](double v) { return v == y_true[0]; })) {
        throw UndefinedMetricError("R^2 undefined: true values are constant (SST = 0)");
    }
    double mean = 0.0;
    for (double v : y_true) mean += v;
    mean /= static_cast<double>(y_true.size());
    double sse = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        sse += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
        sst += (y_true[i] - mean) * (y_true[i] - mean);
    }
    if (sst == 0.0) throw UndefinedMetricError("R^2 undefined: true values are constant (SST = 0)");
    return 1.0 - sse / sst;
}

struct FidelityReport {
    double mae = 0.0;
    std::optional<double> r_squared;  // empty when undefined
    std::string r_squared_reason;     // why r_squared is empty
    double pred_prob_at_x = 0.0;      // g at the all-ones mask
    double true_prob_at_x = 0.0;      // f(x) at the target class
    std::size_t n_rows = 0;
};

// Metrics of `model` against the responses stored in `dataset`.
inline FidelityReport fidelity_report(const SurrogateModel& model, const PerturbedDataset& dataset,
                                      double f_at_x) {
    if (dataset.rows.empty()) throw ShapeError("fidelity_report: empty dataset");
    if (model.weights.size() != dataset.num_features) {
        throw ShapeError("fidelity_report: model dimension does not match dataset");
    }
    std::vector<double> y_true, y_pred;
    y_true.reserve(dataset.size());
    y_pred.reserve(dataset.size());
    for (const auto& row : dataset.rows) {
        y_true.push_back(row.response);
        y_pred.push_back(surrogate_predict(model, row.mask));
    }
    FidelityReport report;
    report.mae = mae(y_true, y_pred);
    try {
        report.r_squared = r_squared(y_true, y_pred);
    } catch (const Error& e) {
        report.r_squared_reason = e.what();
    }
    report.pred_prob_at_x = surrogate_predict(model, PerturbationMask::ones(dataset.num_features));
    report.true_prob_at_x = f_at_x;
    report.n_rows = dataset.size();
    return report;
}

} // namespace mpslime
