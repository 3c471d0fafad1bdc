#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hydropiml/regress.hpp"

namespace hydropiml {

// ============================================================================
// Chronological cross-validation and grid search
// ============================================================================

using HyperParams = std::map<std::string, double>;

/// Named hyperparameter axes; the Cartesian product is enumerated with the
/// last axis varying fastest, giving every cell a stable index.
struct HyperGrid {
    std::vector<std::pair<std::string, std::vector<double>>> axes;

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& [name, values] : axes) n *= values.size();
        return n;
    }
};

/// Expanding-window fold plan over chronologically ordered rows: the rows are
/// cut into k+1 contiguous blocks; fold i trains on blocks 0..i-1 and
/// validates on block i. Every training row strictly precedes its validation
/// block, so no fold ever trains on the future.
struct FoldPlan {
    struct Fold {
        std::size_t train_end;  // train rows are [0, train_end)
        std::size_t val_begin;
        std::size_t val_end;
    };
    std::vector<Fold> folds;
};

inline FoldPlan chronological_folds(std::size_t n_rows, std::size_t k_folds) {
    if (k_folds < 2) throw std::invalid_argument("chronological_folds: k_folds must be >= 2");
    if (n_rows < 2 * (k_folds + 1)) {
        throw std::invalid_argument("chronological_folds: fold too small to fit (" +
                                    std::to_string(n_rows) + " rows, " +
                                    std::to_string(k_folds) + " folds)");
    }
    FoldPlan plan;
    auto bound = [&](std::size_t i) { return i * n_rows / (k_folds + 1); };
    for (std::size_t i = 1; i <= k_folds; ++i) {
        plan.folds.push_back({bound(i), bound(i), bound(i + 1)});
    }
    return plan;
}

/// A fitter: given hyperparameters and training data, returns a predictor.
using FitFunction = std::function<std::function<std::vector<double>(const DesignMatrix&)>(
    const HyperParams&, const DesignMatrix&, std::span<const double>)>;

struct CvCell {
    HyperParams params;
    double mean_rmse;
};

struct GridSearchResult {
    HyperParams best;
    std::size_t best_index;
    std::vector<CvCell> table;  // one row per grid cell, in grid order
};

/// Exhaustive search over the grid, scored by mean validation RMSE across
/// expanding-window chronological folds. Ties keep the first cell in grid
/// order, so the result is deterministic and independent of evaluation order.
inline GridSearchResult grid_search(const FitFunction& fit, const HyperGrid& grid,
                                    const DesignMatrix& x, std::span<const double> y,
                                    std::size_t k_folds = 5) {
    if (grid.axes.empty()) throw std::invalid_argument("grid_search: empty grid");
    for (const auto& [name, values] : grid.axes) {
        if (values.empty()) {
            throw std::invalid_argument("grid_search: empty axis '" + name + "'");
        }
    }
    detail::check_xy(x, y);
    const auto plan = chronological_folds(x.rows(), k_folds);

    GridSearchResult result;
    std::vector<std::size_t> odometer(grid.axes.size(), 0);
    const std::size_t n_cells = grid.size();
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        HyperParams params;
        for (std::size_t a = 0; a < grid.axes.size(); ++a) {
            params[grid.axes[a].first] = grid.axes[a].second[odometer[a]];
        }

        double rmse_sum = 0.0;
        for (const auto& fold : plan.folds) {
            const auto train_x = x.slice_rows(0, fold.train_end);
            const std::vector<double> train_y(y.begin(), y.begin() + fold.train_end);
            const auto predictor = fit(params, train_x, train_y);
            const auto val_x = x.slice_rows(fold.val_begin, fold.val_end);
            const auto pred = predictor(val_x);
            double sse = 0.0;
            for (std::size_t i = 0; i < pred.size(); ++i) {
                const double e = pred[i] - y[fold.val_begin + i];
                sse += e * e;
            }
            rmse_sum += std::sqrt(sse / static_cast<double>(fold.val_end - fold.val_begin));
        }
        result.table.push_back({params, rmse_sum / static_cast<double>(plan.folds.size())});

        // advance odometer, last axis fastest
        for (std::size_t a = grid.axes.size(); a-- > 0;) {
            if (++odometer[a] < grid.axes[a].second.size()) break;
            odometer[a] = 0;
        }
    }

    result.best_index = 0;
    for (std::size_t i = 1; i < result.table.size(); ++i) {
        if (result.table[i].mean_rmse < result.table[result.best_index].mean_rmse) {
            result.best_index = i;
        }
    }
    result.best = result.table[result.best_index].params;
    return result;
}

}  // namespace hydropiml
