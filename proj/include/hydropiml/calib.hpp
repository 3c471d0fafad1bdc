#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "hydropiml/abcd.hpp"
#include "hydropiml/metrics.hpp"

namespace hydropiml {

// ============================================================================
// abcd calibration: deterministic grid seeding + Nelder-Mead refinement,
// maximizing NSE of simulated streamflow over the training period.
// ============================================================================

/// Box bounds on (a, b, c, d).
struct ParamBounds {
    std::array<double, 4> lower{0.1, 1.0, 0.0, 0.01};
    std::array<double, 4> upper{1.0, 1000.0, 1.0, 10.0};

    void validate() const {
        for (std::size_t i = 0; i < 4; ++i) {
            if (!(lower[i] < upper[i])) {
                throw std::invalid_argument("ParamBounds: lower must be < upper");
            }
        }
        if (!(lower[0] > 0.0 && upper[0] <= 1.0)) {
            throw std::invalid_argument("ParamBounds: a range must lie in (0, 1]");
        }
        if (!(lower[1] > 0.0)) throw std::invalid_argument("ParamBounds: b must be > 0");
        if (!(lower[2] >= 0.0 && upper[2] <= 1.0)) {
            throw std::invalid_argument("ParamBounds: c range must lie in [0, 1]");
        }
        if (!(lower[3] > 0.0)) throw std::invalid_argument("ParamBounds: d must be > 0");
    }

    std::array<double, 4> clip(std::array<double, 4> x) const {
        for (std::size_t i = 0; i < 4; ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
        return x;
    }
};

struct CalibrationResult {
    AbcdParams params;
    double train_nse = 0.0;
    std::size_t n_objective_evals = 0;
    std::size_t warmup_months = 0;
    bool converged = false;

    friend bool operator==(const CalibrationResult&, const CalibrationResult&) = default;
};

/// NSE of simulated vs observed streamflow after discarding the warm-up
/// window. Simulation starts from `init` (defaults downstream).
inline double calibration_objective(const AbcdParams& params, const ForcingSeries& forcing,
                                    std::span<const double> observed_q,
                                    std::size_t warmup_months,
                                    const AbcdState& init = default_initial_state()) {
    if (forcing.size() != observed_q.size()) {
        throw std::invalid_argument("calibration_objective: forcing/observed length mismatch");
    }
    if (forcing.size() < warmup_months + 2) {
        throw std::invalid_argument("calibration_objective: insufficient length after warm-up");
    }
    const auto trajectory = simulate(params, init, forcing);
    std::vector<double> sim;
    sim.reserve(forcing.size() - warmup_months);
    for (std::size_t i = warmup_months; i < trajectory.size(); ++i) {
        sim.push_back(trajectory[i].fluxes.q);
    }
    return nse(observed_q.subspan(warmup_months), sim);
}

/// Full Cartesian seed grid: b is sampled log-uniformly, the others uniformly.
/// Iteration order is lexicographic in (a, b, c, d), so the first candidate is
/// the all-lower-bounds corner.
inline std::vector<std::array<double, 4>> grid_seed(const ParamBounds& bounds,
                                                    std::size_t points_per_axis) {
    bounds.validate();
    if (points_per_axis < 2) {
        throw std::invalid_argument("grid_seed: points_per_axis must be >= 2");
    }
    const std::size_t k = points_per_axis;
    std::array<std::vector<double>, 4> axes;
    for (std::size_t p = 0; p < 4; ++p) {
        axes[p].resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(k - 1);
            if (p == 1) {
                axes[p][i] = std::exp(std::log(bounds.lower[p]) +
                                      t * (std::log(bounds.upper[p]) - std::log(bounds.lower[p])));
            } else {
                axes[p][i] = bounds.lower[p] + t * (bounds.upper[p] - bounds.lower[p]);
            }
        }
        axes[p].front() = bounds.lower[p];
        axes[p].back() = bounds.upper[p];
    }
    std::vector<std::array<double, 4>> out;
    out.reserve(k * k * k * k);
    for (double a : axes[0]) {
        for (double b : axes[1]) {
            for (double c : axes[2]) {
                for (double d : axes[3]) out.push_back({a, b, c, d});
            }
        }
    }
    return out;
}

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    std::size_t n_evals = 0;
};

/// Nelder-Mead simplex maximization with coefficients (reflection 1,
/// expansion 2, contraction 0.5, shrink 0.5). Trial points are clipped to the
/// bounds; convergence is declared when the spread of vertex scores drops
/// below `tol`. On iteration exhaustion the best vertex so far is returned
/// with converged = false.
inline SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                                 std::span<const double> start,
                                 std::span<const double> lower, std::span<const double> upper,
                                 double tol = 1e-6, std::size_t max_iter = 2000) {
    const std::size_t dim = start.size();
    if (dim == 0 || lower.size() != dim || upper.size() != dim) {
        throw std::invalid_argument("nelder_mead: dimension mismatch");
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (!(lower[i] <= start[i] && start[i] <= upper[i])) {
            throw std::invalid_argument("nelder_mead: start outside bounds");
        }
    }

    SimplexResult result;
    auto clip = [&](std::vector<double> x) {
        for (std::size_t i = 0; i < dim; ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
        return x;
    };
    // minimize g = -f internally
    auto g = [&](const std::vector<double>& x) {
        ++result.n_evals;
        return -f(x);
    };

    std::vector<std::vector<double>> vertex(dim + 1, std::vector<double>(start.begin(), start.end()));
    for (std::size_t i = 0; i < dim; ++i) {
        const double step = 0.05 * (upper[i] - lower[i]);
        double moved = vertex[i + 1][i] + step;
        if (moved > upper[i]) moved = vertex[i + 1][i] - step;  // step inward at the edge
        vertex[i + 1][i] = std::clamp(moved, lower[i], upper[i]);
    }
    std::vector<double> score(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) score[i] = g(vertex[i]);

    std::vector<std::size_t> order(dim + 1);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim - 1];

        if (score[worst] - score[best] < tol) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += vertex[i][k];
        }
        for (double& v : centroid) v /= static_cast<double>(dim);

        auto blend = [&](const std::vector<double>& towards, double coeff) {
            std::vector<double> x(dim);
            for (std::size_t k = 0; k < dim; ++k) {
                x[k] = centroid[k] + coeff * (towards[k] - centroid[k]);
            }
            return clip(std::move(x));
        };

        const auto reflected = blend(vertex[worst], -1.0);
        const double reflected_score = g(reflected);
        if (reflected_score < score[best]) {
            const auto expanded = blend(reflected, 2.0);
            const double expanded_score = g(expanded);
            if (expanded_score < reflected_score) {
                vertex[worst] = expanded;
                score[worst] = expanded_score;
            } else {
                vertex[worst] = reflected;
                score[worst] = reflected_score;
            }
        } else if (reflected_score < score[second_worst]) {
            vertex[worst] = reflected;
            score[worst] = reflected_score;
        } else {
            const bool outside = reflected_score < score[worst];
            const auto contracted =
                outside ? blend(reflected, 0.5) : blend(vertex[worst], 0.5);
            const double contracted_score = g(contracted);
            const double accept_below = outside ? reflected_score : score[worst];
            if (contracted_score <= accept_below) {
                vertex[worst] = contracted;
                score[worst] = contracted_score;
            } else {
                for (std::size_t i = 0; i <= dim; ++i) {  // shrink toward the best vertex
                    if (i == best) continue;
                    for (std::size_t k = 0; k < dim; ++k) {
                        vertex[i][k] = vertex[best][k] + 0.5 * (vertex[i][k] - vertex[best][k]);
                    }
                    score[i] = g(vertex[i]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= dim; ++i) {
        if (score[i] < score[best]) best = i;
    }
    result.x = vertex[best];
    result.value = -score[best];
    return result;
}

/// Grid seeding plus top-5 multi-start simplex refinement. Deterministic: the
/// grid order is fixed, refinement candidates are ranked by (score, grid
/// index), and the seed itself stays a candidate so refinement never loses.
inline CalibrationResult calibrate(const ForcingSeries& forcing,
                                   std::span<const double> observed_q,
                                   const ParamBounds& bounds = {},
                                   std::size_t warmup_months = 24,
                                   std::size_t points_per_axis = 5,
                                   const AbcdState& init = default_initial_state()) {
    bounds.validate();
    if (forcing.size() != observed_q.size()) {
        throw std::invalid_argument("calibrate: forcing/observed length mismatch");
    }
    if (forcing.size() < 48) {
        throw std::invalid_argument("calibrate: need at least 48 months of paired data");
    }

    std::size_t n_evals = 0;
    auto objective = [&](std::span<const double> x) {
        ++n_evals;
        return calibration_objective(AbcdParams(x[0], x[1], x[2], x[3]), forcing, observed_q,
                                     warmup_months, init);
    };

    const auto seeds = grid_seed(bounds, points_per_axis);
    std::vector<double> seed_score(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) seed_score[i] = objective(seeds[i]);

    std::vector<std::size_t> rank(seeds.size());
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
        if (seed_score[a] != seed_score[b]) return seed_score[a] > seed_score[b];
        return a < b;  // tie: lowest lexicographic grid index
    });

    const std::size_t n_starts = std::min<std::size_t>(5, seeds.size());
    struct Candidate {
        std::array<double, 4> x;
        double value;
        bool converged;
        std::size_t seed_index;
    };
    std::vector<Candidate> candidates;
    // n_evals is shared mutable state; keep refinement sequential so the
    // count (and thus the result struct) is reproducible.
    for (std::size_t s = 0; s < n_starts; ++s) {
        const std::size_t seed_index = rank[s];
        const auto refined =
            nelder_mead([&](std::span<const double> x) { return objective(x); },
                        seeds[seed_index], bounds.lower, bounds.upper);
        Candidate cand{{refined.x[0], refined.x[1], refined.x[2], refined.x[3]},
                       refined.value, refined.converged, seed_index};
        if (seed_score[seed_index] > cand.value) {  // never lose the raw seed
            cand = {seeds[seed_index], seed_score[seed_index], refined.converged, seed_index};
        }
        candidates.push_back(cand);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (candidates[i].value > candidates[best].value ||
            (candidates[i].value == candidates[best].value &&
             candidates[i].seed_index < candidates[best].seed_index)) {
            best = i;
        }
    }
    const auto& win = candidates[best];
    const auto x = bounds.clip(win.x);
    return CalibrationResult{AbcdParams(x[0], x[1], x[2], x[3]), win.value, n_evals,
                             warmup_months, win.converged};
}

}  // namespace hydropiml
