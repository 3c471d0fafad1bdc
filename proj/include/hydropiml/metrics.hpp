#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace hydropiml {

namespace detail {

inline void check_paired(std::span<const double> observed,
                         std::span<const double> simulated) {
    if (observed.size() != simulated.size()) {
        throw std::invalid_argument("metrics: series lengths differ");
    }
    if (observed.size() < 2) {
        throw std::invalid_argument("metrics: need at least 2 points");
    }
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!std::isfinite(observed[i]) || !std::isfinite(simulated[i])) {
            throw std::invalid_argument("metrics: non-finite value");
        }
    }
}

}  // namespace detail

/// Nash-Sutcliffe efficiency, 1 - sum(S-O)^2 / sum(O-mean(O))^2. 1 is a
/// perfect fit, 0 matches the mean predictor. Undefined for constant observed
/// series.
inline double nse(std::span<const double> observed, std::span<const double> simulated) {
    detail::check_paired(observed, simulated);
    double mean_obs = 0.0;
    for (double o : observed) mean_obs += o;
    mean_obs /= static_cast<double>(observed.size());
    double sse = 0.0;
    double sso = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = simulated[i] - observed[i];
        const double d = observed[i] - mean_obs;
        sse += e * e;
        sso += d * d;
    }
    if (sso == 0.0) {
        throw std::invalid_argument("nse: undefined for constant observed series");
    }
    return 1.0 - sse / sso;
}

/// Percent bias, 100 * sum(S-O) / sum(O). Negative means under-prediction.
inline double pbias(std::span<const double> observed, std::span<const double> simulated) {
    detail::check_paired(observed, simulated);
    double diff = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        diff += simulated[i] - observed[i];
        total += observed[i];
    }
    if (total == 0.0) {
        throw std::invalid_argument("pbias: undefined for zero observed total");
    }
    return 100.0 * diff / total;
}

/// Root mean square error, sqrt(sum(S-O)^2 / n).
inline double rmse(std::span<const double> observed, std::span<const double> simulated) {
    detail::check_paired(observed, simulated);
    double sse = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = simulated[i] - observed[i];
        sse += e * e;
    }
    return std::sqrt(sse / static_cast<double>(observed.size()));
}

}  // namespace hydropiml
