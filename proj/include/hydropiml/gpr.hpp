#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydropiml/linalg.hpp"
#include "hydropiml/regress.hpp"

namespace hydropiml {

// ============================================================================
// Gaussian process regression, zero prior mean, RBF kernel
//   k(x, x') = sigma_f^2 exp(-||x - x'||^2 / (2 l^2))
// ============================================================================

inline constexpr std::size_t kGprDefaultTrainCap = 5000;  // fit cost is cubic in n

struct GprModel {
    DesignMatrix train_x;
    std::vector<double> train_y;
    double sigma_f2 = 1.0;
    double length_scale = 1.0;
    double sigma_n2 = 0.0;
    double jitter = 0.0;  // diagonal added to reach positive definiteness

    // derived at fit time
    std::vector<double> chol_lower;  // n x n, row-major
    std::vector<double> alpha;       // (K + sigma_n^2 I)^-1 y

    std::vector<double> predict_mean(const DesignMatrix& x) const;

    friend bool operator==(const GprModel& a, const GprModel& b) {
        return a.train_x == b.train_x && a.train_y == b.train_y &&
               a.sigma_f2 == b.sigma_f2 && a.length_scale == b.length_scale &&
               a.sigma_n2 == b.sigma_n2;
    }
};

struct GprPrediction {
    std::vector<double> mean;
    std::vector<double> variance;  // latent variance, clamped at 0
};

namespace detail {

inline double rbf_kernel(std::span<const double> a, std::span<const double> b,
                         double sigma_f2, double length_scale) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        d2 += diff * diff;
    }
    return sigma_f2 * std::exp(-d2 / (2.0 * length_scale * length_scale));
}

}  // namespace detail

inline GprModel gpr_fit(const DesignMatrix& x, std::span<const double> y, double sigma_f2,
                        double length_scale, double sigma_n2,
                        std::size_t train_cap = kGprDefaultTrainCap) {
    detail::check_xy(x, y);
    if (!(sigma_f2 > 0.0)) throw std::invalid_argument("gpr_fit: sigma_f2 must be > 0");
    if (!(length_scale > 0.0)) {
        throw std::invalid_argument("gpr_fit: length_scale must be > 0");
    }
    if (!(sigma_n2 >= 0.0)) throw std::invalid_argument("gpr_fit: sigma_n2 must be >= 0");
    if (x.rows() > train_cap) {
        throw std::invalid_argument("gpr_fit: training set exceeds the cubic-cost cap of " +
                                    std::to_string(train_cap) + " rows");
    }

    const std::size_t n = x.rows();
    GprModel model{x, std::vector<double>(y.begin(), y.end()), sigma_f2, length_scale,
                   sigma_n2, 0.0, {}, {}};

    std::vector<double> kernel(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double k =
                detail::rbf_kernel(x.row(i), x.row(j), sigma_f2, length_scale);
            kernel[i * n + j] = k;
            kernel[j * n + i] = k;
        }
        kernel[i * n + i] += sigma_n2;
    }

    // jitter ladder: 0, 1e-10, 1e-9, ..., 1e-4
    double jitter = 0.0;
    while (true) {
        model.chol_lower = kernel;
        if (jitter > 0.0) {
            for (std::size_t i = 0; i < n; ++i) model.chol_lower[i * n + i] += jitter;
        }
        if (linalg::cholesky_lower_inplace(model.chol_lower, n)) break;
        jitter = jitter == 0.0 ? 1e-10 : jitter * 10.0;
        if (jitter > 1e-4) {
            throw std::runtime_error("gpr_fit: kernel matrix not positive definite after jitter");
        }
    }
    model.jitter = jitter;
    model.alpha = linalg::backward_solve(model.chol_lower, n,
                                         linalg::forward_solve(model.chol_lower, n,
                                                               model.train_y));
    return model;
}

/// Posterior mean and latent variance at the query points.
inline GprPrediction gpr_predict(const GprModel& model, const DesignMatrix& x_star) {
    if (x_star.cols() != model.train_x.cols()) {
        throw std::invalid_argument("gpr_predict: column count mismatch");
    }
    const std::size_t n = model.train_x.rows();
    GprPrediction out;
    out.mean.reserve(x_star.rows());
    out.variance.reserve(x_star.rows());
    std::vector<double> k_star(n);
    for (std::size_t q = 0; q < x_star.rows(); ++q) {
        for (std::size_t i = 0; i < n; ++i) {
            k_star[i] = detail::rbf_kernel(x_star.row(q), model.train_x.row(i),
                                           model.sigma_f2, model.length_scale);
        }
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += k_star[i] * model.alpha[i];
        const auto v = linalg::forward_solve(model.chol_lower, n, k_star);
        double var = model.sigma_f2;
        for (double vi : v) var -= vi * vi;
        out.mean.push_back(mean);
        out.variance.push_back(std::max(0.0, var));
    }
    return out;
}

inline std::vector<double> GprModel::predict_mean(const DesignMatrix& x) const {
    return gpr_predict(*this, x).mean;
}

}  // namespace hydropiml
