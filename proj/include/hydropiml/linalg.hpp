#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hydropiml::linalg {

// Small dense helpers for the regression stack. Matrices are row-major
// std::vector<double> buffers with explicit dimension; everything here is
// sized for feature counts of a handful and kernel matrices of a few hundred.

/// In-place lower Cholesky factorization of a symmetric matrix (n x n,
/// row-major). Returns false if a pivot is not strictly positive. On success
/// the lower triangle holds L with A = L L^T; the upper triangle is left
/// untouched.
inline bool cholesky_lower_inplace(std::vector<double>& a, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
        if (!(diag > 0.0) || !std::isfinite(diag)) return false;
        const double ljj = std::sqrt(diag);
        a[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / ljj;
        }
    }
    return true;
}

/// Solves L z = b (forward substitution) for lower-triangular L.
inline std::vector<double> forward_solve(const std::vector<double>& l, std::size_t n,
                                         const std::vector<double>& b) {
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * z[k];
        z[i] = s / l[i * n + i];
    }
    return z;
}

/// Solves L^T x = z (back substitution) for lower-triangular L.
inline std::vector<double> backward_solve(const std::vector<double>& l, std::size_t n,
                                          const std::vector<double>& z) {
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = z[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * x[k];
        x[ii] = s / l[ii * n + ii];
    }
    return x;
}

/// Solves A x = b for symmetric positive definite A via Cholesky. Throws on a
/// non-positive-definite system.
inline std::vector<double> solve_spd(std::vector<double> a, std::size_t n,
                                     const std::vector<double>& b) {
    if (!cholesky_lower_inplace(a, n)) {
        throw std::runtime_error("solve_spd: matrix not positive definite");
    }
    return backward_solve(a, n, forward_solve(a, n, b));
}

}  // namespace hydropiml::linalg
