#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "hydropiml/linalg.hpp"

namespace hydropiml {

// ============================================================================
// Design matrix
// ============================================================================

/// Row-major n x m covariate matrix, n >= 1 samples, m >= 1 features.
class DesignMatrix {
  public:
    DesignMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
        if (rows == 0 || cols == 0) {
            throw std::invalid_argument("DesignMatrix: need at least 1 row and 1 column");
        }
    }

    static DesignMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty() || rows.front().empty()) {
            throw std::invalid_argument("DesignMatrix: need at least 1 row and 1 column");
        }
        DesignMatrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) {
                throw std::invalid_argument("DesignMatrix: ragged rows");
            }
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    /// Single-column matrix wrapping a vector (used for target scaling).
    static DesignMatrix column(std::span<const double> values) {
        DesignMatrix m(values.size(), 1);
        for (std::size_t i = 0; i < values.size(); ++i) m(i, 0) = values[i];
        return m;
    }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    std::vector<double> col(std::size_t j) const {
        std::vector<double> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
        return out;
    }

    /// Copy of rows [begin, end).
    DesignMatrix slice_rows(std::size_t begin, std::size_t end) const {
        if (begin >= end || end > rows_) {
            throw std::invalid_argument("DesignMatrix::slice_rows: bad range");
        }
        DesignMatrix out(end - begin, cols_);
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) out(i - begin, j) = (*this)(i, j);
        }
        return out;
    }

    bool all_finite() const {
        for (double v : data_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    friend bool operator==(const DesignMatrix&, const DesignMatrix&) = default;

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

namespace detail {

inline void check_xy(const DesignMatrix& x, std::span<const double> y) {
    if (!x.all_finite()) throw std::invalid_argument("fit: non-finite design matrix");
    if (y.size() != x.rows()) throw std::invalid_argument("fit: X/y length mismatch");
    for (double v : y) {
        if (!std::isfinite(v)) throw std::invalid_argument("fit: non-finite target");
    }
}

struct Centered {
    std::vector<double> col_means;  // m
    double y_mean = 0.0;
    DesignMatrix xc;
    std::vector<double> yc;
};

inline Centered center(const DesignMatrix& x, std::span<const double> y) {
    const std::size_t n = x.rows();
    const std::size_t m = x.cols();
    Centered out{std::vector<double>(m, 0.0), 0.0, x, std::vector<double>(y.begin(), y.end())};
    for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x(i, j);
        out.col_means[j] = s / static_cast<double>(n);
    }
    for (double v : y) out.y_mean += v;
    out.y_mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) out.xc(i, j) -= out.col_means[j];
        out.yc[i] -= out.y_mean;
    }
    return out;
}

}  // namespace detail

// ============================================================================
// Min-max scaling
// ============================================================================

/// Per-feature min-max scaler: apply maps the training range onto [0, 1].
/// Constant features map to 0.5; invert restores the constant.
class MinMaxScaler {
  public:
    static MinMaxScaler fit(const DesignMatrix& train) {
        if (!train.all_finite()) throw std::invalid_argument("MinMaxScaler: non-finite input");
        MinMaxScaler s;
        s.min_.assign(train.cols(), 0.0);
        s.max_.assign(train.cols(), 0.0);
        for (std::size_t j = 0; j < train.cols(); ++j) {
            double lo = train(0, j);
            double hi = train(0, j);
            for (std::size_t i = 1; i < train.rows(); ++i) {
                lo = std::min(lo, train(i, j));
                hi = std::max(hi, train(i, j));
            }
            s.min_[j] = lo;
            s.max_[j] = hi;
        }
        return s;
    }

    static MinMaxScaler fit(std::span<const double> train) {
        return fit(DesignMatrix::column(train));
    }

    static MinMaxScaler from_bounds(std::vector<double> min, std::vector<double> max) {
        if (min.size() != max.size() || min.empty()) {
            throw std::invalid_argument("MinMaxScaler: bad bounds");
        }
        for (std::size_t j = 0; j < min.size(); ++j) {
            if (!(max[j] >= min[j])) throw std::invalid_argument("MinMaxScaler: max < min");
        }
        MinMaxScaler s;
        s.min_ = std::move(min);
        s.max_ = std::move(max);
        return s;
    }

    DesignMatrix apply(const DesignMatrix& x) const {
        check_cols(x);
        DesignMatrix out = x;
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const double range = max_[j] - min_[j];
            for (std::size_t i = 0; i < x.rows(); ++i) {
                out(i, j) = range == 0.0 ? 0.5 : (x(i, j) - min_[j]) / range;
            }
        }
        return out;
    }

    DesignMatrix invert(const DesignMatrix& x) const {
        check_cols(x);
        DesignMatrix out = x;
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const double range = max_[j] - min_[j];
            for (std::size_t i = 0; i < x.rows(); ++i) {
                out(i, j) = range == 0.0 ? min_[j] : x(i, j) * range + min_[j];
            }
        }
        return out;
    }

    std::vector<double> apply(std::span<const double> v) const {
        return apply(DesignMatrix::column(v)).col(0);
    }

    std::vector<double> invert(std::span<const double> v) const {
        return invert(DesignMatrix::column(v)).col(0);
    }

    std::size_t features() const { return min_.size(); }
    const std::vector<double>& feature_min() const { return min_; }
    const std::vector<double>& feature_max() const { return max_; }

    friend bool operator==(const MinMaxScaler&, const MinMaxScaler&) = default;

  private:
    void check_cols(const DesignMatrix& x) const {
        if (x.cols() != min_.size()) {
            throw std::invalid_argument("MinMaxScaler: column count mismatch");
        }
    }

    std::vector<double> min_;
    std::vector<double> max_;
};

// ============================================================================
// Ridge regression (closed form)
// ============================================================================

/// Penalized least squares on centered data: (Xc^T Xc + lambda I) beta =
/// Xc^T yc. The intercept restores the means and is never penalized.
struct RidgeModel {
    double intercept = 0.0;
    std::vector<double> coefficients;
    double lambda = 0.0;

    std::vector<double> predict(const DesignMatrix& x) const {
        if (x.cols() != coefficients.size()) {
            throw std::invalid_argument("RidgeModel::predict: column count mismatch");
        }
        std::vector<double> out(x.rows(), intercept);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            for (std::size_t j = 0; j < x.cols(); ++j) {
                out[i] += x(i, j) * coefficients[j];
            }
        }
        return out;
    }

    friend bool operator==(const RidgeModel&, const RidgeModel&) = default;
};

inline RidgeModel ridge_fit(const DesignMatrix& x, std::span<const double> y,
                            double lambda) {
    detail::check_xy(x, y);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("ridge_fit: lambda must be >= 0");
    }
    const std::size_t n = x.rows();
    const std::size_t m = x.cols();
    const auto c = detail::center(x, y);

    std::vector<double> gram(m * m, 0.0);
    std::vector<double> rhs(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j; k < m; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += c.xc(i, j) * c.xc(i, k);
            gram[j * m + k] = s;
            gram[k * m + j] = s;
        }
        gram[j * m + j] += lambda;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += c.xc(i, j) * c.yc[i];
        rhs[j] = s;
    }

    RidgeModel model;
    model.lambda = lambda;
    try {
        model.coefficients = linalg::solve_spd(std::move(gram), m, rhs);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument(
            "ridge_fit: singular normal equations (collinear columns); use lambda > 0");
    }
    model.intercept = c.y_mean;
    for (std::size_t j = 0; j < m; ++j) {
        model.intercept -= c.col_means[j] * model.coefficients[j];
    }
    return model;
}

// ============================================================================
// LASSO (cyclic coordinate descent)
// ============================================================================

/// L1-penalized least squares fitted by coordinate descent with
/// soft-thresholding. Internally X is centered and each column scaled by its
/// RMS s_j = sqrt(sum(xc_j^2)/n); the objective in that standardized space is
///
///   (1/2n) ||yc - Z beta~||^2 + lambda ||beta~||_1 ,   Z_j = xc_j / s_j .
///
/// Reported coefficients are back-transformed to the original feature scale
/// (beta_j = beta~_j / s_j); KKT checks must be evaluated in the standardized
/// space. Columns with s_j = 0 are inert and keep a zero coefficient.
struct LassoModel {
    double intercept = 0.0;
    std::vector<double> coefficients;
    double lambda = 0.0;
    std::size_t n_iter = 0;
    bool converged = false;

    std::vector<double> predict(const DesignMatrix& x) const {
        if (x.cols() != coefficients.size()) {
            throw std::invalid_argument("LassoModel::predict: column count mismatch");
        }
        std::vector<double> out(x.rows(), intercept);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            for (std::size_t j = 0; j < x.cols(); ++j) {
                out[i] += x(i, j) * coefficients[j];
            }
        }
        return out;
    }

    friend bool operator==(const LassoModel&, const LassoModel&) = default;
};

namespace detail {

inline double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

}  // namespace detail

inline LassoModel lasso_fit(const DesignMatrix& x, std::span<const double> y, double lambda,
                            double tol = 1e-8, std::size_t max_iter = 10000) {
    detail::check_xy(x, y);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("lasso_fit: lambda must be >= 0");
    }
    const std::size_t n = x.rows();
    const std::size_t m = x.cols();
    const auto c = detail::center(x, y);
    const double dn = static_cast<double>(n);

    // standardized columns z_j = xc_j / s_j, so z_j^T z_j / n == 1
    std::vector<double> scale(m, 0.0);
    DesignMatrix z = c.xc;
    for (std::size_t j = 0; j < m; ++j) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) ss += c.xc(i, j) * c.xc(i, j);
        scale[j] = std::sqrt(ss / dn);
        for (std::size_t i = 0; i < n; ++i) {
            z(i, j) = scale[j] == 0.0 ? 0.0 : c.xc(i, j) / scale[j];
        }
    }

    std::vector<double> beta(m, 0.0);       // standardized coefficients
    std::vector<double> residual = c.yc;    // yc - Z beta
    LassoModel model;
    model.lambda = lambda;
    for (std::size_t sweep = 0; sweep < max_iter; ++sweep) {
        double max_delta = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (scale[j] == 0.0) continue;
            double rho = beta[j];
            for (std::size_t i = 0; i < n; ++i) rho += z(i, j) * residual[i] / dn;
            const double updated = detail::soft_threshold(rho, lambda);
            const double delta = updated - beta[j];
            if (delta != 0.0) {
                for (std::size_t i = 0; i < n; ++i) residual[i] -= z(i, j) * delta;
                beta[j] = updated;
            }
            max_delta = std::max(max_delta, std::abs(delta));
        }
        model.n_iter = sweep + 1;
        if (max_delta < tol) {
            model.converged = true;
            break;
        }
    }

    model.coefficients.assign(m, 0.0);
    model.intercept = c.y_mean;
    for (std::size_t j = 0; j < m; ++j) {
        if (scale[j] != 0.0) model.coefficients[j] = beta[j] / scale[j];
        model.intercept -= c.col_means[j] * model.coefficients[j];
    }
    return model;
}

}  // namespace hydropiml
