#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "hydropiml/gpr.hpp"

using namespace hydropiml;

namespace {

struct Rng {
    std::mt19937_64 engine{777};
    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * (static_cast<double>(engine() >> 11) * 0x1.0p-53);
    }
};

/// Direct 3x3 inverse by cofactors -- an oracle with no shared code with the
/// Cholesky path.
std::array<std::array<double, 3>, 3> invert3(const std::array<std::array<double, 3>, 3>& m) {
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    std::array<std::array<double, 3>, 3> inv;
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

}  // namespace

TEST_CASE("noise-free gpr interpolates its training targets", "[gpr]") {
    Rng rng;
    const auto x = DesignMatrix::from_rows(
        {{0.0}, {0.21}, {0.45}, {0.58}, {0.77}, {1.0}});
    std::vector<double> y(6);
    for (std::size_t i = 0; i < 6; ++i) y[i] = std::sin(3.0 * x(i, 0)) + 0.2 * x(i, 0);

    const auto model = gpr_fit(x, y, 1.0, 0.4, 0.0);
    const auto at_train = gpr_predict(model, x);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK_THAT(at_train.mean[i], Catch::Matchers::WithinAbs(y[i], 1e-6));
        CHECK(at_train.variance[i] >= 0.0);
        CHECK(at_train.variance[i] <= 1e-8);
    }
}

TEST_CASE("far from the data the prior takes over", "[gpr]") {
    const auto x = DesignMatrix::from_rows({{0.0}, {0.5}, {1.0}});
    const std::vector<double> y{1.0, -2.0, 0.5};
    const double sigma_f2 = 1.7;
    const auto model = gpr_fit(x, y, sigma_f2, 0.2, 1e-6);
    const auto far = gpr_predict(model, DesignMatrix::from_rows({{50.0}}));
    CHECK_THAT(far.mean[0], Catch::Matchers::WithinAbs(0.0, 1e-9));
    CHECK_THAT(far.variance[0], Catch::Matchers::WithinRel(sigma_f2, 1e-9));
}

TEST_CASE("gpr matches the direct-inverse oracle at n = 3", "[gpr]") {
    Rng rng;
    for (int rep = 0; rep < 25; ++rep) {
        const double sigma_f2 = rng.uniform(0.3, 2.5);
        const double ell = rng.uniform(0.2, 1.5);
        const double sigma_n2 = rng.uniform(1e-4, 0.2);
        DesignMatrix x(3, 1);
        x(0, 0) = rng.uniform(-1.0, -0.3);
        x(1, 0) = rng.uniform(-0.2, 0.3);
        x(2, 0) = rng.uniform(0.4, 1.0);
        const std::vector<double> y{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                                    rng.uniform(-2.0, 2.0)};

        std::array<std::array<double, 3>, 3> k;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const double d = x(i, 0) - x(j, 0);
                k[i][j] = sigma_f2 * std::exp(-d * d / (2.0 * ell * ell));
            }
            k[i][i] += sigma_n2;
        }
        const auto kinv = invert3(k);

        const double q = rng.uniform(-1.2, 1.2);
        std::array<double, 3> k_star;
        for (int i = 0; i < 3; ++i) {
            const double d = q - x(i, 0);
            k_star[i] = sigma_f2 * std::exp(-d * d / (2.0 * ell * ell));
        }
        double oracle_mean = 0.0;
        double quad = 0.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                oracle_mean += k_star[i] * kinv[i][j] * y[j];
                quad += k_star[i] * kinv[i][j] * k_star[j];
            }
        }
        const double oracle_var = sigma_f2 - quad;

        const auto model = gpr_fit(x, y, sigma_f2, ell, sigma_n2);
        const auto pred = gpr_predict(model, DesignMatrix::from_rows({{q}}));
        CHECK_THAT(pred.mean[0], Catch::Matchers::WithinAbs(oracle_mean, 1e-8));
        CHECK_THAT(pred.variance[0], Catch::Matchers::WithinAbs(std::max(0.0, oracle_var), 1e-8));
    }
}

TEST_CASE("posterior mean is linear in the targets", "[gpr]") {
    Rng rng;
    const auto x = DesignMatrix::from_rows({{0.1, 0.9}, {0.4, 0.2}, {0.8, 0.5}, {0.3, 0.7}});
    std::vector<double> y1(4), y2(4), sum(4);
    for (int i = 0; i < 4; ++i) {
        y1[i] = rng.uniform(-1.0, 1.0);
        y2[i] = rng.uniform(-1.0, 1.0);
        sum[i] = y1[i] + y2[i];
    }
    const auto query = DesignMatrix::from_rows({{0.5, 0.5}, {0.0, 1.0}, {0.9, 0.1}});
    const auto p1 = gpr_predict(gpr_fit(x, y1, 1.0, 0.5, 1e-3), query);
    const auto p2 = gpr_predict(gpr_fit(x, y2, 1.0, 0.5, 1e-3), query);
    const auto ps = gpr_predict(gpr_fit(x, sum, 1.0, 0.5, 1e-3), query);
    for (int i = 0; i < 3; ++i) {
        CHECK_THAT(ps.mean[i], Catch::Matchers::WithinAbs(p1.mean[i] + p2.mean[i], 1e-9));
    }
}

TEST_CASE("variance stays non-negative everywhere", "[gpr]") {
    Rng rng;
    DesignMatrix x(40, 2);
    std::vector<double> y(40);
    for (int i = 0; i < 40; ++i) {
        x(i, 0) = rng.uniform();
        x(i, 1) = rng.uniform();
        y[i] = std::sin(5.0 * x(i, 0)) * std::cos(3.0 * x(i, 1));
    }
    const auto model = gpr_fit(x, y, 1.0, 0.3, 0.0);  // exercises the jitter ladder
    DesignMatrix query(100, 2);
    for (int i = 0; i < 100; ++i) {
        query(i, 0) = rng.uniform(-0.5, 1.5);
        query(i, 1) = rng.uniform(-0.5, 1.5);
    }
    const auto pred = gpr_predict(model, query);
    for (double v : pred.variance) CHECK(v >= 0.0);
}

TEST_CASE("duplicate rows at zero noise resolve through jitter", "[gpr]") {
    const auto x = DesignMatrix::from_rows({{0.5}, {0.5}, {0.9}});
    const std::vector<double> y{1.0, 1.0, 2.0};
    const auto model = gpr_fit(x, y, 1.0, 0.3, 0.0);
    CHECK(model.jitter > 0.0);
    const auto pred = gpr_predict(model, DesignMatrix::from_rows({{0.5}}));
    CHECK_THAT(pred.mean[0], Catch::Matchers::WithinAbs(1.0, 1e-3));
}

TEST_CASE("gpr validates its hyperparameters and the training cap", "[gpr]") {
    const auto x = DesignMatrix::from_rows({{0.0}, {1.0}});
    const std::vector<double> y{0.0, 1.0};
    CHECK_THROWS_AS(gpr_fit(x, y, 0.0, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(gpr_fit(x, y, 1.0, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(gpr_fit(x, y, 1.0, 1.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(gpr_fit(x, y, 1.0, 1.0, 0.1, 1), std::invalid_argument);  // cap
}
