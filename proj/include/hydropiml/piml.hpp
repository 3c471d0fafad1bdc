#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "hydropiml/abcd.hpp"
#include "hydropiml/calib.hpp"
#include "hydropiml/gpr.hpp"
#include "hydropiml/model_selection.hpp"
#include "hydropiml/regress.hpp"

namespace hydropiml {

// ============================================================================
// Two-stage physics-informed cascade:
//   stage 1: ET_t  = f(SM_{t-1}, P_t, PET_t)
//   stage 2: Q_t   = g(SM_{t-1}, SM_t, GW_t, GW_{t-1}, P_t, ET_t)
// with SM/GW taken from the calibrated water-balance simulation, so prediction
// stays closed under forcing-only inputs. Also the pure-ML baseline (P, T -> Q)
// the cascade is compared against.
// ============================================================================

enum class RegressorKind { ridge, lasso, gpr };

inline const char* to_string(RegressorKind kind) {
    switch (kind) {
        case RegressorKind::ridge: return "ridge";
        case RegressorKind::lasso: return "lasso";
        case RegressorKind::gpr: return "gpr";
    }
    throw std::logic_error("unknown regressor kind");
}

inline RegressorKind regressor_kind_from_string(const std::string& name) {
    if (name == "ridge") return RegressorKind::ridge;
    if (name == "lasso") return RegressorKind::lasso;
    if (name == "gpr") return RegressorKind::gpr;
    throw std::invalid_argument("unknown regressor kind '" + name + "'");
}

/// One fitted regressor behind the shared predict contract.
struct FittedRegressor {
    RegressorKind kind = RegressorKind::ridge;
    std::variant<RidgeModel, LassoModel, GprModel> model{RidgeModel{}};

    std::vector<double> predict(const DesignMatrix& x) const {
        return std::visit(
            [&](const auto& m) -> std::vector<double> {
                if constexpr (std::is_same_v<std::decay_t<decltype(m)>, GprModel>) {
                    return m.predict_mean(x);
                } else {
                    return m.predict(x);
                }
            },
            model);
    }

    friend bool operator==(const FittedRegressor&, const FittedRegressor&) = default;
};

/// Regressor plus the training-time min-max scalers for features and target.
/// Prediction applies the feature scaler, predicts in scaled target space, and
/// inverts the target scaler.
struct ScaledRegressor {
    MinMaxScaler feature_scaler = MinMaxScaler::from_bounds({0.0}, {1.0});
    MinMaxScaler target_scaler = MinMaxScaler::from_bounds({0.0}, {1.0});
    FittedRegressor regressor;
    HyperParams hyperparams;

    std::vector<double> predict(const DesignMatrix& raw_features) const {
        return target_scaler.invert(regressor.predict(feature_scaler.apply(raw_features)));
    }

    friend bool operator==(const ScaledRegressor&, const ScaledRegressor&) = default;
};

// ----------------------------------------------------------------------------
// Covariate layouts
// ----------------------------------------------------------------------------

/// Stage-1 covariates, in exactly this column order.
struct Stage1Row {
    double sm_prev;
    double p;
    double pet;
};

/// Stage-2 covariates, in exactly this column order. `et` is observed ET when
/// training (default) and the stage-1 prediction when predicting.
struct Stage2Row {
    double sm_prev;
    double sm;
    double gw;
    double gw_prev;
    double p;
    double et;
};

struct Covariates {
    std::vector<Stage1Row> stage1;
    std::vector<Stage2Row> stage2;  // et left at 0, filled by caller
    std::vector<StepResult> trajectory;
};

/// Runs the water-balance simulation once and lays out both covariate sets.
/// Row t uses the simulated states such that sm_prev at t equals sm at t-1;
/// the first row falls back to the initial storages.
inline Covariates build_covariates(const AbcdParams& params, const AbcdState& init,
                                   const ForcingSeries& forcing) {
    Covariates out;
    out.trajectory = simulate(params, init, forcing);
    out.stage1.reserve(forcing.size());
    out.stage2.reserve(forcing.size());
    for (std::size_t t = 0; t < forcing.size(); ++t) {
        const AbcdState& prev = t == 0 ? init : out.trajectory[t - 1].state;
        const AbcdState& curr = out.trajectory[t].state;
        out.stage1.push_back({prev.sm, forcing[t].p_mm, forcing[t].pet_mm});
        out.stage2.push_back({prev.sm, curr.sm, curr.gw, prev.gw, forcing[t].p_mm, 0.0});
    }
    return out;
}

inline DesignMatrix stage1_matrix(std::span<const Stage1Row> rows) {
    DesignMatrix x(rows.size(), 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        x(i, 0) = rows[i].sm_prev;
        x(i, 1) = rows[i].p;
        x(i, 2) = rows[i].pet;
    }
    return x;
}

inline DesignMatrix stage2_matrix(std::span<const Stage2Row> rows) {
    DesignMatrix x(rows.size(), 6);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        x(i, 0) = rows[i].sm_prev;
        x(i, 1) = rows[i].sm;
        x(i, 2) = rows[i].gw;
        x(i, 3) = rows[i].gw_prev;
        x(i, 4) = rows[i].p;
        x(i, 5) = rows[i].et;
    }
    return x;
}

// ----------------------------------------------------------------------------
// Hyperparameter grids and the shared fit path
// ----------------------------------------------------------------------------

/// Default search grids, spanning the unit-scaled feature range.
inline HyperGrid default_grid(RegressorKind kind) {
    switch (kind) {
        case RegressorKind::ridge:
        case RegressorKind::lasso:
            return HyperGrid{{{"lambda", {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0}}}};
        case RegressorKind::gpr:
            return HyperGrid{{{"length_scale", {0.1, 0.3, 1.0, 3.0}},
                              {"sigma_f2", {0.5, 1.0, 2.0}},
                              {"sigma_n2", {1e-4, 1e-2, 1e-1}}}};
    }
    throw std::logic_error("unknown regressor kind");
}

namespace detail {

inline FittedRegressor fit_kind(RegressorKind kind, const HyperParams& hp,
                                const DesignMatrix& x, std::span<const double> y) {
    switch (kind) {
        case RegressorKind::ridge:
            return {kind, ridge_fit(x, y, hp.at("lambda"))};
        case RegressorKind::lasso:
            return {kind, lasso_fit(x, y, hp.at("lambda"))};
        case RegressorKind::gpr:
            return {kind, gpr_fit(x, y, hp.at("sigma_f2"), hp.at("length_scale"),
                                  hp.at("sigma_n2"))};
    }
    throw std::logic_error("unknown regressor kind");
}

/// Grid-searches hyperparameters (scalers refit per fold, so no fold sees its
/// validation range) and fits the final pipeline on all rows.
inline ScaledRegressor fit_scaled(RegressorKind kind, const DesignMatrix& x,
                                  std::span<const double> y, const HyperGrid& grid,
                                  std::size_t k_folds) {
    const FitFunction fit = [kind](const HyperParams& hp, const DesignMatrix& train_x,
                                   std::span<const double> train_y) {
        auto fs = MinMaxScaler::fit(train_x);
        auto ts = MinMaxScaler::fit(train_y);
        auto reg = fit_kind(kind, hp, fs.apply(train_x), ts.apply(train_y));
        return [fs, ts, reg](const DesignMatrix& q) {
            return ts.invert(reg.predict(fs.apply(q)));
        };
    };
    const auto search = grid_search(fit, grid, x, y, k_folds);

    ScaledRegressor out;
    out.feature_scaler = MinMaxScaler::fit(x);
    out.target_scaler = MinMaxScaler::fit(y);
    out.hyperparams = search.best;
    out.regressor = fit_kind(kind, search.best, out.feature_scaler.apply(x),
                             out.target_scaler.apply(y));
    return out;
}

inline std::size_t count_negative(std::span<const double> v) {
    std::size_t n = 0;
    for (double x : v) {
        if (x < 0.0) ++n;
    }
    return n;
}

inline std::vector<double> clip_non_negative(std::vector<double> v) {
    for (double& x : v) x = std::max(0.0, x);
    return v;
}

}  // namespace detail

// ----------------------------------------------------------------------------
// Cascade training and prediction
// ----------------------------------------------------------------------------

/// Which ET fills the stage-2 covariate column during training.
enum class Stage2EtSource { observed, predicted };

/// Where training-time SM/GW covariates come from. Prediction always uses the
/// simulated states (the forcing-only closure); `observed` substitutes
/// observed storages into the training rows when a dataset carries them.
enum class CovariateStates { simulated, observed };

struct TrainOptions {
    Stage2EtSource stage2_train_et = Stage2EtSource::observed;
    CovariateStates covariate_states = CovariateStates::simulated;
    std::size_t k_folds = 5;
    std::optional<HyperGrid> grid_override;  // applies to both stages
    // required when covariate_states == observed, aligned with the forcing
    std::optional<std::vector<double>> observed_sm;
    std::optional<std::vector<double>> observed_gw;
};

struct PimlModel {
    AbcdParams abcd_params{0.5, 100.0, 0.5, 0.5};
    AbcdState abcd_init;
    ScaledRegressor stage1;
    ScaledRegressor stage2;
    RegressorKind regressor_kind = RegressorKind::ridge;
    std::size_t clip_count_train = 0;

    friend bool operator==(const PimlModel&, const PimlModel&) = default;
};

struct PimlPrediction {
    std::vector<double> et_hat;  // clipped at 0
    std::vector<double> q_hat;   // clipped at 0
    std::vector<double> et_raw;  // stage-1 output before clipping
    std::vector<double> q_raw;   // stage-2 output before clipping
    std::size_t et_clips = 0;
    std::size_t q_clips = 0;
};

namespace detail {

/// Shared cascade path: stage 1, clip, feed the clipped ET into stage 2. The
/// stage-2 rows always see the clipped ET -- that is the cascade definition,
/// and it keeps the emitted et_hat bit-identical to the stage-2 inputs.
inline PimlPrediction run_cascade(const PimlModel& model, Covariates&& cov) {
    PimlPrediction out;
    out.et_raw = model.stage1.predict(stage1_matrix(cov.stage1));
    out.et_clips = count_negative(out.et_raw);
    out.et_hat = clip_non_negative(out.et_raw);
    for (std::size_t t = 0; t < cov.stage2.size(); ++t) {
        cov.stage2[t].et = out.et_hat[t];
    }
    out.q_raw = model.stage2.predict(stage2_matrix(cov.stage2));
    out.q_clips = count_negative(out.q_raw);
    out.q_hat = clip_non_negative(out.q_raw);
    return out;
}

}  // namespace detail

/// Fits the two cascade stages on the training period. Stage 1 regresses
/// observed ET on (SM_{t-1}, P_t, PET_t); stage 2 regresses observed Q on the
/// six-column layout whose ET column holds observed ET by default. The first
/// `calibration.warmup_months` rows are excluded from both fits.
inline PimlModel train_piml(const ForcingSeries& train_forcing,
                            std::span<const double> observed_et,
                            std::span<const double> observed_q, RegressorKind kind,
                            const CalibrationResult& calibration,
                            const TrainOptions& options = {}) {
    const std::size_t n = train_forcing.size();
    if (observed_et.size() != n || observed_q.size() != n) {
        throw std::invalid_argument("train_piml: observation length mismatch");
    }
    const std::size_t warmup = calibration.warmup_months;
    if (n < warmup + 2) throw std::invalid_argument("train_piml: insufficient length");

    PimlModel model;
    model.abcd_params = calibration.params;
    model.abcd_init = default_initial_state();
    model.regressor_kind = kind;

    auto cov = build_covariates(model.abcd_params, model.abcd_init, train_forcing);
    if (options.covariate_states == CovariateStates::observed) {
        if (!options.observed_sm || !options.observed_gw ||
            options.observed_sm->size() != n || options.observed_gw->size() != n) {
            throw std::invalid_argument(
                "train_piml: covariate_states=observed needs aligned observed_sm/observed_gw");
        }
        for (std::size_t t = 0; t < n; ++t) {
            const double sm_prev = t == 0 ? model.abcd_init.sm : (*options.observed_sm)[t - 1];
            const double gw_prev = t == 0 ? model.abcd_init.gw : (*options.observed_gw)[t - 1];
            cov.stage1[t].sm_prev = sm_prev;
            cov.stage2[t].sm_prev = sm_prev;
            cov.stage2[t].sm = (*options.observed_sm)[t];
            cov.stage2[t].gw = (*options.observed_gw)[t];
            cov.stage2[t].gw_prev = gw_prev;
        }
    }

    const std::span<const Stage1Row> s1(cov.stage1.data() + warmup, n - warmup);
    const std::vector<double> et(observed_et.begin() + warmup, observed_et.end());
    const std::vector<double> q(observed_q.begin() + warmup, observed_q.end());
    const HyperGrid grid = options.grid_override.value_or(default_grid(kind));

    model.stage1 = detail::fit_scaled(kind, stage1_matrix(s1), et, grid, options.k_folds);

    std::vector<Stage2Row> s2(cov.stage2.begin() + warmup, cov.stage2.end());
    if (options.stage2_train_et == Stage2EtSource::observed) {
        for (std::size_t i = 0; i < s2.size(); ++i) s2[i].et = et[i];
    } else {
        // in-sample stage-1 predictions, clipped exactly as at prediction time
        auto et_hat = detail::clip_non_negative(model.stage1.predict(stage1_matrix(s1)));
        for (std::size_t i = 0; i < s2.size(); ++i) s2[i].et = et_hat[i];
    }
    model.stage2 = detail::fit_scaled(kind, stage2_matrix(s2), q, grid, options.k_folds);

    const auto in_sample = detail::run_cascade(model, std::move(cov));
    model.clip_count_train =
        detail::count_negative(std::span(in_sample.et_raw).subspan(warmup)) +
        detail::count_negative(std::span(in_sample.q_raw).subspan(warmup));
    return model;
}

/// Forcing-only prediction: rebuilds the covariates from the calibrated
/// simulation, runs stage 1, feeds the clipped ET estimate into stage 2, and
/// clips both outputs. The forcing must start where training started so the
/// storages are spun up through the same warm-up protocol.
inline PimlPrediction predict_piml(const PimlModel& model, const ForcingSeries& forcing) {
    return detail::run_cascade(
        model, build_covariates(model.abcd_params, model.abcd_init, forcing));
}

// ----------------------------------------------------------------------------
// Pure-ML baseline: (P_t, T_t) -> Q_t
// ----------------------------------------------------------------------------

struct MlBaseline {
    ScaledRegressor regressor;
    RegressorKind kind = RegressorKind::ridge;

    friend bool operator==(const MlBaseline&, const MlBaseline&) = default;
};

struct MlPrediction {
    std::vector<double> q_hat;  // clipped at 0
    std::vector<double> q_raw;
    std::size_t q_clips = 0;
};

inline DesignMatrix baseline_matrix(const ForcingSeries& forcing) {
    DesignMatrix x(forcing.size(), 2);
    for (std::size_t i = 0; i < forcing.size(); ++i) {
        x(i, 0) = forcing[i].p_mm;
        x(i, 1) = forcing[i].t_c;
    }
    return x;
}

inline MlBaseline train_ml_baseline(const ForcingSeries& train_forcing,
                                    std::span<const double> observed_q, RegressorKind kind,
                                    const TrainOptions& options = {}) {
    if (train_forcing.size() != observed_q.size()) {
        throw std::invalid_argument("train_ml_baseline: observation length mismatch");
    }
    const HyperGrid grid = options.grid_override.value_or(default_grid(kind));
    MlBaseline baseline;
    baseline.kind = kind;
    baseline.regressor = detail::fit_scaled(kind, baseline_matrix(train_forcing), observed_q,
                                            grid, options.k_folds);
    return baseline;
}

inline MlPrediction predict_ml_baseline(const MlBaseline& baseline,
                                        const ForcingSeries& forcing) {
    MlPrediction out;
    out.q_raw = baseline.regressor.predict(baseline_matrix(forcing));
    out.q_clips = detail::count_negative(out.q_raw);
    out.q_hat = detail::clip_non_negative(out.q_raw);
    return out;
}

}  // namespace hydropiml
