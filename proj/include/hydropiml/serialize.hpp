#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hydropiml/abcd.hpp"
#include "hydropiml/calib.hpp"
#include "hydropiml/gpr.hpp"
#include "hydropiml/piml.hpp"
#include "hydropiml/regress.hpp"
#include "hydropiml/version.hpp"

namespace hydropiml {

// JSON documents use ordered_json throughout so emitted key order is stable.
using Json = nlohmann::ordered_json;

inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline void check_format_version(const Json& j, const char* what) {
    if (!j.contains("format_version") || j.at("format_version").get<int>() != kModelFormatVersion) {
        throw std::invalid_argument(std::string(what) + ": unsupported format_version");
    }
}

inline Json matrix_to_json(const DesignMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline DesignMatrix matrix_from_json(const Json& j) {
    std::vector<std::vector<double>> rows;
    for (const auto& row : j) rows.push_back(row.get<std::vector<double>>());
    return DesignMatrix::from_rows(rows);
}

}  // namespace detail

// ----------------------------------------------------------------------------
// Core value types
// ----------------------------------------------------------------------------

inline Json to_json(const AbcdParams& p) {
    return Json{{"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}};
}

inline AbcdParams abcd_params_from_json(const Json& j) {
    return AbcdParams(j.at("a").get<double>(), j.at("b").get<double>(),
                      j.at("c").get<double>(), j.at("d").get<double>());
}

inline Json to_json(const AbcdState& s) { return Json{{"sm", s.sm}, {"gw", s.gw}}; }

inline AbcdState abcd_state_from_json(const Json& j) {
    return AbcdState{j.at("sm").get<double>(), j.at("gw").get<double>()};
}

inline Json to_json(const CalibrationResult& r) {
    return Json{{"params", to_json(r.params)},
                {"train_nse", r.train_nse},
                {"n_objective_evals", r.n_objective_evals},
                {"warmup_months", r.warmup_months},
                {"converged", r.converged}};
}

inline CalibrationResult calibration_result_from_json(const Json& j) {
    return CalibrationResult{abcd_params_from_json(j.at("params")),
                             j.at("train_nse").get<double>(),
                             j.at("n_objective_evals").get<std::size_t>(),
                             j.at("warmup_months").get<std::size_t>(),
                             j.at("converged").get<bool>()};
}

// ----------------------------------------------------------------------------
// Regressors and scalers
// ----------------------------------------------------------------------------

inline Json to_json(const MinMaxScaler& s) {
    return Json{{"min", s.feature_min()}, {"max", s.feature_max()}};
}

inline MinMaxScaler scaler_from_json(const Json& j) {
    return MinMaxScaler::from_bounds(j.at("min").get<std::vector<double>>(),
                                     j.at("max").get<std::vector<double>>());
}

/// Versioned regressor document: a kind tag plus either coefficients (linear
/// models) or the training-set payload (GPR, which refits its factorization
/// on load).
inline Json to_json(const FittedRegressor& r) {
    Json j{{"format_version", kModelFormatVersion}, {"kind", to_string(r.kind)}};
    switch (r.kind) {
        case RegressorKind::ridge: {
            const auto& m = std::get<RidgeModel>(r.model);
            j["lambda"] = m.lambda;
            j["intercept"] = m.intercept;
            j["coefficients"] = m.coefficients;
            break;
        }
        case RegressorKind::lasso: {
            const auto& m = std::get<LassoModel>(r.model);
            j["lambda"] = m.lambda;
            j["intercept"] = m.intercept;
            j["coefficients"] = m.coefficients;
            j["n_iter"] = m.n_iter;
            j["converged"] = m.converged;
            break;
        }
        case RegressorKind::gpr: {
            const auto& m = std::get<GprModel>(r.model);
            j["sigma_f2"] = m.sigma_f2;
            j["length_scale"] = m.length_scale;
            j["sigma_n2"] = m.sigma_n2;
            j["train_x"] = detail::matrix_to_json(m.train_x);
            j["train_y"] = m.train_y;
            break;
        }
    }
    return j;
}

inline FittedRegressor regressor_from_json(const Json& j) {
    detail::check_format_version(j, "regressor");
    const auto kind = regressor_kind_from_string(j.at("kind").get<std::string>());
    switch (kind) {
        case RegressorKind::ridge: {
            RidgeModel m;
            m.lambda = j.at("lambda").get<double>();
            m.intercept = j.at("intercept").get<double>();
            m.coefficients = j.at("coefficients").get<std::vector<double>>();
            return {kind, m};
        }
        case RegressorKind::lasso: {
            LassoModel m;
            m.lambda = j.at("lambda").get<double>();
            m.intercept = j.at("intercept").get<double>();
            m.coefficients = j.at("coefficients").get<std::vector<double>>();
            m.n_iter = j.at("n_iter").get<std::size_t>();
            m.converged = j.at("converged").get<bool>();
            return {kind, m};
        }
        case RegressorKind::gpr: {
            const auto x = detail::matrix_from_json(j.at("train_x"));
            const auto y = j.at("train_y").get<std::vector<double>>();
            return {kind, gpr_fit(x, y, j.at("sigma_f2").get<double>(),
                                  j.at("length_scale").get<double>(),
                                  j.at("sigma_n2").get<double>())};
        }
    }
    throw std::logic_error("unknown regressor kind");
}

inline Json to_json(const ScaledRegressor& r) {
    Json hp = Json::object();
    for (const auto& [name, value] : r.hyperparams) hp[name] = value;
    return Json{{"feature_scaler", to_json(r.feature_scaler)},
                {"target_scaler", to_json(r.target_scaler)},
                {"hyperparams", std::move(hp)},
                {"regressor", to_json(r.regressor)}};
}

inline ScaledRegressor scaled_regressor_from_json(const Json& j) {
    ScaledRegressor out;
    out.feature_scaler = scaler_from_json(j.at("feature_scaler"));
    out.target_scaler = scaler_from_json(j.at("target_scaler"));
    for (const auto& [name, value] : j.at("hyperparams").items()) {
        out.hyperparams[name] = value.get<double>();
    }
    out.regressor = regressor_from_json(j.at("regressor"));
    return out;
}

// ----------------------------------------------------------------------------
// Full cascade model
// ----------------------------------------------------------------------------

inline Json to_json(const PimlModel& m) {
    return Json{{"format_version", kModelFormatVersion},
                {"artifact_version", kArtifactVersion},
                {"regressor_kind", to_string(m.regressor_kind)},
                {"abcd_params", to_json(m.abcd_params)},
                {"abcd_init", to_json(m.abcd_init)},
                {"stage1", to_json(m.stage1)},
                {"stage2", to_json(m.stage2)},
                {"clip_count_train", m.clip_count_train}};
}

inline PimlModel piml_model_from_json(const Json& j) {
    detail::check_format_version(j, "piml model");
    PimlModel m;
    m.regressor_kind = regressor_kind_from_string(j.at("regressor_kind").get<std::string>());
    m.abcd_params = abcd_params_from_json(j.at("abcd_params"));
    m.abcd_init = abcd_state_from_json(j.at("abcd_init"));
    m.stage1 = scaled_regressor_from_json(j.at("stage1"));
    m.stage2 = scaled_regressor_from_json(j.at("stage2"));
    m.clip_count_train = j.at("clip_count_train").get<std::size_t>();
    return m;
}

}  // namespace hydropiml
