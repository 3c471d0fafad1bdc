#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydropiml/timeseries.hpp"

namespace hydropiml {

// ============================================================================
// abcd monthly water-balance model
//
// Two storages (soil moisture SM, groundwater GW) and four behavioral
// parameters:
//   a -- recharge/runoff onset below saturation, dimensionless in (0, 1]
//   b -- soil saturation level, mm, > 0
//   c -- fraction of (W - Y) routed to groundwater recharge, in [0, 1]
//   d -- groundwater outflow rate, 1/month, > 0 (may exceed 1)
// ============================================================================

struct AbcdParams {
    double a;
    double b;
    double c;
    double d;

    AbcdParams(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
        if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("abcd: a must be in (0, 1]");
        if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("abcd: b must be > 0");
        if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("abcd: c must be in [0, 1]");
        if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("abcd: d must be > 0");
    }

    friend bool operator==(const AbcdParams&, const AbcdParams&) = default;
};

/// Storages carried between months (mm, non-negative).
struct AbcdState {
    double sm = 0.0;
    double gw = 0.0;

    friend bool operator==(const AbcdState&, const AbcdState&) = default;
};

/// Initial storages used when a run does not specify them. Always paired with
/// a warm-up window downstream so results forget this choice.
inline constexpr AbcdState default_initial_state() { return AbcdState{100.0, 50.0}; }

/// Per-month fluxes (all mm/month).
struct AbcdFluxes {
    double w;   // available water: previous SM plus precipitation
    double y;   // evapotranspiration opportunity
    double et;  // actual evapotranspiration
    double dr;  // direct runoff
    double gr;  // groundwater recharge
    double gd;  // groundwater discharge
    double q;   // total streamflow = dr + gd

    friend bool operator==(const AbcdFluxes&, const AbcdFluxes&) = default;
};

struct StepResult {
    AbcdState state;
    AbcdFluxes fluxes;

    friend bool operator==(const StepResult&, const StepResult&) = default;
};

/// One month of the state transition.
///
///   W  = SM_prev + P
///   Y  = (W+b)/(2a) - sqrt(((W+b)/(2a))^2 - bW/a)
///   ET = Y (1 - e^(-PET/b)),  SM = Y - ET
///   DR = (1-c)(W-Y),          GR = c(W-Y)
///   GW = (GW_prev + GR)/(1+d),  GD = d GW,  Q = DR + GD
///
/// Both storage balances close to machine precision by construction.
inline StepResult step(const AbcdParams& params, const AbcdState& prev, double p_mm,
                       double pet_mm) {
    if (!(p_mm >= 0.0) || !std::isfinite(p_mm)) {
        throw std::invalid_argument("abcd::step: precipitation must be >= 0");
    }
    if (!(pet_mm >= 0.0) || !std::isfinite(pet_mm)) {
        throw std::invalid_argument("abcd::step: PET must be >= 0");
    }
    if (!(prev.sm >= 0.0) || !(prev.gw >= 0.0) || !std::isfinite(prev.sm) ||
        !std::isfinite(prev.gw)) {
        throw std::invalid_argument("abcd::step: state must be finite and >= 0");
    }

    const double w = prev.sm + p_mm;
    const double u = (w + params.b) / (2.0 * params.a);
    double disc = u * u - params.b * w / params.a;
    if (disc < 0.0) {
        // Analytically >= 0 for a <= 1; anything beyond rounding noise is a bug.
        if (disc < -1e-12) throw std::logic_error("abcd::step: negative discriminant");
        disc = 0.0;
    }
    // Rationalized form of u - sqrt(disc); the direct difference cancels badly
    // when bW/a << u^2.
    double y = w == 0.0 ? 0.0 : (params.b * w / params.a) / (u + std::sqrt(disc));
    if (y > w) y = w;  // rounding guard; Y <= W analytically

    // ET + SM must equal Y exactly. Computing the larger factor first keeps
    // the complementary subtraction exact (Sterbenz), so the test below never
    // sees a stray ulp. Same trick for the DR/GR split of W - Y.
    const double et_frac = -std::expm1(-pet_mm / params.b);
    double et, sm_next;
    if (et_frac >= 0.5) {
        et = y * et_frac;
        sm_next = y - et;
    } else {
        sm_next = y * std::exp(-pet_mm / params.b);
        et = y - sm_next;
    }
    const double avail = std::max(0.0, w - y);
    double gr, dr;
    if (params.c >= 0.5) {
        gr = params.c * avail;
        dr = avail - gr;
    } else {
        dr = (1.0 - params.c) * avail;
        gr = avail - dr;
    }
    const double gw_next = (prev.gw + gr) / (1.0 + params.d);
    const double gd = params.d * gw_next;
    const double q = dr + gd;

    return StepResult{AbcdState{sm_next, gw_next}, AbcdFluxes{w, y, et, dr, gr, gd, q}};
}

/// Sequential fold of step over the forcing. Output is aligned with the input
/// months; states are end-of-month storages.
inline std::vector<StepResult> simulate(const AbcdParams& params, const AbcdState& init,
                                        const ForcingSeries& forcing) {
    if (forcing.empty()) throw std::invalid_argument("abcd::simulate: empty forcing");
    std::vector<StepResult> out;
    out.reserve(forcing.size());
    AbcdState state = init;
    for (const auto& month : forcing) {
        out.push_back(step(params, state, month.p_mm, month.pet_mm));
        state = out.back().state;
    }
    return out;
}

inline std::vector<double> simulated_q(const std::vector<StepResult>& trajectory) {
    std::vector<double> q;
    q.reserve(trajectory.size());
    for (const auto& r : trajectory) q.push_back(r.fluxes.q);
    return q;
}

/// Flux trajectory as CSV: date,w,y,et,sm,dr,gr,gw,gd,q.
inline std::string trajectory_csv(const ForcingSeries& forcing,
                                  const std::vector<StepResult>& trajectory) {
    if (forcing.size() != trajectory.size()) {
        throw std::invalid_argument("trajectory_csv: forcing/trajectory length mismatch");
    }
    std::string out = "date,w,y,et,sm,dr,gr,gw,gd,q\n";
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const auto& f = trajectory[i].fluxes;
        const auto& s = trajectory[i].state;
        out += format_month(forcing[i].key);
        for (double v : {f.w, f.y, f.et, s.sm, f.dr, f.gr, s.gw, f.gd, f.q}) {
            out += ',';
            out += detail::format_double(v);
        }
        out += '\n';
    }
    return out;
}

}  // namespace hydropiml
