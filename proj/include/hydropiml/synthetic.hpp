#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hydropiml/abcd.hpp"
#include "hydropiml/pet.hpp"
#include "hydropiml/timeseries.hpp"

namespace hydropiml {

// ============================================================================
// Synthetic catchment generator for desk-scale verification: seasonal
// monsoonal climate, Hamon PET, and observations produced by the
// water-balance model itself (optionally with multiplicative noise).
// ============================================================================

namespace detail {

/// Deterministic sampler on top of mt19937_64. The standard distributions are
/// implementation-defined, so uniform and normal draws are spelled out here;
/// normal() always consumes exactly two engine draws, keeping the stream
/// layout independent of the values drawn.
class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double normal() {  // Box-Muller
        constexpr double tiny = 0x1.0p-53;
        const double u1 = std::max(uniform01(), tiny);
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace detail

struct SyntheticSpec {
    AbcdParams params{0.93, 5.0, 0.4, 1.5};
    MonthKey start{1979, 1};
    MonthKey end{2014, 12};
    double latitude_deg = 21.0;
    double noise_level = 0.0;  // sd of the multiplicative observation noise
    std::uint64_t seed = 42;
    AbcdState init = default_initial_state();
};

/// Generates a gap-free series with p_mm, t_c, pet_mm forcing plus q_mm,
/// et_mm, sm_mm, gw_mm observations. Identical seeds reproduce identical
/// series; the forcing does not depend on the noise level, so noisy and
/// noise-free variants share their weather.
inline MonthlySeries generate_synthetic_catchment(const SyntheticSpec& spec) {
    if (spec.end < spec.start) {
        throw std::invalid_argument("generate_synthetic_catchment: end before start");
    }
    if (!(spec.noise_level >= 0.0) || !std::isfinite(spec.noise_level)) {
        throw std::invalid_argument("generate_synthetic_catchment: bad noise level");
    }
    const int n = months_between(spec.start, spec.end) + 1;

    // monsoonal monthly-mean precipitation (mm) and temperature seasonality
    constexpr double mean_p[12] = {12.0, 18.0,  25.0,  40.0,  70.0, 180.0,
                                   320.0, 300.0, 220.0, 90.0, 25.0, 8.0};
    detail::Sampler sampler(spec.seed);

    MonthlySeries series;
    ForcingSeries forcing;
    MonthKey key = spec.start;
    for (int i = 0; i < n; ++i) {
        // fixed draw order per month: p, t, then four observation epsilons
        const double p_shape = sampler.normal();
        const double t_shape = sampler.normal();
        const double eps_q = sampler.normal();
        const double eps_et = sampler.normal();
        const double eps_sm = sampler.normal();
        const double eps_gw = sampler.normal();

        const double phase = 2.0 * std::numbers::pi * (key.month - 4) / 12.0;
        const double p = mean_p[key.month - 1] * std::exp(0.35 * p_shape - 0.5 * 0.35 * 0.35);
        const double t = 25.0 + 7.0 * std::sin(phase) + 0.8 * t_shape;

        MonthlyRecord rec;
        rec.key = key;
        rec.p_mm = p;
        rec.t_c = t;
        rec.pet_mm = hamon_pet(t, spec.latitude_deg, key);
        series.records.push_back(rec);
        forcing.push_back({key, p, t, *rec.pet_mm});

        // stash the noise draws for the observation pass below
        series.records.back().q_mm = eps_q;
        series.records.back().et_mm = eps_et;
        series.records.back().sm_mm = eps_sm;
        series.records.back().gw_mm = eps_gw;
        key = key.next();
    }

    const auto trajectory = simulate(spec.params, spec.init, forcing);
    for (std::size_t i = 0; i < series.records.size(); ++i) {
        auto& rec = series.records[i];
        auto observe = [&](double truth, double eps) {
            return std::max(0.0, truth * (1.0 + spec.noise_level * eps));
        };
        rec.q_mm = observe(trajectory[i].fluxes.q, *rec.q_mm);
        rec.et_mm = observe(trajectory[i].fluxes.et, *rec.et_mm);
        rec.sm_mm = observe(trajectory[i].state.sm, *rec.sm_mm);
        rec.gw_mm = observe(trajectory[i].state.gw, *rec.gw_mm);
    }
    return series;
}

}  // namespace hydropiml
