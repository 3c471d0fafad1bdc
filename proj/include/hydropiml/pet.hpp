#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "hydropiml/timeseries.hpp"

namespace hydropiml {

inline constexpr double kMaxPetLatitudeDeg = 66.0;

namespace detail {

/// Day of year of the 15th of the month (leap-aware).
inline int mid_month_day_of_year(MonthKey key) {
    int doy = 15;
    for (int m = 1; m < key.month; ++m) doy += days_in_month(MonthKey{key.year, m});
    return doy;
}

}  // namespace detail

/// Mean day length in hours at mid-month, from the standard solar declination
/// formula. Valid for |latitude| <= 66 degrees (no polar day/night).
inline double day_length_hours(double latitude_deg, MonthKey key) {
    if (!(std::abs(latitude_deg) <= kMaxPetLatitudeDeg)) {
        throw std::invalid_argument("day_length_hours: latitude outside [-66, 66]");
    }
    constexpr double pi = std::numbers::pi;
    const int doy = detail::mid_month_day_of_year(key);
    const double declination =
        (23.45 * pi / 180.0) * std::sin(2.0 * pi * (284.0 + doy) / 365.0);
    const double lat = latitude_deg * pi / 180.0;
    double cos_omega = -std::tan(lat) * std::tan(declination);
    cos_omega = std::clamp(cos_omega, -1.0, 1.0);
    return 24.0 / pi * std::acos(cos_omega);
}

/// Hamon daily potential evapotranspiration (mm/day):
///   PET_day = 29.8 * D * e_sat / (T + 273.2),
///   e_sat   = 0.611 * exp(17.27 T / (T + 237.3))  [kPa]
/// with D the mid-month day length in hours. Returns 0 for T <= 0 C.
inline double hamon_daily_pet(double t_c, double latitude_deg, MonthKey key) {
    const double day_length = day_length_hours(latitude_deg, key);
    if (t_c <= 0.0) return 0.0;
    const double e_sat = 0.611 * std::exp(17.27 * t_c / (t_c + 237.3));
    return 29.8 * day_length * e_sat / (t_c + 273.2);
}

/// Monthly Hamon PET (mm/month): daily rate times Gregorian month length.
inline double hamon_pet(double t_c, double latitude_deg, MonthKey key) {
    return hamon_daily_pet(t_c, latitude_deg, key) * days_in_month(key);
}

/// Builds the model forcing from a parsed series. A pet_mm column bypasses the
/// Hamon computation; otherwise latitude is required.
inline ForcingSeries attach_pet(const MonthlySeries& series,
                                std::optional<double> latitude_deg) {
    ForcingSeries out;
    out.reserve(series.records.size());
    for (const auto& rec : series.records) {
        double pet;
        if (rec.pet_mm) {
            pet = *rec.pet_mm;
        } else if (latitude_deg) {
            pet = hamon_pet(rec.t_c, *latitude_deg, rec.key);
        } else {
            throw std::invalid_argument(
                "attach_pet: no pet_mm column at " + format_month(rec.key) +
                " and no latitude given");
        }
        out.push_back(ForcingMonth{rec.key, rec.p_mm, rec.t_c, pet});
    }
    return out;
}

}  // namespace hydropiml
