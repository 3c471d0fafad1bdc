#include <catch2/catch_amalgamated.hpp>

#include "hydropiml/pet.hpp"

using namespace hydropiml;

TEST_CASE("equatorial day length is 12 hours year-round", "[pet]") {
    for (int m = 1; m <= 12; ++m) {
        CHECK_THAT(day_length_hours(0.0, MonthKey{2000, m}),
                   Catch::Matchers::WithinAbs(12.0, 1e-12));
    }
}

TEST_CASE("hamon reference point: 25 C at the equator", "[pet]") {
    // e_sat = 0.611 exp(17.27*25/262.3) ~ 3.167 kPa
    // daily  = 29.8 * 12 * e_sat / 298.2 ~ 3.798 mm/day, ~113.9 mm over 30 days
    const double daily = hamon_daily_pet(25.0, 0.0, MonthKey{2001, 4});
    CHECK_THAT(daily, Catch::Matchers::WithinAbs(3.798, 0.005));
    const double monthly = hamon_pet(25.0, 0.0, MonthKey{2001, 4});
    CHECK_THAT(monthly, Catch::Matchers::WithinAbs(113.9, 0.2));
    CHECK_THAT(monthly, Catch::Matchers::WithinRel(30.0 * daily, 1e-14));
}

TEST_CASE("freezing cutoff", "[pet]") {
    CHECK(hamon_pet(0.0, 45.0, MonthKey{2000, 1}) == 0.0);
    CHECK(hamon_pet(-7.3, 45.0, MonthKey{2000, 1}) == 0.0);
    CHECK(hamon_pet(0.001, 45.0, MonthKey{2000, 1}) > 0.0);
}

TEST_CASE("latitude domain is [-66, 66]", "[pet]") {
    CHECK_NOTHROW(hamon_pet(10.0, 66.0, MonthKey{2000, 6}));
    CHECK_NOTHROW(hamon_pet(10.0, -66.0, MonthKey{2000, 6}));
    CHECK_THROWS_AS(hamon_pet(10.0, 66.5, MonthKey{2000, 6}), std::invalid_argument);
    CHECK_THROWS_AS(hamon_pet(10.0, -80.0, MonthKey{2000, 6}), std::invalid_argument);
}

TEST_CASE("pet increases with temperature above freezing", "[pet]") {
    for (double lat : {-60.0, -20.0, 0.0, 20.0, 60.0}) {
        double prev = 0.0;
        for (double t = 0.5; t <= 40.0; t += 0.5) {
            const double pet = hamon_pet(t, lat, MonthKey{2003, 7});
            CHECK(pet > prev);
            prev = pet;
        }
    }
}

TEST_CASE("summer daily pet exceeds winter daily pet at equal temperature", "[pet]") {
    // The day-length effect is strict on the daily rate at any nonzero
    // latitude. On monthly totals the 30-vs-31-day difference overturns it
    // within ~3.5 degrees of the equator, so the monthly check stays at
    // latitudes >= 5.
    for (double lat = 1.0; lat <= 66.0; lat += 5.0) {
        CHECK(hamon_daily_pet(20.0, lat, MonthKey{2000, 6}) >
              hamon_daily_pet(20.0, lat, MonthKey{2000, 12}));
        CHECK(hamon_daily_pet(20.0, -lat, MonthKey{2000, 12}) >
              hamon_daily_pet(20.0, -lat, MonthKey{2000, 6}));
    }
    for (double lat = 5.0; lat <= 66.0; lat += 5.0) {
        CHECK(hamon_pet(20.0, lat, MonthKey{2000, 6}) > hamon_pet(20.0, lat, MonthKey{2000, 12}));
        CHECK(hamon_pet(20.0, -lat, MonthKey{2000, 12}) > hamon_pet(20.0, -lat, MonthKey{2000, 6}));
    }
}

TEST_CASE("pet is finite and non-negative across the domain", "[pet]") {
    for (double lat = -66.0; lat <= 66.0; lat += 6.0) {
        for (int m = 1; m <= 12; ++m) {
            for (double t = -20.0; t <= 45.0; t += 5.0) {
                const double pet = hamon_pet(t, lat, MonthKey{1999, m});
                CHECK(std::isfinite(pet));
                CHECK(pet >= 0.0);
            }
        }
    }
}

TEST_CASE("attach_pet prefers the pet_mm column and needs latitude otherwise", "[pet]") {
    MonthlySeries series;
    MonthlyRecord rec;
    rec.key = MonthKey{2000, 1};
    rec.p_mm = 10.0;
    rec.t_c = 22.0;
    series.records.push_back(rec);

    CHECK_THROWS_AS(attach_pet(series, std::nullopt), std::invalid_argument);

    auto with_lat = attach_pet(series, 15.0);
    REQUIRE(with_lat.size() == 1);
    CHECK(with_lat[0].pet_mm == hamon_pet(22.0, 15.0, rec.key));
    CHECK(with_lat[0].p_mm == 10.0);
    CHECK(with_lat[0].t_c == 22.0);

    series.records[0].pet_mm = 77.5;
    auto with_col = attach_pet(series, std::nullopt);
    CHECK(with_col[0].pet_mm == 77.5);
    // column wins even when latitude is also given
    CHECK(attach_pet(series, 15.0)[0].pet_mm == 77.5);
}
