#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hydropiml/timeseries.hpp"

using namespace hydropiml;

namespace {

MonthlySeries make_series(MonthKey start, int n) {
    MonthlySeries s;
    MonthKey key = start;
    for (int i = 0; i < n; ++i) {
        MonthlyRecord rec;
        rec.key = key;
        rec.p_mm = 10.0 + i;
        rec.t_c = 20.0;
        s.records.push_back(rec);
        key = key.next();
    }
    return s;
}

}  // namespace

TEST_CASE("month keys order chronologically and roll over years", "[timeseries]") {
    CHECK(MonthKey{1979, 12}.next() == MonthKey{1980, 1});
    CHECK(MonthKey{1979, 5}.next() == MonthKey{1979, 6});
    CHECK(MonthKey{1979, 12} < MonthKey{1980, 1});
    CHECK(months_between(MonthKey{1979, 1}, MonthKey{2009, 1}) == 360);
    CHECK(format_month(MonthKey{1979, 3}) == "1979-03");
    CHECK(parse_month("1979-03") == MonthKey{1979, 3});
    CHECK_FALSE(parse_month("1979-13"));
    CHECK_FALSE(parse_month("1979-3"));
    CHECK_FALSE(parse_month("79-03"));
}

TEST_CASE("gregorian month lengths", "[timeseries]") {
    CHECK(days_in_month(MonthKey{2011, 2}) == 28);
    CHECK(days_in_month(MonthKey{2012, 2}) == 29);
    CHECK(days_in_month(MonthKey{1900, 2}) == 28);  // century, not leap
    CHECK(days_in_month(MonthKey{2000, 2}) == 29);  // quadricentennial
    CHECK(days_in_month(MonthKey{2012, 4}) == 30);
    CHECK(days_in_month(MonthKey{2012, 12}) == 31);
}

TEST_CASE("minimal well-formed csv parses", "[timeseries]") {
    const auto result = parse_forcing_csv("date,p_mm,t_c\n1979-01,120.5,24.1\n1979-02,80.0,25.0\n");
    REQUIRE(result.series.size() == 2);
    CHECK(result.warnings.empty());
    CHECK(result.series.records[0].key == MonthKey{1979, 1});
    CHECK(result.series.records[0].p_mm == 120.5);
    CHECK(result.series.records[0].t_c == 24.1);
    CHECK_FALSE(result.series.records[0].q_mm.has_value());
    CHECK(result.series.records[1].key == MonthKey{1979, 2});
}

TEST_CASE("csv accepts crlf, reordered columns, and blank optional cells", "[timeseries]") {
    const auto result =
        parse_forcing_csv("t_c,q_mm,date,p_mm\r\n24.1,,1979-01,120.5\r\n25.0,3.25,1979-02,80\r\n");
    REQUIRE(result.series.size() == 2);
    CHECK_FALSE(result.series.records[0].q_mm.has_value());
    CHECK(result.series.records[1].q_mm == 3.25);
}

TEST_CASE("csv gap error names the missing month", "[timeseries]") {
    const std::string doc = "date,p_mm,t_c\n1979-01,1,20\n1979-03,1,20\n";
    CHECK_THROWS_WITH(parse_forcing_csv(doc), Catch::Matchers::ContainsSubstring("1979-02"));
    try {
        parse_forcing_csv(doc);
    } catch (const CsvError& e) {
        CHECK(e.row() == 2);
        CHECK(e.column() == "date");
    }
}

TEST_CASE("csv negative depth error carries row and column", "[timeseries]") {
    try {
        parse_forcing_csv("date,p_mm,t_c\n1979-01,-5.0,24.1\n");
        FAIL("expected CsvError");
    } catch (const CsvError& e) {
        CHECK(e.row() == 1);
        CHECK(e.column() == "p_mm");
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("negative depth"));
    }
}

TEST_CASE("csv rejects duplicates, bad dates, missing columns, nan", "[timeseries]") {
    CHECK_THROWS_AS(parse_forcing_csv("date,p_mm,t_c\n1979-01,1,20\n1979-01,1,20\n"), CsvError);
    CHECK_THROWS_AS(parse_forcing_csv("date,p_mm,t_c\n1979/01,1,20\n"), CsvError);
    CHECK_THROWS_AS(parse_forcing_csv("date,p_mm\n1979-01,1\n"), CsvError);
    CHECK_THROWS_AS(parse_forcing_csv("date,p_mm,t_c\n1979-01,nan,20\n"), CsvError);
    CHECK_THROWS_AS(parse_forcing_csv("date,p_mm,t_c\n1979-01,1,20\n1978-12,1,20\n"), CsvError);
    CHECK_THROWS_AS(parse_forcing_csv("date,p_mm,t_c\n"), CsvError);
    // temperature may be negative
    CHECK_NOTHROW(parse_forcing_csv("date,p_mm,t_c\n1979-01,1,-12.5\n"));
}

TEST_CASE("csv extra columns are ignored with a warning", "[timeseries]") {
    const auto result =
        parse_forcing_csv("date,p_mm,t_c,comment\n1979-01,1,20,hello\n1979-02,2,21,x\n");
    REQUIRE(result.warnings.size() == 1);
    CHECK_THAT(result.warnings[0], Catch::Matchers::ContainsSubstring("comment"));
    CHECK(result.series.size() == 2);
}

TEST_CASE("csv round-trip reparses identically", "[timeseries]") {
    std::mt19937_64 rng(7);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    MonthlySeries series = make_series(MonthKey{1990, 7}, 60);
    for (auto& rec : series.records) {
        rec.p_mm = 200.0 * u();
        rec.t_c = -5.0 + 40.0 * u();
        if (u() < 0.7) rec.q_mm = 50.0 * u();
        if (u() < 0.4) rec.et_mm = 80.0 * u();
        if (u() < 0.3) rec.sm_mm = 300.0 * u();
        if (u() < 0.2) rec.gw_mm = 100.0 * u();
        if (u() < 0.5) rec.pet_mm = 150.0 * u();
    }
    const auto reparsed = parse_forcing_csv(serialize_forcing_csv(series));
    CHECK(reparsed.series == series);
    CHECK(reparsed.warnings.empty());
}

TEST_CASE("split_at partitions without losing months", "[timeseries]") {
    const auto series = make_series(MonthKey{1979, 1}, 432);  // 1979-01..2014-12
    const auto [train, test] = split_at(series, MonthKey{2009, 1});
    CHECK(train.size() == 360);
    CHECK(test.size() == 72);
    CHECK(train.last_key() == MonthKey{2008, 12});
    CHECK(test.first_key() == MonthKey{2009, 1});

    MonthlySeries glued = train;
    glued.records.insert(glued.records.end(), test.records.begin(), test.records.end());
    CHECK(glued == series);
}

TEST_CASE("split_at rejects boundaries at or outside the span", "[timeseries]") {
    const auto series = make_series(MonthKey{1979, 1}, 24);
    CHECK_THROWS_AS(split_at(series, MonthKey{1979, 1}), std::invalid_argument);  // empty train
    CHECK_THROWS_AS(split_at(series, MonthKey{1978, 6}), std::invalid_argument);
    CHECK_THROWS_AS(split_at(series, MonthKey{1981, 1}), std::invalid_argument);
    CHECK_NOTHROW(split_at(series, MonthKey{1980, 12}));  // single-month test part
}

TEST_CASE("discharge depth conversion", "[timeseries]") {
    // 1 m^3/s over 8667.95 km^2 for a 30-day month
    const double depth = cms_to_mm_per_month(1.0, 8667.95, MonthKey{2010, 4});
    CHECK_THAT(depth, Catch::Matchers::WithinAbs(0.29903, 1e-5));
    CHECK(cms_to_mm_per_month(0.0, 8667.95, MonthKey{2010, 4}) == 0.0);

    // leap-February vs regular February scales by 29/28
    const double feb12 = cms_to_mm_per_month(3.5, 100.0, MonthKey{2012, 2});
    const double feb11 = cms_to_mm_per_month(3.5, 100.0, MonthKey{2011, 2});
    CHECK_THAT(feb12 / feb11, Catch::Matchers::WithinRel(29.0 / 28.0, 1e-14));

    CHECK_THROWS_AS(cms_to_mm_per_month(1.0, 0.0, MonthKey{2010, 1}), std::invalid_argument);
    CHECK_THROWS_AS(cms_to_mm_per_month(-1.0, 10.0, MonthKey{2010, 1}), std::invalid_argument);
}

TEST_CASE("conversion is linear in q and inverse in area", "[timeseries]") {
    std::mt19937_64 rng(11);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < 200; ++i) {
        const double q = 50.0 * u();
        const double area = 1.0 + 5000.0 * u();
        const double k = 0.5 + 4.0 * u();
        const MonthKey key{1990 + static_cast<int>(u() * 30), 1 + static_cast<int>(u() * 11.99)};
        const double base = cms_to_mm_per_month(q, area, key);
        CHECK_THAT(cms_to_mm_per_month(k * q, area, key), Catch::Matchers::WithinRel(k * base, 1e-12));
        CHECK_THAT(cms_to_mm_per_month(q, k * area, key), Catch::Matchers::WithinRel(base / k, 1e-12));
    }
}

TEST_CASE("q_cms fills q_mm only where absent", "[timeseries]") {
    auto series = make_series(MonthKey{2000, 1}, 3);
    series.records[0].q_cms = 2.0;
    series.records[1].q_cms = 2.0;
    series.records[1].q_mm = 99.0;  // explicit depth wins
    fill_q_from_cms(series, 500.0);
    CHECK(series.records[0].q_mm ==
          cms_to_mm_per_month(2.0, 500.0, MonthKey{2000, 1}));
    CHECK(series.records[1].q_mm == 99.0);
    CHECK_FALSE(series.records[2].q_mm.has_value());
}
