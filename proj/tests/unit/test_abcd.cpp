#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>

#include <json.hpp>

#include "hydropiml/abcd.hpp"

using namespace hydropiml;

namespace {

struct RandomInputs {
    std::mt19937_64 rng{20240601};

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    }

    AbcdParams params() {
        return AbcdParams(uniform(0.1, 1.0), uniform(1.0, 1000.0), uniform(0.0, 1.0),
                          uniform(0.01, 10.0));
    }

    AbcdState state() { return AbcdState{uniform(0.0, 2000.0), uniform(0.0, 2000.0)}; }
};

ForcingSeries constant_forcing(int n, double p, double pet) {
    ForcingSeries f;
    MonthKey key{2000, 1};
    for (int i = 0; i < n; ++i) {
        f.push_back({key, p, 20.0, pet});
        key = key.next();
    }
    return f;
}

}  // namespace

TEST_CASE("parameter bounds are enforced at construction", "[abcd]") {
    CHECK_NOTHROW(AbcdParams(1.0, 2.0, 0.4, 1.5));
    CHECK_NOTHROW(AbcdParams(0.93, 5.0, 0.4, 1.5));
    CHECK_NOTHROW(AbcdParams(0.5, 5.0, 0.0, 3.0));  // c = 0 legal, d > 1 legal
    CHECK_THROWS_AS(AbcdParams(0.0, 5.0, 0.4, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(AbcdParams(1.1, 5.0, 0.4, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(AbcdParams(0.9, 0.0, 0.4, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(AbcdParams(0.9, 5.0, -0.1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(AbcdParams(0.9, 5.0, 1.1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(AbcdParams(0.9, 5.0, 0.4, 0.0), std::invalid_argument);
}

TEST_CASE("hand-evaluated step with zero discriminant", "[abcd]") {
    // a=1, b=2: u = (2+2)/2 = 2, disc = 4 - 2*2/1 = 0, so Y = W = 2
    const auto r = step(AbcdParams(1.0, 2.0, 0.4, 1.5), AbcdState{0.0, 0.0}, 2.0, 0.0);
    CHECK(r.fluxes.w == 2.0);
    CHECK_THAT(r.fluxes.y, Catch::Matchers::WithinAbs(2.0, 1e-14));
    CHECK(r.fluxes.et == 0.0);  // pet = 0
    CHECK_THAT(r.state.sm, Catch::Matchers::WithinAbs(2.0, 1e-14));
    CHECK_THAT(r.fluxes.dr, Catch::Matchers::WithinAbs(0.0, 1e-14));
    CHECK_THAT(r.fluxes.gr, Catch::Matchers::WithinAbs(0.0, 1e-14));
    CHECK_THAT(r.state.gw, Catch::Matchers::WithinAbs(0.0, 1e-14));
    CHECK_THAT(r.fluxes.q, Catch::Matchers::WithinAbs(0.0, 1e-14));
}

TEST_CASE("dry month from empty storages is a fixed point", "[abcd]") {
    RandomInputs random;
    for (int i = 0; i < 50; ++i) {
        const auto r = step(random.params(), AbcdState{0.0, 0.0}, 0.0, 0.0);
        CHECK(r.fluxes.w == 0.0);
        CHECK(r.fluxes.y == 0.0);
        CHECK(r.fluxes.et == 0.0);
        CHECK(r.fluxes.dr == 0.0);
        CHECK(r.fluxes.gr == 0.0);
        CHECK(r.fluxes.gd == 0.0);
        CHECK(r.fluxes.q == 0.0);
        CHECK(r.state == AbcdState{0.0, 0.0});
    }
}

TEST_CASE("golden step fixture from the line-by-line oracle", "[abcd]") {
    std::ifstream in(TEST_DATA_DIR "/abcd_step_golden.json");
    REQUIRE(in);
    const auto fixture = nlohmann::json::parse(in);

    const AbcdParams params(fixture["params"]["a"], fixture["params"]["b"],
                            fixture["params"]["c"], fixture["params"]["d"]);
    const AbcdState prev{fixture["prev_state"]["sm"], fixture["prev_state"]["gw"]};
    const auto r = step(params, prev, fixture["p_mm"], fixture["pet_mm"]);

    const auto& expected = fixture["expected"];
    auto check_close = [&](double actual, const char* key) {
        const double want = expected.at(key).get<double>();
        if (want == 0.0) {
            CHECK_THAT(actual, Catch::Matchers::WithinAbs(0.0, 1e-15));
        } else {
            CHECK_THAT(actual, Catch::Matchers::WithinRel(want, 1e-12));
        }
    };
    check_close(r.fluxes.w, "w");
    check_close(r.fluxes.y, "y");
    check_close(r.fluxes.et, "et");
    check_close(r.state.sm, "sm");
    check_close(r.fluxes.dr, "dr");
    check_close(r.fluxes.gr, "gr");
    check_close(r.state.gw, "gw");
    check_close(r.fluxes.gd, "gd");
    check_close(r.fluxes.q, "q");
}

TEST_CASE("per-step storage balances close to machine precision", "[abcd]") {
    RandomInputs random;
    for (int i = 0; i < 2000; ++i) {
        const auto params = random.params();
        const auto prev = random.state();
        const double p = random.uniform(0.0, 2000.0);
        const double pet = random.uniform(0.0, 500.0);
        const auto r = step(params, prev, p, pet);

        // soil-moisture balance: SM + ET + DR + GR = SM_prev + P
        const double soil = r.state.sm + r.fluxes.et + r.fluxes.dr + r.fluxes.gr - prev.sm - p;
        CHECK(std::abs(soil) <= 1e-9);
        // groundwater balance: GW + GD = GW_prev + GR
        const double ground = r.state.gw + r.fluxes.gd - prev.gw - r.fluxes.gr;
        CHECK(std::abs(ground) <= 1e-9);
    }
}

TEST_CASE("flux ordering and exact complements", "[abcd]") {
    RandomInputs random;
    for (int i = 0; i < 2000; ++i) {
        const auto params = random.params();
        const auto prev = random.state();
        const double p = random.uniform(0.0, 2000.0);
        const double pet = random.uniform(0.0, 500.0);
        const auto r = step(params, prev, p, pet);

        CHECK(r.fluxes.y >= 0.0);
        CHECK(r.fluxes.y <= r.fluxes.w);
        CHECK(r.fluxes.et >= 0.0);
        CHECK(r.fluxes.et <= r.fluxes.y);
        CHECK(r.state.sm == r.fluxes.y - r.fluxes.et);                      // exact
        CHECK(r.fluxes.dr + r.fluxes.gr == r.fluxes.w - r.fluxes.y);        // exact
        CHECK(r.fluxes.q == r.fluxes.dr + r.fluxes.gd);
        CHECK(r.fluxes.dr >= 0.0);
        CHECK(r.fluxes.gr >= 0.0);
        CHECK(r.fluxes.gd >= 0.0);
        if (r.fluxes.w > r.fluxes.y) {
            CHECK_THAT(r.fluxes.gr / (r.fluxes.w - r.fluxes.y),
                       Catch::Matchers::WithinAbs(params.c, 1e-12));
        }
    }
}

TEST_CASE("c at its extremes shuts one branch exactly", "[abcd]") {
    RandomInputs random;
    for (int i = 0; i < 200; ++i) {
        const auto base = random.params();
        const auto prev = random.state();
        const double p = random.uniform(0.0, 1000.0);
        const double pet = random.uniform(0.0, 300.0);
        const auto all_recharge =
            step(AbcdParams(base.a, base.b, 1.0, base.d), prev, p, pet);
        CHECK(all_recharge.fluxes.dr == 0.0);
        const auto all_runoff = step(AbcdParams(base.a, base.b, 0.0, base.d), prev, p, pet);
        CHECK(all_runoff.fluxes.gr == 0.0);
    }
}

TEST_CASE("et rises with pet, all else fixed", "[abcd]") {
    const AbcdParams params(0.93, 5.0, 0.4, 1.5);
    const AbcdState prev{120.0, 30.0};
    double prev_et = -1.0;
    for (double pet = 0.0; pet <= 200.0; pet += 5.0) {
        const double et = step(params, prev, 40.0, pet).fluxes.et;
        CHECK(et >= prev_et);
        prev_et = et;
    }
}

TEST_CASE("rejects invalid step inputs", "[abcd]") {
    const AbcdParams params(0.9, 5.0, 0.4, 1.5);
    CHECK_THROWS_AS(step(params, AbcdState{-1.0, 0.0}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(step(params, AbcdState{0.0, 0.0}, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(step(params, AbcdState{0.0, 0.0}, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("single-month simulate equals one step", "[abcd]") {
    const AbcdParams params(0.93, 5.0, 0.4, 1.5);
    const AbcdState init{15.0, 25.0};
    const auto forcing = constant_forcing(1, 80.0, 60.0);
    const auto trajectory = simulate(params, init, forcing);
    REQUIRE(trajectory.size() == 1);
    CHECK(trajectory[0] == step(params, init, 80.0, 60.0));
}

TEST_CASE("all-zero forcing from empty storages stays at zero", "[abcd]") {
    const auto trajectory =
        simulate(AbcdParams(0.5, 10.0, 0.3, 0.8), AbcdState{0.0, 0.0}, constant_forcing(36, 0.0, 0.0));
    for (const auto& r : trajectory) {
        CHECK(r.state == AbcdState{0.0, 0.0});
        CHECK(r.fluxes.q == 0.0);
    }
}

TEST_CASE("cumulative balance closes over long random runs", "[abcd]") {
    RandomInputs random;
    for (int rep = 0; rep < 20; ++rep) {
        const auto params = random.params();
        const AbcdState init{random.uniform(0.0, 500.0), random.uniform(0.0, 300.0)};
        ForcingSeries forcing;
        MonthKey key{1980, 1};
        double total_p = 0.0;
        for (int i = 0; i < 120; ++i) {
            const double p = random.uniform(0.0, 400.0);
            total_p += p;
            forcing.push_back({key, p, 20.0, random.uniform(0.0, 200.0)});
            key = key.next();
        }
        const auto trajectory = simulate(params, init, forcing);
        REQUIRE(trajectory.size() == forcing.size());
        double total_out = 0.0;
        for (const auto& r : trajectory) total_out += r.fluxes.et + r.fluxes.q;
        const auto& last = trajectory.back().state;
        const double residual = init.sm + init.gw + total_p - last.sm - last.gw - total_out;
        CHECK(std::abs(residual) <= 1e-7);
    }
}

TEST_CASE("trajectory csv has the documented column layout", "[abcd]") {
    const auto forcing = constant_forcing(2, 50.0, 30.0);
    const auto trajectory = simulate(AbcdParams(0.93, 5.0, 0.4, 1.5), AbcdState{10.0, 20.0}, forcing);
    const auto csv = trajectory_csv(forcing, trajectory);
    CHECK(csv.rfind("date,w,y,et,sm,dr,gr,gw,gd,q\n", 0) == 0);
    CHECK(csv.find("2000-01,") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
