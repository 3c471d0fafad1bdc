// hydropiml command-line tool: simulate, calibrate, evaluate, gen-synthetic.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hydropiml/commands.hpp"
#include "hydropiml/version.hpp"

namespace {

using hydropiml::RunConfig;

struct CliOverrides {
    std::optional<std::string> config_path;
    std::optional<std::string> forcing;
    std::optional<std::string> out;
    std::optional<double> latitude;
    std::optional<double> area_km2;
    std::optional<std::string> split;
    std::optional<std::string> regressors;
    std::optional<std::size_t> warmup;
    std::optional<std::size_t> points_per_axis;
    std::optional<std::size_t> k_folds;
    std::optional<std::string> stage2_train_et;
    std::optional<std::vector<double>> params;
    std::optional<double> noise;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> start;
    std::optional<std::string> end;
};

void add_common_flags(CLI::App& cmd, CliOverrides& o) {
    cmd.add_option("--config", o.config_path, "flat key = value configuration file");
    cmd.add_option("--forcing", o.forcing, "monthly forcing CSV");
    cmd.add_option("--out", o.out, "output directory (file path for gen-synthetic)");
    cmd.add_option("--latitude", o.latitude, "latitude in degrees, for Hamon PET");
}

/// Config file first, then flags on top (flags win).
RunConfig resolve(const CliOverrides& o) {
    RunConfig config;
    if (o.config_path) {
        config = hydropiml::parse_config_text(hydropiml::detail::read_file(*o.config_path));
    }
    auto set = [&](const char* key, const auto& opt) {
        if (opt) hydropiml::apply_config_entry(config, key, std::to_string(*opt));
    };
    if (o.forcing) config.forcing_path = *o.forcing;
    if (o.out) config.out_path = *o.out;
    if (o.latitude) config.latitude_deg = *o.latitude;
    if (o.area_km2) config.area_km2 = *o.area_km2;
    if (o.split) hydropiml::apply_config_entry(config, "split", *o.split);
    if (o.regressors) hydropiml::apply_config_entry(config, "regressors", *o.regressors);
    set("warmup_months", o.warmup);
    set("points_per_axis", o.points_per_axis);
    set("k_folds", o.k_folds);
    if (o.stage2_train_et) {
        hydropiml::apply_config_entry(config, "stage2_train_et", *o.stage2_train_et);
    }
    if (o.params) {
        if (o.params->size() != 4) {
            throw std::invalid_argument("--params wants exactly four values: a,b,c,d");
        }
        config.abcd = std::array<double, 4>{(*o.params)[0], (*o.params)[1], (*o.params)[2],
                                            (*o.params)[3]};
    }
    if (o.noise) config.noise_level = *o.noise;
    if (o.seed) config.seed = *o.seed;
    if (o.start) hydropiml::apply_config_entry(config, "start", *o.start);
    if (o.end) hydropiml::apply_config_entry(config, "end", *o.end);
    return config;
}

int run(const CliOverrides& o,
        hydropiml::CommandResult (*command)(const hydropiml::RunConfig&)) {
    const auto config = resolve(o);
    const auto result = command(config);
    for (const auto& warning : result.warnings) {
        std::fprintf(stderr, "warning: %s\n", warning.c_str());
    }
    for (const auto& path : result.written_files) {
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"abcd water-balance model with a two-stage physics-informed ML cascade"};
    app.set_version_flag("--version", hydropiml::kArtifactVersion);
    app.require_subcommand(1);

    CliOverrides o;

    auto* sim = app.add_subcommand("simulate", "run the water-balance model, write trajectory.csv");
    add_common_flags(*sim, o);
    sim->add_option("--params", o.params, "a,b,c,d")->delimiter(',');
    sim->add_option("--area-km2", o.area_km2, "catchment area for q_cms conversion");

    auto* cal = app.add_subcommand("calibrate", "calibrate a,b,c,d on the training split");
    add_common_flags(*cal, o);
    cal->add_option("--split", o.split, "first test month, YYYY-MM");
    cal->add_option("--warmup", o.warmup, "warm-up months excluded from the objective");
    cal->add_option("--points-per-axis", o.points_per_axis, "seed grid resolution");
    cal->add_option("--area-km2", o.area_km2, "catchment area for q_cms conversion");

    auto* eval = app.add_subcommand(
        "evaluate", "train ML baseline + PIML cascade, write skill reports and predictions");
    add_common_flags(*eval, o);
    eval->add_option("--split", o.split, "first test month, YYYY-MM");
    eval->add_option("--warmup", o.warmup, "warm-up months excluded from training");
    eval->add_option("--points-per-axis", o.points_per_axis, "seed grid resolution");
    eval->add_option("--k-folds", o.k_folds, "chronological CV folds for grid search");
    eval->add_option("--regressors", o.regressors, "comma list from ridge,lasso,gpr");
    eval->add_option("--stage2-train-et", o.stage2_train_et, "observed|predicted");
    eval->add_option("--area-km2", o.area_km2, "catchment area for q_cms conversion");

    auto* gen = app.add_subcommand("gen-synthetic", "emit a synthetic catchment CSV");
    add_common_flags(*gen, o);
    gen->add_option("--params", o.params, "a,b,c,d")->delimiter(',');
    gen->add_option("--noise", o.noise, "multiplicative observation noise level");
    gen->add_option("--seed", o.seed, "random seed");
    gen->add_option("--start", o.start, "first month, YYYY-MM");
    gen->add_option("--end", o.end, "last month, YYYY-MM");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run(o, hydropiml::run_simulate);
        if (cal->parsed()) return run(o, hydropiml::run_calibrate);
        if (eval->parsed()) return run(o, hydropiml::run_evaluate);
        if (gen->parsed()) return run(o, hydropiml::run_gen_synthetic);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
