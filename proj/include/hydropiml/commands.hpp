#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydropiml/calib.hpp"
#include "hydropiml/config.hpp"
#include "hydropiml/metrics.hpp"
#include "hydropiml/pet.hpp"
#include "hydropiml/piml.hpp"
#include "hydropiml/report.hpp"
#include "hydropiml/serialize.hpp"
#include "hydropiml/synthetic.hpp"

namespace hydropiml {

// ============================================================================
// Batch commands behind the CLI. Each returns the list of files it wrote;
// failures throw, so the process exits non-zero unless every requested output
// landed on disk.
// ============================================================================

struct CommandResult {
    std::vector<std::string> written_files;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("failed writing " + path);
}

inline ParseResult load_forcing(const RunConfig& config) {
    if (config.forcing_path.empty()) throw std::invalid_argument("no forcing CSV given");
    auto parsed = parse_forcing_csv(read_file(config.forcing_path));
    if (config.area_km2) fill_q_from_cms(parsed.series, *config.area_km2);
    return parsed;
}

inline AbcdParams config_params(const RunConfig& config) {
    if (!config.abcd) throw std::invalid_argument("abcd parameters a, b, c, d are required");
    for (double v : *config.abcd) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("abcd parameters a, b, c, d must all be set");
        }
    }
    return AbcdParams((*config.abcd)[0], (*config.abcd)[1], (*config.abcd)[2],
                      (*config.abcd)[3]);
}

/// Observation column over a span of records. Values before `required_from`
/// may be absent (they are never read) and default to 0.
inline std::vector<double> observation_column(std::span<const MonthlyRecord> records,
                                              std::optional<double> MonthlyRecord::* member,
                                              const char* name, std::size_t required_from) {
    std::vector<double> out;
    out.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& value = records[i].*member;
        if (!value && i >= required_from) {
            throw std::invalid_argument(std::string("missing ") + name + " observation at " +
                                        format_month(records[i].key));
        }
        out.push_back(value.value_or(0.0));
    }
    return out;
}

inline std::string ensure_out_dir(const RunConfig& config) {
    if (config.out_path.empty()) throw std::invalid_argument("no output directory given");
    std::filesystem::create_directories(config.out_path);
    return config.out_path;
}

inline std::string prediction_csv(std::span<const MonthKey> keys,
                                  std::span<const double> observed,
                                  std::span<const double> predicted) {
    std::string out = "date,observed,predicted\n";
    for (std::size_t i = 0; i < keys.size(); ++i) {
        out += format_month(keys[i]);
        out += ',';
        out += format_double(observed[i]);
        out += ',';
        out += format_double(predicted[i]);
        out += '\n';
    }
    return out;
}

inline std::string display_name(RegressorKind kind) {
    switch (kind) {
        case RegressorKind::ridge: return "Ridge";
        case RegressorKind::lasso: return "LASSO";
        case RegressorKind::gpr: return "GPR";
    }
    throw std::logic_error("unknown regressor kind");
}

inline Json metric_json(const MetricTriple& m) {
    return Json{{"rmse", m.rmse}, {"pbias", m.pbias}, {"nse", m.nse}};
}

inline MetricTriple compute_metrics(std::span<const double> observed,
                                    std::span<const double> predicted) {
    return MetricTriple{rmse(observed, predicted), pbias(observed, predicted),
                        nse(observed, predicted)};
}

}  // namespace detail

// ----------------------------------------------------------------------------
// simulate
// ----------------------------------------------------------------------------

inline CommandResult run_simulate(const RunConfig& config) {
    auto parsed = detail::load_forcing(config);
    const auto params = detail::config_params(config);
    const auto forcing = attach_pet(parsed.series, config.latitude_deg);
    const auto trajectory = simulate(params, default_initial_state(), forcing);

    const std::string out_dir = detail::ensure_out_dir(config);
    const std::string path = out_dir + "/trajectory.csv";
    detail::write_file(path, trajectory_csv(forcing, trajectory));
    return {{path}, parsed.warnings};
}

// ----------------------------------------------------------------------------
// calibrate
// ----------------------------------------------------------------------------

inline CalibrationResult calibrate_on_train(const RunConfig& config,
                                            const MonthlySeries& train_series) {
    const auto forcing = attach_pet(train_series, config.latitude_deg);
    const auto observed_q = detail::observation_column(
        train_series.records, &MonthlyRecord::q_mm, "q_mm", config.warmup_months);
    return calibrate(forcing, observed_q, ParamBounds{}, config.warmup_months,
                     config.points_per_axis);
}

inline CommandResult run_calibrate(const RunConfig& config) {
    if (!config.split) throw std::invalid_argument("calibrate: a split month is required");
    auto parsed = detail::load_forcing(config);
    const auto [train_series, test_series] = split_at(parsed.series, *config.split);
    const auto result = calibrate_on_train(config, train_series);

    const std::string out_dir = detail::ensure_out_dir(config);
    const std::string path = out_dir + "/calibration.json";
    detail::write_file(path, to_json(result).dump(2) + "\n");
    return {{path}, parsed.warnings};
}

// ----------------------------------------------------------------------------
// evaluate
// ----------------------------------------------------------------------------

inline CommandResult run_evaluate(const RunConfig& config) {
    if (!config.split) throw std::invalid_argument("evaluate: a split month is required");
    auto parsed = detail::load_forcing(config);
    const auto [train_series, test_series] = split_at(parsed.series, *config.split);
    const std::size_t n_train = train_series.size();
    const std::size_t n_test = test_series.size();

    const auto full_forcing = attach_pet(parsed.series, config.latitude_deg);
    const ForcingSeries train_forcing(full_forcing.begin(),
                                      full_forcing.begin() + static_cast<long>(n_train));

    const auto train_q = detail::observation_column(
        train_series.records, &MonthlyRecord::q_mm, "q_mm", config.warmup_months);
    const auto train_et = detail::observation_column(
        train_series.records, &MonthlyRecord::et_mm, "et_mm", config.warmup_months);
    const auto test_q =
        detail::observation_column(test_series.records, &MonthlyRecord::q_mm, "q_mm", 0);
    const auto test_et =
        detail::observation_column(test_series.records, &MonthlyRecord::et_mm, "et_mm", 0);

    std::vector<MonthKey> test_keys;
    test_keys.reserve(n_test);
    for (const auto& rec : test_series.records) test_keys.push_back(rec.key);

    const auto calibration = calibrate_on_train(config, train_series);

    const std::string out_dir = detail::ensure_out_dir(config);
    CommandResult result;
    result.warnings = parsed.warnings;
    auto emit = [&](const std::string& name, std::string_view content) {
        const std::string path = out_dir + "/" + name;
        detail::write_file(path, content);
        result.written_files.push_back(path);
    };

    emit("calibration.json", to_json(calibration).dump(2) + "\n");

    Json ml_json = Json::object();
    Json piml_json = Json::object();
    std::vector<std::pair<std::string, MetricTriple>> ml_rows;
    std::vector<std::tuple<std::string, MetricTriple, MetricTriple>> piml_rows;

    for (const auto kind : config.regressors) {
        TrainOptions options;
        options.stage2_train_et = config.stage2_train_et;
        options.k_folds = config.k_folds;
        options.grid_override = config_grid(config, kind);

        const auto piml =
            train_piml(train_forcing, train_et, train_q, kind, calibration, options);
        const auto baseline = train_ml_baseline(train_forcing, train_q, kind, options);

        // predict over the full span so the test months inherit the training
        // period as spin-up, then slice the test window
        const auto piml_pred = predict_piml(piml, full_forcing);
        const auto ml_pred = predict_ml_baseline(baseline, full_forcing);
        auto slice = [&](const std::vector<double>& v) {
            return std::vector<double>(v.begin() + static_cast<long>(n_train), v.end());
        };
        const auto piml_et = slice(piml_pred.et_hat);
        const auto piml_q = slice(piml_pred.q_hat);
        const auto ml_q = slice(ml_pred.q_hat);
        const std::size_t piml_et_clips =
            detail::count_negative(slice(piml_pred.et_raw));
        const std::size_t piml_q_clips = detail::count_negative(slice(piml_pred.q_raw));
        const std::size_t ml_q_clips = detail::count_negative(slice(ml_pred.q_raw));

        const auto m_ml_q = detail::compute_metrics(test_q, ml_q);
        const auto m_piml_et = detail::compute_metrics(test_et, piml_et);
        const auto m_piml_q = detail::compute_metrics(test_q, piml_q);

        const std::string name = detail::display_name(kind);
        ml_rows.emplace_back(name, m_ml_q);
        piml_rows.emplace_back(name, m_piml_et, m_piml_q);
        ml_json[to_string(kind)] =
            Json{{"q", detail::metric_json(m_ml_q)}, {"clip_count_q", ml_q_clips}};
        piml_json[to_string(kind)] = Json{{"et", detail::metric_json(m_piml_et)},
                                          {"q", detail::metric_json(m_piml_q)},
                                          {"clip_count_et", piml_et_clips},
                                          {"clip_count_q", piml_q_clips},
                                          {"clip_count_train", piml.clip_count_train}};

        const std::string suffix = std::string(to_string(kind)) + ".csv";
        emit("predictions_q_ml_" + suffix, detail::prediction_csv(test_keys, test_q, ml_q));
        emit("predictions_q_piml_" + suffix,
             detail::prediction_csv(test_keys, test_q, piml_q));
        emit("predictions_et_piml_" + suffix,
             detail::prediction_csv(test_keys, test_et, piml_et));
        emit("model_piml_" + std::string(to_string(kind)) + ".json",
             to_json(piml).dump(2) + "\n");
    }

    const std::string config_text = canonical_config_text(config);
    const std::string config_hash = fnv1a_hex(config_text);

    Json report{{"provenance",
                 Json{{"artifact_version", kArtifactVersion}, {"config_hash", config_hash}}},
                {"config_text", config_text},
                {"split", Json{{"train_start", format_month(train_series.first_key())},
                               {"train_end", format_month(train_series.last_key())},
                               {"test_start", format_month(test_series.first_key())},
                               {"test_end", format_month(test_series.last_key())},
                               {"train_months", n_train},
                               {"test_months", n_test}}},
                {"calibration", to_json(calibration)},
                {"ml_models", std::move(ml_json)},
                {"piml_models", std::move(piml_json)}};
    emit("report.json", report.dump(2) + "\n");

    std::string md;
    md += "<!-- hydropiml " + std::string(kArtifactVersion) + " config " + config_hash +
          " -->\n\n";
    md += "# Skill report\n\n";
    md += "Test period " + format_month(test_series.first_key()) + ".." +
          format_month(test_series.last_key()) + ", trained on " +
          format_month(train_series.first_key()) + ".." +
          format_month(train_series.last_key()) + ".\n\n";
    md += "## ML models (Q)\n\n";
    md += markdown_single_table(ml_rows);
    md += "\n## PIML models (ET, Q)\n\n";
    md += markdown_dual_table(piml_rows);
    emit("report.md", md);

    return result;
}

// ----------------------------------------------------------------------------
// gen-synthetic
// ----------------------------------------------------------------------------

inline CommandResult run_gen_synthetic(const RunConfig& config) {
    if (config.out_path.empty()) {
        throw std::invalid_argument("gen-synthetic: an output CSV path is required");
    }
    SyntheticSpec spec;
    if (config.abcd) spec.params = detail::config_params(config);
    spec.start = config.synth_start;
    spec.end = config.synth_end;
    if (config.latitude_deg) spec.latitude_deg = *config.latitude_deg;
    spec.noise_level = config.noise_level;
    spec.seed = config.seed;

    const auto series = generate_synthetic_catchment(spec);
    if (auto parent = std::filesystem::path(config.out_path).parent_path(); !parent.empty()) {
        std::filesystem::create_directories(parent);
    }
    detail::write_file(config.out_path, serialize_forcing_csv(series));
    return {{config.out_path}, {}};
}

}  // namespace hydropiml
