#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hydropiml/piml.hpp"
#include "hydropiml/timeseries.hpp"

namespace hydropiml {

// ============================================================================
// Run configuration: a flat `key = value` file plus command-line overrides
// (flags win). The resolved configuration has a canonical text form whose
// hash goes into every report for provenance.
// ============================================================================

struct RunConfig {
    std::string forcing_path;
    std::string out_path;
    std::optional<double> latitude_deg;
    std::optional<double> area_km2;
    std::optional<MonthKey> split;
    std::size_t warmup_months = 24;
    std::size_t points_per_axis = 5;
    std::size_t k_folds = 5;
    std::vector<RegressorKind> regressors{RegressorKind::ridge, RegressorKind::lasso,
                                          RegressorKind::gpr};
    Stage2EtSource stage2_train_et = Stage2EtSource::observed;
    bool random_free = true;  // provenance: no randomized algorithm anywhere

    // simulate / gen-synthetic
    std::optional<std::array<double, 4>> abcd;  // a, b, c, d
    double noise_level = 0.0;
    std::uint64_t seed = 42;
    MonthKey synth_start{1979, 1};
    MonthKey synth_end{2014, 12};

    // optional hyperparameter grid overrides
    std::optional<std::vector<double>> ridge_lambdas;
    std::optional<std::vector<double>> lasso_lambdas;
    std::optional<std::vector<double>> gpr_length_scales;
    std::optional<std::vector<double>> gpr_sigma_f2;
    std::optional<std::vector<double>> gpr_sigma_n2;
};

namespace detail {

inline double parse_config_double(std::string_view value, const std::string& key) {
    double out = 0.0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("config: bad number for '" + key + "': " +
                                    std::string(value));
    }
    return out;
}

inline std::uint64_t parse_config_uint(std::string_view value, const std::string& key) {
    std::uint64_t out = 0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("config: bad integer for '" + key + "': " +
                                    std::string(value));
    }
    return out;
}

inline std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        if (comma == std::string_view::npos) comma = value.size();
        auto item = trim(value.substr(start, comma - start));
        if (!item.empty()) out.emplace_back(item);
        start = comma + 1;
    }
    return out;
}

inline std::vector<double> parse_double_list(std::string_view value, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(value)) {
        out.push_back(parse_config_double(item, key));
    }
    if (out.empty()) throw std::invalid_argument("config: empty list for '" + key + "'");
    return out;
}

inline MonthKey parse_config_month(std::string_view value, const std::string& key) {
    auto parsed = parse_month(value);
    if (!parsed) {
        throw std::invalid_argument("config: bad month for '" + key + "' (want YYYY-MM): " +
                                    std::string(value));
    }
    return *parsed;
}

inline bool parse_config_bool(std::string_view value, const std::string& key) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config: bad boolean for '" + key + "'");
}

}  // namespace detail

/// Applies one key/value to the config. Unknown keys are an error.
inline void apply_config_entry(RunConfig& config, const std::string& key,
                               std::string_view value) {
    using detail::parse_config_double;
    using detail::parse_config_uint;
    if (key == "forcing") {
        config.forcing_path = value;
    } else if (key == "out") {
        config.out_path = value;
    } else if (key == "latitude") {
        config.latitude_deg = parse_config_double(value, key);
    } else if (key == "area_km2") {
        config.area_km2 = parse_config_double(value, key);
    } else if (key == "split") {
        config.split = detail::parse_config_month(value, key);
    } else if (key == "warmup_months") {
        config.warmup_months = parse_config_uint(value, key);
    } else if (key == "points_per_axis") {
        config.points_per_axis = parse_config_uint(value, key);
    } else if (key == "k_folds") {
        config.k_folds = parse_config_uint(value, key);
    } else if (key == "regressors") {
        config.regressors.clear();
        for (const auto& name : detail::split_list(value)) {
            config.regressors.push_back(regressor_kind_from_string(name));
        }
        if (config.regressors.empty()) {
            throw std::invalid_argument("config: empty regressor list");
        }
    } else if (key == "stage2_train_et") {
        if (value == "observed") {
            config.stage2_train_et = Stage2EtSource::observed;
        } else if (value == "predicted") {
            config.stage2_train_et = Stage2EtSource::predicted;
        } else {
            throw std::invalid_argument("config: stage2_train_et must be observed|predicted");
        }
    } else if (key == "random_free") {
        config.random_free = detail::parse_config_bool(value, key);
    } else if (key == "a" || key == "b" || key == "c" || key == "d") {
        if (!config.abcd) config.abcd = std::array<double, 4>{0.0, 0.0, 0.0, 0.0};
        (*config.abcd)[key[0] - 'a'] = parse_config_double(value, key);
    } else if (key == "noise") {
        config.noise_level = parse_config_double(value, key);
    } else if (key == "seed") {
        config.seed = parse_config_uint(value, key);
    } else if (key == "start") {
        config.synth_start = detail::parse_config_month(value, key);
    } else if (key == "end") {
        config.synth_end = detail::parse_config_month(value, key);
    } else if (key == "ridge_lambdas") {
        config.ridge_lambdas = detail::parse_double_list(value, key);
    } else if (key == "lasso_lambdas") {
        config.lasso_lambdas = detail::parse_double_list(value, key);
    } else if (key == "gpr_length_scales") {
        config.gpr_length_scales = detail::parse_double_list(value, key);
    } else if (key == "gpr_sigma_f2") {
        config.gpr_sigma_f2 = detail::parse_double_list(value, key);
    } else if (key == "gpr_sigma_n2") {
        config.gpr_sigma_n2 = detail::parse_double_list(value, key);
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

/// Parses a flat `key = value` document. `#` starts a comment; blank lines are
/// skipped.
inline RunConfig parse_config_text(std::string_view text, RunConfig config = {}) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        }
        const std::string key{detail::trim(line.substr(0, eq))};
        apply_config_entry(config, key, detail::trim(line.substr(eq + 1)));
    }
    return config;
}

/// Canonical `key = value` rendering of the resolved configuration. This text
/// is what gets hashed for provenance, and it embeds every field that can
/// affect an output.
inline std::string canonical_config_text(const RunConfig& c) {
    std::string out;
    auto emit = [&](const std::string& key, const std::string& value) {
        out += key + " = " + value + "\n";
    };
    auto num = [](double v) { return detail::format_double(v); };
    emit("forcing", c.forcing_path);
    emit("out", c.out_path);
    if (c.latitude_deg) emit("latitude", num(*c.latitude_deg));
    if (c.area_km2) emit("area_km2", num(*c.area_km2));
    if (c.split) emit("split", format_month(*c.split));
    emit("warmup_months", std::to_string(c.warmup_months));
    emit("points_per_axis", std::to_string(c.points_per_axis));
    emit("k_folds", std::to_string(c.k_folds));
    std::string kinds;
    for (const auto kind : c.regressors) {
        if (!kinds.empty()) kinds += ',';
        kinds += to_string(kind);
    }
    emit("regressors", kinds);
    emit("stage2_train_et",
         c.stage2_train_et == Stage2EtSource::observed ? "observed" : "predicted");
    emit("random_free", c.random_free ? "true" : "false");
    if (c.abcd) {
        emit("a", num((*c.abcd)[0]));
        emit("b", num((*c.abcd)[1]));
        emit("c", num((*c.abcd)[2]));
        emit("d", num((*c.abcd)[3]));
    }
    emit("noise", num(c.noise_level));
    emit("seed", std::to_string(c.seed));
    emit("start", format_month(c.synth_start));
    emit("end", format_month(c.synth_end));
    auto emit_list = [&](const std::string& key, const std::optional<std::vector<double>>& v) {
        if (!v) return;
        std::string joined;
        for (double x : *v) {
            if (!joined.empty()) joined += ',';
            joined += num(x);
        }
        emit(key, joined);
    };
    emit_list("ridge_lambdas", c.ridge_lambdas);
    emit_list("lasso_lambdas", c.lasso_lambdas);
    emit_list("gpr_length_scales", c.gpr_length_scales);
    emit_list("gpr_sigma_f2", c.gpr_sigma_f2);
    emit_list("gpr_sigma_n2", c.gpr_sigma_n2);
    return out;
}

/// Grid override for one regressor kind, or the built-in default.
inline HyperGrid config_grid(const RunConfig& c, RegressorKind kind) {
    switch (kind) {
        case RegressorKind::ridge:
            if (c.ridge_lambdas) return HyperGrid{{{"lambda", *c.ridge_lambdas}}};
            break;
        case RegressorKind::lasso:
            if (c.lasso_lambdas) return HyperGrid{{{"lambda", *c.lasso_lambdas}}};
            break;
        case RegressorKind::gpr:
            if (c.gpr_length_scales || c.gpr_sigma_f2 || c.gpr_sigma_n2) {
                HyperGrid def = default_grid(RegressorKind::gpr);
                return HyperGrid{{{"length_scale",
                                   c.gpr_length_scales.value_or(def.axes[0].second)},
                                  {"sigma_f2", c.gpr_sigma_f2.value_or(def.axes[1].second)},
                                  {"sigma_n2", c.gpr_sigma_n2.value_or(def.axes[2].second)}}};
            }
            break;
    }
    return default_grid(kind);
}

}  // namespace hydropiml
