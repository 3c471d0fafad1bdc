#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace hydropiml {

// ============================================================================
// Report formatting: the two markdown skill tables and the provenance hash.
// ============================================================================

struct MetricTriple {
    double rmse = 0.0;
    double pbias = 0.0;
    double nse = 0.0;
};

namespace detail {

/// Fixed three-decimal formatting used in every report table.
inline std::string format_metric(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace detail

/// Single-variable skill table (one metric triple per model):
///
///   | Model | RMSE | PBIAS | NSE |
///   |---|---:|---:|---:|
///   | ... | 0.000 | 0.000 | 0.000 |
inline std::string markdown_single_table(
    const std::vector<std::pair<std::string, MetricTriple>>& rows) {
    std::string out = "| Model | RMSE | PBIAS | NSE |\n|---|---:|---:|---:|\n";
    for (const auto& [name, m] : rows) {
        out += "| " + name + " | " + detail::format_metric(m.rmse) + " | " +
               detail::format_metric(m.pbias) + " | " + detail::format_metric(m.nse) +
               " |\n";
    }
    return out;
}

/// Two-variable skill table (ET triple then Q triple per model):
///
///   | Model | ET RMSE | ET PBIAS | ET NSE | Q RMSE | Q PBIAS | Q NSE |
inline std::string markdown_dual_table(
    const std::vector<std::tuple<std::string, MetricTriple, MetricTriple>>& rows) {
    std::string out =
        "| Model | ET RMSE | ET PBIAS | ET NSE | Q RMSE | Q PBIAS | Q NSE |\n"
        "|---|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& [name, et, q] : rows) {
        out += "| " + name + " | " + detail::format_metric(et.rmse) + " | " +
               detail::format_metric(et.pbias) + " | " + detail::format_metric(et.nse) +
               " | " + detail::format_metric(q.rmse) + " | " +
               detail::format_metric(q.pbias) + " | " + detail::format_metric(q.nse) +
               " |\n";
    }
    return out;
}

/// FNV-1a 64-bit, rendered as 16 hex digits. Used for the config provenance
/// hash in report headers.
inline std::string fnv1a_hex(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        hash ^= ch;
        hash *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace hydropiml
