#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hydropiml {

// ============================================================================
// Calendar
// ============================================================================

/// Calendar month identifier. Ordering is chronological; the successor of
/// (y, 12) is (y+1, 1).
struct MonthKey {
    int year = 0;
    int month = 1;  // 1..12

    friend constexpr auto operator<=>(const MonthKey&, const MonthKey&) = default;

    /// Linear month count, used for gap checks and distances.
    constexpr int index() const { return year * 12 + (month - 1); }

    constexpr MonthKey next() const {
        return month == 12 ? MonthKey{year + 1, 1} : MonthKey{year, month + 1};
    }
};

constexpr int months_between(MonthKey from, MonthKey to) {
    return to.index() - from.index();
}

constexpr bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

constexpr int days_in_month(MonthKey key) {
    constexpr int days[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (key.month == 2 && is_leap_year(key.year)) return 29;
    return days[key.month - 1];
}

/// Formats as "YYYY-MM" (zero padded).
inline std::string format_month(MonthKey key) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", key.year, key.month);
    return buf;
}

/// Parses "YYYY-MM". Returns nullopt on any malformation.
inline std::optional<MonthKey> parse_month(std::string_view text) {
    if (text.size() != 7 || text[4] != '-') return std::nullopt;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u}) {
        if (text[i] < '0' || text[i] > '9') return std::nullopt;
    }
    int year = 0;
    int month = 0;
    std::from_chars(text.data(), text.data() + 4, year);
    std::from_chars(text.data() + 5, text.data() + 7, month);
    if (month < 1 || month > 12) return std::nullopt;
    return MonthKey{year, month};
}

// ============================================================================
// Data model
// ============================================================================

/// One month of forcing and (optional) observations. Depths are mm/month;
/// temperature is degrees C and may be negative. Absent observations stay
/// absent -- 0 is a legal depth and is never used as a sentinel.
struct MonthlyRecord {
    MonthKey key;
    double p_mm = 0.0;
    double t_c = 0.0;
    std::optional<double> q_mm;
    std::optional<double> q_cms;  // gauge discharge, convertible via area
    std::optional<double> et_mm;
    std::optional<double> sm_mm;
    std::optional<double> gw_mm;
    std::optional<double> pet_mm;

    friend bool operator==(const MonthlyRecord&, const MonthlyRecord&) = default;
};

/// Gap-free, strictly increasing monthly record list.
struct MonthlySeries {
    std::vector<MonthlyRecord> records;

    std::size_t size() const { return records.size(); }
    MonthKey first_key() const { return records.front().key; }
    MonthKey last_key() const { return records.back().key; }

    friend bool operator==(const MonthlySeries&, const MonthlySeries&) = default;
};

/// One month of model forcing after PET attachment.
struct ForcingMonth {
    MonthKey key;
    double p_mm = 0.0;
    double t_c = 0.0;
    double pet_mm = 0.0;
};

using ForcingSeries = std::vector<ForcingMonth>;

// ============================================================================
// CSV ingestion
// ============================================================================

/// Parse/validation failure with source position. `row` counts data rows from
/// 1; row 0 refers to the header line.
class CsvError : public std::runtime_error {
  public:
    CsvError(std::size_t row, std::string column, const std::string& message)
        : std::runtime_error("row " + std::to_string(row) + ", column " + column +
                             ": " + message),
          row_(row),
          column_(std::move(column)) {}

    std::size_t row() const { return row_; }
    const std::string& column() const { return column_; }

  private:
    std::size_t row_;
    std::string column_;
};

struct ParseResult {
    MonthlySeries series;
    std::vector<std::string> warnings;  // one entry per ignored extra column
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

inline double parse_double_cell(std::string_view cell, std::size_t row,
                                const std::string& column) {
    double value = 0.0;
    const char* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw CsvError(row, column, "malformed number '" + std::string(cell) + "'");
    }
    if (!std::isfinite(value)) {
        throw CsvError(row, column, "non-finite value");
    }
    return value;
}

/// Shortest decimal representation that round-trips through a double.
inline std::string format_double(double value) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

}  // namespace detail

/// Parses the monthly forcing CSV. Required columns: date, p_mm, t_c.
/// Optional columns: q_mm, q_cms, et_mm, sm_mm, gw_mm, pet_mm. Column order is
/// irrelevant; unknown columns are ignored and reported in `warnings`. Dates
/// are "YYYY-MM"; the series must be gap-free and duplicate-free. Depths must
/// be non-negative; temperature may be negative. Accepts \n or \r\n newlines.
inline ParseResult parse_forcing_csv(std::string_view text) {
    // UTF-8 BOM, if present
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    ParseResult result;
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(detail::trim(text.substr(pos)));
            break;
        }
        lines.push_back(detail::trim(text.substr(pos, nl - pos)));
        pos = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw CsvError(0, "date", "empty document");

    static constexpr const char* kKnown[] = {"date", "p_mm",  "t_c",   "q_mm", "q_cms",
                                             "et_mm", "sm_mm", "gw_mm", "pet_mm"};
    const auto header = detail::split_fields(lines[0]);
    // column name -> header position
    std::vector<std::pair<std::string, std::size_t>> known_cols;
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string name(header[i]);
        bool recognized = false;
        for (const char* k : kKnown) {
            if (name == k) {
                recognized = true;
                for (const auto& [seen, idx] : known_cols) {
                    if (seen == name) {
                        throw CsvError(0, name, "duplicate column in header");
                    }
                }
                known_cols.emplace_back(name, i);
                break;
            }
        }
        if (!recognized) {
            result.warnings.push_back("ignoring unknown column '" + name + "'");
        }
    }
    auto col = [&](const char* name) -> std::optional<std::size_t> {
        for (const auto& [seen, idx] : known_cols) {
            if (seen == name) return idx;
        }
        return std::nullopt;
    };
    for (const char* required : {"date", "p_mm", "t_c"}) {
        if (!col(required)) throw CsvError(0, required, "missing required column");
    }

    if (lines.size() < 2) throw CsvError(1, "date", "no data rows");

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::size_t row = li;  // data rows are 1-based
        if (lines[li].empty()) throw CsvError(row, "date", "blank line inside data");
        const auto cells = detail::split_fields(lines[li]);
        if (cells.size() != header.size()) {
            throw CsvError(row, "date",
                           "expected " + std::to_string(header.size()) + " cells, got " +
                               std::to_string(cells.size()));
        }
        auto cell = [&](const char* name) -> std::optional<std::string_view> {
            auto idx = col(name);
            if (!idx || cells[*idx].empty()) return std::nullopt;
            return cells[*idx];
        };

        MonthlyRecord rec;
        auto date_cell = cell("date");
        if (!date_cell) throw CsvError(row, "date", "missing date");
        auto key = parse_month(*date_cell);
        if (!key) {
            throw CsvError(row, "date",
                           "malformed date '" + std::string(*date_cell) + "' (want YYYY-MM)");
        }
        rec.key = *key;

        auto depth = [&](const char* name) -> std::optional<double> {
            auto c = cell(name);
            if (!c) return std::nullopt;
            double v = detail::parse_double_cell(*c, row, name);
            if (v < 0.0) throw CsvError(row, name, "negative depth");
            return v;
        };
        auto p = depth("p_mm");
        if (!p) throw CsvError(row, "p_mm", "missing required value");
        rec.p_mm = *p;
        auto t = cell("t_c");
        if (!t) throw CsvError(row, "t_c", "missing required value");
        rec.t_c = detail::parse_double_cell(*t, row, "t_c");
        rec.q_mm = depth("q_mm");
        rec.q_cms = depth("q_cms");
        rec.et_mm = depth("et_mm");
        rec.sm_mm = depth("sm_mm");
        rec.gw_mm = depth("gw_mm");
        rec.pet_mm = depth("pet_mm");

        if (!result.series.records.empty()) {
            const MonthKey prev = result.series.records.back().key;
            if (rec.key == prev) {
                throw CsvError(row, "date", "duplicate month " + format_month(rec.key));
            }
            if (rec.key < prev) {
                throw CsvError(row, "date", "out-of-order month " + format_month(rec.key));
            }
            if (rec.key != prev.next()) {
                throw CsvError(row, "date", "gap: missing month " + format_month(prev.next()));
            }
        }
        result.series.records.push_back(rec);
    }
    return result;
}

/// Inverse of parse_forcing_csv. Optional columns are emitted only when at
/// least one record carries a value; absent cells stay empty.
inline std::string serialize_forcing_csv(const MonthlySeries& series) {
    auto any = [&](auto member) {
        return std::any_of(series.records.begin(), series.records.end(),
                           [&](const MonthlyRecord& r) { return (r.*member).has_value(); });
    };
    struct OptCol {
        const char* name;
        std::optional<double> MonthlyRecord::* member;
        bool present;
    };
    OptCol cols[] = {
        {"pet_mm", &MonthlyRecord::pet_mm, any(&MonthlyRecord::pet_mm)},
        {"q_mm", &MonthlyRecord::q_mm, any(&MonthlyRecord::q_mm)},
        {"q_cms", &MonthlyRecord::q_cms, any(&MonthlyRecord::q_cms)},
        {"et_mm", &MonthlyRecord::et_mm, any(&MonthlyRecord::et_mm)},
        {"sm_mm", &MonthlyRecord::sm_mm, any(&MonthlyRecord::sm_mm)},
        {"gw_mm", &MonthlyRecord::gw_mm, any(&MonthlyRecord::gw_mm)},
    };

    std::string out = "date,p_mm,t_c";
    for (const auto& c : cols) {
        if (c.present) {
            out += ',';
            out += c.name;
        }
    }
    out += '\n';
    for (const auto& rec : series.records) {
        out += format_month(rec.key);
        out += ',';
        out += detail::format_double(rec.p_mm);
        out += ',';
        out += detail::format_double(rec.t_c);
        for (const auto& c : cols) {
            if (!c.present) continue;
            out += ',';
            if (const auto& v = rec.*(c.member)) out += detail::format_double(*v);
        }
        out += '\n';
    }
    return out;
}

// ============================================================================
// Splitting and unit conversion
// ============================================================================

/// Chronological split: first part holds keys < boundary, second keys >=
/// boundary. The boundary must lie strictly inside the span so neither part
/// is empty.
inline std::pair<MonthlySeries, MonthlySeries> split_at(const MonthlySeries& series,
                                                        MonthKey boundary) {
    if (series.records.empty()) throw std::invalid_argument("split_at: empty series");
    if (boundary <= series.first_key() || boundary > series.last_key()) {
        throw std::invalid_argument("split_at: boundary " + format_month(boundary) +
                                    " outside the series span " +
                                    format_month(series.first_key()) + ".." +
                                    format_month(series.last_key()));
    }
    MonthlySeries head, tail;
    for (const auto& rec : series.records) {
        (rec.key < boundary ? head : tail).records.push_back(rec);
    }
    return {std::move(head), std::move(tail)};
}

/// Converts gauge discharge (m^3/s) into catchment depth (mm/month) using
/// Gregorian month lengths.
inline double cms_to_mm_per_month(double q_cms, double area_km2, MonthKey key) {
    if (!(area_km2 > 0.0) || !std::isfinite(area_km2)) {
        throw std::invalid_argument("cms_to_mm_per_month: area must be positive");
    }
    if (q_cms < 0.0 || !std::isfinite(q_cms)) {
        throw std::invalid_argument("cms_to_mm_per_month: discharge must be >= 0");
    }
    const double seconds = 86400.0 * days_in_month(key);
    return q_cms * seconds / (area_km2 * 1e6) * 1000.0;
}

/// Fills q_mm from q_cms (for records lacking q_mm) given the catchment area.
inline void fill_q_from_cms(MonthlySeries& series, double area_km2) {
    for (auto& rec : series.records) {
        if (!rec.q_mm && rec.q_cms) {
            rec.q_mm = cms_to_mm_per_month(*rec.q_cms, area_km2, rec.key);
        }
    }
}

}  // namespace hydropiml
