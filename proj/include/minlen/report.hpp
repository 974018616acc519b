#pragma once

// Result rows and their CSV / JSON encodings.
//
// CSV is fixed-format: 12 significant digits, '.' separator, '\n' endings,
// empty cells for values a failed row could not produce.

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "minlen/density.hpp"

namespace minlen {

inline constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

struct AuditColumns {
    double alpha_star = nan_value;
    double sum_fourier = nan_value;
    double sum_actual = nan_value;
    double bound = nan_value;
    double margin_fourier = nan_value;
    double margin_actual = nan_value;
};

struct TableRow {
    Space space = Space::Q;
    int n = 0;
    double beta = nan_value;
    double alpha = nan_value;
    double value = nan_value;
    double err = nan_value;
    std::optional<AuditColumns> audit;
    /// Non-empty when the cell failed; the numeric fields are then NaN.
    std::string error;
};

namespace detail {

inline bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

} // namespace detail

inline bool operator==(const AuditColumns& a, const AuditColumns& b)
{
    using detail::same;
    return same(a.alpha_star, b.alpha_star) && same(a.sum_fourier, b.sum_fourier) &&
           same(a.sum_actual, b.sum_actual) && same(a.bound, b.bound) &&
           same(a.margin_fourier, b.margin_fourier) && same(a.margin_actual, b.margin_actual);
}

inline bool operator==(const TableRow& a, const TableRow& b)
{
    using detail::same;
    return a.space == b.space && a.n == b.n && same(a.beta, b.beta) && same(a.alpha, b.alpha) &&
           same(a.value, b.value) && same(a.err, b.err) && a.audit == b.audit && a.error == b.error;
}

/// %.12g, or an empty string for NaN.
inline std::string format_number(double v)
{
    if (std::isnan(v))
        return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + '"';
}

inline void write_csv(std::ostream& os, const std::vector<TableRow>& rows, bool audit_columns)
{
    os << "space,n,beta,alpha,value,err";
    if (audit_columns)
        os << ",alpha_star,sum_fourier,sum_actual,bound,margin_fourier,margin_actual";
    os << ",error\n";
    for (const auto& r : rows) {
        os << to_string(r.space) << ',' << r.n << ',' << format_number(r.beta) << ',' << format_number(r.alpha)
           << ',' << format_number(r.value) << ',' << format_number(r.err);
        if (audit_columns) {
            const AuditColumns a = r.audit.value_or(AuditColumns{});
            os << ',' << format_number(a.alpha_star) << ',' << format_number(a.sum_fourier) << ','
               << format_number(a.sum_actual) << ',' << format_number(a.bound) << ','
               << format_number(a.margin_fourier) << ',' << format_number(a.margin_actual);
        }
        os << ',' << csv_escape(r.error) << '\n';
    }
}

namespace detail {

inline nlohmann::json number_or_null(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

inline double number_from(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null())
        return nan_value;
    return j.at(key).get<double>();
}

} // namespace detail

inline void to_json(nlohmann::json& j, const TableRow& r)
{
    using detail::number_or_null;
    j = nlohmann::json{{"space", std::string(to_string(r.space))},
                       {"n", r.n},
                       {"beta", number_or_null(r.beta)},
                       {"alpha", number_or_null(r.alpha)},
                       {"value", number_or_null(r.value)},
                       {"err", number_or_null(r.err)},
                       {"error", r.error}};
    if (r.audit) {
        const auto& a = *r.audit;
        j["alpha_star"] = number_or_null(a.alpha_star);
        j["sum_fourier"] = number_or_null(a.sum_fourier);
        j["sum_actual"] = number_or_null(a.sum_actual);
        j["bound"] = number_or_null(a.bound);
        j["margin_fourier"] = number_or_null(a.margin_fourier);
        j["margin_actual"] = number_or_null(a.margin_actual);
    }
}

inline void from_json(const nlohmann::json& j, TableRow& r)
{
    using detail::number_from;
    r.space = parse_space(j.at("space").get<std::string>());
    r.n = j.at("n").get<int>();
    r.beta = number_from(j, "beta");
    r.alpha = number_from(j, "alpha");
    r.value = number_from(j, "value");
    r.err = number_from(j, "err");
    r.error = j.value("error", std::string{});
    if (j.contains("alpha_star")) {
        AuditColumns a;
        a.alpha_star = number_from(j, "alpha_star");
        a.sum_fourier = number_from(j, "sum_fourier");
        a.sum_actual = number_from(j, "sum_actual");
        a.bound = number_from(j, "bound");
        a.margin_fourier = number_from(j, "margin_fourier");
        a.margin_actual = number_from(j, "margin_actual");
        r.audit = a;
    } else {
        r.audit.reset();
    }
}

inline void write_json(std::ostream& os, const std::vector<TableRow>& rows)
{
    os << nlohmann::json(rows).dump(2) << '\n';
}

} // namespace minlen
