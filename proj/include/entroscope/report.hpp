#ifndef ENTROSCOPE_REPORT_HPP
#define ENTROSCOPE_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "entroscope/error.hpp"

namespace entroscope {

struct CdfPoint {
    double x = 0.0;
    double cdf = 0.0;

    friend bool operator==(const CdfPoint&, const CdfPoint&) = default;
};

/// Empirical CDF: x strictly increasing, cdf non-decreasing in [0, 1],
/// ending at 1.
struct CdfSeries {
    std::string label;
    std::vector<CdfPoint> points;

    friend bool operator==(const CdfSeries&, const CdfSeries&) = default;
};

/// F(x) = #{v <= x} / n at every distinct value.
inline CdfSeries cdf(std::span<const double> values, std::string label = {})
{
    if (values.empty())
        throw Error(ErrorKind::EmptyInput, "cannot build a CDF from no values");
    std::vector<double> sorted(values.begin(), values.end());
    if (std::any_of(sorted.begin(), sorted.end(), [](double v) { return std::isnan(v); }))
        throw Error(ErrorKind::InvalidArgument, "CDF input contains NaN");
    std::sort(sorted.begin(), sorted.end());

    CdfSeries series{std::move(label), {}};
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i])
            continue;
        series.points.push_back({sorted[i], static_cast<double>(i + 1) / n});
    }
    series.points.back().cdf = 1.0;
    return series;
}

/// Step-function value of the CDF at x.
inline double evaluate(const CdfSeries& series, double x) noexcept
{
    auto it = std::upper_bound(series.points.begin(), series.points.end(), x,
                               [](double v, const CdfPoint& p) { return v < p.x; });
    if (it == series.points.begin())
        return 0.0;
    return std::prev(it)->cdf;
}

/// Smallest x with F(x) >= q.
inline double quantile(const CdfSeries& series, double q)
{
    if (series.points.empty())
        throw Error(ErrorKind::EmptyInput, "empty CDF");
    for (const auto& p : series.points)
        if (p.cdf >= q)
            return p.x;
    return series.points.back().x;
}

inline double median(const CdfSeries& series) { return quantile(series, 0.5); }

inline constexpr std::size_t kDefaultGridPoints = 512;

/// Resamples onto an evenly spaced grid from the smallest to the largest x.
inline CdfSeries resample(const CdfSeries& series, std::size_t grid_points = kDefaultGridPoints)
{
    if (series.points.empty())
        throw Error(ErrorKind::EmptyInput, "empty CDF");
    if (grid_points < 2)
        throw Error(ErrorKind::InvalidArgument, "grid needs at least two points");
    const double lo = series.points.front().x;
    const double hi = series.points.back().x;
    if (lo == hi)
        return series;
    CdfSeries out{series.label, {}};
    out.points.reserve(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double x = i + 1 == grid_points ? hi
                                              : lo + (hi - lo) * static_cast<double>(i) /
                                                         static_cast<double>(grid_points - 1);
        out.points.push_back({x, evaluate(series, x)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Export / import

enum class ReportFormat { Csv, Json };

/// Fixed six-decimal rendering; negative zero prints as 0.000000.
inline std::string format_fixed6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s == "-0.000000")
        s.erase(0, 1);
    return s;
}

namespace detail {

inline std::string csv_field(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// Points as printed. Neighbours that print with the same x are merged,
/// keeping the later (larger) cdf, so printed x stays strictly increasing.
inline std::vector<std::pair<std::string, std::string>> printed_points(const CdfSeries& series)
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : series.points) {
        auto x = format_fixed6(p.x);
        auto f = format_fixed6(p.cdf);
        if (!out.empty() && out.back().first == x)
            out.back().second = std::move(f);
        else
            out.emplace_back(std::move(x), std::move(f));
    }
    return out;
}

inline std::vector<std::string> split_csv_row(std::string_view line, std::size_t line_no)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted)
        throw Error(ErrorKind::InvalidArgument, "unterminated quote on line " + std::to_string(line_no));
    return fields;
}

inline double parse_number(const std::string& s, std::size_t line_no)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw Error(ErrorKind::InvalidArgument, "bad number '" + s + "' on line " + std::to_string(line_no));
    return v;
}

} // namespace detail

/// CSV: header "label,x,cdf", one row per point. JSON: an array of
/// {"label": ..., "points": [[x, cdf], ...]}. Numbers use six decimals, so
/// equal input gives byte-identical output.
inline void export_report(std::span<const CdfSeries> series, ReportFormat format, std::ostream& sink)
{
    if (series.empty())
        throw Error(ErrorKind::InvalidArgument, "no series to export");
    if (format == ReportFormat::Csv) {
        sink << "label,x,cdf\n";
        for (const auto& s : series) {
            const auto label = detail::csv_field(s.label);
            for (const auto& [x, f] : detail::printed_points(s))
                sink << label << ',' << x << ',' << f << '\n';
        }
    } else {
        sink << '[';
        for (std::size_t i = 0; i < series.size(); ++i) {
            if (i > 0)
                sink << ',';
            const auto label =
                nlohmann::json(series[i].label).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
            sink << "\n  {\"label\":" << label << ",\"points\":[";
            bool first = true;
            for (const auto& [x, f] : detail::printed_points(series[i])) {
                sink << (first ? "" : ",") << '[' << x << ',' << f << ']';
                first = false;
            }
            sink << "]}";
        }
        sink << "\n]\n";
    }
    sink.flush();
    if (!sink)
        throw Error(ErrorKind::SinkFailure, "failed to write report");
}

/// Inverse of export_report. CSV rows with the same label in a row form one
/// series.
inline std::vector<CdfSeries> import_report(std::string_view text, ReportFormat format)
{
    std::vector<CdfSeries> out;
    if (format == ReportFormat::Json) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::InvalidArgument, std::string("bad JSON report: ") + e.what());
        }
        if (!doc.is_array())
            throw Error(ErrorKind::InvalidArgument, "JSON report must be an array");
        for (const auto& item : doc) {
            CdfSeries s;
            s.label = item.at("label").get<std::string>();
            for (const auto& pt : item.at("points"))
                s.points.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
            out.push_back(std::move(s));
        }
        return out;
    }

    std::size_t start = 0, line_no = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line_no == 1) {
            if (line != "label,x,cdf")
                throw Error(ErrorKind::InvalidArgument, "CSV report must start with 'label,x,cdf'");
            continue;
        }
        if (line.empty())
            continue;
        auto fields = detail::split_csv_row(line, line_no);
        if (fields.size() != 3)
            throw Error(ErrorKind::InvalidArgument, "expected 3 fields on line " + std::to_string(line_no));
        if (out.empty() || out.back().label != fields[0])
            out.push_back({fields[0], {}});
        out.back().points.push_back(
            {detail::parse_number(fields[1], line_no), detail::parse_number(fields[2], line_no)});
    }
    return out;
}

/// Checks the CdfSeries invariants; returns a description of the first
/// violation, if any.
inline std::optional<std::string> check_cdf(const CdfSeries& s)
{
    if (s.points.empty())
        return "series '" + s.label + "' is empty";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const auto& p = s.points[i];
        if (!(p.cdf >= 0.0 && p.cdf <= 1.0))
            return "cdf outside [0, 1] at point " + std::to_string(i);
        if (i > 0 && !(p.x > s.points[i - 1].x))
            return "x not strictly increasing at point " + std::to_string(i);
        if (i > 0 && p.cdf < s.points[i - 1].cdf)
            return "cdf decreasing at point " + std::to_string(i);
    }
    if (s.points.back().cdf != 1.0)
        return "final cdf is not 1";
    return std::nullopt;
}

} // namespace entroscope

#endif // ENTROSCOPE_REPORT_HPP
