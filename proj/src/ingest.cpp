#include "sdgnet/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "sdgnet/csv.hpp"
#include "sdgnet/errors.hpp"

namespace sdgnet {

namespace {

const std::string kLongHeader = "country_code,indicator_id,sdg_goal,year,value";

std::string record_key(const std::string& country, const std::string& indicator, int year) {
    return country + '\x1f' + indicator + '\x1f' + std::to_string(year);
}

std::string series_key(const std::string& country, const std::string& indicator) {
    return country + '\x1f' + indicator;
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

const char* to_string(PerformanceCategory category) {
    switch (category) {
        case PerformanceCategory::Worst: return "worst";
        case PerformanceCategory::Moderate: return "moderate";
        case PerformanceCategory::Best: return "best";
    }
    return "?";
}

std::vector<RawRecord> parse_long_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError("line 1: missing header");
    csv::strip_cr(line);
    if (line != kLongHeader)
        malformed(line_no, "unexpected header, want \"" + kLongHeader + "\"");

    std::vector<RawRecord> records;
    std::unordered_set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        csv::strip_cr(line);
        const auto fields = csv::split(line);
        if (fields.size() != 5)
            malformed(line_no, "expected 5 fields, got " + std::to_string(fields.size()));

        RawRecord rec;
        rec.country_code = fields[0];
        rec.indicator_id = fields[1];
        if (!csv::parse_int(fields[2], rec.sdg_goal))
            malformed(line_no, "unparsable sdg_goal \"" + fields[2] + "\"");
        if (!csv::parse_int(fields[3], rec.year))
            malformed(line_no, "unparsable year \"" + fields[3] + "\"");
        if (!fields[4].empty()) {
            double v = 0.0;
            if (!csv::parse_double(fields[4], v))
                malformed(line_no, "unparsable value \"" + fields[4] + "\"");
            rec.value = v;
        }

        if (!seen.insert(record_key(rec.country_code, rec.indicator_id, rec.year)).second)
            throw DataError("line " + std::to_string(line_no) + ": duplicate key (" +
                            rec.country_code + ", " + rec.indicator_id + ", " +
                            std::to_string(rec.year) + ")");
        records.push_back(std::move(rec));
    }
    return records;
}

WideResult normalize_wide(std::istream& in, const YearWindow& window) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError("line 1: missing header");
    csv::strip_cr(line);
    const auto header = csv::split(line);
    if (header.size() < 3 || header[0] != "country_code" || header[1] != "indicator_id" ||
        header[2] != "sdg_goal")
        malformed(line_no, "wide header must start with country_code,indicator_id,sdg_goal");

    WideResult result;
    std::vector<std::pair<std::size_t, int>> year_columns;  // column index -> year
    for (std::size_t c = 3; c < header.size(); ++c) {
        int year = 0;
        if (!csv::parse_int(header[c], year))
            malformed(line_no, "unparsable year column \"" + header[c] + "\"");
        if (!window.contains(year)) {
            ++result.ignored_year_columns;
            result.warnings.push_back("year column " + std::to_string(year) +
                                      " outside window, ignored");
            continue;
        }
        year_columns.emplace_back(c, year);
    }
    if (year_columns.empty())
        result.warnings.push_back("no year columns within the window; output is empty");

    std::unordered_set<std::string> seen_series;
    while (std::getline(in, line)) {
        ++line_no;
        csv::strip_cr(line);
        const auto fields = csv::split(line);
        if (fields.size() != header.size())
            malformed(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(fields.size()));

        int goal = 0;
        if (!csv::parse_int(fields[2], goal))
            malformed(line_no, "unparsable sdg_goal \"" + fields[2] + "\"");
        if (!seen_series.insert(series_key(fields[0], fields[1])).second)
            throw DataError("line " + std::to_string(line_no) + ": duplicate key (" + fields[0] +
                            ", " + fields[1] + ")");

        for (const auto& [col, year] : year_columns) {
            RawRecord rec;
            rec.country_code = fields[0];
            rec.indicator_id = fields[1];
            rec.sdg_goal = goal;
            rec.year = year;
            if (!fields[col].empty()) {
                double v = 0.0;
                if (!csv::parse_double(fields[col], v))
                    malformed(line_no, "unparsable value \"" + fields[col] + "\"");
                rec.value = v;
            }
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

namespace {

struct SeriesAccum {
    std::string country_code;
    std::string indicator_id;
    int sdg_goal = 0;
    std::map<int, std::optional<double>> values;
};

}  // namespace

CleanResult clean_panel(const std::vector<RawRecord>& records, const YearWindow& window) {
    if (window.size() <= 0) throw DomainError("empty year window");

    // Group by (country, indicator) in first-appearance order.
    std::vector<SeriesAccum> groups;
    std::unordered_map<std::string, std::size_t> group_index;
    std::vector<std::string> country_order;
    std::unordered_set<std::string> country_seen;

    for (const auto& rec : records) {
        if (rec.sdg_goal < 1 || rec.sdg_goal > 17)
            throw DataError("sdg_goal " + std::to_string(rec.sdg_goal) + " out of range for (" +
                            rec.country_code + ", " + rec.indicator_id + ")");
        if (rec.value &&
            (!std::isfinite(*rec.value) || *rec.value < 0.0 || *rec.value > 100.0))
            throw DataError("score out of [0,100] for (" + rec.country_code + ", " +
                            rec.indicator_id + ", " + std::to_string(rec.year) + ")");
        if (country_seen.insert(rec.country_code).second)
            country_order.push_back(rec.country_code);
        if (!window.contains(rec.year)) continue;

        const std::string key = series_key(rec.country_code, rec.indicator_id);
        auto [it, inserted] = group_index.try_emplace(key, groups.size());
        if (inserted) {
            SeriesAccum acc;
            acc.country_code = rec.country_code;
            acc.indicator_id = rec.indicator_id;
            acc.sdg_goal = rec.sdg_goal;
            groups.push_back(std::move(acc));
        }
        SeriesAccum& acc = groups[it->second];
        if (acc.sdg_goal != rec.sdg_goal)
            throw DataError("conflicting sdg_goal for (" + rec.country_code + ", " +
                            rec.indicator_id + ")");
        if (!acc.values.emplace(rec.year, rec.value).second)
            throw DataError("duplicate key (" + rec.country_code + ", " + rec.indicator_id +
                            ", " + std::to_string(rec.year) + ")");
    }

    CleanResult result;
    std::unordered_map<std::string, CountryPanel> panels;
    for (const auto& country : country_order) panels.emplace(country, CountryPanel{country, {}, 0});

    for (auto& acc : groups) {
        bool complete = true;
        for (int year = window.first; year <= window.last; ++year) {
            auto it = acc.values.find(year);
            if (it == acc.values.end() || !it->second) {
                complete = false;
                break;
            }
        }
        if (!complete) {
            result.drop_log.push_back({acc.country_code, acc.indicator_id, "missing"});
            continue;
        }

        double lo = acc.values.begin()->second.value();
        double hi = lo;
        for (const auto& [year, v] : acc.values) {
            lo = std::min(lo, *v);
            hi = std::max(hi, *v);
        }
        if (hi - lo < kConstancyTolerance) {
            result.drop_log.push_back({acc.country_code, acc.indicator_id, "constant"});
            continue;
        }

        IndicatorSeries series;
        series.country_code = acc.country_code;
        series.indicator_id = acc.indicator_id;
        series.sdg_goal = acc.sdg_goal;
        for (const auto& [year, v] : acc.values) series.values.emplace(year, *v);
        panels[acc.country_code].series.push_back(std::move(series));
    }

    for (const auto& country : country_order) {
        CountryPanel& panel = panels[country];
        panel.retained_count = static_cast<int>(panel.series.size());
        if (panel.retained_count >= 2) {
            result.panels.push_back(std::move(panel));
        } else {
            // No network is possible; keep the drop log a full partition of
            // the input by logging whatever survived cleaning here.
            result.unusable.push_back(country);
            for (const auto& s : panel.series)
                result.drop_log.push_back({country, s.indicator_id, "unusable_country"});
        }
    }
    return result;
}

PerformanceCategory categorize_country(double sdg_index_score, double lower_cutoff,
                                       double upper_cutoff) {
    if (!(lower_cutoff < upper_cutoff))
        throw DomainError("category cutoffs must be strictly increasing");
    if (!std::isfinite(sdg_index_score) || sdg_index_score < 0.0 || sdg_index_score > 100.0)
        throw DomainError("SDG Index score " + std::to_string(sdg_index_score) +
                          " outside [0,100]");
    if (sdg_index_score < lower_cutoff) return PerformanceCategory::Worst;
    if (sdg_index_score < upper_cutoff) return PerformanceCategory::Moderate;
    return PerformanceCategory::Best;
}

void write_drop_log(std::ostream& out, const std::vector<DropEntry>& drops) {
    out << "country_code,indicator_id,reason\n";
    for (const auto& d : drops)
        out << d.country_code << ',' << d.indicator_id << ',' << d.reason << '\n';
}

}  // namespace sdgnet
