#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sdgnet {

// Inclusive year range the analysis runs over.
struct YearWindow {
    int first = 2000;
    int last = 2024;

    int size() const { return last - first + 1; }
    bool contains(int year) const { return year >= first && year <= last; }
};

// One parsed row of the canonical long table. An empty value cell is kept
// as an explicit missing marker so cleaning can log it.
struct RawRecord {
    std::string country_code;
    std::string indicator_id;
    int sdg_goal = 0;
    int year = 0;
    std::optional<double> value;
};

// Yearly scores of one indicator for one country. Scores live in [0, 100].
struct IndicatorSeries {
    std::string country_code;
    std::string indicator_id;
    int sdg_goal = 0;
    std::map<int, double> values;  // year -> score, ascending
};

struct CountryPanel {
    std::string country_code;
    std::vector<IndicatorSeries> series;
    int retained_count = 0;
};

struct DropEntry {
    std::string country_code;
    std::string indicator_id;
    std::string reason;  // "missing" or "constant"
};

struct CleanResult {
    std::vector<CountryPanel> panels;    // countries with >= 2 retained indicators
    std::vector<DropEntry> drop_log;
    std::vector<std::string> unusable;   // countries left with < 2 indicators
};

struct WideResult {
    std::vector<RawRecord> records;
    int ignored_year_columns = 0;
    std::vector<std::string> warnings;
};

enum class PerformanceCategory { Worst, Moderate, Best };

const char* to_string(PerformanceCategory category);

// Series whose value range falls below this are treated as constant.
inline constexpr double kConstancyTolerance = 1e-9;

// Reads the canonical long CSV `country_code,indicator_id,sdg_goal,year,value`.
// Empty value cells become missing markers; row order is preserved.
// Throws ParseError on malformed rows, DataError on duplicate
// (country, indicator, year) keys.
std::vector<RawRecord> parse_long_csv(std::istream& in);

// Reads the wide layout `country_code,indicator_id,sdg_goal,<year>...` and
// reshapes it to the records parse_long_csv would produce. Year columns
// outside the window are ignored and counted in the result.
WideResult normalize_wide(std::istream& in, const YearWindow& window);

// Groups records per country, drops indicators with any missing year in the
// window or with constant values, and flags countries left with fewer than
// two indicators. Records outside the window are ignored.
CleanResult clean_panel(const std::vector<RawRecord>& records, const YearWindow& window);

// Banding of a country's SDG Index score. Boundary scores fall upward:
// 50 is Moderate, 80 is Best.
PerformanceCategory categorize_country(double sdg_index_score,
                                       double lower_cutoff = 50.0,
                                       double upper_cutoff = 80.0);

void write_drop_log(std::ostream& out, const std::vector<DropEntry>& drops);

}  // namespace sdgnet
