#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "sdgnet/errors.hpp"
#include "sdgnet/ingest.hpp"
#include "synth.hpp"

using namespace sdgnet;

namespace {

std::vector<RawRecord> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_long_csv(in);
}

RawRecord rec(const std::string& country, const std::string& id, int goal, int year,
              std::optional<double> value) {
    RawRecord r;
    r.country_code = country;
    r.indicator_id = id;
    r.sdg_goal = goal;
    r.year = year;
    r.value = value;
    return r;
}

// Full series over the window with a linear slope so it is never constant.
void push_series(std::vector<RawRecord>& out, const std::string& country, const std::string& id,
                 int goal, const YearWindow& w, double base, double slope) {
    for (int year = w.first; year <= w.last; ++year)
        out.push_back(rec(country, id, goal, year, base + slope * (year - w.first)));
}

}  // namespace

TEST_CASE("parse_long_csv maps fields directly") {
    const auto records = parse(
        "country_code,indicator_id,sdg_goal,year,value\n"
        "IND,sdg3_lifee,3,2005,62.4\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0].country_code == "IND");
    CHECK(records[0].indicator_id == "sdg3_lifee");
    CHECK(records[0].sdg_goal == 3);
    CHECK(records[0].year == 2005);
    REQUIRE(records[0].value.has_value());
    CHECK(records[0].value.value() == doctest::Approx(62.4));
}

TEST_CASE("parse_long_csv keeps empty cells as missing markers") {
    const auto records = parse(
        "country_code,indicator_id,sdg_goal,year,value\n"
        "IND,sdg1_wpc,1,2011,\n");
    REQUIRE(records.size() == 1);
    CHECK_FALSE(records[0].value.has_value());
}

TEST_CASE("parse_long_csv rejects duplicate (country, indicator, year)") {
    CHECK_THROWS_AS(parse("country_code,indicator_id,sdg_goal,year,value\n"
                          "IND,sdg1_wpc,1,2011,10\n"
                          "IND,sdg1_wpc,1,2011,11\n"),
                    DataError);
}

TEST_CASE("parse_long_csv names the offending line") {
    try {
        parse("country_code,indicator_id,sdg_goal,year,value\n"
              "IND,a,1,2001,5.0\n"
              "IND,b,1,20x1,5.0\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    CHECK_THROWS_AS(parse("country_code,indicator_id,sdg_goal,year,value\n"
                          "IND,a,1,2001\n"),
                    ParseError);  // wrong column count
    CHECK_THROWS_AS(parse("country_code,indicator_id,sdg_goal,year,value\n"
                          "IND,a,1,2001,abc\n"),
                    ParseError);  // unparsable value
    CHECK_THROWS_AS(parse("bad,header\n"), ParseError);
}

TEST_CASE("normalize_wide reshapes one row per year column") {
    std::ostringstream header;
    header << "country_code,indicator_id,sdg_goal";
    for (int y = 2000; y <= 2024; ++y) header << ',' << y;
    header << "\nIND,sdg2_x,2";
    for (int y = 2000; y <= 2024; ++y) header << ',' << (y - 2000) * 1.5;
    header << '\n';

    std::istringstream in(header.str());
    const WideResult result = normalize_wide(in, YearWindow{2000, 2024});
    CHECK(result.records.size() == 25);
    CHECK(result.ignored_year_columns == 0);
    CHECK(result.records.front().year == 2000);
    CHECK(result.records.back().year == 2024);
}

TEST_CASE("normalize_wide keeps blank cells as missing and flags stray years") {
    std::istringstream in(
        "country_code,indicator_id,sdg_goal,1999,2007,2008\n"
        "IND,sdg2_x,2,3.0,,9.5\n");
    const WideResult result = normalize_wide(in, YearWindow{2000, 2024});
    CHECK(result.ignored_year_columns == 1);
    REQUIRE(result.records.size() == 2);
    CHECK_FALSE(result.records[0].value.has_value());  // 2007 blank
    CHECK(result.records[1].value.value() == doctest::Approx(9.5));
}

TEST_CASE("normalize_wide with no year columns yields empty output plus warning") {
    std::istringstream in(
        "country_code,indicator_id,sdg_goal\n"
        "IND,sdg2_x,2\n");
    const WideResult result = normalize_wide(in, YearWindow{2000, 2024});
    CHECK(result.records.empty());
    CHECK_FALSE(result.warnings.empty());
}

TEST_CASE("clean_panel drops constant series with the right reason") {
    const YearWindow w{2000, 2024};
    std::vector<RawRecord> records;
    push_series(records, "IND", "a", 1, w, 10.0, 1.0);
    push_series(records, "IND", "b", 2, w, 20.0, 0.5);
    for (int year = w.first; year <= w.last; ++year)
        records.push_back(rec("IND", "flat", 3, year, 37.0));

    const CleanResult result = clean_panel(records, w);
    REQUIRE(result.panels.size() == 1);
    CHECK(result.panels[0].retained_count == 2);
    REQUIRE(result.drop_log.size() == 1);
    CHECK(result.drop_log[0].indicator_id == "flat");
    CHECK(result.drop_log[0].reason == "constant");
}

TEST_CASE("clean_panel drops series with any missing year") {
    const YearWindow w{2000, 2024};
    std::vector<RawRecord> records;
    push_series(records, "IND", "a", 1, w, 10.0, 1.0);
    push_series(records, "IND", "b", 2, w, 20.0, 0.5);
    for (int year = w.first; year <= w.last; ++year)
        if (year != 2013) records.push_back(rec("IND", "gap", 3, year, 5.0 + year - w.first));
    // A missing marker counts the same as an absent row.
    push_series(records, "IND", "markered", 4, w, 30.0, 0.2);
    for (auto& r : records)
        if (r.indicator_id == "markered" && r.year == 2010) r.value.reset();

    const CleanResult result = clean_panel(records, w);
    REQUIRE(result.drop_log.size() == 2);
    for (const auto& d : result.drop_log) CHECK(d.reason == "missing");
    CHECK(result.panels[0].retained_count == 2);
}

TEST_CASE("clean_panel flags countries with fewer than two retained indicators") {
    const YearWindow w{2000, 2024};
    std::vector<RawRecord> records;
    push_series(records, "AAA", "only", 1, w, 10.0, 1.0);
    push_series(records, "BBB", "x", 1, w, 10.0, 1.0);
    push_series(records, "BBB", "y", 2, w, 12.0, 0.7);

    const CleanResult result = clean_panel(records, w);
    REQUIRE(result.unusable.size() == 1);
    CHECK(result.unusable[0] == "AAA");
    REQUIRE(result.panels.size() == 1);
    CHECK(result.panels[0].country_code == "BBB");
}

TEST_CASE("clean_panel validates score range and goal range") {
    const YearWindow w{2000, 2001};
    CHECK_THROWS_AS(clean_panel({rec("IND", "a", 1, 2000, 150.0)}, w), DataError);
    CHECK_THROWS_AS(clean_panel({rec("IND", "a", 0, 2000, 50.0)}, w), DataError);
    CHECK_THROWS_AS(clean_panel({rec("IND", "a", 18, 2000, 50.0)}, w), DataError);
    // Same indicator tagged with two different goals.
    CHECK_THROWS_AS(
        clean_panel({rec("IND", "a", 1, 2000, 5.0), rec("IND", "a", 2, 2001, 6.0)}, w),
        DataError);
}

TEST_CASE("clean_panel partitions the indicator set, no loss") {
    const YearWindow w{2000, 2024};
    std::mt19937_64 rng(991);
    std::vector<RawRecord> records;
    std::set<std::string> input_keys;
    for (const std::string country : {"AAA", "BBB", "CCC"}) {
        const int n = 3 + static_cast<int>(rng() % 10);
        for (int i = 0; i < n; ++i) {
            const std::string id = "ind" + std::to_string(i);
            input_keys.insert(country + "|" + id);
            const int kind = static_cast<int>(rng() % 4);
            if (kind == 0) {  // constant
                for (int year = w.first; year <= w.last; ++year)
                    records.push_back(rec(country, id, 1 + i % 17, year, 42.0));
            } else if (kind == 1) {  // gap
                for (int year = w.first; year <= w.last; ++year)
                    if (year != 2005)
                        records.push_back(
                            rec(country, id, 1 + i % 17, year, 10.0 + (year - w.first)));
            } else {  // clean
                push_series(records, country, id, 1 + i % 17, w, 5.0 + i,
                            0.3 + 0.1 * static_cast<double>(rng() % 5));
            }
        }
    }

    const CleanResult result = clean_panel(records, w);
    std::set<std::string> output_keys;
    for (const auto& p : result.panels)
        for (const auto& s : p.series)
            CHECK(output_keys.insert(s.country_code + "|" + s.indicator_id).second);
    for (const auto& d : result.drop_log)
        CHECK(output_keys.insert(d.country_code + "|" + d.indicator_id).second);
    CHECK(output_keys == input_keys);
}

TEST_CASE("clean_panel is idempotent on its own survivors") {
    const auto records = synth::india_fixture_records();
    const YearWindow w{2000, 2024};
    const CleanResult first = clean_panel(records, w);

    std::vector<RawRecord> survivors;
    for (const auto& p : first.panels)
        for (const auto& s : p.series)
            for (const auto& [year, v] : s.values)
                survivors.push_back(rec(s.country_code, s.indicator_id, s.sdg_goal, year, v));

    const CleanResult second = clean_panel(survivors, w);
    CHECK(second.drop_log.empty());
    REQUIRE(second.panels.size() == first.panels.size());
    for (std::size_t i = 0; i < first.panels.size(); ++i) {
        CHECK(second.panels[i].country_code == first.panels[i].country_code);
        CHECK(second.panels[i].retained_count == first.panels[i].retained_count);
        for (std::size_t k = 0; k < first.panels[i].series.size(); ++k)
            CHECK(second.panels[i].series[k].indicator_id ==
                  first.panels[i].series[k].indicator_id);
    }
}

TEST_CASE("every retained series is complete and non-constant") {
    const auto records = synth::india_fixture_records();
    const YearWindow w{2000, 2024};
    const CleanResult result = clean_panel(records, w);
    for (const auto& p : result.panels)
        for (const auto& s : p.series) {
            CHECK(static_cast<int>(s.values.size()) == w.size());
            CHECK(s.values.begin()->first == w.first);
            CHECK(s.values.rbegin()->first == w.last);
            double lo = s.values.begin()->second, hi = lo;
            for (const auto& [year, v] : s.values) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            CHECK(hi - lo >= kConstancyTolerance);
        }
}

TEST_CASE("categorize_country applies the published bands") {
    CHECK(categorize_country(45.0) == PerformanceCategory::Worst);
    CHECK(categorize_country(50.0) == PerformanceCategory::Moderate);  // boundary up
    CHECK(categorize_country(80.0) == PerformanceCategory::Best);      // boundary up
    CHECK(categorize_country(49.999) == PerformanceCategory::Worst);
    CHECK(categorize_country(79.999) == PerformanceCategory::Moderate);
    CHECK(categorize_country(0.0) == PerformanceCategory::Worst);
    CHECK(categorize_country(100.0) == PerformanceCategory::Best);
    CHECK_THROWS_AS(categorize_country(-0.5), DomainError);
    CHECK_THROWS_AS(categorize_country(100.5), DomainError);
}

TEST_CASE("categorize_country is piecewise constant with breakpoints at the cutoffs") {
    std::mt19937_64 rng(17);
    PerformanceCategory prev = categorize_country(0.0);
    for (int i = 1; i <= 2000; ++i) {
        const double score = 100.0 * static_cast<double>(i) / 2000.0;
        const PerformanceCategory cur = categorize_country(score);
        if (cur != prev) {
            const bool at_50 = score - 0.05 < 50.0 && 50.0 <= score;
            const bool at_80 = score - 0.05 < 80.0 && 80.0 <= score;
            CHECK((at_50 || at_80));
        }
        prev = cur;
    }
    (void)rng;
}
