#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "sdgnet/csv.hpp"
#include "sdgnet/errors.hpp"
#include "sdgnet/model.hpp"
#include "sdgnet/report.hpp"
#include "synth.hpp"

using namespace sdgnet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("sdgnet_report_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

NodeFeatures feature(const std::string& id, int goal, double x_d, double x_h, int y) {
    NodeFeatures f;
    f.country_code = "T";
    f.indicator_id = id;
    f.sdg_goal = goal;
    f.x_d = x_d;
    f.x_h = x_h;
    f.s_plus = x_d;
    f.s_minus = 1.0 - x_d;
    f.y_label = y;
    return f;
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("country_report classifies each row and aggregates goal counts") {
    const std::vector<NodeFeatures> features{
        feature("a", 3, 0.9, 0.5, 1),
        feature("b", 3, 0.1, 0.0, 0),
        feature("c", 12, 0.2, 0.1, 0),
    };
    const CountryReport rep = country_report(kPublishedBeta, features, 0.5);
    CHECK(rep.country_code == "T");
    REQUIRE(rep.rows.size() == 3);
    for (const auto& row : rep.rows)
        CHECK(row.predicted_label == classify(row.probability, 0.5));
    CHECK(rep.synergy_total + rep.tradeoff_total == 3);
    CHECK(rep.per_goal.at(3).synergy == 1);
    CHECK(rep.per_goal.at(3).tradeoff == 1);
    CHECK(rep.per_goal.at(12).tradeoff == 1);
}

TEST_CASE("country_report rejects empty and mixed-country input") {
    CHECK_THROWS_AS(country_report(kPublishedBeta, std::vector<NodeFeatures>{}, 0.5), DomainError);
    std::vector<NodeFeatures> mixed{feature("a", 1, 0.5, 0.5, 1)};
    mixed.push_back(feature("b", 1, 0.5, 0.5, 1));
    mixed[1].country_code = "OTHER";
    CHECK_THROWS_AS(country_report(kPublishedBeta, mixed, 0.5), DomainError);
}

TEST_CASE("per-goal counts partition the rows on random reports") {
    std::mt19937_64 rng(2025);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<NodeFeatures> features;
        const int n = 3 + static_cast<int>(rng() % 40);
        for (int i = 0; i < n; ++i)
            features.push_back(feature("x" + std::to_string(i),
                                       1 + static_cast<int>(rng() % 17),
                                       synth::uniform01(rng), synth::uniform01(rng),
                                       static_cast<int>(rng() % 2)));
        const CountryReport rep = country_report(kPublishedBeta, features, 0.5);
        int goal_sum = 0;
        for (const auto& [goal, c] : rep.per_goal) goal_sum += c.synergy + c.tradeoff;
        CHECK(goal_sum == n);
        CHECK(rep.synergy_total + rep.tradeoff_total == n);
    }
}

TEST_CASE("distribution_export zero-fills the 17 goals and balances the pie") {
    TempDir tmp;
    const std::vector<NodeFeatures> features{
        feature("a", 3, 0.9, 0.9, 1),  feature("b", 3, 0.85, 0.8, 1),
        feature("c", 7, 0.8, 0.6, 1),  feature("d", 12, 0.1, 0.0, 0),
        feature("e", 15, 0.95, 0.9, 1),
    };
    const CountryReport rep = country_report(kPublishedBeta, features, 0.5);
    const auto bars = tmp.path / "bars.csv";
    const auto pie = tmp.path / "pie.csv";
    const DistributionFiles files = distribution_export(rep, bars, pie, true);
    CHECK_FALSE(files.pie_skipped);

    const auto bar_lines = read_lines(bars);
    REQUIRE(bar_lines.size() == 18);  // header + all 17 goals
    CHECK(bar_lines[0] == "goal,synergy_count,tradeoff_count");
    CHECK(bar_lines[1] == "1,0,0");  // zero-filled absent goal
    CHECK(bar_lines[3] == "3,2,0");
    CHECK(bar_lines[12] == "12,0,1");

    const auto pie_lines = read_lines(pie);
    double percent_sum = 0.0;
    for (std::size_t i = 1; i < pie_lines.size(); ++i) {
        const auto fields = csv::split(pie_lines[i]);
        REQUIRE(fields.size() == 2);
        double percent = 0.0;
        REQUIRE(csv::parse_double(fields[1], percent));
        CHECK(percent >= 0.0);
        percent_sum += percent;
    }
    CHECK(percent_sum == doctest::Approx(100.0).epsilon(1e-4));

    CHECK(fs::exists(tmp.path / "bars.csv.svg"));
    CHECK(fs::exists(tmp.path / "pie.csv.svg"));
}

TEST_CASE("a single-goal report produces one full pie slice") {
    TempDir tmp;
    const std::vector<NodeFeatures> features{
        feature("a", 3, 0.9, 0.9, 1),
        feature("b", 3, 0.88, 0.7, 1),
    };
    const CountryReport rep = country_report(kPublishedBeta, features, 0.5);
    const DistributionFiles files =
        distribution_export(rep, tmp.path / "b.csv", tmp.path / "p.csv", false);
    CHECK_FALSE(files.pie_skipped);
    const auto pie_lines = read_lines(tmp.path / "p.csv");
    REQUIRE(pie_lines.size() == 2);
    CHECK(pie_lines[1] == "3,100.0000");
}

TEST_CASE("the pie is skipped when nothing is synergy-dominated") {
    TempDir tmp;
    const std::vector<NodeFeatures> features{
        feature("a", 3, 0.05, 0.0, 0),
        feature("b", 5, 0.10, 0.0, 0),
    };
    const CountryReport rep = country_report(kPublishedBeta, features, 0.5);
    const DistributionFiles files =
        distribution_export(rep, tmp.path / "b.csv", tmp.path / "p.csv", true);
    CHECK(files.pie_skipped);
    CHECK_FALSE(fs::exists(tmp.path / "p.csv"));
    CHECK(fs::exists(tmp.path / "b.csv"));
}

TEST_CASE("heatmap CSV is symmetric, carries a unit diagonal, and round-trips") {
    TempDir tmp;
    std::mt19937_64 rng(11);
    const IndicatorNetwork net = synth::random_network(rng, 12);
    const auto path = tmp.path / "heat.csv";
    heatmap_export(net, path, true);

    const auto lines = read_lines(path);
    REQUIRE(lines.size() == 12);
    std::vector<std::vector<double>> cells;
    for (const auto& line : lines) {
        const auto fields = csv::split(line);
        REQUIRE(fields.size() == 12);
        std::vector<double> row;
        for (const auto& f : fields) {
            double v = 0.0;
            REQUIRE(csv::parse_double(f, v));
            row.push_back(v);
        }
        cells.push_back(std::move(row));
    }
    for (int i = 0; i < 12; ++i) {
        CHECK(cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] == 1.0);
        for (int j = 0; j < 12; ++j) {
            CHECK(cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                  cells[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
            if (i != j)
                CHECK(std::abs(cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                               net.weight(i, j)) <= 5e-7);  // full written precision
        }
    }
    CHECK(fs::exists(tmp.path / "heat.csv.svg"));
}

TEST_CASE("a fully opposed pair maps to the dark red anchor in the SVG") {
    TempDir tmp;
    std::vector<NodeInfo> nodes{{"a", 1}, {"b", 2}};
    IndicatorNetwork net("T", std::move(nodes));
    net.set_weight(0, 1, -1.0);
    heatmap_export(net, tmp.path / "h.csv", true);
    std::ifstream in(tmp.path / "h.csv.svg");
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str().find("rgb(165,0,38)") != std::string::npos);
}

TEST_CASE("feature CSV carries the documented columns") {
    const std::vector<NodeFeatures> features{feature("a", 3, 0.25, 0.5, 1)};
    std::ostringstream out;
    write_feature_csv(out, features);
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "country_code,indicator_id,sdg_goal,x_d,x_h,s_plus,s_minus,y_label,degenerate");
    CHECK(row == "T,a,3,0.250000,0.500000,0.250000,0.750000,1,0");
}
