#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sdgnet/features.hpp"
#include "sdgnet/network.hpp"

namespace sdgnet {

struct ReportRow {
    std::string indicator_id;
    int sdg_goal = 0;
    double x_d = 0.0;
    double x_h = 0.0;
    double probability = 0.0;
    int predicted_label = 0;
    int y_label = 0;
};

struct GoalCount {
    int synergy = 0;
    int tradeoff = 0;
};

// Per-country classification summary: one row per indicator plus counts of
// predicted synergy/trade-off dominance per SDG goal.
struct CountryReport {
    std::string country_code;
    std::vector<ReportRow> rows;
    std::map<int, GoalCount> per_goal;
    int synergy_total = 0;
    int tradeoff_total = 0;
};

CountryReport country_report(const std::array<double, 3>& beta,
                             std::span<const NodeFeatures> features,
                             double threshold = 0.5);

void write_feature_csv(std::ostream& out, std::span<const NodeFeatures> features);
void write_report_csv(std::ostream& out, const CountryReport& report);
void write_per_goal_csv(std::ostream& out, const CountryReport& report);
void write_node_list_csv(std::ostream& out, const IndicatorNetwork& network);

// Full symmetric matrix, 6 decimals, diagonal written as 1.0. With svg set,
// also writes `<csv_path>.svg` using a red/white/green diverging scale
// anchored at -1/0/+1.
void heatmap_export(const IndicatorNetwork& network,
                    const std::filesystem::path& csv_path, bool svg);

struct DistributionFiles {
    std::vector<std::filesystem::path> written;
    bool pie_skipped = false;  // no synergy-dominated indicators
};

// Grouped-bar CSV (goals 1-17, zero-filled) and pie CSV (percent share of
// synergy-dominated indicators per goal), with optional SVG renderings.
DistributionFiles distribution_export(const CountryReport& report,
                                      const std::filesystem::path& bars_csv,
                                      const std::filesystem::path& pie_csv, bool svg);

}  // namespace sdgnet
