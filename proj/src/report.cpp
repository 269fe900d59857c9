#include "sdgnet/report.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "sdgnet/csv.hpp"
#include "sdgnet/errors.hpp"
#include "sdgnet/model.hpp"

namespace sdgnet {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

struct Rgb {
    int r, g, b;
};

// Diverging scale anchored at -1 (dark red), 0 (white), +1 (dark green).
Rgb diverging_color(double w) {
    constexpr Rgb kNegative{165, 0, 38};
    constexpr Rgb kPositive{0, 104, 55};
    constexpr Rgb kWhite{255, 255, 255};
    const double t = std::min(std::abs(w), 1.0);
    const Rgb& anchor = w < 0.0 ? kNegative : kPositive;
    const auto mix = [t](int from, int to) {
        return static_cast<int>(std::lround(from + t * (to - from)));
    };
    return {mix(kWhite.r, anchor.r), mix(kWhite.g, anchor.g), mix(kWhite.b, anchor.b)};
}

void write_heatmap_svg(std::ostream& out, const IndicatorNetwork& network) {
    const int n = network.size();
    const int cell = 8;
    const int margin = 2;
    const int size = n * cell + 2 * margin;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double w = i == j ? 1.0 : network.weight(i, j);
            const Rgb c = diverging_color(w);
            out << "<rect x=\"" << margin + j * cell << "\" y=\"" << margin + i * cell
                << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"rgb(" << c.r
                << ',' << c.g << ',' << c.b << ")\"/>\n";
        }
    }
    out << "</svg>\n";
}

const char* goal_color(int goal) {
    // One color per SDG, loosely following the official goal palette.
    static const char* kPalette[17] = {
        "#e5243b", "#dda63a", "#4c9f38", "#c5192d", "#ff3a21", "#26bde2",
        "#fcc30b", "#a21942", "#fd6925", "#dd1367", "#fd9d24", "#bf8b2e",
        "#3f7e44", "#0a97d9", "#56c02b", "#00689d", "#19486a"};
    return kPalette[(goal - 1) % 17];
}

void write_bars_svg(std::ostream& out, const std::array<GoalCount, 17>& counts) {
    int max_count = 1;
    for (const auto& c : counts) max_count = std::max({max_count, c.synergy, c.tradeoff});

    const int bar_w = 10;
    const int group_w = 2 * bar_w + 8;
    const int plot_h = 160;
    const int margin = 20;
    const int width = margin * 2 + 17 * group_w;
    const int height = plot_h + margin * 2;
    const auto bar_height = [&](int count) {
        return static_cast<int>(std::lround(static_cast<double>(count) / max_count * plot_h));
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    for (int goal = 1; goal <= 17; ++goal) {
        const GoalCount& c = counts[static_cast<std::size_t>(goal - 1)];
        const int x = margin + (goal - 1) * group_w;
        const int hs = bar_height(c.synergy);
        const int ht = bar_height(c.tradeoff);
        out << "<rect x=\"" << x << "\" y=\"" << margin + plot_h - hs << "\" width=\"" << bar_w
            << "\" height=\"" << hs << "\" fill=\"#1e8449\"/>\n";
        out << "<rect x=\"" << x + bar_w + 2 << "\" y=\"" << margin + plot_h - ht
            << "\" width=\"" << bar_w << "\" height=\"" << ht << "\" fill=\"#c0392b\"/>\n";
        out << "<text x=\"" << x + bar_w << "\" y=\"" << margin + plot_h + 12
            << "\" font-size=\"8\" text-anchor=\"middle\">" << goal << "</text>\n";
    }
    out << "<line x1=\"" << margin << "\" y1=\"" << margin + plot_h << "\" x2=\""
        << width - margin << "\" y2=\"" << margin + plot_h << "\" stroke=\"black\"/>\n";
    out << "</svg>\n";
}

void write_pie_svg(std::ostream& out, const std::vector<std::pair<int, double>>& slices) {
    const int radius = 90;
    const int cx = 110, cy = 110;
    const int legend_x = 230;
    const int width = 360, height = 220;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    if (slices.size() == 1) {
        out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << radius << "\" fill=\""
            << goal_color(slices.front().first) << "\"/>\n";
    } else {
        double angle = -0.5 * M_PI;  // start at 12 o'clock
        for (const auto& [goal, percent] : slices) {
            const double sweep = percent / 100.0 * 2.0 * M_PI;
            const double x1 = cx + radius * std::cos(angle);
            const double y1 = cy + radius * std::sin(angle);
            const double x2 = cx + radius * std::cos(angle + sweep);
            const double y2 = cy + radius * std::sin(angle + sweep);
            const int large_arc = sweep > M_PI ? 1 : 0;
            out << "<path d=\"M" << cx << ' ' << cy << " L" << csv::fixed(x1, 2) << ' '
                << csv::fixed(y1, 2) << " A" << radius << ' ' << radius << " 0 " << large_arc
                << " 1 " << csv::fixed(x2, 2) << ' ' << csv::fixed(y2, 2) << " Z\" fill=\""
                << goal_color(goal) << "\"/>\n";
            angle += sweep;
        }
    }
    int row = 0;
    for (const auto& [goal, percent] : slices) {
        const int y = 20 + row * 12;
        out << "<rect x=\"" << legend_x << "\" y=\"" << y - 8
            << "\" width=\"8\" height=\"8\" fill=\"" << goal_color(goal) << "\"/>\n";
        out << "<text x=\"" << legend_x + 12 << "\" y=\"" << y << "\" font-size=\"9\">SDG "
            << goal << ": " << csv::fixed(percent, 2) << "%</text>\n";
        ++row;
    }
    out << "</svg>\n";
}

}  // namespace

CountryReport country_report(const std::array<double, 3>& beta,
                             std::span<const NodeFeatures> features, double threshold) {
    if (features.empty()) throw DomainError("country_report: empty feature table");
    CountryReport report;
    report.country_code = features.front().country_code;

    for (const auto& f : features) {
        if (f.country_code != report.country_code)
            throw DomainError("country_report: features mix countries (" + report.country_code +
                              " vs " + f.country_code + ")");
        ReportRow row;
        row.indicator_id = f.indicator_id;
        row.sdg_goal = f.sdg_goal;
        row.x_d = f.x_d;
        row.x_h = f.x_h;
        row.probability = predict_probability(beta, f.x_d, f.x_h);
        row.predicted_label = classify(row.probability, threshold);
        row.y_label = f.y_label;

        GoalCount& counts = report.per_goal[f.sdg_goal];
        if (row.predicted_label == 1) {
            ++counts.synergy;
            ++report.synergy_total;
        } else {
            ++counts.tradeoff;
            ++report.tradeoff_total;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

void write_feature_csv(std::ostream& out, std::span<const NodeFeatures> features) {
    out << "country_code,indicator_id,sdg_goal,x_d,x_h,s_plus,s_minus,y_label,degenerate\n";
    for (const auto& f : features) {
        out << f.country_code << ',' << f.indicator_id << ',' << f.sdg_goal << ','
            << csv::fixed(f.x_d, 6) << ',' << csv::fixed(f.x_h, 6) << ','
            << csv::fixed(f.s_plus, 6) << ',' << csv::fixed(f.s_minus, 6) << ',' << f.y_label
            << ',' << (f.degenerate ? 1 : 0) << '\n';
    }
}

void write_report_csv(std::ostream& out, const CountryReport& report) {
    out << "indicator_id,sdg_goal,x_d,x_h,probability,predicted_label,y_label\n";
    for (const auto& r : report.rows) {
        out << r.indicator_id << ',' << r.sdg_goal << ',' << csv::fixed(r.x_d, 6) << ','
            << csv::fixed(r.x_h, 6) << ',' << csv::fixed(r.probability, 4) << ','
            << r.predicted_label << ',' << r.y_label << '\n';
    }
}

void write_per_goal_csv(std::ostream& out, const CountryReport& report) {
    out << "goal,synergy_count,tradeoff_count\n";
    for (const auto& [goal, counts] : report.per_goal)
        out << goal << ',' << counts.synergy << ',' << counts.tradeoff << '\n';
}

void write_node_list_csv(std::ostream& out, const IndicatorNetwork& network) {
    out << "index,indicator_id,sdg_goal\n";
    for (int i = 0; i < network.size(); ++i) {
        const NodeInfo& node = network.nodes()[static_cast<std::size_t>(i)];
        out << i << ',' << node.indicator_id << ',' << node.sdg_goal << '\n';
    }
}

void heatmap_export(const IndicatorNetwork& network, const std::filesystem::path& csv_path,
                    bool svg) {
    {
        std::ofstream out = open_output(csv_path);
        const int n = network.size();
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (j > 0) out << ',';
                out << csv::fixed(i == j ? 1.0 : network.weight(i, j), 6);
            }
            out << '\n';
        }
    }
    if (svg) {
        std::filesystem::path svg_path = csv_path;
        svg_path += ".svg";
        std::ofstream out = open_output(svg_path);
        write_heatmap_svg(out, network);
    }
}

DistributionFiles distribution_export(const CountryReport& report,
                                      const std::filesystem::path& bars_csv,
                                      const std::filesystem::path& pie_csv, bool svg) {
    DistributionFiles files;

    std::array<GoalCount, 17> counts{};
    for (const auto& [goal, c] : report.per_goal)
        if (goal >= 1 && goal <= 17) counts[static_cast<std::size_t>(goal - 1)] = c;

    {
        std::ofstream out = open_output(bars_csv);
        out << "goal,synergy_count,tradeoff_count\n";
        for (int goal = 1; goal <= 17; ++goal)
            out << goal << ',' << counts[static_cast<std::size_t>(goal - 1)].synergy << ','
                << counts[static_cast<std::size_t>(goal - 1)].tradeoff << '\n';
        files.written.push_back(bars_csv);
    }
    if (svg) {
        std::filesystem::path path = bars_csv;
        path += ".svg";
        std::ofstream out = open_output(path);
        write_bars_svg(out, counts);
        files.written.push_back(path);
    }

    if (report.synergy_total == 0) {
        files.pie_skipped = true;
        return files;
    }

    std::vector<std::pair<int, double>> slices;
    for (int goal = 1; goal <= 17; ++goal) {
        const int synergy = counts[static_cast<std::size_t>(goal - 1)].synergy;
        if (synergy > 0)
            slices.emplace_back(goal, 100.0 * synergy / report.synergy_total);
    }
    {
        std::ofstream out = open_output(pie_csv);
        out << "goal,percent\n";
        for (const auto& [goal, percent] : slices)
            out << goal << ',' << csv::fixed(percent, 4) << '\n';
        files.written.push_back(pie_csv);
    }
    if (svg) {
        std::filesystem::path path = pie_csv;
        path += ".svg";
        std::ofstream out = open_output(path);
        write_pie_svg(out, slices);
        files.written.push_back(path);
    }
    return files;
}

}  // namespace sdgnet
