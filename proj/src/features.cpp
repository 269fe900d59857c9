#include "sdgnet/features.hpp"

#include <queue>

#include "sdgnet/errors.hpp"

namespace sdgnet {

double direct_effect(const IndicatorNetwork& network, int node) {
    const int n = network.size();
    if (n < 2) throw DomainError("direct_effect: network needs at least 2 nodes");
    if (node < 0 || node >= n)
        throw DomainError("direct_effect: node index " + std::to_string(node) + " out of range");

    int positive = 0;
    for (int j = 0; j < n; ++j) {
        if (j == node) continue;
        if (network.weight(node, j) > 0.0) ++positive;
    }
    return static_cast<double>(positive) / static_cast<double>(n - 1);
}

double harmonic_centrality(const StrongGraph& graph, int node) {
    const int n = graph.size();
    if (n < 2) throw DomainError("harmonic_centrality: graph needs at least 2 nodes");
    if (node < 0 || node >= n)
        throw DomainError("harmonic_centrality: node index " + std::to_string(node) +
                          " out of range");

    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::queue<int> frontier;
    dist[static_cast<std::size_t>(node)] = 0;
    frontier.push(node);
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int v : graph.neighbors(u)) {
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                frontier.push(v);
            }
        }
    }

    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        if (j == node) continue;
        const int d = dist[static_cast<std::size_t>(j)];
        if (d > 0) sum += 1.0 / static_cast<double>(d);  // unreachable contributes 0
    }
    return sum / static_cast<double>(n - 1);
}

std::vector<NodeFeatures> feature_table(const IndicatorNetwork& network, double strong_threshold) {
    const StrongGraph strong = strong_subgraph(network, strong_threshold);
    std::vector<NodeFeatures> rows;
    rows.reserve(static_cast<std::size_t>(network.size()));
    for (int i = 0; i < network.size(); ++i) {
        const StrengthRecord s = strengths(network, i);
        NodeFeatures f;
        f.country_code = network.country_code();
        f.indicator_id = network.nodes()[static_cast<std::size_t>(i)].indicator_id;
        f.sdg_goal = network.nodes()[static_cast<std::size_t>(i)].sdg_goal;
        f.x_d = direct_effect(network, i);
        f.x_h = harmonic_centrality(strong, i);
        f.s_plus = s.s_plus;
        f.s_minus = s.s_minus;
        f.y_label = s.y_label;
        f.degenerate = s.degenerate;
        rows.push_back(std::move(f));
    }
    return rows;
}

}  // namespace sdgnet
