#pragma once

#include <vector>

#include "sdgnet/network.hpp"

namespace sdgnet {

// Per-indicator model inputs: normalized positive degree (direct effect),
// harmonic centrality on the strong subgraph (indirect effect), and the
// strength-derived label.
struct NodeFeatures {
    std::string country_code;
    std::string indicator_id;
    int sdg_goal = 0;
    double x_d = 0.0;
    double x_h = 0.0;
    double s_plus = 0.0;
    double s_minus = 0.0;
    int y_label = 0;
    bool degenerate = false;
};

// Count of strictly positive incident weights divided by n-1.
double direct_effect(const IndicatorNetwork& network, int node);

// Normalized sum of reciprocal shortest-path distances; unreachable nodes
// contribute zero.
double harmonic_centrality(const StrongGraph& graph, int node);

// One row per node, in node order: strengths + label + x_d on the full signed
// network + x_h on the strong subgraph at the given threshold.
std::vector<NodeFeatures> feature_table(const IndicatorNetwork& network,
                                        double strong_threshold = 0.8);

}  // namespace sdgnet
