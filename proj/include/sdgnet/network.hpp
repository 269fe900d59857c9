#pragma once

#include <span>
#include <string>
#include <vector>

#include "sdgnet/ingest.hpp"

namespace sdgnet {

struct NodeInfo {
    std::string indicator_id;
    int sdg_goal = 0;
};

// Complete weighted network of one country's indicators. Weights are the
// pairwise Spearman coefficients; the diagonal is stored as 1.0 for display
// but never enters any computation.
class IndicatorNetwork {
public:
    IndicatorNetwork(std::string country_code, std::vector<NodeInfo> nodes);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::string& country_code() const { return country_code_; }
    const std::vector<NodeInfo>& nodes() const { return nodes_; }

    double weight(int i, int j) const { return weights_[static_cast<std::size_t>(i) * nodes_.size() + j]; }
    void set_weight(int i, int j, double w);  // symmetric write, i != j

private:
    std::string country_code_;
    std::vector<NodeInfo> nodes_;
    std::vector<double> weights_;
};

// Signed strength split of one node's star subgraph. A degenerate star (all
// incident weights exactly zero) gets s_plus = s_minus = 0.5 and the flag set
// so downstream users can exclude it.
struct StrengthRecord {
    std::string indicator_id;
    double s_plus = 0.0;
    double s_minus = 0.0;
    int y_label = 0;
    bool degenerate = false;
};

// Unweighted subgraph keeping edges whose correlation meets the threshold
// (inclusive). Node ordering matches the source network.
class StrongGraph {
public:
    StrongGraph(int n, double threshold);

    int size() const { return static_cast<int>(adjacency_.size()); }
    double threshold() const { return threshold_; }
    void add_edge(int i, int j);
    bool has_edge(int i, int j) const;
    const std::vector<int>& neighbors(int i) const { return adjacency_[static_cast<std::size_t>(i)]; }
    long edge_count() const;

private:
    double threshold_;
    std::vector<std::vector<int>> adjacency_;
};

// Average ranks (1-based); tied values share the mean of their rank block.
std::vector<double> average_ranks(std::span<const double> values);

// Tie-aware Spearman coefficient: Pearson correlation of average ranks.
// Requires equal lengths >= 2 and non-constant inputs.
double spearman(std::span<const double> x, std::span<const double> y);

// Builds the complete weighted network of a cleaned panel (>= 2 indicators).
IndicatorNetwork build_network(const CountryPanel& panel);

StrengthRecord strengths(const IndicatorNetwork& network, int node);

// 1 iff s_plus >= s_minus (the tie counts as synergy-dominated).
int label(double s_plus, double s_minus);

StrongGraph strong_subgraph(const IndicatorNetwork& network, double threshold = 0.8);

}  // namespace sdgnet
