#include "sdgnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sdgnet/errors.hpp"

namespace sdgnet {

IndicatorNetwork::IndicatorNetwork(std::string country_code, std::vector<NodeInfo> nodes)
    : country_code_(std::move(country_code)), nodes_(std::move(nodes)) {
    const std::size_t n = nodes_.size();
    weights_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) weights_[i * n + i] = 1.0;
}

void IndicatorNetwork::set_weight(int i, int j, double w) {
    if (i == j) throw DomainError("self-weights are not part of the network");
    const std::size_t n = nodes_.size();
    weights_[static_cast<std::size_t>(i) * n + j] = w;
    weights_[static_cast<std::size_t>(j) * n + i] = w;
}

StrongGraph::StrongGraph(int n, double threshold)
    : threshold_(threshold), adjacency_(static_cast<std::size_t>(n)) {}

void StrongGraph::add_edge(int i, int j) {
    if (i == j) throw DomainError("self-loops are not allowed");
    adjacency_[static_cast<std::size_t>(i)].push_back(j);
    adjacency_[static_cast<std::size_t>(j)].push_back(i);
}

bool StrongGraph::has_edge(int i, int j) const {
    const auto& nbrs = adjacency_[static_cast<std::size_t>(i)];
    return std::find(nbrs.begin(), nbrs.end(), j) != nbrs.end();
}

long StrongGraph::edge_count() const {
    long twice = 0;
    for (const auto& nbrs : adjacency_) twice += static_cast<long>(nbrs.size());
    return twice / 2;
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // mean of 1-based ranks
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

namespace {

bool is_constant(std::span<const double> v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] != v[0]) return false;
    return true;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= static_cast<double>(n);
    mean_b /= static_cast<double>(n);

    double cross = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        cross += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    return cross / std::sqrt(var_a * var_b);
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DomainError("spearman: length mismatch (" + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
    if (x.size() < 2) throw DomainError("spearman: need at least 2 observations");
    if (is_constant(x) || is_constant(y))
        throw DomainError("spearman: constant input has no defined rank correlation");

    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    return pearson(rx, ry);
}

IndicatorNetwork build_network(const CountryPanel& panel) {
    const int n = static_cast<int>(panel.series.size());
    if (n < 2) throw DomainError("build_network: panel needs at least 2 retained indicators");

    std::vector<NodeInfo> nodes;
    nodes.reserve(panel.series.size());
    std::vector<std::vector<double>> columns;
    columns.reserve(panel.series.size());
    const std::size_t window_len = panel.series.front().values.size();
    for (const auto& s : panel.series) {
        if (s.values.size() != window_len)
            throw DataError("panel series disagree on the year window (" + s.indicator_id + ")");
        nodes.push_back({s.indicator_id, s.sdg_goal});
        std::vector<double> col;
        col.reserve(s.values.size());
        for (const auto& [year, v] : s.values) col.push_back(v);
        columns.push_back(std::move(col));
    }

    IndicatorNetwork net(panel.country_code, std::move(nodes));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) net.set_weight(i, j, spearman(columns[i], columns[j]));
    return net;
}

StrengthRecord strengths(const IndicatorNetwork& network, int node) {
    if (node < 0 || node >= network.size())
        throw DomainError("strengths: node index " + std::to_string(node) + " out of range");

    double pos = 0.0, neg = 0.0;
    for (int j = 0; j < network.size(); ++j) {
        if (j == node) continue;
        const double w = network.weight(node, j);
        if (w > 0.0)
            pos += w;
        else if (w < 0.0)
            neg += -w;
    }

    StrengthRecord rec;
    rec.indicator_id = network.nodes()[static_cast<std::size_t>(node)].indicator_id;
    const double total = pos + neg;
    if (total == 0.0) {
        rec.s_plus = 0.5;
        rec.s_minus = 0.5;
        rec.degenerate = true;
    } else {
        rec.s_plus = pos / total;
        rec.s_minus = neg / total;
    }
    rec.y_label = label(rec.s_plus, rec.s_minus);
    return rec;
}

int label(double s_plus, double s_minus) { return s_plus >= s_minus ? 1 : 0; }

StrongGraph strong_subgraph(const IndicatorNetwork& network, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw DomainError("strong_subgraph: threshold must lie in (0, 1]");
    StrongGraph graph(network.size(), threshold);
    for (int i = 0; i < network.size(); ++i)
        for (int j = i + 1; j < network.size(); ++j)
            if (network.weight(i, j) >= threshold) graph.add_edge(i, j);
    return graph;
}

}  // namespace sdgnet
