#include "mobrisk/rank.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mobrisk/util.hpp"

namespace mobrisk {

namespace {

// Synchronous propagation sweep shared by both algorithms; `injection` is the
// per-node restart term added every iteration.
ScoreVector iterate(const BipartiteGraph& graph, const RankConfig& config,
                    const std::vector<double>& injection) {
    if (config.damping < 0.0 || config.damping > 1.0)
        throw UsageError("damping must lie in [0, 1]");
    if (config.tol <= 0.0) throw UsageError("tol must be positive");
    if (config.max_iter < 1) throw UsageError("max_iter must be at least 1");

    const std::size_t n = graph.node_count();
    std::vector<double> current(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n), contribution(n);

    ScoreVector result;
    for (int iter = 1; iter <= config.max_iter; ++iter) {
        for (std::size_t i = 0; i < n; ++i)
            contribution[i] = current[i] / graph.weighted_degree(i);
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (const BipartiteGraph::Arc& arc : graph.arcs(i))
                acc += static_cast<double>(arc.weight) * contribution[arc.to];
            next[i] = injection[i] + config.damping * acc;
            delta = std::max(delta, std::abs(next[i] - current[i]));
        }
        current.swap(next);
        result.iterations = iter;
        if (delta < config.tol) {
            result.converged = true;
            break;
        }
    }
    result.values = std::move(current);
    return result;
}

}  // namespace

double ScoreVector::at(const BipartiteGraph& graph, const NodeRef& node) const {
    auto idx = graph.find_node(node);
    if (!idx) throw DataError("unknown node " + to_string(node));
    return values[*idx];
}

ScoreVector pagerank(const BipartiteGraph& graph, const RankConfig& config) {
    if (config.source) throw UsageError("pagerank does not take a source node");
    const std::size_t n = graph.node_count();
    std::vector<double> injection(n, (1.0 - config.damping) / static_cast<double>(n));
    return iterate(graph, config, injection);
}

ScoreVector personalized_pagerank(const BipartiteGraph& graph, const RankConfig& config,
                                  std::span<const NodeRef> seeds) {
    if (seeds.empty()) throw UsageError("personalized_pagerank requires at least one source node");
    std::vector<double> injection(graph.node_count(), 0.0);
    const double share = (1.0 - config.damping) / static_cast<double>(seeds.size());
    for (const NodeRef& seed : seeds) {
        auto idx = graph.find_node(seed);
        if (!idx) throw DataError("unknown source node " + to_string(seed));
        injection[*idx] += share;
    }
    return iterate(graph, config, injection);
}

ScoreVector personalized_pagerank(const BipartiteGraph& graph, const RankConfig& config) {
    if (!config.source) throw UsageError("personalized_pagerank requires config.source");
    return personalized_pagerank(graph, config, {&*config.source, 1});
}

ScoreVector normalized(ScoreVector scores) {
    double sum = 0.0;
    for (double v : scores.values) sum += v;
    if (sum > 0.0)
        for (double& v : scores.values) v /= sum;
    return scores;
}

std::vector<NodeRef> rank_nodes(const BipartiteGraph& graph, const ScoreVector& scores,
                                std::optional<NodeClass> class_filter) {
    if (scores.values.size() != graph.node_count())
        throw UsageError("score vector does not match graph");
    std::vector<std::size_t> order;
    order.reserve(graph.node_count());
    for (std::size_t i = 0; i < graph.node_count(); ++i)
        if (!class_filter || graph.class_of(i) == *class_filter) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores.values[a] != scores.values[b]) return scores.values[a] > scores.values[b];
        if (graph.class_of(a) != graph.class_of(b))
            return graph.class_of(a) == NodeClass::Person;
        return graph.token_of(a) < graph.token_of(b);
    });
    std::vector<NodeRef> ranked;
    ranked.reserve(order.size());
    for (std::size_t i : order) ranked.push_back(graph.ref_of(i));
    return ranked;
}

std::set<NodeRef> top_fraction(std::span<const NodeRef> ranking, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0) throw UsageError("fraction must lie in (0, 1]");
    std::size_t k = ceil_fraction(fraction, ranking.size());
    return {ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(k)};
}

void write_scores_csv(std::ostream& out, const BipartiteGraph& graph, const ScoreVector& scores) {
    out << "class,id,score,rank\n";
    std::size_t rank = 0;
    for (const NodeRef& node : rank_nodes(graph, scores))
        out << to_string(node.cls) << ',' << node.id << ','
            << format_double(scores.at(graph, node)) << ',' << ++rank << "\n";
}

}  // namespace mobrisk
