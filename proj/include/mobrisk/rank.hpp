#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "mobrisk/graph.hpp"
#include "mobrisk/types.hpp"

namespace mobrisk {

struct RankConfig {
    double damping = 0.85;
    double tol = 1e-10;  // per-node convergence threshold (max-norm)
    int max_iter = 1000;
    std::optional<NodeRef> source;  // required for personalized runs
};

// Node scores aligned with BipartiteGraph's global node indexing.
struct ScoreVector {
    std::vector<double> values;
    int iterations = 0;
    bool converged = false;

    double at(const BipartiteGraph& graph, const NodeRef& node) const;
};

// Power iteration of
//   score(p) = (1 - d)/N + d * sum_{q ~ p} score(q) * w(q,p) / C(q)
// over the undirected bipartite graph, where C(q) is the weighted degree of q
// and every edge is traversed in both directions. Starts from the uniform
// vector 1/N and stops when no node moved by tol or more. Non-convergence is
// reported through `converged`, not an exception.
ScoreVector pagerank(const BipartiteGraph& graph, const RankConfig& config);

// Source-conditioned variant: the restart mass (1 - d) is injected at the
// source node only, every other node keeps just the propagation term. Same
// initialization and stopping rule as pagerank(). config.source must name a
// node present in the graph.
ScoreVector personalized_pagerank(const BipartiteGraph& graph, const RankConfig& config);

// Multi-seed extension: (1 - d) split uniformly across `seeds`.
ScoreVector personalized_pagerank(const BipartiteGraph& graph, const RankConfig& config,
                                  std::span<const NodeRef> seeds);

// Scales scores to sum to 1 for presentation. Rankings are unaffected.
ScoreVector normalized(ScoreVector scores);

// Nodes in descending score order, ties broken ascending by (class, token);
// optionally restricted to one node class.
std::vector<NodeRef> rank_nodes(const BipartiteGraph& graph, const ScoreVector& scores,
                                std::optional<NodeClass> class_filter = {});

// First ceil(fraction * size) entries of a ranking, as a set.
// fraction must lie in (0, 1].
std::set<NodeRef> top_fraction(std::span<const NodeRef> ranking, double fraction);

// `class,id,score,rank` sorted by rank.
void write_scores_csv(std::ostream& out, const BipartiteGraph& graph, const ScoreVector& scores);

}  // namespace mobrisk
