#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mobrisk/types.hpp"

namespace mobrisk {

// Immutable bipartite people-location network. Node indexing is global:
// persons occupy [0, person_count()), locations follow at
// [person_count(), node_count()). Both classes are ordered lexicographically
// by token, so equal datasets always produce identical graphs.
class BipartiteGraph {
public:
    enum class Weighting { Binary, VisitCount };

    struct Arc {
        std::size_t to = 0;       // global node index on the opposite side
        std::int64_t weight = 1;  // >= 1
    };

    Weighting weighting() const { return weighting_; }

    std::size_t person_count() const { return persons_.size(); }
    std::size_t location_count() const { return locations_.size(); }
    std::size_t node_count() const { return persons_.size() + locations_.size(); }
    std::size_t edge_count() const { return arcs_.size() / 2; }

    const std::vector<std::string>& persons() const { return persons_; }
    const std::vector<std::string>& locations() const { return locations_; }

    std::optional<std::size_t> find_person(std::string_view id) const;
    std::optional<std::size_t> find_location(std::string_view id) const;  // global index
    std::optional<std::size_t> find_node(const NodeRef& node) const;

    NodeClass class_of(std::size_t node) const {
        return node < persons_.size() ? NodeClass::Person : NodeClass::Location;
    }
    const std::string& token_of(std::size_t node) const {
        return node < persons_.size() ? persons_[node] : locations_[node - persons_.size()];
    }
    NodeRef ref_of(std::size_t node) const { return {class_of(node), token_of(node)}; }

    // Incident arcs of a node, ordered by neighbor token.
    std::span<const Arc> arcs(std::size_t node) const {
        return {arcs_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
    }

    // Unweighted incident edge count; throws DataError for unknown nodes.
    std::size_t degree(const NodeRef& node) const;

    // Sum of incident edge weights (used as the out-link mass divisor).
    double weighted_degree(std::size_t node) const { return weighted_degree_[node]; }

    // Neighbors with weights, ordered by token; throws DataError for unknown
    // nodes.
    std::vector<std::pair<NodeRef, std::int64_t>> neighbors(const NodeRef& node) const;

    friend BipartiteGraph build_graph(const MobilityDataset& dataset, Weighting weighting);

private:
    Weighting weighting_ = Weighting::Binary;
    std::vector<std::string> persons_;    // sorted tokens
    std::vector<std::string> locations_;  // sorted tokens
    std::vector<std::size_t> offsets_;    // node_count()+1 entries into arcs_
    std::vector<Arc> arcs_;               // each undirected edge stored twice
    std::vector<double> weighted_degree_;
};

// Collapses visits into a weighted bipartite graph: an edge (p, l) exists iff
// the dataset holds at least one visit of p to l; VisitCount mode weights it
// by the number of such visits. Throws DataError on an empty dataset.
BipartiteGraph build_graph(const MobilityDataset& dataset,
                           BipartiteGraph::Weighting weighting = BipartiteGraph::Weighting::Binary);

// Edge list dump, one line per undirected edge:
// `class_u,u,class_v,v,weight` with u on the person side, sorted by (u, v).
void write_edges_csv(std::ostream& out, const BipartiteGraph& graph);

}  // namespace mobrisk
