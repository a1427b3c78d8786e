#include "mobrisk/graph.hpp"

#include <algorithm>
#include <ostream>

namespace mobrisk {

std::string to_string(NodeClass cls) {
    return cls == NodeClass::Person ? "person" : "location";
}

std::string to_string(const NodeRef& node) { return to_string(node.cls) + ":" + node.id; }

namespace {

std::optional<std::size_t> index_of(const std::vector<std::string>& sorted, std::string_view id) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), id);
    if (it == sorted.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - sorted.begin());
}

}  // namespace

std::optional<std::size_t> BipartiteGraph::find_person(std::string_view id) const {
    return index_of(persons_, id);
}

std::optional<std::size_t> BipartiteGraph::find_location(std::string_view id) const {
    auto local = index_of(locations_, id);
    if (!local) return std::nullopt;
    return *local + persons_.size();
}

std::optional<std::size_t> BipartiteGraph::find_node(const NodeRef& node) const {
    return node.cls == NodeClass::Person ? find_person(node.id) : find_location(node.id);
}

std::size_t BipartiteGraph::degree(const NodeRef& node) const {
    auto idx = find_node(node);
    if (!idx) throw DataError("unknown node " + to_string(node));
    return arcs(*idx).size();
}

std::vector<std::pair<NodeRef, std::int64_t>> BipartiteGraph::neighbors(const NodeRef& node) const {
    auto idx = find_node(node);
    if (!idx) throw DataError("unknown node " + to_string(node));
    std::vector<std::pair<NodeRef, std::int64_t>> out;
    out.reserve(arcs(*idx).size());
    for (const Arc& arc : arcs(*idx)) out.emplace_back(ref_of(arc.to), arc.weight);
    return out;
}

BipartiteGraph build_graph(const MobilityDataset& dataset, BipartiteGraph::Weighting weighting) {
    if (dataset.visits.empty()) throw DataError("cannot build a graph from an empty dataset");

    BipartiteGraph g;
    g.weighting_ = weighting;

    g.persons_.reserve(dataset.visits.size());
    g.locations_.reserve(dataset.visits.size());
    for (const VisitRecord& v : dataset.visits) {
        g.persons_.push_back(v.person_id);
        g.locations_.push_back(v.location_id);
    }
    for (auto* tokens : {&g.persons_, &g.locations_}) {
        std::sort(tokens->begin(), tokens->end());
        tokens->erase(std::unique(tokens->begin(), tokens->end()), tokens->end());
    }
    const std::size_t p_count = g.persons_.size();
    const std::size_t n = p_count + g.locations_.size();

    // Distinct (person, location) pairs with visit multiplicities.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(dataset.visits.size());
    for (const VisitRecord& v : dataset.visits)
        pairs.emplace_back(*index_of(g.persons_, v.person_id),
                           *index_of(g.locations_, v.location_id));
    std::sort(pairs.begin(), pairs.end());

    struct Edge {
        std::size_t person, location;
        std::int64_t weight;
    };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        std::int64_t count = static_cast<std::int64_t>(j - i);
        edges.push_back({pairs[i].first, pairs[i].second,
                         weighting == BipartiteGraph::Weighting::VisitCount ? count : 1});
        i = j;
    }

    // CSR over global indices; edges are sorted by (person, location), which
    // already matches token order on both sides.
    std::vector<std::size_t> counts(n, 0);
    for (const Edge& e : edges) {
        ++counts[e.person];
        ++counts[p_count + e.location];
    }
    g.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + counts[i];
    g.arcs_.resize(2 * edges.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : edges)
        g.arcs_[cursor[e.person]++] = {p_count + e.location, e.weight};
    for (const Edge& e : edges)
        g.arcs_[cursor[p_count + e.location]++] = {e.person, e.weight};

    g.weighted_degree_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (const BipartiteGraph::Arc& arc : g.arcs(i))
            g.weighted_degree_[i] += static_cast<double>(arc.weight);

    return g;
}

void write_edges_csv(std::ostream& out, const BipartiteGraph& graph) {
    out << "class_u,u,class_v,v,weight\n";
    for (std::size_t p = 0; p < graph.person_count(); ++p)
        for (const BipartiteGraph::Arc& arc : graph.arcs(p))
            out << "person," << graph.persons()[p] << ",location," << graph.token_of(arc.to) << ','
                << arc.weight << "\n";
}

}  // namespace mobrisk
