#include "mobrisk/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mobrisk/rng.hpp"
#include "mobrisk/util.hpp"

namespace mobrisk {

std::string to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::Base: return "base";
        case Strategy::LocationBased: return "location";
        case Strategy::RouteBased: return "route";
        case Strategy::PrBased: return "pr";
        case Strategy::PprBased: return "ppr";
        case Strategy::AllKnowing: return "all-knowing";
    }
    return "?";
}

std::optional<Strategy> strategy_from_string(std::string_view name) {
    if (name == "base") return Strategy::Base;
    if (name == "location") return Strategy::LocationBased;
    if (name == "route") return Strategy::RouteBased;
    if (name == "pr") return Strategy::PrBased;
    if (name == "ppr") return Strategy::PprBased;
    if (name == "all-knowing") return Strategy::AllKnowing;
    return std::nullopt;
}

namespace {

Coord coord_of(const LocationMetaMap& meta, const std::string& location_id, const char* need) {
    auto it = meta.find(location_id);
    if (it == meta.end() || !it->second.coord)
        throw UsageError(std::string(need) + ": location '" + location_id +
                         "' has no coordinates in the metadata");
    return *it->second.coord;
}

double euclid(const Coord& a, const Coord& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Persons ordered by a per-person key, ascending; ties by token.
PriorityList order_by_key(const BipartiteGraph& graph, const std::vector<double>& key,
                          Strategy strategy) {
    std::vector<std::size_t> order(graph.person_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (key[a] != key[b]) return key[a] < key[b];
        return graph.persons()[a] < graph.persons()[b];
    });
    PriorityList list;
    list.strategy = strategy;
    list.persons.reserve(order.size());
    for (std::size_t i : order) list.persons.push_back(graph.persons()[i]);
    return list;
}

// Min over a person's visited locations of the per-location distance.
std::vector<double> person_min_distance(const BipartiteGraph& graph,
                                        const std::vector<double>& location_distance) {
    std::vector<double> best(graph.person_count(), std::numeric_limits<double>::infinity());
    for (std::size_t p = 0; p < graph.person_count(); ++p)
        for (const BipartiteGraph::Arc& arc : graph.arcs(p))
            best[p] = std::min(best[p], location_distance[arc.to - graph.person_count()]);
    return best;
}

PriorityList rank_persons(const BipartiteGraph& graph, const ScoreVector& scores,
                          Strategy strategy) {
    PriorityList list;
    list.strategy = strategy;
    for (const NodeRef& node : rank_nodes(graph, scores, NodeClass::Person))
        list.persons.push_back(node.id);
    return list;
}

}  // namespace

std::vector<double> location_distances(const BipartiteGraph& graph, const LocationMetaMap& meta,
                                       const NodeRef& source_location) {
    if (source_location.cls != NodeClass::Location)
        throw UsageError("location-based strategy: source must be a location node");
    Coord origin = coord_of(meta, source_location.id, "location-based strategy");
    std::vector<double> dist(graph.location_count());
    for (std::size_t j = 0; j < graph.location_count(); ++j)
        dist[j] = euclid(coord_of(meta, graph.locations()[j], "location-based strategy"), origin);
    return dist;
}

std::vector<double> route_distances(const BipartiteGraph& graph, const LocationMetaMap& meta,
                                    const std::string& route) {
    std::vector<Coord> stations;
    for (const auto& [id, entry] : meta)
        if (entry.route_ids.count(route))
            stations.push_back(coord_of(meta, id, "route-based strategy"));
    if (stations.empty())
        throw UsageError("route-based strategy: route '" + route +
                         "' has no member locations in the metadata");
    std::vector<double> dist(graph.location_count());
    for (std::size_t j = 0; j < graph.location_count(); ++j) {
        Coord at = coord_of(meta, graph.locations()[j], "route-based strategy");
        double best = std::numeric_limits<double>::infinity();
        for (const Coord& s : stations) best = std::min(best, euclid(at, s));
        dist[j] = best;
    }
    return dist;
}

PriorityList prioritize(Strategy kind, const StrategyContext& ctx) {
    switch (kind) {
        case Strategy::Base: {
            PriorityList list;
            list.strategy = Strategy::Base;
            list.persons = ctx.graph.persons();
            rng::SplitMix64 gen(ctx.seed);
            rng::shuffle(list.persons, gen);
            return list;
        }
        case Strategy::LocationBased: {
            if (!ctx.source)
                throw UsageError("location-based strategy: missing source location");
            auto dist = location_distances(ctx.graph, ctx.meta, *ctx.source);
            return order_by_key(ctx.graph, person_min_distance(ctx.graph, dist),
                                Strategy::LocationBased);
        }
        case Strategy::RouteBased: {
            if (!ctx.route) throw UsageError("route-based strategy: missing route");
            auto dist = route_distances(ctx.graph, ctx.meta, *ctx.route);
            return order_by_key(ctx.graph, person_min_distance(ctx.graph, dist),
                                Strategy::RouteBased);
        }
        case Strategy::PrBased: {
            RankConfig config = ctx.rank_config;
            config.source.reset();
            return rank_persons(ctx.graph, pagerank(ctx.graph, config), Strategy::PrBased);
        }
        case Strategy::PprBased: {
            if (!ctx.source) throw UsageError("ppr-based strategy: missing source node");
            RankConfig config = ctx.rank_config;
            config.source = ctx.source;
            return rank_persons(ctx.graph, personalized_pagerank(ctx.graph, config),
                                Strategy::PprBased);
        }
        case Strategy::AllKnowing:
            throw UsageError("all-knowing ordering is built from the infected set, not prioritize()");
    }
    throw UsageError("unknown strategy");
}

std::set<std::string> select_tested(const PriorityList& priority, double capacity) {
    if (!(capacity > 0.0) || capacity > 1.0) throw UsageError("capacity must lie in (0, 1]");
    std::size_t k = ceil_fraction(capacity, priority.persons.size());
    return {priority.persons.begin(), priority.persons.begin() + static_cast<std::ptrdiff_t>(k)};
}

PriorityList all_knowing(const std::set<std::string>& infected,
                         std::span<const std::string> population) {
    PriorityList list;
    list.strategy = Strategy::AllKnowing;
    list.persons.assign(infected.begin(), infected.end());
    std::vector<std::string> rest;
    for (const std::string& person : population)
        if (!infected.count(person)) rest.push_back(person);
    if (rest.size() + infected.size() != population.size())
        throw UsageError("infected set is not a subset of the population");
    std::sort(rest.begin(), rest.end());
    list.persons.insert(list.persons.end(), rest.begin(), rest.end());
    return list;
}

void write_priority_csv(std::ostream& out, const PriorityList& priority) {
    out << "rank,person,strategy\n";
    for (std::size_t i = 0; i < priority.persons.size(); ++i)
        out << i + 1 << ',' << priority.persons[i] << ',' << to_string(priority.strategy) << "\n";
}

}  // namespace mobrisk
