#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mobrisk/graph.hpp"
#include "mobrisk/rank.hpp"
#include "mobrisk/types.hpp"

namespace mobrisk {

enum class Strategy {
    Base,           // seeded random permutation, no prioritization signal
    LocationBased,  // distance to the source location
    RouteBased,     // distance to a transit route's stations
    PrBased,        // descending global rank score
    PprBased,       // descending source-conditioned rank score
    AllKnowing,     // oracle: infected first (built via all_knowing(), not prioritize())
};

std::string to_string(Strategy strategy);
std::optional<Strategy> strategy_from_string(std::string_view name);

struct StrategyContext {
    const BipartiteGraph& graph;
    const LocationMetaMap& meta;
    std::optional<NodeRef> source;     // PprBased seed / LocationBased origin
    std::optional<std::string> route;  // RouteBased only
    RankConfig rank_config;
    std::uint64_t seed = 0;  // Base only
};

// Testing order over the full person population, highest priority first.
struct PriorityList {
    std::vector<std::string> persons;  // a permutation of graph.persons()
    Strategy strategy = Strategy::Base;
};

// Builds the testing order for one strategy. Distance strategies score each
// person by the minimum Euclidean distance from any location they visited to
// the target geometry (the source location, or any station of the route);
// ties and score-free strategies fall back to ascending person token.
// Missing prerequisites (source, route, coordinates) raise UsageError naming
// the gap.
PriorityList prioritize(Strategy kind, const StrategyContext& ctx);

// First ceil(capacity * population) persons of the priority list.
// capacity must lie in (0, 1].
std::set<std::string> select_tested(const PriorityList& priority, double capacity);

// Upper-bound oracle: infected persons first (ascending token within), then
// the rest. `infected` must be a subset of `population`.
PriorityList all_knowing(const std::set<std::string>& infected,
                         std::span<const std::string> population);

// Per graph location: Euclidean distance to the source location, or to the
// nearest station of a route (stations are the meta entries listing the
// route). Every graph location must carry coordinates; violations raise
// UsageError naming the gap. Shared by prioritize() and the zone scoring in
// evaluate.
std::vector<double> location_distances(const BipartiteGraph& graph, const LocationMetaMap& meta,
                                       const NodeRef& source_location);
std::vector<double> route_distances(const BipartiteGraph& graph, const LocationMetaMap& meta,
                                    const std::string& route);

// `rank,person,strategy`.
void write_priority_csv(std::ostream& out, const PriorityList& priority);

}  // namespace mobrisk
