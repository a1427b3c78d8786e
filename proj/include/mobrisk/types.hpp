#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobrisk {

// Data or runtime failure (bad file contents, unknown node, unresolvable
// source). CLI maps these to exit code 1.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller misuse: missing required argument, out-of-range parameter, strategy
// prerequisite not satisfied. CLI maps these to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class NodeClass { Person, Location };

std::string to_string(NodeClass cls);

// Identity of a node in the people-location network. A person token and a
// location token may coincide textually without colliding.
struct NodeRef {
    NodeClass cls;
    std::string id;

    auto operator<=>(const NodeRef&) const = default;
};

std::string to_string(const NodeRef& node);

// One (person, location, time) observation; the atomic unit of mobility data.
struct VisitRecord {
    std::string person_id;
    std::string location_id;
    std::int64_t time = 0;  // discrete non-negative step index

    auto operator<=>(const VisitRecord&) const = default;
};

struct Coord {
    double x = 0.0;
    double y = 0.0;
};

struct LocationMeta {
    std::string location_id;
    std::optional<Coord> coord;
    std::set<std::string> route_ids;
    std::optional<std::string> zone_id;
};

using LocationMetaMap = std::map<std::string, LocationMeta>;

// A visit log plus optional per-location metadata. Duplicate visit triples
// are allowed; consumers define their own dedup semantics.
struct MobilityDataset {
    std::vector<VisitRecord> visits;
    LocationMetaMap meta;
};

}  // namespace mobrisk
