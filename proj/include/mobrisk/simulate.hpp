#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mobrisk/types.hpp"

namespace mobrisk {

// Where a replication's index case comes from: a fixed person, or a person
// drawn uniformly from a location's visitor set each replication.
struct SourceSpec {
    enum class Kind { FixedPerson, RandomVisitorOf };
    Kind kind = Kind::FixedPerson;
    std::string id;

    static SourceSpec fixed_person(std::string person_id);
    static SourceSpec random_visitor_of(std::string location_id);
};

struct SimConfig {
    double beta = 0.4;  // expected infections per infectious step
    SourceSpec source;
    int isolation_step = 1;  // step at which the index case is removed
    int replications = 1000;
    std::uint64_t seed = 0;
};

// Time- and location-indexed view of a dataset, precomputed once so contact
// lookups during replications are cheap. Person/location universes are the
// dataset's distinct tokens, sorted.
class ContactIndex {
public:
    explicit ContactIndex(const MobilityDataset& dataset);

    const std::vector<std::string>& persons() const { return persons_; }
    std::size_t person_count() const { return persons_.size(); }
    std::optional<std::size_t> find_person(std::string_view id) const;

    // Number of discrete steps covered by the dataset (max time + 1).
    std::int64_t time_window() const { return window_; }

    // Other persons co-located with `person` at exactly time t, ascending by
    // person index.
    std::vector<std::size_t> close_contacts(std::size_t person, std::int64_t t) const;

    // Distinct visitors of a location across all times, ascending; empty if
    // the location is unknown.
    std::span<const std::size_t> visitors_of(std::string_view location_id) const;

private:
    std::vector<std::string> persons_;
    std::vector<std::string> locations_;
    std::int64_t window_ = 0;
    // (time, location) -> visitor slices, sorted for binary search
    std::vector<std::pair<std::int64_t, std::size_t>> cell_keys_;
    std::vector<std::size_t> cell_offsets_;
    std::vector<std::size_t> cell_visitors_;
    // (time, person) -> location slices
    std::vector<std::pair<std::int64_t, std::size_t>> stop_keys_;
    std::vector<std::size_t> stop_offsets_;
    std::vector<std::size_t> stop_locations_;
    // location -> distinct visitors over the whole window
    std::vector<std::size_t> visitor_offsets_;
    std::vector<std::size_t> visitor_ids_;
};

// Operation-level wrapper over ContactIndex::close_contacts; throws DataError
// if the person is not in the dataset.
std::set<std::string> close_contacts(const MobilityDataset& dataset, const std::string& person_id,
                                     std::int64_t t);

struct ReplicationOutcome {
    std::string source;
    std::set<std::string> infected;  // never contains the source
    int steps_run = 0;
};

// Per-person infection counts across replications.
struct InfectionTally {
    std::vector<std::string> persons;  // sorted universe
    std::vector<std::int64_t> counts;  // aligned with persons
    int replications = 0;

    std::int64_t count_of(std::string_view person_id) const;
};

// One first-generation outbreak: at each step t in [0, isolation_step) the
// index case meets its currently susceptible co-visitors at time t mod
// time_window(); with k such contacts, each is independently infected with
// probability min(1, beta / k). Newly infected persons do not transmit.
// All randomness is keyed by (seed, replication, step, person), so outcomes
// are reproducible and independent of evaluation order.
ReplicationOutcome run_replication(const ContactIndex& index, const SimConfig& config,
                                   std::uint64_t replication);

// Runs config.replications independent replications and tallies infections.
InfectionTally run_simulation(const MobilityDataset& dataset, const SimConfig& config);
InfectionTally run_simulation(const ContactIndex& index, const SimConfig& config);

// Persons infected in at least `threshold` replications.
// Requires 1 <= threshold <= tally.replications.
std::set<std::string> infected_set(const InfectionTally& tally, int threshold);

// `person,infections,replications`, all persons, sorted.
void write_tally_csv(std::ostream& out, const InfectionTally& tally);

}  // namespace mobrisk
