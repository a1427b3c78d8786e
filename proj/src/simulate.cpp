#include "mobrisk/simulate.hpp"

#include <algorithm>
#include <ostream>

#include "mobrisk/rng.hpp"

namespace mobrisk {

namespace {

constexpr std::uint64_t kTagSourceDraw = 0x73726377;  // replication source pick
constexpr std::uint64_t kTagInfection = 0x696e6663;   // per-contact infection draw

std::optional<std::size_t> index_of(const std::vector<std::string>& sorted, std::string_view id) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), id);
    if (it == sorted.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - sorted.begin());
}

// Deterministic pick in [0, n): multiply-high map of a keyed 64-bit word.
std::size_t pick_below(std::uint64_t word, std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(word) * static_cast<unsigned __int128>(n)) >> 64);
}

void validate(const SimConfig& config) {
    if (config.beta < 0.0) throw UsageError("beta must be non-negative");
    if (config.isolation_step < 1) throw UsageError("isolation_step must be at least 1");
    if (config.replications < 1) throw UsageError("replications must be at least 1");
}

}  // namespace

SourceSpec SourceSpec::fixed_person(std::string person_id) {
    return {Kind::FixedPerson, std::move(person_id)};
}

SourceSpec SourceSpec::random_visitor_of(std::string location_id) {
    return {Kind::RandomVisitorOf, std::move(location_id)};
}

ContactIndex::ContactIndex(const MobilityDataset& dataset) {
    persons_.reserve(dataset.visits.size());
    locations_.reserve(dataset.visits.size());
    for (const VisitRecord& v : dataset.visits) {
        persons_.push_back(v.person_id);
        locations_.push_back(v.location_id);
        window_ = std::max(window_, v.time + 1);
    }
    for (auto* tokens : {&persons_, &locations_}) {
        std::sort(tokens->begin(), tokens->end());
        tokens->erase(std::unique(tokens->begin(), tokens->end()), tokens->end());
    }

    struct Triple {
        std::int64_t time;
        std::size_t location;
        std::size_t person;
    };
    std::vector<Triple> triples;
    triples.reserve(dataset.visits.size());
    for (const VisitRecord& v : dataset.visits)
        triples.push_back({v.time, *index_of(locations_, v.location_id),
                           *index_of(persons_, v.person_id)});

    // (time, location) -> sorted distinct visitors
    std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
        return std::tie(a.time, a.location, a.person) < std::tie(b.time, b.location, b.person);
    });
    for (std::size_t i = 0; i < triples.size();) {
        std::size_t j = i;
        cell_keys_.emplace_back(triples[i].time, triples[i].location);
        cell_offsets_.push_back(cell_visitors_.size());
        while (j < triples.size() && triples[j].time == triples[i].time &&
               triples[j].location == triples[i].location) {
            if (cell_visitors_.size() == cell_offsets_.back() ||
                cell_visitors_.back() != triples[j].person)
                cell_visitors_.push_back(triples[j].person);
            ++j;
        }
        i = j;
    }
    cell_offsets_.push_back(cell_visitors_.size());

    // (time, person) -> locations visited at that time
    std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
        return std::tie(a.time, a.person, a.location) < std::tie(b.time, b.person, b.location);
    });
    for (std::size_t i = 0; i < triples.size();) {
        std::size_t j = i;
        stop_keys_.emplace_back(triples[i].time, triples[i].person);
        stop_offsets_.push_back(stop_locations_.size());
        while (j < triples.size() && triples[j].time == triples[i].time &&
               triples[j].person == triples[i].person) {
            if (stop_locations_.size() == stop_offsets_.back() ||
                stop_locations_.back() != triples[j].location)
                stop_locations_.push_back(triples[j].location);
            ++j;
        }
        i = j;
    }
    stop_offsets_.push_back(stop_locations_.size());

    // location -> distinct visitors across the whole window
    std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
        return std::tie(a.location, a.person) < std::tie(b.location, b.person);
    });
    visitor_offsets_.assign(locations_.size() + 1, 0);
    std::size_t cursor = 0;
    for (std::size_t loc = 0; loc < locations_.size(); ++loc) {
        visitor_offsets_[loc] = visitor_ids_.size();
        while (cursor < triples.size() && triples[cursor].location == loc) {
            if (visitor_ids_.size() == visitor_offsets_[loc] ||
                visitor_ids_.back() != triples[cursor].person)
                visitor_ids_.push_back(triples[cursor].person);
            ++cursor;
        }
    }
    visitor_offsets_[locations_.size()] = visitor_ids_.size();
}

std::optional<std::size_t> ContactIndex::find_person(std::string_view id) const {
    return index_of(persons_, id);
}

std::vector<std::size_t> ContactIndex::close_contacts(std::size_t person, std::int64_t t) const {
    std::vector<std::size_t> contacts;
    auto stop = std::lower_bound(stop_keys_.begin(), stop_keys_.end(), std::pair{t, person});
    if (stop == stop_keys_.end() || *stop != std::pair{t, person}) return contacts;
    std::size_t stop_idx = static_cast<std::size_t>(stop - stop_keys_.begin());
    for (std::size_t s = stop_offsets_[stop_idx]; s < stop_offsets_[stop_idx + 1]; ++s) {
        std::size_t loc = stop_locations_[s];
        auto cell = std::lower_bound(cell_keys_.begin(), cell_keys_.end(), std::pair{t, loc});
        std::size_t cell_idx = static_cast<std::size_t>(cell - cell_keys_.begin());
        for (std::size_t v = cell_offsets_[cell_idx]; v < cell_offsets_[cell_idx + 1]; ++v)
            if (cell_visitors_[v] != person) contacts.push_back(cell_visitors_[v]);
    }
    std::sort(contacts.begin(), contacts.end());
    contacts.erase(std::unique(contacts.begin(), contacts.end()), contacts.end());
    return contacts;
}

std::span<const std::size_t> ContactIndex::visitors_of(std::string_view location_id) const {
    auto loc = index_of(locations_, location_id);
    if (!loc) return {};
    return {visitor_ids_.data() + visitor_offsets_[*loc],
            visitor_offsets_[*loc + 1] - visitor_offsets_[*loc]};
}

std::set<std::string> close_contacts(const MobilityDataset& dataset, const std::string& person_id,
                                     std::int64_t t) {
    ContactIndex index(dataset);
    auto person = index.find_person(person_id);
    if (!person) throw DataError("unknown person '" + person_id + "'");
    std::set<std::string> out;
    for (std::size_t c : index.close_contacts(*person, t)) out.insert(index.persons()[c]);
    return out;
}

namespace {

std::size_t resolve_source(const ContactIndex& index, const SimConfig& config,
                           std::uint64_t replication) {
    if (config.source.kind == SourceSpec::Kind::FixedPerson) {
        auto person = index.find_person(config.source.id);
        if (!person) throw DataError("unknown source person '" + config.source.id + "'");
        return *person;
    }
    auto visitors = index.visitors_of(config.source.id);
    if (visitors.empty())
        throw DataError("source location '" + config.source.id + "' has no visitors");
    return visitors[pick_below(rng::keyed_u64(config.seed, kTagSourceDraw, replication),
                               visitors.size())];
}

// First-generation outbreak; returns infected person indices, ascending.
std::vector<std::size_t> spread_from(const ContactIndex& index, const SimConfig& config,
                                     std::uint64_t replication, std::size_t source) {
    std::vector<char> susceptible(index.person_count(), 1);
    susceptible[source] = 0;
    std::vector<std::size_t> infected;
    const std::int64_t window = std::max<std::int64_t>(index.time_window(), 1);
    for (int step = 0; step < config.isolation_step; ++step) {
        std::int64_t t = static_cast<std::int64_t>(step) % window;
        auto contacts = index.close_contacts(source, t);
        std::size_t k = 0;
        for (std::size_t c : contacts) k += susceptible[c] ? 1 : 0;
        if (k == 0) continue;
        double p = std::min(1.0, config.beta / static_cast<double>(k));
        for (std::size_t c : contacts) {
            if (!susceptible[c]) continue;
            if (rng::keyed_unit(config.seed, kTagInfection, replication,
                                static_cast<std::uint64_t>(step), c) < p) {
                susceptible[c] = 0;
                infected.push_back(c);
            }
        }
    }
    std::sort(infected.begin(), infected.end());
    return infected;
}

}  // namespace

ReplicationOutcome run_replication(const ContactIndex& index, const SimConfig& config,
                                   std::uint64_t replication) {
    validate(config);
    std::size_t source = resolve_source(index, config, replication);
    ReplicationOutcome outcome;
    outcome.source = index.persons()[source];
    outcome.steps_run = config.isolation_step;
    for (std::size_t c : spread_from(index, config, replication, source))
        outcome.infected.insert(index.persons()[c]);
    return outcome;
}

InfectionTally run_simulation(const ContactIndex& index, const SimConfig& config) {
    validate(config);
    InfectionTally tally;
    tally.persons = index.persons();
    tally.counts.assign(index.person_count(), 0);
    tally.replications = config.replications;
    for (int rep = 0; rep < config.replications; ++rep) {
        std::uint64_t r = static_cast<std::uint64_t>(rep);
        std::size_t source = resolve_source(index, config, r);
        for (std::size_t c : spread_from(index, config, r, source)) ++tally.counts[c];
    }
    return tally;
}

InfectionTally run_simulation(const MobilityDataset& dataset, const SimConfig& config) {
    return run_simulation(ContactIndex(dataset), config);
}

std::int64_t InfectionTally::count_of(std::string_view person_id) const {
    auto idx = index_of(persons, person_id);
    if (!idx) throw DataError("unknown person '" + std::string(person_id) + "'");
    return counts[*idx];
}

std::set<std::string> infected_set(const InfectionTally& tally, int threshold) {
    if (threshold < 1 || threshold > tally.replications)
        throw UsageError("threshold must lie in [1, replications]");
    std::set<std::string> out;
    for (std::size_t i = 0; i < tally.persons.size(); ++i)
        if (tally.counts[i] >= threshold) out.insert(tally.persons[i]);
    return out;
}

void write_tally_csv(std::ostream& out, const InfectionTally& tally) {
    out << "person,infections,replications\n";
    for (std::size_t i = 0; i < tally.persons.size(); ++i)
        out << tally.persons[i] << ',' << tally.counts[i] << ',' << tally.replications << "\n";
}

}  // namespace mobrisk
