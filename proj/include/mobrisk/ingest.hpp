#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "mobrisk/types.hpp"

namespace mobrisk {

// Reads a visit log. Expected layout: header `location,user,time`, one record
// per line, token grammar [A-Za-z0-9_-]+, non-negative integer times. Records
// are kept in file order and never deduplicated here. Throws DataError naming
// the offending line.
MobilityDataset parse_visits(std::istream& source);

// Reads per-location metadata. Header `location,x,y,routes,zone`; `routes` is
// a |-separated token list; x/y/zone may be blank (x and y only together).
// Duplicate location ids are rejected.
LocationMetaMap parse_location_meta(std::istream& source);

// Reads zone-level confirmed case counts. Header `zone,cases`.
std::map<std::string, std::int64_t> parse_case_counts(std::istream& source);

// The bundled synthetic dataset: 20 people, locations A/B/C, 39 visits, all
// at time step 0.
MobilityDataset builtin_synthetic();

// Uniform random visits over (person, location, time). Pure function of its
// arguments; the same seed always yields the same dataset. Person tokens are
// p0..p{n-1}, locations l0..l{n-1}, times 0..n_timesteps-1.
MobilityDataset generate_random(std::size_t n_people, std::size_t n_locations,
                                std::size_t n_visits, std::size_t n_timesteps,
                                std::uint64_t seed);

// Inverse of parse_visits: header plus one line per record, LF endings.
void write_visits_csv(std::ostream& out, const MobilityDataset& dataset);

// Helper for preparing visit logs from wall-clock data: buckets an epoch
// timestamp into a step index of `window` seconds, counted from `origin`.
// Timestamps before the origin are rejected.
std::int64_t step_index(std::int64_t epoch_seconds, std::int64_t origin_epoch_seconds,
                        std::int64_t window_seconds);

}  // namespace mobrisk
