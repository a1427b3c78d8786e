#include "mobrisk/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "mobrisk/rng.hpp"

namespace mobrisk {

namespace {

constexpr const char* kVisitHeader = "location,user,time";
constexpr const char* kMetaHeader = "location,x,y,routes,zone";
constexpr const char* kCaseHeader = "zone,cases";

[[noreturn]] void fail(const char* what, std::size_t line, const std::string& detail) {
    std::ostringstream msg;
    msg << what << ":" << line << ": " << detail;
    throw DataError(msg.str());
}

bool valid_token(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                  c == '_' || c == '-';
        if (!ok) return false;
    }
    return true;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

// Reads one logical line, tolerating CRLF endings. Returns false at EOF.
bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::int64_t parse_int(std::string_view field, const char* what, std::size_t line,
                       const char* role) {
    std::int64_t value = 0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        fail(what, line, std::string(role) + " is not an integer: '" + std::string(field) + "'");
    return value;
}

double parse_coord(std::string_view field, std::size_t line) {
    double value = 0.0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(value))
        fail("meta", line, "coordinate is not a finite number: '" + std::string(field) + "'");
    return value;
}

void expect_header(std::istream& in, const char* what, const char* expected) {
    std::string line;
    if (!next_line(in, line) || line != expected)
        throw DataError(std::string(what) + ":1: missing header '" + expected + "'");
}

}  // namespace

MobilityDataset parse_visits(std::istream& source) {
    expect_header(source, "visits", kVisitHeader);
    MobilityDataset dataset;
    std::string line;
    std::size_t lineno = 1;
    while (next_line(source, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 3)
            fail("visits", lineno,
                 "expected 3 fields, got " + std::to_string(fields.size()));
        if (!valid_token(fields[0])) fail("visits", lineno, "bad location token");
        if (!valid_token(fields[1])) fail("visits", lineno, "bad user token");
        std::int64_t t = parse_int(fields[2], "visits", lineno, "time");
        if (t < 0) fail("visits", lineno, "time must be non-negative");
        dataset.visits.push_back({std::string(fields[1]), std::string(fields[0]), t});
    }
    return dataset;
}

LocationMetaMap parse_location_meta(std::istream& source) {
    expect_header(source, "meta", kMetaHeader);
    LocationMetaMap meta;
    std::string line;
    std::size_t lineno = 1;
    while (next_line(source, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 5)
            fail("meta", lineno, "expected 5 fields, got " + std::to_string(fields.size()));
        if (!valid_token(fields[0])) fail("meta", lineno, "bad location token");

        LocationMeta entry;
        entry.location_id = std::string(fields[0]);
        bool has_x = !fields[1].empty(), has_y = !fields[2].empty();
        if (has_x != has_y) fail("meta", lineno, "x and y must be given together");
        if (has_x) entry.coord = Coord{parse_coord(fields[1], lineno), parse_coord(fields[2], lineno)};
        if (!fields[3].empty()) {
            for (auto route : split(fields[3], '|')) {
                if (!valid_token(route)) fail("meta", lineno, "bad route token");
                entry.route_ids.insert(std::string(route));
            }
        }
        if (!fields[4].empty()) {
            if (!valid_token(fields[4])) fail("meta", lineno, "bad zone token");
            entry.zone_id = std::string(fields[4]);
        }

        if (!meta.emplace(entry.location_id, std::move(entry)).second)
            fail("meta", lineno, "duplicate location id '" + std::string(fields[0]) + "'");
    }
    return meta;
}

std::map<std::string, std::int64_t> parse_case_counts(std::istream& source) {
    expect_header(source, "cases", kCaseHeader);
    std::map<std::string, std::int64_t> cases;
    std::string line;
    std::size_t lineno = 1;
    while (next_line(source, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 2)
            fail("cases", lineno, "expected 2 fields, got " + std::to_string(fields.size()));
        if (!valid_token(fields[0])) fail("cases", lineno, "bad zone token");
        std::int64_t n = parse_int(fields[1], "cases", lineno, "case count");
        if (n < 0) fail("cases", lineno, "case count must be non-negative");
        if (!cases.emplace(std::string(fields[0]), n).second)
            fail("cases", lineno, "duplicate zone '" + std::string(fields[0]) + "'");
    }
    return cases;
}

MobilityDataset builtin_synthetic() {
    struct Row {
        const char* location;
        std::initializer_list<int> visitors;
    };
    static const Row rows[] = {
        {"A", {1, 2, 3, 4, 5, 6, 7, 10, 11, 12, 14, 15, 16, 17, 20}},
        {"B", {1, 2, 3, 4, 6, 7, 8, 11, 13, 15, 19}},
        {"C", {1, 2, 5, 9, 11, 12, 13, 14, 16, 17, 18, 19, 20}},
    };
    MobilityDataset dataset;
    for (const Row& row : rows)
        for (int person : row.visitors)
            dataset.visits.push_back({std::to_string(person), row.location, 0});
    return dataset;
}

MobilityDataset generate_random(std::size_t n_people, std::size_t n_locations,
                                std::size_t n_visits, std::size_t n_timesteps,
                                std::uint64_t seed) {
    if (n_people == 0 || n_locations == 0 || n_visits == 0 || n_timesteps == 0)
        throw UsageError("generate_random: all counts must be positive");
    rng::SplitMix64 gen(seed);
    MobilityDataset dataset;
    dataset.visits.reserve(n_visits);
    for (std::size_t i = 0; i < n_visits; ++i) {
        std::uint64_t person = gen.below(n_people);
        std::uint64_t location = gen.below(n_locations);
        std::uint64_t t = gen.below(n_timesteps);
        dataset.visits.push_back({"p" + std::to_string(person), "l" + std::to_string(location),
                                  static_cast<std::int64_t>(t)});
    }
    return dataset;
}

void write_visits_csv(std::ostream& out, const MobilityDataset& dataset) {
    out << kVisitHeader << "\n";
    for (const VisitRecord& v : dataset.visits)
        out << v.location_id << ',' << v.person_id << ',' << v.time << "\n";
}

std::int64_t step_index(std::int64_t epoch_seconds, std::int64_t origin_epoch_seconds,
                        std::int64_t window_seconds) {
    if (window_seconds <= 0) throw UsageError("step window must be positive");
    if (epoch_seconds < origin_epoch_seconds)
        throw UsageError("timestamp precedes the step origin");
    return (epoch_seconds - origin_epoch_seconds) / window_seconds;
}

}  // namespace mobrisk
