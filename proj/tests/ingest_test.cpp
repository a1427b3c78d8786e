#include <doctest.h>

#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "mobrisk/ingest.hpp"

using namespace mobrisk;

namespace {

MobilityDataset parse_str(const std::string& text) {
    std::istringstream in(text);
    return parse_visits(in);
}

}  // namespace

TEST_CASE("parse_visits keeps records in file order without dedup") {
    MobilityDataset ds = fixtures::ten_people_dataset();
    CHECK(ds.visits.size() == 19);

    std::set<std::string> persons, locations;
    for (const auto& v : ds.visits) {
        persons.insert(v.person_id);
        locations.insert(v.location_id);
    }
    CHECK(persons.size() == 10);
    CHECK(locations.size() == 4);

    CHECK(ds.visits.front() == VisitRecord{"1", "C", 1});
    CHECK(ds.visits.back() == VisitRecord{"10", "A", 4});
}

TEST_CASE("parse_visits accepts an empty body") {
    CHECK(parse_str("location,user,time\n").visits.empty());
    CHECK(parse_str("location,user,time").visits.empty());  // no trailing newline
}

TEST_CASE("parse_visits accepts CRLF endings") {
    MobilityDataset ds = parse_str("location,user,time\r\nA,1,0\r\n");
    REQUIRE(ds.visits.size() == 1);
    CHECK(ds.visits[0] == VisitRecord{"1", "A", 0});
}

TEST_CASE("parse_visits rejects malformed input with line numbers") {
    CHECK_THROWS_WITH_AS(parse_str("location,user,time\nC,1,t1\n"),
                         doctest::Contains("visits:2"), DataError);
    CHECK_THROWS_WITH_AS(parse_str("location,user,time\nA,1\n"), doctest::Contains("visits:2"),
                         DataError);
    CHECK_THROWS_WITH_AS(parse_str("location,user,time\nA,1,0\n,2,0\n"),
                         doctest::Contains("visits:3"), DataError);
    CHECK_THROWS_WITH_AS(parse_str("location,user,time\nA,1,-3\n"),
                         doctest::Contains("non-negative"), DataError);
    CHECK_THROWS_WITH_AS(parse_str("loc,user,time\nA,1,0\n"), doctest::Contains("header"),
                         DataError);
    CHECK_THROWS_AS(parse_str(""), DataError);
}

TEST_CASE("visit CSV round-trips") {
    auto check_roundtrip = [](const MobilityDataset& ds) {
        std::ostringstream out;
        write_visits_csv(out, ds);
        std::istringstream in(out.str());
        MobilityDataset again = parse_visits(in);
        CHECK(again.visits == ds.visits);
    };
    check_roundtrip(fixtures::ten_people_dataset());
    check_roundtrip(builtin_synthetic());
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL})
        check_roundtrip(generate_random(7, 4, 50, 3, seed));
}

TEST_CASE("parse_location_meta field handling") {
    std::istringstream in(
        "location,x,y,routes,zone\n"
        "A,0,0,R1,Z1\n"
        "B,,,R1|R2,\n");
    LocationMetaMap meta = parse_location_meta(in);
    REQUIRE(meta.size() == 2);

    const LocationMeta& a = meta.at("A");
    REQUIRE(a.coord.has_value());
    CHECK(a.coord->x == 0.0);
    CHECK(a.coord->y == 0.0);
    CHECK(a.route_ids == std::set<std::string>{"R1"});
    CHECK(a.zone_id == "Z1");

    const LocationMeta& b = meta.at("B");
    CHECK_FALSE(b.coord.has_value());
    CHECK(b.route_ids == std::set<std::string>{"R1", "R2"});
    CHECK_FALSE(b.zone_id.has_value());
}

TEST_CASE("parse_location_meta rejects duplicates and bad coordinates") {
    std::istringstream dup(
        "location,x,y,routes,zone\n"
        "A,0,0,,\n"
        "A,1,1,,\n");
    CHECK_THROWS_WITH_AS(parse_location_meta(dup), doctest::Contains("duplicate"), DataError);

    std::istringstream bad(
        "location,x,y,routes,zone\n"
        "A,zero,0,,\n");
    CHECK_THROWS_AS(parse_location_meta(bad), DataError);

    std::istringstream half(
        "location,x,y,routes,zone\n"
        "A,1,,,\n");
    CHECK_THROWS_WITH_AS(parse_location_meta(half), doctest::Contains("together"), DataError);
}

TEST_CASE("parse_case_counts") {
    std::istringstream in(
        "zone,cases\n"
        "Z1,30\n"
        "Z2,70\n");
    auto cases = parse_case_counts(in);
    CHECK(cases.at("Z1") == 30);
    CHECK(cases.at("Z2") == 70);

    std::istringstream dup(
        "zone,cases\n"
        "Z1,1\n"
        "Z1,2\n");
    CHECK_THROWS_AS(parse_case_counts(dup), DataError);
}

TEST_CASE("builtin_synthetic matches the published visit rows") {
    MobilityDataset ds = builtin_synthetic();
    CHECK(ds.visits.size() == 39);

    std::set<std::string> persons;
    std::map<std::string, std::set<std::string>> visitors;
    for (const auto& v : ds.visits) {
        persons.insert(v.person_id);
        visitors[v.location_id].insert(v.person_id);
        CHECK(v.time == 0);
    }
    CHECK(persons.size() == 20);
    CHECK(visitors.size() == 3);
    CHECK(visitors.at("A") == fixtures::visitors_of_a());
    CHECK(visitors.at("B") ==
          std::set<std::string>{"1", "2", "3", "4", "6", "7", "8", "11", "13", "15", "19"});
    std::set<std::string> c = fixtures::c_covisitors();
    c.insert("18");
    CHECK(visitors.at("C") == c);

    // person 18 appears at location C only
    for (const auto& v : ds.visits)
        if (v.person_id == "18") CHECK(v.location_id == "C");
}

TEST_CASE("generate_random is a pure function of its arguments") {
    MobilityDataset one = generate_random(1, 1, 1, 1, 7);
    REQUIRE(one.visits.size() == 1);
    CHECK(one.visits[0] == VisitRecord{"p0", "l0", 0});

    MobilityDataset a = generate_random(5, 3, 40, 2, 1);
    MobilityDataset b = generate_random(5, 3, 40, 2, 1);
    CHECK(a.visits == b.visits);
    CHECK(a.visits.size() == 40);
    for (const auto& v : a.visits) {
        CHECK(v.person_id.starts_with("p"));
        CHECK(std::stoi(v.person_id.substr(1)) < 5);
        CHECK(std::stoi(v.location_id.substr(1)) < 3);
        CHECK(v.time >= 0);
        CHECK(v.time < 2);
    }

    MobilityDataset c = generate_random(5, 3, 40, 2, 2);
    CHECK(a.visits != c.visits);

    CHECK_THROWS_AS(generate_random(0, 1, 1, 1, 0), UsageError);
}

TEST_CASE("step_index buckets epoch timestamps") {
    const std::int64_t origin = 1600000000;
    CHECK(step_index(origin, origin, 3600) == 0);
    CHECK(step_index(origin + 3599, origin, 3600) == 0);
    CHECK(step_index(origin + 3600, origin, 3600) == 1);
    CHECK(step_index(origin + 86400, origin, 3600) == 24);
    CHECK_THROWS_AS(step_index(origin - 1, origin, 3600), UsageError);
    CHECK_THROWS_AS(step_index(origin, origin, 0), UsageError);
}
