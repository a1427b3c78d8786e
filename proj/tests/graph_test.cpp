#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "fixtures.hpp"
#include "mobrisk/graph.hpp"
#include "mobrisk/ingest.hpp"
#include "mobrisk/rng.hpp"
#include "oracle.hpp"

using namespace mobrisk;

TEST_CASE("ten-people graph structure") {
    MobilityDataset ds = fixtures::ten_people_dataset();
    BipartiteGraph g = build_graph(ds);

    CHECK(g.person_count() == 10);
    CHECK(g.location_count() == 4);
    CHECK(g.edge_count() == oracle::distinct_edge_count(ds));
    CHECK(g.edge_count() == 19);

    CHECK(g.degree({NodeClass::Location, "A"}) == 5);
    CHECK(g.degree({NodeClass::Location, "B"}) == 7);
    CHECK(g.degree({NodeClass::Location, "C"}) == 4);
    CHECK(g.degree({NodeClass::Location, "D"}) == 3);
    CHECK(g.degree({NodeClass::Person, "1"}) == 4);
    CHECK(g.degree({NodeClass::Person, "2"}) == 4);

    auto nb = g.neighbors({NodeClass::Person, "3"});
    REQUIRE(nb.size() == 1);
    CHECK(nb[0].first == NodeRef{NodeClass::Location, "B"});
    CHECK(nb[0].second == 1);
}

TEST_CASE("builtin graph structure") {
    BipartiteGraph g = build_graph(builtin_synthetic());
    CHECK(g.person_count() == 20);
    CHECK(g.location_count() == 3);
    CHECK(g.edge_count() == 39);

    CHECK(g.degree({NodeClass::Person, "18"}) == 1);
    CHECK(g.degree({NodeClass::Location, "A"}) == 15);

    auto nb = g.neighbors({NodeClass::Person, "18"});
    REQUIRE(nb.size() == 1);
    CHECK(nb[0].first == NodeRef{NodeClass::Location, "C"});
    CHECK(nb[0].second == 1);
}

TEST_CASE("repeated visits collapse into weights") {
    MobilityDataset ds;
    ds.visits = {{"p", "l", 0}, {"p", "l", 1}};

    BipartiteGraph counted = build_graph(ds, BipartiteGraph::Weighting::VisitCount);
    CHECK(counted.edge_count() == 1);
    CHECK(counted.neighbors({NodeClass::Person, "p"})[0].second == 2);

    BipartiteGraph binary = build_graph(ds, BipartiteGraph::Weighting::Binary);
    CHECK(binary.edge_count() == 1);
    CHECK(binary.neighbors({NodeClass::Person, "p"})[0].second == 1);
}

TEST_CASE("unknown nodes and empty datasets are rejected") {
    CHECK_THROWS_AS(build_graph(MobilityDataset{}), DataError);
    BipartiteGraph g = build_graph(builtin_synthetic());
    CHECK_THROWS_AS(g.degree({NodeClass::Person, "nope"}), DataError);
    CHECK_THROWS_AS(g.neighbors({NodeClass::Location, "18"}), DataError);
    // person token "18" exists, the location token does not
    CHECK(g.find_person("18").has_value());
    CHECK_FALSE(g.find_location("18").has_value());
}

TEST_CASE("graph invariants hold on random datasets") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        MobilityDataset ds = generate_random(6, 4, 30, 3, seed);
        for (auto mode : {BipartiteGraph::Weighting::Binary,
                          BipartiteGraph::Weighting::VisitCount}) {
            BipartiteGraph g = build_graph(ds, mode);

            // bipartiteness: every arc crosses sides
            for (std::size_t i = 0; i < g.node_count(); ++i)
                for (const auto& arc : g.arcs(i)) CHECK(g.class_of(arc.to) != g.class_of(i));

            // handshake identity
            std::size_t person_degrees = 0, location_degrees = 0;
            for (std::size_t p = 0; p < g.person_count(); ++p)
                person_degrees += g.arcs(p).size();
            for (std::size_t l = g.person_count(); l < g.node_count(); ++l)
                location_degrees += g.arcs(l).size();
            CHECK(person_degrees == g.edge_count());
            CHECK(location_degrees == g.edge_count());

            // weights: VisitCount mass equals the visit count
            if (mode == BipartiteGraph::Weighting::VisitCount) {
                std::int64_t mass = 0;
                for (std::size_t p = 0; p < g.person_count(); ++p)
                    for (const auto& arc : g.arcs(p)) mass += arc.weight;
                CHECK(mass == static_cast<std::int64_t>(ds.visits.size()));
            }
            for (std::size_t i = 0; i < g.node_count(); ++i)
                for (const auto& arc : g.arcs(i)) CHECK(arc.weight >= 1);
        }
    }
}

TEST_CASE("build_graph is order independent") {
    MobilityDataset ds = generate_random(6, 4, 30, 3, 11);
    MobilityDataset shuffled = ds;
    rng::SplitMix64 gen(99);
    rng::shuffle(shuffled.visits, gen);

    BipartiteGraph a = build_graph(ds, BipartiteGraph::Weighting::VisitCount);
    BipartiteGraph b = build_graph(shuffled, BipartiteGraph::Weighting::VisitCount);
    CHECK(a.persons() == b.persons());
    CHECK(a.locations() == b.locations());
    REQUIRE(a.node_count() == b.node_count());
    for (std::size_t i = 0; i < a.node_count(); ++i) {
        auto arcs_a = a.arcs(i), arcs_b = b.arcs(i);
        REQUIRE(arcs_a.size() == arcs_b.size());
        for (std::size_t k = 0; k < arcs_a.size(); ++k) {
            CHECK(arcs_a[k].to == arcs_b[k].to);
            CHECK(arcs_a[k].weight == arcs_b[k].weight);
        }
    }
}

TEST_CASE("edge dump lists each edge once, person side first") {
    BipartiteGraph g = build_graph(builtin_synthetic());
    std::ostringstream out;
    write_edges_csv(out, g);
    std::string text = out.str();
    std::size_t lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == g.edge_count() + 1);
    CHECK(text.starts_with("class_u,u,class_v,v,weight\nperson,"));
}
