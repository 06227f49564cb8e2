#include <doctest.h>

#include <string>

#include "whyprov/closure.hpp"
#include "whyprov/errors.hpp"

using namespace whyprov;

namespace {

const char* const kPathProgram =
    "A(x) :- S(x).\n"
    "A(x) :- A(y), A(z), T(y, z, x).\n";

const char* const kFactsSmall =
    "S(a)\n"
    "T(a,a,b)\n"
    "T(a,a,c)\n"
    "T(a,a,d)\n"
    "T(b,c,a)\n";

Fact f1(const char* pred, const char* a) { return Fact{intern(pred), {intern(a)}}; }

struct Setup {
    Program p;
    Database db;
    FixpointResult fix;
    Hypergraph gri;

    Setup()
        : p(parse_program(kPathProgram)),
          db(parse_database(kFactsSmall, p)),
          fix(fixpoint(p, db)),
          gri(build_gri(p, db, fix)) {}
};

}  // namespace

TEST_CASE("rule-instance hypergraph of the running example") {
    Setup s;
    // 5 database facts + 4 derived facts.
    CHECK(s.gri.nodes().size() == 9);
    // One edge per distinct instantiation: S(a) base plus one per T-fact.
    CHECK(s.gri.hyperedges().size() == 5);
    CHECK(s.gri.export_text() ==
          "A(a) <- A(b), A(c), T(b,c,a)\n"
          "A(a) <- S(a)\n"
          "A(b) <- A(a), T(a,a,b)\n"
          "A(c) <- A(a), T(a,a,c)\n"
          "A(d) <- A(a), T(a,a,d)\n");
}

TEST_CASE("hyperedge bodies are canonical sets") {
    Setup s;
    // A(b) <- A(a), A(a), T(a,a,b) collapses the duplicate body member.
    for (std::size_t id : s.gri.edges_with_head(f1("A", "b"))) {
        const Hyperedge& e = s.gri.hyperedges()[id];
        CHECK(e.body.size() == 2);
    }
}

TEST_CASE("downward closure keeps the goal-reachable subgraph") {
    Setup s;
    DownwardClosure dc = downward_closure(s.gri, f1("A", "d"));
    // Everything is reachable from A(d) here through the back edge to A(a).
    CHECK(dc.graph.nodes().size() == 9);
    CHECK(dc.graph.hyperedges().size() == 5);
    CHECK(dc.goal == f1("A", "d"));
    CHECK(dc.db_leaves(s.db).size() == 5);
}

TEST_CASE("closure of a shallower goal drops unrelated facts") {
    Setup s;
    DownwardClosure dc = downward_closure(s.gri, f1("A", "b"));
    // T(a,a,d) and A(d) are not below A(b).
    CHECK(!dc.graph.has_node(f1("A", "d")));
    CHECK(!dc.graph.has_node(Fact{intern("T"), {intern("a"), intern("a"), intern("d")}}));
    CHECK(dc.graph.has_node(f1("S", "a")));
}

TEST_CASE("underivable goals are rejected") {
    Setup s;
    CHECK_THROWS_AS(downward_closure(s.gri, f1("A", "zzz")), GoalNotDerivable);
}

TEST_CASE("extensional goal closure is a single node") {
    Setup s;
    DownwardClosure dc = downward_closure(s.gri, f1("S", "a"));
    CHECK(dc.graph.nodes().size() == 1);
    CHECK(dc.graph.hyperedges().empty());
}

TEST_CASE("duplicate hyperedges reconcile to the smallest trigger") {
    Hypergraph g;
    Fact head = f1("A", "x");
    Fact leaf = f1("S", "x");
    CHECK(g.add_hyperedge(head, {leaf}, 3, {{intern("v"), intern("x")}}));
    // Same edge from an earlier rule: the recorded trigger must move down.
    CHECK(!g.add_hyperedge(head, {leaf}, 1, {{intern("u"), intern("x")}}));
    REQUIRE(g.edges_with_head(head).size() == 1);
    CHECK(g.edge_rule(g.edges_with_head(head)[0]) == 1);
}
