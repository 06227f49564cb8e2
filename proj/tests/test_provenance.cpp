#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "whyprov/errors.hpp"
#include "whyprov/provenance.hpp"

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

const char* const kFactsTwoSources =
    "S(a)\n"
    "S(b)\n"
    "T(a,a,c)\n"
    "T(b,b,c)\n"
    "T(c,c,d)\n";

Fact f1(const char* pred, const char* a) { return Fact{intern(pred), {intern(a)}}; }

Fact f3(const char* pred, const char* a, const char* b, const char* c) {
    return Fact{intern(pred), {intern(a), intern(b), intern(c)}};
}

struct Setup {
    Program p;
    Database db;

    explicit Setup(const char* facts) : p(parse_program(kPathProgram)), db(parse_database(facts, p)) {}

    Query query() const { return Query{p, intern("A")}; }
};

SupportFamily family_of(const EnumerationResult& r) {
    SupportFamily family;
    for (const ProvenanceMember& m : r.members) family.insert(m.facts);
    return family;
}

}  // namespace

TEST_CASE("running example: the single explanation, under both strategies") {
    Setup s(kFactsSmall);
    SupportFamily expected;
    expected.insert(make_support({f1("S", "a"), f3("T", "a", "a", "d")}));

    for (AcyclicityStrategy strategy :
         {AcyclicityStrategy::TransitiveClosure, AcyclicityStrategy::VertexElimination}) {
        EnumerateOptions opts;
        opts.strategy = strategy;
        EnumerationResult r = enumerate(s.query(), s.db, {intern("d")}, opts);
        CHECK(r.status == EnumerationStatus::Exhausted);
        CHECK(family_of(r) == expected);
    }
}

TEST_CASE("two-source instance: both explanations, no more") {
    Setup s(kFactsTwoSources);
    EnumerationResult r = enumerate(s.query(), s.db, {intern("d")});
    CHECK(r.status == EnumerationStatus::Exhausted);

    SupportFamily expected;
    expected.insert(make_support({f1("S", "a"), f3("T", "a", "a", "c"), f3("T", "c", "c", "d")}));
    expected.insert(make_support({f1("S", "b"), f3("T", "b", "b", "c"), f3("T", "c", "c", "d")}));
    CHECK(family_of(r) == expected);

    // Ordinals count up; members are pairwise distinct.
    REQUIRE(r.members.size() == 2);
    CHECK(r.members[0].ordinal == 0);
    CHECK(r.members[1].ordinal == 1);
    CHECK(r.members[0].facts != r.members[1].facts);
}

TEST_CASE("member cap stops enumeration early") {
    Setup s(kFactsTwoSources);
    EnumerateOptions opts;
    opts.max_members = 1;
    EnumerationResult r = enumerate(s.query(), s.db, {intern("d")}, opts);
    CHECK(r.status == EnumerationStatus::LimitReached);
    CHECK(r.members.size() == 1);
}

TEST_CASE("non-answers have an empty, exhausted family") {
    Setup s(kFactsSmall);
    EnumerationResult r = enumerate(s.query(), s.db, {intern("zzz")});
    CHECK(r.status == EnumerationStatus::Exhausted);
    CHECK(r.members.empty());
}

TEST_CASE("tuple arity is validated") {
    Setup s(kFactsSmall);
    CHECK_THROWS_AS(enumerate(s.query(), s.db, {intern("a"), intern("b")}), ArityMismatch);
}

TEST_CASE("decoded witnesses are valid derivations with matching leaves") {
    Setup s(kFactsTwoSources);
    EnumerateOptions opts;
    opts.decode_witnesses = true;
    EnumerationResult r = enumerate(s.query(), s.db, {intern("d")}, opts);
    REQUIRE(r.members.size() == 2);
    for (const ProvenanceMember& m : r.members) {
        REQUIRE(m.witness.has_value());
        CHECK(is_valid_compressed_dag(*m.witness, s.p, s.db));
        CHECK(m.witness->root == f1("A", "d"));
        CHECK(m.witness->support() == m.facts);
        ProofTree t = unravel(*m.witness, s.p);
        CHECK(validate_tree(t, s.p, s.db, f1("A", "d")));
        CHECK(is_unambiguous(t));
    }
}

TEST_CASE("membership checks") {
    Setup s(kFactsSmall);
    Database yes;
    yes.insert(f1("S", "a"));
    yes.insert(f3("T", "a", "a", "d"));
    CHECK(check_membership(s.query(), s.db, {intern("d")}, yes));

    // A strict superset of an explanation is not itself one.
    CHECK(!check_membership(s.query(), s.db, {intern("d")}, s.db));

    Database missing;
    missing.insert(f1("S", "a"));
    CHECK(!check_membership(s.query(), s.db, {intern("d")}, missing));

    Database exact_b;
    exact_b.insert(f1("S", "a"));
    exact_b.insert(f3("T", "a", "a", "b"));
    CHECK(check_membership(s.query(), s.db, {intern("b")}, exact_b));

    // Subset containing a fact outside the goal's closure: never a leaf set.
    Database off_closure = exact_b;
    off_closure.insert(f3("T", "a", "a", "c"));
    CHECK(!check_membership(s.query(), s.db, {intern("b")}, off_closure));

    Database foreign;
    foreign.insert(f1("S", "q"));
    CHECK_THROWS_AS(check_membership(s.query(), s.db, {intern("d")}, foreign), NotASubset);
}

TEST_CASE("membership agrees with enumeration on the two-source instance") {
    Setup s(kFactsTwoSources);
    EnumerationResult r = enumerate(s.query(), s.db, {intern("d")});
    for (const ProvenanceMember& m : r.members) {
        Database d_sub;
        for (const Fact& f : m.facts) d_sub.insert(f);
        CHECK(check_membership(s.query(), s.db, {intern("d")}, d_sub));
    }
    // The union of the two explanations uses both sources: ambiguous, so out.
    CHECK(!check_membership(s.query(), s.db, {intern("d")}, s.db));
}

TEST_CASE("external enumeration surfaces solver failures as timeouts") {
    Setup s(kFactsTwoSources);
    EnumerationResult r = enumerate_external(s.query(), s.db, {intern("d")}, "/bin/false");
    CHECK(r.status == EnumerationStatus::Timeout);
    CHECK(r.members.empty());
}

TEST_CASE("rendering is stable and sorted") {
    Setup s(kFactsSmall);
    EnumerationResult r = enumerate(s.query(), s.db, {intern("d")});
    CHECK(render_members(r.members) == "S(a); T(a,a,d)\n");
}
