#include "elprov/interpretation.hpp"

#include "samples.hpp"

#include <doctest.h>

using namespace elprov;
using samples::mon;

namespace {

// The hand-built model of the mayor ontology.
Interpretation mayor_model()
{
    Interpretation I;
    auto venice = I.named("Venice");
    auto orsoni = I.named("Orsoni");
    auto brugnaro = I.named("Brugnaro");
    I.add_role("mayor", venice, orsoni, mon("v1"));
    I.add_role("predecessor", brugnaro, orsoni, mon("v2"));
    I.add_concept("Mayor", orsoni, mon("v1*v4"));
    I.add_concept("Mayor", brugnaro, mon("v1*v2*v3*v4"));
    return I;
}

}  // namespace

TEST_CASE("the hand-built mayor interpretation is a model")
{
    auto I = mayor_model();
    auto o = samples::ontology("mayor.elp");
    for (const auto& a : o.axioms()) CHECK(satisfies(I, a));
    CHECK(is_model(I, o));

    I = Interpretation();
    I.named("Venice");
    CHECK_FALSE(is_model(I, o));
}

TEST_CASE("concept extensions")
{
    auto I = mayor_model();
    auto orsoni = *I.find_named("Orsoni");
    auto brugnaro = *I.find_named("Brugnaro");
    auto ext = extend_concept(I, parse_concept("some(predecessor, Mayor)"));
    CHECK(ext == std::set<ConceptPair>{{brugnaro, mon("v1*v2*v4")}});
    CHECK(extend_concept(I, parse_concept("and(Mayor, Mayor)")) ==
          std::set<ConceptPair>{{orsoni, mon("v1*v4")}, {brugnaro, mon("v1*v2*v3*v4")}, {orsoni, mon("v1*v4")},
                                {brugnaro, mon("v1*v2*v3*v4")}});
    CHECK(extend_concept(I, parse_concept("Top")).size() == 3);
    CHECK(extend_range(I, "mayor") == std::set<ConceptPair>{{orsoni, mon("v1")}});
    CHECK(extend_concept(I, parse_concept("and(Mayor, some(predecessor))")) ==
          extend_concept(I, parse_concept("and(some(predecessor), Mayor)")));
}

TEST_CASE("C <= C holds with annotation 1")
{
    auto I = mayor_model();
    for (const auto* c : {"Mayor", "some(mayor, Mayor)", "and(Mayor, some(predecessor))", "Top"}) {
        auto concept_expr = parse_concept(c);
        CHECK(satisfies(I, {ConceptInclusion{concept_expr, concept_expr}, Monomial::one()}));
    }
}

TEST_CASE("query syntax")
{
    auto q = parse_query("R(?x, ?y, ?t) & A(?y, ?u)  # comment\n& B(a, ?w)");
    REQUIRE(q.atoms.size() == 3);
    CHECK(q.atoms[0].is_role);
    CHECK(q.atoms[2].t1 == Term{Term::Kind::Individual, "a"});
    CHECK(q.str() == "R(?x, ?y, ?t) & A(?y, ?u) & B(a, ?w)");
    CHECK_THROWS_AS(parse_query("R(?x, ?y, ?t) & A(?y, ?t)"), QueryParseError);  // reused provenance variable
    CHECK_THROWS_AS(parse_query("R(?x, ?y, a)"), QueryParseError);              // provenance term not a variable
    CHECK_THROWS_AS(parse_query("R(?x, ?t) & R(?x, ?y, ?u)"), QueryParseError); // arity clash
    CHECK_THROWS_AS(parse_query(""), QueryParseError);
    try {
        parse_query("A(?x, ?t) &\nB(?x ?u)");
        FAIL("expected error");
    } catch (const QueryParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 6);
    }
}

TEST_CASE("matches and provenance polynomials")
{
    Interpretation I;
    auto a = I.named("a");
    auto b = I.named("b");
    I.add_role("R", a, b, mon("v1"));
    I.add_role("R", b, a, mon("v2"));
    auto q = samples::query("swap.cq");
    auto matches = enumerate_matches(I, q);
    CHECK(matches.size() == 2);
    CHECK(std::is_sorted(matches.begin(), matches.end()));
    CHECK(std::adjacent_find(matches.begin(), matches.end()) == matches.end());
    CHECK(query_provenance(I, q) == samples::poly("2 v1*v2"));

    CHECK(query_provenance(I, parse_query("A(a, ?t)")).is_zero());
    CHECK_THROWS_AS(enumerate_matches(I, parse_query("A(zz, ?t)")), UnknownIndividual);
}

TEST_CASE("single-atom provenance sums the extension")
{
    Interpretation I;
    auto a = I.named("a");
    I.add_concept("A", a, mon("v1"));
    I.add_concept("A", a, mon("v2*v3"));
    I.add_concept("A", I.named("b"), mon("v1"));
    CHECK(query_provenance(I, parse_query("A(a, ?t)")) == samples::poly("v1 + v2*v3"));
    CHECK(query_provenance(I, parse_query("A(?x, ?t)")) == samples::poly("2 v1 + v2*v3"));
}

TEST_CASE("side conditions restrict matches")
{
    Interpretation I;
    auto a = I.named("a");
    auto d = I.aux("R", mon("v"));
    I.add_role("R", a, d, mon("v"));
    I.add_role("R", d, d, mon("v"));
    auto q = parse_query("R(?x, ?x, ?t)");
    CHECK(enumerate_matches(I, q).size() == 1);
    SideConditions side;
    side.not_aux.insert("x");
    CHECK(enumerate_matches(I, q, &side).empty());

    auto fork = parse_query("R(?x, ?y, ?t) & R(?z, ?y, ?u)");
    CHECK(enumerate_matches(I, fork).size() == 4);
    SideConditions eq;
    eq.equalities.push_back({Term{Term::Kind::Variable, "y"}, {Term{Term::Kind::Variable, "x"}, Term{Term::Kind::Variable, "z"}}});
    CHECK(enumerate_matches(I, fork, &eq).size() == 2);
}

TEST_CASE("json dump")
{
    Interpretation I;
    auto a = I.named("a");
    auto d = I.aux("R", mon("u*v"));
    I.add_role("R", a, d, mon("u*v"));
    I.add_concept("A", d, mon("u*v*w"));
    auto j = I.to_json();
    CHECK(j["elements"].size() == 2);
    CHECK(j["elements"][1]["kind"] == "aux");
    CHECK(j["concepts"]["A"][0][0] == "d_R^{u*v}");
    CHECK(j["roles"]["R"][0][2] == "u*v");
}
