#pragma once

// Finite annotated interpretations, concept extensions, axiom satisfaction
// and matches of conjunctive queries with provenance variables.

#include "elprov/ontology.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

namespace elprov {

using ElementId = std::size_t;

// Named elements stand for individuals; auxiliary ones are written d_R^m.
struct DomainElement {
    enum class Kind { Named, Aux };
    Kind kind = Kind::Named;
    std::string name;  // Named: individual; Aux: role R
    Monomial mon;      // Aux only

    bool is_aux() const { return kind == Kind::Aux; }
    std::string str() const;
    auto operator<=>(const DomainElement&) const = default;
};

using ConceptPair = std::pair<ElementId, Monomial>;
using RoleTriple = std::tuple<ElementId, ElementId, Monomial>;

// Top is Delta x {1}; Top membership is never stored.
class Interpretation {
public:
    ElementId named(const Individual& a);                    // get or create
    ElementId aux(const RoleName& r, const Monomial& m);     // get or create
    std::optional<ElementId> find_named(const Individual& a) const;
    std::optional<ElementId> find_aux(const RoleName& r, const Monomial& m) const;

    bool add_concept(const ConceptName& a, ElementId d, const Monomial& m);
    bool add_role(const RoleName& r, ElementId d, ElementId e, const Monomial& m);

    const std::vector<DomainElement>& elements() const { return elements_; }
    const DomainElement& element(ElementId i) const { return elements_.at(i); }
    std::set<ConceptPair> concept_extension(const ConceptName& a) const;  // Top handled
    const std::set<RoleTriple>& role_extension(const RoleName& r) const;
    const std::map<ConceptName, std::set<ConceptPair>>& concepts() const { return concepts_; }
    const std::map<RoleName, std::set<RoleTriple>>& roles() const { return roles_; }

    std::size_t size() const { return elements_.size(); }

    // Stable output: elements listed in creation order, extensions sorted by
    // element string.
    nlohmann::json to_json() const;

private:
    std::vector<DomainElement> elements_;
    std::map<DomainElement, ElementId> element_ids_;
    std::map<ConceptName, std::set<ConceptPair>> concepts_;
    std::map<RoleName, std::set<RoleTriple>> roles_;
};

// C^I over stored pairs; some(R) is some(R, Top).
std::set<ConceptPair> extend_concept(const Interpretation& I, const Concept& c);
std::set<ConceptPair> extend_range(const Interpretation& I, const RoleName& r);

bool satisfies(const Interpretation& I, const AnnotatedAxiom& a);
bool is_model(const Interpretation& I, const Ontology& o);

// ------------------------------------------------------------------ queries

struct Term {
    enum class Kind { Variable, Individual };
    Kind kind = Kind::Variable;
    std::string name;

    bool is_var() const { return kind == Kind::Variable; }
    std::string str() const { return is_var() ? "?" + name : name; }
    auto operator<=>(const Term&) const = default;
};

// A(t1, t) or R(t1, t2, t); t is always a variable used nowhere else.
struct QueryAtom {
    std::string predicate;
    bool is_role = false;
    Term t1;
    Term t2;  // roles only
    std::string prov;

    std::string str() const;
    auto operator<=>(const QueryAtom&) const = default;
};

struct Query {
    std::vector<QueryAtom> atoms;
    std::set<Term> object_terms() const;
    std::string str() const;
};

class QueryParseError : public std::runtime_error {
public:
    QueryParseError(int line, int column, const std::string& msg);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

// Atoms joined by '&' (newlines allowed, '#' comments): "R(?x, ?y, ?t) & A(?y, ?u)".
Query parse_query(std::string_view text);

// Constraints on matches beyond plain homomorphism.
struct SideConditions {
    std::set<std::string> not_aux;  // object variables that must map to named elements
    // If `rep` maps to an auxiliary element, all of `same` map to one element.
    struct Equal {
        Term rep;
        std::vector<Term> same;
    };
    std::vector<Equal> equalities;
};

struct Match {
    std::map<Term, ElementId> objects;
    std::map<std::string, Monomial> prov;
    auto operator<=>(const Match&) const = default;

    Monomial product() const;
};

class UnknownIndividual : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// All matches in canonical order; throws UnknownIndividual for query
// individuals without a named element.
std::vector<Match> enumerate_matches(const Interpretation& I, const Query& q, const SideConditions* side = nullptr);
Polynomial query_provenance(const Interpretation& I, const Query& q, const SideConditions* side = nullptr);

}  // namespace elprov
