#pragma once

// Annotated ELHr ontologies: syntax tree, text format, normal form.

#include "elprov/provenance.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace elprov {

using ConceptName = std::string;
using RoleName = std::string;
using Individual = std::string;

inline constexpr std::string_view kTop = "Top";

// C ::= Top | A | C and C | some R.C ; `some R` without filler is the
// restricted right-hand-side form (semantically some R.Top).
struct Concept {
    enum class Kind { Top, Atomic, And, Exists, ExistsTop };

    Kind kind = Kind::Top;
    std::string name;          // concept name (Atomic) or role (Exists, ExistsTop)
    std::vector<Concept> args; // And: 2 operands, Exists: 1 filler

    static Concept top() { return {}; }
    static Concept atomic(ConceptName a) { return {Kind::Atomic, std::move(a), {}}; }
    static Concept conj(Concept c, Concept d) { return {Kind::And, {}, {std::move(c), std::move(d)}}; }
    static Concept some(RoleName r, Concept c) { return {Kind::Exists, std::move(r), {std::move(c)}}; }
    static Concept some(RoleName r) { return {Kind::ExistsTop, std::move(r), {}}; }

    bool is_top() const { return kind == Kind::Top; }
    bool is_atomic() const { return kind == Kind::Atomic; }
    // Concept name or Top.
    bool is_basic() const { return kind == Kind::Top || kind == Kind::Atomic; }
    const Concept& lhs() const { return args.at(0); }
    const Concept& rhs() const { return args.at(1); }
    const Concept& filler() const { return args.at(0); }

    std::string str() const;

    friend bool operator==(const Concept& a, const Concept& b);
    friend std::strong_ordering operator<=>(const Concept& a, const Concept& b);
};

struct ConceptInclusion {
    Concept lhs;
    Concept rhs;
    auto operator<=>(const ConceptInclusion&) const = default;
    bool operator==(const ConceptInclusion&) const = default;
};

struct RoleInclusion {
    RoleName sub;
    RoleName sup;
    auto operator<=>(const RoleInclusion&) const = default;
    bool operator==(const RoleInclusion&) const = default;
};

// ran(role) <= concept
struct RangeRestriction {
    RoleName role;
    ConceptName name;
    auto operator<=>(const RangeRestriction&) const = default;
    bool operator==(const RangeRestriction&) const = default;
};

struct ConceptAssertion {
    ConceptName name;  // may be Top in derived sets
    Individual individual;
    auto operator<=>(const ConceptAssertion&) const = default;
    bool operator==(const ConceptAssertion&) const = default;
};

struct RoleAssertion {
    RoleName role;
    Individual subject;
    Individual object;
    auto operator<=>(const RoleAssertion&) const = default;
    bool operator==(const RoleAssertion&) const = default;
};

using Axiom = std::variant<ConceptInclusion, RoleInclusion, RangeRestriction, ConceptAssertion, RoleAssertion>;

std::string to_string(const Axiom& a);

struct AnnotatedAxiom {
    Axiom axiom;
    Monomial annotation;
    auto operator<=>(const AnnotatedAxiom&) const = default;
    bool operator==(const AnnotatedAxiom&) const = default;
};

std::string to_string(const AnnotatedAxiom& a);

struct Signature {
    std::set<ConceptName> concepts;  // without Top
    std::set<RoleName> roles;
    std::set<Individual> individuals;
    std::set<Variable> variables;
    bool mentions_top = false;
};

class Ontology {
public:
    Ontology() = default;
    Ontology(std::initializer_list<AnnotatedAxiom> axioms);

    void add(AnnotatedAxiom a) { axioms_.insert(std::move(a)); }
    void add(Axiom a, Monomial m) { axioms_.insert({std::move(a), std::move(m)}); }
    void add_all(const Ontology& o) { axioms_.insert(o.axioms_.begin(), o.axioms_.end()); }
    bool contains(const AnnotatedAxiom& a) const { return axioms_.count(a) > 0; }

    const std::set<AnnotatedAxiom>& axioms() const { return axioms_; }
    std::size_t size() const { return axioms_.size(); }
    bool empty() const { return axioms_.empty(); }

    Signature signature() const;

    bool operator==(const Ontology&) const = default;

private:
    std::set<AnnotatedAxiom> axioms_;
};

// Signature helpers.
void collect(const Concept& c, Signature& sig);
void collect(const Axiom& a, Signature& sig);

class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, NamespaceCollision, AnnotationNotVariable, RestrictedSyntax, ReservedName };
    ParseError(Kind kind, int line, int column, const std::string& msg);
    Kind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& detail() const { return detail_; }

private:
    Kind kind_;
    int line_;
    int column_;
    std::string detail_;
};

struct ParseOptions {
    // Accept monomial annotations and Top in assertion / rhs positions, as
    // found in dumps of derived sets.
    bool derived = false;
    // Rewrite general right-hand sides (conjunctions, qualified existentials)
    // into the restricted syntax instead of rejecting them.
    bool translate_general = false;
    // Allow names with the reserved "__" prefix (internal round-trips).
    bool allow_reserved = false;
};

Ontology parse_ontology(std::string_view text, const ParseOptions& opts = {});
// A single axiom without annotation, e.g. "ca Mayor(brugnaro)".
Axiom parse_axiom(std::string_view text, const ParseOptions& opts = {});
Concept parse_concept(std::string_view text, const ParseOptions& opts = {});

// Query target of the form "iq CONCEPT(individual)".
struct InstanceQueryTarget {
    Concept query;
    Individual individual;
};
std::variant<Axiom, InstanceQueryTarget> parse_target(std::string_view text, const ParseOptions& opts = {});

// One axiom per line, in set order; parse(print(O)) == O.
std::string print_ontology(const Ontology& o);

// Restricted right-hand side: concept name or unqualified existential.
bool is_restricted_rhs(const Concept& c);

// Right-hand sides built from names, conjunction and qualified existentials
// are rewritten: conjunctions split, and C <= some R.D becomes
// C <= some S, S <= R, ran(S) <= D with S fresh (same annotation on all three).
Ontology translate_general_gci(const Concept& lhs, const Concept& rhs, const Monomial& m, std::set<std::string>& used_names);

bool is_normal_form(const AnnotatedAxiom& a);
bool is_normalized(const Ontology& o);

// Normal form: A <= B, A and A' <= B, A <= some R, some R.A <= B, plus role
// inclusions, range restrictions and assertions. Fresh concept names are
// "__nfN", chosen to avoid every name already in o.
Ontology normalize(const Ontology& o);

// Generates names "<prefix>N" not present in a set of used names.
class FreshNames {
public:
    explicit FreshNames(std::set<std::string> used) : used_(std::move(used)) {}
    std::string next(const std::string& prefix);

private:
    std::set<std::string> used_;
    std::map<std::string, unsigned> counters_;
};

std::set<std::string> all_names(const Ontology& o);

}  // namespace elprov
