#pragma once

// Saturation under the completion rules CR0-CR16 and entailment checking
// for assertions, concept/role inclusions, range restrictions and instance
// queries (the latter four by reduction to assertion entailment).

#include "elprov/ontology.hpp"

#include <array>
#include <bitset>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace elprov {

inline constexpr int kCompletionRules = 17;  // CR0 .. CR16
using RuleMask = std::bitset<kCompletionRules>;

struct Limits {
    std::size_t max_axioms = 1'000'000;
    std::chrono::milliseconds time_budget{0};  // 0: unlimited

    // Defaults overridden by ELPROV_MAX_AXIOMS / ELPROV_TIME_BUDGET_MS.
    static Limits from_env();
};

struct SaturationStats {
    std::array<std::uint64_t, kCompletionRules> rule_applications{};
    std::uint64_t updates = 0;
    std::uint64_t join_steps = 0;
    std::size_t axioms = 0;
};

class ResourceLimitExceeded : public std::runtime_error {
public:
    ResourceLimitExceeded(const std::string& what, SaturationStats stats)
        : std::runtime_error(what), stats_(stats) {}
    const SaturationStats& stats() const { return stats_; }

private:
    SaturationStats stats_;
};

struct SaturationOptions {
    std::optional<std::size_t> k;  // keep only annotations with at most k variables
    Limits limits = Limits::from_env();
    RuleMask disabled;             // rules switched off (for experiments)
    std::set<Individual> extra_individuals;  // treated as occurring in the ontology
};

struct DerivedAxiom {
    AnnotatedAxiom axiom;
    std::uint64_t derivations = 0;  // rule instances that concluded it
};

// Closure of a normalized ontology. Axioms are reported in the normal shapes
// (plus Top <= Top and Top(a)); conjunctions have their operands sorted.
class SaturatedSet {
public:
    bool contains(const Axiom& a, const Monomial& m) const;
    std::set<Monomial> annotations(const Axiom& a) const;

    const std::vector<DerivedAxiom>& axioms() const { return axioms_; }
    const SaturationStats& stats() const { return stats_; }
    Ontology to_ontology() const;

private:
    friend SaturatedSet saturate(const Ontology&, const SaturationOptions&);
    std::vector<DerivedAxiom> axioms_;
    std::map<Axiom, std::set<Monomial>> by_axiom_;
    SaturationStats stats_;
};

// Requires is_normalized(o); throws std::invalid_argument otherwise and
// ResourceLimitExceeded when a cap is hit.
SaturatedSet saturate(const Ontology& o, const SaturationOptions& opts = {});

// Canonical spelling used for lookups (sorted conjunctions, some(R, Top) on
// left-hand sides).
Axiom canonical(const Axiom& a);

struct EntailmentOptions {
    Limits limits = Limits::from_env();
    RuleMask disabled;
};

struct Entailment {
    bool entailed = false;
    std::vector<std::string> warnings;
    explicit operator bool() const { return entailed; }
};

// Assertion entailment over the ontology's normalization, saturating only
// up to the degree of m. Names outside the signature give "not entailed"
// with a warning.
Entailment entails_assertion(const Ontology& o, const Axiom& assertion, const Monomial& m,
                             const EntailmentOptions& opts = {});
Entailment entails_gci(const Ontology& o, const Concept& c, const Concept& d, const Monomial& m,
                       const EntailmentOptions& opts = {});
Entailment entails_ri(const Ontology& o, const RoleName& r, const RoleName& s, const Monomial& m,
                      const EntailmentOptions& opts = {});
Entailment entails_rr(const Ontology& o, const RoleName& r, const ConceptName& a, const Monomial& m,
                      const EntailmentOptions& opts = {});
Entailment entails_iq(const Ontology& o, const Concept& c, const Individual& a, const Monomial& m,
                      const EntailmentOptions& opts = {});
// Dispatches on the axiom kind.
Entailment entails(const Ontology& o, const Axiom& a, const Monomial& m, const EntailmentOptions& opts = {});

// An entailment question rewritten into an assertion question:
// o |= (axiom, m) iff ontology |= (goal, m * helper).
struct AssertionReduction {
    Ontology ontology;
    Axiom goal;
    Monomial helper;
    std::set<Individual> extra_individuals;
};

AssertionReduction reduce_gci(const Ontology& o, const Concept& c, const Concept& d);
AssertionReduction reduce_ri(const Ontology& o, const RoleName& r, const RoleName& s);
AssertionReduction reduce_rr(const Ontology& o, const RoleName& r, const ConceptName& a);
AssertionReduction reduce_iq(const Ontology& o, const Concept& c, const Individual& a);

// Caches normalization and one saturation per degree bound.
class Reasoner {
public:
    explicit Reasoner(const Ontology& o, EntailmentOptions opts = {}, std::set<Individual> extra_individuals = {});
    Entailment entails_assertion(const Axiom& assertion, const Monomial& m);
    const Ontology& normalized() const { return normalized_; }
    const Signature& signature() const { return sig_; }
    const SaturatedSet& saturation(std::optional<std::size_t> k);

private:
    Ontology normalized_;
    Signature sig_;
    EntailmentOptions opts_;
    std::set<Individual> extra_;
    std::map<std::optional<std::size_t>, SaturatedSet> cache_;
};

// Assertion entailment rewritten into terminological entailment, used to
// cross-check the two procedures against each other.
struct ConceptAssertionToGci {
    Ontology tbox;
    ConceptName individual_concept;  // the concept standing for a0
};
ConceptAssertionToGci reduce_ca_to_gci(const Ontology& o, const Individual& a0);

struct RoleAssertionToRi {
    Ontology tbox;
    RoleName pair_role;  // the role standing for (a0, b0)
};
RoleAssertionToRi reduce_ra_to_ri(const Ontology& o, const Individual& a0, const Individual& b0);

}  // namespace elprov
