#pragma once

// Variable relevance: which variables occur in some provenance monomial of
// an entailed axiom. Computed by a saturation that keeps one annotation per
// axiom and unions annotations instead of storing them separately.

#include "elprov/completion.hpp"

#include <map>
#include <optional>
#include <set>

namespace elprov {

struct MergedSaturation {
    std::map<Axiom, Monomial> entries;
    SaturationStats stats;  // stats.updates counts insertions and growths

    std::optional<Monomial> entry(const Axiom& a) const;
};

// Requires a normalized ontology.
MergedSaturation merged_saturate(const Ontology& o, const Limits& limits = Limits::from_env());

// Variables relevant to an axiom of any kind (assertions directly, the
// others through the entailment reductions).
std::set<Variable> relevant_variables(const Ontology& o, const Axiom& a, const Limits& limits = Limits::from_env());
std::set<Variable> relevant_variables_iq(const Ontology& o, const Concept& c, const Individual& a,
                                         const Limits& limits = Limits::from_env());

bool is_relevant(const Ontology& o, const Axiom& a, const Variable& v, const Limits& limits = Limits::from_env());
bool is_relevant_iq(const Ontology& o, const Concept& c, const Individual& a, const Variable& v,
                    const Limits& limits = Limits::from_env());

}  // namespace elprov
