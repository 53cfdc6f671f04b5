#pragma once

// Canonical model of an ontology and the query rewriting that makes query
// evaluation over it complete for annotated BCQ entailment.

#include "elprov/completion.hpp"
#include "elprov/interpretation.hpp"

#include <set>
#include <string>
#include <vector>

namespace elprov {

// Built from the normalized ontology closed under entailed range
// restrictions; auxiliary elements d_R^m are created only when needed.
Interpretation build_canonical_model(const Ontology& o, const Limits& limits = Limits::from_env());

// The normalized ontology with every entailed range restriction added,
// i.e. the axioms the model construction runs on.
Ontology range_closed(const Ontology& normalized, const Limits& limits = Limits::from_env());

struct Fork {
    std::vector<Term> pre;  // sorted, at least two terms
    std::vector<Term> cls;  // the class chi, sorted
    Term rep;               // minimum of cls
};

struct RewritingConditions {
    std::vector<std::vector<Term>> sim;  // classes of object terms, sorted
    std::set<std::string> cyc;           // object variables
    std::vector<Fork> forks;
    std::size_t merges = 0;  // class merges forced by the closure condition

    SideConditions side_conditions() const;
};

RewritingConditions compute_rewriting(const Query& q);

// q* in the query grammar plus "!aux(?x)" and "aux(?y) -> ?x = ?z" lines.
std::string format_rewriting(const Query& q, const RewritingConditions& rw);

struct QueryAnswer {
    Polynomial provenance;     // P over the canonical model with side conditions
    std::size_t matches = 0;
    bool entailed = false;
};

QueryAnswer answer_query(const Ontology& o, const Query& q, const Polynomial& p,
                         const Limits& limits = Limits::from_env());
bool entails_query(const Ontology& o, const Query& q, const Polynomial& p, const Limits& limits = Limits::from_env());

}  // namespace elprov
