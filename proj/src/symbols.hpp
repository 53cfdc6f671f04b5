#pragma once

// Interning between ontology syntax and engine facts.

#include "elprov/ontology.hpp"
#include "rule_engine.hpp"

#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace elprov::detail {

class Table {
public:
    Id intern(const std::string& s);
    Id find(const std::string& s) const;  // kMissing if absent
    const std::string& name(Id i) const { return names_.at(i); }
    std::size_t size() const { return names_.size(); }

    static constexpr Id kMissing = ~Id{0};

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Id> ids_;
};

struct Symbols {
    Symbols();  // concept 0 is Top

    Table concepts, roles, individuals, vars;

    VarSet varset(const Monomial& m);
    Monomial monomial(const VarSet& v) const;
    Axiom decode(const Fact& f) const;
    Concept concept_of(Id c) const;
};

// Feeds a normalized ontology plus the CR0 / CR11 facts into the engine.
void load(const Ontology& o, const std::set<Individual>& extra_individuals, Symbols& sym, Engine& engine);

}  // namespace elprov::detail
