#include "symbols.hpp"

#include <algorithm>
#include <stdexcept>

namespace elprov::detail {

Id Table::intern(const std::string& s)
{
    auto [it, fresh] = ids_.emplace(s, static_cast<Id>(names_.size()));
    if (fresh) names_.push_back(s);
    return it->second;
}

Id Table::find(const std::string& s) const
{
    auto it = ids_.find(s);
    return it == ids_.end() ? kMissing : it->second;
}

Symbols::Symbols() { concepts.intern(std::string(kTop)); }

VarSet Symbols::varset(const Monomial& m)
{
    VarSet out;
    for (const auto& v : m.vars()) out.push_back(vars.intern(v));
    std::sort(out.begin(), out.end());
    return out;
}

Monomial Symbols::monomial(const VarSet& v) const
{
    std::vector<Variable> names;
    names.reserve(v.size());
    for (Id i : v) names.push_back(vars.name(i));
    return Monomial(std::move(names));
}

Concept Symbols::concept_of(Id c) const
{
    return c == kTopId ? Concept::top() : Concept::atomic(concepts.name(c));
}

Axiom Symbols::decode(const Fact& f) const
{
    const auto& a = f.args;
    switch (f.pred) {
    case SUB: return ConceptInclusion{concept_of(a[0]), concept_of(a[1])};
    case CONJ: return ConceptInclusion{Concept::conj(concept_of(a[0]), concept_of(a[1])), concept_of(a[2])};
    case EX: return ConceptInclusion{concept_of(a[0]), Concept::some(roles.name(a[1]))};
    case EXQ: return ConceptInclusion{Concept::some(roles.name(a[0]), concept_of(a[1])), concept_of(a[2])};
    case RI: return RoleInclusion{roles.name(a[0]), roles.name(a[1])};
    case RR: return RangeRestriction{roles.name(a[0]), concepts.name(a[1])};
    case CA: return ConceptAssertion{concepts.name(a[0]), individuals.name(a[1])};
    case RA: return RoleAssertion{roles.name(a[0]), individuals.name(a[1]), individuals.name(a[2])};
    default: break;
    }
    throw std::logic_error("decode: bad predicate");
}

namespace {

Id basic_id(const Concept& c, Symbols& sym)
{
    if (c.is_top()) return kTopId;
    if (!c.is_atomic()) throw std::invalid_argument("expected concept name or Top, got '" + c.str() + "'");
    return sym.concepts.intern(c.name);
}

}  // namespace

void load(const Ontology& o, const std::set<Individual>& extra_individuals, Symbols& sym, Engine& engine)
{
    auto sig = o.signature();
    // Intern in signature order so ids (and hence iteration) are stable.
    for (const auto& c : sig.concepts) sym.concepts.intern(c);
    for (const auto& r : sig.roles) sym.roles.intern(r);
    std::set<Individual> inds = sig.individuals;
    inds.insert(extra_individuals.begin(), extra_individuals.end());
    for (const auto& a : inds) sym.individuals.intern(a);
    for (const auto& v : sig.variables) sym.vars.intern(v);

    for (const auto& ax : o.axioms()) {
        VarSet m = sym.varset(ax.annotation);
        if (auto* g = std::get_if<ConceptInclusion>(&ax.axiom)) {
            const Concept& l = g->lhs;
            const Concept& r = g->rhs;
            if (r.kind == Concept::Kind::ExistsTop) {
                engine.add(EX, {basic_id(l, sym), sym.roles.intern(r.name), 0}, m);
            } else if (l.kind == Concept::Kind::And) {
                engine.add(CONJ, {basic_id(l.lhs(), sym), basic_id(l.rhs(), sym), basic_id(r, sym)}, m);
            } else if (l.kind == Concept::Kind::Exists) {
                engine.add(EXQ, {sym.roles.intern(l.name), basic_id(l.filler(), sym), basic_id(r, sym)}, m);
            } else if (l.kind == Concept::Kind::ExistsTop) {
                engine.add(EXQ, {sym.roles.intern(l.name), kTopId, basic_id(r, sym)}, m);
            } else {
                engine.add(SUB, {basic_id(l, sym), basic_id(r, sym), 0}, m);
            }
        } else if (auto* ri = std::get_if<RoleInclusion>(&ax.axiom)) {
            engine.add(RI, {sym.roles.intern(ri->sub), sym.roles.intern(ri->sup), 0}, m);
        } else if (auto* rr = std::get_if<RangeRestriction>(&ax.axiom)) {
            engine.add(RR, {sym.roles.intern(rr->role), basic_id(Concept::atomic(rr->name), sym), 0}, m);
        } else if (auto* ca = std::get_if<ConceptAssertion>(&ax.axiom)) {
            Id c = ca->name == kTop ? kTopId : sym.concepts.intern(ca->name);
            engine.add(CA, {c, sym.individuals.intern(ca->individual), 0}, m);
        } else if (auto* ra = std::get_if<RoleAssertion>(&ax.axiom)) {
            engine.add(RA,
                       {sym.roles.intern(ra->role), sym.individuals.intern(ra->subject),
                        sym.individuals.intern(ra->object)},
                       m);
        }
    }

    // CR0: X <= X for every name, and Top <= Top when Top occurs or there
    // are individuals (whose Top membership CR11 introduces).
    for (const auto& c : sig.concepts) engine.add(SUB, {sym.concepts.find(c), sym.concepts.find(c), 0}, {}, 0);
    if (sig.mentions_top || !inds.empty()) engine.add(SUB, {kTopId, kTopId, 0}, {}, 0);
    for (const auto& r : sig.roles) engine.add(RI, {sym.roles.find(r), sym.roles.find(r), 0}, {}, 0);
    // CR11
    for (const auto& a : inds) engine.add(CA, {kTopId, sym.individuals.find(a), 0}, {}, 11);
}

}  // namespace elprov::detail
