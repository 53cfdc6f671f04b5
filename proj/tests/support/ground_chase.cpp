#include "ground_chase.hpp"

namespace oracle {

using namespace elprov;

GroundChase::GroundChase(const Ontology& o)
{
    for (const auto& a : o.signature().individuals) named(a);
    for (const auto& ax : o.axioms()) {
        if (auto* ca = std::get_if<ConceptAssertion>(&ax.axiom))
            concepts_[ca->name].emplace(named(ca->individual), ax.annotation);
        else if (auto* ra = std::get_if<RoleAssertion>(&ax.axiom))
            roles_[ra->role].emplace(named(ra->subject), named(ra->object), ax.annotation);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& ax : o.axioms()) changed |= apply(ax);
    }
}

GroundChase::Elem GroundChase::named(const std::string& a)
{
    auto [it, ins] = ids_.emplace("ind:" + a, static_cast<Elem>(elems_.size()));
    if (ins) elems_.push_back(a);
    return it->second;
}

GroundChase::Elem GroundChase::fresh(const std::string& role, const Monomial& m)
{
    auto key = "aux:" + role + ":" + m.str();
    auto [it, ins] = ids_.emplace(key, static_cast<Elem>(elems_.size()));
    if (ins) elems_.push_back(key);
    return it->second;
}

GroundChase::CPairs GroundChase::eval(const Concept& c) const
{
    CPairs out;
    switch (c.kind) {
    case Concept::Kind::Top:
        for (Elem e = 0; e < static_cast<Elem>(elems_.size()); ++e) out.emplace(e, Monomial{});
        break;
    case Concept::Kind::Atomic:
        if (auto it = concepts_.find(c.name); it != concepts_.end()) out = it->second;
        break;
    case Concept::Kind::And: {
        auto l = eval(c.lhs());
        auto r = eval(c.rhs());
        for (const auto& [d, n1] : l)
            for (const auto& [e, n2] : r)
                if (d == e) out.emplace(d, n1 * n2);
        break;
    }
    case Concept::Kind::Exists:
    case Concept::Kind::ExistsTop: {
        auto filler = c.kind == Concept::Kind::Exists ? eval(c.filler()) : eval(Concept::top());
        auto it = roles_.find(c.name);
        if (it == roles_.end()) break;
        for (const auto& [d, e, n] : it->second)
            for (const auto& [f, o] : filler)
                if (f == e) out.emplace(d, n * o);
        break;
    }
    }
    return out;
}

bool GroundChase::apply(const AnnotatedAxiom& ax)
{
    const Monomial& v = ax.annotation;
    bool changed = false;
    if (auto* g = std::get_if<ConceptInclusion>(&ax.axiom)) {
        auto lhs = eval(g->lhs);
        if (g->rhs.kind == Concept::Kind::ExistsTop) {
            for (const auto& [d, n] : lhs) {
                Monomial k = v * n;
                Elem e = fresh(g->rhs.name, k);
                changed |= roles_[g->rhs.name].emplace(d, e, k).second;
            }
        } else {
            for (const auto& [d, n] : lhs) changed |= concepts_[g->rhs.name].emplace(d, v * n).second;
        }
    } else if (auto* ri = std::get_if<RoleInclusion>(&ax.axiom)) {
        auto edges = roles_[ri->sub];
        for (const auto& [d, e, n] : edges) changed |= roles_[ri->sup].emplace(d, e, v * n).second;
    } else if (auto* rr = std::get_if<RangeRestriction>(&ax.axiom)) {
        auto edges = roles_[rr->role];
        for (const auto& [d, e, n] : edges) changed |= concepts_[rr->name].emplace(e, v * n).second;
    }
    return changed;
}

bool GroundChase::entails(const Axiom& assertion, const Monomial& m) const
{
    if (auto* ca = std::get_if<ConceptAssertion>(&assertion))
        return concept_annotations(ca->name, ca->individual).count(m) > 0;
    const auto& ra = std::get<RoleAssertion>(assertion);
    return role_annotations(ra.role, ra.subject, ra.object).count(m) > 0;
}

std::set<Monomial> GroundChase::concept_annotations(const std::string& concept_name, const std::string& individual) const
{
    std::set<Monomial> out;
    auto id = ids_.find("ind:" + individual);
    if (id == ids_.end()) return out;
    if (concept_name == kTop) return {Monomial{}};
    auto it = concepts_.find(concept_name);
    if (it == concepts_.end()) return out;
    for (const auto& [d, n] : it->second)
        if (d == id->second) out.insert(n);
    return out;
}

std::set<Monomial> GroundChase::role_annotations(const std::string& role, const std::string& a, const std::string& b) const
{
    std::set<Monomial> out;
    auto ia = ids_.find("ind:" + a);
    auto ib = ids_.find("ind:" + b);
    auto it = roles_.find(role);
    if (ia == ids_.end() || ib == ids_.end() || it == roles_.end()) return out;
    for (const auto& [d, e, n] : it->second)
        if (d == ia->second && e == ib->second) out.insert(n);
    return out;
}

}  // namespace oracle
