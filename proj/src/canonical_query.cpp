#include "elprov/canonical_query.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace elprov {

// O |= (ran(R) <= B, n) iff O + {(R(a_R, b_R), h_R)} |= (B(b_R), n * h_R) with
// a_R, b_R, h_R fresh. All roles are handled in one saturation: the added
// pairs are disconnected, so facts about b_R only depend on R's pair.
Ontology range_closed(const Ontology& normalized, const Limits& limits)
{
    auto sig = normalized.signature();
    FreshNames fresh(all_names(normalized));
    Ontology ext = normalized;
    struct Probe {
        RoleName role;
        Individual object;
        Variable tag;
    };
    std::vector<Probe> probes;
    for (const auto& r : sig.roles) {
        Probe p{r, {}, fresh.next("__v")};
        auto subject = fresh.next("__a");
        p.object = fresh.next("__a");
        ext.add(RoleAssertion{r, subject, p.object}, Monomial::var(p.tag));
        probes.push_back(std::move(p));
    }
    SaturationOptions so;
    so.limits = limits;
    auto sat = saturate(ext, so);

    std::map<Individual, const Probe*> by_object;
    for (const auto& p : probes) by_object[p.object] = &p;
    Ontology out = normalized;
    for (const auto& d : sat.axioms()) {
        auto* ca = std::get_if<ConceptAssertion>(&d.axiom.axiom);
        if (!ca || ca->name == kTop) continue;
        auto it = by_object.find(ca->individual);
        if (it == by_object.end()) continue;
        const auto& m = d.axiom.annotation;
        if (!m.contains(it->second->tag)) continue;
        std::vector<Variable> rest;
        for (const auto& v : m.vars())
            if (v != it->second->tag) rest.push_back(v);
        out.add(RangeRestriction{it->second->role, ca->name}, Monomial(std::move(rest)));
    }
    return out;
}

Interpretation build_canonical_model(const Ontology& o, const Limits& limits)
{
    Ontology normalized = normalize(o);
    Ontology work = range_closed(normalized, limits);

    Interpretation I;
    for (const auto& a : normalized.signature().individuals) I.named(a);
    SaturationOptions so;
    so.limits = limits;
    auto sat = saturate(normalized, so);
    std::size_t tuples = 0;
    for (const auto& d : sat.axioms()) {
        const auto& m = d.axiom.annotation;
        if (auto* ca = std::get_if<ConceptAssertion>(&d.axiom.axiom)) {
            if (ca->name != kTop) tuples += I.add_concept(ca->name, I.named(ca->individual), m);
        } else if (auto* ra = std::get_if<RoleAssertion>(&d.axiom.axiom)) {
            tuples += I.add_role(ra->role, I.named(ra->subject), I.named(ra->object), m);
        }
    }

    auto check_cap = [&] {
        if (tuples + I.size() > limits.max_axioms) {
            SaturationStats st;
            st.axioms = tuples;
            throw ResourceLimitExceeded("canonical model exceeds " + std::to_string(limits.max_axioms) + " tuples", st);
        }
    };

    // Sweep all axioms until nothing changes.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& ax : work.axioms()) {
            const Monomial& v = ax.annotation;
            std::size_t added = 0;
            if (auto* g = std::get_if<ConceptInclusion>(&ax.axiom)) {
                auto ext = extend_concept(I, g->lhs);
                if (g->rhs.kind == Concept::Kind::ExistsTop) {
                    for (const auto& [d, n] : ext) {
                        Monomial mn = v * n;
                        added += I.add_role(g->rhs.name, d, I.aux(g->rhs.name, mn), mn);
                    }
                } else {
                    for (const auto& [d, n] : ext) added += I.add_concept(g->rhs.name, d, v * n);
                }
            } else if (auto* ri = std::get_if<RoleInclusion>(&ax.axiom)) {
                auto triples = I.role_extension(ri->sub);
                for (const auto& [d, e, n] : triples) added += I.add_role(ri->sup, d, e, v * n);
            } else if (auto* rr = std::get_if<RangeRestriction>(&ax.axiom)) {
                for (const auto& [e, n] : extend_range(I, rr->role)) added += I.add_concept(rr->name, e, v * n);
            }
            if (added) {
                changed = true;
                tuples += added;
                check_cap();
            }
        }
    }
    return I;
}

// ---------------------------------------------------------------- rewriting

SideConditions RewritingConditions::side_conditions() const
{
    SideConditions s;
    s.not_aux = cyc;
    for (const auto& f : forks) s.equalities.push_back({f.rep, f.pre});
    return s;
}

RewritingConditions compute_rewriting(const Query& q)
{
    auto terms_set = q.object_terms();
    std::vector<Term> terms(terms_set.begin(), terms_set.end());
    std::map<Term, std::size_t> index;
    for (std::size_t i = 0; i < terms.size(); ++i) index[terms[i]] = i;

    std::vector<std::size_t> parent(terms.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        return parent[i] == i ? i : parent[i] = find(parent[i]);
    };

    std::vector<const QueryAtom*> roles;
    for (const auto& a : q.atoms)
        if (a.is_role) roles.push_back(&a);

    RewritingConditions rw;
    // Closure: two role atoms with equivalent targets have equivalent sources.
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto* a : roles)
            for (const auto* b : roles) {
                if (find(index[a->t2]) != find(index[b->t2])) continue;
                auto x = find(index[a->t1]);
                auto y = find(index[b->t1]);
                if (x == y) continue;
                parent[std::max(x, y)] = std::min(x, y);
                ++rw.merges;
                changed = true;
            }
    }

    // Classes keyed by root; terms are sorted, so each class is too and the
    // root order follows the class minimum.
    std::map<std::size_t, std::vector<Term>> classes;
    for (std::size_t i = 0; i < terms.size(); ++i) classes[find(i)].push_back(terms[i]);
    for (const auto& [root, cls] : classes) rw.sim.push_back(cls);

    for (const auto& [root, cls] : classes) {
        std::set<Term> pre;
        for (const auto* a : roles)
            if (find(index[a->t2]) == root) pre.insert(a->t1);
        if (pre.size() >= 2) rw.forks.push_back({std::vector<Term>(pre.begin(), pre.end()), cls, cls.front()});
    }

    // Class graph; a class is in Cyc territory if it reaches a cycle.
    std::map<std::size_t, std::set<std::size_t>> succ;
    for (const auto* a : roles) succ[find(index[a->t1])].insert(find(index[a->t2]));
    auto reachable = [&](std::size_t from) {
        std::set<std::size_t> seen;
        std::vector<std::size_t> stack{from};
        while (!stack.empty()) {
            auto c = stack.back();
            stack.pop_back();
            for (auto n : succ[c])
                if (seen.insert(n).second) stack.push_back(n);
        }
        return seen;  // nodes reachable by at least one edge
    };
    std::set<std::size_t> on_cycle;
    for (const auto& [root, cls] : classes)
        if (reachable(root).count(root)) on_cycle.insert(root);
    for (const auto& [root, cls] : classes) {
        bool hits = on_cycle.count(root) > 0;
        if (!hits)
            for (auto n : reachable(root))
                if (on_cycle.count(n)) {
                    hits = true;
                    break;
                }
        if (!hits) continue;
        for (const auto& t : cls)
            if (t.is_var()) rw.cyc.insert(t.name);
    }
    return rw;
}

std::string format_rewriting(const Query& q, const RewritingConditions& rw)
{
    std::string out = q.str() + "\n";
    for (const auto& x : rw.cyc) out += "!aux(?" + x + ")\n";
    for (const auto& f : rw.forks) {
        out += "aux(" + f.rep.str() + ") -> ";
        for (std::size_t i = 0; i + 1 < f.pre.size(); ++i) {
            if (i) out += ", ";
            out += f.pre[i].str() + " = " + f.pre[i + 1].str();
        }
        out += "\n";
    }
    return out;
}

QueryAnswer answer_query(const Ontology& o, const Query& q, const Polynomial& p, const Limits& limits)
{
    auto inds = o.signature().individuals;
    for (const auto& t : q.object_terms())
        if (!t.is_var() && !inds.count(t.name))
            throw UnknownIndividual("query individual '" + t.name + "' does not occur in the ontology");
    auto I = build_canonical_model(o, limits);
    auto side = compute_rewriting(q).side_conditions();
    auto matches = enumerate_matches(I, q, &side);
    QueryAnswer ans;
    ans.matches = matches.size();
    for (const auto& m : matches) ans.provenance += Polynomial(m.product());
    ans.entailed = !matches.empty() && p.contained_in(ans.provenance);
    return ans;
}

bool entails_query(const Ontology& o, const Query& q, const Polynomial& p, const Limits& limits)
{
    return answer_query(o, q, p, limits).entailed;
}

}  // namespace elprov
