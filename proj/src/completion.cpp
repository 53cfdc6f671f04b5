#include "elprov/completion.hpp"

#include "rule_engine.hpp"
#include "symbols.hpp"

#include <algorithm>
#include <cstdlib>

namespace elprov {

using detail::Id;
using detail::Pred;

Limits Limits::from_env()
{
    Limits l;
    if (const char* s = std::getenv("ELPROV_MAX_AXIOMS")) {
        char* end = nullptr;
        auto v = std::strtoull(s, &end, 10);
        if (end != s && *end == '\0' && v > 0) l.max_axioms = static_cast<std::size_t>(v);
    }
    if (const char* s = std::getenv("ELPROV_TIME_BUDGET_MS")) {
        char* end = nullptr;
        auto v = std::strtoll(s, &end, 10);
        if (end != s && *end == '\0' && v >= 0) l.time_budget = std::chrono::milliseconds(v);
    }
    return l;
}

namespace {

Concept canonical_concept(const Concept& c)
{
    switch (c.kind) {
    case Concept::Kind::ExistsTop: return Concept::some(c.name, Concept::top());
    case Concept::Kind::Exists: return Concept::some(c.name, canonical_concept(c.filler()));
    case Concept::Kind::And: {
        Concept l = canonical_concept(c.lhs());
        Concept r = canonical_concept(c.rhs());
        if (r < l) std::swap(l, r);
        return Concept::conj(std::move(l), std::move(r));
    }
    default: return c;
    }
}

}  // namespace

Axiom canonical(const Axiom& a)
{
    if (auto* g = std::get_if<ConceptInclusion>(&a)) {
        // Right-hand side some(R) stays as written; only lhs is rewritten.
        return ConceptInclusion{canonical_concept(g->lhs), g->rhs};
    }
    return a;
}

bool SaturatedSet::contains(const Axiom& a, const Monomial& m) const
{
    auto it = by_axiom_.find(canonical(a));
    return it != by_axiom_.end() && it->second.count(m) > 0;
}

std::set<Monomial> SaturatedSet::annotations(const Axiom& a) const
{
    auto it = by_axiom_.find(canonical(a));
    return it == by_axiom_.end() ? std::set<Monomial>{} : it->second;
}

Ontology SaturatedSet::to_ontology() const
{
    Ontology o;
    for (const auto& d : axioms_) o.add(d.axiom);
    return o;
}

SaturatedSet saturate(const Ontology& o, const SaturationOptions& opts)
{
    if (!is_normalized(o)) throw std::invalid_argument("saturate: ontology is not in normal form");

    detail::EngineConfig cfg;
    cfg.policy = detail::Policy::Insert;
    cfg.max_degree = opts.k;
    cfg.disabled = opts.disabled;
    cfg.max_facts = opts.limits.max_axioms;
    cfg.time_budget = opts.limits.time_budget;
    detail::Engine engine(cfg);
    detail::Symbols sym;
    try {
        detail::load(o, opts.extra_individuals, sym, engine);
        engine.run();
    } catch (const detail::CapExceeded& e) {
        SaturationStats st;
        st.rule_applications = e.stats.rule_applications;
        st.updates = e.stats.updates;
        st.join_steps = e.stats.join_steps;
        st.axioms = e.facts;
        throw ResourceLimitExceeded("saturation stopped: " + e.reason, st);
    }

    SaturatedSet out;
    for (const auto& f : engine.facts()) {
        if (f.mirror) continue;
        AnnotatedAxiom ax{canonical(sym.decode(f)), sym.monomial(f.mon)};
        out.by_axiom_[ax.axiom].insert(ax.annotation);
        out.axioms_.push_back({std::move(ax), f.derivations});
    }
    std::sort(out.axioms_.begin(), out.axioms_.end(),
              [](const DerivedAxiom& x, const DerivedAxiom& y) { return x.axiom < y.axiom; });
    const auto& es = engine.stats();
    out.stats_.rule_applications = es.rule_applications;
    out.stats_.updates = es.updates;
    out.stats_.join_steps = es.join_steps;
    out.stats_.axioms = out.axioms_.size();
    return out;
}

// ---------------------------------------------------------------- reasoner

Reasoner::Reasoner(const Ontology& o, EntailmentOptions opts, std::set<Individual> extra_individuals)
    : normalized_(normalize(o)), sig_(normalized_.signature()), opts_(opts), extra_(std::move(extra_individuals))
{
    sig_.individuals.insert(extra_.begin(), extra_.end());
}

const SaturatedSet& Reasoner::saturation(std::optional<std::size_t> k)
{
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    SaturationOptions so;
    so.k = k;
    so.limits = opts_.limits;
    so.disabled = opts_.disabled;
    so.extra_individuals = extra_;
    return cache_.emplace(k, saturate(normalized_, so)).first->second;
}

namespace {

void require_known(const Signature& sig, const Axiom& a, std::vector<std::string>& warnings)
{
    auto concept_known = [&](const ConceptName& n) { return n == kTop || sig.concepts.count(n) > 0; };
    auto missing = [&](const std::string& kind, const std::string& n) {
        warnings.push_back(kind + " '" + n + "' does not occur in the ontology");
    };
    if (auto* ca = std::get_if<ConceptAssertion>(&a)) {
        if (!concept_known(ca->name)) missing("concept", ca->name);
        if (!sig.individuals.count(ca->individual)) missing("individual", ca->individual);
    } else if (auto* ra = std::get_if<RoleAssertion>(&a)) {
        if (!sig.roles.count(ra->role)) missing("role", ra->role);
        if (!sig.individuals.count(ra->subject)) missing("individual", ra->subject);
        if (!sig.individuals.count(ra->object)) missing("individual", ra->object);
    }
}

}  // namespace

Entailment Reasoner::entails_assertion(const Axiom& assertion, const Monomial& m)
{
    if (!std::holds_alternative<ConceptAssertion>(assertion) && !std::holds_alternative<RoleAssertion>(assertion))
        throw std::invalid_argument("entails_assertion: '" + to_string(assertion) + "' is not an assertion");
    Entailment r;
    require_known(sig_, assertion, r.warnings);
    if (!r.warnings.empty()) return r;
    r.entailed = saturation(m.degree()).contains(assertion, m);
    return r;
}

// -------------------------------------------------------------- reductions

namespace {

std::set<std::string> names_of(const Ontology& o, std::initializer_list<const Concept*> concepts,
                               std::initializer_list<std::string> extra = {})
{
    auto used = all_names(o);
    Signature sig;
    for (const Concept* c : concepts) collect(*c, sig);
    used.insert(sig.concepts.begin(), sig.concepts.end());
    used.insert(sig.roles.begin(), sig.roles.end());
    used.insert(extra.begin(), extra.end());
    return used;
}

// Assertions realising concept c at individual a; every assertion gets its
// own fresh variable, collected in `helper`.
void realise(const Concept& c, const Individual& a, FreshNames& fresh, Ontology& out, Monomial& helper)
{
    switch (c.kind) {
    case Concept::Kind::Top: return;
    case Concept::Kind::Atomic: {
        auto v = fresh.next("__v");
        out.add(ConceptAssertion{c.name, a}, Monomial::var(v));
        helper *= Monomial::var(v);
        return;
    }
    case Concept::Kind::And:
        realise(c.lhs(), a, fresh, out, helper);
        realise(c.rhs(), a, fresh, out, helper);
        return;
    case Concept::Kind::Exists:
    case Concept::Kind::ExistsTop: {
        auto b = fresh.next("__a");
        auto v = fresh.next("__v");
        out.add(RoleAssertion{c.name, a, b}, Monomial::var(v));
        helper *= Monomial::var(v);
        if (c.kind == Concept::Kind::Exists) realise(c.filler(), b, fresh, out, helper);
        return;
    }
    }
}

Entailment entails_reduced(const AssertionReduction& red, const Monomial& m, const EntailmentOptions& opts)
{
    Reasoner r(red.ontology, opts, red.extra_individuals);
    Entailment e;
    Monomial target = m * red.helper;
    e.entailed = r.saturation(target.degree()).contains(red.goal, target);
    return e;
}

bool is_restricted_target(const Concept& d)
{
    return d.kind == Concept::Kind::Atomic || d.kind == Concept::Kind::ExistsTop ||
           (d.kind == Concept::Kind::Exists && d.filler().is_top());
}

}  // namespace

AssertionReduction reduce_gci(const Ontology& o, const Concept& c, const Concept& d)
{
    if (!is_restricted_target(d))
        throw std::invalid_argument("entails_gci: right-hand side must be a concept name or some(R), got '" +
                                    d.str() + "'");
    FreshNames fresh(names_of(o, {&c, &d}));
    AssertionReduction red;
    red.ontology = o;
    auto e = fresh.next("__E");
    auto a0 = fresh.next("__a");
    Concept lhs = d.is_atomic() ? d : Concept::some(d.name, Concept::top());
    red.ontology.add(ConceptInclusion{lhs, Concept::atomic(e)}, Monomial::one());
    realise(c, a0, fresh, red.ontology, red.helper);
    red.goal = ConceptAssertion{e, a0};
    red.extra_individuals = {a0};
    return red;
}

AssertionReduction reduce_ri(const Ontology& o, const RoleName& r, const RoleName& s)
{
    FreshNames fresh(names_of(o, {}, {r, s}));
    AssertionReduction red;
    red.ontology = o;
    auto a0 = fresh.next("__a");
    auto b0 = fresh.next("__a");
    red.ontology.add(RoleAssertion{r, a0, b0}, Monomial::one());
    red.goal = RoleAssertion{s, a0, b0};
    red.extra_individuals = {a0, b0};
    return red;
}

// The range fact is tagged with a fresh variable h and h is required in the
// conclusion: with annotation 1 a Top <= A axiom alone would already yield
// A(b0) and the reduction would be unsound.
AssertionReduction reduce_rr(const Ontology& o, const RoleName& r, const ConceptName& a)
{
    FreshNames fresh(names_of(o, {}, {r, a}));
    AssertionReduction red;
    red.ontology = o;
    auto a0 = fresh.next("__a");
    auto b0 = fresh.next("__a");
    auto h = fresh.next("__v");
    red.ontology.add(RoleAssertion{r, a0, b0}, Monomial::var(h));
    red.helper = Monomial::var(h);
    red.goal = ConceptAssertion{a, b0};
    red.extra_individuals = {a0, b0};
    return red;
}

AssertionReduction reduce_iq(const Ontology& o, const Concept& c, const Individual& a)
{
    AssertionReduction red;
    red.ontology = o;
    red.extra_individuals = {a};
    if (c.is_basic()) {
        red.goal = ConceptAssertion{c.is_top() ? std::string(kTop) : c.name, a};
        return red;
    }
    FreshNames fresh(names_of(o, {&c}, {a}));
    auto q = fresh.next("__Q");
    red.ontology.add(ConceptInclusion{c, Concept::atomic(q)}, Monomial::one());
    red.goal = ConceptAssertion{q, a};
    return red;
}

Entailment entails_assertion(const Ontology& o, const Axiom& assertion, const Monomial& m,
                             const EntailmentOptions& opts)
{
    return Reasoner(o, opts).entails_assertion(assertion, m);
}

Entailment entails_gci(const Ontology& o, const Concept& c, const Concept& d, const Monomial& m,
                       const EntailmentOptions& opts)
{
    return entails_reduced(reduce_gci(o, c, d), m, opts);
}

Entailment entails_ri(const Ontology& o, const RoleName& r, const RoleName& s, const Monomial& m,
                      const EntailmentOptions& opts)
{
    return entails_reduced(reduce_ri(o, r, s), m, opts);
}

Entailment entails_rr(const Ontology& o, const RoleName& r, const ConceptName& a, const Monomial& m,
                      const EntailmentOptions& opts)
{
    return entails_reduced(reduce_rr(o, r, a), m, opts);
}

Entailment entails_iq(const Ontology& o, const Concept& c, const Individual& a, const Monomial& m,
                      const EntailmentOptions& opts)
{
    if (!o.signature().individuals.count(a)) {
        Entailment e;
        e.warnings.push_back("individual '" + a + "' does not occur in the ontology");
        return e;
    }
    return entails_reduced(reduce_iq(o, c, a), m, opts);
}

Entailment entails(const Ontology& o, const Axiom& a, const Monomial& m, const EntailmentOptions& opts)
{
    if (auto* g = std::get_if<ConceptInclusion>(&a)) return entails_gci(o, g->lhs, g->rhs, m, opts);
    if (auto* r = std::get_if<RoleInclusion>(&a)) return entails_ri(o, r->sub, r->sup, m, opts);
    if (auto* rr = std::get_if<RangeRestriction>(&a)) return entails_rr(o, rr->role, rr->name, m, opts);
    return entails_assertion(o, a, m, opts);
}

// -------------------------------------------------------------- cross-check

ConceptAssertionToGci reduce_ca_to_gci(const Ontology& o, const Individual& a0)
{
    auto sig = o.signature();
    FreshNames fresh(all_names(o));
    std::map<Individual, ConceptName> c_ind;
    std::map<RoleName, ConceptName> c_ran;
    std::map<std::pair<Individual, Individual>, RoleName> r_pair;
    for (const auto& a : sig.individuals) c_ind[a] = fresh.next("__Cind");
    for (const auto& r : sig.roles) c_ran[r] = fresh.next("__Cran");
    if (!c_ind.count(a0)) c_ind[a0] = fresh.next("__Cind");

    auto atomic = [](const std::string& n) { return Concept::atomic(n); };
    ConceptAssertionToGci out;
    auto& t = out.tbox;
    for (const auto& ax : o.axioms()) {
        const Monomial& v = ax.annotation;
        if (auto* ca = std::get_if<ConceptAssertion>(&ax.axiom)) {
            t.add(ConceptInclusion{atomic(c_ind[ca->individual]), atomic(ca->name)}, v);
        } else if (auto* ra = std::get_if<RoleAssertion>(&ax.axiom)) {
            auto key = std::make_pair(ra->subject, ra->object);
            auto it = r_pair.find(key);
            if (it == r_pair.end()) it = r_pair.emplace(key, fresh.next("__Rpair")).first;
            const auto& rab = it->second;
            t.add(ConceptInclusion{atomic(c_ind[ra->subject]), Concept::some(rab)}, Monomial::one());
            t.add(RoleInclusion{rab, ra->role}, v);
            t.add(RangeRestriction{rab, c_ind[ra->object]}, Monomial::one());
            t.add(ConceptInclusion{atomic(c_ind[ra->object]), atomic(c_ran[ra->role])}, v);
        } else {
            t.add(ax);
            if (auto* ri = std::get_if<RoleInclusion>(&ax.axiom))
                t.add(ConceptInclusion{atomic(c_ran[ri->sub]), atomic(c_ran[ri->sup])}, v);
            else if (auto* rr = std::get_if<RangeRestriction>(&ax.axiom))
                t.add(ConceptInclusion{atomic(c_ran[rr->role]), atomic(rr->name)}, v);
        }
    }
    out.individual_concept = c_ind[a0];
    return out;
}

RoleAssertionToRi reduce_ra_to_ri(const Ontology& o, const Individual& a0, const Individual& b0)
{
    FreshNames fresh(all_names(o));
    RoleAssertionToRi out;
    out.pair_role = fresh.next("__Spair");
    for (const auto& ax : o.axioms()) {
        if (auto* ra = std::get_if<RoleAssertion>(&ax.axiom)) {
            if (ra->subject == a0 && ra->object == b0) out.tbox.add(RoleInclusion{out.pair_role, ra->role}, ax.annotation);
        } else if (std::holds_alternative<RoleInclusion>(ax.axiom)) {
            out.tbox.add(ax);
        }
    }
    return out;
}

}  // namespace elprov
