#include "elprov/relevance.hpp"

#include "rule_engine.hpp"
#include "symbols.hpp"

namespace elprov {

std::optional<Monomial> MergedSaturation::entry(const Axiom& a) const
{
    auto it = entries.find(canonical(a));
    if (it == entries.end()) return std::nullopt;
    return it->second;
}

namespace {

struct MergedRun {
    detail::Symbols sym;
    std::vector<detail::Fact> facts;
    detail::EngineStats stats;
};

// Facts whose annotations contain different subsets of `partition` are kept
// apart; with an empty partition this is the plain merged saturation.
MergedRun run_merged(const Ontology& normalized, const std::set<Individual>& extra, const Monomial& partition,
                     const Limits& limits)
{
    detail::EngineConfig cfg;
    cfg.policy = detail::Policy::Merge;
    cfg.max_facts = limits.max_axioms;
    cfg.time_budget = limits.time_budget;

    MergedRun run;
    // Intern the partition variables up front so their ids are known.
    for (const auto& v : partition.vars()) {
        auto id = run.sym.vars.intern(v);
        if (cfg.partition_vars.size() <= id) cfg.partition_vars.resize(id + 1, false);
        cfg.partition_vars[id] = true;
    }
    detail::Engine engine(cfg);
    try {
        detail::load(normalized, extra, run.sym, engine);
        engine.run();
    } catch (const detail::CapExceeded& e) {
        SaturationStats st;
        st.rule_applications = e.stats.rule_applications;
        st.updates = e.stats.updates;
        st.join_steps = e.stats.join_steps;
        st.axioms = e.facts;
        throw ResourceLimitExceeded("merged saturation stopped: " + e.reason, st);
    }
    run.facts = engine.facts();
    run.stats = engine.stats();
    return run;
}

SaturationStats to_stats(const detail::EngineStats& es, std::size_t n)
{
    SaturationStats st;
    st.rule_applications = es.rule_applications;
    st.updates = es.updates;
    st.join_steps = es.join_steps;
    st.axioms = n;
    return st;
}

std::set<Variable> relevant_from_reduction(const AssertionReduction& red, const Limits& limits)
{
    Ontology n = normalize(red.ontology);
    auto run = run_merged(n, red.extra_individuals, red.helper, limits);
    Axiom goal = canonical(red.goal);
    for (const auto& f : run.facts) {
        if (f.mirror) continue;
        if (canonical(run.sym.decode(f)) != goal) continue;
        Monomial m = run.sym.monomial(f.mon);
        if (!red.helper.divides(m)) continue;
        std::set<Variable> out;
        for (const auto& v : m.vars())
            if (!red.helper.contains(v)) out.insert(v);
        return out;
    }
    return {};
}

}  // namespace

MergedSaturation merged_saturate(const Ontology& o, const Limits& limits)
{
    if (!is_normalized(o)) throw std::invalid_argument("merged_saturate: ontology is not in normal form");
    auto run = run_merged(o, {}, Monomial::one(), limits);
    MergedSaturation out;
    for (const auto& f : run.facts) {
        if (f.mirror) continue;
        out.entries.emplace(canonical(run.sym.decode(f)), run.sym.monomial(f.mon));
    }
    out.stats = to_stats(run.stats, out.entries.size());
    return out;
}

std::set<Variable> relevant_variables(const Ontology& o, const Axiom& a, const Limits& limits)
{
    if (std::holds_alternative<ConceptAssertion>(a) || std::holds_alternative<RoleAssertion>(a)) {
        AssertionReduction red;
        red.ontology = o;
        red.goal = a;
        return relevant_from_reduction(red, limits);
    }
    if (auto* g = std::get_if<ConceptInclusion>(&a)) return relevant_from_reduction(reduce_gci(o, g->lhs, g->rhs), limits);
    if (auto* r = std::get_if<RoleInclusion>(&a)) return relevant_from_reduction(reduce_ri(o, r->sub, r->sup), limits);
    const auto& rr = std::get<RangeRestriction>(a);
    return relevant_from_reduction(reduce_rr(o, rr.role, rr.name), limits);
}

std::set<Variable> relevant_variables_iq(const Ontology& o, const Concept& c, const Individual& a, const Limits& limits)
{
    if (!o.signature().individuals.count(a)) return {};
    return relevant_from_reduction(reduce_iq(o, c, a), limits);
}

bool is_relevant(const Ontology& o, const Axiom& a, const Variable& v, const Limits& limits)
{
    return relevant_variables(o, a, limits).count(v) > 0;
}

bool is_relevant_iq(const Ontology& o, const Concept& c, const Individual& a, const Variable& v, const Limits& limits)
{
    return relevant_variables_iq(o, c, a, limits).count(v) > 0;
}

}  // namespace elprov
