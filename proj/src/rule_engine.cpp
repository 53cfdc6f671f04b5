#include "rule_engine.hpp"

#include <algorithm>

namespace elprov::detail {

int arity(Pred p)
{
    switch (p) {
    case CONJ:
    case EXQ:
    case RA: return 3;
    default: return 2;
    }
}

struct Term {
    bool is_var;
    Id v;
};

struct Atom {
    Pred pred;
    std::array<Term, 3> args;
};

struct Rule {
    int number;
    std::vector<Atom> body;
    Atom head;
};

namespace {

constexpr Term V(Id i) { return {true, i}; }
constexpr Term T() { return {false, kTopId}; }
constexpr Term kNone = {false, 0};  // unused third slot

Atom at(Pred p, Term a, Term b, Term c = kNone) { return {p, {a, b, c}}; }

// Variables are numbered per rule; concept and role positions are implied
// by the predicate.
const std::vector<Rule>& rules()
{
    static const std::vector<Rule> table = {
        {1, {at(RI, V(0), V(1)), at(RI, V(1), V(2))}, at(RI, V(0), V(2))},
        {2, {at(RI, V(0), V(1)), at(RR, V(1), V(2))}, at(RR, V(0), V(2))},
        {3, {at(EX, V(0), V(1)), at(RI, V(1), V(2))}, at(EX, V(0), V(2))},
        {4, {at(SUB, V(0), V(1)), at(SUB, V(1), V(2))}, at(SUB, V(0), V(2))},
        {5, {at(SUB, V(0), V(1)), at(EX, V(1), V(2))}, at(EX, V(0), V(2))},
        {6, {at(SUB, V(0), V(1)), at(SUB, V(0), V(2)), at(CONJ, V(1), V(2), V(3))}, at(SUB, V(0), V(3))},
        {7,
         {at(RR, V(0), V(1)), at(RR, V(0), V(2)), at(SUB, V(1), V(3)), at(SUB, V(2), V(4)),
          at(CONJ, V(3), V(4), V(5))},
         at(RR, V(0), V(5))},
        {8, {at(CONJ, V(0), V(1), V(2)), at(SUB, T(), V(1))}, at(SUB, V(0), V(2))},
        // EX(A,S) RR(S,B) SUB(B,C) RI(S,R) EXQ(R,C,D) -> SUB(A,D)
        {9,
         {at(EX, V(0), V(1)), at(RR, V(1), V(2)), at(SUB, V(2), V(3)), at(RI, V(1), V(4)),
          at(EXQ, V(4), V(3), V(5))},
         at(SUB, V(0), V(5))},
        {10, {at(EX, V(0), V(1)), at(SUB, T(), V(2)), at(EXQ, V(1), V(2), V(3))}, at(SUB, V(0), V(3))},
        {12, {at(RA, V(0), V(1), V(2)), at(RI, V(0), V(3))}, at(RA, V(3), V(1), V(2))},
        {13, {at(CA, V(0), V(1)), at(SUB, V(0), V(2))}, at(CA, V(2), V(1))},
        {14, {at(CA, V(0), V(2)), at(CA, V(1), V(2)), at(CONJ, V(0), V(1), V(3))}, at(CA, V(3), V(2))},
        // RA(R,a,b) CA(A,b) EXQ(R,A,B) -> CA(B,a)
        {15, {at(RA, V(0), V(1), V(2)), at(CA, V(3), V(2)), at(EXQ, V(0), V(3), V(4))}, at(CA, V(4), V(1))},
        {16, {at(RA, V(0), V(1), V(2)), at(RR, V(0), V(3))}, at(CA, V(3), V(2))},
    };
    return table;
}

constexpr Id kUnbound = ~Id{0};
constexpr std::size_t kMaxVars = 8;
using Binding = std::array<Id, kMaxVars>;

bool unify(const Atom& a, const std::array<Id, 3>& args, Binding& b)
{
    int n = arity(a.pred);
    for (int i = 0; i < n; ++i) {
        const Term& t = a.args[i];
        if (!t.is_var) {
            if (t.v != args[i]) return false;
        } else if (b[t.v] == kUnbound) {
            b[t.v] = args[i];
        } else if (b[t.v] != args[i]) {
            return false;
        }
    }
    return true;
}

VarSet merge(const VarSet& a, const VarSet& b)
{
    VarSet r;
    r.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

std::size_t union_size(const VarSet& a, const VarSet& b)
{
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else
            ++i, ++j;
        ++n;
    }
    return n + static_cast<std::size_t>(a.end() - i) + static_cast<std::size_t>(b.end() - j);
}

}  // namespace

std::size_t Engine::KeyHash::operator()(const Key& k) const
{
    std::size_t h = k.pred;
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (Id a : k.args) mix(a);
    for (Id v : k.mon) mix(v);
    mix(k.mon.size());
    return h;
}

Engine::Engine(EngineConfig cfg) : cfg_(std::move(cfg)), start_(std::chrono::steady_clock::now()) {}

VarSet Engine::partition_of(const VarSet& mon) const
{
    VarSet out;
    for (Id v : mon)
        if (v < cfg_.partition_vars.size() && cfg_.partition_vars[v]) out.push_back(v);
    return out;
}

void Engine::add(Pred p, std::array<Id, 3> args, VarSet mon, int rule)
{
    if (rule >= 0 && cfg_.disabled.test(static_cast<std::size_t>(rule))) return;
    if (p == CONJ && args[0] != args[1]) add_one(p, {args[1], args[0], args[2]}, mon, rule, true);
    add_one(p, args, std::move(mon), rule, false);
}

void Engine::add_one(Pred p, const std::array<Id, 3>& args, VarSet mon, int rule, bool mirror)
{
    if (cfg_.policy == Policy::Insert) {
        if (cfg_.max_degree && mon.size() > *cfg_.max_degree) return;
        Key key{p, args, mon};
        auto it = lookup_.find(key);
        if (it != lookup_.end()) {
            ++facts_[it->second].derivations;
            return;
        }
        lookup_.emplace(std::move(key), static_cast<Id>(facts_.size()));
    } else {
        Key key{p, args, partition_of(mon)};
        auto it = lookup_.find(key);
        if (it != lookup_.end()) {
            Fact& f = facts_[it->second];
            ++f.derivations;
            if (std::includes(f.mon.begin(), f.mon.end(), mon.begin(), mon.end())) return;
            f.mon = merge(f.mon, mon);
            ++stats_.updates;
            if (rule >= 0) ++stats_.rule_applications[static_cast<std::size_t>(rule)];
            if (!f.queued) {
                f.queued = true;
                queue_.push_back(it->second);
            }
            return;
        }
        lookup_.emplace(std::move(key), static_cast<Id>(facts_.size()));
    }
    Fact f;
    f.pred = p;
    f.args = args;
    f.mon = std::move(mon);
    f.derivations = 1;
    f.mirror = mirror;
    f.queued = true;
    facts_.push_back(std::move(f));
    queue_.push_back(static_cast<Id>(facts_.size() - 1));
    ++stats_.updates;
    if (rule >= 0) ++stats_.rule_applications[static_cast<std::size_t>(rule)];
    if (facts_.size() > cfg_.max_facts)
        throw CapExceeded{"derived axiom limit of " + std::to_string(cfg_.max_facts) + " exceeded", stats_,
                          facts_.size()};
}

void Engine::check_limits()
{
    if (cfg_.time_budget.count() == 0) return;
    if (std::chrono::steady_clock::now() - start_ > cfg_.time_budget)
        throw CapExceeded{"time budget of " + std::to_string(cfg_.time_budget.count()) + " ms exceeded", stats_,
                          facts_.size()};
}

struct Joiner {
    Engine& e;
    const Rule& rule;

    void join(unsigned used, Binding& b, const VarSet& mon)
    {
        const auto n = static_cast<unsigned>(rule.body.size());
        if (used == (1u << n) - 1) {
            emit(b, mon);
            return;
        }
        // Most constrained remaining premise first.
        int best = -1;
        int best_bound = -1;
        for (unsigned j = 0; j < n; ++j) {
            if (used & (1u << j)) continue;
            const Atom& a = rule.body[j];
            int bound = 0;
            for (int i = 0; i < arity(a.pred); ++i)
                if (!a.args[i].is_var || b[a.args[i].v] != kUnbound) ++bound;
            if (bound > best_bound) {
                best_bound = bound;
                best = static_cast<int>(j);
            }
        }
        const Atom& a = rule.body[static_cast<unsigned>(best)];
        const std::vector<Id>* candidates = &e.all_[a.pred];
        for (int i = 0; i < arity(a.pred); ++i) {
            Id value = a.args[i].is_var ? b[a.args[i].v] : a.args[i].v;
            if (value == kUnbound) continue;
            auto& idx = e.index_[a.pred][static_cast<std::size_t>(i)];
            auto it = idx.find(value);
            if (it == idx.end()) return;
            if (it->second.size() < candidates->size()) candidates = &it->second;
        }
        const auto& k = e.cfg_.max_degree;
        const bool bounded = e.cfg_.policy == Policy::Insert && k.has_value();
        for (std::size_t ci = 0; ci < candidates->size(); ++ci) {
            Id cid = (*candidates)[ci];
            if (++e.stats_.join_steps % 4096 == 0) e.check_limits();
            const Fact& c = e.facts_[cid];
            Binding b2 = b;
            if (!unify(a, c.args, b2)) continue;
            if (bounded && union_size(mon, c.mon) > *k) continue;
            VarSet m2 = merge(mon, e.facts_[cid].mon);
            join(used | (1u << static_cast<unsigned>(best)), b2, m2);
        }
    }

    void emit(const Binding& b, const VarSet& mon)
    {
        std::array<Id, 3> args{};
        for (int i = 0; i < arity(rule.head.pred); ++i) {
            const Term& t = rule.head.args[i];
            args[i] = t.is_var ? b[t.v] : t.v;
        }
        e.add_one(rule.head.pred, args, mon, rule.number, false);
    }
};

void Engine::process(Id fid)
{
    const Pred p = facts_[fid].pred;
    const std::array<Id, 3> args = facts_[fid].args;
    const VarSet mon = facts_[fid].mon;
    for (const Rule& r : rules()) {
        if (cfg_.disabled.test(static_cast<std::size_t>(r.number))) continue;
        Joiner j{*this, r};
        for (unsigned i = 0; i < r.body.size(); ++i) {
            if (r.body[i].pred != p) continue;
            Binding b;
            b.fill(kUnbound);
            if (!unify(r.body[i], args, b)) continue;
            j.join(1u << i, b, mon);
        }
    }
}

void Engine::run()
{
    while (head_ < queue_.size()) {
        Id id = queue_[head_++];
        Fact& f = facts_[id];
        f.queued = false;
        if (!f.indexed) {
            f.indexed = true;
            all_[f.pred].push_back(id);
            for (int i = 0; i < arity(f.pred); ++i) index_[f.pred][static_cast<std::size_t>(i)][f.args[i]].push_back(id);
        }
        process(id);
        check_limits();
    }
}

}  // namespace elprov::detail
