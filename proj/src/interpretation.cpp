#include "elprov/interpretation.hpp"

#include <algorithm>
#include <cctype>

namespace elprov {

std::string DomainElement::str() const
{
    if (kind == Kind::Named) return name;
    return "d_" + name + "^{" + mon.str() + "}";
}

ElementId Interpretation::named(const Individual& a)
{
    DomainElement e{DomainElement::Kind::Named, a, {}};
    auto [it, fresh] = element_ids_.emplace(e, elements_.size());
    if (fresh) elements_.push_back(e);
    return it->second;
}

ElementId Interpretation::aux(const RoleName& r, const Monomial& m)
{
    DomainElement e{DomainElement::Kind::Aux, r, m};
    auto [it, fresh] = element_ids_.emplace(e, elements_.size());
    if (fresh) elements_.push_back(e);
    return it->second;
}

std::optional<ElementId> Interpretation::find_named(const Individual& a) const
{
    auto it = element_ids_.find({DomainElement::Kind::Named, a, {}});
    if (it == element_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<ElementId> Interpretation::find_aux(const RoleName& r, const Monomial& m) const
{
    auto it = element_ids_.find({DomainElement::Kind::Aux, r, m});
    if (it == element_ids_.end()) return std::nullopt;
    return it->second;
}

bool Interpretation::add_concept(const ConceptName& a, ElementId d, const Monomial& m)
{
    if (a == kTop) return false;
    return concepts_[a].emplace(d, m).second;
}

bool Interpretation::add_role(const RoleName& r, ElementId d, ElementId e, const Monomial& m)
{
    return roles_[r].emplace(d, e, m).second;
}

std::set<ConceptPair> Interpretation::concept_extension(const ConceptName& a) const
{
    if (a == kTop) {
        std::set<ConceptPair> out;
        for (ElementId i = 0; i < elements_.size(); ++i) out.emplace(i, Monomial::one());
        return out;
    }
    auto it = concepts_.find(a);
    return it == concepts_.end() ? std::set<ConceptPair>{} : it->second;
}

const std::set<RoleTriple>& Interpretation::role_extension(const RoleName& r) const
{
    static const std::set<RoleTriple> empty;
    auto it = roles_.find(r);
    return it == roles_.end() ? empty : it->second;
}

nlohmann::json Interpretation::to_json() const
{
    using nlohmann::json;
    json elems = json::array();
    for (const auto& e : elements_) {
        json j{{"id", e.str()}, {"kind", e.is_aux() ? "aux" : "named"}};
        if (e.is_aux()) {
            j["role"] = e.name;
            j["monomial"] = e.mon.str();
        }
        elems.push_back(std::move(j));
    }
    json concepts = json::object();
    for (const auto& [name, ext] : concepts_) {
        std::set<std::pair<std::string, std::string>> rows;
        for (const auto& [d, m] : ext) rows.emplace(elements_[d].str(), m.str());
        json arr = json::array();
        for (const auto& [d, m] : rows) arr.push_back({d, m});
        concepts[name] = std::move(arr);
    }
    json roles = json::object();
    for (const auto& [name, ext] : roles_) {
        std::set<std::tuple<std::string, std::string, std::string>> rows;
        for (const auto& [d, e, m] : ext) rows.emplace(elements_[d].str(), elements_[e].str(), m.str());
        json arr = json::array();
        for (const auto& [d, e, m] : rows) arr.push_back({d, e, m});
        roles[name] = std::move(arr);
    }
    return json{{"elements", elems}, {"concepts", concepts}, {"roles", roles}};
}

// -------------------------------------------------------------- semantics

std::set<ConceptPair> extend_range(const Interpretation& I, const RoleName& r)
{
    std::set<ConceptPair> out;
    for (const auto& [d, e, m] : I.role_extension(r)) out.emplace(e, m);
    return out;
}

std::set<ConceptPair> extend_concept(const Interpretation& I, const Concept& c)
{
    switch (c.kind) {
    case Concept::Kind::Top:
    case Concept::Kind::Atomic: return I.concept_extension(c.is_top() ? std::string(kTop) : c.name);
    case Concept::Kind::And: {
        auto l = extend_concept(I, c.lhs());
        auto r = extend_concept(I, c.rhs());
        std::multimap<ElementId, Monomial> by_elem;
        for (const auto& [d, m] : r) by_elem.emplace(d, m);
        std::set<ConceptPair> out;
        for (const auto& [d, m] : l) {
            auto [lo, hi] = by_elem.equal_range(d);
            for (auto it = lo; it != hi; ++it) out.emplace(d, m * it->second);
        }
        return out;
    }
    case Concept::Kind::Exists:
    case Concept::Kind::ExistsTop: {
        auto filler = c.kind == Concept::Kind::Exists ? extend_concept(I, c.filler()) : I.concept_extension(std::string(kTop));
        std::multimap<ElementId, Monomial> by_elem;
        for (const auto& [d, m] : filler) by_elem.emplace(d, m);
        std::set<ConceptPair> out;
        for (const auto& [d, e, m] : I.role_extension(c.name)) {
            auto [lo, hi] = by_elem.equal_range(e);
            for (auto it = lo; it != hi; ++it) out.emplace(d, m * it->second);
        }
        return out;
    }
    }
    return {};
}

bool satisfies(const Interpretation& I, const AnnotatedAxiom& ax)
{
    const Monomial& v = ax.annotation;
    if (auto* g = std::get_if<ConceptInclusion>(&ax.axiom)) {
        auto rhs = extend_concept(I, g->rhs);
        for (const auto& [d, n] : extend_concept(I, g->lhs))
            if (!rhs.count({d, v * n})) return false;
        return true;
    }
    if (auto* ri = std::get_if<RoleInclusion>(&ax.axiom)) {
        const auto& sup = I.role_extension(ri->sup);
        for (const auto& [d, e, n] : I.role_extension(ri->sub))
            if (!sup.count({d, e, v * n})) return false;
        return true;
    }
    if (auto* rr = std::get_if<RangeRestriction>(&ax.axiom)) {
        auto ext = I.concept_extension(rr->name);
        for (const auto& [e, n] : extend_range(I, rr->role))
            if (!ext.count({e, v * n})) return false;
        return true;
    }
    if (auto* ca = std::get_if<ConceptAssertion>(&ax.axiom)) {
        auto d = I.find_named(ca->individual);
        return d && I.concept_extension(ca->name).count({*d, v});
    }
    const auto& ra = std::get<RoleAssertion>(ax.axiom);
    auto d = I.find_named(ra.subject);
    auto e = I.find_named(ra.object);
    return d && e && I.role_extension(ra.role).count({*d, *e, v});
}

bool is_model(const Interpretation& I, const Ontology& o)
{
    return std::all_of(o.axioms().begin(), o.axioms().end(), [&](const auto& a) { return satisfies(I, a); });
}

// ---------------------------------------------------------------- queries

std::string QueryAtom::str() const
{
    if (is_role) return predicate + "(" + t1.str() + ", " + t2.str() + ", ?" + prov + ")";
    return predicate + "(" + t1.str() + ", ?" + prov + ")";
}

std::set<Term> Query::object_terms() const
{
    std::set<Term> out;
    for (const auto& a : atoms) {
        out.insert(a.t1);
        if (a.is_role) out.insert(a.t2);
    }
    return out;
}

std::string Query::str() const
{
    std::string out;
    for (const auto& a : atoms) {
        if (!out.empty()) out += " & ";
        out += a.str();
    }
    return out;
}

QueryParseError::QueryParseError(int line, int column, const std::string& msg)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column)
{
}

namespace {

struct QTok {
    enum Kind { Ident, Var, LParen, RParen, Comma, Amp, End } kind;
    std::string text;
    int line, col;
};

std::vector<QTok> lex_query(std::string_view s)
{
    std::vector<QTok> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto ident_len = [&](std::size_t j) {
        std::size_t k = j;
        if (k < s.size() && (std::isalpha(static_cast<unsigned char>(s[k])) || s[k] == '_')) {
            ++k;
            while (k < s.size() && (std::isalnum(static_cast<unsigned char>(s[k])) || s[k] == '_')) ++k;
        }
        return k - j;
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            ++col;
            continue;
        }
        QTok t{QTok::End, std::string(1, c), line, col};
        std::size_t len = 1;
        switch (c) {
        case '(': t.kind = QTok::LParen; break;
        case ')': t.kind = QTok::RParen; break;
        case ',': t.kind = QTok::Comma; break;
        case '&': t.kind = QTok::Amp; break;
        case '?': {
            auto n = ident_len(i + 1);
            if (n == 0) throw QueryParseError(line, col, "expected variable name after '?'");
            t.kind = QTok::Var;
            t.text = std::string(s.substr(i + 1, n));
            len = n + 1;
            break;
        }
        default: {
            auto n = ident_len(i);
            if (n == 0) throw QueryParseError(line, col, std::string("unexpected character '") + c + "'");
            t.kind = QTok::Ident;
            t.text = std::string(s.substr(i, n));
            len = n;
        }
        }
        out.push_back(std::move(t));
        i += len;
        col += static_cast<int>(len);
    }
    out.push_back({QTok::End, "", line, col});
    return out;
}

}  // namespace

Query parse_query(std::string_view text)
{
    auto toks = lex_query(text);
    std::size_t p = 0;
    auto fail = [&](const std::string& msg) -> QueryParseError {
        return QueryParseError(toks[p].line, toks[p].col, msg);
    };
    Query q;
    std::map<std::string, std::pair<int, int>> var_uses;  // object variable -> first position
    std::map<std::string, std::pair<int, int>> prov_vars;
    std::map<std::string, std::size_t> arity;
    while (true) {
        if (toks[p].kind != QTok::Ident) throw fail("expected predicate name");
        QueryAtom atom;
        atom.predicate = toks[p].text;
        if (is_reserved_name(atom.predicate)) throw fail("names starting with '__' are reserved");
        ++p;
        if (toks[p].kind != QTok::LParen) throw fail("expected '('");
        ++p;
        std::vector<QTok> args;
        while (true) {
            if (toks[p].kind != QTok::Ident && toks[p].kind != QTok::Var) throw fail("expected term");
            args.push_back(toks[p++]);
            if (toks[p].kind == QTok::Comma) {
                ++p;
                continue;
            }
            if (toks[p].kind != QTok::RParen) throw fail("expected ',' or ')'");
            ++p;
            break;
        }
        if (args.size() != 2 && args.size() != 3)
            throw QueryParseError(args[0].line, args[0].col, "atoms take 2 (concept) or 3 (role) arguments");
        const QTok& pv = args.back();
        if (pv.kind != QTok::Var)
            throw QueryParseError(pv.line, pv.col, "last argument must be a provenance variable");
        if (auto [it, fresh] = arity.emplace(atom.predicate, args.size()); !fresh && it->second != args.size())
            throw QueryParseError(args[0].line, args[0].col,
                                  "'" + atom.predicate + "' used with " + std::to_string(args.size()) + " and " +
                                      std::to_string(it->second) + " arguments");
        if (!prov_vars.emplace(pv.text, std::pair{pv.line, pv.col}).second)
            throw QueryParseError(pv.line, pv.col, "provenance variable ?" + pv.text + " used twice");
        atom.prov = pv.text;
        auto term = [&](const QTok& t) {
            if (t.kind == QTok::Var) {
                var_uses.emplace(t.text, std::pair{t.line, t.col});
                return Term{Term::Kind::Variable, t.text};
            }
            if (is_reserved_name(t.text))
                throw QueryParseError(t.line, t.col, "names starting with '__' are reserved");
            return Term{Term::Kind::Individual, t.text};
        };
        atom.t1 = term(args[0]);
        atom.is_role = args.size() == 3;
        if (atom.is_role) atom.t2 = term(args[1]);
        q.atoms.push_back(std::move(atom));
        if (toks[p].kind == QTok::End) break;
        if (toks[p].kind != QTok::Amp) throw fail("expected '&' between atoms");
        ++p;
    }
    for (const auto& [v, pos] : prov_vars)
        if (auto it = var_uses.find(v); it != var_uses.end())
            throw QueryParseError(std::max(pos, it->second).first, std::max(pos, it->second).second,
                                  "?" + v + " is used both as provenance and object variable");
    return q;
}

Monomial Match::product() const
{
    Monomial m;
    for (const auto& [v, n] : prov) m *= n;
    return m;
}

namespace {

class Matcher {
public:
    Matcher(const Interpretation& I, const Query& q, const SideConditions* side) : I_(I), q_(q), side_(side)
    {
        for (const auto& a : q.atoms) {
            if (!a.is_role) concept_ext_.push_back(I.concept_extension(a.predicate));
            else concept_ext_.emplace_back();
        }
    }

    std::vector<Match> run()
    {
        std::vector<bool> done(q_.atoms.size(), false);
        Match m;
        for (const auto& t : q_.object_terms()) {
            if (t.is_var()) continue;
            auto e = I_.find_named(t.name);
            if (!e) throw UnknownIndividual("query individual '" + t.name + "' is not in the interpretation");
            m.objects[t] = *e;
        }
        search(done, 0, m);
        std::sort(out_.begin(), out_.end());
        return out_;
    }

private:
    bool bound(const Match& m, const Term& t) const { return m.objects.count(t) > 0; }

    bool bind(Match& m, const Term& t, ElementId e) const
    {
        auto it = m.objects.find(t);
        if (it != m.objects.end()) return it->second == e;
        if (side_ && t.is_var() && side_->not_aux.count(t.name) && I_.element(e).is_aux()) return false;
        m.objects.emplace(t, e);
        return true;
    }

    bool side_ok(const Match& m) const
    {
        if (!side_) return true;
        for (const auto& eq : side_->equalities) {
            auto rep = m.objects.at(eq.rep);
            if (!I_.element(rep).is_aux()) continue;
            std::optional<ElementId> first;
            for (const auto& t : eq.same) {
                auto e = m.objects.at(t);
                if (first && *first != e) return false;
                first = e;
            }
        }
        return true;
    }

    void search(std::vector<bool>& done, std::size_t depth, Match& m)
    {
        if (depth == q_.atoms.size()) {
            if (side_ok(m)) out_.push_back(m);
            return;
        }
        // Prefer atoms whose object terms are already bound.
        std::size_t pick = q_.atoms.size();
        int best = -1;
        for (std::size_t i = 0; i < q_.atoms.size(); ++i) {
            if (done[i]) continue;
            const auto& a = q_.atoms[i];
            int score = bound(m, a.t1) + (a.is_role ? bound(m, a.t2) : 1);
            if (score > best) {
                best = score;
                pick = i;
            }
        }
        const auto& a = q_.atoms[pick];
        done[pick] = true;
        if (a.is_role) {
            for (const auto& [d, e, n] : I_.role_extension(a.predicate)) {
                Match next = m;
                if (!bind(next, a.t1, d) || !bind(next, a.t2, e)) continue;
                next.prov[a.prov] = n;
                search(done, depth + 1, next);
            }
        } else {
            for (const auto& [d, n] : concept_ext_[pick]) {
                Match next = m;
                if (!bind(next, a.t1, d)) continue;
                next.prov[a.prov] = n;
                search(done, depth + 1, next);
            }
        }
        done[pick] = false;
    }

    const Interpretation& I_;
    const Query& q_;
    const SideConditions* side_;
    std::vector<std::set<ConceptPair>> concept_ext_;
    std::vector<Match> out_;
};

}  // namespace

std::vector<Match> enumerate_matches(const Interpretation& I, const Query& q, const SideConditions* side)
{
    return Matcher(I, q, side).run();
}

Polynomial query_provenance(const Interpretation& I, const Query& q, const SideConditions* side)
{
    Polynomial p;
    for (const auto& m : enumerate_matches(I, q, side)) p += Polynomial(m.product());
    return p;
}

}  // namespace elprov
