#include "elprov/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace elprov {

// ---------------------------------------------------------------- concepts

bool operator==(const Concept& a, const Concept& b)
{
    return a.kind == b.kind && a.name == b.name && a.args == b.args;
}

std::strong_ordering operator<=>(const Concept& a, const Concept& b)
{
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.name <=> b.name; c != 0) return c;
    auto n = std::min(a.args.size(), b.args.size());
    for (std::size_t i = 0; i < n; ++i)
        if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
    return a.args.size() <=> b.args.size();
}

std::string Concept::str() const
{
    switch (kind) {
    case Kind::Top: return std::string(kTop);
    case Kind::Atomic: return name;
    case Kind::And: return "and(" + lhs().str() + ", " + rhs().str() + ")";
    case Kind::Exists: return "some(" + name + ", " + filler().str() + ")";
    case Kind::ExistsTop: return "some(" + name + ")";
    }
    return {};
}

namespace {

struct AxiomPrinter {
    std::string operator()(const ConceptInclusion& g) const { return "gci " + g.lhs.str() + " <= " + g.rhs.str(); }
    std::string operator()(const RoleInclusion& r) const { return "ri " + r.sub + " <= " + r.sup; }
    std::string operator()(const RangeRestriction& r) const { return "rr ran(" + r.role + ") <= " + r.name; }
    std::string operator()(const ConceptAssertion& a) const { return "ca " + a.name + "(" + a.individual + ")"; }
    std::string operator()(const RoleAssertion& a) const
    {
        return "ra " + a.role + "(" + a.subject + ", " + a.object + ")";
    }
};

}  // namespace

std::string to_string(const Axiom& a) { return std::visit(AxiomPrinter{}, a); }

std::string to_string(const AnnotatedAxiom& a) { return to_string(a.axiom) + " @ " + a.annotation.str(); }

Ontology::Ontology(std::initializer_list<AnnotatedAxiom> axioms) : axioms_(axioms) {}

void collect(const Concept& c, Signature& sig)
{
    switch (c.kind) {
    case Concept::Kind::Top: sig.mentions_top = true; break;
    case Concept::Kind::Atomic: sig.concepts.insert(c.name); break;
    case Concept::Kind::And:
        collect(c.lhs(), sig);
        collect(c.rhs(), sig);
        break;
    case Concept::Kind::Exists:
        sig.roles.insert(c.name);
        collect(c.filler(), sig);
        break;
    case Concept::Kind::ExistsTop: sig.roles.insert(c.name); break;
    }
}

void collect(const Axiom& a, Signature& sig)
{
    auto concept_name = [&](const ConceptName& n) {
        if (n == kTop)
            sig.mentions_top = true;
        else
            sig.concepts.insert(n);
    };
    if (auto* g = std::get_if<ConceptInclusion>(&a)) {
        collect(g->lhs, sig);
        collect(g->rhs, sig);
    } else if (auto* r = std::get_if<RoleInclusion>(&a)) {
        sig.roles.insert(r->sub);
        sig.roles.insert(r->sup);
    } else if (auto* rr = std::get_if<RangeRestriction>(&a)) {
        sig.roles.insert(rr->role);
        concept_name(rr->name);
    } else if (auto* ca = std::get_if<ConceptAssertion>(&a)) {
        concept_name(ca->name);
        sig.individuals.insert(ca->individual);
    } else if (auto* ra = std::get_if<RoleAssertion>(&a)) {
        sig.roles.insert(ra->role);
        sig.individuals.insert(ra->subject);
        sig.individuals.insert(ra->object);
    }
}

Signature Ontology::signature() const
{
    Signature sig;
    for (const auto& ax : axioms_) {
        collect(ax.axiom, sig);
        sig.variables.insert(ax.annotation.vars().begin(), ax.annotation.vars().end());
    }
    return sig;
}

std::set<std::string> all_names(const Ontology& o)
{
    auto sig = o.signature();
    std::set<std::string> out;
    out.insert(sig.concepts.begin(), sig.concepts.end());
    out.insert(sig.roles.begin(), sig.roles.end());
    out.insert(sig.individuals.begin(), sig.individuals.end());
    out.insert(sig.variables.begin(), sig.variables.end());
    return out;
}

std::string FreshNames::next(const std::string& prefix)
{
    auto& n = counters_[prefix];
    while (true) {
        std::string candidate = prefix + std::to_string(++n);
        if (used_.insert(candidate).second) return candidate;
    }
}

// ------------------------------------------------------------------ parser

ParseError::ParseError(Kind kind, int line, int column, const std::string& msg)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      kind_(kind), line_(line), column_(column), detail_(msg)
{
}

namespace {

enum class Tok { Ident, One, LParen, RParen, Comma, Leq, At, Star, End };

struct Token {
    Tok type;
    std::string text;
    int col;
};

const std::set<std::string, std::less<>> kKeywords = {"Top", "and", "some", "ran"};

struct Use {
    std::string name;
    int col;
};

class LineParser {
public:
    LineParser(std::string_view line, int lineno, const ParseOptions& opts) : lineno_(lineno), opts_(opts)
    {
        tokenize(line);
    }

    bool at_end() const { return peek().type == Tok::End; }

    [[noreturn]] void fail(const std::string& msg, ParseError::Kind kind = ParseError::Kind::Syntax) const
    {
        throw ParseError(kind, lineno_, peek().col, msg);
    }
    [[noreturn]] void fail_at(int col, const std::string& msg, ParseError::Kind kind) const
    {
        throw ParseError(kind, lineno_, col, msg);
    }

    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

    void expect(Tok t, const char* what)
    {
        if (peek().type != t) fail(std::string("expected ") + what + describe_found());
        take();
    }

    std::string describe_found() const
    {
        const auto& t = peek();
        if (t.type == Tok::End) return ", found end of line";
        return ", found '" + t.text + "'";
    }

    // A user-level name (concept, role, individual).
    std::string name(const char* what)
    {
        if (peek().type != Tok::Ident) fail(std::string("expected ") + what + describe_found());
        auto t = take();
        if (kKeywords.count(t.text)) fail_at(t.col, "'" + t.text + "' is a keyword, not a " + what, ParseError::Kind::Syntax);
        check_reserved(t);
        last_col_ = t.col;
        return t.text;
    }

    std::string use(std::vector<Use>& uses, const char* what)
    {
        auto n = name(what);
        uses.push_back({n, last_col_});
        return n;
    }

    void check_reserved(const Token& t) const
    {
        if (!opts_.allow_reserved && is_reserved_name(t.text))
            fail_at(t.col, "names starting with '__' are reserved: '" + t.text + "'", ParseError::Kind::ReservedName);
    }

    Concept parse_concept_expr()
    {
        if (peek().type != Tok::Ident) fail("expected concept" + describe_found());
        const auto& t = peek();
        if (t.text == "Top") {
            take();
            return Concept::top();
        }
        if (t.text == "and" && toks_[pos_ + 1].type == Tok::LParen) {
            take();
            take();
            Concept c = parse_concept_expr();
            expect(Tok::Comma, "',' in and(...)");
            c = Concept::conj(std::move(c), parse_concept_expr());
            while (peek().type == Tok::Comma) {
                take();
                c = Concept::conj(std::move(c), parse_concept_expr());
            }
            expect(Tok::RParen, "')'");
            return c;
        }
        if (t.text == "some" && toks_[pos_ + 1].type == Tok::LParen) {
            take();
            take();
            auto role = use(roles_, "role name");
            if (peek().type == Tok::RParen) {
                take();
                return Concept::some(role);
            }
            expect(Tok::Comma, "',' or ')'");
            Concept filler = parse_concept_expr();
            expect(Tok::RParen, "')'");
            return Concept::some(role, std::move(filler));
        }
        return Concept::atomic(use(concepts_, "concept name"));
    }

    Monomial annotation()
    {
        int col = peek().col;
        std::vector<Variable> vars;
        std::size_t factors = 0;
        while (true) {
            auto t = take();
            if (t.type == Tok::One) {
                ++factors;
            } else if (t.type == Tok::Ident) {
                if (kKeywords.count(t.text)) fail_at(t.col, "'" + t.text + "' is a keyword, not a variable", ParseError::Kind::Syntax);
                check_reserved(t);
                variables_.push_back({t.text, t.col});
                vars.push_back(t.text);
                ++factors;
            } else {
                fail_at(t.col, "expected annotation (variable or 1)", ParseError::Kind::Syntax);
            }
            if (peek().type != Tok::Star) break;
            take();
        }
        if (!opts_.derived && factors > 1)
            fail_at(col, "annotation must be a single variable or 1", ParseError::Kind::AnnotationNotVariable);
        return Monomial(std::move(vars));
    }

    std::vector<Use> concepts_, roles_, individuals_, variables_;
    int lineno_;

private:
    void tokenize(std::string_view line)
    {
        std::size_t i = 0;
        while (i < line.size()) {
            char c = line[i];
            int col = static_cast<int>(i) + 1;
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else if (c == '#') {
                break;
            } else if (c == '(') {
                toks_.push_back({Tok::LParen, "(", col});
                ++i;
            } else if (c == ')') {
                toks_.push_back({Tok::RParen, ")", col});
                ++i;
            } else if (c == ',') {
                toks_.push_back({Tok::Comma, ",", col});
                ++i;
            } else if (c == '@') {
                toks_.push_back({Tok::At, "@", col});
                ++i;
            } else if (c == '*') {
                toks_.push_back({Tok::Star, "*", col});
                ++i;
            } else if (c == '<' && i + 1 < line.size() && line[i + 1] == '=') {
                toks_.push_back({Tok::Leq, "<=", col});
                i += 2;
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = i;
                while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
                toks_.push_back({Tok::Ident, std::string(line.substr(i, j - i)), col});
                i = j;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = i;
                while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
                auto num = line.substr(i, j - i);
                if (num != "1") throw ParseError(ParseError::Kind::Syntax, lineno_, col, "unexpected number '" + std::string(num) + "'");
                toks_.push_back({Tok::One, "1", col});
                i = j;
            } else {
                throw ParseError(ParseError::Kind::Syntax, lineno_, col, std::string("unexpected character '") + c + "'");
            }
        }
        toks_.push_back({Tok::End, "", static_cast<int>(line.size()) + 1});
    }

    const ParseOptions& opts_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int last_col_ = 0;
};

// Lhs "some(R)" is stored as some(R, Top).
Concept canonical_lhs(Concept c)
{
    switch (c.kind) {
    case Concept::Kind::ExistsTop: return Concept::some(c.name, Concept::top());
    case Concept::Kind::And: return Concept::conj(canonical_lhs(c.lhs()), canonical_lhs(c.rhs()));
    case Concept::Kind::Exists: return Concept::some(c.name, canonical_lhs(c.filler()));
    default: return c;
    }
}

struct ParsedLine {
    std::variant<Axiom, InstanceQueryTarget> target;
    std::optional<Monomial> annotation;
    bool general_rhs = false;
};

ParsedLine parse_line(LineParser& p, bool with_annotation, bool allow_iq, const ParseOptions& opts)
{
    ParsedLine out;
    if (p.peek().type != Tok::Ident) p.fail("expected axiom keyword (gci, ri, rr, ca, ra)" + p.describe_found());
    auto kw = p.take();
    if (kw.text == "gci") {
        Concept lhs = canonical_lhs(p.parse_concept_expr());
        p.expect(Tok::Leq, "'<='");
        int rhs_col = p.peek().col;
        Concept rhs = p.parse_concept_expr();
        if (!is_restricted_rhs(rhs)) {
            bool derived_top = opts.derived && rhs.is_top();
            if (opts.translate_general && !rhs.is_top())
                out.general_rhs = true;
            else if (!derived_top)
                p.fail_at(rhs_col,
                          "right-hand side '" + rhs.str() +
                              "' must be a concept name or some(R); general right-hand sides need translation",
                          ParseError::Kind::RestrictedSyntax);
        }
        out.target = ConceptInclusion{std::move(lhs), std::move(rhs)};
    } else if (kw.text == "ri") {
        auto sub = p.use(p.roles_, "role name");
        p.expect(Tok::Leq, "'<='");
        auto sup = p.use(p.roles_, "role name");
        out.target = RoleInclusion{sub, sup};
    } else if (kw.text == "rr") {
        if (p.peek().type != Tok::Ident || p.peek().text != "ran") p.fail("expected 'ran('" + p.describe_found());
        p.take();
        p.expect(Tok::LParen, "'('");
        auto role = p.use(p.roles_, "role name");
        p.expect(Tok::RParen, "')'");
        p.expect(Tok::Leq, "'<='");
        auto c = p.use(p.concepts_, "concept name");
        out.target = RangeRestriction{role, c};
    } else if (kw.text == "ca") {
        std::string c;
        if (opts.derived && p.peek().type == Tok::Ident && p.peek().text == "Top") {
            p.take();
            c = std::string(kTop);
        } else {
            c = p.use(p.concepts_, "concept name");
        }
        p.expect(Tok::LParen, "'('");
        auto a = p.use(p.individuals_, "individual name");
        p.expect(Tok::RParen, "')'");
        out.target = ConceptAssertion{c, a};
    } else if (kw.text == "ra") {
        auto r = p.use(p.roles_, "role name");
        p.expect(Tok::LParen, "'('");
        auto a = p.use(p.individuals_, "individual name");
        p.expect(Tok::Comma, "','");
        auto b = p.use(p.individuals_, "individual name");
        p.expect(Tok::RParen, "')'");
        out.target = RoleAssertion{r, a, b};
    } else if (kw.text == "iq" && allow_iq) {
        Concept c = p.parse_concept_expr();
        p.expect(Tok::LParen, "'('");
        auto a = p.use(p.individuals_, "individual name");
        p.expect(Tok::RParen, "')'");
        out.target = InstanceQueryTarget{std::move(c), a};
    } else {
        p.fail_at(kw.col, "unknown axiom keyword '" + kw.text + "'", ParseError::Kind::Syntax);
    }
    if (with_annotation) {
        p.expect(Tok::At, "'@' and annotation");
        out.annotation = p.annotation();
    }
    if (!p.at_end()) p.fail("unexpected trailing input" + p.describe_found());
    return out;
}

// Names live in four disjoint namespaces.
class NamespaceChecker {
public:
    void check(const LineParser& p)
    {
        add(p.concepts_, "concept", p.lineno_);
        add(p.roles_, "role", p.lineno_);
        add(p.individuals_, "individual", p.lineno_);
        add(p.variables_, "variable", p.lineno_);
    }

private:
    void add(const std::vector<Use>& uses, const char* ns, int line)
    {
        for (const auto& u : uses) {
            auto [it, fresh] = seen_.emplace(u.name, ns);
            if (!fresh && it->second != ns)
                throw ParseError(ParseError::Kind::NamespaceCollision, line, u.col,
                                 "'" + u.name + "' used as " + ns + " but previously as " + it->second);
        }
    }
    std::map<std::string, std::string> seen_;
};

}  // namespace

Ontology parse_ontology(std::string_view text, const ParseOptions& opts)
{
    Ontology out;
    NamespaceChecker ns;
    std::vector<AnnotatedAxiom> general;
    int lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        ++lineno;
        LineParser p(line, lineno, opts);
        if (!p.at_end()) {
            auto parsed = parse_line(p, true, false, opts);
            ns.check(p);
            AnnotatedAxiom ax{std::get<Axiom>(parsed.target), *parsed.annotation};
            if (parsed.general_rhs)
                general.push_back(std::move(ax));
            else
                out.add(std::move(ax));
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    if (!general.empty()) {
        auto used = all_names(out);
        for (const auto& g : general) {
            Signature sig;
            collect(g.axiom, sig);
            used.insert(sig.concepts.begin(), sig.concepts.end());
            used.insert(sig.roles.begin(), sig.roles.end());
        }
        for (const auto& g : general) {
            const auto& gci = std::get<ConceptInclusion>(g.axiom);
            out.add_all(translate_general_gci(gci.lhs, gci.rhs, g.annotation, used));
        }
    }
    return out;
}

std::variant<Axiom, InstanceQueryTarget> parse_target(std::string_view text, const ParseOptions& opts)
{
    LineParser p(text, 1, opts);
    auto parsed = parse_line(p, false, true, opts);
    NamespaceChecker ns;
    ns.check(p);
    return parsed.target;
}

Axiom parse_axiom(std::string_view text, const ParseOptions& opts)
{
    auto t = parse_target(text, opts);
    if (auto* a = std::get_if<Axiom>(&t)) return *a;
    throw ParseError(ParseError::Kind::Syntax, 1, 1, "expected an axiom, not an instance query");
}

Concept parse_concept(std::string_view text, const ParseOptions& opts)
{
    LineParser p(text, 1, opts);
    Concept c = p.parse_concept_expr();
    if (!p.at_end()) p.fail("unexpected trailing input" + p.describe_found());
    return c;
}

std::string print_ontology(const Ontology& o)
{
    std::string out;
    for (const auto& a : o.axioms()) {
        out += to_string(a);
        out += '\n';
    }
    return out;
}

// ------------------------------------------------------------ translation

bool is_restricted_rhs(const Concept& c)
{
    return c.kind == Concept::Kind::Atomic || c.kind == Concept::Kind::ExistsTop;
}

namespace {

void translate_range(const RoleName& s, const Concept& d, const Monomial& m, std::set<std::string>& used,
                     FreshNames& fresh, Ontology& out);

void translate_rhs(const Concept& lhs, const Concept& rhs, const Monomial& m, std::set<std::string>& used,
                   FreshNames& fresh, Ontology& out)
{
    switch (rhs.kind) {
    case Concept::Kind::Top: return;
    case Concept::Kind::Atomic:
    case Concept::Kind::ExistsTop: out.add(ConceptInclusion{lhs, rhs}, m); return;
    case Concept::Kind::And:
        translate_rhs(lhs, rhs.lhs(), m, used, fresh, out);
        translate_rhs(lhs, rhs.rhs(), m, used, fresh, out);
        return;
    case Concept::Kind::Exists: {
        if (rhs.filler().is_top()) {
            out.add(ConceptInclusion{lhs, Concept::some(rhs.name)}, m);
            return;
        }
        auto s = fresh.next("__role");
        out.add(ConceptInclusion{lhs, Concept::some(s)}, m);
        out.add(RoleInclusion{s, rhs.name}, m);
        translate_range(s, rhs.filler(), m, used, fresh, out);
        return;
    }
    }
}

// ran(s) <= d for a general d. Nested existentials go through a fresh
// concept name carrying the same annotation (harmless: products are idempotent).
void translate_range(const RoleName& s, const Concept& d, const Monomial& m, std::set<std::string>& used,
                     FreshNames& fresh, Ontology& out)
{
    switch (d.kind) {
    case Concept::Kind::Top: return;
    case Concept::Kind::Atomic: out.add(RangeRestriction{s, d.name}, m); return;
    case Concept::Kind::And:
        translate_range(s, d.lhs(), m, used, fresh, out);
        translate_range(s, d.rhs(), m, used, fresh, out);
        return;
    case Concept::Kind::Exists:
    case Concept::Kind::ExistsTop: {
        auto x = fresh.next("__rng");
        out.add(RangeRestriction{s, x}, m);
        translate_rhs(Concept::atomic(x), d, m, used, fresh, out);
        return;
    }
    }
}

}  // namespace

Ontology translate_general_gci(const Concept& lhs, const Concept& rhs, const Monomial& m, std::set<std::string>& used)
{
    FreshNames fresh(used);
    Ontology out;
    translate_rhs(canonical_lhs(lhs), rhs, m, used, fresh, out);
    for (const auto& n : all_names(out)) used.insert(n);
    return out;
}

// ---------------------------------------------------------- normalization

bool is_normal_form(const AnnotatedAxiom& a)
{
    auto* g = std::get_if<ConceptInclusion>(&a.axiom);
    if (!g) {
        if (auto* ca = std::get_if<ConceptAssertion>(&a.axiom)) return ca->name != kTop;
        if (auto* rr = std::get_if<RangeRestriction>(&a.axiom)) return rr->name != kTop;
        return true;
    }
    const auto& l = g->lhs;
    const auto& r = g->rhs;
    if (r.kind == Concept::Kind::ExistsTop) return l.is_basic();
    if (r.kind != Concept::Kind::Atomic) return false;
    switch (l.kind) {
    case Concept::Kind::Top:
    case Concept::Kind::Atomic: return true;
    case Concept::Kind::And: return l.lhs().is_basic() && l.rhs().is_basic();
    case Concept::Kind::Exists: return l.filler().is_basic();
    case Concept::Kind::ExistsTop: return true;
    }
    return false;
}

bool is_normalized(const Ontology& o)
{
    return std::all_of(o.axioms().begin(), o.axioms().end(), [](const auto& a) { return is_normal_form(a); });
}

namespace {

class Normalizer {
public:
    explicit Normalizer(const Ontology& o) : fresh_(all_names(o)) {}

    void axiom(const AnnotatedAxiom& a)
    {
        auto* g = std::get_if<ConceptInclusion>(&a.axiom);
        if (!g) {
            out_.add(a);
            return;
        }
        Concept lhs = canonical_lhs(g->lhs);
        const Concept& rhs = g->rhs;
        if (rhs.is_top()) {
            if (lhs.is_top()) return;  // Top <= Top
            throw std::invalid_argument("cannot normalize '" + to_string(a) + "': Top on the right-hand side");
        }
        if (!is_restricted_rhs(rhs))
            throw std::invalid_argument("cannot normalize '" + to_string(a) + "': right-hand side needs translation");
        if (rhs.kind == Concept::Kind::ExistsTop) {
            out_.add(ConceptInclusion{basic(lhs), rhs}, a.annotation);  // NF3
            return;
        }
        out_.add(ConceptInclusion{shallow(lhs), rhs}, a.annotation);  // NF1, NF2
    }

    Ontology take() { return std::move(out_); }

private:
    // Replace complex immediate subterms by names.
    Concept shallow(const Concept& c)
    {
        switch (c.kind) {
        case Concept::Kind::And: return Concept::conj(basic(c.lhs()), basic(c.rhs()));
        case Concept::Kind::Exists: return Concept::some(c.name, basic(c.filler()));
        default: return c;
        }
    }

    // Name for a subterm, memoized by structure; inner subterms get named first.
    Concept basic(const Concept& c)
    {
        if (c.is_basic()) return c;
        auto it = memo_.find(c);
        if (it != memo_.end()) return Concept::atomic(it->second);
        Concept body = shallow(c);
        auto name = fresh_.next("__nf");
        memo_.emplace(c, name);
        out_.add(ConceptInclusion{std::move(body), Concept::atomic(name)}, Monomial::one());
        return Concept::atomic(name);
    }

    FreshNames fresh_;
    std::map<Concept, std::string> memo_;
    Ontology out_;
};

}  // namespace

Ontology normalize(const Ontology& o)
{
    Normalizer n(o);
    for (const auto& a : o.axioms()) n.axiom(a);
    return n.take();
}

}  // namespace elprov
