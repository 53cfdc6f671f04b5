#include "elprov/provenance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace elprov {

bool is_identifier(std::string_view s)
{
    if (s.empty()) return false;
    auto head = static_cast<unsigned char>(s[0]);
    if (!(std::isalpha(head) || head == '_')) return false;
    return std::all_of(s.begin() + 1, s.end(), [](char ch) {
        auto c = static_cast<unsigned char>(ch);
        return std::isalnum(c) || c == '_';
    });
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Polynomial::Coefficient parse_coefficient(std::string_view s)
{
    Polynomial::Coefficient value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw AlgebraError("coefficient out of range: " + std::string(s));
    return value;
}

}  // namespace

Monomial::Monomial(std::initializer_list<Variable> vars) : Monomial(std::vector<Variable>(vars)) {}

Monomial::Monomial(std::vector<Variable> vars) : vars_(std::move(vars))
{
    for (const auto& v : vars_)
        if (!is_identifier(v)) throw AlgebraError("invalid variable name '" + v + "'");
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
}

Monomial Monomial::var(Variable v) { return Monomial(std::vector<Variable>{std::move(v)}); }

Monomial Monomial::parse(std::string_view text)
{
    text = trim(text);
    if (text.empty()) throw AlgebraError("empty monomial");
    if (text == "1") return {};
    std::vector<Variable> vars;
    std::size_t pos = 0;
    while (true) {
        auto star = text.find('*', pos);
        auto tok = trim(text.substr(pos, star == std::string_view::npos ? std::string_view::npos : star - pos));
        if (tok != "1") {
            if (!is_identifier(tok)) throw AlgebraError("invalid monomial factor '" + std::string(tok) + "'");
            vars.emplace_back(tok);
        }
        if (star == std::string_view::npos) break;
        pos = star + 1;
    }
    return Monomial(std::move(vars));
}

bool Monomial::contains(const Variable& v) const { return std::binary_search(vars_.begin(), vars_.end(), v); }

bool Monomial::divides(const Monomial& other) const
{
    return std::includes(other.vars_.begin(), other.vars_.end(), vars_.begin(), vars_.end());
}

Monomial Monomial::operator*(const Monomial& o) const
{
    Monomial r;
    r.vars_.reserve(vars_.size() + o.vars_.size());
    std::set_union(vars_.begin(), vars_.end(), o.vars_.begin(), o.vars_.end(), std::back_inserter(r.vars_));
    return r;
}

Monomial& Monomial::operator*=(const Monomial& o) { return *this = *this * o; }

std::string Monomial::str() const
{
    if (vars_.empty()) return "1";
    std::string out;
    for (const auto& v : vars_) {
        if (!out.empty()) out += '*';
        out += v;
    }
    return out;
}

Polynomial::Coefficient checked_add(Polynomial::Coefficient a, Polynomial::Coefficient b)
{
    Polynomial::Coefficient r;
    if (__builtin_add_overflow(a, b, &r)) throw AlgebraError("polynomial coefficient overflow");
    return r;
}

Polynomial::Coefficient checked_mul(Polynomial::Coefficient a, Polynomial::Coefficient b)
{
    Polynomial::Coefficient r;
    if (__builtin_mul_overflow(a, b, &r)) throw AlgebraError("polynomial coefficient overflow");
    return r;
}

Polynomial::Polynomial(const Monomial& m, Coefficient c) { add_term(m, c); }

void Polynomial::add_term(const Monomial& m, Coefficient c)
{
    if (c == 0) return;
    auto& slot = terms_[m];
    slot = checked_add(slot, c);
}

Polynomial Polynomial::parse(std::string_view text)
{
    text = trim(text);
    if (text.empty()) throw AlgebraError("empty polynomial");
    Polynomial p;
    if (text == "0") return p;
    std::size_t pos = 0;
    while (true) {
        auto plus = text.find('+', pos);
        auto term = trim(text.substr(pos, plus == std::string_view::npos ? std::string_view::npos : plus - pos));
        if (term.empty()) throw AlgebraError("empty term in polynomial '" + std::string(text) + "'");

        // Optional leading coefficient: "3 v1*v2", "3*v1*v2" or a bare "3".
        Coefficient coeff = 1;
        std::size_t i = 0;
        while (i < term.size() && term[i] >= '0' && term[i] <= '9') ++i;
        std::string_view rest = term.substr(i);
        if (i > 0 && (rest.empty() || std::isspace(static_cast<unsigned char>(rest.front())) || trim(rest).front() == '*')) {
            coeff = parse_coefficient(term.substr(0, i));
            rest = trim(rest);
            if (!rest.empty() && rest.front() == '*') rest = trim(rest.substr(1));
            if (rest.empty()) rest = "1";
        } else {
            rest = term;
        }
        if (all_digits(rest) && rest != "1") throw AlgebraError("malformed term '" + std::string(term) + "'");
        p.add_term(Monomial::parse(rest), coeff);

        if (plus == std::string_view::npos) break;
        pos = plus + 1;
    }
    return p;
}

Polynomial::Coefficient Polynomial::coefficient(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
}

Polynomial Polynomial::operator+(const Polynomial& o) const
{
    Polynomial r = *this;
    r += o;
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const
{
    Polynomial r;
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, checked_mul(c1, c2));
    return r;
}

bool Polynomial::contained_in(const Polynomial& o) const
{
    for (const auto& [m, c] : terms_)
        if (o.coefficient(m) < c) return false;
    return true;
}

std::string Polynomial::str() const
{
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
        if (!out.empty()) out += " + ";
        if (c == 1)
            out += m.str();
        else if (m.is_one())
            out += std::to_string(c);
        else
            out += std::to_string(c) + ' ' + m.str();
    }
    return out;
}

std::set<Variable> variables(const Polynomial& p)
{
    std::set<Variable> out;
    for (const auto& [m, c] : p.terms()) out.insert(m.vars().begin(), m.vars().end());
    return out;
}

}  // namespace elprov
