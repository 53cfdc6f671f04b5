#pragma once

// Provenance annotations: monomials and polynomials over the Trio semiring
// (commutative, with idempotent multiplication).

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace elprov {

using Variable = std::string;

// Identifiers of the form [A-Za-z_][A-Za-z0-9_]*.
bool is_identifier(std::string_view s);

// Names starting with "__" are kept for internally generated symbols.
inline bool is_reserved_name(std::string_view s) { return s.size() >= 2 && s[0] == '_' && s[1] == '_'; }

class AlgebraError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A product of distinct variables. Because multiplication is idempotent a
// monomial is just a finite set; the empty set is the unit 1.
class Monomial {
public:
    Monomial() = default;
    Monomial(std::initializer_list<Variable> vars);
    explicit Monomial(std::vector<Variable> vars);

    static Monomial one() { return {}; }
    static Monomial var(Variable v);
    // "1" or "v1*v2*...". Throws AlgebraError on bad syntax.
    static Monomial parse(std::string_view text);

    const std::vector<Variable>& vars() const { return vars_; }
    std::size_t degree() const { return vars_.size(); }
    bool is_one() const { return vars_.empty(); }
    bool contains(const Variable& v) const;
    // Every variable of *this occurs in other.
    bool divides(const Monomial& other) const;

    Monomial operator*(const Monomial& o) const;
    Monomial& operator*=(const Monomial& o);

    std::string str() const;

    auto operator<=>(const Monomial&) const = default;
    bool operator==(const Monomial&) const = default;

private:
    std::vector<Variable> vars_;  // sorted, unique
};

// Finite map from monomials to positive coefficients; empty means 0.
// Coefficients are 64-bit and every operation checks for overflow.
class Polynomial {
public:
    using Coefficient = std::uint64_t;

    Polynomial() = default;
    Polynomial(const Monomial& m, Coefficient c = 1);

    static Polynomial zero() { return {}; }
    static Polynomial one() { return Polynomial(Monomial::one()); }
    // "0", "1", "v1*v2 + 2 v3", "2*v1 + v2". Throws AlgebraError.
    static Polynomial parse(std::string_view text);

    const std::map<Monomial, Coefficient>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Coefficient coefficient(const Monomial& m) const;
    std::size_t size() const { return terms_.size(); }

    Polynomial operator+(const Polynomial& o) const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial operator*(const Polynomial& o) const;

    // Multiset inclusion: every coefficient of *this is at most the one in o.
    bool contained_in(const Polynomial& o) const;

    std::string str() const;

    bool operator==(const Polynomial&) const = default;

private:
    void add_term(const Monomial& m, Coefficient c);
    std::map<Monomial, Coefficient> terms_;
};

inline bool operator<=(const Polynomial& a, const Polynomial& b) { return a.contained_in(b); }

Polynomial::Coefficient checked_add(Polynomial::Coefficient a, Polynomial::Coefficient b);
Polynomial::Coefficient checked_mul(Polynomial::Coefficient a, Polynomial::Coefficient b);

std::set<Variable> variables(const Polynomial& p);

// Target semiring for evaluation. Multiplication is assumed idempotent if
// the caller wants results consistent with the Trio interpretation.
template <typename T>
struct SemiringSpec {
    T zero;
    T one;
    std::function<T(const T&, const T&)> add;
    std::function<T(const T&, const T&)> mul;
};

template <typename T>
T evaluate(const Monomial& m, const std::map<Variable, T>& assignment, const SemiringSpec<T>& s)
{
    T acc = s.one;
    for (const auto& v : m.vars()) {
        auto it = assignment.find(v);
        if (it == assignment.end()) throw AlgebraError("no value assigned to variable '" + v + "'");
        acc = s.mul(acc, it->second);
    }
    return acc;
}

// Coefficient c is read as the c-fold sum.
template <typename T>
T evaluate(const Polynomial& p, const std::map<Variable, T>& assignment, const SemiringSpec<T>& s)
{
    T acc = s.zero;
    for (const auto& [m, c] : p.terms()) {
        T val = evaluate(m, assignment, s);
        for (Polynomial::Coefficient i = 0; i < c; ++i) acc = s.add(acc, val);
    }
    return acc;
}

}  // namespace elprov
