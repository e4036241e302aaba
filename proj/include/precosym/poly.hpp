#pragma once

#include "precosym/context.hpp"
#include "precosym/rational.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace precosym {

// Product of symbol powers; factors are kept sorted by the context symbol
// order, most significant symbol first, exponents strictly positive.
struct Monomial {
    std::vector<std::pair<SymId, int>> factors;

    int total_degree() const {
        int d = 0;
        for (auto& [s, e] : factors) d += e;
        return d;
    }
    bool is_unit() const { return factors.empty(); }
    int degree_in(SymId s) const {
        for (auto& [t, e] : factors)
            if (t == s) return e;
        return 0;
    }
    bool operator==(const Monomial& o) const { return factors == o.factors; }
};

// Graded lexicographic order (total degree first, then exponents compared
// on the most significant symbol where they differ).
struct GrlexLess {
    const SymbolContext* ctx = nullptr;
    bool operator()(const Monomial& a, const Monomial& b) const;
};

// Sparse multivariate polynomial with exact rational coefficients.
class Poly {
public:
    using TermMap = std::map<Monomial, Rational, GrlexLess>;

    explicit Poly(ContextPtr ctx) : ctx_(std::move(ctx)), terms_(GrlexLess{ctx_.get()}) {}

    static Poly zero(const ContextPtr& ctx) { return Poly(ctx); }
    static Poly constant(const ContextPtr& ctx, const Rational& c);
    static Poly symbol(const ContextPtr& ctx, SymId s);

    const ContextPtr& context() const { return ctx_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
    }
    std::optional<Rational> constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (is_constant()) return terms_.begin()->second;
        return std::nullopt;
    }

    int total_degree() const;
    int degree_in(SymId s) const;
    std::set<SymId> variables() const;
    bool depends_on(SymId s) const;

    // Leading term under grlex; polynomial must be nonzero.
    const Monomial& leading_monomial() const;
    const Rational& leading_coefficient() const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rational& c) const;
    Poly pow(int n) const;

    bool operator==(const Poly& o) const { return terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // Derivative treating every symbol as an independent atom.
    Poly derivative_atomic(SymId s) const;

    // View as a univariate polynomial in s with Poly coefficients.
    std::map<int, Poly> univariate_in(SymId s) const;

    // Rational content and sign normalisation: *this == content * primitive,
    // where primitive has coprime integer coefficients and positive leading
    // coefficient. Zero polynomial has content 0.
    Rational content() const;
    Poly primitive_part() const;

    // Exact multivariate division; nullopt when g does not divide *this.
    std::optional<Poly> divide_exact(const Poly& g) const;

    // Remainder of multivariate division by the (ordered) list of divisors.
    Poly reduce_by(const std::vector<Poly>& divisors) const;

    static Poly gcd(const Poly& a, const Poly& b);

    double eval(const std::map<SymId, double>& point) const;
    Rational eval_exact(const std::map<SymId, Rational>& point) const;

    void add_term(const Monomial& m, const Rational& c);

    std::string str() const;

private:
    static Monomial mono_mul(const SymbolContext& ctx, const Monomial& a, const Monomial& b);
    static bool mono_divides(const Monomial& a, const Monomial& b);  // a | b
    static Monomial mono_div(const SymbolContext& ctx, const Monomial& b, const Monomial& a);

    ContextPtr ctx_;
    TermMap terms_;
};

}  // namespace precosym
