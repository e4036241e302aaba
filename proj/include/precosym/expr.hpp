#pragma once

#include "precosym/poly.hpp"

#include <map>
#include <optional>
#include <string>

namespace precosym {

// Symbolic scalar in canonical form: a rational function num/den with
// gcd(num, den) = 1 and den a primitive integer polynomial with positive
// leading coefficient. Two expressions that are equal as rational functions
// of the symbols compare structurally equal. Immutable; all operations
// return fresh values.
class Expression {
public:
    explicit Expression(ContextPtr ctx)
        : num_(Poly::zero(ctx)), den_(Poly::constant(ctx, 1)) {}
    Expression(Poly num, Poly den);

    static Expression zero(const ContextPtr& ctx) { return Expression(ctx); }
    static Expression one(const ContextPtr& ctx) { return constant(ctx, 1); }
    static Expression constant(const ContextPtr& ctx, const Rational& c) {
        return Expression(Poly::constant(ctx, c), Poly::constant(ctx, 1));
    }
    static Expression symbol(const ContextPtr& ctx, SymId s) {
        return Expression(Poly::symbol(ctx, s), Poly::constant(ctx, 1));
    }
    static Expression from_poly(Poly p) {
        Poly one = Poly::constant(p.context(), 1);
        return Expression(std::move(p), std::move(one));
    }

    const ContextPtr& context() const { return num_.context(); }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    std::optional<Rational> rational_value() const {
        if (!is_constant()) return std::nullopt;
        return *num_.constant_value() / *den_.constant_value();
    }
    bool depends_on(SymId s) const { return num_.depends_on(s) || den_.depends_on(s); }

    Expression operator-() const;
    Expression operator+(const Expression& o) const;
    Expression operator-(const Expression& o) const;
    Expression operator*(const Expression& o) const;
    Expression operator/(const Expression& o) const;
    Expression pow(int n) const;

    bool operator==(const Expression& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Expression& o) const { return !(*this == o); }

    // Partial derivative with respect to a chart coordinate; opaque
    // functions contribute formal partial symbols via the chain rule.
    Expression diff(SymId coord) const;

    // Simultaneous substitution. Bindings must be acyclic (a binding value
    // may not depend, directly or transitively, on a bound symbol).
    Expression substitute(const std::map<SymId, Expression>& bindings) const;

    double eval(const std::map<SymId, double>& point) const;
    Rational eval_exact(const std::map<SymId, Rational>& point) const;

    std::string str() const;

private:
    void normalize();

    Poly num_;
    Poly den_;
};

inline Expression operator*(const Rational& c, const Expression& e) {
    return Expression::constant(e.context(), c) * e;
}

// True when a and b differ by a nonzero rational factor only.
bool proportional(const Expression& a, const Expression& b);

}  // namespace precosym
