#include "precosym/expr.hpp"

#include "precosym/errors.hpp"

#include <set>

namespace precosym {

Expression::Expression(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
}

void Expression::normalize() {
    if (den_.is_zero()) throw degenerate_error("division by an identically zero expression");
    if (num_.is_zero()) {
        den_ = Poly::constant(num_.context(), 1);
        return;
    }
    if (!den_.is_constant()) {
        Poly g = Poly::gcd(num_, den_);
        if (!g.is_constant()) {
            auto qn = num_.divide_exact(g);
            auto qd = den_.divide_exact(g);
            if (!qn || !qd) throw internal_error("gcd does not divide operands");
            num_ = std::move(*qn);
            den_ = std::move(*qd);
        }
    }
    Rational c = den_.content();
    if (c != 1) {
        Rational inv = Rational(1) / c;
        den_ = den_ * inv;
        num_ = num_ * inv;
    }
}

Expression Expression::operator-() const {
    Expression r = *this;
    r.num_ = -r.num_;
    return r;
}

Expression Expression::operator+(const Expression& o) const {
    if (den_ == o.den_) return Expression(num_ + o.num_, den_);
    return Expression(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Expression Expression::operator-(const Expression& o) const {
    if (den_ == o.den_) return Expression(num_ - o.num_, den_);
    return Expression(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Expression Expression::operator*(const Expression& o) const {
    return Expression(num_ * o.num_, den_ * o.den_);
}

Expression Expression::operator/(const Expression& o) const {
    if (o.is_zero()) throw degenerate_error("division by an identically zero expression");
    return Expression(num_ * o.den_, den_ * o.num_);
}

Expression Expression::pow(int n) const {
    if (n == 0) return one(context());
    if (n < 0) {
        if (is_zero()) throw degenerate_error("negative power of zero expression");
        return Expression(den_.pow(-n), num_.pow(-n));
    }
    return Expression(num_.pow(n), den_.pow(n));
}

namespace {

// d(p)/d(coord) for a polynomial, with the chain rule through opaque
// function symbols and their formal partials.
Poly poly_diff(const Poly& p, SymId coord) {
    const ContextPtr& ctx = p.context();
    Poly acc = Poly::zero(ctx);
    for (SymId s : p.variables()) {
        auto d = ctx->symbol_derivative(s, coord);
        if (!d) continue;
        Poly part = p.derivative_atomic(s);
        if (!d->is_one) part = part * Poly::symbol(ctx, d->sym);
        acc = acc + part;
    }
    return acc;
}

}  // namespace

Expression Expression::diff(SymId coord) const {
    if (!context()->is_coordinate(coord))
        throw chart_error("differentiation variable is not a chart coordinate: " +
                          context()->name(coord));
    Poly dn = poly_diff(num_, coord);
    if (den_.is_constant()) return Expression(std::move(dn), den_);
    Poly dd = poly_diff(den_, coord);
    return Expression(dn * den_ - num_ * dd, den_ * den_);
}

namespace {

Expression eval_poly_with(const Poly& p,
                          const std::map<SymId, Expression>& bindings,
                          const ContextPtr& ctx) {
    Expression acc = Expression::zero(ctx);
    std::map<SymId, Expression> cache;
    for (auto& [m, c] : p.terms()) {
        Expression term = Expression::constant(ctx, c);
        for (auto& [s, e] : m.factors) {
            auto it = cache.find(s);
            if (it == cache.end()) {
                auto b = bindings.find(s);
                it = cache.emplace(s, b == bindings.end() ? Expression::symbol(ctx, s)
                                                          : b->second)
                         .first;
            }
            term = term * it->second.pow(e);
        }
        acc = acc + term;
    }
    return acc;
}

}  // namespace

Expression Expression::substitute(const std::map<SymId, Expression>& bindings) const {
    if (bindings.empty()) return *this;
    // Reject cyclic bindings (ignoring exact identities).
    {
        std::map<SymId, std::set<SymId>> deps;
        for (auto& [s, v] : bindings) {
            if (v == Expression::symbol(context(), s)) continue;
            std::set<SymId> d;
            for (SymId t : v.num().variables())
                if (bindings.count(t)) d.insert(t);
            for (SymId t : v.den().variables())
                if (bindings.count(t)) d.insert(t);
            deps[s] = std::move(d);
        }
        std::set<SymId> done;
        bool progress = true;
        while (progress && done.size() < deps.size()) {
            progress = false;
            for (auto& [s, d] : deps) {
                if (done.count(s)) continue;
                bool ready = true;
                for (SymId t : d)
                    if (!done.count(t) && deps.count(t)) ready = false;
                if (ready) {
                    done.insert(s);
                    progress = true;
                }
            }
        }
        if (done.size() < deps.size())
            throw chart_error("cyclic substitution bindings");
    }
    Expression n = eval_poly_with(num_, bindings, context());
    Expression d = eval_poly_with(den_, bindings, context());
    if (d.is_zero())
        throw degenerate_error("substitution makes a denominator identically zero");
    return n / d;
}

double Expression::eval(const std::map<SymId, double>& point) const {
    double d = den_.eval(point);
    if (d == 0.0) throw degenerate_error("zero denominator at evaluation point");
    return num_.eval(point) / d;
}

Rational Expression::eval_exact(const std::map<SymId, Rational>& point) const {
    Rational d = den_.eval_exact(point);
    if (d == 0) throw degenerate_error("zero denominator at evaluation point");
    return num_.eval_exact(point) / d;
}

std::string Expression::str() const {
    if (den_.is_constant() && *den_.constant_value() == 1) return num_.str();
    std::string n = num_.str();
    if (num_.terms().size() > 1) n = "(" + n + ")";
    std::string d;
    const auto& dt = den_.terms();
    bool bare = dt.size() == 1 && dt.begin()->second == 1 &&
                dt.begin()->first.factors.size() == 1 &&
                dt.begin()->first.factors[0].second == 1;
    if (bare) {
        d = den_.str();
    } else {
        d = "(" + den_.str() + ")";
    }
    return n + "/" + d;
}

bool proportional(const Expression& a, const Expression& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    Expression q = a / b;
    return q.is_constant();
}

}  // namespace precosym
