#include "precosym/poly.hpp"

#include "precosym/errors.hpp"

#include <algorithm>
#include <sstream>

namespace precosym {

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
    int da = a.total_degree();
    int db = b.total_degree();
    if (da != db) return da < db;
    // Walk factor lists in parallel; both are sorted most significant first.
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        int c = ctx->compare(a.factors[i].first, b.factors[j].first);
        if (c < 0) return false;  // a has the more significant symbol -> a larger
        if (c > 0) return true;
        if (a.factors[i].second != b.factors[j].second)
            return a.factors[i].second < b.factors[j].second;
        ++i;
        ++j;
    }
    return i == a.factors.size() && j < b.factors.size();
}

Poly Poly::constant(const ContextPtr& ctx, const Rational& c) {
    Poly p(ctx);
    if (c != 0) p.terms_.emplace(Monomial{}, c);
    return p;
}

Poly Poly::symbol(const ContextPtr& ctx, SymId s) {
    Poly p(ctx);
    p.terms_.emplace(Monomial{{{s, 1}}}, Rational(1));
    return p;
}

int Poly::total_degree() const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
}

int Poly::degree_in(SymId s) const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.degree_in(s));
    return d;
}

std::set<SymId> Poly::variables() const {
    std::set<SymId> vs;
    for (auto& [m, c] : terms_)
        for (auto& [s, e] : m.factors) vs.insert(s);
    return vs;
}

bool Poly::depends_on(SymId s) const {
    for (auto& [m, c] : terms_)
        if (m.degree_in(s) > 0) return true;
    return false;
}

const Monomial& Poly::leading_monomial() const {
    if (terms_.empty()) throw internal_error("leading term of zero polynomial");
    return terms_.rbegin()->first;
}

const Rational& Poly::leading_coefficient() const {
    if (terms_.empty()) throw internal_error("leading term of zero polynomial");
    return terms_.rbegin()->second;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r(ctx_);
    for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    for (auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Monomial Poly::mono_mul(const SymbolContext& ctx, const Monomial& a, const Monomial& b) {
    Monomial r;
    r.factors.reserve(a.factors.size() + b.factors.size());
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (i == a.factors.size()) {
            r.factors.push_back(b.factors[j++]);
        } else if (j == b.factors.size()) {
            r.factors.push_back(a.factors[i++]);
        } else {
            int c = ctx.compare(a.factors[i].first, b.factors[j].first);
            if (c < 0) {
                r.factors.push_back(a.factors[i++]);
            } else if (c > 0) {
                r.factors.push_back(b.factors[j++]);
            } else {
                r.factors.emplace_back(a.factors[i].first,
                                       a.factors[i].second + b.factors[j].second);
                ++i;
                ++j;
            }
        }
    }
    return r;
}

bool Poly::mono_divides(const Monomial& a, const Monomial& b) {
    for (auto& [s, e] : a.factors)
        if (b.degree_in(s) < e) return false;
    return true;
}

Monomial Poly::mono_div(const SymbolContext& ctx, const Monomial& b, const Monomial& a) {
    (void)ctx;
    // Requires a | b; both factor lists share the sort order.
    Monomial r;
    std::size_t j = 0;
    for (auto& [s, e] : b.factors) {
        int sub = 0;
        if (j < a.factors.size() && a.factors[j].first == s) {
            sub = a.factors[j].second;
            ++j;
        }
        if (e - sub > 0) r.factors.emplace_back(s, e - sub);
    }
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r(ctx_);
    for (auto& [ma, ca] : terms_)
        for (auto& [mb, cb] : o.terms_) r.add_term(mono_mul(*ctx_, ma, mb), ca * cb);
    return r;
}

Poly Poly::operator*(const Rational& c) const {
    Poly r(ctx_);
    if (c == 0) return r;
    for (auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
    return r;
}

Poly Poly::pow(int n) const {
    if (n < 0) throw internal_error("Poly::pow negative exponent");
    Poly r = constant(ctx_, 1);
    Poly b = *this;
    while (n > 0) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return r;
}

Poly Poly::derivative_atomic(SymId s) const {
    Poly r(ctx_);
    for (auto& [m, c] : terms_) {
        int e = m.degree_in(s);
        if (e == 0) continue;
        Monomial dm;
        for (auto& [t, k] : m.factors) {
            if (t == s) {
                if (k > 1) dm.factors.emplace_back(t, k - 1);
            } else {
                dm.factors.emplace_back(t, k);
            }
        }
        r.add_term(dm, c * e);
    }
    return r;
}

std::map<int, Poly> Poly::univariate_in(SymId s) const {
    std::map<int, Poly> out;
    for (auto& [m, c] : terms_) {
        int e = m.degree_in(s);
        Monomial rest;
        for (auto& [t, k] : m.factors)
            if (t != s) rest.factors.emplace_back(t, k);
        auto it = out.find(e);
        if (it == out.end()) it = out.emplace(e, Poly(ctx_)).first;
        it->second.add_term(rest, c);
    }
    return out;
}

Rational Poly::content() const {
    if (terms_.empty()) return Rational(0);
    Int num_gcd = 0;
    Int den_lcm = 1;
    for (auto& [m, c] : terms_) {
        num_gcd = boost::multiprecision::gcd(num_gcd, numerator(c));
        Int d = denominator(c);
        den_lcm = den_lcm / boost::multiprecision::gcd(den_lcm, d) * d;
    }
    Rational c(num_gcd, den_lcm);
    if (leading_coefficient() < 0) c = -c;
    return c;
}

Poly Poly::primitive_part() const {
    if (terms_.empty()) return *this;
    Rational c = content();
    Poly r(ctx_);
    for (auto& [m, k] : terms_) r.terms_.emplace(m, k / c);
    return r;
}

std::optional<Poly> Poly::divide_exact(const Poly& g) const {
    if (g.is_zero()) throw degenerate_error("division by zero polynomial");
    Poly q(ctx_);
    Poly r = *this;
    const Monomial& gl = g.leading_monomial();
    const Rational& gc = g.leading_coefficient();
    while (!r.is_zero()) {
        const Monomial& rl = r.leading_monomial();
        if (!mono_divides(gl, rl)) return std::nullopt;
        Monomial qm = mono_div(*ctx_, rl, gl);
        Rational qc = r.leading_coefficient() / gc;
        Poly t(ctx_);
        t.terms_.emplace(qm, qc);
        q = q + t;
        r = r - t * g;
    }
    return q;
}

Poly Poly::reduce_by(const std::vector<Poly>& divisors) const {
    Poly rem(ctx_);
    Poly work = *this;
    while (!work.is_zero()) {
        const Monomial lm = work.leading_monomial();
        const Rational lc = work.leading_coefficient();
        bool reduced = false;
        for (const Poly& g : divisors) {
            if (g.is_zero()) continue;
            if (mono_divides(g.leading_monomial(), lm)) {
                Poly t(ctx_);
                t.terms_.emplace(mono_div(*ctx_, lm, g.leading_monomial()),
                                 lc / g.leading_coefficient());
                work = work - t * g;
                reduced = true;
                break;
            }
        }
        if (!reduced) {
            rem.add_term(lm, lc);
            Poly t(ctx_);
            t.terms_.emplace(lm, lc);
            work = work - t;
        }
    }
    return rem;
}

namespace {

// Pseudo-remainder of f by g with respect to x (both must contain x).
Poly pseudo_rem(const Poly& f, const Poly& g, SymId x, const ContextPtr& ctx) {
    Poly r = f;
    int dg = g.degree_in(x);
    auto guni = g.univariate_in(x);
    Poly lg = guni.at(dg);
    Poly xp = Poly::symbol(ctx, x);
    while (!r.is_zero()) {
        int dr = r.degree_in(x);
        if (dr < dg) break;
        auto runi = r.univariate_in(x);
        Poly lr = runi.at(dr);
        r = lg * r - lr * xp.pow(dr - dg) * g;
    }
    return r;
}

// gcd of the x-coefficients (the content of f with respect to x).
Poly content_in(const Poly& f, SymId x) {
    auto uni = f.univariate_in(x);
    Poly c = Poly::zero(f.context());
    for (auto& [d, coeff] : uni) c = Poly::gcd(c, coeff);
    return c;
}

}  // namespace

Poly Poly::gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b.is_zero() ? b : b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    Poly pa = a.primitive_part();
    Poly pb = b.primitive_part();
    if (pa.is_constant() || pb.is_constant()) return constant(a.context(), 1);

    // Main variable: the most significant symbol present in either operand.
    const ContextPtr& ctx = a.context();
    std::set<SymId> vs = pa.variables();
    for (SymId s : pb.variables()) vs.insert(s);
    SymId x = *vs.begin();
    for (SymId s : vs)
        if (ctx->compare(s, x) < 0) x = s;

    if (!pa.depends_on(x)) return gcd(pa, content_in(pb, x));
    if (!pb.depends_on(x)) return gcd(pb, content_in(pa, x));

    Poly ca = content_in(pa, x);
    Poly cb = content_in(pb, x);
    Poly f = *pa.divide_exact(ca);
    Poly g = *pb.divide_exact(cb);
    Poly c = gcd(ca, cb);

    if (f.degree_in(x) < g.degree_in(x)) std::swap(f, g);
    // Primitive PRS; inputs here are tiny, so growth control is not needed.
    while (!g.is_zero()) {
        Poly r = pseudo_rem(f, g, x, ctx);
        f = g;
        if (r.is_zero()) {
            g = r;
        } else {
            Poly rc = content_in(r, x);
            g = *r.divide_exact(rc);
            g = g.primitive_part();
        }
    }
    Poly fc = content_in(f, x);
    Poly result = c * (*f.divide_exact(fc));
    return result.primitive_part();
}

double Poly::eval(const std::map<SymId, double>& point) const {
    double acc = 0.0;
    for (auto& [m, c] : terms_) {
        double t = static_cast<double>(c);
        for (auto& [s, e] : m.factors) {
            auto it = point.find(s);
            if (it == point.end()) throw chart_error("unbound symbol in numeric evaluation: " + ctx_->name(s));
            double v = it->second;
            for (int i = 0; i < e; ++i) t *= v;
        }
        acc += t;
    }
    return acc;
}

Rational Poly::eval_exact(const std::map<SymId, Rational>& point) const {
    Rational acc = 0;
    for (auto& [m, c] : terms_) {
        Rational t = c;
        for (auto& [s, e] : m.factors) {
            auto it = point.find(s);
            if (it == point.end()) throw chart_error("unbound symbol in exact evaluation: " + ctx_->name(s));
            for (int i = 0; i < e; ++i) t *= it->second;
        }
        acc += t;
    }
    return acc;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Leading term first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        Rational c = it->second;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        bool coeff_shown = false;
        if (c != 1 || it->first.is_unit()) {
            os << rational_str(c);
            coeff_shown = true;
        }
        for (auto& [s, e] : it->first.factors) {
            if (coeff_shown) os << "*";
            os << ctx_->name(s);
            if (e > 1) os << "^" << e;
            coeff_shown = true;
        }
    }
    return os.str();
}

}  // namespace precosym
