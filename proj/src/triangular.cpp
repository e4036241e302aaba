#include "precosym/triangular.hpp"

#include "precosym/errors.hpp"

#include <algorithm>

namespace precosym {

Expression AssumptionLedger::canonical_nonzero(const Expression& e) {
    Poly p = e.num().primitive_part();
    return Expression::from_poly(p);
}

void AssumptionLedger::record(const Expression& e, const std::string& context) {
    if (e.is_zero()) throw internal_error("assumption on identically zero expression");
    Expression c = canonical_nonzero(e);
    if (c.is_constant()) return;  // constants are never hypotheses
    std::string key = c.str();
    if (seen_.count(key)) return;
    seen_.insert(key);
    entries_.push_back(Entry{key, context});
    exprs_.push_back(std::move(c));
}

void AssumptionLedger::merge(const AssumptionLedger& other) {
    for (std::size_t i = 0; i < other.entries_.size(); ++i) {
        const Entry& en = other.entries_[i];
        if (seen_.count(en.expr)) continue;
        seen_.insert(en.expr);
        entries_.push_back(en);
        exprs_.push_back(other.exprs_[i]);
    }
}

Expression TriangularConstraintSet::reduce(const Expression& e) const {
    if (pivots_.empty()) return e;
    std::map<SymId, Expression> bindings;
    for (const Pivot& p : pivots_) bindings.emplace(p.coord, p.value);
    Expression cur = e;
    // Replacement values are kept free of pivot coordinates, so one pass
    // suffices; the loop guards the invariant.
    for (std::size_t round = 0; round <= pivots_.size(); ++round) {
        bool touch = false;
        for (const Pivot& p : pivots_)
            if (cur.depends_on(p.coord)) touch = true;
        if (!touch) return cur;
        cur = cur.substitute(bindings);
    }
    throw internal_error("triangular reduction did not terminate");
}

Expression TriangularConstraintSet::reduce_full(const Expression& e) const {
    Expression r = reduce(e);
    if (residuals_.empty() || r.is_zero()) return r;
    Poly n = r.num().reduce_by(residuals_);
    return Expression(std::move(n), r.den());
}

bool TriangularConstraintSet::residual_reduction_complete() const {
    if (residuals_.size() <= 1) return true;
    // Buchberger's product criterion: pairwise coprime leading monomials
    // make the division remainder decide ideal membership.
    for (std::size_t i = 0; i < residuals_.size(); ++i)
        for (std::size_t j = i + 1; j < residuals_.size(); ++j) {
            const Monomial& a = residuals_[i].leading_monomial();
            const Monomial& b = residuals_[j].leading_monomial();
            for (auto& [s, e] : a.factors)
                if (b.degree_in(s) > 0) return false;
        }
    return true;
}

bool TriangularConstraintSet::vanishes_on_locus(const Expression& e) const {
    Expression r = reduce(e);
    if (r.is_zero()) return true;
    if (residuals_.empty()) return false;
    return r.num().reduce_by(residuals_).is_zero();
}

ZeroTest TriangularConstraintSet::is_zero(const Expression& e, AssumptionLedger* ledger,
                                          const std::string& note) const {
    Expression r = reduce(e);
    if (r.is_zero()) return ZeroTest::Zero;
    if (auto c = r.rational_value()) return *c == 0 ? ZeroTest::Zero : ZeroTest::NonZero;
    if (!residuals_.empty() && r.num().reduce_by(residuals_).is_zero())
        return ZeroTest::Undecided;  // multiple of a residual constraint
    if (!residual_reduction_complete()) return ZeroTest::Undecided;
    if (ledger == nullptr) return ZeroTest::Undecided;
    ledger->record(r, note);
    return ZeroTest::NonZero;
}

bool TriangularConstraintSet::try_solve(const Poly& p, AssumptionLedger& ledger,
                                        const std::string& note) {
    const ContextPtr& ctx = p.context();
    // Candidate pivots: coordinates in which p is linear with a coefficient
    // free of the coordinate itself.
    struct Candidate {
        SymId coord;
        Poly coeff;
        bool constant;
    };
    std::vector<Candidate> cands;
    for (SymId s : p.variables()) {
        if (!ctx->is_coordinate(s)) continue;
        if (p.degree_in(s) != 1) continue;
        auto uni = p.univariate_in(s);
        Poly a = uni.at(1);
        if (a.depends_on(s)) continue;
        cands.push_back(Candidate{s, a, a.is_constant()});
    }
    if (cands.empty()) return false;
    // Prefer a constant coefficient; among equals take the chart-latest
    // coordinate, so the earlier coordinates survive on the submanifold.
    std::sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.constant != b.constant) return a.constant;
        return ctx->compare(a.coord, b.coord) > 0;
    });
    const Candidate& best = cands.front();
    if (!best.constant)
        ledger.record(Expression::from_poly(best.coeff), note + " (solved pivot)");
    auto uni = p.univariate_in(best.coord);
    Poly b = uni.count(0) ? uni.at(0) : Poly::zero(ctx);
    Expression value = Expression::from_poly(-b) / Expression::from_poly(best.coeff);
    pivots_.push_back(Pivot{best.coord, value});
    substitute_into_existing(ledger, note);
    return true;
}

void TriangularConstraintSet::substitute_into_existing(AssumptionLedger& ledger,
                                                       const std::string& note) {
    const Pivot& fresh = pivots_.back();
    std::map<SymId, Expression> binding{{fresh.coord, fresh.value}};
    for (std::size_t i = 0; i + 1 < pivots_.size(); ++i) {
        if (pivots_[i].value.depends_on(fresh.coord))
            pivots_[i].value = pivots_[i].value.substitute(binding);
    }
    // Residuals may simplify, vanish, or become solvable under the new pivot.
    std::vector<Poly> pending = std::move(residuals_);
    residuals_.clear();
    for (Poly& r : pending) {
        Expression red = reduce(Expression::from_poly(r));
        if (red.is_zero()) continue;
        Poly q = red.num().primitive_part();
        if (q.is_constant())
            throw degenerate_error("constraint set became inconsistent");
        if (!try_solve(q, ledger, note)) residuals_.push_back(q);
    }
}

TriangularConstraintSet::AddResult TriangularConstraintSet::add_constraint(
    const Expression& zeta, AssumptionLedger& ledger, const std::string& note) {
    Expression r = reduce_full(zeta);
    if (r.is_zero()) return AddResult::Redundant;
    Poly p = r.num().primitive_part();
    if (p.is_constant()) return AddResult::Inconsistent;
    if (try_solve(p, ledger, note)) return AddResult::SolvedPivot;
    residuals_.push_back(p);
    return AddResult::Residual;
}

}  // namespace precosym
