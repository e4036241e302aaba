#pragma once

#include "precosym/expr.hpp"

#include <set>
#include <string>
#include <vector>

namespace precosym {

// Ledger of genericity hypotheses: expressions assumed nonvanishing on the
// working locus. Every symbolic pivot division lands here; nothing is
// divided silently.
class AssumptionLedger {
public:
    struct Entry {
        std::string expr;     // canonical rendering of the nonvanishing polynomial
        std::string context;  // where the division happened
    };

    // Records "e != 0". The expression is canonicalised (denominator cleared,
    // content removed, leading sign positive) before deduplication.
    void record(const Expression& e, const std::string& context);
    void merge(const AssumptionLedger& other);
    const std::vector<Entry>& entries() const { return entries_; }
    const std::vector<Expression>& canonical_exprs() const { return exprs_; }
    bool contains(const std::string& canonical) const { return seen_.count(canonical) > 0; }

    static Expression canonical_nonzero(const Expression& e);

private:
    std::vector<Entry> entries_;
    std::vector<Expression> exprs_;
    std::set<std::string> seen_;
};

enum class ZeroTest { Zero, NonZero, Undecided };

// Triangular set of solved constraints (pivot coordinate -> replacement)
// plus residual polynomial constraints that are not linear in any
// coordinate. Realises evaluation "on the constraint submanifold".
class TriangularConstraintSet {
public:
    struct Pivot {
        SymId coord;
        Expression value;  // free of every pivot coordinate
    };

    enum class AddResult { SolvedPivot, Residual, Redundant, Inconsistent };

    TriangularConstraintSet() = default;

    // zeta is a constraint whose vanishing defines the locus. Attempts to
    // solve it linearly for the chart-latest coordinate with a generically
    // nonzero coefficient; otherwise keeps the cleared polynomial as a
    // residual.
    AddResult add_constraint(const Expression& zeta, AssumptionLedger& ledger,
                             const std::string& note);

    // Pivot substitution followed by normalisation.
    Expression reduce(const Expression& e) const;

    // Pivot substitution plus polynomial division by the residuals; the
    // stronger reduction used to decide vanishing on the locus.
    Expression reduce_full(const Expression& e) const;

    // Division remainder by the residual polynomials only.
    Poly residual_reduce(const Poly& p) const {
        return residuals_.empty() ? p : p.reduce_by(residuals_);
    }

    // Zero iff reduce yields zero. A nonzero reduction that lies in the
    // residual ideal cannot be decided by pivot substitution alone and
    // reports Undecided; a nonzero rational constant reports NonZero; any
    // other nonzero reduction is NonZero on the generic stratum and is
    // recorded in the ledger when one is supplied, Undecided otherwise.
    ZeroTest is_zero(const Expression& e, AssumptionLedger* ledger = nullptr,
                     const std::string& note = "zero test") const;

    // True when division by the residual list decides ideal membership
    // (at most one residual, or pairwise coprime leading monomials).
    bool residual_reduction_complete() const;

    bool vanishes_on_locus(const Expression& e) const;

    const std::vector<Pivot>& pivots() const { return pivots_; }
    const std::vector<Poly>& residuals() const { return residuals_; }
    bool empty() const { return pivots_.empty() && residuals_.empty(); }
    std::size_t constraint_count() const { return pivots_.size() + residuals_.size(); }

private:
    bool try_solve(const Poly& p, AssumptionLedger& ledger, const std::string& note);
    void substitute_into_existing(AssumptionLedger& ledger, const std::string& note);

    std::vector<Pivot> pivots_;
    std::vector<Poly> residuals_;
};

}  // namespace precosym
