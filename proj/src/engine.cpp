#include "precosym/engine.hpp"

#include "precosym/errors.hpp"

#include <algorithm>
#include <sstream>

namespace precosym {

std::string to_string(ChainStatus s) {
    switch (s) {
        case ChainStatus::Stable: return "stable";
        case ChainStatus::Empty: return "empty";
        case ChainStatus::ZeroDimensional: return "zero-dimensional";
        case ChainStatus::Undecided: return "undecided";
        case ChainStatus::IterationCapExceeded: return "iteration-cap-exceeded";
    }
    return "?";
}

Ansatz make_ansatz(const ChartPtr& chart, RunMode mode, const NamingScheme& naming) {
    chart->check_complete();
    if (mode == RunMode::Sopde &&
        (chart->fibre_kind() != FibreKind::Velocity || !chart->full_fibre()))
        throw chart_error("sopde mode requires a full velocity chart");

    const ContextPtr& ctx = chart->context();
    Ansatz an;
    an.chart = chart;
    an.mode = mode;

    // Fibre ordinals follow the chart coordinate order.
    std::map<SymId, int> fibre_ordinal;
    {
        int ord = 0;
        for (SymId c : chart->coords())
            if (chart->role(c) == CoordRole::Fibre) fibre_ordinal[c] = ++ord;
    }

    for (int a = 0; a < chart->k(); ++a) {
        VectorField X(chart);
        const std::string comp = ctx->name(chart->base()[a]);
        for (SymId c : chart->coords()) {
            switch (chart->role(c)) {
                case CoordRole::Base:
                    if (c == chart->base()[a]) X.set(c, Expression::one(ctx));
                    break;
                case CoordRole::Position: {
                    if (mode == RunMode::Sopde) {
                        int i = *chart->position_index(c);
                        X.set(c, Expression::symbol(ctx, *chart->fibre(i, a)));
                        break;
                    }
                    int i = *chart->position_index(c);
                    std::string nm = naming.position + std::to_string(i + 1) + "_" + comp;
                    if (ctx->find(nm))
                        throw chart_error("ansatz coefficient name collides with a declared "
                                          "symbol: " + nm);
                    SymId u = ctx->add_unknown(nm);
                    an.unknowns.push_back(
                        {u, a, c, CoordRole::Position, an.unknowns.size()});
                    X.set(c, Expression::symbol(ctx, u));
                    break;
                }
                case CoordRole::Fibre: {
                    std::string nm =
                        naming.fibre + std::to_string(fibre_ordinal.at(c)) + "_" + comp;
                    if (ctx->find(nm))
                        throw chart_error("ansatz coefficient name collides with a declared "
                                          "symbol: " + nm);
                    SymId u = ctx->add_unknown(nm);
                    an.unknowns.push_back({u, a, c, CoordRole::Fibre, an.unknowns.size()});
                    X.set(c, Expression::symbol(ctx, u));
                    break;
                }
                case CoordRole::Gauge: {
                    int j = 0;
                    for (std::size_t g = 0; g < chart->gauge().size(); ++g)
                        if (chart->gauge()[g] == c) j = static_cast<int>(g);
                    std::string nm = naming.gauge + std::to_string(j + 1) + "_" + comp;
                    if (ctx->find(nm))
                        throw chart_error("ansatz coefficient name collides with a declared "
                                          "symbol: " + nm);
                    SymId u = ctx->add_unknown(nm);
                    an.unknowns.push_back({u, a, c, CoordRole::Gauge, an.unknowns.size()});
                    X.set(c, Expression::symbol(ctx, u));
                    break;
                }
            }
        }
        an.components.push_back(std::move(X));
    }
    return an;
}

std::vector<Expression> gauge_compatibility(const HamiltonianSystem& sys) {
    std::vector<Expression> out;
    for (SymId z : sys.validation.gauge_coords) out.push_back(sys.h.diff(z));
    return out;
}

namespace {

std::vector<std::pair<SymId, Expression>> form_to_equations(const ChartPtr& chart,
                                                            const DifferentialForm& diff) {
    std::vector<std::pair<SymId, Expression>> out;
    for (SymId c : chart->coords()) {
        Expression e = diff.coefficient({chart->coord_pos(c)});
        out.emplace_back(c, std::move(e));
    }
    return out;
}

}  // namespace

std::vector<std::pair<SymId, Expression>> assemble_equations(const HamiltonianSystem& sys,
                                                             const Ansatz& ansatz) {
    const ChartPtr& chart = sys.S.chart;
    if (ansatz.chart != chart) throw chart_error("ansatz chart does not match system");
    DifferentialForm lhs(chart, 1);
    for (int a = 0; a < chart->k(); ++a)
        lhs = lhs + interior(ansatz.components[a], sys.S.omega[a]);
    DifferentialForm rhs = sys.gamma;
    KVectorField R = reeb_fields(sys.S);
    for (int a = 0; a < chart->k(); ++a) {
        Expression gR = apply_form(sys.gamma, {R[a]});
        rhs = rhs - sys.S.eta[a] * gR;
    }
    return form_to_equations(chart, lhs - rhs);
}

std::vector<std::pair<SymId, Expression>> assemble_equations(const LagrangianSystem& sys,
                                                             const Ansatz& ansatz,
                                                             EquationForm form) {
    const ChartPtr& chart = sys.chart;
    if (ansatz.chart != chart) throw chart_error("ansatz chart does not match system");
    const ContextPtr& ctx = chart->context();
    DifferentialForm lhs(chart, 1);
    DifferentialForm rhs(chart, 1);
    if (form == EquationForm::Standard) {
        for (int a = 0; a < chart->k(); ++a)
            lhs = lhs + interior(ansatz.components[a], sys.omega[a]);
        rhs = d_scalar(chart, sys.energy);
        for (int a = 0; a < chart->k(); ++a)
            rhs = rhs + DifferentialForm::d_coord(chart, chart->base()[a]) *
                            sys.L.diff(chart->base()[a]);
    } else {
        ReebFreeForms rf = reeb_free_forms(sys);
        for (int a = 0; a < chart->k(); ++a)
            lhs = lhs + interior(ansatz.components[a], rf.Omega[a]);
        rhs = d_scalar(chart, sys.L) * Expression::constant(ctx, Rational(chart->k() - 1));
    }
    return form_to_equations(chart, lhs - rhs);
}

namespace {

Expression substitute_assignments(Expression e,
                                  const std::map<SymId, Expression>& assignments) {
    for (std::size_t round = 0; round <= assignments.size(); ++round) {
        bool touch = false;
        for (auto& [u, v] : assignments)
            if (e.depends_on(u)) touch = true;
        if (!touch) return e;
        e = e.substitute(assignments);
    }
    throw internal_error("assignment substitution did not terminate");
}

struct NormEq {
    enum class Kind { Trivial, Inconsistent, Constraint, Solvable } kind;
    Poly constant_term;                              // A_0
    std::vector<std::pair<std::size_t, Poly>> coeffs;  // (unknown index, A_u)
    // Best pivot among coeffs.
    std::size_t pivot_pos = 0;  // position within coeffs
    bool pivot_constant = false;
    int pivot_degree = 0;

    explicit NormEq(const ContextPtr& ctx)
        : kind(Kind::Trivial), constant_term(Poly::zero(ctx)) {}
};

NormEq normalize_equation(const Expression& raw, const Ansatz& ansatz,
                          const TriangularConstraintSet& S,
                          const std::map<SymId, Expression>& assignments,
                          AssumptionLedger& ledger, const std::string& origin) {
    const ContextPtr& ctx = raw.context();
    NormEq out(ctx);
    Expression e = S.reduce(substitute_assignments(raw, assignments));
    if (e.is_zero()) return out;

    Poly p = e.num().primitive_part();

    // Split linearly over the ansatz unknowns.
    Poly constant = p;
    std::vector<std::pair<std::size_t, Poly>> coeffs;
    for (const UnknownInfo& u : ansatz.unknowns) {
        if (!p.depends_on(u.sym)) continue;
        if (p.degree_in(u.sym) != 1)
            throw internal_error("field equation is not linear in " + ctx->name(u.sym));
        Poly a = p.univariate_in(u.sym).at(1);
        for (const UnknownInfo& w : ansatz.unknowns)
            if (a.depends_on(w.sym))
                throw internal_error("field equation mixes unknowns nonlinearly");
        a = S.residual_reduce(a);
        constant = constant - a * Poly::symbol(ctx, u.sym);
        if (!a.is_zero()) coeffs.emplace_back(u.index, std::move(a));
    }
    // After removing the reduced linear part the rest must be unknown-free.
    for (const UnknownInfo& u : ansatz.unknowns) {
        if (!constant.depends_on(u.sym)) continue;
        // Residual reduction zeroed this coefficient on the locus.
        Poly a = constant.univariate_in(u.sym).at(1);
        constant = constant - a * Poly::symbol(ctx, u.sym);
    }
    constant = S.residual_reduce(constant);

    if (coeffs.empty()) {
        if (constant.is_zero()) return out;
        if (constant.is_constant()) {
            out.kind = NormEq::Kind::Inconsistent;
            return out;
        }
        out.kind = NormEq::Kind::Constraint;
        out.constant_term = constant.primitive_part();
        return out;
    }

    // Remove a common symbolic factor of all coefficients; vanishing of the
    // factor is a genericity hypothesis.
    Poly g = constant;
    for (auto& [idx, a] : coeffs) g = Poly::gcd(g, a);
    if (!g.is_constant()) {
        ledger.record(Expression::from_poly(g), origin + " (common factor of an equation)");
        constant = *constant.divide_exact(g);
        for (auto& [idx, a] : coeffs) a = *a.divide_exact(g);
    }

    out.kind = NormEq::Kind::Solvable;
    out.constant_term = std::move(constant);
    out.coeffs = std::move(coeffs);
    out.pivot_pos = 0;
    out.pivot_constant = false;
    out.pivot_degree = 0;
    bool first = true;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
        const Poly& a = out.coeffs[i].second;
        bool cst = a.is_constant();
        int deg = a.total_degree();
        auto key = std::make_tuple(!cst, deg, out.coeffs[i].first);
        auto best = std::make_tuple(!out.pivot_constant, out.pivot_degree,
                                    out.coeffs[out.pivot_pos].first);
        if (first || key < best) {
            out.pivot_pos = i;
            out.pivot_constant = cst;
            out.pivot_degree = deg;
            first = false;
        }
    }
    return out;
}

}  // namespace

SplitSolveResult split_solve(const std::vector<Expression>& equations, const Ansatz& ansatz,
                             TriangularConstraintSet& S,
                             std::map<SymId, Expression>& assignments,
                             AssumptionLedger& ledger, const std::string& name_prefix,
                             int& constraint_counter, const std::string& origin) {
    const ContextPtr& ctx = ansatz.chart->context();
    SplitSolveResult result;
    std::vector<Expression> pending = equations;

    while (!pending.empty()) {
        // Normalise everything against the current state.
        std::vector<NormEq> norm;
        norm.reserve(pending.size());
        for (const Expression& e : pending)
            norm.push_back(normalize_equation(e, ansatz, S, assignments, ledger, origin));

        // Drop identities; stop on inconsistency.
        std::vector<Expression> keep;
        std::vector<NormEq> keep_norm;
        for (std::size_t i = 0; i < norm.size(); ++i) {
            if (norm[i].kind == NormEq::Kind::Trivial) continue;
            if (norm[i].kind == NormEq::Kind::Inconsistent) {
                result.inconsistent = true;
                result.diagnostic = "field equations are inconsistent on the current locus";
                return result;
            }
            keep.push_back(pending[i]);
            keep_norm.push_back(norm[i]);
        }
        pending = std::move(keep);
        norm = std::move(keep_norm);
        if (pending.empty()) break;

        // New constraints first: equations whose unknown coefficients all
        // reduced to zero on the locus.
        bool constrained = false;
        for (std::size_t i = 0; i < norm.size(); ++i) {
            if (norm[i].kind != NormEq::Kind::Constraint) continue;
            if (!S.residual_reduction_complete()) {
                result.undecided = true;
                result.diagnostic =
                    "cannot certify independence of a constraint candidate: residual "
                    "reduction is incomplete";
                return result;
            }
            Expression zeta = Expression::from_poly(norm[i].constant_term);
            auto res = S.add_constraint(zeta, ledger, origin);
            if (res == TriangularConstraintSet::AddResult::Inconsistent) {
                result.inconsistent = true;
                result.diagnostic = "constraint reduces to a nonzero constant";
                return result;
            }
            if (res != TriangularConstraintSet::AddResult::Redundant) {
                ++constraint_counter;
                result.new_constraints.push_back(
                    {name_prefix + std::to_string(constraint_counter), zeta, origin});
            }
            pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(i));
            constrained = true;
            break;
        }
        if (constrained) continue;

        // Globally best pivot: constants first, then lowest degree, then
        // unknown enumeration order, then equation order.
        std::size_t best_eq = 0;
        bool have = false;
        auto key_of = [&](const NormEq& n, std::size_t eq_idx) {
            return std::make_tuple(!n.pivot_constant, n.pivot_degree,
                                   n.coeffs[n.pivot_pos].first, eq_idx);
        };
        for (std::size_t i = 0; i < norm.size(); ++i) {
            if (norm[i].kind != NormEq::Kind::Solvable) continue;
            if (!have || key_of(norm[i], i) < key_of(norm[best_eq], best_eq)) {
                best_eq = i;
                have = true;
            }
        }
        if (!have) break;
        NormEq& n = norm[best_eq];
        if (!n.pivot_constant && !S.residual_reduction_complete()) {
            result.undecided = true;
            result.diagnostic = "cannot certify a symbolic pivot: residual reduction is "
                                "incomplete";
            return result;
        }
        const auto& [uidx, acoeff] = n.coeffs[n.pivot_pos];
        const UnknownInfo& unknown = ansatz.unknowns[uidx];
        if (!n.pivot_constant)
            ledger.record(Expression::from_poly(acoeff), origin + " (solved pivot)");
        Expression rhs = Expression::from_poly(n.constant_term);
        for (std::size_t i = 0; i < n.coeffs.size(); ++i) {
            if (i == n.pivot_pos) continue;
            rhs = rhs + Expression::from_poly(n.coeffs[i].second) *
                            Expression::symbol(ctx, ansatz.unknowns[n.coeffs[i].first].sym);
        }
        Expression value = -rhs / Expression::from_poly(acoeff);
        assignments.emplace(unknown.sym, value);
        result.assignments.push_back({unknown.sym, value});
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best_eq));
    }
    return result;
}

std::vector<Expression> tangency_step(const Ansatz& ansatz,
                                      const std::vector<ConstraintRecord>& newest,
                                      const std::map<SymId, Expression>& assignments) {
    std::vector<Expression> out;
    for (const ConstraintRecord& c : newest) {
        for (int a = 0; a < ansatz.chart->k(); ++a) {
            Expression deriv = Expression::zero(ansatz.chart->context());
            for (auto& [coord, coeff] : ansatz.components[a].components()) {
                Expression d = c.expr.diff(coord);
                if (d.is_zero()) continue;
                deriv = deriv + substitute_assignments(coeff, assignments) * d;
            }
            out.push_back(std::move(deriv));
        }
    }
    return out;
}

namespace {

class ChainSolver {
public:
    ChainSolver(Ansatz ansatz, std::string prefix, const EngineOptions& opts)
        : opts_(opts), prefix_(std::move(prefix)) {
        chain_.ansatz = std::move(ansatz);
    }

    const Ansatz& ansatz() const { return chain_.ansatz; }

    void seed_compatibility(const std::vector<Expression>& cs) {
        for (const Expression& c : cs) {
            if (c.is_zero()) continue;
            Expression canon = AssumptionLedger::canonical_nonzero(c);
            auto res = chain_.set.add_constraint(c, chain_.assumptions, "compatibility");
            if (res == TriangularConstraintSet::AddResult::Inconsistent) {
                chain_.status = ChainStatus::Empty;
                chain_.diagnostic = "gauge compatibility fails identically";
                return;
            }
            if (res == TriangularConstraintSet::AddResult::Redundant) continue;
            ++counter_;
            seeds_.push_back(
                {prefix_ + std::to_string(counter_), std::move(canon), "compatibility"});
        }
    }

    void run(const std::vector<std::pair<SymId, Expression>>& equations) {
        if (chain_.status != ChainStatus::Stable) {
            finalize();
            return;
        }
        std::vector<Expression> eqs;
        for (auto& [c, e] : equations) eqs.push_back(e);

        ChainLevel level0;
        level0.index = 0;
        level0.constraints = seeds_;
        SplitSolveResult r =
            split_solve(eqs, chain_.ansatz, chain_.set, assignments_, chain_.assumptions,
                        prefix_, counter_, "field equations");
        absorb(level0, r);
        chain_.levels.push_back(level0);
        if (terminal(r) || assumption_died() || zero_dimensional()) {
            finalize();
            return;
        }

        std::vector<ConstraintRecord> newest = level0.constraints;
        int j = 0;
        while (!newest.empty()) {
            if (++j > opts_.max_levels) {
                chain_.status = ChainStatus::IterationCapExceeded;
                chain_.diagnostic = "no stable level within the iteration cap";
                break;
            }
            std::vector<Expression> teqs = tangency_step(chain_.ansatz, newest, assignments_);
            ChainLevel level;
            level.index = j;
            SplitSolveResult tr =
                split_solve(teqs, chain_.ansatz, chain_.set, assignments_,
                            chain_.assumptions, prefix_, counter_, "tangency");
            absorb(level, tr);
            newest = level.constraints;
            if (!level.constraints.empty() || !level.assignments.empty())
                chain_.levels.push_back(level);
            if (terminal(tr) || assumption_died() || zero_dimensional()) break;
        }
        finalize();
    }

    ConstraintChain take() && { return std::move(chain_); }

private:
    void absorb(ChainLevel& level, const SplitSolveResult& r) {
        for (auto& c : r.new_constraints) level.constraints.push_back(c);
        for (auto& a : r.assignments) level.assignments.push_back(a);
        if (r.inconsistent) {
            chain_.status = ChainStatus::Empty;
            chain_.diagnostic = r.diagnostic;
        } else if (r.undecided) {
            chain_.status = ChainStatus::Undecided;
            chain_.diagnostic = r.diagnostic;
        }
    }

    bool terminal(const SplitSolveResult& r) const { return r.inconsistent || r.undecided; }

    bool assumption_died() {
        if (chain_.status != ChainStatus::Stable) return false;
        for (const Expression& e : chain_.assumptions.canonical_exprs()) {
            if (chain_.set.vanishes_on_locus(e)) {
                chain_.status = ChainStatus::Empty;
                chain_.diagnostic = "genericity assumption " +
                                    AssumptionLedger::canonical_nonzero(e).str() +
                                    " != 0 vanishes on the constraint locus";
                return true;
            }
        }
        return false;
    }

    bool zero_dimensional() {
        if (chain_.status != ChainStatus::Stable) return false;
        if (chain_.set.pivots().size() == chain_.ansatz.chart->coords().size()) {
            chain_.status = ChainStatus::ZeroDimensional;
            chain_.diagnostic = "every chart coordinate is fixed by the constraints";
            return true;
        }
        return false;
    }

    void finalize() {
        const ChartPtr& chart = chain_.ansatz.chart;
        for (auto& [u, v] : assignments_) {
            Expression red = chain_.set.reduce(substitute_assignments(v, assignments_));
            chain_.solved.emplace(u, red);
        }
        for (const UnknownInfo& u : chain_.ansatz.unknowns)
            if (!assignments_.count(u.sym)) chain_.free_unknowns.push_back(u.sym);
        for (int a = 0; a < chart->k(); ++a) {
            VectorField X(chart);
            for (auto& [coord, coeff] : chain_.ansatz.components[a].components()) {
                Expression red =
                    chain_.set.reduce(substitute_assignments(coeff, assignments_));
                if (!red.is_zero()) X.set(coord, red);
            }
            chain_.final_family.push_back(std::move(X));
        }
        chain_.dimension = static_cast<int>(chart->coords().size()) -
                           static_cast<int>(chain_.set.pivots().size());
    }

    EngineOptions opts_;
    std::string prefix_;
    ConstraintChain chain_;
    std::vector<ConstraintRecord> seeds_;
    std::map<SymId, Expression> assignments_;
    int counter_ = 0;
};

}  // namespace

ConstraintChain run_chain(const HamiltonianSystem& sys, const EngineOptions& opts) {
    if (opts.mode == RunMode::Sopde)
        throw chart_error("sopde mode applies to Lagrangian systems only");
    Ansatz ansatz = make_ansatz(sys.S.chart, RunMode::General, opts.naming);
    std::vector<std::pair<SymId, Expression>> equations = assemble_equations(sys, ansatz);
    ChainSolver solver(std::move(ansatz), "xi", opts);
    solver.seed_compatibility(gauge_compatibility(sys));
    solver.run(equations);
    return std::move(solver).take();
}

ConstraintChain run_chain(const LagrangianSystem& sys, const EngineOptions& opts) {
    Ansatz ansatz = make_ansatz(sys.chart, opts.mode, opts.naming);
    std::vector<std::pair<SymId, Expression>> equations =
        assemble_equations(sys, ansatz, opts.form);
    ChainSolver solver(std::move(ansatz), "zeta", opts);
    solver.run(equations);
    return std::move(solver).take();
}

std::vector<SymmetryResidual> sopde_symmetry_check(const ConstraintChain& chain) {
    const ChartPtr& chart = chain.ansatz.chart;
    std::vector<SymmetryResidual> out;
    if (chart->fibre_kind() != FibreKind::Velocity || !chart->full_fibre()) return out;
    for (int a = 0; a < chart->k(); ++a)
        for (int b = a + 1; b < chart->k(); ++b)
            for (int i = 0; i < chart->n(); ++i) {
                Expression ra = chain.final_family[a].coeff(*chart->fibre(i, b));
                Expression rb = chain.final_family[b].coeff(*chart->fibre(i, a));
                Expression r = chain.set.reduce(ra - rb);
                std::string status;
                if (chain.set.vanishes_on_locus(r)) {
                    status = "zero";
                } else {
                    bool has_free = false;
                    for (SymId u : chain.free_unknowns)
                        if (r.depends_on(u)) has_free = true;
                    status = has_free ? "free-choice" : "forced-nonzero";
                }
                out.push_back(SymmetryResidual{a, b, i, std::move(r), std::move(status)});
            }
    return out;
}

}  // namespace precosym
