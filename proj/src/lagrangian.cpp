#include "precosym/lagrangian.hpp"

#include "precosym/errors.hpp"

#include <algorithm>

namespace precosym {

namespace {

void require_velocity_chart(const ChartPtr& chart) {
    chart->check_complete();
    if (chart->fibre_kind() != FibreKind::Velocity || !chart->full_fibre())
        throw chart_error("operation requires a full velocity chart");
}

}  // namespace

VectorField k_tangent_apply(const ChartPtr& chart, int alpha, const VectorField& v) {
    require_velocity_chart(chart);
    if (alpha < 0 || alpha >= chart->k()) throw chart_error("k-tangent index out of range");
    VectorField r(chart);
    for (int i = 0; i < chart->n(); ++i) {
        Expression c = v.coeff(chart->positions()[i]);
        if (!c.is_zero()) r.set(*chart->fibre(i, alpha), c);
    }
    return r;
}

VectorField liouville(const ChartPtr& chart, int alpha) {
    require_velocity_chart(chart);
    if (alpha < 0 || alpha >= chart->k()) throw chart_error("Liouville index out of range");
    VectorField r(chart);
    for (int i = 0; i < chart->n(); ++i) {
        SymId vi = *chart->fibre(i, alpha);
        r.set(vi, Expression::symbol(chart->context(), vi));
    }
    return r;
}

VectorField liouville_total(const ChartPtr& chart) {
    VectorField r = liouville(chart, 0);
    for (int a = 1; a < chart->k(); ++a) r = r + liouville(chart, a);
    return r;
}

std::vector<DifferentialForm> LagrangianSystem::eta_forms() const {
    std::vector<DifferentialForm> eta;
    for (int a = 0; a < chart->k(); ++a)
        eta.push_back(DifferentialForm::d_coord(chart, chart->base()[a]));
    return eta;
}

namespace {

// Deterministic small rational sample points used by the rank-constancy
// probe; denominate away from singular loci by resampling.
struct SamplePointGen {
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    int next_int() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<int>((state >> 33) % 19) - 9;
    }
    Rational next() {
        int num = next_int();
        int den = 0;
        while (den == 0) den = next_int();
        if (num == 0) num = 1;
        return Rational(num, den);
    }
};

int exact_rank(std::vector<std::vector<Rational>> M) {
    int rank = 0;
    std::size_t rows = M.size();
    if (rows == 0) return 0;
    std::size_t cols = M[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && M[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(M[r], M[piv]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || M[i][c] == 0) continue;
            Rational f = M[i][c] / M[r][c];
            for (std::size_t j = c; j < cols; ++j) M[i][j] -= f * M[r][j];
        }
        ++r;
        ++rank;
    }
    return rank;
}

}  // namespace

LagrangianSystem build_lagrangian_system(const ChartPtr& chart, const Expression& L) {
    require_velocity_chart(chart);
    LagrangianSystem sys(chart, L);
    const ContextPtr& ctx = chart->context();
    const int k = chart->k();
    const int n = chart->n();

    for (int a = 0; a < k; ++a) {
        // theta^a_L(Z) = dL(J^a Z), evaluated on coordinate directions.
        DifferentialForm th(chart, 1);
        for (SymId c : chart->coords()) {
            VectorField jz = k_tangent_apply(chart, a, VectorField::coordinate(chart, c));
            Expression coeff = jz.apply(L);
            if (!coeff.is_zero()) th.add({chart->coord_pos(c)}, coeff);
        }
        sys.theta.push_back(th);
        sys.omega.push_back(-ext_d(th));
    }
    sys.energy = liouville_total(chart).apply(L) - L;

    sys.hessian.assign(n * k, std::vector<Expression>(n * k, Expression::zero(ctx)));
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < k; ++a) {
            Expression first = L.diff(*chart->fibre(i, a));
            for (int j = 0; j < n; ++j)
                for (int b = 0; b < k; ++b)
                    sys.hessian[i * k + a][j * k + b] = first.diff(*chart->fibre(j, b));
        }

    Expression det = determinant(sys.hessian);
    if (!det.is_zero()) {
        sys.regularity = Regularity::Regular;
        sys.assumptions.record(det, "Hessian determinant (regularity)");
        return sys;
    }

    // Singular: probe Hessian rank constancy at exact random points and
    // triangular solvability of the fibre derivative.
    SamplePointGen gen;
    std::optional<int> common_rank;
    bool constant_rank = true;
    int samples = 0;
    int tries = 0;
    while (samples < 12 && tries < 200) {
        ++tries;
        std::map<SymId, Rational> pt;
        for (SymId s : chart->coords()) pt.emplace(s, gen.next());
        // Parameters and opaque symbols may occur in L as well.
        std::vector<std::vector<Rational>> M;
        try {
            std::set<SymId> extra;
            for (auto& row : sys.hessian)
                for (auto& e : row) {
                    for (SymId s : e.num().variables()) extra.insert(s);
                    for (SymId s : e.den().variables()) extra.insert(s);
                }
            for (SymId s : extra)
                if (!pt.count(s)) pt.emplace(s, gen.next());
            for (auto& row : sys.hessian) {
                std::vector<Rational> r;
                for (auto& e : row) r.push_back(e.eval_exact(pt));
                M.push_back(std::move(r));
            }
        } catch (const degenerate_error&) {
            continue;  // singular denominator at this point; resample
        }
        int rk = exact_rank(std::move(M));
        if (!common_rank) common_rank = rk;
        else if (*common_rank != rk) constant_rank = false;
        ++samples;
    }

    bool triangular = true;
    {
        // Can the equations p = dL/dv be solved for a subset of velocities,
        // the rest being velocity-free?
        std::vector<Expression> fs;
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < k; ++a) fs.push_back(L.diff(*chart->fibre(i, a)));
        std::set<SymId> used;
        bool progress = true;
        std::vector<bool> done(fs.size(), false);
        while (progress) {
            progress = false;
            for (std::size_t s = 0; s < fs.size(); ++s) {
                if (done[s]) continue;
                bool vfree = true;
                for (int i = 0; i < n && vfree; ++i)
                    for (int a = 0; a < k && vfree; ++a)
                        if (fs[s].depends_on(*chart->fibre(i, a))) vfree = false;
                if (vfree) {
                    done[s] = true;
                    progress = true;
                    continue;
                }
                for (int i = 0; i < n && !done[s]; ++i)
                    for (int a = 0; a < k && !done[s]; ++a) {
                        SymId v = *chart->fibre(i, a);
                        if (used.count(v)) continue;
                        Poly num = fs[s].num();
                        if (num.degree_in(v) == 1 && !fs[s].den().depends_on(v)) {
                            used.insert(v);
                            done[s] = true;
                            progress = true;
                        }
                    }
            }
        }
        for (bool d : done)
            if (!d) triangular = false;
    }

    sys.regularity = (constant_rank && triangular) ? Regularity::AlmostRegularCandidate
                                                   : Regularity::Undetermined;
    return sys;
}

LegendreMap legendre(const LagrangianSystem& sys,
                     const std::vector<std::vector<std::string>>& momentum_names) {
    const ChartPtr& vchart = sys.chart;
    require_velocity_chart(vchart);
    const ContextPtr& ctx = vchart->context();
    const int k = vchart->k();
    const int n = vchart->n();

    auto mchart = std::make_shared<Chart>(ctx, k, n);
    for (SymId b : vchart->base()) mchart->adopt_base(b);
    for (SymId q : vchart->positions()) mchart->adopt_position(q);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < k; ++a) {
            std::string nm;
            if (static_cast<int>(momentum_names.size()) > i &&
                static_cast<int>(momentum_names[i].size()) > a)
                nm = momentum_names[i][a];
            if (nm.empty())
                nm = "p" + std::to_string(i + 1) + "_" + std::to_string(a + 1);
            mchart->add_fibre(nm, i, a, FibreKind::Momentum);
        }

    LegendreMap lm;
    lm.source = vchart;
    lm.target = mchart;
    for (SymId b : vchart->base()) lm.assignment.emplace(b, Expression::symbol(ctx, b));
    for (SymId q : vchart->positions()) lm.assignment.emplace(q, Expression::symbol(ctx, q));
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < k; ++a) {
            Expression f = sys.L.diff(*vchart->fibre(i, a));
            SymId p = *mchart->fibre(i, a);
            lm.assignment.emplace(p, f);
            lm.primary_constraints.push_back(Expression::symbol(ctx, p) - f);
        }

    // FL* theta^a = theta^a_L and FL* omega^a = omega^a_L must hold exactly.
    KPrecosymplecticStructure canonical = canonical_structure(mchart);
    for (int a = 0; a < k; ++a) {
        DifferentialForm theta(mchart, 1);
        for (int i = 0; i < n; ++i)
            theta = theta + DifferentialForm::d_coord(mchart, vchart->positions()[i]) *
                                Expression::symbol(ctx, *mchart->fibre(i, a));
        if (pullback(lm.assignment, vchart, theta) != sys.theta[a])
            throw internal_error("Legendre pullback of theta does not match theta_L");
        if (pullback(lm.assignment, vchart, canonical.omega[a]) != sys.omega[a])
            throw internal_error("Legendre pullback of omega does not match omega_L");
    }
    return lm;
}

HamiltonianizeResult hamiltonianize(const LagrangianSystem& sys, const LegendreMap& lm,
                                    const std::vector<std::string>& p_coords_override) {
    const ChartPtr& vchart = sys.chart;
    const ChartPtr& mchart = lm.target;
    const ContextPtr& ctx = vchart->context();
    const int k = vchart->k();
    const int n = vchart->n();

    PhaseSpaceReduction red;

    // Solve p_i^a - dL/dv for velocities, triangular style. Slots whose
    // right-hand side ends velocity-free fix the momentum instead.
    std::vector<std::pair<SymId, Expression>> eqs;  // momentum, p - f
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < k; ++a) {
            SymId p = *mchart->fibre(i, a);
            eqs.emplace_back(p, Expression::symbol(ctx, p) - lm.assignment.at(p));
        }
    std::vector<bool> done(eqs.size(), false);
    bool progress = true;
    auto velocity_in = [&](const Expression& e) -> std::optional<SymId> {
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < k; ++a) {
                SymId v = *vchart->fibre(i, a);
                if (e.depends_on(v)) return v;
            }
        return std::nullopt;
    };
    while (progress) {
        progress = false;
        for (std::size_t s = 0; s < eqs.size(); ++s) {
            if (done[s]) continue;
            Expression e = eqs[s].second.substitute(red.velocity_solutions);
            if (!velocity_in(e)) {
                // p = f(x, q): this momentum is fixed on P.
                SymId p = eqs[s].first;
                Expression f = Expression::symbol(ctx, p) - e;
                red.fixed_momenta.emplace(p, f);
                red.momentum_constraints.push_back(e);
                done[s] = true;
                progress = true;
                continue;
            }
            // Solve for any still-free velocity appearing linearly.
            for (int i = 0; i < n && !done[s]; ++i)
                for (int a = 0; a < k && !done[s]; ++a) {
                    SymId v = *vchart->fibre(i, a);
                    if (red.velocity_solutions.count(v)) continue;
                    Poly num = e.num();
                    if (num.degree_in(v) != 1 || e.den().depends_on(v)) continue;
                    auto uni = num.univariate_in(v);
                    Poly coeff = uni.at(1);
                    if (coeff.depends_on(v)) continue;
                    bool coeff_has_velocity = false;
                    for (int ii = 0; ii < n && !coeff_has_velocity; ++ii)
                        for (int aa = 0; aa < k && !coeff_has_velocity; ++aa)
                            if (coeff.depends_on(*vchart->fibre(ii, aa)))
                                coeff_has_velocity = true;
                    if (coeff_has_velocity) continue;
                    if (!coeff.is_constant())
                        red.assumptions.record(Expression::from_poly(coeff),
                                               "fibre inversion pivot");
                    Poly rest = uni.count(0) ? uni.at(0) : Poly::zero(ctx);
                    Expression sol = Expression::from_poly(-rest) /
                                     Expression::from_poly(coeff);
                    red.velocity_solutions.emplace(v, sol);
                    done[s] = true;
                    progress = true;
                }
        }
    }
    for (std::size_t s = 0; s < eqs.size(); ++s)
        if (!done[s])
            throw degenerate_error("primary constraints not solvable for the fibre of " +
                                   ctx->name(eqs[s].first));
    // Velocity solutions may still reference other solved velocities.
    for (int round = 0; round < n * k; ++round) {
        bool touched = false;
        for (auto& [v, e] : red.velocity_solutions) {
            Expression r = e.substitute(red.velocity_solutions);
            if (r != e) {
                e = r;
                touched = true;
            }
        }
        if (!touched) break;
    }

    // P is parametrised by {x, q} plus the momenta not fixed above.
    auto pchart = std::make_shared<Chart>(ctx, k, n);
    for (SymId b : vchart->base()) pchart->adopt_base(b);
    for (SymId q : vchart->positions()) pchart->adopt_position(q);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < k; ++a) {
            SymId p = *mchart->fibre(i, a);
            if (!red.fixed_momenta.count(p)) {
                pchart->adopt_fibre(p, i, a, FibreKind::Momentum);
                red.kept_momenta.push_back(p);
            }
        }

    if (!p_coords_override.empty()) {
        std::vector<std::string> have;
        for (SymId c : pchart->coords()) have.push_back(ctx->name(c));
        if (have != p_coords_override)
            throw chart_error("requested P coordinates do not parametrise the image of "
                              "the Legendre map");
    }

    // Inclusion of P into the momentum space: identity on kept coordinates,
    // the fixed momenta go to their defining functions.
    std::map<SymId, Expression> incl;
    for (SymId c : pchart->coords()) incl.emplace(c, Expression::symbol(ctx, c));
    for (auto& [p, f] : red.fixed_momenta) incl.emplace(p, f);

    KPrecosymplecticStructure big = canonical_structure(mchart);
    KPrecosymplecticStructure S;
    S.chart = pchart;
    for (int a = 0; a < k; ++a) {
        S.eta.push_back(DifferentialForm::d_coord(pchart, pchart->base()[a]));
        S.omega.push_back(pullback(incl, pchart, big.omega[a]));
    }

    // h with FL* h = E_L: substitute the solved velocities into E_L; any
    // remaining velocity dependence means E_L is not projectable.
    Expression h = sys.energy.substitute(red.velocity_solutions);
    if (auto v = velocity_in(h))
        throw degenerate_error("E_L is not Legendre-projectable; offending fibre direction " +
                               ctx->name(*v));

    red.p_chart = pchart;
    HamiltonianizeResult result{HamiltonianSystem(std::move(S), std::move(h)), std::move(red)};
    return result;
}

ReebFreeForms reeb_free_forms(const LagrangianSystem& sys) {
    const ChartPtr& chart = sys.chart;
    const ContextPtr& ctx = chart->context();
    const int k = chart->k();
    ReebFreeForms out;
    for (int a = 0; a < k; ++a) {
        DifferentialForm Theta = sys.theta[a];
        for (int b = 0; b < k; ++b) {
            // Delta^a_b = v^i_b d/dv^i_a applied to L.
            Expression dab = Expression::zero(ctx);
            for (int i = 0; i < chart->n(); ++i)
                dab = dab + Expression::symbol(ctx, *chart->fibre(i, b)) *
                                sys.L.diff(*chart->fibre(i, a));
            Expression coeff = (a == b ? sys.L : Expression::zero(ctx)) - dab;
            Theta = Theta + DifferentialForm::d_coord(chart, chart->base()[b]) * coeff;
        }
        out.Theta.push_back(Theta);
        out.Omega.push_back(-ext_d(Theta));
    }
    return out;
}

}  // namespace precosym
