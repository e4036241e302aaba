#include "precosym/structures.hpp"

#include "precosym/errors.hpp"

#include <algorithm>

namespace precosym {

KPrecosymplecticStructure canonical_structure(const ChartPtr& chart) {
    chart->check_complete();
    KPrecosymplecticStructure S;
    S.chart = chart;
    for (int a = 0; a < chart->k(); ++a) {
        S.eta.push_back(DifferentialForm::d_coord(chart, chart->base()[a]));
        DifferentialForm w(chart, 2);
        for (int i = 0; i < chart->n(); ++i) {
            auto p = chart->fibre(i, a);
            if (!p) continue;
            w = w + wedge(DifferentialForm::d_coord(chart, chart->positions()[i]),
                          DifferentialForm::d_coord(chart, *p));
        }
        S.omega.push_back(std::move(w));
    }
    return S;
}

KPrecosymplecticStructure canonical_hamiltonian_chart(int k, int n) {
    if (k < 1 || n < 1) throw chart_error("canonical chart requires k, n >= 1");
    auto ctx = std::make_shared<SymbolContext>();
    auto chart = std::make_shared<Chart>(ctx, k, n);
    for (int a = 0; a < k; ++a) chart->add_base("x" + std::to_string(a + 1));
    for (int i = 0; i < n; ++i) chart->add_position("q" + std::to_string(i + 1));
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < k; ++a)
            chart->add_fibre("p" + std::to_string(i + 1) + "_" + std::to_string(a + 1), i,
                             a, FibreKind::Momentum);
    return canonical_structure(chart);
}

namespace {

// omega as an antisymmetric coefficient matrix over the chart coordinates.
Matrix form_matrix(const DifferentialForm& w) {
    const ChartPtr& chart = w.chart();
    const std::size_t m = chart->coords().size();
    Matrix M(m, std::vector<Expression>(m, Expression::zero(chart->context())));
    for (auto& [key, c] : w.coefficients()) {
        M[key[0]][key[1]] = c;
        M[key[1]][key[0]] = -c;
    }
    return M;
}

bool is_coordinate_direction(const std::vector<Expression>& v, int* index) {
    int nz = -1;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        if (nz >= 0) return false;
        if (!v[i].is_constant()) return false;
        nz = static_cast<int>(i);
    }
    if (nz < 0) return false;
    *index = nz;
    return true;
}

}  // namespace

StructureValidation validate(const KPrecosymplecticStructure& S) {
    const ChartPtr& chart = S.chart;
    chart->check_complete();
    const int k = chart->k();
    if (static_cast<int>(S.eta.size()) != k || static_cast<int>(S.omega.size()) != k)
        throw chart_error("structure must carry k one-forms and k two-forms");

    StructureValidation rep;

    for (int a = 0; a < k; ++a) {
        if (!ext_d(S.eta[a]).is_zero())
            throw chart_error("eta^" + std::to_string(a + 1) + " is not closed");
        if (!ext_d(S.omega[a]).is_zero())
            throw chart_error("omega^" + std::to_string(a + 1) + " is not closed");
    }

    // eta^1 ^ ... ^ eta^k != 0.
    DifferentialForm top = S.eta[0];
    for (int a = 1; a < k; ++a) top = wedge(top, S.eta[a]);
    if (top.is_zero()) throw chart_error("eta forms are not independent");

    const std::size_t m = chart->coords().size();
    Matrix stacked;
    for (int a = 0; a < k; ++a) {
        Matrix M = form_matrix(S.omega[a]);
        rep.omega_ranks.push_back(
            generic_rank(M, rep.assumptions, "rank of omega^" + std::to_string(a + 1)));
        for (auto& row : M) stacked.push_back(row);
    }
    {
        Matrix ws = stacked;
        int r = generic_rank(ws, rep.assumptions, "joint omega kernel");
        rep.omega_kernel_dim = static_cast<int>(m) - r;
    }
    // Stack the eta rows on top for the full kernel.
    Matrix full;
    for (int a = 0; a < k; ++a) {
        std::vector<Expression> row(m, Expression::zero(chart->context()));
        for (auto& [key, c] : S.eta[a].coefficients()) row[key[0]] = c;
        full.push_back(std::move(row));
    }
    for (auto& row : stacked) full.push_back(row);
    rep.kernel_basis = nullspace(full, rep.assumptions, "gauge kernel");
    rep.kernel_dim = static_cast<int>(rep.kernel_basis.size());
    for (auto& v : rep.kernel_basis) {
        int idx = -1;
        if (is_coordinate_direction(v, &idx)) rep.gauge_coords.push_back(chart->coords()[idx]);
    }

    rep.regular = rep.kernel_dim == 0 && rep.omega_kernel_dim == k;

    for (int a = 0; a < k; ++a) {
        if (rep.omega_ranks[a] % 2 != 0)
            rep.warnings.push_back("rank of omega^" + std::to_string(a + 1) +
                                   " is odd; antisymmetry is violated");
        if (rep.omega_ranks[a] == 0)
            rep.warnings.push_back("omega^" + std::to_string(a + 1) +
                                   " has rank 0, below the Darboux pattern");
    }
    if (rep.omega_kernel_dim < k)
        rep.warnings.push_back("joint omega kernel has dimension below k");
    if (!rep.regular) {
        // Darboux dimension pattern: dim M = k(n+1) + n - ell with 1 <= ell <= nk.
        int ell = k * (chart->n() + 1) + chart->n() - static_cast<int>(m);
        if (ell < 1 || ell > chart->n() * k)
            rep.warnings.push_back("chart dimension does not match the Darboux pattern k(n+1)+n-l");
    }
    // Product-type Reeb pairing against omega; report violations instead of
    // failing, since non-Darboux coordinate presentations break it.
    for (int a = 0; a < k; ++a) {
        VectorField r = VectorField::coordinate(chart, chart->base()[a]);
        for (int b = 0; b < k; ++b) {
            if (!interior(r, S.omega[b]).is_zero())
                rep.warnings.push_back("i_R omega != 0 for the coordinate Reeb field d/d" +
                                       chart->context()->name(chart->base()[a]) +
                                       " (non-Darboux presentation)");
        }
    }
    return rep;
}

KVectorField reeb_fields(const KPrecosymplecticStructure& S) {
    const ChartPtr& chart = S.chart;
    KVectorField R;
    for (int a = 0; a < chart->k(); ++a)
        R.push_back(VectorField::coordinate(chart, chart->base()[a]));
    // i_{R_a} eta^b = delta^b_a must hold exactly.
    for (int a = 0; a < chart->k(); ++a)
        for (int b = 0; b < chart->k(); ++b) {
            DifferentialForm p = interior(R[a], S.eta[b]);
            Expression v = p.coefficient({});
            Expression want = a == b ? Expression::one(chart->context())
                                     : Expression::zero(chart->context());
            if (v != want) throw chart_error("coordinate Reeb fields violate i_R eta = delta");
        }
    return R;
}

DifferentialForm flat(const KPrecosymplecticStructure& S, const KVectorField& X) {
    const ChartPtr& chart = S.chart;
    if (static_cast<int>(X.size()) != chart->k())
        throw chart_error("flat expects a k-vector field");
    DifferentialForm acc(chart, 1);
    for (int a = 0; a < chart->k(); ++a) {
        acc = acc + interior(X[a], S.omega[a]);
        Expression pairing = interior(X[a], S.eta[a]).coefficient({});
        acc = acc + S.eta[a] * pairing;
    }
    return acc;
}

}  // namespace precosym
