#pragma once

#include "precosym/structures.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace precosym {

// J^alpha(v): sends d/dq^i to d/dv^i_alpha, annihilates base and fibre
// directions. Requires a velocity chart with a full fibre table.
VectorField k_tangent_apply(const ChartPtr& chart, int alpha, const VectorField& v);

// Liouville field Delta_alpha = v^i_alpha d/dv^i_alpha.
VectorField liouville(const ChartPtr& chart, int alpha);
VectorField liouville_total(const ChartPtr& chart);

enum class Regularity { Regular, AlmostRegularCandidate, Undetermined };

struct LagrangianSystem {
    ChartPtr chart;
    Expression L;
    std::vector<DifferentialForm> theta;  // theta^alpha_L = dL o J^alpha
    std::vector<DifferentialForm> omega;  // omega^alpha_L = -d theta^alpha_L
    Expression energy;                    // E_L = Delta(L) - L
    Matrix hessian;                       // d2L/dv^i_a dv^j_b, rows/cols i*k+a
    Regularity regularity = Regularity::Undetermined;
    AssumptionLedger assumptions;

    LagrangianSystem(ChartPtr c, Expression l)
        : chart(std::move(c)), L(std::move(l)), energy(Expression::zero(chart->context())) {}

    KPrecosymplecticStructure structure() const { return {chart, eta_forms(), omega}; }
    std::vector<DifferentialForm> eta_forms() const;
};

LagrangianSystem build_lagrangian_system(const ChartPtr& chart, const Expression& L);

// Fibre derivative p_i^alpha = dL/dv^i_alpha into a fresh momentum chart
// over the same symbol context.
struct LegendreMap {
    ChartPtr source;
    ChartPtr target;
    std::map<SymId, Expression> assignment;        // target coord -> source expression
    std::vector<Expression> primary_constraints;   // p_i^alpha - dL/dv^i_alpha
};

// momentum_names[i][alpha] may override the default p<i+1>_<alpha+1> names.
LegendreMap legendre(const LagrangianSystem& sys,
                     const std::vector<std::vector<std::string>>& momentum_names = {});

// The image P of the Legendre map together with the induced Hamiltonian
// system on it.
struct PhaseSpaceReduction {
    ChartPtr p_chart;
    std::vector<SymId> kept_momenta;
    std::map<SymId, Expression> fixed_momenta;       // momentum -> f(x, q)
    std::map<SymId, Expression> velocity_solutions;  // velocity -> expr(x, q, p)
    std::vector<Expression> momentum_constraints;    // p - f(x, q) on the big space
    AssumptionLedger assumptions;
};

struct HamiltonianizeResult {
    HamiltonianSystem system;
    PhaseSpaceReduction reduction;
};

HamiltonianizeResult hamiltonianize(const LagrangianSystem& sys, const LegendreMap& lm,
                                    const std::vector<std::string>& p_coords_override = {});

// Poincare-Cartan data without Reeb fields: Theta^alpha_L and
// Omega^alpha_L = -d Theta^alpha_L, used with i_{X_a} Omega^a_L = (k-1) dL.
struct ReebFreeForms {
    std::vector<DifferentialForm> Theta;
    std::vector<DifferentialForm> Omega;
};

ReebFreeForms reeb_free_forms(const LagrangianSystem& sys);

}  // namespace precosym
