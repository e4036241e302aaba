#pragma once

#include "precosym/lagrangian.hpp"
#include "precosym/structures.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace precosym {

enum class RunMode { General, Sopde };
enum class EquationForm { Standard, ReebFree };

struct NamingScheme {
    std::string position = "B";
    std::string fibre = "C";
    std::string gauge = "D";
};

struct UnknownInfo {
    SymId sym = 0;
    int component = 0;  // alpha
    SymId coord = 0;    // the coordinate direction the coefficient multiplies
    CoordRole role = CoordRole::Position;
    std::size_t index = 0;  // enumeration order
};

// Generic k-vector-field ansatz with the eta-conditions pre-applied: the
// base block of X_alpha is d/dx^alpha; position, fibre and gauge blocks are
// fresh unknowns (positions are the velocities in sopde mode).
struct Ansatz {
    ChartPtr chart;
    RunMode mode = RunMode::General;
    KVectorField components;
    std::vector<UnknownInfo> unknowns;

    bool is_unknown(SymId s) const {
        for (auto& u : unknowns)
            if (u.sym == s) return true;
        return false;
    }
    std::optional<UnknownInfo> unknown_for(int alpha, SymId coord) const {
        for (auto& u : unknowns)
            if (u.component == alpha && u.coord == coord) return u;
        return std::nullopt;
    }
};

Ansatz make_ansatz(const ChartPtr& chart, RunMode mode, const NamingScheme& naming = {});

struct ConstraintRecord {
    std::string name;
    Expression expr;     // canonical polynomial (cleared, content-free, signed)
    std::string origin;  // "compatibility" | "field equations" | "tangency"
};

struct AssignmentRecord {
    SymId unknown;
    Expression value;
};

struct ChainLevel {
    int index = 0;
    std::vector<ConstraintRecord> constraints;
    std::vector<AssignmentRecord> assignments;
};

enum class ChainStatus { Stable, Empty, ZeroDimensional, Undecided, IterationCapExceeded };

std::string to_string(ChainStatus s);

struct ConstraintChain {
    Ansatz ansatz;
    ChainStatus status = ChainStatus::Stable;
    std::string diagnostic;
    std::vector<ChainLevel> levels;
    TriangularConstraintSet set;
    AssumptionLedger assumptions;
    std::map<SymId, Expression> solved;  // fully reduced assignments
    std::vector<SymId> free_unknowns;
    KVectorField final_family;
    int dimension = 0;

    const ConstraintRecord* find_constraint(const std::string& name) const {
        for (auto& l : levels)
            for (auto& c : l.constraints)
                if (c.name == name) return &c;
        return nullptr;
    }
};

struct EngineOptions {
    RunMode mode = RunMode::General;
    EquationForm form = EquationForm::Standard;
    int max_levels = 20;
    NamingScheme naming;
};

// Compatibility constraints dh/dz^j for the gauge coordinates identified by
// structure validation. Non-coordinate kernel directions are left to the
// equation residuals.
std::vector<Expression> gauge_compatibility(const HamiltonianSystem& sys);

// Coefficient-wise field equations (LHS - RHS per coordinate differential).
std::vector<std::pair<SymId, Expression>> assemble_equations(const HamiltonianSystem& sys,
                                                             const Ansatz& ansatz);
std::vector<std::pair<SymId, Expression>> assemble_equations(const LagrangianSystem& sys,
                                                             const Ansatz& ansatz,
                                                             EquationForm form);

// One elimination pass over a batch of equations, shared state in/out.
struct SplitSolveResult {
    std::vector<ConstraintRecord> new_constraints;
    std::vector<AssignmentRecord> assignments;
    bool inconsistent = false;
    bool undecided = false;
    std::string diagnostic;
};

SplitSolveResult split_solve(const std::vector<Expression>& equations, const Ansatz& ansatz,
                             TriangularConstraintSet& S,
                             std::map<SymId, Expression>& assignments,
                             AssumptionLedger& ledger, const std::string& name_prefix,
                             int& constraint_counter, const std::string& origin);

// Directional derivatives of the newest constraints along the ansatz.
std::vector<Expression> tangency_step(const Ansatz& ansatz,
                                      const std::vector<ConstraintRecord>& newest,
                                      const std::map<SymId, Expression>& assignments);

ConstraintChain run_chain(const HamiltonianSystem& sys, const EngineOptions& opts);
ConstraintChain run_chain(const LagrangianSystem& sys, const EngineOptions& opts);

struct SymmetryResidual {
    int alpha = 0;
    int beta = 0;
    int position = 0;
    Expression residual;
    std::string status;  // "zero" | "free-choice" | "forced-nonzero"
};

// (X_alpha)^i_beta - (X_beta)^i_alpha reduced modulo the final constraint
// set; empty for k = 1.
std::vector<SymmetryResidual> sopde_symmetry_check(const ConstraintChain& chain);

}  // namespace precosym
