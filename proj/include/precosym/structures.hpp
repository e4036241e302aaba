#pragma once

#include "precosym/form.hpp"
#include "precosym/linalg.hpp"
#include "precosym/triangular.hpp"

#include <string>
#include <vector>

namespace precosym {

// k closed 1-forms eta^alpha and k closed 2-forms omega^alpha over a chart
// of product type R^k x P; eta^alpha is always dx^alpha here.
struct KPrecosymplecticStructure {
    ChartPtr chart;
    std::vector<DifferentialForm> eta;
    std::vector<DifferentialForm> omega;
};

struct StructureValidation {
    bool regular = false;
    std::vector<int> omega_ranks;                      // rank of each omega^alpha
    int omega_kernel_dim = 0;                          // dim of the joint omega kernel
    int kernel_dim = 0;                                // dim of ker eta ∩ ker omega
    std::vector<SymId> gauge_coords;                   // coordinate kernel directions
    std::vector<std::vector<Expression>> kernel_basis;
    std::vector<std::string> warnings;
    AssumptionLedger assumptions;

    std::string classification() const {
        return regular ? "k-cosymplectic (regular)" : "k-precosymplectic";
    }
};

// Canonical structure on a momentum-type chart: eta^alpha = dx^alpha and
// omega^alpha the Darboux pairing over the fibre pairs present.
KPrecosymplecticStructure canonical_structure(const ChartPtr& chart);

// Builds the stable cotangent chart R^k x (T^1_k)* Q with coordinates
// (x^a, q^i, p<i>_<a>) and its regular canonical structure.
KPrecosymplecticStructure canonical_hamiltonian_chart(int k, int n);

// Structure checks: closedness, eta-independence, generic ranks, kernels,
// regular-vs-precosymplectic classification, gauge directions.
StructureValidation validate(const KPrecosymplecticStructure& S);

// Product-type Reeb choice d/dx^alpha. The pairing conditions with eta are
// asserted; a violated omega-kernel condition is reported through the
// validation warning channel instead (it fails on non-Darboux presentations
// even for textbook systems).
KVectorField reeb_fields(const KPrecosymplecticStructure& S);

// flat(X) = i_{X_alpha} omega^alpha + (i_{X_alpha} eta^alpha) eta^alpha.
DifferentialForm flat(const KPrecosymplecticStructure& S, const KVectorField& X);

struct HamiltonianSystem {
    KPrecosymplecticStructure S;
    Expression h;
    DifferentialForm gamma;  // dh
    StructureValidation validation;

    HamiltonianSystem(KPrecosymplecticStructure s, Expression h_)
        : S(std::move(s)),
          h(std::move(h_)),
          gamma(d_scalar(S.chart, h)),
          validation(validate(S)) {}
};

}  // namespace precosym
