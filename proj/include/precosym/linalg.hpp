#pragma once

#include "precosym/expr.hpp"
#include "precosym/triangular.hpp"

#include <string>
#include <vector>

namespace precosym {

using Matrix = std::vector<std::vector<Expression>>;

// Rank of M over the rational-function field on the generic stratum:
// every non-constant pivot is assumed nonvanishing and logged.
int generic_rank(Matrix M, AssumptionLedger& ledger, const std::string& note);

// Basis of the right nullspace {v : M v = 0} on the generic stratum.
// Basis vectors are canonical: one per free column, with a 1 in the free
// slot.
std::vector<std::vector<Expression>> nullspace(Matrix M, AssumptionLedger& ledger,
                                               const std::string& note);

// Fraction-free determinant (Bareiss) of a square matrix.
Expression determinant(Matrix M);

}  // namespace precosym
