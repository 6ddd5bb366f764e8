#pragma once

#include <vector>

#include "secisac/conic/expr.hpp"
#include "secisac/types.hpp"

namespace secisac::conic {

// [[Re, -Im], [Im, Re]]. Throws std::invalid_argument for non-Hermitian input.
RMat embed_hermitian(const CMat& m, double tol = 1e-10);

// Same structure for a Hermitian variable, as a column-major list of 4n^2 entries.
std::vector<LinExpr> embed_hermitian(const HermitianVar& var);

// Inverse of the embedding; averages the duplicated blocks and returns an
// exactly Hermitian matrix.
CMat extract_hermitian(const RMat& embedding);

// Value of a Hermitian variable at a point of the flat decision vector.
CMat hermitian_value(const HermitianVar& var, const RVec& x);
CVec complex_value(const ComplexVar& var, const RVec& x);

// Writes a Hermitian matrix / complex vector into the flat decision vector.
void assign_hermitian(const HermitianVar& var, const CMat& m, RVec& x);
void assign_complex(const ComplexVar& var, const CVec& v, RVec& x);

}  // namespace secisac::conic
