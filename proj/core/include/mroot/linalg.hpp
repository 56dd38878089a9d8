#ifndef MROOT_LINALG_HPP
#define MROOT_LINALG_HPP

#include <optional>
#include <vector>

#include "mroot/poly.hpp"

namespace mroot {

using PolyMatrix = std::vector<std::vector<Poly>>;
using ScalarMatrix = std::vector<std::vector<Scalar>>;

// Determinant of a small square polynomial matrix, by cofactor expansion.
Poly poly_det(const PolyMatrix& m);

// Adjugate (transposed cofactor matrix): m * adj(m) = det(m) * I.
PolyMatrix poly_adjugate(const PolyMatrix& m);

// Gaussian elimination with largest-pivot selection.  Returns nullopt on a
// singular (or numerically singular) matrix.
std::optional<std::vector<Scalar>> solve_dense(ScalarMatrix a,
                                               std::vector<Scalar> rhs);
std::optional<ScalarMatrix> invert_dense(const ScalarMatrix& a);

std::optional<std::vector<double>> solve_dense(
    std::vector<std::vector<double>> a, std::vector<double> rhs);

Scalar scalar_det(const ScalarMatrix& m);

// Sylvester criterion on the leading principal minors.
bool positive_definite(const ScalarMatrix& m);

}  // namespace mroot

#endif
