#pragma once

#include <vector>

namespace mricls {

struct SymmetricEigen {
    std::vector<double> values;                // nonincreasing
    std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k], unit length
};

// Eigendecomposition of a dense symmetric matrix (row-major, n x n) by cyclic
// Jacobi rotations. Converges when the off-diagonal Frobenius norm drops
// below 1e-12 relative to the matrix norm, capped at 100 sweeps. The input is
// symmetrized by averaging a_ij and a_ji before iterating.
SymmetricEigen jacobi_eigen(const std::vector<double>& matrix, int n);

} // namespace mricls
