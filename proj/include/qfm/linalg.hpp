#pragma once

#include <vector>

#include "qfm/matrix.hpp"

namespace qfm {

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // eigenvectors as columns, same order
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
SymmetricEigen eigen_symmetric(const Matrix& a);

/// Solves a.x = b by Gaussian elimination with partial pivoting.
/// Throws Error(InvalidArgument) on singular or mis-shaped systems.
std::vector<double> solve_linear(Matrix a, std::vector<double> b);

}  // namespace qfm
