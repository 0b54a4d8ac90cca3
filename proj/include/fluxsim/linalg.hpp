#pragma once

#include <Eigen/SparseCore>

#include "fluxsim/types.hpp"

namespace fluxsim {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

struct EigenDecomposition {
  RealVector values;  // ascending
  Matrix vectors;     // columns
};

// Dense Hermitian eigendecomposition (LAPACK zheevd).
EigenDecomposition eigh(const Matrix& h);

// The k eigenpairs of a sparse Hermitian matrix nearest to sigma,
// via shift-invert Lanczos with full reorthogonalization.
EigenDecomposition eigh_window(const SparseMatrix& h, double sigma, int k,
                               double tol = 1e-10, int max_iter = 0);

}  // namespace fluxsim
