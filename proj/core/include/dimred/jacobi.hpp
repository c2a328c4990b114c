#pragma once

#include <vector>

#include "dimred/matrix.hpp"

namespace dimred::numkernel {

/// Full real spectrum of a symmetric matrix by cyclic Jacobi rotations,
/// sorted ascending. The off-diagonal Frobenius norm is driven below
/// 1e-12 * ||A||_F. Serves as the dense oracle for every other eigen path.
/// Throws numerical_error if A is not symmetric within 1e-12 relative.
std::vector<double> jacobi_dense_sym(const RealMatrix& a);

/// Same, also accumulating eigenvectors (columns of v).
std::vector<double> jacobi_dense_sym(const RealMatrix& a, RealMatrix& v);

/// Spectrum of a complex Hermitian matrix via the real 2n x 2n embedding
/// [[Re, -Im], [Im, Re]], whose spectrum is that of A with doubled
/// multiplicities. Oracle use only.
std::vector<double> hermitian_eigs(const ComplexMatrix& a);

} // namespace dimred::numkernel
