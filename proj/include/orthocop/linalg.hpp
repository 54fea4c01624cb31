#pragma once

#include <Eigen/Dense>

namespace orthocop {

/// Principal (positive semidefinite) square root of a symmetric PSD matrix,
/// via eigendecomposition. Eigenvalues in [-1e-12, 0] are clamped to zero.
/// Any eigenvector of M with eigenvalue 1 is preserved, in particular
/// M e1 = e1 implies R e1 = e1.
Eigen::MatrixXd sym_principal_sqrt(const Eigen::MatrixXd& m);

/// Inverse of the principal square root. Throws singular_matrix_error when an
/// eigenvalue falls below `eigenvalue_floor`.
Eigen::MatrixXd sym_inv_sqrt(const Eigen::MatrixXd& m, double eigenvalue_floor = 1e-10);

} // namespace orthocop
