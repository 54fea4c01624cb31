#pragma once

#include <Eigen/Dense>

#include "orthocop/family.hpp"
#include "orthocop/model.hpp"
#include "orthocop/reference.hpp"

namespace orthocop {

enum class PartitionKind { bernstein, checkerboard };

/// A partition of unity xi = (xi_1, ..., xi_p): nonnegative functions summing
/// to 1 with int xi_i = 1/p, together with its Gram matrix.
class PartitionFamily {
public:
    PartitionFamily(PartitionKind kind, int p);

    PartitionKind kind() const { return kind_; }
    int size() const { return p_; }
    const Eigen::MatrixXd& gram() const { return gram_; }

    Eigen::VectorXd xi(double t) const;
    /// Xi(u) = int_0^u xi(t) dt, evaluated in closed form.
    Eigen::VectorXd xi_antiderivative(double u) const;

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    bool piecewise_constant() const { return kind_ == PartitionKind::checkerboard; }

private:
    PartitionKind kind_;
    int p_;
    Eigen::MatrixXd gram_;
    std::vector<double> breakpoints_;
};

PartitionFamily make_partition(PartitionKind kind, int p);
PartitionKind partition_kind_from_string(const std::string& s);

/// Cell-probability matrix of a copula on the p x p uniform grid:
/// M_ij = p * (second difference of the CDF over cell (i,j)). Doubly
/// stochastic for any copula; throws invalid_source_error when a negative
/// entry below -1e-10 reveals a non-monotone CDF.
Eigen::MatrixXd discretize_copula(const ReferenceCopula& source, int p);
Eigen::MatrixXd discretize_copula(const std::function<double(double, double)>& cdf, int p);

/// The orthonormal basis induced by a partition of unity:
/// phi = (H Gamma_xi H^T)^{-1/2} H xi with H = I + e1 s^T - s e1^T.
OrthonormalFamily partition_basis(const PartitionFamily& pf);

/// Converts a partition family plus a doubly stochastic matrix into a model
/// whose density equals p * xi(u)^T M xi(v).
CopulaModel to_copula_model(const PartitionFamily& pf, const Eigen::MatrixXd& m);

/// Closed-form inverse of H = I + e1 s^T - s e1^T:
/// H^{-1} = I - e1 e1^T + (2/p) s e1^T - (1/p) s s^T.
Eigen::MatrixXd partition_h_matrix(int p);
Eigen::MatrixXd partition_h_inverse(int p);

} // namespace orthocop
