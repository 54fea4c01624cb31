#pragma once

#include <span>
#include <vector>

#include "orthocop/model.hpp"
#include "orthocop/reference.hpp"

namespace orthocop {

/// Spearman's Rho from the model matrix: 12 mu^T A mu - 3.
double spearman_rho(const CopulaModel& model);

/// Spearman's Rho by tensor quadrature of 12 * int int C(u,v) du dv - 3.
double spearman_rho_quadrature(const std::function<double(double, double)>& cdf,
                               const QuadratureRule& rule);
double spearman_rho_quadrature(const CopulaModel& model);
double spearman_rho_quadrature(const ReferenceCopula& ref, int order = 128);

/// Kendall's Tau from the model matrix: 1 - 4 tr(A^T Theta A Theta).
double kendall_tau(const CopulaModel& model);

/// Kendall's Tau by quadrature of 4 * int int C(u,v) c(u,v) du dv - 1.
double kendall_tau_quadrature(const CopulaModel& model);

/// Survival-ratio profile (1 - 2u + C(u,u)) / (1 - u) at each point of
/// `u_points` (all must lie in [0,1)); tends to the upper tail coefficient,
/// which is 0 for every model of this family.
std::vector<double> upper_tail_profile(const CopulaModel& model,
                                       std::span<const double> u_points);

/// Closed-form Spearman's Rho of the Dirichlet model: (6 theta / pi^2) sum_{j<=p} j^-2.
double dirichlet_rho(int harmonics, double theta);

/// Closed-form Spearman's Rho of the Fejer model:
/// (6 theta / pi^2) (sum_{j<q} j^-2 - (1/q) sum_{j<q} j^-1).
double fejer_rho(int q, double theta);

} // namespace orthocop
