#pragma once

#include <functional>
#include <span>
#include <vector>

#include "orthocop/model.hpp"
#include "orthocop/reference.hpp"

namespace orthocop {

using BivariateFn = std::function<double(double, double)>;

/// Moment matrix T(c) = int int c(x,y) phi(x) phi(y)^T dx dy with the given
/// rule on both axes. For c in the family span this recovers the model matrix.
Eigen::MatrixXd t_phi(const BivariateFn& target, const OrthonormalFamily& family,
                      const QuadratureRule& rule);

/// t_phi with an automatically escalated rule: the per-axis budget starts near
/// 64 nodes and doubles until two successive estimates differ by less than
/// `tol` in Frobenius norm. Targets flagged corner-singular use meshes graded
/// toward 0 so the escalation converges despite the unbounded density.
Eigen::MatrixXd t_phi_adaptive(const BivariateFn& target, const OrthonormalFamily& family,
                               bool corner_singular = false, double tol = 1e-9);

struct ProjectionResult {
    CopulaModel model;        // candidate, returned even when invalid
    ValidationReport report;  // nonnegativity verdict of the candidate
};

/// L2 projection of an arbitrary copula density onto the family: the model
/// built from t_phi, validated automatically. The candidate is returned even
/// when the verdict is invalid.
ProjectionResult p_phi(const BivariateFn& target, const OrthonormalFamily& family,
                       bool corner_singular = false);
ProjectionResult p_phi(const ReferenceCopula& target, const OrthonormalFamily& family);

/// True iff the identity matrix is an admissible model for the family, i.e.
/// q(u,v) = phi(u)^T phi(v) is nonnegative. Exactly then every projection
/// lands inside the copula family.
bool identity_check(const OrthonormalFamily& family);

/// Markov scalar product of two models: tr(A B).
double inner_product(const CopulaModel& lhs, const CopulaModel& rhs);

/// Markov scalar product of a model against a raw density: tr(A T(c)).
double inner_product(const CopulaModel& lhs, const BivariateFn& raw_density,
                     bool corner_singular = false);

struct ConvergenceRow {
    int p = 0;
    double l2_error = 0.0;
    double rho_model = 0.0;
    double rho_target = 0.0;
    double rho_gap = 0.0;
};

/// Projects the target onto families of increasing size and reports the L2
/// distance and the Spearman Rho gap at each size. The L2 norm of the target
/// is estimated once with a fixed high-resolution rule; a non-finite or
/// blown-up estimate raises numeric_error (density not square-integrable).
std::vector<ConvergenceRow>
convergence_study(const ReferenceCopula& target,
                  const std::function<OrthonormalFamily(int)>& family_builder,
                  std::span<const int> p_list);

} // namespace orthocop
