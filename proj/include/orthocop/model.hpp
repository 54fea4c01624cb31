#pragma once

#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "orthocop/family.hpp"

namespace orthocop {

/// Outcome of a nonnegativity scan of a model density.
///
/// For piecewise-constant families the scan evaluates every cell midpoint and
/// is exact, so the verdict is definitive. For smooth families the verdict
/// "valid" means no negative value was found on the grid (optionally after a
/// local refinement from the worst point); "inconclusive" flags a coarse scan
/// of a smooth density that found nothing negative but cannot certify.
struct ValidationReport {
    enum class Verdict { valid, invalid, inconclusive };

    double min_value = 0.0;
    double argmin_u = 0.0;
    double argmin_v = 0.0;
    int grid_resolution = 0;
    bool refined = false;
    Verdict verdict = Verdict::inconclusive;
};

const char* to_string(ValidationReport::Verdict v);

/// Tolerance below which a density minimum is treated as a genuine negative
/// value rather than rounding noise.
inline constexpr double kNonnegativityTol = 1e-9;

/// A copula density c(u,v) = phi(u)^T A phi(v). Construction enforces the
/// linear constraints A e1 = e1, A^T e1 = e1 (within 1e-10) and tr(A) >= -1e-12;
/// pointwise nonnegativity is certified separately through validate().
class CopulaModel {
public:
    CopulaModel(OrthonormalFamily family, Eigen::MatrixXd a);

    const OrthonormalFamily& family() const { return family_; }
    const Eigen::MatrixXd& matrix() const { return a_; }

    double density(double u, double v) const;
    double cdf(double u, double v) const;

    const std::optional<ValidationReport>& validation() const { return validation_; }
    CopulaModel with_validation(ValidationReport report) const;

private:
    OrthonormalFamily family_;
    Eigen::MatrixXd a_;
    std::optional<ValidationReport> validation_;
};

CopulaModel new_model(OrthonormalFamily family, Eigen::MatrixXd a);

/// Independence model A = e1 e1^T on the given family.
CopulaModel independence_model(OrthonormalFamily family);

/// Model with matrix diag{1, theta, ..., theta}.
CopulaModel diagonal_model(OrthonormalFamily family, double theta);

/// Scans the density for negative values. `resolution` is the per-axis grid
/// size for smooth families (piecewise-constant families use their exact cell
/// midpoints instead); `refine` runs a Nelder-Mead descent from the worst
/// grid point.
ValidationReport validate(const CopulaModel& model, int resolution = 512, bool refine = true);

/// validate() + attach the report to a copy of the model.
CopulaModel validated(const CopulaModel& model, int resolution = 512, bool refine = true);

/// The *-product (Markov product) of two models over the same family;
/// corresponds to the matrix product A*B.
CopulaModel star(const CopulaModel& lhs, const CopulaModel& rhs);

/// Convex mixture; weights must be nonnegative and sum to 1 within 1e-12.
CopulaModel mix(std::span<const CopulaModel> models, std::span<const double> weights);

/// Cesaro aggregation of the q nested truncations of a q x q matrix:
/// B_ij = (q + 1 - max(i,j)) A_ij / q, embedded in the family size if larger.
CopulaModel cesaro_aggregate(OrthonormalFamily family, const Eigen::MatrixXd& a);

/// Model with density 1 - theta + theta * D_p(u - v) on the trigonometric
/// family with `harmonics` frequencies (A = diag{1, theta, ..., theta}).
CopulaModel make_dirichlet_model(int harmonics, double theta);

/// Cesaro average of the Dirichlet models of order 0..q-1: density
/// 1 - theta + theta * F_q(u - v) with the (nonnegative) Fejer kernel F_q.
/// Harmonic j carries coefficient theta * (q - j) / q.
CopulaModel make_fejer_model(int q, double theta);

} // namespace orthocop
