#include "orthocop/projection.hpp"

#include <cmath>
#include <sstream>

#include "orthocop/dependence.hpp"
#include "orthocop/errors.hpp"

namespace orthocop {

namespace {

// Per-axis rule for the projection integrals at escalation stage s. Budgets
// roughly double per stage; corner-singular targets get meshes graded toward
// 0 (plain Gauss converges only ~n^-2 against an unbounded corner).
QuadratureRule projection_rule(const OrthonormalFamily& family, int stage, bool corner) {
    const auto& bps = family.breakpoints();
    if (corner) {
        const int depth = 16 + 8 * stage;
        const int per_cell = 8 + 2 * stage;
        return graded_rule(depth, per_cell, bps);
    }
    if (!bps.empty()) {
        const int cells = static_cast<int>(bps.size()) - 1;
        const int budget = default_quad_order() << stage;
        const int per_cell = std::max(8 << stage, (budget + cells - 1) / cells);
        return composite_rule(bps, per_cell);
    }
    return gauss_legendre_rule(default_quad_order() << stage);
}

} // namespace

Eigen::MatrixXd t_phi(const BivariateFn& target, const OrthonormalFamily& family,
                      const QuadratureRule& rule) {
    const int n = rule.order();
    const int p = family.size();

    Eigen::MatrixXd weighted_basis(p, n);
    for (int k = 0; k < n; ++k)
        weighted_basis.col(k) = rule.weights[k] * family.phi(rule.nodes[k]);

    Eigen::MatrixXd values(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double c = target(rule.nodes[i], rule.nodes[j]);
            if (!std::isfinite(c)) {
                std::ostringstream msg;
                msg << "t_phi: non-finite target density at (" << rule.nodes[i] << ","
                    << rule.nodes[j] << ")";
                throw numeric_error(msg.str());
            }
            values(i, j) = c;
        }
    return weighted_basis * values * weighted_basis.transpose();
}

Eigen::MatrixXd t_phi_adaptive(const BivariateFn& target, const OrthonormalFamily& family,
                               bool corner_singular, double tol) {
    Eigen::MatrixXd prev = t_phi(target, family, projection_rule(family, 0, corner_singular));
    for (int stage = 1; stage <= 4; ++stage) {
        Eigen::MatrixXd next =
            t_phi(target, family, projection_rule(family, stage, corner_singular));
        if ((next - prev).norm() < tol) return next;
        prev = std::move(next);
    }
    return prev;
}

ProjectionResult p_phi(const BivariateFn& target, const OrthonormalFamily& family,
                       bool corner_singular) {
    Eigen::MatrixXd t = t_phi_adaptive(target, family, corner_singular);

    // T(c) e1 = e1 holds exactly for an exact integral; verify the quadrature
    // honored it, then snap so the model constructor's strict check passes.
    const int p = family.size();
    Eigen::VectorXd e1 = Eigen::VectorXd::Unit(p, 0);
    const double residual = std::max((t.col(0) - e1).cwiseAbs().maxCoeff(),
                                     (t.row(0).transpose() - e1).cwiseAbs().maxCoeff());
    if (residual > 1e-6) {
        std::ostringstream msg;
        msg << "p_phi: projection violates the margin constraints by " << residual
            << "; target is not a copula density or the quadrature failed";
        throw numeric_error(msg.str());
    }
    t.row(0).setZero();
    t.col(0).setZero();
    t(0, 0) = 1.0;

    CopulaModel candidate(family, std::move(t));
    ValidationReport report = validate(candidate);
    return {candidate.with_validation(report), report};
}

ProjectionResult p_phi(const ReferenceCopula& target, const OrthonormalFamily& family) {
    auto density = [&target](double u, double v) { return target.density(u, v); };
    return p_phi(density, family, target.corner_singular());
}

bool identity_check(const OrthonormalFamily& family) {
    CopulaModel q(family, Eigen::MatrixXd::Identity(family.size(), family.size()));
    return validate(q).verdict == ValidationReport::Verdict::valid;
}

double inner_product(const CopulaModel& lhs, const CopulaModel& rhs) {
    if (!lhs.family().same_family(rhs.family()))
        throw std::invalid_argument("inner_product: models live on different families");
    return (lhs.matrix() * rhs.matrix()).trace();
}

double inner_product(const CopulaModel& lhs, const BivariateFn& raw_density,
                     bool corner_singular) {
    const Eigen::MatrixXd t = t_phi_adaptive(raw_density, lhs.family(), corner_singular);
    return (lhs.matrix() * t).trace();
}

std::vector<ConvergenceRow>
convergence_study(const ReferenceCopula& target,
                  const std::function<OrthonormalFamily(int)>& family_builder,
                  std::span<const int> p_list) {
    auto density = [&target](double u, double v) { return target.density(u, v); };

    // The squared L2 norm of the target is estimated once with a fixed
    // high-resolution rule. Densities with log-divergent corners (Clayton)
    // yield a finite truncation here; the per-size comparison below is then
    // still monotone because the projection energies are nested.
    const QuadratureRule norm_rule = target.corner_singular()
                                         ? graded_rule(32, 12)
                                         : gauss_legendre_rule(256);
    const double c2 = integrate_2d(
        [&density](double u, double v) {
            const double c = density(u, v);
            return c * c;
        },
        norm_rule);
    if (!std::isfinite(c2) || c2 > 1e12)
        throw numeric_error("convergence_study: target density is not square-integrable");

    const double rho_target = spearman_rho_quadrature(target);

    std::vector<ConvergenceRow> rows;
    rows.reserve(p_list.size());
    for (int p : p_list) {
        OrthonormalFamily family = family_builder(p);
        const Eigen::MatrixXd t = t_phi_adaptive(density, family, target.corner_singular());
        ConvergenceRow row;
        row.p = p;
        row.l2_error = std::sqrt(std::max(0.0, c2 - t.squaredNorm()));
        const Eigen::VectorXd& mu = family.mu();
        row.rho_model = 12.0 * mu.dot(t * mu) - 3.0;
        row.rho_target = rho_target;
        row.rho_gap = std::abs(row.rho_model - rho_target);
        rows.push_back(row);
    }
    return rows;
}

} // namespace orthocop
