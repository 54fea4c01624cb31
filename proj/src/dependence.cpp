#include "orthocop/dependence.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace orthocop {

namespace {

QuadratureRule model_rule(const CopulaModel& model) {
    const auto& bps = model.family().breakpoints();
    if (bps.empty()) return gauss_legendre_rule(default_quad_order());
    return composite_rule(bps, 12);
}

} // namespace

double spearman_rho(const CopulaModel& model) {
    const Eigen::VectorXd& mu = model.family().mu();
    return 12.0 * mu.dot(model.matrix() * mu) - 3.0;
}

double spearman_rho_quadrature(const std::function<double(double, double)>& cdf,
                               const QuadratureRule& rule) {
    return 12.0 * integrate_2d(cdf, rule) - 3.0;
}

double spearman_rho_quadrature(const CopulaModel& model) {
    auto cdf = [&model](double u, double v) { return model.cdf(u, v); };
    return spearman_rho_quadrature(cdf, model_rule(model));
}

double spearman_rho_quadrature(const ReferenceCopula& ref, int order) {
    auto cdf = [&ref](double u, double v) { return ref.cdf(u, v); };
    return spearman_rho_quadrature(cdf, gauss_legendre_rule(order));
}

double kendall_tau(const CopulaModel& model) {
    const Eigen::MatrixXd& a = model.matrix();
    const Eigen::MatrixXd& th = model.family().theta();
    return 1.0 - 4.0 * (a.transpose() * th * a * th).trace();
}

double kendall_tau_quadrature(const CopulaModel& model) {
    // density form of tau: 4 int int C(u,v) c(u,v) du dv - 1
    auto f = [&model](double u, double v) { return model.cdf(u, v) * model.density(u, v); };
    return 4.0 * integrate_2d(f, model_rule(model)) - 1.0;
}

std::vector<double> upper_tail_profile(const CopulaModel& model,
                                       std::span<const double> u_points) {
    std::vector<double> out;
    out.reserve(u_points.size());
    for (double u : u_points) {
        if (!(u >= 0.0 && u < 1.0))
            throw std::invalid_argument("upper_tail_profile: u must lie in [0,1)");
        out.push_back((1.0 - 2.0 * u + model.cdf(u, u)) / (1.0 - u));
    }
    return out;
}

double dirichlet_rho(int harmonics, double theta) {
    if (harmonics < 0) throw std::invalid_argument("dirichlet_rho: harmonics must be >= 0");
    double sum = 0.0;
    for (int j = 1; j <= harmonics; ++j) sum += 1.0 / (static_cast<double>(j) * j);
    return 6.0 * theta / (std::numbers::pi * std::numbers::pi) * sum;
}

double fejer_rho(int q, double theta) {
    if (q < 1) throw std::invalid_argument("fejer_rho: q must be >= 1");
    double inv_sq = 0.0, inv = 0.0;
    for (int j = 1; j < q; ++j) {
        inv_sq += 1.0 / (static_cast<double>(j) * j);
        inv += 1.0 / j;
    }
    return 6.0 * theta / (std::numbers::pi * std::numbers::pi) * (inv_sq - inv / q);
}

} // namespace orthocop
