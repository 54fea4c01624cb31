#include "orthocop/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "orthocop/errors.hpp"

namespace orthocop {

int default_quad_order() {
    static const int order = [] {
        if (const char* env = std::getenv("COPULA_QUAD_ORDER")) {
            const int v = std::atoi(env);
            if (v >= 1) return v;
        }
        return 64;
    }();
    return order;
}

QuadratureRule gauss_legendre_rule(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre_rule: order must be >= 1");

    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);

    // Newton iteration on the Legendre polynomial P_n over [-1,1]; nodes come
    // in symmetric pairs so only the lower half is computed.
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // one clean-up pass so dp matches the converged node
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]
        rule.nodes[i] = 0.5 * (1.0 - x); // x descending -> nodes ascending
        rule.nodes[order - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = 0.5 * w;
        rule.weights[order - 1 - i] = 0.5 * w;
    }
    return rule;
}

QuadratureRule composite_rule(std::span<const double> breakpoints, int per_cell_order) {
    if (per_cell_order < 1) throw std::invalid_argument("composite_rule: order must be >= 1");
    if (breakpoints.size() < 2 || breakpoints.front() != 0.0 || breakpoints.back() != 1.0)
        throw std::invalid_argument("composite_rule: breakpoints must span [0,1]");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("composite_rule: breakpoints must be strictly increasing");

    const QuadratureRule base = gauss_legendre_rule(per_cell_order);
    QuadratureRule rule;
    rule.nodes.reserve((breakpoints.size() - 1) * base.nodes.size());
    rule.weights.reserve(rule.nodes.capacity());
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        const double a = breakpoints[i - 1];
        const double h = breakpoints[i] - a;
        for (int k = 0; k < base.order(); ++k) {
            rule.nodes.push_back(a + h * base.nodes[k]);
            rule.weights.push_back(h * base.weights[k]);
        }
    }
    return rule;
}

QuadratureRule graded_rule(int depth, int per_cell_order,
                           std::span<const double> extra_breakpoints) {
    std::vector<double> bps{0.0, 1.0};
    for (int j = 1; j <= depth; ++j) bps.push_back(std::ldexp(1.0, -j));
    bps.insert(bps.end(), extra_breakpoints.begin(), extra_breakpoints.end());
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-15; }),
              bps.end());
    return composite_rule(bps, per_cell_order);
}

double integrate_1d(const std::function<double(double)>& f, const QuadratureRule& rule) {
    double sum = 0.0;
    for (int i = 0; i < rule.order(); ++i) {
        const double v = f(rule.nodes[i]);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "integrate_1d: non-finite integrand at x=" << rule.nodes[i];
            throw numeric_error(msg.str());
        }
        sum += rule.weights[i] * v;
    }
    return sum;
}

double integrate_2d(const std::function<double(double, double)>& f,
                    const QuadratureRule& rule) {
    double sum = 0.0;
    for (int i = 0; i < rule.order(); ++i) {
        double row = 0.0;
        for (int j = 0; j < rule.order(); ++j) {
            const double v = f(rule.nodes[i], rule.nodes[j]);
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << "integrate_2d: non-finite integrand at (u,v)=(" << rule.nodes[i]
                    << "," << rule.nodes[j] << ")";
                throw numeric_error(msg.str());
            }
            row += rule.weights[j] * v;
        }
        sum += rule.weights[i] * row;
    }
    return sum;
}

} // namespace orthocop
