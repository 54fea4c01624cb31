#pragma once

#include <functional>
#include <span>
#include <vector>

namespace orthocop {

/// A positive quadrature rule on [0,1]. Nodes are strictly interior and the
/// weights sum to one, so constants integrate exactly.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    int order() const { return static_cast<int>(nodes.size()); }
};

/// Default 1D order, overridable through the COPULA_QUAD_ORDER environment
/// variable. Exact for polynomial integrands up to degree 2*order-1.
int default_quad_order();

/// Gauss-Legendre rule mapped affinely from [-1,1] onto [0,1].
QuadratureRule gauss_legendre_rule(int order);

/// Composite Gauss-Legendre rule over the panels delimited by `breakpoints`
/// (must start at 0, end at 1, strictly increasing). Used for piecewise
/// integrands so that discontinuities never straddle a panel.
QuadratureRule composite_rule(std::span<const double> breakpoints, int per_cell_order);

/// Composite rule over dyadic panels [2^-(j+1), 2^-j] down to depth, merged
/// with `extra_breakpoints`. Resolves integrable corner singularities at 0.
QuadratureRule graded_rule(int depth, int per_cell_order,
                           std::span<const double> extra_breakpoints = {});

double integrate_1d(const std::function<double(double)>& f, const QuadratureRule& rule);

/// Tensor-product integral of f over [0,1]^2. Throws numeric_error naming the
/// node if f evaluates non-finite.
double integrate_2d(const std::function<double(double, double)>& f,
                    const QuadratureRule& rule);

} // namespace orthocop
