#include "orthocop/partition.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "orthocop/errors.hpp"
#include "orthocop/linalg.hpp"

namespace orthocop {

namespace {

std::vector<double> binomial_row(int n) {
    std::vector<double> row(n + 1, 1.0);
    for (int k = 1; k <= n; ++k) row[k] = row[k - 1] * (n - k + 1) / k;
    return row;
}

Eigen::VectorXd bernstein_basis(double x, int degree, const std::vector<double>& binom) {
    Eigen::VectorXd out(degree + 1);
    // stable two-sided power accumulation
    std::vector<double> pow_x(degree + 1), pow_1mx(degree + 1);
    pow_x[0] = pow_1mx[0] = 1.0;
    for (int k = 1; k <= degree; ++k) {
        pow_x[k] = pow_x[k - 1] * x;
        pow_1mx[k] = pow_1mx[k - 1] * (1.0 - x);
    }
    for (int k = 0; k <= degree; ++k) out[k] = binom[k] * pow_x[k] * pow_1mx[degree - k];
    return out;
}

struct BasisData {
    OrthonormalFamily family;
    Eigen::MatrixXd w;          // phi = W xi
    Eigen::MatrixXd gram_sqrt;  // (H Gamma_xi H^T)^{1/2}, fixing e1 exactly
};

BasisData build_basis(const PartitionFamily& pf) {
    const int p = pf.size();
    const Eigen::MatrixXd h = partition_h_matrix(p);
    Eigen::MatrixXd gram_psi = h * pf.gram() * h.transpose();

    // Gamma_psi fixes e1 structurally (int psi = e1); snap and deflate so the
    // root preserves e1 exactly.
    gram_psi.row(0).setZero();
    gram_psi.col(0).setZero();
    gram_psi(0, 0) = 1.0;

    Eigen::MatrixXd sqrt_full = Eigen::MatrixXd::Identity(p, p);
    Eigen::MatrixXd inv_full = Eigen::MatrixXd::Identity(p, p);
    double cond = 1.0;
    if (p > 1) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_psi.bottomRightCorner(p - 1, p - 1));
        const Eigen::VectorXd& ev = es.eigenvalues();
        const double lo = ev.minCoeff();
        const double hi = ev.maxCoeff();
        if (lo <= 0.0 || hi / lo > 1e12) {
            std::ostringstream msg;
            msg << "partition basis: H Gamma H^T numerically singular (eigenvalues in ["
                << lo << ", " << hi << "])";
            throw singular_matrix_error(msg.str());
        }
        cond = hi / lo;
        sqrt_full.bottomRightCorner(p - 1, p - 1) =
            es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
        inv_full.bottomRightCorner(p - 1, p - 1) =
            es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
            es.eigenvectors().transpose();
    }

    Eigen::MatrixXd w = inv_full * h;

    const PartitionFamily xi = pf; // value copy shared by the evaluators
    auto phi = [w, xi](double t) -> Eigen::VectorXd { return w * xi.xi(t); };
    auto psi = [w, xi](double u) -> Eigen::VectorXd { return w * xi.xi_antiderivative(u); };

    OrthonormalFamily::Spec spec;
    const char* kind = pf.kind() == PartitionKind::checkerboard ? "checkerboard" : "bernstein";
    spec.descriptor = {kind, p, {{"cells", static_cast<double>(p)}}};
    spec.phi = phi;
    spec.psi = psi;
    spec.breakpoints = pf.breakpoints();
    spec.piecewise_constant = pf.piecewise_constant();
    spec.structural_rule = pf.piecewise_constant()
                               ? composite_rule(pf.breakpoints(), 8)
                               : gauss_legendre_rule(std::max(default_quad_order(), 2 * p));
    spec.ortho_tol = std::max(1e-10, cond * 1e-13);
    OrthonormalFamily family(std::move(spec));
    return {std::move(family), std::move(w), std::move(sqrt_full)};
}

} // namespace

PartitionFamily::PartitionFamily(PartitionKind kind, int p) : kind_(kind), p_(p) {
    if (p < 2) throw std::invalid_argument("partition family: size must be >= 2");

    if (kind_ == PartitionKind::checkerboard) {
        gram_ = Eigen::MatrixXd::Identity(p, p) / p;
        breakpoints_.resize(p + 1);
        for (int k = 0; k <= p; ++k) breakpoints_[k] = static_cast<double>(k) / p;
    } else {
        const QuadratureRule rule =
            gauss_legendre_rule(std::max(default_quad_order(), 2 * p));
        gram_ = Eigen::MatrixXd::Zero(p, p);
        for (int k = 0; k < rule.order(); ++k) {
            const Eigen::VectorXd v = xi(rule.nodes[k]);
            gram_.noalias() += rule.weights[k] * v * v.transpose();
        }
    }

    // partition-of-unity invariants
    for (double t : {0.0, 0.31, 0.5, 0.77, 1.0}) {
        const Eigen::VectorXd v = xi(t);
        if (v.minCoeff() < 0.0) throw invalid_family_error("partition: xi must be nonnegative");
        if (std::abs(v.sum() - 1.0) > 1e-12)
            throw invalid_family_error("partition: sum xi must equal 1");
    }
    const Eigen::VectorXd masses = xi_antiderivative(1.0);
    if ((masses.array() - 1.0 / p).abs().maxCoeff() > 1e-10)
        throw invalid_family_error("partition: int xi_i must equal 1/p");
}

Eigen::VectorXd PartitionFamily::xi(double t) const {
    if (kind_ == PartitionKind::checkerboard) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(p_);
        const int cell = std::min(static_cast<int>(t * p_), p_ - 1);
        out[cell] = 1.0;
        return out;
    }
    static thread_local std::vector<double> binom;
    if (static_cast<int>(binom.size()) != p_) binom = binomial_row(p_ - 1);
    return bernstein_basis(t, p_ - 1, binom);
}

Eigen::VectorXd PartitionFamily::xi_antiderivative(double u) const {
    if (kind_ == PartitionKind::checkerboard) {
        Eigen::VectorXd out(p_);
        const double h = 1.0 / p_;
        for (int i = 0; i < p_; ++i)
            out[i] = std::clamp(u - i * h, 0.0, h);
        return out;
    }
    // int_0^u b_{k,n} = (1/(n+1)) sum_{j>k} b_{j,n+1}(u)
    const int n = p_ - 1;
    const std::vector<double> binom_up = binomial_row(n + 1);
    const Eigen::VectorXd up = bernstein_basis(u, n + 1, binom_up);
    Eigen::VectorXd out(p_);
    double suffix = 0.0;
    for (int k = n; k >= 0; --k) {
        suffix += up[k + 1];
        out[k] = suffix / (n + 1);
    }
    return out;
}

PartitionFamily make_partition(PartitionKind kind, int p) { return {kind, p}; }

PartitionKind partition_kind_from_string(const std::string& s) {
    if (s == "bernstein") return PartitionKind::bernstein;
    if (s == "checkerboard") return PartitionKind::checkerboard;
    throw std::invalid_argument("unknown partition kind '" + s + "'");
}

Eigen::MatrixXd discretize_copula(const std::function<double(double, double)>& cdf, int p) {
    if (p < 2) throw std::invalid_argument("discretize_copula: p must be >= 2");
    std::vector<double> g(p + 1);
    for (int k = 0; k <= p; ++k) g[k] = static_cast<double>(k) / p;

    Eigen::MatrixXd corners(p + 1, p + 1);
    for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= p; ++j) corners(i, j) = cdf(g[i], g[j]);

    Eigen::MatrixXd m(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            double cell = corners(i + 1, j + 1) - corners(i, j + 1) -
                          corners(i + 1, j) + corners(i, j);
            cell *= p;
            if (cell < -1e-10) {
                std::ostringstream msg;
                msg << "discretize_copula: negative cell mass " << cell << " at (" << (i + 1)
                    << "," << (j + 1) << "); source CDF not monotone";
                throw invalid_source_error(msg.str());
            }
            m(i, j) = std::max(cell, 0.0);
        }

    for (int i = 0; i < p; ++i) {
        if (std::abs(m.row(i).sum() - 1.0) > 1e-10 || std::abs(m.col(i).sum() - 1.0) > 1e-10) {
            std::ostringstream msg;
            msg << "discretize_copula: row/column " << (i + 1)
                << " does not sum to 1; source is not a copula CDF";
            throw invalid_source_error(msg.str());
        }
    }
    return m;
}

Eigen::MatrixXd discretize_copula(const ReferenceCopula& source, int p) {
    return discretize_copula(
        [&source](double u, double v) { return source.cdf(u, v); }, p);
}

OrthonormalFamily partition_basis(const PartitionFamily& pf) {
    return build_basis(pf).family;
}

CopulaModel to_copula_model(const PartitionFamily& pf, const Eigen::MatrixXd& m) {
    const int p = pf.size();
    if (m.rows() != p || m.cols() != p)
        throw std::invalid_argument("to_copula_model: matrix size mismatch");
    if (m.minCoeff() < -1e-12)
        throw constraint_violation("to_copula_model: matrix has negative entries");
    for (int i = 0; i < p; ++i) {
        if (std::abs(m.row(i).sum() - 1.0) > 1e-10) {
            std::ostringstream msg;
            msg << "to_copula_model: row " << (i + 1) << " sums to " << m.row(i).sum();
            throw constraint_violation(msg.str());
        }
        if (std::abs(m.col(i).sum() - 1.0) > 1e-10) {
            std::ostringstream msg;
            msg << "to_copula_model: column " << (i + 1) << " sums to " << m.col(i).sum();
            throw constraint_violation(msg.str());
        }
    }

    BasisData basis = build_basis(pf);
    const Eigen::MatrixXd hinv = partition_h_inverse(p);
    const Eigen::MatrixXd b = static_cast<double>(p) * hinv.transpose() * m * hinv;
    Eigen::MatrixXd a = basis.gram_sqrt * b * basis.gram_sqrt;
    return CopulaModel(std::move(basis.family), std::move(a));
}

Eigen::MatrixXd partition_h_matrix(int p) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(p, p);
    h.row(0).setOnes();                      // I + e1 s^T on the first row
    h.col(0).tail(p - 1).setConstant(-1.0);  // - s e1^T below the diagonal
    return h;
}

Eigen::MatrixXd partition_h_inverse(int p) {
    // H^{-1} = I - e1 e1^T + (2/p) s e1^T - (1/p) s s^T, verified against a
    // dense solve in the tests
    Eigen::MatrixXd inv = Eigen::MatrixXd::Constant(p, p, -1.0 / p);
    inv.diagonal().array() += 1.0;
    inv.col(0).array() += 2.0 / p;
    inv(0, 0) -= 1.0;
    return inv;
}

} // namespace orthocop
