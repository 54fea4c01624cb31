#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "orthocop/errors.hpp"
#include "orthocop/linalg.hpp"
#include "orthocop/partition.hpp"

using namespace orthocop;

namespace {

Eigen::MatrixXd random_spd(int n, unsigned seed, double shift) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = normal(rng);
    return b * b.transpose() + shift * Eigen::MatrixXd::Identity(n, n);
}

// Omega of the orthogonal-partition closed form, beta^2 = common squared norm
Eigen::MatrixXd omega_closed_form(int p, double beta) {
    const double root = 1.0 / std::sqrt(static_cast<double>(p));
    const double gamma = (p - 2 + root) / (p - 1);
    Eigen::MatrixXd omega = Eigen::MatrixXd::Constant(p, p, (gamma - 1.0) / beta);
    omega.row(0).setConstant(root / beta);
    omega.col(0).tail(p - 1).setConstant(-root / beta);
    omega.diagonal().tail(p - 1).setConstant(gamma / beta);
    return omega;
}

} // namespace

TEST_CASE("identity and diagonal roots") {
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
    CHECK((sym_principal_sqrt(eye) - eye).norm() < 1e-14);

    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 4.0;
    const Eigen::MatrixXd r = sym_principal_sqrt(d);
    CHECK(std::abs(r(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(r(1, 1) - 2.0) < 1e-14);
    CHECK(std::abs(r(0, 1)) < 1e-14);
}

TEST_CASE("square of the root recovers the matrix") {
    for (unsigned seed : {1u, 2u, 3u, 4u}) {
        const Eigen::MatrixXd m = random_spd(6, seed, 0.5);
        const Eigen::MatrixXd r = sym_principal_sqrt(m);
        CHECK((r - r.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((r * r - m).norm() <= 1e-10 * (1.0 + m.norm()));
    }
}

TEST_CASE("inverse root composes to identity") {
    const Eigen::MatrixXd m = random_spd(5, 11, 1.0);
    const Eigen::MatrixXd prod = sym_inv_sqrt(m) * sym_principal_sqrt(m);
    CHECK((prod - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("e1 eigenvector is preserved") {
    // H Gamma_xi H^T for the checkerboard fixes e1; so must its root
    const int p = 4;
    const Eigen::MatrixXd h = partition_h_matrix(p);
    const Eigen::MatrixXd m = h * (Eigen::MatrixXd::Identity(p, p) / p) * h.transpose();
    const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(p, 0);
    REQUIRE((m * e1 - e1).cwiseAbs().maxCoeff() < 1e-14);

    const Eigen::MatrixXd r = sym_principal_sqrt(m);
    CHECK((r * e1 - e1).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::MatrixXd rinv = sym_inv_sqrt(m);
    CHECK((rinv * e1 - e1).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("checkerboard orthonormalizer matches the closed form") {
    // (H Gamma_xi H^T)^{-1/2} H equals Omega with beta = p^{-1/2}
    const int p = 4;
    const Eigen::MatrixXd h = partition_h_matrix(p);
    const Eigen::MatrixXd m = h * (Eigen::MatrixXd::Identity(p, p) / p) * h.transpose();
    const Eigen::MatrixXd omega = sym_inv_sqrt(m) * h;
    const Eigen::MatrixXd expected = omega_closed_form(p, 1.0 / std::sqrt(double(p)));
    CHECK((omega - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("error paths") {
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, -0.5, 1.0;
    CHECK_THROWS_AS(sym_principal_sqrt(asym), std::invalid_argument);

    Eigen::MatrixXd indef(2, 2);
    indef << 1.0, 0.0, 0.0, -2.0;
    CHECK_THROWS_AS(sym_principal_sqrt(indef), std::invalid_argument);

    // rank-deficient: principal root exists, inverse root does not
    Eigen::VectorXd v(3);
    v << 1.0, 2.0, 3.0;
    const Eigen::MatrixXd rank1 = v * v.transpose();
    const Eigen::MatrixXd r = sym_principal_sqrt(rank1);
    CHECK((r * r - rank1).norm() < 1e-10 * (1.0 + rank1.norm()));
    CHECK_THROWS_AS(sym_inv_sqrt(rank1), singular_matrix_error);
}
