#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>

#include "orthocop/errors.hpp"
#include "orthocop/family.hpp"
#include "orthocop/partition.hpp"

using namespace orthocop;

namespace {

// quadrature Gram independent of the family's own structural rule
Eigen::MatrixXd oracle_gram(const OrthonormalFamily& family, const QuadratureRule& rule) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(family.size(), family.size());
    for (int k = 0; k < rule.order(); ++k) {
        const Eigen::VectorXd v = family.phi(rule.nodes[k]);
        g += rule.weights[k] * v * v.transpose();
    }
    return g;
}

void check_structural_invariants(const OrthonormalFamily& family) {
    const int p = family.size();
    CHECK(family.psi(0.0).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::VectorXd end = family.psi(1.0);
    end[0] -= 1.0;
    CHECK(end.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(family.mu()[0] - 0.5) < 1e-12);
    Eigen::MatrixXd sym = family.theta() + family.theta().transpose();
    sym(0, 0) -= 1.0;
    CHECK(sym.cwiseAbs().maxCoeff() < 1e-10);
    for (double t : {0.0, 0.2, 0.77, 1.0}) CHECK(family.phi(t)[0] == 1.0);
    CHECK(p == family.descriptor().size);
}

} // namespace

TEST_CASE("trig family values and moments") {
    const OrthonormalFamily f1 = make_trig_family(1);
    REQUIRE(f1.size() == 3);
    const Eigen::VectorXd v = f1.phi(0.25);
    CHECK(v[0] == 1.0);
    CHECK(std::abs(v[1] - std::numbers::sqrt2) < 1e-14);
    CHECK(std::abs(v[2]) < 1e-14);

    // mu against an independent quadrature oracle
    const QuadratureRule rule = gauss_legendre_rule(128);
    Eigen::VectorXd mu_oracle = Eigen::VectorXd::Zero(3);
    for (int k = 0; k < rule.order(); ++k)
        mu_oracle += rule.weights[k] * rule.nodes[k] * f1.phi(rule.nodes[k]);
    CHECK((f1.mu() - mu_oracle).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(f1.mu()[1] + std::numbers::sqrt2 / (2 * std::numbers::pi)) < 1e-14);
    CHECK(std::abs(f1.mu()[2]) < 1e-15);

    const OrthonormalFamily f2 = make_trig_family(2);
    const Eigen::MatrixXd gram = oracle_gram(f2, gauss_legendre_rule(256));
    CHECK((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);

    check_structural_invariants(f1);
    check_structural_invariants(f2);
    check_structural_invariants(make_trig_family(6));

    CHECK_THROWS_AS(make_trig_family(0), std::invalid_argument);
}

TEST_CASE("haar family values") {
    const OrthonormalFamily f = make_haar_family(1);
    REQUIRE(f.size() == 2);
    CHECK(f.phi(0.25)[1] == 1.0);
    CHECK(f.phi(0.75)[1] == -1.0);
    CHECK(f.phi(1.0)[1] == -1.0); // t = 1 binned into the final subcell
    CHECK(std::abs(f.psi(0.5)[1] - 0.5) < 1e-15);
    CHECK(std::abs(f.psi(1.0)[1]) < 1e-15);

    check_structural_invariants(f);
    check_structural_invariants(make_haar_family(0));
    check_structural_invariants(make_haar_family(3));

    CHECK_THROWS_AS(make_haar_family(-1), std::invalid_argument);
}

TEST_CASE("haar reproducing kernel on cell midpoints") {
    const OrthonormalFamily f = make_haar_family(2);
    const int p = f.size();
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            const double u = (i + 0.5) / p;
            const double v = (j + 0.5) / p;
            const double kernel = f.phi(u).dot(f.phi(v));
            const double expected = (i == j) ? p : 0.0;
            CHECK(std::abs(kernel - expected) < 1e-12);
        }
}

TEST_CASE("haar gram exact under composite quadrature") {
    const OrthonormalFamily f = make_haar_family(3);
    const auto& bps = f.breakpoints();
    const Eigen::MatrixXd gram = oracle_gram(f, composite_rule(bps, 8));
    CHECK((gram - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("haar moments match the piecewise-linear closed form") {
    const int levels = 3;
    const OrthonormalFamily f = make_haar_family(levels);
    const int p = f.size();

    // mu: int x phi_i = -amp h^2 / 4 for a wavelet of width h
    Eigen::VectorXd mu_exact(p);
    mu_exact[0] = 0.5;
    for (int i = 1; i < p; ++i) {
        const int level = std::bit_width(static_cast<unsigned>(i)) - 1;
        const double h = std::exp2(-level);
        mu_exact[i] = -std::exp2(0.5 * level) * h * h / 4.0;
    }
    CHECK((f.mu() - mu_exact).cwiseAbs().maxCoeff() < 1e-12);

    // theta: per finest cell Psi_i is linear and phi_j constant, so the
    // trapezoid value is exact
    Eigen::MatrixXd theta_exact = Eigen::MatrixXd::Zero(p, p);
    const auto& bps = f.breakpoints();
    for (std::size_t c = 0; c + 1 < bps.size(); ++c) {
        const double a = bps[c], b = bps[c + 1];
        const Eigen::VectorXd mean_psi = 0.5 * (f.psi(a) + f.psi(b));
        const Eigen::VectorXd phi_mid = f.phi(0.5 * (a + b));
        theta_exact += (b - a) * mean_psi * phi_mid.transpose();
    }
    CHECK((f.theta() - theta_exact).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fgm family") {
    const OrthonormalFamily f = make_fgm_family();
    REQUIRE(f.size() == 2);
    CHECK(std::abs(f.phi(0.0)[1] - std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(f.phi(0.5)[1]) < 1e-15);
    CHECK(std::abs(f.mu()[1] + 1.0 / (2.0 * std::sqrt(3.0))) < 1e-14);
    check_structural_invariants(f);
}

TEST_CASE("orthonormalize is the identity on an orthonormal family") {
    const OrthonormalFamily trig = make_trig_family(1);
    auto psi = [&trig](double t) { return trig.phi(t); };
    auto anti = [&trig](double u) { return trig.psi(u); };
    const RawFamily raw = make_raw_family(3, psi, anti);
    CHECK((raw.gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

    const OrthonormalizeResult result = orthonormalize(raw);
    CHECK((result.transform - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((result.gram_sqrt - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("cubic-section family orthonormalizes") {
    // psi_2 = 1 - 4t + 3t^2, psi_3 = 2t - 3t^2, both integrating to 0
    auto psi = [](double t) {
        Eigen::VectorXd out(3);
        out[0] = 1.0;
        out[1] = 1.0 - 4.0 * t + 3.0 * t * t;
        out[2] = 2.0 * t - 3.0 * t * t;
        return out;
    };
    auto anti = [](double u) {
        Eigen::VectorXd out(3);
        out[0] = u;
        out[1] = u - 2.0 * u * u + u * u * u;
        out[2] = u * u - u * u * u;
        return out;
    };
    const RawFamily raw = make_raw_family(3, psi, anti, {}, false, "cubic-sections");
    CHECK(std::abs(raw.gram(1, 1) - 2.0 / 15.0) < 1e-13); // direct integral of psi_2^2

    const OrthonormalizeResult result = orthonormalize(raw);
    const Eigen::MatrixXd gram = oracle_gram(result.family, gauss_legendre_rule(96));
    CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
    check_structural_invariants(result.family);
}

TEST_CASE("iterated-fgm family round trips the density") {
    auto psi = [](double t) {
        Eigen::VectorXd out(3);
        out[0] = 1.0;
        out[1] = 1.0 - 2.0 * t;       // d/dt t(1-t)
        out[2] = 2.0 * t - 3.0 * t * t; // d/dt t^2(1-t)
        return out;
    };
    auto anti = [](double u) {
        Eigen::VectorXd out(3);
        out[0] = u;
        out[1] = u - u * u;
        out[2] = u * u - u * u * u;
        return out;
    };
    const RawFamily raw = make_raw_family(3, psi, anti);
    const OrthonormalizeResult result = orthonormalize(raw);

    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 3);
    b(0, 0) = 1.0;
    b(1, 1) = 0.4;
    b(2, 2) = 0.3;
    const Eigen::MatrixXd a = result.gram_sqrt * b * result.gram_sqrt;

    double worst = 0.0;
    for (int i = 0; i <= 32; ++i)
        for (int j = 0; j <= 32; ++j) {
            const double u = i / 32.0, v = j / 32.0;
            const double via_raw = psi(u).dot(b * psi(v));
            const double via_ortho = result.family.phi(u).dot(a * result.family.phi(v));
            worst = std::max(worst, std::abs(via_raw - via_ortho));
        }
    CHECK(worst < 1e-10);
}

TEST_CASE("raw family error paths") {
    auto anti_ok = [](double u) {
        Eigen::VectorXd out(2);
        out[0] = u;
        out[1] = 0.5 * u * u - 0.2 * u;
        return out;
    };
    // int psi_2 = 0.3 != 0
    auto bad_integral = [](double t) {
        Eigen::VectorXd out(2);
        out[0] = 1.0;
        out[1] = t - 0.2;
        return out;
    };
    CHECK_THROWS_AS(make_raw_family(2, bad_integral, anti_ok), invalid_family_error);

    auto bad_first = [](double t) {
        Eigen::VectorXd out(2);
        out[0] = t;
        out[1] = t - 0.5;
        return out;
    };
    CHECK_THROWS_AS(make_raw_family(2, bad_first, anti_ok), invalid_family_error);

    // duplicated function -> singular Gram
    auto duped = [](double t) {
        Eigen::VectorXd out(3);
        out[0] = 1.0;
        out[1] = t - 0.5;
        out[2] = t - 0.5;
        return out;
    };
    auto duped_anti = [](double u) {
        Eigen::VectorXd out(3);
        out[0] = u;
        out[1] = 0.5 * u * u - 0.5 * u;
        out[2] = 0.5 * u * u - 0.5 * u;
        return out;
    };
    const RawFamily raw = make_raw_family(3, duped, duped_anti);
    CHECK_THROWS_AS(orthonormalize(raw), singular_matrix_error);
}

TEST_CASE("descriptors rebuild families") {
    for (const OrthonormalFamily& f :
         {make_trig_family(2), make_haar_family(3), make_fgm_family(),
          partition_basis(make_partition(PartitionKind::checkerboard, 5)),
          partition_basis(make_partition(PartitionKind::bernstein, 4))}) {
        const OrthonormalFamily rebuilt = family_from_descriptor(f.descriptor());
        CHECK(rebuilt.size() == f.size());
        CHECK(rebuilt.label() == f.label());
        CHECK(rebuilt.same_family(f));
        CHECK((rebuilt.phi(0.37) - f.phi(0.37)).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(family_from_descriptor({"nope", 3, {}}), std::invalid_argument);
    CHECK_THROWS_AS(family_from_descriptor({"trig", 5, {}}), std::invalid_argument);
}

TEST_CASE("custom families only compare by identity") {
    const OrthonormalFamily trig = make_trig_family(1);
    auto mk = [&trig] {
        auto psi = [trig](double t) { return trig.phi(t); };
        auto anti = [trig](double u) { return trig.psi(u); };
        return orthonormalize(make_raw_family(3, psi, anti)).family;
    };
    const OrthonormalFamily a = mk();
    const OrthonormalFamily b = mk();
    CHECK(a.same_family(a));
    CHECK_FALSE(a.same_family(b));
}
