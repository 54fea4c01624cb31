#include "orthocop/family.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "orthocop/errors.hpp"
#include "orthocop/linalg.hpp"
#include "orthocop/partition.hpp"

namespace orthocop {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string label_for(const FamilyDescriptor& desc) {
    std::ostringstream out;
    out << desc.kind;
    bool first = true;
    for (const auto& [key, value] : desc.parameters) {
        out << (first ? ":" : ",");
        first = false;
        // parameters are small integers for every built-in kind
        if (value == std::floor(value))
            out << static_cast<long long>(value);
        else
            out << value;
    }
    return out.str();
}

Eigen::MatrixXd quadrature_gram(const OrthonormalFamily::Evaluator& f, int p,
                                const QuadratureRule& rule) {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
    for (int k = 0; k < rule.order(); ++k) {
        const Eigen::VectorXd v = f(rule.nodes[k]);
        gram.noalias() += rule.weights[k] * v * v.transpose();
    }
    return gram;
}

} // namespace

OrthonormalFamily::OrthonormalFamily(Spec spec) {
    const int p = spec.descriptor.size;
    if (p < 1) throw invalid_family_error("family size must be >= 1");
    if (!spec.phi || !spec.psi) throw invalid_family_error("family evaluators missing");

    auto data = std::make_shared<Data>();
    data->descriptor = std::move(spec.descriptor);
    data->label = label_for(data->descriptor);
    data->phi = std::move(spec.phi);
    data->psi = std::move(spec.psi);
    data->breakpoints = std::move(spec.breakpoints);
    data->piecewise_constant = spec.piecewise_constant;
    data->structural_rule = std::move(spec.structural_rule);
    const QuadratureRule& rule = data->structural_rule;

    // phi_1 == 1 at the quadrature nodes
    for (int k = 0; k < rule.order(); ++k) {
        const Eigen::VectorXd v = data->phi(rule.nodes[k]);
        if (v.size() != p) throw invalid_family_error("phi evaluator size mismatch");
        if (std::abs(v[0] - 1.0) > 1e-12)
            throw invalid_family_error("phi_1 must be identically 1");
    }

    const Eigen::MatrixXd gram = quadrature_gram(data->phi, p, rule);
    const double gram_err = (gram - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff();
    if (gram_err > spec.ortho_tol) {
        std::ostringstream msg;
        msg << "family '" << data->label << "' not orthonormal: max |Gram - I| = " << gram_err;
        throw invalid_family_error(msg.str());
    }

    if (data->psi(0.0).cwiseAbs().maxCoeff() > 1e-12)
        throw invalid_family_error("Psi(0) must vanish");
    Eigen::VectorXd psi1 = data->psi(1.0);
    psi1[0] -= 1.0;
    if (psi1.cwiseAbs().maxCoeff() > 1e-12)
        throw invalid_family_error("Psi(1) must equal e1");

    if (spec.mu)
        data->mu = *spec.mu;
    else {
        data->mu = Eigen::VectorXd::Zero(p);
        for (int k = 0; k < rule.order(); ++k)
            data->mu += rule.weights[k] * rule.nodes[k] * data->phi(rule.nodes[k]);
    }
    if (std::abs(data->mu[0] - 0.5) > 1e-12)
        throw invalid_family_error("mu_1 must equal 1/2");

    if (spec.theta)
        data->theta = *spec.theta;
    else {
        data->theta = Eigen::MatrixXd::Zero(p, p);
        for (int k = 0; k < rule.order(); ++k) {
            const double u = rule.nodes[k];
            data->theta.noalias() += rule.weights[k] * data->psi(u) * data->phi(u).transpose();
        }
    }
    Eigen::MatrixXd sym = data->theta + data->theta.transpose();
    sym(0, 0) -= 1.0;
    if (sym.cwiseAbs().maxCoeff() > std::max(1e-10, spec.ortho_tol))
        throw invalid_family_error("theta + theta^T must equal e1 e1^T");

    d_ = std::move(data);
}

bool OrthonormalFamily::same_family(const OrthonormalFamily& other) const {
    if (d_ == other.d_) return true;
    if (d_->descriptor.kind == "custom") return false;
    return d_->descriptor == other.d_->descriptor;
}

OrthonormalFamily make_trig_family(int harmonics) {
    if (harmonics < 1) throw std::invalid_argument("make_trig_family: harmonics must be >= 1");
    const int h = harmonics;
    const int p = 2 * h + 1;

    auto phi = [h, p](double t) {
        Eigen::VectorXd out(p);
        out[0] = 1.0;
        for (int j = 1; j <= h; ++j) {
            out[2 * j - 1] = std::numbers::sqrt2 * std::sin(kTwoPi * j * t);
            out[2 * j] = std::numbers::sqrt2 * std::cos(kTwoPi * j * t);
        }
        return out;
    };
    auto psi = [h, p](double u) {
        Eigen::VectorXd out(p);
        out[0] = u;
        for (int j = 1; j <= h; ++j) {
            const double w = kTwoPi * j;
            out[2 * j - 1] = std::numbers::sqrt2 * (1.0 - std::cos(w * u)) / w;
            out[2 * j] = std::numbers::sqrt2 * std::sin(w * u) / w;
        }
        return out;
    };

    auto mu = std::make_shared<Eigen::VectorXd>(Eigen::VectorXd::Zero(p));
    (*mu)[0] = 0.5;
    for (int j = 1; j <= h; ++j) (*mu)[2 * j - 1] = -std::numbers::sqrt2 / (kTwoPi * j);

    auto theta = std::make_shared<Eigen::MatrixXd>(Eigen::MatrixXd::Zero(p, p));
    (*theta)(0, 0) = 0.5;
    for (int j = 1; j <= h; ++j) {
        (*theta)(0, 2 * j - 1) = (*mu)[2 * j - 1];              // int u phi_sin
        (*theta)(2 * j - 1, 0) = -(*mu)[2 * j - 1];             // int Psi_sin
        (*theta)(2 * j - 1, 2 * j) = -1.0 / (kTwoPi * j);
        (*theta)(2 * j, 2 * j - 1) = 1.0 / (kTwoPi * j);
    }

    OrthonormalFamily::Spec spec;
    spec.descriptor = {"trig", p, {{"harmonics", static_cast<double>(h)}}};
    spec.phi = phi;
    spec.psi = psi;
    spec.structural_rule = gauss_legendre_rule(std::max(default_quad_order(), 32 + 16 * h));
    spec.mu = mu;
    spec.theta = theta;
    return OrthonormalFamily(std::move(spec));
}

OrthonormalFamily make_haar_family(int levels) {
    if (levels < 0) throw std::invalid_argument("make_haar_family: levels must be >= 0");
    if (levels > 20) throw std::invalid_argument("make_haar_family: levels too large");
    const int p = 1 << levels;

    // Wavelet i = 2^level + pos (function index i+1) lives on
    // [pos 2^-level, (pos+1) 2^-level) with amplitude 2^{level/2}; the sign
    // flips at the midpoint. Points are binned at each wavelet's own dyadic
    // resolution so t = 1 falls into the final subcell.
    auto phi = [p](double t) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(p);
        out[0] = 1.0;
        for (int i = 1; i < p; ++i) {
            const int level = std::bit_width(static_cast<unsigned>(i)) - 1;
            const int pos = i - (1 << level);
            const int m = 1 << (level + 1);
            const int sub = std::min(static_cast<int>(t * m), m - 1);
            if (sub == 2 * pos)
                out[i] = std::exp2(0.5 * level);
            else if (sub == 2 * pos + 1)
                out[i] = -std::exp2(0.5 * level);
        }
        return out;
    };
    auto psi = [p](double u) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(p);
        out[0] = u;
        for (int i = 1; i < p; ++i) {
            const int level = std::bit_width(static_cast<unsigned>(i)) - 1;
            const int pos = i - (1 << level);
            const double h = std::exp2(-level);
            const double a = pos * h;
            const double mid = a + 0.5 * h;
            const double amp = std::exp2(0.5 * level);
            const double up = std::clamp(u, a, mid) - a;
            const double down = std::clamp(u, mid, a + h) - mid;
            out[i] = amp * (up - down);
        }
        return out;
    };

    std::vector<double> breakpoints(p + 1);
    for (int k = 0; k <= p; ++k) breakpoints[k] = static_cast<double>(k) / p;

    OrthonormalFamily::Spec spec;
    spec.descriptor = {"haar", p, {{"levels", static_cast<double>(levels)}}};
    spec.phi = phi;
    spec.psi = psi;
    spec.breakpoints = breakpoints;
    spec.piecewise_constant = true;
    spec.structural_rule = composite_rule(breakpoints, 8);
    return OrthonormalFamily(std::move(spec));
}

OrthonormalFamily make_fgm_family() {
    const double sqrt3 = std::sqrt(3.0);
    auto phi = [sqrt3](double t) {
        Eigen::VectorXd out(2);
        out[0] = 1.0;
        out[1] = sqrt3 * (1.0 - 2.0 * t);
        return out;
    };
    auto psi = [sqrt3](double u) {
        Eigen::VectorXd out(2);
        out[0] = u;
        out[1] = sqrt3 * (u - u * u);
        return out;
    };
    OrthonormalFamily::Spec spec;
    spec.descriptor = {"fgm", 2, {}};
    spec.phi = phi;
    spec.psi = psi;
    spec.structural_rule = gauss_legendre_rule(default_quad_order());
    return OrthonormalFamily(std::move(spec));
}

RawFamily make_raw_family(int p,
                          OrthonormalFamily::Evaluator psi,
                          OrthonormalFamily::Evaluator antiderivative,
                          std::vector<double> breakpoints,
                          bool piecewise_constant,
                          std::string label) {
    if (p < 1) throw std::invalid_argument("make_raw_family: size must be >= 1");
    if (!psi || !antiderivative) throw std::invalid_argument("make_raw_family: evaluators missing");

    RawFamily raw;
    raw.size = p;
    raw.psi = std::move(psi);
    raw.antiderivative = std::move(antiderivative);
    raw.breakpoints = std::move(breakpoints);
    raw.piecewise_constant = piecewise_constant;
    raw.label = std::move(label);

    const QuadratureRule rule =
        raw.breakpoints.empty() ? gauss_legendre_rule(std::max(default_quad_order(), 64))
                                : composite_rule(raw.breakpoints, 16);

    for (int k = 0; k < rule.order(); ++k) {
        const Eigen::VectorXd v = raw.psi(rule.nodes[k]);
        if (v.size() != p) throw invalid_family_error("raw family: psi size mismatch");
        if (std::abs(v[0] - 1.0) > 1e-12)
            throw invalid_family_error("raw family: psi_1 must be identically 1");
    }
    Eigen::VectorXd integral = Eigen::VectorXd::Zero(p);
    for (int k = 0; k < rule.order(); ++k) integral += rule.weights[k] * raw.psi(rule.nodes[k]);
    integral[0] -= 1.0;
    if (integral.cwiseAbs().maxCoeff() > 1e-10)
        throw invalid_family_error("raw family: int psi must equal e1");

    raw.gram = quadrature_gram(raw.psi, p, rule);
    return raw;
}

OrthonormalizeResult orthonormalize(const RawFamily& raw, double ortho_tol) {
    const int p = raw.size;
    Eigen::MatrixXd gram = raw.gram;
    const double e1_err = (gram.col(0) - Eigen::VectorXd::Unit(p, 0)).cwiseAbs().maxCoeff();
    if (e1_err > 1e-10) throw invalid_family_error("raw family: Gram e1 != e1");

    // Gamma fixes e1 structurally, so the root is computed on the deflated
    // lower block; this keeps phi_1 == 1 and Psi(1) = e1 exact.
    Eigen::MatrixXd sqrt_full = Eigen::MatrixXd::Identity(p, p);
    Eigen::MatrixXd inv_full = Eigen::MatrixXd::Identity(p, p);
    if (p > 1) {
        const Eigen::MatrixXd block = gram.bottomRightCorner(p - 1, p - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
        const Eigen::VectorXd& ev = es.eigenvalues();
        const double lo = ev.minCoeff();
        const double hi = std::max(ev.maxCoeff(), 1.0);
        if (lo <= 0.0 || hi / lo > 1e12) {
            std::ostringstream msg;
            msg << "orthonormalize: Gram matrix numerically singular (eigenvalues in ["
                << lo << ", " << hi << "])";
            throw singular_matrix_error(msg.str());
        }
        sqrt_full.bottomRightCorner(p - 1, p - 1) =
            es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
        inv_full.bottomRightCorner(p - 1, p - 1) =
            es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
            es.eigenvectors().transpose();
    }

    auto raw_psi = raw.psi;
    auto raw_anti = raw.antiderivative;
    auto phi = [inv_full, raw_psi](double t) -> Eigen::VectorXd { return inv_full * raw_psi(t); };
    auto psi = [inv_full, raw_anti](double u) -> Eigen::VectorXd { return inv_full * raw_anti(u); };

    OrthonormalFamily::Spec spec;
    spec.descriptor = {"custom", p, {}};
    spec.phi = phi;
    spec.psi = psi;
    spec.breakpoints = raw.breakpoints;
    spec.piecewise_constant = raw.piecewise_constant;
    spec.structural_rule =
        raw.breakpoints.empty() ? gauss_legendre_rule(std::max(default_quad_order(), 64))
                                : composite_rule(raw.breakpoints, 16);
    spec.ortho_tol = ortho_tol;
    OrthonormalFamily family(std::move(spec));
    return {std::move(family), std::move(inv_full), std::move(sqrt_full)};
}

OrthonormalFamily family_from_descriptor(const FamilyDescriptor& desc) {
    auto param = [&desc](const char* name) {
        auto it = desc.parameters.find(name);
        if (it == desc.parameters.end())
            throw std::invalid_argument("family descriptor: missing parameter '" +
                                        std::string(name) + "'");
        return it->second;
    };
    if (desc.kind == "trig") {
        auto family = make_trig_family(static_cast<int>(param("harmonics")));
        if (desc.size != 0 && desc.size != family.size())
            throw std::invalid_argument("family descriptor: size inconsistent with harmonics");
        return family;
    }
    if (desc.kind == "haar") {
        auto family = make_haar_family(static_cast<int>(param("levels")));
        if (desc.size != 0 && desc.size != family.size())
            throw std::invalid_argument("family descriptor: size inconsistent with levels");
        return family;
    }
    if (desc.kind == "fgm") return make_fgm_family();
    if (desc.kind == "checkerboard")
        return partition_basis(make_partition(PartitionKind::checkerboard,
                                              static_cast<int>(param("cells"))));
    if (desc.kind == "bernstein")
        return partition_basis(make_partition(PartitionKind::bernstein,
                                              static_cast<int>(param("cells"))));
    throw std::invalid_argument("family descriptor: unknown kind '" + desc.kind + "'");
}

} // namespace orthocop
