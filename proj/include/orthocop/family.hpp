#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orthocop/quadrature.hpp"

namespace orthocop {

/// Serializable identity of a function family: a kind tag, the family size p,
/// and the numeric parameters needed to rebuild it. Families of kind "custom"
/// cannot be rebuilt from their descriptor.
struct FamilyDescriptor {
    std::string kind;
    int size = 0;
    std::map<std::string, double> parameters;

    bool operator==(const FamilyDescriptor&) const = default;
};

/// A vector phi of p orthonormal functions on [0,1] with phi_1 == 1, together
/// with its antiderivative Psi(u) = int_0^u phi and the structural moments
///   mu    = int_0^1 x phi(x) dx,
///   theta = int_0^1 Psi(u) phi(u)^T du.
///
/// Construction verifies orthonormality (Gram == I), phi_1 == 1, Psi(0) = 0,
/// Psi(1) = e1, mu_1 = 1/2 and theta + theta^T = e1 e1^T, and throws
/// invalid_family_error otherwise. Immutable and cheap to copy.
class OrthonormalFamily {
public:
    using Evaluator = std::function<Eigen::VectorXd(double)>;

    struct Spec {
        FamilyDescriptor descriptor;
        Evaluator phi;
        Evaluator psi; // analytic antiderivative
        std::vector<double> breakpoints; // discontinuity locations, empty if smooth
        bool piecewise_constant = false;
        QuadratureRule structural_rule; // integrates products of family members exactly (or near so)
        double ortho_tol = 1e-10;
        // Optional analytic moments; computed by quadrature when absent.
        std::shared_ptr<const Eigen::VectorXd> mu;
        std::shared_ptr<const Eigen::MatrixXd> theta;
    };

    explicit OrthonormalFamily(Spec spec);

    int size() const { return d_->descriptor.size; }
    Eigen::VectorXd phi(double t) const { return d_->phi(t); }
    Eigen::VectorXd psi(double u) const { return d_->psi(u); }
    const Eigen::VectorXd& mu() const { return d_->mu; }
    const Eigen::MatrixXd& theta() const { return d_->theta; }
    const FamilyDescriptor& descriptor() const { return d_->descriptor; }
    const std::string& label() const { return d_->label; }
    const std::vector<double>& breakpoints() const { return d_->breakpoints; }
    bool piecewise_constant() const { return d_->piecewise_constant; }
    const QuadratureRule& structural_rule() const { return d_->structural_rule; }

    /// True when both handles denote the same family: shared state, or equal
    /// rebuildable descriptors.
    bool same_family(const OrthonormalFamily& other) const;

private:
    struct Data {
        FamilyDescriptor descriptor;
        std::string label;
        Evaluator phi;
        Evaluator psi;
        std::vector<double> breakpoints;
        bool piecewise_constant = false;
        QuadratureRule structural_rule;
        Eigen::VectorXd mu;
        Eigen::MatrixXd theta;
    };
    std::shared_ptr<const Data> d_;
};

/// A non-orthogonal precursor family psi with psi_1 == 1 and int psi = e1,
/// plus its Gram matrix (always recomputed by quadrature, never accepted from
/// the caller).
struct RawFamily {
    int size = 0;
    OrthonormalFamily::Evaluator psi;
    OrthonormalFamily::Evaluator antiderivative;
    std::vector<double> breakpoints;
    bool piecewise_constant = false;
    std::string label;
    Eigen::MatrixXd gram;
};

/// Builds a RawFamily, computing the Gram matrix with a rule adapted to the
/// breakpoints. Throws invalid_family_error when psi_1 != 1 or int psi != e1.
RawFamily make_raw_family(int p,
                          OrthonormalFamily::Evaluator psi,
                          OrthonormalFamily::Evaluator antiderivative,
                          std::vector<double> breakpoints = {},
                          bool piecewise_constant = false,
                          std::string label = "raw");

struct OrthonormalizeResult {
    OrthonormalFamily family;
    Eigen::MatrixXd transform; // Gamma^{-1/2}: phi = transform * psi
    Eigen::MatrixXd gram_sqrt; // Gamma^{1/2}: maps B valid for psi to A = S B S
};

/// Whitens a raw family into an orthonormal one, phi = Gamma^{-1/2} psi.
/// For any matrix B, psi(u)^T B psi(v) == phi(u)^T (S B S) phi(v) with
/// S = gram_sqrt. Throws singular_matrix_error when cond(Gamma) > 1e12.
OrthonormalizeResult orthonormalize(const RawFamily& raw, double ortho_tol = 1e-10);

/// Trigonometric family of size 2*harmonics+1:
/// (1, sqrt2 sin(2 pi x), sqrt2 cos(2 pi x), ..., sqrt2 sin(2 pi h x), sqrt2 cos(2 pi h x)).
/// Moments mu and theta are analytic.
OrthonormalFamily make_trig_family(int harmonics);

/// Haar family of size p = 2^levels: the constant plus 2^j wavelets at each
/// level j = 0..levels-1, dyadic supports, amplitude 2^{j/2}. Piecewise
/// constant on the p cells [k/p, (k+1)/p).
OrthonormalFamily make_haar_family(int levels);

/// Size-2 family (1, sqrt3 (1-2x)).
OrthonormalFamily make_fgm_family();

/// Rebuilds a family from its descriptor (kinds: trig, haar, fgm,
/// checkerboard, bernstein). Throws std::invalid_argument for unknown or
/// non-rebuildable kinds.
OrthonormalFamily family_from_descriptor(const FamilyDescriptor& desc);

} // namespace orthocop
