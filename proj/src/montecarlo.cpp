#include "orthocop/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "orthocop/errors.hpp"

namespace orthocop {

namespace {

// mt19937_64 has a standardized sequence, so drawing doubles directly from
// its raw output keeps samples identical across platforms (the std
// distributions do not guarantee that).
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : rng_(seed) {}
    double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 rng_;
};

} // namespace

const char* to_string(EstimationResult::Kind k) {
    return k == EstimationResult::Kind::a1 ? "a1" : "a2";
}

SampleSet sample(const CopulaModel& model, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
    if (!model.validation() ||
        model.validation()->verdict != ValidationReport::Verdict::valid)
        throw std::invalid_argument(
            "sample: model must carry a 'valid' validation report (run validate first)");

    const OrthonormalFamily& family = model.family();
    const Eigen::MatrixXd at = model.matrix().transpose();

    UniformSource rng(seed);
    SampleSet out;
    out.pairs.reserve(n);
    out.seed = seed;
    out.source_label = family.label();

    for (int i = 0; i < n; ++i) {
        const double u = rng.next();
        const double w = rng.next();

        // conditional CDF given U=u: G(v) = phi(u)^T A Psi(v), monotone in v
        const Eigen::VectorXd r = at * family.phi(u);
        auto cond = [&r, &family](double v) {
            return std::clamp(r.dot(family.psi(v)), 0.0, 1.0);
        };
        const double g1 = r.dot(family.psi(1.0));
        if (std::abs(g1 - 1.0) > 1e-9 || r.dot(family.psi(0.0)) < -1e-9) {
            std::ostringstream msg;
            msg << "sample: conditional CDF not bracketed at u=" << u
                << " (G(1)=" << g1 << "); model density is not a copula";
            throw numeric_error(msg.str());
        }

        double lo = 0.0, hi = 1.0;
        for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (cond(mid) < w)
                lo = mid;
            else
                hi = mid;
        }
        out.pairs.push_back({u, 0.5 * (lo + hi)});
    }
    return out;
}

EstimationResult estimate_a1(const SampleSet& samples, const OrthonormalFamily& family) {
    if (samples.pairs.empty()) throw std::invalid_argument("estimate_a1: empty sample");
    const int p = family.size();
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(p, p);
    for (const auto& [u, v] : samples.pairs)
        sum.noalias() += family.phi(u) * family.phi(v).transpose();
    return {sum / static_cast<double>(samples.n()), EstimationResult::Kind::a1,
            samples.n(), family.label()};
}

EstimationResult estimate_a2(const SampleSet& samples, const OrthonormalFamily& family) {
    if (samples.pairs.empty()) throw std::invalid_argument("estimate_a2: empty sample");
    const int p = family.size();
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(p, p);
    for (const auto& [u, v] : samples.pairs) {
        Eigen::VectorXd cu = family.phi(u);
        Eigen::VectorXd cv = family.phi(v);
        cu[0] -= 1.0; // exactly zero: phi_1 == 1
        cv[0] -= 1.0;
        sum.noalias() += cu * cv.transpose();
    }
    Eigen::MatrixXd a_hat = sum / static_cast<double>(samples.n());
    a_hat(0, 0) += 1.0;
    return {std::move(a_hat), EstimationResult::Kind::a2, samples.n(), family.label()};
}

} // namespace orthocop
