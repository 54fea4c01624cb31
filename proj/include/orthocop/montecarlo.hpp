#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "orthocop/model.hpp"

namespace orthocop {

/// n pairs in [0,1]^2 with their generation metadata.
struct SampleSet {
    std::vector<std::array<double, 2>> pairs;
    std::uint64_t seed = 0;
    std::string source_label;

    int n() const { return static_cast<int>(pairs.size()); }
};

/// Draws n pairs by conditional inversion: U uniform, V solving
/// phi(U)^T A Psi(V) = W by bisection (the conditional CDF is monotone for a
/// nonnegative density). Deterministic given the seed; the model must carry a
/// "valid" validation report.
SampleSet sample(const CopulaModel& model, int n, std::uint64_t seed);

struct EstimationResult {
    enum class Kind { a1, a2 };

    Eigen::MatrixXd a_hat;
    Kind kind = Kind::a1;
    int n = 0;
    std::string family_label;
};

const char* to_string(EstimationResult::Kind k);

/// Moment estimator: mean of phi(U_i) phi(V_i)^T. Entry (1,1) is exactly 1;
/// the other e1 constraints hold only in expectation.
EstimationResult estimate_a1(const SampleSet& samples, const OrthonormalFamily& family);

/// Centered moment estimator: mean of (phi(U_i)-e1)(phi(V_i)-e1)^T + e1 e1^T.
/// Both e1 eigenvector constraints hold exactly for every sample.
EstimationResult estimate_a2(const SampleSet& samples, const OrthonormalFamily& family);

} // namespace orthocop
