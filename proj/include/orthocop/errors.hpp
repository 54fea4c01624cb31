#pragma once

#include <stdexcept>
#include <string>

namespace orthocop {

/// Quadrature or root-finding failure (non-finite values, lost bracketing, ...).
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A matrix required to be invertible (or well conditioned) is not.
class singular_matrix_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A linear constraint on a model matrix is violated (e1 eigenvector, stochasticity, ...).
class constraint_violation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A function family does not satisfy its structural requirements.
class invalid_family_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A discretization source produced inconsistent values (e.g. a non-monotone CDF).
class invalid_source_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace orthocop
