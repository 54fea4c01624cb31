#pragma once

#include <functional>
#include <string>

namespace orthocop {

/// Closed-form copula with density and CDF evaluators, used as a projection
/// target, a discretization source and a test oracle.
class ReferenceCopula {
public:
    enum class Kind { independence, fgm, clayton, frank };

    ReferenceCopula(Kind kind, double parameter);

    Kind kind() const { return kind_; }
    double parameter() const { return parameter_; }
    std::string label() const;

    double density(double u, double v) const;
    double cdf(double u, double v) const;

    /// True when the density is unbounded near a corner of the unit square
    /// (Clayton at (0,0)); projection quadrature then grades its mesh.
    bool corner_singular() const { return kind_ == Kind::clayton; }

private:
    Kind kind_;
    double parameter_;
};

ReferenceCopula make_reference(ReferenceCopula::Kind kind, double parameter);

/// Parses "clayton:1.0"-style descriptors (independence, fgm:t, clayton:t, frank:t).
ReferenceCopula make_reference(const std::string& descriptor);

} // namespace orthocop
