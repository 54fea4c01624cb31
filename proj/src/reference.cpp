#include "orthocop/reference.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace orthocop {

namespace {

double fgm_cdf(double u, double v, double t) {
    return u * v + t * u * (1.0 - u) * v * (1.0 - v);
}

double fgm_density(double u, double v, double t) {
    return 1.0 + t * (1.0 - 2.0 * u) * (1.0 - 2.0 * v);
}

double clayton_cdf(double u, double v, double t) {
    if (u <= 0.0 || v <= 0.0) return 0.0;
    if (u >= 1.0) return v;
    if (v >= 1.0) return u;
    return std::pow(std::pow(u, -t) + std::pow(v, -t) - 1.0, -1.0 / t);
}

double clayton_density(double u, double v, double t) {
    // unbounded at (0,0) but finite at every interior point; the boundary
    // values are the pointwise limits
    if (u <= 0.0 || v <= 0.0) return 0.0;
    const double s = std::pow(u, -t) + std::pow(v, -t) - 1.0;
    return (1.0 + t) * std::pow(u * v, -t - 1.0) * std::pow(s, -2.0 - 1.0 / t);
}

double frank_cdf(double u, double v, double t) {
    const double g = std::expm1(-t);
    return -std::log1p(std::expm1(-t * u) * std::expm1(-t * v) / g) / t;
}

double frank_density(double u, double v, double t) {
    const double g = -std::expm1(-t);
    const double num = t * g * std::exp(-t * (u + v));
    const double den = g - (-std::expm1(-t * u)) * (-std::expm1(-t * v));
    return num / (den * den);
}

} // namespace

ReferenceCopula::ReferenceCopula(Kind kind, double parameter)
    : kind_(kind), parameter_(parameter) {
    switch (kind_) {
        case Kind::independence:
            parameter_ = 0.0;
            break;
        case Kind::fgm:
            if (std::abs(parameter_) > 1.0)
                throw std::invalid_argument("fgm copula: |theta| must be <= 1");
            break;
        case Kind::clayton:
            if (!(parameter_ > 0.0))
                throw std::invalid_argument("clayton copula: theta must be > 0");
            break;
        case Kind::frank:
            if (parameter_ == 0.0)
                throw std::invalid_argument("frank copula: theta must be nonzero");
            break;
    }
}

std::string ReferenceCopula::label() const {
    std::ostringstream out;
    switch (kind_) {
        case Kind::independence: return "independence";
        case Kind::fgm: out << "fgm:"; break;
        case Kind::clayton: out << "clayton:"; break;
        case Kind::frank: out << "frank:"; break;
    }
    out << parameter_;
    return out.str();
}

double ReferenceCopula::density(double u, double v) const {
    switch (kind_) {
        case Kind::independence: return 1.0;
        case Kind::fgm: return fgm_density(u, v, parameter_);
        case Kind::clayton: return clayton_density(u, v, parameter_);
        case Kind::frank: return frank_density(u, v, parameter_);
    }
    return 0.0;
}

double ReferenceCopula::cdf(double u, double v) const {
    switch (kind_) {
        case Kind::independence: return u * v;
        case Kind::fgm: return fgm_cdf(u, v, parameter_);
        case Kind::clayton: return clayton_cdf(u, v, parameter_);
        case Kind::frank: return frank_cdf(u, v, parameter_);
    }
    return 0.0;
}

ReferenceCopula make_reference(ReferenceCopula::Kind kind, double parameter) {
    return ReferenceCopula(kind, parameter);
}

ReferenceCopula make_reference(const std::string& descriptor) {
    const auto colon = descriptor.find(':');
    const std::string name = descriptor.substr(0, colon);
    double parameter = 0.0;
    if (colon != std::string::npos) {
        try {
            parameter = std::stod(descriptor.substr(colon + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("reference descriptor '" + descriptor +
                                        "': parameter not a number");
        }
    }
    if (name == "independence") return {ReferenceCopula::Kind::independence, 0.0};
    if (name == "fgm") return {ReferenceCopula::Kind::fgm, parameter};
    if (name == "clayton") return {ReferenceCopula::Kind::clayton, parameter};
    if (name == "frank") return {ReferenceCopula::Kind::frank, parameter};
    throw std::invalid_argument("reference descriptor '" + descriptor + "': unknown kind");
}

} // namespace orthocop
