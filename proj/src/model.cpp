#include "orthocop/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "orthocop/errors.hpp"

namespace orthocop {

namespace {

void require_unit_interval(double u, double v, const char* who) {
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << who << ": point (" << u << "," << v << ") outside [0,1]^2";
        throw std::invalid_argument(msg.str());
    }
}

// Minimal Nelder-Mead descent on [0,1]^2, used to sharpen the grid minimum of
// a smooth density scan.
std::pair<Eigen::Vector2d, double>
nelder_mead_2d(const std::function<double(double, double)>& f, Eigen::Vector2d start,
               double step, int max_iter) {
    auto clamp01 = [](Eigen::Vector2d x) {
        x[0] = std::clamp(x[0], 0.0, 1.0);
        x[1] = std::clamp(x[1], 0.0, 1.0);
        return x;
    };
    std::array<Eigen::Vector2d, 3> pts = {
        clamp01(start),
        clamp01(start + Eigen::Vector2d(step, 0.0)),
        clamp01(start + Eigen::Vector2d(0.0, step)),
    };
    std::array<double, 3> val;
    for (int i = 0; i < 3; ++i) val[i] = f(pts[i][0], pts[i][1]);

    for (int iter = 0; iter < max_iter; ++iter) {
        std::array<int, 3> idx = {0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return val[a] < val[b]; });
        const int lo = idx[0], mid = idx[1], hi = idx[2];
        if (val[hi] - val[lo] < 1e-14 && (pts[hi] - pts[lo]).norm() < 1e-12) break;

        const Eigen::Vector2d centroid = 0.5 * (pts[lo] + pts[mid]);
        Eigen::Vector2d refl = clamp01(centroid + (centroid - pts[hi]));
        double frefl = f(refl[0], refl[1]);
        if (frefl < val[lo]) {
            Eigen::Vector2d exp_pt = clamp01(centroid + 2.0 * (centroid - pts[hi]));
            const double fexp = f(exp_pt[0], exp_pt[1]);
            if (fexp < frefl) { pts[hi] = exp_pt; val[hi] = fexp; }
            else { pts[hi] = refl; val[hi] = frefl; }
        } else if (frefl < val[mid]) {
            pts[hi] = refl;
            val[hi] = frefl;
        } else {
            Eigen::Vector2d contr = clamp01(centroid + 0.5 * (pts[hi] - centroid));
            const double fcontr = f(contr[0], contr[1]);
            if (fcontr < val[hi]) { pts[hi] = contr; val[hi] = fcontr; }
            else {
                for (int i : {mid, hi}) {
                    pts[i] = clamp01(pts[lo] + 0.5 * (pts[i] - pts[lo]));
                    val[i] = f(pts[i][0], pts[i][1]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (val[i] < val[best]) best = i;
    return {pts[best], val[best]};
}

} // namespace

const char* to_string(ValidationReport::Verdict v) {
    switch (v) {
        case ValidationReport::Verdict::valid: return "valid";
        case ValidationReport::Verdict::invalid: return "invalid";
        case ValidationReport::Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

CopulaModel::CopulaModel(OrthonormalFamily family, Eigen::MatrixXd a)
    : family_(std::move(family)), a_(std::move(a)) {
    const int p = family_.size();
    if (a_.rows() != p || a_.cols() != p) {
        std::ostringstream msg;
        msg << "model matrix is " << a_.rows() << "x" << a_.cols() << ", family size is " << p;
        throw std::invalid_argument(msg.str());
    }
    if (!a_.allFinite()) throw std::invalid_argument("model matrix has non-finite entries");
    const Eigen::VectorXd col = a_.col(0);
    const Eigen::VectorXd row = a_.row(0).transpose();
    for (int i = 0; i < p; ++i) {
        const double want = (i == 0) ? 1.0 : 0.0;
        if (std::abs(col[i] - want) > 1e-10) {
            std::ostringstream msg;
            msg << "A e1 != e1: first-column entry " << (i + 1) << " is " << col[i]
                << ", expected " << want;
            throw constraint_violation(msg.str());
        }
        if (std::abs(row[i] - want) > 1e-10) {
            std::ostringstream msg;
            msg << "A^T e1 != e1: first-row entry " << (i + 1) << " is " << row[i]
                << ", expected " << want;
            throw constraint_violation(msg.str());
        }
    }
    if (a_.trace() < -1e-12) {
        std::ostringstream msg;
        msg << "matrix trace " << a_.trace() << " is negative";
        throw constraint_violation(msg.str());
    }
}

double CopulaModel::density(double u, double v) const {
    require_unit_interval(u, v, "density");
    return family_.phi(u).dot(a_ * family_.phi(v));
}

double CopulaModel::cdf(double u, double v) const {
    require_unit_interval(u, v, "cdf");
    return family_.psi(u).dot(a_ * family_.psi(v));
}

CopulaModel CopulaModel::with_validation(ValidationReport report) const {
    CopulaModel copy = *this;
    copy.validation_ = report;
    return copy;
}

CopulaModel new_model(OrthonormalFamily family, Eigen::MatrixXd a) {
    return CopulaModel(std::move(family), std::move(a));
}

CopulaModel independence_model(OrthonormalFamily family) {
    const int p = family.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
    a(0, 0) = 1.0;
    return CopulaModel(std::move(family), std::move(a));
}

CopulaModel diagonal_model(OrthonormalFamily family, double theta) {
    const int p = family.size();
    Eigen::VectorXd d = Eigen::VectorXd::Constant(p, theta);
    d[0] = 1.0;
    return CopulaModel(std::move(family), d.asDiagonal());
}

ValidationReport validate(const CopulaModel& model, int resolution, bool refine) {
    if (resolution < 2) throw std::invalid_argument("validate: resolution must be >= 2");
    const OrthonormalFamily& family = model.family();

    ValidationReport report;
    if (family.piecewise_constant()) {
        // Midpoint scan over the family's cells is exact for a piecewise
        // constant density; the verdict is definitive.
        const auto& bps = family.breakpoints();
        const int cells = static_cast<int>(bps.size()) - 1;
        std::vector<double> mids(cells);
        for (int i = 0; i < cells; ++i) mids[i] = 0.5 * (bps[i] + bps[i + 1]);

        Eigen::MatrixXd basis(family.size(), cells);
        for (int i = 0; i < cells; ++i) basis.col(i) = family.phi(mids[i]);
        const Eigen::MatrixXd vals = basis.transpose() * model.matrix() * basis;

        report.grid_resolution = cells;
        report.refined = false;
        report.min_value = vals(0, 0);
        report.argmin_u = mids[0];
        report.argmin_v = mids[0];
        for (int i = 0; i < cells; ++i)
            for (int j = 0; j < cells; ++j)
                if (vals(i, j) < report.min_value) {
                    report.min_value = vals(i, j);
                    report.argmin_u = mids[i];
                    report.argmin_v = mids[j];
                }
        report.verdict = report.min_value >= -kNonnegativityTol
                             ? ValidationReport::Verdict::valid
                             : ValidationReport::Verdict::invalid;
        return report;
    }

    std::vector<double> grid(resolution);
    for (int i = 0; i < resolution; ++i) grid[i] = (i + 0.5) / resolution;
    Eigen::MatrixXd basis(family.size(), resolution);
    for (int i = 0; i < resolution; ++i) basis.col(i) = family.phi(grid[i]);
    const Eigen::MatrixXd vals = basis.transpose() * model.matrix() * basis;

    report.grid_resolution = resolution;
    report.min_value = vals(0, 0);
    report.argmin_u = grid[0];
    report.argmin_v = grid[0];
    for (int i = 0; i < resolution; ++i)
        for (int j = 0; j < resolution; ++j)
            if (vals(i, j) < report.min_value) {
                report.min_value = vals(i, j);
                report.argmin_u = grid[i];
                report.argmin_v = grid[j];
            }

    if (refine) {
        auto dens = [&model](double u, double v) { return model.density(u, v); };
        auto [pt, value] = nelder_mead_2d(dens, {report.argmin_u, report.argmin_v},
                                          1.0 / resolution, 400);
        if (value < report.min_value) {
            report.min_value = value;
            report.argmin_u = pt[0];
            report.argmin_v = pt[1];
        }
        report.refined = true;
    }

    if (report.min_value < -kNonnegativityTol)
        report.verdict = ValidationReport::Verdict::invalid;
    else if (resolution < 64)
        report.verdict = ValidationReport::Verdict::inconclusive; // coarse scan of a smooth density
    else
        report.verdict = ValidationReport::Verdict::valid;
    return report;
}

CopulaModel validated(const CopulaModel& model, int resolution, bool refine) {
    return model.with_validation(validate(model, resolution, refine));
}

CopulaModel star(const CopulaModel& lhs, const CopulaModel& rhs) {
    if (!lhs.family().same_family(rhs.family()))
        throw std::invalid_argument("star: models live on different families");
    return CopulaModel(lhs.family(), lhs.matrix() * rhs.matrix());
}

CopulaModel mix(std::span<const CopulaModel> models, std::span<const double> weights) {
    if (models.empty()) throw std::invalid_argument("mix: no models");
    if (models.size() != weights.size())
        throw std::invalid_argument("mix: weight count mismatch");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("mix: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "mix: weights sum to " << sum << ", expected 1";
        throw std::invalid_argument(msg.str());
    }
    for (std::size_t i = 1; i < models.size(); ++i)
        if (!models[0].family().same_family(models[i].family()))
            throw std::invalid_argument("mix: models live on different families");

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(models[0].matrix().rows(),
                                              models[0].matrix().cols());
    for (std::size_t i = 0; i < models.size(); ++i) a += weights[i] * models[i].matrix();
    return CopulaModel(models[0].family(), std::move(a));
}

CopulaModel cesaro_aggregate(OrthonormalFamily family, const Eigen::MatrixXd& a) {
    const Eigen::Index q = a.rows();
    if (a.cols() != q) throw std::invalid_argument("cesaro_aggregate: matrix not square");
    if (q < 1 || q > family.size())
        throw std::invalid_argument("cesaro_aggregate: matrix larger than the family");

    // B_IJ = (q + 1 - max(I,J)) A_IJ / q in 1-based indices
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(family.size(), family.size());
    for (Eigen::Index i = 0; i < q; ++i)
        for (Eigen::Index j = 0; j < q; ++j)
            b(i, j) = static_cast<double>(q - std::max(i, j)) * a(i, j) / q;
    return CopulaModel(std::move(family), std::move(b));
}

CopulaModel make_dirichlet_model(int harmonics, double theta) {
    return diagonal_model(make_trig_family(harmonics), theta);
}

CopulaModel make_fejer_model(int q, double theta) {
    if (q < 1) throw std::invalid_argument("make_fejer_model: q must be >= 1");
    const int harmonics = std::max(1, q - 1);
    OrthonormalFamily family = make_trig_family(harmonics);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(family.size());
    d[0] = 1.0;
    for (int j = 1; j < q; ++j) {
        const double w = theta * static_cast<double>(q - j) / q;
        d[2 * j - 1] = w;
        d[2 * j] = w;
    }
    return CopulaModel(std::move(family), d.asDiagonal());
}

} // namespace orthocop
