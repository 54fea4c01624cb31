#include "orthocop/linalg.hpp"

#include <sstream>
#include <stdexcept>

#include "orthocop/errors.hpp"

namespace orthocop {

namespace {

void require_symmetric(const Eigen::MatrixXd& m, const char* who) {
    if (m.rows() != m.cols()) throw std::invalid_argument(std::string(who) + ": matrix not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        std::ostringstream msg;
        msg << who << ": matrix not symmetric (max |M - M^T| = " << asym << ")";
        throw std::invalid_argument(msg.str());
    }
}

} // namespace

Eigen::MatrixXd sym_principal_sqrt(const Eigen::MatrixXd& m) {
    require_symmetric(m, "sym_principal_sqrt");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] < -1e-12) {
            std::ostringstream msg;
            msg << "sym_principal_sqrt: eigenvalue " << ev[i] << " below PSD tolerance";
            throw std::invalid_argument(msg.str());
        }
        if (ev[i] < 0.0) ev[i] = 0.0;
    }
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd sym_inv_sqrt(const Eigen::MatrixXd& m, double eigenvalue_floor) {
    require_symmetric(m, "sym_inv_sqrt");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const Eigen::VectorXd& ev = es.eigenvalues();
    Eigen::VectorXd inv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] < eigenvalue_floor) {
            std::ostringstream msg;
            msg << "sym_inv_sqrt: eigenvalue " << ev[i] << " below floor " << eigenvalue_floor;
            throw singular_matrix_error(msg.str());
        }
        inv[i] = 1.0 / std::sqrt(ev[i]);
    }
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace orthocop
