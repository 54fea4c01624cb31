#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "orthocop/dependence.hpp"
#include "orthocop/io.hpp"
#include "orthocop/model.hpp"
#include "orthocop/montecarlo.hpp"
#include "orthocop/partition.hpp"
#include "orthocop/projection.hpp"
#include "orthocop/reference.hpp"

namespace py = pybind11;
using namespace orthocop;

namespace {

py::dict report_dict(const ValidationReport& r) {
    py::dict d;
    d["min_value"] = r.min_value;
    d["argmin"] = py::make_tuple(r.argmin_u, r.argmin_v);
    d["grid_resolution"] = r.grid_resolution;
    d["refined"] = r.refined;
    d["verdict"] = std::string(to_string(r.verdict));
    return d;
}

Eigen::MatrixXd pairs_matrix(const SampleSet& s) {
    Eigen::MatrixXd out(s.n(), 2);
    for (int i = 0; i < s.n(); ++i) {
        out(i, 0) = s.pairs[i][0];
        out(i, 1) = s.pairs[i][1];
    }
    return out;
}

SampleSet sampleset_from_matrix(const Eigen::MatrixXd& pairs) {
    if (pairs.cols() != 2) throw std::invalid_argument("sample array must be n x 2");
    SampleSet s;
    s.pairs.reserve(pairs.rows());
    for (Eigen::Index i = 0; i < pairs.rows(); ++i)
        s.pairs.push_back({pairs(i, 0), pairs(i, 1)});
    s.source_label = "ndarray";
    return s;
}

} // namespace

PYBIND11_MODULE(orthocop, m) {
    m.doc() = "semiparametric copulas c(u,v) = phi(u)^T A phi(v) over orthonormal families";

    py::class_<OrthonormalFamily>(m, "OrthonormalFamily")
        .def_property_readonly("size", &OrthonormalFamily::size)
        .def_property_readonly("label", &OrthonormalFamily::label)
        .def_property_readonly("mu", [](const OrthonormalFamily& f) { return f.mu(); })
        .def_property_readonly("theta", [](const OrthonormalFamily& f) { return f.theta(); })
        .def("phi", &OrthonormalFamily::phi, py::arg("t"))
        .def("psi", &OrthonormalFamily::psi, py::arg("u"))
        .def("__repr__", [](const OrthonormalFamily& f) {
            return "<OrthonormalFamily " + f.label() + ">";
        });

    m.def("trig_family", &make_trig_family, py::arg("harmonics"));
    m.def("haar_family", &make_haar_family, py::arg("levels"));
    m.def("fgm_family", &make_fgm_family);
    m.def("checkerboard_family", [](int p) {
        return partition_basis(make_partition(PartitionKind::checkerboard, p));
    }, py::arg("cells"));
    m.def("bernstein_family", [](int p) {
        return partition_basis(make_partition(PartitionKind::bernstein, p));
    }, py::arg("cells"));

    py::class_<CopulaModel>(m, "CopulaModel")
        .def(py::init<OrthonormalFamily, Eigen::MatrixXd>(), py::arg("family"), py::arg("matrix"))
        .def_property_readonly("matrix", [](const CopulaModel& mdl) { return mdl.matrix(); })
        .def_property_readonly("family", &CopulaModel::family)
        .def("density", &CopulaModel::density, py::arg("u"), py::arg("v"))
        .def("cdf", &CopulaModel::cdf, py::arg("u"), py::arg("v"))
        .def("validate",
             [](const CopulaModel& mdl, int resolution, bool refine) {
                 return report_dict(validate(mdl, resolution, refine));
             },
             py::arg("resolution") = 512, py::arg("refine") = true)
        .def("validated",
             [](const CopulaModel& mdl, int resolution, bool refine) {
                 return validated(mdl, resolution, refine);
             },
             py::arg("resolution") = 512, py::arg("refine") = true)
        .def("__repr__", [](const CopulaModel& mdl) {
            return "<CopulaModel on " + mdl.family().label() + ">";
        });

    m.def("new_model", &new_model, py::arg("family"), py::arg("matrix"));
    m.def("independence_model", &independence_model, py::arg("family"));
    m.def("diagonal_model", &diagonal_model, py::arg("family"), py::arg("theta"));
    m.def("star", &star, py::arg("lhs"), py::arg("rhs"));
    m.def("mix", [](const std::vector<CopulaModel>& models, const std::vector<double>& weights) {
        return mix(models, weights);
    }, py::arg("models"), py::arg("weights"));
    m.def("cesaro_aggregate", &cesaro_aggregate, py::arg("family"), py::arg("matrix"));
    m.def("dirichlet_model", &make_dirichlet_model, py::arg("harmonics"), py::arg("theta"));
    m.def("fejer_model", &make_fejer_model, py::arg("q"), py::arg("theta"));

    m.def("spearman_rho", &spearman_rho);
    m.def("spearman_rho_quadrature",
          [](const CopulaModel& mdl) { return spearman_rho_quadrature(mdl); });
    m.def("kendall_tau", &kendall_tau);
    m.def("kendall_tau_quadrature", &kendall_tau_quadrature);
    m.def("upper_tail_profile",
          [](const CopulaModel& mdl, const std::vector<double>& u_points) {
              return upper_tail_profile(mdl, u_points);
          },
          py::arg("model"), py::arg("u_points"));
    m.def("dirichlet_rho", &dirichlet_rho, py::arg("harmonics"), py::arg("theta"));
    m.def("fejer_rho", &fejer_rho, py::arg("q"), py::arg("theta"));

    py::class_<ReferenceCopula>(m, "ReferenceCopula")
        .def_property_readonly("label", &ReferenceCopula::label)
        .def_property_readonly("parameter", &ReferenceCopula::parameter)
        .def("density", &ReferenceCopula::density, py::arg("u"), py::arg("v"))
        .def("cdf", &ReferenceCopula::cdf, py::arg("u"), py::arg("v"))
        .def("__repr__",
             [](const ReferenceCopula& r) { return "<ReferenceCopula " + r.label() + ">"; });
    m.def("reference", [](const std::string& descriptor) { return make_reference(descriptor); },
          py::arg("descriptor"));
    m.def("reference_rho", [](const ReferenceCopula& ref) { return spearman_rho_quadrature(ref); });

    m.def("t_phi",
          [](const std::function<double(double, double)>& target, const OrthonormalFamily& family,
             bool corner_singular) { return t_phi_adaptive(target, family, corner_singular); },
          py::arg("target"), py::arg("family"), py::arg("corner_singular") = false);
    m.def("project",
          [](const ReferenceCopula& target, const OrthonormalFamily& family) {
              ProjectionResult result = p_phi(target, family);
              return py::make_tuple(result.model, report_dict(result.report));
          },
          py::arg("target"), py::arg("family"));
    m.def("identity_check", &identity_check, py::arg("family"));
    m.def("inner_product",
          [](const CopulaModel& a, const CopulaModel& b) { return inner_product(a, b); });
    m.def("convergence_study",
          [](const ReferenceCopula& target, const std::vector<int>& p_list) {
              auto builder = [](int p) {
                  int levels = 0;
                  while ((1 << levels) < p) ++levels;
                  if ((1 << levels) != p)
                      throw std::invalid_argument("haar ladder sizes must be powers of 2");
                  return make_haar_family(levels);
              };
              py::list rows;
              for (const auto& r : convergence_study(target, builder, p_list)) {
                  py::dict d;
                  d["p"] = r.p;
                  d["l2_error"] = r.l2_error;
                  d["rho_model"] = r.rho_model;
                  d["rho_target"] = r.rho_target;
                  d["rho_gap"] = r.rho_gap;
                  rows.append(d);
              }
              return rows;
          },
          py::arg("target"), py::arg("p_list"));

    m.def("checkerboard_model",
          [](int p, const ReferenceCopula& source) {
              const PartitionFamily pf = make_partition(PartitionKind::checkerboard, p);
              return to_copula_model(pf, discretize_copula(source, p));
          },
          py::arg("cells"), py::arg("source"));
    m.def("bernstein_model",
          [](int p, const ReferenceCopula& source) {
              const PartitionFamily pf = make_partition(PartitionKind::bernstein, p);
              return to_copula_model(pf, discretize_copula(source, p));
          },
          py::arg("cells"), py::arg("source"));
    m.def("discretize",
          [](const ReferenceCopula& source, int p) { return discretize_copula(source, p); },
          py::arg("source"), py::arg("cells"));

    m.def("sample",
          [](const CopulaModel& mdl, int n, std::uint64_t seed) {
              return pairs_matrix(sample(mdl, n, seed));
          },
          py::arg("model"), py::arg("n"), py::arg("seed") = 0);
    m.def("estimate_a1",
          [](const Eigen::MatrixXd& pairs, const OrthonormalFamily& family) {
              return estimate_a1(sampleset_from_matrix(pairs), family).a_hat;
          },
          py::arg("pairs"), py::arg("family"));
    m.def("estimate_a2",
          [](const Eigen::MatrixXd& pairs, const OrthonormalFamily& family) {
              return estimate_a2(sampleset_from_matrix(pairs), family).a_hat;
          },
          py::arg("pairs"), py::arg("family"));

    m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
    m.def("load_model", &load_model, py::arg("path"));
}
