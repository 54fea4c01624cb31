#include "orthocop/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "orthocop/dependence.hpp"
#include "orthocop/errors.hpp"

namespace orthocop {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& context, const std::string& what) {
    throw std::invalid_argument(context + ": " + what);
}

const json& require(const json& j, const char* field, const std::string& context) {
    if (!j.is_object() || !j.contains(field))
        bad_field(context, std::string("missing field '") + field + "'");
    return j.at(field);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

json descriptor_to_json(const FamilyDescriptor& desc) {
    json params = json::object();
    for (const auto& [key, value] : desc.parameters) params[key] = value;
    return {{"kind", desc.kind}, {"size", desc.size}, {"parameters", params}};
}

FamilyDescriptor descriptor_from_json(const json& j) {
    const std::string ctx = "family descriptor";
    FamilyDescriptor desc;
    const json& kind = require(j, "kind", ctx);
    if (!kind.is_string()) bad_field(ctx, "'kind' must be a string");
    desc.kind = kind.get<std::string>();
    const json& size = require(j, "size", ctx);
    if (!size.is_number_integer()) bad_field(ctx, "'size' must be an integer");
    desc.size = size.get<int>();
    if (j.contains("parameters")) {
        const json& params = j.at("parameters");
        if (!params.is_object()) bad_field(ctx, "'parameters' must be an object");
        for (auto it = params.begin(); it != params.end(); ++it) {
            if (!it.value().is_number())
                bad_field(ctx, "parameter '" + it.key() + "' must be a number");
            desc.parameters[it.key()] = it.value().get<double>();
        }
    }
    return desc;
}

json report_to_json(const ValidationReport& report) {
    return {{"min_value", report.min_value},
            {"argmin", {report.argmin_u, report.argmin_v}},
            {"grid_resolution", report.grid_resolution},
            {"refined", report.refined},
            {"verdict", to_string(report.verdict)}};
}

ValidationReport report_from_json(const json& j) {
    const std::string ctx = "validation report";
    ValidationReport report;
    report.min_value = require(j, "min_value", ctx).get<double>();
    const json& argmin = require(j, "argmin", ctx);
    if (!argmin.is_array() || argmin.size() != 2) bad_field(ctx, "'argmin' must be [u, v]");
    report.argmin_u = argmin[0].get<double>();
    report.argmin_v = argmin[1].get<double>();
    report.grid_resolution = require(j, "grid_resolution", ctx).get<int>();
    report.refined = require(j, "refined", ctx).get<bool>();
    const std::string verdict = require(j, "verdict", ctx).get<std::string>();
    if (verdict == "valid")
        report.verdict = ValidationReport::Verdict::valid;
    else if (verdict == "invalid")
        report.verdict = ValidationReport::Verdict::invalid;
    else if (verdict == "inconclusive")
        report.verdict = ValidationReport::Verdict::inconclusive;
    else
        bad_field(ctx, "'verdict' must be valid/invalid/inconclusive");
    return report;
}

json model_to_json(const CopulaModel& model) {
    const Eigen::MatrixXd& a = model.matrix();
    json matrix = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) matrix.push_back(a(i, j));
    json out = {{"family", descriptor_to_json(model.family().descriptor())},
                {"matrix", matrix}};
    if (model.validation()) out["validation"] = report_to_json(*model.validation());
    return out;
}

CopulaModel model_from_json(const json& j) {
    const std::string ctx = "model file";
    const FamilyDescriptor desc = descriptor_from_json(require(j, "family", ctx));
    OrthonormalFamily family = family_from_descriptor(desc);
    const int p = family.size();

    const json& matrix = require(j, "matrix", ctx);
    if (!matrix.is_array()) bad_field(ctx, "'matrix' must be an array");
    if (static_cast<int>(matrix.size()) != p * p) {
        std::ostringstream msg;
        msg << "'matrix' has " << matrix.size() << " entries, expected " << p * p
            << " for family size " << p;
        bad_field(ctx, msg.str());
    }
    Eigen::MatrixXd a(p, p);
    int k = 0;
    for (const auto& entry : matrix) {
        if (!entry.is_number()) bad_field(ctx, "'matrix' entries must be numbers");
        a(k / p, k % p) = entry.get<double>();
        ++k;
    }

    CopulaModel model(std::move(family), std::move(a));
    if (j.contains("validation"))
        model = model.with_validation(report_from_json(j.at("validation")));
    return model;
}

void save_model(const CopulaModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open '" + path.string() + "' for writing");
    out << model_to_json(model).dump(2) << "\n";
}

CopulaModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("model file '" + path.string() + "': " + e.what());
    }
    return model_from_json(j);
}

json measures_report(const CopulaModel& model) {
    std::vector<double> tail_points;
    for (int k = 2; k <= 6; ++k) tail_points.push_back(1.0 - std::pow(10.0, -k));
    const std::vector<double> profile = upper_tail_profile(model, tail_points);

    json tail = json::array();
    for (std::size_t i = 0; i < tail_points.size(); ++i)
        tail.push_back({{"u", tail_points[i]}, {"value", profile[i]}});

    return {{"rho_closed", spearman_rho(model)},
            {"rho_quadrature", spearman_rho_quadrature(model)},
            {"tau_closed", kendall_tau(model)},
            {"tau_quadrature", kendall_tau_quadrature(model)},
            {"tail_profile", tail}};
}

json estimation_report(const EstimationResult& result, const OrthonormalFamily& family) {
    json matrix = json::array();
    for (Eigen::Index i = 0; i < result.a_hat.rows(); ++i)
        for (Eigen::Index j = 0; j < result.a_hat.cols(); ++j)
            matrix.push_back(result.a_hat(i, j));

    json validation;
    try {
        CopulaModel implied(family, result.a_hat);
        validation = report_to_json(validate(implied));
    } catch (const constraint_violation& e) {
        validation = {{"verdict", "constraint-violation"}, {"detail", e.what()}};
    }

    return {{"matrix", matrix},
            {"estimator", to_string(result.kind)},
            {"n", result.n},
            {"family", descriptor_to_json(family.descriptor())},
            {"validation", validation}};
}

void write_sample_csv(const SampleSet& samples, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open '" + path.string() + "' for writing");
    out << "u,v\n";
    for (const auto& [u, v] : samples.pairs)
        out << format_double(u) << "," << format_double(v) << "\n";
}

SampleSet read_sample_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open sample file '" + path.string() + "'");
    SampleSet out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("u,", 0) == 0) continue; // header
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("sample file '" + path.string() + "': line " +
                                        std::to_string(lineno) + " is not 'u,v'");
        try {
            const double u = std::stod(line.substr(0, comma));
            const double v = std::stod(line.substr(comma + 1));
            out.pairs.push_back({u, v});
        } catch (const std::exception&) {
            throw std::invalid_argument("sample file '" + path.string() + "': line " +
                                        std::to_string(lineno) + " is not numeric");
        }
    }
    out.source_label = path.string();
    return out;
}

namespace {

void write_grid_csv(const CopulaModel& model, int resolution,
                    const std::filesystem::path& path, bool cumulative) {
    if (resolution < 2) throw std::invalid_argument("grid export: resolution must be >= 2");
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open '" + path.string() + "' for writing");
    out << "u,v,value\n";
    for (int i = 0; i < resolution; ++i) {
        const double u = static_cast<double>(i) / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            const double v = static_cast<double>(j) / (resolution - 1);
            const double value = cumulative ? model.cdf(u, v) : model.density(u, v);
            out << format_double(u) << "," << format_double(v) << ","
                << format_double(value) << "\n";
        }
    }
}

} // namespace

void write_density_grid_csv(const CopulaModel& model, int resolution,
                            const std::filesystem::path& path) {
    write_grid_csv(model, resolution, path, false);
}

void write_cdf_grid_csv(const CopulaModel& model, int resolution,
                        const std::filesystem::path& path) {
    write_grid_csv(model, resolution, path, true);
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows,
                           const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open '" + path.string() + "' for writing");
    out << "p,l2_error,rho_model,rho_target,rho_gap\n";
    for (const auto& row : rows)
        out << row.p << "," << format_double(row.l2_error) << ","
            << format_double(row.rho_model) << "," << format_double(row.rho_target) << ","
            << format_double(row.rho_gap) << "\n";
}

} // namespace orthocop
