// Command-line surface: construct, validate, measures, project, star, sample,
// estimate, density-grid, convergence. Exit codes: 0 success, 1 validation
// failure (invalid copula), 2 usage or file errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orthocop/dependence.hpp"
#include "orthocop/errors.hpp"
#include "orthocop/io.hpp"
#include "orthocop/model.hpp"
#include "orthocop/montecarlo.hpp"
#include "orthocop/partition.hpp"
#include "orthocop/projection.hpp"
#include "orthocop/reference.hpp"

namespace {

using namespace orthocop;

constexpr int kExitOk = 0;
constexpr int kExitInvalidCopula = 1;
constexpr int kExitUsage = 2;

struct FamilyChoice {
    std::string kind;
    std::optional<int> amount; // harmonics / levels / cells, depending on kind
};

FamilyChoice parse_family_arg(const std::string& arg) {
    FamilyChoice choice;
    const auto colon = arg.find(':');
    choice.kind = arg.substr(0, colon);
    if (colon != std::string::npos) {
        try {
            choice.amount = std::stoi(arg.substr(colon + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("family '" + arg + "': parameter not an integer");
        }
    }
    return choice;
}

int levels_for_size(int p) {
    int levels = 0;
    while ((1 << levels) < p) ++levels;
    if ((1 << levels) != p)
        throw std::invalid_argument("haar family size must be a power of 2, got " +
                                    std::to_string(p));
    return levels;
}

// Resolves --family plus the dedicated size flags into a descriptor. The colon
// form ("haar:8") carries the size directly; haar sizes are total family size.
FamilyDescriptor resolve_descriptor(const std::string& family_arg, std::optional<int> harmonics,
                                    std::optional<int> levels, std::optional<int> cells) {
    FamilyChoice choice = parse_family_arg(family_arg);
    auto amount = [&](std::optional<int> flag) -> std::optional<int> {
        if (flag) return flag;
        return choice.amount;
    };
    FamilyDescriptor desc;
    desc.kind = choice.kind;
    if (choice.kind == "trig") {
        const auto h = amount(harmonics);
        if (!h) throw std::invalid_argument("trig family needs --harmonics or trig:<h>");
        desc.parameters["harmonics"] = *h;
        desc.size = 2 * *h + 1;
    } else if (choice.kind == "haar") {
        int lv;
        if (levels)
            lv = *levels;
        else if (choice.amount)
            lv = levels_for_size(*choice.amount);
        else
            throw std::invalid_argument("haar family needs --levels or haar:<size>");
        desc.parameters["levels"] = lv;
        desc.size = 1 << lv;
    } else if (choice.kind == "fgm") {
        desc.size = 2;
    } else if (choice.kind == "checkerboard" || choice.kind == "bernstein") {
        const auto c = amount(cells);
        if (!c)
            throw std::invalid_argument(choice.kind + " family needs --cells or " +
                                        choice.kind + ":<p>");
        desc.parameters["cells"] = *c;
        desc.size = *c;
    } else {
        throw std::invalid_argument("unknown family kind '" + choice.kind + "'");
    }
    return desc;
}

Eigen::MatrixXd parse_inline_matrix(const std::string& text, int p) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("--matrix: ") + e.what());
    }
    if (!j.is_array() || static_cast<int>(j.size()) != p * p)
        throw std::invalid_argument("--matrix: expected a flat array of " +
                                    std::to_string(p * p) + " numbers");
    Eigen::MatrixXd a(p, p);
    int k = 0;
    for (const auto& entry : j) {
        if (!entry.is_number()) throw std::invalid_argument("--matrix: entries must be numbers");
        a(k / p, k % p) = entry.get<double>();
        ++k;
    }
    return a;
}

int run(int argc, char** argv) {
    CLI::App app{"semiparametric copulas from orthonormal expansions"};
    app.require_subcommand(1);

    // ---- construct ----
    auto* construct = app.add_subcommand("construct", "build a model and write it to JSON");
    std::string c_family, c_matrix, c_from, c_out;
    std::optional<int> c_harmonics, c_levels, c_cells;
    std::optional<double> c_diag_theta;
    bool c_identity = false, c_fejer = false;
    construct->add_option("--family", c_family, "trig|haar|fgm|checkerboard|bernstein, colon form allowed")->required();
    construct->add_option("--harmonics", c_harmonics, "trig harmonic count");
    construct->add_option("--levels", c_levels, "haar level count");
    construct->add_option("--cells", c_cells, "partition cell count");
    construct->add_option("--diag-theta", c_diag_theta, "matrix diag{1, theta, ..., theta}");
    construct->add_option("--matrix", c_matrix, "inline JSON array, row-major p*p");
    construct->add_flag("--identity", c_identity, "matrix = identity");
    construct->add_flag("--fejer", c_fejer, "Cesaro-averaged trig model (Fejer kernel)");
    construct->add_option("--from", c_from,
                          "discretize a reference copula (partition families only)");
    construct->add_option("--out", c_out, "output model file")->required();
    std::optional<int> c_cesaro_q;
    construct->add_option("--cesaro-q", c_cesaro_q, "aggregation order q for --fejer");

    // ---- validate ----
    auto* validate_cmd = app.add_subcommand("validate", "nonnegativity scan of a model");
    std::string v_model, v_out;
    int v_resolution = 512;
    bool v_no_refine = false;
    validate_cmd->add_option("model", v_model, "model JSON file")->required();
    validate_cmd->add_option("--resolution", v_resolution, "grid resolution (smooth families)");
    validate_cmd->add_flag("--no-refine", v_no_refine, "skip local refinement");
    validate_cmd->add_option("--out", v_out, "rewrite the model with the report attached");

    // ---- measures ----
    auto* measures = app.add_subcommand("measures", "dependence measures of a model");
    std::string m_model;
    measures->add_option("model", m_model, "model JSON file")->required();

    // ---- project ----
    auto* project = app.add_subcommand("project", "L2-project a reference copula onto a family");
    std::string p_target, p_family, p_out;
    std::optional<int> p_harmonics, p_levels, p_cells;
    project->add_option("--target", p_target, "reference descriptor, e.g. clayton:1.0")->required();
    project->add_option("--family", p_family, "family descriptor")->required();
    project->add_option("--harmonics", p_harmonics);
    project->add_option("--levels", p_levels);
    project->add_option("--cells", p_cells);
    project->add_option("--out", p_out, "output model file");

    // ---- star ----
    auto* star_cmd = app.add_subcommand("star", "Markov product of two models");
    std::string s_lhs, s_rhs, s_out;
    star_cmd->add_option("lhs", s_lhs)->required();
    star_cmd->add_option("rhs", s_rhs)->required();
    star_cmd->add_option("--out", s_out, "output model file")->required();

    // ---- sample ----
    auto* sample_cmd = app.add_subcommand("sample", "draw pairs by conditional inversion");
    std::string sa_model, sa_out;
    int sa_n = 1000;
    std::uint64_t sa_seed = 0;
    sample_cmd->add_option("model", sa_model)->required();
    sample_cmd->add_option("-n,--count", sa_n, "number of pairs");
    sample_cmd->add_option("--seed", sa_seed, "RNG seed");
    sample_cmd->add_option("--out", sa_out, "output CSV")->required();

    // ---- estimate ----
    auto* estimate = app.add_subcommand("estimate", "moment estimators from a sample CSV");
    std::string e_family, e_estimator = "a2", e_input, e_out;
    std::optional<int> e_harmonics, e_levels, e_cells;
    estimate->add_option("--family", e_family)->required();
    estimate->add_option("--harmonics", e_harmonics);
    estimate->add_option("--levels", e_levels);
    estimate->add_option("--cells", e_cells);
    estimate->add_option("--estimator", e_estimator, "a1 or a2");
    estimate->add_option("--input", e_input, "sample CSV")->required();
    estimate->add_option("--out", e_out, "report JSON (stdout when omitted)");

    // ---- density-grid ----
    auto* grid = app.add_subcommand("density-grid", "export density values on a uniform lattice");
    std::string g_model, g_out;
    int g_resolution = 101;
    bool g_cdf = false;
    grid->add_option("model", g_model)->required();
    grid->add_option("--resolution", g_resolution, "points per axis");
    grid->add_flag("--cdf", g_cdf, "export the CDF instead of the density");
    grid->add_option("--out", g_out, "output CSV")->required();

    // ---- convergence ----
    auto* conv = app.add_subcommand("convergence", "projection convergence table");
    std::string cv_target, cv_family = "haar", cv_out;
    std::vector<int> cv_plist;
    conv->add_option("--target", cv_target, "reference descriptor")->required();
    conv->add_option("--family", cv_family, "family kind (haar supported)");
    conv->add_option("--p-list", cv_plist, "family sizes")->required()->delimiter(',');
    conv->add_option("--out", cv_out, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    if (construct->parsed()) {
        CopulaModel model = [&]() -> CopulaModel {
            if (c_fejer || c_cesaro_q) {
                const int q = c_cesaro_q.value_or(c_harmonics.value_or(1) + 1);
                return make_fejer_model(q, c_diag_theta.value_or(1.0));
            }
            const FamilyDescriptor desc =
                resolve_descriptor(c_family, c_harmonics, c_levels, c_cells);
            if (!c_from.empty()) {
                if (desc.kind != "checkerboard" && desc.kind != "bernstein")
                    throw std::invalid_argument("--from requires a partition family");
                const PartitionFamily pf = make_partition(
                    partition_kind_from_string(desc.kind), desc.size);
                const Eigen::MatrixXd m = discretize_copula(make_reference(c_from), desc.size);
                return to_copula_model(pf, m);
            }
            OrthonormalFamily family = family_from_descriptor(desc);
            if (c_identity)
                return CopulaModel(family,
                                   Eigen::MatrixXd::Identity(family.size(), family.size()));
            if (!c_matrix.empty())
                return CopulaModel(family, parse_inline_matrix(c_matrix, family.size()));
            return diagonal_model(family, c_diag_theta.value_or(0.0));
        }();
        save_model(model, c_out);
        std::cout << "wrote " << c_out << " (family " << model.family().label() << ", p="
                  << model.family().size() << ")\n";
        return kExitOk;
    }

    if (validate_cmd->parsed()) {
        CopulaModel model = load_model(v_model);
        const ValidationReport report = validate(model, v_resolution, !v_no_refine);
        std::cout << report_to_json(report).dump(2) << "\n";
        if (!v_out.empty()) save_model(model.with_validation(report), v_out);
        return report.verdict == ValidationReport::Verdict::invalid ? kExitInvalidCopula
                                                                    : kExitOk;
    }

    if (measures->parsed()) {
        std::cout << measures_report(load_model(m_model)).dump(2) << "\n";
        return kExitOk;
    }

    if (project->parsed()) {
        const ReferenceCopula target = make_reference(p_target);
        const FamilyDescriptor desc = resolve_descriptor(p_family, p_harmonics, p_levels, p_cells);
        const ProjectionResult result = p_phi(target, family_from_descriptor(desc));
        if (!p_out.empty()) save_model(result.model, p_out);
        std::cout << report_to_json(result.report).dump(2) << "\n";
        if (result.report.verdict != ValidationReport::Verdict::valid) {
            std::cout << "projection of " << target.label() << " is not a copula (min density "
                      << result.report.min_value << ")\n";
            return kExitInvalidCopula;
        }
        return kExitOk;
    }

    if (star_cmd->parsed()) {
        save_model(star(load_model(s_lhs), load_model(s_rhs)), s_out);
        std::cout << "wrote " << s_out << "\n";
        return kExitOk;
    }

    if (sample_cmd->parsed()) {
        CopulaModel model = load_model(sa_model);
        if (!model.validation()) model = validated(model);
        if (model.validation()->verdict != ValidationReport::Verdict::valid) {
            std::cerr << "model is not a valid copula (verdict "
                      << to_string(model.validation()->verdict) << "); refusing to sample\n";
            return kExitInvalidCopula;
        }
        write_sample_csv(sample(model, sa_n, sa_seed), sa_out);
        std::cout << "wrote " << sa_out << " (" << sa_n << " pairs, seed " << sa_seed << ")\n";
        return kExitOk;
    }

    if (estimate->parsed()) {
        const FamilyDescriptor desc = resolve_descriptor(e_family, e_harmonics, e_levels, e_cells);
        OrthonormalFamily family = family_from_descriptor(desc);
        const SampleSet samples = read_sample_csv(e_input);
        EstimationResult result;
        if (e_estimator == "a1")
            result = estimate_a1(samples, family);
        else if (e_estimator == "a2")
            result = estimate_a2(samples, family);
        else
            throw std::invalid_argument("--estimator must be a1 or a2");
        const nlohmann::json report = estimation_report(result, family);
        if (e_out.empty())
            std::cout << report.dump(2) << "\n";
        else {
            std::ofstream out(e_out);
            out << report.dump(2) << "\n";
        }
        return kExitOk;
    }

    if (grid->parsed()) {
        const CopulaModel model = load_model(g_model);
        if (g_cdf)
            write_cdf_grid_csv(model, g_resolution, g_out);
        else
            write_density_grid_csv(model, g_resolution, g_out);
        std::cout << "wrote " << g_out << " (" << g_resolution * g_resolution << " rows)\n";
        return kExitOk;
    }

    if (conv->parsed()) {
        if (cv_family != "haar")
            throw std::invalid_argument("convergence: only the haar family ladder is supported");
        auto builder = [](int p) { return make_haar_family(levels_for_size(p)); };
        for (int p : cv_plist) levels_for_size(p); // reject non powers of 2 up front
        const auto rows = convergence_study(make_reference(cv_target), builder, cv_plist);
        write_convergence_csv(rows, cv_out);
        std::cout << "wrote " << cv_out << " (" << rows.size() << " rows)\n";
        return kExitOk;
    }

    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const orthocop::constraint_violation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
