#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "orthocop/model.hpp"
#include "orthocop/montecarlo.hpp"
#include "orthocop/projection.hpp"

namespace orthocop {

nlohmann::json descriptor_to_json(const FamilyDescriptor& desc);
FamilyDescriptor descriptor_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ValidationReport& report);
ValidationReport report_from_json(const nlohmann::json& j);

/// Model file format: {"family": descriptor, "matrix": row-major p*p array,
/// "validation": optional report}. Loading re-derives the family from its
/// descriptor; malformed files raise std::invalid_argument naming the field.
nlohmann::json model_to_json(const CopulaModel& model);
CopulaModel model_from_json(const nlohmann::json& j);

void save_model(const CopulaModel& model, const std::filesystem::path& path);
CopulaModel load_model(const std::filesystem::path& path);

/// Dependence-measure report: rho/tau by both routes plus the tail profile at
/// u = 1 - 10^-k, k = 2..6.
nlohmann::json measures_report(const CopulaModel& model);

/// Estimation report: matrix, estimator kind, n, family, and the validation
/// verdict of the implied model (or the constraint violation preventing one).
nlohmann::json estimation_report(const EstimationResult& result, const OrthonormalFamily& family);

/// CSV with header "u,v", one pair per row, round-trip double formatting.
void write_sample_csv(const SampleSet& samples, const std::filesystem::path& path);
SampleSet read_sample_csv(const std::filesystem::path& path);

/// CSV with header "u,v,value", row-major over the uniform (i/(r-1), j/(r-1))
/// lattice, r*r data rows.
void write_density_grid_csv(const CopulaModel& model, int resolution,
                            const std::filesystem::path& path);
void write_cdf_grid_csv(const CopulaModel& model, int resolution,
                        const std::filesystem::path& path);

/// CSV with header "p,l2_error,rho_model,rho_target,rho_gap".
void write_convergence_csv(const std::vector<ConvergenceRow>& rows,
                           const std::filesystem::path& path);

} // namespace orthocop
