#pragma once

#include <optional>
#include <string>
#include <vector>

#include "error_norms.hpp"

namespace bsfem {

/// Exact solution bundle: u and its gradient, the bulk load f = -lap u, and a
/// smooth extension of the boundary data tau = dn u + u - lap_Gamma u valid
/// in a neighborhood of the boundary.
struct ManufacturedSolution {
    std::string name;
    ScalarField u;
    VectorField grad_u;
    ScalarField f;
    ScalarField tau;
};

const ManufacturedSolution& registry_lookup(const std::string& name);
std::vector<std::string> registry_names();

struct StudyConfig {
    std::string domain = "disk";
    int order = 1;
    std::string solution = "cubic10";
    std::vector<int> levels = {32, 64, 128, 256};
    double solver_tol = 1e-12;
    int quad_assembly_degree = 5;
    int quad_error_degree = 9;
    bool exact_domain = false;
    bool diagnostics = false;
    std::string output;
};

StudyConfig parse_config(const std::string& path);
/// Applies one `key = value` assignment; throws ConfigError naming the key.
void apply_config_entry(StudyConfig& config, const std::string& key, const std::string& value);
void validate_config(const StudyConfig& config);

struct Diagnostics {
    double boundary_distance_profile = 0.0;
    double normal_discrepancy = 0.0;
    double consistency_residual = 0.0;
};

struct ErrorReportRow {
    int n_boundary = 0;
    double h = 0.0;
    ErrorNorms discrete;
    std::optional<ErrorNorms> exact;
    std::optional<Diagnostics> diagnostics;
};

/// EOC between consecutive rows: log(e_i / e_{i+1}) / log(h_i / h_{i+1});
/// undefined (NaN) when either error sits at the solver noise floor.
struct ConvergenceReport {
    std::vector<ErrorReportRow> rows;
    bool has_exact = false;

    /// Per-column EOC for the step rows[i] -> rows[i+1]; NaN when undefined.
    ErrorNorms eoc(std::size_t i, bool exact_columns = false) const;
};

ConvergenceReport run_convergence_study(const StudyConfig& config);

enum class ReportFormat { Csv, Markdown };
std::string render_report(const ConvergenceReport& report, ReportFormat format);
void emit_report(const ConvergenceReport& report, ReportFormat format, const std::string& path);

/// Assembles and solves one level. Exposed for the solve subcommand.
struct SolveResult {
    SolutionField field;
    int cg_iterations = 0;
    double cg_residual = 0.0;
};
SolveResult solve_level(const Mesh& mesh, const ManufacturedSolution& solution,
                        const StudyConfig& config);

QuadratureRule assembly_triangle_rule(const StudyConfig& config);
QuadratureRule assembly_edge_rule(const StudyConfig& config);
QuadratureRule error_triangle_rule(const StudyConfig& config);
QuadratureRule error_edge_rule(const StudyConfig& config);

}  // namespace bsfem
