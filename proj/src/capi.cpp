#include "bsfem.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "error_norms.hpp"
#include "study.hpp"

namespace {

thread_local std::string g_last_error;

bsfem_status map_code(bsfem::ErrorCode code) {
    using bsfem::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return BSFEM_ERR_INVALID_ARGUMENT;
        case ErrorCode::OutsideTube: return BSFEM_ERR_OUTSIDE_TUBE;
        case ErrorCode::NonConvergence: return BSFEM_ERR_NON_CONVERGENCE;
        case ErrorCode::DegenerateGradient: return BSFEM_ERR_DEGENERATE_GRADIENT;
        case ErrorCode::MeshQualityFailure: return BSFEM_ERR_MESH_QUALITY;
        case ErrorCode::ParseError: return BSFEM_ERR_PARSE;
        case ErrorCode::InvariantViolation: return BSFEM_ERR_INVARIANT;
        case ErrorCode::TopologyError: return BSFEM_ERR_TOPOLOGY;
        case ErrorCode::SingularJacobian: return BSFEM_ERR_SINGULAR_JACOBIAN;
        case ErrorCode::DegenerateFace: return BSFEM_ERR_DEGENERATE_FACE;
        case ErrorCode::QuadratureTooWeak: return BSFEM_ERR_QUADRATURE_TOO_WEAK;
        case ErrorCode::IndexOutOfRange: return BSFEM_ERR_INDEX_OUT_OF_RANGE;
        case ErrorCode::DimensionMismatch: return BSFEM_ERR_DIMENSION_MISMATCH;
        case ErrorCode::MaxIterationsExceeded: return BSFEM_ERR_MAX_ITERATIONS;
        case ErrorCode::IndefiniteMatrix: return BSFEM_ERR_INDEFINITE_MATRIX;
        case ErrorCode::SingularGram: return BSFEM_ERR_SINGULAR_GRAM;
        case ErrorCode::EvaluationFailure: return BSFEM_ERR_EVALUATION;
        case ErrorCode::OutsideSkin: return BSFEM_ERR_OUTSIDE_SKIN;
        case ErrorCode::MapInversionFailure: return BSFEM_ERR_MAP_INVERSION;
        case ErrorCode::UnknownSolution: return BSFEM_ERR_UNKNOWN_SOLUTION;
        case ErrorCode::ConfigError: return BSFEM_ERR_CONFIG;
        case ErrorCode::IoError: return BSFEM_ERR_IO;
    }
    return BSFEM_ERR_INTERNAL;
}

template <typename Fn>
bsfem_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return BSFEM_OK;
    } catch (const bsfem::Error& err) {
        g_last_error = err.what();
        return map_code(err.code());
    } catch (const std::exception& err) {
        g_last_error = err.what();
        return BSFEM_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return BSFEM_ERR_INTERNAL;
    }
}

bsfem_status invalid(const char* message) {
    g_last_error = message;
    return BSFEM_ERR_INVALID_ARGUMENT;
}

bsfem::StudyConfig solve_config(double solver_tol, int quad_assembly_degree,
                                int quad_error_degree) {
    bsfem::StudyConfig config;
    if (solver_tol > 0.0) config.solver_tol = solver_tol;
    if (quad_assembly_degree > 0) config.quad_assembly_degree = quad_assembly_degree;
    if (quad_error_degree > 0) config.quad_error_degree = quad_error_degree;
    return config;
}

}  // namespace

struct bsfem_mesh {
    bsfem::Mesh mesh;
};

struct bsfem_solution {
    bsfem::Mesh mesh;  // owns a copy so the handle is self-contained
    std::string solution_name;
    std::vector<double> coefficients;
};

struct bsfem_config {
    bsfem::StudyConfig config;
};

struct bsfem_report {
    bsfem::ConvergenceReport report;
};

extern "C" {

const char* bsfem_last_error(void) { return g_last_error.c_str(); }

const char* bsfem_status_name(bsfem_status status) {
    switch (status) {
        case BSFEM_OK: return "ok";
        case BSFEM_ERR_INVALID_ARGUMENT: return "invalid argument";
        case BSFEM_ERR_OUTSIDE_TUBE: return "outside tube";
        case BSFEM_ERR_NON_CONVERGENCE: return "non-convergence";
        case BSFEM_ERR_DEGENERATE_GRADIENT: return "degenerate gradient";
        case BSFEM_ERR_MESH_QUALITY: return "mesh quality failure";
        case BSFEM_ERR_PARSE: return "parse error";
        case BSFEM_ERR_INVARIANT: return "invariant violation";
        case BSFEM_ERR_TOPOLOGY: return "topology error";
        case BSFEM_ERR_SINGULAR_JACOBIAN: return "singular jacobian";
        case BSFEM_ERR_DEGENERATE_FACE: return "degenerate face";
        case BSFEM_ERR_QUADRATURE_TOO_WEAK: return "quadrature too weak";
        case BSFEM_ERR_INDEX_OUT_OF_RANGE: return "index out of range";
        case BSFEM_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
        case BSFEM_ERR_MAX_ITERATIONS: return "max iterations exceeded";
        case BSFEM_ERR_INDEFINITE_MATRIX: return "indefinite matrix";
        case BSFEM_ERR_SINGULAR_GRAM: return "singular gram matrix";
        case BSFEM_ERR_EVALUATION: return "evaluation failure";
        case BSFEM_ERR_OUTSIDE_SKIN: return "outside skin";
        case BSFEM_ERR_MAP_INVERSION: return "map inversion failure";
        case BSFEM_ERR_UNKNOWN_SOLUTION: return "unknown solution";
        case BSFEM_ERR_CONFIG: return "config error";
        case BSFEM_ERR_IO: return "io error";
        case BSFEM_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

bsfem_status bsfem_mesh_generate_disk(int n_boundary, int order, bsfem_mesh** out) {
    if (!out) return invalid("null output handle");
    *out = nullptr;
    return guarded([&] { *out = new bsfem_mesh{bsfem::generate_disk_mesh(n_boundary, order)}; });
}

bsfem_status bsfem_mesh_load(const char* path, bsfem_mesh** out) {
    if (!out || !path) return invalid("null argument");
    *out = nullptr;
    return guarded([&] { *out = new bsfem_mesh{bsfem::load_mesh(path)}; });
}

bsfem_status bsfem_mesh_write(const bsfem_mesh* mesh, const char* path) {
    if (!mesh || !path) return invalid("null argument");
    return guarded([&] { bsfem::write_mesh(mesh->mesh, path); });
}

bsfem_status bsfem_mesh_info_get(const bsfem_mesh* mesh, bsfem_mesh_info* out) {
    if (!mesh || !out) return invalid("null argument");
    return guarded([&] {
        const bsfem::MeshStats stats = mesh->mesh.stats();
        out->order = mesh->mesh.order();
        out->node_count = mesh->mesh.node_count();
        out->element_count = mesh->mesh.element_count();
        out->boundary_face_count = static_cast<int>(mesh->mesh.boundary_faces().size());
        out->boundary_vertex_count = static_cast<int>(mesh->mesh.boundary_faces().size());
        out->h = stats.h;
        out->min_angle_deg = stats.min_angle_deg;
        out->regularity_ratio = stats.regularity_ratio;
    });
}

void bsfem_mesh_free(bsfem_mesh* mesh) { delete mesh; }

bsfem_status bsfem_solve(const bsfem_mesh* mesh, const char* solution_name, double solver_tol,
                         int quad_assembly_degree, bsfem_solution** out) {
    if (!mesh || !solution_name || !out) return invalid("null argument");
    *out = nullptr;
    return guarded([&] {
        const bsfem::StudyConfig config = solve_config(solver_tol, quad_assembly_degree, 0);
        const bsfem::ManufacturedSolution& solution = bsfem::registry_lookup(solution_name);
        const bsfem::SolveResult solved = bsfem::solve_level(mesh->mesh, solution, config);
        *out = new bsfem_solution{mesh->mesh, solution_name, solved.field.coefficients};
    });
}

bsfem_status bsfem_solution_value(const bsfem_solution* solution, int node_id, double* out) {
    if (!solution || !out) return invalid("null argument");
    return guarded([&] {
        if (node_id < 0 || node_id >= static_cast<int>(solution->coefficients.size()))
            throw bsfem::Error(bsfem::ErrorCode::IndexOutOfRange, "node id out of range");
        *out = solution->coefficients[static_cast<std::size_t>(node_id)];
    });
}

bsfem_status bsfem_solution_write(const bsfem_solution* solution, const char* path) {
    if (!solution || !path) return invalid("null argument");
    return guarded([&] {
        std::ofstream file(path);
        if (!file)
            throw bsfem::Error(bsfem::ErrorCode::IoError,
                               "cannot open " + std::string(path) + " for writing");
        char buf[64];
        for (std::size_t i = 0; i < solution->coefficients.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%zu %.17g\n", i, solution->coefficients[i]);
            file << buf;
        }
        if (!file) throw bsfem::Error(bsfem::ErrorCode::IoError, "write failed");
    });
}

bsfem_status bsfem_solution_error_norms(const bsfem_solution* solution, int quad_error_degree,
                                        double out_norms[4]) {
    if (!solution || !out_norms) return invalid("null argument");
    return guarded([&] {
        const bsfem::StudyConfig config = solve_config(0.0, 0, quad_error_degree);
        const bsfem::ManufacturedSolution& manufactured =
            bsfem::registry_lookup(solution->solution_name);
        const bsfem::SolutionField field(solution->mesh, solution->coefficients);
        const bsfem::ErrorNorms norms = bsfem::error_norms_discrete(
            solution->mesh, field, manufactured.u, manufactured.grad_u,
            bsfem::error_triangle_rule(config), bsfem::error_edge_rule(config));
        out_norms[0] = norms.grad_l2_omega;
        out_norms[1] = norms.grad_l2_gamma;
        out_norms[2] = norms.l2_omega;
        out_norms[3] = norms.l2_gamma;
    });
}

void bsfem_solution_free(bsfem_solution* solution) { delete solution; }

bsfem_status bsfem_matrix_dump(const bsfem_mesh* mesh, const char* solution_name,
                               int quad_assembly_degree, const char* path) {
    if (!mesh || !solution_name || !path) return invalid("null argument");
    return guarded([&] {
        const bsfem::StudyConfig config = solve_config(0.0, quad_assembly_degree, 0);
        const bsfem::ManufacturedSolution& solution = bsfem::registry_lookup(solution_name);
        const bsfem::AssembledSystem system =
            bsfem::assemble_system(mesh->mesh, solution.f, solution.tau,
                                   bsfem::assembly_triangle_rule(config),
                                   bsfem::assembly_edge_rule(config));
        std::ofstream file(path);
        if (!file)
            throw bsfem::Error(bsfem::ErrorCode::IoError,
                               "cannot open " + std::string(path) + " for writing");
        char buf[96];
        const auto& offsets = system.matrix.row_offsets();
        const auto& cols = system.matrix.column_indices();
        const auto& values = system.matrix.values();
        for (int row = 0; row < system.matrix.dim(); ++row) {
            for (int k = offsets[static_cast<std::size_t>(row)];
                 k < offsets[static_cast<std::size_t>(row) + 1]; ++k) {
                std::snprintf(buf, sizeof buf, "%d %d %.17g\n", row,
                              cols[static_cast<std::size_t>(k)],
                              values[static_cast<std::size_t>(k)]);
                file << buf;
            }
        }
        if (!file) throw bsfem::Error(bsfem::ErrorCode::IoError, "write failed");
    });
}

bsfem_status bsfem_config_create(bsfem_config** out) {
    if (!out) return invalid("null output handle");
    *out = nullptr;
    return guarded([&] { *out = new bsfem_config{}; });
}

bsfem_status bsfem_config_load(const char* path, bsfem_config** out) {
    if (!out || !path) return invalid("null argument");
    *out = nullptr;
    return guarded([&] { *out = new bsfem_config{bsfem::parse_config(path)}; });
}

bsfem_status bsfem_config_set(bsfem_config* config, const char* key, const char* value) {
    if (!config || !key || !value) return invalid("null argument");
    return guarded([&] { bsfem::apply_config_entry(config->config, key, value); });
}

bsfem_status bsfem_config_get(const bsfem_config* config, const char* key, char* buffer,
                              int buffer_size) {
    if (!config || !key || !buffer || buffer_size <= 0) return invalid("null argument");
    return guarded([&] {
        const bsfem::StudyConfig& c = config->config;
        const std::string k = key;
        std::string value;
        if (k == "domain") value = c.domain;
        else if (k == "order") value = std::to_string(c.order);
        else if (k == "solution") value = c.solution;
        else if (k == "levels") {
            for (std::size_t i = 0; i < c.levels.size(); ++i)
                value += (i ? "," : "") + std::to_string(c.levels[i]);
        } else if (k == "solver_tol") {
            char buf[48];
            std::snprintf(buf, sizeof buf, "%.17g", c.solver_tol);
            value = buf;
        } else if (k == "quad_assembly_degree")
            value = std::to_string(c.quad_assembly_degree);
        else if (k == "quad_error_degree")
            value = std::to_string(c.quad_error_degree);
        else if (k == "exact_domain")
            value = c.exact_domain ? "true" : "false";
        else if (k == "output")
            value = c.output;
        else
            throw bsfem::Error(bsfem::ErrorCode::ConfigError, "config key '" + k + "': unknown key");
        if (static_cast<int>(value.size()) + 1 > buffer_size)
            throw bsfem::Error(bsfem::ErrorCode::InvalidArgument, "buffer too small");
        std::memcpy(buffer, value.c_str(), value.size() + 1);
    });
}

bsfem_status bsfem_config_set_diagnostics(bsfem_config* config, int enabled) {
    if (!config) return invalid("null argument");
    config->config.diagnostics = enabled != 0;
    g_last_error.clear();
    return BSFEM_OK;
}

void bsfem_config_free(bsfem_config* config) { delete config; }

bsfem_status bsfem_study_run(const bsfem_config* config, bsfem_report** out) {
    if (!config || !out) return invalid("null argument");
    *out = nullptr;
    return guarded(
        [&] { *out = new bsfem_report{bsfem::run_convergence_study(config->config)}; });
}

bsfem_status bsfem_report_row_count(const bsfem_report* report, int* out) {
    if (!report || !out) return invalid("null argument");
    *out = static_cast<int>(report->report.rows.size());
    g_last_error.clear();
    return BSFEM_OK;
}

bsfem_status bsfem_report_row_get(const bsfem_report* report, int index, bsfem_report_row* out) {
    if (!report || !out) return invalid("null argument");
    return guarded([&] {
        if (index < 0 || index >= static_cast<int>(report->report.rows.size()))
            throw bsfem::Error(bsfem::ErrorCode::IndexOutOfRange, "row index out of range");
        const bsfem::ErrorReportRow& row =
            report->report.rows[static_cast<std::size_t>(index)];
        std::memset(out, 0, sizeof *out);
        out->n_boundary = row.n_boundary;
        out->h = row.h;
        out->err[0] = row.discrete.grad_l2_omega;
        out->err[1] = row.discrete.grad_l2_gamma;
        out->err[2] = row.discrete.l2_omega;
        out->err[3] = row.discrete.l2_gamma;
        const auto nan = std::nan("");
        bsfem::ErrorNorms eoc{nan, nan, nan, nan};
        if (index > 0) eoc = report->report.eoc(static_cast<std::size_t>(index) - 1);
        out->eoc[0] = eoc.grad_l2_omega;
        out->eoc[1] = eoc.grad_l2_gamma;
        out->eoc[2] = eoc.l2_omega;
        out->eoc[3] = eoc.l2_gamma;
        out->has_exact = row.exact.has_value();
        if (row.exact) {
            out->err_exact[0] = row.exact->grad_l2_omega;
            out->err_exact[1] = row.exact->grad_l2_gamma;
            out->err_exact[2] = row.exact->l2_omega;
            out->err_exact[3] = row.exact->l2_gamma;
            bsfem::ErrorNorms ex{nan, nan, nan, nan};
            if (index > 0)
                ex = report->report.eoc(static_cast<std::size_t>(index) - 1, true);
            out->eoc_exact[0] = ex.grad_l2_omega;
            out->eoc_exact[1] = ex.grad_l2_gamma;
            out->eoc_exact[2] = ex.l2_omega;
            out->eoc_exact[3] = ex.l2_gamma;
        }
        out->has_diagnostics = row.diagnostics.has_value();
        if (row.diagnostics) {
            out->boundary_distance_profile = row.diagnostics->boundary_distance_profile;
            out->normal_discrepancy = row.diagnostics->normal_discrepancy;
            out->consistency_residual = row.diagnostics->consistency_residual;
        }
    });
}

static bsfem_status parse_format(const char* format, bsfem::ReportFormat& out) {
    const std::string f = format;
    if (f == "csv") {
        out = bsfem::ReportFormat::Csv;
        return BSFEM_OK;
    }
    if (f == "markdown") {
        out = bsfem::ReportFormat::Markdown;
        return BSFEM_OK;
    }
    return invalid("format must be 'csv' or 'markdown'");
}

bsfem_status bsfem_report_render(const bsfem_report* report, const char* format, char** out) {
    if (!report || !format || !out) return invalid("null argument");
    *out = nullptr;
    bsfem::ReportFormat fmt;
    if (const bsfem_status s = parse_format(format, fmt); s != BSFEM_OK) return s;
    return guarded([&] {
        const std::string text = bsfem::render_report(report->report, fmt);
        *out = new char[text.size() + 1];
        std::memcpy(*out, text.c_str(), text.size() + 1);
    });
}

bsfem_status bsfem_report_emit(const bsfem_report* report, const char* format, const char* path) {
    if (!report || !format || !path) return invalid("null argument");
    bsfem::ReportFormat fmt;
    if (const bsfem_status s = parse_format(format, fmt); s != BSFEM_OK) return s;
    return guarded([&] { bsfem::emit_report(report->report, fmt, path); });
}

void bsfem_report_free(bsfem_report* report) { delete report; }

void bsfem_string_free(char* text) { delete[] text; }

bsfem_status bsfem_diagnose(int n_boundary, int order, const char* solution_name,
                            bsfem_diagnostics* out) {
    if (!out) return invalid("null argument");
    return guarded([&] {
        const bsfem::StudyConfig config;
        const bsfem::ManufacturedSolution& solution =
            bsfem::registry_lookup(solution_name ? solution_name : "cubic10");
        const bsfem::Mesh mesh = bsfem::generate_disk_mesh(n_boundary, order);
        const bsfem::DomainGeometry domain = bsfem::DomainGeometry::unit_disk();
        const bsfem::QuadratureRule tri = bsfem::error_triangle_rule(config);
        const bsfem::QuadratureRule edge = bsfem::error_edge_rule(config);
        out->boundary_distance_profile = bsfem::boundary_distance_profile(domain, mesh, edge);
        out->normal_discrepancy = bsfem::normal_discrepancy(mesh, domain, edge);
        out->consistency_residual = bsfem::consistency_residual(
            mesh, solution.u, solution.grad_u, solution.f, solution.tau, tri, edge);
    });
}

}  // extern "C"
