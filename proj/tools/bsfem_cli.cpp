// Command line front end; talks to the solver library through the C API only.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bsfem.h"

namespace {

int fail(bsfem_status status) {
    std::fprintf(stderr, "error: %s: %s\n", bsfem_status_name(status), bsfem_last_error());
    return 1;
}

#define CHECK(call)                                               \
    do {                                                          \
        const bsfem_status status_ = (call);                      \
        if (status_ != BSFEM_OK) return fail(status_);            \
    } while (0)

std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

using config_ptr = std::unique_ptr<bsfem_config, decltype(&bsfem_config_free)>;
using mesh_ptr = std::unique_ptr<bsfem_mesh, decltype(&bsfem_mesh_free)>;
using solution_ptr = std::unique_ptr<bsfem_solution, decltype(&bsfem_solution_free)>;
using report_ptr = std::unique_ptr<bsfem_report, decltype(&bsfem_report_free)>;

int run_mesh(const std::string& domain, int n, int order, const std::string& out_path) {
    if (domain != "disk") {
        std::fprintf(stderr, "error: only --domain disk is supported\n");
        return 1;
    }
    bsfem_mesh* raw = nullptr;
    CHECK(bsfem_mesh_generate_disk(n, order, &raw));
    mesh_ptr mesh(raw, &bsfem_mesh_free);
    CHECK(bsfem_mesh_write(mesh.get(), out_path.c_str()));
    bsfem_mesh_info info;
    CHECK(bsfem_mesh_info_get(mesh.get(), &info));
    std::printf("wrote %s: order %d, %d nodes, %d elements, %d boundary faces, h = %s\n",
                out_path.c_str(), info.order, info.node_count, info.element_count,
                info.boundary_face_count, format_number(info.h).c_str());
    return 0;
}

int run_solve(const std::string& config_path, int n, int order, const std::string& solution_name,
              double tol, const std::string& out_path, const std::string& report_path,
              const std::string& dump_matrix_path) {
    config_ptr config(nullptr, &bsfem_config_free);
    {
        bsfem_config* raw = nullptr;
        if (config_path.empty())
            CHECK(bsfem_config_create(&raw));
        else
            CHECK(bsfem_config_load(config_path.c_str(), &raw));
        config.reset(raw);
    }
    if (order > 0) CHECK(bsfem_config_set(config.get(), "order", std::to_string(order).c_str()));
    if (!solution_name.empty()) CHECK(bsfem_config_set(config.get(), "solution", solution_name.c_str()));
    if (n > 0) CHECK(bsfem_config_set(config.get(), "levels", std::to_string(n).c_str()));
    if (tol > 0.0) CHECK(bsfem_config_set(config.get(), "solver_tol", std::to_string(tol).c_str()));

    // Effective settings after config-file and flag resolution.
    char effective_order[16], effective_solution[128], effective_levels[256], effective_tol[64];
    CHECK(bsfem_config_get(config.get(), "order", effective_order, sizeof effective_order));
    CHECK(bsfem_config_get(config.get(), "solution", effective_solution, sizeof effective_solution));
    CHECK(bsfem_config_get(config.get(), "levels", effective_levels, sizeof effective_levels));
    CHECK(bsfem_config_get(config.get(), "solver_tol", effective_tol, sizeof effective_tol));
    const int level_n = std::atoi(effective_levels);  // first level is the solve target

    bsfem_mesh* raw_mesh = nullptr;
    CHECK(bsfem_mesh_generate_disk(level_n, std::atoi(effective_order), &raw_mesh));
    mesh_ptr mesh(raw_mesh, &bsfem_mesh_free);
    bsfem_solution* raw_solution = nullptr;
    CHECK(bsfem_solve(mesh.get(), effective_solution, std::atof(effective_tol), 0, &raw_solution));
    solution_ptr solution(raw_solution, &bsfem_solution_free);
    if (!out_path.empty()) CHECK(bsfem_solution_write(solution.get(), out_path.c_str()));
    if (!dump_matrix_path.empty())
        CHECK(bsfem_matrix_dump(mesh.get(), effective_solution, 0, dump_matrix_path.c_str()));

    double norms[4];
    CHECK(bsfem_solution_error_norms(solution.get(), 0, norms));
    bsfem_mesh_info info;
    CHECK(bsfem_mesh_info_get(mesh.get(), &info));

    std::string text =
        "N,h,err_grad_L2_Omega_h,err_grad_L2_Gamma_h,err_L2_Omega_h,err_L2_Gamma_h,"
        "eoc_grad_Omega,eoc_grad_Gamma,eoc_L2_Omega,eoc_L2_Gamma\n";
    text += std::to_string(level_n) + "," + format_number(info.h);
    for (double e : norms) text += "," + format_number(e);
    text += ",-,-,-,-\n";
    if (report_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        FILE* f = std::fopen(report_path.c_str(), "w");
        if (!f) {
            std::fprintf(stderr, "error: cannot open %s\n", report_path.c_str());
            return 1;
        }
        std::fputs(text.c_str(), f);
        std::fclose(f);
    }
    return 0;
}

int run_study(const std::string& config_path, bool exact_domain, bool diagnostics,
              const std::string& format, const std::string& out_path, int order,
              const std::string& solution_name, const std::string& levels) {
    config_ptr config(nullptr, &bsfem_config_free);
    {
        bsfem_config* raw = nullptr;
        if (config_path.empty())
            CHECK(bsfem_config_create(&raw));
        else
            CHECK(bsfem_config_load(config_path.c_str(), &raw));
        config.reset(raw);
    }
    if (exact_domain) CHECK(bsfem_config_set(config.get(), "exact_domain", "true"));
    if (diagnostics) CHECK(bsfem_config_set_diagnostics(config.get(), 1));
    if (order > 0) CHECK(bsfem_config_set(config.get(), "order", std::to_string(order).c_str()));
    if (!solution_name.empty()) CHECK(bsfem_config_set(config.get(), "solution", solution_name.c_str()));
    if (!levels.empty()) CHECK(bsfem_config_set(config.get(), "levels", levels.c_str()));

    bsfem_report* raw_report = nullptr;
    CHECK(bsfem_study_run(config.get(), &raw_report));
    report_ptr report(raw_report, &bsfem_report_free);

    if (out_path.empty()) {
        char* text = nullptr;
        CHECK(bsfem_report_render(report.get(), format.c_str(), &text));
        std::fputs(text, stdout);
        bsfem_string_free(text);
    } else {
        CHECK(bsfem_report_emit(report.get(), format.c_str(), out_path.c_str()));
        std::printf("wrote %s\n", out_path.c_str());
    }

    if (diagnostics) {
        int rows = 0;
        CHECK(bsfem_report_row_count(report.get(), &rows));
        for (int i = 0; i < rows; ++i) {
            bsfem_report_row row;
            CHECK(bsfem_report_row_get(report.get(), i, &row));
            if (!row.has_diagnostics) continue;
            std::printf("# diagnostics N=%d boundary_distance_profile=%s normal_discrepancy=%s "
                        "consistency_residual=%s\n",
                        row.n_boundary, format_number(row.boundary_distance_profile).c_str(),
                        format_number(row.normal_discrepancy).c_str(),
                        format_number(row.consistency_residual).c_str());
        }
    }
    return 0;
}

int run_diagnose(int n, int order, const std::string& solution_name) {
    bsfem_diagnostics diag;
    CHECK(bsfem_diagnose(n, order, solution_name.c_str(), &diag));
    std::printf("boundary_distance_profile %s\n",
                format_number(diag.boundary_distance_profile).c_str());
    std::printf("normal_discrepancy %s\n", format_number(diag.normal_discrepancy).c_str());
    std::printf("consistency_residual %s\n", format_number(diag.consistency_residual).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bulk-surface finite element solver for the generalized Robin problem"};
    app.require_subcommand(1);

    auto* mesh_cmd = app.add_subcommand("mesh", "generate a disk mesh and write it to a file");
    std::string mesh_domain = "disk";
    int mesh_n = 32, mesh_order = 1;
    std::string mesh_out;
    mesh_cmd->add_option("--domain", mesh_domain, "domain kind (disk)");
    mesh_cmd->add_option("--n", mesh_n, "boundary vertex count")->required();
    mesh_cmd->add_option("--order", mesh_order, "element order (1 or 2)");
    mesh_cmd->add_option("--out", mesh_out, "output mesh path")->required();

    auto* solve_cmd = app.add_subcommand("solve", "solve one level and report its error norms");
    std::string solve_config, solve_solution, solve_out, solve_report, solve_dump;
    int solve_n = 0, solve_order = 0;
    double solve_tol = 0.0;
    solve_cmd->add_option("--config", solve_config, "config file");
    solve_cmd->add_option("--n", solve_n, "boundary vertex count");
    solve_cmd->add_option("--order", solve_order, "element order (1 or 2)");
    solve_cmd->add_option("--solution", solve_solution, "manufactured solution name");
    solve_cmd->add_option("--tol", solve_tol, "solver tolerance");
    solve_cmd->add_option("--out", solve_out, "write nodal values ('id value' per line)");
    solve_cmd->add_option("--report", solve_report, "write the one-row error report as CSV");
    solve_cmd->add_option("--dump-matrix", solve_dump, "debug dump of the CSR matrix as triplets");

    auto* study_cmd = app.add_subcommand("study", "run a refinement study");
    std::string study_config, study_format = "csv", study_out, study_solution, study_levels;
    int study_order = 0;
    bool study_exact = false, study_diag = false;
    study_cmd->add_option("--config", study_config, "config file");
    study_cmd->add_flag("--exact-domain", study_exact, "also compute exact-domain norms");
    study_cmd->add_flag("--diagnostics", study_diag, "print geometric diagnostics per level");
    study_cmd->add_option("--format", study_format, "csv or markdown");
    study_cmd->add_option("--out", study_out, "output path (stdout when omitted)");
    study_cmd->add_option("--order", study_order, "element order override");
    study_cmd->add_option("--solution", study_solution, "manufactured solution override");
    study_cmd->add_option("--levels", study_levels, "comma-separated level override");

    auto* diagnose_cmd = app.add_subcommand("diagnose", "print geometric diagnostics");
    int diag_n = 32, diag_order = 1;
    std::string diag_solution = "cubic10";
    diagnose_cmd->add_option("--n", diag_n, "boundary vertex count")->required();
    diagnose_cmd->add_option("--order", diag_order, "element order (1 or 2)")->required();
    diagnose_cmd->add_option("--solution", diag_solution, "manufactured solution name");

    CLI11_PARSE(app, argc, argv);

    if (mesh_cmd->parsed()) return run_mesh(mesh_domain, mesh_n, mesh_order, mesh_out);
    if (solve_cmd->parsed())
        return run_solve(solve_config, solve_n, solve_order, solve_solution, solve_tol, solve_out,
                         solve_report, solve_dump);
    if (study_cmd->parsed())
        return run_study(study_config, study_exact, study_diag, study_format, study_out,
                         study_order, study_solution, study_levels);
    if (diagnose_cmd->parsed()) return run_diagnose(diag_n, diag_order, diag_solution);
    return 1;
}
