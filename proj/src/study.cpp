#include "study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace bsfem {

namespace {

// Errors at or below this floor are solver noise; EOC is meaningless there.
constexpr double kEocNoiseFloor = 1e-9;

std::vector<ManufacturedSolution> build_registry() {
    std::vector<ManufacturedSolution> registry;

    registry.push_back({
        "constant",
        [](Vec2) { return 1.0; },
        [](Vec2) { return Vec2{0.0, 0.0}; },
        [](Vec2) { return 0.0; },
        [](Vec2) { return 1.0; },
    });

    // u = 10 x^2 y on the unit disk. lap u = 20 y, so f = -20 y. On the
    // circle, with u(theta) = 10 cos^2(theta) sin(theta):
    //   tau = dr u + u - u'' = sin(theta) (130 cos^2(theta) - 20),
    // extended off the circle as a function of theta alone.
    registry.push_back({
        "cubic10",
        [](Vec2 p) { return 10.0 * p.x * p.x * p.y; },
        [](Vec2 p) { return Vec2{20.0 * p.x * p.y, 10.0 * p.x * p.x}; },
        [](Vec2 p) { return -20.0 * p.y; },
        [](Vec2 p) {
            const double theta = std::atan2(p.y, p.x);
            const double c = std::cos(theta);
            return std::sin(theta) * (130.0 * c * c - 20.0);
        },
    });

    return registry;
}

const std::vector<ManufacturedSolution>& registry() {
    static const std::vector<ManufacturedSolution> entries = build_registry();
    return entries;
}

double eoc_value(double coarse, double fine, double h_coarse, double h_fine) {
    if (coarse <= kEocNoiseFloor || fine <= kEocNoiseFloor)
        return std::numeric_limits<double>::quiet_NaN();
    return std::log(coarse / fine) / std::log(h_coarse / h_fine);
}

std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void require_finite(const ErrorNorms& norms) {
    for (double v : {norms.grad_l2_omega, norms.grad_l2_gamma, norms.l2_omega, norms.l2_gamma})
        if (!(std::isfinite(v) && v >= 0.0))
            throw Error(ErrorCode::InvariantViolation, "error norm not finite and non-negative");
}

std::string format_eoc(double v) { return std::isnan(v) ? std::string("-") : format_number(v); }

}  // namespace

const ManufacturedSolution& registry_lookup(const std::string& name) {
    for (const auto& entry : registry())
        if (entry.name == name) return entry;
    throw Error(ErrorCode::UnknownSolution, "unknown solution '" + name + "'");
}

std::vector<std::string> registry_names() {
    std::vector<std::string> names;
    for (const auto& entry : registry()) names.push_back(entry.name);
    return names;
}

void apply_config_entry(StudyConfig& config, const std::string& key, const std::string& value) {
    auto fail = [&key](const std::string& reason) {
        throw Error(ErrorCode::ConfigError, "config key '" + key + "': " + reason);
    };
    auto parse_int = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(s, &used);
            if (used != s.size()) fail("not an integer: " + s);
            return v;
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            fail("not an integer: " + s);
        }
        return 0;
    };

    if (key == "domain") {
        config.domain = value;
    } else if (key == "order") {
        config.order = parse_int(value);
    } else if (key == "solution") {
        config.solution = value;
    } else if (key == "levels") {
        std::vector<int> levels;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto begin = item.find_first_not_of(" \t");
            if (begin == std::string::npos) fail("empty level entry");
            const auto end = item.find_last_not_of(" \t");
            levels.push_back(parse_int(item.substr(begin, end - begin + 1)));
        }
        if (levels.empty()) fail("no levels given");
        config.levels = levels;
    } else if (key == "solver_tol") {
        try {
            config.solver_tol = std::stod(value);
        } catch (const std::exception&) {
            fail("not a number: " + value);
        }
    } else if (key == "quad_assembly_degree") {
        config.quad_assembly_degree = parse_int(value);
    } else if (key == "quad_error_degree") {
        config.quad_error_degree = parse_int(value);
    } else if (key == "exact_domain") {
        if (value == "true")
            config.exact_domain = true;
        else if (value == "false")
            config.exact_domain = false;
        else
            fail("expected true or false");
    } else if (key == "output") {
        config.output = value;
    } else {
        fail("unknown key");
    }
}

void validate_config(const StudyConfig& config) {
    auto fail = [](const std::string& key, const std::string& reason) {
        throw Error(ErrorCode::ConfigError, "config key '" + key + "': " + reason);
    };
    if (config.domain != "disk") fail("domain", "only 'disk' is supported");
    if (config.order != 1 && config.order != 2) fail("order", "must be 1 or 2");
    bool known = false;
    for (const auto& name : registry_names()) known = known || name == config.solution;
    if (!known) fail("solution", "'" + config.solution + "' is not registered");
    if (config.levels.empty()) fail("levels", "must not be empty");
    for (std::size_t i = 0; i < config.levels.size(); ++i) {
        if (config.levels[i] < 8) fail("levels", "each level needs >= 8 boundary nodes");
        if (i > 0 && config.levels[i] <= config.levels[i - 1])
            fail("levels", "not strictly increasing");
    }
    if (config.solver_tol <= 0.0) fail("solver_tol", "must be positive");
    if (config.quad_assembly_degree < 2 * config.order + 1)
        fail("quad_assembly_degree", "must be at least 2k + 1");
    if (config.quad_error_degree < 7) fail("quad_error_degree", "must be at least 7");
}

StudyConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config file " + path);
    StudyConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ConfigError,
                        "config line " + std::to_string(line_no) + ": expected 'key = value'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error(ErrorCode::ConfigError,
                        "config line " + std::to_string(line_no) + ": empty key or value");
        apply_config_entry(config, key, value);
    }
    validate_config(config);
    return config;
}

QuadratureRule assembly_triangle_rule(const StudyConfig& config) {
    return QuadratureRule::triangle(config.quad_assembly_degree);
}

QuadratureRule assembly_edge_rule(const StudyConfig& config) {
    const int points = std::max(5, (config.quad_assembly_degree + 2) / 2);
    return QuadratureRule::edge_gauss(points);
}

QuadratureRule error_triangle_rule(const StudyConfig& config) {
    return QuadratureRule::triangle(config.quad_error_degree);
}

QuadratureRule error_edge_rule(const StudyConfig& config) {
    const int points = std::max(7, (config.quad_error_degree + 2) / 2);
    return QuadratureRule::edge_gauss(points);
}

SolveResult solve_level(const Mesh& mesh, const ManufacturedSolution& solution,
                        const StudyConfig& config) {
    const AssembledSystem system = assemble_system(mesh, solution.f, solution.tau,
                                                   assembly_triangle_rule(config),
                                                   assembly_edge_rule(config));
    CgOptions options;
    options.tol = config.solver_tol;
    options.precond = Preconditioner::Jacobi;
    const CgResult cg = conjugate_gradient(system.matrix, system.rhs, options);
    if (!cg.converged)
        throw Error(ErrorCode::MaxIterationsExceeded,
                    "solver did not reach tolerance " + std::to_string(config.solver_tol));
    SolveResult result{SolutionField(mesh, cg.x), cg.iterations, cg.final_residual};
    return result;
}

ErrorNorms ConvergenceReport::eoc(std::size_t i, bool exact_columns) const {
    const ErrorReportRow& coarse = rows[i];
    const ErrorReportRow& fine = rows[i + 1];
    const ErrorNorms& ec = exact_columns ? *coarse.exact : coarse.discrete;
    const ErrorNorms& ef = exact_columns ? *fine.exact : fine.discrete;
    return {eoc_value(ec.grad_l2_omega, ef.grad_l2_omega, coarse.h, fine.h),
            eoc_value(ec.grad_l2_gamma, ef.grad_l2_gamma, coarse.h, fine.h),
            eoc_value(ec.l2_omega, ef.l2_omega, coarse.h, fine.h),
            eoc_value(ec.l2_gamma, ef.l2_gamma, coarse.h, fine.h)};
}

ConvergenceReport run_convergence_study(const StudyConfig& config) {
    validate_config(config);
    const ManufacturedSolution& solution = registry_lookup(config.solution);
    const DomainGeometry domain = DomainGeometry::unit_disk();

    ConvergenceReport report;
    report.has_exact = config.exact_domain;
    for (const int n : config.levels) {
        try {
            const Mesh mesh = generate_disk_mesh(n, config.order);
            const SolveResult solved = solve_level(mesh, solution, config);
            ErrorReportRow row;
            row.n_boundary = n;
            row.h = mesh.h();
            const QuadratureRule tri = error_triangle_rule(config);
            const QuadratureRule edge = error_edge_rule(config);
            row.discrete = error_norms_discrete(mesh, solved.field, solution.u, solution.grad_u,
                                                tri, edge);
            require_finite(row.discrete);
            if (config.exact_domain) {
                row.exact = error_norms_exact_domain(mesh, solved.field, solution.u,
                                                     solution.grad_u, domain, tri, edge);
                require_finite(*row.exact);
            }
            if (config.diagnostics) {
                Diagnostics diag;
                diag.boundary_distance_profile = boundary_distance_profile(domain, mesh, edge);
                diag.normal_discrepancy = normal_discrepancy(mesh, domain, edge);
                diag.consistency_residual = consistency_residual(
                    mesh, solution.u, solution.grad_u, solution.f, solution.tau, tri, edge);
                row.diagnostics = diag;
            }
            report.rows.push_back(std::move(row));
        } catch (const Error& err) {
            throw Error(err.code(), "level N=" + std::to_string(n) + ": " + err.what());
        }
    }
    return report;
}

std::string render_report(const ConvergenceReport& report, ReportFormat format) {
    if (report.rows.empty())
        throw Error(ErrorCode::InvalidArgument, "render_report: empty report");

    std::vector<std::string> columns = {"N",
                                        "h",
                                        "err_grad_L2_Omega_h",
                                        "err_grad_L2_Gamma_h",
                                        "err_L2_Omega_h",
                                        "err_L2_Gamma_h",
                                        "eoc_grad_Omega",
                                        "eoc_grad_Gamma",
                                        "eoc_L2_Omega",
                                        "eoc_L2_Gamma"};
    if (report.has_exact) {
        columns.insert(columns.end(),
                       {"err_grad_L2_Omega_exact", "err_grad_L2_Gamma_exact", "err_L2_Omega_exact",
                        "err_L2_Gamma_exact", "eoc_grad_Omega_exact", "eoc_grad_Gamma_exact",
                        "eoc_L2_Omega_exact", "eoc_L2_Gamma_exact"});
    }

    std::vector<std::vector<std::string>> cells;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const ErrorReportRow& row = report.rows[i];
        std::vector<std::string> line;
        line.push_back(std::to_string(row.n_boundary));
        line.push_back(format_number(row.h));
        line.push_back(format_number(row.discrete.grad_l2_omega));
        line.push_back(format_number(row.discrete.grad_l2_gamma));
        line.push_back(format_number(row.discrete.l2_omega));
        line.push_back(format_number(row.discrete.l2_gamma));
        const ErrorNorms eoc = (i == 0)
                                   ? ErrorNorms{std::nan(""), std::nan(""), std::nan(""),
                                                std::nan("")}
                                   : report.eoc(i - 1);
        line.push_back(format_eoc(eoc.grad_l2_omega));
        line.push_back(format_eoc(eoc.grad_l2_gamma));
        line.push_back(format_eoc(eoc.l2_omega));
        line.push_back(format_eoc(eoc.l2_gamma));
        if (report.has_exact) {
            if (!row.exact)
                throw Error(ErrorCode::InvalidArgument, "render_report: missing exact norms");
            line.push_back(format_number(row.exact->grad_l2_omega));
            line.push_back(format_number(row.exact->grad_l2_gamma));
            line.push_back(format_number(row.exact->l2_omega));
            line.push_back(format_number(row.exact->l2_gamma));
            const ErrorNorms ex = (i == 0)
                                      ? ErrorNorms{std::nan(""), std::nan(""), std::nan(""),
                                                   std::nan("")}
                                      : report.eoc(i - 1, /*exact_columns=*/true);
            line.push_back(format_eoc(ex.grad_l2_omega));
            line.push_back(format_eoc(ex.grad_l2_gamma));
            line.push_back(format_eoc(ex.l2_omega));
            line.push_back(format_eoc(ex.l2_gamma));
        }
        cells.push_back(std::move(line));
    }

    std::string out;
    if (format == ReportFormat::Csv) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            out += columns[c];
            out += (c + 1 < columns.size()) ? "," : "\n";
        }
        for (const auto& line : cells) {
            for (std::size_t c = 0; c < line.size(); ++c) {
                out += line[c];
                out += (c + 1 < line.size()) ? "," : "\n";
            }
        }
    } else {
        auto add_row = [&out](const std::vector<std::string>& line) {
            out += "|";
            for (const auto& cell : line) {
                out += " ";
                out += cell;
                out += " |";
            }
            out += "\n";
        };
        add_row(columns);
        std::vector<std::string> rule(columns.size(), "---");
        add_row(rule);
        for (const auto& line : cells) add_row(line);
    }
    return out;
}

void emit_report(const ConvergenceReport& report, ReportFormat format, const std::string& path) {
    const std::string text = render_report(report, format);
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace bsfem
