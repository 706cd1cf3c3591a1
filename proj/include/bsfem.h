/* bsfem - bulk-surface finite element solver for the generalized Robin
 * problem on smooth 2D domains (isoparametric P1/P2 elements).
 *
 * C API over the C++ core: opaque handles, integer status codes, and a
 * thread-local error message. Every constructor-style call writes its handle
 * through an out parameter and returns BSFEM_OK on success; handles are
 * released with the matching *_free function. */

#ifndef BSFEM_H
#define BSFEM_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bsfem_status {
    BSFEM_OK = 0,
    BSFEM_ERR_INVALID_ARGUMENT = 1,
    BSFEM_ERR_OUTSIDE_TUBE = 2,
    BSFEM_ERR_NON_CONVERGENCE = 3,
    BSFEM_ERR_DEGENERATE_GRADIENT = 4,
    BSFEM_ERR_MESH_QUALITY = 5,
    BSFEM_ERR_PARSE = 6,
    BSFEM_ERR_INVARIANT = 7,
    BSFEM_ERR_TOPOLOGY = 8,
    BSFEM_ERR_SINGULAR_JACOBIAN = 9,
    BSFEM_ERR_DEGENERATE_FACE = 10,
    BSFEM_ERR_QUADRATURE_TOO_WEAK = 11,
    BSFEM_ERR_INDEX_OUT_OF_RANGE = 12,
    BSFEM_ERR_DIMENSION_MISMATCH = 13,
    BSFEM_ERR_MAX_ITERATIONS = 14,
    BSFEM_ERR_INDEFINITE_MATRIX = 15,
    BSFEM_ERR_SINGULAR_GRAM = 16,
    BSFEM_ERR_EVALUATION = 17,
    BSFEM_ERR_OUTSIDE_SKIN = 18,
    BSFEM_ERR_MAP_INVERSION = 19,
    BSFEM_ERR_UNKNOWN_SOLUTION = 20,
    BSFEM_ERR_CONFIG = 21,
    BSFEM_ERR_IO = 22,
    BSFEM_ERR_INTERNAL = 23
} bsfem_status;

/* Message for the most recent failure on this thread; empty string when the
 * last call succeeded. The pointer stays valid until the next API call. */
const char* bsfem_last_error(void);
const char* bsfem_status_name(bsfem_status status);

/* ------------------------------------------------------------------ mesh */

typedef struct bsfem_mesh bsfem_mesh;

typedef struct bsfem_mesh_info {
    int order;
    int node_count;
    int element_count;
    int boundary_face_count;
    int boundary_vertex_count;
    double h;                /* max straight-skeleton edge length */
    double min_angle_deg;
    double regularity_ratio; /* max h_T / inradius_T */
} bsfem_mesh_info;

bsfem_status bsfem_mesh_generate_disk(int n_boundary, int order, bsfem_mesh** out);
bsfem_status bsfem_mesh_load(const char* path, bsfem_mesh** out);
bsfem_status bsfem_mesh_write(const bsfem_mesh* mesh, const char* path);
bsfem_status bsfem_mesh_info_get(const bsfem_mesh* mesh, bsfem_mesh_info* out);
void bsfem_mesh_free(bsfem_mesh* mesh);

/* ----------------------------------------------------------------- solve */

typedef struct bsfem_solution bsfem_solution;

/* Assembles and solves the generalized Robin problem for a registered
 * manufactured solution ("constant", "cubic10"). Pass solver_tol <= 0 and
 * quad degrees <= 0 for the defaults (1e-12, degree 5 assembly, degree 9
 * error quadrature). */
bsfem_status bsfem_solve(const bsfem_mesh* mesh, const char* solution_name, double solver_tol,
                         int quad_assembly_degree, bsfem_solution** out);
bsfem_status bsfem_solution_value(const bsfem_solution* solution, int node_id, double* out);
/* Writes one "id value" line per node. */
bsfem_status bsfem_solution_write(const bsfem_solution* solution, const char* path);
/* The four discrete error norms against the manufactured solution:
 * out_norms = { grad_L2_Omega_h, grad_L2_Gamma_h, L2_Omega_h, L2_Gamma_h }. */
bsfem_status bsfem_solution_error_norms(const bsfem_solution* solution, int quad_error_degree,
                                        double out_norms[4]);
void bsfem_solution_free(bsfem_solution* solution);

/* Dumps the assembled matrix as ASCII "row col value" triplets. */
bsfem_status bsfem_matrix_dump(const bsfem_mesh* mesh, const char* solution_name,
                               int quad_assembly_degree, const char* path);

/* ----------------------------------------------------------------- study */

typedef struct bsfem_config bsfem_config;
typedef struct bsfem_report bsfem_report;

bsfem_status bsfem_config_create(bsfem_config** out);
bsfem_status bsfem_config_load(const char* path, bsfem_config** out);
/* Same keys as the config file: domain, order, solution, levels, solver_tol,
 * quad_assembly_degree, quad_error_degree, exact_domain, output. */
bsfem_status bsfem_config_set(bsfem_config* config, const char* key, const char* value);
/* Current value of a key, rendered as text (levels as a comma list). */
bsfem_status bsfem_config_get(const bsfem_config* config, const char* key, char* buffer,
                              int buffer_size);
bsfem_status bsfem_config_set_diagnostics(bsfem_config* config, int enabled);
void bsfem_config_free(bsfem_config* config);

typedef struct bsfem_report_row {
    int n_boundary;
    double h;
    double err[4];        /* grad_L2_Omega_h, grad_L2_Gamma_h, L2_Omega_h, L2_Gamma_h */
    double eoc[4];        /* NaN when undefined (step from the previous row) */
    int has_exact;
    double err_exact[4];
    double eoc_exact[4];
    int has_diagnostics;
    double boundary_distance_profile;
    double normal_discrepancy;
    double consistency_residual;
} bsfem_report_row;

bsfem_status bsfem_study_run(const bsfem_config* config, bsfem_report** out);
bsfem_status bsfem_report_row_count(const bsfem_report* report, int* out);
bsfem_status bsfem_report_row_get(const bsfem_report* report, int index, bsfem_report_row* out);
/* format is "csv" or "markdown"; the rendered text is heap-allocated and
 * must be released with bsfem_string_free. */
bsfem_status bsfem_report_render(const bsfem_report* report, const char* format, char** out);
bsfem_status bsfem_report_emit(const bsfem_report* report, const char* format, const char* path);
void bsfem_report_free(bsfem_report* report);
void bsfem_string_free(char* text);

/* ------------------------------------------------------------ diagnostics */

typedef struct bsfem_diagnostics {
    double boundary_distance_profile; /* max |d| over boundary quadrature points */
    double normal_discrepancy;        /* max |n(pi(x)) - n_h(x)| */
    double consistency_residual;      /* sqrt(r^T diag(A)^-1 r) for the exact solution */
} bsfem_diagnostics;

bsfem_status bsfem_diagnose(int n_boundary, int order, const char* solution_name,
                            bsfem_diagnostics* out);

#ifdef __cplusplus
}
#endif

#endif /* BSFEM_H */
