/* C interface to the bispec core library.
 *
 * Every object is an opaque handle created by a bispec_*_create-style call
 * and released with the matching *_free. Fallible calls return a
 * bispec_status; on failure bispec_last_error() describes the problem (the
 * message is per thread and stays valid until the next failing call on that
 * thread). Strings handed out through char** parameters are heap-allocated
 * and must be released with bispec_string_free.
 */
#ifndef BISPEC_BISPEC_H
#define BISPEC_BISPEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BISPEC_BUILDING)
#    define BISPEC_API __declspec(dllexport)
#  else
#    define BISPEC_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__) && __GNUC__ >= 4
#  define BISPEC_API __attribute__((visibility("default")))
#else
#  define BISPEC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Resource guards, mirrored from the core. */
#define BISPEC_MAX_TORUS_GRID 512
#define BISPEC_MAX_ICOSPHERE_LEVEL 7
#define BISPEC_MAX_CIRCLE_SEGMENTS (1 << 20)
#define BISPEC_MAX_DENSE_ORDER 3000
#define BISPEC_MAX_ITERATIVE_ORDER 300000

typedef enum bispec_status {
    BISPEC_OK = 0,
    BISPEC_ERR_INVALID_ARGUMENT = 1,
    BISPEC_ERR_DEGENERATE_MESH = 2,
    BISPEC_ERR_RESOURCE_LIMIT = 3,
    BISPEC_ERR_NO_CONVERGENCE = 4,
    BISPEC_ERR_IO = 5,
    BISPEC_ERR_INTERNAL = 6
} bispec_status;

typedef enum bispec_problem {
    BISPEC_LAPLACE = 0,
    BISPEC_BILAPLACE = 1,
    BISPEC_BUCKLING = 2
} bispec_problem;

typedef enum bispec_mass_mode {
    BISPEC_MASS_CONSISTENT = 0,
    BISPEC_MASS_LUMPED = 1
} bispec_mass_mode;

typedef enum bispec_solver_mode {
    BISPEC_SOLVER_AUTO = 0,
    BISPEC_SOLVER_DENSE = 1,
    BISPEC_SOLVER_ITERATIVE = 2
} bispec_solver_mode;

typedef enum bispec_bilaplace_method {
    BISPEC_OPERATOR_SQUARE = 0,
    BISPEC_MIXED = 1
} bispec_bilaplace_method;

typedef enum bispec_study_quantity {
    BISPEC_STUDY_LAMBDA1 = 0,
    BISPEC_STUDY_BILAPLACE_OPSQUARE = 1,
    BISPEC_STUDY_BILAPLACE_MIXED = 2,
    BISPEC_STUDY_BUCKLING1 = 3,
    BISPEC_STUDY_TAKAHASHI = 4
} bispec_study_quantity;

typedef struct bispec_surface bispec_surface;
typedef struct bispec_spectrum bispec_spectrum;
typedef struct bispec_mesh bispec_mesh;
typedef struct bispec_operators bispec_operators;
typedef struct bispec_eigen_result bispec_eigen_result;
typedef struct bispec_report bispec_report;

typedef struct bispec_solver_options {
    bispec_solver_mode mode;
    double tol;        /* relative residual bound per eigenpair */
    int max_restarts;
    int krylov_dim;    /* 0 picks a default from the pair count */
    uint64_t seed;
} bispec_solver_options;

typedef struct bispec_numeric_options {
    int grid;          /* torus lattice size */
    int levels;        /* icosphere subdivisions */
    int segments;      /* circle segments */
    int count;         /* eigenpairs per problem, kernel included */
    double tol;        /* relative tolerance on continuum targets */
    double slack;      /* slack on discrete identities */
    double takahashi_tol;
    bispec_solver_options solver;
} bispec_numeric_options;

typedef struct bispec_study_options {
    int base;          /* base resolution: grid, segments or icosphere level */
    int levels;        /* refinement levels, >= 3 */
    bispec_study_quantity quantity;
    int count;
    bispec_solver_options solver;
} bispec_study_options;

typedef struct bispec_mesh_info {
    int dim;
    int ambient_dim;
    int64_t vertices;
    int64_t simplices;
    int64_t euler_characteristic;
    double h_max;
    double h_min;
    double total_measure;
    double quality_min;
} bispec_mesh_info;

typedef struct bispec_check {
    const char* name;      /* owned by the report */
    const char* claim_ref; /* owned by the report */
    double measured;
    double expected;
    double tolerance;
    int pass;
    int expected_failure;
} bispec_check;

BISPEC_API const char* bispec_version(void);
BISPEC_API const char* bispec_last_error(void);
/* Best residuals carried by the last BISPEC_ERR_NO_CONVERGENCE on this thread. */
BISPEC_API const double* bispec_last_best_residuals(size_t* count);
BISPEC_API void bispec_string_free(char* s);

BISPEC_API void bispec_solver_options_default(bispec_solver_options* out);
BISPEC_API void bispec_numeric_options_default(bispec_numeric_options* out);
BISPEC_API void bispec_study_options_default(bispec_study_options* out);

/* name is "laplace", "bilaplace" or "buckling" */
BISPEC_API bispec_status bispec_problem_from_string(const char* name, bispec_problem* out);
/* name is "lambda1", "Lambda1-opsquare", "Lambda1-mixed", "Gamma1" or "takahashi" */
BISPEC_API bispec_status bispec_study_quantity_from_string(const char* name, bispec_study_quantity* out);

/* ---- surfaces ---- */
BISPEC_API bispec_status bispec_surface_great_sphere(int n, bispec_surface** out);
BISPEC_API bispec_status bispec_surface_clifford(int p, int q, bispec_surface** out);
/* S^p(r1) x S^q(r2) with r1^2 = r1_sq and r2^2 = 1 - r1_sq */
BISPEC_API bispec_status bispec_surface_product(int p, int q, double r1_sq, bispec_surface** out);
BISPEC_API bispec_status bispec_surface_from_json(const char* json, bispec_surface** out);
BISPEC_API bispec_status bispec_surface_to_json(const bispec_surface* s, char** out);
BISPEC_API bispec_status bispec_surface_label(const bispec_surface* s, char** out);
BISPEC_API int bispec_surface_dimension(const bispec_surface* s);
BISPEC_API int bispec_surface_is_minimal(const bispec_surface* s);
BISPEC_API void bispec_surface_free(bispec_surface* s);

/* ---- exact spectra ---- */
/* cutoff bounds the Laplace eigenvalues the spectrum is built from; <= 0
 * picks one that covers the first nonzero eigenvalue */
BISPEC_API bispec_status bispec_spectrum_analytic(const bispec_surface* s, bispec_problem problem, double cutoff,
    bispec_spectrum** out);
BISPEC_API size_t bispec_spectrum_size(const bispec_spectrum* sp);
BISPEC_API bispec_status bispec_spectrum_entry(const bispec_spectrum* sp, size_t index, int64_t* num, int64_t* den,
    int64_t* multiplicity);
BISPEC_API bispec_status bispec_spectrum_to_json(const bispec_spectrum* sp, char** out);
BISPEC_API bispec_status bispec_spectrum_to_csv(const bispec_spectrum* sp, char** out);
BISPEC_API void bispec_spectrum_free(bispec_spectrum* sp);

/* ---- meshes ---- */
BISPEC_API bispec_status bispec_mesh_circle(int segments, bispec_mesh** out);
BISPEC_API bispec_status bispec_mesh_torus(const bispec_surface* s, int grid, bispec_mesh** out);
BISPEC_API bispec_status bispec_mesh_icosphere(int levels, bispec_mesh** out);
/* generator chosen from the surface: circle, icosphere or lattice torus */
BISPEC_API bispec_status bispec_mesh_for(const bispec_surface* s, int resolution, bispec_mesh** out);
BISPEC_API bispec_status bispec_mesh_refine(const bispec_mesh* m, bispec_mesh** out);
BISPEC_API bispec_status bispec_mesh_info_get(const bispec_mesh* m, bispec_mesh_info* out);
BISPEC_API bispec_status bispec_mesh_write_off(const bispec_mesh* m, const char* path);
BISPEC_API bispec_status bispec_mesh_to_json(const bispec_mesh* m, char** out);
BISPEC_API void bispec_mesh_free(bispec_mesh* m);

/* ---- operators ---- */
BISPEC_API bispec_status bispec_operators_assemble(const bispec_mesh* m, bispec_mass_mode mode, bispec_operators** out);
BISPEC_API int64_t bispec_operators_order(const bispec_operators* ops);
/* which is 'K' (stiffness) or 'M' (mass); MatrixMarket, lower triangle */
BISPEC_API bispec_status bispec_operators_write_matrix(const bispec_operators* ops, char which, const char* path);
BISPEC_API bispec_status bispec_takahashi_residual(const bispec_operators* ops, int n, double* out);
BISPEC_API void bispec_operators_free(bispec_operators* ops);

/* ---- eigenproblems ---- */
/* method is ignored unless problem is BISPEC_BILAPLACE; options may be NULL */
BISPEC_API bispec_status bispec_eigs(const bispec_operators* ops, bispec_problem problem, int count,
    bispec_bilaplace_method method, const bispec_solver_options* options, bispec_eigen_result** out);
BISPEC_API size_t bispec_eigen_count(const bispec_eigen_result* r);
BISPEC_API int64_t bispec_eigen_order(const bispec_eigen_result* r);
BISPEC_API bispec_status bispec_eigen_value(const bispec_eigen_result* r, size_t index, double* value, double* residual);
/* copies one eigenvector; len must equal the matrix order */
BISPEC_API bispec_status bispec_eigen_vector(const bispec_eigen_result* r, size_t index, double* buffer, size_t len);
/* vectors_file may be NULL; it is only recorded in the JSON */
BISPEC_API bispec_status bispec_eigen_to_json(const bispec_eigen_result* r, const char* vectors_file, char** out);
BISPEC_API bispec_status bispec_eigen_write_vectors(const bispec_eigen_result* r, const char* path);
/* clustered spectrum, neighbours within 1e-6 (1 + |value|) merged */
BISPEC_API bispec_status bispec_eigen_spectrum_json(const bispec_eigen_result* r, char** out);
BISPEC_API bispec_status bispec_eigen_spectrum_csv(const bispec_eigen_result* r, char** out);
BISPEC_API void bispec_eigen_free(bispec_eigen_result* r);

/* ---- verification ---- */
BISPEC_API bispec_status bispec_verify_analytic(const bispec_surface* s, double cutoff, bispec_report** out);
BISPEC_API bispec_status bispec_verify_numeric(const bispec_surface* s, const bispec_numeric_options* options,
    bispec_report** out);
/* one sub-report per minimal catalog surface with n <= n_max */
BISPEC_API bispec_status bispec_verify_all_minimal(int n_max, bispec_report** out);
BISPEC_API bispec_status bispec_converge(const bispec_surface* s, const bispec_study_options* options,
    bispec_report** out);
/* 1 iff no check has status "fail" (expected failures do not count) */
BISPEC_API int bispec_report_passed(const bispec_report* r);
BISPEC_API size_t bispec_report_check_count(const bispec_report* r);
BISPEC_API bispec_status bispec_report_check(const bispec_report* r, size_t index, bispec_check* out);
BISPEC_API bispec_status bispec_report_to_json(const bispec_report* r, char** out);
BISPEC_API bispec_status bispec_report_to_csv(const bispec_report* r, char** out);
BISPEC_API void bispec_report_free(bispec_report* r);

#ifdef __cplusplus
}
#endif

#endif /* BISPEC_BISPEC_H */
