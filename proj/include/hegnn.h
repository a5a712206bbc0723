/*
 * C interface to the hegnn library: equivariant message passing with
 * high-degree steerable features, finite point-group machinery, symmetric
 * structure generators, and a small training stack for the charged
 * N-body task.
 *
 * All functions return hegnn_status; on any failure hegnn_last_error()
 * describes the most recent error of the calling thread. Opaque handles are
 * released with their matching _destroy function. Buffers are caller
 * allocated; sizes are documented per function.
 */
#ifndef HEGNN_H
#define HEGNN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HEGNN_API __declspec(dllexport)
#else
#define HEGNN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hegnn_status {
    HEGNN_OK = 0,
    HEGNN_ERROR_INVALID_ARGUMENT = 1,
    HEGNN_ERROR_DOMAIN = 2,
    HEGNN_ERROR_IO = 3,
    HEGNN_ERROR_VERIFICATION = 4,
    HEGNN_ERROR_INTERNAL = 5
} hegnn_status;

HEGNN_API const char* hegnn_version(void);
/* Message of the last failure on this thread; empty string if none. */
HEGNN_API const char* hegnn_last_error(void);
/* Frees strings returned through char** out parameters. */
HEGNN_API void hegnn_string_free(char* s);

/* ---- special functions ------------------------------------------------ */

/* Legendre polynomial P_l(t); t clamped into [-1,1] within 1e-12. */
HEGNN_API hegnn_status hegnn_legendre(int l, double t, double* out);

/* Real spherical harmonics, component normalization (||Y_l||^2 = 2l+1),
 * basis order m = -l..l with the degree-1 block sqrt(3)*(y,z,x).
 * `dir` must be unit within 1e-8; `out` holds 2l+1 values. l <= 30. */
HEGNN_API hegnn_status hegnn_sph_harm(int l, const double dir[3], double* out);

/* Wigner-D matrix of a proper rotation (row-major 3x3, orthogonal within
 * 1e-10, det +1) in the real basis above; `out` holds (2l+1)^2 row-major. */
HEGNN_API hegnn_status hegnn_wigner_d(int l, const double rotation[9], double* out);

/* O(3) representation: inversion contributes the sign (-1)^l. */
HEGNN_API hegnn_status hegnn_o3_rep(int l, const double rotation[9], int odd_parity, double* out);

/* Trace of the degree-l Wigner matrix of a rotation by `angle` radians. */
HEGNN_API hegnn_status hegnn_rotation_character(int l, double angle, double* out);

/* ---- finite point groups ---------------------------------------------- */

typedef struct hegnn_group hegnn_group;

/* Names: "Ci", "Cn"/"Dn" with a literal order (e.g. "C5", "D7"), "T", "O",
 * "I", and products with the inversion group such as "TxCi". */
HEGNN_API hegnn_status hegnn_group_create(const char* name, hegnn_group** out);
HEGNN_API void hegnn_group_destroy(hegnn_group* group);
HEGNN_API size_t hegnn_group_order(const hegnn_group* group);
/* Element as a rotation plus parity flag. */
HEGNN_API hegnn_status hegnn_group_element(const hegnn_group* group, size_t index,
                                           double rotation[9], int* odd_parity);
/* Mean of the degree-l representation over the group; (2l+1)^2 row-major. */
HEGNN_API hegnn_status hegnn_group_average(const hegnn_group* group, int l, double* out);
/* Mean trace computed from the constructed matrices. */
HEGNN_API hegnn_status hegnn_group_brute_trace(const hegnn_group* group, int l, double* out);
/* Dimension of the subspace fixed by the whole group. */
HEGNN_API hegnn_status hegnn_group_fixed_dim(const hegnn_group* group, int l, int* out);
/* Closed-form trace; defined for Ci, Cn, Dn, T, O, I. */
HEGNN_API hegnn_status hegnn_trace_closed_form(const char* name, int l, long* out);
/* Degrees 0..lmax on which every equivariant output vanishes, as 0/1 flags
 * (buffer of lmax+1 bytes). `names` is a comma-separated group list whose
 * degenerate sets are unioned, e.g. "Ci,O" for the cube. */
HEGNN_API hegnn_status hegnn_degenerate_degrees(const char* names, int lmax, uint8_t* flags);

/* ---- geometric structures --------------------------------------------- */

typedef struct hegnn_graph hegnn_graph;

/* k >= 2 equally spaced unit-circle nodes, complete edges, centered. */
HEGNN_API hegnn_status hegnn_graph_kfold(int k, hegnn_graph** out);
/* "tetrahedron", "cube", "octahedron", "dodecahedron", "icosahedron". */
HEGNN_API hegnn_status hegnn_graph_polyhedron(const char* name, hegnn_graph** out);
HEGNN_API void hegnn_graph_destroy(hegnn_graph* graph);
HEGNN_API size_t hegnn_graph_num_nodes(const hegnn_graph* graph);
/* Coordinates, row-major N x 3. */
HEGNN_API hegnn_status hegnn_graph_coords(const hegnn_graph* graph, double* out);
HEGNN_API hegnn_status hegnn_graph_rotate(const hegnn_graph* graph, const double rotation[9],
                                          int odd_parity, hegnn_graph** out);
/* Gaussian displacement with sigma = epsilon * mean radius, re-centered. */
HEGNN_API hegnn_status hegnn_graph_perturb(const hegnn_graph* graph, double epsilon,
                                           uint64_t seed, hegnn_graph** out);
/* Nearest-vertex symmetry witness at tolerance `tol` (<= 0 for the 1e-6
 * default). `found` gets 0/1; `permutation` (length N) is optional. */
HEGNN_API hegnn_status hegnn_graph_symmetry(const hegnn_graph* graph, const double rotation[9],
                                            int odd_parity, double tol, int* found,
                                            int* permutation);
/* Haar-uniform rotation matrix, deterministic in the seed. */
HEGNN_API hegnn_status hegnn_random_rotation(uint64_t seed, double rotation[9]);

/* ---- expressivity protocols ------------------------------------------- */

/* Norm of sum_i Y_l(x_i/||x_i||) and the verdict at the 1e-3 cut. */
HEGNN_API hegnn_status hegnn_sph_sum(const hegnn_graph* graph, int l, double* norm,
                                     int* distinguishable);

/* Forward-only discrimination of the structure from a rotated copy using
 * pooled steerable heads of the requested degrees. Returns the per-trial
 * success count, the majority verdict, and the largest statistic seen. */
HEGNN_API hegnn_status hegnn_discriminate(const hegnn_graph* graph, const int* degrees,
                                          size_t n_degrees, int trials, uint64_t seed,
                                          int* successes, int* verdict, double* statistic);

/* Recovers the multiset of angle cosines from z_l = (2l+1) sum_n P_l(t_n),
 * l = 1..count; `cosines` holds `count` ascending values. count <= 12. */
HEGNN_API hegnn_status hegnn_recover_angles(const double* z, size_t count, double* cosines);

/* ---- N-body data and training ----------------------------------------- */

typedef struct hegnn_nbody_config {
    int bodies;          /* >= 2 */
    int steps;           /* leapfrog steps */
    double dt;           /* > 0 */
    int signed_charges;  /* 0: charges in {0,1}; 1: charges in {-1,+1} */
} hegnn_nbody_config;

/* Writes `samples` line-delimited JSON records to `path`. */
HEGNN_API hegnn_status hegnn_nbody_generate(const hegnn_nbody_config* config, int samples,
                                            uint64_t seed, const char* path);

typedef struct hegnn_train_config {
    int max_degree;      /* model degrees 0..max_degree */
    int hidden_width;
    int layers;
    int epochs;
    int batch_size;
    double learning_rate;
    uint64_t seed;
} hegnn_train_config;

/* Trains on records [0, train_count) of the dataset, validates on
 * [train_count, train_count + val_count), writes the checkpoint and a
 * loss CSV ("epoch,train_mse,val_mse" plus a metadata comment line). */
HEGNN_API hegnn_status hegnn_nbody_train(const char* dataset_path, int train_count,
                                         int val_count, const hegnn_train_config* config,
                                         const char* checkpoint_path, const char* loss_csv_path);

/* Mean coordinate MSE of a checkpointed model over records
 * [offset, offset + count) of the dataset. */
HEGNN_API hegnn_status hegnn_nbody_eval(const char* dataset_path, int offset, int count,
                                        const char* checkpoint_path, double* mse);

/* Ballistic baseline x0 + v0 * horizon over the same records. */
HEGNN_API hegnn_status hegnn_nbody_linear_baseline(const char* dataset_path, int offset,
                                                   int count, double horizon, double* mse);

/* ---- verification ------------------------------------------------------ */

/* Cross-module invariant suite. `fault` injects a negative control:
 * 0 none, 1 parity, 2 gate. `report_json` (optional) receives a JSON
 * report to free with hegnn_string_free. `passed` gets 0/1. Returns
 * HEGNN_ERROR_VERIFICATION when a check fails. */
HEGNN_API hegnn_status hegnn_verify(uint64_t seed, int fault, char** report_json, int* passed);

#ifdef __cplusplus
}
#endif

#endif /* HEGNN_H */
