#ifndef HUBENT_H
#define HUBENT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HUBENT_API __declspec(dllexport)
#else
#define HUBENT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum hubent_status {
  HUBENT_OK = 0,
  HUBENT_ERR_INTERNAL = 1,
  HUBENT_ERR_INVALID = 2,   /* bad specification, parameter or domain */
  HUBENT_ERR_NUMERICAL = 3, /* quadrature, eigensolver or SCF failure */
  HUBENT_ERR_CAPACITY = 4   /* basis dimension over the cap */
} hubent_status;

typedef enum hubent_ed_method {
  HUBENT_ED_AUTO = 0,
  HUBENT_ED_LANCZOS = 1,
  HUBENT_ED_DENSE = 2
} hubent_ed_method;

HUBENT_API const char* hubent_version(void);

/* Message of the last failed call on this thread; "" after a success. */
HUBENT_API const char* hubent_last_error(void);

/* Spin-balanced open chain, t = 1. `potential` may be NULL (all zero) or
   point to `sites` values. */
typedef struct hubent_chain hubent_chain;

HUBENT_API hubent_status hubent_chain_create(size_t sites, size_t particles_per_spin, double interaction,
                                             const double* potential, hubent_chain** out);
HUBENT_API hubent_status hubent_chain_create_disorder(size_t sites, size_t particles_per_spin,
                                                      double interaction, double concentration,
                                                      double strength, uint64_t seed, hubent_chain** out);
HUBENT_API hubent_status hubent_chain_create_superlattice(size_t sites, size_t particles_per_spin,
                                                          double interaction, int impurity_sites,
                                                          int clean_sites, double strength,
                                                          hubent_chain** out);
HUBENT_API void hubent_chain_destroy(hubent_chain* chain);
HUBENT_API size_t hubent_chain_sites(const hubent_chain* chain);
HUBENT_API hubent_status hubent_chain_potential(const hubent_chain* chain, double* out, size_t len);

/* Homogeneous FVC quantities. */
HUBENT_API hubent_status hubent_e0(double density, double interaction, double* e0);
HUBENT_API hubent_status hubent_solve_b(double interaction, double* b);
HUBENT_API hubent_status hubent_homogeneous(double density, double interaction, double* von_neumann,
                                            double* linear, double* double_occupancy);

/* Entropies of an occupation vector {w_up, w_down, w_double, w_empty}. */
HUBENT_API hubent_status hubent_entropies(const double w[4], double* von_neumann, double* linear);
HUBENT_API hubent_status hubent_taylor_entropy(const double w[4], int order, double* value);

/* Exact ground state. */
typedef struct hubent_ground_state hubent_ground_state;

HUBENT_API hubent_status hubent_ed_solve(const hubent_chain* chain, hubent_ed_method method,
                                         hubent_ground_state** out);
HUBENT_API void hubent_ground_state_destroy(hubent_ground_state* gs);
HUBENT_API double hubent_ground_state_energy(const hubent_ground_state* gs);
HUBENT_API size_t hubent_ground_state_dimension(const hubent_ground_state* gs);
/* w receives {w_up, w_down, w_double, w_empty} of `site` (0-based). */
HUBENT_API hubent_status hubent_ground_state_site(const hubent_ground_state* gs, size_t site, double w[4]);

/* Kohn-Sham LDA density (default solver settings) and LDA entropies. */
HUBENT_API hubent_status hubent_scf_solve(const hubent_chain* chain, double* density, size_t len,
                                          int* iterations);
HUBENT_API hubent_status hubent_lda_entropies(const double* density, size_t len, double interaction,
                                              double* von_neumann, double* linear);

/* Runs an experiment command (fig2 ... ed) with a JSON object of parameter
   overrides (NULL or "" for defaults). On success *csv owns a NUL-terminated
   string to release with hubent_string_free. Worker count comes from
   HUBENT_WORKERS. */
HUBENT_API hubent_status hubent_run_experiment(const char* command, const char* params_json, char** csv);
/* Default parameters of a command as a JSON object. */
HUBENT_API hubent_status hubent_experiment_defaults(const char* command, char** json);
HUBENT_API void hubent_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
