#ifndef VTF_VTF_H
#define VTF_VTF_H

/* C interface of the vortex/Thomas-Fermi library. Every function returns a
 * vtf_status; on failure the message is available from vtf_last_error()
 * (thread-local, valid until the next failing call on the same thread). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define VTF_API __declspec(dllexport)
#else
#define VTF_API __attribute__((visibility("default")))
#endif

typedef enum vtf_status {
  VTF_OK = 0,
  VTF_E_INVALID_ARGUMENT = 1,
  VTF_E_GRID = 2,
  VTF_E_FLUX = 3,
  VTF_E_NOT_CONVERGED = 4,
  VTF_E_NUMERIC = 5,
  VTF_E_IO = 6,
  VTF_E_PRECONDITION = 7,
  VTF_E_INTERNAL = 8,
  VTF_E_PARTIAL = 9 /* sweep finished with flagged rows */
} vtf_status;

typedef enum vtf_bc { VTF_BC_DIRICHLET = 0, VTF_BC_NEUMANN = 1, VTF_BC_PERIODIC = 2 } vtf_bc;

typedef struct vtf_field vtf_field;

typedef struct vtf_regime {
  double omega;
  double g;
  double delta; /* NAN when g was given directly */
} vtf_regime;

typedef struct vtf_energy {
  double total;
  double kinetic;
  double interaction;
  double trap;
  double multiplier;
  double residual;
  int iterations;
  int converged;
} vtf_energy;

typedef struct vtf_tf {
  double e_ab;
  double lambda_tf;
  double radius;
  double energy;
  double lambda1;
  double radius1;
  double energy1;
  double tf_length;
} vtf_tf;

typedef struct vtf_sweep_options {
  const char* out_root; /* NULL: VTF_OUT, then the config's output */
  int threads;          /* <= 0: from the config */
  int snapshot;         /* < 0: from the config, else 0/1 */
  int seed_set;
  uint64_t seed;
} vtf_sweep_options;

typedef struct vtf_sweep_summary {
  int points;
  int rows;
  int failures;
} vtf_sweep_summary;

VTF_API const char* vtf_version(void);
VTF_API vtf_status vtf_last_error_code(void);
VTF_API const char* vtf_last_error(void);

/* Fields */
VTF_API vtf_status vtf_field_read(const char* path, vtf_field** out);
VTF_API vtf_status vtf_field_write(const vtf_field* f, const char* path);
VTF_API void vtf_field_free(vtf_field* f);
VTF_API vtf_status vtf_field_shape(const vtf_field* f, int* nx, int* ny, double* lx, double* ly, vtf_bc* bc,
                                   size_t* nodes);
/* Copies interleaved (re, im) node values; cap counts doubles. */
VTF_API vtf_status vtf_field_values(const vtf_field* f, double* out, size_t cap);
VTF_API vtf_status vtf_field_mass(const vtf_field* f, double* mass);

/* Regime */
VTF_API vtf_status vtf_regime_from_delta(double omega, double delta, vtf_regime* out);
VTF_API vtf_status vtf_regime_from_g(double omega, double g, vtf_regime* out);

/* Torus: area pi*d, sides sqrt(pi d / aspect) and sqrt(pi d aspect). */
VTF_API vtf_status vtf_landau_spectrum(int d, double aspect, int n1, int k, uint64_t seed, double* values,
                                       double* max_residual);
VTF_API vtf_status vtf_torus_state(int d, double aspect, int n1, int l, vtf_field** out);
VTF_API vtf_status vtf_abrikosov_beta(int d, double aspect, int restarts, uint64_t seed, double* beta,
                                      vtf_field** state);

/* Homogeneous rectangle of flux d and density rho; state may be NULL. */
VTF_API vtf_status vtf_homogeneous(vtf_bc bc, int d, double aspect, int n1, double rho, double g, uint64_t seed,
                                   vtf_energy* energy, vtf_field** state);

/* Trapped problem; box_radius <= 0 and degree <= 0 select the defaults. */
VTF_API vtf_status vtf_trapped(vtf_regime p, double box_radius, double h, uint64_t seed, vtf_energy* energy,
                               double* outside_mass, vtf_field** state);
VTF_API vtf_status vtf_lll(vtf_regime p, int degree, uint64_t seed, vtf_energy* energy, double* tail_weight);
VTF_API vtf_status vtf_tf_profile(vtf_regime p, double e_ab, vtf_tf* out);

/* Grid-graph dual-Lipschitz distance; mask may be NULL (full lattice). */
VTF_API vtf_status vtf_dual_lipschitz(int nx, int ny, double h, const unsigned char* mask, size_t center,
                                      const double* a, const double* b, int stencil, double* out);

/* Winding census; positions receives 2*cap doubles, windings cap ints. */
VTF_API vtf_status vtf_vortex_census(const vtf_field* f, double density_floor, int* count, int* winding_sum,
                                     double* positions, int* windings, size_t cap);

/* Sweeps. run_dir receives the run directory (truncated to cap bytes). */
VTF_API vtf_status vtf_sweep_run_file(const char* path, const vtf_sweep_options* opt, char* run_dir, size_t cap,
                                      vtf_sweep_summary* summary);
VTF_API vtf_status vtf_sweep_run_yaml(const char* yaml, const vtf_sweep_options* opt, char* run_dir, size_t cap,
                                      vtf_sweep_summary* summary);

#ifdef __cplusplus
}
#endif

#endif
