// Copyright 2026 The sgflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the sgflow support-function solver.
 *
 * All objects are opaque and owned by the caller; every *_create or
 * function returning a new object hands over ownership and has a matching
 * *_destroy. Functions return SGF_OK or an error code; the message of the
 * last failure on the calling thread is available from sgf_last_error().
 */
#ifndef SGFLOW_SGFLOW_H_
#define SGFLOW_SGFLOW_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SGFLOW_BUILDING_LIBRARY)
#define SGF_API __attribute__((visibility("default")))
#else
#define SGF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sgf_status {
  SGF_OK = 0,
  SGF_ERR_INVALID_ARGUMENT = 1,
  SGF_ERR_CONVEXITY = 2,
  SGF_ERR_NOT_CONVERGED = 3,
  SGF_ERR_PARSE = 4,
  SGF_ERR_IO = 5,
  SGF_ERR_NUMERICAL = 6,
  SGF_ERR_STEP_FAILURE = 7,
  SGF_ERR_INTERNAL = 99
} sgf_status;

typedef enum sgf_flow_kind {
  SGF_FLOW_UNNORMALIZED = 0,
  SGF_FLOW_NORMALIZED = 1, /* body is rescaled to unit-ball volume first */
  SGF_FLOW_POLAR = 2       /* body holds the polar support function h* */
} sgf_flow_kind;

typedef struct sgf_grid sgf_grid;
typedef struct sgf_body sgf_body;
typedef struct sgf_flow sgf_flow;
typedef struct sgf_config sgf_config;

typedef struct sgf_solve_summary {
  double c;
  double lambda;
  double residual_sup;
  double tau;
  double max_defect;       /* pointwise defect of the target equation */
  double duality_residual;
  int converged;
  size_t iterations;
} sgf_solve_summary;

SGF_API const char* sgf_version(void);
SGF_API const char* sgf_last_error(void);
SGF_API const char* sgf_status_name(sgf_status status);

/* Grids: dim 1 (circle, resolution = point count) or 2 (sphere,
 * resolution = latitude count, twice as many longitudes). */
SGF_API sgf_status sgf_grid_create(int dim, int resolution, sgf_grid** out);
SGF_API void sgf_grid_destroy(sgf_grid* grid);
SGF_API size_t sgf_grid_size(const sgf_grid* grid);
SGF_API int sgf_grid_dim(const sgf_grid* grid);
/* xyz receives 3 * size doubles (third coordinate 0 on the circle). */
SGF_API sgf_status sgf_grid_nodes(const sgf_grid* grid, double* xyz);
SGF_API sgf_status sgf_grid_weights(const sgf_grid* grid, double* weights);
SGF_API sgf_status sgf_integrate(const sgf_grid* grid, const double* f, size_t len, double* out);
/* Evaluates an expression in u1, u2, u3 at the nodes; phi must be positive.
 * evenness_defect may be NULL. */
SGF_API sgf_status sgf_phi_sample(const sgf_grid* grid, const char* expression, double* values,
                                  double* evenness_defect);

/* Bodies: support functions h > 0 on a grid. The body keeps the grid
 * alive; the grid handle may be destroyed independently. */
SGF_API sgf_status sgf_body_create(const sgf_grid* grid, const double* h, size_t len, sgf_body** out);
/* ball:r, ellipsoid:a,b[,c], perturbed_ball:r,amp,degree[,seed],
 * translate:v1,v2[,v3]:<spec> */
SGF_API sgf_status sgf_body_from_spec(const sgf_grid* grid, const char* spec, uint64_t seed, sgf_body** out);
SGF_API void sgf_body_destroy(sgf_body* body);
SGF_API size_t sgf_body_size(const sgf_body* body);
SGF_API sgf_status sgf_body_values(const sgf_body* body, double* out, size_t len);
SGF_API sgf_status sgf_body_volume(const sgf_body* body, double* out);
/* Per-node S_n and extreme principal radii; any output may be NULL. */
SGF_API sgf_status sgf_body_curvature(const sgf_body* body, double* sn, double* radius_min, double* radius_max);
SGF_API sgf_status sgf_body_normalize(const sgf_body* body, sgf_body** out);
SGF_API sgf_status sgf_body_polar(const sgf_body* body, sgf_body** out);
SGF_API sgf_status sgf_body_duality_residual(const sgf_body* body, double* out);
SGF_API sgf_status sgf_body_lp_barycenter(const sgf_body* body, const double* phi, double p, double out[3]);
/* shift and out may be NULL. */
SGF_API sgf_status sgf_body_recenter(const sgf_body* body, const double* phi, double p, double tol,
                                     double shift[3], sgf_body** out);
SGF_API sgf_status sgf_body_export_obj(const sgf_body* body, const char* path);
/* c and residual of phi h^(1-p) S = c. */
SGF_API sgf_status sgf_body_self_similar_residual(const sgf_body* body, const double* phi, double p, double* c,
                                                  double* residual_sup);

/* Flows. phi is copied (grid size values). */
SGF_API sgf_status sgf_flow_create(const sgf_body* initial, const double* phi, double p, sgf_flow_kind kind,
                                   sgf_flow** out);
SGF_API void sgf_flow_destroy(sgf_flow* flow);
SGF_API sgf_status sgf_flow_set_tolerances(sgf_flow* flow, double rtol, double atol);
/* dt > 0 switches to fixed steps, 0 restores error control. */
SGF_API sgf_status sgf_flow_set_fixed_dt(sgf_flow* flow, double dt);
SGF_API sgf_status sgf_flow_step(sgf_flow* flow);
SGF_API sgf_status sgf_flow_advance(sgf_flow* flow, double t_end);
SGF_API sgf_status sgf_flow_time(const sgf_flow* flow, double* t);
SGF_API sgf_status sgf_flow_counts(const sgf_flow* flow, size_t* accepted, size_t* rejected);
SGF_API sgf_status sgf_flow_body(const sgf_flow* flow, sgf_body** out);
/* Two-sided bounds on the remaining existence time, p < n+1. */
SGF_API sgf_status sgf_blowup_horizon(const sgf_body* body, const double* phi, double p, double* lower,
                                      double* upper);

/* Normalized-flow limit rescaled to a solution of the even L_p Minkowski
 * problem. Returns SGF_ERR_NOT_CONVERGED with summary and solution filled
 * when the run stops early; solution may be NULL. */
SGF_API sgf_status sgf_solve(const sgf_body* initial, const double* phi, double p, double tol, double max_tau,
                             sgf_solve_summary* summary, sgf_body** solution);

/* Run configuration, mirroring the command line. */
SGF_API sgf_status sgf_config_create(sgf_config** out);
SGF_API void sgf_config_destroy(sgf_config* config);
SGF_API sgf_status sgf_config_set(sgf_config* config, const char* key, const char* value);
/* key = value text or JSON (a previous run.json is accepted). */
SGF_API sgf_status sgf_config_load(sgf_config* config, const char* path);
SGF_API sgf_status sgf_config_validate(const sgf_config* config);
/* Executes the run and writes its outputs. Returns the process exit code:
 * 0 done, 2 not converged, 1 error (see sgf_last_error). */
SGF_API int sgf_run(const sgf_config* config);

#ifdef __cplusplus
}
#endif

#endif /* SGFLOW_SGFLOW_H_ */
