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

#include "sgflow/sgflow.h"

#include <algorithm>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "sgflow/convex_body.hpp"
#include "sgflow/errors.hpp"
#include "sgflow/flow_engine.hpp"
#include "sgflow/initial_body.hpp"
#include "sgflow/mesh_export.hpp"
#include "sgflow/minkowski_solver.hpp"
#include "sgflow/phi_expression.hpp"
#include "sgflow/run.hpp"
#include "sgflow/run_config.hpp"

struct sgf_grid {
  sgflow::GridPtr grid;
};

struct sgf_body {
  sgflow::SupportField h;
};

struct sgf_flow {
  sgflow::FlowState state;
  std::vector<double> phi;
  double p;
  sgflow::FlowKind kind;
  sgflow::StepController control;
};

struct sgf_config {
  sgflow::RunConfig config;
};

namespace {

thread_local std::string last_error;

sgf_status fail(sgf_status status, const std::string& message) {
  last_error = message;
  return status;
}

sgf_status from_exception() {
  try {
    throw;
  } catch (const sgflow::Error& e) {
    return fail(static_cast<sgf_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SGF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SGF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SGF_ERR_INTERNAL, "unknown exception");
  }
}

// Runs fn, converting exceptions to status codes.
template <typename Fn>
sgf_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return SGF_OK;
  } catch (...) {
    return from_exception();
  }
}

#define SGF_REQUIRE(cond, what) \
  if (!(cond)) return fail(SGF_ERR_INVALID_ARGUMENT, what)

std::span<const double> phi_span(const sgf_body* body, const double* phi) {
  return {phi, body->h.size()};
}

}  // namespace

extern "C" {

const char* sgf_version(void) { return sgflow::version_string(); }

const char* sgf_last_error(void) { return last_error.c_str(); }

const char* sgf_status_name(sgf_status status) {
  switch (status) {
    case SGF_OK: return "ok";
    case SGF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SGF_ERR_CONVEXITY: return "convexity failure";
    case SGF_ERR_NOT_CONVERGED: return "not converged";
    case SGF_ERR_PARSE: return "parse error";
    case SGF_ERR_IO: return "i/o error";
    case SGF_ERR_NUMERICAL: return "numerical failure";
    case SGF_ERR_STEP_FAILURE: return "step failure";
    case SGF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

sgf_status sgf_grid_create(int dim, int resolution, sgf_grid** out) {
  SGF_REQUIRE(out, "out is null");
  *out = nullptr;
  return guarded([&] { *out = new sgf_grid{sgflow::Grid::build(dim, resolution)}; });
}

void sgf_grid_destroy(sgf_grid* grid) { delete grid; }

size_t sgf_grid_size(const sgf_grid* grid) { return grid ? grid->grid->size() : 0; }

int sgf_grid_dim(const sgf_grid* grid) { return grid ? grid->grid->dim() : 0; }

sgf_status sgf_grid_nodes(const sgf_grid* grid, double* xyz) {
  SGF_REQUIRE(grid && xyz, "null argument");
  for (std::size_t i = 0; i < grid->grid->size(); ++i) {
    const sgflow::Vec3& u = grid->grid->node(i);
    for (int k = 0; k < 3; ++k) xyz[3 * i + k] = u[k];
  }
  return SGF_OK;
}

sgf_status sgf_grid_weights(const sgf_grid* grid, double* weights) {
  SGF_REQUIRE(grid && weights, "null argument");
  const auto w = grid->grid->weights();
  std::copy(w.begin(), w.end(), weights);
  return SGF_OK;
}

sgf_status sgf_integrate(const sgf_grid* grid, const double* f, size_t len, double* out) {
  SGF_REQUIRE(grid && f && out, "null argument");
  return guarded([&] { *out = sgflow::integrate({f, len}, *grid->grid); });
}

sgf_status sgf_phi_sample(const sgf_grid* grid, const char* expression, double* values, double* evenness_defect) {
  SGF_REQUIRE(grid && expression && values, "null argument");
  return guarded([&] {
    const sgflow::PhiField phi = sgflow::parse_phi(expression, *grid->grid);
    std::copy(phi.values.begin(), phi.values.end(), values);
    if (evenness_defect) *evenness_defect = phi.evenness_defect;
  });
}

sgf_status sgf_body_create(const sgf_grid* grid, const double* h, size_t len, sgf_body** out) {
  SGF_REQUIRE(grid && h && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new sgf_body{sgflow::SupportField(grid->grid, sgflow::Field(h, h + len))}; });
}

sgf_status sgf_body_from_spec(const sgf_grid* grid, const char* spec, uint64_t seed, sgf_body** out) {
  SGF_REQUIRE(grid && spec && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new sgf_body{sgflow::make_initial(spec, grid->grid, seed)}; });
}

void sgf_body_destroy(sgf_body* body) { delete body; }

size_t sgf_body_size(const sgf_body* body) { return body ? body->h.size() : 0; }

sgf_status sgf_body_values(const sgf_body* body, double* out, size_t len) {
  SGF_REQUIRE(body && out, "null argument");
  SGF_REQUIRE(len >= body->h.size(), "output buffer too small");
  std::copy(body->h.values().begin(), body->h.values().end(), out);
  return SGF_OK;
}

sgf_status sgf_body_volume(const sgf_body* body, double* out) {
  SGF_REQUIRE(body && out, "null argument");
  return guarded([&] { *out = sgflow::volume(body->h); });
}

sgf_status sgf_body_curvature(const sgf_body* body, double* sn, double* radius_min, double* radius_max) {
  SGF_REQUIRE(body, "null argument");
  return guarded([&] {
    const sgflow::CurvatureData c = sgflow::curvature(body->h);
    if (sn) std::copy(c.sn.begin(), c.sn.end(), sn);
    if (radius_min) std::copy(c.radius_min.begin(), c.radius_min.end(), radius_min);
    if (radius_max) std::copy(c.radius_max.begin(), c.radius_max.end(), radius_max);
  });
}

sgf_status sgf_body_normalize(const sgf_body* body, sgf_body** out) {
  SGF_REQUIRE(body && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new sgf_body{sgflow::normalize_to_unit_volume(body->h)}; });
}

sgf_status sgf_body_polar(const sgf_body* body, sgf_body** out) {
  SGF_REQUIRE(body && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new sgf_body{sgflow::polar(body->h)}; });
}

sgf_status sgf_body_duality_residual(const sgf_body* body, double* out) {
  SGF_REQUIRE(body && out, "null argument");
  return guarded([&] { *out = sgflow::duality_residual(body->h); });
}

sgf_status sgf_body_lp_barycenter(const sgf_body* body, const double* phi, double p, double out[3]) {
  SGF_REQUIRE(body && phi && out, "null argument");
  return guarded([&] {
    const sgflow::Vec3 b = sgflow::lp_barycenter(body->h, phi_span(body, phi), p);
    for (int k = 0; k < 3; ++k) out[k] = b[k];
  });
}

sgf_status sgf_body_recenter(const sgf_body* body, const double* phi, double p, double tol, double shift[3],
                             sgf_body** out) {
  SGF_REQUIRE(body && phi, "null argument");
  if (out) *out = nullptr;
  return guarded([&] {
    const sgflow::RecenterResult r = sgflow::recenter(body->h, phi_span(body, phi), p, tol);
    if (shift) {
      for (int k = 0; k < 3; ++k) shift[k] = r.shift[k];
    }
    if (out) *out = new sgf_body{body->h.translated(r.shift)};
  });
}

sgf_status sgf_body_export_obj(const sgf_body* body, const char* path) {
  SGF_REQUIRE(body && path, "null argument");
  return guarded([&] { sgflow::export_obj(body->h, path); });
}

sgf_status sgf_body_self_similar_residual(const sgf_body* body, const double* phi, double p, double* c,
                                          double* residual_sup) {
  SGF_REQUIRE(body && phi, "null argument");
  return guarded([&] {
    const sgflow::SelfSimilarResidual r = sgflow::self_similar_residual(body->h, phi_span(body, phi), p);
    if (c) *c = r.c;
    if (residual_sup) *residual_sup = r.residual_sup;
  });
}

sgf_status sgf_flow_create(const sgf_body* initial, const double* phi, double p, sgf_flow_kind kind,
                           sgf_flow** out) {
  SGF_REQUIRE(initial && phi && out, "null argument");
  *out = nullptr;
  sgflow::FlowKind k;
  switch (kind) {
    case SGF_FLOW_UNNORMALIZED: k = sgflow::FlowKind::kUnnormalized; break;
    case SGF_FLOW_NORMALIZED: k = sgflow::FlowKind::kNormalized; break;
    case SGF_FLOW_POLAR: k = sgflow::FlowKind::kPolar; break;
    default: return fail(SGF_ERR_INVALID_ARGUMENT, "unknown flow kind");
  }
  return guarded([&] {
    sgflow::SupportField h =
        k == sgflow::FlowKind::kNormalized ? sgflow::normalize_to_unit_volume(initial->h) : initial->h;
    std::vector<double> values(phi, phi + h.size());
    *out = new sgf_flow{sgflow::FlowState(std::move(h)), std::move(values), p, k, {}};
  });
}

void sgf_flow_destroy(sgf_flow* flow) { delete flow; }

sgf_status sgf_flow_set_tolerances(sgf_flow* flow, double rtol, double atol) {
  SGF_REQUIRE(flow, "null argument");
  SGF_REQUIRE(rtol > 0.0 && atol >= 0.0, "rtol must be positive and atol non-negative");
  flow->control.rtol = rtol;
  flow->control.atol = atol;
  return SGF_OK;
}

sgf_status sgf_flow_set_fixed_dt(sgf_flow* flow, double dt) {
  SGF_REQUIRE(flow, "null argument");
  SGF_REQUIRE(dt >= 0.0, "dt must be non-negative");
  flow->control.fixed_dt = dt;
  return SGF_OK;
}

sgf_status sgf_flow_step(sgf_flow* flow) {
  SGF_REQUIRE(flow, "null argument");
  return guarded([&] {
    switch (flow->kind) {
      case sgflow::FlowKind::kUnnormalized:
        flow->state = sgflow::step_unnormalized(flow->state, flow->phi, flow->p, flow->control);
        break;
      case sgflow::FlowKind::kNormalized:
        flow->state = sgflow::step_normalized(flow->state, flow->phi, flow->p, flow->control);
        break;
      case sgflow::FlowKind::kPolar:
        flow->state = sgflow::polar_step(flow->state, flow->phi, flow->p, flow->control);
        break;
    }
  });
}

sgf_status sgf_flow_advance(sgf_flow* flow, double t_end) {
  SGF_REQUIRE(flow, "null argument");
  return guarded([&] {
    flow->state = sgflow::integrate_to(flow->state, flow->kind, flow->phi, flow->p, flow->control, t_end);
  });
}

sgf_status sgf_flow_time(const sgf_flow* flow, double* t) {
  SGF_REQUIRE(flow && t, "null argument");
  *t = flow->state.t;
  return SGF_OK;
}

sgf_status sgf_flow_counts(const sgf_flow* flow, size_t* accepted, size_t* rejected) {
  SGF_REQUIRE(flow, "null argument");
  if (accepted) *accepted = flow->control.accepted;
  if (rejected) *rejected = flow->control.rejected;
  return SGF_OK;
}

sgf_status sgf_flow_body(const sgf_flow* flow, sgf_body** out) {
  SGF_REQUIRE(flow && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new sgf_body{flow->state.h}; });
}

sgf_status sgf_blowup_horizon(const sgf_body* body, const double* phi, double p, double* lower, double* upper) {
  SGF_REQUIRE(body && phi, "null argument");
  return guarded([&] {
    const sgflow::BlowupBounds b = sgflow::blowup_horizon(body->h, phi_span(body, phi), p);
    if (lower) *lower = b.lower;
    if (upper) *upper = b.upper;
  });
}

sgf_status sgf_solve(const sgf_body* initial, const double* phi, double p, double tol, double max_tau,
                     sgf_solve_summary* summary, sgf_body** solution) {
  SGF_REQUIRE(initial && phi, "null argument");
  if (solution) *solution = nullptr;
  bool converged = false;
  const sgf_status status = guarded([&] {
    sgflow::SolveOptions opts;
    opts.tol = tol;
    opts.max_tau = max_tau;
    const auto span = phi_span(initial, phi);
    const sgflow::SolveResult r = sgflow::solve(span, p, initial->h, opts);
    const sgflow::VerifyReport v = sgflow::verify_solution(r, span, p);
    if (summary) {
      *summary = sgf_solve_summary{r.c, r.lambda, r.residual_sup, r.tau, v.max_defect, v.duality_residual,
                                   r.converged ? 1 : 0, r.iterations};
    }
    if (solution) *solution = new sgf_body{r.h_solution};
    converged = r.converged;
  });
  if (status == SGF_OK && !converged) return fail(SGF_ERR_NOT_CONVERGED, "solve stopped before convergence");
  return status;
}

sgf_status sgf_config_create(sgf_config** out) {
  SGF_REQUIRE(out, "out is null");
  *out = nullptr;
  return guarded([&] { *out = new sgf_config{}; });
}

void sgf_config_destroy(sgf_config* config) { delete config; }

sgf_status sgf_config_set(sgf_config* config, const char* key, const char* value) {
  SGF_REQUIRE(config && key && value, "null argument");
  return guarded([&] { sgflow::set_option(config->config, key, value); });
}

sgf_status sgf_config_load(sgf_config* config, const char* path) {
  SGF_REQUIRE(config && path, "null argument");
  return guarded([&] { sgflow::apply_config_file(config->config, path); });
}

sgf_status sgf_config_validate(const sgf_config* config) {
  SGF_REQUIRE(config, "null argument");
  return guarded([&] { sgflow::validate(config->config); });
}

int sgf_run(const sgf_config* config) {
  if (!config) {
    fail(SGF_ERR_INVALID_ARGUMENT, "null argument");
    return 1;
  }
  try {
    const sgflow::RunOutcome outcome = sgflow::execute(config->config);
    last_error = outcome.message;
    return outcome.exit_code;
  } catch (...) {
    from_exception();
    return 1;
  }
}

}  // extern "C"
