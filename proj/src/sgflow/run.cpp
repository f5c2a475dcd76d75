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

#include "sgflow/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include "sgflow/diagnostics.hpp"
#include "sgflow/errors.hpp"
#include "sgflow/flow_engine.hpp"
#include "sgflow/initial_body.hpp"
#include "sgflow/mesh_export.hpp"
#include "sgflow/minkowski_solver.hpp"
#include "sgflow/phi_expression.hpp"

#ifndef SGFLOW_VERSION
#define SGFLOW_VERSION "0.0.0"
#endif

namespace sgflow {

const char* version_string() { return SGFLOW_VERSION; }

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

void write_support_csv(const SupportField& h, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const Grid& g = h.grid();
  out << (g.dim() == 2 ? "u1,u2,u3,h\n" : "u1,u2,h\n");
  char buf[160];
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Vec3& u = g.node(i);
    if (g.dim() == 2) std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", u[0], u[1], u[2], h[i]);
    else std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", u[0], u[1], h[i]);
    out << buf;
  }
  if (!out) throw IoError("write failed for " + path.string());
}

void write_json(const Json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

// JSON has no infinities; those become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

StepController controller_from(const RunConfig& c) {
  StepController s;
  s.dt = c.dt0;
  s.rtol = c.rtol;
  s.atol = c.atol;
  s.fixed_dt = c.fixed_dt;
  s.max_rejections = c.max_rejections;
  return s;
}

const char* error_name(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->code()) {
      case ErrorCode::kInvalidArgument: return "invalid_argument";
      case ErrorCode::kConvexity: return "convexity";
      case ErrorCode::kNotConverged: return "not_converged";
      case ErrorCode::kParse: return "parse";
      case ErrorCode::kIo: return "io";
      case ErrorCode::kNumerical: return "numerical";
      case ErrorCode::kStepFailure: return "step_failure";
    }
  }
  return "internal";
}

RunOutcome execute_unchecked(const RunConfig& config, Json& report) {
  validate(config);
  const GridPtr grid = Grid::build(config.n, config.resolution);
  const PhiField phi = parse_phi(config.phi, *grid);
  report["phi"] = {{"min", phi.min}, {"evenness_defect", phi.evenness_defect}, {"even", phi.even()}};
  const SupportField h0 = make_initial(config.init, grid, config.seed);

  const fs::path dir(config.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + config.out);

  const double p = config.p;
  const int n = config.n;
  DiagnosticsLog log(phi.values, p);
  StepController control = controller_from(config);
  const StepObserver observe = [&log](const FlowState& s, const StepController& c) {
    log.append(s, c.last_dt, true);
  };
  Json result;
  Json notes = Json::array();
  RunOutcome outcome;
  std::optional<SupportField> final_body;

  switch (config.mode) {
    case RunMode::kUnnormalized: {
      double t_end = config.t_end;
      bool clamped = false;
      if (p < n + 1.0) {
        const BlowupBounds b = blowup_horizon(h0, phi.values, p);
        result["blowup_lower"] = b.lower;
        result["blowup_upper"] = b.upper;
        if (t_end > 0.9 * b.lower) {
          t_end = 0.9 * b.lower;
          clamped = true;
          notes.push_back("horizon_clamped: t_end reduced to 90% of the blow-up lower bound");
        }
      }
      FlowState state(h0);
      log.append(state);
      state = integrate_to(std::move(state), FlowKind::kUnnormalized, phi.values, p, control, t_end, observe);
      result["t_end"] = t_end;
      result["horizon_clamped"] = clamped;
      result["t_final"] = state.t;
      result["steps"] = control.accepted;
      result["rejected"] = control.rejected;
      if (log.rows().size() >= 3) result["volume_variation_defect"] = volume_variation_defect(log.rows());
      final_body = state.h;
      report["status"] = "completed";
      break;
    }
    case RunMode::kNormalized: {
      FlowState state(normalize_to_unit_volume(h0));
      log.append(state);
      state = integrate_to(std::move(state), FlowKind::kNormalized, phi.values, p, control, config.max_tau, observe);
      const SelfSimilarResidual res = self_similar_residual(state.h, state.cache, phi.values, p);
      double rate = 0.0;
      for (double v : grid->band_limit(normalized_rate(state, phi.values, p))) rate = std::max(rate, std::abs(v));
      result["tau_final"] = state.t;
      result["steps"] = control.accepted;
      result["rejected"] = control.rejected;
      result["c"] = res.c;
      result["residual_sup"] = res.residual_sup;
      result["rate_sup"] = rate / state.h.max();
      final_body = state.h;
      report["status"] = "completed";
      break;
    }
    case RunMode::kSolve: {
      if (!phi.even() && !(p <= -static_cast<double>(n))) {
        throw InvalidArgument("solve: phi must be even, phi(u) = phi(-u) (antipodal defect " +
                              std::to_string(phi.evenness_defect) + "), unless -n-1 < p <= -n");
      }
      SolveOptions opts;
      opts.tol = config.tol;
      opts.max_tau = config.max_tau;
      opts.control = control;
      opts.observer = observe;
      log.append(FlowState(normalize_to_unit_volume(h0)));
      const SolveResult r = solve(phi.values, p, h0, opts);
      const VerifyReport v = verify_solution(r, phi.values, p);
      result["converged"] = r.converged;
      result["stop_reason"] = r.stop_reason;
      result["c"] = r.c;
      result["lambda"] = r.lambda;
      result["residual_sup"] = r.residual_sup;
      result["iterations"] = r.iterations;
      result["tau"] = r.tau;
      result["rate_sup"] = r.final_rate;
      result["symmetrized"] = r.symmetrized;
      result["recenter_shift"] = {r.recenter_shift[0], r.recenter_shift[1], r.recenter_shift[2]};
      result["verify"] = {{"max_defect", v.max_defect},
                          {"equation", v.normalized_form ? "normalized (p = n+1)" : "phi h^(1-p) S = 1"},
                          {"duality_residual", v.duality_residual},
                          {"symmetry_defect", v.symmetry_defect ? Json(*v.symmetry_defect) : Json(nullptr)}};
      final_body = r.h_solution;
      report["status"] = r.converged ? "converged" : "not_converged";
      if (!r.converged) {
        outcome.exit_code = 2;
        outcome.message = "solve did not converge: " + r.stop_reason;
      }
      break;
    }
  }

  result["final_volume"] = volume(*final_body);
  result["final_min_h"] = final_body->min();
  result["final_max_h"] = final_body->max();
  for (auto& [k, v] : result.items()) {
    if (v.is_number_float()) v = number(v.get<double>());
  }
  report["result"] = result;
  report["notes"] = notes;

  log.write_csv((dir / "series.csv").string());
  write_support_csv(*final_body, dir / "support_final.csv");
  Json files = {"run.json", "series.csv", "support_final.csv"};
  if (n == 2) {
    export_obj(*final_body, (dir / "final.obj").string());
    files.push_back("final.obj");
  }
  report["files"] = files;
  return outcome;
}

}  // namespace

RunOutcome execute(const RunConfig& config) {
  Json report;
  report["sgflow_version"] = version_string();
  report["config"] = to_json(config);
  report["status"] = "error";
  RunOutcome outcome;
  try {
    outcome = execute_unchecked(config, report);
  } catch (const std::exception& e) {
    outcome.exit_code = 1;
    outcome.message = e.what();
    report["status"] = "error";
    report["error"] = {{"kind", error_name(e)}, {"message", e.what()}};
  }
  report["exit_code"] = outcome.exit_code;
  outcome.report = report;
  // Best effort for failed runs: the output directory may be the problem.
  try {
    std::error_code ec;
    fs::create_directories(config.out, ec);
    write_json(report, fs::path(config.out) / "run.json");
  } catch (const std::exception& e) {
    if (outcome.exit_code == 0 || outcome.exit_code == 2) {
      outcome.exit_code = 1;
      outcome.message = e.what();
    }
  }
  return outcome;
}

}  // namespace sgflow
