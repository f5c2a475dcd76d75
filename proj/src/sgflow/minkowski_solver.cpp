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

#include "sgflow/minkowski_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sgflow/errors.hpp"

namespace sgflow {

SelfSimilarResidual self_similar_residual(const SupportField& h, const CurvatureData& curv,
                                          std::span<const double> phi, double p) {
  const Grid& g = h.grid();
  if (phi.size() != g.size()) throw InvalidArgument("self_similar_residual: phi has wrong length");
  Field r(h.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = phi[i] * std::pow(h[i], 1.0 - p) * curv.sn[i];
  const double area = g.dim() == 2 ? 4.0 * M_PI : 2.0 * M_PI;
  SelfSimilarResidual out;
  out.c = integrate(r, g) / area;
  for (double v : r) out.residual_sup = std::max(out.residual_sup, std::abs(v - out.c));
  out.residual_sup /= out.c;
  return out;
}

SelfSimilarResidual self_similar_residual(const SupportField& h, std::span<const double> phi, double p) {
  return self_similar_residual(h, curvature(h), phi, p);
}

namespace {

constexpr double kRecenterTolerance = 1e-10;

SupportField symmetrize(const SupportField& h) {
  const Grid& g = h.grid();
  Field v(h.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (h[i] + h[g.antipode(i)]);
  return SupportField(h.grid_ptr(), std::move(v));
}

double rate_norm(const FlowState& s, std::span<const double> phi, double p) {
  const Field rate = s.h.grid().band_limit(normalized_rate(s, phi, p));
  double m = 0.0;
  for (double v : rate) m = std::max(m, std::abs(v));
  return m / s.h.max();
}

double rescale_factor(const SupportField& h, std::span<const double> phi, double p) {
  const int n = h.dim();
  const Grid& g = h.grid();
  const double vb = unit_ball_volume(n);
  Field f(h.size());
  if (p == n + 1.0) {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(h[i], n + 1.0) / phi[i];
    return std::pow((n + 1.0) * vb / (volume(h) * integrate(f, g)), 1.0 / (n + 1.0));
  }
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(h[i], p) / phi[i];
  return std::pow(integrate(f, g) / ((n + 1.0) * vb), 1.0 / (n + 1.0 - p));
}

}  // namespace

SolveResult solve(std::span<const double> phi, double p, const SupportField& h0, const SolveOptions& options) {
  const Grid& g = h0.grid();
  const int n = g.dim();
  if (phi.size() != g.size()) throw InvalidArgument("solve: phi has wrong length for the grid");
  if (!(p > -n - 1.0)) {
    std::ostringstream msg;
    msg << "p = " << p << " is outside the admissible range p > " << -n - 1;
    throw InvalidArgument(msg.str());
  }
  if (*std::min_element(phi.begin(), phi.end()) <= 0.0) throw InvalidArgument("solve: phi must be positive");
  if (!(options.tol > 0.0)) throw InvalidArgument("solve: tol must be positive");

  const bool even = antipodal_defect(phi, g) < kEvennessTolerance;
  SupportField start = h0;
  bool symmetrized = false;
  Vec3 shift = Vec3::Zero();
  if (even) {
    start = symmetrize(h0);
    symmetrized = true;
  } else if (p <= -static_cast<double>(n)) {
    const RecenterResult rc = recenter(h0, phi, p, 0.1 * kRecenterTolerance);
    shift = rc.shift;
    start = h0.translated(shift);
  } else {
    std::ostringstream msg;
    msg << "phi is not even (antipodal defect " << antipodal_defect(phi, g)
        << "); non-even phi is only supported for " << -n - 1 << " < p <= " << -n;
    throw InvalidArgument(msg.str());
  }

  StepController control = options.control;
  FlowState state(normalize_to_unit_volume(start));
  FlowState best = state;
  SelfSimilarResidual res = self_similar_residual(state.h, state.cache, phi, p);
  double best_residual = res.residual_sup;
  std::size_t since_improvement = 0;
  std::size_t below = 0;
  double rate = rate_norm(state, phi, p);
  bool converged = false;
  std::string reason = "max_tau reached";

  while (state.t < options.max_tau) {
    state = step_normalized(state, phi, p, control, options.max_tau - state.t);
    if (symmetrized) {
      SupportField hs = normalize_to_unit_volume(symmetrize(state.h));
      CurvatureData cs = curvature(hs);
      state = FlowState(std::move(hs), state.t, state.step_count, std::move(cs));
    } else if (lp_barycenter(state.h, phi, p).norm() > kRecenterTolerance) {
      // b = 0 is invariant but repelling: db/dtau = (1-p) eta b.
      const RecenterResult rc = recenter(state.h, phi, p, 0.1 * kRecenterTolerance);
      shift += rc.shift;
      SupportField moved = state.h.translated(rc.shift);
      CurvatureData cm = curvature(moved);
      state = FlowState(std::move(moved), state.t, state.step_count, std::move(cm));
    }
    if (options.observer) options.observer(state, control);

    rate = rate_norm(state, phi, p);
    res = self_similar_residual(state.h, state.cache, phi, p);
    if (res.residual_sup < best_residual) {
      best_residual = res.residual_sup;
      best = state;
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
    below = rate < options.tol ? below + 1 : 0;
    if (below >= options.window) {
      converged = true;
      reason = "converged";
      break;
    }
    if (since_improvement >= options.watchdog) {
      reason = "residual stalled";
      break;
    }
  }

  const FlowState& final_state = converged ? state : best;
  const SelfSimilarResidual final_res = self_similar_residual(final_state.h, final_state.cache, phi, p);
  const double lambda = rescale_factor(final_state.h, phi, p);
  return SolveResult{
      .h_limit = final_state.h,
      .h_solution = final_state.h.scaled(lambda),
      .c = final_res.c,
      .lambda = lambda,
      .residual_sup = final_res.residual_sup,
      .converged = converged,
      .iterations = state.step_count,
      .tau = final_state.t,
      .final_rate = converged ? rate : rate_norm(final_state, phi, p),
      .symmetrized = symmetrized,
      .recenter_shift = shift,
      .stop_reason = reason,
  };
}

VerifyReport verify_solution(const SolveResult& result, std::span<const double> phi, double p) {
  const SupportField& h = result.h_solution;
  const Grid& g = h.grid();
  const int n = g.dim();
  if (phi.size() != g.size()) throw InvalidArgument("verify_solution: phi has wrong length");
  const CurvatureData curv = curvature(h);
  VerifyReport rep;
  rep.normalized_form = p == n + 1.0;
  const double vol = rep.normalized_form ? volume(h, curv) : 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double lhs = rep.normalized_form ? phi[i] * curv.sn[i] / (std::pow(h[i], n) * vol)
                                           : phi[i] * std::pow(h[i], 1.0 - p) * curv.sn[i];
    rep.max_defect = std::max(rep.max_defect, std::abs(lhs - 1.0));
  }
  rep.duality_residual = duality_residual(h);
  if (antipodal_defect(phi, g) < kEvennessTolerance) rep.symmetry_defect = antipodal_defect(h.values(), g);
  return rep;
}

}  // namespace sgflow
