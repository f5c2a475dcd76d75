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

#include "sgflow/flow_engine.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "sgflow/errors.hpp"
#include "sgflow/spectral.hpp"

namespace sgflow {

FlowState::FlowState(SupportField body, double time) : h(std::move(body)), t(time), cache(curvature(h)) {}

FlowState::FlowState(SupportField body, double time, std::size_t steps, CurvatureData curv)
    : h(std::move(body)), t(time), step_count(steps), cache(std::move(curv)) {}

namespace {

struct Rate {
  Field value;
  double stiffness = 0.0;  // max |speed| * tr(r^{-1}), sets the parabolic step limit
};

using RateFn = std::function<Rate(const SupportField&, const CurvatureData&)>;

void check_phi(std::span<const double> phi, const Grid& g) {
  if (phi.size() != g.size()) throw InvalidArgument("phi has wrong length for the grid");
}

Field pointwise_speed(const SupportField& h, const CurvatureData& c, std::span<const double> phi, double p) {
  Field s(h.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = phi[i] * std::pow(h[i], 2.0 - p) * c.sn[i];
  return s;
}

double stiffness_of(std::span<const double> spd, const CurvatureData& c) {
  double worst = 0.0;
  for (std::size_t i = 0; i < spd.size(); ++i) worst = std::max(worst, std::abs(spd[i]) * c.trace_inverse[i]);
  return worst;
}

Rate unnormalized_rate(const SupportField& h, const CurvatureData& c, std::span<const double> phi, double p) {
  Rate r;
  r.value = pointwise_speed(h, c, phi, p);
  r.stiffness = stiffness_of(r.value, c);
  return r;
}

Rate normalized_rate_impl(const SupportField& h, const CurvatureData& c, std::span<const double> phi, double p) {
  Rate r;
  Field spd = pointwise_speed(h, c, phi, p);
  r.stiffness = stiffness_of(spd, c);
  Field flux(spd.size());
  for (std::size_t i = 0; i < spd.size(); ++i) flux[i] = spd[i] * c.sn[i];
  const int dim = h.dim();
  const double mean = integrate(flux, h.grid()) / ((dim + 1.0) * unit_ball_volume(dim));
  for (std::size_t i = 0; i < spd.size(); ++i) spd[i] -= mean * h[i];
  r.value = std::move(spd);
  return r;
}

Rate polar_rate_impl(const SupportField& hs, const CurvatureData& c, std::span<const double> phi, double p,
                     const Interpolator* phi_interp) {
  const Grid& g = hs.grid();
  const int dim = g.dim();
  Rate r;
  r.value.resize(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    Vec3 x = hs[i] * g.node(i) + c.grad1[i] * g.tangent1(i);
    if (dim == 2) x += c.grad2[i] * g.tangent2(i);
    const double len = x.norm();
    const double phi_nu = phi_interp ? (*phi_interp)(x / len) : phi[i];
    const double psi = phi_nu * std::pow(len, dim + 1.0 + p) / std::pow(hs[i], dim + 1.0);
    r.value[i] = -psi * c.gauss[i];
  }
  r.stiffness = stiffness_of(r.value, c);
  return r;
}

bool is_constant(std::span<const double> f) {
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  return *lo == *hi;
}

// Bogacki-Shampine 3(2) with FSAL-free restarts; stage derivatives are
// band-limited so the stability limit follows the retained harmonics.
FlowState rk_step(const FlowState& state, const RateFn& rate, StepController& control, double max_dt,
                  bool renormalize) {
  const Grid& g = state.h.grid();
  const GridPtr& grid = state.h.grid_ptr();
  const std::size_t n = g.size();
  const auto& y = state.h.values();

  const Rate r1 = rate(state.h, state.cache);
  const Field k1 = g.band_limit(r1.value);
  const double stiff = std::max(r1.stiffness, 1e-300);
  const double dt_stable = 2.0 / (stiff * g.laplacian_bound());

  if (control.fixed_dt <= 0.0 && control.dt <= 0.0) {
    const double hmin = g.min_spacing();
    control.dt = 0.1 * hmin * hmin / stiff;
  }

  int rejections = 0;
  while (true) {
    double dt = control.fixed_dt > 0.0 ? control.fixed_dt : std::min(control.dt, dt_stable);
    const bool clipped = dt > max_dt;
    dt = std::min(dt, max_dt);
    if (!(dt > 0.0)) throw InvalidArgument("rk_step: non-positive step size");
    if (state.t + dt == state.t) {
      std::ostringstream msg;
      msg << "step size underflow at t=" << state.t << " (dt=" << dt << ", max h=" << state.h.max() << ")";
      throw StepFailure(msg.str(), state.t, dt);
    }

    auto stage = [&](std::initializer_list<std::pair<double, const Field*>> terms) {
      Field out(y);
      for (const auto& [coef, k] : terms) {
        for (std::size_t i = 0; i < n; ++i) out[i] += dt * coef * (*k)[i];
      }
      return out;
    };

    double err_norm = 0.0;
    std::optional<SupportField> next;
    std::optional<CurvatureData> next_curv;
    Field err(n);
    std::string failure;
    try {
      SupportField y2(grid, stage({{0.5, &k1}}));
      const CurvatureData c2 = curvature(y2);
      const Field k2 = g.band_limit(rate(y2, c2).value);

      SupportField y3(grid, stage({{0.75, &k2}}));
      const CurvatureData c3 = curvature(y3);
      const Field k3 = g.band_limit(rate(y3, c3).value);

      next.emplace(grid, stage({{2.0 / 9.0, &k1}, {1.0 / 3.0, &k2}, {4.0 / 9.0, &k3}}));
      next_curv.emplace(curvature(*next));
      const Field k4 = g.band_limit(rate(*next, *next_curv).value);

      for (std::size_t i = 0; i < n; ++i) {
        const double e = dt * (-5.0 / 72.0 * k1[i] + 1.0 / 12.0 * k2[i] + 1.0 / 9.0 * k3[i] - 1.0 / 8.0 * k4[i]);
        const double scale = control.atol + control.rtol * std::max(std::abs(y[i]), std::abs((*next)[i]));
        err_norm = std::max(err_norm, std::abs(e) / scale);
      }
      if (!std::isfinite(err_norm)) failure = "non-finite error estimate";
    } catch (const ConvexityError& e) {
      failure = e.what();
    } catch (const InvalidArgument& e) {
      failure = e.what();  // stage left the origin-interior class
    } catch (const NumericalError& e) {
      failure = e.what();
    }

    const bool accept = failure.empty() && (control.fixed_dt > 0.0 || err_norm <= 1.0);
    if (accept) {
      control.accepted += 1;
      control.last_dt = dt;
      control.last_error = err_norm;
      if (control.fixed_dt <= 0.0) {
        const double grow = err_norm > 0.0 ? control.safety * std::pow(err_norm, -1.0 / 3.0) : 5.0;
        const double proposal = dt * std::clamp(grow, 0.2, 5.0);
        control.dt = clipped ? std::max(control.dt, proposal) : proposal;
      }
      SupportField h_new = std::move(*next);
      CurvatureData c_new = std::move(*next_curv);
      if (renormalize) {
        const double vol = volume(h_new, c_new);
        const double factor = std::pow(unit_ball_volume(g.dim()) / vol, 1.0 / (g.dim() + 1.0));
        h_new = h_new.scaled(factor);
        c_new = c_new.scaled(factor, g.dim());
      }
      return FlowState(std::move(h_new), state.t + dt, state.step_count + 1, std::move(c_new));
    }

    control.rejected += 1;
    ++rejections;
    if (control.fixed_dt > 0.0 && !failure.empty()) {
      std::ostringstream msg;
      msg << "fixed step dt=" << dt << " rejected at t=" << state.t << ": " << failure;
      throw StepFailure(msg.str(), state.t, dt);
    }
    if (rejections > control.max_rejections) {
      std::ostringstream msg;
      msg << "step failed after " << rejections << " rejections at t=" << state.t << " (dt=" << dt
          << ", min h=" << state.h.min() << ", max h=" << state.h.max() << ")";
      if (!failure.empty()) msg << ": " << failure;
      throw StepFailure(msg.str(), state.t, dt);
    }
    control.dt = 0.5 * dt;
  }
}

}  // namespace

Field speed(const FlowState& state, std::span<const double> phi, double p) {
  check_phi(phi, state.h.grid());
  return pointwise_speed(state.h, state.cache, phi, p);
}

Field normalized_rate(const FlowState& state, std::span<const double> phi, double p) {
  check_phi(phi, state.h.grid());
  return normalized_rate_impl(state.h, state.cache, phi, p).value;
}

Field polar_rate(const FlowState& polar_state, std::span<const double> phi, double p) {
  const Grid& g = polar_state.h.grid();
  check_phi(phi, g);
  std::optional<Interpolator> interp;
  if (!is_constant(phi)) interp.emplace(g, phi);
  return polar_rate_impl(polar_state.h, polar_state.cache, phi, p, interp ? &*interp : nullptr).value;
}

FlowState step_unnormalized(const FlowState& state, std::span<const double> phi, double p,
                            StepController& control, double max_dt) {
  check_phi(phi, state.h.grid());
  return rk_step(
      state, [&](const SupportField& h, const CurvatureData& c) { return unnormalized_rate(h, c, phi, p); },
      control, max_dt, false);
}

FlowState step_normalized(const FlowState& state, std::span<const double> phi, double p,
                          StepController& control, double max_dt) {
  check_phi(phi, state.h.grid());
  const double vol = volume(state.h, state.cache);
  const double target = unit_ball_volume(state.h.dim());
  if (std::abs(vol - target) > 1e-8 * target) {
    std::ostringstream msg;
    msg << "step_normalized: state volume " << vol << " is not the unit-ball volume " << target;
    throw InvalidArgument(msg.str());
  }
  return rk_step(
      state, [&](const SupportField& h, const CurvatureData& c) { return normalized_rate_impl(h, c, phi, p); },
      control, max_dt, true);
}

namespace {

FlowState polar_step_with(const FlowState& state, std::span<const double> phi, double p, StepController& control,
                          double max_dt, const Interpolator* interp) {
  return rk_step(
      state,
      [&](const SupportField& h, const CurvatureData& c) {
        if (h.min() < 1e-12 * h.max()) throw NumericalError("polar support function collapsed to zero");
        return polar_rate_impl(h, c, phi, p, interp);
      },
      control, max_dt, false);
}

}  // namespace

FlowState polar_step(const FlowState& polar_state, std::span<const double> phi, double p, StepController& control,
                     double max_dt) {
  const Grid& g = polar_state.h.grid();
  check_phi(phi, g);
  std::optional<Interpolator> interp;
  if (!is_constant(phi)) interp.emplace(g, phi);
  return polar_step_with(polar_state, phi, p, control, max_dt, interp ? &*interp : nullptr);
}

FlowState integrate_to(FlowState state, FlowKind kind, std::span<const double> phi, double p,
                       StepController& control, double t_end, const StepObserver& observer) {
  const Grid& g = state.h.grid();
  check_phi(phi, g);
  std::optional<Interpolator> interp;
  if (kind == FlowKind::kPolar && !is_constant(phi)) interp.emplace(g, phi);

  while (state.t < t_end) {
    const double remaining = t_end - state.t;
    if (remaining <= 1e-14 * std::max(1.0, std::abs(t_end))) {
      state.t = t_end;
      break;
    }
    switch (kind) {
      case FlowKind::kUnnormalized:
        state = step_unnormalized(state, phi, p, control, remaining);
        break;
      case FlowKind::kNormalized:
        state = step_normalized(state, phi, p, control, remaining);
        break;
      case FlowKind::kPolar:
        state = polar_step_with(state, phi, p, control, remaining, interp ? &*interp : nullptr);
        break;
    }
    if (std::abs(state.t - t_end) <= 1e-14 * std::max(1.0, std::abs(t_end))) state.t = t_end;
    if (observer) observer(state, control);
  }
  return state;
}

std::pair<SupportField, double> rescale_solution(const SupportField& h, double lambda, double t, double p) {
  if (!(lambda > 0.0)) throw InvalidArgument("rescale_solution: lambda must be positive");
  const double n = h.dim();
  const double time_exponent = (1.0 + n - p) / (n + 1.0);
  return {h.scaled(std::pow(lambda, 1.0 / (n + 1.0))), t / std::pow(lambda, time_exponent)};
}

BlowupBounds blowup_horizon(const SupportField& h, std::span<const double> phi, double p) {
  const double n = h.dim();
  check_phi(phi, h.grid());
  if (p >= n + 1.0) {
    throw InvalidArgument("blowup_horizon: the flow exists for all time when p >= n+1");
  }
  const auto [phi_lo, phi_hi] = std::minmax_element(phi.begin(), phi.end());
  const double e = p - n - 1.0;
  BlowupBounds b;
  b.lower = std::pow(h.max(), e) / ((n + 1.0 - p) * *phi_hi);
  b.upper = std::pow(h.min(), e) / ((n + 1.0 - p) * *phi_lo);
  return b;
}

}  // namespace sgflow
