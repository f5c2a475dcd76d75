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

#ifndef SGFLOW_FLOW_ENGINE_HPP_
#define SGFLOW_FLOW_ENGINE_HPP_

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>

#include "sgflow/convex_body.hpp"

namespace sgflow {

struct FlowState {
  SupportField h;
  double t = 0.0;
  std::size_t step_count = 0;
  CurvatureData cache;

  explicit FlowState(SupportField body, double time = 0.0);
  FlowState(SupportField body, double time, std::size_t steps, CurvatureData curv);
};

// Embedded Bogacki-Shampine 3(2) control. dt <= 0 means "pick the initial
// step from the parabolic heuristic". fixed_dt > 0 disables error control
// (the convexity guard still rejects).
struct StepController {
  double dt = 0.0;
  double safety = 0.9;
  double rtol = 1e-8;
  double atol = 1e-12;
  int max_rejections = 40;
  double fixed_dt = 0.0;

  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double last_dt = 0.0;
  double last_error = 0.0;
};

enum class FlowKind { kUnnormalized, kNormalized, kPolar };

// phi h^{2-p} S_n, pointwise.
Field speed(const FlowState& state, std::span<const double> phi, double p);

// Right-hand side of the volume-normalized equation.
Field normalized_rate(const FlowState& state, std::span<const double> phi, double p);

// Right-hand side of the polar flow, -psi* / S*_n, for a state holding h*.
Field polar_rate(const FlowState& polar_state, std::span<const double> phi, double p);

FlowState step_unnormalized(const FlowState& state, std::span<const double> phi, double p,
                            StepController& control,
                            double max_dt = std::numeric_limits<double>::infinity());

// One accepted step followed by exact projection back to unit volume.
FlowState step_normalized(const FlowState& state, std::span<const double> phi, double p,
                          StepController& control,
                          double max_dt = std::numeric_limits<double>::infinity());

FlowState polar_step(const FlowState& polar_state, std::span<const double> phi, double p,
                     StepController& control,
                     double max_dt = std::numeric_limits<double>::infinity());

using StepObserver = std::function<void(const FlowState&, const StepController&)>;

// Advances until state.t == t_end exactly, calling `observer` after every
// accepted step.
FlowState integrate_to(FlowState state, FlowKind kind, std::span<const double> phi, double p,
                       StepController& control, double t_end, const StepObserver& observer = {});

// Initial data and time for the scaled solution lambda^{1/(n+1)} h(u, lambda^a t),
// a = (1+n-p)/(n+1): returns (lambda^{1/(n+1)} h, t / lambda^a).
std::pair<SupportField, double> rescale_solution(const SupportField& h, double lambda, double t, double p);

struct BlowupBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Two-sided ball comparison bounds on the remaining existence time, p < n+1.
BlowupBounds blowup_horizon(const SupportField& h, std::span<const double> phi, double p);

}  // namespace sgflow

#endif  // SGFLOW_FLOW_ENGINE_HPP_
