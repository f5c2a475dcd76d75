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

#ifndef SGFLOW_MINKOWSKI_SOLVER_HPP_
#define SGFLOW_MINKOWSKI_SOLVER_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "sgflow/flow_engine.hpp"

namespace sgflow {

struct SelfSimilarResidual {
  double c = 0.0;             // quadrature mean of phi h^{1-p} S
  double residual_sup = 0.0;  // max |phi h^{1-p} S - c| / c
};

SelfSimilarResidual self_similar_residual(const SupportField& h, std::span<const double> phi, double p);
SelfSimilarResidual self_similar_residual(const SupportField& h, const CurvatureData& curv,
                                          std::span<const double> phi, double p);

struct SolveOptions {
  double tol = 1e-6;        // on sup |d h / d tau| relative to sup h
  double max_tau = 50.0;
  std::size_t window = 10;  // consecutive accepted steps below tol
  std::size_t watchdog = 500;
  StepController control{.rtol = 1e-6, .atol = 1e-9};
  StepObserver observer;    // called after every accepted step
};

struct SolveResult {
  SupportField h_limit;     // unit volume
  SupportField h_solution;  // lambda * h_limit
  double c = 0.0;
  double lambda = 0.0;
  double residual_sup = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  double tau = 0.0;
  double final_rate = 0.0;  // sup |d h / d tau| / sup h at h_limit
  bool symmetrized = false;
  Vec3 recenter_shift = Vec3::Zero();
  std::string stop_reason;
};

// Runs the volume-normalized flow to a self-similar limit and rescales it.
// Even phi: h0 is symmetrized and kept symmetric. Non-even phi is only
// accepted for -n-1 < p <= -n, where h0 is first recentered.
SolveResult solve(std::span<const double> phi, double p, const SupportField& h0, const SolveOptions& options = {});

// phi on the grid is even when max |phi(u) - phi(-u)| is below this.
inline constexpr double kEvennessTolerance = 1e-12;

struct VerifyReport {
  // max |phi h^{1-p} S - 1|, or max |phi S / (h^n V(K)) - 1| when p = n+1
  double max_defect = 0.0;
  bool normalized_form = false;
  double duality_residual = 0.0;
  std::optional<double> symmetry_defect;  // only for even phi
};

VerifyReport verify_solution(const SolveResult& result, std::span<const double> phi, double p);

}  // namespace sgflow

#endif  // SGFLOW_MINKOWSKI_SOLVER_HPP_
