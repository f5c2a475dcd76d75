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

#ifndef SGFLOW_DIAGNOSTICS_HPP_
#define SGFLOW_DIAGNOSTICS_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sgflow/flow_engine.hpp"

namespace sgflow {

struct DiagnosticsRow {
  double t = 0.0;
  double dt = 0.0;
  bool accepted = true;
  double min_h = 0.0, max_h = 0.0;
  double min_K = 0.0, max_K = 0.0;
  double min_kappa = 0.0, max_kappa = 0.0;
  double volume = 0.0;
  double barycenter_norm = 0.0;
  // min over u of phi h^{2-p} S / (2 c1 - h)
  double theta_lower = 0.0;
  // max over the polar body of psi* / S* / (h* - (1/c1)/2), evaluated at
  // the polar directions x(u)/|x(u)| of the primal nodes
  double theta_polar = 0.0;
  // int phi h^{2-p} S^2, the volume rate of the unnormalized flow
  double flux = 0.0;
};

// c1 is an upper bound for h along the trajectory so far.
DiagnosticsRow record(const FlowState& state, std::span<const double> phi, double p, double c1,
                      double dt = 0.0, bool accepted = true);

// Keeps the running maximum of h and the rows of one run.
class DiagnosticsLog {
 public:
  DiagnosticsLog(std::vector<double> phi, double p) : phi_(std::move(phi)), p_(p) {}

  const DiagnosticsRow& append(const FlowState& state, double dt = 0.0, bool accepted = true);
  const std::vector<DiagnosticsRow>& rows() const { return rows_; }
  double running_max_h() const { return c1_; }

  void write_csv(std::ostream& out) const;
  void write_csv(const std::string& path) const;

 private:
  std::vector<double> phi_;
  double p_;
  double c1_ = 0.0;
  std::vector<DiagnosticsRow> rows_;
};

const char* csv_header();
void write_csv_row(std::ostream& out, const DiagnosticsRow& row);

// Largest relative mismatch between the second-order finite-difference
// dV/dt at interior accepted rows and the recorded flux.
double volume_variation_defect(std::span<const DiagnosticsRow> rows);

}  // namespace sgflow

#endif  // SGFLOW_DIAGNOSTICS_HPP_
