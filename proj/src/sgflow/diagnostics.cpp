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

#include "sgflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "sgflow/errors.hpp"

namespace sgflow {

DiagnosticsRow record(const FlowState& state, std::span<const double> phi, double p, double c1, double dt,
                      bool accepted) {
  const SupportField& h = state.h;
  const Grid& g = h.grid();
  const CurvatureData& c = state.cache;
  if (phi.size() != g.size()) throw InvalidArgument("record: phi has wrong length for the grid");

  DiagnosticsRow row;
  row.t = state.t;
  row.dt = dt;
  row.accepted = accepted;
  row.min_h = h.min();
  row.max_h = h.max();
  const auto [k_lo, k_hi] = std::minmax_element(c.gauss.begin(), c.gauss.end());
  row.min_K = *k_lo;
  row.max_K = *k_hi;
  row.min_kappa = 1.0 / *std::max_element(c.radius_max.begin(), c.radius_max.end());
  row.max_kappa = 1.0 / *std::min_element(c.radius_min.begin(), c.radius_min.end());
  row.volume = volume(h, c);
  row.barycenter_norm = lp_barycenter(h, phi, p).norm();

  const double bound = std::max(c1, row.max_h);
  const double half_polar_floor = 0.5 / bound;
  row.theta_lower = std::numeric_limits<double>::infinity();
  row.theta_polar = -std::numeric_limits<double>::infinity();
  Field flux(h.size());
  const std::vector<Vec3> x = embed(h, c);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double spd = phi[i] * std::pow(h[i], 2.0 - p) * c.sn[i];
    flux[i] = spd * c.sn[i];
    row.theta_lower = std::min(row.theta_lower, spd / (2.0 * bound - h[i]));
    // At u* = x/|x| the polar body has h* = 1/|x| and psi*/S* = speed/(h |x|).
    const double len = x[i].norm();
    row.theta_polar = std::max(row.theta_polar, spd / (h[i] * len) / (1.0 / len - half_polar_floor));
  }
  row.flux = integrate(flux, g);
  return row;
}

const DiagnosticsRow& DiagnosticsLog::append(const FlowState& state, double dt, bool accepted) {
  c1_ = std::max(c1_, state.h.max());
  rows_.push_back(record(state, phi_, p_, c1_, dt, accepted));
  return rows_.back();
}

const char* csv_header() {
  return "t,dt,accepted,min_h,max_h,min_K,max_K,min_kappa,max_kappa,volume,barycenter_norm,"
         "theta_lower,theta_polar,flux";
}

void write_csv_row(std::ostream& out, const DiagnosticsRow& r) {
  char buf[640];
  std::snprintf(buf, sizeof buf,
                "%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.dt,
                r.accepted ? 1 : 0, r.min_h, r.max_h, r.min_K, r.max_K, r.min_kappa, r.max_kappa, r.volume,
                r.barycenter_norm, r.theta_lower, r.theta_polar, r.flux);
  out << buf;
}

void DiagnosticsLog::write_csv(std::ostream& out) const {
  out << csv_header() << '\n';
  for (const auto& r : rows_) write_csv_row(out, r);
}

void DiagnosticsLog::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_csv(out);
  if (!out) throw IoError("write failed for " + path);
}

double volume_variation_defect(std::span<const DiagnosticsRow> rows) {
  std::vector<const DiagnosticsRow*> acc;
  for (const auto& r : rows) {
    if (r.accepted) acc.push_back(&r);
  }
  if (acc.size() < 3) throw InvalidArgument("volume_variation_defect needs at least 3 accepted rows");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < acc.size(); ++i) {
    const double h1 = acc[i]->t - acc[i - 1]->t;
    const double h2 = acc[i + 1]->t - acc[i]->t;
    if (!(h1 > 0.0 && h2 > 0.0)) throw InvalidArgument("volume_variation_defect: times must increase");
    const double dvdt = -h2 / (h1 * (h1 + h2)) * acc[i - 1]->volume + (h2 - h1) / (h1 * h2) * acc[i]->volume +
                        h1 / (h2 * (h1 + h2)) * acc[i + 1]->volume;
    worst = std::max(worst, std::abs(dvdt - acc[i]->flux) / std::abs(acc[i]->flux));
  }
  return worst;
}

}  // namespace sgflow
