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

#ifndef SGFLOW_CONVEX_BODY_HPP_
#define SGFLOW_CONVEX_BODY_HPP_

#include <span>
#include <vector>

#include "sgflow/sphere_grid.hpp"

namespace sgflow {

// Support function h > 0 sampled on a grid; the origin is interior.
class SupportField {
 public:
  SupportField(GridPtr grid, Field values);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Field& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  int dim() const { return grid_->dim(); }

  double min() const;
  double max() const;

  SupportField scaled(double factor) const;
  // Support function of K + v, i.e. h(u) + v.u.
  SupportField translated(const Vec3& shift) const;

 private:
  GridPtr grid_;
  Field values_;
};

// Per-node curvature quantities derived from a support function. The
// radii matrix is kept in the chart basis; `radius_min/max` are its
// eigenvalues relative to the round metric.
struct CurvatureData {
  SymmetricTensorField r_matrix;
  Field sn;
  Field gauss;
  Field radius_min, radius_max;
  Field trace_inverse;  // tr(r^{-1} g) = sum of principal curvatures
  Field grad1, grad2;   // tangential gradient of h in the orthonormal frame

  CurvatureData scaled(double factor, int dim) const;
};

// Relative eigenvalue floor below which a radii matrix is degenerate.
inline constexpr double kConvexityTolerance = 1e-8;

double unit_ball_volume(int dim);

// Throws ConvexityError with the worst node when r is not positive definite.
CurvatureData curvature(const SupportField& h);

double volume(const SupportField& h);
double volume(const SupportField& h, const CurvatureData& curv);

SupportField normalize_to_unit_volume(const SupportField& h);

// Boundary point with outer normal u: x(u) = h(u) u + grad h(u).
std::vector<Vec3> embed(const SupportField& h);
std::vector<Vec3> embed(const SupportField& h, const CurvatureData& curv);

struct PolarOptions {
  // Refine the grid maximum by Newton iteration on a spectral interpolant.
  bool refine = true;
};

// Support function of the polar body, h*(u) = max_v u.v / h(v).
SupportField polar(const SupportField& h, PolarOptions options = {});

// max_u |(S h^{n+2})(u) (S* h*^{n+2})(u*) - 1| with u* = x(u)/|x(u)|.
double duality_residual(const SupportField& h);

// int u / (phi h^{1-p}) dsigma; components beyond n+1 are zero.
Vec3 lp_barycenter(const SupportField& h, std::span<const double> phi, double p);

struct RecenterResult {
  Vec3 shift = Vec3::Zero();
  double barycenter_norm = 0.0;
  int iterations = 0;
};

// Damped Newton for v with |lp_barycenter(h + v.u)| < tol.
RecenterResult recenter(const SupportField& h, std::span<const double> phi, double p, double tol);

}  // namespace sgflow

#endif  // SGFLOW_CONVEX_BODY_HPP_
