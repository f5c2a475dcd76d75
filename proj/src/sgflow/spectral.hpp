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

#ifndef SGFLOW_SPECTRAL_HPP_
#define SGFLOW_SPECTRAL_HPP_

#include <span>
#include <vector>

#include "sgflow/sphere_grid.hpp"

namespace sgflow {

// Gauss-Legendre nodes (descending, x_0 closest to +1) and weights.
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

// Associated Legendre functions of order m, normalized so that
// int_{-1}^{1} P(x)^2 dx = 1, for degrees m..lmax. out[l - m].
void normalized_legendre(int lmax, int m, double x, std::span<double> out);

// Real spherical harmonic of degree l and order m (|m| <= l), orthonormal on
// S^2: m > 0 uses cos(m phi), m < 0 uses sin(|m| phi).
double real_spherical_harmonic(int l, int m, const Vec3& u);

// Spectral evaluation of a grid field at arbitrary points of the sphere:
// trigonometric in longitude, Gauss-Legendre barycentric in colatitude with
// the even/odd great-circle split. Exact for band-limited fields.
class Interpolator {
 public:
  Interpolator(const Grid& grid, std::span<const double> f);
  double operator()(const Vec3& u) const;

 private:
  const Grid* grid_;
  std::size_t rings_, ring_size_;
  std::vector<double> coeffs_;  // per ring: a_0, (a_m, b_m) m=1..K-1, a_K
  std::vector<double> bary_;
};

}  // namespace sgflow

#endif  // SGFLOW_SPECTRAL_HPP_
