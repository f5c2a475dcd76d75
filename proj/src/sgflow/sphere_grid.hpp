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

#ifndef SGFLOW_SPHERE_GRID_HPP_
#define SGFLOW_SPHERE_GRID_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sgflow {

using Field = std::vector<double>;
using Vec3 = Eigen::Vector3d;

// Chart partial derivatives of a scalar field. For n=1 only `d1`/`d11`
// (with respect to the polar angle) are populated. For n=2 the chart is
// (colatitude theta, longitude phi).
struct Partials {
  Field d1, d11;
  Field d2, d22, d12;
};

// Symmetric covariant 2-tensor in the chart basis; n=1 uses `tt` only.
struct SymmetricTensorField {
  Field tt, tp, pp;
};

// Tensor-product discretization of S^1 (uniform angles) or S^2
// (Gauss-Legendre colatitudes x equispaced longitudes). Nodes are stored
// ring-major: index = ring * ring_size + k. Immutable once built.
class Grid {
 public:
  // n in {1,2}; resolution even and >= 8. For n=2, L latitudes x 2L
  // longitudes; for n=1, `resolution` uniform angles.
  static std::shared_ptr<const Grid> build(int dim, int resolution);

  int dim() const { return dim_; }
  int resolution() const { return resolution_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t rings() const { return rings_; }
  std::size_t ring_size() const { return ring_size_; }

  const Vec3& node(std::size_t i) const { return nodes_[i]; }
  std::span<const Vec3> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t antipode(std::size_t i) const { return antipode_[i]; }

  // Ring geometry (n=2). For n=1 there is a single ring at theta = pi/2.
  double sin_colatitude(std::size_t ring) const { return sin_theta_[ring]; }
  double cos_colatitude(std::size_t ring) const { return cos_theta_[ring]; }
  double angle(std::size_t k) const { return angles_[k]; }

  // Orthonormal tangent frame: e1 along the first chart coordinate, e2 along
  // longitude (n=2 only).
  Vec3 tangent1(std::size_t i) const;
  Vec3 tangent2(std::size_t i) const;

  // Spherical-harmonic degree (n=2) or Fourier order (n=1) up to which
  // differentiation, interpolation and quadrature are exact.
  int design_degree() const;
  // Largest Laplacian eigenvalue magnitude retained by band_limit().
  double laplacian_bound() const;
  // Smallest geodesic distance between neighbouring nodes.
  double min_spacing() const;

  Partials partials(std::span<const double> f) const;
  // Orthogonal projection onto harmonics of degree <= design_degree().
  Field band_limit(std::span<const double> f) const;

  // Latitude nodes x_j = cos(theta_j) and Gauss-Legendre weights (n=2).
  std::span<const double> gl_nodes() const { return gl_x_; }
  std::span<const double> gl_weights() const { return gl_w_; }

 private:
  Grid() = default;

  int dim_ = 0;
  int resolution_ = 0;
  std::size_t rings_ = 0;
  std::size_t ring_size_ = 0;
  std::vector<Vec3> nodes_;
  Field weights_;
  std::vector<std::size_t> antipode_;
  Field sin_theta_, cos_theta_, angles_;
  Field gl_x_, gl_w_;

  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Matrix periodic_d1_t_, periodic_d2_t_;  // transposed, applied from the right
  Matrix poly_d1_, poly_d2_;              // d/dx, d2/dx2 on GL nodes
  Matrix fourier_analysis_, fourier_synthesis_;
  std::vector<Matrix> legendre_projectors_;  // per order m
};

using GridPtr = std::shared_ptr<const Grid>;

// Quadrature sum of f against the grid weights, fixed order, compensated.
double integrate(std::span<const double> f, const Grid& g);

// Covariant Hessian with respect to the round metric.
SymmetricTensorField covariant_hessian(std::span<const double> f, const Grid& g);

Field sample(const Grid& g, const std::function<double(const Vec3&)>& fn);

// f(-u) as a field.
Field reflect(std::span<const double> f, const Grid& g);
double antipodal_defect(std::span<const double> f, const Grid& g);

// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> values);

}  // namespace sgflow

#endif  // SGFLOW_SPHERE_GRID_HPP_
