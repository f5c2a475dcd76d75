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

#include "sgflow/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sgflow/errors.hpp"
#include "sgflow/spectral.hpp"

namespace sgflow {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;

// Fourier differentiation matrices on `count` equispaced points of the circle.
void periodic_derivative_matrices(std::size_t count, RowMatrix& d1, RowMatrix& d2) {
  const double h = 2.0 * std::numbers::pi / count;
  d1.setZero(count, count);
  d2.setZero(count, count);
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t k = 0; k < count; ++k) {
      if (j == k) {
        d2(j, k) = -std::numbers::pi * std::numbers::pi / (3.0 * h * h) - 1.0 / 6.0;
        continue;
      }
      const long diff = static_cast<long>(j) - static_cast<long>(k);
      const double sign = (std::abs(diff) % 2 == 0) ? 1.0 : -1.0;
      const double half_angle = diff * h / 2.0;
      d1(j, k) = 0.5 * sign / std::tan(half_angle);
      const double s = std::sin(half_angle);
      d2(j, k) = -0.5 * sign / (s * s);
    }
  }
}

// Barycentric differentiation on arbitrary distinct nodes.
RowMatrix polynomial_derivative_matrix(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != i) w[i] *= 2.0 * (x[i] - x[k]);  // scaled to avoid underflow
    }
    w[i] = 1.0 / w[i];
  }
  RowMatrix d = RowMatrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      d(i, j) = (w[j] / w[i]) / (x[i] - x[j]);
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

// Second-derivative matrix from the first one; diagonal by negative row sums
// so constants are annihilated to rounding.
RowMatrix polynomial_second_derivative_matrix(std::span<const double> x, const RowMatrix& d) {
  const std::size_t n = x.size();
  RowMatrix d2 = RowMatrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      d2(i, j) = 2.0 * d(i, j) * (d(i, i) - 1.0 / (x[i] - x[j]));
      diag -= d2(i, j);
    }
    d2(i, i) = diag;
  }
  return d2;
}

}  // namespace

std::shared_ptr<const Grid> Grid::build(int dim, int resolution) {
  if (dim != 1 && dim != 2) {
    throw InvalidArgument("unsupported sphere dimension " + std::to_string(dim) + " (expected 1 or 2)");
  }
  if (resolution < 8) {
    throw InvalidArgument("grid resolution must be >= 8, got " + std::to_string(resolution));
  }
  if (resolution % 2 != 0) {
    throw InvalidArgument("grid resolution must be even for antipodal closure, got " +
                          std::to_string(resolution));
  }

  std::shared_ptr<Grid> g(new Grid());
  g->dim_ = dim;
  g->resolution_ = resolution;
  const double two_pi = 2.0 * std::numbers::pi;

  if (dim == 1) {
    const std::size_t count = static_cast<std::size_t>(resolution);
    g->rings_ = 1;
    g->ring_size_ = count;
    g->sin_theta_ = {1.0};
    g->cos_theta_ = {0.0};
    g->angles_.resize(count);
    Field c(count), s(count);
    for (std::size_t k = 0; k < count / 2; ++k) {
      const double a = two_pi * k / count;
      g->angles_[k] = a;
      g->angles_[k + count / 2] = a + std::numbers::pi;
      c[k] = std::cos(a);
      s[k] = std::sin(a);
      c[k + count / 2] = -c[k];
      s[k + count / 2] = -s[k];
    }
    g->nodes_.resize(count);
    g->weights_.assign(count, two_pi / count);
    g->antipode_.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
      g->nodes_[k] = Vec3(c[k], s[k], 0.0);
      g->antipode_[k] = (k + count / 2) % count;
    }
    RowMatrix d1, d2;
    periodic_derivative_matrices(count, d1, d2);
    g->periodic_d1_t_ = d1.transpose();
    g->periodic_d2_t_ = d2.transpose();
    return g;
  }

  const std::size_t lat = static_cast<std::size_t>(resolution);
  const std::size_t lon = 2 * lat;
  g->rings_ = lat;
  g->ring_size_ = lon;
  gauss_legendre(resolution, g->gl_x_, g->gl_w_);
  g->sin_theta_.resize(lat);
  g->cos_theta_.resize(lat);
  for (std::size_t j = 0; j < lat; ++j) {
    g->cos_theta_[j] = g->gl_x_[j];
    g->sin_theta_[j] = std::sqrt((1.0 - g->gl_x_[j]) * (1.0 + g->gl_x_[j]));
  }
  // exact mirror symmetry of the ring geometry
  for (std::size_t j = 0; j < lat / 2; ++j) {
    g->sin_theta_[lat - 1 - j] = g->sin_theta_[j];
  }

  g->angles_.resize(lon);
  Field c(lon), s(lon);
  for (std::size_t k = 0; k < lat; ++k) {
    const double a = two_pi * k / lon;
    g->angles_[k] = a;
    g->angles_[k + lat] = a + std::numbers::pi;
    c[k] = std::cos(a);
    s[k] = std::sin(a);
    c[k + lat] = -c[k];
    s[k + lat] = -s[k];
  }

  g->nodes_.resize(lat * lon);
  g->weights_.resize(lat * lon);
  g->antipode_.resize(lat * lon);
  const double dphi = two_pi / lon;
  for (std::size_t j = 0; j < lat; ++j) {
    for (std::size_t k = 0; k < lon; ++k) {
      const std::size_t i = j * lon + k;
      g->nodes_[i] = Vec3(g->sin_theta_[j] * c[k], g->sin_theta_[j] * s[k], g->cos_theta_[j]);
      g->weights_[i] = g->gl_w_[j] * dphi;
      g->antipode_[i] = (lat - 1 - j) * lon + (k + lat) % lon;
    }
  }

  RowMatrix d1, d2;
  periodic_derivative_matrices(lon, d1, d2);
  g->periodic_d1_t_ = d1.transpose();
  g->periodic_d2_t_ = d2.transpose();
  g->poly_d1_ = polynomial_derivative_matrix(g->gl_x_);
  g->poly_d2_ = polynomial_second_derivative_matrix(g->gl_x_, g->poly_d1_);

  // Real DFT analysis/synthesis with coefficient layout
  // [a_0, a_1, b_1, ..., a_{K-1}, b_{K-1}, a_K], K = lon/2.
  const std::size_t half = lon / 2;
  g->fourier_analysis_.setZero(lon, lon);
  g->fourier_synthesis_.setZero(lon, lon);
  for (std::size_t k = 0; k < lon; ++k) {
    g->fourier_analysis_(k, 0) = 1.0 / lon;
    g->fourier_synthesis_(0, k) = 1.0;
    const double nyq = (k % 2 == 0) ? 1.0 : -1.0;
    g->fourier_analysis_(k, lon - 1) = nyq / lon;
    g->fourier_synthesis_(lon - 1, k) = nyq;
    for (std::size_t m = 1; m < half; ++m) {
      const double ang = g->angles_[(m * k) % lon];
      const double cm = std::cos(ang), sm = std::sin(ang);
      g->fourier_analysis_(k, 2 * m - 1) = 2.0 * cm / lon;
      g->fourier_analysis_(k, 2 * m) = 2.0 * sm / lon;
      g->fourier_synthesis_(2 * m - 1, k) = cm;
      g->fourier_synthesis_(2 * m, k) = sm;
    }
  }

  // Per-order Legendre projectors B diag(w) B^T onto degrees m..L-1.
  const int lmax = resolution - 1;
  g->legendre_projectors_.resize(lat);
  std::vector<double> p(lat);
  for (int m = 0; m <= lmax; ++m) {
    const std::size_t nl = static_cast<std::size_t>(lmax - m + 1);
    RowMatrix b(lat, nl);
    for (std::size_t j = 0; j < lat; ++j) {
      normalized_legendre(lmax, m, g->gl_x_[j], std::span<double>(p.data(), nl));
      for (std::size_t l = 0; l < nl; ++l) b(j, l) = p[l];
    }
    RowMatrix bw = b.transpose();
    for (std::size_t j = 0; j < lat; ++j) bw.col(j) *= g->gl_w_[j];
    g->legendre_projectors_[m] = b * bw;
  }
  return g;
}

Vec3 Grid::tangent1(std::size_t i) const {
  const std::size_t j = i / ring_size_;
  const std::size_t k = i % ring_size_;
  const Vec3& u = nodes_[i];
  if (dim_ == 1) return Vec3(-u.y(), u.x(), 0.0);
  const double st = sin_theta_[j];
  const double cphi = u.x() / st, sphi = u.y() / st;
  (void)k;
  return Vec3(cos_theta_[j] * cphi, cos_theta_[j] * sphi, -st);
}

Vec3 Grid::tangent2(std::size_t i) const {
  if (dim_ == 1) return Vec3::Zero();
  const std::size_t j = i / ring_size_;
  const Vec3& u = nodes_[i];
  const double st = sin_theta_[j];
  return Vec3(-u.y() / st, u.x() / st, 0.0);
}

int Grid::design_degree() const {
  return dim_ == 1 ? resolution_ / 2 - 1 : resolution_ - 1;
}

double Grid::laplacian_bound() const {
  const double d = design_degree();
  return dim_ == 1 ? d * d : d * (d + 1.0);
}

double Grid::min_spacing() const {
  const double two_pi = 2.0 * std::numbers::pi;
  if (dim_ == 1) return two_pi / ring_size_;
  double best = 2.0 * std::acos(std::min(1.0, cos_theta_[0]));  // across the pole
  for (std::size_t j = 0; j < rings_; ++j) {
    best = std::min(best, sin_theta_[j] * two_pi / ring_size_);
    if (j + 1 < rings_) best = std::min(best, std::acos(cos_theta_[j + 1]) - std::acos(cos_theta_[j]));
  }
  return best;
}

Partials Grid::partials(std::span<const double> f) const {
  if (f.size() != size()) throw InvalidArgument("partials: field length mismatch");
  for (double v : f) {
    if (!std::isfinite(v)) throw NumericalError("partials: non-finite field value");
  }
  Partials out;
  const auto rows = static_cast<Eigen::Index>(rings_);
  const auto cols = static_cast<Eigen::Index>(ring_size_);
  ConstMap fm(f.data(), rows, cols);

  auto to_field = [](const RowMatrix& m) { return Field(m.data(), m.data() + m.size()); };

  if (dim_ == 1) {
    RowMatrix a = fm * periodic_d1_t_;
    RowMatrix b = fm * periodic_d2_t_;
    out.d1 = to_field(a);
    out.d11 = to_field(b);
    return out;
  }

  Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(sin_theta_.data(), rows);
  Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(cos_theta_.data(), rows);
  const Eigen::Index half = cols / 2;

  // Great-circle even/odd split in colatitude: partner node is (theta, phi+pi).
  auto shifted = [&](const RowMatrix& m) {
    RowMatrix r(rows, cols);
    r.leftCols(half) = m.rightCols(half);
    r.rightCols(half) = m.leftCols(half);
    return r;
  };
  auto theta_derivatives = [&](const RowMatrix& m, RowMatrix* first, RowMatrix* second) {
    const RowMatrix sh = shifted(m);
    const RowMatrix even = 0.5 * (m + sh);
    RowMatrix q = 0.5 * (m - sh);
    q.array().colwise() /= s.array();
    const RowMatrix ex = poly_d1_ * even;
    const RowMatrix qx = poly_d1_ * q;
    // e(theta) = E(cos theta), o(theta) = sin(theta) Q(cos theta)
    if (first) {
      *first = (-(ex.array().colwise() * s.array()) + q.array().colwise() * c.array() -
                qx.array().colwise() * (s.array() * s.array()))
                   .matrix();
    }
    if (second) {
      const RowMatrix exx = poly_d2_ * even;
      const RowMatrix qxx = poly_d2_ * q;
      *second = (exx.array().colwise() * (s.array() * s.array()) - ex.array().colwise() * c.array() -
                 q.array().colwise() * s.array() - 3.0 * (qx.array().colwise() * (s.array() * c.array())) +
                 qxx.array().colwise() * (s.array() * s.array() * s.array()))
                    .matrix();
    }
  };

  // Ring means carry no longitude derivative; removing them keeps rounding
  // proportional to the ring's variation, which vanishes near the poles.
  RowMatrix centered = fm;
  centered.colwise() -= fm.rowwise().mean();
  RowMatrix f_p = centered * periodic_d1_t_;
  RowMatrix f_pp = centered * periodic_d2_t_;
  RowMatrix f_t, f_tt, f_tp;
  theta_derivatives(fm, &f_t, &f_tt);
  theta_derivatives(f_p, &f_tp, nullptr);

  out.d1 = to_field(f_t);
  out.d11 = to_field(f_tt);
  out.d2 = to_field(f_p);
  out.d22 = to_field(f_pp);
  out.d12 = to_field(f_tp);
  return out;
}

Field Grid::band_limit(std::span<const double> f) const {
  if (f.size() != size()) throw InvalidArgument("band_limit: field length mismatch");
  if (dim_ == 1) {
    const std::size_t count = ring_size_;
    double nyq = 0.0;
    for (std::size_t k = 0; k < count; ++k) nyq += (k % 2 == 0 ? f[k] : -f[k]);
    nyq /= count;
    Field out(f.begin(), f.end());
    for (std::size_t k = 0; k < count; ++k) out[k] -= (k % 2 == 0 ? nyq : -nyq);
    return out;
  }
  const auto rows = static_cast<Eigen::Index>(rings_);
  const auto cols = static_cast<Eigen::Index>(ring_size_);
  ConstMap fm(f.data(), rows, cols);
  RowMatrix coeff = fm * fourier_analysis_;
  RowMatrix projected = RowMatrix::Zero(rows, cols);
  projected.col(0) = legendre_projectors_[0] * coeff.col(0);
  for (Eigen::Index m = 1; m < rows; ++m) {
    projected.col(2 * m - 1) = legendre_projectors_[m] * coeff.col(2 * m - 1);
    projected.col(2 * m) = legendre_projectors_[m] * coeff.col(2 * m);
  }
  RowMatrix back = projected * fourier_synthesis_;
  return Field(back.data(), back.data() + back.size());
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) comp += (sum - t) + v;
    else comp += (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double integrate(std::span<const double> f, const Grid& g) {
  if (f.size() != g.size()) {
    throw InvalidArgument("integrate: field has " + std::to_string(f.size()) + " values, grid has " +
                          std::to_string(g.size()) + " nodes");
  }
  const auto w = g.weights();
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f[i] * w[i];
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) comp += (sum - t) + v;
    else comp += (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

SymmetricTensorField covariant_hessian(std::span<const double> f, const Grid& g) {
  Partials d = g.partials(f);
  SymmetricTensorField hess;
  if (g.dim() == 1) {
    hess.tt = std::move(d.d11);
    return hess;
  }
  const std::size_t n = g.size(), per = g.ring_size();
  hess.tt = std::move(d.d11);
  hess.tp.resize(n);
  hess.pp.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i / per;
    const double st = g.sin_colatitude(j), ct = g.cos_colatitude(j);
    // Gamma^phi_{theta phi} = cot(theta), Gamma^theta_{phi phi} = -sin cos
    hess.tp[i] = d.d12[i] - (ct / st) * d.d2[i];
    hess.pp[i] = d.d22[i] + st * ct * d.d1[i];
  }
  return hess;
}

Field sample(const Grid& g, const std::function<double(const Vec3&)>& fn) {
  Field out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = fn(g.node(i));
  return out;
}

Field reflect(std::span<const double> f, const Grid& g) {
  if (f.size() != g.size()) throw InvalidArgument("reflect: field length mismatch");
  Field out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[g.antipode(i)];
  return out;
}

double antipodal_defect(std::span<const double> f, const Grid& g) {
  if (f.size() != g.size()) throw InvalidArgument("antipodal_defect: field length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(f[i] - f[g.antipode(i)]));
  return worst;
}

}  // namespace sgflow
