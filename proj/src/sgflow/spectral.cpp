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

#include "sgflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sgflow/errors.hpp"

namespace sgflow {

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // One more derivative evaluation at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= count; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = count * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = x;
    nodes[count - 1 - i] = -x;
    weights[i] = w;
    weights[count - 1 - i] = w;
  }
  if (count % 2 == 1) nodes[count / 2] = 0.0;
}

void normalized_legendre(int lmax, int m, double x, std::span<double> out) {
  if (m < 0 || lmax < m || out.size() < static_cast<std::size_t>(lmax - m + 1)) {
    throw InvalidArgument("normalized_legendre: bad degree/order");
  }
  const double s2 = std::max(0.0, 1.0 - x * x);
  // P_m^m = sqrt((2m+1)/2 * prod_{k<=m} (2k-1)/(2k)) (1-x^2)^{m/2}
  double pmm = std::sqrt(0.5);
  for (int k = 1; k <= m; ++k) {
    pmm *= std::sqrt((2.0 * k + 1.0) / (2.0 * k) * s2);
  }
  out[0] = pmm;
  if (lmax == m) return;
  double prev = pmm;
  double cur = std::sqrt(2.0 * m + 3.0) * x * pmm;
  out[1] = cur;
  for (int l = m + 2; l <= lmax; ++l) {
    const double l2 = static_cast<double>(l) * l;
    const double m2 = static_cast<double>(m) * m;
    const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
    const double lp = l - 1.0;
    const double b = std::sqrt((lp * lp - m2) / (4.0 * lp * lp - 1.0));
    const double next = a * (x * cur - b * prev);
    prev = cur;
    cur = next;
    out[l - m] = cur;
  }
}

double real_spherical_harmonic(int l, int m, const Vec3& u) {
  const int am = std::abs(m);
  if (am > l) throw InvalidArgument("real_spherical_harmonic: |m| > l");
  const double z = std::clamp(u.z() / u.norm(), -1.0, 1.0);
  std::vector<double> p(l - am + 1);
  normalized_legendre(l, am, z, p);
  const double phi = std::atan2(u.y(), u.x());
  const double pl = p[l - am];
  if (m == 0) return pl / std::sqrt(2.0 * std::numbers::pi);
  const double norm = 1.0 / std::sqrt(std::numbers::pi);
  return m > 0 ? pl * norm * std::cos(am * phi) : pl * norm * std::sin(am * phi);
}

namespace {

// Fourier coefficients of one ring of `count` equispaced samples.
void ring_coefficients(const double* values, std::size_t count,
                       std::span<const double> angles, double* out) {
  const std::size_t half = count / 2;
  double a0 = 0.0, nyq = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    a0 += values[k];
    nyq += (k % 2 == 0 ? values[k] : -values[k]);
  }
  out[0] = a0 / count;
  out[count - 1] = nyq / count;
  for (std::size_t m = 1; m < half; ++m) {
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      // m*k mod count keeps the argument on the exact node angles
      const double ang = angles[(m * k) % count];
      a += values[k] * std::cos(ang);
      b += values[k] * std::sin(ang);
    }
    out[2 * m - 1] = 2.0 * a / count;
    out[2 * m] = 2.0 * b / count;
  }
}

}  // namespace

Interpolator::Interpolator(const Grid& grid, std::span<const double> f)
    : grid_(&grid), rings_(grid.rings()), ring_size_(grid.ring_size()) {
  if (f.size() != grid.size()) throw InvalidArgument("Interpolator: field length mismatch");
  std::vector<double> angles(ring_size_);
  for (std::size_t k = 0; k < ring_size_; ++k) angles[k] = grid.angle(k);
  coeffs_.resize(rings_ * ring_size_);
  for (std::size_t j = 0; j < rings_; ++j) {
    ring_coefficients(f.data() + j * ring_size_, ring_size_, angles, coeffs_.data() + j * ring_size_);
  }
  if (grid.dim() == 2) {
    // Barycentric weights for Gauss-Legendre points.
    const auto x = grid.gl_nodes();
    const auto w = grid.gl_weights();
    bary_.resize(rings_);
    for (std::size_t j = 0; j < rings_; ++j) {
      bary_[j] = (j % 2 == 0 ? 1.0 : -1.0) * std::sqrt((1.0 - x[j] * x[j]) * w[j]);
    }
  }
}

double Interpolator::operator()(const Vec3& u) const {
  const std::size_t count = ring_size_;
  const std::size_t half = count / 2;
  thread_local std::vector<double> cm, sm;
  cm.resize(half + 1);
  sm.resize(half + 1);

  auto trig_table = [&](double phi) {
    cm[0] = 1.0;
    sm[0] = 0.0;
    const double c1 = std::cos(phi), s1 = std::sin(phi);
    for (std::size_t m = 1; m <= half; ++m) {
      if (m % 16 == 0) {
        cm[m] = std::cos(m * phi);
        sm[m] = std::sin(m * phi);
      } else {
        cm[m] = cm[m - 1] * c1 - sm[m - 1] * s1;
        sm[m] = sm[m - 1] * c1 + cm[m - 1] * s1;
      }
    }
  };

  if (grid_->dim() == 1) {
    const double phi = std::atan2(u.y(), u.x());
    trig_table(phi);
    const double* c = coeffs_.data();
    double acc = c[0] + c[count - 1] * cm[half];
    for (std::size_t m = 1; m < half; ++m) acc += c[2 * m - 1] * cm[m] + c[2 * m] * sm[m];
    return acc;
  }

  const double rho = std::hypot(u.x(), u.y());
  const double theta = std::atan2(rho, u.z());
  const double phi = rho > 0.0 ? std::atan2(u.y(), u.x()) : 0.0;
  trig_table(phi);
  const double x = std::cos(theta);
  const double st = std::sin(theta);

  const auto xs = grid_->gl_nodes();
  double num_e = 0.0, num_q = 0.0, den = 0.0;
  for (std::size_t j = 0; j < rings_; ++j) {
    const double* c = coeffs_.data() + j * count;
    double even_m = c[0], odd_m = 0.0;
    if (half % 2 == 0) even_m += c[count - 1] * cm[half];
    else odd_m += c[count - 1] * cm[half];
    for (std::size_t m = 1; m < half; ++m) {
      const double term = c[2 * m - 1] * cm[m] + c[2 * m] * sm[m];
      if (m % 2 == 0) even_m += term;
      else odd_m += term;
    }
    // value at (theta_j, phi) = even_m + odd_m; at (theta_j, phi + pi) = even_m - odd_m
    const double e = even_m;
    const double q = odd_m / grid_->sin_colatitude(j);
    const double diff = x - xs[j];
    if (diff == 0.0) return e + st * q;
    const double t = bary_[j] / diff;
    num_e += t * e;
    num_q += t * q;
    den += t;
  }
  return (num_e + st * num_q) / den;
}

}  // namespace sgflow
