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

#include "sgflow/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "sgflow/errors.hpp"
#include "sgflow/spectral.hpp"

namespace sgflow {

SupportField::SupportField(GridPtr grid, Field values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("SupportField: null grid");
  if (values_.size() != grid_->size()) {
    throw InvalidArgument("SupportField: " + std::to_string(values_.size()) + " values for a grid of " +
                          std::to_string(grid_->size()) + " nodes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw InvalidArgument("SupportField: non-finite value at node " + std::to_string(i));
    if (values_[i] <= 0.0) {
      std::ostringstream msg;
      msg << "SupportField: origin not interior, h = " << values_[i] << " at node " << i;
      throw InvalidArgument(msg.str());
    }
  }
}

double SupportField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double SupportField::max() const { return *std::max_element(values_.begin(), values_.end()); }

SupportField SupportField::scaled(double factor) const {
  Field v(values_);
  for (double& x : v) x *= factor;
  return SupportField(grid_, std::move(v));
}

SupportField SupportField::translated(const Vec3& shift) const {
  Field v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += shift.dot(grid_->node(i));
  return SupportField(grid_, std::move(v));
}

CurvatureData CurvatureData::scaled(double factor, int dim) const {
  CurvatureData out(*this);
  const double fn = std::pow(factor, dim);
  auto mul = [](Field& f, double s) {
    for (double& x : f) x *= s;
  };
  mul(out.r_matrix.tt, factor);
  mul(out.r_matrix.tp, factor);
  mul(out.r_matrix.pp, factor);
  mul(out.sn, fn);
  mul(out.gauss, 1.0 / fn);
  mul(out.radius_min, factor);
  mul(out.radius_max, factor);
  mul(out.trace_inverse, 1.0 / factor);
  mul(out.grad1, factor);
  mul(out.grad2, factor);
  return out;
}

double unit_ball_volume(int dim) {
  if (dim == 1) return std::numbers::pi;
  if (dim == 2) return 4.0 * std::numbers::pi / 3.0;
  throw InvalidArgument("unit_ball_volume: unsupported dimension");
}

CurvatureData curvature(const SupportField& h) {
  const Grid& g = h.grid();
  const auto& hv = h.values();
  const std::size_t n = g.size();
  Partials d = g.partials(hv);

  CurvatureData c;
  c.sn.resize(n);
  c.gauss.resize(n);
  c.radius_min.resize(n);
  c.radius_max.resize(n);
  c.trace_inverse.resize(n);
  c.grad1 = d.d1;

  std::size_t worst_node = 0;
  double worst_ratio = std::numeric_limits<double>::infinity();
  double worst_eig = 0.0;

  if (g.dim() == 1) {
    c.r_matrix.tt.resize(n);
    c.grad2.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = d.d11[i] + hv[i];
      c.r_matrix.tt[i] = r;
      c.sn[i] = r;
      c.gauss[i] = 1.0 / r;
      c.radius_min[i] = c.radius_max[i] = r;
      c.trace_inverse[i] = 1.0 / r;
      if (r < worst_eig || i == 0) {
        worst_eig = r;
        worst_node = i;
      }
    }
    if (!(worst_eig > 0.0)) {
      std::ostringstream msg;
      msg << "convexity lost: radius of curvature " << worst_eig << " at node " << worst_node;
      throw ConvexityError(msg.str(), worst_node, worst_eig);
    }
    return c;
  }

  const std::size_t per = g.ring_size();
  c.r_matrix.tt.resize(n);
  c.r_matrix.tp.resize(n);
  c.r_matrix.pp.resize(n);
  c.grad2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i / per;
    const double st = g.sin_colatitude(j), ct = g.cos_colatitude(j);
    const double r_tt = d.d11[i] + hv[i];
    const double r_tp = d.d12[i] - (ct / st) * d.d2[i];
    const double r_pp = d.d22[i] + st * ct * d.d1[i] + st * st * hv[i];
    c.r_matrix.tt[i] = r_tt;
    c.r_matrix.tp[i] = r_tp;
    c.r_matrix.pp[i] = r_pp;
    c.grad2[i] = d.d2[i] / st;

    // orthonormal frame components
    const double a = r_tt, b = r_tp / st, e = r_pp / (st * st);
    const double mean = 0.5 * (a + e);
    const double rad = std::hypot(0.5 * (a - e), b);
    const double lo = mean - rad, hi = mean + rad;
    const double det = a * e - b * b;
    c.radius_min[i] = lo;
    c.radius_max[i] = hi;
    c.sn[i] = det;
    c.gauss[i] = 1.0 / det;
    c.trace_inverse[i] = (a + e) / det;
    const double ratio = (a + e) > 0.0 ? lo / (a + e) : -std::numeric_limits<double>::infinity();
    if (ratio < worst_ratio) {
      worst_ratio = ratio;
      worst_node = i;
      worst_eig = lo;
    }
  }
  if (!(worst_ratio > kConvexityTolerance)) {
    std::ostringstream msg;
    msg << "convexity lost: smallest principal radius " << worst_eig << " at node " << worst_node
        << " (relative " << worst_ratio << ")";
    throw ConvexityError(msg.str(), worst_node, worst_eig);
  }
  return c;
}

double volume(const SupportField& h, const CurvatureData& curv) {
  const auto& hv = h.values();
  Field integrand(hv.size());
  for (std::size_t i = 0; i < hv.size(); ++i) integrand[i] = hv[i] * curv.sn[i];
  return integrate(integrand, h.grid()) / (h.dim() + 1.0);
}

double volume(const SupportField& h) { return volume(h, curvature(h)); }

SupportField normalize_to_unit_volume(const SupportField& h) {
  const double v = volume(h);
  return h.scaled(std::pow(unit_ball_volume(h.dim()) / v, 1.0 / (h.dim() + 1.0)));
}

std::vector<Vec3> embed(const SupportField& h, const CurvatureData& curv) {
  const Grid& g = h.grid();
  std::vector<Vec3> x(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    x[i] = h[i] * g.node(i) + curv.grad1[i] * g.tangent1(i);
    if (g.dim() == 2) x[i] += curv.grad2[i] * g.tangent2(i);
  }
  return x;
}

std::vector<Vec3> embed(const SupportField& h) {
  // Only the gradient is needed; avoid the convexity guard.
  const Grid& g = h.grid();
  Partials d = g.partials(h.values());
  CurvatureData c;
  c.grad1 = d.d1;
  if (g.dim() == 2) {
    c.grad2.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) c.grad2[i] = d.d2[i] / g.sin_colatitude(i / g.ring_size());
  }
  return embed(h, c);
}

namespace {

// Unit vector obtained by moving from v along tangent offsets (a, b).
Vec3 offset_direction(const Vec3& v, const Vec3& t1, const Vec3& t2, double a, double b) {
  return (v + a * t1 + b * t2).normalized();
}

void tangent_basis(const Vec3& v, int dim, Vec3& t1, Vec3& t2) {
  if (dim == 1) {
    t1 = Vec3(-v.y(), v.x(), 0.0).normalized();
    t2 = Vec3::Zero();
    return;
  }
  const Vec3 axis = std::abs(v.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  t1 = axis.cross(v).normalized();
  t2 = v.cross(t1);
}

// Maximizes u.w / h(w) near `start` using finite-difference Newton steps.
double refine_polar_max(const Vec3& u, Vec3 v, double start_value, const Interpolator& interp, int dim,
                        double max_step) {
  auto value = [&](const Vec3& w) { return u.dot(w) / interp(w); };
  const double s = 2e-3;
  double best = start_value;
  for (int iter = 0; iter < 12; ++iter) {
    Vec3 t1, t2;
    tangent_basis(v, dim, t1, t2);
    const double f0 = value(v);
    best = std::max(best, f0);
    const double fa_p = value(offset_direction(v, t1, t2, s, 0.0));
    const double fa_m = value(offset_direction(v, t1, t2, -s, 0.0));
    double da, db = 0.0;
    if (dim == 1) {
      const double g = (fa_p - fa_m) / (2.0 * s);
      const double hs = (fa_p - 2.0 * f0 + fa_m) / (s * s);
      da = hs < 0.0 ? -g / hs : g * s;
    } else {
      const double fb_p = value(offset_direction(v, t1, t2, 0.0, s));
      const double fb_m = value(offset_direction(v, t1, t2, 0.0, -s));
      const double fpp = value(offset_direction(v, t1, t2, s, s));
      const double fpm = value(offset_direction(v, t1, t2, s, -s));
      const double fmp = value(offset_direction(v, t1, t2, -s, s));
      const double fmm = value(offset_direction(v, t1, t2, -s, -s));
      const double ga = (fa_p - fa_m) / (2.0 * s);
      const double gb = (fb_p - fb_m) / (2.0 * s);
      const double haa = (fa_p - 2.0 * f0 + fa_m) / (s * s);
      const double hbb = (fb_p - 2.0 * f0 + fb_m) / (s * s);
      const double hab = (fpp - fpm - fmp + fmm) / (4.0 * s * s);
      const double det = haa * hbb - hab * hab;
      if (haa < 0.0 && det > 0.0) {
        da = -(hbb * ga - hab * gb) / det;
        db = -(haa * gb - hab * ga) / det;
      } else {
        da = ga * s;
        db = gb * s;
      }
    }
    const double len = std::hypot(da, db);
    if (len > max_step) {
      da *= max_step / len;
      db *= max_step / len;
    }
    v = offset_direction(v, t1, t2, da, db);
    if (len < 1e-10) break;
  }
  return std::max(best, value(v));
}

}  // namespace

SupportField polar(const SupportField& h, PolarOptions options) {
  const Grid& g = h.grid();
  const std::size_t n = g.size();
  std::vector<Vec3> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = g.node(i) / h[i];

  std::optional<Interpolator> interp;
  if (options.refine) interp.emplace(g, h.values());
  const double max_step = 2.0 * g.min_spacing() + 0.5 * std::numbers::pi / g.resolution();

  Field out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& u = g.node(i);
    std::size_t arg = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      const double v = u.dot(q[k]);
      if (v > best) {
        best = v;
        arg = k;
      }
    }
    if (interp) best = refine_polar_max(u, g.node(arg), best, *interp, g.dim(), max_step);
    out[i] = best;
  }
  // The refined values are smooth up to rounding; projecting onto the
  // resolved harmonics keeps that rounding out of later differentiation.
  if (options.refine) out = g.band_limit(out);
  return SupportField(h.grid_ptr(), std::move(out));
}

double duality_residual(const SupportField& h) {
  const Grid& g = h.grid();
  const int dim = g.dim();
  const CurvatureData c = curvature(h);
  const std::vector<Vec3> x = embed(h, c);
  const SupportField hs = polar(h);
  const CurvatureData cs = curvature(hs);
  Field starred(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) starred[i] = cs.sn[i] * std::pow(hs[i], dim + 2);
  const Interpolator interp(g, starred);

  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 ustar = x[i].normalized();
    const double lhs = c.sn[i] * std::pow(h[i], dim + 2) * interp(ustar);
    worst = std::max(worst, std::abs(lhs - 1.0));
  }
  return worst;
}

Vec3 lp_barycenter(const SupportField& h, std::span<const double> phi, double p) {
  const Grid& g = h.grid();
  if (phi.size() != g.size()) throw InvalidArgument("lp_barycenter: phi length mismatch");
  Field fx(g.size()), fy(g.size()), fz(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = 1.0 / (phi[i] * std::pow(h[i], 1.0 - p));
    const Vec3& u = g.node(i);
    fx[i] = u.x() * w;
    fy[i] = u.y() * w;
    fz[i] = u.z() * w;
  }
  Vec3 out(integrate(fx, g), integrate(fy, g), g.dim() == 2 ? integrate(fz, g) : 0.0);
  return out;
}

RecenterResult recenter(const SupportField& h, std::span<const double> phi, double p, double tol) {
  const Grid& g = h.grid();
  const int comps = g.dim() + 1;
  if (p == 1.0) {
    throw NumericalError("recenter: for p = 1 the barycenter does not depend on the translation");
  }
  for (double v : phi) {
    if (!(v > 0.0)) throw InvalidArgument("recenter: phi must be positive");
  }

  auto min_translated = [&](const Vec3& v) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) lo = std::min(lo, h[i] + v.dot(g.node(i)));
    return lo;
  };
  auto barycenter_at = [&](const Vec3& v) { return lp_barycenter(h.translated(v), phi, p); };

  double width = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) width = std::max(width, h[i] + h[g.antipode(i)]);
  const double fd_step = 1e-5 * width;

  RecenterResult res;
  Vec3 v = Vec3::Zero();
  Vec3 b = barycenter_at(v);
  for (int iter = 0; iter < 60; ++iter) {
    res.iterations = iter;
    if (b.norm() < tol) break;
    Eigen::Matrix3d jac = Eigen::Matrix3d::Identity();
    for (int k = 0; k < comps; ++k) {
      Vec3 e = Vec3::Zero();
      e[k] = fd_step;
      const Vec3 col = (barycenter_at(v + e) - barycenter_at(v - e)) / (2.0 * fd_step);
      for (int r = 0; r < comps; ++r) jac(r, k) = col[r];
    }
    Vec3 rhs = -b;
    if (comps == 2) rhs.z() = 0.0;
    const Vec3 dv = jac.partialPivLu().solve(rhs);
    if (!dv.allFinite()) {
      std::ostringstream msg;
      msg << "recenter: singular barycenter Jacobian at v = (" << v.transpose() << ")";
      throw NumericalError(msg.str());
    }
    double alpha = 1.0;
    bool moved = false;
    for (int k = 0; k < 40; ++k, alpha *= 0.5) {
      const Vec3 trial = v + alpha * dv;
      if (min_translated(trial) <= 0.0) continue;
      const Vec3 bt = barycenter_at(trial);
      if (bt.norm() < b.norm()) {
        v = trial;
        b = bt;
        moved = true;
        break;
      }
    }
    if (!moved) {
      std::ostringstream msg;
      msg << "recenter: no admissible translation found; last iterate (" << v.transpose()
          << "), |barycenter| = " << b.norm();
      throw NumericalError(msg.str());
    }
  }
  if (!(b.norm() < tol)) {
    std::ostringstream msg;
    msg << "recenter: did not reach tolerance; last iterate (" << v.transpose() << "), |barycenter| = " << b.norm();
    throw NumericalError(msg.str());
  }
  res.shift = v;
  res.barycenter_norm = b.norm();
  return res;
}

}  // namespace sgflow
