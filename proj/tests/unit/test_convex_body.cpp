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

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sgflow/convex_body.hpp"
#include "sgflow/errors.hpp"

using sgflow::Field;
using sgflow::Grid;
using sgflow::GridPtr;
using sgflow::SupportField;
using sgflow::Vec3;

namespace {

SupportField ellipsoid(const GridPtr& g, double a, double b, double c = 1.0) {
  return SupportField(g, sgflow::sample(*g, [&](const Vec3& u) {
                        return std::sqrt(a * a * u[0] * u[0] + b * b * u[1] * u[1] + c * c * u[2] * u[2]);
                      }));
}

SupportField ball(const GridPtr& g, double r) { return SupportField(g, Field(g->size(), r)); }

// A smooth, strictly convex, non-symmetric body: ellipsoid plus a small
// cubic harmonic and a translation.
SupportField lumpy(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double a = 1.0 + 0.3 * U(rng), b = 1.0 + 0.3 * U(rng), c = 1.0 + 0.3 * U(rng);
  const double eps = 0.02 * U(rng);
  const Vec3 v(0.1 * U(rng), 0.1 * U(rng), g->dim() == 2 ? 0.1 * U(rng) : 0.0);
  return SupportField(g, sgflow::sample(*g, [&](const Vec3& u) {
    const double e = std::sqrt(a * a * u[0] * u[0] + b * b * u[1] * u[1] + c * c * u[2] * u[2]);
    return e + eps * (u[0] * u[0] * u[0] - 0.6 * u[0]) + v.dot(u);
  }));
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("SupportField validates its values") {
  const auto g = Grid::build(2, 8);
  CHECK_THROWS_AS(SupportField(g, Field(3, 1.0)), sgflow::InvalidArgument);
  Field h(g->size(), 1.0);
  h[5] = 0.0;
  CHECK_THROWS_AS(SupportField(g, h), sgflow::InvalidArgument);
  h[5] = std::nan("");
  CHECK_THROWS_AS(SupportField(g, h), sgflow::InvalidArgument);
}

TEST_CASE("curvature of balls and translated balls") {
  for (int dim : {1, 2}) {
    const auto g = Grid::build(dim, 32);
    for (double r : {0.5, 1.0, 3.0}) {
      const auto c = sgflow::curvature(ball(g, r));
      for (std::size_t i = 0; i < g->size(); ++i) {
        CHECK(c.sn[i] == doctest::Approx(std::pow(r, dim)).epsilon(1e-11));
        CHECK(c.radius_min[i] == doctest::Approx(r).epsilon(1e-11));
        CHECK(c.radius_max[i] == doctest::Approx(r).epsilon(1e-11));
        CHECK(c.sn[i] * c.gauss[i] == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
    const Vec3 v(0.2, -0.3, dim == 2 ? 0.4 : 0.0);
    const auto c = sgflow::curvature(ball(g, 1.0).translated(v));
    for (std::size_t i = 0; i < g->size(); ++i) CHECK(std::abs(c.sn[i] - 1.0) < 1e-10);
  }
}

TEST_CASE("ellipsoid curvature matches the implicit-surface Gauss curvature") {
  const auto g = Grid::build(2, 48);
  const double a = 1.5, b = 1.0, c = 0.75;
  const auto curv = sgflow::curvature(ellipsoid(g, a, b, c));
  double worst_oracle = 0.0, worst_closed = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Vec3& u = g->node(i);
    const double expect = 1.0 / oracle::ellipsoid_gauss(a, b, c, u);
    worst_oracle = std::max(worst_oracle, std::abs(curv.sn[i] - expect) / expect);
    const double h = std::sqrt(a * a * u[0] * u[0] + b * b * u[1] * u[1] + c * c * u[2] * u[2]);
    worst_closed = std::max(worst_closed, std::abs(curv.sn[i] - std::pow(a * b * c, 2) / std::pow(h, 4)));
    CHECK(curv.radius_min[i] * curv.radius_max[i] == doctest::Approx(curv.sn[i]).epsilon(1e-12));
    CHECK(curv.radius_min[i] <= curv.radius_max[i]);
  }
  CHECK(worst_oracle < 1e-7);
  CHECK(worst_closed < 1e-7);
}

TEST_CASE("ellipse radius of curvature on the circle grid") {
  const auto g = Grid::build(1, 128);
  const auto curv = sgflow::curvature(ellipsoid(g, 1.4, 0.8));
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(curv.sn[i] == doctest::Approx(1.0 / oracle::ellipse_curvature(1.4, 0.8, g->node(i))).epsilon(1e-9));
  }
}

TEST_CASE("non-convex support data is reported with its worst node") {
  const auto g = Grid::build(1, 64);
  const SupportField h(g, sgflow::sample(*g, [](const Vec3& u) {
    return 1.0 + 0.2 * std::cos(4.0 * std::atan2(u[1], u[0]));
  }));
  try {
    sgflow::curvature(h);
    FAIL("expected a convexity error");
  } catch (const sgflow::ConvexityError& e) {
    CHECK(e.node() < g->size());
    CHECK(e.eigenvalue() < 0.0);
  }
  const auto g2 = Grid::build(2, 16);
  // 1 + 0.2 cos(4 theta): the meridian radius 1 - 3 cos(4 theta) changes sign
  const SupportField h2(g2, sgflow::sample(*g2, [](const Vec3& u) {
    const double x = u[2] * u[2];
    return 1.0 + 0.2 * (8.0 * x * x - 8.0 * x + 1.0);
  }));
  CHECK_THROWS_AS(sgflow::curvature(h2), sgflow::ConvexityError);
}

TEST_CASE("scaling and translation covariance of S_n (property)") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int dim : {1, 2}) {
    const auto g = Grid::build(dim, 24);
    for (int trial = 0; trial < 6; ++trial) {
      const SupportField h = lumpy(g, rng);
      const auto base = sgflow::curvature(h);
      const double lam = std::exp(U(rng));
      const auto scaled = sgflow::curvature(h.scaled(lam));
      const Vec3 v(0.2 * U(rng), 0.2 * U(rng), dim == 2 ? 0.2 * U(rng) : 0.0);
      const auto moved = sgflow::curvature(h.translated(v));
      for (std::size_t i = 0; i < g->size(); ++i) {
        CHECK(scaled.sn[i] == doctest::Approx(std::pow(lam, dim) * base.sn[i]).epsilon(1e-10));
        CHECK(std::abs(moved.sn[i] - base.sn[i]) < 1e-10 * base.sn[i]);
      }
      CHECK(sgflow::volume(h.scaled(lam)) == doctest::Approx(std::pow(lam, dim + 1) * sgflow::volume(h)).epsilon(1e-12));
      CHECK(sgflow::volume(h.translated(v)) == doctest::Approx(sgflow::volume(h)).epsilon(1e-10));
    }
  }
}

TEST_CASE("volume of balls and ellipsoids") {
  const auto g = Grid::build(2, 32);
  CHECK(sgflow::volume(ball(g, 1.0)) == doctest::Approx(4 * M_PI / 3).epsilon(1e-13));
  CHECK(sgflow::volume(ball(g, 1.7)) == doctest::Approx(4 * M_PI / 3 * std::pow(1.7, 3)).epsilon(1e-13));
  CHECK(sgflow::volume(ball(g, 1.0).translated(Vec3(0.3, 0.1, -0.2))) ==
        doctest::Approx(4 * M_PI / 3).epsilon(1e-12));
  CHECK(sgflow::volume(ellipsoid(g, 1.5, 1.0, 0.75)) == doctest::Approx(4 * M_PI / 3 * 1.125).epsilon(1e-8));
  const auto g1 = Grid::build(1, 128);
  CHECK(sgflow::volume(ellipsoid(g1, 1.4, 0.8)) == doctest::Approx(M_PI * 1.4 * 0.8).epsilon(1e-10));
  CHECK(sgflow::unit_ball_volume(1) == doctest::Approx(M_PI));
  CHECK(sgflow::unit_ball_volume(2) == doctest::Approx(4 * M_PI / 3));
}

TEST_CASE("volume agrees with the triangulated embedded surface") {
  // Divergence-theorem volume of the structured triangulation; the mesh
  // error is O(spacing^2), so two levels are extrapolated.
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 2; ++trial) {
    const auto g48 = Grid::build(2, 48);
    const auto g96 = Grid::build(2, 96);
    std::mt19937_64 rng_copy = rng;
    const SupportField h48 = lumpy(g48, rng);
    const SupportField h96 = lumpy(g96, rng_copy);
    auto mesh_vol = [](const SupportField& h) {
      const Grid& g = h.grid();
      const auto x = sgflow::embed(h);
      const std::size_t m = g.ring_size();
      std::vector<std::array<std::size_t, 3>> faces;
      auto id = [m](std::size_t j, std::size_t k) { return j * m + k % m; };
      for (std::size_t j = 0; j + 1 < g.rings(); ++j) {
        for (std::size_t k = 0; k < m; ++k) {
          faces.push_back({id(j, k), id(j + 1, k), id(j + 1, k + 1)});
          faces.push_back({id(j, k), id(j + 1, k + 1), id(j, k + 1)});
        }
      }
      for (std::size_t k = 1; k + 1 < m; ++k) {
        faces.push_back({id(0, 0), id(0, k), id(0, k + 1)});
        faces.push_back({id(g.rings() - 1, 0), id(g.rings() - 1, k + 1), id(g.rings() - 1, k)});
      }
      return oracle::mesh_volume(x, faces);
    };
    const double coarse = mesh_vol(h48), fine = mesh_vol(h96);
    const double extrapolated = (4.0 * fine - coarse) / 3.0;
    const double spectral = sgflow::volume(h96);
    CHECK(std::abs(spectral - extrapolated) < 1e-4 * spectral);
    CHECK(std::abs(sgflow::volume(h48) - spectral) < 1e-10 * spectral);
  }
}

TEST_CASE("normalize_to_unit_volume") {
  const auto g = Grid::build(2, 32);
  const SupportField two = sgflow::normalize_to_unit_volume(ball(g, 2.0));
  for (std::size_t i = 0; i < g->size(); ++i) CHECK(two[i] == doctest::Approx(1.0).epsilon(1e-13));
  const SupportField e = sgflow::normalize_to_unit_volume(ellipsoid(g, 2.0, 1.0, 1.0));
  CHECK(sgflow::volume(e) == doctest::Approx(4 * M_PI / 3).epsilon(1e-12));
  // closed form: the (2,1,1) ellipsoid scaled by 2^{-1/3}
  const SupportField e_exact = ellipsoid(g, 2.0, 1.0, 1.0).scaled(std::pow(2.0, -1.0 / 3.0));
  CHECK(sup_diff(e.values(), e_exact.values()) < 1e-9);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    const SupportField h = sgflow::normalize_to_unit_volume(lumpy(g, rng));
    CHECK(sgflow::volume(h) == doctest::Approx(4 * M_PI / 3).epsilon(1e-12));
  }
}

TEST_CASE("embedding: balls, translated balls, ellipsoids") {
  const auto g = Grid::build(2, 32);
  const auto xb = sgflow::embed(ball(g, 2.0));
  for (std::size_t i = 0; i < g->size(); ++i) CHECK((xb[i] - 2.0 * g->node(i)).norm() < 1e-12);
  const Vec3 v(0.1, -0.2, 0.3);
  const auto xt = sgflow::embed(ball(g, 1.0).translated(v));
  for (std::size_t i = 0; i < g->size(); ++i) CHECK((xt[i] - g->node(i) - v).norm() < 1e-10);
  const SupportField e = ellipsoid(g, 1.5, 1.0, 0.75);
  const auto xe = sgflow::embed(e);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Vec3& x = xe[i];
    const double implicit = x[0] * x[0] / 2.25 + x[1] * x[1] + x[2] * x[2] / 0.5625;
    CHECK(std::abs(implicit - 1.0) < 1e-8);
    CHECK(std::abs(g->node(i).dot(x) - e[i]) < 1e-14);
  }
}

TEST_CASE("polar body of balls and ellipsoids") {
  const auto g = Grid::build(2, 32);
  const SupportField unit = sgflow::polar(ball(g, 1.0));
  const SupportField half = sgflow::polar(ball(g, 2.0));
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(unit[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(half[i] == doctest::Approx(0.5).epsilon(1e-12));
  }
  const double a = 1.5, b = 1.0, c = 0.75;
  auto exact = [&](const Vec3& u) {
    return std::sqrt(u[0] * u[0] / (a * a) + u[1] * u[1] / (b * b) + u[2] * u[2] / (c * c));
  };
  const SupportField e = ellipsoid(g, a, b, c);
  const SupportField refined = sgflow::polar(e);
  const SupportField raw = sgflow::polar(e, {.refine = false});
  double err_refined = 0.0, err_raw = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    err_refined = std::max(err_refined, std::abs(refined[i] - exact(g->node(i))));
    err_raw = std::max(err_raw, std::abs(raw[i] - exact(g->node(i))));
    CHECK(raw[i] <= exact(g->node(i)) + 1e-14);  // max over samples never overshoots
  }
  CHECK(err_raw < 2e-2);
  CHECK(err_refined < 2e-3);
  CHECK(err_refined < 0.01 * err_raw);
  const auto g48 = Grid::build(2, 48);
  const SupportField raw48 = sgflow::polar(ellipsoid(g48, a, b, c), {.refine = false});
  double err_raw48 = 0.0;
  for (std::size_t i = 0; i < g48->size(); ++i) err_raw48 = std::max(err_raw48, std::abs(raw48[i] - exact(g48->node(i))));
  CHECK(err_raw48 < err_raw);
}

TEST_CASE("bipolar identity (property)") {
  std::mt19937_64 rng(17);
  for (int dim : {1, 2}) {
    const auto g = Grid::build(dim, dim == 2 ? 24 : 96);
    for (int trial = 0; trial < 3; ++trial) {
      const SupportField h = lumpy(g, rng);
      const SupportField back = sgflow::polar(sgflow::polar(h));
      CHECK(sup_diff(back.values(), h.values()) < 1e-6 * h.max());
    }
  }
}

TEST_CASE("duality residual") {
  const auto g32 = Grid::build(2, 32);
  CHECK(sgflow::duality_residual(ball(g32, 1.0)) < 1e-10);
  CHECK(sgflow::duality_residual(ball(g32, 2.5)) < 1e-10);
  CHECK(sgflow::duality_residual(ball(g32, 1.0).translated(Vec3(0.1, 0.2, -0.15))) < 5e-3);
  const auto g48 = Grid::build(2, 48);
  CHECK(sgflow::duality_residual(ellipsoid(g48, 1.5, 1.0, 0.75)) < 5e-3);
  const auto g1 = Grid::build(1, 128);
  CHECK(sgflow::duality_residual(ellipsoid(g1, 1.4, 0.8)) < 1e-5);
}

TEST_CASE("lp_barycenter") {
  const auto g = Grid::build(2, 32);
  const Field one(g->size(), 1.0);
  const Field phi = sgflow::sample(*g, [](const Vec3& u) { return 1.0 + 0.5 * u[2] * u[2]; });
  for (double p : {-2.0, 0.0, 2.0}) {
    CHECK(sgflow::lp_barycenter(ball(g, 1.0), one, p).norm() < 1e-14);
    CHECK(sgflow::lp_barycenter(ellipsoid(g, 1.5, 1.0, 0.75), phi, p).norm() < 1e-12);
  }
  const SupportField h(g, sgflow::sample(*g, [](const Vec3& u) { return 1.0 + 0.2 * u[2]; }));
  const Vec3 bc = sgflow::lp_barycenter(h, one, -2.0);
  // 2 pi int_{-1}^{1} x (1 + 0.2 x)^{-3} dx
  const double expect = 2 * M_PI * oracle::simpson([](double x) { return x / std::pow(1.0 + 0.2 * x, 3); }, -1, 1);
  CHECK(bc[2] < 0.0);
  CHECK(std::abs(bc[2] - expect) < 1e-10);
  CHECK(std::abs(bc[0]) < 1e-14);
  CHECK(std::abs(bc[1]) < 1e-14);
}

TEST_CASE("recenter finds the Santalo point") {
  const auto g = Grid::build(2, 32);
  const Field one(g->size(), 1.0);
  const auto centered = sgflow::recenter(ellipsoid(g, 1.5, 1.0, 0.75), one, -3.0, 1e-10);
  CHECK(centered.shift.norm() < 1e-12);

  const auto moved = sgflow::recenter(ball(g, 1.0).translated(Vec3(0, 0, 0.3)), one, -3.0, 1e-10);
  CHECK((moved.shift - Vec3(0, 0, -0.3)).norm() < 1e-6);
  CHECK(moved.barycenter_norm < 1e-8);

  const SupportField te = ellipsoid(g, 1.2, 1.0, 0.8).translated(Vec3(0.2, -0.1, 0.15));
  const auto r = sgflow::recenter(te, one, -3.0, 1e-10);
  CHECK(sgflow::lp_barycenter(te.translated(r.shift), one, -3.0).norm() < 1e-9);
  CHECK((r.shift - Vec3(-0.2, 0.1, -0.15)).norm() < 1e-6);

  // -n-1 < p <= -n with a non-even weight
  const Field phi = sgflow::sample(*g, [](const Vec3& u) { return 1.0 + 0.3 * u[0] + 0.2 * u[2] * u[2]; });
  const auto r2 = sgflow::recenter(te, phi, -2.5, 1e-10);
  CHECK(sgflow::lp_barycenter(te.translated(r2.shift), phi, -2.5).norm() < 1e-9);
}

TEST_CASE("recenter reports failure") {
  const auto g = Grid::build(2, 16);
  const Field one(g->size(), 1.0);
  CHECK_THROWS_AS(sgflow::recenter(ball(g, 1.0).translated(Vec3(0, 0, 0.3)), one, 1.0, 1e-10),
                  sgflow::NumericalError);
}
