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

// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sgflow/convex_body.hpp"
#include "sgflow/diagnostics.hpp"
#include "sgflow/flow_engine.hpp"
#include "sgflow/initial_body.hpp"
#include "sgflow/minkowski_solver.hpp"

using namespace sgflow;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const char* fmt, double value) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, value);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
      detail += " [x]";
      pass = false;
    }
  }
};

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double sup_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

SupportField ellipsoid(const GridPtr& g, double a, double b, double c) {
  return SupportField(g, sample(*g, [&](const Vec3& u) {
                        return std::sqrt(a * a * u[0] * u[0] + b * b * u[1] * u[1] + c * c * u[2] * u[2]);
                      }));
}

StepController tight() {
  StepController c;
  c.rtol = 1e-9;
  c.atol = 1e-12;
  return c;
}

// 1. balls under phi = 1 against the closed-form radius
Outcome ball_dynamics() {
  Outcome o;
  const auto g = Grid::build(2, 32);
  const Field one(g->size(), 1.0);
  struct Case {
    double p, t_end;
    std::function<double(double)> r;
    const char* fmt;
  };
  const std::vector<Case> cases = {
      {2.0, 0.5, [](double t) { return 1.0 / (1.0 - t); }, "p=2 err %.2e"},
      {3.0, 1.0, [](double t) { return std::exp(t); }, "p=3 err %.2e"},
      {5.0, 1.0, [](double t) { return std::pow(1.0 + 2.0 * t, 0.5); }, "p=5 err %.2e"},
  };
  for (const Case& c : cases) {
    const auto t0 = Clock::now();
    StepController ctl = tight();
    double worst = 0.0;
    const StepObserver watch = [&](const FlowState& s, const StepController&) {
      for (double v : s.h.values()) worst = std::max(worst, std::abs(v / c.r(s.t) - 1.0));
    };
    const FlowState end =
        integrate_to(FlowState(SupportField(g, one)), FlowKind::kUnnormalized, one, c.p, ctl, c.t_end, watch);
    o.check(worst < 1e-6 && end.t == c.t_end, c.fmt, worst);
    const double secs = seconds_since(t0);
    o.check(secs < 10.0, "%.2fs", secs);
  }
  return o;
}

// 2. p = 2, phi = 1: the normalized flow rounds off a perturbed ball
Outcome sphere_limit() {
  Outcome o;
  const auto g = Grid::build(2, 32);
  const Field one(g->size(), 1.0);
  SolveOptions opts;
  opts.max_tau = 50.0;
  const SolveResult r = solve(one, 2.0, make_initial("perturbed_ball:1,0.1,2", g), opts);
  double dev = 0.0;
  for (double v : r.h_limit.values()) dev = std::max(dev, std::abs(v - 1.0));
  o.check(dev < 1e-3, "sup|h-1| %.2e", dev);
  o.check(r.residual_sup < 1e-3, "residual %.2e", r.residual_sup);
  o.check(r.tau <= 50.0, "tau %.2f", r.tau);
  return o;
}

// 3. p = -n-1: origin-centred ellipsoids of unit volume are fixed points
Outcome centro_affine() {
  Outcome o;
  const auto g = Grid::build(2, 32);
  const Field one(g->size(), 1.0);
  const SupportField h = ellipsoid(g, 1.2, 1.0, 1.0 / 1.2);
  const FlowState s(h);
  const double vol_err = std::abs(volume(h) / unit_ball_volume(2) - 1.0);
  o.check(vol_err < 1e-12, "volume err %.1e", vol_err);
  const double rate = sup_abs(normalized_rate(s, one, -3.0));
  o.check(rate < 1e-5, "|d_tau h| %.2e", rate);
  double lo = INFINITY, hi = -INFINITY, mean = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double q = std::pow(h[i], 4) * s.cache.sn[i];
    lo = std::min(lo, q);
    hi = std::max(hi, q);
    mean += q / g->size();
  }
  o.check((hi - lo) / mean < 1e-5, "h^4 S spread %.2e", (hi - lo) / mean);
  // the invariant equals (abc)^2 = 1
  o.check(std::abs(mean - 1.0) < 1e-5, "h^4 S - 1 %.1e", mean - 1.0);
  return o;
}

// 4. even anisotropic weight
Outcome even_minkowski() {
  Outcome o;
  const auto g = Grid::build(2, 32);
  const Field phi = sample(*g, [](const Vec3& u) { return 1.0 + 0.5 * u[2] * u[2]; });
  const SupportField start = make_initial("perturbed_ball:1,0.1,2", g);
  for (double p : {-1.0, 0.0, 0.5, 3.0}) {
    const SolveResult r = solve(phi, p, start, {});
    const VerifyReport v = verify_solution(r, phi, p);
    char label[64];
    std::snprintf(label, sizeof label, "p=%g res %%.1e", p);
    o.check(r.converged && r.residual_sup < 1e-3, label, r.residual_sup);
    o.check(v.max_defect < 5e-3, "defect %.1e", v.max_defect);
    if (p >= 1.0) {
      const SolveResult other = solve(phi, p, ellipsoid(g, 1.3, 1.0, 0.8), {});
      const double gap = sup_diff(r.h_solution.values(), other.h_solution.values());
      o.check(other.converged && gap < 1e-3, "two starts differ by %.1e", gap);
    }
  }
  return o;
}

// 5. polar body and radial function agree, better on finer grids
Outcome duality() {
  Outcome o;
  double r[3];
  const int levels[3] = {32, 48, 64};
  for (int k = 0; k < 3; ++k) r[k] = duality_residual(ellipsoid(Grid::build(2, levels[k]), 1.5, 1.0, 0.75));
  o.check(r[1] < 5e-3, "L=48 %.2e", r[1]);
  o.check(r[0] >= 2.0 * r[2], "L=32/L=64 ratio %.1f", r[0] / r[2]);
  return o;
}

// 6. dilating the initial body dilates the flow with rescaled time
Outcome scaling() {
  Outcome o;
  const auto g = Grid::build(2, 32);
  const Field one(g->size(), 1.0);
  const double p = 0.0, lambda = 2.0, s_end = 0.05;
  const SupportField h0 = ellipsoid(g, 1.1, 1.0, 0.9);
  const auto [h_big, t_big_end] = rescale_solution(h0, lambda, s_end, p);
  const double factor = h_big[0] / h0[0];
  FlowState small(h0), big(h_big);
  StepController c1 = tight(), c2 = tight();
  double worst = 0.0;
  for (int k = 1; k <= 5; ++k) {
    const double s = s_end * k / 5.0;
    small = integrate_to(std::move(small), FlowKind::kUnnormalized, one, p, c1, s);
    big = integrate_to(std::move(big), FlowKind::kUnnormalized, one, p, c2, t_big_end * k / 5.0);
    for (std::size_t i = 0; i < g->size(); ++i) worst = std::max(worst, std::abs(big.h[i] - factor * small.h[i]));
  }
  o.check(worst < 1e-5, "sup gap %.2e", worst);
  return o;
}

// 7. centred volume differences against the first variation, dt halving
Outcome volume_identity() {
  Outcome o;
  const auto g = Grid::build(2, 32);
  const Field one(g->size(), 1.0);
  const SupportField h0 = ellipsoid(g, 1.2, 1.0, 0.8);
  auto defect = [&](double dt) {
    DiagnosticsLog log(one, 0.0);
    StepController c;
    c.fixed_dt = dt;
    FlowState s(h0);
    log.append(s);
    integrate_to(std::move(s), FlowKind::kUnnormalized, one, 0.0, c, 0.064,
                 [&](const FlowState& st, const StepController& ctl) { log.append(st, ctl.last_dt); });
    return volume_variation_defect(log.rows());
  };
  const double d1 = defect(1e-3), d2 = defect(5e-4), d3 = defect(2.5e-4);
  o.check(d1 < 1e-3, "defect %.2e", d1);
  o.check(std::log2(d1 / d2) >= 2.0, "order %.3f", std::log2(d1 / d2));
  o.check(std::log2(d2 / d3) >= 2.0, "order %.3f", std::log2(d2 / d3));
  return o;
}

// 8. flowing the polar body matches the polar of the flowed body
Outcome polar_consistency() {
  Outcome o;
  const auto g = Grid::build(2, 32);
  const Field one(g->size(), 1.0);
  const SupportField h0(g, sample(*g, [](const Vec3& u) { return 1.0 + 0.05 * (u[2] * u[2] - 1.0 / 3.0); }));
  FlowState primal(h0), dual(polar(h0));
  StepController c1 = tight(), c2 = tight();
  double worst = 0.0;
  for (int k = 1; k <= 5; ++k) {
    const double t = 0.01 * k;
    primal = integrate_to(std::move(primal), FlowKind::kUnnormalized, one, 0.0, c1, t);
    dual = integrate_to(std::move(dual), FlowKind::kPolar, one, 0.0, c2, t);
    worst = std::max(worst, sup_diff(polar(primal.h).values(), dual.h.values()));
  }
  o.check(worst < 1e-4, "sup gap %.2e", worst);
  return o;
}

// 9. the origin condition recovers the centre of a translated ball
Outcome recentering() {
  Outcome o;
  const auto g = Grid::build(2, 32);
  const Field one(g->size(), 1.0);
  const Vec3 centre(0.2, -0.1, 0.15);
  const SupportField moved = SupportField(g, one).translated(centre);
  const RecenterResult r = recenter(moved, one, -3.0, 1e-12);
  o.check((r.shift + centre).norm() < 1e-6, "centre err %.1e", (r.shift + centre).norm());
  const double b = lp_barycenter(moved.translated(r.shift), one, -3.0).norm();
  o.check(b < 1e-8, "barycenter %.1e", b);
  return o;
}

// 10. structural invariants
Outcome invariants(Clock::time_point suite_start) {
  Outcome o;
  const auto g = Grid::build(2, 32);
  const Field one(g->size(), 1.0);

  double quad = 0.0;
  const int deg = g->design_degree();
  for (int a = 0; a <= deg; a += 1) {
    for (int b = 0; a + b <= deg; ++b) {
      for (int c = 0; a + b + c <= deg; c += 3) {
        const Field f = sample(*g, [&](const Vec3& u) { return std::pow(u[0], a) * std::pow(u[1], b) * std::pow(u[2], c); });
        quad = std::max(quad, std::abs(integrate(f, *g) - oracle::sphere_monomial(a, b, c)));
      }
    }
  }
  o.check(quad < 1e-11, "quadrature %.1e", quad);

  const SupportField e = ellipsoid(g, 1.5, 1.0, 0.75);
  const CurvatureData ce = curvature(e);
  double gauss = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    gauss = std::max(gauss, std::abs(ce.sn[i] * oracle::ellipsoid_gauss(1.5, 1.0, 0.75, g->node(i)) - 1.0));
  }
  o.check(gauss < 1e-6, "S_n vs implicit %.1e", gauss);

  const CurvatureData cs = curvature(e.scaled(1.7));
  const CurvatureData ct = curvature(e.translated(Vec3(0.3, -0.2, 0.1)));
  double scale = 0.0, shift = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    scale = std::max(scale, std::abs(cs.sn[i] / (1.7 * 1.7 * ce.sn[i]) - 1.0));
    shift = std::max(shift, std::abs(ct.sn[i] - ce.sn[i]) / ce.sn[i]);
  }
  o.check(scale < 1e-10, "scaling %.1e", scale);
  o.check(shift < 1e-10, "translation %.1e", shift);
  const double vol = std::abs(volume(e.scaled(1.7)) / (1.7 * 1.7 * 1.7 * volume(e)) - 1.0);
  o.check(vol < 1e-12, "volume scaling %.1e", vol);

  const double bipolar = sup_diff(polar(polar(e)).values(), e.values());
  o.check(bipolar < 1e-6, "bipolar %.1e", bipolar);

  double sym = 0.0;
  StepController c;
  integrate_to(FlowState(e), FlowKind::kUnnormalized, one, 0.0, c, 0.1, [&](const FlowState& s, const StepController&) {
    for (std::size_t i = 0; i < g->size(); ++i) sym = std::max(sym, std::abs(s.h[i] - s.h[g->antipode(i)]));
  });
  o.check(sym < 1e-10, "symmetry %.1e", sym);

  const double total = seconds_since(suite_start);
  o.check(total < 300.0, "suite %.0fs", total);
  return o;
}

}  // namespace

int main() {
  const auto suite_start = Clock::now();
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& run) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %2d %-22s %s  (%.1fs) %s\n", id, name, o.pass ? "PASS" : "FAIL", seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  report(1, "ball dynamics", ball_dynamics);
  report(2, "sphere limit p=2", sphere_limit);
  report(3, "centro-affine ellipsoid", centro_affine);
  report(4, "even Lp-Minkowski", even_minkowski);
  report(5, "duality residual", duality);
  report(6, "scaling covariance", scaling);
  report(7, "volume identity", volume_identity);
  report(8, "polar flow", polar_consistency);
  report(9, "recentering", recentering);
  report(10, "structural invariants", [&] { return invariants(suite_start); });
  return failures;
}
