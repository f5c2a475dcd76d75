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

#include "sgflow/initial_body.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sgflow/errors.hpp"
#include "sgflow/spectral.hpp"

namespace sgflow {
namespace {

std::vector<double> parse_numbers(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(start, end - start);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw InvalidArgument("initial body " + std::string(what) + ": cannot parse number '" + std::string(tok) + "'");
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

// Uniform on [-1, 1] from the raw 64-bit stream, independent of the
// standard library's distribution implementation.
double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

Field even_harmonic_noise(const Grid& g, int degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Field f(g.size(), 0.0);
  for (int l = 2; l <= degree; l += 2) {
    if (g.dim() == 2) {
      for (int m = -l; m <= l; ++m) {
        const double a = unit_interval(rng);
        for (std::size_t i = 0; i < g.size(); ++i) f[i] += a * real_spherical_harmonic(l, m, g.node(i));
      }
    } else {
      const double a = unit_interval(rng);
      const double b = unit_interval(rng);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double angle = std::atan2(g.node(i)[1], g.node(i)[0]);
        f[i] += a * std::cos(l * angle) + b * std::sin(l * angle);
      }
    }
  }
  double sup = 0.0;
  for (double v : f) sup = std::max(sup, std::abs(v));
  if (sup == 0.0) throw InvalidArgument("perturbed_ball: perturbation vanished on the grid");
  for (double& v : f) v /= sup;
  return f;
}

bool is_convex(const SupportField& h) {
  try {
    curvature(h);
    return true;
  } catch (const ConvexityError&) {
    return false;
  }
}

}  // namespace

SupportField make_initial(std::string_view spec, const GridPtr& grid, std::uint64_t seed) {
  const Grid& g = *grid;
  const int n = g.dim();
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument("initial body '" + std::string(spec) + "' needs the form name:parameters");
  }
  const std::string_view name = spec.substr(0, colon);
  const std::string_view args = spec.substr(colon + 1);

  if (name == "translate") {
    const std::size_t inner = args.find(':');
    if (inner == std::string_view::npos) {
      throw InvalidArgument("translate needs the form translate:v1,v2[,v3]:<body>");
    }
    const std::vector<double> v = parse_numbers(args.substr(0, inner), name);
    if (v.size() != static_cast<std::size_t>(n + 1)) {
      throw InvalidArgument("translate: expected " + std::to_string(n + 1) + " components");
    }
    const Vec3 shift(v[0], v[1], n == 2 ? v[2] : 0.0);
    return make_initial(args.substr(inner + 1), grid, seed).translated(shift);
  }

  const std::vector<double> a = parse_numbers(args, name);
  if (name == "ball") {
    if (a.size() != 1 || !(a[0] > 0.0)) throw InvalidArgument("ball:r needs one positive radius");
    return SupportField(grid, Field(g.size(), a[0]));
  }
  if (name == "ellipsoid") {
    if (a.size() != static_cast<std::size_t>(n + 1)) {
      throw InvalidArgument("ellipsoid needs " + std::to_string(n + 1) + " semi-axes");
    }
    for (double v : a) {
      if (!(v > 0.0)) throw InvalidArgument("ellipsoid semi-axes must be positive");
    }
    Field h(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Vec3& u = g.node(i);
      double s = 0.0;
      for (int k = 0; k <= n; ++k) s += a[k] * a[k] * u[k] * u[k];
      h[i] = std::sqrt(s);
    }
    return SupportField(grid, std::move(h));
  }
  if (name == "perturbed_ball") {
    if (a.size() < 3 || a.size() > 4) throw InvalidArgument("perturbed_ball:r,amp,degree[,seed]");
    const double r = a[0];
    double amp = a[1];
    const double degree_value = a[2];
    if (!(r > 0.0) || !(amp >= 0.0)) throw InvalidArgument("perturbed_ball: need r > 0 and amp >= 0");
    if (degree_value != std::floor(degree_value) || degree_value < 2 || degree_value > g.design_degree()) {
      std::ostringstream msg;
      msg << "perturbed_ball: degree must be an integer in [2, " << g.design_degree() << "]";
      throw InvalidArgument(msg.str());
    }
    if (a.size() == 4) {
      if (a[3] < 0 || a[3] != std::floor(a[3])) throw InvalidArgument("perturbed_ball: seed must be a whole number");
      seed = static_cast<std::uint64_t>(a[3]);
    }
    const Field noise = even_harmonic_noise(g, static_cast<int>(degree_value), seed);
    constexpr double kAmplitudeFloor = 1e-6;
    while (true) {
      Field h(g.size());
      bool positive = true;
      for (std::size_t i = 0; i < g.size(); ++i) {
        h[i] = r + amp * noise[i];
        positive = positive && h[i] > 0.0;
      }
      if (positive) {
        SupportField body(grid, std::move(h));
        if (is_convex(body)) return body;
      }
      amp *= 0.5;
      if (amp < kAmplitudeFloor * r) {
        throw InvalidArgument("perturbed_ball: no convex body above the amplitude floor");
      }
    }
  }
  throw InvalidArgument("unknown initial body '" + std::string(name) + "'");
}

}  // namespace sgflow
