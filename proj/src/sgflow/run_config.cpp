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

#include "sgflow/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sgflow/errors.hpp"

namespace sgflow {
namespace {

std::string_view trim(std::string_view s) {
  const auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("config: bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

std::string canonical_key(std::string_view key) {
  std::string k(trim(key));
  std::replace(k.begin(), k.end(), '-', '_');
  if (k == "res") k = "resolution";
  return k;
}

}  // namespace

const char* to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kUnnormalized: return "unnormalized";
    case RunMode::kNormalized: return "normalized";
    case RunMode::kSolve: return "solve";
  }
  return "?";
}

RunMode parse_mode(std::string_view text) {
  text = trim(text);
  if (text == "unnormalized") return RunMode::kUnnormalized;
  if (text == "normalized") return RunMode::kNormalized;
  if (text == "solve") return RunMode::kSolve;
  throw InvalidArgument("config: mode must be unnormalized, normalized or solve, got '" + std::string(text) + "'");
}

void set_option(RunConfig& c, std::string_view key_text, std::string_view value) {
  const std::string key = canonical_key(key_text);
  if (key == "n") c.n = parse_number<int>(key, value);
  else if (key == "resolution") c.resolution = parse_number<int>(key, value);
  else if (key == "p") c.p = parse_number<double>(key, value);
  else if (key == "phi") c.phi = std::string(trim(value));
  else if (key == "init") c.init = std::string(trim(value));
  else if (key == "mode") c.mode = parse_mode(value);
  else if (key == "tol") c.tol = parse_number<double>(key, value);
  else if (key == "max_tau") c.max_tau = parse_number<double>(key, value);
  else if (key == "t_end") c.t_end = parse_number<double>(key, value);
  else if (key == "dt0") c.dt0 = parse_number<double>(key, value);
  else if (key == "rtol") c.rtol = parse_number<double>(key, value);
  else if (key == "atol") c.atol = parse_number<double>(key, value);
  else if (key == "fixed_dt") c.fixed_dt = parse_number<double>(key, value);
  else if (key == "max_rejections") c.max_rejections = parse_number<int>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "out") c.out = std::string(trim(value));
  else throw InvalidArgument("config: unknown key '" + std::string(key_text) + "'");
}

void validate(const RunConfig& c) {
  std::ostringstream msg;
  if (c.n != 1 && c.n != 2) msg << "n must be 1 or 2";
  else if (c.resolution < 8 || c.resolution % 2 != 0) msg << "resolution must be even and at least 8";
  else if (!(c.p > -c.n - 1.0) || !std::isfinite(c.p))
    msg << "p = " << c.p << " is outside the admissible range p > " << -c.n - 1 << " (-n-1 < p < infinity)";
  else if (!(c.tol > 0.0)) msg << "tol must be positive";
  else if (!(c.max_tau > 0.0)) msg << "max_tau must be positive";
  else if (!(c.t_end > 0.0)) msg << "t_end must be positive";
  else if (!(c.rtol > 0.0) || !(c.atol >= 0.0)) msg << "rtol must be positive and atol non-negative";
  else if (c.dt0 < 0.0 || c.fixed_dt < 0.0) msg << "dt0 and fixed_dt must be non-negative";
  else if (c.max_rejections < 1) msg << "max_rejections must be at least 1";
  else if (c.out.empty()) msg << "out must name a directory";
  if (!msg.str().empty()) throw InvalidArgument("config: " + msg.str());
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["n"] = c.n;
  j["resolution"] = c.resolution;
  j["p"] = c.p;
  j["phi"] = c.phi;
  j["init"] = c.init;
  j["mode"] = to_string(c.mode);
  j["tol"] = c.tol;
  j["max_tau"] = c.max_tau;
  j["t_end"] = c.t_end;
  j["dt0"] = c.dt0;
  j["rtol"] = c.rtol;
  j["atol"] = c.atol;
  j["fixed_dt"] = c.fixed_dt;
  j["max_rejections"] = c.max_rejections;
  j["seed"] = c.seed;
  j["out"] = c.out;
  return j;
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("config: JSON config must be an object");
  const nlohmann::json& obj = j.contains("config") && j["config"].is_object() ? j["config"] : j;
  for (const auto& [key, value] : obj.items()) {
    if (value.is_string()) {
      set_option(c, key, value.get<std::string>());
    } else if (value.is_number_unsigned() || value.is_number_integer()) {
      set_option(c, key, value.dump());
    } else if (value.is_number_float()) {
      // dump() writes the shortest round-trip text
      set_option(c, key, value.dump());
    } else {
      throw InvalidArgument("config: unsupported JSON value for '" + key + "'");
    }
  }
}

void apply_config_text(RunConfig& c, std::string_view text) {
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("config: ") + e.what(), e.byte);
    }
    apply_json(c, j);
    return;
  }
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config: line " + std::to_string(line_no) + " is not key = value", line_no);
    }
    set_option(c, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(c, ss.str());
}

}  // namespace sgflow
