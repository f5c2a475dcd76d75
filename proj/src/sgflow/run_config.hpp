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

#ifndef SGFLOW_RUN_CONFIG_HPP_
#define SGFLOW_RUN_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

namespace sgflow {

enum class RunMode { kUnnormalized, kNormalized, kSolve };

const char* to_string(RunMode mode);
RunMode parse_mode(std::string_view text);

struct RunConfig {
  int n = 2;
  int resolution = 32;
  double p = 2.0;
  std::string phi = "1";
  std::string init = "ball:1";
  RunMode mode = RunMode::kSolve;
  double tol = 1e-6;
  double max_tau = 50.0;
  double t_end = 1.0;     // unnormalized horizon
  double dt0 = 0.0;       // 0 picks the parabolic heuristic
  double rtol = 1e-6;
  double atol = 1e-9;
  double fixed_dt = 0.0;  // > 0 disables error control
  int max_rejections = 40;
  std::uint64_t seed = 1;
  std::string out = "sgflow_out";
};

// Throws InvalidArgument on an unknown key or malformed value. Keys accept
// '-' or '_' (max-tau, max_tau); "res" and "resolution" are synonyms.
void set_option(RunConfig& config, std::string_view key, std::string_view value);

// Throws InvalidArgument when p <= -n-1, resolution odd, tol <= 0, ...
void validate(const RunConfig& config);

// key = value lines ('#' starts a comment), or a JSON object; a run.json
// is accepted and its "config" member used.
void apply_config_text(RunConfig& config, std::string_view text);
void apply_config_file(RunConfig& config, const std::string& path);

nlohmann::ordered_json to_json(const RunConfig& config);
void apply_json(RunConfig& config, const nlohmann::json& j);

}  // namespace sgflow

#endif  // SGFLOW_RUN_CONFIG_HPP_
