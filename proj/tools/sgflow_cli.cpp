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

// Command line front end; talks to the library only through the C API.

#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sgflow/sgflow.h"

namespace {

struct ConfigDeleter {
  void operator()(sgf_config* c) const { sgf_config_destroy(c); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sgflow: anisotropic expanding Gauss curvature flow and L_p Minkowski solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("sgflow ") + sgf_version());

  CLI::App* run = app.add_subcommand("run", "run a flow or a Minkowski solve and write its outputs");
  std::string config_path;
  run->add_option("--config", config_path, "key = value file or a previous run.json; flags override it");

  // Flag name -> config key; values are passed through as text so that
  // numbers keep their exact spelling.
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"--n", "n"},
      {"--res", "resolution"},
      {"--p", "p"},
      {"--phi", "phi"},
      {"--init", "init"},
      {"--mode", "mode"},
      {"--tol", "tol"},
      {"--max-tau", "max_tau"},
      {"--t-end", "t_end"},
      {"--dt0", "dt0"},
      {"--rtol", "rtol"},
      {"--atol", "atol"},
      {"--fixed-dt", "fixed_dt"},
      {"--max-rejections", "max_rejections"},
      {"--seed", "seed"},
      {"--out", "out"},
  };
  const std::vector<std::string> help = {
      "dimension of the sphere (1 or 2)",
      "grid resolution (latitudes for n=2, points for n=1)",
      "exponent p > -n-1",
      "phi as an expression in u1,u2,u3",
      "initial body: ball:r | ellipsoid:a,b[,c] | perturbed_ball:r,amp,degree[,seed] | translate:v:<body>",
      "unnormalized | normalized | solve",
      "stationarity tolerance for solve",
      "largest normalized time",
      "horizon of unnormalized runs",
      "initial step (0 = automatic)",
      "relative step tolerance",
      "absolute step tolerance",
      "fixed step size (0 = adaptive)",
      "rejections allowed per step",
      "seed for random initial bodies",
      "output directory",
  };
  std::vector<std::string> values(flags.size());
  std::vector<CLI::Option*> options;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    options.push_back(run->add_option(flags[i].first, values[i], help[i]));
  }

  CLI11_PARSE(app, argc, argv);

  std::unique_ptr<sgf_config, ConfigDeleter> config;
  {
    sgf_config* raw = nullptr;
    if (sgf_config_create(&raw) != SGF_OK) {
      std::fprintf(stderr, "sgflow: %s\n", sgf_last_error());
      return 1;
    }
    config.reset(raw);
  }
  if (!config_path.empty() && sgf_config_load(config.get(), config_path.c_str()) != SGF_OK) {
    std::fprintf(stderr, "sgflow: %s\n", sgf_last_error());
    return 1;
  }
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (options[i]->count() == 0) continue;
    if (sgf_config_set(config.get(), flags[i].second.c_str(), values[i].c_str()) != SGF_OK) {
      std::fprintf(stderr, "sgflow: %s\n", sgf_last_error());
      return 1;
    }
  }
  const int code = sgf_run(config.get());
  if (code != 0) std::fprintf(stderr, "sgflow: %s\n", sgf_last_error());
  return code;
}
