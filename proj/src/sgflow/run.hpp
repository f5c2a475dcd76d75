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

#ifndef SGFLOW_RUN_HPP_
#define SGFLOW_RUN_HPP_

#include <string>

#include "json.hpp"
#include "sgflow/run_config.hpp"

namespace sgflow {

const char* version_string();

struct RunOutcome {
  int exit_code = 0;  // 0 done, 2 reportable non-convergence, 1 error
  std::string message;
  nlohmann::ordered_json report;  // contents of run.json
};

// Executes one configured run and writes run.json, series.csv,
// support_final.csv and (surfaces only) final.obj into config.out.
// Errors are caught and reported through exit_code 1.
RunOutcome execute(const RunConfig& config);

}  // namespace sgflow

#endif  // SGFLOW_RUN_HPP_
