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

#ifndef SGFLOW_INITIAL_BODY_HPP_
#define SGFLOW_INITIAL_BODY_HPP_

#include <cstdint>
#include <string_view>

#include "sgflow/convex_body.hpp"

namespace sgflow {

// Initial bodies by name:
//   ball:r
//   ellipsoid:a,b,c            (a,b on the circle)
//   perturbed_ball:r,amp,degree[,seed]
//   translate:v1,v2[,v3]:<spec>
// perturbed_ball adds random even harmonics of degrees 2..degree scaled to
// sup-norm amp, halving amp until the body is convex. `seed` is used when
// the string does not carry one.
SupportField make_initial(std::string_view spec, const GridPtr& grid, std::uint64_t seed = 1);

}  // namespace sgflow

#endif  // SGFLOW_INITIAL_BODY_HPP_
