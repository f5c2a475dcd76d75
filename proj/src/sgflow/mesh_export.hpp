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

#ifndef SGFLOW_MESH_EXPORT_HPP_
#define SGFLOW_MESH_EXPORT_HPP_

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "sgflow/convex_body.hpp"

namespace sgflow {

struct TriangleMesh {
  std::vector<Vec3> vertices;                   // one per grid node
  std::vector<std::array<std::size_t, 3>> faces;  // outward, 0-based
};

// Embedded boundary on the structured grid: rings joined by split quads,
// longitudes wrapped, each polar ring closed by a fan. Surfaces only (n=2).
TriangleMesh surface_mesh(const SupportField& h);

void write_obj(std::ostream& out, const TriangleMesh& mesh);
void export_obj(const SupportField& h, const std::string& path);

}  // namespace sgflow

#endif  // SGFLOW_MESH_EXPORT_HPP_
