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

#include "sgflow/mesh_export.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "sgflow/errors.hpp"

namespace sgflow {

TriangleMesh surface_mesh(const SupportField& h) {
  const Grid& g = h.grid();
  if (g.dim() != 2) throw InvalidArgument("mesh export needs a surface (n = 2)");
  TriangleMesh mesh;
  mesh.vertices = embed(h);
  const std::size_t rings = g.rings();
  const std::size_t m = g.ring_size();
  auto id = [m](std::size_t j, std::size_t k) { return j * m + k % m; };
  for (std::size_t j = 0; j + 1 < rings; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      mesh.faces.push_back({id(j, k), id(j + 1, k), id(j + 1, k + 1)});
      mesh.faces.push_back({id(j, k), id(j + 1, k + 1), id(j, k + 1)});
    }
  }
  // Ring 0 is nearest the north pole; longitude runs counterclockwise.
  for (std::size_t k = 1; k + 1 < m; ++k) {
    mesh.faces.push_back({id(0, 0), id(0, k), id(0, k + 1)});
    mesh.faces.push_back({id(rings - 1, 0), id(rings - 1, k + 1), id(rings - 1, k)});
  }
  return mesh;
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  char buf[128];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
    out << buf;
  }
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

void export_obj(const SupportField& h, const std::string& path) {
  const TriangleMesh mesh = surface_mesh(h);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "# sgflow surface, " << mesh.vertices.size() << " vertices\n";
  write_obj(out, mesh);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace sgflow
