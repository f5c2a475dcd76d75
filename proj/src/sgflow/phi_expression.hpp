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

#ifndef SGFLOW_PHI_EXPRESSION_HPP_
#define SGFLOW_PHI_EXPRESSION_HPP_

#include <memory>
#include <string>
#include <string_view>

#include "sgflow/sphere_grid.hpp"

namespace sgflow {

// Arithmetic in u1, u2, u3 with + - * / ^ (right associative), unary minus,
// parentheses and decimal literals. u3 is rejected on the circle.
class PhiExpression {
 public:
  PhiExpression(std::string_view text, int dim);
  ~PhiExpression();
  PhiExpression(PhiExpression&&) noexcept;
  PhiExpression& operator=(PhiExpression&&) noexcept;

  double operator()(const Vec3& u) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::unique_ptr<Node> root_;
};

struct PhiField {
  Field values;
  double min = 0.0;
  double evenness_defect = 0.0;  // max |phi(u) - phi(-u)| over nodes
  bool even() const;
};

// Throws ParseError (with position) or InvalidArgument when phi <= 0 somewhere.
PhiField parse_phi(std::string_view spec, const Grid& g);

}  // namespace sgflow

#endif  // SGFLOW_PHI_EXPRESSION_HPP_
