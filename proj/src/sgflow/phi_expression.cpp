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

#include "sgflow/phi_expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "sgflow/errors.hpp"
#include "sgflow/minkowski_solver.hpp"

namespace sgflow {

struct PhiExpression::Node {
  enum class Kind { kNumber, kVariable, kNegate, kAdd, kSub, kMul, kDiv, kPow } kind;
  double value = 0.0;
  int index = 0;
  std::unique_ptr<Node> lhs, rhs;

  double eval(const Vec3& u) const {
    switch (kind) {
      case Kind::kNumber: return value;
      case Kind::kVariable: return u[index];
      case Kind::kNegate: return -lhs->eval(u);
      case Kind::kAdd: return lhs->eval(u) + rhs->eval(u);
      case Kind::kSub: return lhs->eval(u) - rhs->eval(u);
      case Kind::kMul: return lhs->eval(u) * rhs->eval(u);
      case Kind::kDiv: return lhs->eval(u) / rhs->eval(u);
      case Kind::kPow: return std::pow(lhs->eval(u), rhs->eval(u));
    }
    return 0.0;
  }
};

namespace {

using Node = PhiExpression::Node;
using NodePtr = std::unique_ptr<Node>;

NodePtr binary(Node::Kind kind, NodePtr a, NodePtr b) {
  auto n = std::make_unique<Node>();
  n->kind = kind;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*
// unary  := '-' unary | '+' unary | power
// power  := atom ('^' unary)?
// atom   := number | u1 | u2 | u3 | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view s, int dim) : s_(s), dim_(dim) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "phi expression: " << what << " at position " << pos_;
    throw ParseError(msg.str(), pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr e = term();
    while (true) {
      if (accept('+')) e = binary(Node::Kind::kAdd, std::move(e), term());
      else if (accept('-')) e = binary(Node::Kind::kSub, std::move(e), term());
      else return e;
    }
  }

  NodePtr term() {
    NodePtr e = unary();
    while (true) {
      if (accept('*')) e = binary(Node::Kind::kMul, std::move(e), unary());
      else if (accept('/')) e = binary(Node::Kind::kDiv, std::move(e), unary());
      else return e;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::kNegate;
      n->lhs = unary();
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return binary(Node::Kind::kPow, std::move(base), unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    const char c = s_[pos_];
    if (c == 'u') {
      const std::size_t start = pos_;
      ++pos_;
      if (pos_ >= s_.size() || s_[pos_] < '1' || s_[pos_] > '3') {
        pos_ = start;
        fail("expected u1, u2 or u3");
      }
      const int index = s_[pos_] - '1';
      if (index > dim_) {
        pos_ = start;
        fail("u" + std::to_string(index + 1) + " is not a coordinate on S^" + std::to_string(dim_));
      }
      ++pos_;
      if (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        fail("unknown identifier");
      }
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::kVariable;
      n->index = index;
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.')) ++end;
      if (end < s_.size() && (s_[end] == 'e' || s_[end] == 'E')) {
        std::size_t k = end + 1;
        if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
        if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
          end = k;
          while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
        }
      }
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + end, v);
      if (ec != std::errc() || ptr != s_.data() + end) fail("malformed number");
      pos_ = end;
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::kNumber;
      n->value = v;
      return n;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

PhiExpression::PhiExpression(std::string_view text, int dim) : text_(text) {
  if (dim != 1 && dim != 2) throw InvalidArgument("phi expression: dimension must be 1 or 2");
  root_ = Parser(text, dim).parse();
}

PhiExpression::~PhiExpression() = default;
PhiExpression::PhiExpression(PhiExpression&&) noexcept = default;
PhiExpression& PhiExpression::operator=(PhiExpression&&) noexcept = default;

double PhiExpression::operator()(const Vec3& u) const { return root_->eval(u); }

bool PhiField::even() const { return evenness_defect < kEvennessTolerance; }

PhiField parse_phi(std::string_view spec, const Grid& g) {
  const PhiExpression expr(spec, g.dim());
  PhiField out;
  out.values.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = expr(g.node(i));
    if (!std::isfinite(v)) throw InvalidArgument("phi is not finite at node " + std::to_string(i));
    out.values[i] = v;
  }
  out.min = *std::min_element(out.values.begin(), out.values.end());
  if (!(out.min > 0.0)) {
    std::ostringstream msg;
    msg << "phi must be positive; min over the grid is " << out.min;
    throw InvalidArgument(msg.str());
  }
  out.evenness_defect = antipodal_defect(out.values, g);
  return out;
}

}  // namespace sgflow
