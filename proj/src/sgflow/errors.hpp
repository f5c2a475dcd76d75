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

#ifndef SGFLOW_ERRORS_HPP_
#define SGFLOW_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgflow {

// Values match the SGF_ERR_* codes of the C API.
enum class ErrorCode {
  kInvalidArgument = 1,
  kConvexity = 2,
  kNotConverged = 3,
  kParse = 4,
  kIo = 5,
  kNumerical = 6,
  kStepFailure = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCode::kInvalidArgument, what) {}
};

// Radii-of-curvature matrix not positive definite (or degenerate) somewhere.
class ConvexityError : public Error {
 public:
  ConvexityError(const std::string& what, std::size_t node, double eigenvalue)
      : Error(ErrorCode::kConvexity, what), node_(node), eigenvalue_(eigenvalue) {}
  std::size_t node() const noexcept { return node_; }
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  std::size_t node_;
  double eigenvalue_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(ErrorCode::kParse, what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::kNumerical, what) {}
};

// Adaptive stepping gave up (too many rejections, e.g. near blow-up).
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, double t, double dt)
      : Error(ErrorCode::kStepFailure, what), t_(t), dt_(dt) {}
  double time() const noexcept { return t_; }
  double last_dt() const noexcept { return dt_; }

 private:
  double t_;
  double dt_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

}  // namespace sgflow

#endif  // SGFLOW_ERRORS_HPP_
