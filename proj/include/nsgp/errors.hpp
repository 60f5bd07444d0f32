// Copyright 2026 The nsgp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace nsgp {

enum class ErrorCode {
  invalid_argument,
  domain,
  unsupported_parameter,
  oracle_size,
  resource,
  shape,
};

/// Base class for every error raised by the library. The code is what the
/// CLI maps onto process exit statuses.
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
      : Error(ErrorCode::invalid_argument, what) {}
};

/// A value (point coordinate, scale field sample) left its declared range.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::domain, what) {}
};

class UnsupportedParameter : public Error {
 public:
  explicit UnsupportedParameter(const std::string& what)
      : Error(ErrorCode::unsupported_parameter, what) {}
};

/// Dense O(N^2) verification path refused because N exceeds the oracle cap.
class OracleSizeError : public Error {
 public:
  explicit OracleSizeError(const std::string& what)
      : Error(ErrorCode::oracle_size, what) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what)
      : Error(ErrorCode::resource, what) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(ErrorCode::shape, what) {}
};

// Non-fatal diagnostics (e.g. |w(x)| > 1, grid spacing above 1/8). The default
// handler writes to stderr; tests install their own to capture messages.
using WarningHandler = std::function<void(const std::string&)>;

void warn(const std::string& message);
WarningHandler set_warning_handler(WarningHandler handler);

}  // namespace nsgp
