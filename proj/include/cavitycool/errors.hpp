// Copyright 2026 The cavitycool Authors
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

#include <stdexcept>
#include <string>

namespace cavitycool {

/// Failure categories shared by the C++ API and the C status codes.
enum class ErrorKind {
  Domain,         // argument outside the operation's domain
  Integration,    // step size too large / probability or norm drift
  Degenerate,     // singular stationary problem or zero-rate corner
  NotApplicable,  // closed form requested outside its assumptions
  Config,         // experiment configuration rejected
  Io,             // file system failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class IntegrationError : public Error {
 public:
  explicit IntegrationError(const std::string& what)
      : Error(ErrorKind::Integration, what) {}
};

class DegenerateError : public Error {
 public:
  explicit DegenerateError(const std::string& what)
      : Error(ErrorKind::Degenerate, what) {}
};

class NotApplicableError : public Error {
 public:
  explicit NotApplicableError(const std::string& what)
      : Error(ErrorKind::NotApplicable, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace cavitycool
