// Copyright 2026 The fieldsup Authors
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

#ifndef FIELDSUP_ERRORS_HPP_
#define FIELDSUP_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace fieldsup {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed something outside an operation's domain (bad index, unknown
/// event id in a query string).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Structurally inconsistent automaton or incompatible operands.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameter values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Text input that could not be parsed. Carries a 1-based line number when
/// one is known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Numerical breakdown during simulation: barrier violated, non-finite state.
class SimulationFault : public Error {
 public:
  using Error::Error;
};

/// Mixer demand that would need a negative squared rotor speed.
class ActuatorInfeasible : public Error {
 public:
  ActuatorInfeasible(int channel, const std::string& what)
      : Error(what), channel_(channel) {}

  int channel() const noexcept { return channel_; }

 private:
  int channel_;
};

/// An event the plant cannot execute in its current state.
class ModelViolation : public Error {
 public:
  using Error::Error;
};

/// The executor tried to fire a controllable event that is disabled.
class ExecutorBug : public Error {
 public:
  using Error::Error;
};

/// Some specification has an empty supremal controllable sublanguage.
class SynthesisFailure : public Error {
 public:
  SynthesisFailure(std::string spec, const std::string& what)
      : Error(what), spec_(std::move(spec)) {}

  const std::string& spec() const noexcept { return spec_; }

 private:
  std::string spec_;
};

/// The modular supervisors block each other.
class ConflictError : public Error {
 public:
  using Error::Error;
};

}  // namespace fieldsup

#endif  // FIELDSUP_ERRORS_HPP_
