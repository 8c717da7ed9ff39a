/*
 *  Copyright 2026 The slipcert Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

#ifndef SLIPCERT_ERROR_HPP
#define SLIPCERT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slipcert {

/// Input outside the domain of a formula or a model class (e.g. beta > 1, mu >= 1/r).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed configuration text. `line()` is 1-based, 0 when not line-specific.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Numerical integration failure: step-size precondition or non-finite state.
class SimulationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Quadrature or root bracketing failed to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace slipcert

#endif // SLIPCERT_ERROR_HPP
