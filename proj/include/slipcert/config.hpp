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

#ifndef SLIPCERT_CONFIG_HPP
#define SLIPCERT_CONFIG_HPP

#include "slipcert/search.hpp"
#include "slipcert/simulator.hpp"

#include <optional>
#include <span>
#include <string>

namespace slipcert {

/// A parsed configuration file.
///
/// Format: `[section]` headers and `key = value` lines. `#` starts a comment
/// anywhere, `;` only at the start of a line. Sections are [pll] or [system], plus optional [certificate] and
/// [simulation]. Every error is a ConfigError carrying the line number.
struct Config {
  CertProblem problem;
  SearchOptions search;
  SimulationOptions simulation;
  /// Run Theorem 4 against the PLL initial-condition family envelope.
  bool family = false;
  std::string name;
};

Config parse_config(const std::string& text, const std::string& name = "<config>");
Config load_config(const std::string& path);

/// The built-in PLL example configurations (beta = 0.9, 0.92, 0.95).
struct BuiltinConfig {
  const char* name;
  const char* text;
  double beta;
  int expected_r0;
};
std::span<const BuiltinConfig> builtin_configs();

} // namespace slipcert

#endif // SLIPCERT_CONFIG_HPP
