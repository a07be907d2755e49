// Copyright 2026 The IPD Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The `ipd` command line: tournament, train, report, list-strategies and
// validate-spec.
//
// Settings come from three layers, later ones winning: built-in defaults, a
// config file (--config, INI sections or a previous run's manifest.json), and
// command-line flags. The output directory is --output-dir, else
// $IPD_OUTPUT_DIR, else ./ipd-output.

#ifndef IPD_CLI_H_
#define IPD_CLI_H_

#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ipd/corpus.h"
#include "ipd/strategy_spec.h"

namespace ipd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

inline constexpr const char* kOutputDirEnv = "IPD_OUTPUT_DIR";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kConfigEcho = "config.ini";
inline constexpr int kManifestFormatVersion = 1;

// Bad flags, config values or roster entries. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Comma-separated roster entries. Each entry is a registry name, one of the
// keywords `default` (every non-Meta strategy), `classics` (the classic
// strategies) or `all`, or a path to a strategy file. Unknown names throw
// ConfigError listing the nearest registry names.
std::vector<StrategySpec> ResolveRoster(std::string_view roster,
                                        const Registry& registry);

// Runs one command. argv[0] is the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ipd::cli

#endif  // IPD_CLI_H_
