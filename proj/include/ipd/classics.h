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

// Hand-designed strategies, addressed by a stable key.

#ifndef IPD_CLASSICS_H_
#define IPD_CLASSICS_H_

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "ipd/strategy.h"

namespace ipd {

struct ClassicInfo {
  std::string_view key;
  std::string_view display_name;
  bool stochastic;
  std::optional<int> memory_depth;
};

const std::vector<ClassicInfo>& ClassicCatalog();
const ClassicInfo* FindClassic(std::string_view key);

// nullptr for an unknown key.
std::unique_ptr<Strategy> MakeClassic(std::string_view key, double parameter);

}  // namespace ipd

#endif  // IPD_CLASSICS_H_
