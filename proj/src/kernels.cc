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

#include <cstdlib>
#include <cstring>

#include "ipd/kernels.h"

namespace ipd::kernels {

const KernelTable& ScalarTable() {
  static const KernelTable table{"scalar", &scalar::CountJointActions,
                                 &scalar::AccumulateCooperation,
                                 &scalar::DenseReluOutput};
  return table;
}

const KernelTable& Active() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* force = std::getenv("IPD_FORCE_SCALAR");
    if (force != nullptr && std::strcmp(force, "0") != 0) return ScalarTable();
    if (const KernelTable* t = Avx2Table()) return *t;
    return ScalarTable();
  }();
  return table;
}

}  // namespace ipd::kernels
