// Copyright 2026 the pptem project
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

#include "pptem/model.hpp"

#include <stdexcept>

namespace pptem {

const char* to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::em: return "em";
    case SchemeKind::tem_norm: return "tem";
    case SchemeKind::pptem: return "pptem";
  }
  return "?";
}

SchemeKind scheme_from_string(std::string_view s) {
  if (s == "em") return SchemeKind::em;
  if (s == "tem" || s == "tem_norm") return SchemeKind::tem_norm;
  if (s == "pptem") return SchemeKind::pptem;
  throw std::invalid_argument("unknown scheme '" + std::string(s) + "' (expected em, tem or pptem)");
}

}  // namespace pptem
