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

#pragma once

#include <string>
#include <vector>

namespace pptem {

/// Shortest decimal form that re-parses to the identical double: 17
/// significant digits. Emitted CSV bodies therefore round-trip bit-exactly.
std::string format_double(double v);

/// Parses the numeric cells of a CSV body, skipping `#` comment lines and the
/// header row. Non-numeric cells (e.g. scheme names, the trailer tag) come
/// back as NaN.
std::vector<std::vector<double>> parse_csv_numbers(const std::string& body);

}  // namespace pptem
