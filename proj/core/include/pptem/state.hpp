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

#include <span>
#include <vector>

namespace pptem {

/// State of a d-dimensional system. Dimension is a runtime value so one
/// binary serves scalar and multi-dimensional models alike.
using StateVector = std::vector<double>;

/// True iff every component is strictly positive. The boundary is excluded;
/// NaN components compare false and therefore fail the test.
bool in_positive_cone(std::span<const double> x);

/// True iff no component is NaN or infinite.
bool all_finite(std::span<const double> x);

double euclidean_norm(std::span<const double> x);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace pptem
