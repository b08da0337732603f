// Copyright 2026 The nandwalk Authors
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

#include <complex>
#include <stdexcept>
#include <string>

namespace nandwalk {

using Amplitude = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Thrown when a request exceeds a configured resource cap (dimension,
/// segment budget, recursion depth). CLI maps this to exit code 2.
struct cap_exceeded : std::runtime_error {
    explicit cap_exceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Dense-reference dimension cap. Defaults to 4096; the environment
/// variable NANDWALK_DENSE_CAP overrides it.
int dense_cap();

}  // namespace nandwalk
