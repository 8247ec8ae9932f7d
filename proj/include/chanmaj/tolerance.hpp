// Copyright 2026 The chanmaj Authors
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

#include <cstdlib>
#include <string>

namespace chanmaj {

/// Entries of a probability vector may dip this far below zero before they
/// are rejected; anything within the band is clamped to zero.
inline constexpr double kNumericalEps = 1e-12;

/// Allowed drift of column and row sums away from one.
inline constexpr double kNormalizationTol = 1e-9;

namespace detail {

inline double tolerance_from_env() {
  const char* raw = std::getenv("CHANMAJ_TOL");
  if (raw == nullptr || *raw == '\0') return 1e-9;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0.0) || v >= 1.0) return 1e-9;
  return v;
}

}  // namespace detail

/// Slack used by every majorization comparison. Defaults to 1e-9 and can be
/// overridden once per process through the CHANMAJ_TOL environment variable.
inline double comparison_tolerance() {
  static const double tol = detail::tolerance_from_env();
  return tol;
}

}  // namespace chanmaj
