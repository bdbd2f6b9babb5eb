// Copyright 2026 The minridge Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @brief Error types, jets and small numeric helpers shared by all modules.
 */
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace minridge {

inline constexpr double sqrt2 = 1.41421356237309504880;
inline constexpr double inf = std::numeric_limits<double>::infinity();

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct InfeasibleSupportError : ParameterError {
  using ParameterError::ParameterError;
};
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IncompatibleProfileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CompatibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** @brief value with first and second derivative */
struct Jet {
  double v = 0.0, d = 0.0, dd = 0.0;
};

inline Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
inline Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
inline Jet operator*(double s, Jet a) { return {s * a.v, s * a.d, s * a.dd}; }
inline Jet operator*(Jet a, Jet b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}
inline Jet operator/(Jet a, Jet s) {
  Jet q;
  q.v = a.v / s.v;
  q.d = (a.d - q.v * s.d) / s.v;
  q.dd = (a.dd - 2.0 * q.d * s.d - q.v * s.dd) / s.v;
  return q;
}
inline Jet constant_jet(double c) { return {c, 0.0, 0.0}; }
inline Jet identity_jet(double x) { return {x, 1.0, 0.0}; }

/** @brief f evaluated at an affine argument (x - x0) / w, derivatives in x */
inline Jet rescale_argument(Jet f_of_t, double w) {
  return {f_of_t.v, f_of_t.d / w, f_of_t.dd / (w * w)};
}

/** @brief x^p for x > 0 as a jet */
inline Jet pow_jet(double x, double p) {
  double v = std::pow(x, p);
  return {v, p * v / x, p * (p - 1.0) * v / (x * x)};
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace minridge
