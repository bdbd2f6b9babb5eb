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
 * @brief C-infinity cutoffs, steps, plateaus and odd wiggles built from e^{-1/x}.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "minridge/core.hpp"

namespace minridge {

enum class BumpKind { cutoff_nonincreasing, step_nondecreasing, plateau, odd_wiggle };

namespace detail {

inline Jet exp_inv(double x) {
  if (x <= 0.0) return {};
  double f = std::exp(-1.0 / x);
  double x2 = x * x;
  return {f, f / x2, f * (1.0 - 2.0 * x) / (x2 * x2)};
}

/** @brief standard bump exp(1 - 1/(1-t^2)) on (-1,1), equal to 1 at t = 0 */
inline Jet unit_bump(double t) {
  if (t <= -1.0 || t >= 1.0) return {};
  double u = 1.0 - t * t;
  double g = 1.0 - 1.0 / u;
  double g1 = -2.0 * t / (u * u);
  double g2 = -2.0 / (u * u) - 8.0 * t * t / (u * u * u);
  double b = std::exp(g);
  return {b, b * g1, b * (g2 + g1 * g1)};
}

inline double odd_wiggle_norm() {
  // maximizer of t*B(t) solves (1-t^2)^2 = 2t^2
  static const double tstar = (std::sqrt(6.0) - std::sqrt(2.0)) / 2.0;
  static const double n = 1.0 / (tstar * unit_bump(tstar).v);
  return n;
}

}  // namespace detail

/** @brief smoothstep: 0 for t <= 0, 1 for t >= 1 */
inline Jet smoothstep(double t) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0, 0.0};
  Jet a = detail::exp_inv(t);
  Jet b = detail::exp_inv(1.0 - t);
  b.d = -b.d;
  return a / (a + b);
}

/** @brief analytic mollifier of a given kind with transition interval [lo, hi] */
struct Mollifier {
  BumpKind kind = BumpKind::cutoff_nonincreasing;
  double lo = 0.0, hi = 1.0;

  Mollifier() = default;
  Mollifier(BumpKind k, double l, double h) : kind(k), lo(l), hi(h) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw ParameterError("mollifier interval must satisfy lo < hi");
  }

  Jet operator()(double x) const {
    double w = hi - lo;
    switch (kind) {
      case BumpKind::step_nondecreasing:
        return rescale_argument(smoothstep((x - lo) / w), w);
      case BumpKind::cutoff_nonincreasing: {
        Jet s = rescale_argument(smoothstep((x - lo) / w), w);
        return {1.0 - s.v, -s.d, -s.dd};
      }
      case BumpKind::plateau: {
        double r = 0.25 * w;
        Jet up = rescale_argument(smoothstep((x - lo) / r), r);
        Jet dn = rescale_argument(smoothstep((x - hi + r) / r), r);
        return up * Jet{1.0 - dn.v, -dn.d, -dn.dd};
      }
      case BumpKind::odd_wiggle: {
        double t = 2.0 * (x - lo) / w - 1.0;
        double n = detail::odd_wiggle_norm();
        Jet f = n * (identity_jet(t) * detail::unit_bump(t));
        return rescale_argument(f, 0.5 * w);
      }
    }
    return {};
  }

  double value(double x) const { return (*this)(x).v; }
};

/** @brief mollifier sampled on a uniform grid over its transition interval */
struct SmoothFunction {
  Mollifier source;
  double lo = 0.0, hi = 1.0, grid_step = 0.0;
  std::vector<double> nodes, values, d1, d2;

  Jet operator()(double x) const { return source(x); }
  double value(double x) const { return source.value(x); }
};

inline SmoothFunction make_bump(BumpKind kind, double lo, double hi, double grid_step) {
  if (!(grid_step > 0.0)) throw ParameterError("grid_step must be positive");
  SmoothFunction f;
  f.source = Mollifier(kind, lo, hi);
  f.lo = lo;
  f.hi = hi;
  auto n = static_cast<std::size_t>(std::ceil((hi - lo) / grid_step - 1e-9)) + 1;
  if (n < 2) n = 2;
  f.grid_step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    double x = k + 1 == n ? hi : lo + f.grid_step * static_cast<double>(k);
    Jet j = f.source(x);
    f.nodes.push_back(x);
    f.values.push_back(j.v);
    f.d1.push_back(j.d);
    f.d2.push_back(j.dd);
  }
  return f;
}

}  // namespace minridge
