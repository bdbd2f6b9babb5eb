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
 * @brief Adaptive Gauss-Kronrod, Gauss-Legendre rules and uniform-grid sums.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "minridge/core.hpp"

namespace minridge {

namespace detail {

// 7-point Gauss / 15-point Kronrod on [-1, 1]
inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss7_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(F&& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double rk = fc * kronrod_w[7];
  double rg = fc * gauss7_w[3];
  for (int k = 0; k < 7; ++k) {
    double dx = h * kronrod_x[k];
    double s = f(c - dx) + f(c + dx);
    rk += kronrod_w[k] * s;
    if (k % 2 == 1) rg += gauss7_w[k / 2] * s;
  }
  return {rk * h, std::abs((rk - rg) * h)};
}

template <class F>
double adaptive_rec(F& f, double a, double b, double whole, double err, double tol, int depth) {
  if (err <= tol || depth <= 0 || std::abs(b - a) < 1e-300) return whole;
  double m = 0.5 * (a + b);
  auto [l, el] = gk15(f, a, m);
  auto [r, er] = gk15(f, m, b);
  return adaptive_rec(f, a, m, l, el, 0.5 * tol, depth - 1) +
         adaptive_rec(f, m, b, r, er, 0.5 * tol, depth - 1);
}

}  // namespace detail

/** @brief adaptive Gauss-Kronrod bisection with absolute tolerance */
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10, int max_depth = 50) {
  if (a == b) return 0.0;
  auto [v, e] = detail::gk15(f, a, b);
  return detail::adaptive_rec(f, a, b, v, e, abs_tol, max_depth);
}

/** @brief adaptive integral over consecutive breakpoints */
template <class F>
double integrate_pieces(F&& f, const std::vector<double>& breaks, double abs_tol = 1e-10) {
  double s = 0.0;
  std::size_t n = breaks.size();
  for (std::size_t k = 0; k + 1 < n; ++k)
    if (breaks[k + 1] > breaks[k])
      s += integrate(f, breaks[k], breaks[k + 1], abs_tol / static_cast<double>(n));
  return s;
}

/** @brief n-point Gauss-Legendre nodes and weights on [-1, 1] */
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5)), dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }

  template <class F>
  double operator()(F&& f, double a, double b) const {
    double c = 0.5 * (a + b), h = 0.5 * (b - a), s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(c + h * x[i]);
    return s * h;
  }
};

/** @brief composite trapezoid weights (unit spacing) */
inline double trapezoid_weight(std::size_t k, std::size_t n) {
  return (k == 0 || k + 1 == n) ? 0.5 : 1.0;
}

inline double trapezoid(const std::vector<double>& f, double h) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += trapezoid_weight(k, f.size()) * f[k];
  return s * h;
}

}  // namespace minridge
