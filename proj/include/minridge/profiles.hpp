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
 * @brief No-stretch boundary profiles (Phi, Psi, Xi) on both sides of the bend.
 *
 * Node k of the plus half sits at eta = k*h, node k of the minus half at
 * eta = -k*h. Both halves share node 0.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "minridge/core.hpp"
#include "minridge/mollifier.hpp"
#include "minridge/quadrature.hpp"

namespace minridge {

struct ProfileHalf {
  std::vector<double> phi, dphi, ddphi, psi, xi;
};

/** @brief profile functions and derivatives at one point */
struct ProfileSample {
  double phi = 0.0, dphi = 0.0, ddphi = 0.0;
  double psi = 0.0, dpsi = 0.0;
  double xi = 0.0, dxi = 0.0;
};

namespace detail {

inline double hermite(double f0, double f1, double d0, double d1, double t, double H) {
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * H * d0 + (-2 * t3 + 3 * t2) * f1 +
         (t3 - t2) * H * d1;
}

inline double hermite_slope(double f0, double f1, double d0, double d1, double t, double H) {
  double t2 = t * t;
  return ((6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * H * d0 + (-6 * t2 + 6 * t) * f1 +
          (3 * t2 - 2 * t) * H * d1) /
         H;
}

/** @brief Xi' from U_Y = -V_X - 2 W_X W_Y with W = Phi, V = Psi */
inline double xi_slope(double eta, double phi, double dphi, double psi, double dpsi) {
  return -(psi - eta * dpsi + 2.0 * dphi * (phi - eta * dphi));
}

}  // namespace detail

struct NoStretchProfile {
  double grid_step = 0.0;
  double K = 0.0;
  double delta = 0.0;
  double curvature_norm = 0.0;
  ProfileHalf plus, minus;

  std::size_t size() const { return plus.phi.size(); }
  double eta(std::size_t k, int side) const { return side * grid_step * static_cast<double>(k); }
  const ProfileHalf& half(int side) const { return side > 0 ? plus : minus; }
  double phi0() const { return plus.phi.empty() ? 0.0 : plus.phi[0]; }

  /** @brief Psi' = -Phi'^2 and Xi' from its defining ODE are imposed at off-node points; -0 reads the minus half */
  ProfileSample eval(double e) const {
    ProfileSample s;
    std::size_t n = size();
    if (n < 2 || std::abs(e) >= K) return s;
    int side = std::signbit(e) ? -1 : 1;
    const ProfileHalf& p = half(side);
    double r = std::abs(e) / grid_step;
    auto k = std::min(static_cast<std::size_t>(r), n - 2);
    double t = r - static_cast<double>(k);
    double H = side * grid_step;
    s.phi = detail::hermite(p.phi[k], p.phi[k + 1], p.dphi[k], p.dphi[k + 1], t, H);
    s.dphi = detail::hermite(p.dphi[k], p.dphi[k + 1], p.ddphi[k], p.ddphi[k + 1], t, H);
    s.ddphi = detail::hermite_slope(p.dphi[k], p.dphi[k + 1], p.ddphi[k], p.ddphi[k + 1], t, H);
    double dp0 = -p.dphi[k] * p.dphi[k], dp1 = -p.dphi[k + 1] * p.dphi[k + 1];
    s.psi = detail::hermite(p.psi[k], p.psi[k + 1], dp0, dp1, t, H);
    s.dpsi = -s.dphi * s.dphi;
    if (!p.xi.empty()) {
      double e0 = eta(k, side), e1 = eta(k + 1, side);
      double x0 = detail::xi_slope(e0, p.phi[k], p.dphi[k], p.psi[k], dp0);
      double x1 = detail::xi_slope(e1, p.phi[k + 1], p.dphi[k + 1], p.psi[k + 1], dp1);
      s.xi = detail::hermite(p.xi[k], p.xi[k + 1], x0, x1, t, H);
      s.dxi = detail::xi_slope(e, s.phi, s.dphi, s.psi, s.dpsi);
    }
    return s;
  }
};

/** @brief the root q*, width l and minimal support of the zero-shift slope */
struct ZeroShiftConstruction {
  Mollifier zeta{BumpKind::cutoff_nonincreasing, -1.0, 0.0};
  Mollifier wiggle{BumpKind::odd_wiggle, -1.0, 0.0};
  double q_star = 0.0;
  double shift_at_root = 0.0;
  double ell = 0.0;
  double K0 = 0.0;
  int iterations = 0;

  Jet varsigma(double x) const { return zeta(x) + q_star * wiggle(x); }
};

/** @brief integral over [-1,0] of s(2-s) with s = zeta + q*wiggle */
inline double zero_shift_functional(const ZeroShiftConstruction& c, double q) {
  auto f = [&](double x) {
    double s = c.zeta.value(x) + q * c.wiggle.value(x);
    return s * (2.0 - s);
  };
  return integrate(f, -1.0, 0.0, 1e-15);
}

inline ZeroShiftConstruction solve_zero_shift() {
  ZeroShiftConstruction c;
  auto D = [&](double q) { return zero_shift_functional(c, q); };
  double hi = 0.0, lo = -1.0;
  if (!(D(hi) >= 0.0)) throw ConstructionError("zero-shift functional negative at q = 0");
  int doublings = 0;
  while (D(lo) > 0.0) {
    lo *= 2.0;
    if (++doublings > 60) throw ConstructionError("no root bracket for q*");
  }
  double mid = 0.5 * (lo + hi), dm = D(mid);
  int it = 0;
  for (; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    dm = D(mid);
    if (std::abs(dm) < 1e-14 || hi - lo < 1e-16) break;
    (dm > 0.0 ? hi : lo) = mid;
  }
  c.q_star = mid;
  c.shift_at_root = dm;
  c.iterations = it;
  c.ell = integrate([&](double x) { double d = c.varsigma(x).d; return d * d; }, -1.0, 0.0, 1e-14);
  c.K0 = 2.0 * c.ell;
  return c;
}

inline double curvature_norm(const NoStretchProfile& p) {
  auto sq = [](std::vector<double> v) {
    for (double& x : v) x *= x;
    return v;
  };
  return trapezoid(sq(p.plus.ddphi), p.grid_step) + trapezoid(sq(p.minus.ddphi), p.grid_step);
}

/** @brief Delta = -[2 sqrt2 Phi+(0) + int Phi-'^2 + int Phi+'^2] */
inline double asymptotic_shift(const NoStretchProfile& p) {
  if (p.size() == 0) return 0.0;
  auto sq = [](std::vector<double> v) {
    for (double& x : v) x *= x;
    return v;
  };
  return -(2.0 * sqrt2 * p.plus.phi[0] + trapezoid(sq(p.minus.dphi), p.grid_step) +
           trapezoid(sq(p.plus.dphi), p.grid_step));
}

/**
 * @brief reflected profile from the plus-half slope Phi+' (value and derivative).
 *
 * Phi-(eta) = Phi+(-eta), Psi-(eta) = -Psi+(-eta). Phi and Psi are integrated
 * inward from eta = K cell by cell.
 */
inline NoStretchProfile build_reflected_profile(const std::function<Jet(double)>& slope, double K,
                                                double grid_step) {
  require(K > 0.0 && grid_step > 0.0 && grid_step < K, "profile grid requires 0 < h < K");
  auto cells = static_cast<std::size_t>(std::llround(K / grid_step));
  cells = std::max<std::size_t>(cells, 4);
  std::size_t n = cells + 1;
  NoStretchProfile p;
  p.K = K;
  p.grid_step = K / static_cast<double>(cells);
  ProfileHalf& h = p.plus;
  h.phi.assign(n, 0.0);
  h.dphi.assign(n, 0.0);
  h.ddphi.assign(n, 0.0);
  h.psi.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    Jet s = slope(p.eta(k, 1));
    h.dphi[k] = s.v;
    h.ddphi[k] = s.d;
  }
  for (std::size_t k = n - 1; k-- > 0;) {
    double a = p.eta(k, 1), b = p.eta(k + 1, 1);
    h.phi[k] = h.phi[k + 1] - integrate([&](double x) { return slope(x).v; }, a, b, 1e-16, 30);
    h.psi[k] = h.psi[k + 1] + integrate([&](double x) { double v = slope(x).v; return v * v; }, a, b, 1e-16, 30);
  }
  ProfileHalf& m = p.minus;
  m = h;
  for (std::size_t k = 0; k < n; ++k) {
    m.dphi[k] = -h.dphi[k];
    m.psi[k] = -h.psi[k];
  }
  p.delta = asymptotic_shift(p);
  p.curvature_norm = curvature_norm(p);
  return p;
}

/** @brief normalized slope of the zero-shift construction, Phi+'(eta) = varsigma(eta/l - 1)/sqrt2 */
inline std::function<Jet(double)> zero_shift_slope(const ZeroShiftConstruction& c) {
  return [c](double e) -> Jet {
    if (e >= c.ell) return {};
    Jet s = rescale_argument(c.varsigma(e / c.ell - 1.0), c.ell);
    return (1.0 / sqrt2) * s;
  };
}

/** @brief slope of the same family with an arbitrary wiggle weight q; Delta != 0 unless q = q* */
inline std::function<Jet(double)> chopped_slope(double q, double ell) {
  ZeroShiftConstruction c;
  c.q_star = q;
  c.ell = ell;
  return zero_shift_slope(c);
}

inline NoStretchProfile make_xi(NoStretchProfile p, double tol = 1e-8) {
  if (std::abs(asymptotic_shift(p)) > tol)
    throw IncompatibleProfileError("Xi requires a zero asymptotic shift");
  for (int side : {1, -1}) {
    ProfileHalf& h = side > 0 ? p.plus : p.minus;
    std::size_t n = h.phi.size();
    h.xi.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) h.xi[k] = -(p.eta(k, side) * h.psi[k] + h.phi[k] * h.phi[k]);
    double c = -h.xi[n - 1];
    for (double& x : h.xi) x += c;
  }
  return p;
}

inline NoStretchProfile build_zero_shift_profile(double K, double grid_step = 0.0) {
  static const ZeroShiftConstruction c = solve_zero_shift();
  if (K < c.K0) throw InfeasibleSupportError("support K below K0 = " + std::to_string(c.K0));
  if (grid_step <= 0.0) grid_step = K / 512.0;
  return make_xi(build_reflected_profile(zero_shift_slope(c), K, grid_step));
}

inline const ZeroShiftConstruction& zero_shift_construction() {
  static const ZeroShiftConstruction c = solve_zero_shift();
  return c;
}

inline double default_support() { return zero_shift_construction().K0; }

/** @brief profile from sampled Phi values; missing derivatives come from finite differences */
inline NoStretchProfile profile_from_samples(double grid_step, std::vector<double> phi_plus,
                                             std::vector<double> phi_minus,
                                             std::vector<double> dphi_plus = {},
                                             std::vector<double> dphi_minus = {}) {
  std::size_t n = phi_plus.size();
  require(n >= 5 && phi_minus.size() == n, "profile samples need matching halves of >= 5 nodes");
  NoStretchProfile p;
  p.grid_step = grid_step;
  p.K = grid_step * static_cast<double>(n - 1);
  auto fill = [&](ProfileHalf& h, std::vector<double> phi, std::vector<double> dphi, int side) {
    double hs = side * grid_step;
    auto diff = [&](const std::vector<double>& f) {
      std::vector<double> d(n);
      for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - f[k - 1]) / (2 * hs);
      d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * hs);
      d[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * hs);
      return d;
    };
    h.phi = std::move(phi);
    h.dphi = dphi.size() == n ? std::move(dphi) : diff(h.phi);
    h.ddphi = diff(h.dphi);
    h.psi.assign(n, 0.0);
    for (std::size_t k = n - 1; k-- > 0;)
      h.psi[k] = h.psi[k + 1] + side * 0.5 * grid_step *
                                    (h.dphi[k] * h.dphi[k] + h.dphi[k + 1] * h.dphi[k + 1]);
  };
  fill(p.plus, std::move(phi_plus), std::move(dphi_plus), 1);
  fill(p.minus, std::move(phi_minus), std::move(dphi_minus), -1);
  p.delta = asymptotic_shift(p);
  p.curvature_norm = curvature_norm(p);
  return p;
}

struct ValidationReport {
  double no_stretch = 0.0, normalization = 0.0, matching_value = 0.0, matching_slope = 0.0,
         matching_psi = 0.0, support = 0.0, shift = 0.0;
  double tol_analytic = 1e-10, tol_quadrature = 1e-8;
  bool pass_no_stretch = false, pass_normalization = false, pass_matching = false,
       pass_support = false, pass_shift = false, pass = false;
};

/** @brief fourth-order derivative of nodal data along one half */
inline std::vector<double> nodal_derivative(const std::vector<double>& f, double h) {
  std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 5) return d;
  for (std::size_t k = 2; k + 2 < n; ++k)
    d[k] = (f[k - 2] - 8 * f[k - 1] + 8 * f[k + 1] - f[k + 2]) / (12 * h);
  d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
  d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h);
  d[n - 1] = (25 * f[n - 1] - 48 * f[n - 2] + 36 * f[n - 3] - 16 * f[n - 4] + 3 * f[n - 5]) / (12 * h);
  d[n - 2] = (3 * f[n - 1] + 10 * f[n - 2] - 18 * f[n - 3] + 6 * f[n - 4] - f[n - 5]) / (12 * h);
  return d;
}

inline ValidationReport verify_profile(const NoStretchProfile& p) {
  ValidationReport r;
  std::size_t n = p.size();
  if (n < 5) return r;
  double h = p.grid_step;
  for (int side : {1, -1}) {
    const ProfileHalf& s = p.half(side);
    std::vector<double> dpsi = nodal_derivative(s.psi, side * h), res(n);
    for (std::size_t k = 0; k < n; ++k) {
      double e = s.dphi[k] * s.dphi[k] + dpsi[k];
      res[k] = e * e;
    }
    r.no_stretch += trapezoid(res, h);
    for (const auto* f : {&s.phi, &s.dphi, &s.psi, &s.xi})
      if (!f->empty()) r.support = std::max(r.support, std::abs(f->back()));
  }
  r.normalization = std::abs(curvature_norm(p) - 1.0);
  r.matching_value = std::abs(p.plus.phi[0] - p.minus.phi[0]);
  r.matching_slope = std::abs(p.minus.dphi[0] - (p.plus.dphi[0] - sqrt2));
  r.matching_psi = std::abs(p.minus.psi[0] - p.plus.psi[0] - 2 * sqrt2 * p.plus.phi[0] - p.delta);
  r.shift = std::abs(asymptotic_shift(p) - p.delta);
  r.pass_no_stretch = r.no_stretch < r.tol_analytic;
  r.pass_normalization = r.normalization < r.tol_quadrature;
  r.pass_matching = r.matching_value < r.tol_analytic && r.matching_slope < r.tol_analytic &&
                    r.matching_psi < r.tol_quadrature;
  r.pass_support = r.support < r.tol_analytic;
  r.pass_shift = r.shift < r.tol_quadrature;
  r.pass = r.pass_no_stretch && r.pass_normalization && r.pass_matching && r.pass_support &&
           r.pass_shift;
  return r;
}

}  // namespace minridge
