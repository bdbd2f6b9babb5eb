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
 * @brief Upper-bound test configurations: crossover width, self-similar fields,
 * boundary layers, the composite and pinched solutions, and region scalings.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "minridge/core.hpp"
#include "minridge/energy.hpp"
#include "minridge/fields.hpp"
#include "minridge/mollifier.hpp"
#include "minridge/profiles.hpp"
#include "minridge/quadrature.hpp"

namespace minridge {

// ---------------------------------------------------------------- crossover width

/**
 * @brief which width function rho(X) = g(1 - X^2) to use.
 *
 * literal: the three-term g with inner scale A eps^{1/3}.
 * matched: literal for A < eps^{2/3}; otherwise A phi(z/A^{3/2}) + z^{2/3} phibar(z/A^{3/2}).
 * constant: g = A.
 */
enum class CrossoverVariant { literal, matched, constant };

struct CrossoverSpec {
  double A = 1.0, eps = 1e-3;
  CrossoverVariant variant = CrossoverVariant::matched;
  Mollifier phi{BumpKind::cutoff_nonincreasing, 0.5, 2.0};

  void validate() const {
    if (!(A > 0.0 && eps > 0.0)) throw ParameterError("crossover needs A > 0 and eps > 0");
  }
};

namespace detail {

inline Jet complement(Jet j) { return {1.0 - j.v, -j.d, -j.dd}; }
inline bool vanishes(Jet j) { return j.v == 0.0 && j.d == 0.0 && j.dd == 0.0; }

}  // namespace detail

/** @brief g(z) with g' and g'' */
inline Jet crossover_g(double z, const CrossoverSpec& s) {
  s.validate();
  if (!(z >= 0.0)) throw DomainError("crossover_g needs z >= 0");
  auto cut = [&](double c) { return rescale_argument(s.phi(z / c), c); };
  auto power = [&](Jet w) { return detail::vanishes(w) ? Jet{} : pow_jet(z, 2.0 / 3.0) * w; };
  double e3 = std::cbrt(s.eps);
  if (s.variant == CrossoverVariant::constant) return constant_jet(s.A);
  if (s.variant == CrossoverVariant::matched && s.A >= e3 * e3) {
    Jet p = cut(std::pow(s.A, 1.5));
    return s.A * p + power(detail::complement(p));
  }
  Jet p1 = cut(s.A * e3), pe = cut(s.eps);
  Jet out = s.A * p1;
  Jet mid = detail::complement(p1) * pe;
  if (!detail::vanishes(mid)) out = out + (identity_jet(z) * mid) * constant_jet(1.0 / e3);
  return out + power(detail::complement(pe));
}

/** @brief rho(X) = g(1 - X^2) with derivatives in X */
inline Jet crossover_rho(double X, const CrossoverSpec& s) {
  double z = std::max(0.0, (1.0 - X) * (1.0 + X));
  Jet g = crossover_g(z, s);
  return {g.v, -2.0 * X * g.d, 4.0 * X * X * g.dd - 2.0 * g.d};
}

/** @brief transition points of g in z */
inline std::vector<double> crossover_breaks(const CrossoverSpec& s) {
  double e3 = std::cbrt(s.eps);
  std::vector<double> c = {s.A * e3, s.eps, std::pow(s.A, 1.5)};
  std::vector<double> z;
  for (double v : c) z.push_back(0.5 * v), z.push_back(2.0 * v);
  return z;
}

/** @brief measured constants of the four crossover inequalities */
struct CrossoverConstants {
  double c_lower = inf, C_upper = 0.0, C_d1 = 0.0, C_d2 = 0.0;
};

/** @brief h(z) of the crossover inequalities and the indicator of the inner plateau */
inline double crossover_h(double z, const CrossoverSpec& s) {
  double e3 = std::cbrt(s.eps), h = 0.0;
  if (z >= 0.5 * s.A * e3 && z <= 2.0 * s.eps) h += z / e3;
  if (z >= 0.5 * s.eps) h += std::pow(z, 2.0 / 3.0);
  return h;
}

inline CrossoverConstants crossover_constants(const CrossoverSpec& s, double z_lo = 1e-8, double z_hi = 1.0,
                                              int samples = 4000) {
  CrossoverConstants c;
  double e3 = std::cbrt(s.eps);
  for (int k = 0; k < samples; ++k) {
    double z = z_lo * std::pow(z_hi / z_lo, k / (samples - 1.0));
    Jet g = crossover_g(z, s);
    double h = crossover_h(z, s);
    double base = (z <= 2.0 * s.A * e3 ? s.A : 0.0) + h;
    if (base > 0.0) {
      c.c_lower = std::min(c.c_lower, g.v / base);
      c.C_upper = std::max(c.C_upper, g.v / base);
    }
    auto ratio = [&](double num, double den) {
      if (num == 0.0) return 0.0;
      return den > 0.0 ? num / den : inf;
    };
    c.C_d1 = std::max(c.C_d1, ratio(std::abs(g.d), h * (1.0 + 1.0 / z)));
    c.C_d2 = std::max(c.C_d2, ratio(std::abs(g.dd), h * (1.0 + 1.0 / (z * z))));
  }
  return c;
}

// ---------------------------------------------------------------- self-similar fields

/** @brief fields and first derivatives of a scaled configuration at one point */
struct FieldSample {
  double U = 0, V = 0, W = 0;
  double U_X = 0, U_Y = 0, V_X = 0, V_Y = 0, W_X = 0, W_Y = 0;
};

inline void require_zero_shift(const NoStretchProfile& p) {
  if (std::abs(asymptotic_shift(p)) > 1e-8)
    throw IncompatibleProfileError("self-similar fields need a zero asymptotic shift");
  if (p.plus.xi.empty()) throw IncompatibleProfileError("profile has no Xi; call make_xi first");
}

/** @brief W = rho Phi(Y/rho), V = rho Psi(Y/rho), U = rho' rho Xi(Y/rho) at signed Y */
inline FieldSample self_similar_point(const NoStretchProfile& p, const Jet& rho, double Y) {
  FieldSample f;
  double r = rho.v, rp = rho.d, rpp = rho.dd;
  double eta = Y / r;
  ProfileSample s = p.eval(eta);
  f.W = r * s.phi;
  f.V = r * s.psi;
  f.U = rp * r * s.xi;
  f.W_Y = s.dphi;
  f.V_Y = s.dpsi;
  f.U_Y = rp * s.dxi;
  f.W_X = rp * (s.phi - eta * s.dphi);
  f.V_X = rp * (s.psi - eta * s.dpsi);
  f.U_X = (r * rpp + rp * rp) * s.xi - rp * rp * eta * s.dxi;
  return f;
}

/** @brief largest rho over a sample of X */
inline double max_rho(const CrossoverSpec& s, int samples = 2001) {
  double m = 0.0;
  for (int k = 0; k < samples; ++k) m = std::max(m, crossover_rho(-1.0 + 2.0 * k / (samples - 1.0), s).v);
  return m;
}

/** @brief grid over [-1,1] x [0, Ymax] with Ymax = max(2 K rho_max, 8) */
inline Grid2 self_similar_grid(const NoStretchProfile& p, const CrossoverSpec& s, std::size_t nx, std::size_t ny) {
  return make_grid(nx, ny, -1.0, 1.0, std::max(2.0 * p.K * std::max(max_rho(s), s.A), 8.0));
}

inline ScaledFields self_similar_fields(const NoStretchProfile& p, const CrossoverSpec& s, const Grid2& g) {
  require_zero_shift(p);
  s.validate();
  ScaledFields f = make_scaled(g, s.eps, s.A, 0.0);
  for (std::size_t i = 0; i < g.nx; ++i) {
    Jet rho = crossover_rho(g.x(i), s);
    for (std::size_t j = 0; j < g.ny; ++j)
      for (int side : {1, -1}) {
        FieldSample q = self_similar_point(p, rho, side * g.s(j));
        HalfFields& h = f.half(side);
        std::size_t k = g.at(i, j);
        h.U[k] = q.U;
        h.V[k] = q.V;
        h.W[k] = q.W;
      }
  }
  return f;
}

// ---------------------------------------------------------------- semi-analytic energy

/** @brief eta-moments of the profile entering the self-similar energy, summed over both halves */
struct ProfileMoments {
  double xixi = 0, xiR = 0, RR = 0, PP = 0, PQ = 0, QQ = 0, eta2_curv = 0, curvature = 0;
};

inline ProfileMoments profile_moments(const NoStretchProfile& p) {
  ProfileMoments m;
  for (int side : {1, -1}) {
    const ProfileHalf& h = p.half(side);
    std::size_t n = h.phi.size();
    std::vector<double> f[8];
    for (auto& v : f) v.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      double e = p.eta(k, side);
      double dpsi = -h.dphi[k] * h.dphi[k];
      double xi = h.xi.empty() ? 0.0 : h.xi[k];
      double dxi = detail::xi_slope(e, h.phi[k], h.dphi[k], h.psi[k], dpsi);
      double P = h.phi[k] - e * h.dphi[k], Q = e * e * h.ddphi[k];
      double R = xi - e * dxi + P * P;
      f[0][k] = xi * xi;
      f[1][k] = xi * R;
      f[2][k] = R * R;
      f[3][k] = P * P;
      f[4][k] = P * Q;
      f[5][k] = Q * Q;
      f[6][k] = e * e * h.ddphi[k] * h.ddphi[k];
      f[7][k] = h.ddphi[k] * h.ddphi[k];
    }
    double* out[8] = {&m.xixi, &m.xiR, &m.RR, &m.PP, &m.PQ, &m.QQ, &m.eta2_curv, &m.curvature};
    for (int t = 0; t < 8; ++t) *out[t] += trapezoid(f[t], p.grid_step);
  }
  return m;
}

/** @brief unweighted integrals of the four nonzero terms of a self-similar configuration */
struct SelfSimilarEnergy {
  double eps = 0.0;
  double e_xx = 0, b_yy = 0, b_xy = 0, b_xx = 0;
  double total() const {
    double e23 = std::pow(eps, 2.0 / 3.0);
    return e_xx + b_yy + 2.0 * e23 * b_xy + e23 * e23 * b_xx;
  }
};

namespace detail {

/** @brief breakpoints on [-1,1] clustered at the ends and at the crossover transitions */
inline std::vector<double> x_breaks(const std::vector<double>& zb) {
  std::vector<double> t = {1.0};
  for (double z : zb)
    if (z > 0.0 && z < 1.0) t.push_back(z / (1.0 + std::sqrt(1.0 - z)));
  double tmin = *std::min_element(t.begin(), t.end());
  for (double v = std::max(tmin * 0.5, 1e-14); v < 1.0; v *= 4.0) t.push_back(v);
  t.push_back(0.0);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  std::vector<double> X;
  for (double v : t) X.push_back(-1.0 + v);
  for (auto it = t.rbegin(); it != t.rend(); ++it)
    if (*it < 1.0) X.push_back(1.0 - *it);
  return X;
}

template <class F>
double integrate_relative(F&& f, const std::vector<double>& breaks, double rel = 1e-9) {
  GaussLegendre gl(20);
  double coarse = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) coarse += std::abs(gl(f, breaks[k], breaks[k + 1]));
  return integrate_pieces(f, breaks, rel * std::max(coarse, 1e-300));
}

}  // namespace detail

/** @brief energy integrand terms at one X for a width jet */
inline SelfSimilarEnergy self_similar_density(const Jet& rho, const ProfileMoments& m) {
  SelfSimilarEnergy d;
  double r = rho.v, a = rho.d, b = rho.dd, a2 = a * a;
  d.e_xx = r * (r * r * b * b * m.xixi + 2.0 * r * b * a2 * m.xiR + a2 * a2 * m.RR);
  d.b_yy = m.curvature / r;
  d.b_xy = a2 / r * m.eta2_curv;
  d.b_xx = r * b * b * m.PP + 2.0 * b * a2 * m.PQ + a2 * a2 / r * m.QQ;
  return d;
}

/** @brief self-similar energy for an arbitrary width rho(X) on [-1,1] */
inline SelfSimilarEnergy ridge_energy(const std::function<Jet(double)>& rho, const std::vector<double>& breaks,
                                      double eps, const ProfileMoments& m) {
  SelfSimilarEnergy E;
  E.eps = eps;
  auto term = [&](double SelfSimilarEnergy::*f) {
    return detail::integrate_relative([&](double X) { return self_similar_density(rho(X), m).*f; }, breaks);
  };
  E.e_xx = term(&SelfSimilarEnergy::e_xx);
  E.b_yy = term(&SelfSimilarEnergy::b_yy);
  E.b_xy = term(&SelfSimilarEnergy::b_xy);
  E.b_xx = term(&SelfSimilarEnergy::b_xx);
  return E;
}

/** @brief energy of self_similar_fields by quadrature of the exact X-density */
inline SelfSimilarEnergy self_similar_energy(const CrossoverSpec& s, const NoStretchProfile& p) {
  require_zero_shift(p);
  return ridge_energy([&](double X) { return crossover_rho(X, s); }, detail::x_breaks(crossover_breaks(s)), s.eps,
                      profile_moments(p));
}

/** @brief the four X-integrals bounding the self-similar energy and their profile constants */
struct EnergyEstimates {
  double strain = 0, inverse = 0, slope = 0, curvature = 0;
  double C_strain = 0, C_inverse = 0, C_slope = 0, C_curvature = 0;
  double eps = 0;
  /** @brief C_strain T1 + C_inverse T2 + 2 eps^{2/3} C_slope T3 + eps^{4/3} C_curvature T4 */
  double bound() const {
    double e23 = std::pow(eps, 2.0 / 3.0);
    return C_strain * strain + C_inverse * inverse + 2.0 * e23 * C_slope * slope + e23 * e23 * C_curvature * curvature;
  }
};

inline EnergyEstimates estimate_energy_terms(const CrossoverSpec& s, const NoStretchProfile& p) {
  s.validate();
  ProfileMoments m = profile_moments(p);
  EnergyEstimates E;
  E.eps = s.eps;
  auto br = detail::x_breaks(crossover_breaks(s));
  auto rho = [&](double X) { return crossover_rho(X, s); };
  E.strain = detail::integrate_relative(
      [&](double X) { Jet r = rho(X); return (r.dd * r.dd * r.v * r.v + std::pow(r.d, 4)) * r.v; }, br);
  E.inverse = detail::integrate_relative([&](double X) { return 1.0 / rho(X).v; }, br);
  E.slope = detail::integrate_relative([&](double X) { Jet r = rho(X); return r.d * r.d / r.v; }, br);
  E.curvature = detail::integrate_relative(
      [&](double X) { Jet r = rho(X); return r.dd * r.dd * r.v + std::pow(r.d, 4) / r.v; }, br);
  E.C_strain = std::max(m.xixi + std::abs(m.xiR), m.RR + std::abs(m.xiR));
  E.C_inverse = m.curvature;
  E.C_slope = m.eta2_curv;
  E.C_curvature = std::max(m.PP + std::abs(m.PQ), m.QQ + std::abs(m.PQ));
  return E;
}

// ---------------------------------------------------------------- boundary layer

/** @brief reflected profile of the zero-shift family with wiggle weight q, normalized; Delta != 0 for q != q* */
inline NoStretchProfile family_profile(double q, double K, double grid_step = 0.0) {
  ZeroShiftConstruction c;
  c.q_star = q;
  c.ell = integrate([&](double x) { double d = c.varsigma(x).d; return d * d; }, -1.0, 0.0, 1e-14);
  if (K < c.ell) throw InfeasibleSupportError("support shorter than the profile width");
  if (grid_step <= 0.0) grid_step = K / 512.0;
  NoStretchProfile p = build_reflected_profile(zero_shift_slope(c), K, grid_step);
  return p;
}

namespace detail {

inline void require_matched(const NoStretchProfile& a, const NoStretchProfile& b) {
  if (a.size() != b.size() || std::abs(a.grid_step - b.grid_step) > 1e-12 * a.grid_step)
    throw CompatibilityError("profiles must share their eta grid");
  for (const NoStretchProfile* p : {&a, &b}) {
    double jump = p->minus.dphi[0] - (p->plus.dphi[0] - sqrt2);
    if (std::abs(jump) > 1e-8 || std::abs(p->plus.phi[0] - p->minus.phi[0]) > 1e-10 ||
        std::abs(p->curvature_norm - 1.0) > 1e-6)
      throw CompatibilityError("profiles must be normalized and matched at eta = 0");
  }
}

}  // namespace detail

/** @brief blended boundary-layer construction on X in [0,B], |Y| <= M */
struct BoundaryLayer {
  NoStretchProfile p1, p2;
  double B = 1.0, M = 1.0;
  Mollifier zeta{BumpKind::step_nondecreasing, 0.0, 1.0};

  Jet blend(double X) const { return rescale_argument(zeta(X / B), B); }

  /** @brief Delta(X) and Delta'(X) */
  std::pair<double, double> shift(double X) const {
    Jet z = blend(X);
    double D = 0.0, Dx = 0.0;
    for (int side : {1, -1}) {
      const ProfileHalf &a = p1.half(side), &b = p2.half(side);
      std::size_t n = a.phi.size();
      std::vector<double> wy2(n), wyx(n);
      for (std::size_t k = 0; k < n; ++k) {
        double wy = z.v * b.dphi[k] + (1 - z.v) * a.dphi[k];
        wy2[k] = wy * wy;
        wyx[k] = 2.0 * wy * z.d * (b.dphi[k] - a.dphi[k]);
      }
      D -= trapezoid(wy2, p1.grid_step);
      Dx -= trapezoid(wyx, p1.grid_step);
    }
    double w0 = z.v * p2.plus.phi[0] + (1 - z.v) * p1.plus.phi[0];
    D -= 2 * sqrt2 * w0;
    Dx -= 2 * sqrt2 * z.d * (p2.plus.phi[0] - p1.plus.phi[0]);
    return {D, Dx};
  }
};

inline BoundaryLayer make_boundary_layer(const NoStretchProfile& p1, const NoStretchProfile& p2, double B, double M) {
  if (!(B > 0.0)) throw ParameterError("boundary layer width must be positive");
  if (M < std::max(p1.K, p2.K)) throw ParameterError("M must be at least the profile support");
  detail::require_matched(p1, p2);
  return {p1, p2, B, M};
}

/** @brief W, V on a grid over [0,B] x [0,M]; U = 0 */
inline ScaledFields boundary_layer_fields(const NoStretchProfile& p1, const NoStretchProfile& p2, double B, double M,
                                          std::size_t nx, std::size_t ny) {
  BoundaryLayer L = make_boundary_layer(p1, p2, B, M);
  Grid2 g = make_grid(nx, ny, 0.0, B, M);
  ScaledFields f = make_scaled(g, 1.0, 1.0, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    double X = g.x(i), z = L.blend(X).v;
    double D = L.shift(X).first;
    for (int side : {1, -1}) {
      HalfFields& h = f.half(side);
      // V = side * int_s^inf W_Y^2 + side * Delta/2 with W_Y^2 from Hermite samples
      std::vector<double> tail(ny, 0.0);
      auto wy = [&](double s) {
        ProfileSample a = p1.eval(side * s), b = p2.eval(side * s);
        double v = z * b.dphi + (1 - z) * a.dphi;
        return v * v;
      };
      for (std::size_t j = ny - 1; j-- > 0;) tail[j] = tail[j + 1] + integrate(wy, g.s(j), g.s(j + 1), 1e-13, 20);
      for (std::size_t j = 0; j < ny; ++j) {
        std::size_t k = g.at(i, j);
        double s = g.s(j);
        ProfileSample a = p1.eval(side * s), b = p2.eval(side * s);
        h.W[k] = z * b.phi + (1 - z) * a.phi;
        h.V[k] = side * (tail[j] + 0.5 * D);
      }
    }
  }
  return f;
}

/** @brief unweighted term integrals of the boundary layer over [0,B] x [-M,M] */
struct BoundaryLayerEnergy {
  double e_xx = 0, e_xy = 0, e_yy = 0, b_yy = 0, b_xx = 0;
};

inline BoundaryLayerEnergy boundary_layer_energy(const NoStretchProfile& p1, const NoStretchProfile& p2, double B,
                                                 double M) {
  BoundaryLayer L = make_boundary_layer(p1, p2, B, M);
  BoundaryLayerEnergy E;
  GaussLegendre gl(24);
  std::size_t n = p1.size();
  double h = p1.grid_step, Ksup = h * static_cast<double>(n - 1);
  for (int panel = 0; panel < 8; ++panel) {
    double a = B * panel / 8.0, b = B * (panel + 1) / 8.0;
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
      double X = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[q], wX = 0.5 * (b - a) * gl.w[q];
      Jet z = L.blend(X);
      double Dx = L.shift(X).second;
      double col[5] = {0, 0, 0, 0, 0};
      for (int side : {1, -1}) {
        const ProfileHalf &P1 = p1.half(side), &P2 = p2.half(side);
        std::vector<double> exx(n), exy(n), byy(n), bxx(n), tail(n, 0.0), src(n);
        for (std::size_t k = 0; k < n; ++k) {
          double wy = z.v * P2.dphi[k] + (1 - z.v) * P1.dphi[k];
          double wxy = z.d * (P2.dphi[k] - P1.dphi[k]);
          src[k] = 2.0 * wy * wxy;
        }
        // V_X = side*(int_s^K 2 W_Y W_XY + Delta'/2); the tail runs from the support edge inward
        for (std::size_t k = n - 1; k-- > 0;) tail[k] = tail[k + 1] + 0.5 * h * (src[k] + src[k + 1]);
        for (std::size_t k = 0; k < n; ++k) {
          double wx = z.d * (P2.phi[k] - P1.phi[k]);
          double wy = side * (z.v * P2.dphi[k] + (1 - z.v) * P1.dphi[k]);
          double wxx = z.dd * (P2.phi[k] - P1.phi[k]);
          double wyy = z.v * P2.ddphi[k] + (1 - z.v) * P1.ddphi[k];
          double vx = side * (tail[k] + 0.5 * Dx);
          exx[k] = std::pow(wx * wx, 2);
          exy[k] = std::pow(vx + 2.0 * wx * wy, 2);
          byy[k] = wyy * wyy;
          bxx[k] = wxx * wxx;
        }
        col[0] += trapezoid(exx, h);
        col[1] += trapezoid(exy, h) + (M - Ksup) * 0.25 * Dx * Dx;
        col[3] += trapezoid(byy, h);
        col[4] += trapezoid(bxx, h);
      }
      E.e_xx += wX * col[0];
      E.e_xy += wX * col[1];
      E.b_yy += wX * col[3];
      E.b_xx += wX * col[4];
    }
  }
  // V_Y = -W_Y^2 holds pointwise by definition of V
  E.e_yy = 0.0;
  return E;
}

// ---------------------------------------------------------------- region scalings

struct RegionScales {
  double b = 0, l = 0;
  double E_I = 0, E_II = 0, E_III = 0;
  double total() const { return E_I + E_II + E_III; }
};

inline RegionScales region_energies(const PhysicalParams& p, double b, double l) {
  p.validate();
  if (!(b > 0 && b < p.L)) throw DomainError("region energies need 0 < b < L");
  if (!(l > 0 && l < p.Lp)) throw DomainError("region energies need 0 < l < L'");
  double a4 = std::pow(p.alpha, 4), a2 = p.alpha * p.alpha, s2 = p.sigma * p.sigma, a = p.a;
  RegionScales r;
  r.b = b;
  r.l = l;
  r.E_I = a4 * std::pow(a, 5) / std::pow(b, 3) + a4 * a * a * l / b + s2 * a2 * b / a + s2 * a2 * std::pow(a, 3) / std::pow(b, 3);
  r.E_II = a4 * std::pow(l, 5) / std::pow(p.L, 3) + a2 * s2 * p.L / l;
  r.E_III = a4 * a * a * p.L / (p.Lp - l);
  return r;
}

namespace detail {

template <class F>
double golden_min(F&& f, double lo, double hi, double tol = 1e-12) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - r * (hi - lo), d = lo + r * (hi - lo), fc = f(c), fd = f(d);
  while (hi - lo > tol * (1.0 + std::abs(lo) + std::abs(hi))) {
    if (fc < fd) {
      hi = d, d = c, fd = fc, c = hi - r * (hi - lo), fc = f(c);
    } else {
      lo = c, c = d, fc = fd, d = lo + r * (hi - lo), fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/** @brief minimizer of E_I + E_II + E_III by coordinate descent in (log b, log l) */
inline RegionScales optimal_scales(const PhysicalParams& p) {
  p.validate();
  double bl = std::log(p.L) - 40.0, bh = std::log(p.L * (1 - 1e-12));
  double ll = std::log(p.Lp) - 40.0, lh = std::log(p.Lp * (1 - 1e-12));
  auto E = [&](double lb, double lv) { return std::log(region_energies(p, std::exp(lb), std::exp(lv)).total()); };
  double lb = 0.5 * (bl + bh), lv = 0.5 * (ll + lh);
  for (int it = 0; it < 200; ++it) {
    double ob = lb, ol = lv;
    lb = detail::golden_min([&](double t) { return E(t, lv); }, bl, bh);
    lv = detail::golden_min([&](double t) { return E(lb, t); }, ll, lh);
    if (std::abs(lb - ob) + std::abs(lv - ol) < 1e-11) break;
  }
  return region_energies(p, std::exp(lb), std::exp(lv));
}

// ---------------------------------------------------------------- composite and pinched

/** @brief one additive component c(x) f(y / r(x)) of a column of w or u */
struct ColumnTerm {
  Jet c, r;
  const NoStretchProfile* profile = nullptr;
  /** @brief 0: Phi, 1: Xi */
  int which = 0;
};

/** @brief the pair (value, eta-derivatives) of Phi or Xi at eta */
inline std::array<double, 3> profile_function(const NoStretchProfile& p, int which, double eta) {
  ProfileSample s = p.eval(eta);
  if (which == 0) return {s.phi, s.dphi, s.ddphi};
  double ddxi = 0.0;
  return {s.xi, s.dxi, ddxi};
}

/** @brief point values and derivatives of w or u built from column terms */
struct TermSample {
  double f = 0, fx = 0, fy = 0, fxx = 0, fyy = 0, fxy = 0;
};

inline TermSample evaluate_terms(const std::vector<ColumnTerm>& terms, double y) {
  TermSample o;
  for (const ColumnTerm& t : terms) {
    if (t.c.v == 0.0 && t.c.d == 0.0 && t.c.dd == 0.0) continue;
    double r = t.r.v, rp = t.r.d / r, rpp = t.r.dd / r, eta = y / r;
    if (std::abs(eta) >= t.profile->K) continue;
    auto F = profile_function(*t.profile, t.which, eta);
    double c = t.c.v, cp = t.c.d, cpp = t.c.dd;
    o.f += c * F[0];
    o.fy += c / r * F[1];
    o.fyy += c / (r * r) * F[2];
    o.fx += cp * F[0] - c * F[1] * eta * rp;
    o.fxy += (cp / r - c * rp / r) * F[1] - c * rp / r * eta * F[2];
    o.fxx += cpp * F[0] - 2 * cp * rp * eta * F[1] + c * rp * rp * eta * eta * F[2] -
             c * eta * F[1] * (rpp - 2 * rp * rp);
  }
  return o;
}

enum class CompositeBranch { interpolation, three_region };

inline std::string to_string(CompositeBranch b) {
  return b == CompositeBranch::interpolation ? "interpolation" : "three_region";
}

/** @brief unweighted unscaled term integrals of a configuration, both halves */
struct UnscaledTerms {
  double e_xx = 0, e_xy = 0, e_yy = 0, b_yy = 0, b_xy = 0, b_xx = 0;
  double sigma = 0;
  /** @brief gxx^2 + (1/2)(2gxy)^2 + gyy^2 + (sigma^2/2)(w_yy^2 + 2 w_xy^2 + w_xx^2) */
  double total() const {
    double s2 = 0.5 * sigma * sigma;
    return e_xx + 0.5 * e_xy + e_yy + s2 * (b_yy + 2.0 * b_xy + b_xx);
  }
};

/**
 * @brief pointwise sampler for the composite test solutions.
 *
 * w and u are sums of column terms; v is assembled from the tail integral
 * G(x,s) = int_s^inf w_y^2 computed per column.
 */
class CompositeSolution {
 public:
  CompositeSolution(const PhysicalParams& p, const NoStretchProfile& left, const NoStretchProfile& right,
                    const NoStretchProfile& core, double b, double l, CompositeBranch branch)
      : p_(p), left_(left), right_(right), core_(core), b_(b), l_(l), branch_(branch) {
    p_.validate();
    if (!(b > 0 && b < p.L)) throw ParameterError("composite needs 0 < b < L");
    if (!(l > 0 && l < p.Lp)) throw ParameterError("composite needs 0 < l < L'");
    if (std::abs(left.delta - right.delta) > 1e-8) throw CompatibilityError("boundary shifts differ");
    delta_b_ = p.alpha * p.alpha * p.a * left.delta;
    spec_.A = p.A();
    spec_.eps = p.eps();
    support_ = p.a * std::max(left.K, right.K);
    if (branch == CompositeBranch::three_region) {
      require_zero_shift(core);
      support_ = std::max(support_, p.Ly() * max_rho(spec_) * core.K);
    }
    if (support_ * 1.5 > p.Lp / 3.0) throw DomainError("L' too small for the profile support");
  }

  CompositeBranch branch() const { return branch_; }
  const PhysicalParams& params() const { return p_; }
  double support() const { return support_; }
  double boundary_shift() const { return delta_b_; }

  /** @brief column terms of w (first) and u (second) on one side at x */
  std::pair<std::vector<ColumnTerm>, std::vector<ColumnTerm>> terms(double x, int side) const {
    (void)side;
    std::vector<ColumnTerm> w, u;
    double s2a = sqrt2 * p_.alpha * p_.a;
    Jet ra = constant_jet(p_.a);
    if (branch_ == CompositeBranch::interpolation) {
      Jet z = rescale_argument(zeta_(0.5 + x / (2 * p_.L)), 2 * p_.L);
      w.push_back({s2a * z, ra, &right_, 0});
      w.push_back({s2a * detail::complement(z), ra, &left_, 0});
      return {w, u};
    }
    double Ly = p_.Ly(), X = x / p_.L;
    Jet rho = crossover_rho(X, spec_);
    Jet rx = {rho.v, rho.d / p_.L, rho.dd / (p_.L * p_.L)};
    // beta(x) = zeta((L - |x|)/b): 0 at the frame, 1 beyond distance b
    double sg = x >= 0 ? 1.0 : -1.0;
    Jet zb = zeta_((p_.L - std::abs(x)) / b_);
    Jet beta = {zb.v, -sg * zb.d / b_, zb.dd / (b_ * b_)};
    Jet core_r = Ly * rx;
    w.push_back({beta * (sqrt2 * p_.alpha * Ly * rx), core_r, &core_, 0});
    w.push_back({s2a * detail::complement(beta), ra, x >= 0 ? &right_ : &left_, 0});
    // u - x = beta * u_scale * rho_X rho Xi; only first derivatives of u are used
    Jet rhoX = {rho.d, rho.dd / p_.L, 0.0};
    u.push_back({beta * (p_.u_scale() * (rhoX * rx)), core_r, &core_, 1});
    return {w, u};
  }

  /** @brief column data: nodes s, and tail integrals G, G_x of w_y^2 for both sides */
  struct Column {
    std::vector<double> s;
    std::array<std::vector<double>, 2> G, Gx;
    std::array<std::vector<ColumnTerm>, 2> wt, ut;
    double delta = 0, delta_x = 0;
  };

  Column column(double x, std::size_t n = 1601) const {
    Column c;
    c.s.resize(n);
    for (std::size_t k = 0; k < n; ++k) c.s[k] = support_ * k / (n - 1.0);
    double h = support_ / (n - 1.0);
    double w0 = 0, w0x = 0;
    for (int t = 0; t < 2; ++t) {
      int side = t == 0 ? 1 : -1;
      auto [w, u] = terms(x, side);
      c.wt[t] = w;
      c.ut[t] = u;
      std::vector<double> a(n), ax(n);
      for (std::size_t k = 0; k < n; ++k) {
        TermSample q = evaluate_terms(w, side * c.s[k]);
        a[k] = q.fy * q.fy;
        ax[k] = 2 * q.fy * q.fxy;
        if (k == 0 && t == 0) w0 = q.f, w0x = q.fx;
      }
      c.G[t].assign(n, 0.0);
      c.Gx[t].assign(n, 0.0);
      for (std::size_t k = n - 1; k-- > 0;) {
        c.G[t][k] = c.G[t][k + 1] + 0.5 * h * (a[k] + a[k + 1]);
        c.Gx[t][k] = c.Gx[t][k + 1] + 0.5 * h * (ax[k] + ax[k + 1]);
      }
    }
    c.delta = -(0.5 * c.G[0][0] + 0.5 * c.G[1][0] + 2 * p_.alpha * w0);
    c.delta_x = -(0.5 * c.Gx[0][0] + 0.5 * c.Gx[1][0] + 2 * p_.alpha * w0x);
    return c;
  }

  /** @brief u, v, w and the unscaled integrand pieces at (x, s) on one side */
  struct Point {
    double u = 0, v = 0, w = 0;
    double gxx = 0, gxy2 = 0, gyy = 0, wyy = 0, wxy = 0, wxx = 0;
  };

  Point point(const Column& c, int side, double s, double G, double Gx) const {
    int t = side > 0 ? 0 : 1;
    double y = side * s;
    TermSample w = evaluate_terms(c.wt[t], y), u = evaluate_terms(c.ut[t], y);
    Jet th = rescale_argument(theta_(s / p_.Lp), p_.Lp);
    Point o;
    o.w = w.f;
    o.u = u.f;  // displacement beyond x
    double bracket = 0.5 * G + s + 0.5 * c.delta;
    o.v = side * (th.v * bracket + (1 - th.v) * (s + 0.5 * delta_b_));
    double vy = 1.0 - 0.5 * th.v * w.fy * w.fy + 0.5 * th.d * (G + c.delta - delta_b_);
    double vx = side * th.v * 0.5 * (Gx + c.delta_x);
    o.gxx = u.fx + 0.5 * w.fx * w.fx;
    o.gxy2 = vx + u.fy + w.fx * w.fy;
    o.gyy = vy + 0.5 * w.fy * w.fy - 1.0;
    o.wyy = w.fyy;
    o.wxy = w.fxy;
    o.wxx = w.fxx;
    return o;
  }

  /** @brief term integrals over [-L,L] x [-L',L'] by Gauss quadrature */
  UnscaledTerms energy(int gauss = 12) const {
    UnscaledTerms T;
    T.sigma = p_.sigma;
    GaussLegendre gl(gauss);
    std::vector<double> xb = {-p_.L};
    int nb = 6, nc = 24;
    for (int k = 1; k <= nb; ++k) xb.push_back(-p_.L + b_ * k / nb);
    double xl = -p_.L + b_, xr = p_.L - b_;
    for (int k = 1; k < nc; ++k) {
      double t = static_cast<double>(k) / nc;
      xb.push_back(xl + (xr - xl) * 0.5 * (1 - std::cos(M_PI * t)));
    }
    for (int k = 0; k <= nb; ++k) xb.push_back(p_.L - b_ + b_ * k / nb);
    std::sort(xb.begin(), xb.end());
    xb.erase(std::unique(xb.begin(), xb.end()), xb.end());
    std::vector<double> yb = {support_, p_.Lp / 3.0, 0.5 * p_.Lp, 2.0 * p_.Lp / 3.0, p_.Lp};
    for (std::size_t pi = 0; pi + 1 < xb.size(); ++pi) {
      double a = xb[pi], b = xb[pi + 1];
      for (std::size_t q = 0; q < gl.x.size(); ++q) {
        double x = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[q], wx = 0.5 * (b - a) * gl.w[q];
        Column c = column(x);
        double col[6] = {0, 0, 0, 0, 0, 0};
        for (int side : {1, -1}) {
          int t = side > 0 ? 0 : 1;
          std::size_t n = c.s.size();
          std::vector<double> f[6];
          for (auto& v : f) v.resize(n);
          for (std::size_t k = 0; k < n; ++k) {
            Point o = point(c, side, c.s[k], c.G[t][k], c.Gx[t][k]);
            f[0][k] = o.gxx * o.gxx, f[1][k] = o.gxy2 * o.gxy2, f[2][k] = o.gyy * o.gyy;
            f[3][k] = o.wyy * o.wyy, f[4][k] = o.wxy * o.wxy, f[5][k] = o.wxx * o.wxx;
          }
          double h = support_ / (n - 1.0);
          for (int m = 0; m < 6; ++m) col[m] += trapezoid(f[m], h);
          // beyond the support only v carries strain
          for (std::size_t yk = 0; yk + 1 < yb.size(); ++yk) {
            auto sq = [&](double Point::*m) {
              return gl([&](double s) { double v = point(c, side, s, 0, 0).*m; return v * v; }, yb[yk], yb[yk + 1]);
            };
            col[1] += sq(&Point::gxy2);
            col[2] += sq(&Point::gyy);
          }
        }
        T.e_xx += wx * col[0];
        T.e_xy += wx * col[1];
        T.e_yy += wx * col[2];
        T.b_yy += wx * col[3];
        T.b_xy += wx * col[4];
        T.b_xx += wx * col[5];
      }
    }
    return T;
  }

  /** @brief fields sampled on a grid over [-L,L] x [0,L'] */
  SheetConfig sample(std::size_t nx, std::size_t ny) const {
    SheetConfig cfg;
    cfg.params = p_;
    cfg.params.delta = delta_b_;
    cfg.grid = make_grid(nx, ny, -p_.L, p_.L, p_.Lp);
    for (int side : {1, -1}) cfg.half(side).resize(cfg.grid.size());
    for (std::size_t i = 0; i < nx; ++i) {
      double x = cfg.grid.x(i);
      Column c = column(x);
      for (int side : {1, -1}) {
        int t = side > 0 ? 0 : 1;
        HalfFields& h = cfg.half(side);
        for (std::size_t j = 0; j < ny; ++j) {
          double s = cfg.grid.s(j), G = 0, Gx = 0;
          if (s < support_) {
            double r = s / support_ * (c.s.size() - 1.0);
            auto k = std::min(static_cast<std::size_t>(r), c.s.size() - 2);
            double f = r - k;
            G = (1 - f) * c.G[t][k] + f * c.G[t][k + 1];
            Gx = (1 - f) * c.Gx[t][k] + f * c.Gx[t][k + 1];
          }
          Point o = point(c, side, s, G, Gx);
          std::size_t k = cfg.grid.at(i, j);
          h.U[k] = x + o.u;
          h.V[k] = o.v;
          h.W[k] = o.w;
        }
      }
    }
    return cfg;
  }

 private:
  PhysicalParams p_;
  NoStretchProfile left_, right_, core_;
  double b_, l_;
  CompositeBranch branch_;
  CrossoverSpec spec_;
  double delta_b_ = 0, support_ = 0;
  Mollifier zeta_{BumpKind::step_nondecreasing, 0.0, 1.0};
  Mollifier theta_{BumpKind::cutoff_nonincreasing, 1.0 / 3.0, 2.0 / 3.0};
};

struct CompositeResult {
  SheetConfig config;
  CompositeBranch branch = CompositeBranch::three_region;
  UnscaledTerms interpolation, three_region;
  double energy() const {
    return branch == CompositeBranch::interpolation ? interpolation.total() : three_region.total();
  }
};

/** @brief builds both proof branches and returns the lower-energy one on an nx x ny grid */
inline CompositeResult composite_test_solution(const PhysicalParams& p, const NoStretchProfile& left,
                                               const NoStretchProfile& right, double b, double l,
                                               std::size_t nx = 129, std::size_t ny = 513) {
  NoStretchProfile core = build_zero_shift_profile(default_support(), default_support() / 512.0);
  CompositeSolution one(p, left, right, core, b, l, CompositeBranch::interpolation);
  CompositeSolution two(p, left, right, core, b, l, CompositeBranch::three_region);
  CompositeResult R;
  R.interpolation = one.energy();
  R.three_region = two.energy();
  R.branch = R.interpolation.total() < R.three_region.total() ? CompositeBranch::interpolation
                                                             : CompositeBranch::three_region;
  R.config = (R.branch == CompositeBranch::interpolation ? one : two).sample(nx, ny);
  return R;
}

/**
 * @brief two self-similar ridges on [-L, x0] and [x0, L] sharing a zero-shift profile of scale a_pinch at x0.
 *
 * Segment k has half-length L_k; its width is g_frame(1 - X^2) on the frame half and
 * g_pinch(1 - X^2) on the pinch half (literal crossover, equal to z^{2/3} at X = 0).
 */
struct PinchedSolution {
  PhysicalParams params;
  double x0 = 0.0, a_pinch = 0.0;
  NoStretchProfile profile;

  struct Segment {
    double center = 0, half = 0;
    int frame_side = 1;  // +1: frame at X = +1
    CrossoverSpec frame, pinch;
    double eps = 0, Ly = 0;
    Jet rho(double X) const {
      bool frame_half = X * frame_side >= 0;
      return crossover_rho(X, frame_half ? frame : pinch);
    }
  };

  Segment segment(int k) const {
    Segment s;
    double lo = k == 0 ? -params.L : x0, hi = k == 0 ? x0 : params.L;
    s.center = 0.5 * (lo + hi);
    s.half = 0.5 * (hi - lo);
    s.frame_side = k == 0 ? -1 : 1;
    s.eps = params.sigma / (s.half * params.alpha);
    s.Ly = std::cbrt(params.sigma) * std::pow(s.half, 2.0 / 3.0) / std::cbrt(params.alpha);
    s.frame = {params.a / s.Ly, s.eps, CrossoverVariant::literal};
    s.pinch = {a_pinch / s.Ly, s.eps, CrossoverVariant::literal};
    return s;
  }

  /** @brief unscaled (u - x, v - y, w) at (x, signed y) */
  std::array<double, 3> displacement(double x, double y, int k) const {
    Segment s = segment(k);
    double X = std::clamp((x - s.center) / s.half, -1.0, 1.0);
    Jet rho = s.rho(X);
    double Ly = s.Ly, al = params.alpha;
    FieldSample f = self_similar_point(profile, rho, y / Ly);
    double su = std::pow(params.sigma, 2.0 / 3.0) * std::cbrt(s.half) * std::pow(al, 4.0 / 3.0);
    return {su * f.U, al * al * Ly * f.V, sqrt2 * al * Ly * f.W};
  }

  /** @brief unscaled energy as the sum of the two segments' scaled energies times their factors */
  double energy() const {
    ProfileMoments m = profile_moments(profile);
    double E = 0.0;
    for (int k = 0; k < 2; ++k) {
      Segment s = segment(k);
      std::vector<double> zb = crossover_breaks(s.frame);
      for (double z : crossover_breaks(s.pinch)) zb.push_back(z);
      SelfSimilarEnergy I = ridge_energy([&](double X) { return s.rho(X); }, detail::x_breaks(zb), s.eps, m);
      E += std::pow(params.sigma, 5.0 / 3.0) * std::cbrt(s.half) * std::pow(params.alpha, 7.0 / 3.0) * I.total();
    }
    return E;
  }

  double sag(double x) const { return displacement(x, 0.0, x < x0 ? 0 : 1)[2]; }

  SheetConfig sample(std::size_t nx, std::size_t ny, double Lp) const {
    SheetConfig c;
    c.params = params;
    c.params.Lp = Lp;
    c.grid = make_grid(nx, ny, -params.L, params.L, Lp);
    for (int side : {1, -1}) {
      HalfFields& h = c.half(side);
      h.resize(c.grid.size());
      for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
          double x = c.grid.x(i), y = side * c.grid.s(j);
          auto d = displacement(x, y, x < x0 ? 0 : 1);
          std::size_t k = c.grid.at(i, j);
          h.U[k] = x + d[0];
          h.V[k] = y + d[1];
          h.W[k] = d[2];
        }
    }
    return c;
  }
};

inline PinchedSolution pinched_solution(double x0, double a_pinch, const PhysicalParams& p) {
  p.validate();
  if (!(x0 > -p.L && x0 < p.L)) throw ParameterError("pinch point must lie inside (-L, L)");
  if (!(a_pinch > 0.0)) throw ParameterError("pinch scale must be positive");
  PinchedSolution s;
  s.params = p;
  s.x0 = x0;
  s.a_pinch = a_pinch;
  s.profile = build_zero_shift_profile(default_support());
  return s;
}

}  // namespace minridge
