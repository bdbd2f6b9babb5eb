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
 * @brief Lower-bound functionals, ridge geometry and the one-dimensional ridge functional.
 *
 * All constants in the inequality chain are explicit:
 *   Jensen on [-Y, Y]         E_s >= S^2 / (4Y),
 *   two-sided Cauchy-Schwarz  int W_X^2 >= W^2/(1-X^2) - W(-1)^2/(1+X) - W(1)^2/(1-X),
 *   Poincare with frame data  int W_X^2 >= int W^2 - 2(W(-1)^2 + W(1)^2).
 * Frame terms are integrated from the boundary columns.
 */
#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "minridge/core.hpp"
#include "minridge/energy.hpp"
#include "minridge/fields.hpp"
#include "minridge/minimize.hpp"

namespace minridge {

namespace detail {

/** @brief golden-section maximizer on [lo, hi]; returns (argmax, max) */
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double rtol = 1e-10) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - r * (hi - lo), d = lo + r * (hi - lo), fc = f(c), fd = f(d);
  while (hi - lo > rtol * (std::abs(lo) + std::abs(hi) + 1e-300)) {
    if (fc > fd) {
      hi = d, d = c, fd = fc, c = hi - r * (hi - lo), fc = f(c);
    } else {
      lo = c, c = d, fc = fd, d = lo + r * (hi - lo), fd = f(d);
    }
  }
  double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

/** @brief coarse log grid on [lo, hi] followed by golden refinement in log t */
template <class F>
std::pair<double, double> log_grid_max(F&& f, double lo, double hi, int n = 48) {
  double a = std::log(lo), b = std::log(hi);
  int best = 0;
  double fb = -inf;
  for (int k = 0; k <= n; ++k) {
    double v = f(std::exp(a + (b - a) * k / n));
    if (v > fb) fb = v, best = k;
  }
  double l = a + (b - a) * std::max(best - 1, 0) / n, h = a + (b - a) * std::min(best + 1, n) / n;
  auto [t, v] = golden_max([&](double s) { return f(std::exp(s)); }, l, h, 1e-10);
  if (v >= fb) return {std::exp(t), v};
  return {std::exp(a + (b - a) * best / n), fb};
}

}  // namespace detail

// ---------------------------------------------------------------- bending / stretching

struct EnergySplit {
  double E_b = 0, E_s = 0;
  double E_b_plus = 0, E_b_minus = 0, E_s_plus = 0, E_s_minus = 0;
};

/** @brief E_b = int W_YY^2, E_s = int 1/2 (int W_X^2 dX)^2 dY, summed over both halves */
inline EnergySplit bending_stretching_split(const ScaledFields& f) {
  const Grid2& g = f.grid;
  StencilSet st(g);
  EnergySplit r;
  for (int side : {1, -1}) {
    HalfDerivatives D(st, g, f.half(side));
    double eb = 0.0, es = 0.0;
    for (std::size_t j = 0; j < g.ny; ++j) {
      double row = 0.0, bend = 0.0;
      for (std::size_t i = 0; i < g.nx; ++i) {
        std::size_t k = g.at(i, j);
        double w = trapezoid_weight(i, g.nx) * g.hx();
        row += w * D.Wx[k] * D.Wx[k];
        bend += w * D.Wss[k] * D.Wss[k];
      }
      double wy = trapezoid_weight(j, g.ny) * g.hy();
      es += wy * 0.5 * row * row;
      eb += wy * bend;
    }
    (side > 0 ? r.E_b_plus : r.E_b_minus) = eb;
    (side > 0 ? r.E_s_plus : r.E_s_minus) = es;
  }
  r.E_b = r.E_b_plus + r.E_b_minus;
  r.E_s = r.E_s_plus + r.E_s_minus;
  return r;
}

/** @brief per-column bending integral int W_ss^2 ds of one half */
inline std::vector<double> column_bending(const ScaledFields& f, int side) {
  const Grid2& g = f.grid;
  StencilSet st(g);
  std::vector<double> Wss(g.size()), out(g.nx, 0.0);
  detail::apply_s(st.dss, g, f.half(side).W.data(), Wss.data());
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      double v = Wss[g.at(i, j)];
      out[i] += trapezoid_weight(j, g.ny) * g.hy() * v * v;
    }
  return out;
}

/** @brief rho(X) = [int W+_YY^2 + int W-_YY^2]^{-1}; inf on flat columns */
inline std::vector<double> local_bending_scale(const ScaledFields& f) {
  auto p = column_bending(f, 1), m = column_bending(f, -1);
  std::vector<double> rho(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) rho[i] = p[i] + m[i] > 0.0 ? 1.0 / (p[i] + m[i]) : inf;
  return rho;
}

/** @brief interface slopes beta+ = W+_Y(X,0), beta- = W-_Y(X,0) in signed Y */
inline std::pair<std::vector<double>, std::vector<double>> interface_slopes(const ScaledFields& f) {
  const Grid2& g = f.grid;
  StencilSet st(g);
  std::vector<double> bp(g.nx), bm(g.nx);
  for (std::size_t i = 0; i < g.nx; ++i) {
    bp[i] = detail::row0_slope(st.ds[0], g, f.plus.W, i);
    bm[i] = -detail::row0_slope(st.ds[0], g, f.minus.W, i);
  }
  return {bp, bm};
}

// ---------------------------------------------------------------- lemma bounds

/**
 * @brief max over Z <= Y, theta in (0,1) of (1-theta)[Z(f0+bZ/2)^2 + Z^3/12 (b^2 - Z/(theta rho))].
 *
 * For fixed Z the theta maximum is (sqrt P - sqrt Q)_+^2 with P = Z(f0+bZ/2)^2 + Z^3 b^2/12 and
 * Q = Z^4/(12 rho). Z is searched on a log grid and refined. rho = inf is allowed.
 */
inline double lemma_ineq_bound(double f0, double beta, double rho, double Y) {
  if (!(rho > 0.0) || !(Y > 0.0)) throw DomainError("lemma_ineq_bound needs rho > 0 and Y > 0");
  auto val = [&](double Z) {
    double a = f0 + 0.5 * beta * Z;
    double P = Z * a * a + Z * Z * Z * beta * beta / 12.0;
    double Q = std::isinf(rho) ? 0.0 : Z * Z * Z * Z / (12.0 * rho);
    double d = std::sqrt(P) - std::sqrt(Q);
    return d > 0.0 ? d * d : 0.0;
  };
  double best = val(Y);
  auto [z, v] = detail::log_grid_max(val, Y * 1e-6, Y, 64);
  (void)z;
  return std::max({best, v, 0.0});
}

/** @brief the Lemma's bracket at one (X, Y, delta) with constants C, C' (literal form) */
inline double stretch_bracket(double W0, double X, double Y, double delta, double rho, double A, double C,
                              double Cp) {
  double br = std::sqrt(Y) * std::pow(W0 + Y / sqrt2, 2) + std::pow(Y, 2.5) / 6.0 * (1.0 - Y / (2.0 * delta * rho)) -
              Cp * A * A * A / std::sqrt(Y);
  return C * (1.0 - delta) / (1.0 - X * X) * br;
}

namespace detail {

/** @brief cumulative int_0^s W(i,.)^2 along a column, linear in between nodes */
struct ColumnSquareIntegral {
  std::vector<double> c;
  double hy = 1.0;
  ColumnSquareIntegral(const Grid2& g, const std::vector<double>& W, std::size_t i) : c(g.ny, 0.0), hy(g.hy()) {
    for (std::size_t j = 1; j < g.ny; ++j) {
      double a = W[g.at(i, j - 1)], b = W[g.at(i, j)];
      c[j] = c[j - 1] + 0.5 * hy * (a * a + b * b);
    }
  }
  double operator()(double s) const {
    double r = s / hy;
    if (r >= static_cast<double>(c.size() - 1)) return c.back();
    auto k = static_cast<std::size_t>(r);
    double t = r - static_cast<double>(k);
    return c[k] + t * (c[k + 1] - c[k]);
  }
};

}  // namespace detail

/**
 * @brief numeric lower bound on E_s from one column X: Jensen on [-Y, Y], two-sided Cauchy-Schwarz
 * in X, and the per-half ineq bound for int W^2 with the column's own f0, beta+-, rho+-.
 */
inline double stretch_lower_bound(const ScaledFields& f, double A) {
  if (!(A > 0.0)) throw DomainError("stretch_lower_bound needs A > 0");
  const Grid2& g = f.grid;
  require(g.nx >= 5, "stretch_lower_bound needs interior columns");
  auto [bp, bm] = interface_slopes(f);
  auto cp = column_bending(f, 1), cm = column_bending(f, -1);
  std::array<detail::ColumnSquareIntegral, 4> frame = {
      detail::ColumnSquareIntegral(g, f.plus.W, 0), detail::ColumnSquareIntegral(g, f.minus.W, 0),
      detail::ColumnSquareIntegral(g, f.plus.W, g.nx - 1), detail::ColumnSquareIntegral(g, f.minus.W, g.nx - 1)};
  double best = 0.0;
  double ylo = g.hy(), yhi = g.ymax;
  for (std::size_t i = 1; i + 1 < g.nx; ++i) {
    double X = g.x(i);
    double W0 = f.plus.W[g.at(i, 0)];
    double rp = cp[i] > 0 ? 1.0 / cp[i] : inf, rm = cm[i] > 0 ? 1.0 / cm[i] : inf;
    auto lb = [&](double Y) {
      double q = lemma_ineq_bound(W0, bp[i], rp, Y) + lemma_ineq_bound(W0, -bm[i], rm, Y);
      double D = (frame[0](Y) + frame[1](Y)) / (1.0 + X) + (frame[2](Y) + frame[3](Y)) / (1.0 - X);
      double S = q / (1.0 - X * X) - D;
      return S > 0.0 ? S * S / (4.0 * Y) : 0.0;
    };
    best = std::max(best, detail::log_grid_max(lb, ylo, yhi, 24).second);
  }
  return best;
}

// ---------------------------------------------------------------- lower-bound report

struct LowerBoundReport {
  double E_b = 0, E_s = 0, B = 0, mu = 0, Y_tilde = 0;
  double B_plus = 0, B_minus = 0;
  /** @brief Poincare + Jensen bound on E_s, summed over halves */
  double es_lower = 0;
  /** @brief stretch_lower_bound of the same fields */
  double es_stretch = 0;
  double total = 0;
  double matching_residual = 0;
  bool chain_ok = false;
};

/** @brief max over Y of [max_{Z<=Y} (Z^3 B - 2 Z^4 E_b)/24 - 2 D(Y)]_+^2 / (2Y) for one half */
inline double poincare_jensen_bound(double B, double Eb, const std::function<double(double)>& frame, double ylo,
                                    double yhi) {
  auto P = [&](double Y) {
    double Z = Eb > 0.0 ? std::min(Y, 3.0 * B / (8.0 * Eb)) : Y;
    return std::max(0.0, (Z * Z * Z * B - 2.0 * Z * Z * Z * Z * Eb) / 24.0);
  };
  auto lb = [&](double Y) {
    double S = P(Y) - 2.0 * frame(Y);
    return S > 0.0 ? S * S / (2.0 * Y) : 0.0;
  };
  return detail::log_grid_max(lb, ylo, yhi, 64).second;
}

inline LowerBoundReport lower_bound_report(const ScaledFields& f, double A) {
  if (!(A > 0.0)) throw DomainError("lower_bound_report needs A > 0");
  const Grid2& g = f.grid;
  LowerBoundReport R;
  EnergySplit S = bending_stretching_split(f);
  R.E_b = S.E_b;
  R.E_s = S.E_s;
  auto [bp, bm] = interface_slopes(f);
  for (std::size_t i = 0; i < g.nx; ++i) {
    double w = trapezoid_weight(i, g.nx) * g.hx();
    R.B_plus += w * bp[i] * bp[i];
    R.B_minus += w * bm[i] * bm[i];
    if (i > 0 && i + 1 < g.nx) R.matching_residual = std::max(R.matching_residual, std::abs(bp[i] - bm[i] - sqrt2));
  }
  R.B = R.B_plus + R.B_minus;
  R.Y_tilde = R.E_b > 0 ? R.B / (2.0 * R.E_b) : inf;
  R.mu = R.B > 0 ? std::pow(2.0 * A * R.E_b / R.B, 3) / R.B : inf;
  for (int side : {1, -1}) {
    detail::ColumnSquareIntegral l(g, f.half(side).W, 0), r(g, f.half(side).W, g.nx - 1);
    double Bh = side > 0 ? R.B_plus : R.B_minus, Eh = side > 0 ? S.E_b_plus : S.E_b_minus;
    R.es_lower += poincare_jensen_bound(Bh, Eh, [&](double Y) { return l(Y) + r(Y); }, g.hy(), g.ymax);
  }
  R.es_stretch = stretch_lower_bound(f, A);
  R.total = energy_scaled(f).total;
  double tol = 1e-9 * (1.0 + R.E_s);
  R.chain_ok = R.es_lower <= R.E_s + tol && R.es_stretch <= R.E_s + tol && R.E_s <= R.total + tol;
  return R;
}

// ---------------------------------------------------------------- ridge geometry

struct RidgeGeometry {
  /** @brief scaled quantities over X */
  std::vector<double> X, rho, W0, support, beta_plus, beta_minus;
  /** @brief unscaled counterparts over x; empty for scaled-only input */
  std::vector<double> x, a, sag, k;
  double A = 0.0;
};

/** @brief support threshold: |deviation| > rel * max|W| counts as nonzero */
inline RidgeGeometry ridge_geometry(const ScaledFields& f, double rel = 1e-8) {
  const Grid2& g = f.grid;
  RidgeGeometry G;
  G.A = f.A;
  G.rho = local_bending_scale(f);
  auto sl = interface_slopes(f);
  G.beta_plus = sl.first;
  G.beta_minus = sl.second;
  double wmax = 0.0;
  for (int side : {1, -1})
    for (double v : f.half(side).W) wmax = std::max(wmax, std::abs(v));
  double thr = rel * std::max(wmax, 1e-300);
  for (std::size_t i = 0; i < g.nx; ++i) {
    G.X.push_back(g.x(i));
    G.W0.push_back(f.plus.W[g.at(i, 0)]);
    double kk = 0.0;
    for (int side : {1, -1})
      for (std::size_t j = g.ny; j-- > 0;)
        if (std::abs(f.half(side).W[g.at(i, j)]) > thr) {
          kk = std::max(kk, g.s(j));
          break;
        }
    G.support.push_back(kk);
  }
  return G;
}

/**
 * @brief a(x) = 2 alpha^2 / int (w+_yy^2 + w-_yy^2) dy, so that a = L_y rho; sag w(x,0); support k(x)
 * from |w|, |u - x| and |v - y -+ delta/2| above rel * alpha * a.
 */
inline RidgeGeometry ridge_geometry(const SheetConfig& c, double rel = 1e-8) {
  const PhysicalParams& p = c.params;
  ScaledFields f = rescale(c);
  RidgeGeometry G = ridge_geometry(f, 0.0);
  const Grid2& g = c.grid;
  double thr = rel * p.alpha * p.a;
  G.support.assign(g.nx, 0.0);
  for (std::size_t i = 0; i < g.nx; ++i) {
    G.x.push_back(g.x(i));
    G.a.push_back(p.Ly() * G.rho[i]);
    G.sag.push_back(c.plus.W[g.at(i, 0)]);
    double kk = 0.0;
    for (int side : {1, -1}) {
      const HalfFields& h = c.half(side);
      for (std::size_t j = g.ny; j-- > 0;) {
        std::size_t q = g.at(i, j);
        double dev = std::max({std::abs(h.W[q]), std::abs(h.U[q] - g.x(i)),
                               std::abs(h.V[q] - side * g.s(j) - side * 0.5 * p.delta)});
        if (dev > thr) {
          kk = std::max(kk, g.s(j));
          break;
        }
      }
    }
    G.k.push_back(kk);
    G.support[i] = kk / p.Ly();
  }
  return G;
}

// ---------------------------------------------------------------- pointwise bounds

struct PointwiseReport {
  /** @brief rho <= C1 (1-X^2)^{2/5} + C1p A with C1 + C1p smallest */
  double C1 = 0, C1p = 0;
  /** @brief smallest constant each sag branch needs on its own, and the common one */
  double sag_C1 = 0, sag_C2 = 0, sag_C3 = 0, sag_common = 0;
  /** @brief counts of columns where each branch is the tightest */
  int branch_count[3] = {0, 0, 0};
  /** @brief every column satisfies a branch bound with constant sag_cap */
  bool sag_ok = false;
  double sag_cap = 0;
  bool energy_ok = true;
};

/**
 * @brief fits the constants of the pointwise bounds on columns with finite rho.
 *
 * The rho pair is fixed by minimizing C1 + C1p over the one-parameter family of admissible pairs.
 * The sag check passes when max_X min_k W^2 / branch_k <= sag_cap.
 */
inline PointwiseReport pointwise_bounds_check(const RidgeGeometry& G, double A, double energy_cap,
                                              double sag_cap, double energy = 0.0) {
  if (!(A > 0.0)) throw DomainError("pointwise_bounds_check needs A > 0");
  PointwiseReport R;
  R.sag_cap = sag_cap;
  R.energy_ok = energy <= energy_cap;
  std::vector<double> X, rho, W0;
  for (std::size_t i = 0; i < G.X.size(); ++i)
    if (std::isfinite(G.rho[i]) && G.rho[i] > 0.0) X.push_back(G.X[i]), rho.push_back(G.rho[i]), W0.push_back(G.W0[i]);
  require(!X.empty(), "pointwise_bounds_check needs bent columns");
  auto c1_for = [&](double c1p) {
    double c1 = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
      double ex = rho[i] - c1p * A;
      if (ex <= 0.0) continue;
      double base = std::pow(std::max(1.0 - X[i] * X[i], 0.0), 0.4);
      c1 = base > 0.0 ? std::max(c1, ex / base) : inf;
    }
    return c1;
  };
  double top = 0.0;
  for (double r : rho) top = std::max(top, r / A);
  // C1 + C1p is piecewise monotone in C1p; scan then refine
  double bestp = top, bests = c1_for(top) + top;
  int n = 400;
  for (int k = 0; k <= n; ++k) {
    double c = top * k / n, s = c1_for(c) + c;
    if (s < bests) bests = s, bestp = c;
  }
  double lo = std::max(0.0, bestp - top / n), hi = std::min(top, bestp + top / n);
  auto [cp, neg] = detail::golden_max([&](double c) { return -(c1_for(c) + c); }, lo, hi + 1e-300, 1e-12);
  if (-neg < bests) bestp = cp;
  R.C1p = bestp;
  R.C1 = c1_for(bestp);
  for (std::size_t i = 0; i < X.size(); ++i) {
    double w2 = W0[i] * W0[i];
    double b1 = rho[i] * rho[i];
    double b2 = A * A * std::pow(A / rho[i], 0.25);
    double b3 = std::pow(std::pow(std::max(1.0 - X[i] * X[i], 0.0), 6) / rho[i], 1.0 / 7.0);
    double r1 = w2 / b1, r2 = w2 / b2, r3 = b3 > 0 ? w2 / b3 : inf;
    R.sag_C1 = std::max(R.sag_C1, r1);
    R.sag_C2 = std::max(R.sag_C2, r2);
    R.sag_C3 = std::max(R.sag_C3, std::isfinite(r3) ? r3 : 0.0);
    double m = std::min({r1, r2, r3});
    R.sag_common = std::max(R.sag_common, m);
    R.branch_count[m == r1 ? 0 : (m == r2 ? 1 : 2)]++;
  }
  R.sag_ok = R.sag_common <= sag_cap;
  return R;
}

// ---------------------------------------------------------------- one-dimensional ridge functional

/** @brief graded nodes x_k = l (1 - cos(pi k/n))/2 */
inline std::vector<double> graded_nodes(double l, int n) {
  std::vector<double> x(n + 1);
  for (int k = 0; k <= n; ++k) x[k] = 0.5 * l * (1.0 - std::cos(M_PI * k / n));
  x[0] = 0.0;
  x[n] = l;
  return x;
}

namespace detail {

/**
 * @brief residuals of the 1-D functional: sqrt(w) rho'' rho^{3/2} at interior nodes,
 * sqrt(h) rho'^2 rho^{1/2} and sqrt(h) rho^{-1/2} on cells, with midpoint values on cells.
 */
struct Rho1d {
  std::vector<double> x;
  double alpha = 0.3;

  std::size_t cells() const { return x.size() - 1; }
  std::size_t interior() const { return x.size() - 2; }
  std::size_t residuals() const { return interior() + 2 * cells(); }

  /** @brief second-derivative weights at interior node k */
  std::array<double, 3> d2(std::size_t k) const {
    double hl = x[k] - x[k - 1], hr = x[k + 1] - x[k];
    return {2.0 / (hl * (hl + hr)), -2.0 / (hl * hr), 2.0 / (hr * (hl + hr))};
  }
  double node_weight(std::size_t k) const { return 0.5 * (x[k + 1] - x[k - 1]); }

  void eval(const std::vector<double>& r, std::vector<double>* res, std::vector<Eigen::Triplet<double>>* J) const {
    std::size_t row = 0;
    if (res) res->assign(residuals(), 0.0);
    for (std::size_t k = 1; k + 1 < x.size(); ++k, ++row) {
      auto c = d2(k);
      double rpp = c[0] * r[k - 1] + c[1] * r[k] + c[2] * r[k + 1];
      double s = std::sqrt(node_weight(k)), p32 = std::pow(r[k], 1.5);
      if (res) (*res)[row] = s * rpp * p32;
      if (J) {
        for (int t = 0; t < 3; ++t) {
          std::size_t q = k - 1 + t;
          double d = s * c[t] * p32 + (t == 1 ? s * rpp * 1.5 * std::sqrt(r[k]) : 0.0);
          J->emplace_back(row, q, d);
        }
      }
    }
    for (std::size_t k = 0; k < cells(); ++k) {
      double h = x[k + 1] - x[k], s = std::sqrt(h);
      double m = 0.5 * (r[k] + r[k + 1]), rp = (r[k + 1] - r[k]) / h;
      double sm = std::sqrt(m);
      if (res) (*res)[row] = s * rp * rp * sm;
      if (J) {
        double dm = s * rp * rp * 0.25 / sm, dp = s * 2.0 * rp * sm / h;
        J->emplace_back(row, k, dm - dp);
        J->emplace_back(row, k + 1, dm + dp);
      }
      ++row;
      if (res) (*res)[row] = s / sm;
      if (J) {
        double d = -0.25 * s * std::pow(m, -1.5);
        J->emplace_back(row, k, d);
        J->emplace_back(row, k + 1, d);
      }
      ++row;
    }
  }
};

}  // namespace detail

/** @brief alpha^{7/3} int [((rho'' rho)^2 + rho'^4) rho + 1/rho] dx on the given nodes */
inline double rho_functional_1d(const std::vector<double>& x, const std::vector<double>& rho, double alpha) {
  require(x.size() == rho.size() && x.size() >= 4, "rho_functional_1d needs matching arrays of >= 4 nodes");
  for (std::size_t k = 1; k + 1 < rho.size(); ++k)
    if (!(rho[k] > 0.0)) throw DomainError("rho must be positive in the interior");
  detail::Rho1d F{x, alpha};
  std::vector<double> res;
  F.eval(rho, &res, nullptr);
  double s = 0.0;
  for (double v : res) s += v * v;
  return std::pow(alpha, 7.0 / 3.0) * s;
}

struct Rho1dOptions {
  int nodes = 400;
  /** @brief endpoint value as a fraction of l */
  double floor = 1e-4;
  int max_iterations = 2000;
  double tol = 1e-6;
};

struct Rho1dResult {
  std::vector<double> x, rho;
  double value = 0.0, grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/** @brief minimizes over interior nodal rho with endpoints at floor*l; steps stop short of rho = 0 */
inline Rho1dResult optimize_rho_1d(double l, double alpha, const Rho1dOptions& o = {}) {
  require(l > 0.0 && alpha > 0.0 && o.nodes >= 8 && o.floor > 0.0, "optimize_rho_1d needs l, alpha, floor > 0");
  detail::Rho1d F{graded_nodes(l, o.nodes), alpha};
  std::size_t N = F.x.size();
  double r0 = o.floor * l;
  std::vector<double> rho(N);
  for (std::size_t k = 0; k < N; ++k) {
    double t = F.x[k] / l;
    rho[k] = r0 + 0.5 * std::pow(l, 2.0 / 3.0) * std::pow(t * (1.0 - t), 2.0 / 3.0);
  }
  rho[0] = rho[N - 1] = r0;
  auto full = [&](const std::vector<double>& v) {
    std::vector<double> r(rho);
    for (std::size_t k = 1; k + 1 < N; ++k) r[k] = v[k - 1];
    return r;
  };
  std::vector<double> res;
  std::vector<Eigen::Triplet<double>> T;
  bool ok = false;
  LbfgsProblem P;
  P.value_gradient = [&](const std::vector<double>& v, std::vector<double>& g) {
    std::vector<double> r = full(v);
    for (std::size_t k = 1; k + 1 < N; ++k)
      if (!(r[k] > 0.0)) {
        g.assign(v.size(), 0.0);
        return inf;
      }
    T.clear();
    F.eval(r, &res, &T);
    Eigen::SparseMatrix<double> J(static_cast<long>(res.size()), static_cast<long>(N));
    J.setFromTriplets(T.begin(), T.end());
    Eigen::Map<const Eigen::VectorXd> rv(res.data(), static_cast<long>(res.size()));
    Eigen::VectorXd gf = 2.0 * (J.transpose() * rv);
    g.resize(v.size());
    for (std::size_t k = 1; k + 1 < N; ++k) g[k - 1] = gf[static_cast<long>(k)];
    return rv.squaredNorm();
  };
  // banded Hessian from gradient differences with five colours, shifted until LDLT is positive
  Eigen::LDLT<Eigen::MatrixXd> dense;
  P.refresh = [&](const std::vector<double>& v) {
    std::size_t n = v.size();
    std::vector<double> g0, g1, w(v);
    P.value_gradient(v, g0);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
    for (std::size_t c = 0; c < 5; ++c) {
      w = v;
      for (std::size_t k = c; k < n; k += 5) w[k] += 1e-6 * v[k];
      P.value_gradient(w, g1);
      for (std::size_t k = c; k < n; k += 5)
        for (std::size_t q = k >= 2 ? k - 2 : 0; q <= std::min(n - 1, k + 2); ++q)
          H(static_cast<long>(q), static_cast<long>(k)) = (g1[q] - g0[q]) / (1e-6 * v[k]);
    }
    H = 0.5 * (H + H.transpose()).eval();
    double dmax = H.diagonal().cwiseAbs().maxCoeff(), shift = 0.0;
    for (int t = 0; t < 40; ++t) {
      dense.compute(H + shift * Eigen::MatrixXd::Identity(H.rows(), H.cols()));
      ok = dense.info() == Eigen::Success && dense.isPositive() && (dense.vectorD().array() > 0.0).all();
      if (ok) break;
      shift = shift == 0.0 ? 1e-10 * dmax : 4.0 * shift;
    }
  };
  P.precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
    if (!ok) {
      out = in;
      return;
    }
    Eigen::Map<const Eigen::VectorXd> b(in.data(), static_cast<long>(in.size()));
    Eigen::VectorXd y = dense.solve(b);
    out.assign(y.data(), y.data() + y.size());
  };
  P.max_step = [&](const std::vector<double>& v, const std::vector<double>& d) {
    double t = 1.0;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (d[k] < 0.0) t = std::min(t, 0.9 * v[k] / -d[k]);
    return t;
  };
  std::vector<double> v(rho.begin() + 1, rho.end() - 1);
  LbfgsResult L = lbfgs(P, v, {o.max_iterations, o.tol, 0.5, 1e-4, 4, 1});
  Rho1dResult R;
  R.x = F.x;
  R.rho = full(L.x);
  R.value = std::pow(alpha, 7.0 / 3.0) * L.f;
  R.iterations = L.iterations;
  R.grad_norm = L.grad_norm;
  R.converged = L.converged;
  return R;
}

/** @brief least-squares slope of log rho against log x over x in [lo, hi] */
inline double endpoint_exponent(const Rho1dResult& r, double lo, double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 1; k < r.x.size(); ++k)
    if (r.x[k] >= lo && r.x[k] <= hi) {
      double a = std::log(r.x[k]), b = std::log(r.rho[k]);
      sx += a, sy += b, sxx += a * a, sxy += a * b, ++n;
    }
  require(n >= 3, "endpoint_exponent needs >= 3 nodes in the window");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace minridge
