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
 * @brief Preconditioned L-BFGS and the discrete minimizer of the scaled energy.
 */
#pragma once

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#ifdef MINRIDGE_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#endif
#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <ostream>
#include <random>
#include <vector>

#include "minridge/core.hpp"
#include "minridge/energy.hpp"

namespace minridge {

// ---------------------------------------------------------------- generic engine

struct LbfgsOptions {
  int max_iterations = 5000;
  double tol = 1e-7;
  double backtrack = 0.5;
  double armijo = 1e-4;
  int history = 12;
  /** @brief preconditioner refresh period in iterations; 0 never refreshes */
  int refresh_every = 25;
  /** @brief stop after this many consecutive steps with relative decrease below 1e-15 */
  int stall_iterations = 30;
};

/**
 * @brief objective and optional hooks.
 *
 * `precondition(x, in, out)` applies an approximate inverse Hessian; `refresh(x)`
 * rebuilds it; `max_step(x, d)` caps the step, e.g. to keep iterates feasible.
 */
struct LbfgsProblem {
  std::function<double(const std::vector<double>&, std::vector<double>&)> value_gradient;
  std::function<void(const std::vector<double>&, std::vector<double>&)> precondition;
  std::function<void(const std::vector<double>&)> refresh;
  std::function<double(const std::vector<double>&, const std::vector<double>&)> max_step;
  std::function<void(int, double, double)> on_iteration;
};

struct LbfgsResult {
  std::vector<double> x, g;
  double f = 0.0, grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /** @brief true iff every accepted step lowered f */
  bool monotone = true;
};

inline double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline LbfgsResult lbfgs(const LbfgsProblem& P, std::vector<double> x, const LbfgsOptions& o) {
  require(o.history > 0 && o.tol > 0 && o.backtrack > 0 && o.backtrack < 1 && o.armijo > 0,
          "invalid L-BFGS options");
  LbfgsResult R;
  std::size_t n = x.size();
  std::vector<double> g(n), d(n), xn(n), gn(n), q(n);
  if (P.refresh) P.refresh(x);
  double f = P.value_gradient(x, g);
  std::deque<std::vector<double>> S, Y;
  std::deque<double> Rho;
  int since_refresh = 0, stalled = 0;
  auto apply_h0 = [&](const std::vector<double>& in, std::vector<double>& out) {
    if (P.precondition) {
      P.precondition(in, out);
    } else {
      double gam = 1.0;
      if (!S.empty()) gam = dot(S.back(), Y.back()) / dot(Y.back(), Y.back());
      for (std::size_t k = 0; k < n; ++k) out[k] = gam * in[k];
    }
  };
  int it = 0;
  for (; it < o.max_iterations; ++it) {
    double gn_inf = sup_norm(g);
    if (P.on_iteration) P.on_iteration(it, f, gn_inf);
    if (gn_inf <= o.tol * (1.0 + std::abs(f))) {
      R.converged = true;
      break;
    }
    if (P.refresh && o.refresh_every > 0 && since_refresh >= o.refresh_every) {
      P.refresh(x);
      since_refresh = 0;
    }
    ++since_refresh;
    // two-loop recursion
    q = g;
    std::vector<double> al(S.size());
    for (std::size_t m = S.size(); m-- > 0;) {
      al[m] = Rho[m] * dot(S[m], q);
      for (std::size_t k = 0; k < n; ++k) q[k] -= al[m] * Y[m][k];
    }
    apply_h0(q, d);
    for (std::size_t m = 0; m < S.size(); ++m) {
      double b = Rho[m] * dot(Y[m], d);
      for (std::size_t k = 0; k < n; ++k) d[k] += S[m][k] * (al[m] - b);
    }
    for (double& v : d) v = -v;
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      S.clear(), Y.clear(), Rho.clear();
      apply_h0(g, d);
      for (double& v : d) v = -v;
      slope = dot(g, d);
      if (!(slope < 0.0)) break;
    }
    double t = 1.0;
    if (P.max_step) t = std::min(t, P.max_step(x, d));
    bool accepted = false;
    double fn = f;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t k = 0; k < n; ++k) xn[k] = x[k] + t * d[k];
      fn = P.value_gradient(xn, gn);
      if (std::isfinite(fn) && fn <= f + o.armijo * t * slope) {
        accepted = true;
        break;
      }
      t *= o.backtrack;
    }
    if (!accepted) {
      if (S.empty()) break;
      S.clear(), Y.clear(), Rho.clear();
      continue;
    }
    if (fn > f) R.monotone = false;
    stalled = f - fn <= 1e-15 * std::abs(f) ? stalled + 1 : 0;
    std::vector<double> s(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = xn[k] - x[k];
      y[k] = gn[k] - g[k];
    }
    double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      S.push_back(std::move(s));
      Y.push_back(std::move(y));
      Rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > o.history) S.pop_front(), Y.pop_front(), Rho.pop_front();
    }
    x.swap(xn);
    g.swap(gn);
    f = fn;
    if (o.stall_iterations > 0 && stalled >= o.stall_iterations) {
      ++it;
      break;
    }
  }
  R.iterations = it;
  R.x = std::move(x);
  R.g = std::move(g);
  R.f = f;
  R.grad_norm = sup_norm(R.g);
  return R;
}

// ---------------------------------------------------------------- Gauss-Newton model

namespace detail {

using Triplet = Eigen::Triplet<double>;

/** @brief Jacobian of the weighted residuals with respect to all nodal values */
inline void residual_jacobian(const ScaledFields& f, const EnergyForm& F, const EnergyOptions& opt,
                              std::vector<Triplet>& T, long& row) {
  const Grid2& g = f.grid;
  StencilSet st(g);
  long N = static_cast<long>(g.size());
  double area = g.hx() * g.hy();
  const auto& w = F.weights;
  int blk = 0;
  for (int dir : {1, -1}) {
    HalfDerivatives D(st, g, f.half(dir));
    long bU = blk * N, bV = (blk + 1) * N, bW = (blk + 2) * N;
    blk += 3;
    for (std::size_t j = 0; j < g.ny; ++j)
      for (std::size_t i = 0; i < g.nx; ++i) {
        std::size_t k = g.at(i, j);
        double om = area * trapezoid_weight(i, g.nx) * trapezoid_weight(j, g.ny);
        const Stencil& sx = st.dx[i];
        const Stencil& ss = st.ds[j];
        auto xcol = [&](int t) { return static_cast<long>(g.at(i + sx.off[t], j)); };
        auto scol = [&](int t) { return static_cast<long>(g.at(i, j + ss.off[t])); };
        double c;
        // r_xx
        c = std::sqrt(2 * w[0] * om);
        for (int t = 0; t < sx.m; ++t) {
          T.emplace_back(row, bU + xcol(t), c * sx.c[t]);
          T.emplace_back(row, bW + xcol(t), c * 2 * F.cq * D.Wx[k] * sx.c[t]);
        }
        ++row;
        // r_xy
        c = std::sqrt(2 * w[1] * om);
        for (int t = 0; t < sx.m; ++t) {
          T.emplace_back(row, bV + xcol(t), c * sx.c[t]);
          T.emplace_back(row, bW + xcol(t), c * 2 * F.cq * dir * D.Ws[k] * sx.c[t]);
        }
        for (int t = 0; t < ss.m; ++t) {
          T.emplace_back(row, bU + scol(t), c * dir * ss.c[t]);
          T.emplace_back(row, bW + scol(t), c * 2 * F.cq * dir * D.Wx[k] * ss.c[t]);
        }
        ++row;
        // r_yy
        c = std::sqrt(2 * w[2] * om);
        for (int t = 0; t < ss.m; ++t) {
          T.emplace_back(row, bV + scol(t), c * dir * ss.c[t]);
          T.emplace_back(row, bW + scol(t), c * 2 * F.cq * D.Ws[k] * ss.c[t]);
        }
        ++row;
        // curvatures
        c = std::sqrt(2 * w[3] * om);
        const Stencil& sss = st.dss[j];
        for (int t = 0; t < sss.m; ++t) T.emplace_back(row, bW + static_cast<long>(g.at(i, j + sss.off[t])), c * sss.c[t]);
        ++row;
        c = std::sqrt(2 * w[4] * om);
        for (int a = 0; a < sx.m; ++a) {
          const Stencil& s2 = st.ds[j];
          for (int b = 0; b < s2.m; ++b)
            T.emplace_back(row, bW + static_cast<long>(g.at(i + sx.off[a], j + s2.off[b])), c * sx.c[a] * s2.c[b]);
        }
        ++row;
        c = std::sqrt(2 * w[5] * om);
        const Stencil& sxx = st.dxx[i];
        for (int t = 0; t < sxx.m; ++t) T.emplace_back(row, bW + static_cast<long>(g.at(i + sxx.off[t], j)), c * sxx.c[t]);
        ++row;
      }
  }
  if (opt.penalty_weight > 0.0) {
    double mu = opt.penalty_weight / (g.hy() * g.hy());
    const Stencil& s0 = st.ds[0];
    for (std::size_t i = 1; i + 1 < g.nx; ++i) {
      double c = std::sqrt(2 * mu * g.hx() * trapezoid_weight(i, g.nx));
      for (int t = 0; t < s0.m; ++t) {
        long k = static_cast<long>(g.at(i, s0.off[t]));
        T.emplace_back(row, 2 * N + k, c * s0.c[t]);
        T.emplace_back(row, 5 * N + k, c * s0.c[t]);
      }
      ++row;
    }
  }
}

}  // namespace detail

/** @brief Gauss-Newton matrix J^T J over the free unknowns of a DofMap */
inline Eigen::SparseMatrix<double> gauss_newton_matrix(const ScaledFields& f, const DofMap& map,
                                                       const EnergyOptions& opt = {}) {
  std::vector<detail::Triplet> T;
  long rows = 0;
  detail::residual_jacobian(f, scaled_form(f.eps), opt, T, rows);
  long nfull = static_cast<long>(6 * f.grid.size());
  Eigen::SparseMatrix<double> J(rows, nfull);
  J.setFromTriplets(T.begin(), T.end());
  std::vector<detail::Triplet> PT;
  map.linear_map([&](std::size_t r, std::size_t c, double v) { PT.emplace_back(static_cast<long>(r), static_cast<long>(c), v); });
  Eigen::SparseMatrix<double> P(nfull, static_cast<long>(map.size()));
  P.setFromTriplets(PT.begin(), PT.end());
  Eigen::SparseMatrix<double> Jr = J * P;
  Eigen::SparseMatrix<double> H = Jr.transpose() * Jr;
  return H;
}

// ---------------------------------------------------------------- field minimizer

struct MinimizeOptions {
  int max_iterations = 3000;
  double grad_tol = 1e-7;
  double backtrack = 0.5;
  double armijo = 1e-4;
  int history = 12;
  /** @brief kappa in the slope-jump penalty kappa / h_y^2 (penalty mode only) */
  double penalty_weight = 1.0;
  InterfaceMode mode = InterfaceMode::eliminate;
  int max_continuations = 10;
  double constraint_tol = 1e-6;
  bool precondition = true;
  int refresh_every = 25;
  /** @brief progress CSV sink (iteration,energy,grad_norm,residual); may be null */
  std::ostream* progress = nullptr;

  void validate() const {
    if (!(max_iterations > 0 && grad_tol > 0 && backtrack > 0 && backtrack < 1 && armijo > 0 && history > 0 &&
          penalty_weight > 0))
      throw ParameterError("minimize options must be positive with backtracking factor in (0,1)");
  }
};

struct MinimizeResult {
  ScaledFields fields;
  EnergyBreakdown energy;
  int iterations = 0;
  double grad_norm = 0.0;
  double constraint_residual = 0.0;
  bool converged = false;
  bool monotone = true;
  int continuations = 0;
};

namespace detail {

/** @brief SPD factorization of the Gauss-Newton model with a relative diagonal shift */
class GaussNewtonPreconditioner {
 public:
  /** @brief the sparsity pattern is fixed by the grid, so the symbolic step runs once */
  void refresh(const ScaledFields& f, const DofMap& map, const EnergyOptions& opt) {
    Eigen::SparseMatrix<double> H = gauss_newton_matrix(f, map, opt);
    double dmax = 0.0;
    for (long k = 0; k < H.rows(); ++k) dmax = std::max(dmax, H.coeff(k, k));
    double shift = 1e-12 * std::max(dmax, 1e-300);
    for (long k = 0; k < H.rows(); ++k) H.coeffRef(k, k) += shift;
    if (!analyzed_) {
      solver_.analyzePattern(H);
      analyzed_ = true;
    }
    solver_.factorize(H);
    ok_ = solver_.info() == Eigen::Success;
  }
  bool ok() const { return ok_; }
  void apply(const std::vector<double>& in, std::vector<double>& out) const {
    Eigen::Map<const Eigen::VectorXd> b(in.data(), static_cast<long>(in.size()));
    Eigen::VectorXd x = solver_.solve(b);
    out.assign(x.data(), x.data() + x.size());
  }

 private:
#ifdef MINRIDGE_HAVE_CHOLMOD
  Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>> solver_;
#else
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
#endif
  bool analyzed_ = false;
  bool ok_ = false;
};

inline double constraint_residual(const DofMap& map, const ScaledFields& f) {
  auto [rs, rv] = map.interface_residuals(f);
  return std::max(rs, rv);
}

}  // namespace detail

inline MinimizeResult minimize(const ScaledFields& initial, const MinimizeOptions& opts = {}) {
  opts.validate();
  DofMap map(initial.grid, opts.mode);
  ScaledFields work = initial;
  map.complete(work);
  EnergyOptions eo;
  if (opts.mode == InterfaceMode::penalty) eo.penalty_weight = opts.penalty_weight;
  MinimizeResult R;
  std::vector<double> x = map.gather(work);
  if (opts.progress) *opts.progress << "iteration,energy,grad_norm,residual\n";
  int total_it = 0;
  for (int cont = 0;; ++cont) {
    detail::GaussNewtonPreconditioner pc;
    LbfgsProblem P;
    P.value_gradient = [&](const std::vector<double>& v, std::vector<double>& g) {
      map.scatter(v, work);
      return energy_free_gradient(map, work, g, eo);
    };
    if (opts.precondition) {
      P.refresh = [&](const std::vector<double>& v) {
        map.scatter(v, work);
        pc.refresh(work, map, eo);
      };
      P.precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
        if (pc.ok()) pc.apply(in, out);
        else out = in;
      };
    }
    P.on_iteration = [&](int it, double f, double gn) {
      if (!opts.progress) return;
      *opts.progress << (total_it + it) << ',' << f << ',' << gn << ','
                     << detail::constraint_residual(map, work) << '\n';
    };
    LbfgsOptions lo{opts.max_iterations - total_it, opts.grad_tol, opts.backtrack, opts.armijo, opts.history,
                    opts.precondition ? opts.refresh_every : 0};
    LbfgsResult L = lbfgs(P, x, lo);
    total_it += L.iterations;
    x = L.x;
    map.scatter(x, work);
    R.grad_norm = L.grad_norm;
    R.monotone = R.monotone && L.monotone;
    R.constraint_residual = detail::constraint_residual(map, work);
    R.converged = L.converged && R.constraint_residual < opts.constraint_tol;
    R.continuations = cont;
    if (opts.mode != InterfaceMode::penalty || R.constraint_residual < opts.constraint_tol ||
        cont >= opts.max_continuations || total_it >= opts.max_iterations || !L.converged)
      break;
    eo.penalty_weight *= 2.0;
  }
  R.iterations = total_it;
  R.fields = work;
  R.energy = energy_scaled(work, eo);
  return R;
}

/**
 * @brief largest relative deviation between the free-unknown gradient and central differences
 *
 * Relative errors use the denominator max(|g_fd|, |g|, 1e-4 * sup|g|).
 */
inline double check_gradient(const ScaledFields& f, std::size_t nodes, unsigned seed = 7,
                             InterfaceMode mode = InterfaceMode::eliminate, const EnergyOptions& opt = {}) {
  DofMap map(f.grid, mode);
  ScaledFields work = f;
  map.complete(work);
  std::vector<double> x = map.gather(work), g;
  energy_free_gradient(map, work, g, opt);
  double gmax = sup_norm(g);
  if (x.empty()) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
  double worst = 0.0;
  ScaledFields probe = work;
  for (std::size_t s = 0; s < nodes; ++s) {
    std::size_t k = pick(rng);
    // fourth-order central stencil
    double h = 1e-4 * std::max(1.0, std::abs(x[k]));
    std::vector<double> xp = x;
    auto at = [&](double d) {
      xp[k] = x[k] + d;
      map.scatter(xp, probe);
      return energy_scaled(probe, opt).total;
    };
    double fd = (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
    double den = std::max({std::abs(fd), std::abs(g[k]), 1e-4 * gmax});
    if (den > 0.0) worst = std::max(worst, std::abs(fd - g[k]) / den);
  }
  return worst;
}

}  // namespace minridge
