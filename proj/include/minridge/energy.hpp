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
 * @brief Discrete FvK energy in unscaled and scaled form, its adjoint gradient,
 * the interface elimination map and the rescaling maps.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "minridge/core.hpp"
#include "minridge/fields.hpp"
#include "minridge/quadrature.hpp"

namespace minridge {

// ---------------------------------------------------------------- stencils

/** @brief second-order finite-difference stencil at one node of a line */
struct Stencil {
  int m = 0;
  std::array<int, 4> off{};
  std::array<double, 4> c{};
};

inline Stencil first_derivative_stencil(std::size_t k, std::size_t n, double h) {
  double s = 1.0 / (2.0 * h);
  if (k == 0) return {3, {0, 1, 2, 0}, {-3 * s, 4 * s, -s, 0}};
  if (k + 1 == n) return {3, {0, -1, -2, 0}, {3 * s, -4 * s, s, 0}};
  return {2, {-1, 1, 0, 0}, {-s, s, 0, 0}};
}

inline Stencil second_derivative_stencil(std::size_t k, std::size_t n, double h) {
  double s = 1.0 / (h * h);
  if (k == 0) return {4, {0, 1, 2, 3}, {2 * s, -5 * s, 4 * s, -s}};
  if (k + 1 == n) return {4, {0, -1, -2, -3}, {2 * s, -5 * s, 4 * s, -s}};
  return {3, {-1, 0, 1, 0}, {s, -2 * s, s, 0}};
}

/** @brief stencils for every node of both axes of a grid */
struct StencilSet {
  std::vector<Stencil> dx, dxx, ds, dss;
  explicit StencilSet(const Grid2& g) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      dx.push_back(first_derivative_stencil(i, g.nx, g.hx()));
      dxx.push_back(second_derivative_stencil(i, g.nx, g.hx()));
    }
    for (std::size_t j = 0; j < g.ny; ++j) {
      ds.push_back(first_derivative_stencil(j, g.ny, g.hy()));
      dss.push_back(second_derivative_stencil(j, g.ny, g.hy()));
    }
  }
};

namespace detail {

inline void apply_x(const std::vector<Stencil>& st, const Grid2& g, const double* f, double* o) {
  for (std::size_t j = 0; j < g.ny; ++j) {
    const double* r = f + j * g.nx;
    double* out = o + j * g.nx;
    for (std::size_t i = 0; i < g.nx; ++i) {
      const Stencil& s = st[i];
      double v = 0.0;
      for (int t = 0; t < s.m; ++t) v += s.c[t] * r[static_cast<std::ptrdiff_t>(i) + s.off[t]];
      out[i] = v;
    }
  }
}

inline void adjoint_x(const std::vector<Stencil>& st, const Grid2& g, const double* gb, double* fb) {
  for (std::size_t j = 0; j < g.ny; ++j) {
    const double* r = gb + j * g.nx;
    double* out = fb + j * g.nx;
    for (std::size_t i = 0; i < g.nx; ++i) {
      const Stencil& s = st[i];
      for (int t = 0; t < s.m; ++t) out[static_cast<std::ptrdiff_t>(i) + s.off[t]] += s.c[t] * r[i];
    }
  }
}

inline void apply_s(const std::vector<Stencil>& st, const Grid2& g, const double* f, double* o) {
  for (std::size_t j = 0; j < g.ny; ++j) {
    const Stencil& s = st[j];
    double* out = o + j * g.nx;
    for (std::size_t i = 0; i < g.nx; ++i) out[i] = 0.0;
    for (int t = 0; t < s.m; ++t) {
      const double* r = f + (static_cast<std::ptrdiff_t>(j) + s.off[t]) * static_cast<std::ptrdiff_t>(g.nx);
      for (std::size_t i = 0; i < g.nx; ++i) out[i] += s.c[t] * r[i];
    }
  }
}

inline void adjoint_s(const std::vector<Stencil>& st, const Grid2& g, const double* gb, double* fb) {
  for (std::size_t j = 0; j < g.ny; ++j) {
    const Stencil& s = st[j];
    const double* in = gb + j * g.nx;
    for (int t = 0; t < s.m; ++t) {
      double* r = fb + (static_cast<std::ptrdiff_t>(j) + s.off[t]) * static_cast<std::ptrdiff_t>(g.nx);
      for (std::size_t i = 0; i < g.nx; ++i) r[i] += s.c[t] * in[i];
    }
  }
}

}  // namespace detail

/** @brief node-wise derivatives of one half in the mirrored coordinate s = |y| */
struct HalfDerivatives {
  std::vector<double> Ux, Us, Vx, Vs, Wx, Ws, Wxx, Wss, Wxs;

  HalfDerivatives(const StencilSet& st, const Grid2& g, const HalfFields& h)
      : Ux(g.size()), Us(g.size()), Vx(g.size()), Vs(g.size()), Wx(g.size()), Ws(g.size()),
        Wxx(g.size()), Wss(g.size()), Wxs(g.size()) {
    using namespace detail;
    apply_x(st.dx, g, h.U.data(), Ux.data());
    apply_s(st.ds, g, h.U.data(), Us.data());
    apply_x(st.dx, g, h.V.data(), Vx.data());
    apply_s(st.ds, g, h.V.data(), Vs.data());
    apply_x(st.dx, g, h.W.data(), Wx.data());
    apply_s(st.ds, g, h.W.data(), Ws.data());
    apply_x(st.dxx, g, h.W.data(), Wxx.data());
    apply_s(st.dss, g, h.W.data(), Wss.data());
    apply_x(st.dx, g, Ws.data(), Wxs.data());
  }
};

// ---------------------------------------------------------------- energy

/** @brief unweighted integrals of the six squared quantities over one half */
struct HalfTerms {
  double e_xx = 0, e_xy = 0, e_yy = 0, b_yy = 0, b_xy = 0, b_xx = 0;
  double operator[](int k) const {
    const double v[6] = {e_xx, e_xy, e_yy, b_yy, b_xy, b_xx};
    return v[k];
  }
};

struct EnergyBreakdown {
  HalfTerms plus, minus;
  std::array<double, 6> weights{};
  double penalty = 0.0;
  double total = 0.0;

  /** @brief weighted contribution of term k summed over both halves */
  double contribution(int k) const { return weights[k] * (plus[k] + minus[k]); }
  double stretching() const { return contribution(0) + contribution(1) + contribution(2); }
  double bending() const { return contribution(3) + contribution(4) + contribution(5); }
};

/**
 * @brief coefficients of the integrand.
 *
 * Strains are r_xx = U_x + cq W_x^2 - c0, r_xy = V_x + U_y + 2 cq W_x W_y,
 * r_yy = V_y + cq W_y^2 - c0, curvatures are W_yy, W_xy, W_xx.
 */
struct EnergyForm {
  double cq = 1.0, c0 = 0.0;
  std::array<double, 6> weights{1, 1, 1, 1, 1, 1};
  double jump = sqrt2;
};

inline EnergyForm scaled_form(double eps) {
  double e23 = std::pow(eps, 2.0 / 3.0);
  return {1.0, 0.0, {1.0, 0.5 / e23, 1.0 / (e23 * e23), 1.0, 2.0 * e23, e23 * e23}, sqrt2};
}

inline EnergyForm unscaled_form(const PhysicalParams& p) {
  double s2 = p.sigma * p.sigma;
  return {0.5, 1.0, {1.0, 0.5, 1.0, 0.5 * s2, s2, 0.5 * s2}, 2.0 * p.alpha};
}

struct EnergyOptions {
  /** @brief slope-jump penalty weight kappa; the penalty is kappa / h_y^2 * int r^2 dx */
  double penalty_weight = 0.0;
};

namespace detail {

inline double trap_weight(std::size_t i, std::size_t n) { return trapezoid_weight(i, n); }

/** @brief one half: integrals, and the full nodal gradient when gb != nullptr */
inline HalfTerms half_energy(const StencilSet& st, const Grid2& g, const HalfFields& h, int dir,
                             const EnergyForm& F, HalfFields* gb) {
  HalfDerivatives D(st, g, h);
  HalfTerms T;
  std::size_t N = g.size();
  double area = g.hx() * g.hy();
  std::vector<double> aUx, aUs, aVx, aVs, aWx, aWs, aWxx, aWss, aWxs;
  if (gb) {
    for (auto* v : {&aUx, &aUs, &aVx, &aVs, &aWx, &aWs, &aWxx, &aWss, &aWxs}) v->assign(N, 0.0);
  }
  const auto& w = F.weights;
  for (std::size_t j = 0; j < g.ny; ++j) {
    double wy = trap_weight(j, g.ny);
    for (std::size_t i = 0; i < g.nx; ++i) {
      std::size_t k = g.at(i, j);
      double om = area * wy * trap_weight(i, g.nx);
      double wx = D.Wx[k], ws = D.Ws[k];
      double rxx = D.Ux[k] + F.cq * wx * wx - F.c0;
      double rxy = D.Vx[k] + dir * D.Us[k] + 2.0 * F.cq * dir * wx * ws;
      double ryy = dir * D.Vs[k] + F.cq * ws * ws - F.c0;
      T.e_xx += om * rxx * rxx;
      T.e_xy += om * rxy * rxy;
      T.e_yy += om * ryy * ryy;
      T.b_yy += om * D.Wss[k] * D.Wss[k];
      T.b_xy += om * D.Wxs[k] * D.Wxs[k];
      T.b_xx += om * D.Wxx[k] * D.Wxx[k];
      if (gb) {
        double sxx = 2.0 * w[0] * om * rxx, sxy = 2.0 * w[1] * om * rxy, syy = 2.0 * w[2] * om * ryy;
        aUx[k] = sxx;
        aUs[k] = dir * sxy;
        aVx[k] = sxy;
        aVs[k] = dir * syy;
        aWx[k] = 2.0 * F.cq * (wx * sxx + dir * ws * sxy);
        aWs[k] = 2.0 * F.cq * (dir * wx * sxy + ws * syy);
        aWss[k] = 2.0 * w[3] * om * D.Wss[k];
        aWxs[k] = 2.0 * w[4] * om * D.Wxs[k];
        aWxx[k] = 2.0 * w[5] * om * D.Wxx[k];
      }
    }
  }
  if (gb) {
    adjoint_x(st.dx, g, aUx.data(), gb->U.data());
    adjoint_s(st.ds, g, aUs.data(), gb->U.data());
    adjoint_x(st.dx, g, aVx.data(), gb->V.data());
    adjoint_s(st.ds, g, aVs.data(), gb->V.data());
    // W_xs = Dx(Ds W): fold the mixed seed into the Ds seed through Dx^T
    adjoint_x(st.dx, g, aWxs.data(), aWs.data());
    adjoint_x(st.dx, g, aWx.data(), gb->W.data());
    adjoint_s(st.ds, g, aWs.data(), gb->W.data());
    adjoint_x(st.dxx, g, aWxx.data(), gb->W.data());
    adjoint_s(st.dss, g, aWss.data(), gb->W.data());
  }
  return T;
}

/** @brief one-sided slope W_s at row 0 of column i */
inline double row0_slope(const Stencil& s0, const Grid2& g, const std::vector<double>& W, std::size_t i) {
  double v = 0.0;
  for (int t = 0; t < s0.m; ++t) v += s0.c[t] * W[g.at(i, static_cast<std::size_t>(s0.off[t]))];
  return v;
}

template <class Fields>
double interface_penalty(const StencilSet& st, const Grid2& g, const Fields& f, const EnergyForm& F,
                         double kappa, Fields* gb) {
  if (kappa <= 0.0) return 0.0;
  double mu = kappa / (g.hy() * g.hy()), P = 0.0;
  const Stencil& s0 = st.ds[0];
  for (std::size_t i = 1; i + 1 < g.nx; ++i) {
    double r = row0_slope(s0, g, f.plus.W, i) + row0_slope(s0, g, f.minus.W, i) - F.jump;
    double om = mu * g.hx() * trap_weight(i, g.nx);
    P += om * r * r;
    if (gb) {
      for (int t = 0; t < s0.m; ++t) {
        std::size_t k = g.at(i, static_cast<std::size_t>(s0.off[t]));
        gb->plus.W[k] += 2.0 * om * r * s0.c[t];
        gb->minus.W[k] += 2.0 * om * r * s0.c[t];
      }
    }
  }
  return P;
}

template <class Fields>
EnergyBreakdown evaluate(const Fields& f, const EnergyForm& F, const EnergyOptions& opt, Fields* gb) {
  StencilSet st(f.grid);
  if (gb) {
    *gb = f;
    gb->plus.resize(f.grid.size());
    gb->minus.resize(f.grid.size());
  }
  EnergyBreakdown E;
  E.weights = F.weights;
  E.plus = half_energy(st, f.grid, f.plus, 1, F, gb ? &gb->plus : nullptr);
  E.minus = half_energy(st, f.grid, f.minus, -1, F, gb ? &gb->minus : nullptr);
  E.penalty = interface_penalty(st, f.grid, f, F, opt.penalty_weight, gb);
  E.total = E.penalty;
  for (int k = 0; k < 6; ++k) E.total += E.contribution(k);
  return E;
}

}  // namespace detail

inline EnergyBreakdown energy_scaled(const ScaledFields& f, const EnergyOptions& opt = {}) {
  return detail::evaluate(f, scaled_form(f.eps), opt, static_cast<ScaledFields*>(nullptr));
}

/** @brief energy and the gradient with respect to every nodal value (no elimination) */
inline EnergyBreakdown energy_scaled_nodal_gradient(const ScaledFields& f, ScaledFields& g,
                                                    const EnergyOptions& opt = {}) {
  return detail::evaluate(f, scaled_form(f.eps), opt, &g);
}

inline EnergyBreakdown energy_unscaled(const SheetConfig& c, const EnergyOptions& opt = {}) {
  return detail::evaluate(c, unscaled_form(c.params), opt, static_cast<SheetConfig*>(nullptr));
}

/** @brief per-node strains of the unscaled configuration */
struct StrainField {
  std::vector<double> gxx, gxy, gyy;
};

inline std::array<StrainField, 2> strains(const SheetConfig& c) {
  StencilSet st(c.grid);
  std::array<StrainField, 2> out;
  int n = 0;
  for (int side : {1, -1}) {
    HalfDerivatives D(st, c.grid, c.half(side));
    StrainField& s = out[n++];
    std::size_t N = c.grid.size();
    s.gxx.resize(N);
    s.gxy.resize(N);
    s.gyy.resize(N);
    for (std::size_t k = 0; k < N; ++k) {
      s.gxx[k] = D.Ux[k] + 0.5 * D.Wx[k] * D.Wx[k] - 1.0;
      s.gxy[k] = 0.5 * (D.Vx[k] + side * D.Us[k] + side * D.Wx[k] * D.Ws[k]);
      s.gyy[k] = side * D.Vs[k] + 0.5 * D.Ws[k] * D.Ws[k] - 1.0;
    }
  }
  return out;
}

// ---------------------------------------------------------------- interface map

enum class InterfaceMode { eliminate, penalty };

/**
 * @brief affine map from free unknowns to all nodal values of ScaledFields.
 *
 * Fixed: columns x0, x1 and the far row. Dependent (interior columns, row 0):
 * U- = U+, V- = V+ + 2 sqrt2 W + A Delta, and in eliminate mode the shared W is
 * the value that makes the one-sided slope jump exactly sqrt2.
 */
class DofMap {
 public:
  enum Block { Up = 0, Vp, Wp, Um, Vm, Wm };

  DofMap(const Grid2& g, InterfaceMode mode) : g_(g), mode_(mode) {
    for (std::size_t j = 0; j + 1 < g.ny; ++j)
      for (std::size_t i = 1; i + 1 < g.nx; ++i) {
        add(Up, i, j);
        add(Vp, i, j);
        if (j > 0 || mode == InterfaceMode::penalty) add(Wp, i, j);
        if (j > 0) {
          add(Um, i, j);
          add(Vm, i, j);
          add(Wm, i, j);
        }
      }
  }

  std::size_t size() const { return free_.size(); }
  InterfaceMode mode() const { return mode_; }
  const Grid2& grid() const { return g_; }
  std::size_t full_index(Block b, std::size_t i, std::size_t j) const { return b * g_.size() + g_.at(i, j); }
  const std::vector<std::size_t>& free_indices() const { return free_; }

  static double& ref(ScaledFields& f, std::size_t idx) {
    std::size_t N = f.grid.size(), b = idx / N, k = idx % N;
    HalfFields& h = b < 3 ? f.plus : f.minus;
    std::vector<double>& v = (b % 3 == 0) ? h.U : (b % 3 == 1) ? h.V : h.W;
    return v[k];
  }
  static double get(const ScaledFields& f, std::size_t idx) { return ref(const_cast<ScaledFields&>(f), idx); }

  std::vector<double> gather(const ScaledFields& f) const {
    std::vector<double> x(free_.size());
    for (std::size_t k = 0; k < free_.size(); ++k) x[k] = get(f, free_[k]);
    return x;
  }

  /** @brief eliminated interface W from its neighbours */
  double interface_w(const ScaledFields& f, std::size_t i) const {
    std::size_t a1 = g_.at(i, 1), a2 = g_.at(i, 2);
    return (4 * f.plus.W[a1] - f.plus.W[a2] + 4 * f.minus.W[a1] - f.minus.W[a2] -
            2 * sqrt2 * g_.hy()) / 6.0;
  }

  /** @brief writes free values and recomputes the dependent interface nodes */
  void scatter(const std::vector<double>& x, ScaledFields& f) const {
    for (std::size_t k = 0; k < free_.size(); ++k) ref(f, free_[k]) = x[k];
    complete(f);
  }

  void complete(ScaledFields& f) const {
    for (std::size_t i = 1; i + 1 < g_.nx; ++i) {
      std::size_t a = g_.at(i, 0);
      f.minus.U[a] = f.plus.U[a];
      if (mode_ == InterfaceMode::eliminate) f.plus.W[a] = interface_w(f, i);
      f.minus.W[a] = f.plus.W[a];
      f.minus.V[a] = f.plus.V[a] + 2 * sqrt2 * f.plus.W[a] + f.A * f.Delta;
    }
  }

  /** @brief chain rule from the nodal gradient to the free unknowns */
  std::vector<double> reduce(ScaledFields gn) const {
    for (std::size_t i = 1; i + 1 < g_.nx; ++i) {
      std::size_t a = g_.at(i, 0);
      gn.plus.U[a] += gn.minus.U[a];
      gn.plus.V[a] += gn.minus.V[a];
      double gw = gn.plus.W[a] + gn.minus.W[a] + 2 * sqrt2 * gn.minus.V[a];
      if (mode_ == InterfaceMode::eliminate) {
        std::size_t a1 = g_.at(i, 1), a2 = g_.at(i, 2);
        gn.plus.W[a1] += 4.0 / 6.0 * gw;
        gn.plus.W[a2] -= 1.0 / 6.0 * gw;
        gn.minus.W[a1] += 4.0 / 6.0 * gw;
        gn.minus.W[a2] -= 1.0 / 6.0 * gw;
      } else {
        gn.plus.W[a] = gw;
      }
    }
    std::vector<double> g(free_.size());
    for (std::size_t k = 0; k < free_.size(); ++k) g[k] = get(gn, free_[k]);
    return g;
  }

  /** @brief linear part of the map as (full row, free column, coefficient) triplets */
  template <class Emit>
  void linear_map(Emit&& emit) const {
    std::vector<long> col(6 * g_.size(), -1);
    for (std::size_t k = 0; k < free_.size(); ++k) {
      col[free_[k]] = static_cast<long>(k);
      emit(free_[k], k, 1.0);
    }
    for (std::size_t i = 1; i + 1 < g_.nx; ++i) {
      auto fc = [&](Block b, std::size_t j) { return static_cast<std::size_t>(col[full_index(b, i, j)]); };
      emit(full_index(Um, i, 0), fc(Up, 0), 1.0);
      emit(full_index(Vm, i, 0), fc(Vp, 0), 1.0);
      std::vector<std::pair<std::size_t, double>> wrow;
      if (mode_ == InterfaceMode::eliminate) {
        wrow = {{fc(Wp, 1), 4.0 / 6.0}, {fc(Wp, 2), -1.0 / 6.0}, {fc(Wm, 1), 4.0 / 6.0}, {fc(Wm, 2), -1.0 / 6.0}};
        for (auto [c, v] : wrow) emit(full_index(Wp, i, 0), c, v);
      } else {
        wrow = {{fc(Wp, 0), 1.0}};
      }
      for (auto [c, v] : wrow) {
        emit(full_index(Wm, i, 0), c, v);
        emit(full_index(Vm, i, 0), c, 2 * sqrt2 * v);
      }
    }
  }

  /** @brief sup-norm of the slope-jump and V-jump residuals over interior columns */
  std::pair<double, double> interface_residuals(const ScaledFields& f) const {
    StencilSet st(g_);
    double rs = 0.0, rv = 0.0;
    for (std::size_t i = 1; i + 1 < g_.nx; ++i) {
      double sp = detail::row0_slope(st.ds[0], g_, f.plus.W, i);
      double sm = detail::row0_slope(st.ds[0], g_, f.minus.W, i);
      rs = std::max(rs, std::abs(sp + sm - sqrt2));
      std::size_t a = g_.at(i, 0);
      rv = std::max(rv, std::abs(f.minus.V[a] - f.plus.V[a] - 2 * sqrt2 * f.plus.W[a] - f.A * f.Delta));
    }
    return {rs, rv};
  }

 private:
  void add(Block b, std::size_t i, std::size_t j) { free_.push_back(full_index(b, i, j)); }
  Grid2 g_;
  InterfaceMode mode_;
  std::vector<std::size_t> free_;
};

/** @brief energy and gradient over the free unknowns of a DofMap */
inline double energy_free_gradient(const DofMap& map, const ScaledFields& f, std::vector<double>& g,
                                   const EnergyOptions& opt = {}) {
  ScaledFields gn;
  EnergyBreakdown E = energy_scaled_nodal_gradient(f, gn, opt);
  g = map.reduce(std::move(gn));
  return E.total;
}

/** @brief gradient(fields): exact gradient of the discrete energy over free unknowns */
inline std::vector<double> gradient(const ScaledFields& f, InterfaceMode mode = InterfaceMode::eliminate,
                                    const EnergyOptions& opt = {}) {
  DofMap map(f.grid, mode);
  std::vector<double> g;
  energy_free_gradient(map, f, g, opt);
  return g;
}

// ---------------------------------------------------------------- rescaling

/** @brief scaled fields on the image grid of the configuration */
inline ScaledFields rescale(const SheetConfig& c) {
  const PhysicalParams& p = c.params;
  p.validate();
  double Ly = p.Ly();
  Grid2 g{c.grid.nx, c.grid.ny, c.grid.x0 / p.L, c.grid.x1 / p.L, c.grid.ymax / Ly};
  ScaledFields f = make_scaled(g, p.eps(), p.A(), p.delta / (p.alpha * p.alpha * p.a));
  double su = p.u_scale(), sv = p.v_scale(), sw = p.w_scale();
  for (int side : {1, -1}) {
    const HalfFields& h = c.half(side);
    HalfFields& o = f.half(side);
    for (std::size_t j = 0; j < g.ny; ++j)
      for (std::size_t i = 0; i < g.nx; ++i) {
        std::size_t k = g.at(i, j);
        double x = c.grid.x(i), y = side * c.grid.s(j);
        o.U[k] = (h.U[k] - x) / su;
        o.V[k] = (h.V[k] - y - side * 0.5 * p.delta) / sv;
        o.W[k] = h.W[k] / sw;
      }
  }
  return f;
}

inline SheetConfig unscale(const ScaledFields& f, const PhysicalParams& p) {
  p.validate();
  SheetConfig c;
  c.params = p;
  double Ly = p.Ly();
  c.grid = Grid2{f.grid.nx, f.grid.ny, f.grid.x0 * p.L, f.grid.x1 * p.L, f.grid.ymax * Ly};
  double su = p.u_scale(), sv = p.v_scale(), sw = p.w_scale();
  for (int side : {1, -1}) {
    const HalfFields& h = f.half(side);
    HalfFields& o = c.half(side);
    o.resize(c.grid.size());
    for (std::size_t j = 0; j < c.grid.ny; ++j)
      for (std::size_t i = 0; i < c.grid.nx; ++i) {
        std::size_t k = c.grid.at(i, j);
        double x = c.grid.x(i), y = side * c.grid.s(j);
        o.U[k] = x + su * h.U[k];
        o.V[k] = y + side * 0.5 * p.delta + sv * h.V[k];
        o.W[k] = sw * h.W[k];
      }
  }
  return c;
}

/** @brief bilinear resampling of scaled fields onto another grid inside the source domain */
inline ScaledFields resample(const ScaledFields& f, const Grid2& target) {
  const Grid2& s = f.grid;
  double tol = 1e-12 * (1.0 + std::abs(s.x1 - s.x0) + s.ymax);
  if (target.x0 < s.x0 - tol || target.x1 > s.x1 + tol || target.ymax > s.ymax + tol)
    throw DomainError("resampling would extrapolate outside the source grid");
  ScaledFields o = make_scaled(target, f.eps, f.A, f.Delta);
  for (int side : {1, -1}) {
    const HalfFields& h = f.half(side);
    HalfFields& r = o.half(side);
    for (std::size_t j = 0; j < target.ny; ++j)
      for (std::size_t i = 0; i < target.nx; ++i) {
        double px = std::clamp((target.x(i) - s.x0) / s.hx(), 0.0, static_cast<double>(s.nx - 1));
        double py = std::clamp(target.s(j) / s.hy(), 0.0, static_cast<double>(s.ny - 1));
        auto i0 = std::min(static_cast<std::size_t>(px), s.nx - 2);
        auto j0 = std::min(static_cast<std::size_t>(py), s.ny - 2);
        double tx = px - i0, ty = py - j0;
        auto lerp = [&](const std::vector<double>& v) {
          return (1 - tx) * (1 - ty) * v[s.at(i0, j0)] + tx * (1 - ty) * v[s.at(i0 + 1, j0)] +
                 (1 - tx) * ty * v[s.at(i0, j0 + 1)] + tx * ty * v[s.at(i0 + 1, j0 + 1)];
        };
        std::size_t k = target.at(i, j);
        r.U[k] = lerp(h.U);
        r.V[k] = lerp(h.V);
        r.W[k] = lerp(h.W);
      }
  }
  return o;
}

}  // namespace minridge
