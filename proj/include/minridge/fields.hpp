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
 * @brief Grids, physical parameters and the scaled / unscaled field containers.
 *
 * Each half is stored in its own mirrored coordinate s = |y| >= 0, row-major
 * with index j*nx + i. Row j = 0 is the bend line and is stored in both halves.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "minridge/core.hpp"

namespace minridge {

struct Grid2 {
  std::size_t nx = 0, ny = 0;
  double x0 = -1.0, x1 = 1.0, ymax = 1.0;

  double hx() const { return (x1 - x0) / static_cast<double>(nx - 1); }
  double hy() const { return ymax / static_cast<double>(ny - 1); }
  double x(std::size_t i) const { return i + 1 == nx ? x1 : x0 + hx() * static_cast<double>(i); }
  double s(std::size_t j) const { return j + 1 == ny ? ymax : hy() * static_cast<double>(j); }
  std::size_t size() const { return nx * ny; }
  std::size_t at(std::size_t i, std::size_t j) const { return j * nx + i; }
  bool operator==(const Grid2&) const = default;
};

inline Grid2 make_grid(std::size_t nx, std::size_t ny, double x0, double x1, double ymax) {
  require(nx >= 5 && ny >= 5, "grid needs at least 5 nodes per direction");
  require(x1 > x0 && ymax > 0.0, "grid extents must be positive");
  return {nx, ny, x0, x1, ymax};
}

/** @brief the three displacement arrays of one half */
struct HalfFields {
  std::vector<double> U, V, W;

  void resize(std::size_t n) {
    U.assign(n, 0.0);
    V.assign(n, 0.0);
    W.assign(n, 0.0);
  }
};

/** @brief physical parameters; derived quantities follow the rescaling of the sheet */
struct PhysicalParams {
  double L = 1.0, Lp = 1.0, alpha = 0.3, sigma = 1e-3, a = 0.1, delta = 0.0, K = 0.0;

  double eps() const { return sigma / (L * alpha); }
  double Ly() const { return std::cbrt(sigma) * std::pow(L, 2.0 / 3.0) / std::cbrt(alpha); }
  double A() const { return a / Ly(); }
  /** @brief w = w_scale * W */
  double w_scale() const { return sqrt2 * alpha * Ly(); }
  /** @brief v = y +- delta/2 + v_scale * V */
  double v_scale() const { return alpha * alpha * Ly(); }
  /** @brief u = x + u_scale * U */
  double u_scale() const {
    return std::pow(sigma, 2.0 / 3.0) * std::cbrt(L) * std::pow(alpha, 4.0 / 3.0);
  }
  /** @brief unscaled energy = energy_factor * scaled energy */
  double energy_factor() const {
    return std::pow(sigma, 5.0 / 3.0) * std::cbrt(L) * std::pow(alpha, 7.0 / 3.0);
  }

  void validate() const {
    if (!(L > 0 && Lp > 0 && sigma > 0 && a > 0 && alpha > 0 && alpha < M_PI / 2))
      throw ParameterError("physical parameters must satisfy L, L', sigma, a > 0, 0 < alpha < pi/2");
  }
};

/** @brief nondimensional fields on [x0,x1] x [0,Ymax] per half */
struct ScaledFields {
  double eps = 1.0, A = 1.0, Delta = 0.0;
  Grid2 grid;
  HalfFields plus, minus;

  const HalfFields& half(int side) const { return side > 0 ? plus : minus; }
  HalfFields& half(int side) { return side > 0 ? plus : minus; }
};

inline ScaledFields make_scaled(const Grid2& g, double eps, double A, double Delta = 0.0) {
  ScaledFields f;
  f.eps = eps;
  f.A = A;
  f.Delta = Delta;
  f.grid = g;
  f.plus.resize(g.size());
  f.minus.resize(g.size());
  return f;
}

/** @brief unscaled fields u, v, w on [-L,L] x [0,L'] per half */
struct SheetConfig {
  PhysicalParams params;
  Grid2 grid;
  HalfFields plus, minus;

  const HalfFields& half(int side) const { return side > 0 ? plus : minus; }
  HalfFields& half(int side) { return side > 0 ? plus : minus; }
};

/** @brief flat reference configuration u = x, v = y +- delta/2, w = 0 */
inline SheetConfig make_flat(const PhysicalParams& p, std::size_t nx, std::size_t ny) {
  SheetConfig c;
  c.params = p;
  c.grid = make_grid(nx, ny, -p.L, p.L, p.Lp);
  for (int side : {1, -1}) {
    HalfFields& h = c.half(side);
    h.resize(c.grid.size());
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i) {
        std::size_t k = c.grid.at(i, j);
        h.U[k] = c.grid.x(i);
        h.V[k] = side * c.grid.s(j) + side * 0.5 * p.delta;
      }
  }
  return c;
}

}  // namespace minridge
