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

#include <catch_amalgamated.hpp>

#include "minridge/energy.hpp"
#include "minridge/testsolutions.hpp"

using namespace minridge;
using Catch::Approx;

namespace {

const NoStretchProfile& profile() {
  static const NoStretchProfile p = build_zero_shift_profile(default_support());
  return p;
}

PhysicalParams sheet(double sigma, double a, double Lp = 40.0) {
  PhysicalParams p;
  p.L = 1.0;
  p.Lp = Lp;
  p.alpha = 0.3;
  p.sigma = sigma;
  p.a = a;
  return p;
}

// composite Simpson on [lo, hi] with n (even) panels
template <class F>
double simpson(F&& f, double lo, double hi, int n) {
  double h = (hi - lo) / n, s = f(lo) + f(hi);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(lo + k * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("crossover g: plateaus and the four inequalities", "[testsolutions]") {
  double eps = 1e-3;
  for (double A : {1e-4, 1e-3, 1e-2}) {
    CrossoverSpec s{A, eps, CrossoverVariant::literal};
    CHECK(crossover_g(0.0, s).v == A);
    double z0 = std::max(2 * eps, 2 * A * std::cbrt(eps));
    for (double z : {z0, 2 * z0, 0.5, 1.0}) CHECK(crossover_g(z, s).v == Approx(std::pow(z, 2.0 / 3.0)).epsilon(1e-15));
    CrossoverConstants c = crossover_constants(s);
    CHECK(c.c_lower > 0.1);
    CHECK(c.C_upper < 10.0);
    CHECK(std::isfinite(c.C_d1));
    CHECK(std::isfinite(c.C_d2));
  }
  CHECK_THROWS_AS(crossover_g(-1.0, CrossoverSpec{}), DomainError);
  CrossoverSpec k{3.0, 1e-3, CrossoverVariant::constant};
  CHECK(crossover_rho(0.3, k).v == 3.0);
  CHECK(crossover_rho(0.3, k).d == 0.0);
}

TEST_CASE("self-similar point: no-stretch identities", "[testsolutions]") {
  const auto& p = profile();
  CrossoverSpec s{0.5, 1e-2, CrossoverVariant::matched};
  for (double X : {-0.9, -0.31, 0.0, 0.47, 0.99})
    for (double Y : {-30.0, -3.1, -0.2, 0.0, 0.4, 2.7, 18.0}) {
      Jet r = crossover_rho(X, s);
      FieldSample f = self_similar_point(p, r, Y);
      CHECK(f.V_Y + f.W_Y * f.W_Y == 0.0);
      CHECK(std::abs(f.U_Y + f.V_X + 2 * f.W_X * f.W_Y) < 1e-9);
    }
}

TEST_CASE("self-similar fields trace the frame profile", "[testsolutions]") {
  const auto& p = profile();
  CrossoverSpec s{0.7, 1e-3, CrossoverVariant::matched};
  Grid2 g = self_similar_grid(p, s, 17, 129);
  ScaledFields f = self_similar_fields(p, s, g);
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i : {std::size_t{0}, g.nx - 1}) {
      CHECK(f.plus.W[g.at(i, j)] == Approx(s.A * p.eval(g.s(j) / s.A).phi).margin(1e-14));
      CHECK(f.minus.W[g.at(i, j)] == Approx(s.A * p.eval(-g.s(j) / s.A).phi).margin(1e-14));
    }
  NoStretchProfile shifted = family_profile(0.0, default_support());
  CHECK_THROWS_AS(self_similar_fields(shifted, s, g), IncompatibleProfileError);
}

TEST_CASE("energy estimates", "[testsolutions]") {
  const auto& p = profile();
  CrossoverSpec k{2.5, 1e-3, CrossoverVariant::constant};
  EnergyEstimates c = estimate_energy_terms(k, p);
  CHECK(c.inverse == Approx(2.0 / 2.5).epsilon(1e-10));
  CHECK(c.strain == 0.0);
  CHECK(c.slope == 0.0);
  CHECK(c.curvature == 0.0);

  CrossoverSpec m{1.0, 1e-3, CrossoverVariant::matched};
  EnergyEstimates e = estimate_energy_terms(m, p);
  double oracle = simpson([&](double X) { return 1.0 / crossover_rho(X, m).v; }, -1.0, 1.0, 400000);
  CHECK(e.inverse == Approx(oracle).epsilon(1e-8));
  CHECK(self_similar_energy(m, p).total() <= e.bound());

  // the 1/rho integral grows like eps^{1/3} log(eps^{2/3}/A) for A < eps^{2/3}
  double eps = 1e-3;
  std::vector<double> lx, ly;
  for (double A : {eps, eps / 10, eps / 100}) {
    CrossoverSpec s{A, eps, CrossoverVariant::literal};
    lx.push_back(std::log(std::pow(eps, 2.0 / 3.0) / A));
    ly.push_back(estimate_energy_terms(s, p).inverse);
  }
  double slope = (ly[2] - ly[0]) / (lx[2] - lx[0]);
  CHECK(slope / std::cbrt(eps) == Approx(1.0).margin(0.1));
}

TEST_CASE("boundary layer", "[testsolutions]") {
  const auto& zs = profile();
  double qs = zero_shift_construction().q_star, K = default_support();
  NoStretchProfile p1 = family_profile(0.8 * qs, K), p2 = family_profile(1.2 * qs, K);

  BoundaryLayerEnergy same = boundary_layer_energy(zs, zs, 0.2, K);
  CHECK(same.e_xx == 0.0);
  CHECK(same.e_xy == Approx(0.0).margin(1e-20));
  CHECK(same.e_yy == 0.0);

  std::vector<double> B = {0.1, 0.2, 0.4}, byy, exx;
  for (double b : B) {
    BoundaryLayerEnergy E = boundary_layer_energy(p1, p2, b, K);
    CHECK(E.e_yy == 0.0);
    byy.push_back(E.b_yy);
    exx.push_back(E.e_xx);
  }
  CHECK(std::log(byy[2] / byy[0]) / std::log(4.0) == Approx(1.0).margin(0.02));
  CHECK(std::log(exx[2] / exx[0]) / std::log(4.0) == Approx(-3.0).margin(0.02));

  ScaledFields f = boundary_layer_fields(p1, p2, 0.2, K, 9, 65);
  double worst = 0.0;
  for (std::size_t j = 0; j < f.grid.ny; ++j) worst = std::max(worst, std::abs(f.plus.U[f.grid.at(4, j)]));
  CHECK(worst == 0.0);
  CHECK_THROWS_AS(boundary_layer_fields(p1, p2, 0.2, 0.5 * K, 9, 65), ParameterError);
}

TEST_CASE("region energies and optimal scales", "[testsolutions]") {
  PhysicalParams p = sheet(1e-3, 1e-3, 1.0);
  RegionScales a = region_energies(p, 0.01, 0.1), b = region_energies(p, 0.1, 0.1);
  CHECK(a.E_III == b.E_III);
  CHECK(region_energies(p, 1e-8, 0.1).total() > 1e3 * a.total());
  CHECK(region_energies(p, 0.01, 1e-8).total() > 1e3 * a.total());
  CHECK_THROWS_AS(region_energies(p, 0.01, 1.0), DomainError);

  RegionScales s3 = optimal_scales(p);
  double best = inf;
  for (int i = 0; i < 200; ++i)
    for (int k = 0; k < 200; ++k) {
      double bb = p.L * std::pow(10.0, -8.0 + 8.0 * (i + 0.5) / 200), ll = p.Lp * std::pow(10.0, -8.0 + 8.0 * (k + 0.5) / 200);
      best = std::min(best, region_energies(p, bb, ll).total());
    }
  CHECK(s3.total() <= best * 1.0000001);
  CHECK(s3.total() >= best * 0.99);

  PhysicalParams q = sheet(1e-4, 1e-4, 1.0);
  RegionScales s4 = optimal_scales(q);
  CHECK(std::log10(s3.E_II / s4.E_II) == Approx(5.0 / 3.0).margin(0.01));
  auto lratio = [](const PhysicalParams& pp, const RegionScales& r) {
    return r.l / (std::pow(pp.alpha, -1.0 / 3.0) * std::cbrt(pp.sigma) * std::pow(pp.L, 2.0 / 3.0));
  };
  auto bratio = [](const PhysicalParams& pp, const RegionScales& r) {
    return r.b / (std::pow(pp.alpha, 5.0 / 6.0) * std::pow(pp.sigma, 2.0 / 3.0) * std::cbrt(pp.L));
  };
  CHECK(lratio(p, s3) == Approx(lratio(q, s4)).epsilon(0.1));
  CHECK(bratio(p, s3) / bratio(q, s4) > 0.1);
  CHECK(bratio(p, s3) / bratio(q, s4) < 10.0);
}

TEST_CASE("composite: interpolation branch", "[testsolutions]") {
  const auto& zs = profile();
  PhysicalParams p = sheet(1e-3, 0.05, 10.0);
  CompositeSolution one(p, zs, zs, zs, 0.5, 0.05, CompositeBranch::interpolation);
  UnscaledTerms Q = one.energy();
  // identical frame profiles: only w_yy survives, int w_yy^2 = 2 alpha^2 / a per unit length per half
  CHECK(Q.total() == Approx(2.0 * p.sigma * p.sigma * p.alpha * p.alpha * p.L / p.a).epsilon(1e-6));
  CHECK(Q.b_yy * 0.5 * p.sigma * p.sigma / Q.total() > 0.999);
  double grid = energy_unscaled(one.sample(33, 1025)).total;
  CHECK(grid == Approx(Q.total()).epsilon(0.02));
}

TEST_CASE("composite: three-region branch", "[testsolutions]") {
  const auto& zs = profile();
  NoStretchProfile core = build_zero_shift_profile(default_support(), default_support() / 512.0);
  PhysicalParams p = sheet(1e-3, 1e-3);
  CrossoverSpec cs{p.A(), p.eps(), CrossoverVariant::literal};
  double Ly = p.Ly();
  double b = 0.05;
  CompositeSolution two(p, zs, zs, core, b, 0.1, CompositeBranch::three_region);
  for (double x : {0.0, 0.3, -0.7, 0.94}) {
    auto c = two.column(x);
    CHECK(std::abs(c.delta) < 1e-9);
    // outside the boundary layers w is exactly the self-similar field
    Jet r = crossover_rho(x / p.L, cs);
    for (double y : {0.0, 0.01, -0.05, 0.2}) {
      double want = p.w_scale() * self_similar_point(zs, r, y / Ly).W;
      auto [w, u] = two.terms(x, y >= 0 ? 1 : -1);
      CHECK(evaluate_terms(w, y).f == Approx(want).margin(1e-12));
    }
  }
  // the energy approaches the self-similar value as the layer shrinks toward the frame scale
  double ss = p.energy_factor() * self_similar_energy(cs, zs).total();
  double e_small = CompositeSolution(p, zs, zs, core, 1e-3, 0.1, CompositeBranch::three_region).energy().total();
  CHECK(e_small == Approx(ss).epsilon(0.05));

  NoStretchProfile other = family_profile(0.9 * zero_shift_construction().q_star, default_support());
  CHECK_THROWS_AS(CompositeSolution(p, zs, other, core, b, 0.1, CompositeBranch::three_region), CompatibilityError);
  CHECK_THROWS_AS(CompositeSolution(sheet(1e-3, 1e-3, 1.0), zs, zs, core, b, 0.1, CompositeBranch::three_region),
                  DomainError);
}

TEST_CASE("composite_test_solution returns the cheaper branch", "[testsolutions]") {
  const auto& zs = profile();
  PhysicalParams p = sheet(1e-3, 1e-3);
  RegionScales sc = optimal_scales(p);
  CompositeResult R = composite_test_solution(p, zs, zs, sc.b, sc.l, 17, 65);
  CHECK(R.energy() == std::min(R.interpolation.total(), R.three_region.total()));
  CHECK(R.config.grid.nx == 17);
}

TEST_CASE("pinched solution", "[testsolutions]") {
  PhysicalParams p = sheet(1e-3, 1e-3, 1.0);
  const auto& zs = profile();
  for (double ap : {1e-4, 1e-6}) {
    PinchedSolution s = pinched_solution(0.0, ap, p);
    CHECK(s.sag(0.0) == Approx(sqrt2 * p.alpha * ap * zs.phi0()).epsilon(1e-12));
    for (double y : {0.0, 1e-4, -3e-4})
      for (int t = 0; t < 3; ++t) CHECK(s.displacement(0.0, y, 0)[t] == Approx(s.displacement(0.0, y, 1)[t]).margin(1e-15));
  }
  CrossoverSpec cs{p.A(), p.eps(), CrossoverVariant::literal};
  double unpinched = p.energy_factor() * self_similar_energy(cs, zs).total();
  CHECK(pinched_solution(0.0, 1e-4, p).energy() <= std::pow(2.0, 7.0 / 3.0) * unpinched);
  CHECK_THROWS_AS(pinched_solution(1.0, 1e-4, p), ParameterError);
  CHECK_THROWS_AS(pinched_solution(0.0, 0.0, p), ParameterError);
}
