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

#include "minridge/io.hpp"
#include "minridge/profiles.hpp"

using namespace minridge;
using Catch::Approx;

namespace {

const NoStretchProfile& profile() {
  static const NoStretchProfile p = build_zero_shift_profile(default_support());
  return p;
}

// Phi+ = (1 - eta)^2 on [0, 1], zero up to K = 2; Phi- = 0.  Delta = -(2 sqrt2 + 4/3) exactly.
NoStretchProfile parabola_profile(std::size_t cells) {
  double h = 2.0 / static_cast<double>(cells);
  std::vector<double> pp(cells + 1), dp(cells + 1), z(cells + 1, 0.0);
  for (std::size_t k = 0; k <= cells; ++k) {
    double e = h * static_cast<double>(k);
    pp[k] = e < 1.0 ? (1.0 - e) * (1.0 - e) : 0.0;
    dp[k] = e < 1.0 ? -2.0 * (1.0 - e) : 0.0;
  }
  return profile_from_samples(h, pp, z, dp, z);
}

}  // namespace

TEST_CASE("mollifier plateaus", "[profiles]") {
  Mollifier cut(BumpKind::cutoff_nonincreasing, 0.5, 2.0);
  CHECK(cut.value(0.25) == 1.0);
  CHECK(cut.value(3.0) == 0.0);
  Mollifier step(BumpKind::step_nondecreasing, 0.0, 1.0);
  CHECK(step.value(-1.0) == 0.0);
  CHECK(step.value(2.0) == 1.0);
  Mollifier wig(BumpKind::odd_wiggle, -1.0, 0.0);
  CHECK(std::abs(wig.value(-0.5)) < 1e-15);
  CHECK(wig.value(-0.25) == Approx(-wig.value(-0.75)).margin(1e-14));
  CHECK(std::abs(wig.value(-0.25)) > 0.1);
  CHECK_THROWS_AS(Mollifier(BumpKind::plateau, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(make_bump(BumpKind::plateau, 0.0, 1.0, 0.0), ParameterError);
}

TEST_CASE("mollifier derivatives match central differences", "[profiles]") {
  for (auto kind : {BumpKind::cutoff_nonincreasing, BumpKind::step_nondecreasing, BumpKind::plateau,
                    BumpKind::odd_wiggle}) {
    Mollifier m(kind, -0.3, 1.7);
    for (double x = -0.25; x < 1.7; x += 0.137) {
      double h = 1e-5;
      Jet j = m(x);
      double d = (m.value(x + h) - m.value(x - h)) / (2 * h);
      double dd = (m(x + h).d - m(x - h).d) / (2 * h);
      CHECK(j.d == Approx(d).margin(1e-7));
      CHECK(j.dd == Approx(dd).margin(1e-6));
    }
  }
}

TEST_CASE("zero-shift construction", "[profiles]") {
  const auto& c = zero_shift_construction();
  CHECK(std::abs(zero_shift_functional(c, c.q_star)) < 1e-10);
  CHECK(c.K0 == Approx(2.0 * c.ell).epsilon(1e-14));
  CHECK_THROWS_AS(build_zero_shift_profile(0.9 * c.K0), InfeasibleSupportError);

  const auto& p = profile();
  CHECK(std::abs(p.delta) < 1e-8);
  CHECK(std::abs(asymptotic_shift(p)) < 1e-8);
  CHECK(curvature_norm(p) == Approx(1.0).margin(1e-8));
  CHECK(std::abs(p.minus.dphi[0] - (p.plus.dphi[0] - sqrt2)) < 1e-10);
  ValidationReport r = verify_profile(p);
  CHECK(r.pass);
  CHECK(r.no_stretch < 1e-10);
}

TEST_CASE("one-sided slopes from nodal values show the sqrt2 jump", "[profiles]") {
  const auto& p = profile();
  double h = p.grid_step;
  auto one_sided = [&](const std::vector<double>& f, double s) {
    return s * (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
  };
  double dp = one_sided(p.plus.phi, 1.0), dm = one_sided(p.minus.phi, -1.0);
  CHECK(dp - dm == Approx(sqrt2).margin(1e-6));
}

TEST_CASE("reflection symmetry and the slope bound", "[profiles]") {
  const auto& p = profile();
  for (std::size_t k = 0; k < p.size(); ++k) {
    REQUIRE(p.plus.phi[k] == p.minus.phi[k]);
    REQUIRE(p.plus.psi[k] == -p.minus.psi[k]);
    double e = p.eta(k, 1);
    REQUIRE(std::abs(p.plus.dphi[k]) <= std::sqrt(p.K - e) + 1e-12);
  }
  CHECK(p.K >= 0.5);
}

TEST_CASE("Xi closed form against an RK4 integration inward from K", "[profiles]") {
  const auto& p = profile();
  CHECK(std::abs(p.plus.xi[0] - p.minus.xi[0]) < 1e-10);
  CHECK(p.eval(p.K).xi == 0.0);
  CHECK(p.eval(-p.K - 1.0).xi == 0.0);
  // (Phi, Psi, Xi) integrated together from the exact construction slope, zero data at eta = +-K
  auto slope = zero_shift_slope(zero_shift_construction());
  for (int side : {1, -1}) {
    auto ds = [&](double e) { return side > 0 ? slope(e).v : -slope(-e).v; };
    auto rhs = [&](double e, const std::array<double, 3>& y) {
      double d = ds(e), dpsi = -d * d;
      return std::array<double, 3>{d, dpsi, -(y[1] - e * dpsi + 2.0 * d * (y[0] - e * d))};
    };
    const ProfileHalf& h = p.half(side);
    std::array<double, 3> y{0.0, 0.0, 0.0};
    double worst = 0.0;
    int sub = 16;
    for (std::size_t k = p.size() - 1; k-- > 0;) {
      double e1 = p.eta(k + 1, side), e0 = p.eta(k, side), dh = (e0 - e1) / sub;
      for (int q = 0; q < sub; ++q) {
        double a = e1 + q * dh;
        auto add = [](std::array<double, 3> u, const std::array<double, 3>& v, double c) {
          for (int t = 0; t < 3; ++t) u[t] += c * v[t];
          return u;
        };
        auto k1 = rhs(a, y), k2 = rhs(a + dh / 2, add(y, k1, dh / 2)), k3 = rhs(a + dh / 2, add(y, k2, dh / 2)),
             k4 = rhs(a + dh, add(y, k3, dh));
        for (int t = 0; t < 3; ++t) y[t] += dh / 6 * (k1[t] + 2 * k2[t] + 2 * k3[t] + k4[t]);
      }
      worst = std::max(worst, std::abs(y[2] - h.xi[k]));
    }
    CHECK(worst < 1e-8);
  }
  NoStretchProfile again = make_xi(p);
  CHECK(again.plus.xi == p.plus.xi);
  CHECK(again.minus.xi == p.minus.xi);
}

TEST_CASE("verify_profile reports violations", "[profiles]") {
  NoStretchProfile p = profile();
  for (auto* h : {&p.plus, &p.minus}) std::fill(h->psi.begin(), h->psi.end(), 0.0);
  ValidationReport r = verify_profile(p);
  double quartic = 0.0, dh = p.grid_step;
  for (const auto* h : {&profile().plus, &profile().minus})
    for (std::size_t k = 0; k < p.size(); ++k) {
      double w = (k == 0 || k + 1 == p.size()) ? 0.5 : 1.0;
      quartic += w * dh * std::pow(h->dphi[k], 4);
    }
  CHECK(r.no_stretch == Approx(quartic).epsilon(1e-10));
  CHECK_FALSE(r.pass);

  NoStretchProfile q = profile();
  for (auto* h : {&q.plus, &q.minus})
    for (double& v : h->ddphi) v *= sqrt2;
  ValidationReport r2 = verify_profile(q);
  CHECK(r2.normalization == Approx(1.0).margin(1e-8));
  CHECK_FALSE(r2.pass);
}

TEST_CASE("asymptotic shift of a sampled profile, second order", "[profiles]") {
  double exact = -(2.0 * sqrt2 + 4.0 / 3.0);
  double e1 = std::abs(asymptotic_shift(parabola_profile(256)) - exact);
  double e2 = std::abs(asymptotic_shift(parabola_profile(512)) - exact);
  double e3 = std::abs(asymptotic_shift(parabola_profile(1024)) - exact);
  CHECK(e3 < 1e-5);
  CHECK(e1 / e2 == Approx(4.0).margin(0.5));
  CHECK(e2 / e3 == Approx(4.0).margin(0.5));

  std::vector<double> z(9, 0.0);
  CHECK(asymptotic_shift(profile_from_samples(0.1, z, z)) == 0.0);
  CHECK_THROWS_AS(make_xi(parabola_profile(64)), IncompatibleProfileError);
}

TEST_CASE("profile JSON round trip", "[profiles]") {
  const auto& p = profile();
  json j = to_json(p);
  for (const char* k : {"grid_step", "K", "eta_nodes", "phi_plus", "psi_plus", "xi_plus", "phi_minus", "psi_minus",
                        "xi_minus", "delta", "curvature_norm"})
    CHECK(j.contains(k));
  NoStretchProfile q = profile_from_json(json::parse(j.dump()));
  CHECK(q.plus.phi == p.plus.phi);
  CHECK(q.minus.xi == p.minus.xi);
  CHECK(verify_profile(q).pass);
}
