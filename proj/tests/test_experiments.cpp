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
#include <filesystem>
#include <sstream>

#include "minridge/experiments.hpp"

using namespace minridge;
using Catch::Approx;

namespace {

const NoStretchProfile& profile() {
  static const NoStretchProfile p = build_zero_shift_profile(default_support());
  return p;
}

SweepSpec small_spec() {
  SweepSpec s;
  s.sigma = {1e-4, 1e-3};
  s.alpha = {0.2, 0.3};
  s.A = {1.0};
  s.nx = 17;
  s.ny = 65;
  return s;
}

std::string csv(const std::vector<ExperimentRow>& rows, bool wall = false) {
  std::ostringstream out;
  write_rows_csv(out, rows, wall);
  return out.str();
}

std::vector<ExperimentRow> power_law(double k, double c, int n) {
  std::vector<ExperimentRow> t;
  for (int i = 0; i < n; ++i) {
    ExperimentRow r;
    r.sigma = std::pow(10.0, -4.0 + 0.25 * i);
    r.unscaled = c * std::pow(r.sigma, k);
    t.push_back(r);
  }
  return t;
}

}  // namespace

TEST_CASE("TOML subset and JSON specs agree", "[experiments]") {
  std::string toml = R"(# sweep over sigma
[sweep]
sigma = [1e-4, 3.1622776601683794e-4,
         1e-3]   # trailing comment
alpha = [0.2, 0.3]
A = [1.0]
nx = 32
ny = 128
kind = "minimize"
variant = "literal"
workers = 2
record_wall_time = false
)";
  SweepSpec t = spec_from_json(parse_toml(toml));
  SweepSpec j = spec_from_json(json::parse(R"({"sigma": [1e-4, 3.1622776601683794e-4, 1e-3], "alpha": [0.2, 0.3],
      "A": 1.0, "nx": 32, "ny": 128, "kind": "minimize", "variant": "literal", "workers": 2})"));
  CHECK(t.sigma == j.sigma);
  CHECK(t.alpha == j.alpha);
  CHECK(t.A == j.A);
  CHECK(t.nx == 32);
  CHECK(t.ny == 128);
  CHECK(t.kind == SolutionKind::minimize);
  CHECK(j.variant == CrossoverVariant::literal);
  CHECK(t.workers == 2);
  CHECK_FALSE(t.record_wall_time);

  CHECK(spec_from_json(json{{"kind", "test-solution-only"}}).kind == SolutionKind::test);
  CHECK_THROWS_AS(spec_from_json(json{{"kind", "bogus"}}), ParameterError);
  CHECK_THROWS_AS(spec_from_json(json{{"nx", 8}}), ParameterError);
  CHECK_THROWS_AS(spec_from_json(json{{"alpha", {0.3, 2.0}}}), ParameterError);
  CHECK_THROWS_AS(parse_toml("sigma 1e-3"), ParameterError);
  CHECK_THROWS_AS(parse_toml("sigma = [1e-3,"), ParameterError);
}

TEST_CASE("fit_exponent", "[experiments]") {
  FitResult f = fit_exponent(power_law(5.0 / 3.0, 2.5, 5), "sigma", "unscaled");
  CHECK(f.slope == Approx(5.0 / 3.0).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == Approx(2.5).epsilon(1e-10));
  CHECK(f.r2 == Approx(1.0).epsilon(1e-12));
  CHECK(f.n == 5);
  // window drops the two largest sigma
  CHECK(fit_exponent(power_law(1.0, 1.0, 6), "sigma", "unscaled", {0.0, 1e-3 * 0.99}).n == 4);
  CHECK_THROWS_AS(fit_exponent(power_law(1.0, 1.0, 3), "sigma", "unscaled"), ParameterError);
  auto bad = power_law(1.0, 1.0, 5);
  bad[2].unscaled = 0.0;
  CHECK_THROWS_AS(fit_exponent(bad, "sigma", "unscaled"), DomainError);
  CHECK_THROWS_AS(fit_exponent(bad, "sigma", "nonsense"), ParameterError);
}

TEST_CASE("csv header and number format", "[experiments]") {
  CHECK(std::string(csv_header()) == "sigma,alpha,A,eps,h,e_xx,e_xy,e_yy,b_yy,b_xy,b_xx,total,Eb,Es,wall_ms");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(std::nan("")) == "NA");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("sweep rows: deterministic, order-stable, worker independent", "[experiments]") {
  SweepSpec s = small_spec();
  auto a = sweep(s, profile());
  auto b = sweep(s, profile());
  s.workers = 3;
  auto c = sweep(s, profile());
  REQUIRE(a.size() == 4);
  CHECK(csv(a) == csv(b));
  CHECK(csv(a) == csv(c));
  // sigma outer, A inner
  CHECK(a[0].sigma == 1e-4);
  CHECK(a[1].alpha == 0.3);
  CHECK(a[2].sigma == 1e-3);
  for (const auto& r : a) {
    CHECK(r.ok());
    CHECK(r.es_bound <= r.Es + 1e-12);
    CHECK(r.Es <= r.total);
    CHECK(r.unscaled == Approx(r.total * std::pow(r.sigma, 5.0 / 3.0) * std::pow(r.alpha, 7.0 / 3.0)).epsilon(1e-12));
    double sum = 0.0;
    for (double t : r.terms) sum += t;
    CHECK(sum == Approx(r.total).epsilon(1e-12));
  }
  // wall time shows up only when asked for
  CHECK(csv(a).find(",NA\n") != std::string::npos);
  CHECK(csv(a, true).find(",NA\n") == std::string::npos);
}

TEST_CASE("sweep records failures and keeps going", "[experiments]") {
  SweepSpec s = small_spec();
  NoStretchProfile shifted = family_profile(0.0, default_support());
  auto rows = sweep(s, shifted);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK_FALSE(r.ok());
    CHECK_FALSE(r.error.empty());
  }
  SweepSummary S = summarize(s, rows);
  CHECK(S.failed_rows == 4);
  CHECK_FALSE(S.pass);
  std::string text = csv(rows);
  CHECK(text.find(",NA,NA,") != std::string::npos);
}

TEST_CASE("summarize fits and run_sweep outputs", "[experiments]") {
  // synthetic rows on the exact scaling law pass both fits
  std::vector<ExperimentRow> rows;
  SweepSpec s;
  for (double sg : {1e-4, 2e-4, 4e-4, 8e-4})
    for (double al : {0.15, 0.2, 0.3, 0.4}) {
      ExperimentRow r;
      r.sigma = sg, r.alpha = al, r.A = 1.0;
      r.unscaled = std::pow(sg, 5.0 / 3.0) * std::pow(al, 7.0 / 3.0);
      r.total = 1.0, r.Es = 0.5;
      rows.push_back(r);
    }
  SweepSummary S = summarize(s, rows);
  CHECK(S.fits.size() == 8);
  CHECK(S.pass);
  rows[0].es_bound = 0.9;
  CHECK(summarize(s, rows).sandwich_violations == 1);

  auto dir = std::filesystem::temp_directory_path() / "minridge_test_sweep";
  std::filesystem::remove_all(dir);
  SweepSpec t = small_spec();
  SweepSummary R = run_sweep(t, profile(), dir);
  CHECK(R.failed_rows == 0);
  for (const char* f : {"rows.csv", "fits.json", "plots/manifest.json", "plots/energy_vs_sigma.dat",
                        "plots/energy_vs_alpha.dat", "plots/energy_vs_A.dat"})
    CHECK(std::filesystem::exists(dir / f));
  json fits = json::parse(std::ifstream(dir / "fits.json"));
  CHECK(fits.at("rows").size() == 4);
  CHECK(fits.at("failed_rows") == 0);
  std::filesystem::remove_all(dir);
}
