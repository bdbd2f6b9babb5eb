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

// minridge command line: profiles, energies, test solutions, minimization, bounds and sweeps.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "minridge/minridge.hpp"

using namespace minridge;

namespace {

std::string energy_report_path(const std::string& out) {
  auto dot = out.rfind(".json");
  return (dot == std::string::npos ? out : out.substr(0, dot)) + ".energy.json";
}

json self_similar_doc(const json& P, json& report) {
  double A, eps;
  if (P.contains("eps")) {
    eps = P.at("eps").get<double>();
    A = P.value("A", 1.0);
  } else {
    PhysicalParams p = params_from_json(P);
    eps = p.eps();
    A = p.A();
  }
  CrossoverSpec cs{A, eps, crossover_variant_from_string(P.value("variant", std::string("matched")))};
  cs.validate();
  NoStretchProfile prof = build_zero_shift_profile(P.value("K", default_support()));
  Grid2 g = self_similar_grid(prof, cs, P.value("nx", std::size_t{64}), P.value("ny", std::size_t{256}));
  ScaledFields f = self_similar_fields(prof, cs, g);
  SelfSimilarEnergy I = self_similar_energy(cs, prof);
  report = {{"kind", "self-similar"},
            {"A", A},
            {"eps", eps},
            {"variant", to_string(cs.variant)},
            {"grid", to_json(energy_scaled(f))},
            {"quadrature", {{"e_xx", I.e_xx}, {"b_yy", I.b_yy}, {"b_xy", I.b_xy}, {"b_xx", I.b_xx}, {"total", I.total()}}}};
  return to_json(f);
}

json composite_doc(const json& P, json& report) {
  PhysicalParams p = params_from_json(P);
  RegionScales sc = optimal_scales(p);
  double b = P.value("b", sc.b), l = P.value("l", sc.l);
  double K = P.value("K", default_support());
  NoStretchProfile left = P.contains("q_left") ? family_profile(P.at("q_left").get<double>(), K)
                                               : build_zero_shift_profile(K);
  NoStretchProfile right = P.contains("q_right") ? family_profile(P.at("q_right").get<double>(), K)
                                                 : build_zero_shift_profile(K);
  CompositeResult R = composite_test_solution(p, left, right, b, l, P.value("nx", std::size_t{129}),
                                              P.value("ny", std::size_t{513}));
  report = {{"kind", "composite"},
            {"b", b},
            {"l", l},
            {"branch", to_string(R.branch)},
            {"interpolation_total", R.interpolation.total()},
            {"three_region_total", R.three_region.total()},
            {"energy", R.energy()},
            {"regions", {{"E_I", sc.E_I}, {"E_II", sc.E_II}, {"E_III", sc.E_III}}},
            {"grid", to_json(energy_unscaled(R.config))}};
  return to_json(R.config);
}

json pinched_doc(const json& P, json& report) {
  PhysicalParams p = params_from_json(P);
  PinchedSolution s = pinched_solution(P.value("x0", 0.0), P.at("a_pinch").get<double>(), p);
  SheetConfig c = s.sample(P.value("nx", std::size_t{129}), P.value("ny", std::size_t{257}), p.Lp);
  report = {{"kind", "pinched"}, {"x0", s.x0}, {"a_pinch", s.a_pinch}, {"energy", s.energy()},
            {"sag_x0", s.sag(s.x0)}, {"grid", to_json(energy_unscaled(c))}};
  return to_json(c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimal ridge FvK toolkit"};
  app.require_subcommand(1);
  int status = 0;

  // profile
  auto* profile = app.add_subcommand("profile", "no-stretch profiles");
  profile->require_subcommand(1);
  double K = 0;
  std::string out, in;
  auto* pbuild = profile->add_subcommand("build", "zero-shift profile with support K");
  pbuild->add_option("--K", K, "support length")->required();
  pbuild->add_option("--out", out, "output JSON")->required();
  pbuild->callback([&] {
    NoStretchProfile p = build_zero_shift_profile(K);
    write_json(out, to_json(p));
    ValidationReport r = verify_profile(p);
    std::cout << to_json(r).dump(2) << '\n';
    status = r.pass ? 0 : 1;
  });
  auto* pverify = profile->add_subcommand("verify", "check a stored profile");
  pverify->add_option("path", in, "profile JSON")->required();
  pverify->callback([&] {
    ValidationReport r = verify_profile(profile_from_json(read_json(in)));
    std::cout << to_json(r).dump(2) << '\n';
    status = r.pass ? 0 : 1;
  });

  // energy
  auto* energy = app.add_subcommand("energy", "discrete energies");
  energy->require_subcommand(1);
  auto* eeval = energy->add_subcommand("eval", "energy breakdown of a configuration");
  eeval->add_option("--config", in, "scaled or sheet JSON")->required();
  eeval->callback([&] {
    json j = read_json(in);
    if (j.value("kind", std::string("scaled")) == "sheet")
      std::cout << to_json(energy_unscaled(sheet_from_json(j))).dump(2) << '\n';
    else
      std::cout << to_json(energy_scaled(scaled_from_json(j))).dump(2) << '\n';
  });

  // testsol
  auto* testsol = app.add_subcommand("testsol", "test-solution constructions");
  testsol->require_subcommand(1);
  std::string kind, params;
  auto* tbuild = testsol->add_subcommand("build", "build a test solution");
  tbuild->add_option("--kind", kind)->required()->check(CLI::IsMember({"self-similar", "composite", "pinched"}));
  tbuild->add_option("--params", params, "parameter JSON")->required();
  tbuild->add_option("--out", out, "output configuration JSON")->required();
  tbuild->callback([&] {
    json P = read_json(params), report;
    json doc = kind == "self-similar" ? self_similar_doc(P, report)
               : kind == "composite"  ? composite_doc(P, report)
                                      : pinched_doc(P, report);
    write_json(out, doc);
    write_json(energy_report_path(out), report);
    std::cout << report.dump(2) << '\n';
  });

  // minimize
  std::string init, opts_path, progress_path;
  auto* mini = app.add_subcommand("minimize", "minimize the scaled energy");
  mini->add_option("--init", init, "initial fields JSON")->required();
  mini->add_option("--opts", opts_path, "options JSON");
  mini->add_option("--out", out, "minimizer fields JSON")->required();
  mini->add_option("--progress", progress_path, "progress CSV file (default stdout)");
  mini->callback([&] {
    ScaledFields f = any_scaled_from_json(read_json(init));
    MinimizeOptions o = opts_path.empty() ? MinimizeOptions{} : minimize_options_from_json(read_json(opts_path));
    std::ofstream pf;
    if (!progress_path.empty()) {
      pf.open(progress_path);
      o.progress = &pf;
    } else {
      o.progress = &std::cout;
    }
    MinimizeResult R = minimize(f, o);
    write_json(out, to_json(R.fields));
    json summary = {{"energy", to_json(R.energy)},
                    {"iterations", R.iterations},
                    {"grad_norm", R.grad_norm},
                    {"constraint_residual", R.constraint_residual},
                    {"converged", R.converged},
                    {"monotone", R.monotone},
                    {"continuations", R.continuations}};
    std::cerr << summary.dump(2) << '\n';
    status = R.converged ? 0 : 1;
  });

  // bounds
  auto* bounds = app.add_subcommand("bounds", "lower bounds and the 1-D ridge functional");
  bounds->require_subcommand(1);
  double A = 0, length = 1, alpha = 0.3;
  Rho1dOptions ro;
  auto* breport = bounds->add_subcommand("report", "lower-bound chain on a configuration");
  breport->add_option("--fields", in, "scaled or sheet JSON")->required();
  breport->add_option("--A", A, "frame amplitude")->required();
  breport->callback([&] {
    LowerBoundReport r = lower_bound_report(any_scaled_from_json(read_json(in)), A);
    std::cout << to_json(r).dump(2) << '\n';
    status = r.chain_ok ? 0 : 1;
  });
  auto* brho = bounds->add_subcommand("rho1d", "minimizer of the 1-D width functional");
  brho->add_option("--length", length)->required();
  brho->add_option("--alpha", alpha)->required();
  brho->add_option("--nodes", ro.nodes);
  brho->add_option("--floor", ro.floor);
  brho->callback([&] {
    Rho1dResult r = optimize_rho_1d(length, alpha, ro);
    std::cout << "x,rho\n";
    for (std::size_t k = 0; k < r.x.size(); ++k) std::cout << format_number(r.x[k]) << ',' << format_number(r.rho[k]) << '\n';
    std::cerr << json{{"value", r.value}, {"grad_norm", r.grad_norm}, {"iterations", r.iterations},
                      {"converged", r.converged}}.dump()
              << '\n';
    status = r.converged ? 0 : 1;
  });

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweeps");
  sweep_cmd->require_subcommand(1);
  std::string spec_path;
  int workers = 0;
  auto* srun = sweep_cmd->add_subcommand("run", "run a sweep spec");
  srun->add_option("--spec", spec_path, "TOML or JSON spec")->required();
  srun->add_option("--out", out, "output directory")->required();
  srun->add_option("--workers", workers, "override the worker count");
  srun->callback([&] {
    SweepSpec s = load_spec(spec_path);
    if (workers > 0) s.workers = workers;
    SweepSummary S = run_sweep(s, build_zero_shift_profile(default_support()), out);
    for (const auto& f : S.fits)
      std::printf("%s %s slope=%.4f r2=%.5f [%g, %g]\n", f.pass ? "PASS" : "FAIL", f.name.c_str(), f.fit.slope,
                  f.fit.r2, f.lo, f.hi);
    std::printf("failed_rows=%zu sandwich_violations=%zu\n", S.failed_rows, S.sandwich_violations);
    status = S.pass ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return status;
}
