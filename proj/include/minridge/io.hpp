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
 * @brief JSON documents for profiles, fields, configurations and reports.
 */
#pragma once

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "minridge/bounds.hpp"
#include "minridge/energy.hpp"
#include "minridge/fields.hpp"
#include "minridge/minimize.hpp"
#include "minridge/profiles.hpp"
#include "minridge/testsolutions.hpp"

namespace minridge {

using json = nlohmann::json;

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- profiles

inline json to_json(const NoStretchProfile& p) {
  std::vector<double> eta(p.size());
  for (std::size_t k = 0; k < eta.size(); ++k) eta[k] = p.eta(k, 1);
  return {{"grid_step", p.grid_step},     {"K", p.K},
          {"eta_nodes", eta},             {"phi_plus", p.plus.phi},
          {"psi_plus", p.plus.psi},       {"xi_plus", p.plus.xi},
          {"phi_minus", p.minus.phi},     {"psi_minus", p.minus.psi},
          {"xi_minus", p.minus.xi},       {"dphi_plus", p.plus.dphi},
          {"ddphi_plus", p.plus.ddphi},   {"dphi_minus", p.minus.dphi},
          {"ddphi_minus", p.minus.ddphi}, {"delta", p.delta},
          {"curvature_norm", p.curvature_norm}};
}

/** @brief reads the profile layout; derivative arrays are rebuilt when absent */
inline NoStretchProfile profile_from_json(const json& j) {
  auto vec = [&](const char* k) { return j.contains(k) ? j.at(k).get<std::vector<double>>() : std::vector<double>{}; };
  double h = j.at("grid_step").get<double>();
  NoStretchProfile p;
  if (j.contains("ddphi_plus") && j.contains("ddphi_minus")) {
    p.grid_step = h;
    p.K = j.at("K").get<double>();
    p.plus = {vec("phi_plus"), vec("dphi_plus"), vec("ddphi_plus"), vec("psi_plus"), vec("xi_plus")};
    p.minus = {vec("phi_minus"), vec("dphi_minus"), vec("ddphi_minus"), vec("psi_minus"), vec("xi_minus")};
    p.delta = j.value("delta", asymptotic_shift(p));
    p.curvature_norm = j.value("curvature_norm", curvature_norm(p));
  } else {
    p = profile_from_samples(h, vec("phi_plus"), vec("phi_minus"), vec("dphi_plus"), vec("dphi_minus"));
    if (j.contains("xi_plus")) p.plus.xi = vec("xi_plus");
    if (j.contains("xi_minus")) p.minus.xi = vec("xi_minus");
  }
  std::size_t n = p.plus.phi.size();
  for (const auto* v : {&p.plus.dphi, &p.plus.ddphi, &p.plus.psi, &p.minus.phi, &p.minus.dphi, &p.minus.ddphi,
                        &p.minus.psi})
    require(v->size() == n, "profile arrays must have equal length");
  return p;
}

inline json to_json(const ValidationReport& r) {
  return {{"no_stretch", r.no_stretch},         {"normalization", r.normalization},
          {"matching_value", r.matching_value}, {"matching_slope", r.matching_slope},
          {"matching_psi", r.matching_psi},     {"support", r.support},
          {"shift", r.shift},                   {"pass", r.pass}};
}

// ---------------------------------------------------------------- parameters and fields

inline json to_json(const PhysicalParams& p) {
  return {{"L", p.L}, {"Lp", p.Lp}, {"alpha", p.alpha}, {"sigma", p.sigma}, {"a", p.a}, {"delta", p.delta}, {"K", p.K}};
}

inline PhysicalParams params_from_json(const json& j) {
  PhysicalParams p;
  p.L = j.value("L", p.L);
  p.Lp = j.value("Lp", p.Lp);
  p.alpha = j.value("alpha", p.alpha);
  p.sigma = j.value("sigma", p.sigma);
  p.a = j.value("a", p.a);
  p.delta = j.value("delta", p.delta);
  p.K = j.value("K", p.K);
  p.validate();
  return p;
}

inline json to_json(const Grid2& g) {
  return {{"nx", g.nx}, {"ny", g.ny}, {"x0", g.x0}, {"x1", g.x1}, {"ymax", g.ymax}};
}

inline Grid2 grid_from_json(const json& j) {
  return make_grid(j.at("nx").get<std::size_t>(), j.at("ny").get<std::size_t>(), j.value("x0", -1.0),
                   j.value("x1", 1.0), j.at("ymax").get<double>());
}

inline json to_json(const HalfFields& h) { return {{"U", h.U}, {"V", h.V}, {"W", h.W}}; }

inline HalfFields half_from_json(const json& j, std::size_t n) {
  HalfFields h{j.at("U").get<std::vector<double>>(), j.at("V").get<std::vector<double>>(),
               j.at("W").get<std::vector<double>>()};
  require(h.U.size() == n && h.V.size() == n && h.W.size() == n, "field arrays must have nx*ny entries");
  return h;
}

inline json to_json(const ScaledFields& f) {
  json g = to_json(f.grid);
  return {{"kind", "scaled"}, {"eps", f.eps}, {"A", f.A},   {"Delta", f.Delta}, {"nx", f.grid.nx},
          {"ny", f.grid.ny},  {"grid", g},    {"plus", to_json(f.plus)},     {"minus", to_json(f.minus)}};
}

inline ScaledFields scaled_from_json(const json& j) {
  ScaledFields f;
  f.eps = j.at("eps").get<double>();
  f.A = j.at("A").get<double>();
  f.Delta = j.value("Delta", 0.0);
  f.grid = grid_from_json(j.at("grid"));
  f.plus = half_from_json(j.at("plus"), f.grid.size());
  f.minus = half_from_json(j.at("minus"), f.grid.size());
  return f;
}

inline json to_json(const SheetConfig& c) {
  return {{"kind", "sheet"}, {"params", to_json(c.params)}, {"nx", c.grid.nx},         {"ny", c.grid.ny},
          {"grid", to_json(c.grid)},                          {"plus", to_json(c.plus)}, {"minus", to_json(c.minus)}};
}

inline SheetConfig sheet_from_json(const json& j) {
  SheetConfig c;
  c.params = params_from_json(j.at("params"));
  c.grid = grid_from_json(j.at("grid"));
  c.plus = half_from_json(j.at("plus"), c.grid.size());
  c.minus = half_from_json(j.at("minus"), c.grid.size());
  return c;
}

/** @brief scaled fields from either document kind */
inline ScaledFields any_scaled_from_json(const json& j) {
  if (j.value("kind", std::string("scaled")) == "sheet") return rescale(sheet_from_json(j));
  return scaled_from_json(j);
}

// ---------------------------------------------------------------- reports and options

inline json to_json(const EnergyBreakdown& E) {
  static const char* names[6] = {"e_xx", "e_xy", "e_yy", "b_yy", "b_xy", "b_xx"};
  json j, p, m, c;
  for (int k = 0; k < 6; ++k) {
    p[names[k]] = E.plus[k];
    m[names[k]] = E.minus[k];
    c[names[k]] = E.contribution(k);
  }
  j["plus"] = p;
  j["minus"] = m;
  j["weighted"] = c;
  j["weights"] = E.weights;
  j["penalty"] = E.penalty;
  j["stretching"] = E.stretching();
  j["bending"] = E.bending();
  j["total"] = E.total;
  return j;
}

inline json to_json(const LowerBoundReport& r) {
  return {{"E_b", r.E_b},       {"E_s", r.E_s},
          {"B", r.B},           {"B_plus", r.B_plus},
          {"B_minus", r.B_minus}, {"mu", r.mu},
          {"Y_tilde", r.Y_tilde}, {"es_lower", r.es_lower},
          {"es_stretch", r.es_stretch}, {"total", r.total},
          {"matching_residual", r.matching_residual}, {"chain_ok", r.chain_ok}};
}

inline MinimizeOptions minimize_options_from_json(const json& j) {
  MinimizeOptions o;
  o.max_iterations = j.value("max_iterations", o.max_iterations);
  o.grad_tol = j.value("grad_tol", o.grad_tol);
  o.backtrack = j.value("backtrack", o.backtrack);
  o.armijo = j.value("armijo", o.armijo);
  o.history = j.value("history", o.history);
  o.penalty_weight = j.value("penalty_weight", o.penalty_weight);
  o.max_continuations = j.value("max_continuations", o.max_continuations);
  o.refresh_every = j.value("refresh_every", o.refresh_every);
  o.precondition = j.value("precondition", o.precondition);
  std::string mode = j.value("mode", std::string("eliminate"));
  require(mode == "eliminate" || mode == "penalty", "mode must be eliminate or penalty");
  o.mode = mode == "penalty" ? InterfaceMode::penalty : InterfaceMode::eliminate;
  o.validate();
  return o;
}

inline CrossoverVariant crossover_variant_from_string(const std::string& s) {
  if (s == "literal") return CrossoverVariant::literal;
  if (s == "matched") return CrossoverVariant::matched;
  if (s == "constant") return CrossoverVariant::constant;
  throw ParameterError("unknown crossover variant " + s);
}

inline std::string to_string(CrossoverVariant v) {
  switch (v) {
    case CrossoverVariant::literal: return "literal";
    case CrossoverVariant::matched: return "matched";
    default: return "constant";
  }
}

}  // namespace minridge
