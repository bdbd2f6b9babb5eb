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
 * @brief Parameter sweeps, exponent fits and their CSV / JSON / plot-data outputs.
 */
#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "minridge/bounds.hpp"
#include "minridge/io.hpp"
#include "minridge/minimize.hpp"
#include "minridge/profiles.hpp"
#include "minridge/testsolutions.hpp"

namespace minridge {

// ---------------------------------------------------------------- spec

enum class SolutionKind { test, minimize };

struct SweepSpec {
  std::vector<double> sigma{1e-3}, alpha{0.3}, A{1.0};
  double L = 1.0, Lp = 0.0;
  std::size_t nx = 64, ny = 256;
  SolutionKind kind = SolutionKind::test;
  CrossoverVariant variant = CrossoverVariant::matched;
  int max_iterations = 3000;
  double grad_tol = 1e-7;
  int workers = 1;
  bool record_wall_time = false;
  /** @brief fit windows over the swept variable; empty means all rows */
  double fit_lo = 0.0, fit_hi = inf;
  std::string rows_file = "rows.csv", fits_file = "fits.json", plots_dir = "plots";

  void validate() const {
    if (sigma.empty() || alpha.empty() || A.empty()) throw ParameterError("sweep ranges must be nonempty");
    if (nx < 16 || ny < 16) throw ParameterError("sweep resolution must be >= 16 per direction");
    for (double s : sigma) require(s > 0, "sigma must be positive");
    for (double a : alpha) require(a > 0 && a < M_PI / 2, "alpha must lie in (0, pi/2)");
    for (double a : A) require(a > 0, "A must be positive");
    require(L > 0 && workers >= 1 && max_iterations > 0 && grad_tol > 0, "invalid sweep settings");
  }
};

namespace detail {

inline std::vector<double> number_list(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  return {j.get<double>()};
}

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n"), e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

/** @brief strips a trailing comment that is not inside a string */
inline std::string strip_comment(const std::string& s) {
  bool q = false;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] == '"') q = !q;
    if (s[k] == '#' && !q) return s.substr(0, k);
  }
  return s;
}

inline json toml_scalar(const std::string& raw) {
  std::string v = trim(raw);
  if (v.empty()) throw ParameterError("empty TOML value");
  if (v.front() == '"') {
    require(v.size() >= 2 && v.back() == '"', "unterminated TOML string");
    return v.substr(1, v.size() - 2);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  if (v == "inf" || v == "+inf") return inf;
  std::string n;
  for (char c : v)
    if (c != '_') n += c;
  std::size_t used = 0;
  double d = std::stod(n, &used);
  require(used == n.size(), "bad TOML number '" + v + "'");
  bool integral = n.find_first_of(".eE") == std::string::npos;
  if (integral) return static_cast<long long>(d);
  return d;
}

inline json toml_value(const std::string& raw) {
  std::string v = trim(raw);
  if (!v.empty() && v.front() == '[') {
    require(v.back() == ']', "unterminated TOML array");
    json arr = json::array();
    std::string body = v.substr(1, v.size() - 2), cur;
    bool q = false;
    for (char c : body) {
      if (c == '"') q = !q;
      if (c == ',' && !q) {
        if (!trim(cur).empty()) arr.push_back(toml_scalar(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!trim(cur).empty()) arr.push_back(toml_scalar(cur));
    return arr;
  }
  return toml_scalar(v);
}

}  // namespace detail

/**
 * @brief reads the TOML subset used by sweep specs: key = value pairs, [table] headers,
 * strings, numbers, booleans and (possibly multi-line) arrays of scalars.
 */
inline json parse_toml(const std::string& text) {
  json root = json::object();
  json* table = &root;
  std::istringstream in(text);
  std::string line, pending;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::string s = detail::trim(detail::strip_comment(line));
    if (!pending.empty()) {
      pending += ' ' + s;
      if (s.find(']') == std::string::npos) continue;
      s = pending;
      pending.clear();
    }
    if (s.empty()) continue;
    if (s.front() == '[' && s.find('=') == std::string::npos) {
      require(s.back() == ']', "bad TOML table header at line " + std::to_string(no));
      std::string name = detail::trim(s.substr(1, s.size() - 2));
      table = &root[name];
      if (table->is_null()) *table = json::object();
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ParameterError("TOML line " + std::to_string(no) + " has no '='");
    std::string key = detail::trim(s.substr(0, eq)), val = detail::trim(s.substr(eq + 1));
    if (!val.empty() && val.front() == '[' && val.find(']') == std::string::npos) {
      pending = s;
      continue;
    }
    try {
      (*table)[key] = detail::toml_value(val);
    } catch (const std::exception& e) {
      throw ParameterError("TOML line " + std::to_string(no) + ": " + e.what());
    }
  }
  require(pending.empty(), "unterminated TOML array at end of input");
  return root;
}

inline SweepSpec spec_from_json(const json& j0) {
  const json& j = j0.contains("sweep") ? j0.at("sweep") : j0;
  SweepSpec s;
  if (j.contains("sigma")) s.sigma = detail::number_list(j.at("sigma"));
  if (j.contains("alpha")) s.alpha = detail::number_list(j.at("alpha"));
  if (j.contains("A")) s.A = detail::number_list(j.at("A"));
  s.L = j.value("L", s.L);
  s.Lp = j.value("Lp", s.Lp);
  s.nx = j.value("nx", s.nx);
  s.ny = j.value("ny", s.ny);
  std::string kind = j.value("kind", std::string("test"));
  require(kind == "test" || kind == "test-solution-only" || kind == "minimize",
          "kind must be test-solution-only or minimize");
  s.kind = kind == "minimize" ? SolutionKind::minimize : SolutionKind::test;
  s.variant = crossover_variant_from_string(j.value("variant", std::string("matched")));
  s.max_iterations = j.value("max_iterations", s.max_iterations);
  s.grad_tol = j.value("grad_tol", s.grad_tol);
  s.workers = j.value("workers", s.workers);
  s.record_wall_time = j.value("record_wall_time", s.record_wall_time);
  s.fit_lo = j.value("fit_lo", s.fit_lo);
  s.fit_hi = j.value("fit_hi", s.fit_hi);
  s.rows_file = j.value("rows_file", s.rows_file);
  s.fits_file = j.value("fits_file", s.fits_file);
  s.plots_dir = j.value("plots_dir", s.plots_dir);
  s.validate();
  return s;
}

/** @brief JSON by default; TOML when the path ends in .toml */
inline SweepSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  bool toml = path.size() >= 5 && path.substr(path.size() - 5) == ".toml";
  return spec_from_json(toml ? parse_toml(ss.str()) : json::parse(ss.str()));
}

// ---------------------------------------------------------------- rows

struct ExperimentRow {
  double sigma = 0, alpha = 0, A = 0, eps = 0, h = 0;
  std::array<double, 6> terms{};
  double total = 0, Eb = 0, Es = 0;
  double wall_ms = 0;
  /** @brief unscaled total, energy of the initialization, stretch lower bound */
  double unscaled = 0, init_total = 0, es_bound = 0;
  /** @brief fitted rho-shape constants rho <= C1 (1-X^2)^{2/5} + C1p A */
  double C1 = 0, C1p = 0;
  /** @brief max over columns of the tightest sag ratio W(X,0)^2 / branch */
  double sag = 0;
  int iterations = 0;
  bool converged = true;
  std::string error;

  bool ok() const { return error.empty(); }

  double value(const std::string& name) const {
    static const char* names[6] = {"e_xx", "e_xy", "e_yy", "b_yy", "b_xy", "b_xx"};
    for (int k = 0; k < 6; ++k)
      if (name == names[k]) return terms[k];
    if (name == "sigma") return sigma;
    if (name == "alpha") return alpha;
    if (name == "A") return A;
    if (name == "eps") return eps;
    if (name == "h") return h;
    if (name == "total") return total;
    if (name == "Eb") return Eb;
    if (name == "Es") return Es;
    if (name == "unscaled") return unscaled;
    if (name == "init_total") return init_total;
    if (name == "es_bound") return es_bound;
    if (name == "C1") return C1;
    if (name == "C1p") return C1p;
    if (name == "sag") return sag;
    if (name == "wall_ms") return wall_ms;
    throw ParameterError("unknown row field " + name);
  }
};

/** @brief physical parameters of one sweep tuple: a = A L_y */
inline PhysicalParams tuple_params(const SweepSpec& s, double sigma, double alpha, double A) {
  PhysicalParams p;
  p.L = s.L;
  p.alpha = alpha;
  p.sigma = sigma;
  p.a = 1.0;
  p.a = A * p.Ly();
  p.Lp = s.Lp > 0 ? s.Lp : 1.0;
  p.validate();
  return p;
}

/** @brief builds (and optionally minimizes) one configuration; throws on failure */
inline ExperimentRow run_tuple(const SweepSpec& s, const NoStretchProfile& profile, double sigma, double alpha,
                               double A) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentRow r;
  r.sigma = sigma;
  r.alpha = alpha;
  r.A = A;
  PhysicalParams p = tuple_params(s, sigma, alpha, A);
  r.eps = p.eps();
  CrossoverSpec cs{A, r.eps, s.variant};
  Grid2 g = self_similar_grid(profile, cs, s.nx, s.ny);
  if (s.Lp > 0) g.ymax = std::max(g.ymax, s.Lp / p.Ly());
  r.h = g.hx();
  ScaledFields f = self_similar_fields(profile, cs, g);
  EnergyBreakdown E = energy_scaled(f);
  r.init_total = E.total;
  if (s.kind == SolutionKind::minimize) {
    MinimizeOptions o;
    o.max_iterations = s.max_iterations;
    o.grad_tol = s.grad_tol;
    MinimizeResult m = minimize(f, o);
    f = std::move(m.fields);
    E = m.energy;
    r.iterations = m.iterations;
    r.converged = m.converged;
  }
  for (int k = 0; k < 6; ++k) r.terms[k] = E.contribution(k);
  r.total = E.total;
  r.unscaled = E.total * p.energy_factor();
  EnergySplit S = bending_stretching_split(f);
  r.Eb = S.E_b;
  r.Es = S.E_s;
  r.es_bound = stretch_lower_bound(f, A);
  PointwiseReport pw = pointwise_bounds_check(ridge_geometry(f), A, inf, inf);
  r.C1 = pw.C1;
  r.C1p = pw.C1p;
  r.sag = pw.sag_common;
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/** @brief all tuples in spec order (sigma outer, A inner); rows are independent and run on a worker pool */
inline std::vector<ExperimentRow> sweep(const SweepSpec& s, const NoStretchProfile& profile) {
  s.validate();
  std::vector<std::array<double, 3>> tuples;
  for (double sg : s.sigma)
    for (double al : s.alpha)
      for (double a : s.A) tuples.push_back({sg, al, a});
  std::vector<ExperimentRow> rows(tuples.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next++) < tuples.size();) {
      auto [sg, al, a] = tuples[k];
      try {
        rows[k] = run_tuple(s, profile, sg, al, a);
      } catch (const std::exception& e) {
        ExperimentRow r;
        r.sigma = sg, r.alpha = al, r.A = a;
        r.error = e.what();
        r.converged = false;
        rows[k] = r;
      }
    }
  };
  std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(s.workers), tuples.size());
  if (nw <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nw; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

// ---------------------------------------------------------------- output

inline const char* csv_header() {
  return "sigma,alpha,A,eps,h,e_xx,e_xy,e_yy,b_yy,b_xy,b_xx,total,Eb,Es,wall_ms";
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/** @brief wall_ms is NA unless recorded, so identical runs give identical bytes; failed rows carry NA values */
inline void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, bool wall_time) {
  out << csv_header() << '\n';
  for (const auto& r : rows) {
    auto v = [&](double x) { return r.ok() ? format_number(x) : std::string("NA"); };
    out << format_number(r.sigma) << ',' << format_number(r.alpha) << ',' << format_number(r.A) << ','
        << v(r.eps) << ',' << v(r.h);
    for (double t : r.terms) out << ',' << v(t);
    out << ',' << v(r.total) << ',' << v(r.Eb) << ',' << v(r.Es) << ','
        << (wall_time && r.ok() ? format_number(r.wall_ms) : std::string("NA")) << '\n';
  }
}

struct FitResult {
  double slope = 0, intercept = 0, r2 = 0;
  std::size_t n = 0;
};

/**
 * @brief least-squares fit of log y against log x over rows with x in [lo, hi].
 * Needs at least 4 points; nonpositive values are a DomainError.
 */
inline FitResult fit_exponent(const std::vector<ExperimentRow>& table, const std::string& x, const std::string& y,
                              std::pair<double, double> window = {0.0, inf}) {
  std::vector<double> lx, ly;
  for (const auto& r : table) {
    if (!r.ok()) continue;
    double xv = r.value(x), yv = r.value(y);
    if (xv < window.first || xv > window.second) continue;
    if (!(xv > 0) || !(yv > 0)) throw DomainError("fit_exponent needs positive " + x + " and " + y);
    lx.push_back(std::log(xv));
    ly.push_back(std::log(yv));
  }
  if (lx.size() < 4) throw ParameterError("fit_exponent needs at least 4 points");
  double n = static_cast<double>(lx.size()), mx = 0, my = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) mx += lx[k] / n, my += ly[k] / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
    syy += (ly[k] - my) * (ly[k] - my);
  }
  require(sxx > 0, "fit_exponent needs distinct x values");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  f.n = lx.size();
  return f;
}

/** @brief one acceptance fit over a group of rows sharing the other two parameters */
struct SweepFit {
  std::string name, x;
  double fixed_a = 0, fixed_b = 0;
  FitResult fit;
  double lo = 0, hi = 0, min_r2 = 0;
  bool pass = false;
  std::string error;
};

struct SweepSummary {
  std::vector<SweepFit> fits;
  std::size_t failed_rows = 0, sandwich_violations = 0;
  bool pass = true;
};

inline json to_json(const FitResult& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"n", f.n}};
}

/**
 * @brief sigma slopes of the unscaled energy per (alpha, A) group and alpha slopes per (sigma, A)
 * group, wherever a group has at least 4 rows; plus the stretch sandwich on every row.
 */
inline SweepSummary summarize(const SweepSpec& s, const std::vector<ExperimentRow>& rows) {
  SweepSummary out;
  auto group = [&](const std::string& x, auto key_a, auto key_b, double lo, double hi, double r2min,
                   const std::string& name) {
    std::map<std::pair<double, double>, std::vector<ExperimentRow>> groups;
    for (const auto& r : rows) groups[{key_a(r), key_b(r)}].push_back(r);
    for (auto& [k, g] : groups) {
      std::size_t distinct = 0;
      std::vector<double> xs;
      for (const auto& r : g) xs.push_back(r.value(x));
      std::sort(xs.begin(), xs.end());
      distinct = static_cast<std::size_t>(std::unique(xs.begin(), xs.end()) - xs.begin());
      if (distinct < 4) continue;
      SweepFit f;
      f.name = name;
      f.x = x;
      f.fixed_a = k.first;
      f.fixed_b = k.second;
      f.lo = lo;
      f.hi = hi;
      f.min_r2 = r2min;
      try {
        f.fit = fit_exponent(g, x, "unscaled", {s.fit_lo, s.fit_hi});
        f.pass = f.fit.slope >= lo && f.fit.slope <= hi && f.fit.r2 > r2min;
      } catch (const std::exception& e) {
        f.error = e.what();
      }
      out.pass = out.pass && f.pass;
      out.fits.push_back(f);
    }
  };
  group("sigma", [](const ExperimentRow& r) { return r.alpha; }, [](const ExperimentRow& r) { return r.A; }, 1.55,
        1.80, 0.99, "sigma_exponent");
  group("alpha", [](const ExperimentRow& r) { return r.sigma; }, [](const ExperimentRow& r) { return r.A; },
        7.0 / 3.0 - 0.2, 7.0 / 3.0 + 0.2, 0.0, "alpha_exponent");
  for (const auto& r : rows) {
    if (!r.ok()) {
      ++out.failed_rows;
      continue;
    }
    double tol = 1e-9 * (1.0 + std::abs(r.total));
    if (!(r.es_bound <= r.Es + tol && r.Es <= r.total + tol)) ++out.sandwich_violations;
  }
  out.pass = out.pass && out.failed_rows == 0 && out.sandwich_violations == 0;
  return out;
}

inline json to_json(const SweepSummary& S, const std::vector<ExperimentRow>& rows) {
  json fits = json::array();
  for (const auto& f : S.fits) {
    json j = {{"name", f.name},   {"x", f.x},           {"y", "unscaled"}, {"fit", to_json(f.fit)},
              {"range", {f.lo, f.hi}}, {"min_r2", f.min_r2}, {"pass", f.pass}};
    if (f.x == "sigma") j["alpha"] = f.fixed_a, j["A"] = f.fixed_b;
    else j["sigma"] = f.fixed_a, j["A"] = f.fixed_b;
    if (!f.error.empty()) j["error"] = f.error;
    fits.push_back(j);
  }
  json detail = json::array();
  for (const auto& r : rows) {
    json j = {{"sigma", r.sigma}, {"alpha", r.alpha}, {"A", r.A}};
    if (r.ok()) {
      j["unscaled"] = r.unscaled;
      j["init_total"] = r.init_total;
      j["es_bound"] = r.es_bound;
      j["C1"] = r.C1;
      j["C1p"] = r.C1p;
      j["sag"] = r.sag;
      j["iterations"] = r.iterations;
      j["converged"] = r.converged;
    } else {
      j["error"] = r.error;
    }
    detail.push_back(j);
  }
  return {{"fits", fits},
          {"rows", detail},
          {"failed_rows", S.failed_rows},
          {"sandwich_violations", S.sandwich_violations},
          {"pass", S.pass}};
}

/** @brief whitespace-separated plot data, one block per series, plus a manifest describing each file */
inline void write_plots(const std::filesystem::path& dir, const std::vector<ExperimentRow>& rows) {
  std::filesystem::create_directories(dir);
  json manifest = json::array();
  auto emit = [&](const std::string& file, const std::string& x, const std::string& series) {
    std::ofstream out(dir / file);
    out << "# " << x << " unscaled total Eb Es " << series << '\n';
    std::map<double, std::vector<const ExperimentRow*>> by;
    for (const auto& r : rows)
      if (r.ok()) by[r.value(series)].push_back(&r);
    for (auto& [key, rs] : by) {
      std::stable_sort(rs.begin(), rs.end(),
                       [&](const ExperimentRow* a, const ExperimentRow* b) { return a->value(x) < b->value(x); });
      for (const auto* r : rs)
        out << format_number(r->value(x)) << ' ' << format_number(r->unscaled) << ' ' << format_number(r->total)
            << ' ' << format_number(r->Eb) << ' ' << format_number(r->Es) << ' ' << format_number(key) << '\n';
      out << "\n\n";
    }
    manifest.push_back({{"file", file},
                        {"x", x},
                        {"columns", {x, "unscaled", "total", "Eb", "Es", series}},
                        {"series", series},
                        {"logx", true},
                        {"logy", true}});
  };
  emit("energy_vs_sigma.dat", "sigma", "alpha");
  emit("energy_vs_alpha.dat", "alpha", "sigma");
  emit("energy_vs_A.dat", "A", "sigma");
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
}

/** @brief runs the sweep and writes every output under dir; returns the summary */
inline SweepSummary run_sweep(const SweepSpec& s, const NoStretchProfile& profile, const std::filesystem::path& dir) {
  std::vector<ExperimentRow> rows = sweep(s, profile);
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / s.rows_file);
    write_rows_csv(out, rows, s.record_wall_time);
  }
  SweepSummary S = summarize(s, rows);
  std::ofstream(dir / s.fits_file) << to_json(S, rows).dump(2) << '\n';
  write_plots(dir / s.plots_dir, rows);
  return S;
}

/** @brief defaults: 64 x 256, sigma decade [1e-4, 1e-3], alpha in {0.2, 0.3, 0.4}, A in {0.5, 1, 2} */
inline SweepSpec default_sweep_spec() {
  SweepSpec s;
  s.sigma = {1e-4, std::pow(10.0, -3.75), std::pow(10.0, -3.5), std::pow(10.0, -3.25), 1e-3};
  s.alpha = {0.2, 0.3, 0.4};
  s.A = {0.5, 1.0, 2.0};
  return s;
}

}  // namespace minridge
