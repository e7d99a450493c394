#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "rgbo/asymptotics.hpp"
#include "rgbo/error.hpp"
#include "rgbo/model.hpp"
#include "rgbo/solver.hpp"
#include "rgbo/stability.hpp"

namespace rgbo::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int schema_version = 1;

struct Options {
  std::string command;
  double beta = 2.0, gamma = 1.0, c = -1.0, p = 2.0;
  std::string kind = "quadratic";
  double L = 400.0;
  std::size_t N = 8192;
  double tol = 0.0;  // 0: command default
  int max_iter = 1000;
  double alpha = 0.0;  // 0: p / (p - 1)
  std::string init = "auto";
  std::string out = ".";
  int jobs = 1;
  bool svg = false;
  std::vector<std::string> c_values, gamma_values, p_values;
  double identity_tol = 1e-6, scaling_tol = 1e-3, scale_r = 1.5, scale_s = 0.7;
  double x_lo = 80.5, x_hi = 359.5, smoothing = 1.0;
  bool c_given = false, L_given = false, N_given = false, kind_given = false, p_values_given = false;
};

// Thrown for bad flag values; maps to exit 1 like precondition_error.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::vector<std::string>& items, const char* name) {
  std::vector<double> out;
  for (std::string item : items) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw usage_error(std::string("bad number '") + item + "' in --" + name);
    out.push_back(v);
  }
  return out;
}

Params make_params(const Options& o) {
  return Params::make(o.beta, o.c, o.gamma, o.p, parse_nonlinearity(o.kind));
}

SolveConfig make_config(const Options& o, const Params& params, double default_tol) {
  SolveConfig base;
  base.tol = o.tol > 0.0 ? o.tol : default_tol;
  base.max_iter = o.max_iter;
  if (o.alpha != 0.0) base.alpha = o.alpha;
  if (o.init == "auto") return suggested_config(params, base);
  if (o.init == "bo") {
    base.init = BOProfile{};
    base.mixing_start = 1e-2;
  } else if (o.init == "gaussian") {
    base.init = GaussianPulse{};
    base.mixing_start = 1e-2;
  } else if (o.init == "trial") {
    base.init = TrialProfile{};
  } else {
    throw usage_error("--init must be auto, bo, gaussian or trial");
  }
  return base;
}

std::string init_name(const InitialGuess& g) {
  if (std::holds_alternative<BOProfile>(g)) return "bo";
  if (std::holds_alternative<GaussianPulse>(g)) return "gaussian";
  if (std::holds_alternative<TrialProfile>(g)) return "trial";
  return "user";
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

json params_json(const Params& p) {
  return {{"beta", p.beta}, {"c", p.c}, {"gamma", p.gamma}, {"p", p.p}, {"kind", std::string(to_string(p.kind))},
          {"c_star", p.critical_speed()}};
}

json report_json(const FunctionalReport& r) {
  return {{"energy", r.energy},
          {"momentum", r.momentum},
          {"mass", r.mass},
          {"I", r.I},
          {"K", r.K},
          {"action", r.action},
          {"P", r.P},
          {"i_k_residual", r.i_k_residual()},
          {"integrals",
           {{"half_derivative_sq", r.integrals.half_derivative_sq},
            {"l2_sq", r.integrals.l2_sq},
            {"antiderivative_sq", r.integrals.antiderivative_sq},
            {"potential", r.integrals.potential}}},
          {"pohozaev",
           {{"r1", r.pohozaev.r1}, {"r2", r.pohozaev.r2}, {"r3", r.pohozaev.r3}, {"degenerate", r.pohozaev.degenerate}}}};
}

json record_json(const StabilityRecord& r) {
  return {{"beta", r.beta},
          {"c", r.c},
          {"gamma", r.gamma},
          {"d", r.d},
          {"d_from_K", r.d_from_K},
          {"d_beta", r.d_beta},
          {"d_c", r.d_c},
          {"d_gamma", r.d_gamma},
          {"m_variational", r.m_variational},
          {"consistency", r.consistency},
          {"final_residual", r.source_wave_residual},
          {"spectral_tail", r.spectral_tail},
          {"iterations", r.iterations},
          {"L", r.grid_meta.length},
          {"N", r.grid_meta.count}};
}

json sweep_json(const SweepResult& s) {
  json samples = json::array();
  for (const auto& r : s.samples) samples.push_back(record_json(r));
  json dcc = json::array();
  for (auto [x, v] : s.d_cc) dcc.push_back({x, v});
  return {{"axis", s.axis == SweepAxis::speed_at_fixed_gamma ? "speed" : "gamma"},
          {"p", s.p},
          {"kind", std::string(to_string(s.kind))},
          {"samples", samples},
          {"d_cc", dcc},
          {"sign_changes_over_cstar", numbers(s.sign_changes)}};
}

// Writes `text` to dir/name, creating dir.
void write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  fs::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw usage_error("cannot write " + (dir / name).string());
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      if (!first) text_ += ',';
      text_ += h;
      first = false;
    }
    text_ += '\n';
  }
  Csv& row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) text_ += ',';
      text_ += c;
      first = false;
    }
    text_ += '\n';
    return *this;
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

std::string num(double v) { return format_number(v); }
std::string num(long long v) { return std::to_string(v); }

struct Series {
  std::string label;
  std::vector<double> x, y;
};

// Line plot on a 640 x 400 canvas; fixed formatting keeps the file byte-stable.
std::string render_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  const double W = 640, H = 400, left = 70, right = 150, top = 40, bottom = 50;
  auto X = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (W - left - right); };
  auto Y = [&](double y) { return H - bottom - (y - ymin) / (ymax - ymin) * (H - top - bottom); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

  std::ostringstream o;
  char buf[128];
  auto f = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << f(W / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  o << "<rect x=\"" << f(left) << "\" y=\"" << f(top) << "\" width=\"" << f(W - left - right) << "\" height=\""
    << f(H - top - bottom) << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (ymin < 0 && ymax > 0)
    o << "<line x1=\"" << f(left) << "\" y1=\"" << f(Y(0)) << "\" x2=\"" << f(W - right) << "\" y2=\"" << f(Y(0))
      << "\" stroke=\"#999\" stroke-dasharray=\"4\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + k * (xmax - xmin) / 4, yv = ymin + k * (ymax - ymin) / 4;
    std::snprintf(buf, sizeof buf, "%.3g", xv);
    o << "<text x=\"" << f(X(xv)) << "\" y=\"" << f(H - bottom + 16) << "\" text-anchor=\"middle\" font-size=\"11\">"
      << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.3g", yv);
    o << "<text x=\"" << f(left - 6) << "\" y=\"" << f(Y(yv) + 4) << "\" text-anchor=\"end\" font-size=\"11\">" << buf
      << "</text>\n";
  }
  o << "<text x=\"" << f(left + (W - left - right) / 2) << "\" y=\"" << f(H - 10)
    << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
  o << "<text x=\"14\" y=\"" << f(top + (H - top - bottom) / 2) << "\" font-size=\"12\" transform=\"rotate(-90 14 "
    << f(top + (H - top - bottom) / 2) << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* col = colors[k % 7];
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) o << (i ? " " : "") << f(X(s.x[i])) << "," << f(Y(s.y[i]));
    o << "\"/>\n";
    const double ly = top + 14 + 16 * k;
    o << "<line x1=\"" << f(W - right + 10) << "\" y1=\"" << f(ly) << "\" x2=\"" << f(W - right + 30) << "\" y2=\""
      << f(ly) << "\" stroke=\"" << col << "\"/>\n";
    o << "<text x=\"" << f(W - right + 34) << "\" y=\"" << f(ly + 4) << "\" font-size=\"11\">" << s.label
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

Series window(const std::string& label, const RealField& u, double half_width) {
  Series s{label, {}, {}};
  auto x = u.grid().points();
  for (std::size_t j = 0; j < u.size(); ++j)
    if (std::abs(x[j]) <= half_width) {
      s.x.push_back(x[j]);
      s.y.push_back(u[j]);
    }
  return s;
}

GridPolicy make_policy(const Options& o) {
  GridPolicy policy;
  if (o.L_given) policy.length = o.L;
  if (o.N_given) {
    policy.count = o.N;
    policy.near_count = std::max(policy.near_count, o.N);
  }
  return policy;
}

int cmd_solve(const Options& o, std::ostream& out) {
  const Params params = make_params(o);
  const Grid grid = Grid::make(o.L, o.N);
  const SolveConfig cfg = make_config(o, params, 1e-12);
  json j;
  j["schema_version"] = schema_version;
  j["command"] = "solve";
  j["params"] = params_json(params);
  j["grid"] = {{"L", grid.length()}, {"N", grid.size()}};
  j["config"] = {{"tol", cfg.tol},
                 {"max_iter", cfg.max_iter},
                 {"alpha", cfg.alpha_for(params)},
                 {"init", init_name(cfg.init)},
                 {"mixing_depth", cfg.mixing_depth},
                 {"mixing_start", number(cfg.mixing_start)}};
  SolitaryWave wave = [&] {
    try {
      return solve(params, grid, cfg);
    } catch (const convergence_error& e) {
      j["status"] = "not_converged";
      j["error"] = e.what();
      j["residual_history"] = numbers(e.residual_history());
      write_file(o.out, "solve.json", dump(j));
      throw;
    }
  }();

  const RealField dx_inv = antiderivative(wave.phi, 1);
  Csv csv({"x", "phi", "psi", "dx_inv_phi"});
  auto x = grid.points();
  for (std::size_t i = 0; i < grid.size(); ++i) csv.row({num(x[i]), num(wave.phi[i]), num(wave.psi[i]), num(dx_inv[i])});

  j["status"] = "converged";
  j["iterations"] = wave.iterations;
  j["final_residual"] = wave.final_residual;
  j["m_final"] = wave.m_history.empty() ? 0.0 : wave.m_history.back();
  j["m_history"] = numbers(wave.m_history);
  j["residual_history"] = numbers(wave.residual_history);
  j["functionals"] = report_json(wave.report);
  j["sign_changes_right_half"] = sign_changes_right_half(wave.phi);
  j["spectral_tail"] = spectral_tail(wave.phi);

  write_file(o.out, "profile.csv", csv.str());
  write_file(o.out, "solve.json", dump(j));
  if (o.svg) {
    const double hw = std::min(grid.length() / 2, 40.0);
    write_file(o.out, "profile.svg",
               render_svg("solitary wave, " + describe(params), "x", "phi",
                          {window("c = " + format_number(params.c), wave.phi, hw)}));
  }
  out << "converged in " << wave.iterations << " iterations, residual " << format_number(wave.final_residual) << "\n";
  return ok;
}

void write_sweep_csv(const Options& o, const std::string& name, const SweepResult& s) {
  const bool speed = s.axis == SweepAxis::speed_at_fixed_gamma;
  Csv csv({speed ? "c" : "gamma", speed ? "c_over_cstar" : "mapped_c_over_cstar", "d", "d_from_K", "d_c", "d_gamma",
           "d_cc", "iterations", "final_residual", "N"});
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    const auto& r = s.samples[i];
    csv.row({num(speed ? r.c : r.gamma), num(s.d_cc[i].first), num(r.d), num(r.d_from_K), num(r.d_c), num(r.d_gamma),
             num(s.d_cc[i].second), num(static_cast<long long>(r.iterations)), num(r.source_wave_residual),
             num(static_cast<long long>(r.grid_meta.count))});
  }
  write_file(o.out, name, csv.str());
}

int cmd_sweep(const Options& o, std::ostream& out, bool speed) {
  const Nonlinearity kind = parse_nonlinearity(o.kind);
  const GridPolicy policy = make_policy(o);
  SolveConfig cfg = sweep_config();
  if (o.tol > 0.0) cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  if (o.alpha != 0.0) cfg.alpha = o.alpha;

  std::vector<double> mesh;
  if (speed) {
    mesh = o.c_values.empty() ? default_s1_mesh() : parse_list(o.c_values, "c-values");
  } else {
    mesh = o.gamma_values.empty() ? default_s2_mesh() : parse_list(o.gamma_values, "gamma-values");
  }
  const SweepResult s = speed ? sweep_S1(o.p, kind, mesh, policy, cfg, o.jobs) : sweep_S2(o.p, kind, mesh, policy, cfg, o.jobs);

  json j;
  j["schema_version"] = schema_version;
  j["command"] = speed ? "sweep-c" : "sweep-gamma";
  j["sweep"] = sweep_json(s);
  j["monotonicity_violations"] = monotonicity_violations(s);
  if (speed && std::find(mesh.begin(), mesh.end(), 0.0) != mesh.end())
    j["lemma_bound_violations"] = lemma_bound_violations(s);
  write_sweep_csv(o, speed ? "sweep_c.csv" : "sweep_gamma.csv", s);
  write_file(o.out, speed ? "sweep_c.json" : "sweep_gamma.json", dump(j));
  out << s.samples.size() << " samples, d_cc sign changes at";
  for (double x : s.sign_changes) out << " " << format_number(x);
  out << " (units of c_*)\n";
  return ok;
}

std::vector<double> default_p_mesh(Nonlinearity kind) {
  const int top = kind == Nonlinearity::even ? 10 : 15;
  std::vector<double> out;
  for (int i = 0; i <= top; ++i) out.push_back(2.0 + 0.2 * i);
  return out;
}

int cmd_table(const Options& o, std::ostream& out, std::ostream& err) {
  const Nonlinearity kind = parse_nonlinearity(o.kind);
  if (kind != Nonlinearity::even && kind != Nonlinearity::odd_focusing_sign)
    throw usage_error("table needs --kind even or --kind odd");
  const std::vector<double> ps = o.p_values_given ? parse_list(o.p_values, "p-values") : default_p_mesh(kind);
  if (ps.empty()) throw usage_error("p mesh is empty");

  TableMeshes meshes;
  if (!o.c_values.empty()) meshes.c_values = parse_list(o.c_values, "c-values");
  if (!o.gamma_values.empty()) meshes.gamma_values = parse_list(o.gamma_values, "gamma-values");
  SolveConfig cfg = sweep_config();
  if (o.tol > 0.0) cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  const auto rows = sign_table(kind, ps, meshes, make_policy(o), cfg, o.jobs);

  Csv csv({"p", "interval_start_over_cstar", "interval_end_over_cstar", "status"});
  json jrows = json::array();
  bool any_failed = false;
  for (const auto& r : rows) {
    if (r.failed) {
      any_failed = true;
      csv.row({num(r.p), "", "", "failed"});
      err << "p = " << format_number(r.p) << " failed: " << r.error << "\n";
    } else if (r.intervals.empty()) {
      csv.row({num(r.p), "", "", "empty"});
    } else {
      for (auto [a, b] : r.intervals) csv.row({num(r.p), num(a), num(b), "ok"});
    }
    json iv = json::array();
    for (auto [a, b] : r.intervals) iv.push_back({number(a), number(b)});
    json row = {{"p", r.p}, {"status", r.failed ? "failed" : r.intervals.empty() ? "empty" : "ok"}, {"intervals", iv}};
    if (r.failed) {
      row["error"] = r.error;
    } else {
      row["overlap_d_cc"] = {{"speed_sweep", r.overlap_s1}, {"gamma_sweep", r.overlap_s2}};
      row["speed_sweep"] = sweep_json(r.s1);
      row["gamma_sweep"] = sweep_json(r.s2);
    }
    jrows.push_back(row);
    out << "p = " << format_number(r.p) << ":";
    if (r.failed) out << " failed";
    else if (r.intervals.empty()) out << " empty";
    for (auto [a, b] : r.intervals) out << " (" << format_number(a) << ", " << format_number(b) << ")";
    out << "\n";
  }
  json j;
  j["schema_version"] = schema_version;
  j["command"] = "table";
  j["kind"] = std::string(to_string(kind));
  j["rows"] = jrows;
  write_file(o.out, "table.csv", csv.str());
  write_file(o.out, "table.json", dump(j));
  return any_failed ? no_convergence : ok;
}

int cmd_limit(const Options& o, std::ostream& out) {
  const double c = o.c_given ? o.c : -3.0;
  const std::vector<double> gammas =
      o.gamma_values.empty() ? std::vector<double>{1, 0.1, 0.01, 1e-3, 1e-4, 1e-5} : parse_list(o.gamma_values, "gamma-values");
  if (gammas.empty()) throw usage_error("gamma mesh is empty");
  const Grid grid = Grid::make(o.L, o.N);
  const Params first = Params::make(o.beta, c, gammas.front(), 2.0, Nonlinearity::quadratic);
  const SolveConfig cfg = make_config(o, first, 1e-10);
  std::vector<RealField> profiles;
  const auto recs = weak_rotation_sweep(o.beta, c, gammas, grid, cfg, o.svg ? &profiles : nullptr);

  Csv csv({"gamma", "l2_error", "h_half_error", "gamma_d_gamma"});
  json jr = json::array();
  for (const auto& r : recs) {
    csv.row({num(r.gamma), num(r.l2_error), num(r.h_half_error), num(r.gamma_d_gamma)});
    jr.push_back({{"gamma", r.gamma},
                  {"l2_error", r.l2_error},
                  {"h_half_error", r.h_half_error},
                  {"gamma_d_gamma", r.gamma_d_gamma},
                  {"l2_error_vs_u2_over_2_soliton", r.bo_l2_error},
                  {"shift", r.shift},
                  {"iterations", r.iterations},
                  {"final_residual", r.final_residual}});
  }
  json j;
  j["schema_version"] = schema_version;
  j["command"] = "limit";
  j["beta"] = o.beta;
  j["c"] = c;
  j["grid"] = {{"L", grid.length()}, {"N", grid.size()}};
  j["reference"] = "zero-mean projection of 2 c beta^2 / (beta^2 + c^2 x^2)";
  j["records"] = jr;
  write_file(o.out, "limit.csv", csv.str());
  write_file(o.out, "limit.json", dump(j));
  if (o.svg) {
    std::vector<Series> series;
    const double hw = std::min(grid.length() / 2, 6.0 * o.beta / std::abs(c));
    for (std::size_t i = 0; i < recs.size(); ++i)
      series.push_back(window("gamma = " + format_number(recs[i].gamma), profiles[i], hw));
    series.push_back(window("gamma = 0", limit_soliton(o.beta, c, grid).minus_mean(), hw));
    write_file(o.out, "limit.svg", render_svg("weak rotation limit, c = " + format_number(c), "x", "phi", series));
  }
  for (const auto& r : recs)
    out << "gamma = " << format_number(r.gamma) << ": l2_error " << format_number(r.l2_error) << "\n";
  return ok;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const Params params = make_params(o);
  if (const auto v = nonexistence(params); v.excluded()) throw precondition_error(v.describe());
  const Grid grid = Grid::make(o.L, o.N);
  const SolveConfig cfg = make_config(o, params, 1e-12);
  const SolitaryWave wave = solve(params, grid, cfg);
  const StabilityRecord rec = stability_point(params, grid, cfg);

  const Params scaled =
      params.with(o.scale_r * params.beta, o.scale_r * params.c / o.scale_s,
                  o.scale_r * params.gamma / (o.scale_s * o.scale_s * o.scale_s));
  const StabilityRecord srec = stability_point(scaled, grid, make_config(o, scaled, 1e-12));
  const double predicted = scale_d(rec, o.scale_r, o.scale_s);
  const double scaling = std::abs(srec.d - predicted) / std::abs(srec.d);

  const auto& r = wave.report;
  struct Check {
    const char* name;
    double value, tol;
  };
  const std::vector<Check> checks = {{"pohozaev_r1", r.pohozaev.r1, o.identity_tol},
                                     {"pohozaev_r2", r.pohozaev.r2, o.identity_tol},
                                     {"pohozaev_r3", r.pohozaev.r3, o.identity_tol},
                                     {"i_equals_k", r.i_k_residual(), o.identity_tol},
                                     {"d_consistency", rec.consistency, o.identity_tol},
                                     {"scaling_closure", scaling, o.scaling_tol}};
  json jc = json::object();
  bool pass = true;
  for (const auto& c : checks) {
    const bool okc = std::abs(c.value) <= c.tol;
    pass = pass && okc;
    jc[c.name] = {{"value", c.value}, {"tolerance", c.tol}, {"pass", okc}};
    out << c.name << " " << format_number(c.value) << (okc ? " ok" : " VIOLATED") << "\n";
    if (!okc) err << "identity violated: " << c.name << " = " << format_number(c.value) << " > " << c.tol << "\n";
  }
  json j;
  j["schema_version"] = schema_version;
  j["command"] = "verify";
  j["params"] = params_json(params);
  j["grid"] = {{"L", grid.length()}, {"N", grid.size()}};
  j["iterations"] = wave.iterations;
  j["final_residual"] = wave.final_residual;
  j["spectral_tail"] = spectral_tail(wave.phi);
  j["scaled_point"] = {{"r", o.scale_r}, {"s", o.scale_s}, {"params", params_json(scaled)}, {"d", srec.d},
                       {"predicted_d", predicted}};
  j["checks"] = jc;
  j["pass"] = pass;
  write_file(o.out, "verify.json", dump(j));
  return pass ? ok : identity_violation;
}

int cmd_kernel(const Options& o, std::ostream& out) {
  KernelTailOptions opt;
  if (o.L_given) opt.length = o.L;
  if (o.N_given) opt.count = o.N;
  opt.smoothing = o.smoothing;
  const TailFit fit = kernel_tail(o.beta, o.c, o.gamma, o.x_lo, o.x_hi, opt);
  const Grid grid = Grid::make(opt.length, opt.count);
  const RealField h = kernel(o.beta, o.c, o.gamma, grid, opt.smoothing);

  Csv csv({"x", "h"});
  auto x = grid.points();
  for (std::size_t i = 0; i < grid.size(); ++i) csv.row({num(x[i]), num(h[i])});
  json j;
  j["schema_version"] = schema_version;
  j["command"] = "kernel";
  j["beta"] = o.beta;
  j["c"] = o.c;
  j["gamma"] = o.gamma;
  j["grid"] = {{"L", grid.length()}, {"N", grid.size()}, {"smoothing", opt.smoothing}};
  j["window"] = {o.x_lo, o.x_hi};
  j["fit"] = {{"exponent", fit.exponent},
              {"constant", fit.constant},
              {"prefactor", fit.prefactor},
              {"samples", fit.samples},
              {"envelope", fit.envelope}};
  j["constant_limit"] = kernel_tail_constant(o.beta, o.gamma);
  j["beta_over_gamma_sq"] = o.beta / (o.gamma * o.gamma);
  write_file(o.out, "kernel.csv", csv.str());
  write_file(o.out, "kernel.json", dump(j));
  out << "tail exponent " << format_number(fit.exponent) << ", |x|^6 |h| " << format_number(fit.constant) << "\n";
  return ok;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Solitary waves of the rotation-generalized Benjamin-Ono equation", "rgbo"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value campaign file; flags override it");
  app.add_option("--beta", o.beta, "dispersion coefficient");
  app.add_option("--gamma", o.gamma, "rotation coefficient");
  auto* c_opt = app.add_option("--c", o.c, "wave speed");
  app.add_option("--p", o.p, "degree of the nonlinearity");
  auto* kind_opt = app.add_option("--kind", o.kind, "quadratic | even | odd | odd-plain");
  auto* L_opt = app.add_option("--L", o.L, "domain length");
  auto* N_opt = app.add_option("--N", o.N, "grid points (even)");
  app.add_option("--tol", o.tol, "residual tolerance");
  app.add_option("--max-iter", o.max_iter, "iteration cap");
  app.add_option("--alpha", o.alpha, "stabilizer exponent, default p/(p-1)");
  app.add_option("--init", o.init, "auto | bo | gaussian | trial");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--jobs", o.jobs, "threads for sweep points")->check(CLI::PositiveNumber);
  app.add_flag("--svg", o.svg, "also write an SVG plot (solve, limit)");
  app.add_option("--c-values", o.c_values, "comma-separated speeds")->delimiter(',');
  app.add_option("--gamma-values", o.gamma_values, "comma-separated rotation coefficients")->delimiter(',');
  auto* p_values_opt = app.add_option("--p-values", o.p_values, "comma-separated degrees (table)")->delimiter(',');
  app.add_option("--identity-tol", o.identity_tol, "verify: identity tolerance");
  app.add_option("--scaling-tol", o.scaling_tol, "verify: scaling-closure tolerance");
  app.add_option("--scale-r", o.scale_r, "verify: scaling factor r");
  app.add_option("--scale-s", o.scale_s, "verify: scaling factor s");
  app.add_option("--x-lo", o.x_lo, "kernel: fit window start");
  app.add_option("--x-hi", o.x_hi, "kernel: fit window end");
  app.add_option("--smoothing", o.smoothing, "kernel: mollifier width");
  for (const char* name : {"solve", "sweep-c", "sweep-gamma", "table", "limit", "verify", "kernel"})
    app.add_subcommand(name)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return usage;
  }
  o.command = app.get_subcommands().front()->get_name();
  o.c_given = c_opt->count() > 0;
  o.kind_given = kind_opt->count() > 0;
  o.L_given = L_opt->count() > 0;
  o.N_given = N_opt->count() > 0;
  o.p_values_given = p_values_opt->count() > 0;
  if (o.command == "table" && !o.kind_given) o.kind = "even";

  try {
    if (o.command == "solve") return cmd_solve(o, out);
    if (o.command == "sweep-c") return cmd_sweep(o, out, true);
    if (o.command == "sweep-gamma") return cmd_sweep(o, out, false);
    if (o.command == "table") return cmd_table(o, out, err);
    if (o.command == "limit") return cmd_limit(o, out);
    if (o.command == "verify") return cmd_verify(o, out, err);
    return cmd_kernel(o, out);
  } catch (const precondition_error& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const usage_error& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const convergence_error& e) {
    err << "not converged: " << e.what() << "\n";
    return no_convergence;
  } catch (const degenerate_iterate& e) {
    err << "not converged: " << e.what() << "\n";
    return no_convergence;
  }
}

}  // namespace rgbo::cli
