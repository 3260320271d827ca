// so21osc command-line front end. Exit codes: 0 ok, 2 config error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "so21osc/cyclic.hpp"
#include "so21osc/io.hpp"
#include "so21osc/model.hpp"
#include "so21osc/oracles.hpp"
#include "so21osc/propagate.hpp"
#include "so21osc/wavepacket.hpp"

using json = nlohmann::ordered_json;
using namespace so21;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a scan or verify check fails without an exception from the library.
struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::optional<std::string> config, profile, out, source, moments;
  std::optional<double> tmax, e0_xi, e0_phi, tol, u0, tau_min, tau_max, lambda_min, lambda_max,
      step_bound, action, xbar, pbar;
  std::optional<long> nodes, tau_steps, steps, samples, threads;
};

// --- config plumbing

template <class T>
void from_config(const json& j, const char* key, std::optional<T>& dst) {
  if (dst || !j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

void merge_config(Settings& s) {
  if (!s.config) return;
  std::ifstream in(*s.config);
  if (!in) throw ConfigError("cannot open config " + *s.config);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!s.profile && j.contains("profile")) {
    const json& p = j["profile"];
    if (p.is_string()) {
      s.profile = p.get<std::string>();
    } else if (p.is_object()) {
      std::string str;
      for (auto& [k, v] : p.items()) {
        str += (str.empty() ? "" : ",") + k + "=";
        str += v.is_string() ? v.get<std::string>() : v.dump();
      }
      s.profile = str;
    } else {
      throw ConfigError("config field 'profile' must be a string or an object");
    }
  }
  from_config(j, "out", s.out);
  from_config(j, "source", s.source);
  from_config(j, "moments", s.moments);
  from_config(j, "tmax", s.tmax);
  from_config(j, "e0_xi", s.e0_xi);
  from_config(j, "e0_phi", s.e0_phi);
  from_config(j, "tol", s.tol);
  from_config(j, "u0", s.u0);
  from_config(j, "tau_min", s.tau_min);
  from_config(j, "tau_max", s.tau_max);
  from_config(j, "lambda_min", s.lambda_min);
  from_config(j, "lambda_max", s.lambda_max);
  from_config(j, "step_bound", s.step_bound);
  from_config(j, "action", s.action);
  from_config(j, "xbar", s.xbar);
  from_config(j, "pbar", s.pbar);
  from_config(j, "nodes", s.nodes);
  from_config(j, "tau_steps", s.tau_steps);
  from_config(j, "steps", s.steps);
  from_config(j, "samples", s.samples);
  from_config(j, "threads", s.threads);
}

double parse_number(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || used == 0) throw ConfigError("profile field '" + key + "' is not a number: " + v);
  return x;
}

// "family=B,n1=0.75,n3=1.25,lambda=0.2[,n2=..][,rate=..]"
FamilySpec parse_family(const std::string& text) {
  FamilySpec f;
  bool have_family = false;
  double rate = 1.0;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("profile item without '=': " + item);
    std::string k = item.substr(0, eq), v = item.substr(eq + 1);
    if (k == "family") {
      try {
        f.family = family_from_string(v);
      } catch (const Error&) {
        throw ConfigError("unknown family '" + v + "'");
      }
      have_family = true;
    } else if (k == "n1") {
      f.n1 = parse_number(k, v);
    } else if (k == "n2") {
      f.n2 = parse_number(k, v);
    } else if (k == "n3") {
      f.n3 = parse_number(k, v);
    } else if (k == "lambda") {
      f.lambda = parse_number(k, v);
    } else if (k == "rate") {
      rate = parse_number(k, v);
    } else {
      throw ConfigError("unknown profile field '" + k + "'");
    }
  }
  if (!have_family) throw ConfigError("profile string needs family=A|B|C|D");
  if (!(rate != 0.0) || !std::isfinite(rate)) throw ConfigError("rate must be finite and nonzero");
  f.phase = PhaseFn::linear(rate);
  return f;
}

struct Resolved {
  Profile profile;
  std::optional<FamilySpec> family;
  double t_max;
  std::size_t nodes;
  Vec3 e0;
  double tol;
  IntegrateOptions opts;
};

std::optional<FamilySpec> family_only(const Settings& s) {
  if (!s.profile) throw ConfigError("no profile given (--profile or config 'profile')");
  if (s.profile->find('=') == std::string::npos) return std::nullopt;
  return parse_family(*s.profile);
}

Resolved resolve(const Settings& s, double default_tmax = 2 * std::numbers::pi) {
  Resolved r;
  r.family = family_only(s);
  r.tol = s.tol.value_or(1e-8);
  if (!(r.tol > 0)) throw ConfigError("--tol must be positive");
  r.nodes = std::size_t(s.nodes.value_or(201));
  if (s.nodes && *s.nodes < 2) throw ConfigError("--nodes must be at least 2");
  if (s.step_bound) {
    if (!(*s.step_bound > 0)) throw ConfigError("--step-bound must be positive");
    r.opts.step_bound = *s.step_bound;
  }
  if (r.family) {
    r.t_max = s.tmax.value_or(default_tmax);
    if (!(r.t_max > 0)) throw ConfigError("--tmax must be positive");
    r.profile = family_profile(*r.family, r.t_max);
  } else {
    r.profile = tabulated_profile(read_profile_csv_file(*s.profile));
    r.t_max = s.tmax.value_or(r.profile.t_max);
    if (!(r.t_max > 0) || r.t_max > r.profile.t_max)
      throw ConfigError("--tmax must lie in (0, " + fmt(r.profile.t_max) + "] for this profile");
  }
  r.e0 = param_to_vec({s.e0_xi.value_or(0.0), s.e0_phi.value_or(0.0)});
  return r;
}

FamilySpec need_family(const Settings& s, const char* cmd) {
  auto f = family_only(s);
  if (!f) throw ConfigError(std::string(cmd) + " needs a family profile, not a CSV table");
  validate(*f);
  return *f;
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json phases_json(const PhaseReport& p) {
  return {{"u0", p.u0},           {"alpha", p.alpha_tau}, {"hannay", p.hannay},
          {"dynamical", p.dynamical}, {"total", p.total}, {"geometric", p.geometric}};
}

void emit(const json& j, const std::optional<std::string>& path) {
  if (path) {
    std::ofstream o(*path);
    if (!o) throw ConfigError("cannot write " + *path);
    o << j.dump(2) << "\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream o(path);
  if (!o) throw ConfigError("cannot write " + path);
  return o;
}

void parallel_for(std::size_t n, long threads, const std::function<void(std::size_t)>& fn) {
  std::size_t w = threads > 0 ? std::size_t(threads) : std::max(1u, std::thread::hardware_concurrency());
  w = std::min(w, n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errs(w);
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < w; ++k)
    pool.emplace_back([&, k] {
      try {
        for (std::size_t i = k; i < n; i += w) fn(i);
      } catch (...) {
        errs[k] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

// --- commands

int cmd_evolve(const Settings& s) {
  Resolved r = resolve(s);
  Trajectory tr = integrate(r.profile, r.e0, uniform_grid(r.t_max, r.nodes), r.opts);
  if (s.out) {
    std::ofstream o = open_out(*s.out);
    write_trajectory_csv(o, tr);
  }
  json j = {{"schema", 1},
            {"command", "evolve"},
            {"nodes", tr.size()},
            {"substeps", tr.substeps},
            {"drift_max", tr.drift_max},
            {"group_violation_max", tr.group_violation_max},
            {"final_e", vec_json(tr.e.back())},
            {"final_phases", phases_json(phases(tr, s.u0.value_or(0.5), tr.size() - 1))}};
  if (s.out) j["trajectory_csv"] = *s.out;
  std::cout << j.dump(2) << "\n";
  return 0;
}

json verdict_json(double tau, double phi, const CyclicVerdict& v) {
  json j = {{"tau", tau}, {"phi", phi}, {"kind", to_string(v.kind)}, {"eta_sq", v.eta_sq},
            {"boundary", v.boundary}};
  if (v.kind != VerdictKind::NoneExist) j["eta"] = vec_json(v.eta);
  if (v.alpha_tau) j["alpha_tau"] = *v.alpha_tau;
  if (v.N) j["N"] = *v.N;
  if (v.parity_phases) j["parity_phases"] = json::array({v.parity_phases->first, v.parity_phases->second});
  return j;
}

int cmd_cyclic_scan(const Settings& s) {
  Resolved r = resolve(s);
  const double lo = s.tau_min.value_or(r.t_max / double(s.tau_steps.value_or(100)));
  const double hi = s.tau_max.value_or(r.t_max);
  const long m = s.tau_steps.value_or(100);
  if (m < 1 || !(lo > 0) || !(hi >= lo)) throw ConfigError("need 0 < tau-min <= tau-max and tau-steps >= 1");
  const std::string source = s.source.value_or("integrate");
  if (source != "integrate" && source != "oracle") throw ConfigError("--source must be integrate or oracle");
  if (source == "oracle" && !r.family) throw ConfigError("--source oracle needs a family profile");
  if (!r.family && hi > r.profile.t_max) throw ConfigError("tau-max beyond the tabulated profile");

  std::vector<double> taus(m);
  for (long k = 0; k < m; ++k) taus[k] = m == 1 ? lo : lo + (hi - lo) * double(k) / double(m - 1);
  Profile p = r.family ? family_profile(*r.family, hi) : r.profile;
  const std::size_t sub = std::max<std::size_t>(2, r.nodes / 8);

  // One integration per tau keeps records independent of each other.
  std::vector<json> rec(m);
  parallel_for(std::size_t(m), s.threads.value_or(0), [&](std::size_t k) {
    const double tau = taus[k];
    auto grid = uniform_grid(tau, sub);
    AlphaFn alpha = [&](const Vec3& e0) {
      Trajectory t = integrate(p, e0, grid, r.opts);
      return phases(t, 0.5, t.size() - 1).alpha_tau;
    };
    Mat3 E;
    Mat2 Eq;
    double phi = r.family ? r.family->phase.value(tau) : std::nan("");
    if (source == "oracle") {
      E = oracle_E(*r.family, phi);
      Eq = oracle_Eq(*r.family, phi);
    } else {
      Trajectory t = integrate(p, r.e0, grid, r.opts);
      E = t.E.back();
      Eq = t.Eq.back();
    }
    rec[k] = verdict_json(tau, phi, verdict(E, Eq, alpha));
    if (!r.family) rec[k].erase("phi");
  });
  json j = {{"schema", 1}, {"command", "cyclic-scan"}, {"source", source}, {"records", rec}};
  emit(j, s.out);
  return 0;
}

int cmd_regime_scan(const Settings& s) {
  FamilySpec f = need_family(s, "regime-scan");
  const double lo = s.lambda_min.value_or(0.0), hi = s.lambda_max.value_or(3.0);
  const long m = s.steps.value_or(301);
  if (m < 1 || hi < lo) throw ConfigError("need lambda-min <= lambda-max and steps >= 1");
  std::vector<FamilySpec> specs(m, f);
  std::vector<RegimeLabel> labels(m);
  std::vector<GrowthFit> fits(m);
  for (long k = 0; k < m; ++k) {
    specs[k].lambda = m == 1 ? lo : lo + (hi - lo) * double(k) / double(m - 1);
    labels[k] = regime(specs[k]);
  }
  IntegrateOptions o;
  if (s.step_bound) o.step_bound = *s.step_bound;
  parallel_for(std::size_t(m), s.threads.value_or(0),
               [&](std::size_t k) { fits[k] = measure_growth(specs[k], labels[k], o); });

  std::ostringstream csv;
  csv << "lambda,regime,Lambda,growth_exponent,fit,agrees\n";
  std::string first_bad;
  for (long k = 0; k < m; ++k) {
    const bool poly = labels[k].kind == RegimeKind::PolyOscillating;
    csv << fmt(specs[k].lambda) << ',' << to_string(labels[k].kind) << ',' << fmt(labels[k].Lambda) << ','
        << fmt(poly ? fits[k].loglog_slope : fits[k].loglin_slope) << ',' << (poly ? "loglog" : "loglin") << ','
        << (fits[k].agrees ? 1 : 0) << '\n';
    if (!fits[k].agrees && first_bad.empty())
      first_bad = "growth exponent disagrees with regime " + std::string(to_string(labels[k].kind)) +
                  " at lambda = " + fmt(specs[k].lambda);
  }
  if (s.out) {
    std::ofstream o = open_out(*s.out);
    o << csv.str();
  } else {
    std::cout << csv.str();
  }
  if (!first_bad.empty()) throw CheckFailed(first_bad);
  return 0;
}

int cmd_phases(const Settings& s) {
  Resolved r = resolve(s);
  auto grid = uniform_grid(r.t_max, r.nodes);
  Trajectory tr = integrate(r.profile, r.e0, grid, r.opts);
  const double u0 = s.u0.value_or(0.5);
  PhaseReport pr = phases(tr, u0, tr.size() - 1);
  AlphaFn alpha = [&](const Vec3& e0) {
    Trajectory t = integrate(r.profile, e0, grid, r.opts);
    return phases(t, 0.5, t.size() - 1).alpha_tau;
  };
  CyclicVerdict v = verdict(tr.E.back(), tr.Eq.back(), alpha);
  json levels = json::array();
  for (int n = 0; n <= 5; ++n) {
    auto [d, g] = denumerable_phases(n, pr.alpha_tau, pr.hannay);
    levels.push_back({{"n", n}, {"total", d}, {"geometric", g}});
  }
  json j = {{"schema", 1},
            {"command", "phases"},
            {"tau", r.t_max},
            {"e0", vec_json(r.e0)},
            {"phases", phases_json(pr)},
            {"eigenstates", levels},
            {"verdict", verdict_json(r.t_max, tr.phi.empty() ? std::nan("") : tr.phi.back(), v)}};
  if (tr.phi.empty()) j["verdict"].erase("phi");
  if (v.kind == VerdictKind::AllStates && v.N) {
    try {
      j["general_geometric"] = general_geometric_phase(u0, pr.hannay, EvenCase{*v.N});
    } catch (const Error&) {
    }
  }
  emit(j, s.out);
  return 0;
}

int cmd_verify(const Settings& s) {
  FamilySpec f = need_family(s, "verify");
  Resolved r = resolve(s);
  auto grid = uniform_grid(r.t_max, r.nodes);
  Trajectory tr = integrate(r.profile, r.e0, grid, r.opts);
  double dE = 0, dEq = 0, dEs = 0, dEqs = 0, deta = 0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    OracleEval o = oracle_eval(f, tr.phi[k]);
    double a = max_abs(tr.E[k] - o.E), b = max_abs(tr.Eq[k] - o.Eq);
    dE = std::max(dE, a);
    dEq = std::max(dEq, b);
    dEs = std::max(dEs, a / std::max(1.0, max_abs(o.E)));
    dEqs = std::max(dEqs, b / std::max(1.0, max_abs(o.Eq)));
    // eta^2 of the Euclidean-normalized fixed vector; skipped where E is near 1.
    double en = o.eta.squaredNorm();
    if (k > 0 && en > 0 && max_abs(o.E - Mat3::Identity()) > 1e-6) {
      try {
        FixedVectorResult fv = fixed_vector(tr.E[k]);
        if (fv.multiplicity == 1) deta = std::max(deta, std::abs(fv.eta_sq - o.eta_sq / en));
      } catch (const Error&) {
        deta = std::max(deta, 1.0);
      }
    }
  }
  // Closed-form phase integrals exist for the axis n = (0,0,1).
  json phase_disc = nullptr;
  if (f.family == Family::A && f.n1 == 0.0 && f.n2 == 0.0) {
    const double c = r.e0[2];
    double d = 0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
      d = std::max(d, std::abs(tr.A1[k] - (c - 1) * tr.phi[k]));
      d = std::max(d, std::abs(tr.A2[k] - f.lambda * f.n3 * c * tr.phi[k]));
    }
    phase_disc = d;
  }
  RegimeLabel lab = regime(f);
  const double tol = r.tol;
  bool ok = dEs <= tol && dEqs <= tol && deta <= std::sqrt(tol) &&
            (phase_disc.is_null() || phase_disc.get<double>() <= tol);
  json j = {{"schema", 1},
            {"command", "verify"},
            {"family", to_string(f.family)},
            {"regime", to_string(lab.kind)},
            {"branch", lab.branch},
            {"poly_branch", lab.poly_flag || lab.kind == RegimeKind::PolyOscillating},
            {"phi_max", tr.phi.back()},
            {"max_abs_E", dE},
            {"max_abs_Eq", dEq},
            {"max_scaled_E", dEs},
            {"max_scaled_Eq", dEqs},
            {"max_eta_sq", deta},
            {"max_phase", phase_disc},
            {"tol", tol},
            {"ok", ok}};
  emit(j, s.out);
  if (!ok) {
    std::string what = dEs > tol    ? "E discrepancy " + fmt(dEs)
                       : dEqs > tol ? "Eq discrepancy " + fmt(dEqs)
                       : deta > std::sqrt(tol) ? "eta^2 discrepancy " + fmt(deta)
                                               : "phase discrepancy " + fmt(phase_disc.get<double>());
    throw CheckFailed(what + " exceeds tolerance " + fmt(tol));
  }
  return 0;
}

int cmd_orbit(const Settings& s) {
  Resolved r = resolve(s);
  auto grid = uniform_grid(r.t_max, r.nodes);
  Trajectory tr = integrate(r.profile, r.e0, grid, r.opts);
  const double I = s.action.value_or(1.0);
  const long m = s.samples.value_or(256);
  if (m < 3) throw ConfigError("--samples must be at least 3");
  EllipseCoeffs c = classical_ellipse(tr.e.back(), I);
  std::vector<double> theta(m);
  for (long k = 0; k < m; ++k) theta[k] = 2 * std::numbers::pi * double(k) / double(m);
  auto pts = sample_orbit(c, theta);
  if (s.out) {
    std::ofstream o = open_out(*s.out);
    o << "theta,q,p\n";
    for (long k = 0; k < m; ++k) o << fmt(theta[k]) << ',' << fmt(pts[k][0]) << ',' << fmt(pts[k][1]) << '\n';
  }
  if (s.moments) {
    MomentState st = squeezed_state(s.u0.value_or(0.5), r.e0);
    st.xbar = s.xbar.value_or(0.0);
    st.pbar = s.pbar.value_or(0.0);
    st.u += mean_vector(st.xbar, st.pbar);
    std::vector<MomentState> states;
    for (std::size_t k = 0; k < tr.size(); ++k) states.push_back(evolve_state(st, tr.E[k], tr.Eq[k]));
    std::ofstream o = open_out(*s.moments);
    write_orbit_csv(o, tr.t, states);
  }
  json j = {{"schema", 1},
            {"command", "orbit"},
            {"e", vec_json(tr.e.back())},
            {"A_pp", c.A_pp},
            {"A_qp", c.A_qp},
            {"A_qq", c.A_qq},
            {"action", c.I_action},
            {"area", shoelace_area(pts)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

void add_common(CLI::App* c, Settings& s) {
  c->add_option("--config", s.config, "JSON config file; flags override its fields");
  c->add_option("--profile", s.profile, "CSV file (t,omega,n1,n2,n3) or family=..,n1=..,n3=..,lambda=..[,n2=..,rate=..]");
  c->add_option("--tmax", s.tmax, "end time");
  c->add_option("--nodes", s.nodes, "grid nodes");
  c->add_option("--e0-xi", s.e0_xi, "initial e: rapidity");
  c->add_option("--e0-phi", s.e0_phi, "initial e: azimuth");
  c->add_option("--out", s.out, "output file");
  c->add_option("--tol", s.tol, "tolerance for checks");
  c->add_option("--step-bound", s.step_bound, "RK4 substep bound (h * 2|omega||n|)");
  c->add_option("--u0", s.u0, "squeezed-state u0 (>= 1/2)");
  c->add_option("--threads", s.threads, "worker threads for scans (0 = hardware)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-dependent oscillator dynamics on SO(2,1)"};
  app.require_subcommand(1);
  Settings s;
  std::function<int(const Settings&)> run;

  auto* ev = app.add_subcommand("evolve", "integrate a profile; trajectory CSV to --out, summary JSON to stdout");
  add_common(ev, s);
  ev->callback([&] { run = cmd_evolve; });

  auto* cs = app.add_subcommand("cyclic-scan", "cyclic verdict over a tau grid (JSON)");
  add_common(cs, s);
  cs->add_option("--tau-min", s.tau_min);
  cs->add_option("--tau-max", s.tau_max);
  cs->add_option("--tau-steps", s.tau_steps);
  cs->add_option("--source", s.source, "integrate (default) or oracle");
  cs->callback([&] { run = cmd_cyclic_scan; });

  auto* rs = app.add_subcommand("regime-scan", "regime and measured growth over lambda (CSV)");
  add_common(rs, s);
  rs->add_option("--lambda-min", s.lambda_min);
  rs->add_option("--lambda-max", s.lambda_max);
  rs->add_option("--steps", s.steps);
  rs->callback([&] { run = cmd_regime_scan; });

  auto* ph = app.add_subcommand("phases", "phases and cyclic verdict at tmax (JSON)");
  add_common(ph, s);
  ph->callback([&] { run = cmd_phases; });

  auto* vf = app.add_subcommand("verify", "integrated E, Eq, eta^2 and phases against the closed forms");
  add_common(vf, s);
  vf->callback([&] { run = cmd_verify; });

  auto* ob = app.add_subcommand("orbit", "classical ellipse at tmax (CSV theta,q,p) and optional moment track");
  add_common(ob, s);
  ob->add_option("--action", s.action, "action I of the ellipse");
  ob->add_option("--samples", s.samples);
  ob->add_option("--moments", s.moments, "write t,xbar,pbar,dx,dp,cov here");
  ob->add_option("--xbar", s.xbar);
  ob->add_option("--pbar", s.pbar);
  ob->callback([&] { run = cmd_orbit; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    merge_config(s);
    return run(s);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CheckFailed& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << (is_numerical(e.kind()) ? "numerical failure: " : "config error: ") << e.what() << "\n";
    return is_numerical(e.kind()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
