#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "arw/errors.hpp"
#include "arw/json_io.hpp"
#include "arw/kacrice.hpp"
#include "arw/lattice.hpp"
#include "arw/montecarlo.hpp"

#ifndef ARW_VERSION
#define ARW_VERSION "unknown"
#endif

namespace arw::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags as given on the command line; merged over the --config file.
struct RawFlags {
  std::optional<std::int64_t> m, trials, m_max;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> curve, format, output, per_trial;
  std::optional<double> oversample, divisor_cap, t1, z_min, z_max;
  std::optional<int> quad_order, z_count;
  std::optional<unsigned> threads;
  bool no_meta = false;
  std::string config_path;
};

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

json flags_to_json(const RawFlags& f) {
  json j = json::object();
  put(j, "m", f.m);
  put(j, "curve", f.curve);
  put(j, "trials", f.trials);
  put(j, "seed", f.seed);
  put(j, "oversample", f.oversample);
  put(j, "quad-order", f.quad_order);
  put(j, "format", f.format);
  put(j, "output", f.output);
  put(j, "threads", f.threads);
  put(j, "per-trial", f.per_trial);
  put(j, "m-max", f.m_max);
  put(j, "divisor-cap", f.divisor_cap);
  put(j, "t1", f.t1);
  put(j, "z-min", f.z_min);
  put(j, "z-max", f.z_max);
  put(j, "z-count", f.z_count);
  if (f.no_meta) j["no-meta"] = true;
  return j;
}

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("bad value for '") + key + "'");
  }
}

template <class T>
void take(const json& j, const char* key, std::optional<T>& dst) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T v{};
  take(j, key, v);
  dst = v;
}

ExperimentConfig resolve(const std::string& command, const json& merged) {
  static const std::set<std::string> known{"m",  "curve", "trials", "seed", "oversample", "quad-order",
                                           "format", "output", "threads", "no-meta", "per-trial", "m-max",
                                           "divisor-cap", "t1", "z-min", "z-max", "z-count", "command"};
  for (const auto& [key, value] : merged.items()) {
    if (!known.count(key)) throw UsageError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  c.command = command;
  take(merged, "m", c.m);
  take(merged, "curve", c.curve);
  take(merged, "trials", c.trials);
  take(merged, "seed", c.seed);
  take(merged, "oversample", c.oversample);
  take(merged, "quad-order", c.quad_order);
  take(merged, "format", c.format);
  take(merged, "output", c.output);
  take(merged, "threads", c.threads);
  take(merged, "no-meta", c.no_meta);
  take(merged, "per-trial", c.per_trial);
  take(merged, "m-max", c.m_max);
  take(merged, "divisor-cap", c.divisor_cap);
  take(merged, "t1", c.t1);
  take(merged, "z-min", c.z_min);
  take(merged, "z-max", c.z_max);
  take(merged, "z-count", c.z_count);

  const bool needs_m = command != "verify";
  const bool needs_curve = command == "predict" || command == "simulate" || command == "probe";
  if (needs_m && c.m < 1) throw UsageError("--m must be a positive integer");
  if (needs_curve && c.curve.empty()) throw UsageError("--curve is required");
  if (c.trials < 2) throw UsageError("--trials must be at least 2");
  if (!(c.oversample >= 4.0)) throw UsageError("--oversample must be at least 4");
  if (c.quad_order < 0) throw UsageError("--quad-order must be nonnegative");
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
  if (c.m_max < 1) throw UsageError("--m-max must be a positive integer");
  if (c.divisor_cap < 0) throw UsageError("--divisor-cap must be nonnegative");
  if (c.z_count < 2) throw UsageError("--z-count must be at least 2");
  return c;
}

std::string num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Emitted {
  json report;
  std::string csv;
  int status = kOk;
};

Emitted cmd_lattice(const ExperimentConfig& c) {
  const LatticePointSet set = enumerate_lattice_points(c.m);
  Emitted e;
  e.report = lattice_to_json(set);
  if (set.n() >= 2) {
    const RieszEnergy r = riesz_energy(set);
    e.report["riesz"] = {{"energy", r.energy}, {"ratio", r.ratio}};
  } else {
    e.report["riesz"] = nullptr;
  }
  const QuadrupleDiagnostics q = quadruple_diagnostics(set);
  e.report["quadruple"] = {{"zero_sum_count", q.zero_sum_count}, {"inverse_norm_sum", q.inverse_norm_sum}};
  const double cap = c.divisor_cap > 0 ? c.divisor_cap : std::sqrt(static_cast<double>(c.m));
  e.report["divisor"] = {{"cap", cap}, {"value", divisor_diagnostic(c.m, cap)}};
  std::ostringstream os;
  os << "x,y\n";
  for (const LatticePoint& p : set.points()) os << p.x << ',' << p.y << '\n';
  e.csv = os.str();
  return e;
}

QuadratureOptions quad_options(const ExperimentConfig& c) {
  QuadratureOptions q;
  q.nodes = c.quad_order;
  q.threads = c.threads;
  return q;
}

std::string csv_row(const json& flat) {
  std::string head, row;
  for (const auto& [key, value] : flat.items()) {
    if (value.is_array() || value.is_object()) continue;
    if (!head.empty()) {
      head += ',';
      row += ',';
    }
    head += key;
    if (value.is_number_float()) {
      row += num(value.get<double>());
    } else if (value.is_string()) {
      row += value.get<std::string>();
    } else if (!value.is_null()) {
      row += value.dump();
    }
  }
  return head + '\n' + row + '\n';
}

Emitted cmd_predict(const ExperimentConfig& c, const TorusCurve& curve) {
  const LatticePointSet set = enumerate_lattice_points(c.m);
  const PredictionReport rep = variance_prediction(set, curve, quad_options(c));
  Emitted e;
  e.report = rep;
  e.csv = csv_row(e.report);
  return e;
}

Emitted cmd_simulate(const ExperimentConfig& c, const TorusCurve& curve) {
  const LatticePointSet set = enumerate_lattice_points(c.m);
  ExperimentOptions opts;
  opts.trials = c.trials;
  opts.master_seed = c.seed;
  opts.oversample = c.oversample;
  opts.parallelism = c.threads;
  opts.quad_nodes = c.quad_order;
  opts.with_prediction = curve.has_nonvanishing_curvature();
  const SimulationReport rep = run_experiment(set, curve, opts);
  if (!c.per_trial.empty()) {
    std::ofstream f(c.per_trial);
    f << per_trial_csv(rep);
    if (!f) raise(ErrorCode::InvalidRange, "cannot write per-trial file " + c.per_trial);
  }
  Emitted e;
  e.report = rep;
  e.csv = csv_row(e.report);
  return e;
}

Emitted cmd_probe(const ExperimentConfig& c, const TorusCurve& curve) {
  const LatticePointSet set = enumerate_lattice_points(c.m);
  const double s = std::sqrt(static_cast<double>(c.m));
  const double lo = c.z_min.value_or(1e-3 / s);
  const double hi = c.z_max.value_or(1e-2 / s);
  if (!(lo > 0 && hi > lo)) throw UsageError("probe needs 0 < z-min < z-max");
  std::vector<double> z;
  for (int i = 0; i < c.z_count; ++i) z.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (c.z_count - 1)));
  const double t1 = c.t1.value_or(0.5 * (curve.length() - hi));
  const ProbeResult pr = detsigma_scaling_probe(set, curve, t1, z);
  Emitted e;
  e.report = pr;
  e.report["t1"] = t1;
  std::ostringstream os;
  os << "z,p\n";
  for (std::size_t i = 0; i < pr.z_values.size(); ++i) os << num(pr.z_values[i]) << ',' << num(pr.p_values[i]) << '\n';
  e.csv = os.str();
  return e;
}

struct Check {
  explicit Check(std::string n) : name(std::move(n)) {}

  std::string name;
  bool passed = true;
  std::int64_t cases = 0;
  std::int64_t failures = 0;
  std::string first_failure;

  void record(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    if (failures++ == 0) first_failure = what;
    passed = false;
  }
};

Emitted cmd_verify(const ExperimentConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> radius(0.05, 0.49), sweep(0.1, 6.28), phase(-3.14, 3.14), unit(0.0, 1.0);
  Check lattice{"lattice_enumeration"}, ident{"diagonal_identities"}, mordell{"mordell_pall"},
      bconst{"b_constant_dual_route"}, expansion{"k2_expansion_residual"};
  const std::string tag = "m=";

  for (std::int64_t m = 1; m <= c.m_max; ++m) {
    const LatticePointSet set = enumerate_lattice_points(m);
    const std::string where = tag + std::to_string(m);
    lattice.record(static_cast<std::int64_t>(set.n()) == r2_count(m) && set.n() % 4 == 0 &&
                       set.half_set().size() * 2 == set.n(),
                   where);

    std::map<std::int64_t, std::int64_t> by_h;
    for (const LatticePoint& a : set.points()) {
      for (const LatticePoint& b : set.points()) {
        const std::int64_t d = (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
        if (d % 2 == 0) ++by_h[d / 2];
      }
    }
    for (std::int64_t h = 1; h < m; ++h) {
      const auto it = by_h.find(h);
      const std::int64_t brute = it == by_h.end() ? 0 : it->second;
      const MordellResult r = mordell_solvability(m, h);
      mordell.record(r.solvable == (brute > 0) && r.ordered_pairs == brute, where + ",h=" + std::to_string(h));
    }

    if (set.empty()) continue;
    const double tau4 = tau_fourier(set, 4);
    const double md = static_cast<double>(m);
    for (int k = 0; k < 10; ++k) {
      const TorusCurve curve = make_circle_arc({0.5, 0.5, radius(rng), sweep(rng), phase(rng)});
      const double t = unit(rng) * curve.length();
      const DiagonalMoments d = diagonal_moments(set, curve, t);
      const double a = tau4 * std::cos(4 * curve.tangent_angle(t));
      const bool ok = std::abs(d.s2 / (md / 2) - 1) <= 1e-9 &&
                      std::abs(d.s4 / (md * md * (3.0 / 8 + a / 8)) - 1) <= 1e-9 &&
                      std::abs(d.s6 / (md * md * md * (5.0 / 16 + 3 * a / 16)) - 1) <= 1e-9;
      ident.record(ok, where);
      if (k < 2) {
        const BConstant b = b_constant_both(set, curve);
        bconst.record(std::abs(b.via_tangent_energy - b.via_double_integral) <= 1e-8, where);
      }
    }
    if (set.n() >= 8 && m % 5 == 0) {
      const TorusCurve arc = make_circle_arc({0.5, 0.5, 0.2, 1.0, 0.0});
      const ExpansionStudy s = k2_expansion_study(set, arc, 2000, c.seed + static_cast<std::uint64_t>(m));
      expansion.record(std::isfinite(s.max_ratio) && s.max_ratio < 10.0, where);
    }
  }

  Emitted e;
  e.report["m_max"] = c.m_max;
  e.report["checks"] = json::array();
  std::ostringstream os;
  os << "check,passed,cases,failures,first_failure\n";
  bool all = true;
  for (const Check* ch : {&lattice, &ident, &mordell, &bconst, &expansion}) {
    e.report["checks"].push_back({{"name", ch->name},
                                  {"passed", ch->passed},
                                  {"cases", ch->cases},
                                  {"failures", ch->failures},
                                  {"first_failure", ch->first_failure}});
    os << ch->name << ',' << (ch->passed ? "true" : "false") << ',' << ch->cases << ',' << ch->failures << ','
       << ch->first_failure << '\n';
    all = all && ch->passed;
  }
  e.report["passed"] = all;
  e.csv = os.str();
  e.status = all ? kOk : kNumericFailure;
  return e;
}

std::string failed_check(const json& report) {
  for (const auto& ch : report.at("checks")) {
    if (!ch.at("passed").get<bool>()) {
      return ch.at("name").get<std::string>() + " (" + ch.at("first_failure").get<std::string>() + ")";
    }
  }
  return {};
}

void add_common(CLI::App* sub, RawFlags& f) {
  sub->add_option("--config", f.config_path, "JSON file whose keys mirror the flag names");
  sub->add_option("--format", f.format, "json or csv");
  sub->add_option("--output,-o", f.output, "write the report here instead of stdout");
  sub->add_option("--threads", f.threads, "worker threads, 0 = machine parallelism");
  sub->add_flag("--no-meta", f.no_meta, "omit version and timestamp");
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  json j = {{"command", c.command}, {"format", c.format}, {"threads", c.threads}};
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  if (c.command == "verify") {
    j["m-max"] = c.m_max;
    j["seed"] = c.seed;
    return j;
  }
  j["m"] = c.m;
  if (c.command == "lattice") {
    j["divisor-cap"] = c.divisor_cap;
    return j;
  }
  j["curve"] = c.curve;
  if (c.command == "predict" || c.command == "simulate") j["quad-order"] = c.quad_order;
  if (c.command == "simulate") {
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["oversample"] = c.oversample;
    j["per-trial"] = c.per_trial;
  }
  if (c.command == "probe") {
    j["t1"] = opt(c.t1);
    j["z-min"] = opt(c.z_min);
    j["z-max"] = opt(c.z_max);
    j["z-count"] = c.z_count;
  }
  return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nodal intersections of arithmetic random waves with curves on the torus", "arw"};
  app.require_subcommand(1);
  RawFlags f;

  auto* lattice = app.add_subcommand("lattice", "lattice points, Riesz energy, quadruple and divisor sums");
  lattice->add_option("--m", f.m, "energy level m");
  lattice->add_option("--divisor-cap", f.divisor_cap, "divisor sum cutoff, default sqrt(m)");
  add_common(lattice, f);

  auto* predict = app.add_subcommand("predict", "closed-form mean and variance predictions");
  predict->add_option("--m", f.m, "energy level m");
  predict->add_option("--curve", f.curve, "circle:r=..,arc=..[,cx,cy,phase] or segment:len=..[,dir,x0,y0]");
  predict->add_option("--quad-order", f.quad_order, "quadrature nodes per axis, 0 = automatic");
  add_common(predict, f);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo zero counts");
  simulate->add_option("--m", f.m, "energy level m");
  simulate->add_option("--curve", f.curve, "curve spec");
  simulate->add_option("--trials", f.trials, "number of sampled waves");
  simulate->add_option("--seed", f.seed, "master seed");
  simulate->add_option("--oversample", f.oversample, "scan points per shortest wavelength");
  simulate->add_option("--quad-order", f.quad_order, "quadrature nodes per axis for the prediction");
  simulate->add_option("--per-trial", f.per_trial, "write trial,count,warn_flags CSV here");
  add_common(simulate, f);

  auto* verify = app.add_subcommand("verify", "run the invariant suite for all m up to --m-max");
  verify->add_option("--m-max", f.m_max, "largest level checked");
  verify->add_option("--seed", f.seed, "seed for random curves and jets");
  add_common(verify, f);

  auto* probe = app.add_subcommand("probe", "near-diagonal scaling of the conditioned determinant");
  probe->add_option("--m", f.m, "energy level m");
  probe->add_option("--curve", f.curve, "curve spec");
  probe->add_option("--t1", f.t1, "base point, default centred in the curve");
  probe->add_option("--z-min", f.z_min, "smallest offset, default 1e-3/sqrt(m)");
  probe->add_option("--z-max", f.z_max, "largest offset, default 1e-2/sqrt(m)");
  probe->add_option("--z-count", f.z_count, "log-spaced offsets");
  add_common(probe, f);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "arw: error: " << e.what() << '\n';
    return kUsageError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  ExperimentConfig cfg;
  std::optional<TorusCurve> curve;
  try {
    json merged = json::object();
    if (!f.config_path.empty()) {
      std::ifstream in(f.config_path);
      if (!in) throw UsageError("cannot read config file " + f.config_path);
      try {
        merged = json::parse(in);
      } catch (const json::exception& e) {
        throw UsageError("config file is not valid JSON: " + std::string(e.what()));
      }
      if (!merged.is_object()) throw UsageError("config file must hold a JSON object");
      if (merged.contains("command") && merged.at("command") != command) {
        throw UsageError("config file is for command " + merged.at("command").dump());
      }
    }
    merged.update(flags_to_json(f));
    cfg = resolve(command, merged);
    if (!cfg.curve.empty()) curve = parse_curve_spec(cfg.curve);
  } catch (const UsageError& e) {
    err << "arw: error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "arw: error: " << e.what() << '\n';
    return kUsageError;
  }

  Emitted result;
  try {
    if (command == "lattice") result = cmd_lattice(cfg);
    if (command == "predict") result = cmd_predict(cfg, *curve);
    if (command == "simulate") result = cmd_simulate(cfg, *curve);
    if (command == "verify") result = cmd_verify(cfg);
    if (command == "probe") result = cmd_probe(cfg, *curve);
  } catch (const UsageError& e) {
    err << "arw: error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "arw: numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  }

  std::string text;
  if (cfg.format == "csv") {
    text = result.csv;
  } else {
    json doc = result.report;
    doc["config"] = config_to_json(cfg);
    if (!cfg.no_meta) doc["meta"] = {{"tool", "arw"}, {"version", ARW_VERSION}, {"generated_at", timestamp()}};
    text = doc.dump(2) + '\n';
  }
  if (cfg.output.empty()) {
    out << text;
  } else {
    std::ofstream file(cfg.output);
    file << text;
    if (!file) {
      err << "arw: error: cannot write " << cfg.output << '\n';
      return kNumericFailure;
    }
  }
  if (result.status == kNumericFailure && command == "verify") {
    err << "arw: numeric failure: invariant " << failed_check(result.report) << " failed\n";
  }
  return result.status;
}

}  // namespace arw::cli
