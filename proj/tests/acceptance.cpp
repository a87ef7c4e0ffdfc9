// Acceptance checks, one PASS/FAIL line per criterion. Run with criterion
// numbers as arguments to select a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "arw/json_io.hpp"
#include "arw/kacrice.hpp"
#include "arw/lattice.hpp"
#include "arw/montecarlo.hpp"

using namespace arw;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20240601;
constexpr std::int64_t kBigM = 160225;

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> info;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

TorusCurve main_arc() { return make_circle_arc({0.5, 0.5, 0.2, 1.0, 0.0}); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> radius(0.05, 0.49), sweep(0.1, 2 * kPi), phase(-kPi, kPi), unit(0, 1);
  int levels = 0, checks = 0;
  double worst = 0.0;
  for (std::int64_t m = 1; m <= 1000; ++m) {
    const auto set = enumerate_lattice_points(m);
    if (set.empty()) continue;
    ++levels;
    const double tau4 = tau_fourier(set, 4);
    const double md = double(m);
    for (int k = 0; k < 100; ++k) {
      const auto c = make_circle_arc({0.5, 0.5, radius(rng), sweep(rng), phase(rng)});
      const double t = unit(rng) * c.length();
      const auto d = diagonal_moments(set, c, t);
      const double a = tau4 * std::cos(4 * c.tangent_angle(t));
      const double e2 = std::abs(d.s2 / (md / 2) - 1);
      const double e4 = std::abs(d.s4 / (md * md * (3.0 / 8 + a / 8)) - 1);
      const double e6 = std::abs(d.s6 / (md * md * md * (5.0 / 16 + 3 * a / 16)) - 1);
      worst = std::max({worst, e2, e4, e6});
      checks += 3;
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 30,
          fmt("%d levels, %d identities, max relative error %.3g (tol 1e-9), %.1f s (limit 30 s)", levels, checks,
              worst, secs)};
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  std::int64_t cases = 0, solv_bad = 0, count_bad = 0, solvable = 0, pairs_bad = 0;
  for (std::int64_t m = 2; m <= 500; ++m) {
    const auto set = enumerate_lattice_points(m);
    std::map<std::int64_t, std::int64_t> by_h;  // ordered pairs by |mu - mu'|^2 / 2
    for (const auto& a : set.points()) {
      for (const auto& b : set.points()) {
        const std::int64_t d = (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
        if (d % 2 == 0) ++by_h[d / 2];
      }
    }
    for (std::int64_t h = 1; h < m; ++h) {
      ++cases;
      const std::int64_t brute = by_h.count(h) ? by_h[h] : 0;
      const auto r = mordell_solvability(m, h);
      if (r.solvable != (brute > 0)) ++solv_bad;
      if (r.solvable) ++solvable;
      const std::int64_t a_mh = r.solvable ? r2_count(r.gcd_value) : 0;
      if (a_mh != brute) ++count_bad;
      if (r.ordered_pairs != brute) ++pairs_bad;
    }
  }
  const double secs = seconds_since(t0);
  Outcome o{solv_bad == 0 && count_bad == 0 && secs < 60,
            fmt("%lld (m, h) cases, %lld solvable; solvability mismatches %lld, A(m,h)=r2(gcd) vs brute-force pair "
                "count mismatches %lld, %.1f s (limit 60 s)",
                (long long)cases, (long long)solvable, (long long)solv_bad, (long long)count_bad, secs)};
  o.info.push_back(fmt("ordered pairs = 2 r2(gcd): mismatches %lld of %lld cases", (long long)pairs_bad,
                       (long long)cases));
  return o;
}

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (std::int64_t m : {5, 25, 65, 325}) {
    const auto set = enumerate_lattice_points(m);
    ExperimentOptions opts;
    opts.trials = 2000;
    opts.master_seed = kSeed;
    opts.with_prediction = false;
    const auto rep = run_experiment(set, main_arc(), opts);
    const double target = std::sqrt(2.0 * double(m)) * 0.2;
    const double dev = std::abs(rep.empirical_mean - target);
    ok = ok && dev <= 4 * rep.stderr_mean;
    detail += fmt("m=%lld mean %.4f vs %.4f (|z|=%.2f); ", (long long)m, rep.empirical_mean, target,
                  dev / rep.stderr_mean);
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 120;
  return {ok, detail + fmt("%.1f s (limit 120 s)", secs)};
}

// The criterion 4 experiment, shared with criterion 10.
SimulationReport variance_experiment(unsigned threads) {
  static const LatticePointSet set = enumerate_lattice_points(kBigM);
  ExperimentOptions opts;
  opts.trials = 4000;
  opts.master_seed = kSeed;
  opts.parallelism = threads;
  return run_experiment(set, main_arc(), opts);
}

std::optional<SimulationReport> c4_report;

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto set = enumerate_lattice_points(kBigM);
  c4_report = variance_experiment(1);
  const auto& rep = *c4_report;
  const auto pred = variance_prediction(set, main_arc());
  const double n = double(set.n());
  const double integral = pred.variance_integral;
  const double tol = std::max(4 * rep.stderr_variance, 0.2 * integral);
  const double gap = std::abs(rep.empirical_variance - integral);
  const double budget = 5 * double(kBigM) / std::pow(n, 1.5);
  const double lead_gap = std::abs(integral - pred.variance_leading);
  const double secs = seconds_since(t0);
  Outcome o{gap <= tol && lead_gap <= budget && secs < 600,
            fmt("empirical variance %.3f (stderr %.3f) vs integral %.3f: |diff| %.3f, tol %.3f; integral vs leading "
                "%.3f: |diff| %.3f, budget %.1f; %.1f s (limit 600 s)",
                rep.empirical_variance, rep.stderr_variance, integral, gap, tol, pred.variance_leading, lead_gap,
                budget, secs)};
  const double kr = kac_rice_variance(set, main_arc());
  o.info.push_back(fmt("exact Kac-Rice variance E[Z] + iint(K2 - K1^2) = %.3f; empirical within %.2f stderr of it", kr,
                       std::abs(rep.empirical_variance - kr) / rep.stderr_variance));
  o.info.push_back(fmt("empirical mean %.3f vs %.3f (z = %.2f), %lld warned trials", rep.empirical_mean,
                       rep.predicted_mean, rep.z_score_mean, (long long)rep.warned_trials));
  return o;
}

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto set = enumerate_lattice_points(kBigM);
  const auto full = make_circle_arc({0.5, 0.5, 0.2, 2 * kPi, 0.0});
  // Same length 0.4 pi; the sweep 3 pi / 2 maximizes |I| at that length.
  const auto arc = make_circle_arc({0.5, 0.5, 4.0 / 15.0, 1.5 * kPi, 0.0});
  const double L = full.length();
  const double lead_full = 4 * b_constant(set, full) - L * L;
  const double lead_arc = 4 * b_constant(set, arc) - arc.length() * arc.length();
  ExperimentOptions opts;
  opts.trials = 1000;
  opts.master_seed = kSeed;
  opts.with_prediction = false;
  const auto rf = run_experiment(set, full, opts);
  const auto ra = run_experiment(set, arc, opts);
  const double ratio = rf.empirical_variance / ra.empirical_variance;
  const double secs = seconds_since(t0);
  Outcome o{std::abs(lead_full) <= 1e-8 && ratio < 0.2 && secs < 600,
            fmt("full-circle leading constant %.3g (tol 1e-8); empirical variance full %.2f (stderr %.2f) vs arc r=4/15 "
                "sweep 3pi/2 %.2f (stderr %.2f): ratio %.3f (need < 0.2); %.1f s (limit 600 s)",
                lead_full, rf.empirical_variance, rf.stderr_variance, ra.empirical_variance, ra.stderr_variance, ratio,
                secs)};
  o.info.push_back(fmt("leading-term variances (4B - L^2) m/N: full %.3g, arc %.3f", lead_full * kBigM / 96.0,
                       lead_arc * kBigM / 96.0));
  return o;
}

Outcome criterion6() {
  const auto set = enumerate_lattice_points(kBigM);
  const auto a = k2_expansion_study(set, main_arc(), 100000, kSeed);
  const auto b = k2_expansion_study(set, main_arc(), 100000, kSeed + 1);
  const bool ok = std::isfinite(a.max_ratio) && std::isfinite(b.max_ratio) && a.max_ratio < 10 && b.max_ratio < 10;
  return {ok, fmt("max |K2 - K1^2 - main| / (alpha quartic) over 2 x 10^5 jets: %.4f and %.4f (need finite, < 10)",
                  a.max_ratio, b.max_ratio)};
}

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto set = enumerate_lattice_points(kBigM);
  const auto arc = make_circle_arc({0.5, 0.5, 0.3, 1.3, 0.2});
  const double s = std::sqrt(double(kBigM));
  std::vector<double> z;
  for (int i = 0; i <= 10; ++i) z.push_back(std::pow(10.0, -3.0 + i / 10.0) / s);
  const auto pr = detsigma_scaling_probe(set, arc, 0.1, z);
  const double secs = seconds_since(t0);
  Outcome o{std::abs(pr.exponent_fit - 10) <= 0.1 && std::abs(pr.coeff_ratio - 1) <= 0.05 && secs < 10,
            fmt("slope %.4f (need 10 +- 0.1); ratio to (2/9) pi^14 m^7 (A-1)(A^2-1) z^10 = %.4f (need 1 +- 0.05); A = "
                "%.4f; %.1f s (limit 10 s)",
                pr.exponent_fit, pr.coeff_ratio, pr.a_of_t1, secs)};
  o.info.push_back(fmt("ratio to (1/9) pi^14 m^7 (1-A)(1+A)^2 z^10 = %.5f", pr.coeff_ratio_corrected));
  return o;
}

Outcome criterion8() {
  bool ok = true;
  std::string detail;
  for (std::int64_t m : {25, 325}) {
    const auto sm = second_moments(enumerate_lattice_points(m), main_arc());
    const double d = std::abs(sm.int_r2 - sm.parseval_r2);
    ok = ok && d <= 1e-6;
    detail += fmt("m=%lld |quad - Parseval| %.2e; ", (long long)m, d);
  }
  double prev = INFINITY;
  detail += "N iint r^2 / L^2:";
  for (std::int64_t m : {25, 325, 5525, 160225}) {
    const auto set = enumerate_lattice_points(m);
    const auto sm = second_moments(set, main_arc(), {}, false);
    const double v = double(set.n()) * sm.int_r2 / 0.04;
    ok = ok && std::abs(v - 1) < prev;
    prev = std::abs(v - 1);
    detail += fmt(" %.5f", v);
  }
  return {ok, detail};
}

Outcome criterion9() {
  std::vector<std::int64_t> levels{5525, 160225};
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<std::int64_t> pick(1000, 10000000);
  while (levels.size() < 12) {
    const std::int64_t m = pick(rng);
    if (r2_count(m) >= 32) levels.push_back(m);
  }
  bool ok = true;
  std::string detail;
  for (std::int64_t m : levels) {
    const auto set = enumerate_lattice_points(m);
    const double r = riesz_energy(set).ratio;
    ok = ok && r < 1.0;
    detail += fmt("%lld(N=%zu):%.4f ", (long long)m, set.n(), r);
  }
  return {ok, "energy/N " + detail + "(need < 1)"};
}

Outcome criterion10() {
  if (!c4_report) c4_report = variance_experiment(1);
  const auto other = variance_experiment(8);
  const std::string a = nlohmann::json(*c4_report).dump();
  const std::string b = nlohmann::json(other).dump();
  bool same_trials = c4_report->per_trial.size() == other.per_trial.size();
  for (std::size_t i = 0; same_trials && i < other.per_trial.size(); ++i) {
    same_trials = c4_report->per_trial[i].count == other.per_trial[i].count;
  }
  return {a == b && same_trials, fmt("summary JSON threads=1 vs threads=8: %s (%zu bytes); per-trial counts %s",
                                     a == b ? "identical" : "DIFFERENT", a.size(), same_trials ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> all{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                  criterion6, criterion7, criterion8, criterion9, criterion10};
  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::stoi(argv[i]));
  int failed = 0;
  for (int k = 1; k <= 10; ++k) {
    if (!chosen.empty() && !chosen.count(k)) continue;
    Outcome o;
    try {
      o = all[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d %s  %s\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    for (const auto& line : o.info) std::printf("             info  %s\n", line.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
