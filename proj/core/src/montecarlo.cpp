#include "arw/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "arw/errors.hpp"
#include "arw/kacrice.hpp"
#include "arw/rng.hpp"
#include "parallel.hpp"

namespace arw {
namespace {

__extension__ typedef __int128 int128;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTangencyTol = 1e-9;

// Flattened copy of the half set and coefficients for the inner loop.
class FieldEvaluator {
 public:
  FieldEvaluator(const WaveSample& sample, const TorusCurve& curve) : curve_(curve), offset_(sample.offset) {
    const auto half = sample.set->half_set();
    mx_.reserve(half.size());
    my_.reserve(half.size());
    for (const LatticePoint& mu : half) {
      mx_.push_back(static_cast<double>(mu.x));
      my_.push_back(static_cast<double>(mu.y));
    }
    b_ = sample.b;
    c_ = sample.c;
    amp_ = 2.0 / std::sqrt(static_cast<double>(sample.set->n()));
  }

  [[nodiscard]] FieldValue operator()(double t) const {
    const CurveFrame<double> fr = curve_.frame(t);
    double f = 0.0;
    double fp = 0.0;
    for (std::size_t k = 0; k < mx_.size(); ++k) {
      const double phase = kTwoPi * (mx_[k] * fr.position.x + my_[k] * fr.position.y);
      const double grad = kTwoPi * (mx_[k] * fr.velocity.x + my_[k] * fr.velocity.y);
      const double cs = std::cos(phase);
      const double sn = std::sin(phase);
      f += b_[k] * cs - c_[k] * sn;
      fp -= (b_[k] * sn + c_[k] * cs) * grad;
    }
    return {amp_ * f + offset_, amp_ * fp};
  }

 private:
  const TorusCurve& curve_;
  double offset_;
  double amp_ = 0.0;
  std::vector<double> mx_;
  std::vector<double> my_;
  std::vector<double> b_;
  std::vector<double> c_;
};

bool positive(double v) { return v >= 0.0; }

// Root of f in [a, b] given sign(f(a)) != sign(f(b)).
double bisect_root(const FieldEvaluator& field, double a, double b, bool a_positive, double tol) {
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (positive(field(mid).f) == a_positive) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// Critical point of f in [a, b] given f'(a) < 0 < f'(b) or the reverse.
double bisect_critical(const FieldEvaluator& field, double a, double b, bool fpa_positive, double tol) {
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (positive(field(mid).fprime) == fpa_positive) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

WaveSample sample_wave(const LatticePointSet& set, std::uint64_t master_seed, std::uint64_t trial_index) {
  if (set.n() < 2 || set.n() % 2 != 0) raise(ErrorCode::EmptySpectrum, "sample_wave needs an even N >= 2");
  WaveSample s;
  s.set = &set;
  s.master_seed = master_seed;
  s.trial_index = trial_index;
  const std::size_t half = set.half_set().size();
  s.b.resize(half);
  s.c.resize(half);
  for (std::size_t k = 0; k < half; ++k) {
    const auto pair = coefficient_pair(master_seed, trial_index, k);
    s.b[k] = pair[0];
    s.c[k] = pair[1];
  }
  return s;
}

FieldValue eval_field(const WaveSample& sample, const TorusCurve& curve, double t) {
  if (sample.set == nullptr || sample.set->empty()) raise(ErrorCode::EmptySpectrum, "sample has no lattice set");
  if (!(t >= 0.0 && t <= curve.length())) raise(ErrorCode::InvalidRange, "t must lie in [0, L]");
  return FieldEvaluator(sample, curve)(t);
}

ZeroCount count_zeros(const WaveSample& sample, const TorusCurve& curve, double oversample) {
  if (sample.set == nullptr || sample.set->empty()) raise(ErrorCode::EmptySpectrum, "sample has no lattice set");
  if (!(oversample >= 4.0)) raise(ErrorCode::InvalidRange, "oversample must be >= 4");
  const FieldEvaluator field(sample, curve);
  const double L = curve.length();
  const double m = static_cast<double>(sample.set->m());
  const double step = 1.0 / (oversample * std::sqrt(m) * kTwoPi);
  const auto intervals = static_cast<std::size_t>(std::ceil(L / step));
  const double h = L / static_cast<double>(intervals);

  ZeroCount out;
  out.refinement_tol = 1e-12 * L;
  std::vector<FieldValue> grid(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) grid[i] = field(i == intervals ? L : h * static_cast<double>(i));

  for (std::size_t i = 0; i < intervals; ++i) {
    const double a = h * static_cast<double>(i);
    const double b = i + 1 == intervals ? L : h * static_cast<double>(i + 1);
    const bool pa = positive(grid[i].f);
    const bool pb = positive(grid[i + 1].f);
    if (pa != pb) {
      out.locations.push_back(bisect_root(field, a, b, pa, out.refinement_tol));
      continue;
    }
    // |f| decreasing at a and increasing at b: look at the dip.
    const double s = pa ? 1.0 : -1.0;
    if (!(s * grid[i].fprime < 0.0 && s * grid[i + 1].fprime > 0.0)) continue;
    const double tc = bisect_critical(field, a, b, positive(grid[i].fprime), out.refinement_tol);
    const double fc = field(tc).f;
    if (positive(fc) != pa) {
      out.locations.push_back(bisect_root(field, a, tc, pa, out.refinement_tol));
      out.locations.push_back(bisect_root(field, tc, b, !pa, out.refinement_tol));
      ++out.split_events;
    } else if (std::abs(fc) < kTangencyTol) {
      ++out.tangency_events;
    }
  }

  out.count = static_cast<std::int64_t>(out.locations.size());
  out.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < out.locations.size(); ++i) {
    out.min_gap = std::min(out.min_gap, out.locations[i] - out.locations[i - 1]);
  }
  if (out.split_events > 0) out.warn_flags |= kWarnSplit;
  if (out.tangency_events > 0) out.warn_flags |= kWarnTangency;
  if (static_cast<double>(out.count) > 10.0 * std::sqrt(2.0 * m) * L) out.warn_flags |= kWarnHighCount;
  return out;
}

SimulationReport run_experiment_with_sampler(const LatticePointSet& set, const TorusCurve& curve,
                                             const ExperimentOptions& opts, const WaveSampler& sampler) {
  if (opts.trials < 2) raise(ErrorCode::InvalidRange, "run_experiment needs at least 2 trials");
  if (set.empty()) raise(ErrorCode::EmptySpectrum, "run_experiment on an empty lattice set");

  SimulationReport rep;
  rep.m = set.m();
  rep.n = static_cast<std::int64_t>(set.n());
  rep.length = curve.length();
  rep.curve = format_curve_spec(curve);
  rep.master_seed = opts.master_seed;
  rep.oversample = opts.oversample;
  rep.stream_algorithm = std::string(kStreamAlgorithm);
  rep.trials = opts.trials;
  rep.per_trial.resize(static_cast<std::size_t>(opts.trials));

  detail::parallel_for(rep.per_trial.size(), opts.parallelism, [&](std::size_t i) {
    const WaveSample sample = sampler(i);
    const ZeroCount zc = count_zeros(sample, curve, opts.oversample);
    rep.per_trial[i] = {zc.count, zc.warn_flags};
  });

  // Exact integer power sums; every derived float is a fixed function of
  // these, so the report does not depend on scheduling.
  int128 s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  for (const TrialRecord& tr : rep.per_trial) {
    const int128 c = tr.count;
    s1 += c;
    s2 += c * c;
    s3 += c * c * c;
    s4 += c * c * c * c;
    if (tr.warn_flags != 0) ++rep.warned_trials;
    if ((tr.warn_flags & kWarnHighCount) != 0) ++rep.high_count_trials;
  }
  const int128 T = opts.trials;
  const double Td = static_cast<double>(opts.trials);
  rep.empirical_mean = static_cast<double>(s1) / Td;
  const int128 var_num = T * s2 - s1 * s1;  // T(T-1) * unbiased variance
  rep.empirical_variance = static_cast<double>(var_num) / (Td * (Td - 1.0));
  rep.stderr_mean = std::sqrt(rep.empirical_variance / Td);
  // T^3 * sum (c - mean)^4
  const int128 m4_num = T * T * T * s4 - 4 * T * T * s1 * s3 + 6 * T * s1 * s1 * s2 - 3 * s1 * s1 * s1 * s1;
  const double mu4 = static_cast<double>(m4_num) / (Td * Td * Td * Td);
  const double var2 = rep.empirical_variance * rep.empirical_variance;
  rep.stderr_variance = std::sqrt(std::max(0.0, (mu4 - var2 * (Td - 3.0) / (Td - 1.0)) / Td));

  rep.predicted_mean = expected_count(set.m(), curve);
  rep.z_score_mean = rep.stderr_mean > 0.0 ? (rep.empirical_mean - rep.predicted_mean) / rep.stderr_mean
                                           : std::numeric_limits<double>::infinity();
  if (opts.with_prediction && curve.has_nonvanishing_curvature()) {
    QuadratureOptions q;
    q.nodes = opts.quad_nodes;
    q.threads = opts.parallelism;
    const PredictionReport pr = variance_prediction(set, curve, q);
    rep.predicted_variance_leading = pr.variance_leading;
    rep.predicted_variance_integral = pr.variance_integral;
  }
  return rep;
}

SimulationReport run_experiment(const LatticePointSet& set, const TorusCurve& curve, const ExperimentOptions& opts) {
  return run_experiment_with_sampler(set, curve, opts, [&](std::uint64_t trial) {
    return sample_wave(set, opts.master_seed, trial);
  });
}

std::string per_trial_csv(const SimulationReport& report) {
  std::ostringstream os;
  os << "trial,count,warn_flags\n";
  for (std::size_t i = 0; i < report.per_trial.size(); ++i) {
    os << i << ',' << report.per_trial[i].count << ',' << report.per_trial[i].warn_flags << '\n';
  }
  return os.str();
}

}  // namespace arw
