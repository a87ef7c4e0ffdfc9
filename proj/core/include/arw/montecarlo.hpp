#pragma once

// Monte Carlo simulation of the nodal intersection count: sample arithmetic
// random waves from replayable counter-based streams, restrict them to a
// curve, and count zeros by sign-change bracketing plus bisection.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "arw/curve.hpp"
#include "arw/lattice.hpp"

namespace arw {

/// F(x) = (2/sqrt N) sum_{half set} (b_mu cos 2pi<mu,x> - c_mu sin 2pi<mu,x>) + offset.
struct WaveSample {
  const LatticePointSet* set = nullptr;
  std::vector<double> b;
  std::vector<double> c;
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
  /// Test hook: constant added to F. Zero for real samples.
  double offset = 0.0;
};

/// Deterministic in (master_seed, trial_index). Requires N >= 2.
WaveSample sample_wave(const LatticePointSet& set, std::uint64_t master_seed, std::uint64_t trial_index);

struct FieldValue {
  double f = 0.0;
  double fprime = 0.0;
};

/// f(t) = F(gamma(t)) and f'(t). Throws InvalidRange for t outside [0, L].
FieldValue eval_field(const WaveSample& sample, const TorusCurve& curve, double t);

enum WarnFlag : std::uint32_t {
  kWarnSplit = 1u << 0,      // a same-sign grid interval held two roots
  kWarnTangency = 1u << 1,   // |f| dipped below 1e-9 without a sign change
  kWarnHighCount = 1u << 2,  // count > 10 sqrt(2m) L
};

struct ZeroCount {
  std::int64_t count = 0;
  std::vector<double> locations;
  double min_gap = 0.0;  // +inf when fewer than two zeros
  double refinement_tol = 0.0;
  int split_events = 0;
  int tangency_events = 0;
  std::uint32_t warn_flags = 0;
};

inline constexpr double kDefaultOversample = 8.0;

/// Grid step 1/(oversample sqrt(m) 2 pi); bisection to 1e-12 L. Requires
/// oversample >= 4.
ZeroCount count_zeros(const WaveSample& sample, const TorusCurve& curve, double oversample = kDefaultOversample);

struct ExperimentOptions {
  std::int64_t trials = 0;
  std::uint64_t master_seed = 0;
  double oversample = kDefaultOversample;
  unsigned parallelism = 0;  // 0 = hardware concurrency
  bool with_prediction = true;
  int quad_nodes = 0;        // forwarded to variance_prediction
};

struct TrialRecord {
  std::int64_t count = 0;
  std::uint32_t warn_flags = 0;
};

struct SimulationReport {
  std::int64_t m = 0;
  std::int64_t n = 0;
  double length = 0.0;
  std::string curve;
  std::uint64_t master_seed = 0;
  double oversample = 0.0;
  std::string stream_algorithm;
  std::int64_t trials = 0;
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double stderr_mean = 0.0;
  double stderr_variance = 0.0;
  double predicted_mean = 0.0;
  std::optional<double> predicted_variance_leading;
  std::optional<double> predicted_variance_integral;
  double z_score_mean = 0.0;
  std::int64_t warned_trials = 0;
  std::int64_t high_count_trials = 0;
  std::vector<TrialRecord> per_trial;
};

using WaveSampler = std::function<WaveSample(std::uint64_t trial_index)>;

/// Throws InvalidRange when trials < 2.
SimulationReport run_experiment(const LatticePointSet& set, const TorusCurve& curve, const ExperimentOptions& opts);
/// Same aggregation with a caller-supplied sample source (test hook).
SimulationReport run_experiment_with_sampler(const LatticePointSet& set, const TorusCurve& curve,
                                             const ExperimentOptions& opts, const WaveSampler& sampler);

/// `trial,count,warn_flags` CSV of the per-trial records.
std::string per_trial_csv(const SimulationReport& report);

}  // namespace arw
