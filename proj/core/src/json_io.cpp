#include "arw/json_io.hpp"

#include <cmath>
#include <limits>

#include "arw/errors.hpp"

namespace arw {
namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json lattice_to_json(const LatticePointSet& set) {
  nlohmann::json pts = nlohmann::json::array();
  for (const LatticePoint& p : set.points()) pts.push_back({p.x, p.y});
  return {{"m", set.m()},
          {"n", set.n()},
          {"points", std::move(pts)},
          {"tau4", set.empty() ? nlohmann::json(nullptr) : nlohmann::json(tau_fourier(set, 4))}};
}

LatticePointSet lattice_from_json(const nlohmann::json& j) {
  try {
    LatticePointSet set = enumerate_lattice_points(j.at("m").get<std::int64_t>());
    const auto& pts = j.at("points");
    if (j.at("n").get<std::size_t>() != set.n() || pts.size() != set.n()) {
      raise(ErrorCode::ParseError, "lattice JSON point count does not match m");
    }
    for (std::size_t i = 0; i < set.n(); ++i) {
      const LatticePoint p{pts[i].at(0).get<std::int64_t>(), pts[i].at(1).get<std::int64_t>()};
      if (!(p == set.points()[i])) raise(ErrorCode::ParseError, "lattice JSON points do not match m");
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ParseError, e.what());
  }
}

void to_json(nlohmann::json& j, const PredictionReport& r) {
  j = {{"m", r.m},
       {"n", r.n},
       {"tau4", r.tau4},
       {"L", r.length},
       {"expected_count", r.expected_count},
       {"b_constant", r.b_constant},
       {"leading_constant", r.leading_constant},
       {"variance_leading", r.variance_leading},
       {"variance_integral", r.variance_integral},
       {"int_r2", r.int_r2},
       {"int_r1_sq", r.int_r1_sq},
       {"int_r12_sq", r.int_r12_sq},
       {"outside_hypotheses", r.outside_hypotheses},
       {"nodes", r.nodes}};
}

void from_json(const nlohmann::json& j, PredictionReport& r) {
  j.at("m").get_to(r.m);
  j.at("n").get_to(r.n);
  j.at("tau4").get_to(r.tau4);
  j.at("L").get_to(r.length);
  j.at("expected_count").get_to(r.expected_count);
  j.at("b_constant").get_to(r.b_constant);
  j.at("leading_constant").get_to(r.leading_constant);
  j.at("variance_leading").get_to(r.variance_leading);
  j.at("variance_integral").get_to(r.variance_integral);
  j.at("int_r2").get_to(r.int_r2);
  j.at("int_r1_sq").get_to(r.int_r1_sq);
  j.at("int_r12_sq").get_to(r.int_r12_sq);
  r.outside_hypotheses = j.value("outside_hypotheses", std::abs(r.tau4) >= 1.0 - 1e-6);
  r.nodes = j.value("nodes", 0);
}

void to_json(nlohmann::json& j, const SimulationReport& r) {
  j = {{"m", r.m},
       {"n", r.n},
       {"L", r.length},
       {"curve", r.curve},
       {"master_seed", r.master_seed},
       {"oversample", r.oversample},
       {"stream_algorithm", r.stream_algorithm},
       {"trials", r.trials},
       {"empirical_mean", r.empirical_mean},
       {"empirical_variance", r.empirical_variance},
       {"stderr_mean", r.stderr_mean},
       {"stderr_variance", r.stderr_variance},
       {"predicted_mean", r.predicted_mean},
       {"predicted_variance_leading", optional_number(r.predicted_variance_leading)},
       {"predicted_variance_integral", optional_number(r.predicted_variance_integral)},
       {"z_score_mean", finite_or_null(r.z_score_mean)},
       {"warned_trials", r.warned_trials},
       {"high_count_trials", r.high_count_trials}};
}

void from_json(const nlohmann::json& j, SimulationReport& r) {
  j.at("m").get_to(r.m);
  j.at("n").get_to(r.n);
  j.at("L").get_to(r.length);
  j.at("curve").get_to(r.curve);
  j.at("master_seed").get_to(r.master_seed);
  j.at("oversample").get_to(r.oversample);
  j.at("stream_algorithm").get_to(r.stream_algorithm);
  j.at("trials").get_to(r.trials);
  j.at("empirical_mean").get_to(r.empirical_mean);
  j.at("empirical_variance").get_to(r.empirical_variance);
  j.at("stderr_mean").get_to(r.stderr_mean);
  j.at("stderr_variance").get_to(r.stderr_variance);
  j.at("predicted_mean").get_to(r.predicted_mean);
  r.predicted_variance_leading = read_optional(j, "predicted_variance_leading");
  r.predicted_variance_integral = read_optional(j, "predicted_variance_integral");
  r.z_score_mean = read_optional(j, "z_score_mean").value_or(std::numeric_limits<double>::infinity());
  j.at("warned_trials").get_to(r.warned_trials);
  j.at("high_count_trials").get_to(r.high_count_trials);
  r.per_trial.clear();
}

void to_json(nlohmann::json& j, const ProbeResult& r) {
  j = {{"exponent_fit", finite_or_null(r.exponent_fit)},
       {"coeff_ratio", r.coeff_ratio},
       {"coeff_ratio_corrected", r.coeff_ratio_corrected},
       {"a_of_t1", r.a_of_t1},
       {"all_positive", r.all_positive},
       {"z_values", r.z_values},
       {"p_values", r.p_values}};
}

void from_json(const nlohmann::json& j, ProbeResult& r) {
  r.exponent_fit = read_optional(j, "exponent_fit").value_or(std::numeric_limits<double>::quiet_NaN());
  j.at("coeff_ratio").get_to(r.coeff_ratio);
  j.at("coeff_ratio_corrected").get_to(r.coeff_ratio_corrected);
  j.at("a_of_t1").get_to(r.a_of_t1);
  j.at("all_positive").get_to(r.all_positive);
  j.at("z_values").get_to(r.z_values);
  j.at("p_values").get_to(r.p_values);
}

void to_json(nlohmann::json& j, const SecondMoments& r) {
  j = {{"int_r2", r.int_r2},
       {"int_r1_sq", r.int_r1_sq},
       {"int_r2_sq", r.int_r2_sq},
       {"int_r12_sq", r.int_r12_sq},
       {"target_r2", r.target_r2},
       {"target_r1_sq", r.target_r1_sq},
       {"target_r12_sq", r.target_r12_sq},
       {"parseval_r2", finite_or_null(r.parseval_r2)},
       {"decay_constant", r.decay_constant},
       {"decay_constant_far", r.decay_constant_far},
       {"nodes", r.nodes}};
}

}  // namespace arw
