#include "arw/kacrice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "arw/quadrature.hpp"
#include "arw/summation.hpp"
#include "parallel.hpp"

namespace arw {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNodesPerWavelength = 6.0;
constexpr int kSmoothNodes = 512;
constexpr double kDualRouteTol = 1e-8;

void require_nonempty(const LatticePointSet& set, const char* what) {
  if (set.empty()) raise(ErrorCode::EmptySpectrum, std::string(what) + " on an empty lattice set");
}

void require_curvature(const TorusCurve& curve, const char* what) {
  if (!curve.has_nonvanishing_curvature()) {
    raise(ErrorCode::ZeroCurvature, std::string(what) + " requires nowhere-vanishing curvature");
  }
}

// Per-node values cos/sin(2 pi <mu, gamma(t)>) and 2 pi <mu, gamma'(t)> for
// the half set, laid out node-major.
struct NodeTable {
  std::size_t half = 0;
  std::vector<double> cos_phase;
  std::vector<double> sin_phase;
  std::vector<double> grad;

  NodeTable(const LatticePointSet& set, const TorusCurve& curve, const std::vector<double>& nodes)
      : half(set.half_set().size()) {
    cos_phase.resize(nodes.size() * half);
    sin_phase.resize(nodes.size() * half);
    grad.resize(nodes.size() * half);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const CurveFrame<double> f = curve.frame(nodes[i]);
      for (std::size_t k = 0; k < half; ++k) {
        const LatticePoint& mu = set.half_set()[k];
        const double mx = static_cast<double>(mu.x);
        const double my = static_cast<double>(mu.y);
        const double phase = kTwoPi * (mx * f.position.x + my * f.position.y);
        cos_phase[i * half + k] = std::cos(phase);
        sin_phase[i * half + k] = std::sin(phase);
        grad[i * half + k] = kTwoPi * (mx * f.velocity.x + my * f.velocity.y);
      }
    }
  }

  // Jet at (t_i, t_j) from the angle-difference identities.
  [[nodiscard]] CovarianceJet<double> jet(std::size_t i, std::size_t j, double scale) const {
    const double* ci = &cos_phase[i * half];
    const double* si = &sin_phase[i * half];
    const double* gi = &grad[i * half];
    const double* cj = &cos_phase[j * half];
    const double* sj = &sin_phase[j * half];
    const double* gj = &grad[j * half];
    double r = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double r12 = 0.0;
    for (std::size_t k = 0; k < half; ++k) {
      const double c = ci[k] * cj[k] + si[k] * sj[k];
      const double s = si[k] * cj[k] - ci[k] * sj[k];
      r += c;
      r1 -= s * gi[k];
      r2 += s * gj[k];
      r12 += c * gi[k] * gj[k];
    }
    return {r * scale, r1 * scale, r2 * scale, r12 * scale};
  }
};

struct TensorMoments {
  double rr = 0.0;     // iint r^2
  double r1r1 = 0.0;   // iint r1^2
  double r2r2 = 0.0;   // iint r2^2
  double rr12 = 0.0;   // iint r12^2
};

// Tensor Gauss-Legendre sums of the squared jet components, exploiting
// r(s,t) = r(t,s), r1(s,t) = r2(t,s). Rows are reduced independently and
// merged in row order, so the result is identical for any thread count.
TensorMoments tensor_moments(const LatticePointSet& set, const TorusCurve& curve, const QuadratureRule& rule,
                             unsigned threads) {
  const NodeTable table(set, curve, rule.nodes);
  const std::size_t n = rule.size();
  const double scale = 2.0 / static_cast<double>(set.n());
  std::vector<std::array<double, 4>> rows(n);
  detail::parallel_for(n, threads, [&](std::size_t i) {
    CompensatedSum<> rr;
    CompensatedSum<> r1r1;
    CompensatedSum<> r2r2;
    CompensatedSum<> rr12;
    for (std::size_t j = i; j < n; ++j) {
      const CovarianceJet<double> jt = table.jet(i, j, scale);
      const double w = rule.weights[i] * rule.weights[j];
      if (j == i) {
        rr += w * jt.r * jt.r;
        r1r1 += w * jt.r1 * jt.r1;
        r2r2 += w * jt.r2 * jt.r2;
        rr12 += w * jt.r12 * jt.r12;
      } else {
        const double cross = jt.r1 * jt.r1 + jt.r2 * jt.r2;
        rr += 2.0 * w * jt.r * jt.r;
        r1r1 += w * cross;
        r2r2 += w * cross;
        rr12 += 2.0 * w * jt.r12 * jt.r12;
      }
    }
    rows[i] = {rr.value(), r1r1.value(), r2r2.value(), rr12.value()};
  });
  CompensatedSum<> rr;
  CompensatedSum<> r1r1;
  CompensatedSum<> r2r2;
  CompensatedSum<> rr12;
  for (const auto& row : rows) {
    rr += row[0];
    r1r1 += row[1];
    r2r2 += row[2];
    rr12 += row[3];
  }
  return {rr.value(), r1r1.value(), r2r2.value(), rr12.value()};
}

QuadratureRule tensor_rule(const LatticePointSet& set, const TorusCurve& curve, const QuadratureOptions& opts) {
  const int nodes = opts.nodes > 0 ? opts.nodes : default_quadrature_nodes(set.m(), curve.length());
  return composite_with_nodes(0.0, curve.length(), nodes);
}

// K2 from the jet using mu sqrt(1 - rho^2) = sqrt(det) and mu rho = off.
template <class Real>
Real k2_from_jet(const CovarianceJet<Real>& jet, const Real& alpha) {
  using std::asin;
  using std::sqrt;
  const Real q = Real(1) - jet.r * jet.r;
  if (!(q > Real(0))) raise(ErrorCode::DegenerateJet, "|r| >= 1 off the diagonal");
  const Real d1 = alpha * q - jet.r1 * jet.r1;
  const Real d2 = alpha * q - jet.r2 * jet.r2;
  const Real mu = sqrt(d1 > Real(0) ? d1 : Real(0)) * sqrt(d2 > Real(0) ? d2 : Real(0));
  const Real off = jet.r12 * q + jet.r * jet.r1 * jet.r2;
  Real det = d1 * d2 - off * off;
  if (det < Real(0)) det = Real(0);
  Real rho = mu > Real(0) ? off / mu : Real(0);
  if (rho > Real(1)) rho = Real(1);
  if (rho < Real(-1)) rho = Real(-1);
  const Real pi = boost::math::constants::pi<Real>();
  return (sqrt(det) + off * asin(rho)) / (pi * pi * q * sqrt(q));
}

}  // namespace

double zero_density_k1(std::int64_t m) { return std::sqrt(2.0 * static_cast<double>(m)); }

double expected_count(std::int64_t m, const TorusCurve& curve) { return zero_density_k1(m) * curve.length(); }

double g_func(double rho) {
  constexpr double kTol = 1e-12;
  if (!(std::abs(rho) <= 1.0 + kTol)) raise(ErrorCode::InvalidCorrelation, "|rho| exceeds 1");
  rho = std::clamp(rho, -1.0, 1.0);
  return 2.0 / kPi * (std::sqrt(1.0 - rho * rho) + rho * std::asin(rho));
}

double two_point_k2(const CovarianceJet<double>& jet, double alpha) {
  const ConditionedFactors cf = conditioned_factors(jet, alpha);
  const double q = 1.0 - jet.r * jet.r;
  // (pi/2) g_func(rho) = sqrt(1 - rho^2) + rho asin rho
  return cf.m_factor * (kPi / 2.0) * g_func(cf.rho) / (kPi * kPi * q * std::sqrt(q));
}

K2Expansion k2_expansion(const CovarianceJet<double>& jet, double alpha, double eps2) {
  if (!(std::abs(jet.r) < 1.0 - eps2)) raise(ErrorCode::ExpansionOutOfDomain, "expansion needs |r| < 1 - eps2");
  const double sa = std::sqrt(alpha);
  const double x = jet.r;
  const double x1 = jet.r1 / sa;
  const double x2 = jet.r2 / sa;
  const double x12 = jet.r12 / alpha;
  K2Expansion out;
  out.main = alpha / (2.0 * kPi * kPi) * (x * x - x1 * x1 - x2 * x2 + x12 * x12);
  out.quartic = x * x * x * x + x1 * x1 * x1 * x1 + x2 * x2 * x2 * x2 + x12 * x12 * x12 * x12;
  return out;
}

ExpansionStudy k2_expansion_study(const LatticePointSet& set, const TorusCurve& curve, std::int64_t samples,
                                  std::uint64_t seed, double eps2) {
  require_nonempty(set, "k2_expansion_study");
  const double alpha = alpha_of(set.m());
  const double k1sq = 2.0 * static_cast<double>(set.m());
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, curve.length());
  ExpansionStudy out;
  while (out.samples < samples) {
    const double t1 = unif(gen);
    const double t2 = unif(gen);
    const CovarianceJet<double> jet = covariance_jet_unchecked(set, curve, t1, t2);
    if (!(std::abs(jet.r) < 1.0 - eps2)) continue;
    const K2Expansion e = k2_expansion(jet, alpha, eps2);
    if (e.quartic > 0.0) {
      const double resid = two_point_k2(jet, alpha) - k1sq - e.main;
      out.max_ratio = std::max(out.max_ratio, std::abs(resid) / (alpha * e.quartic));
    }
    ++out.samples;
  }
  return out;
}

BConstant b_constant_both(const LatticePointSet& set, const TorusCurve& curve) {
  require_nonempty(set, "b_constant");
  require_curvature(curve, "b_constant");
  const auto pts = set.points();
  const double n = static_cast<double>(set.n());

  CompensatedSum<> via_a;
  for (const LatticePoint& mu : pts) {
    const double norm = std::hypot(static_cast<double>(mu.x), static_cast<double>(mu.y));
    const double a = tangent_energy(curve, {mu.x / norm, mu.y / norm});
    via_a += a * a;
  }

  const QuadratureRule rule = composite_with_nodes(0.0, curve.length(), kSmoothNodes);
  // u[i][k] = <mu_k/|mu_k|, gamma'(t_i)>^2
  std::vector<double> u(rule.size() * pts.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Vec2<double> v = curve.velocity(rule.nodes[i]);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double norm = std::hypot(static_cast<double>(pts[k].x), static_cast<double>(pts[k].y));
      const double p = (pts[k].x * v.x + pts[k].y * v.y) / norm;
      u[i * pts.size() + k] = p * p;
    }
  }
  CompensatedSum<> via_b;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    for (std::size_t j = 0; j < rule.size(); ++j) {
      double inner = 0.0;
      for (std::size_t k = 0; k < pts.size(); ++k) inner += u[i * pts.size() + k] * u[j * pts.size() + k];
      via_b += rule.weights[i] * rule.weights[j] * inner;
    }
  }
  return {via_a.value() / n, via_b.value() / n};
}

double b_constant(const LatticePointSet& set, const TorusCurve& curve) {
  const BConstant b = b_constant_both(set, curve);
  if (std::abs(b.via_tangent_energy - b.via_double_integral) > kDualRouteTol) {
    raise(ErrorCode::NumericalMismatch, "b_constant routes disagree");
  }
  return b.via_tangent_energy;
}

double c_tau_gamma_closed_form(double tau4, const TorusCurve& curve) {
  const double L = curve.length();
  const std::complex<double> I = curve_integral_I(curve);
  return L * L / 4.0 + std::norm(I) / 8.0 + tau4 * (I * I).real() / 8.0;
}

double c_tau_gamma_circle(double tau4, const CircleArcSpec& arc) {
  const double L = arc.radius * arc.arc_angle;
  const double s = std::sin(L / arc.radius);
  const double base = arc.radius * arc.radius * s * s / 8.0;
  return L * L / 4.0 + base + base * std::cos(2.0 * L / arc.radius + 4.0 * arc.phase) * tau4;
}

double c_tau_gamma(const AngularMeasure& measure, const TorusCurve& curve) {
  CompensatedSum<> acc;
  for (const Atom& atom : measure.atoms()) {
    const double a = tangent_energy(curve, {std::cos(atom.angle), std::sin(atom.angle)});
    acc += atom.weight * a * a;
  }
  const double c = acc.value();
  if (const auto* arc = curve.circle()) {
    const double closed = c_tau_gamma_circle(tau_fourier(measure, 4), *arc);
    if (std::abs(closed - c) > kDualRouteTol) raise(ErrorCode::NumericalMismatch, "c(tau, gamma) closed form disagrees");
  }
  return c;
}

int default_quadrature_nodes(std::int64_t m, double length) {
  const double wavelengths = 2.0 * std::sqrt(static_cast<double>(m)) * length;
  return std::max(64, static_cast<int>(std::ceil(kNodesPerWavelength * wavelengths)));
}

std::complex<double> oscillatory_curve_integral(const TorusCurve& curve, Vec2<double> v) {
  const double norm = std::hypot(v.x, v.y);
  const int nodes = std::max(64, static_cast<int>(std::ceil(2.0 * kNodesPerWavelength * norm * curve.length())));
  const QuadratureRule rule = composite_with_nodes(0.0, curve.length(), nodes);
  CompensatedSum<> re;
  CompensatedSum<> im;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Vec2<double> p = curve.position(rule.nodes[i]);
    const double phase = kTwoPi * dot(v, p);
    re += rule.weights[i] * std::cos(phase);
    im += rule.weights[i] * std::sin(phase);
  }
  return {re.value(), im.value()};
}

SecondMoments second_moments(const LatticePointSet& set, const TorusCurve& curve, const QuadratureOptions& opts,
                             bool with_parseval) {
  require_nonempty(set, "second_moments");
  require_curvature(curve, "second_moments");
  const double m = static_cast<double>(set.m());
  const double n = static_cast<double>(set.n());
  const double L = curve.length();
  const QuadratureRule rule = tensor_rule(set, curve, opts);
  const TensorMoments tm = tensor_moments(set, curve, rule, opts.threads);

  SecondMoments out;
  out.nodes = static_cast<int>(rule.size());
  out.int_r2 = tm.rr;
  out.int_r1_sq = tm.r1r1 / (4.0 * kPi * kPi * m);
  out.int_r2_sq = tm.r2r2 / (4.0 * kPi * kPi * m);
  out.int_r12_sq = tm.rr12 / (16.0 * kPi * kPi * kPi * kPi * m * m);
  out.target_r2 = L * L / n;
  out.target_r1_sq = L * L / (2.0 * n);
  out.target_r12_sq = b_constant(set, curve) / n;
  out.parseval_r2 = std::numeric_limits<double>::quiet_NaN();

  if (with_parseval) {
    // Group ordered pairs by their difference vector.
    std::map<LatticePoint, std::int64_t> diffs;
    for (const LatticePoint& a : set.points()) {
      for (const LatticePoint& b : set.points()) ++diffs[{a.x - b.x, a.y - b.y}];
    }
    std::vector<std::pair<LatticePoint, std::int64_t>> items(diffs.begin(), diffs.end());
    std::vector<double> mag2(items.size());
    std::vector<double> decay(items.size());
    detail::parallel_for(items.size(), opts.threads, [&](std::size_t i) {
      const LatticePoint v = items[i].first;
      if (v.x == 0 && v.y == 0) {
        mag2[i] = L * L;
        decay[i] = 0.0;
        return;
      }
      const std::complex<double> J =
          oscillatory_curve_integral(curve, {static_cast<double>(v.x), static_cast<double>(v.y)});
      mag2[i] = std::norm(J);
      decay[i] = std::abs(J) * std::sqrt(std::hypot(static_cast<double>(v.x), static_cast<double>(v.y)));
    });
    CompensatedSum<> total;
    std::vector<std::pair<double, double>> by_norm;
    for (std::size_t i = 0; i < items.size(); ++i) {
      total += static_cast<double>(items[i].second) * mag2[i];
      const LatticePoint v = items[i].first;
      if (v.x != 0 || v.y != 0) by_norm.emplace_back(std::hypot(static_cast<double>(v.x), static_cast<double>(v.y)), decay[i]);
    }
    out.parseval_r2 = total.value() / (n * n);
    std::sort(by_norm.begin(), by_norm.end());
    for (std::size_t i = 0; i < by_norm.size(); ++i) {
      out.decay_constant = std::max(out.decay_constant, by_norm[i].second);
      if (i >= by_norm.size() / 2) out.decay_constant_far = std::max(out.decay_constant_far, by_norm[i].second);
    }
  }
  return out;
}

PredictionReport variance_prediction(const LatticePointSet& set, const TorusCurve& curve,
                                     const QuadratureOptions& opts) {
  require_nonempty(set, "variance_prediction");
  require_curvature(curve, "variance_prediction");
  const double m = static_cast<double>(set.m());
  const double n = static_cast<double>(set.n());
  const double L = curve.length();
  const double alpha = alpha_of(set.m());

  PredictionReport rep;
  rep.m = set.m();
  rep.n = static_cast<std::int64_t>(set.n());
  rep.tau4 = tau_fourier(set, 4);
  rep.length = L;
  rep.expected_count = expected_count(set.m(), curve);
  rep.b_constant = b_constant(set, curve);
  rep.leading_constant = 4.0 * rep.b_constant - L * L;
  rep.variance_leading = rep.leading_constant * m / n;
  rep.outside_hypotheses = std::abs(rep.tau4) >= 1.0 - 1e-6;

  const QuadratureRule rule = tensor_rule(set, curve, opts);
  const TensorMoments tm = tensor_moments(set, curve, rule, opts.threads);
  rep.nodes = static_cast<int>(rule.size());
  rep.int_r2 = tm.rr;
  rep.int_r1_sq = tm.r1r1 / (4.0 * kPi * kPi * m);
  rep.int_r12_sq = tm.rr12 / (16.0 * kPi * kPi * kPi * kPi * m * m);
  rep.variance_integral = m * (tm.rr - tm.r1r1 / alpha - tm.r2r2 / alpha + tm.rr12 / (alpha * alpha));
  return rep;
}

double kac_rice_variance(const LatticePointSet& set, const TorusCurve& curve, const QuadratureOptions& opts) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  require_nonempty(set, "kac_rice_variance");
  const double m = static_cast<double>(set.m());
  const double sqrt_m = std::sqrt(m);
  const double L = curve.length();
  const double alpha = alpha_of(set.m());
  const Real alpha_hp = Real(2) * boost::math::constants::pi<Real>() * boost::math::constants::pi<Real>() * Real(m);
  const int z_nodes = opts.nodes > 0 ? opts.nodes : default_quadrature_nodes(set.m(), L);
  const QuadratureRule zr = composite_with_nodes(0.0, L, z_nodes);

  std::vector<double> inner(zr.size(), 0.0);
  detail::parallel_for(zr.size(), opts.threads, [&](std::size_t a) {
    const double z = zr.nodes[a];
    const int t_nodes = std::max(32, static_cast<int>(std::ceil(z_nodes * (L - z) / L)));
    const QuadratureRule tr = composite_with_nodes(0.0, L - z, t_nodes);
    const bool near = z * sqrt_m < 0.3;
    CompensatedSum<> acc;
    for (std::size_t b = 0; b < tr.size(); ++b) {
      const double t = tr.nodes[b];
      double k2 = 0.0;
      if (near) {
        const Real th(t);
        k2 = static_cast<double>(k2_from_jet(covariance_jet_unchecked(set, curve, th, th + Real(z)), alpha_hp));
      } else {
        k2 = k2_from_jet(covariance_jet_unchecked(set, curve, t, t + z), alpha);
      }
      acc += tr.weights[b] * (k2 - 2.0 * m);
    }
    inner[a] = acc.value();
  });
  CompensatedSum<> total;
  for (std::size_t a = 0; a < zr.size(); ++a) total += zr.weights[a] * inner[a];
  return expected_count(set.m(), curve) + 2.0 * total.value();
}

ProbeResult detsigma_scaling_probe(const LatticePointSet& set, const TorusCurve& curve, double t1,
                                   std::span<const double> z_values) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  require_nonempty(set, "detsigma_scaling_probe");
  if (z_values.empty()) raise(ErrorCode::InvalidRange, "probe needs at least one z value");
  const double m = static_cast<double>(set.m());
  const double tau4 = tau_fourier(set, 4);
  if (!(std::abs(tau4) < 1.0 - 1e-3)) raise(ErrorCode::ProbeDegenerate, "|tau4| too close to 1");
  const double zmax = 0.5 / std::sqrt(m);
  for (double z : z_values) {
    if (!(z > 0.0 && z <= zmax)) raise(ErrorCode::InvalidRange, "probe z must lie in (0, 0.5/sqrt(m)]");
    if (!(t1 >= 0.0 && t1 + z <= curve.length())) raise(ErrorCode::InvalidRange, "probe points must lie on the curve");
  }

  ProbeResult out;
  out.a_of_t1 = tau4 * std::cos(4.0 * curve.tangent_angle(t1));
  const Real alpha = Real(2) * boost::math::constants::pi<Real>() * boost::math::constants::pi<Real>() * Real(m);
  const Real t1r(t1);
  out.all_positive = true;
  for (double z : z_values) {
    const CovarianceJet<Real> jet = covariance_jet_unchecked(set, curve, t1r, t1r + Real(z));
    const double p = static_cast<double>(conditioned_determinant(jet, alpha));
    out.z_values.push_back(z);
    out.p_values.push_back(p);
    if (!(p > 0.0)) out.all_positive = false;
  }

  // Least-squares slope of log P on log z over the positive samples.
  CompensatedSum<> sx, sy, sxx, sxy;
  int count = 0;
  for (std::size_t i = 0; i < out.z_values.size(); ++i) {
    if (!(out.p_values[i] > 0.0)) continue;
    const double x = std::log(out.z_values[i]);
    const double y = std::log(out.p_values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2) {
    const double denom = count * sxx.value() - sx.value() * sx.value();
    out.exponent_fit = (count * sxy.value() - sx.value() * sy.value()) / denom;
  } else {
    out.exponent_fit = std::numeric_limits<double>::quiet_NaN();
  }

  const auto smallest = std::min_element(out.z_values.begin(), out.z_values.end()) - out.z_values.begin();
  const double z = out.z_values[smallest];
  const double p = out.p_values[smallest];
  const double a = out.a_of_t1;
  const double base = std::pow(kPi, 14) * std::pow(m, 7) * std::pow(z, 10);
  const double stated = 2.0 / 9.0 * base * (a - 1.0) * (a * a - 1.0);
  const double corrected = 1.0 / 9.0 * base * (1.0 - a) * (1.0 + a) * (1.0 + a);
  if (stated == 0.0 || corrected == 0.0) raise(ErrorCode::ProbeDegenerate, "A(t1) makes the leading coefficient vanish");
  out.coeff_ratio = p / stated;
  out.coeff_ratio_corrected = p / corrected;
  return out;
}

}  // namespace arw
