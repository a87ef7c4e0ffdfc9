#include "arw/covariance.hpp"

#include <algorithm>

namespace arw {

double DiagonalMoments::c_m() const noexcept {
  const double tp = 2.0 * std::numbers::pi;
  return tp * tp * tp * tp * s4;
}

double DiagonalMoments::e_m() const noexcept {
  const double tp = 2.0 * std::numbers::pi;
  return -tp * tp * tp * tp * tp * tp * s6;
}

double alpha_of(std::int64_t m) noexcept {
  return 2.0 * std::numbers::pi * std::numbers::pi * static_cast<double>(m);
}

CovarianceJet<double> covariance_jet(const LatticePointSet& set, const TorusCurve& curve, double t1, double t2) {
  if (set.empty()) raise(ErrorCode::EmptySpectrum, "covariance_jet on an empty lattice set");
  const double L = curve.length();
  if (!(t1 >= 0.0 && t1 <= L && t2 >= 0.0 && t2 <= L)) {
    raise(ErrorCode::InvalidRange, "jet parameters must lie in [0, L]");
  }
  return covariance_jet_unchecked(set, curve, t1, t2);
}

ConditionedFactors conditioned_factors(const CovarianceJet<double>& jet, double alpha) {
  if (!(std::abs(jet.r) < 1.0)) raise(ErrorCode::DegenerateJet, "conditioning requires |r| < 1");
  const double q = 1.0 - jet.r * jet.r;
  // Both radicands are conditional variances and are >= 0 for a valid jet;
  // clamp rounding-level negatives.
  const double d1 = std::max(0.0, alpha * q - jet.r1 * jet.r1);
  const double d2 = std::max(0.0, alpha * q - jet.r2 * jet.r2);
  ConditionedFactors out;
  out.m_factor = std::sqrt(d1) * std::sqrt(d2);
  const double off = jet.r12 * q + jet.r * jet.r1 * jet.r2;
  out.rho = out.m_factor > 0.0 ? std::clamp(off / out.m_factor, -1.0, 1.0) : 0.0;
  out.det_sigma = out.m_factor * out.m_factor * (1.0 - out.rho * out.rho) / q;
  return out;
}

DiagonalMoments diagonal_moments(const LatticePointSet& set, const TorusCurve& curve, double t) {
  if (set.empty()) raise(ErrorCode::EmptySpectrum, "diagonal_moments on an empty lattice set");
  const Vec2<double> v = curve.velocity(t);
  CompensatedSum<> s2;
  CompensatedSum<> s4;
  CompensatedSum<> s6;
  for (const LatticePoint& mu : set.points()) {
    const double p = static_cast<double>(mu.x) * v.x + static_cast<double>(mu.y) * v.y;
    const double p2 = p * p;
    s2 += p2;
    s4 += p2 * p2;
    s6 += p2 * p2 * p2;
  }
  const double n = static_cast<double>(set.n());
  DiagonalMoments out;
  out.alpha = alpha_of(set.m());
  out.s2 = s2.value() / n;
  out.s4 = s4.value() / n;
  out.s6 = s6.value() / n;
  out.tau4 = tau_fourier(set, 4);
  out.a_of_t = out.tau4 * std::cos(4.0 * curve.tangent_angle(t));
  return out;
}

}  // namespace arw
