#pragma once

// Restricted covariance kernel r(t1, t2) = r_F(gamma(t1) - gamma(t2)) of the
// arithmetic random wave and the Gaussian conditioning factors built on it.
// Derivatives are analytic term by term; the jet is templated on the scalar
// so the near-diagonal determinant probe can run in extended precision.

#include <cmath>
#include <numbers>

#include <boost/math/constants/constants.hpp>

#include "arw/curve.hpp"
#include "arw/errors.hpp"
#include "arw/lattice.hpp"
#include "arw/summation.hpp"

namespace arw {

template <class Real = double>
struct CovarianceJet {
  Real r{};
  Real r1{};   // d r / d t1
  Real r2{};   // d r / d t2
  Real r12{};  // d^2 r / d t1 d t2
};

struct ConditionedFactors {
  double m_factor = 0.0;  // sqrt(a(1-r^2) - r1^2) * sqrt(a(1-r^2) - r2^2)
  double rho = 0.0;       // conditional correlation of f'(t1), f'(t2)
  double det_sigma = 0.0;
};

struct DiagonalMoments {
  double alpha = 0.0;   // 2 pi^2 m
  double s2 = 0.0;      // (1/N) sum <mu, gamma'>^2, equals m/2
  double s4 = 0.0;      // (1/N) sum <mu, gamma'>^4
  double s6 = 0.0;      // (1/N) sum <mu, gamma'>^6
  double tau4 = 0.0;
  double a_of_t = 0.0;  // tau4 * cos(4 phi(t))

  /// Directional parts of d^4 r / dt2^4 and d^6 r / dt2^6 on the diagonal.
  [[nodiscard]] double c_m() const noexcept;
  [[nodiscard]] double e_m() const noexcept;
};

/// alpha = 2 pi^2 m, the variance of f'(t).
double alpha_of(std::int64_t m) noexcept;

/// Jet without range checks; t1, t2 may be any Real arc-length parameters.
template <class Real>
CovarianceJet<Real> covariance_jet_unchecked(const LatticePointSet& set, const TorusCurve& curve, const Real& t1,
                                             const Real& t2);

/// Throws EmptySpectrum / InvalidRange.
CovarianceJet<double> covariance_jet(const LatticePointSet& set, const TorusCurve& curve, double t1, double t2);

/// Throws DegenerateJet when |r| >= 1.
ConditionedFactors conditioned_factors(const CovarianceJet<double>& jet, double alpha);

/// mu^2 (1 - rho^2) expanded as a polynomial in the jet, so it stays
/// meaningful (and nonnegative up to rounding) as r -> 1.
template <class Real>
Real conditioned_determinant(const CovarianceJet<Real>& jet, const Real& alpha) {
  const Real q = Real(1) - jet.r * jet.r;
  const Real d1 = alpha * q - jet.r1 * jet.r1;
  const Real d2 = alpha * q - jet.r2 * jet.r2;
  const Real off = jet.r12 * q + jet.r * jet.r1 * jet.r2;
  return d1 * d2 - off * off;
}

DiagonalMoments diagonal_moments(const LatticePointSet& set, const TorusCurve& curve, double t);

// ---------------------------------------------------------------------------

template <class Real>
CovarianceJet<Real> covariance_jet_unchecked(const LatticePointSet& set, const TorusCurve& curve, const Real& t1,
                                             const Real& t2) {
  using std::cos;
  using std::sin;
  const CurveFrame<Real> f1 = curve.frame(t1);
  const CurveFrame<Real> f2 = curve.frame(t2);
  const Vec2<Real> delta{f1.position.x - f2.position.x, f1.position.y - f2.position.y};
  const Real two_pi = Real(2) * boost::math::constants::pi<Real>();
  CompensatedSum<Real> r;
  CompensatedSum<Real> r1;
  CompensatedSum<Real> r2;
  CompensatedSum<Real> r12;
  // +-mu contribute identical terms, so sum the half set and double.
  for (const LatticePoint& mu : set.half_set()) {
    const Real mx(static_cast<double>(mu.x));
    const Real my(static_cast<double>(mu.y));
    const Real phase = two_pi * (mx * delta.x + my * delta.y);
    const Real c = cos(phase);
    const Real s = sin(phase);
    const Real g1 = two_pi * (mx * f1.velocity.x + my * f1.velocity.y);
    const Real g2 = two_pi * (mx * f2.velocity.x + my * f2.velocity.y);
    r += c;
    r1 -= s * g1;
    r2 += s * g2;
    r12 += c * g1 * g2;
  }
  const Real scale = Real(2) / Real(static_cast<double>(set.n()));
  return {r.value() * scale, r1.value() * scale, r2.value() * scale, r12.value() * scale};
}

}  // namespace arw
