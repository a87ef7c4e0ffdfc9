#pragma once

// Closed-form Kac-Rice predictions for the nodal intersection count Z of an
// arithmetic random wave with a curve: zero density, expected count, the
// two-point function K2 and its small-jet expansion, the variance leading
// constant, the approximate Kac-Rice variance integral, second moments of
// the kernel, and the near-diagonal determinant probe.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "arw/covariance.hpp"
#include "arw/curve.hpp"
#include "arw/lattice.hpp"

namespace arw {

/// K1 = sqrt(2 m), constant along any unit-speed curve.
double zero_density_k1(std::int64_t m);
/// E[Z] = sqrt(2 m) L.
double expected_count(std::int64_t m, const TorusCurve& curve);

/// (2/pi)(sqrt(1 - rho^2) + rho asin rho) = E|Y1 Y2| for unit normals with
/// correlation rho. Clamps |rho| <= 1 within 1e-12, else InvalidCorrelation.
double g_func(double rho);

/// Two-point correlation function of the zeros for a given jet.
double two_point_k2(const CovarianceJet<double>& jet, double alpha);

struct K2Expansion {
  double main = 0.0;     // (alpha / 2 pi^2)(r^2 - x1^2 - x2^2 + x12^2)
  double quartic = 0.0;  // r^4 + x1^4 + x2^4 + x12^4 (error budget)
};

/// x1 = r1/sqrt(alpha), x2 = r2/sqrt(alpha), x12 = r12/alpha. Requires
/// |r| < 1 - eps2, else ExpansionOutOfDomain.
K2Expansion k2_expansion(const CovarianceJet<double>& jet, double alpha, double eps2 = 0.5);

struct ExpansionStudy {
  double max_ratio = 0.0;  // max |K2 - K1^2 - main| / (alpha * quartic)
  std::int64_t samples = 0;
};

/// Samples (t1, t2) uniformly on [0, L]^2 until `samples` jets with
/// |r| < eps2 are collected, and records the worst residual ratio.
ExpansionStudy k2_expansion_study(const LatticePointSet& set, const TorusCurve& curve, std::int64_t samples,
                                  std::uint64_t seed, double eps2 = 0.5);

struct BConstant {
  double via_tangent_energy = 0.0;  // (1/N) sum_mu A(gamma, mu/|mu|)^2
  double via_double_integral = 0.0; // tensor quadrature of the defining integral
};

BConstant b_constant_both(const LatticePointSet& set, const TorusCurve& curve);
/// B_C(E). Throws NumericalMismatch if the two routes differ by more than 1e-8.
double b_constant(const LatticePointSet& set, const TorusCurve& curve);

/// c(tau, gamma) = sum_atoms w A(gamma, theta)^2. For circle arcs the closed
/// form is checked to 1e-8 (NumericalMismatch otherwise).
double c_tau_gamma(const AngularMeasure& measure, const TorusCurve& curve);

/// L^2/4 + |I|^2/8 + tau4 Re(I^2)/8, valid for every curve and every
/// measure with the pi/2 and reflection symmetries.
double c_tau_gamma_closed_form(double tau4, const TorusCurve& curve);

/// Circle-arc form L^2/4 + (r^2/8) sin^2(L/r) [1 + tau4 cos(2L/r + 4 phase)].
double c_tau_gamma_circle(double tau4, const CircleArcSpec& arc);

struct QuadratureOptions {
  /// Nodes per axis; 0 picks 6 nodes per wavelength of frequency 2 sqrt(m).
  int nodes = 0;
  /// Worker threads for the tensor sums; 0 = hardware concurrency.
  unsigned threads = 0;
};

int default_quadrature_nodes(std::int64_t m, double length);

struct SecondMoments {
  double int_r2 = 0.0;       // iint r^2
  double int_r1_sq = 0.0;    // iint (r1 / (2 pi sqrt m))^2
  double int_r2_sq = 0.0;    // iint (r2 / (2 pi sqrt m))^2
  double int_r12_sq = 0.0;   // iint (r12 / (4 pi^2 m))^2
  double target_r2 = 0.0;    // L^2 / N
  double target_r1_sq = 0.0; // L^2 / (2N)
  double target_r12_sq = 0.0;// B / N
  double parseval_r2 = 0.0;  // (1/N^2) sum_{mu, mu'} |int e(<mu - mu', gamma>)|^2, NaN if skipped
  double decay_constant = 0.0;      // max over v != 0 of |int e(<v, gamma>)| sqrt|v|
  double decay_constant_far = 0.0;  // same, restricted to |v| above the median
  int nodes = 0;
};

SecondMoments second_moments(const LatticePointSet& set, const TorusCurve& curve, const QuadratureOptions& opts = {},
                             bool with_parseval = true);

/// int_0^L exp(2 pi i <v, gamma(t)>) dt by composite Gauss-Legendre.
std::complex<double> oscillatory_curve_integral(const TorusCurve& curve, Vec2<double> v);

struct PredictionReport {
  std::int64_t m = 0;
  std::int64_t n = 0;
  double tau4 = 0.0;
  double length = 0.0;
  double expected_count = 0.0;
  double b_constant = 0.0;
  double leading_constant = 0.0;   // 4B - L^2
  double variance_leading = 0.0;   // (4B - L^2) m / N
  double variance_integral = 0.0;  // m iint (r^2 - r1^2/a - r2^2/a + r12^2/a^2)
  double int_r2 = 0.0;
  double int_r1_sq = 0.0;
  double int_r12_sq = 0.0;
  bool outside_hypotheses = false; // |tau4| >= 1 - 1e-6
  int nodes = 0;
};

/// Throws EmptySpectrum, ZeroCurvature.
PredictionReport variance_prediction(const LatticePointSet& set, const TorusCurve& curve,
                                     const QuadratureOptions& opts = {});

/// E[Z] + iint (K2 - K1^2), the exact Kac-Rice variance, integrated in
/// (t, z = t2 - t1) so the diagonal is an endpoint. Points with z sqrt(m) <
/// 0.3 are evaluated in 50-digit arithmetic. Cost grows like (m L^2) N.
double kac_rice_variance(const LatticePointSet& set, const TorusCurve& curve, const QuadratureOptions& opts = {});

struct ProbeResult {
  double exponent_fit = 0.0;          // least-squares slope of log P against log z
  double coeff_ratio = 0.0;           // P / [(2/9) pi^14 m^7 (A-1)(A^2-1) z^10] at the smallest z
  double coeff_ratio_corrected = 0.0; // P / [(1/9) pi^14 m^7 (1-A)(1+A)^2 z^10] at the smallest z
  double a_of_t1 = 0.0;
  bool all_positive = false;
  std::vector<double> z_values;
  std::vector<double> p_values;       // mu^2 (1 - rho^2), computed in 50-digit arithmetic
};

/// Evaluates P(z) = mu^2 (1 - rho^2) at t2 = t1 + z. Requires z in
/// (0, 0.5/sqrt m], t1 + z <= L and |tau4| < 1 - 1e-3 (ProbeDegenerate).
ProbeResult detsigma_scaling_probe(const LatticePointSet& set, const TorusCurve& curve, double t1,
                                   std::span<const double> z_values);

}  // namespace arw
