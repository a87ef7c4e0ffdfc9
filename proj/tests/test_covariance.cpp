#include <cmath>
#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "arw/covariance.hpp"
#include "arw/errors.hpp"
#include "doctest.h"

using namespace arw;

namespace {
constexpr double kPi = std::numbers::pi;

// r by direct summation over all points, no half-set folding.
double r_direct(const LatticePointSet& set, const TorusCurve& c, double t1, double t2) {
  const auto p = c.position(t1);
  const auto q = c.position(t2);
  double s = 0.0;
  for (const auto& mu : set.points()) s += std::cos(2 * kPi * (mu.x * (p.x - q.x) + mu.y * (p.y - q.y)));
  return s / double(set.n());
}
}  // namespace

TEST_CASE("diagonal jet") {
  const auto set = enumerate_lattice_points(65);
  const auto c = make_circle_arc({0.5, 0.5, 0.2, 2.0, 0.1});
  for (double t : {0.0, 0.1, 0.33}) {
    const auto j = covariance_jet(set, c, t, t);
    CHECK(j.r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(j.r1) < 1e-12);
    CHECK(std::abs(j.r2) < 1e-12);
    CHECK(j.r12 == doctest::Approx(2 * kPi * kPi * 65).epsilon(1e-13));
  }
  CHECK(alpha_of(65) == doctest::Approx(2 * kPi * kPi * 65));
}

TEST_CASE("m = 1 collapses to two cosines") {
  const auto set = enumerate_lattice_points(1);
  const auto c = make_circle_arc({0.4, 0.6, 0.3, 4.0, 0.0});
  for (double t1 : {0.0, 0.5, 1.1}) {
    for (double t2 : {0.2, 0.9}) {
      const auto p = c.position(t1);
      const auto q = c.position(t2);
      const double want = (std::cos(2 * kPi * (p.x - q.x)) + std::cos(2 * kPi * (p.y - q.y))) / 2;
      CHECK(covariance_jet(set, c, t1, t2).r == doctest::Approx(want).epsilon(1e-14));
    }
  }
}

TEST_CASE("jet derivatives match finite differences") {
  std::mt19937_64 rng(11);
  for (std::int64_t m : {5, 65, 5525}) {
    const auto set = enumerate_lattice_points(m);
    const auto c = make_circle_arc({0.5, 0.5, 0.3, 3.0, 0.2});
    const double L = c.length();
    const double h = 1e-6 * L;
    std::uniform_real_distribution<double> u(h, L - h);
    const double scale = 2 * kPi * std::sqrt(double(m));
    for (int k = 0; k < 20; ++k) {
      const double t1 = u(rng);
      const double t2 = u(rng);
      const auto j = covariance_jet(set, c, t1, t2);
      CHECK(j.r == doctest::Approx(r_direct(set, c, t1, t2)).epsilon(1e-12));
      const double fd1 = (r_direct(set, c, t1 + h, t2) - r_direct(set, c, t1 - h, t2)) / (2 * h);
      const double fd2 = (r_direct(set, c, t1, t2 + h) - r_direct(set, c, t1, t2 - h)) / (2 * h);
      const double fd12 =
          (covariance_jet(set, c, t1, t2 + h).r1 - covariance_jet(set, c, t1, t2 - h).r1) / (2 * h);
      CHECK(std::abs(fd1 - j.r1) < 1e-5 * scale);
      CHECK(std::abs(fd2 - j.r2) < 1e-5 * scale);
      CHECK(std::abs(fd12 - j.r12) < 1e-5 * scale * scale);
    }
  }
}

TEST_CASE("jet symmetry and translation invariance") {
  const auto set = enumerate_lattice_points(325);
  const auto c = make_circle_arc({0.5, 0.5, 0.25, 4.0, 0.7});
  const auto d = c.translated(0.123, -0.77);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, c.length());
  for (int k = 0; k < 50; ++k) {
    const double t1 = u(rng);
    const double t2 = u(rng);
    const auto a = covariance_jet(set, c, t1, t2);
    const auto b = covariance_jet(set, c, t2, t1);
    CHECK(a.r == doctest::Approx(b.r).epsilon(1e-12));
    CHECK(a.r1 == doctest::Approx(b.r2).epsilon(1e-10));
    CHECK(a.r12 == doctest::Approx(b.r12).epsilon(1e-10));
    const auto e = covariance_jet(set, d, t1, t2);
    CHECK(std::abs(a.r - e.r) < 1e-10);
    CHECK(std::abs(a.r12 - e.r12) < 1e-10 * alpha_of(325));
  }
}

TEST_CASE("extended precision jet agrees with double") {
  using R = boost::multiprecision::cpp_bin_float_50;
  const auto set = enumerate_lattice_points(5525);
  const auto c = make_circle_arc({0.5, 0.5, 0.2, 1.0, 0.0});
  const auto a = covariance_jet(set, c, 0.03, 0.11);
  const auto b = covariance_jet_unchecked(set, c, R(0.03), R(0.11));
  CHECK(a.r == doctest::Approx(static_cast<double>(b.r)).epsilon(1e-10));
  CHECK(a.r12 == doctest::Approx(static_cast<double>(b.r12)).epsilon(1e-10));
}

TEST_CASE("jet errors") {
  const auto c = make_circle_arc({0.5, 0.5, 0.2, 1.0, 0.0});
  CHECK_THROWS_AS(covariance_jet(enumerate_lattice_points(3), c, 0.0, 0.1), Error);
  CHECK_THROWS_AS(covariance_jet(enumerate_lattice_points(5), c, 0.0, 0.3), Error);
  CHECK_THROWS_AS(covariance_jet(enumerate_lattice_points(5), c, -0.1, 0.1), Error);
}

TEST_CASE("conditioned factors") {
  const double a = alpha_of(25);
  const auto z = conditioned_factors({0, 0, 0, 0}, a);
  CHECK(z.m_factor == doctest::Approx(a));
  CHECK(z.rho == doctest::Approx(0.0));
  CHECK(z.det_sigma == doctest::Approx(a * a));
  const auto one = conditioned_factors({0, 0, 0, a}, a);
  CHECK(one.rho == doctest::Approx(1.0));
  CHECK(std::abs(one.det_sigma) < 1e-9 * a * a);
  CHECK_THROWS_AS(conditioned_factors({1.0, 0, 0, 0}, a), Error);

  // Over many real jets the correlation stays in [-1, 1] and det >= 0.
  const auto set = enumerate_lattice_points(25);
  const auto c = make_circle_arc({0.5, 0.5, 0.3, 4.0, 0.2});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, c.length());
  int bad = 0;
  for (int k = 0; k < 100000; ++k) {
    const double t1 = u(rng);
    const double t2 = u(rng);
    const auto j = covariance_jet(set, c, t1, t2);
    if (std::abs(j.r) >= 1.0 - 1e-9) continue;
    const auto f = conditioned_factors(j, a);
    if (!(std::abs(f.rho) <= 1.0 && f.det_sigma >= 0.0)) ++bad;
    const double poly = conditioned_determinant(j, a);
    const double q = 1 - j.r * j.r;
    if (std::abs(f.det_sigma - poly / q) > 1e-8 * a * a) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("diagonal moments") {
  std::mt19937_64 rng(9);
  for (std::int64_t m : {1, 2, 5, 25, 65, 325, 5525}) {
    const auto set = enumerate_lattice_points(m);
    const double tau4 = tau_fourier(set, 4);
    const auto c = make_circle_arc({0.5, 0.5, 0.3, 6.0, 0.4});
    std::uniform_real_distribution<double> u(0.0, c.length());
    for (int k = 0; k < 10; ++k) {
      const double t = u(rng);
      const auto d = diagonal_moments(set, c, t);
      const double phi = c.tangent_angle(t);
      const double md = double(m);
      CHECK(d.s2 == doctest::Approx(md / 2).epsilon(1e-12));
      CHECK(d.s4 == doctest::Approx(md * md * (3.0 / 8 + tau4 * std::cos(4 * phi) / 8)).epsilon(1e-9));
      CHECK(d.s6 == doctest::Approx(md * md * md * (5.0 / 16 + 3 * tau4 * std::cos(4 * phi) / 16)).epsilon(1e-9));
      CHECK(d.a_of_t == doctest::Approx(tau4 * std::cos(4 * phi)));
      CHECK(d.alpha == doctest::Approx(alpha_of(m)));
      CHECK(d.c_m() == doctest::Approx(std::pow(2 * kPi, 4) * d.s4));
      CHECK(d.e_m() == doctest::Approx(-std::pow(2 * kPi, 6) * d.s6));
    }
  }
  CHECK_THROWS_AS(diagonal_moments(enumerate_lattice_points(3), make_segment({0.5, 0.5, 0, 0.1}), 0.0), Error);
}
