#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "arw/curve.hpp"
#include "arw/errors.hpp"
#include "doctest.h"

using namespace arw;

namespace {
constexpr double kPi = std::numbers::pi;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an arw::Error");
  return ErrorCode::ParseError;
}

// Plain midpoint rule, independent of the library quadrature.
template <class F>
double midpoint(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}
}  // namespace

TEST_CASE("circle arc examples") {
  const auto full = make_circle_arc({0.5, 0.5, 0.2, 2 * kPi, 0});
  CHECK(full.length() == doctest::Approx(0.4 * kPi));
  for (double t : {0.0, 0.3, 1.0}) CHECK(full.curvature(t) == doctest::Approx(5.0));
  CHECK(full.has_nonvanishing_curvature());

  const auto quarter = make_circle_arc({0.5, 0.5, 0.2, kPi / 2, 0});
  for (double t = 0; t <= quarter.length(); t += 0.01) {
    CHECK(std::abs(dot(quarter.velocity(t), quarter.acceleration(t))) < 1e-15);
    CHECK(std::hypot(quarter.velocity(t).x, quarter.velocity(t).y) == doctest::Approx(1.0));
  }

  const auto a = make_circle_arc({0.5, 0.5, 0.25, 1.0, 0});
  CHECK(a.length() == doctest::Approx(0.25));
  const auto p0 = a.position(0.0);
  const auto pL = a.position(a.length());
  const double ang = std::atan2(pL.y - 0.5, pL.x - 0.5) - std::atan2(p0.y - 0.5, p0.x - 0.5);
  CHECK(ang == doctest::Approx(1.0));
}

TEST_CASE("circle arc errors") {
  CHECK(code_of([] { (void)make_circle_arc({0.5, 0.5, 0.5, 1.0, 0}); }) == ErrorCode::CurveTooLarge);
  CHECK(code_of([] { (void)make_circle_arc({0.5, 0.5, 0.0, 1.0, 0}); }) == ErrorCode::CurveTooLarge);
  CHECK(code_of([] { (void)make_circle_arc({0.5, 0.5, 0.2, 0.0, 0}); }) == ErrorCode::InvalidRange);
  CHECK(code_of([] { (void)make_circle_arc({0.5, 0.5, 0.2, 7.0, 0}); }) == ErrorCode::InvalidRange);
}

TEST_CASE("frames match finite differences") {
  const double h = 1e-5;
  const TorusCurve curves[] = {make_circle_arc({0.3, 0.7, 0.2, 2.0, 0.4}), make_segment({0.1, 0.2, 0.7, 0.9}),
                               make_circle_arc({0.5, 0.5, 0.45, 5.0, -1.0})};
  for (const auto& c : curves) {
    for (double u : {0.1, 0.37, 0.8}) {
      const double t = u * c.length();
      const auto pp = c.position(t + h);
      const auto pm = c.position(t - h);
      const auto p0 = c.position(t);
      const auto v = c.velocity(t);
      const auto a = c.acceleration(t);
      CHECK(std::abs((pp.x - pm.x) / (2 * h) - v.x) < 1e-6);
      CHECK(std::abs((pp.y - pm.y) / (2 * h) - v.y) < 1e-6);
      CHECK(std::abs((pp.x - 2 * p0.x + pm.x) / (h * h) - a.x) < 1e-3);
      CHECK(std::abs((pp.y - 2 * p0.y + pm.y) / (h * h) - a.y) < 1e-3);
      CHECK(c.velocity(t).x == doctest::Approx(std::cos(c.tangent_angle(t))));
      CHECK(c.velocity(t).y == doctest::Approx(std::sin(c.tangent_angle(t))));
    }
  }
}

TEST_CASE("custom curves") {
  const double r = 0.3;
  CustomCurveSpec spec;
  spec.length = 1.0;
  spec.position = [r](double t) { return Vec2<double>{0.5 + r * std::cos(t / r), 0.5 + r * std::sin(t / r)}; };
  spec.velocity = [r](double t) { return Vec2<double>{-std::sin(t / r), std::cos(t / r)}; };
  spec.acceleration = [r](double t) { return Vec2<double>{-std::cos(t / r) / r, -std::sin(t / r) / r}; };
  const auto c = make_custom_curve(spec);
  const auto ref = make_circle_arc({0.5, 0.5, r, 1.0 / r, 0});
  CHECK(c.has_nonvanishing_curvature());
  for (double th : {0.0, 0.4, 1.1}) {
    const Vec2<double> d{std::cos(th), std::sin(th)};
    CHECK(tangent_energy(c, d) == doctest::Approx(tangent_energy(ref, d)).epsilon(1e-10));
  }
  CHECK(std::abs(curve_integral_I(c) - curve_integral_I(ref)) < 1e-10);

  CustomCurveSpec bad = spec;
  bad.velocity = [](double) { return Vec2<double>{1.1, 0.0}; };
  CHECK(code_of([&] { (void)make_custom_curve(bad); }) == ErrorCode::InvalidCurve);
}

TEST_CASE("tangent energy") {
  const auto full = make_circle_arc({0.5, 0.5, 0.2, 2 * kPi, 0});
  for (double th : {0.0, 0.3, 1.2, 2.0}) {
    CHECK(tangent_energy(full, {std::cos(th), std::sin(th)}) == doctest::Approx(full.length() / 2).epsilon(1e-14));
  }

  const double r = 0.2;
  const auto quarter = make_circle_arc({0.5, 0.5, r, kPi / 2, 0});
  const double L = quarter.length();
  const double closed = L / 2 + (r / 4) * (std::sin(2 * (kPi / 2 + kPi / 2)) - std::sin(2 * kPi / 2));
  CHECK(tangent_energy(quarter, {1, 0}) == doctest::Approx(closed).epsilon(1e-14));
  const double oracle =
      midpoint([&](double t) { return std::pow(quarter.velocity(t).x, 2); }, 0.0, L, 200000);
  CHECK(std::abs(tangent_energy(quarter, {1, 0}) - oracle) < 1e-10);
  CHECK(std::abs(tangent_energy_quadrature(quarter, {1, 0}) - closed) < 1e-10);

  const TorusCurve curves[] = {make_circle_arc({0.3, 0.7, 0.2, 2.0, 0.4}), make_segment({0.1, 0.2, 0.7, 0.9}),
                               make_circle_arc({0.5, 0.5, 0.45, 5.0, -1.0})};
  for (const auto& c : curves) {
    for (double th : {0.0, 0.5, 2.5}) {
      const Vec2<double> d{std::cos(th), std::sin(th)};
      const Vec2<double> dp{-std::sin(th), std::cos(th)};
      CHECK(tangent_energy(c, d) + tangent_energy(c, dp) == doctest::Approx(c.length()).epsilon(1e-12));
      CHECK(tangent_energy(c, d) == doctest::Approx(tangent_energy(c, {-d.x, -d.y})).epsilon(1e-15));
      CHECK(std::abs(tangent_energy(c, d) - tangent_energy_quadrature(c, d)) < 1e-10);
    }
  }
  CHECK(code_of([&] { (void)tangent_energy(full, {1.0, 0.1}); }) == ErrorCode::InvalidDirection);
}

TEST_CASE("curve integral I") {
  const auto full = make_circle_arc({0.5, 0.5, 0.2, 2 * kPi, 0});
  CHECK(std::abs(curve_integral_I(full)) < 1e-15);
  const auto semi = make_circle_arc({0.5, 0.5, 0.2, kPi, 0.3});
  CHECK(std::abs(curve_integral_I(semi)) < 1e-15);
  for (double r : {0.1, 0.2, 0.4}) {
    const auto q = make_circle_arc({0.5, 0.5, r, kPi / 2, 0.7});
    CHECK(std::abs(curve_integral_I(q)) == doctest::Approx(r).epsilon(1e-14));
  }
  const TorusCurve curves[] = {make_circle_arc({0.3, 0.7, 0.2, 2.0, 0.4}), make_segment({0.1, 0.2, 0.7, 0.9}),
                               make_circle_arc({0.5, 0.5, 0.45, 5.0, -1.0})};
  for (const auto& c : curves) {
    const double re = midpoint([&](double t) { return std::cos(2 * c.tangent_angle(t)); }, 0, c.length(), 200000);
    const double im = midpoint([&](double t) { return std::sin(2 * c.tangent_angle(t)); }, 0, c.length(), 200000);
    CHECK(std::abs(curve_integral_I(c) - std::complex<double>(re, im)) < 1e-9);
    CHECK(std::abs(curve_integral_I(c) - curve_integral_I_quadrature(c)) < 1e-10);
  }
}

TEST_CASE("translation") {
  const auto c = make_circle_arc({0.3, 0.7, 0.2, 2.0, 0.4});
  const auto d = c.translated(0.25, -0.5);
  for (double t : {0.0, 0.2, 0.4}) {
    CHECK(d.position(t).x == doctest::Approx(c.position(t).x + 0.25));
    CHECK(d.position(t).y == doctest::Approx(c.position(t).y - 0.5));
    CHECK(d.velocity(t).x == doctest::Approx(c.velocity(t).x));
  }
}

TEST_CASE("curve spec grammar") {
  const auto c = parse_curve_spec("circle:r=0.2,arc=1.0");
  REQUIRE(c.circle() != nullptr);
  CHECK(c.circle()->radius == 0.2);
  CHECK(c.circle()->cx == 0.5);
  CHECK(c.length() == doctest::Approx(0.2));
  const auto full = parse_curve_spec("circle:r=0.2");
  CHECK(full.length() == doctest::Approx(0.4 * kPi));
  const auto s = parse_curve_spec("segment:len=0.5,dir=0.25,x0=0.1,y0=0.2");
  REQUIRE(s.segment() != nullptr);
  CHECK(s.segment()->direction == 0.25);
  CHECK_FALSE(s.has_nonvanishing_curvature());

  const auto back = parse_curve_spec(format_curve_spec(parse_curve_spec("circle:r=0.1234567891234,arc=2.5,phase=0.3")));
  CHECK(back.circle()->radius == 0.1234567891234);
  CHECK(back.circle()->arc_angle == 2.5);
  CHECK(back.circle()->phase == 0.3);

  for (std::string bad : {"", "circle", "circle:", "circle:r=abc", "ellipse:r=0.1", "circle:r=0.2,foo=1",
                          "segment:dir=0.1", "circle:r=0.2,arc=1.0,"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { (void)parse_curve_spec(bad); }) == ErrorCode::ParseError);
  }
  CHECK(code_of([] { (void)parse_curve_spec("circle:r=0.7"); }) == ErrorCode::CurveTooLarge);
}
