#pragma once

// Arc-length-parametrized curves on R^2/Z^2. Positions are kept as smooth
// lifts in R^2; the covariance kernel is 1-periodic so nothing downstream
// needs the reduction mod 1.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace arw {

template <class Real>
struct Vec2 {
  Real x{};
  Real y{};
};

template <class Real>
Real dot(const Vec2<Real>& a, const Vec2<Real>& b) {
  return a.x * b.x + a.y * b.y;
}

template <class Real>
struct CurveFrame {
  Vec2<Real> position;
  Vec2<Real> velocity;
  Vec2<Real> acceleration;
};

struct CircleArcSpec {
  double cx = 0.5;
  double cy = 0.5;
  double radius = 0.0;
  double arc_angle = 0.0;
  double phase = 0.0;
};

struct SegmentSpec {
  double x0 = 0.5;
  double y0 = 0.5;
  double direction = 0.0;  // tangent angle
  double length = 0.0;
};

struct CustomCurveSpec {
  double length = 0.0;
  std::function<Vec2<double>(double)> position;
  std::function<Vec2<double>(double)> velocity;
  std::function<Vec2<double>(double)> acceleration;
};

enum class CurveKind { CircleArc, Segment, Custom };

class TorusCurve {
 public:
  [[nodiscard]] CurveKind kind() const noexcept;
  [[nodiscard]] double length() const noexcept { return length_; }

  /// Position, unit velocity and acceleration at arc length t. Circle arcs
  /// and segments are evaluated in Real; custom curves in double.
  template <class Real>
  [[nodiscard]] CurveFrame<Real> frame(const Real& t) const;

  [[nodiscard]] Vec2<double> position(double t) const { return frame(t).position; }
  [[nodiscard]] Vec2<double> velocity(double t) const { return frame(t).velocity; }
  [[nodiscard]] Vec2<double> acceleration(double t) const { return frame(t).acceleration; }
  /// phi(t) with velocity = (cos phi, sin phi); continuous in t for circle arcs.
  [[nodiscard]] double tangent_angle(double t) const;
  [[nodiscard]] double curvature(double t) const;
  /// kappa > 0 everywhere (sampled on a 1000-point grid for custom curves).
  [[nodiscard]] bool has_nonvanishing_curvature() const;

  [[nodiscard]] const CircleArcSpec* circle() const noexcept { return std::get_if<CircleArcSpec>(&spec_); }
  [[nodiscard]] const SegmentSpec* segment() const noexcept { return std::get_if<SegmentSpec>(&spec_); }

  /// Same curve translated by (dx, dy).
  [[nodiscard]] TorusCurve translated(double dx, double dy) const;

 private:
  friend TorusCurve make_circle_arc(const CircleArcSpec& spec);
  friend TorusCurve make_segment(const SegmentSpec& spec);
  friend TorusCurve make_custom_curve(CustomCurveSpec spec);

  using Spec = std::variant<CircleArcSpec, SegmentSpec, CustomCurveSpec>;
  TorusCurve(Spec spec, double length) : spec_(std::move(spec)), length_(length) {}

  Spec spec_;
  double length_ = 0.0;
};

/// Throws CurveTooLarge unless radius is in (0, 1/2), InvalidRange unless
/// arc_angle is in (0, 2 pi].
TorusCurve make_circle_arc(const CircleArcSpec& spec);
/// Straight segment (kappa = 0). Accepted by mean and c(tau, gamma)
/// computations; variance predictions reject it.
TorusCurve make_segment(const SegmentSpec& spec);
/// Validates unit speed and <velocity, acceleration> = 0 to 1e-9 on a
/// 1000-point grid; throws InvalidCurve otherwise.
TorusCurve make_custom_curve(CustomCurveSpec spec);

/// A(gamma, theta) = int_0^L <theta, velocity(t)>^2 dt. Closed form for
/// circle arcs and segments, quadrature otherwise.
double tangent_energy(const TorusCurve& curve, Vec2<double> direction);
double tangent_energy_quadrature(const TorusCurve& curve, Vec2<double> direction);

/// I(gamma) = int_0^L exp(2 i phi(t)) dt.
std::complex<double> curve_integral_I(const TorusCurve& curve);
std::complex<double> curve_integral_I_quadrature(const TorusCurve& curve);

/// `circle:r=<float>,arc=<float>,cx=<float>,cy=<float>,phase=<float>`
/// (cx, cy default 0.5, phase 0) or
/// `segment:len=<float>,dir=<float>,x0=<float>,y0=<float>`.
TorusCurve parse_curve_spec(std::string_view text);
std::string format_curve_spec(const TorusCurve& curve);

// ---------------------------------------------------------------------------

template <class Real>
CurveFrame<Real> TorusCurve::frame(const Real& t) const {
  using std::cos;
  using std::sin;
  if (const auto* c = std::get_if<CircleArcSpec>(&spec_)) {
    const Real r(c->radius);
    const Real angle = Real(c->phase) + t / r;
    const Real ca = cos(angle);
    const Real sa = sin(angle);
    return {{Real(c->cx) + r * ca, Real(c->cy) + r * sa}, {-sa, ca}, {-ca / r, -sa / r}};
  }
  if (const auto* s = std::get_if<SegmentSpec>(&spec_)) {
    const Real dir(s->direction);
    const Real ux = cos(dir);
    const Real uy = sin(dir);
    return {{Real(s->x0) + t * ux, Real(s->y0) + t * uy}, {ux, uy}, {Real(0), Real(0)}};
  }
  const auto& cu = std::get<CustomCurveSpec>(spec_);
  const double td = static_cast<double>(t);
  const Vec2<double> p = cu.position(td);
  const Vec2<double> v = cu.velocity(td);
  const Vec2<double> a = cu.acceleration(td);
  return {{Real(p.x), Real(p.y)}, {Real(v.x), Real(v.y)}, {Real(a.x), Real(a.y)}};
}

}  // namespace arw
