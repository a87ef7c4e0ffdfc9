#include "arw/curve.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "arw/errors.hpp"
#include "arw/quadrature.hpp"
#include "arw/summation.hpp"

namespace arw {
namespace {

constexpr double kCurveTol = 1e-9;
constexpr int kValidationGrid = 1000;
constexpr int kCurveQuadNodes = 2048;

std::map<std::string, double, std::less<>> parse_fields(std::string_view body, std::string_view text) {
  std::map<std::string, double, std::less<>> fields;
  bool more = !body.empty();
  while (more) {
    const auto comma = body.find(',');
    const std::string_view item = body.substr(0, comma);
    more = comma != std::string_view::npos;
    body = more ? body.substr(comma + 1) : std::string_view{};
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      raise(ErrorCode::ParseError, "malformed curve field '" + std::string(item) + "' in '" + std::string(text) + "'");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string_view val = item.substr(eq + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), value);
    if (ec != std::errc{} || ptr != val.data() + val.size()) {
      raise(ErrorCode::ParseError, "bad number '" + std::string(val) + "' for curve field '" + std::string(key) + "'");
    }
    if (!fields.emplace(std::string(key), value).second) {
      raise(ErrorCode::ParseError, "duplicate curve field '" + std::string(key) + "'");
    }
  }
  return fields;
}

double take(std::map<std::string, double, std::less<>>& fields, std::string_view key, std::optional<double> fallback) {
  if (auto it = fields.find(key); it != fields.end()) {
    const double v = it->second;
    fields.erase(it);
    return v;
  }
  if (!fallback) raise(ErrorCode::ParseError, "missing curve field '" + std::string(key) + "'");
  return *fallback;
}

std::string fmt17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

CurveKind TorusCurve::kind() const noexcept {
  switch (spec_.index()) {
    case 0: return CurveKind::CircleArc;
    case 1: return CurveKind::Segment;
    default: return CurveKind::Custom;
  }
}

double TorusCurve::tangent_angle(double t) const {
  if (const auto* c = circle()) return c->phase + t / c->radius + std::numbers::pi / 2;
  if (const auto* s = segment()) return s->direction;
  const Vec2<double> v = velocity(t);
  return std::atan2(v.y, v.x);
}

double TorusCurve::curvature(double t) const {
  if (const auto* c = circle()) return 1.0 / c->radius;
  if (segment() != nullptr) return 0.0;
  const Vec2<double> a = acceleration(t);
  return std::hypot(a.x, a.y);
}

bool TorusCurve::has_nonvanishing_curvature() const {
  if (circle() != nullptr) return true;
  if (segment() != nullptr) return false;
  for (int i = 0; i <= kValidationGrid; ++i) {
    if (!(curvature(length_ * i / kValidationGrid) > kCurveTol)) return false;
  }
  return true;
}

TorusCurve TorusCurve::translated(double dx, double dy) const {
  if (const auto* c = circle()) {
    CircleArcSpec s = *c;
    s.cx += dx;
    s.cy += dy;
    return TorusCurve(s, length_);
  }
  if (const auto* sg = segment()) {
    SegmentSpec s = *sg;
    s.x0 += dx;
    s.y0 += dy;
    return TorusCurve(s, length_);
  }
  CustomCurveSpec s = std::get<CustomCurveSpec>(spec_);
  auto pos = s.position;
  s.position = [pos, dx, dy](double t) {
    const Vec2<double> p = pos(t);
    return Vec2<double>{p.x + dx, p.y + dy};
  };
  return TorusCurve(std::move(s), length_);
}

TorusCurve make_circle_arc(const CircleArcSpec& spec) {
  if (!(spec.radius > 0.0 && spec.radius < 0.5)) {
    raise(ErrorCode::CurveTooLarge, "circle radius must lie in (0, 1/2)");
  }
  if (!(spec.arc_angle > 0.0 && spec.arc_angle <= 2.0 * std::numbers::pi + 1e-12)) {
    raise(ErrorCode::InvalidRange, "arc angle must lie in (0, 2 pi]");
  }
  return TorusCurve(spec, spec.radius * spec.arc_angle);
}

TorusCurve make_segment(const SegmentSpec& spec) {
  if (!(spec.length > 0.0)) raise(ErrorCode::InvalidRange, "segment length must be positive");
  return TorusCurve(spec, spec.length);
}

TorusCurve make_custom_curve(CustomCurveSpec spec) {
  if (!(spec.length > 0.0)) raise(ErrorCode::InvalidRange, "curve length must be positive");
  if (!spec.position || !spec.velocity || !spec.acceleration) {
    raise(ErrorCode::InvalidCurve, "custom curve needs position, velocity and acceleration");
  }
  for (int i = 0; i < kValidationGrid; ++i) {
    const double t = spec.length * i / (kValidationGrid - 1);
    const Vec2<double> v = spec.velocity(t);
    const Vec2<double> a = spec.acceleration(t);
    if (std::abs(std::hypot(v.x, v.y) - 1.0) > kCurveTol) {
      raise(ErrorCode::InvalidCurve, "custom curve is not unit speed at t=" + fmt17(t));
    }
    if (std::abs(dot(v, a)) > kCurveTol) {
      raise(ErrorCode::InvalidCurve, "velocity and acceleration not orthogonal at t=" + fmt17(t));
    }
  }
  const double length = spec.length;
  return TorusCurve(std::move(spec), length);
}

double tangent_energy_quadrature(const TorusCurve& curve, Vec2<double> direction) {
  const QuadratureRule rule = composite_with_nodes(0.0, curve.length(), kCurveQuadNodes);
  CompensatedSum<> acc;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double p = dot(direction, curve.velocity(rule.nodes[i]));
    acc += rule.weights[i] * p * p;
  }
  return acc.value();
}

double tangent_energy(const TorusCurve& curve, Vec2<double> direction) {
  if (std::abs(std::hypot(direction.x, direction.y) - 1.0) > kCurveTol) {
    raise(ErrorCode::InvalidDirection, "direction must be a unit vector");
  }
  const double L = curve.length();
  if (const auto* c = curve.circle()) {
    // <theta, gamma'>^2 = (1 + cos(2(theta - phi)))/2 with phi' = 1/r.
    const double theta = std::atan2(direction.y, direction.x);
    const double phi0 = curve.tangent_angle(0.0);
    const double phiL = curve.tangent_angle(L);
    return L / 2 + c->radius / 4 * (std::sin(2 * phiL - 2 * theta) - std::sin(2 * phi0 - 2 * theta));
  }
  if (const auto* s = curve.segment()) {
    const double p = direction.x * std::cos(s->direction) + direction.y * std::sin(s->direction);
    return L * p * p;
  }
  return tangent_energy_quadrature(curve, direction);
}

std::complex<double> curve_integral_I_quadrature(const TorusCurve& curve) {
  const QuadratureRule rule = composite_with_nodes(0.0, curve.length(), kCurveQuadNodes);
  CompensatedSum<> re;
  CompensatedSum<> im;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    // exp(2 i phi) = (vx + i vy)^2 avoids any branch choice for phi.
    const Vec2<double> v = curve.velocity(rule.nodes[i]);
    re += rule.weights[i] * (v.x * v.x - v.y * v.y);
    im += rule.weights[i] * (2.0 * v.x * v.y);
  }
  return {re.value(), im.value()};
}

std::complex<double> curve_integral_I(const TorusCurve& curve) {
  const double L = curve.length();
  if (const auto* c = curve.circle()) {
    const std::complex<double> i2(0.0, 2.0);
    const std::complex<double> e0 = std::exp(i2 * curve.tangent_angle(0.0));
    const std::complex<double> eL = std::exp(i2 * curve.tangent_angle(L));
    return c->radius / std::complex<double>(0.0, 2.0) * (eL - e0);
  }
  if (const auto* s = curve.segment()) {
    return L * std::exp(std::complex<double>(0.0, 2.0 * s->direction));
  }
  return curve_integral_I_quadrature(curve);
}

TorusCurve parse_curve_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) raise(ErrorCode::ParseError, "curve spec needs '<kind>:' prefix: " + std::string(text));
  const std::string_view kind = text.substr(0, colon);
  auto fields = parse_fields(text.substr(colon + 1), text);
  TorusCurve curve = [&] {
    if (kind == "circle") {
      CircleArcSpec s;
      s.radius = take(fields, "r", std::nullopt);
      s.arc_angle = take(fields, "arc", 2.0 * std::numbers::pi);
      s.cx = take(fields, "cx", 0.5);
      s.cy = take(fields, "cy", 0.5);
      s.phase = take(fields, "phase", 0.0);
      return make_circle_arc(s);
    }
    if (kind == "segment") {
      SegmentSpec s;
      s.length = take(fields, "len", std::nullopt);
      s.direction = take(fields, "dir", 0.0);
      s.x0 = take(fields, "x0", 0.5);
      s.y0 = take(fields, "y0", 0.5);
      return make_segment(s);
    }
    raise(ErrorCode::ParseError, "unknown curve kind '" + std::string(kind) + "'");
  }();
  if (!fields.empty()) raise(ErrorCode::ParseError, "unknown curve field '" + fields.begin()->first + "'");
  return curve;
}

std::string format_curve_spec(const TorusCurve& curve) {
  if (const auto* c = curve.circle()) {
    return "circle:r=" + fmt17(c->radius) + ",arc=" + fmt17(c->arc_angle) + ",cx=" + fmt17(c->cx) +
           ",cy=" + fmt17(c->cy) + ",phase=" + fmt17(c->phase);
  }
  if (const auto* s = curve.segment()) {
    return "segment:len=" + fmt17(s->length) + ",dir=" + fmt17(s->direction) + ",x0=" + fmt17(s->x0) +
           ",y0=" + fmt17(s->y0);
  }
  return "custom:len=" + fmt17(curve.length());
}

}  // namespace arw
