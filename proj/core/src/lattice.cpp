#include "arw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "arw/errors.hpp"
#include "arw/summation.hpp"

namespace arw {
namespace {

constexpr double kSymmetryTol = 1e-12;

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * std::numbers::pi);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

double angular_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, 2.0 * std::numbers::pi - d);
}

// Multiset equality of atoms under a map of the angle, within tolerance.
template <class Map>
bool maps_to_itself(const std::vector<Atom>& atoms, Map&& map) {
  std::vector<bool> used(atoms.size(), false);
  for (const Atom& a : atoms) {
    const double image = map(a.angle);
    bool matched = false;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (used[j]) continue;
      if (angular_distance(atoms[j].angle, image) < kSymmetryTol &&
          std::abs(atoms[j].weight - a.weight) < kSymmetryTol) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

struct PairKeyHash {
  std::size_t operator()(const LatticePoint& p) const noexcept {
    return std::hash<std::uint64_t>{}(static_cast<std::uint64_t>(p.x) * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(p.y));
  }
};

}  // namespace

double LatticePointSet::lambda_squared() const noexcept {
  return 4.0 * std::numbers::pi * std::numbers::pi * static_cast<double>(m_);
}

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) raise(ErrorCode::InvalidRange, "isqrt of a negative number");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_perfect_square(std::int64_t n) {
  if (n < 0) return false;
  const std::int64_t r = isqrt(n);
  return r * r == n;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n < 1) raise(ErrorCode::InvalidRange, "factorize requires n >= 1");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

bool is_sum_of_two_squares(std::int64_t n) {
  if (n < 0) return false;
  if (n == 0) return true;
  for (const auto& [p, e] : factorize(n)) {
    if (p % 4 == 3 && e % 2 == 1) return false;
  }
  return true;
}

std::int64_t r2_count(std::int64_t n) {
  if (n < 1) raise(ErrorCode::InvalidRange, "r2_count requires n >= 1");
  std::int64_t prod = 4;
  for (const auto& [p, e] : factorize(n)) {
    if (p % 4 == 1) {
      prod *= e + 1;
    } else if (p % 4 == 3 && e % 2 == 1) {
      return 0;
    }
  }
  return prod;
}

LatticePointSet enumerate_lattice_points(std::int64_t m) {
  if (m < 1) raise(ErrorCode::InvalidRange, "energy level m must be >= 1");
  LatticePointSet set;
  set.m_ = m;
  const std::int64_t s = isqrt(m);
  for (std::int64_t x = -s; x <= s; ++x) {
    const std::int64_t rest = m - x * x;
    const std::int64_t y = isqrt(rest);
    if (y * y != rest) continue;
    if (y == 0) {
      set.points_.push_back({x, 0});
    } else {
      set.points_.push_back({x, -y});
      set.points_.push_back({x, y});
    }
  }
  set.angles_.reserve(set.points_.size());
  for (const LatticePoint& p : set.points_) {
    set.angles_.push_back(std::atan2(static_cast<double>(p.y), static_cast<double>(p.x)));
    if (p.y > 0 || (p.y == 0 && p.x > 0)) set.half_.push_back(p);
  }
  return set;
}

std::string_view to_string(MeasureKind kind) noexcept {
  switch (kind) {
    case MeasureKind::FromLattice: return "from-lattice";
    case MeasureKind::Uniform: return "uniform";
    case MeasureKind::Cilleruelo: return "cilleruelo";
    case MeasureKind::TiltedCilleruelo: return "tilted-cilleruelo";
    case MeasureKind::CustomAtomic: return "custom-atomic";
  }
  return "unknown";
}

AngularMeasure::AngularMeasure(MeasureKind kind, std::vector<Atom> atoms)
    : kind_(kind), atoms_(std::move(atoms)) {
  if (atoms_.empty()) raise(ErrorCode::InvalidMeasure, "measure has no atoms");
  CompensatedSum<> total;
  for (const Atom& a : atoms_) {
    if (!(a.weight >= 0.0)) raise(ErrorCode::InvalidMeasure, "negative atom weight");
    total += a.weight;
  }
  if (std::abs(total.value() - 1.0) > kSymmetryTol) {
    raise(ErrorCode::InvalidMeasure, "weights do not sum to 1");
  }
  const bool rot = maps_to_itself(atoms_, [](double a) { return a + std::numbers::pi / 2; });
  const bool refl = maps_to_itself(atoms_, [](double a) { return -a; });
  if (!rot || !refl) {
    raise(ErrorCode::InvalidMeasure, "measure is not invariant under pi/2 rotation and reflection");
  }
}

AngularMeasure AngularMeasure::from_lattice(const LatticePointSet& set) {
  if (set.empty()) raise(ErrorCode::EmptySpectrum, "lattice set is empty");
  std::vector<Atom> atoms;
  const double w = 1.0 / static_cast<double>(set.n());
  for (double a : set.angles()) atoms.push_back({a, w});
  return AngularMeasure(MeasureKind::FromLattice, std::move(atoms));
}

AngularMeasure AngularMeasure::uniform() {
  constexpr int kAtoms = 64;
  std::vector<Atom> atoms;
  for (int j = 0; j < kAtoms; ++j) {
    atoms.push_back({2.0 * std::numbers::pi * j / kAtoms, 1.0 / kAtoms});
  }
  return AngularMeasure(MeasureKind::Uniform, std::move(atoms));
}

AngularMeasure AngularMeasure::cilleruelo() {
  std::vector<Atom> atoms;
  for (int j = 0; j < 4; ++j) atoms.push_back({j * std::numbers::pi / 2, 0.25});
  return AngularMeasure(MeasureKind::Cilleruelo, std::move(atoms));
}

AngularMeasure AngularMeasure::tilted_cilleruelo() {
  std::vector<Atom> atoms;
  for (int j = 0; j < 4; ++j) atoms.push_back({std::numbers::pi / 4 + j * std::numbers::pi / 2, 0.25});
  return AngularMeasure(MeasureKind::TiltedCilleruelo, std::move(atoms));
}

AngularMeasure AngularMeasure::custom(std::vector<Atom> atoms) {
  return AngularMeasure(MeasureKind::CustomAtomic, std::move(atoms));
}

AngularMeasure AngularMeasure::rotated(double angle) const {
  AngularMeasure out = *this;
  for (Atom& a : out.atoms_) a.angle += angle;
  return out;
}

double tau_fourier(const LatticePointSet& set, int k) {
  if (set.empty()) raise(ErrorCode::EmptySpectrum, "tau_fourier on an empty lattice set");
  CompensatedSum<> re;
  CompensatedSum<> im;
  for (double a : set.angles()) {
    re += std::cos(k * a);
    im += std::sin(k * a);
  }
  const double n = static_cast<double>(set.n());
  if (std::abs(im.value() / n) > kSymmetryTol) {
    raise(ErrorCode::NumericalMismatch, "sine part of tau_hat does not vanish");
  }
  return re.value() / n;
}

double tau_fourier(const AngularMeasure& measure, int k) {
  CompensatedSum<> re;
  for (const Atom& a : measure.atoms()) re += a.weight * std::cos(k * a.angle);
  return re.value();
}

MordellResult mordell_solvability(std::int64_t m, std::int64_t h) {
  if (m < 1 || h <= 0 || h >= m) raise(ErrorCode::InvalidRange, "mordell_solvability requires 0 < h < m");
  MordellResult res;
  res.gcd_value = std::gcd(m, h);
  res.square_cond = is_perfect_square(h * (2 * m - h));
  res.sum2_cond = is_sum_of_two_squares(res.gcd_value);
  res.solvable = res.square_cond && res.sum2_cond;
  res.count = res.solvable ? r2_count(res.gcd_value) : 0;
  res.ordered_pairs = 2 * res.count;
  return res;
}

RieszEnergy riesz_energy(const LatticePointSet& set) {
  if (set.n() < 2) raise(ErrorCode::EmptySpectrum, "riesz_energy needs at least two points");
  const auto pts = set.points();
  CompensatedSum<> energy;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      const std::int64_t dx = pts[i].x - pts[j].x;
      const std::int64_t dy = pts[i].y - pts[j].y;
      energy += 1.0 / std::sqrt(static_cast<double>(dx * dx + dy * dy));
    }
  }
  const double e = energy.value();
  return {e, e / static_cast<double>(set.n())};
}

QuadrupleDiagnostics quadruple_diagnostics(const LatticePointSet& set) {
  QuadrupleDiagnostics out;
  if (set.empty()) return out;
  const auto pts = set.points();
  std::unordered_map<LatticePoint, std::int64_t, PairKeyHash> sums;
  for (const LatticePoint& a : pts) {
    for (const LatticePoint& b : pts) ++sums[{a.x + b.x, a.y + b.y}];
  }
  std::vector<std::pair<LatticePoint, std::int64_t>> table(sums.begin(), sums.end());
  std::sort(table.begin(), table.end());
  for (const auto& [s, count] : table) {
    if (auto it = sums.find({-s.x, -s.y}); it != sums.end()) out.zero_sum_count += count * it->second;
  }
  CompensatedSum<> inv;
  for (const auto& [s1, c1] : table) {
    for (const auto& [s2, c2] : table) {
      const std::int64_t x = s1.x + s2.x;
      const std::int64_t y = s1.y + s2.y;
      if (x == 0 && y == 0) continue;
      inv += static_cast<double>(c1 * c2) / std::sqrt(static_cast<double>(x * x + y * y));
    }
  }
  out.inverse_norm_sum = inv.value();
  return out;
}

double divisor_diagnostic(std::int64_t m, double cap) {
  if (m < 1) raise(ErrorCode::InvalidRange, "divisor_diagnostic requires m >= 1");
  std::vector<std::int64_t> divisors;
  for (std::int64_t d = 1; d * d <= m; ++d) {
    if (m % d != 0) continue;
    divisors.push_back(d);
    if (d != m / d) divisors.push_back(m / d);
  }
  std::sort(divisors.begin(), divisors.end());
  CompensatedSum<> total;
  for (std::int64_t d : divisors) {
    if (static_cast<double>(d) < cap && is_sum_of_two_squares(d)) {
      total += 1.0 / std::sqrt(static_cast<double>(d));
    }
  }
  return total.value();
}

}  // namespace arw
