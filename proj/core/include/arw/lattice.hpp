#pragma once

// Lattice points on the circle |mu|^2 = m and the arithmetic sums built on
// them. Everything that must be exact (membership, counts, Mordell/Pall
// solvability) stays in 64-bit integers; angles are derived doubles.

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace arw {

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend constexpr bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend constexpr auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// The set E = {mu in Z^2 : |mu|^2 = m}, lexicographically ordered.
class LatticePointSet {
 public:
  LatticePointSet() = default;

  [[nodiscard]] std::int64_t m() const noexcept { return m_; }
  [[nodiscard]] std::size_t n() const noexcept { return points_.size(); }
  [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
  [[nodiscard]] std::span<const LatticePoint> points() const noexcept { return points_; }
  /// One representative of each +-mu pair: y > 0, or y == 0 and x > 0.
  [[nodiscard]] std::span<const LatticePoint> half_set() const noexcept { return half_; }
  /// atan2(y, x) for each entry of points(), same order.
  [[nodiscard]] std::span<const double> angles() const noexcept { return angles_; }
  /// Laplace eigenvalue lambda^2 = 4 pi^2 m.
  [[nodiscard]] double lambda_squared() const noexcept;

 private:
  friend LatticePointSet enumerate_lattice_points(std::int64_t m);

  std::int64_t m_ = 0;
  std::vector<LatticePoint> points_;
  std::vector<LatticePoint> half_;
  std::vector<double> angles_;
};

LatticePointSet enumerate_lattice_points(std::int64_t m);

// Integer helpers. All exact for arguments below 2^62.
std::int64_t isqrt(std::int64_t n);
bool is_perfect_square(std::int64_t n);
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);
/// No prime = 3 (mod 4) divides n to an odd power.
bool is_sum_of_two_squares(std::int64_t n);

/// r_2(n) from the factorization: 4 * prod_{p = 1 mod 4} (e_p + 1), or 0.
std::int64_t r2_count(std::int64_t n);

enum class MeasureKind { FromLattice, Uniform, Cilleruelo, TiltedCilleruelo, CustomAtomic };

std::string_view to_string(MeasureKind kind) noexcept;

struct Atom {
  double angle = 0.0;
  double weight = 0.0;
};

/// Probability measure on S^1 invariant under rotation by pi/2 and under
/// (x, y) -> (x, -y). Construction validates both symmetries.
class AngularMeasure {
 public:
  static AngularMeasure from_lattice(const LatticePointSet& set);
  /// Normalized arc length, represented by 64 equally spaced atoms (exact
  /// for every functional of trigonometric degree below 64).
  static AngularMeasure uniform();
  /// Atoms on the axes: tau_hat(4) = +1.
  static AngularMeasure cilleruelo();
  /// Atoms on the diagonals: tau_hat(4) = -1.
  static AngularMeasure tilted_cilleruelo();
  static AngularMeasure custom(std::vector<Atom> atoms);

  [[nodiscard]] MeasureKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::span<const Atom> atoms() const noexcept { return atoms_; }

  /// Same atoms rotated by `angle` (no symmetry re-validation).
  [[nodiscard]] AngularMeasure rotated(double angle) const;

 private:
  AngularMeasure(MeasureKind kind, std::vector<Atom> atoms);

  MeasureKind kind_ = MeasureKind::CustomAtomic;
  std::vector<Atom> atoms_;
};

/// (1/N) sum cos(k theta_mu). Throws EmptySpectrum on an empty set.
double tau_fourier(const LatticePointSet& set, int k);
/// sum w_i cos(k angle_i).
double tau_fourier(const AngularMeasure& measure, int k);

struct MordellResult {
  bool solvable = false;
  std::int64_t count = 0;  // A(m, h) = r_2(gcd(m, h)), the Pall count
  /// Ordered pairs (mu, mu') with |mu - mu'|^2 = 2h; twice the Pall count,
  /// since (mu, mu') and its coordinate swap give the same quadratic form.
  std::int64_t ordered_pairs = 0;
  std::int64_t gcd_value = 0;
  bool square_cond = false;  // h(2m - h) is a perfect square
  bool sum2_cond = false;    // gcd(m, h) is a sum of two squares
};

/// Solvability of |mu| = |mu'| = sqrt(m), |mu - mu'|^2 = 2h and the Pall
/// count of ordered solutions. Requires 0 < h < m.
MordellResult mordell_solvability(std::int64_t m, std::int64_t h);

struct RieszEnergy {
  double energy = 0.0;  // sum over ordered mu != mu' of 1/|mu - mu'|
  double ratio = 0.0;   // energy / N
};

RieszEnergy riesz_energy(const LatticePointSet& set);

struct QuadrupleDiagnostics {
  std::int64_t zero_sum_count = 0;
  double inverse_norm_sum = 0.0;
};

/// Counts ordered quadruples in E^4 summing to zero and sums 1/|sum| over
/// the rest, grouping by pair sums.
QuadrupleDiagnostics quadruple_diagnostics(const LatticePointSet& set);

/// sum of 1/sqrt(d) over divisors d of m with d < cap that are sums of two
/// squares.
double divisor_diagnostic(std::int64_t m, double cap);

}  // namespace arw
