#pragma once

// Time scales (closed subsets of the real line) and the nabla calculus on
// them: jump operators, backward graininess, nabla derivative and integral,
// the nu-cylinder transform, the nabla exponential and the circle algebra.
//
// A time scale is stored as an ordered list of disjoint closed pieces, each
// either a real interval or an arithmetic lattice. Dense pieces carry an
// internal step h used only for quadrature and finite differences; h is a
// discretization parameter and never changes which points belong to the set.

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace chronoscale {

using RealFn = std::function<double(double)>;

/// Absolute tolerance used when comparing time values (scaled up for |t| > 1).
inline constexpr double kTimeTolerance = 1e-12;

/// Default internal step for dense pieces.
inline constexpr double kDefaultStep = 1e-2;

bool same_time(double a, double b) noexcept;

struct Piece {
  enum class Kind { Interval, Lattice };

  Kind kind = Kind::Interval;
  double lo = 0.0;  // first point, may be -inf
  double hi = 0.0;  // last point, may be +inf
  double origin = 0.0;   // lattice anchor (a lattice point)
  double spacing = 0.0;  // lattice spacing, 0 for intervals

  static Piece interval(double a, double b);
  /// Lattice {first, first + spacing, ..., last}; `last` may be +inf.
  static Piece lattice(double first, double spacing, double last);
  /// Two-sided infinite lattice origin + k * spacing.
  static Piece full_lattice(double origin, double spacing);

  bool contains(double t) const noexcept;
  bool is_dense() const noexcept { return kind == Kind::Interval; }
  bool is_point() const noexcept;

  // Lattice helpers; only meaningful when kind == Lattice.
  double point(double index) const noexcept { return origin + index * spacing; }
  double index_floor(double t) const noexcept;
  double index_ceil(double t) const noexcept;
};

struct GridPoint {
  double t = 0.0;
  bool is_left_dense = true;
  double nu = 0.0;
};

class TimeScale {
 public:
  /// origin + spacing * Z.
  static TimeScale integers(double origin = 0.0, double spacing = 1.0);
  /// The whole real line.
  static TimeScale reals(double h = kDefaultStep);
  static TimeScale interval(double a, double b, double h = kDefaultStep);
  /// Ordered, pairwise disjoint closed pieces. Throws DomainError otherwise.
  static TimeScale union_of(std::vector<Piece> pieces, double h = kDefaultStep);

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  double internal_step() const noexcept { return h_; }
  TimeScale with_step(double h) const;

  bool contains(double t) const noexcept;
  double min() const noexcept { return pieces_.front().lo; }
  double max() const noexcept { return pieces_.back().hi; }
  bool is_min(double t) const noexcept;

  double backward_jump(double t) const;
  double forward_jump(double t) const;
  double graininess(double t) const;
  GridPoint grid_point(double t) const;

  /// Largest point of the scale that is <= t.
  double snap_down(double t) const;
  /// Smallest point of the scale that is >= t.
  double snap_up(double t) const;

  /// sup of nu over the whole scale (0 for a single interval).
  double sup_graininess() const noexcept;

  /// Points of the scale in [a, b]; dense pieces are sampled with spacing
  /// at most h, anchored at the piece's left end (or at 0 when unbounded),
  /// and always include the clipped piece endpoints.
  std::vector<GridPoint> discretize(double a, double b) const;

  /// Round-trippable description: "Z", "R", "Z(origin,spacing)", or
  /// "union:[a,b];{first:spacing:last};...".
  std::string describe() const;
  /// Inverse of describe(); throws DomainError on malformed text.
  static TimeScale parse(const std::string& text, double h = kDefaultStep);

  /// Visit (a, b]: scattered points with their graininess, dense stretches
  /// as closed sub-intervals with the anchor of their piece.
  void walk(double a, double b,
            const std::function<void(double t, double nu)>& on_scattered,
            const std::function<void(double lo, double hi, double anchor)>& on_dense) const;

 private:
  TimeScale(std::vector<Piece> pieces, double h);
  int piece_index(double t) const noexcept;
  void require(double t) const;

  std::vector<Piece> pieces_;
  double h_ = kDefaultStep;
};

// Free-function forms of the nabla calculus.

double backward_jump(const TimeScale& ts, double t);
double graininess_nu(const TimeScale& ts, double t);

/// f^nabla(t). Left-scattered t: exact quotient over nu(t). Left-dense t:
/// central difference with step h when t +- h are both in the scale,
/// otherwise a backward difference. h defaults to the internal step.
double nabla_derivative(const RealFn& f, const TimeScale& ts, double t,
                        std::optional<double> h = std::nullopt);

/// Nabla integral over (a, b]; a > b flips the sign. Scattered points add
/// nu(t) f(t); dense stretches use composite Simpson cells on the anchored
/// grid of the internal step.
double nabla_integral(const RealFn& f, const TimeScale& ts, double a, double b);

/// nu-cylinder transform: -log(1 - h z) / h, or z when h == 0.
double cylinder(double h, double z);

/// log of the nabla exponential, the integral of the cylinder transform.
double nabla_exp_log(const RealFn& p, const TimeScale& ts, double t, double s);
double nabla_exp(const RealFn& p, const TimeScale& ts, double t, double s);

double circle_plus(double p, double q, double nu) noexcept;
double circle_minus(double p, double nu);

/// 1 - nu(t) p(t) > 0 at every grid point of [a, b].
bool is_positively_regressive(const RealFn& p, const TimeScale& ts, double a, double b);

}  // namespace chronoscale
