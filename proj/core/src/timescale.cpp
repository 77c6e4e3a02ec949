#include "chronoscale/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chronoscale/errors.hpp"
#include "chronoscale/format.hpp"

namespace chronoscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tolerance_at(double t) noexcept {
  return std::isfinite(t) ? kTimeTolerance * std::max(1.0, std::abs(t)) : kTimeTolerance;
}

std::string time_text(double t) { return format_number(t); }

// Three-point Gauss-Legendre on [u, v]; never touches the endpoints.
double gauss3(const RealFn& f, double u, double v) {
  const double c = 0.5 * (u + v), r = 0.5 * (v - u);
  const double x = r * std::sqrt(0.6);
  return r / 9.0 * (5.0 * f(c - x) + 8.0 * f(c) + 5.0 * f(c + x));
}

// Composite Simpson over the anchored grid anchor + k h clipped to [lo, hi].
// When lo is left-scattered the integrand's value there belongs to the jump,
// so the first cell uses an open rule instead.
double dense_quadrature(const RealFn& f, double lo, double hi, double anchor, double h, bool open_left) {
  const double gap = 1e-6 * h;
  double sum = 0.0;
  double u = lo;
  double fu = open_left ? 0.0 : f(u);
  double k = std::floor((lo - anchor) / h) + 1.0;
  for (;;) {
    double v = anchor + k * h;
    if (v <= u + gap) {
      k += 1.0;
      continue;
    }
    if (v >= hi - gap) v = hi;
    const double fv = f(v);
    if (open_left && u == lo)
      sum += gauss3(f, u, v);
    else
      sum += (v - u) / 6.0 * (fu + 4.0 * f(0.5 * (u + v)) + fv);
    if (v == hi) break;
    u = v;
    fu = fv;
    k += 1.0;
  }
  return sum;
}

}  // namespace

bool same_time(double a, double b) noexcept {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= kTimeTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------- Piece

Piece Piece::interval(double a, double b) {
  Piece p;
  p.kind = Kind::Interval;
  p.lo = a;
  p.hi = b;
  return p;
}

Piece Piece::lattice(double first, double spacing, double last) {
  Piece p;
  p.kind = Kind::Lattice;
  p.origin = first;
  p.spacing = spacing;
  p.lo = first;
  p.hi = last;
  if (std::isfinite(last) && spacing > 0.0) p.hi = p.point(p.index_floor(last));
  return p;
}

Piece Piece::full_lattice(double origin, double spacing) {
  Piece p;
  p.kind = Kind::Lattice;
  p.origin = origin;
  p.spacing = spacing;
  p.lo = -kInf;
  p.hi = kInf;
  return p;
}

bool Piece::is_point() const noexcept { return same_time(lo, hi); }

double Piece::index_floor(double t) const noexcept {
  const double eps = tolerance_at(t) / spacing;
  return std::floor((t - origin) / spacing + eps);
}

double Piece::index_ceil(double t) const noexcept {
  const double eps = tolerance_at(t) / spacing;
  return std::ceil((t - origin) / spacing - eps);
}

bool Piece::contains(double t) const noexcept {
  if (!std::isfinite(t)) return false;
  const double tol = tolerance_at(t);
  if (t < lo - tol || t > hi + tol) return false;
  if (kind == Kind::Interval) return true;
  const double k = std::round((t - origin) / spacing);
  return same_time(point(k), t);
}

// ------------------------------------------------------------ TimeScale

TimeScale::TimeScale(std::vector<Piece> pieces, double h) : pieces_(std::move(pieces)), h_(h) {}

TimeScale TimeScale::integers(double origin, double spacing) {
  return union_of({Piece::full_lattice(origin, spacing)});
}

TimeScale TimeScale::reals(double h) { return union_of({Piece::interval(-kInf, kInf)}, h); }

TimeScale TimeScale::interval(double a, double b, double h) {
  return union_of({Piece::interval(a, b)}, h);
}

TimeScale TimeScale::union_of(std::vector<Piece> pieces, double h) {
  if (pieces.empty()) throw DomainError("time scale needs at least one piece");
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("internal step must be positive");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    if (std::isnan(p.lo) || std::isnan(p.hi) || p.lo > p.hi)
      throw DomainError("piece " + std::to_string(i) + " has reversed or invalid bounds");
    if (p.kind == Piece::Kind::Lattice && !(p.spacing > 0.0 && std::isfinite(p.spacing)))
      throw DomainError("lattice piece " + std::to_string(i) + " needs positive spacing");
    if (p.kind == Piece::Kind::Lattice && !std::isfinite(p.origin))
      throw DomainError("lattice piece " + std::to_string(i) + " needs a finite anchor");
    if (i > 0) {
      const Piece& prev = pieces[i - 1];
      if (!(prev.hi < p.lo) || same_time(prev.hi, p.lo))
        throw DomainError("pieces must be ordered and pairwise disjoint");
    }
  }
  return TimeScale(std::move(pieces), h);
}

TimeScale TimeScale::with_step(double h) const { return union_of(pieces_, h); }

int TimeScale::piece_index(double t) const noexcept {
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].contains(t)) return static_cast<int>(i);
  return -1;
}

void TimeScale::require(double t) const {
  if (piece_index(t) < 0) throw DomainError("time " + time_text(t) + " is not in the time scale");
}

bool TimeScale::contains(double t) const noexcept { return piece_index(t) >= 0; }

bool TimeScale::is_min(double t) const noexcept { return same_time(t, min()); }

double TimeScale::backward_jump(double t) const {
  const int p = piece_index(t);
  if (p < 0) throw DomainError("backward jump: " + time_text(t) + " is not in the time scale");
  const Piece& piece = pieces_[p];
  const bool at_left_end = same_time(t, piece.lo);
  if (!at_left_end) {
    if (piece.is_dense()) return t;
    return piece.point(std::round((t - piece.origin) / piece.spacing) - 1.0);
  }
  return p > 0 ? pieces_[p - 1].hi : t;
}

double TimeScale::forward_jump(double t) const {
  const int p = piece_index(t);
  if (p < 0) throw DomainError("forward jump: " + time_text(t) + " is not in the time scale");
  const Piece& piece = pieces_[p];
  const bool at_right_end = same_time(t, piece.hi);
  if (!at_right_end) {
    if (piece.is_dense()) return t;
    return piece.point(std::round((t - piece.origin) / piece.spacing) + 1.0);
  }
  return p + 1 < static_cast<int>(pieces_.size()) ? pieces_[p + 1].lo : t;
}

double TimeScale::graininess(double t) const {
  const int p = piece_index(t);
  if (p < 0) throw DomainError("graininess: " + time_text(t) + " is not in the time scale");
  const Piece& piece = pieces_[p];
  if (same_time(t, piece.lo)) return p > 0 ? piece.lo - pieces_[p - 1].hi : 0.0;
  return piece.is_dense() ? 0.0 : piece.spacing;
}

GridPoint TimeScale::grid_point(double t) const {
  const double nu = graininess(t);
  return GridPoint{t, nu == 0.0, nu};
}

double TimeScale::snap_down(double t) const {
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    const Piece& p = *it;
    if (t < p.lo - tolerance_at(t)) continue;
    if (t >= p.hi) return p.hi;
    if (p.is_dense()) return std::max(t, p.lo);
    return std::max(p.lo, p.point(p.index_floor(t)));
  }
  throw DomainError("no point of the time scale at or below " + time_text(t));
}

double TimeScale::snap_up(double t) const {
  for (const Piece& p : pieces_) {
    if (t > p.hi + tolerance_at(t)) continue;
    if (t <= p.lo) return p.lo;
    if (p.is_dense()) return std::min(t, p.hi);
    return std::min(p.hi, p.point(p.index_ceil(t)));
  }
  throw DomainError("no point of the time scale at or above " + time_text(t));
}

double TimeScale::sup_graininess() const noexcept {
  double sup = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (p.kind == Piece::Kind::Lattice && !p.is_point()) sup = std::max(sup, p.spacing);
    if (i > 0) sup = std::max(sup, p.lo - pieces_[i - 1].hi);
  }
  return sup;
}

std::vector<GridPoint> TimeScale::discretize(double a, double b) const {
  std::vector<GridPoint> out;
  if (a > b) return out;
  const double gap = 1e-6 * h_;
  for (const Piece& p : pieces_) {
    if (p.hi < a - tolerance_at(a) || p.lo > b + tolerance_at(b)) continue;
    const double lo = std::max(a, p.lo);
    const double hi = std::min(b, p.hi);
    if (p.is_dense()) {
      out.push_back(grid_point(lo));
      if (same_time(lo, hi)) continue;
      const double anchor = std::isfinite(p.lo) ? p.lo : 0.0;
      for (double k = std::floor((lo - anchor) / h_) + 1.0;; k += 1.0) {
        const double t = anchor + k * h_;
        if (t <= lo + gap) continue;
        if (t >= hi - gap) break;
        out.push_back(GridPoint{t, true, 0.0});
      }
      out.push_back(grid_point(hi));
    } else {
      const double kmin = p.index_ceil(lo);
      const double kmax = p.index_floor(hi);
      for (double k = kmin; k <= kmax; k += 1.0) out.push_back(grid_point(p.point(k)));
    }
  }
  return out;
}

void TimeScale::walk(double a, double b,
                     const std::function<void(double, double)>& on_scattered,
                     const std::function<void(double, double, double)>& on_dense) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (p.hi <= a && !same_time(p.hi, a)) continue;
    if (p.lo > b && !same_time(p.lo, b)) break;
    const double prev_hi = i > 0 ? pieces_[i - 1].hi : p.lo;
    if (p.is_dense()) {
      const bool left_in_range = p.lo > a && !same_time(p.lo, a) &&
                                 (p.lo <= b || same_time(p.lo, b));
      if (left_in_range && i > 0) on_scattered(p.lo, p.lo - prev_hi);
      const double lo = std::max(a, p.lo);
      const double hi = std::min(b, p.hi);
      if (hi > lo && !same_time(lo, hi)) {
        on_dense(lo, hi, std::isfinite(p.lo) ? p.lo : 0.0);
      }
    } else {
      const double kmin = std::max(p.index_floor(a) + 1.0,
                                   std::isfinite(p.lo) ? p.index_ceil(p.lo) : -kInf);
      const double kmax = p.index_floor(std::min(b, p.hi));
      for (double k = kmin; k <= kmax; k += 1.0) {
        const double t = p.point(k);
        const bool first = std::isfinite(p.lo) && same_time(t, p.lo);
        const double nu = first ? (i > 0 ? t - prev_hi : 0.0) : p.spacing;
        if (nu > 0.0) on_scattered(t, nu);
      }
    }
  }
}

std::string TimeScale::describe() const {
  if (pieces_.size() == 1) {
    const Piece& p = pieces_.front();
    if (p.kind == Piece::Kind::Lattice && std::isinf(p.lo) && std::isinf(p.hi)) {
      if (p.origin == 0.0 && p.spacing == 1.0) return "Z";
      return "Z(" + format_number(p.origin) + "," + format_number(p.spacing) + ")";
    }
    if (p.is_dense() && std::isinf(p.lo) && std::isinf(p.hi)) return "R";
  }
  std::ostringstream os;
  os << "union:";
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (i > 0) os << ';';
    if (p.is_dense())
      os << '[' << format_number(p.lo) << ',' << format_number(p.hi) << ']';
    else
      os << '{' << format_number(p.lo) << ':' << format_number(p.spacing) << ':'
         << format_number(p.hi) << '}';
  }
  return os.str();
}

TimeScale TimeScale::parse(const std::string& raw, double h) {
  const std::string_view text = trim(raw);
  if (text == "Z") return integers();
  if (text == "R") return reals(h);
  auto bad = [&](const std::string& why) {
    return DomainError("cannot parse time scale '" + std::string(text) + "': " + why);
  };
  auto number = [&](std::string_view s) {
    auto v = parse_number(s);
    if (!v) throw bad("bad number '" + std::string(s) + "'");
    return *v;
  };
  if (text.starts_with("Z(") && text.ends_with(")")) {
    const auto body = text.substr(2, text.size() - 3);
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) throw bad("expected Z(origin,spacing)");
    return union_of({Piece::full_lattice(number(body.substr(0, comma)),
                                         number(body.substr(comma + 1)))},
                    h);
  }
  if (!text.starts_with("union:")) throw bad("expected Z, R, Z(o,s) or union:...");
  std::vector<Piece> pieces;
  std::string_view rest = text.substr(6);
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    const std::string_view item = trim(rest.substr(0, semi));
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    if (item.size() < 2) throw bad("empty piece");
    const std::string_view body = item.substr(1, item.size() - 2);
    if (item.front() == '[' && item.back() == ']') {
      const auto comma = body.find(',');
      if (comma == std::string_view::npos) throw bad("interval needs [a,b]");
      pieces.push_back(Piece::interval(number(body.substr(0, comma)), number(body.substr(comma + 1))));
    } else if (item.front() == '{' && item.back() == '}') {
      const auto c1 = body.find(':');
      const auto c2 = c1 == std::string_view::npos ? c1 : body.find(':', c1 + 1);
      if (c2 == std::string_view::npos) throw bad("lattice needs {first:spacing:last}");
      const double first = number(body.substr(0, c1));
      if (!std::isfinite(first)) throw bad("lattice pieces need a finite first point");
      pieces.push_back(Piece::lattice(first, number(body.substr(c1 + 1, c2 - c1 - 1)),
                                      number(body.substr(c2 + 1))));
    } else {
      throw bad("piece '" + std::string(item) + "' is neither [a,b] nor {a:s:b}");
    }
  }
  return union_of(std::move(pieces), h);
}

// ------------------------------------------------------- free functions

double backward_jump(const TimeScale& ts, double t) { return ts.backward_jump(t); }

double graininess_nu(const TimeScale& ts, double t) { return ts.graininess(t); }

double nabla_derivative(const RealFn& f, const TimeScale& ts, double t, std::optional<double> h) {
  if (!ts.contains(t)) throw DomainError("nabla derivative: " + time_text(t) + " is not in the time scale");
  if (ts.is_min(t))
    throw UndefinedDerivativeError("nabla derivative undefined at the minimum " + time_text(t));
  const double nu = ts.graininess(t);
  if (nu > 0.0) return (f(t) - f(ts.backward_jump(t))) / nu;

  const double step = h.value_or(ts.internal_step());
  const Piece* piece = nullptr;
  for (const Piece& p : ts.pieces())
    if (p.contains(t)) piece = &p;
  const double back = t - step;
  const double fwd = t + step;
  if (piece->contains(back) && piece->contains(fwd)) return (f(fwd) - f(back)) / (2.0 * step);
  const double back_step = std::min(step, t - piece->lo);
  return (f(t) - f(t - back_step)) / back_step;
}

double nabla_integral(const RealFn& f, const TimeScale& ts, double a, double b) {
  if (!ts.contains(a) || !ts.contains(b))
    throw DomainError("nabla integral endpoints " + time_text(a) + ", " + time_text(b) +
                      " must lie in the time scale");
  if (same_time(a, b)) return 0.0;
  if (a > b) return -nabla_integral(f, ts, b, a);
  double sum = 0.0;
  ts.walk(
      a, b, [&](double t, double nu) { sum += nu * f(t); },
      [&](double lo, double hi, double anchor) {
        sum += dense_quadrature(f, lo, hi, anchor, ts.internal_step(), ts.graininess(lo) > 0.0);
      });
  return sum;
}

double cylinder(double h, double z) {
  if (h == 0.0) return z;
  const double w = 1.0 - h * z;
  if (!(w > 0.0))
    throw RegressivityError("cylinder transform needs 1 - h z > 0 (h=" + format_number(h) +
                                ", z=" + format_number(z) + ")",
                            std::numeric_limits<double>::quiet_NaN());
  return -std::log1p(-h * z) / h;
}

double nabla_exp_log(const RealFn& p, const TimeScale& ts, double t, double s) {
  if (!ts.contains(t) || !ts.contains(s))
    throw DomainError("nabla exponential arguments " + time_text(t) + ", " + time_text(s) +
                      " must lie in the time scale");
  if (same_time(t, s)) return 0.0;
  if (t < s) return -nabla_exp_log(p, ts, s, t);
  double log_sum = 0.0;
  ts.walk(
      s, t,
      [&](double tau, double nu) {
        const double z = p(tau);
        if (!(1.0 - nu * z > 0.0))
          throw RegressivityError("p is not positively regressive at t=" + time_text(tau) +
                                      " (1 - nu p = " + format_number(1.0 - nu * z) + ")",
                                  tau);
        log_sum += -std::log1p(-nu * z);
      },
      [&](double lo, double hi, double anchor) {
        log_sum += dense_quadrature(p, lo, hi, anchor, ts.internal_step(), ts.graininess(lo) > 0.0);
      });
  return log_sum;
}

double nabla_exp(const RealFn& p, const TimeScale& ts, double t, double s) {
  return std::exp(nabla_exp_log(p, ts, t, s));
}

double circle_plus(double p, double q, double nu) noexcept { return p + q - nu * p * q; }

double circle_minus(double p, double nu) {
  const double d = 1.0 - nu * p;
  if (d == 0.0)
    throw RegressivityError("circle minus undefined: 1 - nu p = 0 (p=" + format_number(p) +
                                ", nu=" + format_number(nu) + ")",
                            std::numeric_limits<double>::quiet_NaN());
  return -p / d;
}

bool is_positively_regressive(const RealFn& p, const TimeScale& ts, double a, double b) {
  for (const GridPoint& g : ts.discretize(a, b))
    if (!(1.0 - g.nu * p(g.t) > 0.0)) return false;
  return true;
}

}  // namespace chronoscale
