#include "chronoscale/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "chronoscale/errors.hpp"
#include "chronoscale/format.hpp"

namespace chronoscale {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

double time_tol(double t) { return kTimeTolerance * std::max(1.0, std::abs(t)); }

using Var = Trajectory::Var;

}  // namespace

// ----------------------------------------------------------- Trajectory

void Trajectory::push(double t, double nu) {
  t_.push_back(t);
  nu_.push_back(nu);
  data_.resize(data_.size() + 4 * n_, 0.0);
}

std::size_t Trajectory::floor_index(double t) const {
  auto it = std::upper_bound(t_.begin(), t_.end(), t + time_tol(t));
  if (it == t_.begin()) return npos;
  return static_cast<std::size_t>(it - t_.begin()) - 1;
}

std::size_t Trajectory::index_of(double t) const {
  const std::size_t k = floor_index(t);
  if (k == npos || !same_time(t_[k], t))
    throw GridMismatchError("time " + format_number(t) + " is not a grid point of the trajectory");
  return k;
}

double Trajectory::lookup(Var v, std::size_t i, double t) const {
  const std::size_t k = floor_index(t);
  if (k == npos)
    throw HistoryUnderflowError("lookup at t=" + format_number(t) + " is before the stored history", t);
  if (same_time(t_[k], t)) return get(v, i, k);
  if (k + 1 >= t_.size())
    throw DomainError("lookup at t=" + format_number(t) + " is past the last computed point");
  // Inside a gap between scattered points the value is held from the left.
  if (nu_[k + 1] > 0.0) return get(v, i, k);
  const double h = t_[k + 1] - t_[k];
  if (v == Var::DX || v == Var::DS) {
    const Var state = v == Var::DX ? Var::X : Var::S;
    return (get(state, i, k + 1) - get(state, i, k)) / h;
  }
  const double w = (t - t_[k]) / h;
  return (1.0 - w) * get(v, i, k) + w * get(v, i, k + 1);
}

double Trajectory::stm(std::size_t j, double t, Channel ch) const {
  return lookup(ch == Channel::State ? Var::X : Var::DX, j, t);
}

double Trajectory::ltm(std::size_t j, double t, Channel ch) const {
  return lookup(ch == Channel::State ? Var::S : Var::DS, j, t);
}

double Trajectory::integrate_stm(std::size_t j, double a, double b, Channel ch,
                                 const std::function<double(double)>& g) const {
  if (same_time(a, b)) return 0.0;
  if (a > b) return -integrate_stm(j, b, a, ch, g);
  const Var v = ch == Channel::State ? Var::X : Var::DX;
  const std::size_t ka = floor_index(a);
  if (ka == npos)
    throw HistoryUnderflowError("integral from t=" + format_number(a) + " starts before the stored history", a);
  const std::size_t kb = index_of(b);
  const bool exact_start = same_time(t_[ka], a);

  double sum = 0.0;
  for (std::size_t k = ka + 1; k <= kb; ++k) {
    const double gk = g(get(v, j, k));
    if (nu_[k] > 0.0) {
      sum += nu_[k] * gk;
      continue;
    }
    if (k == ka + 1 && !exact_start) {
      // Split the first cell at the exact left endpoint.
      sum += 0.5 * (t_[k] - a) * (g(lookup(v, j, a)) + gk);
    } else {
      sum += 0.5 * (t_[k] - t_[k - 1]) * (g(get(v, j, k - 1)) + gk);
    }
  }
  return sum;
}

void Trajectory::write_csv(std::ostream& os) const {
  os << 't';
  const char* names[] = {"x_", "S_", "dx_", "dS_"};
  for (const char* name : names)
    for (std::size_t i = 0; i < n_; ++i) os << ',' << name << (i + 1);
  os << '\n';
  for (std::size_t k = 0; k < t_.size(); ++k) {
    os << format_number(t_[k]);
    for (std::size_t c = 0; c < 4 * n_; ++c) os << ',' << format_number(data_[k * 4 * n_ + c]);
    os << '\n';
  }
}

// ------------------------------------------------------------ simulate

namespace {

double history_derivative(const HistorySpec& h, bool state, std::size_t i, double t, const TimeScale& ts) {
  try {
    return state ? h.x_nabla(i, t, ts) : h.S_nabla(i, t, ts);
  } catch (const UndefinedDerivativeError&) {
    // No backward neighbour at the minimum of the scale; hold zero.
    return 0.0;
  }
}

double window_start(const TimeScale& ts, double window) {
  const double lo = std::max(-window, ts.min());
  return ts.snap_down(lo);
}

struct Rhs {
  std::vector<double> stm, ltm;
};

Rhs eval_rhs(const NetworkSpec& spec, const Trajectory& traj, const TimeScale& ts, double t) {
  const std::size_t n = spec.size();
  Rhs r{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    r.stm[i] = rhs_stm(spec, traj, ts, t, i);
    r.ltm[i] = rhs_ltm(spec, traj, ts, t, i);
  }
  return r;
}

void require_finite(const Rhs& r, double t) {
  for (const auto* v : {&r.stm, &r.ltm})
    for (double d : *v)
      if (!std::isfinite(d)) throw StepFailureError("non-finite right-hand side at t=" + format_number(t), t);
}

}  // namespace

double history_window(const NetworkSpec& spec, const TimeScale& ts, double t_end) {
  const std::size_t n = spec.size();
  const auto grid = ts.discretize(0.0, t_end);
  double out = 0.0;
  for (Family f : kAllFamilies) {
    if (!is_delay(f)) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < (is_matrix(f) ? n : 1); ++j) {
        const CoeffExpr& e = spec.coeff(f, i, j);
        if (e.is_constant()) {
          out = std::max(out, e.value());
          continue;
        }
        for (const GridPoint& g : grid) out = std::max(out, e.eval(g.t));
      }
  }
  return out;
}

Trajectory simulate(const NetworkSpec& spec, const HistorySpec& history, const TimeScale& base,
                    double t_end, const SimOptions& opts) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be positive and finite");
  if (opts.corrector_iters < 1) throw DomainError("corrector_iters must be at least 1");
  const std::size_t n = spec.size();
  if (history.phi.size() != n || history.psi.size() != n)
    throw DomainError("history has " + std::to_string(history.phi.size()) + " components, network has " +
                      std::to_string(n));
  const TimeScale ts = opts.h > 0.0 ? base.with_step(opts.h) : base;
  if (!ts.contains(0.0)) throw DomainError("t = 0 is not in the time scale");

  Trajectory traj(n);
  const double window = history_window(spec, ts, t_end);
  for (const GridPoint& g : ts.discretize(window_start(ts, window), 0.0)) {
    traj.push(g.t, g.nu);
    const std::size_t k = traj.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
      traj.set(Var::X, i, k, history.x(i, g.t));
      traj.set(Var::S, i, k, history.S(i, g.t));
      traj.set(Var::DX, i, k, history_derivative(history, true, i, g.t, ts));
      traj.set(Var::DS, i, k, history_derivative(history, false, i, g.t, ts));
    }
  }
  traj.mark_start();

  const auto forward = ts.discretize(0.0, t_end);
  for (std::size_t p = 1; p < forward.size(); ++p) {
    const GridPoint& g = forward[p];
    const double t = g.t;
    const std::size_t prev = traj.size() - 1;

    if (g.nu > 0.0) {
      const double nu = g.nu;
      traj.push(t, nu);
      const std::size_t k = prev + 1;
      auto store = [&](const std::vector<double>& d, const std::vector<double>& e) {
        double inc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double x = traj.x(i, prev) + nu * d[i];
          const double s = traj.S(i, prev) + nu * e[i];
          inc = std::max({inc, std::abs(x - traj.x(i, k)), std::abs(s - traj.S(i, k))});
          traj.set(Var::X, i, k, x);
          traj.set(Var::S, i, k, s);
          traj.set(Var::DX, i, k, d[i]);
          traj.set(Var::DS, i, k, e[i]);
        }
        return inc;
      };
      // Predictor: hold the derivative from rho(t).
      std::vector<double> d(n), e(n);
      for (std::size_t i = 0; i < n; ++i) {
        d[i] = traj.dx(i, prev);
        e[i] = traj.dS(i, prev);
      }
      store(d, e);
      double last_inc = std::numeric_limits<double>::infinity();
      for (int it = 0; it < opts.corrector_iters; ++it) {
        const Rhs r = eval_rhs(spec, traj, ts, t);
        require_finite(r, t);
        const double inc = store(r.stm, r.ltm);
        double scale = 1.0;
        for (std::size_t i = 0; i < n; ++i) scale = std::max({scale, std::abs(traj.x(i, k)), std::abs(traj.S(i, k))});
        if (it > 0 && inc >= last_inc && inc > 1e-9 * scale)
          throw StepFailureError("corrector diverges at t=" + format_number(t) + " (increment " +
                                     format_number(inc) + ")",
                                 t);
        last_inc = inc;
      }
      continue;
    }

    // Left-dense point: Heun step from the previous grid point.
    const double h = t - traj.time(prev);
    Rhs f0;
    if (prev == traj.start_index()) {
      f0 = eval_rhs(spec, traj, ts, traj.time(prev));
      require_finite(f0, traj.time(prev));
    } else {
      f0 = Rhs{std::vector<double>(n), std::vector<double>(n)};
      for (std::size_t i = 0; i < n; ++i) {
        f0.stm[i] = traj.dx(i, prev);
        f0.ltm[i] = traj.dS(i, prev);
      }
    }
    traj.push(t, 0.0);
    const std::size_t k = prev + 1;
    for (std::size_t i = 0; i < n; ++i) {
      traj.set(Var::X, i, k, traj.x(i, prev) + h * f0.stm[i]);
      traj.set(Var::S, i, k, traj.S(i, prev) + h * f0.ltm[i]);
      traj.set(Var::DX, i, k, f0.stm[i]);
      traj.set(Var::DS, i, k, f0.ltm[i]);
    }
    const Rhs f1 = eval_rhs(spec, traj, ts, t);
    require_finite(f1, t);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = traj.x(i, prev) + 0.5 * h * (f0.stm[i] + f1.stm[i]);
      const double s = traj.S(i, prev) + 0.5 * h * (f0.ltm[i] + f1.ltm[i]);
      traj.set(Var::X, i, k, x);
      traj.set(Var::S, i, k, s);
      traj.set(Var::DX, i, k, (x - traj.x(i, prev)) / h);
      traj.set(Var::DS, i, k, (s - traj.S(i, prev)) / h);
    }
    const Rhs f2 = eval_rhs(spec, traj, ts, t);
    require_finite(f2, t);
    for (std::size_t i = 0; i < n; ++i) {
      traj.set(Var::DX, i, k, f2.stm[i]);
      traj.set(Var::DS, i, k, f2.ltm[i]);
    }
  }
  return traj;
}

// -------------------------------------------------------------- norms

namespace {

void require_same_grid(const Trajectory& a, const Trajectory& b) {
  if (a.dimension() != b.dimension()) throw GridMismatchError("trajectories have different dimensions");
  if (a.size() != b.size() || a.start_index() != b.start_index())
    throw GridMismatchError("trajectories have different grids");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!same_time(a.time(k), b.time(k)))
      throw GridMismatchError("trajectories differ at grid index " + std::to_string(k));
}

double distance_at(const Trajectory& a, const Trajectory& b, std::size_t k) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i)
    for (Var v : {Var::X, Var::S, Var::DX, Var::DS}) d = std::max(d, std::abs(a.get(v, i, k) - b.get(v, i, k)));
  return d;
}

}  // namespace

double trajectory_norm_distance(const Trajectory& a, const Trajectory& b, double t) {
  require_same_grid(a, b);
  return distance_at(a, b, a.index_of(t));
}

std::vector<std::pair<double, double>> distance_series(const Trajectory& a, const Trajectory& b) {
  require_same_grid(a, b);
  std::vector<std::pair<double, double>> out;
  out.reserve(a.size() - a.start_index());
  for (std::size_t k = a.start_index(); k < a.size(); ++k) out.emplace_back(a.time(k), distance_at(a, b, k));
  return out;
}

double history_norm(const HistorySpec& a, const HistorySpec& b, const TimeScale& ts, double window) {
  if (a.size() != b.size()) throw DomainError("histories have different sizes");
  double out = 0.0;
  for (const GridPoint& g : ts.discretize(window_start(ts, window), 0.0)) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      out = std::max(out, std::abs(a.x(i, g.t) - b.x(i, g.t)));
      out = std::max(out, std::abs(a.S(i, g.t) - b.S(i, g.t)));
      out = std::max(out, std::abs(history_derivative(a, true, i, g.t, ts) - history_derivative(b, true, i, g.t, ts)));
      out = std::max(out, std::abs(history_derivative(a, false, i, g.t, ts) - history_derivative(b, false, i, g.t, ts)));
    }
  }
  return out;
}

double self_consistency_residual(const NetworkSpec& spec, const Trajectory& traj, const TimeScale& ts) {
  double out = 0.0;
  for (std::size_t k = traj.start_index() + 1; k < traj.size(); ++k) {
    const double t = traj.time(k);
    for (std::size_t i = 0; i < spec.size(); ++i) {
      out = std::max(out, std::abs(traj.dx(i, k) - rhs_stm(spec, traj, ts, t, i)));
      out = std::max(out, std::abs(traj.dS(i, k) - rhs_ltm(spec, traj, ts, t, i)));
    }
  }
  return out;
}

}  // namespace chronoscale
