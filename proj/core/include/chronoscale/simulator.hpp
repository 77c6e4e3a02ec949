#pragma once

// Forward integration of the network on a time scale.
//
// Left-scattered points: x(t) = x(rho(t)) + nu(t) RHS(t), with RHS predicted
// from dx(rho(t)) and refined by a fixed number of fixed-point passes.
// Left-dense points: Heun (explicit Euler predictor, one trapezoidal corrector).
// Delayed lookups are exact at grid points and linear between dense grid
// points; the derivative channel is piecewise constant there.

#include <iosfwd>
#include <vector>

#include "chronoscale/network.hpp"

namespace chronoscale {

struct SimOptions {
  double h = 0.0;  // dense step; 0 keeps the time scale's internal step
  int corrector_iters = 4;
};

class Trajectory final : public StateAccessor {
 public:
  enum class Var { X = 0, S = 1, DX = 2, DS = 3 };

  explicit Trajectory(std::size_t n = 0) : n_(n) {}

  std::size_t dimension() const noexcept { return n_; }
  std::size_t size() const noexcept { return t_.size(); }
  /// Index of t = 0; points before it are history samples.
  std::size_t start_index() const noexcept { return start_; }
  const std::vector<double>& times() const noexcept { return t_; }
  double time(std::size_t k) const { return t_.at(k); }
  double nu(std::size_t k) const { return nu_.at(k); }

  double get(Var v, std::size_t i, std::size_t k) const { return data_[slot(v, i, k)]; }
  double x(std::size_t i, std::size_t k) const { return get(Var::X, i, k); }
  double S(std::size_t i, std::size_t k) const { return get(Var::S, i, k); }
  double dx(std::size_t i, std::size_t k) const { return get(Var::DX, i, k); }
  double dS(std::size_t i, std::size_t k) const { return get(Var::DS, i, k); }

  /// Index of the grid point equal to t; throws GridMismatchError if absent.
  std::size_t index_of(double t) const;

  /// Value at an arbitrary time inside the stored range (interpolated).
  double lookup(Var v, std::size_t i, double t) const;

  // StateAccessor
  double stm(std::size_t j, double t, Channel ch) const override;
  double ltm(std::size_t j, double t, Channel ch) const override;
  double integrate_stm(std::size_t j, double a, double b, Channel ch,
                       const std::function<double(double)>& g) const override;

  void write_csv(std::ostream& os) const;

  // Building.
  void push(double t, double nu);
  void set(Var v, std::size_t i, std::size_t k, double value) { data_[slot(v, i, k)] = value; }
  void mark_start() { start_ = t_.size() - 1; }

 private:
  std::size_t slot(Var v, std::size_t i, std::size_t k) const noexcept {
    return k * 4 * n_ + static_cast<std::size_t>(v) * n_ + i;
  }
  // Largest k with t_[k] <= t (within tolerance), or npos.
  std::size_t floor_index(double t) const;

  std::size_t n_ = 0;
  std::size_t start_ = 0;
  std::vector<double> t_;
  std::vector<double> nu_;
  std::vector<double> data_;
};

/// Largest delay value actually met on the forward grid of [0, t_end]; the
/// simulator keeps history back to -window.
double history_window(const NetworkSpec& spec, const TimeScale& ts, double t_end);

/// Throws DomainError, HistoryUnderflowError or StepFailureError.
Trajectory simulate(const NetworkSpec& spec, const HistorySpec& history, const TimeScale& ts,
                    double t_end, const SimOptions& opts = {});

/// max_i of |x - x*|, |S - S*|, |dx - dx*|, |dS - dS*| at grid time t.
double trajectory_norm_distance(const Trajectory& a, const Trajectory& b, double t);

/// Same quantity at every grid point from t = 0 on, as (t, d) pairs.
std::vector<std::pair<double, double>> distance_series(const Trajectory& a, const Trajectory& b);

/// sup over the history grid of [-window, 0] of the component-wise max.
double history_norm(const HistorySpec& a, const HistorySpec& b, const TimeScale& ts, double window);

/// max over forward grid points of |dx - rhs_stm| and |dS - rhs_ltm| re-evaluated
/// against the finished trajectory.
double self_consistency_residual(const NetworkSpec& spec, const Trajectory& traj, const TimeScale& ts);

}  // namespace chronoscale
