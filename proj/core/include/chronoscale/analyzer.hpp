#pragma once

// Empirical checks on simulated trajectories: the exponential stability
// bound, fitted decay rates, and epsilon-translation scans used as an
// almost-periodicity proxy (finite window, finite epsilon; not a proof).

#include <iosfwd>
#include <utility>
#include <vector>

#include "chronoscale/conditions.hpp"
#include "chronoscale/simulator.hpp"

namespace chronoscale {

struct DecayFit {
  double lambda = 0.0;  // +inf when every distance is below 1e-14
  double r_squared = 0.0;
  std::size_t points = 0;
};

inline constexpr double kConvergedDistance = 1e-14;

/// Least-squares slope of log d against t (negated) over points with
/// t >= burn_in and d >= 1e-14. Throws DomainError with fewer than 10 such
/// points, unless all of them are below 1e-14.
DecayFit decay_fit(const std::vector<std::pair<double, double>>& series, double burn_in);

struct StabilityRow {
  double t = 0.0;
  double distance = 0.0;
  double bound = 0.0;
  double margin = 0.0;
};

struct StabilityReport {
  double lambda = 0.0;  // from the certificate
  double M = 0.0;
  double history_distance = 0.0;
  double lambda_fit = 0.0;
  double r_squared = 0.0;
  double bound_margin = 0.0;
  double worst_t = 0.0;
  bool admissible = true;  // circle-minus lambda positively regressive on the grid
  bool violated = false;
  std::vector<StabilityRow> rows;
};

inline constexpr double kMarginAbsTol = 1e-9;
inline constexpr double kMarginRelTol = 1e-6;

/// Checks distance(t) <= M e_{(-)lambda}(t, 0) ||psi - psi*||_0 at every
/// forward grid point. `ts` must be the scale (with the step) used to
/// simulate. A point violates when margin < -(1e-9 + 1e-6 bound).
/// burn_in < 0 means 20% of the horizon.
StabilityReport verify_bound(const Trajectory& a, const Trajectory& b, const HistorySpec& ha,
                             const HistorySpec& hb, const Certificate& cert, const TimeScale& ts,
                             double burn_in = -1.0);

void write_stability_csv(std::ostream& os, const StabilityReport& rep);
/// Flat key=value summary.
std::string report_text(const StabilityReport& rep);

struct Series {
  std::vector<double> t;
  std::vector<double> v;
};

/// One component from t = 0 on.
Series component(const Trajectory& traj, Trajectory::Var var, std::size_t i);

/// (max - min) / 2 over grid points in [a, b].
double amplitude(const Series& s, double a, double b);

/// sup over grid points t in [a, b] of |x(t + tau) - x(t)|, linear
/// interpolation between samples. Throws CoverageError when [a, b] or
/// [a + tau, b + tau] leaves the series.
double translation_error(const Series& s, double tau, double a, double b);

struct TranslationScan {
  std::vector<double> hits;
  /// Largest hole in [tau_lo, tau_hi] not containing a hit, edges included.
  double max_gap = 0.0;
};

TranslationScan scan_translation_numbers(const Series& s, double epsilon, double tau_lo, double tau_hi,
                                         double tau_step, double a, double b);

}  // namespace chronoscale
