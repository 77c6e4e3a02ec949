#pragma once

// Sectioned key-value run configuration.
//
//   # comment
//   [network]
//   n = 2
//   activation.1 = sin_half 1        # kind, Lipschitz constant
//   alpha.1 = add(const 0.895, scale 0.005 (sin (affine 2.6457513110645907 0 t)))
//   D.1.2 = scale 0.05 (sin t)
//   [bounds]
//   alpha.1 = 0.9 0.89               # sup [inf]
//   [timescale]
//   scale = Z                        # Z | R | Z(o,s) | union:...
//   [history]
//   phi.1 = const 0.3
//   phi_nabla.1 = const 0            # optional
//   psi.1 = ...
//   psi_nabla.1 = ...
//   [history2]                       # second history for stability runs
//   [run]
//   t_end = 50
//   h = 0.01
//   corrector_iters = 4
//   r = 0.45 0.5                     # radius grid, ascending
//   out = traj.csv
//
// Coefficients not mentioned are identically zero. Indices are 1-based.

#include <optional>
#include <string>
#include <vector>

#include "chronoscale/network.hpp"
#include "chronoscale/timescale.hpp"

namespace chronoscale {

struct RunSettings {
  double t_end = 50.0;
  double h = kDefaultStep;
  int corrector_iters = 4;
  std::vector<double> r_grid{0.45};
  std::string out;
};

struct RunConfig {
  NetworkSpec network;
  std::string timescale = "Z";
  std::optional<HistorySpec> history;
  std::optional<HistorySpec> history2;
  RunSettings run;

  TimeScale time_scale() const { return TimeScale::parse(timescale, run.h); }
};

/// Throws ConfigError carrying the line number and field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::string serialize_config(const RunConfig& cfg);

/// A standalone file holding one [history] or [history2] section for n neurons.
HistorySpec parse_history(const std::string& text, std::size_t n);
HistorySpec load_history(const std::string& path, std::size_t n);

}  // namespace chronoscale
