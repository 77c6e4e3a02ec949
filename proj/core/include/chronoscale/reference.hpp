#pragma once

// Built-in two-neuron example: almost periodic coefficients with the
// tabulated sup/inf bounds attached as overrides, sin(x/2) activations with
// L = 1, and two affine initial histories.

#include <string>

#include "chronoscale/config.hpp"

namespace chronoscale::reference {

inline constexpr double kRadius = 0.45;

NetworkSpec network();

/// which = 0 or 1; two distinct bounded histories with exact nabla derivatives.
HistorySpec history(int which);

/// Complete run configuration on the given time scale ("Z" or "R").
RunConfig config(const std::string& timescale = "Z");

}  // namespace chronoscale::reference
