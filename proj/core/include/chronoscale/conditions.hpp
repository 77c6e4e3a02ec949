#pragma once

// Sufficient conditions: the existence test on the ball of radius r and the
// exponential stability certificate (lambda, M).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "chronoscale/network.hpp"

namespace chronoscale {

/// Sup bounds of every coefficient, inf bounds of alpha and c, activation
/// data and the sup graininess of the working time scale.
class BoundSet {
 public:
  BoundSet() = default;

  std::size_t size() const noexcept { return n_; }
  double sup(Family f, std::size_t i, std::size_t j = 0) const { return pair(f, i, j).sup_abs; }
  double inf(Family f, std::size_t i, std::size_t j = 0) const { return pair(f, i, j).inf_abs; }
  const BoundPair& pair(Family f, std::size_t i, std::size_t j = 0) const;
  double L(std::size_t j) const { return L_.at(j); }
  /// |f_j(0)|
  double f0(std::size_t j) const { return f0_.at(j); }
  double nu_sup() const noexcept { return nu_sup_; }

  friend BoundSet compute_bounds(const NetworkSpec&, const TimeScale&, const SamplingSpec&);

 private:
  std::size_t n_ = 0;
  std::array<std::vector<BoundPair>, kAllFamilies.size()> pairs_;
  std::vector<double> L_, f0_;
  double nu_sup_ = 0.0;
};

/// Throws DegenerateDecayError when inf|alpha_i| or inf|c_i| is zero.
BoundSet compute_bounds(const NetworkSpec& spec, const TimeScale& ts, const SamplingSpec& grid = {});

struct PQ {
  std::vector<double> P;
  std::vector<double> Q;
};

/// Growth bounds of the right-hand sides on the ball of radius r.
PQ compute_PQ(const BoundSet& b, double r);
/// Lipschitz-type bounds (the r-coefficients of compute_PQ).
PQ compute_PQbar(const BoundSet& b);

struct Ratio {
  std::string name;
  double value = 0.0;
};

struct H3Report {
  double r = 0.0;
  PQ pq;
  PQ pqbar;
  /// P_i/alpha_i-, (1 + alpha_i+/alpha_i-) P_i for each i, then Q_i/c_i- for
  /// each i, then (1 + c_i+/c_i-) Q_i for each i.
  std::vector<Ratio> ratios;
  /// Same layout with P, Q replaced by Pbar, Qbar.
  std::vector<Ratio> kappa_ratios;
  double max_ratio = 0.0;
  double kappa = 0.0;
  bool ball_ok = false;   // max_ratio <= r
  bool kappa_ok = false;  // kappa < 1
  bool feasible() const noexcept { return ball_ok && kappa_ok; }
};

H3Report check_H3(const BoundSet& b, double r);

/// Smallest r of an ascending grid that passes check_H3.
std::optional<double> search_r(const BoundSet& b, const std::vector<double>& r_grid);

/// Smallest r that passes check_H3 at all, or nullopt when kappa >= 1. Each
/// ratio is affine in r, so this is a closed form.
std::optional<double> minimal_radius(const BoundSet& b);

struct HValues {
  double beta = 0.0;
  std::vector<double> H, Hbar, Hstar, Hbarstar;
  double min() const;
};

HValues h_functions(const BoundSet& b, double beta);

struct Certificate {
  double lambda = 0.0;
  double M = 0.0;
  double nu_sup = 0.0;
  /// Bisection bracket end: the smallest tried value that failed.
  double lambda_upper = 0.0;
  HValues at_lambda;
};

inline constexpr double kLambdaTolerance = 1e-8;
inline constexpr double kHFloor = 1e-9;

/// Largest lambda in (0, min(alpha-, c-)) (and below 1/nu_sup when the scale
/// is not dense) with every H-function >= kHFloor, by bisection.
/// Throws NoCertificateError when no such lambda exists or M <= 1.
Certificate find_lambda(const BoundSet& b, double tol = kLambdaTolerance);

/// max_i { alpha_i- / Pbar_i, c_i- / Qbar_i }.
double certificate_M(const BoundSet& b);

std::string serialize(const Certificate& c);
/// Inverse of serialize(); throws ConfigError.
Certificate parse_certificate(const std::string& text);

}  // namespace chronoscale
