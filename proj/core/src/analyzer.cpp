#include "chronoscale/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "chronoscale/errors.hpp"
#include "chronoscale/format.hpp"

namespace chronoscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

DecayFit decay_fit(const std::vector<std::pair<double, double>>& series, double burn_in) {
  std::vector<double> ts, ys;
  std::size_t after_burn_in = 0;
  for (const auto& [t, d] : series) {
    if (t < burn_in) continue;
    ++after_burn_in;
    if (d >= kConvergedDistance) {
      ts.push_back(t);
      ys.push_back(std::log(d));
    }
  }
  if (after_burn_in > 0 && ts.empty()) return {kInf, 1.0, 0};
  if (ts.size() < 10)
    throw DomainError("decay fit needs at least 10 positive points after burn-in, got " +
                      std::to_string(ts.size()));

  const double m = static_cast<double>(ts.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    mt += ts[k];
    my += ys[k];
  }
  mt /= m;
  my /= m;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    stt += (ts[k] - mt) * (ts[k] - mt);
    sty += (ts[k] - mt) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (stt == 0.0) throw DomainError("decay fit needs distinct times");
  const double slope = sty / stt;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double e = ys[k] - (my + slope * (ts[k] - mt));
    ss_res += e * e;
  }
  const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {-slope, r2, ts.size()};
}

StabilityReport verify_bound(const Trajectory& a, const Trajectory& b, const HistorySpec& ha,
                             const HistorySpec& hb, const Certificate& cert, const TimeScale& ts,
                             double burn_in) {
  StabilityReport rep;
  rep.lambda = cert.lambda;
  rep.M = cert.M;
  const auto dist = distance_series(a, b);
  rep.history_distance = history_norm(ha, hb, ts, -a.time(0));

  const double lambda = cert.lambda;
  const RealFn p = [&](double tau) { return circle_minus(lambda, ts.graininess(tau)); };

  rep.bound_margin = kInf;
  double log_e = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const auto [t, d] = dist[k];
    if (k > 0 && rep.admissible) {
      try {
        log_e += nabla_exp_log(p, ts, t, dist[k - 1].first);
      } catch (const RegressivityError&) {
        rep.admissible = false;
      }
    }
    StabilityRow row{t, d, 0.0, 0.0};
    if (rep.admissible) {
      row.bound = cert.M * std::exp(log_e) * rep.history_distance;
      row.margin = row.bound - d;
    } else {
      row.bound = std::numeric_limits<double>::quiet_NaN();
      row.margin = -kInf;
    }
    if (row.margin < rep.bound_margin) {
      rep.bound_margin = row.margin;
      rep.worst_t = t;
    }
    if (!(row.margin >= -(kMarginAbsTol + kMarginRelTol * row.bound))) rep.violated = true;
    rep.rows.push_back(row);
  }

  if (dist.empty()) return rep;
  const double horizon = dist.back().first - dist.front().first;
  const double start = burn_in < 0.0 ? dist.front().first + 0.2 * horizon : burn_in;
  try {
    const DecayFit fit = decay_fit(dist, start);
    rep.lambda_fit = fit.lambda;
    rep.r_squared = fit.r_squared;
  } catch (const DomainError&) {
    rep.lambda_fit = std::numeric_limits<double>::quiet_NaN();
    rep.r_squared = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

void write_stability_csv(std::ostream& os, const StabilityReport& rep) {
  os << "t,distance,bound,margin\n";
  for (const StabilityRow& r : rep.rows)
    os << format_number(r.t) << ',' << format_number(r.distance) << ',' << format_number(r.bound) << ','
       << format_number(r.margin) << '\n';
}

std::string report_text(const StabilityReport& rep) {
  std::ostringstream os;
  os << "lambda=" << format_number(rep.lambda) << '\n';
  os << "M=" << format_number(rep.M) << '\n';
  os << "history_distance=" << format_number(rep.history_distance) << '\n';
  os << "lambda_fit=" << format_number(rep.lambda_fit) << '\n';
  os << "r_squared=" << format_number(rep.r_squared) << '\n';
  os << "bound_margin=" << format_number(rep.bound_margin) << '\n';
  os << "worst_t=" << format_number(rep.worst_t) << '\n';
  os << "admissible=" << (rep.admissible ? "true" : "false") << '\n';
  os << "violated=" << (rep.violated ? "true" : "false") << '\n';
  return os.str();
}

// ------------------------------------------------------- translations

Series component(const Trajectory& traj, Trajectory::Var var, std::size_t i) {
  Series s;
  for (std::size_t k = traj.start_index(); k < traj.size(); ++k) {
    s.t.push_back(traj.time(k));
    s.v.push_back(traj.get(var, i, k));
  }
  return s;
}

double amplitude(const Series& s, double a, double b) {
  double lo = kInf, hi = -kInf;
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    if (s.t[k] < a || s.t[k] > b) continue;
    lo = std::min(lo, s.v[k]);
    hi = std::max(hi, s.v[k]);
  }
  if (lo > hi) throw CoverageError("no samples in [" + format_number(a) + ", " + format_number(b) + "]");
  return 0.5 * (hi - lo);
}

namespace {

void require_cover(const Series& s, double a, double b) {
  if (s.t.empty()) throw CoverageError("empty series");
  const double lo = s.t.front();
  const double hi = s.t.back();
  if ((a < lo && !same_time(a, lo)) || (b > hi && !same_time(b, hi)))
    throw CoverageError("window [" + format_number(a) + ", " + format_number(b) + "] leaves the series range [" +
                        format_number(lo) + ", " + format_number(hi) + "]");
}

}  // namespace

double translation_error(const Series& s, double tau, double a, double b) {
  if (a > b) std::swap(a, b);
  require_cover(s, a, b);
  require_cover(s, a + tau, b + tau);
  const std::size_t n = s.t.size();
  // Both t and t + tau increase with k, so one forward cursor suffices.
  std::size_t j = 0;
  double out = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = s.t[k];
    if (t < a && !same_time(t, a)) continue;
    if (t > b && !same_time(t, b)) break;
    const double u = t + tau;
    while (j + 1 < n && s.t[j + 1] <= u) ++j;
    double v;
    if (same_time(s.t[j], u) || j + 1 >= n) {
      v = s.v[j];
    } else if (j + 1 < n && same_time(s.t[j + 1], u)) {
      v = s.v[j + 1];
    } else {
      const double w = (u - s.t[j]) / (s.t[j + 1] - s.t[j]);
      v = (1.0 - w) * s.v[j] + w * s.v[j + 1];
    }
    out = std::max(out, std::abs(v - s.v[k]));
  }
  return out;
}

TranslationScan scan_translation_numbers(const Series& s, double epsilon, double tau_lo, double tau_hi,
                                         double tau_step, double a, double b) {
  if (!(tau_step > 0.0)) throw DomainError("tau_step must be positive");
  TranslationScan scan;
  const auto count = static_cast<std::size_t>(std::floor((tau_hi - tau_lo) / tau_step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) {
    const double tau = tau_lo + static_cast<double>(k) * tau_step;
    if (translation_error(s, tau, a, b) <= epsilon) scan.hits.push_back(tau);
  }
  if (scan.hits.empty()) {
    scan.max_gap = tau_hi - tau_lo;
    return scan;
  }
  scan.max_gap = std::max(scan.hits.front() - tau_lo, tau_hi - scan.hits.back());
  for (std::size_t k = 1; k < scan.hits.size(); ++k)
    scan.max_gap = std::max(scan.max_gap, scan.hits[k] - scan.hits[k - 1]);
  return scan;
}

}  // namespace chronoscale
