#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "chronoscale/analyzer.hpp"
#include "chronoscale/errors.hpp"
#include "chronoscale/reference.hpp"

using namespace chronoscale;

namespace {

std::vector<std::pair<double, double>> sampled(const std::function<double(double)>& f, double t0, double t1, int n) {
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k < n; ++k) {
    const double t = t0 + (t1 - t0) * k / (n - 1);
    out.emplace_back(t, f(t));
  }
  return out;
}

Series series_of(const std::function<double(double)>& f, double t0, double t1, double dt) {
  Series s;
  for (double t = t0; t <= t1 + 1e-12; t += dt) {
    s.t.push_back(t);
    s.v.push_back(f(t));
  }
  return s;
}

TEST(DecayFit, ExactExponential) {
  const DecayFit fit = decay_fit(sampled([](double t) { return 2.0 * std::exp(-0.3 * t); }, 0, 40, 200), 0.0);
  EXPECT_NEAR(fit.lambda, 0.3, 1e-6);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-9);
  EXPECT_EQ(fit.points, 200u);
}

TEST(DecayFit, Constant) {
  const DecayFit fit = decay_fit(sampled([](double) { return 0.4; }, 0, 10, 50), 0.0);
  EXPECT_NEAR(fit.lambda, 0.0, 1e-9);
}

TEST(DecayFit, BurnInDropsEarlyPoints) {
  // Transient before t = 5, clean exponential after.
  auto f = [](double t) { return t < 5 ? 10.0 : std::exp(-0.5 * t); };
  const DecayFit fit = decay_fit(sampled(f, 0, 30, 301), 5.0);
  EXPECT_NEAR(fit.lambda, 0.5, 1e-9);
}

TEST(DecayFit, ConvergedSentinel) {
  const DecayFit fit = decay_fit(sampled([](double) { return 1e-16; }, 0, 10, 20), 0.0);
  EXPECT_TRUE(std::isinf(fit.lambda));
  EXPECT_GT(fit.lambda, 0.0);
}

TEST(DecayFit, TooFewPoints) {
  EXPECT_THROW(decay_fit(sampled([](double t) { return std::exp(-t); }, 0, 10, 9), 0.0), DomainError);
  EXPECT_THROW(decay_fit(sampled([](double t) { return std::exp(-t); }, 0, 10, 50), 9.9), DomainError);
}

TEST(DecayFit, LatticeNablaExponentialRate) {
  // c * e_{(-)lambda}(t, 0) on Z equals c (1 - lambda)^t.
  const double lambda = 0.2;
  const TimeScale z = TimeScale::integers();
  const RealFn p = [&](double) { return circle_minus(lambda, 1.0); };
  std::vector<std::pair<double, double>> data;
  for (int t = 0; t <= 60; ++t) data.emplace_back(t, 3.0 * nabla_exp(p, z, t, 0));
  EXPECT_NEAR(decay_fit(data, 0.0).lambda, -std::log(1.0 - lambda), 1e-6);
}

struct Pair {
  RunConfig cfg;
  TimeScale ts;
  Trajectory a, b;
  Certificate cert;
};

Pair run_pair(const std::string& scale, double t_end, bool same_history = false) {
  RunConfig cfg = reference::config(scale);
  const TimeScale ts = cfg.time_scale().with_step(cfg.run.h);
  const HistorySpec& h2 = same_history ? *cfg.history : *cfg.history2;
  Trajectory a = simulate(cfg.network, *cfg.history, ts, t_end, SimOptions{cfg.run.h, 4});
  Trajectory b = simulate(cfg.network, h2, ts, t_end, SimOptions{cfg.run.h, 4});
  const Certificate cert = find_lambda(compute_bounds(cfg.network, ts));
  return {std::move(cfg), ts, std::move(a), std::move(b), cert};
}

TEST(VerifyBound, IdenticalHistories) {
  const Pair p = run_pair("Z", 50.0, true);
  const StabilityReport rep = verify_bound(p.a, p.b, *p.cfg.history, *p.cfg.history, p.cert, p.ts);
  EXPECT_EQ(rep.history_distance, 0.0);
  EXPECT_FALSE(rep.violated);
  for (const StabilityRow& r : rep.rows) EXPECT_EQ(r.distance, 0.0);
  EXPECT_TRUE(std::isinf(rep.lambda_fit));
}

TEST(VerifyBound, ReferenceLatticeHolds) {
  const Pair p = run_pair("Z", 200.0);
  const StabilityReport rep = verify_bound(p.a, p.b, *p.cfg.history, *p.cfg.history2, p.cert, p.ts);
  EXPECT_FALSE(rep.violated);
  EXPECT_TRUE(rep.admissible);
  EXPECT_GT(rep.lambda_fit, 0.0);
  EXPECT_GT(rep.r_squared, 0.9);
  EXPECT_EQ(rep.lambda, p.cert.lambda);
  EXPECT_EQ(rep.rows.size(), 201u);
}

TEST(VerifyBound, BrokenCertificateViolates) {
  for (const char* scale : {"Z", "R"}) {
    const Pair p = run_pair(scale, 30.0);
    Certificate broken = p.cert;
    broken.lambda *= 100.0;
    const StabilityReport rep = verify_bound(p.a, p.b, *p.cfg.history, *p.cfg.history2, broken, p.ts);
    EXPECT_TRUE(rep.violated) << scale;
  }
}

TEST(VerifyBound, InadmissibleLambdaOnLattice) {
  const Pair p = run_pair("Z", 20.0);
  Certificate broken = p.cert;
  broken.lambda = 1.0;  // 1 - nu * (-)lambda vanishes
  const StabilityReport rep = verify_bound(p.a, p.b, *p.cfg.history, *p.cfg.history2, broken, p.ts);
  EXPECT_FALSE(rep.admissible);
  EXPECT_TRUE(rep.violated);
}

TEST(VerifyBound, MarginMonotoneInM) {
  const Pair p = run_pair("R", 20.0);
  Certificate c = p.cert;
  c.lambda *= 3.0;
  double prev_margin = -std::numeric_limits<double>::infinity();
  bool was_ok = false;
  for (double M : {0.5, 1.0, 2.0, p.cert.M, 10.0, 50.0}) {
    c.M = M;
    const StabilityReport rep = verify_bound(p.a, p.b, *p.cfg.history, *p.cfg.history2, c, p.ts);
    EXPECT_GE(rep.bound_margin, prev_margin);
    if (was_ok) EXPECT_FALSE(rep.violated);
    was_ok = !rep.violated;
    prev_margin = rep.bound_margin;
  }
}

TEST(VerifyBound, CsvAndText) {
  const Pair p = run_pair("Z", 20.0);
  const StabilityReport rep = verify_bound(p.a, p.b, *p.cfg.history, *p.cfg.history2, p.cert, p.ts);
  std::ostringstream os;
  write_stability_csv(os, rep);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t,distance,bound,margin");
  const std::string text = report_text(rep);
  for (const char* key : {"lambda=", "M=", "lambda_fit=", "r_squared=", "bound_margin=", "violated=false"})
    EXPECT_NE(text.find(key), std::string::npos) << key;
}

TEST(TranslationError, Examples) {
  const Series s = series_of([](double t) { return std::sin(t); }, 0, 40, 0.001);
  EXPECT_EQ(translation_error(s, 0.0, 5, 20), 0.0);
  EXPECT_LT(translation_error(s, 2 * std::numbers::pi, 5, 20), 1e-6);
  EXPECT_NEAR(translation_error(s, std::numbers::pi, 5, 20), 2.0, 1e-5);
  EXPECT_GE(translation_error(s, 1.0, 5, 20), 0.0);
}

TEST(TranslationError, CoverageGap) {
  const Series s = series_of([](double t) { return std::sin(t); }, 0, 10, 0.01);
  EXPECT_THROW(translation_error(s, 5.0, 2, 8), CoverageError);
  EXPECT_THROW(translation_error(s, 1.0, -1, 3), CoverageError);
}

TEST(TranslationError, SymmetricForPeriodicSignal) {
  // Over a window of whole periods the sup of |f(t + tau) - f(t)| equals that for -tau.
  const Series s = series_of([](double t) { return std::sin(t) + 0.3 * std::cos(2 * t); }, 0, 60, 0.001);
  const double a = 20.0, b = 20.0 + 4 * std::numbers::pi;
  for (double tau : {0.7, 1.3, 2.9}) EXPECT_NEAR(translation_error(s, tau, a, b), translation_error(s, -tau, a, b), 1e-5);
}

TEST(ScanTranslation, SineHitsPeriod) {
  const Series s = series_of([](double t) { return std::sin(t); }, 0, 40, 0.01);
  const TranslationScan scan = scan_translation_numbers(s, 1e-3, 0.0, 8.0, 0.001, 0.0, 30.0);
  ASSERT_FALSE(scan.hits.empty());
  EXPECT_NEAR(scan.hits.front(), 0.0, 1e-3);
  double nearest = 1e9;
  for (double h : scan.hits) nearest = std::min(nearest, std::abs(h - 2 * std::numbers::pi));
  EXPECT_LT(nearest, 1e-3);
  for (double h : scan.hits) EXPECT_LE(translation_error(s, h, 0.0, 30.0), 1e-3);
  EXPECT_LT(scan.max_gap, 2 * std::numbers::pi + 0.01);
  EXPECT_GT(scan.max_gap, 2 * std::numbers::pi - 0.01);
}

TEST(ScanTranslation, ConstantHitsEverything) {
  const Series s = series_of([](double) { return 1.5; }, 0, 30, 0.01);
  const TranslationScan scan = scan_translation_numbers(s, 1e-9, 1.0, 10.0, 0.5, 0.0, 10.0);
  EXPECT_EQ(scan.hits.size(), 19u);
  EXPECT_NEAR(scan.max_gap, 0.5, 1e-12);
}

TEST(ScanTranslation, NoHitsGapIsRange) {
  const Series s = series_of([](double t) { return t; }, 0, 30, 0.01);
  const TranslationScan scan = scan_translation_numbers(s, 1e-3, 1.0, 10.0, 0.5, 0.0, 10.0);
  EXPECT_TRUE(scan.hits.empty());
  EXPECT_NEAR(scan.max_gap, 9.0, 1e-12);
  EXPECT_THROW(scan_translation_numbers(s, 1e-3, 1.0, 10.0, 0.0, 0.0, 10.0), DomainError);
}

TEST(Component, AmplitudeOfSeries) {
  const Series s = series_of([](double t) { return 0.5 + 2.0 * std::sin(t); }, 0, 20, 0.001);
  EXPECT_NEAR(amplitude(s, 0, 20), 2.0, 1e-6);
}

TEST(Component, StartsAtZero) {
  const Pair p = run_pair("Z", 10.0);
  const Series s = component(p.a, Trajectory::Var::S, 1);
  EXPECT_EQ(s.t.front(), 0.0);
  EXPECT_EQ(s.t.size(), 11u);
  EXPECT_EQ(s.v.front(), p.a.S(1, p.a.start_index()));
}

}  // namespace
