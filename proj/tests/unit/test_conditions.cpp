#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "chronoscale/conditions.hpp"
#include "chronoscale/errors.hpp"
#include "chronoscale/reference.hpp"

using namespace chronoscale;
using E = CoeffExpr;

namespace {

BoundSet reference_bounds(const TimeScale& ts = TimeScale::integers()) {
  return compute_bounds(reference::network(), ts);
}

// Every weight-type bound (D families, B, E) multiplied by k.
NetworkSpec scaled_weights(double k) {
  NetworkSpec net = reference::network();
  for (Family f : {Family::D, Family::Dtau, Family::Dbar, Family::Dtilde, Family::B, Family::E})
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < (is_matrix(f) ? 2u : 1u); ++j) {
        const auto o = net.override_for(f, i, j);
        net.set_override(f, i, j, k * o->sup_abs, k * o->inf_abs);
      }
  return net;
}

// alpha = c = 1, everything else zero, identity activations (f(0) = 0).
NetworkSpec unit_decay(std::size_t n) {
  NetworkSpec net(n);
  net.fill(Family::Alpha, E::constant(1.0));
  net.fill(Family::C, E::constant(1.0));
  return net;
}

TEST(ComputeBounds, ReferenceOverrides) {
  const BoundSet b = reference_bounds();
  EXPECT_EQ(b.sup(Family::Alpha, 0), 0.9);
  EXPECT_EQ(b.inf(Family::Alpha, 0), 0.89);
  EXPECT_EQ(b.pair(Family::Alpha, 0).source, BoundSource::UserOverride);
  EXPECT_EQ(b.sup(Family::Varsigma, 0), 0.04);
  EXPECT_EQ(b.L(0), 1.0);
  EXPECT_EQ(b.f0(1), 0.0);
}

TEST(ComputeBounds, Graininess) {
  EXPECT_EQ(reference_bounds(TimeScale::integers()).nu_sup(), 1.0);
  EXPECT_EQ(reference_bounds(TimeScale::reals()).nu_sup(), 0.0);
}

TEST(ComputeBounds, SampledWithoutOverride) {
  NetworkSpec net = unit_decay(1);
  net.set(Family::I, 0, 0.3 * E::cos(E::time()));
  const BoundSet b = compute_bounds(net, TimeScale::reals());
  EXPECT_NEAR(b.sup(Family::I, 0), 0.3, 1e-3);
  EXPECT_EQ(b.pair(Family::I, 0).source, BoundSource::Sampled);
}

TEST(ComputeBounds, DegenerateDecay) {
  NetworkSpec net = unit_decay(2);
  net.set(Family::C, 1, E::sin(E::time()));
  EXPECT_THROW(compute_bounds(net, TimeScale::integers()), DegenerateDecayError);
  NetworkSpec zero(1);
  EXPECT_THROW(compute_bounds(zero, TimeScale::reals()), DegenerateDecayError);
}

TEST(ComputePQ, Reference) {
  const PQ pq = compute_PQ(reference_bounds(), 0.45);
  EXPECT_NEAR(pq.P[0], 0.2004, 5e-4);
  EXPECT_NEAR(pq.P[1], 0.2107, 5e-4);
  EXPECT_NEAR(pq.Q[0], 0.1097, 5e-4);
  EXPECT_NEAR(pq.Q[1], 0.1208, 5e-4);
}

TEST(ComputePQ, HandExpansion) {
  // Term-by-term with L = 1, f(0) = 0, r = 0.45.
  const double r = 0.45, w = 0.05;
  const double B = 1.0 / (std::numbers::pi * std::exp(2.0 * std::numbers::pi));
  const double P1 = 0.9 * 0.06 * r + 2 * w * r + 2 * w * r + w * (0.08 + 0.07) * r + w * (0.06 + 0.05) * r + B * r + 0.08;
  const double Q2 = 0.28 * 0.05 * r + 0.21 * r + 0.02;
  const PQ pq = compute_PQ(reference_bounds(), r);
  EXPECT_NEAR(pq.P[0], P1, 1e-15);
  EXPECT_NEAR(pq.Q[1], Q2, 1e-15);
}

TEST(ComputePQ, ZeroBounds) {
  const PQ pq = compute_PQ(compute_bounds(unit_decay(2), TimeScale::reals()), 0.7);
  for (double v : pq.P) EXPECT_EQ(v, 0.0);
  for (double v : pq.Q) EXPECT_EQ(v, 0.0);
  const PQ bar = compute_PQbar(compute_bounds(unit_decay(2), TimeScale::reals()));
  for (double v : bar.P) EXPECT_EQ(v, 0.0);
}

TEST(ComputePQ, ActivationOffsetEntersThroughF0) {
  NetworkSpec net = unit_decay(1);
  net.set(Family::D, 0, 0, E::constant(2.0));
  net.set_activation(0, Activation::identity(3.0));
  const BoundSet b = compute_bounds(net, TimeScale::reals());
  EXPECT_DOUBLE_EQ(compute_PQ(b, 0.5).P[0], 2.0 * (3.0 * 0.5 + 0.0));
}

TEST(ComputePQbar, Reference) {
  const PQ bar = compute_PQbar(reference_bounds());
  EXPECT_NEAR(bar.Q[0], 0.2216, 5e-4);
  EXPECT_NEAR(bar.Q[1], 0.224, 5e-4);
  // Full formula including the delayed-feedback sum.
  const double w = 0.05, B = 1.0 / (std::numbers::pi * std::exp(2.0 * std::numbers::pi));
  EXPECT_NEAR(bar.P[0], 0.9 * 0.06 + 4 * w + w * 0.15 + w * 0.11 + B, 1e-15);
  EXPECT_NEAR(bar.P[1], 0.8 * 0.05 + 4 * w + w * 0.06 + w * 0.05 + B, 1e-15);
}

TEST(ComputePQbar, IsSlopeOfPQ) {
  const BoundSet b = reference_bounds();
  const PQ a = compute_PQ(b, 0.3), c = compute_PQ(b, 0.8), bar = compute_PQbar(b);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR((c.P[i] - a.P[i]) / 0.5, bar.P[i], 1e-12);
    EXPECT_NEAR((c.Q[i] - a.Q[i]) / 0.5, bar.Q[i], 1e-12);
  }
}

TEST(CheckH3, Reference) {
  const H3Report rep = check_H3(reference_bounds(), 0.45);
  EXPECT_NEAR(rep.max_ratio, 0.4474, 5e-4);
  EXPECT_NEAR(rep.kappa, 0.8296, 5e-4);
  EXPECT_TRUE(rep.feasible());
  EXPECT_EQ(rep.ratios.size(), 8u);
  EXPECT_EQ(rep.kappa_ratios.size(), 8u);
}

TEST(CheckH3, DoubledWeightsInfeasible) {
  const H3Report rep = check_H3(compute_bounds(scaled_weights(2.0), TimeScale::integers()), 0.45);
  EXPECT_GE(rep.kappa, 1.0);
  EXPECT_FALSE(rep.feasible());
}

TEST(CheckH3, NonPositiveRadiusThrows) {
  EXPECT_THROW(check_H3(reference_bounds(), 0.0), DomainError);
  EXPECT_THROW(check_H3(reference_bounds(), -1.0), DomainError);
}

TEST(CheckH3, KappaIndependentOfRadius) {
  const BoundSet b = reference_bounds();
  const double k = check_H3(b, 0.45).kappa;
  for (double r : {0.01, 0.2, 1.0, 10.0}) EXPECT_EQ(check_H3(b, r).kappa, k);
}

TEST(CheckH3, MaxRatioAffineIncreasing) {
  const BoundSet b = reference_bounds();
  // Each ratio is affine, so the max is convex; check each ratio is affine
  // with positive slope and the max increases.
  const H3Report r1 = check_H3(b, 0.2), r2 = check_H3(b, 0.5), r3 = check_H3(b, 0.8);
  for (std::size_t k = 0; k < r1.ratios.size(); ++k) {
    const double s12 = (r2.ratios[k].value - r1.ratios[k].value) / 0.3;
    const double s23 = (r3.ratios[k].value - r2.ratios[k].value) / 0.3;
    EXPECT_GT(s12, 0.0);
    EXPECT_NEAR(s12, s23, 1e-12);
  }
  EXPECT_LT(r1.max_ratio, r2.max_ratio);
  EXPECT_LT(r2.max_ratio, r3.max_ratio);
}

TEST(CheckH3, EqualityCountsAsFeasible) {
  const BoundSet b = reference_bounds();
  const auto r = minimal_radius(b);
  ASSERT_TRUE(r.has_value());
  EXPECT_TRUE(check_H3(b, *r).feasible());
  EXPECT_FALSE(check_H3(b, *r * (1 - 1e-9)).feasible());
}

TEST(SearchR, Examples) {
  std::vector<double> grid;
  for (int k = 0; k <= 18; ++k) grid.push_back(0.1 + 0.05 * k);
  const auto r = search_r(reference_bounds(), grid);
  ASSERT_TRUE(r.has_value());
  EXPECT_LE(*r, 0.45 + 1e-12);
  EXPECT_TRUE(check_H3(reference_bounds(), *r).feasible());
  // Previous grid point fails.
  EXPECT_FALSE(check_H3(reference_bounds(), *r - 0.05).feasible());

  EXPECT_EQ(search_r(compute_bounds(unit_decay(2), TimeScale::reals()), grid), 0.1);
  EXPECT_FALSE(search_r(compute_bounds(scaled_weights(2.0), TimeScale::integers()), grid).has_value());
  EXPECT_FALSE(minimal_radius(compute_bounds(scaled_weights(2.0), TimeScale::integers())).has_value());
}

TEST(HFunctions, AtZero) {
  const BoundSet b = reference_bounds();
  const HValues h = h_functions(b, 0.0);
  const PQ bar = compute_PQbar(b);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(h.H[i], b.inf(Family::Alpha, i) - bar.P[i], 1e-15);
    EXPECT_NEAR(h.Hbar[i], b.inf(Family::C, i) - bar.Q[i], 1e-15);
    EXPECT_GT(h.H[i], 0.0);
    EXPECT_GT(h.Hbar[i], 0.0);
    EXPECT_GT(h.Hstar[i], 0.0);
    EXPECT_GT(h.Hbarstar[i], 0.0);
  }
}

TEST(HFunctions, LargeBetaNegative) {
  const HValues h = h_functions(reference_bounds(), 1e3);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LT(h.H[i], 0.0);
    EXPECT_LT(h.Hbar[i], 0.0);
    EXPECT_LT(h.Hstar[i], 0.0);
    EXPECT_LT(h.Hbarstar[i], 0.0);
  }
}

TEST(HFunctions, StrictlyDecreasing) {
  for (const TimeScale& ts : {TimeScale::integers(), TimeScale::reals()}) {
    const BoundSet b = reference_bounds(ts);
    HValues prev = h_functions(b, 0.0);
    for (double beta = 0.01; beta < 0.3; beta += 0.01) {
      const HValues cur = h_functions(b, beta);
      for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_LT(cur.H[i], prev.H[i]);
        EXPECT_LT(cur.Hbar[i], prev.Hbar[i]);
        EXPECT_LT(cur.Hstar[i], prev.Hstar[i]);
        EXPECT_LT(cur.Hbarstar[i], prev.Hbarstar[i]);
      }
      prev = cur;
    }
  }
}

TEST(FindLambda, Reference) {
  const BoundSet b = reference_bounds();
  const Certificate c = find_lambda(b);
  EXPECT_GT(c.lambda, 0.0);
  EXPECT_LT(c.lambda, std::min({0.89, 0.78, 0.28, 0.27}));
  EXPECT_GT(c.M, 1.0);
  EXPECT_LE(c.lambda_upper - c.lambda, kLambdaTolerance);
  // Independent re-evaluation.
  EXPECT_GE(h_functions(b, c.lambda).min(), kHFloor);
  EXPECT_LT(h_functions(b, c.lambda * 1.01).min(), 0.0);
}

TEST(FindLambda, MIsDirectRatioMax) {
  const BoundSet b = reference_bounds();
  const PQ bar = compute_PQbar(b);
  const double want = std::max({0.89 / bar.P[0], 0.78 / bar.P[1], 0.28 / bar.Q[0], 0.27 / bar.Q[1]});
  EXPECT_DOUBLE_EQ(find_lambda(b).M, want);
  EXPECT_DOUBLE_EQ(certificate_M(b), want);
}

TEST(FindLambda, DenseScaleAllowsLargerLambda) {
  EXPECT_GE(find_lambda(reference_bounds(TimeScale::reals())).lambda,
            find_lambda(reference_bounds(TimeScale::integers())).lambda);
}

TEST(FindLambda, InfeasibleThrows) {
  EXPECT_THROW(find_lambda(compute_bounds(scaled_weights(2.0), TimeScale::integers())), NoCertificateError);
}

TEST(FindLambda, BelowInverseGraininess) {
  // Fast decay on a coarse lattice: lambda must stay below 1 / nu.
  NetworkSpec net = unit_decay(1);
  net.fill(Family::Alpha, E::constant(0.95));
  net.fill(Family::C, E::constant(0.95));
  net.set(Family::D, 0, 0, E::constant(0.01));
  net.set(Family::E, 0, E::constant(0.01));
  const Certificate c = find_lambda(compute_bounds(net, TimeScale::integers(0, 2.0)));
  EXPECT_LT(c.lambda, 0.5);
}

TEST(CertificateText, RoundTrip) {
  const Certificate c = find_lambda(reference_bounds());
  const Certificate back = parse_certificate(serialize(c));
  EXPECT_EQ(back.lambda, c.lambda);
  EXPECT_EQ(back.M, c.M);
  EXPECT_EQ(back.nu_sup, c.nu_sup);
  EXPECT_EQ(back.lambda_upper, c.lambda_upper);
  EXPECT_THROW(parse_certificate("lambda=abc\n"), ConfigError);
  EXPECT_THROW(parse_certificate("M=2\n"), ConfigError);
}

}  // namespace
