#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "chronoscale/errors.hpp"
#include "chronoscale/reference.hpp"
#include "chronoscale/simulator.hpp"

using namespace chronoscale;
using E = CoeffExpr;

namespace {

NetworkSpec single_decay(double alpha) {
  NetworkSpec net(1);
  net.set(Family::Alpha, 0, E::constant(alpha));
  return net;
}

TEST(Simulate, ZeroSystemStaysZero) {
  for (const TimeScale& ts : {TimeScale::integers(), TimeScale::reals(0.05)}) {
    const Trajectory tr = simulate(NetworkSpec(2), HistorySpec::constant({0, 0}, {0, 0}), ts, 5.0);
    for (std::size_t k = 0; k < tr.size(); ++k)
      for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(tr.x(i, k), 0.0);
        EXPECT_EQ(tr.S(i, k), 0.0);
        EXPECT_EQ(tr.dx(i, k), 0.0);
        EXPECT_EQ(tr.dS(i, k), 0.0);
      }
  }
}

TEST(Simulate, LatticeDecayMatchesHandRecurrence) {
  // Same scheme written out: predictor holds dx(t-1), then K passes of
  // d <- -alpha * (x(t-1) + d).
  const double alpha = 0.5;
  const int K = 4;
  const Trajectory tr = simulate(single_decay(alpha), HistorySpec::constant({1.0}, {0.0}), TimeScale::integers(),
                                 50.0, SimOptions{0.0, K});
  double x = 1.0, d = 0.0;
  for (int t = 1; t <= 50; ++t) {
    for (int it = 0; it < K; ++it) d = -alpha * (x + d);
    x += d;
    const std::size_t k = tr.index_of(t);
    EXPECT_NEAR(tr.x(0, k), x, 1e-12) << "t=" << t;
    EXPECT_NEAR(tr.dx(0, k), d, 1e-12) << "t=" << t;
  }
}

TEST(Simulate, LatticeDecayConvergedCorrectorIsImplicitStep) {
  const Trajectory tr = simulate(single_decay(0.5), HistorySpec::constant({1.0}, {0.0}), TimeScale::integers(), 50.0,
                                 SimOptions{0.0, 60});
  for (int t = 0; t <= 50; ++t) EXPECT_NEAR(tr.x(0, tr.index_of(t)), std::pow(1.5, -t), 1e-12);
}

TEST(Simulate, DenseLinearOde) {
  NetworkSpec net = single_decay(1.0);
  net.set(Family::I, 0, E::constant(1.0));
  const Trajectory tr = simulate(net, HistorySpec::constant({0.0}, {0.0}), TimeScale::reals(), 5.0, SimOptions{1e-3, 4});
  EXPECT_NEAR(tr.x(0, tr.size() - 1), 1.0 - std::exp(-5.0), 2e-3);
  EXPECT_NEAR(tr.time(tr.size() - 1), 5.0, 1e-12);
}

TEST(Simulate, Deterministic) {
  const RunConfig cfg = reference::config("Z");
  const TimeScale ts = cfg.time_scale();
  const Trajectory a = simulate(cfg.network, *cfg.history, ts, 30.0, SimOptions{0.0, 8});
  const Trajectory b = simulate(cfg.network, *cfg.history, ts, 30.0, SimOptions{0.0, 8});
  std::ostringstream sa, sb;
  a.write_csv(sa);
  b.write_csv(sb);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(Simulate, StmIgnoresLtmHistoryWhenBIsZero) {
  NetworkSpec net = reference::network();
  net.fill(Family::B, E::constant(0.0));
  HistorySpec h1 = reference::history(0), h2 = h1;
  h2.psi[0] = E::constant(3.0);
  h2.psi_nabla[0] = E::constant(0.0);
  for (const TimeScale& ts : {TimeScale::integers(), TimeScale::reals(0.05)}) {
    const Trajectory a = simulate(net, h1, ts, 10.0), b = simulate(net, h2, ts, 10.0);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k)
      for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(a.x(i, k), b.x(i, k));
        EXPECT_EQ(a.dx(i, k), b.dx(i, k));
      }
  }
}

TEST(Simulate, InputShiftAddsGraininessTimesDelta) {
  NetworkSpec net(1);
  net.set(Family::I, 0, E::sin(E::time()));
  NetworkSpec shifted = net;
  const double delta = 0.375;
  shifted.set(Family::I, 0, E::sin(E::time()) + E::constant(delta));
  const TimeScale ts = TimeScale::integers(0.0, 0.5);
  const HistorySpec h = HistorySpec::constant({0.2}, {0.0});
  const Trajectory a = simulate(net, h, ts, 10.0), b = simulate(shifted, h, ts, 10.0);
  for (std::size_t k = a.start_index() + 1; k < a.size(); ++k) {
    const double inc_a = a.x(0, k) - a.x(0, k - 1), inc_b = b.x(0, k) - b.x(0, k - 1);
    EXPECT_NEAR(inc_b - inc_a, a.nu(k) * delta, 1e-14);
  }
}

TEST(Simulate, SelfConsistency) {
  const RunConfig cfg = reference::config("Z");
  const TimeScale ts = cfg.time_scale();
  const Trajectory tr = simulate(cfg.network, *cfg.history, ts, 40.0, SimOptions{0.0, 16});
  EXPECT_LT(self_consistency_residual(cfg.network, tr, ts), 1e-12);
}

TEST(Simulate, DenseSelfConsistencyShrinksWithStep) {
  // The neutral integral sees the chord slope at the new node while the final RHS is
  // evaluated, so the dense residual is a discretisation error rather than round-off.
  const RunConfig cfg = reference::config("R");
  double prev = 1.0;
  for (double h : {0.02, 0.01, 0.005}) {
    const TimeScale r = TimeScale::reals(h);
    const Trajectory dense = simulate(cfg.network, *cfg.history, r, 5.0, SimOptions{h, 4});
    const double res = self_consistency_residual(cfg.network, dense, r);
    EXPECT_LT(res, 1e-5) << h;
    EXPECT_LT(res, 0.5 * prev) << h;
    prev = res;
  }
}

TEST(Simulate, GridFollowsScale) {
  const TimeScale ts = TimeScale::union_of({Piece::interval(0, 1), Piece::lattice(2, 0.5, 4)}, 0.1);
  NetworkSpec net = single_decay(0.3);
  const Trajectory tr = simulate(net, HistorySpec::constant({1.0}, {0.0}), ts, 4.0);
  for (std::size_t k = tr.start_index() + 1; k < tr.size(); ++k) {
    const double t = tr.time(k);
    EXPECT_TRUE(ts.contains(t)) << t;
    if (tr.nu(k) > 0.0) {
      EXPECT_NEAR(tr.nu(k), graininess_nu(ts, t), 1e-12);
      EXPECT_NEAR(tr.time(k - 1), backward_jump(ts, t), 1e-12);
    } else {
      EXPECT_LE(t - tr.time(k - 1), 0.1 + 1e-12);
    }
  }
  EXPECT_NEAR(tr.time(tr.size() - 1), 4.0, 1e-12);
}

TEST(Simulate, HistoryWindowCoversDelays) {
  NetworkSpec net = single_decay(0.2);
  net.set(Family::Eta, 0, E::constant(2.5));
  const Trajectory tr = simulate(net, HistorySpec::constant({1.0}, {0.0}), TimeScale::integers(), 6.0);
  EXPECT_LE(tr.time(0), -2.5);
  // First steps read the constant history.
  EXPECT_NEAR(tr.x(0, tr.index_of(1.0)), 1.0 - 0.2, 1e-12);
}

TEST(Simulate, DivergentCorrectorFails) {
  NetworkSpec net(1);
  net.set(Family::D, 0, 0, E::constant(5.0));  // fixed-point factor 5
  try {
    simulate(net, HistorySpec::constant({1.0}, {0.0}), TimeScale::integers(), 5.0);
    FAIL() << "expected StepFailureError";
  } catch (const StepFailureError& e) {
    EXPECT_DOUBLE_EQ(e.at(), 1.0);
  }
}

TEST(Simulate, BadArguments) {
  const HistorySpec h = HistorySpec::constant({0.0}, {0.0});
  EXPECT_THROW(simulate(NetworkSpec(1), h, TimeScale::integers(), 0.0), DomainError);
  EXPECT_THROW(simulate(NetworkSpec(2), h, TimeScale::integers(), 5.0), DomainError);
  EXPECT_THROW(simulate(NetworkSpec(1), h, TimeScale::integers(), 5.0, SimOptions{0.0, 0}), DomainError);
  EXPECT_THROW(simulate(NetworkSpec(1), h, TimeScale::integers(0.5, 1.0), 5.0), DomainError);
}

TEST(Trajectory, LookupAndIndex) {
  NetworkSpec net = single_decay(1.0);
  net.set(Family::I, 0, E::constant(1.0));
  const Trajectory tr = simulate(net, HistorySpec::constant({0.0}, {0.0}), TimeScale::reals(0.1), 1.0);
  EXPECT_THROW(tr.index_of(0.55), GridMismatchError);
  const std::size_t k = tr.index_of(0.5);
  const double mid = tr.lookup(Trajectory::Var::X, 0, 0.55);
  EXPECT_NEAR(mid, 0.5 * (tr.x(0, k) + tr.x(0, k + 1)), 1e-12);
  // Derivative channel is piecewise constant between grid points.
  EXPECT_NEAR(tr.lookup(Trajectory::Var::DX, 0, 0.55), (tr.x(0, k + 1) - tr.x(0, k)) / 0.1, 1e-9);
  EXPECT_EQ(tr.lookup(Trajectory::Var::DX, 0, 0.52), tr.lookup(Trajectory::Var::DX, 0, 0.58));
  EXPECT_THROW(tr.lookup(Trajectory::Var::X, 0, tr.time(0) - 1.0), HistoryUnderflowError);
}

TEST(Trajectory, CsvLayout) {
  const Trajectory tr = simulate(NetworkSpec(2), HistorySpec::constant({0, 0}, {0, 0}), TimeScale::integers(), 3.0);
  std::ostringstream os;
  tr.write_csv(os);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "t,x_1,x_2,S_1,S_2,dx_1,dx_2,dS_1,dS_2");
  std::size_t rows = 0;
  for (std::string line; std::getline(is, line);) ++rows;
  EXPECT_EQ(rows, tr.size());
  EXPECT_EQ(os.str().find('\r'), std::string::npos);
}

TEST(Distance, IdenticalAndShifted) {
  const RunConfig cfg = reference::config("Z");
  const TimeScale ts = cfg.time_scale();
  const Trajectory a = simulate(cfg.network, *cfg.history, ts, 20.0);
  for (double t : {0.0, 5.0, 20.0}) EXPECT_EQ(trajectory_norm_distance(a, a, t), 0.0);

  Trajectory b = a;
  for (std::size_t k = 0; k < b.size(); ++k) b.set(Trajectory::Var::X, 0, k, b.x(0, k) + 0.2);
  for (double t : {0.0, 5.0, 20.0}) EXPECT_GE(trajectory_norm_distance(a, b, t), 0.2 - 1e-15);

  const Trajectory shorter = simulate(cfg.network, *cfg.history, ts, 10.0);
  EXPECT_THROW(trajectory_norm_distance(a, shorter, 15.0), GridMismatchError);
  EXPECT_THROW(distance_series(a, shorter), GridMismatchError);
}

TEST(Distance, ReferencePairDecays) {
  const RunConfig cfg = reference::config("Z");
  const TimeScale ts = cfg.time_scale();
  const Trajectory a = simulate(cfg.network, *cfg.history, ts, 60.0);
  const Trajectory b = simulate(cfg.network, *cfg.history2, ts, 60.0);
  const auto d = distance_series(a, b);
  ASSERT_FALSE(d.empty());
  EXPECT_EQ(d.front().first, 0.0);
  EXPECT_GT(d.front().second, 0.0);
  EXPECT_LT(d.back().second, 1e-3 * d.front().second);
}

TEST(HistoryNorm, Examples) {
  const TimeScale ts = TimeScale::reals(0.01);
  const HistorySpec h = reference::history(0);
  EXPECT_EQ(history_norm(h, h, ts, 1.0), 0.0);
  HistorySpec g = h;
  g.phi[1] = h.phi[1] + E::constant(0.3);
  EXPECT_NEAR(history_norm(h, g, ts, 1.0), 0.3, 1e-15);
  // Reference pair: both x differences reach 0.7 at t = 0; derivatives differ by at most 0.25.
  EXPECT_NEAR(history_norm(reference::history(0), reference::history(1), ts, 1.0), 0.7, 1e-12);
}

}  // namespace
