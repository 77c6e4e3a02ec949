#include "chronoscale/reference.hpp"

#include <cmath>
#include <numbers>

namespace chronoscale::reference {

namespace {

using E = CoeffExpr;
constexpr double pi = std::numbers::pi;

// sin(w t), cos(w t + p)
E sin_wt(double w) { return E::sin(E::affine(w, 0.0, E::time())); }
E cos_wt(double w, double p = 0.0) { return E::cos(E::affine(w, p, E::time())); }

// exp(-k |g|)
E decay(double k, E g) { return E::exp(E::scale(-k, E::abs(std::move(g)))); }

}  // namespace

NetworkSpec network() {
  NetworkSpec net(2);
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s5 = std::sqrt(5.0), s7 = std::sqrt(7.0),
               s11 = std::sqrt(11.0);
  const double b_scale = 1.0 / (pi * std::exp(2.0 * pi));

  net.set(Family::Alpha, 0, E::constant(0.895) + 0.005 * sin_wt(s7));
  net.set(Family::Alpha, 1, E::constant(0.79) + 0.01 * cos_wt(s11));
  for (Family f : {Family::D, Family::Dtau, Family::Dbar, Family::Dtilde})
    for (std::size_t j = 0; j < 2; ++j) {
      net.set(f, 0, j, 0.05 * E::sin(E::time()));
      net.set(f, 1, j, 0.05 * E::cos(E::time()));
    }
  net.set(Family::B, 0, b_scale * sin_wt(s2));
  net.set(Family::B, 1, b_scale * E::cos(E::time()));
  net.set(Family::C, 0, E::constant(0.285) + 0.005 * sin_wt(s5));
  net.set(Family::C, 1, E::constant(0.275) + 0.005 * cos_wt(s3));
  net.set(Family::E, 0, 0.21 * E::sin(E::time()));
  net.set(Family::E, 1, 0.16 * cos_wt(s3));
  net.set(Family::I, 0, 0.08 * sin_wt(s7));
  net.set(Family::I, 1, 0.1 * E::cos(E::time()));
  net.set(Family::J, 0, 0.01 * sin_wt(s2));
  net.set(Family::J, 1, 0.02 * cos_wt(s3));

  net.set(Family::Eta, 0, decay(5.0, cos_wt(pi, 1.5 * pi)));
  net.set(Family::Eta, 1, decay(4.0, cos_wt(pi, 0.5 * pi)));
  net.set(Family::Sigma, 0, 0, decay(4.0, sin_wt(pi)));
  net.set(Family::Sigma, 0, 1, decay(5.0, cos_wt(pi, 1.5 * pi)));
  net.set(Family::Sigma, 1, 0, decay(6.0, cos_wt(pi, -1.5 * pi)));
  net.set(Family::Sigma, 1, 1, decay(4.0, sin_wt(3.0 * pi)));
  net.set(Family::Zeta, 0, 0, decay(7.0, sin_wt(2.0 * pi)));
  net.set(Family::Zeta, 0, 1, decay(5.0, sin_wt(5.0 * pi)));
  net.set(Family::Zeta, 1, 0, decay(4.0, cos_wt(pi, 2.5 * pi)));
  net.set(Family::Zeta, 1, 1, decay(5.0, cos_wt(pi, 0.5 * pi)));
  net.set(Family::Varsigma, 0, decay(4.0, cos_wt(pi, 1.5 * pi)));
  net.set(Family::Varsigma, 1, decay(7.0, sin_wt(3.0 * pi)));
  // No transmission delay tau_ij is given for this example; a constant is used.
  net.fill(Family::Tau, E::constant(0.1));

  net.set_activation(0, Activation::sin_half(1.0));
  net.set_activation(1, Activation::sin_half(1.0));

  // Tabulated bounds. E_2 and varsigma carry the values the radius
  // arithmetic actually uses (0.21; 0.04 and 0.05).
  net.set_override(Family::Alpha, 0, 0, 0.9, 0.89);
  net.set_override(Family::Alpha, 1, 0, 0.8, 0.78);
  net.set_override(Family::C, 0, 0, 0.29, 0.28);
  net.set_override(Family::C, 1, 0, 0.28, 0.27);
  for (Family f : {Family::D, Family::Dtau, Family::Dbar, Family::Dtilde})
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) net.set_override(f, i, j, 0.05, 0.05);
  net.set_override(Family::B, 0, b_scale);
  net.set_override(Family::B, 1, b_scale);
  net.set_override(Family::E, 0, 0.21);
  net.set_override(Family::E, 1, 0.21);
  net.set_override(Family::I, 0, 0.08);
  net.set_override(Family::I, 1, 0.1);
  net.set_override(Family::J, 0, 0.01);
  net.set_override(Family::J, 1, 0.02);
  net.set_override(Family::Eta, 0, 0.06);
  net.set_override(Family::Eta, 1, 0.05);
  net.set_override(Family::Sigma, 0, 0, 0.08, 0.08);
  net.set_override(Family::Sigma, 0, 1, 0.07, 0.07);
  net.set_override(Family::Sigma, 1, 0, 0.04, 0.04);
  net.set_override(Family::Sigma, 1, 1, 0.02, 0.02);
  net.set_override(Family::Zeta, 0, 0, 0.06, 0.06);
  net.set_override(Family::Zeta, 0, 1, 0.05, 0.05);
  net.set_override(Family::Zeta, 1, 0, 0.02, 0.02);
  net.set_override(Family::Zeta, 1, 1, 0.03, 0.03);
  net.set_override(Family::Varsigma, 0, 0.04);
  net.set_override(Family::Varsigma, 1, 0.05);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) net.set_override(Family::Tau, i, j, 0.1, 0.1);
  return net;
}

HistorySpec history(int which) {
  // Affine in t, so the nabla derivative is the slope on any time scale.
  struct Line {
    double a, b;  // a + b t
  };
  const Line sets[2][4] = {
      {{0.3, 0.1}, {-0.2, -0.05}, {0.1, 0.0}, {0.2, 0.1}},
      {{-0.4, 0.0}, {0.5, 0.2}, {-0.3, 0.1}, {-0.1, 0.0}},
  };
  const auto& s = sets[which == 0 ? 0 : 1];
  HistorySpec h;
  for (int i = 0; i < 2; ++i) {
    h.phi.push_back(E::affine(s[i].b, s[i].a, E::time()));
    h.phi_nabla.emplace_back(E::constant(s[i].b));
    h.psi.push_back(E::affine(s[2 + i].b, s[2 + i].a, E::time()));
    h.psi_nabla.emplace_back(E::constant(s[2 + i].b));
  }
  return h;
}

RunConfig config(const std::string& timescale) {
  RunConfig cfg;
  cfg.network = network();
  cfg.timescale = timescale;
  cfg.history = history(0);
  cfg.history2 = history(1);
  cfg.run.t_end = timescale == "Z" ? 200.0 : 50.0;
  cfg.run.h = 0.01;
  cfg.run.r_grid = {kRadius};
  return cfg;
}

}  // namespace chronoscale::reference
