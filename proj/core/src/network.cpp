#include "chronoscale/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chronoscale/errors.hpp"
#include "chronoscale/format.hpp"

namespace chronoscale {

namespace {

constexpr std::size_t family_slot(Family f) noexcept { return static_cast<std::size_t>(f); }

}  // namespace

bool is_matrix(Family f) noexcept { return family_slot(f) >= family_slot(Family::D); }

bool is_delay(Family f) noexcept {
  switch (f) {
    case Family::Eta:
    case Family::Varsigma:
    case Family::Tau:
    case Family::Sigma:
    case Family::Zeta: return true;
    default: return false;
  }
}

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::Alpha: return "alpha";
    case Family::C: return "c";
    case Family::B: return "B";
    case Family::E: return "E";
    case Family::I: return "I";
    case Family::J: return "J";
    case Family::Eta: return "eta";
    case Family::Varsigma: return "varsigma";
    case Family::D: return "D";
    case Family::Dtau: return "Dtau";
    case Family::Dbar: return "Dbar";
    case Family::Dtilde: return "Dtilde";
    case Family::Tau: return "tau";
    case Family::Sigma: return "sigma";
    case Family::Zeta: return "zeta";
  }
  return "?";
}

std::optional<Family> family_from_name(std::string_view name) noexcept {
  for (Family f : kAllFamilies)
    if (family_name(f) == name) return f;
  return std::nullopt;
}

std::string coeff_key(Family f, std::size_t i, std::size_t j) {
  std::string key(family_name(f));
  key += "." + std::to_string(i + 1);
  if (is_matrix(f)) key += "." + std::to_string(j + 1);
  return key;
}

// ----------------------------------------------------------- Activation

double Activation::operator()(double x) const noexcept {
  switch (kind) {
    case ActivationKind::SinHalf: return std::sin(0.5 * x);
    case ActivationKind::Tanh: return std::tanh(x);
    case ActivationKind::Identity: return x;
  }
  return x;
}

std::string_view Activation::name() const noexcept {
  switch (kind) {
    case ActivationKind::SinHalf: return "sin_half";
    case ActivationKind::Tanh: return "tanh";
    case ActivationKind::Identity: return "identity";
  }
  return "?";
}

std::optional<ActivationKind> Activation::kind_from_name(std::string_view name) noexcept {
  if (name == "sin_half") return ActivationKind::SinHalf;
  if (name == "tanh") return ActivationKind::Tanh;
  if (name == "identity") return ActivationKind::Identity;
  return std::nullopt;
}

// ---------------------------------------------------------- NetworkSpec

NetworkSpec::NetworkSpec(std::size_t n) : n_(n), activations_(n, Activation::identity()) {
  if (n == 0) throw DomainError("network needs at least one neuron");
  for (Family f : kAllFamilies) coeffs_[family_slot(f)].assign(is_matrix(f) ? n * n : n, CoeffExpr{});
}

std::size_t NetworkSpec::index(Family f, std::size_t i, std::size_t j) const {
  if (i >= n_ || (is_matrix(f) && j >= n_) || (!is_matrix(f) && j != 0))
    throw DomainError("coefficient index out of range for " + std::string(family_name(f)));
  return is_matrix(f) ? i * n_ + j : i;
}

const CoeffExpr& NetworkSpec::coeff(Family f, std::size_t i, std::size_t j) const {
  return coeffs_[family_slot(f)][index(f, i, j)];
}

void NetworkSpec::set(Family f, std::size_t i, CoeffExpr e) {
  coeffs_[family_slot(f)][index(f, i, 0)] = std::move(e);
}

void NetworkSpec::set(Family f, std::size_t i, std::size_t j, CoeffExpr e) {
  coeffs_[family_slot(f)][index(f, i, j)] = std::move(e);
}

void NetworkSpec::fill(Family f, const CoeffExpr& e) {
  for (auto& slot : coeffs_[family_slot(f)]) slot = e;
}

void NetworkSpec::set_override(Family f, std::size_t i, std::size_t j, double sup_abs, double inf_abs) {
  index(f, i, j);
  overrides_[coeff_key(f, i, j)] = BoundPair{sup_abs, inf_abs, BoundSource::UserOverride};
}

std::optional<BoundPair> NetworkSpec::override_for(Family f, std::size_t i, std::size_t j) const {
  auto it = overrides_.find(coeff_key(f, i, j));
  if (it == overrides_.end()) return std::nullopt;
  return it->second;
}

BoundPair NetworkSpec::bound(Family f, std::size_t i, std::size_t j, const SamplingSpec& grid) const {
  return bound_sup_inf(coeff(f, i, j), grid, override_for(f, i, j));
}

// ---------------------------------------------------------- HistorySpec

HistorySpec HistorySpec::constant(const std::vector<double>& x, const std::vector<double>& S) {
  if (x.size() != S.size()) throw DomainError("history: x and S sizes differ");
  HistorySpec h;
  for (double v : x) {
    h.phi.push_back(CoeffExpr::constant(v));
    h.phi_nabla.emplace_back(CoeffExpr::constant(0.0));
  }
  for (double v : S) {
    h.psi.push_back(CoeffExpr::constant(v));
    h.psi_nabla.emplace_back(CoeffExpr::constant(0.0));
  }
  return h;
}

double HistorySpec::x_nabla(std::size_t i, double t, const TimeScale& ts) const {
  if (i < phi_nabla.size() && phi_nabla[i]) return phi_nabla[i]->eval(t);
  const CoeffExpr& f = phi.at(i);
  return nabla_derivative([&](double s) { return f.eval(s); }, ts, t);
}

double HistorySpec::S_nabla(std::size_t i, double t, const TimeScale& ts) const {
  if (i < psi_nabla.size() && psi_nabla[i]) return psi_nabla[i]->eval(t);
  const CoeffExpr& f = psi.at(i);
  return nabla_derivative([&](double s) { return f.eval(s); }, ts, t);
}

// ---------------------------------------------------- FunctionAccessor

double FunctionAccessor::integrate_stm(std::size_t j, double a, double b, Channel ch,
                                       const std::function<double(double)>& g) const {
  const Fn& src = ch == Channel::State ? x_ : dx_;
  return nabla_integral([&](double s) { return g(src(j, s)); }, ts_, a, b);
}

// ----------------------------------------------------------- dynamics

double delayed_time(const TimeScale& ts, double t, double delay) {
  if (!(delay >= 0.0)) throw DomainError("negative delay " + format_number(delay) + " at t=" + format_number(t));
  if (delay == 0.0) return t;
  return ts.snap_down(t - delay);
}

double theta(const NetworkSpec& spec, const SamplingSpec& grid) {
  double out = 0.0;
  const std::size_t n = spec.size();
  for (Family f : kAllFamilies) {
    if (!is_delay(f)) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < (is_matrix(f) ? n : 1); ++j)
        out = std::max(out, spec.bound(f, i, j, grid).sup_abs);
  }
  return out;
}

namespace {

bool is_zero(const CoeffExpr& e) { return e.is_constant() && e.value() == 0.0; }

}  // namespace

double rhs_stm(const NetworkSpec& spec, const StateAccessor& acc, const TimeScale& ts, double t,
               std::size_t i) {
  const std::size_t n = spec.size();
  auto back = [&](Family f, std::size_t a, std::size_t b) {
    return delayed_time(ts, t, spec.coeff(f, a, b).eval(t));
  };

  double r = 0.0;
  const CoeffExpr& alpha = spec.coeff(Family::Alpha, i);
  if (!is_zero(alpha)) r -= alpha.eval(t) * acc.stm(i, back(Family::Eta, i, 0));

  for (std::size_t j = 0; j < n; ++j) {
    const Activation& f = spec.activation(j);
    const auto g = [&f](double v) { return f(v); };
    if (const CoeffExpr& d = spec.coeff(Family::D, i, j); !is_zero(d))
      r += d.eval(t) * f(acc.stm(j, t));
    if (const CoeffExpr& d = spec.coeff(Family::Dtau, i, j); !is_zero(d))
      r += d.eval(t) * f(acc.stm(j, back(Family::Tau, i, j)));
    if (const CoeffExpr& d = spec.coeff(Family::Dbar, i, j); !is_zero(d))
      r += d.eval(t) * acc.integrate_stm(j, back(Family::Sigma, i, j), t, Channel::State, g);
    if (const CoeffExpr& d = spec.coeff(Family::Dtilde, i, j); !is_zero(d))
      r += d.eval(t) * acc.integrate_stm(j, back(Family::Zeta, i, j), t, Channel::Nabla, g);
  }

  if (const CoeffExpr& b = spec.coeff(Family::B, i); !is_zero(b)) r += b.eval(t) * acc.ltm(i, t);
  r += spec.coeff(Family::I, i).eval(t);
  return r;
}

double rhs_ltm(const NetworkSpec& spec, const StateAccessor& acc, const TimeScale& ts, double t,
               std::size_t i) {
  double r = 0.0;
  const CoeffExpr& c = spec.coeff(Family::C, i);
  if (!is_zero(c)) {
    const double back = delayed_time(ts, t, spec.coeff(Family::Varsigma, i).eval(t));
    r -= c.eval(t) * acc.ltm(i, back);
  }
  if (const CoeffExpr& e = spec.coeff(Family::E, i); !is_zero(e))
    r += e.eval(t) * spec.activation(i)(acc.stm(i, t));
  r += spec.coeff(Family::J, i).eval(t);
  return r;
}

std::vector<std::string> validate(const NetworkSpec& spec, const TimeScale& ts, double a, double b,
                                  const SamplingSpec& grid) {
  std::vector<std::string> issues;
  const std::size_t n = spec.size();
  if (n == 0) {
    issues.emplace_back("network has no neurons");
    return issues;
  }
  if (spec.activations().size() != n) issues.emplace_back("activation count does not match n");

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (std::size_t j = 0; j < n; ++j) {
    const Activation& f = spec.activation(j);
    if (!(f.lipschitz > 0.0)) {
      issues.push_back("L_" + std::to_string(j + 1) + " must be positive");
      continue;
    }
    for (int k = 0; k < 1000; ++k) {
      const double u = dist(rng);
      const double v = dist(rng);
      if (std::abs(f(u) - f(v)) > f.lipschitz * std::abs(u - v) + 1e-12) {
        issues.push_back("activation " + std::to_string(j + 1) + " (" + std::string(f.name()) +
                         ") violates its Lipschitz constant " + format_number(f.lipschitz));
        break;
      }
    }
  }

  const double denom = grid.count > 1 ? static_cast<double>(grid.count - 1) : 1.0;
  for (Family f : kAllFamilies) {
    if (!is_delay(f)) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < (is_matrix(f) ? n : 1); ++j) {
        const CoeffExpr& e = spec.coeff(f, i, j);
        if (e.is_constant()) {
          if (e.value() < 0.0) issues.push_back(coeff_key(f, i, j) + " is negative");
          continue;
        }
        for (std::size_t k = 0; k < grid.count; ++k) {
          const double t = grid.t0 + (grid.t1 - grid.t0) * (static_cast<double>(k) / denom);
          if (e.eval(t) < 0.0) {
            issues.push_back(coeff_key(f, i, j) + " is negative at t=" + format_number(t));
            break;
          }
        }
      }
  }

  for (Family f : {Family::Alpha, Family::C})
    for (std::size_t i = 0; i < n; ++i) {
      const CoeffExpr& e = spec.coeff(f, i);
      if (!is_positively_regressive([&](double t) { return e.eval(t); }, ts, a, b))
        issues.push_back(coeff_key(f, i) + " is not positively regressive on the time scale");
    }
  return issues;
}

}  // namespace chronoscale
