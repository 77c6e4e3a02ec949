#pragma once

// Parameterization of the neutral-type competitive network with mixed
// time-varying and leakage delays, and evaluation of its right-hand sides:
//
//   x_i^nabla(t) = -alpha_i(t) x_i(t - eta_i(t))
//                + sum_j D_ij(t) f_j(x_j(t))
//                + sum_j Dtau_ij(t) f_j(x_j(t - tau_ij(t)))
//                + sum_j Dbar_ij(t) int_{t - sigma_ij(t)}^{t} f_j(x_j(s)) nabla s
//                + sum_j Dtilde_ij(t) int_{t - zeta_ij(t)}^{t} f_j(x_j^nabla(s)) nabla s
//                + B_i(t) S_i(t) + I_i(t)
//   S_i^nabla(t) = -c_i(t) S_i(t - varsigma_i(t)) + E_i(t) f_i(x_i(t)) + J_i(t)

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronoscale/coeffs.hpp"
#include "chronoscale/timescale.hpp"

namespace chronoscale {

enum class Family {
  // per-neuron
  Alpha, C, B, E, I, J, Eta, Varsigma,
  // n x n
  D, Dtau, Dbar, Dtilde, Tau, Sigma, Zeta,
};

inline constexpr std::array<Family, 15> kAllFamilies = {
    Family::Alpha, Family::C,    Family::B,    Family::E,      Family::I,
    Family::J,     Family::Eta,  Family::Varsigma, Family::D,  Family::Dtau,
    Family::Dbar,  Family::Dtilde, Family::Tau, Family::Sigma, Family::Zeta};

bool is_matrix(Family f) noexcept;
bool is_delay(Family f) noexcept;
std::string_view family_name(Family f) noexcept;
std::optional<Family> family_from_name(std::string_view name) noexcept;

/// "alpha.1", "D.1.2" (1-based), the keys used for bound overrides and config.
std::string coeff_key(Family f, std::size_t i, std::size_t j = 0);

enum class ActivationKind { SinHalf, Tanh, Identity };

struct Activation {
  ActivationKind kind = ActivationKind::Identity;
  double lipschitz = 1.0;  // user data; may exceed the analytic constant

  double operator()(double x) const noexcept;
  double at_zero() const noexcept { return (*this)(0.0); }
  std::string_view name() const noexcept;
  static std::optional<ActivationKind> kind_from_name(std::string_view name) noexcept;
  static Activation sin_half(double L = 0.5) { return {ActivationKind::SinHalf, L}; }
  static Activation tanh(double L = 1.0) { return {ActivationKind::Tanh, L}; }
  static Activation identity(double L = 1.0) { return {ActivationKind::Identity, L}; }
};

class NetworkSpec {
 public:
  NetworkSpec() = default;
  /// n neurons, every coefficient and delay identically zero, identity activations.
  explicit NetworkSpec(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  const CoeffExpr& coeff(Family f, std::size_t i, std::size_t j = 0) const;
  void set(Family f, std::size_t i, CoeffExpr e);
  void set(Family f, std::size_t i, std::size_t j, CoeffExpr e);
  /// Same expression for every entry of the family.
  void fill(Family f, const CoeffExpr& e);

  const Activation& activation(std::size_t j) const { return activations_.at(j); }
  void set_activation(std::size_t j, Activation a) { activations_.at(j) = a; }
  const std::vector<Activation>& activations() const noexcept { return activations_; }

  const std::map<std::string, BoundPair>& bound_overrides() const noexcept { return overrides_; }
  void set_override(Family f, std::size_t i, std::size_t j, double sup_abs, double inf_abs);
  void set_override(Family f, std::size_t i, double sup_abs) { set_override(f, i, 0, sup_abs, sup_abs); }
  void set_override(const std::string& key, BoundPair b) { overrides_[key] = b; }
  std::optional<BoundPair> override_for(Family f, std::size_t i, std::size_t j = 0) const;

  /// Sampled (or overridden) bound for one coefficient.
  BoundPair bound(Family f, std::size_t i, std::size_t j = 0, const SamplingSpec& grid = {}) const;

 private:
  std::size_t index(Family f, std::size_t i, std::size_t j) const;

  std::size_t n_ = 0;
  std::array<std::vector<CoeffExpr>, kAllFamilies.size()> coeffs_;
  std::vector<Activation> activations_;
  std::map<std::string, BoundPair> overrides_;
};

/// Initial functions on [-theta, 0]. Missing nabla derivatives are computed
/// numerically on the working time scale.
struct HistorySpec {
  std::vector<CoeffExpr> phi;
  std::vector<std::optional<CoeffExpr>> phi_nabla;
  std::vector<CoeffExpr> psi;
  std::vector<std::optional<CoeffExpr>> psi_nabla;

  static HistorySpec constant(const std::vector<double>& x, const std::vector<double>& S);

  std::size_t size() const noexcept { return phi.size(); }
  double x(std::size_t i, double t) const { return phi.at(i).eval(t); }
  double S(std::size_t i, double t) const { return psi.at(i).eval(t); }
  double x_nabla(std::size_t i, double t, const TimeScale& ts) const;
  double S_nabla(std::size_t i, double t, const TimeScale& ts) const;
};

enum class Channel { State, Nabla };

/// Read access to state histories during right-hand-side evaluation.
class StateAccessor {
 public:
  virtual ~StateAccessor() = default;
  virtual double stm(std::size_t j, double t, Channel ch = Channel::State) const = 0;
  virtual double ltm(std::size_t j, double t, Channel ch = Channel::State) const = 0;
  /// int_a^b g(x_j(s)) nabla s, or of g(x_j^nabla(s)) for Channel::Nabla.
  virtual double integrate_stm(std::size_t j, double a, double b, Channel ch,
                               const std::function<double(double)>& g) const = 0;
};

/// Accessor backed by plain functions of time; integrals go through
/// nabla_integral on the given time scale.
class FunctionAccessor final : public StateAccessor {
 public:
  using Fn = std::function<double(std::size_t, double)>;
  FunctionAccessor(const TimeScale& ts, Fn x, Fn x_nabla, Fn S, Fn S_nabla)
      : ts_(ts), x_(std::move(x)), dx_(std::move(x_nabla)), s_(std::move(S)), ds_(std::move(S_nabla)) {}

  double stm(std::size_t j, double t, Channel ch) const override { return ch == Channel::State ? x_(j, t) : dx_(j, t); }
  double ltm(std::size_t j, double t, Channel ch) const override { return ch == Channel::State ? s_(j, t) : ds_(j, t); }
  double integrate_stm(std::size_t j, double a, double b, Channel ch,
                       const std::function<double(double)>& g) const override;

 private:
  const TimeScale& ts_;
  Fn x_, dx_, s_, ds_;
};

/// t - delay snapped to the nearest point of the scale at or below it.
double delayed_time(const TimeScale& ts, double t, double delay);

/// max over the delay sup-bounds; the leakage delay eta plays the role of delta.
double theta(const NetworkSpec& spec, const SamplingSpec& grid = {});

double rhs_stm(const NetworkSpec& spec, const StateAccessor& acc, const TimeScale& ts, double t,
               std::size_t i);
double rhs_ltm(const NetworkSpec& spec, const StateAccessor& acc, const TimeScale& ts, double t,
               std::size_t i);

/// Problems found by the structural checks (empty when the network is usable):
/// dimensions, L_j > 0, a 1000-pair Lipschitz spot check, nonnegative delays
/// on the sampling grid, and positive regressivity of alpha and c on [a, b].
std::vector<std::string> validate(const NetworkSpec& spec, const TimeScale& ts, double a, double b,
                                  const SamplingSpec& grid = {});

}  // namespace chronoscale
