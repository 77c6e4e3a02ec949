#pragma once

// Almost periodic coefficient and delay functions as small immutable
// expression trees, with sampled sup/inf bounds.
//
// Text form (prefix):
//   t | const v | <number> | sin X | cos X | abs X | exp X | neg X
//   | scale k X | affine w p X | add(X, Y) | mul(X, Y) | (X)
// where `affine w p X` evaluates to w*X + p.

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace chronoscale {

class CoeffExpr {
 public:
  enum class Op { Const, Time, Sin, Cos, Abs, Exp, Neg, Add, Mul, Scale, Affine };

  /// The zero constant.
  CoeffExpr();

  static CoeffExpr constant(double v);
  static CoeffExpr time();
  static CoeffExpr sin(CoeffExpr arg);
  static CoeffExpr cos(CoeffExpr arg);
  static CoeffExpr abs(CoeffExpr arg);
  static CoeffExpr exp(CoeffExpr arg);
  static CoeffExpr neg(CoeffExpr arg);
  static CoeffExpr add(CoeffExpr lhs, CoeffExpr rhs);
  static CoeffExpr mul(CoeffExpr lhs, CoeffExpr rhs);
  static CoeffExpr scale(double k, CoeffExpr arg);
  static CoeffExpr affine(double omega, double phase, CoeffExpr arg);

  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  Op op() const noexcept;
  bool is_constant() const noexcept { return op() == Op::Const; }
  /// Constant value when op() == Const.
  double value() const noexcept;

  std::string to_string() const;
  /// Throws ConfigError on malformed text.
  static CoeffExpr parse(std::string_view text);

  /// Structural equality.
  friend bool operator==(const CoeffExpr& a, const CoeffExpr& b);

  struct Node;  // opaque

 private:
  explicit CoeffExpr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

// Convenience builders used by the reference example and tests.
CoeffExpr operator+(CoeffExpr a, CoeffExpr b);
CoeffExpr operator*(CoeffExpr a, CoeffExpr b);
CoeffExpr operator*(double k, CoeffExpr a);

enum class BoundSource { Sampled, UserOverride };

struct BoundPair {
  double sup_abs = 0.0;
  double inf_abs = 0.0;
  BoundSource source = BoundSource::Sampled;
};

/// Uniform sampling of [t0, t1] with `count` points (endpoints included).
struct SamplingSpec {
  double t0 = 0.0;
  double t1 = 1000.0;
  std::size_t count = 100000;
};

/// max/min of |expr| over the sample points, or the override when given.
BoundPair bound_sup_inf(const CoeffExpr& expr, const SamplingSpec& grid = {},
                        const std::optional<BoundPair>& override_bound = std::nullopt);

}  // namespace chronoscale
