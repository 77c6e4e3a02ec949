#include "chronoscale/coeffs.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <vector>

#include "chronoscale/errors.hpp"
#include "chronoscale/format.hpp"

namespace chronoscale {

struct CoeffExpr::Node {
  Op op = Op::Const;
  double a = 0.0;  // constant value, scale factor or affine omega
  double b = 0.0;  // affine phase
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

CoeffExpr::CoeffExpr() : CoeffExpr(constant(0.0)) {}

CoeffExpr::CoeffExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

CoeffExpr CoeffExpr::constant(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->a = v;
  return CoeffExpr(std::move(n));
}

CoeffExpr CoeffExpr::time() {
  auto n = std::make_shared<Node>();
  n->op = Op::Time;
  return CoeffExpr(std::move(n));
}

#define CHRONOSCALE_UNARY(name, tag)             \
  CoeffExpr CoeffExpr::name(CoeffExpr arg) {     \
    auto n = std::make_shared<Node>();           \
    n->op = Op::tag;                             \
    n->lhs = std::move(arg.node_);               \
    return CoeffExpr(std::move(n));              \
  }
CHRONOSCALE_UNARY(sin, Sin)
CHRONOSCALE_UNARY(cos, Cos)
CHRONOSCALE_UNARY(abs, Abs)
CHRONOSCALE_UNARY(exp, Exp)
CHRONOSCALE_UNARY(neg, Neg)
#undef CHRONOSCALE_UNARY

CoeffExpr CoeffExpr::add(CoeffExpr lhs, CoeffExpr rhs) {
  auto n = std::make_shared<Node>();
  n->op = Op::Add;
  n->lhs = std::move(lhs.node_);
  n->rhs = std::move(rhs.node_);
  return CoeffExpr(std::move(n));
}

CoeffExpr CoeffExpr::mul(CoeffExpr lhs, CoeffExpr rhs) {
  auto n = std::make_shared<Node>();
  n->op = Op::Mul;
  n->lhs = std::move(lhs.node_);
  n->rhs = std::move(rhs.node_);
  return CoeffExpr(std::move(n));
}

CoeffExpr CoeffExpr::scale(double k, CoeffExpr arg) {
  auto n = std::make_shared<Node>();
  n->op = Op::Scale;
  n->a = k;
  n->lhs = std::move(arg.node_);
  return CoeffExpr(std::move(n));
}

CoeffExpr CoeffExpr::affine(double omega, double phase, CoeffExpr arg) {
  auto n = std::make_shared<Node>();
  n->op = Op::Affine;
  n->a = omega;
  n->b = phase;
  n->lhs = std::move(arg.node_);
  return CoeffExpr(std::move(n));
}

CoeffExpr operator+(CoeffExpr a, CoeffExpr b) { return CoeffExpr::add(std::move(a), std::move(b)); }
CoeffExpr operator*(CoeffExpr a, CoeffExpr b) { return CoeffExpr::mul(std::move(a), std::move(b)); }
CoeffExpr operator*(double k, CoeffExpr a) { return CoeffExpr::scale(k, std::move(a)); }

namespace {

double eval_node(const CoeffExpr::Node& n, double t) {
  using Op = CoeffExpr::Op;
  switch (n.op) {
    case Op::Const: return n.a;
    case Op::Time: return t;
    case Op::Sin: return std::sin(eval_node(*n.lhs, t));
    case Op::Cos: return std::cos(eval_node(*n.lhs, t));
    case Op::Abs: return std::abs(eval_node(*n.lhs, t));
    case Op::Exp: return std::exp(eval_node(*n.lhs, t));
    case Op::Neg: return -eval_node(*n.lhs, t);
    case Op::Add: return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
    case Op::Mul: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
    case Op::Scale: return n.a * eval_node(*n.lhs, t);
    case Op::Affine: return n.a * eval_node(*n.lhs, t) + n.b;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

bool equal_nodes(const CoeffExpr::Node* a, const CoeffExpr::Node* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->a != b->a || a->b != b->b) return false;
  return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
}

const char* unary_name(CoeffExpr::Op op) {
  using Op = CoeffExpr::Op;
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Abs: return "abs";
    case Op::Exp: return "exp";
    case Op::Neg: return "neg";
    default: return "";
  }
}

std::string print_node(const CoeffExpr::Node& n);

std::string wrapped(const CoeffExpr::Node& n) {
  if (n.op == CoeffExpr::Op::Time) return "t";
  return "(" + print_node(n) + ")";
}

std::string print_node(const CoeffExpr::Node& n) {
  using Op = CoeffExpr::Op;
  switch (n.op) {
    case Op::Const: return "const " + format_number(n.a);
    case Op::Time: return "t";
    case Op::Sin:
    case Op::Cos:
    case Op::Abs:
    case Op::Exp:
    case Op::Neg: return std::string(unary_name(n.op)) + " " + wrapped(*n.lhs);
    case Op::Add: return "add(" + print_node(*n.lhs) + ", " + print_node(*n.rhs) + ")";
    case Op::Mul: return "mul(" + print_node(*n.lhs) + ", " + print_node(*n.rhs) + ")";
    case Op::Scale: return "scale " + format_number(n.a) + " " + wrapped(*n.lhs);
    case Op::Affine:
      return "affine " + format_number(n.a) + " " + format_number(n.b) + " " + wrapped(*n.lhs);
  }
  return "?";
}

// Recursive-descent parser over a flat token list.
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { tokenize(); }

  CoeffExpr parse_all() {
    CoeffExpr e = expr();
    if (pos_ != tokens_.size()) fail("unexpected trailing '" + tokens_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("expression '" + std::string(text_) + "': " + why);
  }

  void tokenize() {
    std::size_t i = 0;
    while (i < text_.size()) {
      const char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '(' || c == ')' || c == ',') {
        tokens_.emplace_back(1, c);
        ++i;
      } else {
        std::size_t j = i;
        while (j < text_.size() && !std::isspace(static_cast<unsigned char>(text_[j])) &&
               text_[j] != '(' && text_[j] != ')' && text_[j] != ',')
          ++j;
        tokens_.emplace_back(text_.substr(i, j - i));
        i = j;
      }
    }
  }

  const std::string& peek() const {
    static const std::string end;
    return pos_ < tokens_.size() ? tokens_[pos_] : end;
  }

  std::string take() {
    if (pos_ >= tokens_.size()) fail("unexpected end of expression");
    return tokens_[pos_++];
  }

  void expect(const char* tok) {
    const std::string got = take();
    if (got != tok) fail(std::string("expected '") + tok + "' but found '" + got + "'");
  }

  double number() {
    const std::string tok = take();
    auto v = parse_number(tok);
    if (!v) fail("expected a number but found '" + tok + "'");
    return *v;
  }

  CoeffExpr expr() {
    const std::string tok = take();
    if (tok == "(") {
      CoeffExpr e = expr();
      expect(")");
      return e;
    }
    if (tok == "t") return CoeffExpr::time();
    if (tok == "const") return CoeffExpr::constant(number());
    if (tok == "sin") return CoeffExpr::sin(expr());
    if (tok == "cos") return CoeffExpr::cos(expr());
    if (tok == "abs") return CoeffExpr::abs(expr());
    if (tok == "exp") return CoeffExpr::exp(expr());
    if (tok == "neg") return CoeffExpr::neg(expr());
    if (tok == "scale") {
      const double k = number();
      return CoeffExpr::scale(k, expr());
    }
    if (tok == "affine") {
      const double w = number();
      const double p = number();
      return CoeffExpr::affine(w, p, expr());
    }
    if (tok == "add" || tok == "mul") {
      expect("(");
      CoeffExpr lhs = expr();
      expect(",");
      CoeffExpr rhs = expr();
      expect(")");
      return tok == "add" ? CoeffExpr::add(std::move(lhs), std::move(rhs))
                          : CoeffExpr::mul(std::move(lhs), std::move(rhs));
    }
    if (auto v = parse_number(tok)) return CoeffExpr::constant(*v);
    fail("unknown token '" + tok + "'");
  }

  std::string_view text_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

double CoeffExpr::eval(double t) const { return eval_node(*node_, t); }

CoeffExpr::Op CoeffExpr::op() const noexcept { return node_->op; }

double CoeffExpr::value() const noexcept { return node_->a; }

std::string CoeffExpr::to_string() const { return print_node(*node_); }

CoeffExpr CoeffExpr::parse(std::string_view text) { return Parser(text).parse_all(); }

bool operator==(const CoeffExpr& a, const CoeffExpr& b) {
  return equal_nodes(a.node_.get(), b.node_.get());
}

BoundPair bound_sup_inf(const CoeffExpr& expr, const SamplingSpec& grid,
                        const std::optional<BoundPair>& override_bound) {
  if (override_bound) {
    BoundPair b = *override_bound;
    b.source = BoundSource::UserOverride;
    return b;
  }
  if (expr.is_constant()) {
    const double v = std::abs(expr.value());
    return {v, v, BoundSource::Sampled};
  }
  if (grid.count == 0) throw DomainError("bound sampling grid is empty");
  double sup = 0.0;
  double inf = std::numeric_limits<double>::infinity();
  const double span = grid.t1 - grid.t0;
  const double denom = grid.count > 1 ? static_cast<double>(grid.count - 1) : 1.0;
  for (std::size_t k = 0; k < grid.count; ++k) {
    const double t = grid.t0 + span * (static_cast<double>(k) / denom);
    const double v = std::abs(expr.eval(t));
    sup = std::max(sup, v);
    inf = std::min(inf, v);
  }
  return {sup, inf, BoundSource::Sampled};
}

}  // namespace chronoscale
