#include "chronoscale/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chronoscale/errors.hpp"
#include "chronoscale/format.hpp"

namespace chronoscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t slot(Family f) { return static_cast<std::size_t>(f); }

// Sum over j of the coupling terms of row i, each multiplied by `weight` (L_j
// for the bar quantities, L_j r + |f_j(0)| for P).
template <class Weight>
double coupling_sum(const BoundSet& b, std::size_t i, Weight weight) {
  double s = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double w = weight(j);
    s += b.sup(Family::D, i, j) * w;
    s += b.sup(Family::Dtau, i, j) * w;
    s += b.sup(Family::Dbar, i, j) * b.sup(Family::Sigma, i, j) * w;
    s += b.sup(Family::Dtilde, i, j) * b.sup(Family::Zeta, i, j) * w;
  }
  return s;
}

std::string idx(std::size_t i) { return std::to_string(i + 1); }

void fill_ratios(const BoundSet& b, const PQ& pq, std::vector<Ratio>& out, const char* P, const char* Q) {
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double am = b.inf(Family::Alpha, i);
    const double ap = b.sup(Family::Alpha, i);
    out.push_back({std::string(P) + idx(i) + "/alpha" + idx(i) + "-", pq.P[i] / am});
    out.push_back({"(1+alpha" + idx(i) + "+/alpha" + idx(i) + "-)" + P + idx(i), (1.0 + ap / am) * pq.P[i]});
  }
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({std::string(Q) + idx(i) + "/c" + idx(i) + "-", pq.Q[i] / b.inf(Family::C, i)});
  for (std::size_t i = 0; i < n; ++i) {
    const double cm = b.inf(Family::C, i);
    const double cp = b.sup(Family::C, i);
    out.push_back({"(1+c" + idx(i) + "+/c" + idx(i) + "-)" + Q + idx(i), (1.0 + cp / cm) * pq.Q[i]});
  }
}

double max_value(const std::vector<Ratio>& rs) {
  double m = -kInf;
  for (const Ratio& r : rs) m = std::max(m, r.value);
  return m;
}

}  // namespace

const BoundPair& BoundSet::pair(Family f, std::size_t i, std::size_t j) const {
  const std::size_t k = is_matrix(f) ? i * n_ + j : i;
  return pairs_[slot(f)].at(k);
}

BoundSet compute_bounds(const NetworkSpec& spec, const TimeScale& ts, const SamplingSpec& grid) {
  BoundSet b;
  const std::size_t n = spec.size();
  b.n_ = n;
  for (Family f : kAllFamilies) {
    auto& v = b.pairs_[slot(f)];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < (is_matrix(f) ? n : 1); ++j) v.push_back(spec.bound(f, i, j, grid));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(b.inf(Family::Alpha, i) > 0.0))
      throw DegenerateDecayError("inf |alpha_" + idx(i) + "| is zero");
    if (!(b.inf(Family::C, i) > 0.0)) throw DegenerateDecayError("inf |c_" + idx(i) + "| is zero");
    b.L_.push_back(spec.activation(i).lipschitz);
    b.f0_.push_back(std::abs(spec.activation(i).at_zero()));
  }
  b.nu_sup_ = ts.sup_graininess();
  return b;
}

PQ compute_PQ(const BoundSet& b, double r) {
  PQ out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    double P = b.sup(Family::Alpha, i) * b.sup(Family::Eta, i) * r;
    P += coupling_sum(b, i, [&](std::size_t j) { return b.L(j) * r + b.f0(j); });
    P += b.sup(Family::B, i) * r + b.sup(Family::I, i);
    out.P.push_back(P);

    double Q = b.sup(Family::C, i) * b.sup(Family::Varsigma, i) * r;
    Q += b.sup(Family::E, i) * (b.L(i) * r + b.f0(i)) + b.sup(Family::J, i);
    out.Q.push_back(Q);
  }
  return out;
}

PQ compute_PQbar(const BoundSet& b) {
  PQ out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    double P = b.sup(Family::Alpha, i) * b.sup(Family::Eta, i);
    P += coupling_sum(b, i, [&](std::size_t j) { return b.L(j); });
    P += b.sup(Family::B, i);
    out.P.push_back(P);
    out.Q.push_back(b.sup(Family::C, i) * b.sup(Family::Varsigma, i) + b.sup(Family::E, i) * b.L(i));
  }
  return out;
}

H3Report check_H3(const BoundSet& b, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("radius r must be positive and finite");
  H3Report rep;
  rep.r = r;
  rep.pq = compute_PQ(b, r);
  rep.pqbar = compute_PQbar(b);
  fill_ratios(b, rep.pq, rep.ratios, "P", "Q");
  fill_ratios(b, rep.pqbar, rep.kappa_ratios, "Pbar", "Qbar");
  rep.max_ratio = max_value(rep.ratios);
  rep.kappa = max_value(rep.kappa_ratios);
  rep.ball_ok = rep.max_ratio <= r;
  rep.kappa_ok = rep.kappa < 1.0;
  return rep;
}

std::optional<double> search_r(const BoundSet& b, const std::vector<double>& r_grid) {
  for (double r : r_grid)
    if (check_H3(b, r).feasible()) return r;
  return std::nullopt;
}

std::optional<double> minimal_radius(const BoundSet& b) {
  std::vector<Ratio> at_zero, slope;
  fill_ratios(b, compute_PQ(b, 0.0), at_zero, "P", "Q");
  fill_ratios(b, compute_PQbar(b), slope, "Pbar", "Qbar");
  if (!(max_value(slope) < 1.0)) return std::nullopt;
  double r = 0.0;
  for (std::size_t k = 0; k < at_zero.size(); ++k)
    r = std::max(r, at_zero[k].value / (1.0 - slope[k].value));
  if (r == 0.0) r = std::numeric_limits<double>::min();
  // Round-off can leave the affine form a hair above r; nudge up until it passes.
  for (int k = 0; k < 64 && !check_H3(b, r).ball_ok; ++k) r = std::nextafter(r, kInf) * (1.0 + 1e-15);
  return r;
}

double HValues::min() const {
  double m = kInf;
  for (const auto* v : {&H, &Hbar, &Hstar, &Hbarstar})
    for (double x : *v) m = std::min(m, x);
  return m;
}

HValues h_functions(const BoundSet& b, double beta) {
  HValues out;
  out.beta = beta;
  const double nu = b.nu_sup();
  const double jump = std::exp(beta * nu);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double ap = b.sup(Family::Alpha, i);
    const double am = b.inf(Family::Alpha, i);
    const double eta = b.sup(Family::Eta, i);
    double delayed = ap * eta * std::exp(beta * eta);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double L = b.L(j);
      const double sig = b.sup(Family::Sigma, i, j);
      const double zet = b.sup(Family::Zeta, i, j);
      delayed += b.sup(Family::D, i, j) * L;
      delayed += b.sup(Family::Dtau, i, j) * L * std::exp(beta * b.sup(Family::Tau, i, j));
      delayed += b.sup(Family::Dbar, i, j) * L * sig * std::exp(beta * sig);
      delayed += b.sup(Family::Dtilde, i, j) * L * zet * std::exp(beta * zet);
    }
    const double Bp = b.sup(Family::B, i);
    out.H.push_back(am - beta - (jump * delayed + Bp));
    out.Hstar.push_back(am - beta - (ap * jump + am - beta) * (delayed + Bp));

    const double cp = b.sup(Family::C, i);
    const double cm = b.inf(Family::C, i);
    const double vs = b.sup(Family::Varsigma, i);
    const double ltm = cp * vs * std::exp(beta * vs);
    const double EL = b.sup(Family::E, i) * b.L(i);
    out.Hbar.push_back(cm - beta - (jump * ltm + EL));
    out.Hbarstar.push_back(cm - beta - (cp * jump + cm - beta) * (ltm + EL));
  }
  return out;
}

double certificate_M(const BoundSet& b) {
  const PQ bar = compute_PQbar(b);
  double M = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    M = std::max(M, bar.P[i] > 0.0 ? b.inf(Family::Alpha, i) / bar.P[i] : kInf);
    M = std::max(M, bar.Q[i] > 0.0 ? b.inf(Family::C, i) / bar.Q[i] : kInf);
  }
  return M;
}

Certificate find_lambda(const BoundSet& b, double tol) {
  double upper = kInf;
  for (std::size_t i = 0; i < b.size(); ++i)
    upper = std::min({upper, b.inf(Family::Alpha, i), b.inf(Family::C, i)});
  if (b.nu_sup() > 0.0) upper = std::min(upper, 1.0 / b.nu_sup());

  auto ok = [&](double beta) { return h_functions(b, beta).min() >= kHFloor; };
  if (!ok(0.0)) throw NoCertificateError("H-functions are not positive at lambda = 0");

  double lo = 0.0;
  double hi = upper;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid) && mid < upper) lo = mid;
    else hi = mid;
  }
  if (!(lo > 0.0)) throw NoCertificateError("no positive lambda satisfies the H-function conditions");

  Certificate c;
  c.lambda = lo;
  c.lambda_upper = hi;
  c.nu_sup = b.nu_sup();
  c.at_lambda = h_functions(b, lo);
  c.M = certificate_M(b);
  if (!(c.M > 1.0)) throw NoCertificateError("certificate constant M = " + format_number(c.M) + " is not above 1");
  return c;
}

std::string serialize(const Certificate& c) {
  std::ostringstream os;
  os << "lambda=" << format_number(c.lambda) << '\n';
  os << "lambda_upper=" << format_number(c.lambda_upper) << '\n';
  os << "M=" << format_number(c.M) << '\n';
  os << "nu_sup=" << format_number(c.nu_sup) << '\n';
  os << "h_min=" << format_number(c.at_lambda.min()) << '\n';
  return os.str();
}

Certificate parse_certificate(const std::string& text) {
  Certificate c;
  bool have_lambda = false, have_M = false;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value", lineno);
    const std::string key(trim(s.substr(0, eq)));
    const auto v = parse_number(trim(s.substr(eq + 1)));
    if (!v) throw ConfigError("bad number", lineno, key);
    if (key == "lambda") { c.lambda = *v; have_lambda = true; }
    else if (key == "lambda_upper") c.lambda_upper = *v;
    else if (key == "M") { c.M = *v; have_M = true; }
    else if (key == "nu_sup") c.nu_sup = *v;
    else if (key == "h_min") continue;
    else throw ConfigError("unknown certificate key", lineno, key);
  }
  if (!have_lambda || !have_M) throw ConfigError("certificate needs lambda and M");
  return c;
}

}  // namespace chronoscale
