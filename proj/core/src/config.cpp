#include "chronoscale/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "chronoscale/errors.hpp"
#include "chronoscale/format.hpp"

namespace chronoscale {

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

const std::set<std::string> kSections = {"network", "bounds", "timescale", "history", "history2", "run"};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double number(const Entry& e, std::string_view text) {
  auto v = parse_number(text);
  if (!v) throw ConfigError("'" + std::string(text) + "' is not a number", e.line, e.key);
  return *v;
}

std::size_t index_1(const Entry& e, std::string_view text, std::size_t n) {
  const double v = number(e, text);
  if (v != std::floor(v) || v < 1.0 || v > static_cast<double>(n))
    throw ConfigError("index '" + std::string(text) + "' outside 1.." + std::to_string(n), e.line, e.key);
  return static_cast<std::size_t>(v) - 1;
}

CoeffExpr expression(const Entry& e) {
  try {
    return CoeffExpr::parse(e.value);
  } catch (const ConfigError& err) {
    throw ConfigError(err.what(), e.line, e.key);
  }
}

struct CoeffRef {
  Family family;
  std::size_t i = 0;
  std::size_t j = 0;
};

CoeffRef coeff_ref(const Entry& e, std::size_t n) {
  const auto parts = split(e.key, '.');
  const auto fam = family_from_name(parts.front());
  if (!fam) throw ConfigError("unknown coefficient '" + std::string(parts.front()) + "'", e.line, e.key);
  const std::size_t want = is_matrix(*fam) ? 3 : 2;
  if (parts.size() != want)
    throw ConfigError(std::string(parts.front()) + (is_matrix(*fam) ? " needs two indices" : " needs one index"),
                      e.line, e.key);
  CoeffRef r{*fam, index_1(e, parts[1], n), 0};
  if (want == 3) r.j = index_1(e, parts[2], n);
  return r;
}

HistorySpec history_from(const std::vector<Entry>& entries, std::size_t n, const std::string& section) {
  HistorySpec h;
  std::vector<std::optional<CoeffExpr>> phi(n), psi(n);
  h.phi_nabla.assign(n, std::nullopt);
  h.psi_nabla.assign(n, std::nullopt);
  for (const Entry& e : entries) {
    const auto parts = split(e.key, '.');
    if (parts.size() != 2) throw ConfigError("expected <name>.<index>", e.line, e.key);
    const std::size_t i = index_1(e, parts[1], n);
    const std::string_view name = parts[0];
    if (name == "phi") phi[i] = expression(e);
    else if (name == "psi") psi[i] = expression(e);
    else if (name == "phi_nabla") h.phi_nabla[i] = expression(e);
    else if (name == "psi_nabla") h.psi_nabla[i] = expression(e);
    else throw ConfigError("unknown history key", e.line, e.key);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!phi[i]) throw ConfigError("[" + section + "] is missing phi." + std::to_string(i + 1));
    if (!psi[i]) throw ConfigError("[" + section + "] is missing psi." + std::to_string(i + 1));
    h.phi.push_back(*phi[i]);
    h.psi.push_back(*psi[i]);
  }
  return h;
}

using Sections = std::map<std::string, std::vector<Entry>>;

Sections read_sections(const std::string& text) {
  Sections sections;
  std::string current;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", lineno);
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (!kSections.count(current)) throw ConfigError("unknown section [" + current + "]", lineno);
      if (sections.count(current)) throw ConfigError("duplicate section [" + current + "]", lineno);
      sections[current];
      continue;
    }
    if (current.empty()) throw ConfigError("entry outside any section", lineno);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value", lineno);
    Entry e{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), lineno};
    if (e.key.empty()) throw ConfigError("empty key", lineno);
    if (e.value.empty()) throw ConfigError("empty value", lineno, e.key);
    for (const Entry& prev : sections[current])
      if (prev.key == e.key) throw ConfigError("duplicate key", lineno, e.key);
    sections[current].push_back(std::move(e));
  }
  return sections;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  Sections sections = read_sections(text);
  if (!sections.count("network")) throw ConfigError("missing [network] section");
  RunConfig cfg;

  std::size_t n = 0;
  for (const Entry& e : sections["network"])
    if (e.key == "n") {
      const double v = number(e, e.value);
      if (v != std::floor(v) || v < 1.0 || v > 1e4) throw ConfigError("n must be a positive integer", e.line, e.key);
      n = static_cast<std::size_t>(v);
    }
  if (n == 0) throw ConfigError("[network] needs n");
  cfg.network = NetworkSpec(n);

  for (const Entry& e : sections["network"]) {
    if (e.key == "n") continue;
    if (e.key.starts_with("activation.")) {
      const auto parts = split(e.key, '.');
      if (parts.size() != 2) throw ConfigError("expected activation.<index>", e.line, e.key);
      const std::size_t j = index_1(e, parts[1], n);
      const auto w = words(e.value);
      if (w.empty() || w.size() > 2) throw ConfigError("expected '<kind> [L]'", e.line, e.key);
      const auto kind = Activation::kind_from_name(w[0]);
      if (!kind) throw ConfigError("unknown activation '" + std::string(w[0]) + "'", e.line, e.key);
      Activation a{*kind, *kind == ActivationKind::SinHalf ? 0.5 : 1.0};
      if (w.size() == 2) a.lipschitz = number(e, w[1]);
      cfg.network.set_activation(j, a);
      continue;
    }
    const CoeffRef r = coeff_ref(e, n);
    cfg.network.set(r.family, r.i, r.j, expression(e));
  }

  for (const Entry& e : sections["bounds"]) {
    const CoeffRef r = coeff_ref(e, n);
    const auto w = words(e.value);
    if (w.empty() || w.size() > 2) throw ConfigError("expected '<sup> [inf]'", e.line, e.key);
    const double sup = number(e, w[0]);
    const double inf = w.size() == 2 ? number(e, w[1]) : sup;
    if (sup < 0.0 || inf < 0.0 || inf > sup) throw ConfigError("need 0 <= inf <= sup", e.line, e.key);
    cfg.network.set_override(r.family, r.i, r.j, sup, inf);
  }

  for (const Entry& e : sections["run"]) {
    if (e.key == "t_end") cfg.run.t_end = number(e, e.value);
    else if (e.key == "h") cfg.run.h = number(e, e.value);
    else if (e.key == "corrector_iters") cfg.run.corrector_iters = static_cast<int>(number(e, e.value));
    else if (e.key == "out") cfg.run.out = e.value;
    else if (e.key == "r") {
      cfg.run.r_grid.clear();
      for (auto w : words(e.value)) cfg.run.r_grid.push_back(number(e, w));
      for (std::size_t k = 0; k < cfg.run.r_grid.size(); ++k)
        if (!(cfg.run.r_grid[k] > 0.0) || (k > 0 && !(cfg.run.r_grid[k] > cfg.run.r_grid[k - 1])))
          throw ConfigError("r grid must be positive and ascending", e.line, e.key);
    } else {
      throw ConfigError("unknown run key", e.line, e.key);
    }
  }
  if (!(cfg.run.t_end > 0.0)) throw ConfigError("t_end must be positive", 0, "t_end");
  if (!(cfg.run.h > 0.0)) throw ConfigError("h must be positive", 0, "h");
  if (cfg.run.corrector_iters < 1) throw ConfigError("corrector_iters must be at least 1", 0, "corrector_iters");

  for (const Entry& e : sections["timescale"]) {
    if (e.key != "scale") throw ConfigError("unknown timescale key", e.line, e.key);
    try {
      TimeScale::parse(e.value, cfg.run.h);
    } catch (const DomainError& err) {
      throw ConfigError(err.what(), e.line, e.key);
    }
    cfg.timescale = e.value;
  }

  if (sections.count("history")) cfg.history = history_from(sections["history"], n, "history");
  if (sections.count("history2")) cfg.history2 = history_from(sections["history2"], n, "history2");
  return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(slurp(path)); }

HistorySpec parse_history(const std::string& text, std::size_t n) {
  Sections sections = read_sections(text);
  const bool first = sections.count("history") > 0;
  const bool second = sections.count("history2") > 0;
  if (first == second) throw ConfigError("history file needs exactly one [history] or [history2] section");
  const std::string name = first ? "history" : "history2";
  return history_from(sections[name], n, name);
}

HistorySpec load_history(const std::string& path, std::size_t n) { return parse_history(slurp(path), n); }

namespace {

void write_history(std::ostream& os, const char* section, const HistorySpec& h) {
  os << '[' << section << "]\n";
  for (std::size_t i = 0; i < h.size(); ++i) {
    const std::string k = std::to_string(i + 1);
    os << "phi." << k << " = " << h.phi[i].to_string() << '\n';
    if (i < h.phi_nabla.size() && h.phi_nabla[i]) os << "phi_nabla." << k << " = " << h.phi_nabla[i]->to_string() << '\n';
    os << "psi." << k << " = " << h.psi[i].to_string() << '\n';
    if (i < h.psi_nabla.size() && h.psi_nabla[i]) os << "psi_nabla." << k << " = " << h.psi_nabla[i]->to_string() << '\n';
  }
  os << '\n';
}

}  // namespace

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  const NetworkSpec& net = cfg.network;
  const std::size_t n = net.size();
  os << "[network]\n";
  os << "n = " << n << '\n';
  for (std::size_t j = 0; j < n; ++j)
    os << "activation." << (j + 1) << " = " << net.activation(j).name() << ' '
       << format_number(net.activation(j).lipschitz) << '\n';
  for (Family f : kAllFamilies)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < (is_matrix(f) ? n : 1); ++j)
        os << coeff_key(f, i, j) << " = " << net.coeff(f, i, j).to_string() << '\n';
  os << '\n';

  if (!net.bound_overrides().empty()) {
    os << "[bounds]\n";
    for (const auto& [key, b] : net.bound_overrides())
      os << key << " = " << format_number(b.sup_abs) << ' ' << format_number(b.inf_abs) << '\n';
    os << '\n';
  }

  os << "[timescale]\nscale = " << cfg.timescale << "\n\n";
  if (cfg.history) write_history(os, "history", *cfg.history);
  if (cfg.history2) write_history(os, "history2", *cfg.history2);

  os << "[run]\n";
  os << "t_end = " << format_number(cfg.run.t_end) << '\n';
  os << "h = " << format_number(cfg.run.h) << '\n';
  os << "corrector_iters = " << cfg.run.corrector_iters << '\n';
  os << "r =";
  for (double r : cfg.run.r_grid) os << ' ' << format_number(r);
  os << '\n';
  if (!cfg.run.out.empty()) os << "out = " << cfg.run.out << '\n';
  return os.str();
}

}  // namespace chronoscale
