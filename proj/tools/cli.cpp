#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include "chronoscale/chronoscale.hpp"

namespace chronoscale::cli {

namespace {

struct Flags {
  std::string config;
  std::string timescale;
  double h = 0.0;
  double t_end = 0.0;
  std::vector<double> r;
  std::string out;
  std::string history2;
  std::optional<double> lambda_override;
  std::string emit_config;
};

RunConfig load(const Flags& f) {
  RunConfig cfg = load_config(f.config);
  if (!f.timescale.empty()) cfg.timescale = f.timescale;
  if (f.h > 0.0) cfg.run.h = f.h;
  if (f.t_end > 0.0) cfg.run.t_end = f.t_end;
  if (!f.r.empty()) cfg.run.r_grid = f.r;
  try {
    cfg.time_scale();
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), 0, "timescale");
  }
  return cfg;
}

const char* source_name(BoundSource s) { return s == BoundSource::UserOverride ? "override" : "sampled"; }

void print_bounds(std::ostream& out, const NetworkSpec& net, const BoundSet& b) {
  const std::size_t n = net.size();
  out << "nu_sup=" << format_number(b.nu_sup()) << '\n';
  for (Family f : kAllFamilies)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < (is_matrix(f) ? n : 1); ++j) {
        const BoundPair& p = b.pair(f, i, j);
        out << "bound." << coeff_key(f, i, j) << '=' << format_number(p.sup_abs);
        if (f == Family::Alpha || f == Family::C) out << ' ' << format_number(p.inf_abs);
        out << ' ' << source_name(p.source) << '\n';
      }
  for (std::size_t j = 0; j < n; ++j)
    out << "L." << (j + 1) << '=' << format_number(b.L(j)) << " f0." << (j + 1) << '=' << format_number(b.f0(j))
        << '\n';
}

void print_h3(std::ostream& out, const H3Report& rep) {
  out << "[r=" << format_number(rep.r) << "]\n";
  for (std::size_t i = 0; i < rep.pq.P.size(); ++i) {
    const std::string k = std::to_string(i + 1);
    out << "P." << k << '=' << format_number(rep.pq.P[i]) << '\n';
    out << "Q." << k << '=' << format_number(rep.pq.Q[i]) << '\n';
    out << "Pbar." << k << '=' << format_number(rep.pqbar.P[i]) << '\n';
    out << "Qbar." << k << '=' << format_number(rep.pqbar.Q[i]) << '\n';
  }
  for (const Ratio& r : rep.ratios) out << "ratio." << r.name << '=' << format_number(r.value) << '\n';
  for (const Ratio& r : rep.kappa_ratios) out << "kappa_ratio." << r.name << '=' << format_number(r.value) << '\n';
  out << "max_r_expr=" << format_number(rep.max_ratio) << '\n';
  out << "kappa=" << format_number(rep.kappa) << '\n';
  out << "feasible=" << (rep.feasible() ? "true" : "false") << '\n';
}

void print_certificate(std::ostream& out, const Certificate& c) {
  out << serialize(c);
  const HValues& h = c.at_lambda;
  for (std::size_t i = 0; i < h.H.size(); ++i) {
    const std::string k = std::to_string(i + 1);
    out << "H." << k << '=' << format_number(h.H[i]) << '\n';
    out << "Hbar." << k << '=' << format_number(h.Hbar[i]) << '\n';
    out << "Hstar." << k << '=' << format_number(h.Hstar[i]) << '\n';
    out << "Hbarstar." << k << '=' << format_number(h.Hbarstar[i]) << '\n';
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  return f;
}

// check: bounds and one report per radius. Returns kOk iff some radius passes.
int do_check(const RunConfig& cfg, std::ostream& out) {
  const TimeScale ts = cfg.time_scale();
  out << "timescale=" << ts.describe() << '\n';
  const auto issues = validate(cfg.network, ts, 0.0, cfg.run.t_end);
  for (const std::string& s : issues) out << "issue=" << s << '\n';
  BoundSet b;
  try {
    b = compute_bounds(cfg.network, ts);
  } catch (const DegenerateDecayError& e) {
    out << "feasible=false\nreason=" << e.what() << '\n';
    return kInfeasible;
  }
  print_bounds(out, cfg.network, b);
  bool any = false;
  for (double r : cfg.run.r_grid) {
    const H3Report rep = check_H3(b, r);
    print_h3(out, rep);
    any = any || rep.feasible();
  }
  return any && issues.empty() ? kOk : kInfeasible;
}

// Certificate for the configured scale, or nullopt after printing the reason.
std::optional<Certificate> certify(const RunConfig& cfg, std::ostream& out) {
  const TimeScale ts = cfg.time_scale();
  BoundSet b;
  try {
    b = compute_bounds(cfg.network, ts);
  } catch (const DegenerateDecayError& e) {
    out << "certificate=none\nreason=" << e.what() << '\n';
    return std::nullopt;
  }
  if (!search_r(b, cfg.run.r_grid)) {
    out << "certificate=none\nreason=no radius in the grid satisfies the existence conditions (kappa="
        << format_number(check_H3(b, cfg.run.r_grid.front()).kappa) << ")\n";
    return std::nullopt;
  }
  try {
    return find_lambda(b);
  } catch (const NoCertificateError& e) {
    out << "certificate=none\nreason=" << e.what() << '\n';
    return std::nullopt;
  }
}

int do_certificate(const RunConfig& cfg, std::ostream& out) {
  const auto c = certify(cfg, out);
  if (!c) return kInfeasible;
  print_certificate(out, *c);
  return kOk;
}

int do_simulate(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
  if (!cfg.history) throw ConfigError("missing [history] section");
  const TimeScale ts = cfg.time_scale();
  const Trajectory traj =
      simulate(cfg.network, *cfg.history, ts, cfg.run.t_end, SimOptions{cfg.run.h, cfg.run.corrector_iters});
  if (out_path.empty()) {
    traj.write_csv(out);
  } else {
    auto f = open_out(out_path);
    traj.write_csv(f);
    out << "rows=" << traj.size() << "\nout=" << out_path << '\n';
  }
  return kOk;
}

int do_stability(const RunConfig& cfg, const HistorySpec& h2, std::optional<double> lambda_override,
                 const std::string& out_path, std::ostream& out) {
  if (!cfg.history) throw ConfigError("missing [history] section");
  auto cert = certify(cfg, out);
  if (!cert) return kInfeasible;
  if (lambda_override) {
    cert->lambda = *lambda_override;
    out << "lambda_override=" << format_number(*lambda_override) << '\n';
  }
  const TimeScale ts = cfg.time_scale().with_step(cfg.run.h);
  const SimOptions opts{cfg.run.h, cfg.run.corrector_iters};
  auto run_one = [&](const HistorySpec& h) { return simulate(cfg.network, h, ts, cfg.run.t_end, opts); };
  auto fa = std::async(std::launch::async, run_one, std::cref(*cfg.history));
  auto fb = std::async(std::launch::async, run_one, std::cref(h2));
  const Trajectory a = fa.get();
  const Trajectory b = fb.get();
  const StabilityReport rep = verify_bound(a, b, *cfg.history, h2, *cert, ts);
  out << report_text(rep);
  if (!out_path.empty()) {
    auto f = open_out(out_path);
    write_stability_csv(f, rep);
  }
  return rep.violated ? kInfeasible : kOk;
}

int do_example(const Flags& f, std::ostream& out) {
  if (!f.emit_config.empty()) {
    auto file = open_out(f.emit_config);
    file << serialize_config(reference::config(f.timescale.empty() ? "Z" : f.timescale));
    out << "out=" << f.emit_config << '\n';
    return kOk;
  }
  int worst = kOk;
  for (const char* scale : {"R", "Z"}) {
    const RunConfig cfg = reference::config(scale);
    out << "### example timescale=" << scale << '\n';
    worst = std::max(worst, do_check(cfg, out));
    worst = std::max(worst, do_certificate(cfg, out));
    worst = std::max(worst, do_stability(cfg, *cfg.history2, std::nullopt, "", out));
  }
  return worst;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Almost periodic competitive neural networks on time scales"};
  app.require_subcommand(1);
  // --h is the step flag, so help is long-form only.
  app.set_help_flag("--help", "print help");
  Flags f;

  auto add_common = [&](CLI::App* cmd) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("config", f.config, "run configuration file")->required();
    cmd->add_option("--timescale", f.timescale, "Z | R | Z(o,s) | union:<spec>");
    cmd->add_option("--h", f.h, "dense step")->check(CLI::PositiveNumber);
    cmd->add_option("--t-end", f.t_end, "simulation horizon")->check(CLI::PositiveNumber);
    cmd->add_option("--r", f.r, "radius grid, comma separated")->delimiter(',');
  };

  auto* check = app.add_subcommand("check", "existence conditions for each radius");
  add_common(check);
  auto* certificate = app.add_subcommand("certificate", "decay rate lambda and constant M");
  add_common(certificate);
  auto* sim = app.add_subcommand("simulate", "integrate and write the trajectory CSV");
  add_common(sim);
  sim->add_option("--out", f.out, "CSV path (stdout when omitted)");
  auto* stab = app.add_subcommand("stability", "paired run checked against the stability bound");
  add_common(stab);
  stab->add_option("--out", f.out, "stability CSV path");
  stab->add_option("--history2", f.history2, "file with the second [history] section");
  stab->add_option("--lambda-override", f.lambda_override, "replace the certificate's lambda (testing)");
  auto* example = app.add_subcommand("example", "built-in two-neuron example on R and Z");
  example->set_help_flag("--help", "print help");
  example->add_option("--emit-config", f.emit_config, "write the example configuration and stop");
  example->add_option("--timescale", f.timescale, "time scale for --emit-config");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    if (example->parsed()) return do_example(f, out);
    const RunConfig cfg = load(f);
    if (check->parsed()) return do_check(cfg, out);
    if (certificate->parsed()) return do_certificate(cfg, out);
    if (sim->parsed()) return do_simulate(cfg, f.out.empty() ? cfg.run.out : f.out, out);
    if (stab->parsed()) {
      HistorySpec h2;
      if (!f.history2.empty()) h2 = load_history(f.history2, cfg.network.size());
      else if (cfg.history2) h2 = *cfg.history2;
      else throw ConfigError("stability needs --history2 or a [history2] section");
      return do_stability(cfg, h2, f.lambda_override, f.out, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what();
    if (!e.field().empty()) err << " (field " << e.field() << ')';
    err << '\n';
    return kConfigError;
  } catch (const StepFailureError& e) {
    err << "runtime error: " << e.what() << " [t=" << format_number(e.at()) << "]\n";
    return kRuntimeError;
  } catch (const HistoryUnderflowError& e) {
    err << "runtime error: " << e.what() << " [t=" << format_number(e.at()) << "]\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kConfigError;
}

}  // namespace chronoscale::cli
