#include "ckam/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ckam/analysis.hpp"
#include "ckam/detector.hpp"
#include "ckam/foliation.hpp"
#include "ckam/model.hpp"
#include "ckam/sweep.hpp"
#include "ckam/verify.hpp"

namespace ckam {

namespace {

int parse_int(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw CliError("bad integer value: " + s);
  }
  return v;
}

double parse_double_cli(const std::string& s) {
  try {
    return parse_double(s);
  } catch (const std::exception&) {
    throw CliError("bad numeric value: " + s);
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void apply_config_pair(RunConfig& cfg, const std::string& key,
                       const std::string& val) {
  const auto d = [&] { return parse_double_cli(val); };
  const auto i = [&] { return parse_int(val); };
  if (key == "model") cfg.model = val;
  else if (key == "mu") cfg.mu = d();
  else if (key == "nu") cfg.nu = d();
  else if (key == "k") cfg.k = i();
  else if (key == "q") cfg.q = i();
  else if (key == "eps") cfg.eps = d();
  else if (key == "foliation") cfg.foliation = val;
  else if (key == "q0") cfg.q0 = d();
  else if (key == "p0") cfg.p0 = d();
  else if (key == "t0") cfg.t0 = d();
  else if (key == "x0") cfg.x0 = d();
  else if (key == "y0") cfg.y0 = d();
  else if (key == "z0") cfg.z0 = d();
  else if (key == "tmax") cfg.tmax = d();
  else if (key == "rtol") cfg.rtol = d();
  else if (key == "atol") cfg.atol = d();
  else if (key == "h-max") cfg.h_max = d();
  else if (key == "singular-tol") cfg.singular_tol = d();
  else if (key == "trace") cfg.trace = val;
  else if (key == "axis1") cfg.axis1 = val;
  else if (key == "axis2") cfg.axis2 = val;
  else if (key == "ic-line") cfg.ic_line = val;
  else if (key == "workers") cfg.workers = i();
  else if (key == "out") cfg.out = val;
  else if (key == "image") cfg.image = val;
  else if (key == "crossings") cfg.crossings = i();
  else if (key == "t-section") cfg.t_section = d();
  else if (key == "T") cfg.T = d();
  else if (key == "v0") cfg.v0 = val;
  else if (key == "input") cfg.input = val;
  else if (key == "bin-width") cfg.bin_width = d();
  else if (key == "mode") cfg.mode = val;
  else if (key == "suite") cfg.suite = val;
  else if (key == "seed") cfg.seed = static_cast<unsigned>(i());
  else throw CliError("config: unknown key '" + key + "'");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CliError("config: line " + std::to_string(line_no) +
                     " is not key=value: " + line);
    }
    apply_config_pair(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

AxisSpec parse_axis(const std::string& text, const std::string& flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 4) {
    throw CliError(flag + ": expected name:lo:hi:n, got '" + text + "'");
  }
  AxisSpec axis;
  axis.name = parts[0];
  axis.lo = parse_double_cli(parts[1]);
  axis.hi = parse_double_cli(parts[2]);
  axis.n = parse_int(parts[3]);
  if (axis.n < 2) throw CliError(flag + ": axis needs n >= 2");
  if (!(axis.lo < axis.hi)) throw CliError(flag + ": axis needs lo < hi");
  return axis;
}

TangentVec parse_vec3(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) parts.push_back(part);
  if (parts.size() != 3) {
    throw CliError("--v0: expected three comma-separated components, got '" +
                   text + "'");
  }
  return {parse_double_cli(parts[0]), parse_double_cli(parts[1]),
          parse_double_cli(parts[2])};
}

FoliationKind foliation_kind_checked(const RunConfig& cfg) {
  FoliationKind kind;
  try {
    kind = FoliationKindFromLabel(cfg.foliation);
  } catch (const std::exception&) {
    throw CliError("--foliation: unknown label '" + cfg.foliation + "'");
  }
  const bool twowave = cfg.model == "twowave";
  if (twowave != IsTwoWaveFoliation(kind)) {
    throw CliError("--foliation " + cfg.foliation +
                   " does not apply to model " + cfg.model);
  }
  return kind;
}

void validate(RunConfig& cfg) {
  if (cfg.model != "twowave" && cfg.model != "qflow") {
    throw CliError("--model must be twowave or qflow");
  }
  if (cfg.mu < 0.0) throw CliError("--mu must be >= 0");
  if (cfg.k < 1) throw CliError("--k must be >= 1");
  if (cfg.q < 1) throw CliError("--q must be >= 1");
  if (!(cfg.tmax > 0.0)) throw CliError("--tmax must be > 0");
  if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0)) {
    throw CliError("--rtol and --atol must be > 0");
  }
  if (!(cfg.h_max > 0.0)) throw CliError("--h-max must be > 0");
  if (cfg.singular_tol < 0.0) throw CliError("--singular-tol must be >= 0");
  if (cfg.workers < 1) throw CliError("--workers must be >= 1");

  if (cfg.subcommand == "detect") {
    foliation_kind_checked(cfg);
  } else if (cfg.subcommand == "sweep") {
    const FoliationKind kind = foliation_kind_checked(cfg);
    (void)kind;
    IcLine line;
    try {
      line = IcLineFromLabel(cfg.ic_line);
    } catch (const std::exception&) {
      throw CliError("--ic-line: unknown label '" + cfg.ic_line + "'");
    }
    if (cfg.model == "twowave" && line != IcLine::P0) {
      throw CliError("--ic-line " + cfg.ic_line +
                     " belongs to qflow; two-wave sweeps use p0");
    }
    if (cfg.model == "qflow" && line == IcLine::P0) {
      throw CliError("--ic-line p0 belongs to twowave; use uu0, y0, or x0");
    }
    if (cfg.axis1.empty() || cfg.axis2.empty()) {
      throw CliError("sweep requires --axis1 and --axis2");
    }
    parse_axis(cfg.axis1, "--axis1");
    parse_axis(cfg.axis2, "--axis2");
    if (cfg.out.empty()) throw CliError("sweep requires --out");
  } else if (cfg.subcommand == "section") {
    if (cfg.crossings < 1) throw CliError("--crossings must be >= 1");
    if (cfg.t_section < 0.0 || cfg.t_section >= 1.0) {
      throw CliError("--t-section must lie in [0, 1)");
    }
  } else if (cfg.subcommand == "lyapunov") {
    if (!(cfg.T > 0.0)) throw CliError("--T must be > 0");
    const TangentVec v = parse_vec3(cfg.v0);
    if (norm3(v) == 0.0) throw CliError("--v0 must be nonzero");
  } else if (cfg.subcommand == "hist") {
    if (cfg.input.empty()) throw CliError("hist requires --input");
    if (!(cfg.bin_width > 0.0)) throw CliError("--bin-width must be > 0");
    if (cfg.mode != "tc" && cfg.mode != "inverse") {
      throw CliError("--mode must be tc or inverse");
    }
  } else if (cfg.subcommand == "verify") {
    static const char* suites[] = {"forms",     "beltrami",    "gradients",
                                   "residuals", "invariances", "all"};
    if (std::find_if(std::begin(suites), std::end(suites), [&](const char* s) {
          return cfg.suite == s;
        }) == std::end(suites)) {
      throw CliError("verify suite must be one of forms, beltrami, gradients, "
                     "residuals, invariances, all");
    }
  }
}

StepControl control_from(const RunConfig& cfg) {
  StepControl ctrl;
  ctrl.rtol = cfg.rtol;
  ctrl.atol = cfg.atol;
  ctrl.h_max = cfg.h_max;
  ctrl.t_max = cfg.tmax;
  return ctrl;
}

struct ModelSetup {
  std::unique_ptr<FlowModel> model;
  std::optional<Foliation> foliation;
  State s0;
};

ModelSetup model_setup(const RunConfig& cfg, bool with_foliation) {
  ModelSetup ms;
  if (cfg.model == "twowave") {
    const TwoWaveParams P{cfg.mu, cfg.nu, static_cast<double>(cfg.k)};
    ms.model = std::make_unique<TwoWaveModel>(P);
    ms.s0 = {cfg.q0, cfg.p0, cfg.t0, ModelTag::TwoWave};
    if (with_foliation) {
      ms.foliation.emplace(foliation_kind_checked(cfg), P, cfg.singular_tol);
    }
  } else {
    const QFlowParams P{cfg.q, cfg.eps};
    ms.model = std::make_unique<QFlowModel>(P);
    ms.s0 = {cfg.x0, cfg.y0, cfg.z0, ModelTag::QFlow};
    if (with_foliation) {
      ms.foliation.emplace(foliation_kind_checked(cfg), P, cfg.singular_tol);
    }
  }
  return ms;
}

/// Opens cfg.out for writing, or stdout when no path was given.
class OutputStream {
 public:
  explicit OutputStream(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_detect(const RunConfig& cfg) {
  ModelSetup ms = model_setup(cfg, true);
  DetectorOptions opts;
  opts.t_max = cfg.tmax;
  opts.singular_tol = cfg.singular_tol;
  opts.record_trace = !cfg.trace.empty();
  const DetectionResult r =
      detect(*ms.model, *ms.foliation, ms.s0, opts, control_from(cfg));

  std::ostringstream line;
  line << "status=" << ToString(r.status);
  if (r.status == DetectionStatus::Detected) {
    line << " t_c=" << format_double(r.t_c);
  } else if (r.status == DetectionStatus::Error) {
    line << " reason=" << r.reason;
  } else {
    line << " t_end=" << format_double(r.t_end);
  }
  line << " n_steps=" << r.n_steps;
  std::cout << line.str() << "\n";

  if (!cfg.trace.empty()) {
    std::ofstream out(cfg.trace);
    if (!out) throw std::runtime_error("cannot open trace file: " + cfg.trace);
    out << "t,K,guard,c0,c1,c2\n";
    for (const TraceSample& s : r.trace) {
      out << format_double(s.t) << ',' << format_double(s.K) << ','
          << format_double(s.guard_dot) << ',' << format_double(s.state.c0)
          << ',' << format_double(s.state.c1) << ','
          << format_double(s.state.c2) << '\n';
    }
  }
  return r.status == DetectionStatus::Error ? 1 : 0;
}

int cmd_sweep(const RunConfig& cfg) {
  GridSpec spec;
  spec.model = cfg.model == "twowave" ? ModelTag::TwoWave : ModelTag::QFlow;
  spec.twowave = {cfg.mu, cfg.nu, static_cast<double>(cfg.k)};
  spec.qflow = {cfg.q, cfg.eps};
  spec.foliation = foliation_kind_checked(cfg);
  spec.axis1 = parse_axis(cfg.axis1, "--axis1");
  spec.axis2 = parse_axis(cfg.axis2, "--axis2");
  spec.ic_line = IcLineFromLabel(cfg.ic_line);
  spec.q0 = cfg.q0;
  spec.t0 = cfg.t0;
  spec.singular_tol = cfg.singular_tol;
  spec.detector.t_max = cfg.tmax;
  spec.control = control_from(cfg);

  const GridResult g = run_sweep(spec, cfg.workers);
  write_grid_csv(g, cfg.out);
  if (!cfg.image.empty()) render_pgm(g, cfg.image);

  const bool any_error =
      std::any_of(g.cells.begin(), g.cells.end(), [](const DetectionResult& r) {
        return r.status == DetectionStatus::Error;
      });
  return any_error ? 2 : 0;
}

int cmd_section(const RunConfig& cfg) {
  const TwoWaveParams P{cfg.mu, cfg.nu, static_cast<double>(cfg.k)};
  const State s0{cfg.q0, cfg.p0, cfg.t0, ModelTag::TwoWave};
  const std::vector<SectionPoint> pts =
      poincare_section(P, s0, cfg.crossings, cfg.t_section, control_from(cfg));
  OutputStream out(cfg.out);
  out.get() << "crossing_index,q,p\n";
  for (const SectionPoint& pt : pts) {
    out.get() << pt.crossing_index << ',' << format_double(pt.q) << ','
              << format_double(pt.p) << '\n';
  }
  return 0;
}

int cmd_lyapunov(const RunConfig& cfg) {
  ModelSetup ms = model_setup(cfg, false);
  const FtleResult r =
      ftle(*ms.model, ms.s0, cfg.T, parse_vec3(cfg.v0), control_from(cfg));
  std::printf("%.17g\n", r.lambda);
  return 0;
}

int cmd_hist(const RunConfig& cfg) {
  const GridResult g = read_grid_csv(cfg.input);
  OutputStream out(cfg.out);
  if (cfg.mode == "tc") {
    out.get() << "bin_start,count\n";
    for (const auto& [bin_start, count] : histogram_tc(g.cells, cfg.bin_width)) {
      out.get() << format_double(bin_start) << ',' << count << '\n';
    }
  } else {
    const std::vector<double> prof = inverse_tc_profile(g.cells);
    out.get() << "axis1,axis2,inv_tc\n";
    const int n2 = g.spec.axis2.n;
    for (size_t idx = 0; idx < prof.size(); ++idx) {
      const int i1 = static_cast<int>(idx) / n2;
      const int i2 = static_cast<int>(idx) % n2;
      out.get() << format_double(axis_value(g.spec.axis1, i1)) << ','
                << format_double(axis_value(g.spec.axis2, i2)) << ','
                << format_double(prof[idx]) << '\n';
    }
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  return print_verify_report(run_verify(cfg.suite, cfg.seed));
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;

  // Config values load first so that flags, parsed below, override them.
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      cfg.config = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      cfg.config = args[i].substr(9);
    }
  }
  if (!cfg.config.empty()) apply_config_file(cfg, cfg.config);

  CLI::App app{"Converse KAM detector: certify phase-space points off "
               "invariant tori in 3D flows"};
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", cfg.config,
                    "key=value file applied before flags");
  };
  const auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model, "twowave or qflow")
        ->capture_default_str();
    sub->add_option("--mu", cfg.mu, "two-wave amplitude")->capture_default_str();
    sub->add_option("--nu", cfg.nu, "two-wave amplitude ratio")
        ->capture_default_str();
    sub->add_option("--k", cfg.k, "two-wave secondary wavenumber")
        ->capture_default_str();
    sub->add_option("--q", cfg.q, "Q-flow symmetry order")->capture_default_str();
    sub->add_option("--eps", cfg.eps, "Q-flow coupling strength")
        ->capture_default_str();
  };
  const auto add_state = [&](CLI::App* sub) {
    sub->add_option("--q0", cfg.q0, "two-wave initial angle")
        ->capture_default_str();
    sub->add_option("--p0", cfg.p0, "two-wave initial momentum")
        ->capture_default_str();
    sub->add_option("--t0", cfg.t0, "two-wave initial time coordinate")
        ->capture_default_str();
    sub->add_option("--x0", cfg.x0, "Q-flow initial x")->capture_default_str();
    sub->add_option("--y0", cfg.y0, "Q-flow initial y")->capture_default_str();
    sub->add_option("--z0", cfg.z0, "Q-flow initial z")->capture_default_str();
  };
  const auto add_control = [&](CLI::App* sub) {
    sub->add_option("--tmax", cfg.tmax, "integration horizon")
        ->capture_default_str();
    sub->add_option("--rtol", cfg.rtol, "relative step tolerance")
        ->capture_default_str();
    sub->add_option("--atol", cfg.atol, "absolute step tolerance")
        ->capture_default_str();
    sub->add_option("--h-max", cfg.h_max, "step-size ceiling")
        ->capture_default_str();
    sub->add_option("--singular-tol", cfg.singular_tol,
                    "|grad J| exclusion threshold")
        ->capture_default_str();
  };

  CLI::App* sub_detect = app.add_subcommand(
      "detect", "Decide one initial condition against one foliation");
  add_common(sub_detect);
  add_model(sub_detect);
  add_state(sub_detect);
  add_control(sub_detect);
  sub_detect->add_option("--foliation", cfg.foliation,
                         "r, l, p, s1, s2, ql, or qpsi")
      ->capture_default_str();
  sub_detect->add_option("--trace", cfg.trace,
                         "write per-step t,K,guard,c0,c1,c2 CSV here");

  CLI::App* sub_sweep =
      app.add_subcommand("sweep", "Run a parameter grid of detections");
  add_common(sub_sweep);
  add_model(sub_sweep);
  add_control(sub_sweep);
  sub_sweep->add_option("--foliation", cfg.foliation,
                        "r, l, p, s1, s2, ql, or qpsi")
      ->capture_default_str();
  sub_sweep->add_option("--axis1", cfg.axis1,
                        "parameter axis name:lo:hi:n (mu or eps)");
  sub_sweep->add_option("--axis2", cfg.axis2,
                        "initial-condition axis name:lo:hi:n");
  sub_sweep->add_option("--ic-line", cfg.ic_line,
                        "p0 (two-wave) or uu0 / y0 / x0 (Q-flow)")
      ->capture_default_str();
  sub_sweep->add_option("--q0", cfg.q0, "two-wave fixed initial angle")
      ->capture_default_str();
  sub_sweep->add_option("--t0", cfg.t0, "two-wave fixed initial time")
      ->capture_default_str();
  sub_sweep->add_option("--workers", cfg.workers, "worker threads")
      ->capture_default_str();
  sub_sweep->add_option("--out", cfg.out, "result CSV path");
  sub_sweep->add_option("--image", cfg.image, "optional PGM heatmap path");

  CLI::App* sub_section = app.add_subcommand(
      "section", "Poincare section of a two-wave orbit at fixed time phase");
  add_common(sub_section);
  sub_section->add_option("--mu", cfg.mu, "two-wave amplitude")
      ->capture_default_str();
  sub_section->add_option("--nu", cfg.nu, "two-wave amplitude ratio")
      ->capture_default_str();
  sub_section->add_option("--k", cfg.k, "two-wave secondary wavenumber")
      ->capture_default_str();
  add_state(sub_section);
  add_control(sub_section);
  sub_section->add_option("--crossings", cfg.crossings,
                          "number of section returns")
      ->capture_default_str();
  sub_section->add_option("--t-section", cfg.t_section, "time slice in [0,1)")
      ->capture_default_str();
  sub_section->add_option("--out", cfg.out, "CSV path (default stdout)");

  CLI::App* sub_lyapunov = app.add_subcommand(
      "lyapunov", "Finite-time maximal Lyapunov exponent of one orbit");
  add_common(sub_lyapunov);
  add_model(sub_lyapunov);
  add_state(sub_lyapunov);
  add_control(sub_lyapunov);
  sub_lyapunov->add_option("--T", cfg.T, "averaging horizon")
      ->capture_default_str();
  sub_lyapunov->add_option("--v0", cfg.v0, "initial tangent vector x,y,z")
      ->capture_default_str();

  CLI::App* sub_hist = app.add_subcommand(
      "hist", "Histogram detection times from a sweep CSV, or 1/t_c rows");
  add_common(sub_hist);
  sub_hist->add_option("--input", cfg.input, "sweep CSV to read");
  sub_hist->add_option("--bin-width", cfg.bin_width, "t_c bin width")
      ->capture_default_str();
  sub_hist->add_option("--mode", cfg.mode, "tc or inverse")
      ->capture_default_str();
  sub_hist->add_option("--out", cfg.out, "CSV path (default stdout)");

  CLI::App* sub_verify = app.add_subcommand(
      "verify", "Run seeded property suites and report worst-case errors");
  add_common(sub_verify);
  sub_verify->add_option("suite", cfg.suite,
                         "forms, beltrami, gradients, residuals, invariances, "
                         "or all")
      ->capture_default_str();
  sub_verify->add_option("--seed", cfg.seed, "RNG seed for the suites")
      ->capture_default_str();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    throw CliHelp(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw CliHelp(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw CliError(e.what());
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  validate(cfg);
  return cfg;
}

int run_cli(const std::vector<std::string>& args) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const CliHelp& h) {
    std::cout << h.what();
    return 0;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    if (cfg.subcommand == "detect") return cmd_detect(cfg);
    if (cfg.subcommand == "sweep") return cmd_sweep(cfg);
    if (cfg.subcommand == "section") return cmd_section(cfg);
    if (cfg.subcommand == "lyapunov") return cmd_lyapunov(cfg);
    if (cfg.subcommand == "hist") return cmd_hist(cfg);
    if (cfg.subcommand == "verify") return cmd_verify(cfg);
    std::cerr << "error: unknown subcommand " << cfg.subcommand << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ckam
