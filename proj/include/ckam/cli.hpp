#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ckam {

/** @brief Usage problem: bad flag, bad value, or malformed config file. */
class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** @brief Thrown by parse_args when --help is requested; carries the text. */
class CliHelp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * @brief Fully resolved command-line configuration. Every field has a
 * default; values from --config files are applied first, then flags override.
 */
struct RunConfig {
  std::string subcommand;       ///< detect, sweep, section, lyapunov, hist, verify
  std::string config;           ///< optional key=value file applied before flags

  std::string model = "twowave";  ///< twowave or qflow
  double mu = 0.0;                ///< two-wave: primary wave amplitude (>= 0)
  double nu = 1.0;                ///< two-wave: secondary/primary amplitude ratio
  int k = 1;                      ///< two-wave: secondary wavenumber (>= 1)
  int q = 4;                      ///< Q-flow: symmetry order
  double eps = 0.0;               ///< Q-flow: vertical coupling strength

  std::string foliation = "r";    ///< r, l, p, s1, s2 (two-wave); ql, qpsi (Q-flow)

  double q0 = 0.0;  ///< two-wave initial angle
  double p0 = 0.0;  ///< two-wave initial momentum
  double t0 = 0.0;  ///< two-wave initial time coordinate
  double x0 = 0.0;  ///< Q-flow initial x
  double y0 = 0.0;  ///< Q-flow initial y
  double z0 = 0.0;  ///< Q-flow initial z

  double tmax = 150.0;         ///< integration horizon
  double rtol = 1e-8;          ///< relative step tolerance
  double atol = 1e-10;         ///< absolute step tolerance
  double h_max = 0.1;          ///< step-size ceiling
  double singular_tol = 1e-6;  ///< |grad J| below this excludes the leaf
  std::string trace;           ///< detect: per-step diagnostics CSV path

  std::string axis1;           ///< sweep: name:lo:hi:n (mu or eps)
  std::string axis2;           ///< sweep: name:lo:hi:n (initial-condition line)
  std::string ic_line = "p0";  ///< sweep: p0 (two-wave) or uu0 / y0 / x0 (Q-flow)
  int workers = 1;             ///< sweep: worker threads
  std::string out;             ///< output path (sweep CSV, section/hist CSV)
  std::string image;           ///< sweep: optional PGM heatmap path

  int crossings = 100;         ///< section: number of section returns
  double t_section = 0.0;      ///< section: time slice in [0, 1)

  double T = 150.0;            ///< lyapunov: averaging horizon
  std::string v0 = "0,1,0";    ///< lyapunov: initial tangent vector x,y,z

  std::string input;           ///< hist: sweep CSV to read
  double bin_width = 5.0;      ///< hist: t_c bin width
  std::string mode = "tc";     ///< hist: tc (histogram) or inverse (1/t_c rows)

  std::string suite = "all";   ///< verify: forms, beltrami, gradients,
                               ///< residuals, invariances, or all
  unsigned seed = 0;           ///< verify: RNG seed for the property suites
};

/**
 * @brief Parse argv (without the program name) into a RunConfig.
 *
 * Pure function of the arguments plus the contents of any --config file.
 * The config file holds one key=value pair per line ('#' starts a comment);
 * keys are the long flag names without dashes. Unknown keys or flags, values
 * out of range, and foliation / ic-line choices that do not match the model
 * raise CliError; --help raises CliHelp with the usage text.
 */
RunConfig parse_args(const std::vector<std::string>& args);

/** @brief Parse, dispatch, and run one CLI invocation; returns the exit code. */
int run_cli(const std::vector<std::string>& args);

}  // namespace ckam
