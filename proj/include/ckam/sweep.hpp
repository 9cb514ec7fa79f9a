#pragma once

#include <string>
#include <vector>

#include "ckam/detector.hpp"

namespace ckam {

/** @brief How the axis2 value becomes an initial condition. */
enum class IcLine {
  P0,   ///< two-wave: (q0, p0, t0) with q0, t0 fixed
  UU0,  ///< Q-flow: (u, u, 0)
  Y0,   ///< Q-flow: (0, y, 0)
  X0,   ///< Q-flow: (x, 0, 0)
};

[[nodiscard]] const char* ToString(IcLine line);
[[nodiscard]] IcLine IcLineFromLabel(const std::string& label);

struct AxisSpec {
  std::string name;  ///< "mu"/"eps" for axis1; "p0"/"u0"/"y0"/"x0" for axis2
  double lo = 0.0;
  double hi = 1.0;
  int n = 2;
};

/** @brief Axis value of cell index i: lo + (hi-lo)*i/(n-1). */
[[nodiscard]] double axis_value(const AxisSpec& axis, int i);

/** @brief Full description of one heatmap experiment. */
struct GridSpec {
  ModelTag model = ModelTag::TwoWave;
  TwoWaveParams twowave{};     ///< template; axis1 overrides mu per cell
  QFlowParams qflow{};         ///< template; axis1 overrides eps per cell
  FoliationKind foliation = FoliationKind::R;
  AxisSpec axis1;              ///< parameter axis (mu or eps)
  AxisSpec axis2;              ///< initial-condition axis
  IcLine ic_line = IcLine::P0;
  double q0 = 0.0;             ///< two-wave IC fixers
  double t0 = 0.0;
  double singular_tol = 1e-6;
  DetectorOptions detector{};
  StepControl control{};
};

/** @brief Dense result grid; cells in row-major order, axis1 outer:
 * cells[i1 * axis2.n + i2]. */
struct GridResult {
  GridSpec spec;
  std::vector<DetectionResult> cells;
};

/**
 * @brief Run detect() for every grid cell on a bounded worker pool.
 *
 * Deterministic: per-cell computation is pure and results are assembled by
 * index, so the output is bitwise independent of the worker count. Cell
 * failures are recorded in-cell as Error and never abort the sweep.
 */
GridResult run_sweep(const GridSpec& spec, int workers);

/** @brief The initial state of cell (i1, i2); exposed for tests and bindings. */
State sweep_initial_state(const GridSpec& spec, int i2);

/** @brief Shortest decimal form that round-trips to the same double. */
std::string format_double(double v);

/** @brief Strict full-string double parse; throws on trailing garbage. */
double parse_double(const std::string& s);

/**
 * @brief Write `axis1,axis2,status,t_c` rows in row-major cell order. Floats
 * use shortest round-trip decimal form; t_c is empty unless Detected.
 */
void write_grid_csv(const GridResult& g, const std::string& path);

/**
 * @brief Re-read a CSV produced by write_grid_csv. Axis geometry is
 * reconstructed from the data rows; cells carry status and t_c.
 */
GridResult read_grid_csv(const std::string& path);

/**
 * @brief 8-bit binary PGM (P5), width axis1.n, height axis2.n, row 0 = axis2
 * max. Pixels: None = 255; Excluded/Error = 0; Detected = 32 + floor(191 *
 * t_c / t_max).
 */
void render_pgm(const GridResult& g, const std::string& path);

}  // namespace ckam
