#include "ckam/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <thread>

namespace ckam {

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("float formatting failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("bad float field: " + s);
  }
  return v;
}

namespace {

void validate(const GridSpec& spec) {
  for (const AxisSpec* a : {&spec.axis1, &spec.axis2}) {
    if (a->n < 2) throw std::invalid_argument("axis n must be >= 2");
    if (!(a->lo < a->hi)) throw std::invalid_argument("axis requires lo < hi");
  }
  if (spec.model == ModelTag::TwoWave) {
    if (spec.axis1.name != "mu") {
      throw std::invalid_argument("two-wave sweeps use axis1 = mu");
    }
    if (spec.ic_line != IcLine::P0) {
      throw std::invalid_argument("two-wave sweeps use ic-line p0");
    }
    if (!IsTwoWaveFoliation(spec.foliation)) {
      throw std::invalid_argument("foliation does not apply to the two-wave model");
    }
  } else {
    if (spec.axis1.name != "eps") {
      throw std::invalid_argument("Q-flow sweeps use axis1 = eps");
    }
    if (spec.ic_line == IcLine::P0) {
      throw std::invalid_argument("Q-flow sweeps use ic-line uu0, y0, or x0");
    }
    if (IsTwoWaveFoliation(spec.foliation)) {
      throw std::invalid_argument("foliation does not apply to the Q-flow model");
    }
  }
}

DetectionResult compute_cell(const GridSpec& spec, int i1, int i2) {
  const double a1 = axis_value(spec.axis1, i1);
  DetectorOptions opts = spec.detector;
  opts.record_trace = false;  // traces would dwarf the grid itself
  opts.singular_tol = spec.singular_tol;
  const State s0 = sweep_initial_state(spec, i2);
  if (spec.model == ModelTag::TwoWave) {
    TwoWaveParams P = spec.twowave;
    P.mu = a1;
    const TwoWaveModel model(P);
    const Foliation fol(spec.foliation, P, spec.singular_tol);
    return detect(model, fol, s0, opts, spec.control);
  }
  QFlowParams P = spec.qflow;
  P.eps = a1;
  const QFlowModel model(P);
  const Foliation fol(spec.foliation, P, spec.singular_tol);
  return detect(model, fol, s0, opts, spec.control);
}

}  // namespace

const char* ToString(IcLine line) {
  switch (line) {
    case IcLine::P0: return "p0";
    case IcLine::UU0: return "uu0";
    case IcLine::Y0: return "y0";
    case IcLine::X0: return "x0";
  }
  return "unknown";
}

IcLine IcLineFromLabel(const std::string& label) {
  if (label == "p0") return IcLine::P0;
  if (label == "uu0") return IcLine::UU0;
  if (label == "y0") return IcLine::Y0;
  if (label == "x0") return IcLine::X0;
  throw std::invalid_argument("unknown ic-line: " + label);
}

double axis_value(const AxisSpec& axis, int i) {
  return axis.lo + (axis.hi - axis.lo) * (static_cast<double>(i) / (axis.n - 1));
}

State sweep_initial_state(const GridSpec& spec, int i2) {
  const double a2 = axis_value(spec.axis2, i2);
  switch (spec.ic_line) {
    case IcLine::P0: return {spec.q0, a2, spec.t0, ModelTag::TwoWave};
    case IcLine::UU0: return {a2, a2, 0.0, ModelTag::QFlow};
    case IcLine::Y0: return {0.0, a2, 0.0, ModelTag::QFlow};
    case IcLine::X0: return {a2, 0.0, 0.0, ModelTag::QFlow};
  }
  throw std::logic_error("unreachable ic-line");
}

GridResult run_sweep(const GridSpec& spec, int workers) {
  validate(spec);
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");

  const int n1 = spec.axis1.n;
  const int n2 = spec.axis2.n;
  const size_t total = static_cast<size_t>(n1) * n2;

  GridResult grid;
  grid.spec = spec;
  grid.cells.resize(total);

  std::atomic<size_t> next{0};
  const auto worker = [&] {
    for (size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
      const int i1 = static_cast<int>(idx) / n2;
      const int i2 = static_cast<int>(idx) % n2;
      try {
        grid.cells[idx] = compute_cell(spec, i1, i2);
      } catch (const std::exception& e) {
        DetectionResult r;
        r.status = DetectionStatus::Error;
        r.reason = e.what();
        grid.cells[idx] = r;
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return grid;
}

void write_grid_csv(const GridResult& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "axis1,axis2,status,t_c\n";
  const int n2 = g.spec.axis2.n;
  for (size_t idx = 0; idx < g.cells.size(); ++idx) {
    const int i1 = static_cast<int>(idx) / n2;
    const int i2 = static_cast<int>(idx) % n2;
    const DetectionResult& r = g.cells[idx];
    out << format_double(axis_value(g.spec.axis1, i1)) << ','
        << format_double(axis_value(g.spec.axis2, i2)) << ','
        << ToString(r.status) << ',';
    if (r.status == DetectionStatus::Detected) out << format_double(r.t_c);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

GridResult read_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "axis1,axis2,status,t_c") {
    throw std::runtime_error("bad CSV header in " + path);
  }

  std::vector<double> a1s, a2s;
  GridResult g;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string f1, f2, f3, f4;
    std::getline(row, f1, ',');
    std::getline(row, f2, ',');
    std::getline(row, f3, ',');
    std::getline(row, f4);
    DetectionResult r;
    if (f3 == "detected") {
      r.status = DetectionStatus::Detected;
      r.t_c = parse_double(f4);
    } else if (f3 == "none") {
      r.status = DetectionStatus::None;
    } else if (f3 == "excluded") {
      r.status = DetectionStatus::Excluded;
    } else if (f3 == "error") {
      r.status = DetectionStatus::Error;
    } else {
      throw std::runtime_error("bad status field: " + f3);
    }
    a1s.push_back(parse_double(f1));
    a2s.push_back(parse_double(f2));
    g.cells.push_back(std::move(r));
  }
  if (g.cells.empty()) throw std::runtime_error("empty CSV: " + path);

  // Row-major with axis1 outer: axis2 cycles fastest and axis1 is strictly
  // monotone, so the first change in the axis1 column marks the block size.
  size_t n2 = a1s.size();
  for (size_t i = 1; i < a1s.size(); ++i) {
    if (a1s[i] != a1s[0]) {
      n2 = i;
      break;
    }
  }
  if (a2s.size() % n2 != 0) throw std::runtime_error("ragged grid in " + path);
  const size_t n1 = a2s.size() / n2;
  if (n1 < 2 || n2 < 2) throw std::runtime_error("degenerate grid in " + path);
  g.spec.axis1 = {"axis1", a1s.front(), a1s.back(), static_cast<int>(n1)};
  g.spec.axis2 = {"axis2", a2s.front(), a2s[n2 - 1], static_cast<int>(n2)};
  return g;
}

void render_pgm(const GridResult& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const int n1 = g.spec.axis1.n;
  const int n2 = g.spec.axis2.n;
  const double t_max = g.spec.detector.t_max;
  out << "P5\n" << n1 << ' ' << n2 << "\n255\n";
  std::vector<unsigned char> row(n1);
  for (int r = 0; r < n2; ++r) {
    const int i2 = n2 - 1 - r;  // image top = axis2 max
    for (int c = 0; c < n1; ++c) {
      const DetectionResult& cell = g.cells[static_cast<size_t>(c) * n2 + i2];
      unsigned char px = 0;
      switch (cell.status) {
        case DetectionStatus::None: px = 255; break;
        case DetectionStatus::Excluded:
        case DetectionStatus::Error: px = 0; break;
        case DetectionStatus::Detected:
          px = static_cast<unsigned char>(
              32 + static_cast<int>(std::floor(191.0 * cell.t_c / t_max)));
          break;
      }
      row[c] = px;
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ckam
