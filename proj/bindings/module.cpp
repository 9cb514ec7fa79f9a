// Python bindings for the converse-KAM toolkit. The surface mirrors the CLI:
// single-orbit detection, parameter sweeps, sections, exponents, and the
// self-check suites, with enums exchanged as short string labels.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ckam/analysis.hpp"
#include "ckam/detector.hpp"
#include "ckam/foliation.hpp"
#include "ckam/model.hpp"
#include "ckam/sweep.hpp"
#include "ckam/verify.hpp"

namespace py = pybind11;
using namespace ckam;

namespace {

ModelTag tag_for(FoliationKind kind) {
  return (kind == FoliationKind::QL || kind == FoliationKind::QPsi)
             ? ModelTag::QFlow
             : ModelTag::TwoWave;
}

State make_state(double c0, double c1, double c2, ModelTag tag) {
  return wrap({c0, c1, c2, tag});
}

}  // namespace

PYBIND11_MODULE(_ckam, m) {
  m.doc() = "Converse-KAM detection for 3D volume-preserving flows";
  m.attr("__version__") = "0.1.0";

  py::class_<TwoWaveParams>(m, "TwoWaveParams")
      .def(py::init([](double mu, double nu, double k) {
             return TwoWaveParams{mu, nu, k};
           }),
           py::arg("mu") = 0.0, py::arg("nu") = 1.0, py::arg("k") = 1.0)
      .def_readwrite("mu", &TwoWaveParams::mu)
      .def_readwrite("nu", &TwoWaveParams::nu)
      .def_readwrite("k", &TwoWaveParams::k)
      .def("__repr__", [](const TwoWaveParams& p) {
        return "TwoWaveParams(mu=" + format_double(p.mu) + ", nu=" +
               format_double(p.nu) + ", k=" + format_double(p.k) + ")";
      });

  py::class_<QFlowParams>(m, "QFlowParams")
      .def(py::init([](int q, double eps) { return QFlowParams{q, eps}; }),
           py::arg("q") = 4, py::arg("eps") = 0.0)
      .def_readwrite("q", &QFlowParams::q)
      .def_readwrite("eps", &QFlowParams::eps)
      .def("__repr__", [](const QFlowParams& p) {
        return "QFlowParams(q=" + std::to_string(p.q) + ", eps=" +
               format_double(p.eps) + ")";
      });

  py::class_<StepControl>(m, "StepControl")
      .def(py::init<>())
      .def_readwrite("rtol", &StepControl::rtol)
      .def_readwrite("atol", &StepControl::atol)
      .def_readwrite("h_init", &StepControl::h_init)
      .def_readwrite("h_max", &StepControl::h_max)
      .def_readwrite("h_min", &StepControl::h_min)
      .def_readwrite("t_max", &StepControl::t_max)
      .def_readwrite("renorm", &StepControl::renorm);

  py::class_<DetectorOptions>(m, "DetectorOptions")
      .def(py::init<>())
      .def_readwrite("t_max", &DetectorOptions::t_max)
      .def_readwrite("singular_tol", &DetectorOptions::singular_tol)
      .def_readwrite("record_trace", &DetectorOptions::record_trace)
      .def_readwrite("xi0_scale", &DetectorOptions::xi0_scale);

  py::class_<DetectionResult>(m, "DetectionResult")
      .def_property_readonly(
          "status",
          [](const DetectionResult& r) { return std::string(ToString(r.status)); })
      .def_readonly("t_c", &DetectionResult::t_c)
      .def_readonly("t_end", &DetectionResult::t_end)
      .def_readonly("n_steps", &DetectionResult::n_steps)
      .def_readonly("reason", &DetectionResult::reason)
      .def_property_readonly(
          "trace",
          [](const DetectionResult& r) {
            py::list out;
            for (const TraceSample& s : r.trace) {
              out.append(py::make_tuple(s.t, s.K, s.guard_dot, s.state.c0,
                                        s.state.c1, s.state.c2));
            }
            return out;
          },
          "List of (t, K, guard, c0, c1, c2) samples; filled when "
          "record_trace is set.")
      .def("__repr__", [](const DetectionResult& r) {
        std::string s = std::string("DetectionResult(status='") +
                        ToString(r.status) + "'";
        if (r.status == DetectionStatus::Detected)
          s += ", t_c=" + format_double(r.t_c);
        return s + ")";
      });

  py::class_<Foliation>(m, "Foliation")
      .def(py::init([](const std::string& label, const TwoWaveParams& p) {
             return Foliation(FoliationKindFromLabel(label), p);
           }),
           py::arg("kind"), py::arg("params"))
      .def(py::init([](const std::string& label, const QFlowParams& p) {
             return Foliation(FoliationKindFromLabel(label), p);
           }),
           py::arg("kind"), py::arg("params"))
      .def_property_readonly(
          "kind", [](const Foliation& f) { return std::string(ToString(f.kind())); })
      .def(
          "value",
          [](const Foliation& f, double c0, double c1, double c2) {
            return f.value(make_state(c0, c1, c2, tag_for(f.kind())));
          },
          py::arg("c0"), py::arg("c1"), py::arg("c2"))
      .def(
          "gradient",
          [](const Foliation& f, double c0, double c1, double c2) {
            const TangentVec g =
                f.gradient(make_state(c0, c1, c2, tag_for(f.kind())));
            return py::make_tuple(g.v0, g.v1, g.v2);
          },
          py::arg("c0"), py::arg("c1"), py::arg("c2"))
      .def(
          "is_singular",
          [](const Foliation& f, double c0, double c1, double c2) {
            return f.is_singular(make_state(c0, c1, c2, tag_for(f.kind())));
          },
          py::arg("c0"), py::arg("c1"), py::arg("c2"));

  m.def(
      "psi",
      [](double x, double y, int q) { return psi_q(x, y, q); },
      py::arg("x"), py::arg("y"), py::arg("q"),
      "Sum of q unit plane waves with wavevectors at angles 2*pi*j/q.");

  m.def(
      "detect_two_wave",
      [](const TwoWaveParams& params, const std::string& foliation, double q0,
         double p0, double t0, const DetectorOptions& opts,
         const StepControl& ctrl) {
        const TwoWaveModel model(params);
        const Foliation fol(FoliationKindFromLabel(foliation), params);
        return detect(model, fol, make_state(q0, p0, t0, ModelTag::TwoWave),
                      opts, ctrl);
      },
      py::arg("params"), py::arg("foliation"), py::arg("q0") = 0.0,
      py::arg("p0") = 0.0, py::arg("t0") = 0.0,
      py::arg("options") = DetectorOptions{},
      py::arg("control") = StepControl{},
      "Classify one two-wave initial condition against a foliation.");

  m.def(
      "detect_q_flow",
      [](const QFlowParams& params, const std::string& foliation, double x0,
         double y0, double z0, const DetectorOptions& opts,
         const StepControl& ctrl) {
        const QFlowModel model(params);
        const Foliation fol(FoliationKindFromLabel(foliation), params);
        return detect(model, fol, make_state(x0, y0, z0, ModelTag::QFlow), opts,
                      ctrl);
      },
      py::arg("params"), py::arg("foliation"), py::arg("x0") = 0.0,
      py::arg("y0") = 0.0, py::arg("z0") = 0.0,
      py::arg("options") = DetectorOptions{},
      py::arg("control") = StepControl{},
      "Classify one Q-flow initial condition against a foliation.");

  m.def(
      "ftle_two_wave",
      [](const TwoWaveParams& params, double q0, double p0, double t0, double T,
         std::array<double, 3> v0) {
        const TwoWaveModel model(params);
        return ftle(model, make_state(q0, p0, t0, ModelTag::TwoWave), T,
                    {v0[0], v0[1], v0[2]})
            .lambda;
      },
      py::arg("params"), py::arg("q0") = 0.0, py::arg("p0") = 0.0,
      py::arg("t0") = 0.0, py::arg("T") = 150.0,
      py::arg("v0") = std::array<double, 3>{0.0, 1.0, 0.0},
      "Finite-time maximal Lyapunov exponent of one two-wave orbit.");

  m.def(
      "ftle_q_flow",
      [](const QFlowParams& params, double x0, double y0, double z0, double T,
         std::array<double, 3> v0) {
        const QFlowModel model(params);
        return ftle(model, make_state(x0, y0, z0, ModelTag::QFlow), T,
                    {v0[0], v0[1], v0[2]})
            .lambda;
      },
      py::arg("params"), py::arg("x0") = 0.0, py::arg("y0") = 0.0,
      py::arg("z0") = 0.0, py::arg("T") = 150.0,
      py::arg("v0") = std::array<double, 3>{0.0, 1.0, 0.0},
      "Finite-time maximal Lyapunov exponent of one Q-flow orbit.");

  m.def(
      "poincare_section",
      [](const TwoWaveParams& params, double q0, double p0, double t0,
         int n_crossings, double t_section) {
        const auto pts = poincare_section(
            params, make_state(q0, p0, t0, ModelTag::TwoWave), n_crossings,
            t_section);
        py::list out;
        for (const SectionPoint& pt : pts)
          out.append(py::make_tuple(pt.crossing_index, pt.q, pt.p));
        return out;
      },
      py::arg("params"), py::arg("q0") = 0.0, py::arg("p0") = 0.0,
      py::arg("t0") = 0.0, py::arg("n_crossings") = 100,
      py::arg("t_section") = 0.0,
      "List of (crossing_index, q, p) section hits at t = t_section (mod 1).");

  py::class_<AxisSpec>(m, "AxisSpec")
      .def(py::init([](const std::string& name, double lo, double hi, int n) {
             return AxisSpec{name, lo, hi, n};
           }),
           py::arg("name"), py::arg("lo"), py::arg("hi"), py::arg("n"))
      .def_readwrite("name", &AxisSpec::name)
      .def_readwrite("lo", &AxisSpec::lo)
      .def_readwrite("hi", &AxisSpec::hi)
      .def_readwrite("n", &AxisSpec::n);

  m.def("axis_value", &axis_value, py::arg("axis"), py::arg("i"),
        "Axis value of cell index i: lo + (hi-lo)*i/(n-1).");

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_property(
          "model",
          [](const GridSpec& s) { return std::string(ToString(s.model)); },
          [](GridSpec& s, const std::string& label) {
            if (label == "twowave") s.model = ModelTag::TwoWave;
            else if (label == "qflow") s.model = ModelTag::QFlow;
            else throw std::invalid_argument("unknown model: " + label);
          })
      .def_readwrite("twowave", &GridSpec::twowave)
      .def_readwrite("qflow", &GridSpec::qflow)
      .def_property(
          "foliation",
          [](const GridSpec& s) { return std::string(ToString(s.foliation)); },
          [](GridSpec& s, const std::string& label) {
            s.foliation = FoliationKindFromLabel(label);
          })
      .def_readwrite("axis1", &GridSpec::axis1)
      .def_readwrite("axis2", &GridSpec::axis2)
      .def_property(
          "ic_line",
          [](const GridSpec& s) { return std::string(ToString(s.ic_line)); },
          [](GridSpec& s, const std::string& label) {
            s.ic_line = IcLineFromLabel(label);
          })
      .def_readwrite("q0", &GridSpec::q0)
      .def_readwrite("t0", &GridSpec::t0)
      .def_readwrite("singular_tol", &GridSpec::singular_tol)
      .def_readwrite("detector", &GridSpec::detector)
      .def_readwrite("control", &GridSpec::control);

  py::class_<GridResult>(m, "GridResult")
      .def_readonly("spec", &GridResult::spec)
      .def_property_readonly(
          "statuses",
          [](const GridResult& g) {
            std::vector<std::string> out;
            out.reserve(g.cells.size());
            for (const DetectionResult& r : g.cells)
              out.emplace_back(ToString(r.status));
            return out;
          },
          "Cell statuses in row-major order (axis1 outer, axis2 inner).")
      .def_property_readonly(
          "t_c",
          [](const GridResult& g) {
            std::vector<double> out;
            out.reserve(g.cells.size());
            for (const DetectionResult& r : g.cells) out.push_back(r.t_c);
            return out;
          },
          "Crossing times in cell order; NaN where not Detected.")
      .def("cell",
           [](const GridResult& g, int i1, int i2) -> const DetectionResult& {
             const int n1 = g.spec.axis1.n, n2 = g.spec.axis2.n;
             if (i1 < 0 || i1 >= n1 || i2 < 0 || i2 >= n2)
               throw std::out_of_range("cell index out of range");
             return g.cells[static_cast<size_t>(i1) * n2 + i2];
           },
           py::arg("i1"), py::arg("i2"), py::return_value_policy::reference_internal)
      .def("write_csv",
           [](const GridResult& g, const std::string& path) {
             write_grid_csv(g, path);
           },
           py::arg("path"))
      .def("render_pgm",
           [](const GridResult& g, const std::string& path) {
             render_pgm(g, path);
           },
           py::arg("path"))
      .def(
          "histogram",
          [](const GridResult& g, double bin_width) {
            return histogram_tc(g.cells, bin_width);
          },
          py::arg("bin_width") = 5.0,
          "List of (bin_start, count) pairs over the detected cells.");

  m.def("run_sweep", &run_sweep, py::arg("spec"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>(),
        "Run the detector over every grid cell on a bounded worker pool.");

  m.def("read_grid_csv", &read_grid_csv, py::arg("path"),
        "Load a sweep result written by write_csv.");

  m.def(
      "verify",
      [](const std::string& suite, unsigned seed) {
        const VerifyReport rep = run_verify(suite, seed);
        py::list out;
        for (const auto& c : rep.checks)
          out.append(py::make_tuple(c.name, c.pass, c.worst, c.detail));
        return out;
      },
      py::arg("suite") = "all", py::arg("seed") = 0u,
      "Run a self-check suite; returns (name, passed, worst, detail) tuples.");
}
