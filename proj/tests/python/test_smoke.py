"""End-to-end smoke tests for the Python bindings."""

import math

import pytest

import ckam


def test_version():
    assert ckam.__version__ == "0.1.0"


def test_psi_values():
    assert ckam.psi(0.0, 0.0, 4) == pytest.approx(4.0, abs=1e-15)
    assert ckam.psi(1.0, 2.0, 5) == pytest.approx(0.45202606681246830, rel=1e-14)


def test_foliation_value_and_gradient():
    fol = ckam.Foliation("s1", ckam.TwoWaveParams(mu=0.02, nu=1.0, k=1.0))
    assert fol.kind == "s1"
    assert fol.value(0.2, 0.7, 0.4) == pytest.approx(-0.13313880262166625, rel=1e-13)
    g = fol.gradient(0.2, 0.7, 0.4)
    assert g[1] == pytest.approx(-0.22236067977499790, rel=1e-13)
    assert not fol.is_singular(0.2, 0.7, 0.4)


def test_detect_regression():
    params = ckam.TwoWaveParams(mu=0.015)
    r = ckam.detect_two_wave(params, "r", q0=0.0, p0=0.5, t0=0.0)
    assert r.status == "detected"
    assert r.t_c == pytest.approx(11.575400549046147, rel=1e-6)
    assert r.n_steps > 0


def test_detect_integrable_and_excluded():
    quiet = ckam.detect_two_wave(ckam.TwoWaveParams(mu=0.0), "r", p0=0.5)
    assert quiet.status == "none"
    assert math.isnan(quiet.t_c)
    on_axis = ckam.detect_two_wave(ckam.TwoWaveParams(mu=0.0), "r", p0=0.0)
    assert on_axis.status == "excluded"
    assert on_axis.t_end == 0.0


def test_detect_trace_and_scale_invariance():
    params = ckam.TwoWaveParams(mu=0.018)
    opts = ckam.DetectorOptions()
    opts.record_trace = True
    r = ckam.detect_two_wave(params, "r", p0=0.48, options=opts)
    assert r.status == "detected"
    assert len(r.trace) == r.n_steps + 1
    t0, k0, _, _, p, _ = r.trace[0]
    assert t0 == 0.0 and k0 == 0.0 and p == 0.48

    opts2 = ckam.DetectorOptions()
    opts2.xi0_scale = 42.0
    r2 = ckam.detect_two_wave(params, "r", p0=0.48, options=opts2)
    assert r2.t_c == pytest.approx(r.t_c, abs=1e-9)


def test_detect_q_flow():
    params = ckam.QFlowParams(q=4, eps=0.05)
    flagged = ckam.detect_q_flow(params, "ql", x0=2.5, y0=2.5, z0=0.0)
    assert flagged.status == "detected"
    surviving = ckam.detect_q_flow(params, "qpsi", x0=2.5, y0=2.5, z0=0.0)
    assert surviving.status == "none"


def test_poincare_section_free_flow():
    pts = ckam.poincare_section(
        ckam.TwoWaveParams(mu=0.0), q0=0.0, p0=0.5, t0=0.0, n_crossings=5
    )
    assert [i for i, _, _ in pts] == [0, 1, 2, 3, 4]
    for i, q, p in pts:
        gap = abs(q - (0.5 * i) % 1.0)
        assert min(gap, 1.0 - gap) < 1e-9  # circle distance: 1-eps equals 0
        assert p == pytest.approx(0.5, abs=1e-12)


def test_ftle_closed_form():
    lam = ckam.ftle_two_wave(ckam.TwoWaveParams(mu=0.0), p0=0.5, T=150.0)
    expected = math.log(math.sqrt(1.0 + 150.0**2)) / 150.0
    assert lam == pytest.approx(expected, abs=1e-9)


def test_sweep_round_trip(tmp_path):
    spec = ckam.GridSpec()
    spec.model = "twowave"
    spec.foliation = "r"
    spec.axis1 = ckam.AxisSpec("mu", 0.0, 0.03, 3)
    spec.axis2 = ckam.AxisSpec("p0", 0.05, 1.0, 3)
    spec.ic_line = "p0"
    g = ckam.run_sweep(spec, workers=2)
    assert len(g.statuses) == 9
    assert set(g.statuses) <= {"detected", "none", "excluded", "error"}
    assert "error" not in g.statuses

    csv_path = tmp_path / "grid.csv"
    g.write_csv(str(csv_path))
    text = csv_path.read_text()
    assert text.startswith("axis1,axis2,status,t_c\n")
    again = ckam.read_grid_csv(str(csv_path))
    assert again.statuses == g.statuses

    pgm_path = tmp_path / "grid.pgm"
    g.render_pgm(str(pgm_path))
    assert pgm_path.read_bytes().startswith(b"P5\n3 3\n255\n")

    hist = g.histogram(bin_width=5.0)
    detected = sum(1 for s in g.statuses if s == "detected")
    assert sum(count for _, count in hist) == detected


def test_axis_value_endpoints():
    axis = ckam.AxisSpec("mu", 0.0, 0.03, 4)
    assert ckam.axis_value(axis, 0) == 0.0
    assert ckam.axis_value(axis, 3) == 0.03


def test_errors_are_python_exceptions():
    with pytest.raises(ValueError):
        ckam.Foliation("s3", ckam.TwoWaveParams())
    with pytest.raises(ValueError):
        ckam.detect_two_wave(ckam.TwoWaveParams(), "ql")


def test_verify_forms_suite():
    checks = ckam.verify("forms", seed=0)
    assert checks, "suite should produce at least one check"
    for name, passed, worst, _ in checks:
        assert passed, f"{name} failed with worst={worst}"
