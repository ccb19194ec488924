import json
import math

import pytest

import ringwave as rw


@pytest.fixture(scope="module")
def ring():
    return rw.parse_config("").resolved_ring()


def test_version_string():
    assert rw.__version__.count(".") == 2


def test_junction_law_and_taylor():
    var = rw.Varactor()
    assert rw.capacitance(0.0, var) == pytest.approx(var.c0)
    assert rw.capacitance(1.0, var) == pytest.approx(var.c0 / math.sqrt(1 + 1 / var.vj))
    tc = rw.taylor_coefficients(var)
    assert tc.c1 < 0 < tc.c2
    with pytest.raises(rw.DomainError):
        rw.capacitance(-2.0, var)


def test_calibrated_line_hits_anchors(ring):
    anchors = rw.CalibrationAnchors()
    phase = rw.loaded_phase(anchors.f_beta, ring.cell)
    assert phase.beta_d == pytest.approx(anchors.beta_d, abs=1e-3)
    assert rw.cutoff_frequency(ring.cell) == pytest.approx(anchors.f_cutoff, rel=1e-3)


def test_three_cell_ring_resonances(ring):
    res = rw.find_resonances(ring, 1e9, 6e9)
    kinds = [r.kind for r in res]
    assert kinds == [rw.ResonanceKind.zero, rw.ResonanceKind.pole]
    assert res[0].freq == pytest.approx(2.4e9, rel=5e-3)


def test_coupler_passband_is_ordered():
    lo, hi = rw.passband_edges(rw.CoupledLineSpec())
    assert 0 < lo < math.pi / 2 < hi < math.pi


def test_localization_zero_paths_is_exact():
    v = rw.monte_carlo_variance(2.4e9, 0, 1000, 7)
    assert v.single_band == 0.0 and v.dual_band == 0.0


def test_localization_is_thread_invariant():
    a = rw.monte_carlo_variance(2.4e9, 4, 2000, 3, threads=1)
    b = rw.monte_carlo_variance(2.4e9, 4, 2000, 3, threads=4)
    assert (a.single_band, a.dual_band) == (b.single_band, b.dual_band)


def test_config_round_trip():
    cfg = rw.parse_config("varactor:\n  c0: 3pF\n")
    again = rw.parse_config(rw.emit_config(cfg))
    assert rw.emit_config(again) == rw.emit_config(cfg)
    assert again.resolved_ring().cell.varactor.c0 == pytest.approx(3e-12)


def test_config_errors_name_the_field():
    with pytest.raises(rw.ConfigError, match="varactor.c0"):
        rw.parse_config("varactor: {c0: -1}")
    with pytest.raises(rw.ConfigError, match="nonsense"):
        rw.parse_config("nonsense: 1")


def test_run_command_returns_files():
    files = rw.run("resonances")
    summary = json.loads(files["resonances.json"])
    assert len(summary["zeros"]) == 1 and len(summary["poles"]) == 1
    assert files["impedance.csv"].startswith("freq_hz")
    with pytest.raises(rw.ConfigError):
        rw.run("localize", bogus=1)
