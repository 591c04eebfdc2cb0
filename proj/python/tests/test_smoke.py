import math
from fractions import Fraction

import pytest

import pfaffdist as pd


def test_component_bound():
    assert pd.component_bound(1, 3, 1, 1) == 24


def test_parallel_lines_histogram():
    cfg = pd.generate("parallel", 4, 4)
    assert cfg.is_exact
    hist = pd.distance_histogram(cfg)
    assert [m for _, m in hist] == [4, 6, 4, 2]
    assert pd.energy(cfg) == 72
    assert pd.proximity_energy(cfg, 0.25) == 40
    assert pd.count_incidences(cfg, 0.25) == 40


def test_bounds_report_is_exact():
    rep = pd.bounds_report(2, 2, 2, 8)
    assert rep["cs_lower"] == Fraction(8)
    assert rep["cs_satisfied"]


def test_custom_configuration_and_errors():
    cfg = pd.PointConfiguration.make([(0, 0), (1, 0)], [(0, 1), (1, 1)])
    assert cfg.m == 2 and cfg.n == 2
    with pytest.raises(pd.PfaffdistError):
        pd.PointConfiguration.make([(0, 0), (0, 1)], [(2, 2)])
    with pytest.raises(pd.PfaffdistError):
        pd.generate("triangle", 2, 2)


def test_isometry_algebra():
    h1 = pd.Isometry.rotation((0, 0), math.pi / 2)
    h2 = pd.Isometry.rotation((1, 0), math.pi / 2)
    vx, vy = pd.rotation_commutator(h1, h2)
    assert abs(vx) < 1e-12 and abs(vy - 2) < 1e-12
    assert pd.classify(pd.compose(h1, pd.inverse(h1))) == "identity"
    assert pd.classify(pd.Isometry((0, -1, 1, 0), (2, 0))).startswith("rotation center 1 1")
    direct, reflected = pd.rigid_motions_mapping((0, 0), (1, 0), (0, 0), (0, 1))
    x, y = reflected((1, 0))
    assert abs(x) < 1e-12 and abs(y - 1) < 1e-12


def test_symmetries():
    lines = pd.detect_symmetries("cubic")
    assert len(lines) == 2
    assert any(s.startswith("rotation") for s in lines)
    assert pd.detect_symmetries("circle")[0] == "infinite family: circle"


def test_log_circles():
    p, q = pd.gen_log_circles(m=8, n=8, scheme="geometric")
    assert pd.log_circle_invariant(p, q) < 1e-9
    assert pd.distinct_distances_3d(p, q) <= 15


def test_sweep(tmp_path):
    res = pd.run_sweep("parallel", [8, 16, 32], out=tmp_path)
    assert [r["distinct"] for r in res["rows"]] == [8, 16, 32]
    assert abs(res["exponent"] - 1) < 0.05
    assert (tmp_path / "report.csv").exists()
    assert (tmp_path / "loglog.svg").exists()
