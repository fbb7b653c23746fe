"""Smoke test of the Python bindings.

Run with `pytest python/smoke_test.py` or `python3 python/smoke_test.py`
after `pip install --no-build-isolation -e crates/solenoid-py`.
"""

import json
import math
from pathlib import Path

import jsonschema
import mpmath
import pytest

import solenoid

SCHEMA = Path(__file__).resolve().parents[1] / "crates" / "solenoid" / "schema" / "output.schema.json"


def test_landau_ladder():
    cfg = solenoid.FluxConfig.from_mantissa(0.0, 1.3)
    levels = solenoid.ms_spectrum_2d(cfg, lambda0=math.pi / 2, m_s=0.7, l_min=-3, l_max=3, n_max=6)
    assert levels
    for v in levels:
        assert v.energy == pytest.approx(1.3 * (1 + 2 * v.n) / 0.7, rel=1e-12)
    psi = levels[0](0.8, 0.3)
    assert isinstance(psi, complex) and abs(psi) > 0


def test_ab_bound_levels():
    mpmath.mp.dps = 30
    want = float(-4 * mpmath.exp(-2 * mpmath.euler))
    assert solenoid.ab_bound_energy(solenoid.FluxConfig.from_mantissa(0.0), 0, 0.0) == pytest.approx(want, abs=1e-10)
    r2 = solenoid.ab_bound_energy(solenoid.FluxConfig.from_mantissa(0.5), 0, -math.pi / 4)
    assert r2 == pytest.approx(-1.0, abs=1e-10)


def test_ms_radial_levels_are_normalized():
    cfg = solenoid.FluxConfig.from_mantissa(0.3, 1.0)
    (level,) = solenoid.ms_levels(cfg, 0, lam=0.4, m_max=0)
    h = 1e-3
    norm = sum(level((i + 0.5) * h) ** 2 for i in range(int(20 / h))) * h
    assert norm == pytest.approx(1.0, abs=1e-5)


def test_dirac_levels():
    p = solenoid.DiracParams(1.0, 0.0, 1, 0, 0.3, 0.8)
    assert p.region() == "R3"
    with pytest.raises(ValueError):
        solenoid.dirac_levels(p)
    levels = solenoid.dirac_levels(p, lam=math.pi / 2, k_max=3)
    assert all(abs(v.energy) >= 1.0 - 1e-12 for v in levels)
    f, g = levels[0](0.5)
    assert math.isfinite(f) and math.isfinite(g)


def test_angles_and_errors():
    assert solenoid.parse_angle("pi/3") == pytest.approx(math.pi / 3)
    assert solenoid.parse_angle("3pi/4") == pytest.approx(-math.pi / 4)
    cfg = solenoid.FluxConfig.from_mantissa(0.3, 1.0)
    with pytest.raises(ValueError, match="extension parameter"):
        solenoid.ms_levels(cfg, -1)


def test_verify_suite():
    (report,) = solenoid.verify("landau")
    assert report["name"] == "landau" and report["pass"]


def test_cli_json_matches_schema():
    schema = json.loads(SCHEMA.read_text())
    runs = [
        ["--format", "json", "spectrum", "--mu", "0.3", "--lambda0", "0.4", "--lambda-1", "pi/5"],
        ["--format", "json", "spectrum", "--problem", "dirac", "--mu", "0.2", "--lambda0", "0.1"],
        ["--format", "json", "eigenfunction", "--mu", "0", "--lambda0", "0.2", "--channel", "0", "--index", "1"],
        ["--format", "json", "verify", "--suite", "ab-bound"],
    ]
    for args in runs:
        text = solenoid.run_cli(args)
        doc = json.loads(text)
        jsonschema.validate(doc, schema)
        assert doc["data"], args
        assert text == solenoid.run_cli(args)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
