import json
import math

import numpy as np
import pytest

from teichkit import io
from teichkit.config import ConfigError, RunConfig, load_config
from teichkit.curves import HolomorphicCurve
from teichkit.disk_maps import DiskMap, Mobius, PolynomialMap, RationalMap
from teichkit.operators import BersPoint, ChiPoint, OneDifferential, QuadDifferential
from teichkit.surface_atlas import default_atlas, make_config
from teichkit.verify import tangent_disks
from teichkit.welding import CircleMap, ExteriorMap, weld


def round_trip(obj):
    return io.from_json(json.loads(io.dumps(obj)))


def test_disk_map_round_trip_and_bare_form():
    f = DiskMap([1.0, 0.2 - 0.1j], rho=1.5, tail=1e-9)
    g = round_trip(f)
    assert np.array_equal(g.coeffs, f.coeffs) and g.rho == 1.5 and g.tail == 1e-9
    bare = io.from_json({"rho": 1.25, "coeffs": [1, [0.2, 0.0]]})
    assert isinstance(bare, DiskMap) and np.allclose(bare.coeffs, [1, 0.2])


@pytest.mark.parametrize("obj", [
    OneDifferential([0.1, 0.2j]),
    QuadDifferential([1.0]),
    ChiPoint(OneDifferential([0.4]), 1 + 1j),
    BersPoint(QuadDifferential([-0.24]), 0.2),
    CircleMap([0.0, -0.05j]),
    ExteriorMap(1.0, 0.1j, [0.01]),
    Mobius(1, 0, -1, 1),
    PolynomialMap([0, 1, 0.5]),
    RationalMap([0, 1], [1, -0.5], rho=1.5),
])
def test_round_trips_preserve_json(obj):
    text = io.dumps(obj)
    assert io.dumps(round_trip(obj)) == text


def test_structured_round_trips():
    for obj in (HolomorphicCurve.constant_q(DiskMap([0.2]), OneDifferential([0.0, 1.0]), 0.5),
                tangent_disks(1e-3), make_config([0, 1j, math.inf]), weld(CircleMap([0.0, 0.01]))):
        text = io.dumps(obj)
        assert io.dumps(round_trip(obj)) == text


def test_tuple_from_config():
    d = {"kind": "tuple", "config": {"points": [0, "inf"]}, "maps": [{"rho": 1.25, "coeffs": [0.3]}] * 2}
    tup = io.from_json(d)
    assert all(a.same_as(b) for a, b in zip(tup.charts, default_atlas(make_config([0, math.inf]))))


def test_parse_errors():
    with pytest.raises(io.ParseError, match="line 2, column"):
        io.loads('{"coeffs": [1,\n ]}')
    with pytest.raises(io.ParseError, match="missing field"):
        io.from_json({"kind": "chi_point", "coeffs": [1]})
    with pytest.raises(io.ParseError, match="expected"):
        io.from_json({"kind": "disk_map", "coeffs": ["a"]})
    with pytest.raises(io.ParseError, match="unknown kind"):
        io.from_json({"kind": "banana"})
    with pytest.raises(io.ParseError):
        io.from_json({"rho": 1.25, "coeffs": [1]}, expect="circle_map")
    with pytest.raises(io.ParseError):
        io.from_json({"kind": "config", "points": [0, 0]})


def test_load_reports_path(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{\n  \"coeffs\": [1,,]\n}\n")
    with pytest.raises(io.ParseError, match=r"bad\.json: line 2"):
        io.load(p)
    with pytest.raises(io.ParseError, match="missing.json"):
        io.load(tmp_path / "missing.json")


def test_dumps_is_deterministic_and_clean():
    a = io.dumps({"b": np.float64(1.5), "a": [np.inf, np.nan, 1 + 2j, np.bool_(True), np.int64(3)]})
    assert a == io.dumps({"a": [math.inf, math.nan, 1 + 2j, True, 3], "b": 1.5})
    assert a.endswith("\n") and json.loads(a)["a"] == ["inf", "nan", [1.0, 2.0], True, 3]


def test_run_config_defaults_and_validation():
    cfg = RunConfig()
    assert cfg.N == 64 and cfg.grid.size == cfg.grid.nodes.size
    assert cfg.updated(N=None, seed=3).seed == 3
    for bad in ({"N": 4}, {"N": 8.5}, {"norm_tol": 0}, {"grid_angles": 0}, {"fd_step": -1.0}):
        with pytest.raises(ConfigError):
            RunConfig(**bad)


def test_load_config_toml_and_json(tmp_path):
    t = tmp_path / "run.toml"
    t.write_text('N = 32\nseed = 7\nout = "results"\n')
    cfg = load_config(t)
    assert (cfg.N, cfg.seed, cfg.out) == (32, 7, "results")
    j = tmp_path / "run.json"
    j.write_text(json.dumps(cfg.as_dict()))
    assert load_config(j) == cfg
    bad = tmp_path / "bad.toml"
    bad.write_text("N = 32\ncolour = 'red'\n")
    with pytest.raises(ConfigError, match="colour"):
        load_config(bad)
    broken = tmp_path / "broken.toml"
    broken.write_text("N = = 3\n")
    with pytest.raises(ConfigError):
        load_config(broken)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.toml")
