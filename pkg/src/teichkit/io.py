"""JSON (de)serialization of every object the command line reads or writes.

Complex numbers are ``[re, im]`` pairs; the point at infinity and an
unbounded curve domain are the string ``"inf"``.  Objects carry a
``"kind"`` tag; a bare ``{"rho", "coeffs"}`` object is a disk map.
"""

import json
import math
from pathlib import Path

import numpy as np

from .curves import HolomorphicCurve
from .disk_maps import DiskMap, Mobius, PolynomialMap, RationalMap
from .operators import BersPoint, ChiPoint, OneDifferential, QuadDifferential
from .surface_atlas import INF, LocalChart, NonOverlappingTuple, default_atlas, is_inf, make_config
from .welding import CircleMap, ExteriorMap, WeldingPair


class ParseError(ValueError):
    """Malformed input; the message names the file and, for JSON syntax errors, the line."""


def complex_list(values):
    return [[float(np.real(v)), float(np.imag(v))] for v in np.atleast_1d(values)]


def parse_complex(v, where="value"):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ParseError(f"{where}: expected a number or [re, im], got {v!r}")


def parse_complex_list(vs, where="coeffs"):
    if not isinstance(vs, list):
        raise ParseError(f"{where}: expected a list")
    return np.array([parse_complex(v, f"{where}[{i}]") for i, v in enumerate(vs)], dtype=complex)


def _point(p):
    return "inf" if is_inf(p) else complex_list([p])[0]


def _parse_point(v, where):
    if v == "inf":
        return INF
    return parse_complex(v, where)


def _real(v):
    return "inf" if math.isinf(v) else float(v)


def _parse_real(v, where):
    if v == "inf":
        return math.inf
    if not isinstance(v, (int, float)):
        raise ParseError(f"{where}: expected a number")
    return float(v)


# ----------------------------------------------------------------- encode


def to_json(obj):
    if isinstance(obj, DiskMap):
        return {"kind": "disk_map", "rho": float(obj.rho), "coeffs": complex_list(obj.coeffs),
                "tail": float(obj.tail)}
    if isinstance(obj, RationalMap):
        return {"kind": "rational_map", "rho": float(obj.rho),
                "num": complex_list(obj.num), "den": complex_list(obj.den)}
    if isinstance(obj, (OneDifferential, QuadDifferential)):
        return {"kind": obj.kind, "coeffs": complex_list(obj.coeffs)}
    if isinstance(obj, ChiPoint):
        return {"kind": obj.kind, "coeffs": complex_list(obj.one.coeffs), "c": complex_list([obj.c])[0]}
    if isinstance(obj, BersPoint):
        return {"kind": obj.kind, "coeffs": complex_list(obj.quad.coeffs), "c": complex_list([obj.c])[0]}
    if isinstance(obj, CircleMap):
        return {"kind": "circle_map", "modes": obj.modes, "u_coeffs": complex_list(obj.u_coeffs)}
    if isinstance(obj, ExteriorMap):
        return {"kind": "exterior_map", "b": obj.b, "b0": complex_list([obj.b0])[0],
                "coeffs": complex_list(obj.coeffs)}
    if isinstance(obj, WeldingPair):
        return {"kind": "welding_pair", "m": float(obj.m), "f": to_json(obj.f), "g": to_json(obj.g),
                "info": obj.info}
    if isinstance(obj, Mobius):
        return {"kind": "mobius", "coeffs": complex_list([obj.a, obj.b, obj.c, obj.d])}
    if isinstance(obj, PolynomialMap):
        return {"kind": "polynomial_map", "coeffs": complex_list(obj.coeffs)}
    if isinstance(obj, HolomorphicCurve):
        return {"kind": "curve", "f0": to_json(obj.f0), "phi": to_json(obj.phi),
                "q": complex_list(obj.q), "t_domain": _real(obj.t_domain)}
    if isinstance(obj, LocalChart):
        return {"kind": "chart", "index": obj.index, "point": _point(obj.point),
                "zeta": complex_list([obj.zeta.a, obj.zeta.b, obj.zeta.c, obj.zeta.d]),
                "b_radius": float(obj.b_radius), "k_radius": float(obj.k_radius)}
    if isinstance(obj, NonOverlappingTuple):
        return {"kind": "tuple", "charts": [to_json(c) for c in obj.charts],
                "maps": [to_json(m) for m in obj.maps]}
    if hasattr(obj, "points") and hasattr(obj, "separation"):
        return {"kind": "config", "points": [_point(p) for p in obj.points]}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# ----------------------------------------------------------------- decode


def _need(d, key, kind):
    if key not in d:
        raise ParseError(f"{kind}: missing field {key!r}")
    return d[key]


def _kind_of(d):
    if not isinstance(d, dict):
        raise ParseError("expected a JSON object")
    if "kind" in d:
        return d["kind"]
    if "coeffs" in d and "rho" in d:
        return "disk_map"
    if "points" in d:
        return "config"
    if "u_coeffs" in d:
        return "circle_map"
    raise ParseError("object has no 'kind' tag and is not a disk map, circle map or config")


def from_json(d, expect=None):
    """Decode a parsed JSON object; ``expect`` restricts the accepted kinds."""
    kind = _kind_of(d)
    if expect is not None and kind not in ((expect,) if isinstance(expect, str) else expect):
        raise ParseError(f"expected {expect}, got {kind!r}")
    if kind not in _DECODERS:
        raise ParseError(f"unknown kind {kind!r}")
    try:
        return _DECODERS[kind](d)
    except ParseError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{kind}: {exc}") from exc


def _disk_map(d):
    return DiskMap(parse_complex_list(_need(d, "coeffs", "disk_map")),
                   rho=_parse_real(d.get("rho", 1.25), "rho"),
                   tail=_parse_real(d.get("tail", 0.0), "tail"))


def _chart(d):
    z = parse_complex_list(_need(d, "zeta", "chart"), "zeta")
    if len(z) != 4:
        raise ParseError("chart: zeta needs four coefficients [a, b, c, d]")
    return LocalChart(int(_need(d, "index", "chart")), _parse_point(_need(d, "point", "chart"), "point"),
                      Mobius(*z), _parse_real(_need(d, "b_radius", "chart"), "b_radius"),
                      _parse_real(d.get("k_radius", 0.9), "k_radius"))


def _tuple(d):
    maps = [from_json(m, "disk_map") for m in _need(d, "maps", "tuple")]
    if "charts" in d:
        charts = [from_json(c, "chart") for c in d["charts"]]
    else:
        charts = default_atlas(from_json(_need(d, "config", "tuple"), "config"))
    return NonOverlappingTuple(charts, maps)


_DECODERS = {
    "disk_map": _disk_map,
    "rational_map": lambda d: RationalMap(parse_complex_list(_need(d, "num", "rational_map"), "num"),
                                          parse_complex_list(_need(d, "den", "rational_map"), "den"),
                                          rho=_parse_real(d.get("rho", 1.0), "rho")),
    "one_differential": lambda d: OneDifferential(parse_complex_list(_need(d, "coeffs", "one_differential"))),
    "quad_differential": lambda d: QuadDifferential(parse_complex_list(_need(d, "coeffs", "quad_differential"))),
    "chi_point": lambda d: ChiPoint(OneDifferential(parse_complex_list(_need(d, "coeffs", "chi_point"))),
                                    parse_complex(_need(d, "c", "chi_point"), "c")),
    "bers_point": lambda d: BersPoint(QuadDifferential(parse_complex_list(_need(d, "coeffs", "bers_point"))),
                                      parse_complex(_need(d, "c", "bers_point"), "c")),
    "circle_map": lambda d: CircleMap(parse_complex_list(_need(d, "u_coeffs", "circle_map"), "u_coeffs")),
    "exterior_map": lambda d: ExteriorMap(float(_need(d, "b", "exterior_map")),
                                          parse_complex(d.get("b0", 0.0), "b0"),
                                          parse_complex_list(d.get("coeffs", []))),
    "welding_pair": lambda d: WeldingPair(from_json(_need(d, "f", "welding_pair"), "disk_map"),
                                          from_json(_need(d, "g", "welding_pair"), "exterior_map"),
                                          float(_need(d, "m", "welding_pair")), d.get("info", {})),
    "mobius": lambda d: Mobius(*parse_complex_list(_need(d, "coeffs", "mobius"))),
    "polynomial_map": lambda d: PolynomialMap(parse_complex_list(_need(d, "coeffs", "polynomial_map"))),
    "curve": lambda d: HolomorphicCurve(from_json(_need(d, "f0", "curve"), "disk_map"),
                                        from_json(_need(d, "phi", "curve"), "one_differential"),
                                        parse_complex_list(_need(d, "q", "curve"), "q"),
                                        _parse_real(d.get("t_domain", "inf"), "t_domain")),
    "chart": _chart,
    "tuple": _tuple,
    "config": lambda d: make_config([_parse_point(p, f"points[{i}]")
                                     for i, p in enumerate(_need(d, "points", "config"))]),
}


# ------------------------------------------------------------------ files


def loads(text, source="<string>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load(path, expect=None):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return from_json(loads(text, str(path)), expect)
    except ParseError as exc:
        msg = str(exc)
        raise ParseError(msg if msg.startswith(str(path)) else f"{path}: {msg}") from None


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def dumps(obj):
    """Deterministic JSON text (sorted keys, fixed indentation, trailing newline)."""
    if not isinstance(obj, (dict, list)):
        obj = to_json(obj)
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def dump(obj, path):
    Path(path).write_text(dumps(obj))
