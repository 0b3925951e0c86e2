"""JSON encodings for configurations, polytopes, series and relation bases.

Rationals are always written as ``"p/q"`` strings so files round-trip exactly.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, List, Sequence

from .geometry import HPolytope, LatticeConfig, lift_config
from .logseries import LogPolynomial
from .relations import RelationLattice
from .series import FormalSeries, Window


class FormatError(ValueError):
    pass


def frac_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s, where: str = "value") -> Fraction:
    try:
        return Fraction(s) if isinstance(s, (int, str)) else Fraction(str(s))
    except (ValueError, ZeroDivisionError, TypeError):
        raise FormatError(f"{where}: cannot read {s!r} as a rational") from None


def _require(obj: Dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"{where}: missing field {key!r}")
    return obj[key]


def _int_list(xs, where: str) -> List[int]:
    if not isinstance(xs, list) or not all(isinstance(x, int) and not isinstance(x, bool)
                                           for x in xs):
        raise FormatError(f"{where}: expected a list of integers")
    return list(xs)


# configurations


def config_to_json(cfg: LatticeConfig) -> Dict[str, Any]:
    return {"m": cfg.m, "points": [list(p) for p in cfg.points]}


def config_from_json(obj: Dict[str, Any]) -> LatticeConfig:
    m = _require(obj, "m", "config")
    pts = _require(obj, "points", "config")
    if not isinstance(pts, list) or not pts:
        raise FormatError("config.points: expected a nonempty list")
    rows = [_int_list(p, f"config.points[{i}]") for i, p in enumerate(pts)]
    for i, p in enumerate(rows):
        if len(p) != m:
            raise FormatError(f"config.points[{i}]: expected {m} coordinates, got {len(p)}")
    return lift_config(rows)


# polytopes


def polytope_to_json(P: HPolytope) -> Dict[str, Any]:
    return {
        "facets": [{"normal": list(n), "offset": c} for n, c in P.facets],
        "vertices": [[frac_str(x) for x in v] for v in P.vertices],
    }


def polytope_from_json(obj: Dict[str, Any]) -> HPolytope:
    facets = []
    for i, f in enumerate(_require(obj, "facets", "polytope")):
        n = _int_list(_require(f, "normal", f"facets[{i}]"), f"facets[{i}].normal")
        c = _require(f, "offset", f"facets[{i}]")
        facets.append((tuple(n), int(c)))
    verts = tuple(tuple(parse_frac(x, f"vertices[{i}]") for x in v)
                  for i, v in enumerate(_require(obj, "vertices", "polytope")))
    dim = len(facets[0][0]) if facets else 0
    return HPolytope(dim=dim, facets=tuple(facets), vertices=verts)


# series


def window_to_json(w: Window) -> Dict[str, Any]:
    return {"lo": list(w.lo), "hi": list(w.hi)}


def window_from_json(obj: Dict[str, Any]) -> Window:
    return Window(tuple(_int_list(_require(obj, "lo", "window"), "window.lo")),
                  tuple(_int_list(_require(obj, "hi", "window"), "window.hi")))


def series_to_json(s: FormalSeries) -> Dict[str, Any]:
    """Series terms in offset order; log coefficients expand to one entry per log monomial."""
    terms = []
    for k in s.offsets():
        c = s.terms[k]
        if isinstance(c, LogPolynomial):
            for e in sorted(c.coeffs):
                terms.append({"k": list(k), "coeff": frac_str(c.coeffs[e]), "log_exps": list(e)})
        else:
            terms.append({"k": list(k), "coeff": frac_str(c)})
    return {"base": [frac_str(x) for x in s.base], "terms": terms,
            "window": window_to_json(s.window)}


def series_from_json(obj: Dict[str, Any]) -> FormalSeries:
    base = tuple(parse_frac(x, "series.base") for x in _require(obj, "base", "series"))
    window = window_from_json(_require(obj, "window", "series"))
    raw = _require(obj, "terms", "series")
    has_logs = any("log_exps" in t for t in raw)
    terms: Dict[tuple, Any] = {}
    for i, t in enumerate(raw):
        k = tuple(_int_list(_require(t, "k", f"terms[{i}]"), f"terms[{i}].k"))
        c = parse_frac(_require(t, "coeff", f"terms[{i}]"), f"terms[{i}].coeff")
        if has_logs:
            e = tuple(_int_list(t.get("log_exps", [0] * len(base)), f"terms[{i}].log_exps"))
            poly = LogPolynomial.monomial(e, c)
            terms[k] = terms[k] + poly if k in terms else poly
        else:
            terms[k] = terms.get(k, Fraction(0)) + c
    return FormalSeries(base, terms, window)


# relation bases


def lattice_to_json(L: RelationLattice) -> List[List[int]]:
    return [list(b) for b in L.basis]


def lattice_from_json(rows: Sequence[Sequence[int]]) -> RelationLattice:
    basis = tuple(tuple(_int_list(list(r), f"basis[{i}]")) for i, r in enumerate(rows))
    if not basis:
        raise FormatError("basis: empty")
    return RelationLattice(N=len(basis[0]), basis=basis)


# files


def load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def dumps(obj: Any) -> str:
    """Deterministic JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
