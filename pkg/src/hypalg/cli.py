"""``hypalg`` command line: polytope, series, logsolve, ratio and sweep reports.

Reports are JSON with sorted keys (or markdown with ``--markdown``), carry the
exact windows and bounds used, and the exit status is 0 only when every
verification in the report passed.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

from . import io
from .factorial import (
    RatioSpec,
    classify_integrality,
    default_primes,
    direct_integrality,
    dwork_orbit_check,
    is_prime,
    landau_check,
    p_integrality_report,
    primes_upto,
    ratio_term,
    series_83,
)
from .geometry import (
    LatticeConfig,
    config_alpha_beta,
    dilate,
    interior_lattice_points,
)
from .logseries import (
    SequenceP,
    base_point,
    closed_form_816,
    combine_solution,
    decomposition,
    log_free_part,
    quasisolution,
    ray_window,
)
from .relations import has_minimal_negative_support, relation_lattice
from .series import (
    Window,
    a_family,
    construct_v,
    psi_mns_series,
    specialize,
    thm66_shift,
    verify_box_euler,
    verify_K_family,
)


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    window: int = 10
    degree: Optional[int] = None
    primes: Optional[List[int]] = None
    out: Optional[str] = None
    markdown: bool = False
    extra: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("--window must be positive")
        if self.degree is not None and self.degree < 1:
            raise ValueError("--degree must be positive")
        for p in self.primes or ():
            if not is_prime(p):
                raise ValueError(f"--primes: {p} is not prime")


@dataclass
class Report:
    """Structured results plus the list of verifications they rest on."""

    command: str
    bounds: Dict[str, Any]
    results: Dict[str, Any] = field(default_factory=dict)
    checks: List[Dict[str, Any]] = field(default_factory=list)

    def check(self, name: str, passed: bool, **detail) -> bool:
        self.checks.append({"name": name, "passed": bool(passed), **detail})
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self) -> Dict[str, Any]:
        return {"command": self.command, "bounds": self.bounds, "results": self.results,
                "checks": self.checks, "passed": self.passed}


# --------------------------------------------------------------------------
# helpers


def _ints(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _fracs(xs: Iterable) -> List[str]:
    return [io.frac_str(x) for x in xs]


def _verification(rep) -> Dict[str, Any]:
    return {"checks": rep.checks, "terms_compared": rep.terms_compared,
            "residuals": len(rep.residuals),
            "valid_window": io.window_to_json(rep.valid_window) if rep.valid_window else None}


def _config(cfg: RunConfig) -> LatticeConfig:
    if cfg.extra.get("alpha") is not None:
        return config_alpha_beta(_ints(cfg.extra["alpha"]), _ints(cfg.extra["beta"]))
    if not cfg.input:
        raise ValueError("--input (or --alpha/--beta) is required")
    return io.config_from_json(io.load_json(cfg.input))


def _first_interior(cfg: LatticeConfig, max_degree: int = 12):
    for k in range(1, max_degree + 1):
        pts = interior_lattice_points(dilate(cfg.polytope, k), limit=1)
        if pts:
            return tuple(pts[0]) + (k,)
    raise ValueError(f"no interior lattice point in k*Delta for k <= {max_degree}")


def _workers() -> int:
    cap = os.environ.get("HYPALG_THREADS")
    n = os.cpu_count() or 1
    return max(1, min(n, int(cap))) if cap else n


def _pmap(fn: Callable, items: Sequence) -> List:
    """Ordered map, run in a process pool when more than one worker is allowed."""
    w = _workers()
    if w == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=w) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * w))))


# --------------------------------------------------------------------------
# commands


def cmd_polytope(cfg: RunConfig) -> Report:
    conf = _config(cfg)
    d = cfg.degree or 3
    P = conf.polytope
    rep = Report("polytope", {"degree": d})
    counts, witness = {}, {}
    for k in range(1, d + 1):
        pts = interior_lattice_points(dilate(P, k))
        counts[str(k)] = len(pts)
        witness[str(k)] = list(pts[0]) if pts else None
    rep.results = {"config": io.config_to_json(conf), "polytope": io.polytope_to_json(P),
                   "interior_counts": counts, "first_interior": witness}
    return rep


def cmd_series(cfg: RunConfig) -> Report:
    conf = _config(cfg)
    L = relation_lattice(conf)
    W = cfg.window
    if cfg.extra.get("u"):
        u0 = tuple(_ints(cfg.extra["u"]))
        if len(u0) == conf.m:
            u0 = u0 + (_degree_of(conf, u0),)
    else:
        u0 = _first_interior(conf)
    subset = _ints(cfg.extra["subset"]) if cfg.extra.get("subset") else None
    v = construct_v(conf, u0, subset)
    rep = Report("series", {"window_l": W, "degree": cfg.degree})
    minimal = has_minimal_negative_support(v, L)
    rep.check("minimal_negative_support", minimal, search_radius=50)
    if L.rank == 1:
        window = Window.around_line(L.basis[0], -W, W)
    else:
        window = Window.cube(conf.N, W)
    s = psi_mns_series(v, conf, L, window)
    vr = verify_box_euler(s, [-x for x in u0], conf, L)
    rep.check("box_euler", vr.passed, **_verification(vr))
    primes = cfg.primes if cfg.primes is not None else default_primes(v)
    pr = p_integrality_report(s, primes)
    rep.check("p_integrality", pr.clean, primes=primes,
              worst={str(p): [val, list(k) if k else None] for p, (val, k) in pr.per_prime.items()})
    rep.results = {"relation_basis": io.lattice_to_json(L), "u0": list(u0), "v": _fracs(v),
                   "series": io.series_to_json(s)}
    if cfg.degree:
        vp, u1, beta = thm66_shift(v, conf)
        span = max(abs(x) for b in L.basis for x in b) * W
        fam = a_family(vp, beta, conf, L, cfg.degree, Window.cube(conf.N, span))
        kr = verify_K_family(fam, conf, L)
        rep.check("K_family", kr.passed, members=len(fam.members), **_verification(kr))
        prod = Fraction(1)
        for x in v:
            if x < 0:
                prod *= x
        target = u0
        same = s.equals(fam.members[target].scale(prod)) if target in fam.members else False
        rep.check("psi_equals_scaled_family_member", same, member=list(target))
        rep.results["shift"] = {"v_shifted": _fracs(vp), "u1": list(u1), "beta": list(beta)}
    return rep


def _degree_of(conf: LatticeConfig, u: Sequence[int]) -> int:
    if not any(u):
        return 0
    for k in range(1, 64):
        if dilate(conf.polytope, k).contains(u):
            return k
    raise ValueError(f"{tuple(u)} is not in any dilation k*Delta with k < 64")


def cmd_logsolve(cfg: RunConfig) -> Report:
    alpha, beta = _ints(cfg.extra["alpha"]), _ints(cfg.extra["beta"])
    spec = RatioSpec(alpha, beta)
    conf = config_alpha_beta(alpha, beta)
    L = relation_lattice(conf)
    W = cfg.window
    window = ray_window(alpha, beta, W)
    u0 = base_point(alpha, beta)
    mu = tuple(-x for x in u0)
    rep = Report("logsolve", {"window_l": W, "window": io.window_to_json(window)})
    P0 = tuple(range(spec.n + 1))
    psi0 = quasisolution(P0, mu, conf, L, window)
    closed = closed_form_816(alpha, beta, u0, window)
    rep.check("closed_form_equals_quasisolution", log_free_part(psi0).equals(closed),
              P=list(P0), terms=len(closed.terms))
    coeffs = specialize(closed, L.basis[0])
    sign = -1 if (1 + sum(alpha)) % 2 else 1
    ratio = [ratio_term(spec, l) for l in range(len(coeffs))]
    rep.check("reproduces_ratio_series", [c * sign ** l for l, c in enumerate(coeffs)] == ratio,
              l_max=len(coeffs) - 1)
    rep.results["closed_form"] = io.series_to_json(closed)
    for text in cfg.extra.get("P") or []:
        P = SequenceP.of(_ints(text))
        q = quasisolution(P, mu, conf, L, window)
        rearr = sorted(P.items) == list(P0)
        entry = {"P": list(P.items), "terms": len(q.terms), "zero": q.is_zero()}
        if spec.m > 2 * spec.n and P.r == spec.n + 1 and not rearr:
            rep.check(f"zero_quasisolution{list(P.items)}", q.is_zero())
        if P.r <= 2:
            rep.check(f"decomposition{list(P.items)}",
                      q.equals(decomposition(P, mu, conf, L, window)))
        rep.results.setdefault("quasisolutions", []).append(entry)
    r = cfg.extra.get("combine", 2)
    ls = [L.basis[0]] * r
    comb = combine_solution(ls, mu, conf, L, window)
    vr = verify_box_euler(comb, mu, conf, L)
    rep.check(f"combination_r{r}", vr.passed, **_verification(vr))
    rep.results["combination"] = {"r": r, "terms": len(comb.terms)}
    return rep


def ratio_report(spec: RatioSpec, K: int = 120, lmax: Optional[int] = None,
                 primes: Optional[Sequence[int]] = None) -> Dict[str, Any]:
    poly, witness = classify_integrality(spec)
    direct, first_bad = direct_integrality(spec, K)
    landau, bad_x = landau_check(spec)
    out = {
        "spec": {"alpha": list(spec.alpha), "beta": list(spec.beta)},
        "integral": poly,
        "witness": list(witness) if witness else None,
        "oracles": {"polytope": poly, "direct": direct, "landau": landau},
        "direct_first_failure": first_bad,
        "landau_failure": io.frac_str(bad_x) if bad_x is not None else None,
        "agree": poly == direct == landau,
        "algebraic_regime": spec.algebraic_regime,
        "K": K,
    }
    if lmax is not None and poly and spec.m > 2 * spec.n:
        ps = list(primes) if primes is not None else primes_upto(50)
        pr = p_integrality_report(series_83(spec.alpha, spec.beta, lmax), ps)
        out["p_integrality"] = {"l_max": lmax, "clean": pr.clean,
                                "worst": {str(p): v for p, (v, _) in pr.per_prime.items()}}
    return out


def _sweep_specs(max_sum: int, max_n: int, max_extra: int) -> List[RatioSpec]:
    def parts(s: int, k: int, mx: int):
        if s == 0:
            yield ()
            return
        if k == 0:
            return
        for x in range(min(s, mx), 0, -1):
            for rest in parts(s - x, k - 1, x):
                yield (x,) + rest

    return [RatioSpec(a, b) for s in range(1, max_sum + 1)
            for a in parts(s, max_n, s) for b in parts(s, max_extra, s)]


def _sweep_one(args) -> Dict[str, Any]:
    spec, K = args
    return ratio_report(spec, K)


def cmd_ratio(cfg: RunConfig) -> Report:
    action = cfg.extra.get("action", "check")
    K = cfg.extra.get("K", 120)
    if action == "check":
        spec = RatioSpec(_ints(cfg.extra["alpha"]), _ints(cfg.extra["beta"]))
        rep = Report("ratio check", {"K": K, "window_l": cfg.window})
        res = ratio_report(spec, K, cfg.window, cfg.primes)
        rep.check("oracles_agree", res["agree"])
        if "p_integrality" in res:
            rep.check("p_integrality", res["p_integrality"]["clean"])
        rep.results = res
        return rep
    ms, mn, mx = cfg.extra.get("max_sum", 10), cfg.extra.get("max_n", 2), cfg.extra.get("max_extra", 4)
    specs = _sweep_specs(ms, mn, mx)
    rows = _pmap(_sweep_one, [(s, K) for s in specs])
    rep = Report("ratio sweep", {"max_sum": ms, "max_n": mn, "max_extra": mx, "K": K})
    bad = [r["spec"] for r in rows if not r["agree"]]
    rep.check("oracles_agree_all", not bad, specs=len(rows), disagreements=bad)
    rep.results = {"specs": rows, "integral": sum(r["integral"] for r in rows)}
    return rep


def _prime_one(args) -> Dict[str, Any]:
    conf, v, s, p, iters = args
    orbit = dwork_orbit_check(v, conf, p, iters)
    pr = p_integrality_report(s, [p])
    val, where = pr.per_prime[p]
    return {"p": p, "orbit_ok": orbit, "max_valuation": val,
            "offending": list(where) if where else None}


def cmd_sweep(cfg: RunConfig) -> Report:
    """Prime sweep for one configuration: Dwork orbits and p-integrality of ``Psi_v``."""
    conf = _config(cfg)
    L = relation_lattice(conf)
    u0 = tuple(_ints(cfg.extra["u"])) if cfg.extra.get("u") else _first_interior(conf)
    if len(u0) == conf.m:
        u0 = u0 + (_degree_of(conf, u0),)
    subset = _ints(cfg.extra["subset"]) if cfg.extra.get("subset") else None
    v = construct_v(conf, u0, subset)
    W = cfg.window
    window = Window.around_line(L.basis[0], -W, W) if L.rank == 1 else Window.cube(conf.N, W)
    s = psi_mns_series(v, conf, L, window)
    primes = cfg.primes if cfg.primes is not None else default_primes(v)
    iters = cfg.extra.get("iterations", 10)
    rows = _pmap(_prime_one, [(conf, v, s, p, iters) for p in primes])
    rep = Report("sweep", {"window_l": W, "iterations": iters, "primes": primes})
    for r in rows:
        rep.check(f"p={r['p']}", r["orbit_ok"] and r["max_valuation"] == 0)
    rep.results = {"u0": list(u0), "v": _fracs(v), "primes": rows}
    return rep


COMMANDS = {"polytope": cmd_polytope, "series": cmd_series, "logsolve": cmd_logsolve,
            "ratio": cmd_ratio, "sweep": cmd_sweep}


# --------------------------------------------------------------------------
# rendering and entry point


def to_markdown(obj: Any, title: str = "Report", depth: int = 1) -> str:
    lines = [f"{'#' * min(depth, 6)} {title}", ""]

    def emit(x, indent):
        pad = "  " * indent
        if isinstance(x, dict):
            for k in sorted(x):
                val = x[k]
                if isinstance(val, (dict, list)) and val:
                    lines.append(f"{pad}- **{k}**:")
                    emit(val, indent + 1)
                else:
                    lines.append(f"{pad}- **{k}**: {val}")
        elif isinstance(x, list):
            flat = [y for y in x if isinstance(y, dict)
                    and all(not isinstance(z, dict) for z in y.values())]
            if x and len(flat) == len(x):
                cols = sorted({k for y in x for k in y})
                lines.append(f"{pad}| " + " | ".join(cols) + " |")
                lines.append(f"{pad}|" + "---|" * len(cols))
                for y in x:
                    lines.append(f"{pad}| " + " | ".join(str(y.get(c, "")) for c in cols) + " |")
            elif all(not isinstance(y, (dict, list)) for y in x):
                lines.append(f"{pad}- {x}")
            else:
                for y in x:
                    if isinstance(y, dict):
                        lines.append(f"{pad}-")
                        emit(y, indent + 1)
                    else:
                        lines.append(f"{pad}- {y}")
        else:
            lines.append(f"{pad}- {x}")

    emit(obj, 0)
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="configuration JSON {\"m\": .., \"points\": [[..], ..]}")
    common.add_argument("--window", type=int, default=10, help="series bound in lattice steps")
    common.add_argument("--degree", type=int, help="degree bound d")
    common.add_argument("--primes", help="comma separated primes")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--markdown", action="store_true", help="render markdown instead of JSON")

    ab = argparse.ArgumentParser(add_help=False)
    ab.add_argument("--alpha", help="comma separated alpha")
    ab.add_argument("--beta", help="comma separated beta")

    pt = argparse.ArgumentParser(add_help=False)
    pt.add_argument("--u", help="interior point u (m coordinates, or m+1 with degree)")
    pt.add_argument("--subset", help="indices of the m+1 points used to build v")

    parser = argparse.ArgumentParser(prog="hypalg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("polytope", parents=[common, ab], help="H-representation and interior counts")
    sub.add_parser("series", parents=[common, ab, pt], help="series solution and its checks")
    lg = sub.add_parser("logsolve", parents=[common, ab], help="logarithmic machinery")
    lg.add_argument("--P", action="append", help="sequence P, comma separated; repeatable")
    lg.add_argument("--combine", type=int, default=2, help="order r of the combination")
    ra = sub.add_parser("ratio", parents=[common, ab], help="factorial ratio integrality")
    ra.add_argument("action", choices=["check", "sweep"])
    ra.add_argument("--K", type=int, default=120, help="direct check bound")
    ra.add_argument("--max-sum", type=int, default=10)
    ra.add_argument("--max-n", type=int, default=2)
    ra.add_argument("--max-extra", type=int, default=4)
    sw = sub.add_parser("sweep", parents=[common, ab, pt], help="prime sweep for a configuration")
    sw.add_argument("--iterations", type=int, default=10)
    return parser


def _run_config(ns: argparse.Namespace) -> RunConfig:
    extra = {k: v for k, v in vars(ns).items()
             if k not in {"command", "input", "window", "degree", "primes", "out", "markdown"}}
    if (extra.get("alpha") is None) != (extra.get("beta") is None):
        raise ValueError("--alpha and --beta go together")
    primes = _ints(ns.primes) if ns.primes else None
    return RunConfig(command=ns.command, input=ns.input, window=ns.window, degree=ns.degree,
                     primes=primes, out=ns.out, markdown=ns.markdown, extra=extra)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _run_config(ns)
        if cfg.command in ("logsolve",) or (cfg.command == "ratio" and ns.action == "check"):
            if cfg.extra.get("alpha") is None:
                raise ValueError("--alpha and --beta are required")
        rep = COMMANDS[cfg.command](cfg)
    except (ValueError, IndexError, OSError) as exc:
        print(f"hypalg: error: {exc}", file=sys.stderr)
        return 2
    payload = rep.to_json()
    text = to_markdown(payload, f"hypalg {rep.command}") if cfg.markdown else io.dumps(payload)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
