"""Truncated formal series ``sum_k c_k lambda^(v+k)`` and the operators acting on them.

A series carries a box ``Window`` of integer offsets inside which it is
complete: every nonzero term of the infinite series whose offset lies in the
window is stored. Operators move windows along with the terms, and binary
operations keep only the intersection, so every reported residual is exact.

Coefficients are ``Fraction`` or any object with the same arithmetic plus a
``dlog(i)`` method (see ``logseries.LogPolynomial``); the derivation applies
the product rule to such log parts.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ._linalg import IntVec, solve
from .geometry import LatticeConfig, cone_sections
from .relations import (
    DEFAULT_SEARCH_RADIUS,
    ExponentVector,
    RelationLattice,
    as_exponent,
    has_minimal_negative_support,
    integer_system,
    nsupp,
)


class BracketError(ValueError):
    """``[z]_k`` is undefined: ``z`` is a negative integer and ``k >= -z``."""


class WindowError(ValueError):
    pass


# --------------------------------------------------------------------------
# bracket symbols


def pochhammer(a, k: int) -> Fraction:
    """Rising factorial ``a (a+1) ... (a+k-1)``."""
    if k < 0:
        raise ValueError("pochhammer needs k >= 0")
    a = Fraction(a)
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def _is_structural_zero(z: Fraction, k: int) -> bool:
    # z in Z_{>=0} and the falling product z (z-1) ... (z+k+1) passes through 0
    return z.denominator == 1 and z >= 0 and k <= -z - 1


def bracket(z, k: int) -> Fraction:
    z = Fraction(z)
    if k == 0:
        return Fraction(1)
    if k > 0:
        if z.denominator == 1 and z < 0 and k >= -z:
            raise BracketError(f"[{z}]_{k} is undefined")
        return 1 / pochhammer(z + 1, k)
    out = Fraction(1)
    for i in range(-k):
        out *= z - i
    return out


def bracket_vec(v: Sequence, k: Sequence[int]) -> Fraction:
    """Product of scalar brackets; zero as soon as one factor is structurally zero."""
    v = as_exponent(v)
    if any(_is_structural_zero(z, ki) for z, ki in zip(v, k)):
        return Fraction(0)
    out = Fraction(1)
    for z, ki in zip(v, k):
        out *= bracket(z, ki)
    return out


# --------------------------------------------------------------------------
# windows and series


@dataclass(frozen=True)
class Window:
    """Box ``lo <= k <= hi`` of integer offsets."""

    lo: IntVec
    hi: IntVec

    @classmethod
    def cube(cls, N: int, radius: int) -> "Window":
        return cls(tuple([-radius] * N), tuple([radius] * N))

    @classmethod
    def around_line(cls, gamma: Sequence[int], lmin: int, lmax: int,
                    origin: Optional[Sequence[int]] = None) -> "Window":
        """Bounding box of ``origin + l*gamma`` for ``lmin <= l <= lmax``."""
        origin = origin or [0] * len(gamma)
        lo = tuple(o + min(lmin * g, lmax * g) for o, g in zip(origin, gamma))
        hi = tuple(o + max(lmin * g, lmax * g) for o, g in zip(origin, gamma))
        return cls(lo, hi)

    def shift(self, delta: Sequence[int]) -> "Window":
        return Window(tuple(a + d for a, d in zip(self.lo, delta)),
                      tuple(a + d for a, d in zip(self.hi, delta)))

    def intersect(self, other: "Window") -> "Window":
        return Window(tuple(map(max, self.lo, other.lo)), tuple(map(min, self.hi, other.hi)))

    def contains(self, k: Sequence[int]) -> bool:
        return all(a <= x <= b for a, x, b in zip(self.lo, k, self.hi))

    @property
    def empty(self) -> bool:
        return any(a > b for a, b in zip(self.lo, self.hi))


@dataclass(frozen=True)
class FormalSeries:
    base: ExponentVector
    terms: Mapping[IntVec, object]
    window: Window

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: c for k, c in self.terms.items() if c})

    @property
    def N(self) -> int:
        return len(self.base)

    def coefficient(self, k: Sequence[int]):
        return self.terms.get(tuple(k), Fraction(0))

    def offsets(self) -> List[IntVec]:
        return sorted(self.terms)

    def restrict(self, window: Window) -> "FormalSeries":
        w = self.window.intersect(window)
        return FormalSeries(self.base, {k: c for k, c in self.terms.items() if w.contains(k)}, w)

    def rebase(self, new_base: Sequence) -> "FormalSeries":
        """Same series with offsets measured from ``new_base``."""
        new_base = as_exponent(new_base)
        delta = [a - b for a, b in zip(self.base, new_base)]
        if any(d.denominator != 1 for d in delta):
            raise ValueError("bases differ by a non-integral vector")
        delta = [int(d) for d in delta]
        terms = {tuple(a + d for a, d in zip(k, delta)): c for k, c in self.terms.items()}
        return FormalSeries(new_base, terms, self.window.shift(delta))

    def scale(self, s) -> "FormalSeries":
        return FormalSeries(self.base, {k: c * s for k, c in self.terms.items()}, self.window)

    def _combine(self, other: "FormalSeries", sign: int) -> "FormalSeries":
        other = other.rebase(self.base) if other.base != self.base else other
        w = self.window.intersect(other.window)
        terms: Dict[IntVec, object] = {}
        for k, c in self.terms.items():
            if w.contains(k):
                terms[k] = c
        for k, c in other.terms.items():
            if w.contains(k):
                terms[k] = terms[k] + c * sign if k in terms else c * sign
        return FormalSeries(self.base, terms, w)

    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        return self._combine(other, 1)

    def __sub__(self, other: "FormalSeries") -> "FormalSeries":
        return self._combine(other, -1)

    def is_zero(self) -> bool:
        return not self.terms

    def equals(self, other: "FormalSeries") -> bool:
        """Exact term-by-term equality on the common window."""
        return (self - other).is_zero()

    def exponents(self) -> Dict[Tuple[Fraction, ...], object]:
        return {tuple(b + x for b, x in zip(self.base, k)): c for k, c in self.terms.items()}


LogSeries = FormalSeries


def constant_series(N: int, c=1, window: Optional[Window] = None) -> FormalSeries:
    return FormalSeries(tuple([Fraction(0)] * N), {tuple([0] * N): Fraction(c)},
                        window or Window.cube(N, 0))


# --------------------------------------------------------------------------
# offsets and the basic series families


def solve_offsets(cfg: LatticeConfig, u: Sequence[int], L: RelationLattice,
                  window: Window) -> List[IntVec]:
    """All integer ``k`` in ``window`` with ``sum_i k_i a_i = u``, lexicographically sorted."""
    k0 = integer_system(cfg).particular(u)
    if k0 is None or window.empty:
        return []
    basis = L.basis
    r = len(basis)
    N = cfg.N
    # last nonzero column of each (right-handed Hermite) basis row, decreasing
    piv = [max(t for t in range(N) if b[t]) for b in basis]
    out: List[IntVec] = []

    def rec(j: int, s: List[int]) -> None:
        if j == r:
            if window.contains(s):
                out.append(tuple(s))
            return
        b = basis[j]
        nxt = piv[j + 1] if j + 1 < r else -1
        lo_c, hi_c = None, None
        for t in range(nxt + 1, N):
            lo_t, hi_t = window.lo[t] - s[t], window.hi[t] - s[t]
            if b[t] == 0:
                if lo_t > 0 or hi_t < 0:
                    return
                continue
            a, c = Fraction(lo_t, b[t]), Fraction(hi_t, b[t])
            if b[t] < 0:
                a, c = c, a
            a, c = ceil(a), floor(c)
            lo_c = a if lo_c is None else max(lo_c, a)
            hi_c = c if hi_c is None else min(hi_c, c)
        if lo_c is None:
            raise WindowError("window does not bound the lattice enumeration")
        for cj in range(lo_c, hi_c + 1):
            rec(j + 1, [x + cj * y for x, y in zip(s, b)])

    if r == 0:
        return [k0] if window.contains(k0) else []
    rec(0, list(k0))
    out.sort()
    return out


def phi_series(v: Sequence, u: Sequence[int], cfg: LatticeConfig, L: RelationLattice,
               window: Window) -> FormalSeries:
    """``sum_{sum k_i a_i = u} [v]_k lambda^(v+k)`` truncated to ``window``."""
    v = as_exponent(v)
    terms = {k: bracket_vec(v, k) for k in solve_offsets(cfg, u, L, window)}
    return FormalSeries(v, terms, window)


def euler_param(v: Sequence, cfg: LatticeConfig) -> Tuple[Fraction, ...]:
    """``sum_i v_i a_i``: the parameter of the Euler operators a series built on ``v`` meets."""
    return cfg.combination(as_exponent(v))


@dataclass(frozen=True)
class SolutionFamily:
    """Candidate element ``sum_u A_u x^(-u)`` of the solution space, truncated in degree."""

    beta: IntVec
    v: ExponentVector
    members: Mapping[IntVec, FormalSeries]
    degree: int


def a_family(v: Sequence, beta: Sequence[int], cfg: LatticeConfig, L: RelationLattice,
             d: int, window: Window) -> SolutionFamily:
    """``A_u = Phi_{v, -beta-u}`` for every cone lattice point ``u`` of degree <= d."""
    v = as_exponent(v)
    beta = tuple(int(b) for b in beta)
    if euler_param(v, cfg) != beta:
        raise ValueError("sum_i v_i a_i must equal beta")
    members = {}
    for u in cone_sections(cfg, d).members:
        target = tuple(-b - x for b, x in zip(beta, u))
        members[u] = phi_series(v, target, cfg, L, window)
    return SolutionFamily(beta=beta, v=v, members=members, degree=d)


def psi_mns_series(v: Sequence, cfg: LatticeConfig, L: RelationLattice, window: Window,
                   bound: int = DEFAULT_SEARCH_RADIUS) -> FormalSeries:
    """``sum_{l in L_v} [v]_l lambda^(v+l)`` for ``v`` of minimal negative support."""
    v = as_exponent(v)
    if not has_minimal_negative_support(v, L, bound):
        raise ValueError("v does not have minimal negative support")
    base = nsupp(v)
    terms = {}
    for l in solve_offsets(cfg, [0] * (cfg.m + 1), L, window):
        if nsupp([x + y for x, y in zip(v, l)]) == base:
            terms[l] = bracket_vec(v, l)
    return FormalSeries(v, terms, window)


def construct_v(cfg: LatticeConfig, u0: Sequence[int],
                subset: Optional[Iterable[int]] = None) -> ExponentVector:
    """Write ``-u0`` as ``sum v_i a_i`` over ``m+1`` independent points with ``v_i in [-1, 0]``.

    Without ``subset`` the (m+1)-subsets are tried in lexicographic order.
    """
    u0 = tuple(int(x) for x in u0)
    size = cfg.m + 1
    if subset is not None:
        candidates = [tuple(sorted(subset))]
        if len(candidates[0]) != size:
            raise ValueError(f"subset must have {size} elements")
    else:
        candidates = itertools.combinations(range(cfg.N), size)
    for sub in candidates:
        cols = [cfg.lifted[i] for i in sub]
        w = solve([[c[r] for c in cols] for r in range(size)], u0)
        if w is None:
            if subset is not None:
                raise ValueError("chosen points are linearly dependent")
            continue
        if all(0 <= x <= 1 for x in w):
            v = [Fraction(0)] * cfg.N
            for i, x in zip(sub, w):
                v[i] = -x
            return tuple(v)
        if subset is not None:
            raise ValueError("u0 is not in the cone of the chosen points with weights <= 1")
    raise ValueError("no admissible subset")


def thm66_shift(v: Sequence, cfg: LatticeConfig):
    """Shift negative entries down by one: returns ``(v', u1, beta)``.

    ``u1`` is the sum of the ``a_i`` with ``v_i < 0`` and ``beta = sum v'_i a_i``.
    """
    v = as_exponent(v)
    if any(not (-1 < x <= 0) for x in v):
        raise ValueError("entries of v must lie in (-1, 0]")
    vp = tuple(x - 1 if x < 0 else x for x in v)
    u1 = cfg.combination([1 if x < 0 else 0 for x in v])
    beta = tuple(int(x) for x in euler_param(vp, cfg))
    return vp, u1, beta


# --------------------------------------------------------------------------
# operators


def _dlog(c, i: int):
    f = getattr(c, "dlog", None)
    return f(i) if f is not None else None


def apply_derivation(s: FormalSeries, j: int) -> FormalSeries:
    """``d/d lambda_j``; the window moves down by one along axis ``j``."""
    terms: Dict[IntVec, object] = {}
    for k, c in s.terms.items():
        nk = k[:j] + (k[j] - 1,) + k[j + 1:]
        val = c * (s.base[j] + k[j])
        extra = _dlog(c, j)
        if extra is not None:
            val = val + extra
        terms[nk] = val
    step = tuple(-int(t == j) for t in range(s.N))
    return FormalSeries(s.base, terms, s.window.shift(step))


def apply_derivations(s: FormalSeries, counts: Sequence[int]) -> FormalSeries:
    for j, c in enumerate(counts):
        for _ in range(c):
            s = apply_derivation(s, j)
    return s


def apply_euler(s: FormalSeries, param: Sequence, cfg: LatticeConfig) -> Tuple[FormalSeries, ...]:
    """The ``m+1`` operators ``sum_j a_j lambda_j d_j - param``, one series per row."""
    rows = []
    for r in range(cfg.m + 1):
        terms = {}
        for k, c in s.terms.items():
            weight = sum(a[r] * (s.base[j] + k[j]) for j, a in enumerate(cfg.lifted)) - param[r]
            val = c * weight
            for j, a in enumerate(cfg.lifted):
                if a[r]:
                    extra = _dlog(c, j)
                    if extra is not None:
                        val = val + extra * a[r]
            terms[k] = val
        rows.append(FormalSeries(s.base, terms, s.window))
    return tuple(rows)


def apply_box(s: FormalSeries, l: Sequence[int]) -> FormalSeries:
    """``prod_{l_j>0} d_j^{l_j} - prod_{l_j<0} d_j^{-l_j}`` applied to ``s``."""
    pos = [max(x, 0) for x in l]
    neg = [max(-x, 0) for x in l]
    return apply_derivations(s, pos) - apply_derivations(s, neg)


# --------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    residuals: Dict[Tuple[str, IntVec], object] = field(default_factory=dict)
    valid_window: Optional[Window] = None
    checks: int = 0
    terms_compared: int = 0

    @property
    def passed(self) -> bool:
        return not self.residuals

    def record(self, op_id: str, diff: FormalSeries, compared: int = 0) -> None:
        self.checks += 1
        self.terms_compared += compared
        for k, c in diff.terms.items():
            self.residuals[(op_id, k)] = c
        self.valid_window = diff.window if self.valid_window is None else \
            self.valid_window.intersect(diff.window)


def check_equal(report: VerificationReport, op_id: str, a: FormalSeries, b: FormalSeries) -> None:
    diff = a - b
    w = diff.window
    compared = len({k for k in a.terms if w.contains(k)} |
                   {k for k in b.rebase(a.base).terms if w.contains(k)})
    report.record(op_id, diff, compared)


def verify_box_euler(s: FormalSeries, param: Sequence, cfg: LatticeConfig, L: RelationLattice,
                     report: Optional[VerificationReport] = None,
                     label: str = "") -> VerificationReport:
    """Box operators for every basis relation and all Euler operators for ``param``."""
    report = report or VerificationReport()
    for idx, l in enumerate(L.basis):
        pos = apply_derivations(s, [max(x, 0) for x in l])
        neg = apply_derivations(s, [max(-x, 0) for x in l])
        check_equal(report, f"{label}box[{idx}]", pos, neg)
    for r, row in enumerate(apply_euler(s, param, cfg)):
        report.record(f"{label}euler[{r}]", row, len(s.terms))
    return report


def verify_K_family(fam: SolutionFamily, cfg: LatticeConfig, L: RelationLattice,
                    window: Optional[Window] = None) -> VerificationReport:
    """Derivative-shift, Euler (parameter ``-u``) and box checks for every member."""
    report = VerificationReport()
    members = {u: (s.restrict(window) if window is not None else s)
               for u, s in fam.members.items()}
    for u, A in members.items():
        for j, a in enumerate(cfg.lifted):
            nxt = tuple(x + y for x, y in zip(u, a))
            if nxt in members:
                check_equal(report, f"shift{u}d{j}", apply_derivation(A, j), members[nxt])
        verify_box_euler(A, tuple(-x for x in u), cfg, L, report, label=f"{u}:")
    return report


# --------------------------------------------------------------------------
# univariate specialisation and polynomial witnesses


def specialize(s: FormalSeries, gamma: Sequence[int], origin: Optional[Sequence[int]] = None,
               t_scale=1) -> List[Fraction]:
    """Collapse terms ``origin + l*gamma`` to ``t^l``; coefficient ``c_l * t_scale^l``.

    ``origin`` defaults to the stored term with the smallest ``l``. Terms must
    all lie on that line with ``l >= 0``.
    """
    if not s.terms:
        return []
    gamma = tuple(gamma)
    piv = next(i for i, g in enumerate(gamma) if g)
    offs = s.offsets()
    if origin is None:
        origin = min(offs, key=lambda k: Fraction(k[piv], gamma[piv]))
    origin = tuple(origin)
    coeffs: Dict[int, object] = {}
    for k in offs:
        d = [a - b for a, b in zip(k, origin)]
        l, rem = divmod(d[piv], gamma[piv])
        if rem or any(x != l * g for x, g in zip(d, gamma)) or l < 0:
            raise ValueError(f"term {k} is not on the line origin + l*gamma, l >= 0")
        coeffs[l] = s.terms[k]
    t_scale = Fraction(t_scale)
    return [coeffs.get(l, Fraction(0)) * t_scale ** l for l in range(max(coeffs) + 1)]


def _mul_trunc(a: Sequence[Fraction], b: Sequence[Fraction], K: int) -> List[Fraction]:
    out = [Fraction(0)] * (K + 1)
    for i, x in enumerate(a[:K + 1]):
        if x:
            for j, y in enumerate(b[:K + 1 - i]):
                out[i + j] += x * y
    return out


def verify_polynomial_relation(coeffs: Sequence, witness: Mapping[Tuple[int, int], object],
                               K: Optional[int] = None) -> bool:
    """Whether ``P(t, y(t)) = 0 mod t^(K+1)`` for ``P = sum c_ij t^i y^j``.

    ``coeffs`` are the first terms of ``y``; ``K`` defaults to ``len(coeffs) - 1``.
    """
    y = [Fraction(c) for c in coeffs]
    K = len(y) - 1 if K is None else K
    if K >= len(y):
        raise ValueError("not enough coefficients of y for the requested order")
    total = [Fraction(0)] * (K + 1)
    maxj = max((j for _, j in witness), default=0)
    powers = [[Fraction(1)] + [Fraction(0)] * K]
    for _ in range(maxj):
        powers.append(_mul_trunc(powers[-1], y, K))
    for (i, j), c in witness.items():
        c = Fraction(c)
        for n in range(K + 1 - i):
            total[n + i] += c * powers[j][n]
    return not any(total)
