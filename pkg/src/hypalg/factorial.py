"""Factorial ratios ``u_k = prod (alpha_i k)! / prod (beta_j k)!`` and p-integrality tools.

Three independent integrality tests are provided and expected to agree:
the interior-point test on ``n * Delta(alpha, beta)``, a direct big-integer
scan, and the classical floor-function (Landau) criterion.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, floor
from typing import Dict, List, Optional, Sequence, Tuple

from ._linalg import IntVec
from .geometry import (
    LatticeConfig,
    _check_balanced,
    config_alpha_beta,
    delta_alpha_beta,
    dilate,
    interior_lattice_points,
)
from .logseries import base_point, closed_form_816, ray_window
from .series import FormalSeries, Window


@dataclass(frozen=True)
class RatioSpec:
    alpha: Tuple[int, ...]
    beta: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(int(b) for b in self.beta))
        _check_balanced(self.alpha, self.beta)

    @classmethod
    def parse(cls, text: str) -> "RatioSpec":
        """``"2;1,1"`` -> alpha = (2,), beta = (1, 1)."""
        try:
            a, b = text.split(";")
            return cls(tuple(map(int, a.split(","))), tuple(map(int, b.split(","))))
        except ValueError as exc:
            raise ValueError(f"cannot parse ratio spec {text!r}: {exc}") from None

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def m(self) -> int:
        return len(self.alpha) + len(self.beta)

    @property
    def algebraic_regime(self) -> bool:
        """``m = 2n + 1``: integrality then forces algebraic solutions."""
        return self.m == 2 * self.n + 1

    def label(self) -> str:
        return ",".join(map(str, self.alpha)) + ";" + ",".join(map(str, self.beta))


def _spec(spec) -> RatioSpec:
    return spec if isinstance(spec, RatioSpec) else RatioSpec(*spec)


def ratio_term(spec, k: int) -> Fraction:
    spec = _spec(spec)
    if k < 0:
        raise ValueError("k must be nonnegative")
    num, den = 1, 1
    for a in spec.alpha:
        num *= factorial(a * k)
    for b in spec.beta:
        den *= factorial(b * k)
    return Fraction(num, den)


def ratio_terms(spec, K: int) -> List[Fraction]:
    """``u_0 .. u_K`` via the term ratio ``u_(k+1) / u_k``."""
    spec = _spec(spec)
    out = [Fraction(1)]
    for k in range(K):
        num, den = 1, 1
        for a in spec.alpha:
            for s in range(1, a + 1):
                num *= a * k + s
        for b in spec.beta:
            for s in range(1, b + 1):
                den *= b * k + s
        out.append(out[-1] * Fraction(num, den))
    return out


def classify_integrality(spec) -> Tuple[bool, Optional[IntVec]]:
    """Integral for all k iff ``n * Delta(alpha, beta)`` has no interior lattice point."""
    spec = _spec(spec)
    P = dilate(delta_alpha_beta(spec.alpha, spec.beta), spec.n)
    pts = interior_lattice_points(P, limit=1)
    return (not pts, pts[0] if pts else None)


def direct_integrality(spec, K: int) -> Tuple[bool, Optional[int]]:
    """Whether ``u_1 .. u_K`` are integers; otherwise the first failing ``k``."""
    if K < 1:
        raise ValueError("K must be >= 1")
    for k, t in enumerate(ratio_terms(spec, K)):
        if t.denominator != 1:
            return False, k
    return True, None


def landau_check(spec, denominator_grid: Optional[Sequence[int]] = None
                 ) -> Tuple[bool, Optional[Fraction]]:
    """``sum floor(alpha_i x) - sum floor(beta_j x) >= 0`` on ``[0, 1)``.

    The step function only changes at ``c/d`` with ``d`` in ``alpha`` or ``beta``,
    so it is scanned there; ``denominator_grid`` adds further denominators.
    """
    spec = _spec(spec)
    dens = set(spec.alpha) | set(spec.beta) | set(denominator_grid or ())
    xs = sorted({Fraction(c, d) for d in dens for c in range(1, d)})
    for x in xs:
        val = sum(floor(a * x) for a in spec.alpha) - sum(floor(b * x) for b in spec.beta)
        if val < 0:
            return False, x
    return True, None


# --------------------------------------------------------------------------
# p-adic tools


def primes_upto(n: int) -> List[int]:
    sieve = [True] * (n + 1)
    out = []
    for p in range(2, n + 1):
        if sieve[p]:
            out.append(p)
            for q in range(p * p, n + 1, p):
                sieve[q] = False
    return out


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def valuation(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of 0")
    x, v = abs(x), 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def is_p_integral(r, p: int) -> bool:
    return Fraction(r).denominator % p != 0


def default_primes(v: Sequence = (), bound: int = 50) -> List[int]:
    """Primes up to ``bound`` not dividing any denominator of ``v``."""
    return [p for p in primes_upto(bound) if all(is_p_integral(x, p) for x in v)]


def dwork_map(r, p: int) -> Fraction:
    """The ``p``-integral ``r'`` in ``(-1, 0]`` with ``p r' - r`` an integer."""
    r = Fraction(r)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not -1 < r <= 0:
        raise ValueError("r must lie in (-1, 0]")
    if not is_p_integral(r, p):
        raise ValueError(f"{r} is not {p}-integral")
    d = r.denominator
    a = -r.numerator
    b = a * pow(p, -1, d) % d
    return Fraction(-b, d)


def dwork_orbit(v: Sequence, p: int, iterations: int) -> List[Tuple[Fraction, ...]]:
    """``v, v', v'', ...`` with ``iterations`` applications of the prime map."""
    cur = tuple(Fraction(x) for x in v)
    out = [cur]
    for _ in range(iterations):
        cur = tuple(dwork_map(x, p) for x in cur)
        out.append(cur)
    return out


def dwork_orbit_check(v: Sequence, cfg: LatticeConfig, p: int, iterations: int) -> bool:
    """Every ``-sum v^(k)_i a_i`` is an interior cone lattice point of the starting degree."""
    v = tuple(Fraction(x) for x in v)
    if not any(v):
        raise ValueError("v = 0 gives no interior point to follow")
    u0 = cfg.combination([-x for x in v])
    if any(x.denominator != 1 for x in u0) or not cfg.cone.is_interior(u0):
        raise ValueError("-sum v_i a_i must be an interior lattice point")
    target = u0[-1]
    for w in dwork_orbit(v, p, iterations)[1:]:
        u = cfg.combination([-x for x in w])
        if any(x.denominator != 1 for x in u):
            return False
        if not cfg.cone.is_interior(u) or u[-1] != target:
            return False
    return True


@dataclass
class PIntegralityReport:
    """Worst denominator valuation per prime over the stored terms of a window."""

    window: Optional[Window]
    per_prime: Dict[int, Tuple[int, Optional[IntVec]]] = field(default_factory=dict)
    non_integral: List[IntVec] = field(default_factory=list)
    terms: int = 0

    @property
    def clean(self) -> bool:
        return all(v == 0 for v, _ in self.per_prime.values())


def p_integrality_report(s: FormalSeries, primes: Sequence[int],
                         window: Optional[Window] = None) -> PIntegralityReport:
    if window is not None:
        s = s.restrict(window)
    rep = PIntegralityReport(window=s.window, terms=len(s.terms))
    worst = {p: (0, None) for p in primes}
    for k in s.offsets():
        c = Fraction(s.terms[k])
        if c.denominator != 1:
            rep.non_integral.append(k)
        for p in primes:
            if c.denominator % p == 0:
                val = valuation(c.denominator, p)
                if val > worst[p][0]:
                    worst[p] = (val, k)
    rep.per_prime = worst
    return rep


def series_83(alpha: Sequence[int], beta: Sequence[int], lmax: int) -> FormalSeries:
    """The log-free solution at ``u0`` on the ray ``l <= lmax``; coefficients are ``+-u_l``."""
    return closed_form_816(alpha, beta, base_point(alpha, beta), ray_window(alpha, beta, lmax))


def conjecture_816_report(alpha: Sequence[int], beta: Sequence[int], u: Sequence[int],
                          window: Window, primes: Optional[Sequence[int]] = None
                          ) -> PIntegralityReport:
    """Integrality scan of the explicit log-free series at an interior ``u``.

    Evidence only: the scan covers the stored window and nothing more.
    """
    spec = RatioSpec(alpha, beta)
    if spec.m <= 2 * spec.n:
        raise ValueError("requires m > 2n")
    if not classify_integrality(spec)[0]:
        raise ValueError("n * Delta(alpha, beta) has interior lattice points")
    s = closed_form_816(alpha, beta, u, window)
    return p_integrality_report(s, primes if primes is not None else primes_upto(50))

