"""Logarithmic quasisolutions built from the one-variable functions ``f^(r)_k``.

``f^(r)_k(t) = t^k * sum_i M[k, i] r(r-1)...(r-i+1) log^(r-i) t`` is the unique
family with ``f^(r)_0 = log^r t`` and ``d/dt f^(r)_k = f^(r)_(k-1)``. Products
of these over the points of a configuration give quasisolutions; suitable
linear combinations of quasisolutions solve the full system.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from ._linalg import IntVec
from .geometry import LatticeConfig, config_alpha_beta
from .relations import RelationLattice
from .series import FormalSeries, Window, solve_offsets


class LogPolynomial:
    """``sum_e c_e prod_i log^(e_i) lambda_i`` with rational ``c_e``."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs: Mapping[IntVec, object] = ()):
        self.N = N
        self.coeffs: Dict[IntVec, Fraction] = {}
        for e, c in dict(coeffs).items():
            c = Fraction(c)
            if c:
                self.coeffs[tuple(e)] = c

    @classmethod
    def constant(cls, N: int, c=1) -> "LogPolynomial":
        return cls(N, {tuple([0] * N): c})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "LogPolynomial":
        return cls(len(exps), {tuple(exps): c})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, LogPolynomial):
            return self.coeffs == other.coeffs
        if not other:
            return not self.coeffs
        return self.coeffs == {tuple([0] * self.N): Fraction(other)}

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self) -> str:
        return f"LogPolynomial({self.coeffs!r})"

    def _coerce(self, other) -> "LogPolynomial":
        return other if isinstance(other, LogPolynomial) else LogPolynomial.constant(self.N, other)

    def __add__(self, other) -> "LogPolynomial":
        other = self._coerce(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LogPolynomial(self.N, out)

    __radd__ = __add__

    def __neg__(self) -> "LogPolynomial":
        return LogPolynomial(self.N, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other) -> "LogPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LogPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LogPolynomial":
        if isinstance(other, LogPolynomial):
            out: Dict[IntVec, Fraction] = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, 0) + c1 * c2
            return LogPolynomial(self.N, out)
        s = Fraction(other)
        return LogPolynomial(self.N, {e: c * s for e, c in self.coeffs.items()})

    __rmul__ = __mul__

    def dlog(self, i: int) -> "LogPolynomial":
        """Formal derivative in the symbol ``log lambda_i``."""
        out = {}
        for e, c in self.coeffs.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return LogPolynomial(self.N, out)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.coeffs)

    def constant_term(self) -> Fraction:
        return self.coeffs.get(tuple([0] * self.N), Fraction(0))


# --------------------------------------------------------------------------
# one-variable building blocks


def _complete_homogeneous(xs: Sequence[Fraction], i: int) -> Fraction:
    h = [Fraction(1)] + [Fraction(0)] * i
    for x in xs:
        for d in range(1, i + 1):
            h[d] += x * h[d - 1]
    return h[i]


def _elementary(xs: Sequence[Fraction], i: int) -> Fraction:
    e = [Fraction(1)] + [Fraction(0)] * i
    for x in xs:
        for d in range(i, 0, -1):
            e[d] += x * e[d - 1]
    return e[i]


@lru_cache(maxsize=None)
def m_coeff(k: int, i: int) -> Fraction:
    """``M[k, i]``; the weight of ``log^(r-i)`` in ``f^(r)_k`` up to a falling factorial."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    if k == 0:
        return Fraction(int(i == 0))
    if k > 0:
        # (-1)^i / k! * sum over compositions j_1+..+j_k = i of prod s^(-j_s)
        recips = [Fraction(1, s) for s in range(1, k + 1)]
        return (-1) ** i * _complete_homogeneous(recips, i) / factorial(k)
    n = -k
    if i == 0 or i > n:
        return Fraction(0)
    # (-1)^(n-i) (n-1)! * sum over j_1 < .. < j_(i-1) in [1, n-1] of 1/(j_1...j_(i-1))
    recips = [Fraction(1, s) for s in range(1, n)]
    return (-1) ** (n - i) * factorial(n - 1) * _elementary(recips, i - 1)


def _falling(r: int, i: int) -> int:
    out = 1
    for s in range(i):
        out *= r - s
    return out


def f_poly(r: int, k: int) -> Dict[int, Fraction]:
    """``f^(r)_k(t) / t^k`` as ``{power of log t: coefficient}``."""
    if r < 0:
        raise ValueError("order must be nonnegative")
    out = {}
    for i in range(r + 1):
        c = m_coeff(k, i) * _falling(r, i)
        if c:
            out[r - i] = c
    return out


# --------------------------------------------------------------------------
# sequences P and quasisolutions


@dataclass(frozen=True)
class SequenceP:
    """A sequence of point indices; only its multiplicities matter for the series."""

    items: Tuple[int, ...]

    @classmethod
    def of(cls, items: Iterable[int]) -> "SequenceP":
        return cls(tuple(sorted(int(x) for x in items)))

    @property
    def r(self) -> int:
        return len(self.items)

    def rho(self, N: int) -> Tuple[int, ...]:
        cnt = Counter(self.items)
        if any(not 0 <= p < N for p in cnt):
            raise IndexError("sequence entry out of range")
        return tuple(cnt.get(i, 0) for i in range(N))


def lemma87_filter(P: SequenceP | Sequence[int], k: Sequence[int]) -> bool:
    """True when the term ``lambda^k`` is forced to vanish: ``rho_P(i) = 0`` and ``k_i < 0``."""
    P = P if isinstance(P, SequenceP) else SequenceP.of(P)
    rho = P.rho(len(k))
    return any(r == 0 and x < 0 for r, x in zip(rho, k))


def _log_factor(N: int, i: int, rho_i: int, k_i: int) -> LogPolynomial:
    out = {}
    for power, c in f_poly(rho_i, k_i).items():
        e = [0] * N
        e[i] = power
        out[tuple(e)] = c
    return LogPolynomial(N, out)


def quasisolution(P: SequenceP | Sequence[int], u: Sequence[int], cfg: LatticeConfig,
                  L: RelationLattice, window: Window) -> FormalSeries:
    """``Psi^P_u``: sum over ``sum k_i a_i = u`` of ``prod_i f^(rho_P(i))_(k_i)(lambda_i)``."""
    P = P if isinstance(P, SequenceP) else SequenceP.of(P)
    N = cfg.N
    rho = P.rho(N)
    zero = tuple([Fraction(0)] * N)
    terms = {}
    for k in solve_offsets(cfg, u, L, window):
        if lemma87_filter(P, k):
            continue
        coeff = LogPolynomial.constant(N)
        for i in range(N):
            coeff = coeff * _log_factor(N, i, rho[i], k[i])
            if not coeff:
                break
        terms[k] = coeff
    return FormalSeries(zero, terms, window)


def phiQ_series(Q: SequenceP | Sequence[int], u: Sequence[int], cfg: LatticeConfig,
                L: RelationLattice, window: Window) -> FormalSeries:
    """Log-free component ``sum (prod_i M[k_i, rho_Q(i)]) lambda^k``."""
    Q = Q if isinstance(Q, SequenceP) else SequenceP.of(Q)
    rho = Q.rho(cfg.N)
    terms = {}
    for k in solve_offsets(cfg, u, L, window):
        c = Fraction(1)
        for ki, ri in zip(k, rho):
            c *= m_coeff(ki, ri)
            if not c:
                break
        terms[k] = c
    return FormalSeries(tuple([Fraction(0)] * cfg.N), terms, window)


def attach_logs(s: FormalSeries, exps: Sequence[int]) -> FormalSeries:
    """Multiply every coefficient by ``prod_i log^(exps_i) lambda_i``."""
    mono = LogPolynomial.monomial(exps)
    return FormalSeries(s.base, {k: mono * c for k, c in s.terms.items()}, s.window)


def decomposition(P: SequenceP | Sequence[int], u: Sequence[int], cfg: LatticeConfig,
                  L: RelationLattice, window: Window) -> FormalSeries:
    """Rebuild ``Psi^P_u`` from the log-free series ``Phi^Q_u``, ``Q`` a subsequence of ``P``.

    Subsequences sharing a multiplicity function ``rho`` are grouped; there are
    ``prod_i rho_P(i) (rho_P(i) - 1) ... (rho_P(i) - rho(i) + 1)`` of them.
    """
    P = P if isinstance(P, SequenceP) else SequenceP.of(P)
    N = cfg.N
    rho_P = P.rho(N)
    total = FormalSeries(tuple([Fraction(0)] * N), {}, window)
    for rho in itertools.product(*(range(r + 1) for r in rho_P)):
        count = 1
        for a, b in zip(rho_P, rho):
            count *= _falling(a, b)
        Q = SequenceP.of(i for i, c in enumerate(rho) for _ in range(c))
        phi = phiQ_series(Q, u, cfg, L, window)
        exps = [a - b for a, b in zip(rho_P, rho)]
        total = total + attach_logs(phi, exps).scale(count)
    return total


def _in_lattice(l: Sequence[int], cfg: LatticeConfig) -> bool:
    return len(l) == cfg.N and not any(cfg.combination(l))


def combine_solution(ls: Sequence[Sequence[int]], u: Sequence[int], cfg: LatticeConfig,
                     L: RelationLattice, window: Window) -> FormalSeries:
    """``sum_{P in [N]^r} l1[p1] ... lr[pr] Psi^P_u`` for relations ``l1..lr``."""
    for l in ls:
        if not _in_lattice(l, cfg):
            raise ValueError(f"{tuple(l)} is not a relation of the configuration")
    N = cfg.N
    weights: Dict[Tuple[int, ...], Fraction] = {}
    for P in itertools.product(range(N), repeat=len(ls)):
        w = Fraction(1)
        for l, p in zip(ls, P):
            w *= l[p]
            if not w:
                break
        if w:
            key = tuple(sorted(P))
            weights[key] = weights.get(key, 0) + w
    total = FormalSeries(tuple([Fraction(0)] * N), {}, window)
    for key in sorted(weights):
        if weights[key]:
            total = total + quasisolution(SequenceP(key), u, cfg, L, window).scale(weights[key])
    return total


def log_free_part(s: FormalSeries) -> FormalSeries:
    """Rational series when every log coefficient is constant; raises otherwise."""
    terms = {}
    for k, c in s.terms.items():
        if isinstance(c, LogPolynomial):
            if not c.is_constant():
                raise ValueError(f"term {k} carries logarithms")
            c = c.constant_term()
        terms[k] = c
    return FormalSeries(s.base, terms, s.window)


def closed_form_816(alpha: Sequence[int], beta: Sequence[int], u: Sequence[int],
                    window: Window) -> FormalSeries:
    """Explicit log-free solution attached to an interior cone point ``u``.

    Sums over ``k`` with ``k_0..k_n < 0``, ``k_(n+1)..k_(m+1) >= 0`` and
    ``sum k_i a_i = -u`` of
    ``(-1)^(n+1-sum_{i<=n} k_i) prod_{i<=n} (-k_i-1)! / prod_{j>n} k_j!``.
    """
    n, m = len(alpha), len(alpha) + len(beta)
    if m <= 2 * n:
        raise ValueError("requires m > 2n")
    cfg = config_alpha_beta(alpha, beta)
    u = tuple(int(x) for x in u)
    if not cfg.cone.is_interior(u):
        raise ValueError(f"{u} is not an interior lattice point of the cone")
    from .relations import relation_lattice

    L = relation_lattice(cfg)
    terms = {}
    for k in solve_offsets(cfg, [-x for x in u], L, window):
        if any(x >= 0 for x in k[: n + 1]) or any(x < 0 for x in k[n + 1:]):
            continue
        num = 1
        for x in k[: n + 1]:
            num *= factorial(-x - 1)
        den = 1
        for x in k[n + 1:]:
            den *= factorial(x)
        sign = -1 if (n + 1 - sum(k[: n + 1])) % 2 else 1
        terms[k] = Fraction(sign * num, den)
    return FormalSeries(tuple([Fraction(0)] * cfg.N), terms, window)


def base_point(alpha: Sequence[int], beta: Sequence[int]) -> IntVec:
    """``u0 = a_0 + a_1 + ... + a_n``: the interior point of degree ``n+1``."""
    n, m = len(alpha), len(alpha) + len(beta)
    return tuple([1] * n + [0] * (m - n) + [n + 1])


def ray_window(alpha: Sequence[int], beta: Sequence[int], lmax: int, lmin: int = -2) -> Window:
    """Box around ``(-1, -1, .., -1, 0, .., 0) + l*gamma`` for ``lmin <= l <= lmax``."""
    n = len(alpha)
    gamma = (-1,) + tuple(-a for a in alpha) + tuple(beta) + (1,)
    origin = [-1] * (n + 1) + [0] * (len(gamma) - n - 1)
    return Window.around_line(gamma, lmin, lmax, origin=origin)
