"""Relation lattices of lifted configurations and negative-support combinatorics."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import FrozenSet, List, Sequence, Tuple

from ._linalg import IntegerSystem, IntVec, hermite_rows, rank
from .geometry import LatticeConfig

ExponentVector = Tuple[Fraction, ...]

DEFAULT_SEARCH_RADIUS = 50


@dataclass(frozen=True)
class RelationLattice:
    """Integer relations ``l`` with ``sum_i l_i a_i = 0``.

    The basis is the Hermite normal form taken from the right: each row's last
    nonzero entry is positive, and rows are ordered by decreasing pivot column.
    """

    N: int
    basis: Tuple[IntVec, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def element(self, coeffs: Sequence[int]) -> IntVec:
        out = [0] * self.N
        for c, b in zip(coeffs, self.basis):
            if c:
                out = [x + c * y for x, y in zip(out, b)]
        return tuple(out)

    def elements(self, bound: int) -> List[Tuple[IntVec, IntVec]]:
        """``(coefficients, element)`` pairs with coefficients in ``[-bound, bound]``."""
        rng = range(-bound, bound + 1)
        return [(c, self.element(c)) for c in itertools.product(rng, repeat=self.rank)]


def as_exponent(v: Sequence) -> ExponentVector:
    return tuple(Fraction(x) for x in v)


@lru_cache(maxsize=None)
def _system(lifted: Tuple[IntVec, ...]) -> IntegerSystem:
    rows = [[a[r] for a in lifted] for r in range(len(lifted[0]))]
    return IntegerSystem(rows)


def integer_system(cfg: LatticeConfig) -> IntegerSystem:
    return _system(cfg.lifted)


def canonical_basis(rows: Sequence[Sequence[int]]) -> Tuple[IntVec, ...]:
    """Canonical lattice basis: Hermite normal form with columns read right to left."""
    rev = [list(reversed(r)) for r in rows]
    return tuple(tuple(reversed(r)) for r in hermite_rows(rev))


def relation_lattice(cfg: LatticeConfig) -> RelationLattice:
    sys_ = integer_system(cfg)
    basis = canonical_basis(sys_.kernel_basis)
    for b in basis:
        if any(cfg.combination(b)):
            raise AssertionError("kernel basis vector is not a relation")
    if len(basis) != cfg.N - rank(cfg.lifted):
        raise AssertionError("relation lattice has the wrong rank")
    return RelationLattice(N=cfg.N, basis=basis)


def _is_neg_int(x: Fraction) -> bool:
    return x.denominator == 1 and x < 0


def nsupp(v: Sequence) -> FrozenSet[int]:
    """Indices where ``v`` is a negative integer."""
    return frozenset(i for i, x in enumerate(as_exponent(v)) if _is_neg_int(x))


def _shifted_nsupp(v: ExponentVector, l: Sequence[int]) -> FrozenSet[int]:
    return frozenset(i for i, (x, y) in enumerate(zip(v, l)) if _is_neg_int(x + y))


def has_minimal_negative_support(v: Sequence, L: RelationLattice,
                                 bound: int = DEFAULT_SEARCH_RADIUS) -> bool:
    """No lattice element in the coefficient window shrinks ``nsupp(v)``.

    Only certified inside the window ``[-bound, bound]^rank``.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    v = as_exponent(v)
    base = nsupp(v)
    if not base:
        return True
    return not any(_shifted_nsupp(v, l) < base for _, l in L.elements(bound))


def lattice_slice_Lv(v: Sequence, L: RelationLattice,
                     bound: int = DEFAULT_SEARCH_RADIUS) -> List[IntVec]:
    """Elements ``l`` in the window with ``nsupp(v + l) == nsupp(v)``, by coefficient order."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    v = as_exponent(v)
    base = nsupp(v)
    return [l for _, l in L.elements(bound) if _shifted_nsupp(v, l) == base]
