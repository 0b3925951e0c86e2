"""Exact lattice polytopes and cones over point configurations.

Facets are found by brute force over hyperplanes spanned by point subsets, so
this is meant for small configurations (tens of points, dimension up to ~8).
Lattice points are enumerated over an integer bounding box with numpy int64
arithmetic; all facet data are integers so the filtering is exact.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, floor
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ._linalg import IntVec, dot, nullspace, primitive, rank

Facet = Tuple[IntVec, int]

# Largest number of grid points materialised at once during enumeration.
_CHUNK = 1 << 20


class DegenerateError(ValueError):
    """Raised when a point set does not span the expected dimension."""


@dataclass(frozen=True)
class LatticeConfig:
    """Points ``b_i`` in Z^m together with their lifts ``a_i = (b_i, 1)``."""

    m: int
    points: Tuple[IntVec, ...]
    lifted: Tuple[IntVec, ...] = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.points)

    @cached_property
    def polytope(self) -> "HPolytope":
        return convex_hull_hrep(self.points)

    @cached_property
    def cone(self) -> "HCone":
        return cone_hrep(self)

    def combination(self, coeffs: Sequence) -> tuple:
        """``sum_i coeffs[i] * a_i``."""
        return tuple(
            sum(c * a[r] for c, a in zip(coeffs, self.lifted)) for r in range(self.m + 1)
        )


@dataclass(frozen=True)
class HPolytope:
    """Facets ``normal . x <= offset`` plus the vertex list."""

    dim: int
    facets: Tuple[Facet, ...]
    vertices: Tuple[Tuple[Fraction, ...], ...]

    def contains(self, x: Sequence, strict: bool = False) -> bool:
        if strict:
            return all(dot(n, x) < c for n, c in self.facets)
        return all(dot(n, x) <= c for n, c in self.facets)

    def tight(self, x: Sequence) -> List[int]:
        return [i for i, (n, c) in enumerate(self.facets) if dot(n, x) == c]


@dataclass(frozen=True)
class HCone:
    """Facets ``normal . x >= 0`` of the cone spanned by ``generators``."""

    dim: int
    facets: Tuple[IntVec, ...]
    generators: Tuple[IntVec, ...]

    def contains(self, x: Sequence) -> bool:
        return all(dot(n, x) >= 0 for n in self.facets)

    def is_interior(self, x: Sequence) -> bool:
        return all(dot(n, x) > 0 for n in self.facets)


@dataclass(frozen=True)
class GradedLatticePoints:
    degree_bound: int
    members: Tuple[IntVec, ...]
    interior_flags: Tuple[bool, ...]

    def interior(self) -> List[IntVec]:
        return [u for u, f in zip(self.members, self.interior_flags) if f]

    def of_degree(self, d: int) -> List[IntVec]:
        return [u for u in self.members if u[-1] == d]

    def min_interior_degree(self) -> Optional[int]:
        degs = [u[-1] for u in self.interior()]
        return min(degs) if degs else None


def _as_int_points(points: Iterable[Sequence[int]]) -> List[IntVec]:
    pts = [tuple(int(x) for x in p) for p in points]
    if not pts:
        raise DegenerateError("empty point set")
    if len({len(p) for p in pts}) != 1:
        raise ValueError("points have mixed dimensions")
    return pts


def affine_rank(points: Sequence[Sequence]) -> int:
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]]) if len(points) > 1 else 0


def lift_config(B: Iterable[Sequence[int]]) -> LatticeConfig:
    pts = _as_int_points(B)
    m = len(pts[0])
    if affine_rank(pts) < m:
        raise DegenerateError(f"convex hull of the points is not {m}-dimensional")
    return LatticeConfig(m=m, points=tuple(pts), lifted=tuple(p + (1,) for p in pts))


def config_alpha_beta(alpha: Sequence[int], beta: Sequence[int]) -> LatticeConfig:
    """The configuration ``b_0 = 0, b_1..b_m = e_i, b_{m+1} = (alpha, -beta)``."""
    _check_balanced(alpha, beta)
    m = len(alpha) + len(beta)
    pts = [tuple([0] * m)]
    pts += [tuple(int(i == j) for j in range(m)) for i in range(m)]
    pts.append(tuple(alpha) + tuple(-b for b in beta))
    return lift_config(pts)


def _check_balanced(alpha: Sequence[int], beta: Sequence[int]) -> None:
    if not alpha or not beta:
        raise ValueError("alpha and beta must be nonempty")
    if any(int(x) < 1 for x in list(alpha) + list(beta)):
        raise ValueError("alpha and beta entries must be positive integers")
    if sum(alpha) != sum(beta):
        raise ValueError(f"unbalanced: sum(alpha)={sum(alpha)} != sum(beta)={sum(beta)}")


def _hyperplane(points: Sequence[IntVec]) -> Optional[IntVec]:
    """Primitive normal of the affine hyperplane through ``dim`` points, if unique."""
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    ker = nullspace(diffs, len(p0))
    if len(ker) != 1:
        return None
    return primitive(ker[0])


def _vertices(pts: Sequence[IntVec], facets: Sequence[Facet], dim: int):
    verts = set()
    for p in pts:
        normals = [n for n, c in facets if dot(n, p) == c]
        if len(normals) >= dim and rank(normals) == dim:
            verts.add(tuple(Fraction(x) for x in p))
    return tuple(sorted(verts))


def _polytope_from_facets(pts: Sequence[IntVec], facets: Iterable[Facet]) -> HPolytope:
    dim = len(pts[0])
    facets = tuple(sorted(set(facets)))
    return HPolytope(dim=dim, facets=facets, vertices=_vertices(pts, facets, dim))


def convex_hull_hrep(points: Iterable[Sequence[int]]) -> HPolytope:
    """Irredundant H-representation of the convex hull of integer points.

    Every ``dim``-subset spanning a hyperplane is tried; the hyperplane is a
    facet exactly when all points lie weakly on one side of it.
    """
    pts = sorted(set(_as_int_points(points)))
    dim = len(pts[0])
    if affine_rank(pts) < dim:
        raise DegenerateError("points do not span a full-dimensional polytope")
    found = set()
    for sub in itertools.combinations(pts, dim):
        n = _hyperplane(sub)
        if n is None:
            continue
        c = dot(n, sub[0])
        vals = [dot(n, p) - c for p in pts]
        if all(v <= 0 for v in vals):
            found.add((n, c))
        elif all(v >= 0 for v in vals):
            found.add((tuple(-x for x in n), -c))
    return _polytope_from_facets(pts, found)


def dilate(P: HPolytope, k: int) -> HPolytope:
    if k < 1:
        raise ValueError("dilation factor must be a positive integer")
    return HPolytope(
        dim=P.dim,
        facets=tuple((n, c * k) for n, c in P.facets),
        vertices=tuple(tuple(x * k for x in v) for v in P.vertices),
    )


def _enumerate_box(lo: Sequence[int], hi: Sequence[int], normals: np.ndarray,
                   offsets: np.ndarray, strict: bool, limit: Optional[int]) -> List[IntVec]:
    """Integer points of the box ``lo <= x <= hi`` with ``normals @ x (<|<=) offsets``."""
    dim = len(lo)
    if any(h < l for l, h in zip(lo, hi)):
        return []
    sizes = [h - l + 1 for l, h in zip(lo, hi)]
    # split into leading coordinates iterated in Python and a trailing numpy grid
    split = dim
    tail = 1
    while split > 0 and tail * sizes[split - 1] <= _CHUNK:
        split -= 1
        tail *= sizes[split]
    out: List[IntVec] = []
    axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo[split:], hi[split:])]
    if axes:
        grid = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    tail_vals = grid @ normals[:, split:].T if axes else np.zeros((1, len(offsets)), np.int64)
    for head in itertools.product(*(range(l, h + 1) for l, h in zip(lo[:split], hi[:split]))):
        head_vals = normals[:, :split] @ np.array(head, dtype=np.int64) if split else 0
        vals = tail_vals + head_vals
        ok = (vals < offsets).all(axis=1) if strict else (vals <= offsets).all(axis=1)
        for row in grid[ok]:
            out.append(tuple(head) + tuple(int(x) for x in row))
            if limit is not None and len(out) >= limit:
                return out
    return out


def lattice_points(P: HPolytope, strict: bool = False, limit: Optional[int] = None) -> List[IntVec]:
    """Integer points of ``P`` (interior only if ``strict``) in lexicographic order."""
    if strict:
        lo = [floor(min(v[i] for v in P.vertices)) + 1 for i in range(P.dim)]
        hi = [ceil(max(v[i] for v in P.vertices)) - 1 for i in range(P.dim)]
    else:
        lo = [ceil(min(v[i] for v in P.vertices)) for i in range(P.dim)]
        hi = [floor(max(v[i] for v in P.vertices)) for i in range(P.dim)]
    normals = np.array([n for n, _ in P.facets], dtype=np.int64)
    offsets = np.array([c for _, c in P.facets], dtype=np.int64)
    return _enumerate_box(lo, hi, normals, offsets, strict, limit)


def interior_lattice_points(P: HPolytope, limit: Optional[int] = None) -> List[IntVec]:
    return lattice_points(P, strict=True, limit=limit)


def cone_hrep(cfg: LatticeConfig | Sequence[Sequence[int]]) -> HCone:
    """Facets of the real cone generated by the lifted points (or any vectors)."""
    gens = list(cfg.lifted) if isinstance(cfg, LatticeConfig) else _as_int_points(cfg)
    gens = sorted(set(gens))
    dim = len(gens[0])
    if rank(gens) < dim:
        raise DegenerateError("generators do not span the ambient space")
    found = set()
    for sub in itertools.combinations(gens, dim - 1):
        ker = nullspace(sub, dim)
        if len(ker) != 1:
            continue
        n = primitive(ker[0])
        vals = [dot(n, g) for g in gens]
        if all(v >= 0 for v in vals):
            found.add(n)
        elif all(v <= 0 for v in vals):
            found.add(tuple(-x for x in n))
    return HCone(dim=dim, facets=tuple(sorted(found)), generators=tuple(gens))


def cone_sections(cfg: LatticeConfig, d: int) -> GradedLatticePoints:
    """Lattice points of C(A) with last coordinate <= d, with interior flags."""
    if d < 0:
        raise ValueError("degree bound must be nonnegative")
    cone = cfg.cone
    members: List[IntVec] = [tuple([0] * (cfg.m + 1))]
    for t in range(1, d + 1):
        members.extend(x + (t,) for x in lattice_points(dilate(cfg.polytope, t)))
    members.sort()
    flags = tuple(cone.is_interior(u) for u in members)
    return GradedLatticePoints(degree_bound=d, members=tuple(members), interior_flags=flags)


def on_common_face(cfg: LatticeConfig, Q: Iterable[int]) -> bool:
    """Whether some facet of the hull of the points is tight on every ``b_q``."""
    idx = list(Q)
    for q in idx:
        if not 0 <= q < cfg.N:
            raise IndexError(f"point index {q} out of range")
    pts = [cfg.points[q] for q in idx]
    return any(all(dot(n, p) == c for p in pts) for n, c in cfg.polytope.facets)


def delta_alpha_beta(alpha: Sequence[int], beta: Sequence[int]) -> HPolytope:
    """H-representation of the hull of ``0, e_1..e_m, (alpha, -beta)``.

    Built directly from the closed-form description
    ``sum x <= 1 + min(0, x_j/beta_j)`` and ``x_i >= -alpha_i min(0, x_j/beta_j)``
    by expanding each minimum into its branches, then dropping redundant rows.
    """
    _check_balanced(alpha, beta)
    n, m = len(alpha), len(alpha) + len(beta)
    rows: List[Facet] = [(tuple([1] * m), 1)]
    for i in range(n):
        rows.append((tuple(-int(j == i) for j in range(m)), 0))
    for jj, bj in enumerate(beta):
        j = n + jj
        # beta_j * sum(x) - x_j <= beta_j
        rows.append((tuple(bj - int(t == j) for t in range(m)), bj))
        for i in range(n):
            # beta_j x_i + alpha_i x_j >= 0
            rows.append((tuple(-(bj * int(t == i) + alpha[i] * int(t == j)) for t in range(m)), 0))
    verts = [tuple([0] * m)] + [tuple(int(i == j) for j in range(m)) for i in range(m)]
    verts.append(tuple(alpha) + tuple(-b for b in beta))
    facets = set()
    for nrm, c in rows:
        prim = primitive(nrm)
        scale = next(a // b for a, b in zip(nrm, prim) if b)
        if c % scale:
            continue
        nrm, c = prim, c // scale
        tight = [p for p in verts if dot(nrm, p) == c]
        if len(tight) >= m and affine_rank(tight) == m - 1:
            facets.add((nrm, c))
    return _polytope_from_facets(verts, facets)
