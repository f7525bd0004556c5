"""Complete smooth simplicial fans and their primitive-collection combinatorics.

A fan is given by its ray generators and maximal cones.  Construction
validates primitivity of the rays, unimodularity of every maximal cone
(smoothness) and completeness of the support; everything downstream may
then assume the standing hypotheses of smooth complete toric geometry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .linalg import int_det, solve_columns


class FanError(Exception):
    """Base class for fan validation failures."""


class NonPrimitiveRay(FanError):
    pass


class NonUnimodularCone(FanError):
    """A maximal cone is not generated by a lattice basis (non-smooth input)."""


class IncompleteFan(FanError):
    pass


class DuplicateRay(FanError):
    pass


class NotInSupport(FanError):
    """Defensive: a point escaped the support of a complete fan."""


@dataclass(frozen=True)
class PrimitiveCollection:
    """A set of rays spanning no cone, all of whose proper subsets do."""

    edges: tuple
    k: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        object.__setattr__(self, "k", len(self.edges))


@dataclass(frozen=True)
class Fan:
    """Validated complete smooth fan; immutable after construction."""

    rank: int
    rays: tuple          # tuple of integer vectors
    max_cones: tuple     # tuple of sorted index tuples

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def cone_faces(self) -> frozenset:
        """All cones of the fan, as the subsets of maximal cones (incl. the zero cone)."""
        faces = set()
        for sigma in self.max_cones:
            for k in range(len(sigma) + 1):
                faces.update(itertools.combinations(sigma, k))
        return frozenset(faces)

    def spans_cone(self, edges) -> bool:
        s = set(edges)
        return any(s.issubset(sigma) for sigma in self.max_cones)

    def face_counts(self) -> tuple:
        """(f_{-1}, f_0, ..., f_{n-1}) where f_{i-1} counts (i-1)-dimensional cones."""
        by_size = [0] * (self.rank + 1)
        for face in self.cone_faces():
            by_size[len(face)] += 1
        return tuple(by_size)

    def h_vector(self) -> tuple:
        """h-vector from face counts: sum_i f_{i-1} t^i (1-t)^(n-i)."""
        n = self.rank
        f = self.face_counts()
        coeffs = [0] * (n + 1)
        for i in range(n + 1):
            # expand t^i (1-t)^(n-i)
            m = n - i
            binom = 1
            for j in range(m + 1):
                coeffs[i + j] += f[i] * ((-1) ** j) * binom
                binom = binom * (m - j) // (j + 1)
        return tuple(coeffs)


def _is_primitive(vec) -> bool:
    g = 0
    for x in vec:
        g = gcd(g, abs(x))
    return g == 1


def build_fan(rank: int, rays: Sequence[Sequence[int]], max_cones: Sequence[Sequence[int]]) -> Fan:
    """Validate and construct a complete smooth simplicial fan.

    Checks: primitive rays, no duplicate rays, every maximal cone a lattice
    basis (|det| = 1), and completeness by facet pairing (every facet shared
    by exactly two maximal cones whose opposite rays lie on opposite sides,
    detected by a determinant-sign cancellation).  Projectivity is trusted.
    """
    if rank < 1:
        raise FanError("rank must be a positive integer")
    if not rays:
        raise FanError("ray list is empty")
    if not max_cones:
        raise FanError("maximal cone list is empty")
    ray_tuples = []
    for v in rays:
        t = tuple(int(x) for x in v)
        if len(t) != rank:
            raise FanError(f"ray {v} does not have {rank} coordinates")
        if not _is_primitive(t):
            raise NonPrimitiveRay(f"ray {t} is not primitive")
        ray_tuples.append(t)
    if len(set(ray_tuples)) != len(ray_tuples):
        raise DuplicateRay("ray list contains duplicates")

    cones = []
    for sigma in max_cones:
        idx = tuple(sorted(int(i) for i in sigma))
        if any(i < 0 or i >= len(ray_tuples) for i in idx):
            raise FanError(f"cone {sigma} references an unknown ray index")
        if len(set(idx)) != len(idx) or len(idx) != rank:
            raise NonUnimodularCone(
                f"maximal cone {sigma} does not have exactly {rank} distinct rays")
        det = int_det([ray_tuples[i] for i in idx])
        if abs(det) != 1:
            raise NonUnimodularCone(
                f"cone {idx} has determinant {det}; fan is not smooth")
        cones.append(idx)
    if len(set(cones)) != len(cones):
        raise IncompleteFan("duplicate maximal cone")

    used = set(itertools.chain.from_iterable(cones))
    if used != set(range(len(ray_tuples))):
        missing = sorted(set(range(len(ray_tuples))) - used)
        raise IncompleteFan(f"rays {missing} appear in no maximal cone")

    # facet pairing: every (rank-1)-face of a maximal cone must be shared by
    # exactly two maximal cones, and the two opposite rays must lie on
    # opposite sides of the facet hyperplane (det signs cancel)
    facets = {}
    for ci, sigma in enumerate(cones):
        for facet in itertools.combinations(sigma, rank - 1):
            facets.setdefault(facet, []).append(ci)
    for facet, owners in sorted(facets.items()):
        if len(owners) != 2:
            raise IncompleteFan(
                f"facet {facet} lies in {len(owners)} maximal cone(s); "
                "support does not close up")
        dets = []
        for ci in owners:
            (opp,) = set(cones[ci]) - set(facet)
            rows = [ray_tuples[i] for i in facet] + [ray_tuples[opp]]
            dets.append(int_det(rows))
        if dets[0] + dets[1] != 0:
            raise IncompleteFan(
                f"maximal cones sharing facet {facet} overlap on one side")

    return Fan(rank=rank, rays=tuple(ray_tuples), max_cones=tuple(cones))


def primitive_collections(fan: Fan) -> tuple:
    """All primitive collections, ordered lexicographically by sorted indices."""
    found = []
    indices = range(fan.n_rays)
    for k in range(2, fan.n_rays + 1):
        for combo in itertools.combinations(indices, k):
            if fan.spans_cone(combo):
                continue
            if any(set(pc.edges) < set(combo) for pc in found):
                continue
            # primitivity in the strong sense: all maximal proper subsets span
            if all(fan.spans_cone(combo[:i] + combo[i + 1:]) for i in range(k)):
                found.append(PrimitiveCollection(combo))
    return tuple(found)


def locate_cone(fan: Fan, point: Sequence) -> tuple:
    """Locate the unique cone containing a rational point in its relative interior.

    Returns (cone, coefficients): the sorted ray-index tuple of the cone and
    the strictly positive rational coefficients of the point on its rays.
    The zero vector yields the zero cone with no coefficients.
    """
    p = [Fraction(x) for x in point]
    if len(p) != fan.rank:
        raise FanError(f"point must have {fan.rank} coordinates")
    if all(x == 0 for x in p):
        return (), ()
    for sigma in fan.max_cones:
        cols = [[Fraction(fan.rays[i][j]) for j in range(fan.rank)] for i in sigma]
        coeffs = solve_columns(cols, p)
        if coeffs is None or any(c < 0 for c in coeffs):
            continue
        support = tuple(i for i, c in zip(sigma, coeffs) if c > 0)
        values = tuple(c for c in coeffs if c > 0)
        return support, values
    raise NotInSupport(f"point {tuple(p)} lies in no cone; fan is not complete")
