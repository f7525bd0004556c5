"""Picard group, divisor classes, curve lattice, Mori cone and dominance.

The presentation 0 -> M -> Z^rays -> Pic -> 0 is put in Smith normal form
once; the chosen Picard basis and the dual basis of the curve (relation)
lattice are read off the transform and fixed for the lifetime of the
lattice, so every report is reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .fan import Fan, PrimitiveCollection, locate_cone, primitive_collections
from .linalg import matrix_rank, smith_normal_form, solve_columns


class LatticeError(Exception):
    pass


class TorsionDetected(LatticeError):
    """Internal inconsistency: smooth complete fans have free Picard group."""


class NonIntegralCoefficient(LatticeError):
    """Internal inconsistency: cone coefficients must be integers on smooth fans."""


class NoPositiveClassFound(LatticeError):
    """Bounded search for an everywhere-positive effective class failed."""


def h0(x: int) -> int:
    """Sections of O(x) on the projective line: max(0, x+1)."""
    return x + 1 if x >= -1 else 0


def h1(x: int) -> int:
    """First cohomology of O(x) on the projective line: max(0, -x-1)."""
    return -x - 1 if x <= -1 else 0


@dataclass(frozen=True)
class CurveClass:
    """A curve class as coordinates in the curve basis plus its d-vector."""

    coords: tuple
    d: tuple

    def __add__(self, other: "CurveClass") -> "CurveClass":
        return CurveClass(tuple(a + b for a, b in zip(self.coords, other.coords)),
                          tuple(a + b for a, b in zip(self.d, other.d)))

    def __sub__(self, other: "CurveClass") -> "CurveClass":
        return CurveClass(tuple(a - b for a, b in zip(self.coords, other.coords)),
                          tuple(a - b for a, b in zip(self.d, other.d)))

    def __mul__(self, k: int) -> "CurveClass":
        return CurveClass(tuple(k * a for a in self.coords),
                          tuple(k * a for a in self.d))

    __rmul__ = __mul__

    def __neg__(self) -> "CurveClass":
        return self * -1

    def is_zero(self) -> bool:
        return not any(self.coords)

    def c1(self) -> int:
        """Pairing with the anticanonical class: sum of the d-vector."""
        return sum(self.d)


@dataclass(frozen=True)
class EquivClass:
    """Linear-equivalence class of toric divisors."""

    index: int
    members: tuple
    vec: tuple  # common divisor class in the Picard basis

    @property
    def size(self) -> int:
        return len(self.members)

    def d(self, beta: CurveClass) -> int:
        return beta.d[self.members[0]]


class ClassLattice:
    """Divisor-class and curve-class data of a fan; immutable once built."""

    def __init__(self, fan: Fan, divisor_classes, curve_basis_d, section):
        self.fan = fan
        self.pic_rank = len(curve_basis_d)
        self.divisor_classes = divisor_classes
        self.curve_basis_d = curve_basis_d
        self._section = section
        self._equiv = None
        self._mori = None
        self._pcs = None

    # ---- curve classes --------------------------------------------------
    @property
    def zero_curve(self) -> CurveClass:
        return CurveClass((0,) * self.pic_rank, (0,) * self.fan.n_rays)

    def curve_from_coords(self, coords: Sequence[int]) -> CurveClass:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.pic_rank:
            raise LatticeError(f"curve coordinates must have length {self.pic_rank}")
        d = tuple(sum(c * basis[rho] for c, basis in zip(coords, self.curve_basis_d))
                  for rho in range(self.fan.n_rays))
        return CurveClass(coords, d)

    def curve_from_d(self, d: Sequence[int]) -> CurveClass:
        d = tuple(int(x) for x in d)
        if len(d) != self.fan.n_rays:
            raise LatticeError("d-vector length must equal the number of rays")
        for j in range(self.fan.rank):
            if sum(d[rho] * self.fan.rays[rho][j] for rho in range(self.fan.n_rays)):
                raise LatticeError(f"{d} is not a relation among the rays")
        coords = tuple(sum(d[rho] * self._section[rho][k]
                           for rho in range(self.fan.n_rays))
                       for k in range(self.pic_rank))
        beta = self.curve_from_coords(coords)
        if beta.d != d:
            raise LatticeError("relation vector escapes the curve lattice")
        return beta

    def pairing(self, class_vec: Sequence[int], beta: CurveClass) -> int:
        """Intersection of a divisor class (Picard coordinates) with a curve."""
        return sum(int(w) * b for w, b in zip(class_vec, beta.coords))

    # ---- cached combinatorial structure ---------------------------------
    @property
    def equiv(self) -> tuple:
        if self._equiv is None:
            self._equiv = equiv_classes(self)
        return self._equiv

    @property
    def primitive_collections(self) -> tuple:
        if self._pcs is None:
            self._pcs = primitive_collections(self.fan)
        return self._pcs

    @property
    def mori(self) -> tuple:
        if self._mori is None:
            self._mori = mori_generators(self)
        return self._mori

    def class_of_ray(self, rho: int) -> EquivClass:
        for c in self.equiv:
            if rho in c.members:
                return c
        raise LatticeError(f"ray {rho} missing from the class partition")

    def is_effective(self, beta: CurveClass) -> bool:
        return in_cone(beta.coords, [g.coords for g in self.mori])

    def mori_coordinates(self, beta: CurveClass) -> Optional[tuple]:
        """beta as nonnegative integer combination of the Mori generators.

        Returns None when no such expression exists (including the
        non-unimodular situations); used for display and Novikov
        coordinatization.
        """
        gens = self.mori
        cols = [[Fraction(x) for x in g.coords] for g in gens]
        if matrix_rank(cols) != len(gens):
            return None
        sol = solve_columns(cols, [Fraction(x) for x in beta.coords])
        if sol is None:
            return None
        if any(s.denominator != 1 or s < 0 for s in sol):
            return None
        return tuple(int(s) for s in sol)


def class_lattice(fan: Fan) -> ClassLattice:
    """Compute Pic and the curve lattice from the ray presentation."""
    n, r = fan.rank, fan.n_rays
    rows = [list(v) for v in fan.rays]
    R, Rinv, diag = smith_normal_form(rows)
    if len([d for d in diag if d]) != n or any(d != 1 for d in diag[:n]):
        raise TorsionDetected(
            f"ray matrix has elementary divisors {diag}; expected all 1 "
            "(smooth complete fans have torsion-free class groups)")
    divisor_classes = tuple(tuple(R[n + k][rho] for k in range(r - n))
                            for rho in range(r))
    curve_basis_d = tuple(tuple(R[n + j]) for j in range(r - n))
    section = tuple(tuple(Rinv[rho][n + k] for k in range(r - n))
                    for rho in range(r))
    cl = ClassLattice(fan, divisor_classes, curve_basis_d, section)
    # exactness: the rows of the ray matrix pair to zero with every class
    for j in range(n):
        acc = [0] * cl.pic_rank
        for rho in range(r):
            for k in range(cl.pic_rank):
                acc[k] += fan.rays[rho][j] * divisor_classes[rho][k]
        if any(acc):
            raise TorsionDetected("Picard presentation failed exactness check")
    return cl


def equiv_classes(cl: ClassLattice) -> tuple:
    """Partition of the rays by equality of divisor class, ordered by least member."""
    groups = {}
    for rho in range(cl.fan.n_rays):
        groups.setdefault(cl.divisor_classes[rho], []).append(rho)
    ordered = sorted(groups.values(), key=lambda ms: ms[0])
    return tuple(EquivClass(index=i, members=tuple(ms), vec=cl.divisor_classes[ms[0]])
                 for i, ms in enumerate(ordered))


def beta_K(cl: ClassLattice, K: PrimitiveCollection):
    """The curve class of a primitive collection and its negative part [K^-].

    Locates sum of the rays of K inside the fan; the located cone's rays
    carry the (necessarily integral, necessarily positive) coefficients and
    contribute the multiset [K^-] of equivalence classes with multiplicity
    -d_c.  Linearly equivalent rays of the located cone are checked to carry
    identical coefficients.
    """
    fan = cl.fan
    point = tuple(sum(fan.rays[rho][j] for rho in K.edges) for j in range(fan.rank))
    sigma, coeffs = locate_cone(fan, point)
    if set(sigma) & set(K.edges):
        raise LatticeError(f"located cone {sigma} meets the primitive collection {K.edges}")
    ints = []
    for c in coeffs:
        if Fraction(c).denominator != 1:
            raise NonIntegralCoefficient(
                f"coefficient {c} on cone {sigma} is not an integer")
        ints.append(int(c))
    d = [0] * fan.n_rays
    for rho in K.edges:
        d[rho] = 1
    for rho, c in zip(sigma, ints):
        d[rho] = -c
    beta = cl.curve_from_d(d)
    # primitive collections are unions of full equivalence classes
    for rho in K.edges:
        if not set(cl.class_of_ray(rho).members) <= set(K.edges):
            raise LatticeError(
                f"collection {K.edges} is not closed under linear equivalence")
    # the located cone is closed under linear equivalence, with equal coefficients
    kminus = []
    seen = set()
    for rho in sigma:
        c = cl.class_of_ray(rho)
        if c.index in seen:
            continue
        seen.add(c.index)
        values = {d[m] for m in c.members}
        if len(values) != 1:
            raise LatticeError(
                f"linearly equivalent rays {c.members} carry unequal coefficients")
        kminus.append((c, -c.d(beta)))
    kminus.sort(key=lambda cm: cm[0].index)
    return beta, tuple(kminus)


def mori_generators(cl: ClassLattice) -> tuple:
    """Extremal wall-curve classes.

    Every interior wall of the fan yields a relation with coefficient 1 on
    the two opposite rays; duplicates and non-extremal classes are removed.
    Generators matching some beta_K come first (in primitive-collection
    order) so that Novikov symbols line up with the quantum relations.
    """
    fan = cl.fan
    walls = {}
    for sigma in fan.max_cones:
        for facet in itertools.combinations(sigma, fan.rank - 1):
            walls.setdefault(facet, []).append(sigma)
    classes = []
    for facet, owners in sorted(walls.items()):
        (a,) = set(owners[0]) - set(facet)
        (b,) = set(owners[1]) - set(facet)
        cols = [[Fraction(fan.rays[i][j]) for j in range(fan.rank)] for i in facet]
        target = [Fraction(fan.rays[a][j] + fan.rays[b][j]) for j in range(fan.rank)]
        lam = solve_columns(cols, target)
        if lam is None:
            raise LatticeError(f"wall {facet} relation is inconsistent")
        d = [0] * fan.n_rays
        d[a] = 1
        d[b] = 1
        for rho, coeff in zip(facet, lam):
            if coeff.denominator != 1:
                raise NonIntegralCoefficient(
                    f"wall relation coefficient {coeff} is not an integer")
            d[rho] = -int(coeff)
        beta = cl.curve_from_d(d)
        if beta not in classes:
            classes.append(beta)
    # prune non-extremal classes, largest first so primitive ones survive
    order = sorted(classes, key=lambda b: (sum(abs(x) for x in b.d), b.d),
                   reverse=True)
    extremal = list(classes)
    for beta in order:
        if beta not in extremal:
            continue
        rest = [g for g in extremal if g != beta]
        if rest and in_cone(beta.coords, [g.coords for g in rest]):
            extremal = rest
    # deterministic numbering: beta_K matches first, then by d-vector
    front = []
    for K in primitive_collections(fan):
        bk, _ = beta_K(cl, K)
        if bk in extremal and bk not in front:
            front.append(bk)
    rest = sorted((g for g in extremal if g not in front), key=lambda b: b.d)
    return tuple(front + rest)


def in_cone(vec: Sequence, gens: Iterable[Sequence]) -> bool:
    """Exact membership of vec in the rational cone spanned by gens.

    By Caratheodory for cones it suffices to look for a nonnegative solution
    supported on a linearly independent subset of the generators.
    """
    target = [Fraction(x) for x in vec]
    gens = [[Fraction(x) for x in g] for g in gens]
    if all(x == 0 for x in target):
        return True
    max_size = min(len(gens), matrix_rank(gens)) if gens else 0
    for size in range(1, max_size + 1):
        for subset in itertools.combinations(gens, size):
            if matrix_rank(list(subset)) != size:
                continue
            sol = solve_columns(list(subset), target)
            if sol is not None and all(s >= 0 for s in sol):
                return True
    return False


def dominates(cl: ClassLattice, beta_prime: CurveClass, beta: CurveClass) -> bool:
    """beta' dominates beta: beta'-beta effective and h0 rises classwise."""
    diff = beta_prime - beta
    if not cl.is_effective(diff):
        return False
    return all(h0(c.d(beta_prime)) >= h0(c.d(beta)) for c in cl.equiv)


def find_anchor(cl: ClassLattice, sectors: Sequence[CurveClass],
                bound: int = 10) -> CurveClass:
    """Deterministic curve class dominating every given effective sector.

    Searches nonnegative combinations of the Mori generators (coefficient
    sum up to `bound`) for a class positive against every divisor class,
    then scales it up just enough to dominate all sectors.
    """
    if not sectors:
        raise LatticeError("anchor search requires at least one sector")
    gens = cl.mori
    positive = None
    for total in range(1, bound + 1):
        for combo in itertools.product(range(total + 1), repeat=len(gens)):
            if sum(combo) != total:
                continue
            cand = cl.zero_curve
            for a, g in zip(combo, gens):
                cand = cand + a * g
            if all(c.d(cand) > 0 for c in cl.equiv):
                positive = cand
                break
        if positive is not None:
            break
    if positive is None:
        raise NoPositiveClassFound(
            f"no everywhere-positive class among combinations of total <= {bound}; "
            "raise the search bound")
    base = cl.zero_curve
    for s in sectors:
        base = base + s
    for n in range(1, 1 + max(1000, bound)):
        anchor = base + n * positive
        if all(dominates(cl, anchor, s) for s in sectors):
            return anchor
    raise NoPositiveClassFound("anchor scaling did not terminate")  # unreachable


def effective_cones_coincide(cl: ClassLattice) -> bool:
    """Diagnostic: the beta_K span the same cone as the wall curves."""
    bk_coords = [beta_K(cl, K)[0].coords for K in cl.primitive_collections]
    wall_coords = [g.coords for g in cl.mori]
    return (all(in_cone(b, wall_coords) for b in bk_coords)
            and all(in_cone(w, bk_coords) for w in wall_coords))
