"""Correlation functions, quantum Stanley-Reisner relations, verification.

Correlators are scalars against the canonical top-degree monomial of one
anchor sector that dominates everything in a query; only ratios are
intrinsic and every report records its anchor.  The quantum relations are
verified by the exact exponent identity (pure integer arithmetic), with a
full polynomial-expansion route and a correlator route as cross-checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .fan import PrimitiveCollection
from .lattice import (ClassLattice, CurveClass, beta_K, dominates, find_anchor,
                      h0, h1)
from .linalg import solve_columns
from .poly import Polynomial, UnsupportedNovikovShape, normal_form, standard_monomials
from .deform import LinearData
from .sectors import NotDominating, sector, transition


class QuantumError(Exception):
    pass


class AnchorDegenerate(QuantumError):
    """The anchor sector's top graded piece is not one-dimensional."""


class EmptySector(QuantumError):
    """Raised only on request; empty sectors normally contribute zero."""


class NonFanoEnumerationUnbounded(QuantumError):
    """A degree slice of the Mori cone is infinite; pass explicit sectors."""


def four_fermi(lin: LinearData, beta: CurveClass) -> Polynomial:
    """Obstruction factor F_beta = prod_c Q_c^{h1(d_c)} for excess dimension."""
    cl = lin.cl
    f = Polynomial.const(cl.pic_rank, 1)
    excess = 0
    for c in cl.equiv:
        e = h1(c.d(beta))
        excess += c.size * e
        if e:
            f = f * lin.q_of(c) ** e
    # degree bookkeeping: (c1.beta + dim X) + deg F == n_beta
    n_beta = sector(lin, beta).n_beta
    if beta.c1() + cl.fan.rank + excess != n_beta:
        raise QuantumError("four-fermi degree bookkeeping failed")
    return f


def _anchor_generator(lin: LinearData, anchor: CurveClass):
    """(Groebner basis, n, canonical top monomial) of the anchor sector ring."""
    sec = sector(lin, anchor)
    gb = lin.groebner_of(sec.ideal_gens)
    monos = standard_monomials(gb, sec.n_beta)
    if len(monos) != 1:
        raise AnchorDegenerate(
            f"anchor sector of {anchor.d} has top dimension {len(monos)}")
    gen = Polynomial(lin.cl.pic_rank, 0, {(monos[0], ()): Fraction(1)})
    return gb, sec.n_beta, gen


def _sector_scalar(lin: LinearData, p: Polynomial, beta: CurveClass,
                   anchor: CurveClass):
    """Correlator scalar and a reason tag ('ok', 'degree', 'empty', 'ineffective')."""
    cl = lin.cl
    if not p.is_psi_homogeneous() or p.has_q():
        raise QuantumError("correlator insertions must be homogeneous in Sym*W")
    if p.psi_degree() != beta.c1() + cl.fan.rank:
        return Fraction(0), "degree"
    if not cl.is_effective(beta):
        return Fraction(0), "ineffective"
    sec = sector(lin, beta)
    if not sec.nonempty:
        return Fraction(0), "empty"
    if not dominates(cl, anchor, beta):
        raise NotDominating(f"anchor {anchor.d} does not dominate {beta.d}")
    gb, n_anchor, gen = _anchor_generator(lin, anchor)
    image = transition(lin, anchor, beta).r * p * four_fermi(lin, beta)
    nf = normal_form(image, gb)
    if not nf:
        return Fraction(0), "ok"
    gen_mono = gen.leading_monomial()
    for mono, coeff in nf.terms.items():
        if mono != gen_mono:
            raise QuantumError("normal form escaped the top graded piece")
    return nf.terms[gen_mono], "ok"


def correlator_sector(lin: LinearData, p: Polynomial, beta: CurveClass,
                      anchor: CurveClass) -> Fraction:
    """Sector correlator of p, reported against the anchor's generator."""
    value, _ = _sector_scalar(lin, p, beta, anchor)
    return value


@dataclass(frozen=True)
class SectorRow:
    beta: CurveClass
    scalar: Fraction
    reason: str


@dataclass(frozen=True)
class CorrelatorReport:
    poly: Polynomial
    anchor: CurveClass
    generator: Polynomial
    rows: tuple
    series: tuple  # (beta, scalar) with scalar nonzero


def degree_slice(cl: ClassLattice, t: int) -> tuple:
    """All effective classes with c1 . beta = t (finite only in the Fano regime)."""
    gens = cl.mori
    weights = [g.c1() for g in gens]
    if any(w <= 0 for w in weights):
        raise NonFanoEnumerationUnbounded(
            "a Mori generator has nonpositive anticanonical degree; "
            "the degree slice is infinite, supply explicit sectors")
    if t < 0:
        return ()
    vertices = [[Fraction(t * c, w) for c in g.coords] for g, w in zip(gens, weights)]
    lo = [min(v[k] for v in vertices) for k in range(cl.pic_rank)]
    hi = [max(v[k] for v in vertices) for k in range(cl.pic_rank)]
    found = []
    ranges = [range(_ceil(a), _floor(b) + 1) for a, b in zip(lo, hi)]
    for coords in itertools.product(*ranges):
        beta = cl.curve_from_coords(coords)
        if beta.c1() == t and cl.is_effective(beta):
            found.append(beta)
    found.sort(key=lambda b: b.d)
    return tuple(found)


def effective_window(cl: ClassLattice, c1_bound: int,
                     coeff_bound: Optional[int] = None) -> tuple:
    """Effective classes with c1 . beta <= c1_bound.

    Exact in the Fano regime; otherwise the set is infinite and the window
    is truncated to nonnegative Mori-coefficient sums <= coeff_bound.
    """
    gens = cl.mori
    if all(g.c1() > 0 for g in gens):
        out = []
        for t in range(c1_bound + 1):
            out.extend(degree_slice(cl, t))
        return tuple(out)
    if coeff_bound is None:
        raise NonFanoEnumerationUnbounded(
            "non-Fano window needs an explicit coefficient bound")
    found = set()
    for combo in itertools.product(range(coeff_bound + 1), repeat=len(gens)):
        if sum(combo) > coeff_bound:
            continue
        beta = cl.zero_curve
        for a, g in zip(combo, gens):
            beta = beta + a * g
        if beta.c1() <= c1_bound:
            found.add(beta)
    return tuple(sorted(found, key=lambda b: b.d))


def _ceil(x: Fraction) -> int:
    return -int((-x).__floor__()) if isinstance(x, Fraction) else x


def _floor(x: Fraction) -> int:
    return int(x.__floor__())


def correlator_series(lin: LinearData, p: Polynomial, max_c1_degree: int,
                      sectors: Optional[Sequence[CurveClass]] = None,
                      anchor_bound: int = 10) -> CorrelatorReport:
    """Sum the sector correlators of p over the matching degree slice.

    Sectors are enumerated from the Mori cone unless given explicitly; one
    anchor dominating all of them fixes the normalization and is recorded.
    """
    cl = lin.cl
    if not p.is_psi_homogeneous() or p.has_q():
        raise QuantumError("series insertions must be homogeneous in Sym*W")
    target = p.psi_degree() - cl.fan.rank
    if sectors is None:
        if target > max_c1_degree:
            raise QuantumError(
                f"degree slice c1 = {target} exceeds max_c1_degree = {max_c1_degree}")
        sectors = degree_slice(cl, target)
    sectors = tuple(sectors)
    anchor_inputs = [b for b in sectors if cl.is_effective(b)] or [cl.zero_curve]
    anchor = find_anchor(cl, anchor_inputs, bound=anchor_bound)
    _, _, gen = _anchor_generator(lin, anchor)
    rows = []
    for beta in sectors:
        value, reason = _sector_scalar(lin, p, beta, anchor)
        rows.append(SectorRow(beta=beta, scalar=value, reason=reason))
    series = tuple((row.beta, row.scalar) for row in rows if row.scalar)
    return CorrelatorReport(poly=p, anchor=anchor, generator=gen,
                            rows=tuple(rows), series=series)


def novikov_series_str(cl: ClassLattice, series) -> str:
    """Render sum lambda_beta q^beta with q-exponents in Mori coordinates."""
    if not series:
        return "0"
    chunks = []
    for beta, coeff in series:
        mori = cl.mori_coordinates(beta)
        if mori is None:
            sym = "q^" + str(list(beta.coords))
        else:
            factors = []
            for j, e in enumerate(mori):
                if e == 1:
                    factors.append(f"q{j + 1}")
                elif e:
                    factors.append(f"q{j + 1}^{e}")
            sym = "*".join(factors) if factors else ""
        mag = abs(coeff)
        if not sym:
            body = str(mag)
        elif mag == 1:
            body = sym
        else:
            body = f"{mag}*{sym}"
        if not chunks:
            chunks.append(body if coeff > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(chunks)


# ---- quantum Stanley-Reisner relations ------------------------------------

@dataclass(frozen=True)
class QuantumRelation:
    collection: PrimitiveCollection
    beta_k: CurveClass
    kminus: tuple          # (EquivClass, positive multiplicity)
    lhs: Polynomial        # Q_K, Novikov-free
    rhs: Polynomial        # q^{beta_K} prod Q_c^{-d_c}
    difference: Polynomial

    def degree(self) -> int:
        return self.lhs.psi_degree()


def qsr_generators(lin: LinearData) -> tuple:
    """One relation Q_K = q^{beta_K} prod_{c in [K^-]} Q_c^{-d_c} per collection."""
    cl = lin.cl
    nq = cl.pic_rank
    weights = [sum(basis) for basis in cl.curve_basis_d]  # c1 of each basis vector
    out = []
    for K in cl.primitive_collections:
        bk, kminus = beta_K(cl, K)
        class_ids = sorted({cl.class_of_ray(rho).index for rho in K.edges})
        lhs = Polynomial.const(cl.pic_rank, 1)
        for ci in class_ids:
            lhs = lhs * lin.q[ci]
        rhs = Polynomial.novikov(cl.pic_rank, nq, bk.coords)
        for c, mult in kminus:
            rhs = rhs * lin.q_of(c).with_q(nq) ** mult
        diff = lhs.with_q(nq) - rhs
        # homogeneity when deg q^beta := c1 . beta
        degs = {sum(mono[0]) + sum(w * e for w, e in zip(weights, mono[1]))
                for mono in diff.terms}
        if len(degs) > 1:
            raise QuantumError(f"relation for {K.edges} is not homogeneous: {degs}")
        out.append(QuantumRelation(collection=K, beta_k=bk, kminus=kminus,
                                   lhs=lhs, rhs=rhs, difference=diff))
    return tuple(out)


def verify_qc_relation(lin: LinearData, K: PrimitiveCollection, beta: CurveClass,
                       beta_prime: CurveClass, route: str = "exponent",
                       insertions: Sequence[Polynomial] = (),
                       h0_fn=None, h1_fn=None) -> bool:
    """Check the quantum relation for K against sectors beta and beta + beta_K.

    route 'exponent' checks the per-class exponent identity with exact
    integer arithmetic; 'expand' compares the two fully expanded products in
    Sym*W; 'correlator' compares correlators of the supplied insertions
    against the anchor beta_prime.
    """
    cl = lin.cl
    H0 = h0_fn or h0
    H1 = h1_fn or h1
    if not cl.is_effective(beta):
        raise QuantumError(f"sector {beta.d} is not effective")
    bk, kminus = beta_K(cl, K)
    shifted = beta + bk
    if not (dominates(cl, beta_prime, beta) and dominates(cl, beta_prime, shifted)):
        raise NotDominating(
            f"{beta_prime.d} must dominate both {beta.d} and {shifted.d}")
    if route == "exponent":
        for c in cl.equiv:
            dk = c.d(bk)
            db = c.d(beta)
            dbp = c.d(beta_prime)
            left = (H0(dbp) - H0(db + dk)) + H1(db + dk) + (1 if dk > 0 else 0)
            right = (H0(dbp) - H0(db)) + H1(db) + (-dk if dk < 0 else 0)
            if left != right:
                return False
        return True
    if route == "expand":
        lhs = transition(lin, beta_prime, shifted).r * four_fermi(lin, shifted)
        for c in cl.equiv:
            if c.d(bk) > 0:
                lhs = lhs * lin.q_of(c)
        rhs = transition(lin, beta_prime, beta).r * four_fermi(lin, beta)
        for c, mult in kminus:
            rhs = rhs * lin.q_of(c) ** mult
        return lhs == rhs
    if route == "correlator":
        prod_k = Polynomial.const(cl.pic_rank, 1)
        for c in cl.equiv:
            if c.d(bk) > 0:
                prod_k = prod_k * lin.q_of(c)
        prod_m = Polynomial.const(cl.pic_rank, 1)
        for c, mult in kminus:
            prod_m = prod_m * lin.q_of(c) ** mult
        for y in insertions:
            left = correlator_sector(lin, y * prod_k, shifted, beta_prime)
            right = correlator_sector(lin, y * prod_m, beta, beta_prime)
            if left != right:
                return False
        return True
    raise ValueError(f"unknown route {route!r}")


def relation_annihilates(lin: LinearData, rel: QuantumRelation,
                         insertion: Polynomial, window: Sequence[CurveClass]) -> bool:
    """<Y * rel> vanishes over the window: correlators match sector by sector."""
    cl = lin.cl
    window = [b for b in window if cl.is_effective(b)]
    if not window:
        return True
    anchor = find_anchor(cl, window + [b + rel.beta_k for b in window])
    prod_m = Polynomial.const(cl.pic_rank, 1)
    for c, mult in rel.kminus:
        prod_m = prod_m * lin.q_of(c) ** mult
    for beta in window:
        left = correlator_sector(lin, insertion * rel.lhs, beta + rel.beta_k, anchor)
        right = correlator_sector(lin, insertion * prod_m, beta, anchor)
        if left != right:
            return False
    return True


# ---- quantum normal forms ---------------------------------------------------

def _mori_change_of_basis(cl: ClassLattice):
    """Integer matrices (to_mori, to_curve) between curve and Mori coordinates."""
    gens = cl.mori
    if len(gens) != cl.pic_rank:
        raise UnsupportedNovikovShape(
            f"{len(gens)} Mori generators for curve rank {cl.pic_rank}; "
            "no unimodular effective basis")
    cols = [[Fraction(x) for x in g.coords] for g in gens]
    inv_cols = []  # inv_cols[k] = Mori coordinates of the k-th curve-basis vector
    for k in range(cl.pic_rank):
        unit = [Fraction(1) if i == k else Fraction(0) for i in range(cl.pic_rank)]
        sol = solve_columns(cols, unit)
        if sol is None or any(s.denominator != 1 for s in sol):
            raise UnsupportedNovikovShape(
                "Mori generators are not a unimodular basis of the curve lattice")
        inv_cols.append([int(s) for s in sol])

    def to_mori(qpart: tuple) -> tuple:
        return tuple(sum(inv_cols[k][j] * qpart[k] for k in range(cl.pic_rank))
                     for j in range(cl.pic_rank))

    def to_curve(apart: tuple) -> tuple:
        return tuple(sum(gens[j].coords[k] * apart[j] for j in range(cl.pic_rank))
                     for k in range(cl.pic_rank))

    return to_mori, to_curve


def quantum_groebner(lin: LinearData) -> tuple:
    """Reduced basis of the quantum ideal, Novikov exponents in curve coordinates."""
    cl = lin.cl
    to_mori, to_curve = _mori_change_of_basis(cl)
    gens = tuple(rel.difference.map_q(to_mori, cl.pic_rank)
                 for rel in qsr_generators(lin))
    gb = lin.groebner_of(gens)
    return tuple(g.map_q(to_curve, cl.pic_rank) for g in gb.polys)


def quantum_normal_form(lin: LinearData, p: Polynomial) -> Polynomial:
    """Normal form in the quantum ring QH*_E(X).

    Requires the Mori generators to form a unimodular basis of the curve
    lattice, so the Novikov exponents can be coordinatized nonnegatively.
    """
    cl = lin.cl
    to_mori, to_curve = _mori_change_of_basis(cl)
    gens = tuple(rel.difference.map_q(to_mori, cl.pic_rank)
                 for rel in qsr_generators(lin))
    gb = lin.groebner_of(gens)
    if p.nq == 0:
        p = p.with_q(cl.pic_rank)
    if p.nq != cl.pic_rank:
        raise QuantumError("polynomial lives in the wrong Novikov ring")
    q = p.map_q(to_mori, cl.pic_rank)
    for (_, qpart) in q.terms:
        if any(e < 0 for e in qpart):
            raise UnsupportedNovikovShape(
                "input Novikov exponents are not effective")
    return normal_form(q, gb).map_q(to_curve, cl.pic_rank)
