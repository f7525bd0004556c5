"""Exact sparse multivariate polynomial arithmetic over the rationals.

Polynomials live in Q[psi_1..psi_nv] optionally extended by Novikov
variables; a term is keyed by a pair (psi exponents, q exponents) and its
coefficient is a Fraction.  The q exponents are integer vectors (curve-class
coordinates in the geometric layers) and may be negative in storage; the
Groebner routines insist on nonnegative q exponents.

The only monomial order used is graded reverse lexicographic with
psi_1 > psi_2 > ..., with q exponents compared the same way in a second
block (so classical monomials dominate Novikov ones of equal psi part).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence


class PolyError(Exception):
    pass


class NonSquare(PolyError):
    pass


class NonHomogeneousIdeal(PolyError):
    pass


class UnsupportedNovikovShape(PolyError):
    """Novikov exponents admit no nonnegative coordinatization."""


class ParseError(PolyError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


ORDER_TAG = "grevlex"


def _grevlex_key(exps: tuple) -> tuple:
    return (sum(exps), tuple(-e for e in reversed(exps)))


def monomial_key(mon: tuple) -> tuple:
    """Sort key; larger key = larger monomial in the block grevlex order."""
    p, q = mon
    return _grevlex_key(p) + _grevlex_key(q)


def _mon_mul(a: tuple, b: tuple) -> tuple:
    return (tuple(x + y for x, y in zip(a[0], b[0])),
            tuple(x + y for x, y in zip(a[1], b[1])))


def _mon_divides(a: tuple, b: tuple) -> bool:
    return (all(x <= y for x, y in zip(a[0], b[0]))
            and all(x <= y for x, y in zip(a[1], b[1])))


def _mon_div(a: tuple, b: tuple) -> tuple:
    return (tuple(x - y for x, y in zip(a[0], b[0])),
            tuple(x - y for x, y in zip(a[1], b[1])))


def _mon_lcm(a: tuple, b: tuple) -> tuple:
    return (tuple(max(x, y) for x, y in zip(a[0], b[0])),
            tuple(max(x, y) for x, y in zip(a[1], b[1])))


class Polynomial:
    """Immutable sparse polynomial; do not mutate `terms` after construction."""

    __slots__ = ("nv", "nq", "terms", "_hash")

    def __init__(self, nv: int, nq: int = 0, terms: Optional[dict] = None):
        self.nv = nv
        self.nq = nq
        clean = {}
        if terms:
            for mon, coeff in terms.items():
                c = Fraction(coeff)
                if c:
                    clean[mon] = c
        self.terms = clean
        self._hash = None

    # ---- constructors -------------------------------------------------
    @staticmethod
    def zero(nv: int, nq: int = 0) -> "Polynomial":
        return Polynomial(nv, nq)

    @staticmethod
    def const(nv: int, value, nq: int = 0) -> "Polynomial":
        mon = ((0,) * nv, (0,) * nq)
        return Polynomial(nv, nq, {mon: Fraction(value)})

    @staticmethod
    def variable(nv: int, i: int, nq: int = 0) -> "Polynomial":
        exps = tuple(1 if j == i else 0 for j in range(nv))
        return Polynomial(nv, nq, {(exps, (0,) * nq): Fraction(1)})

    @staticmethod
    def linear(nv: int, coeffs: Sequence, nq: int = 0) -> "Polynomial":
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                exps = tuple(1 if j == i else 0 for j in range(nv))
                terms[(exps, (0,) * nq)] = Fraction(c)
        return Polynomial(nv, nq, terms)

    @staticmethod
    def novikov(nv: int, nq: int, q_exps: Sequence[int]) -> "Polynomial":
        return Polynomial(nv, nq, {((0,) * nv, tuple(q_exps)): Fraction(1)})

    # ---- ring structure ------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.nv != other.nv or self.nq != other.nq:
            raise PolyError("mixing polynomials from different rings")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.const(self.nv, other, self.nq)
        self._check(other)
        terms = dict(self.terms)
        for mon, c in other.terms.items():
            s = terms.get(mon, 0) + c
            if s:
                terms[mon] = s
            else:
                terms.pop(mon, None)
        return Polynomial(self.nv, self.nq, terms)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return Polynomial(self.nv, self.nq, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.const(self.nv, other, self.nq)
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            if not c:
                return Polynomial.zero(self.nv, self.nq)
            return Polynomial(self.nv, self.nq,
                              {m: c * v for m, v in self.terms.items()})
        self._check(other)
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mon = _mon_mul(m1, m2)
                s = terms.get(mon, 0) + c1 * c2
                if s:
                    terms[mon] = s
                else:
                    terms.pop(mon, None)
        return Polynomial(self.nv, self.nq, terms)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative power of a polynomial")
        result = Polynomial.const(self.nv, 1, self.nq)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction)):
                other = Polynomial.const(self.nv, other, self.nq)
            else:
                return NotImplemented
        return (self.nv, self.nq, self.terms) == (other.nv, other.nq, other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nv, self.nq, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # ---- inspection ----------------------------------------------------
    def psi_degree(self) -> int:
        """Maximal total psi degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m[0]) for m in self.terms)

    def is_psi_homogeneous(self) -> bool:
        degs = {sum(m[0]) for m in self.terms}
        return len(degs) <= 1

    def has_q(self) -> bool:
        return any(any(m[1]) for m in self.terms)

    def leading_monomial(self) -> tuple:
        if not self.terms:
            raise PolyError("zero polynomial has no leading monomial")
        return max(self.terms, key=monomial_key)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def monic(self) -> "Polynomial":
        lc = self.leading_coefficient()
        return self * (Fraction(1) / lc)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: monomial_key(kv[0]),
                      reverse=True)

    def linear_coefficients(self) -> tuple:
        """Coefficient vector of a degree <= 1 element of W (no constant part)."""
        coeffs = [Fraction(0)] * self.nv
        for (p, q), c in self.terms.items():
            if any(q) or sum(p) != 1:
                raise PolyError("not a linear form in the psi variables")
            coeffs[p.index(1)] = c
        return tuple(coeffs)

    def with_q(self, nq: int) -> "Polynomial":
        """Embed into the ring with nq Novikov coordinates."""
        if self.nq == nq:
            return self
        if self.nq != 0:
            raise PolyError("polynomial already carries Novikov exponents")
        zero = (0,) * nq
        return Polynomial(self.nv, nq, {(p, zero): c for (p, _), c in self.terms.items()})

    def drop_q(self) -> "Polynomial":
        """Forget Novikov exponents (requires none present)."""
        if self.has_q():
            raise PolyError("polynomial has nonzero Novikov exponents")
        return Polynomial(self.nv, 0, {(p, ()): c for (p, _), c in self.terms.items()})

    def q_set_zero(self) -> "Polynomial":
        """Specialize all q^beta with beta != 0 to zero."""
        zero = (0,) * self.nq
        return Polynomial(self.nv, self.nq,
                          {m: c for m, c in self.terms.items() if m[1] == zero})

    def map_q(self, fn: Callable[[tuple], tuple], nq: int) -> "Polynomial":
        """Re-coordinatize the Novikov exponents via fn."""
        terms = {}
        for (p, q), c in self.terms.items():
            mon = (p, tuple(fn(q)))
            terms[mon] = terms.get(mon, 0) + c
        return Polynomial(self.nv, nq, terms)

    def evaluate_linear(self, point: Sequence[Fraction]) -> Fraction:
        """Evaluate a linear form at a rational point of W-dual coordinates."""
        total = Fraction(0)
        for c, x in zip(self.linear_coefficients(), point):
            total += c * x
        return total

    def __repr__(self):
        return f"Polynomial({self.to_str()})"

    def to_str(self, psi_names: Optional[Sequence[str]] = None,
               q_names: Optional[Sequence[str]] = None) -> str:
        """Deterministic rendering, terms in descending monomial order."""
        if not self.terms:
            return "0"
        if psi_names is None:
            psi_names = [f"psi{i + 1}" for i in range(self.nv)]
        if q_names is None:
            q_names = [f"q{j + 1}" for j in range(self.nq)]
        chunks = []
        for (p, q), c in self.sorted_terms():
            factors = []
            for name, e in itertools.chain(zip(psi_names, p), zip(q_names, q)):
                if e == 1:
                    factors.append(name)
                elif e != 0:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(chunks)


# ---- ideals and Groebner bases ------------------------------------------

@dataclass(frozen=True)
class Ideal:
    generators: tuple
    order: str = ORDER_TAG
    nv: Optional[int] = None  # needed only when the generator list is empty

    def __post_init__(self):
        if any(not g for g in self.generators):
            raise PolyError("ideal generators must be nonzero")
        if self.generators and self.nv is None:
            object.__setattr__(self, "nv", self.generators[0].nv)


@dataclass(frozen=True)
class GroebnerBasis:
    polys: tuple
    order: str = ORDER_TAG
    nv: Optional[int] = None

    def __post_init__(self):
        if self.polys and self.nv is None:
            object.__setattr__(self, "nv", self.polys[0].nv)

    def leading_monomials(self) -> tuple:
        return tuple(g.leading_monomial() for g in self.polys)


def _require_nonnegative_q(polys: Iterable[Polynomial]):
    for g in polys:
        for (_, q) in g.terms:
            if any(e < 0 for e in q):
                raise UnsupportedNovikovShape(
                    "Novikov exponents are not nonnegatively coordinatized; "
                    "re-express them in a unimodular effective basis first")


def normal_form(p: Polynomial, gb) -> Polynomial:
    """Complete division remainder of p modulo a (Groebner) basis."""
    basis = gb.polys if isinstance(gb, GroebnerBasis) else tuple(gb)
    basis = [g for g in basis if g]
    leads = [(g.leading_monomial(), g.leading_coefficient(), g) for g in basis]
    work = dict(p.terms)
    remainder = {}
    while work:
        mon = max(work, key=monomial_key)
        coeff = work.pop(mon)
        for lm, lc, g in leads:
            if _mon_divides(lm, mon):
                factor = coeff / lc
                shift = _mon_div(mon, lm)
                for m2, c2 in g.terms.items():
                    if m2 == lm:
                        continue
                    tgt = _mon_mul(shift, m2)
                    s = work.get(tgt, 0) - factor * c2
                    if s:
                        work[tgt] = s
                    else:
                        work.pop(tgt, None)
                break
        else:
            remainder[mon] = coeff
    return Polynomial(p.nv, p.nq, remainder)


def _spoly(f: Polynomial, g: Polynomial) -> Polynomial:
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = _mon_lcm(lf, lg)
    mf = _mon_div(lcm, lf)
    mg = _mon_div(lcm, lg)
    tf = Polynomial(f.nv, f.nq, {mf: Fraction(1) / f.leading_coefficient()})
    tg = Polynomial(g.nv, g.nq, {mg: Fraction(1) / g.leading_coefficient()})
    return tf * f - tg * g


def groebner(ideal: Ideal) -> GroebnerBasis:
    """Reduced Groebner basis (Buchberger, normal pair selection).

    Pairs with coprime leading terms are skipped; the result is
    interreduced, monic, and sorted by leading monomial, hence canonical.
    """
    gens = [g for g in ideal.generators if g]
    if not gens:
        return GroebnerBasis((), ideal.order, ideal.nv)
    _require_nonnegative_q(gens)
    basis = []
    for g in gens:
        m = g.monic()
        if m not in basis:
            basis.append(m)
    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    while pairs:
        # normal selection: smallest lcm in the monomial order
        i, j = min(pairs, key=lambda ij: (monomial_key(_mon_lcm(
            basis[ij[0]].leading_monomial(), basis[ij[1]].leading_monomial())), ij))
        pairs.discard((i, j))
        li = basis[i].leading_monomial()
        lj = basis[j].leading_monomial()
        if _mon_mul(li, lj) == _mon_lcm(li, lj):
            continue  # coprime criterion
        r = normal_form(_spoly(basis[i], basis[j]), basis)
        if r:
            basis.append(r.monic())
            k = len(basis) - 1
            pairs.update((i2, k) for i2 in range(k))
    # minimalize: drop elements whose leading term is divisible by another's
    basis.sort(key=lambda g: monomial_key(g.leading_monomial()))
    minimal = []
    for g in basis:
        lm = g.leading_monomial()
        if not any(_mon_divides(h.leading_monomial(), lm) for h in minimal):
            minimal.append(g)
    # interreduce tails
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        r = normal_form(g, others)
        reduced.append(r.monic())
    reduced.sort(key=lambda g: monomial_key(g.leading_monomial()))
    return GroebnerBasis(tuple(reduced), ideal.order)


def quotient_dims(gb: GroebnerBasis, up_to_degree: int) -> tuple:
    """Graded dimensions of Sym*W / ideal, i.e. standard monomial counts."""
    for g in gb.polys:
        if g.has_q():
            raise PolyError("quotient dimensions are defined in the pure psi ring")
        if not g.is_psi_homogeneous():
            raise NonHomogeneousIdeal(g.to_str())
    nv = gb.nv
    if nv is None:
        raise PolyError("Groebner basis does not record its variable count")
    leads = [g.leading_monomial()[0] for g in gb.polys]
    dims = []
    for d in range(up_to_degree + 1):
        count = 0
        for mono in _monomials_of_degree(nv, d):
            if not any(all(x <= y for x, y in zip(lm, mono)) for lm in leads):
                count += 1
        dims.append(count)
    return tuple(dims)


def _monomials_of_degree(nv: int, d: int):
    if nv == 0:
        if d == 0:
            yield ()
        return
    for combo in itertools.combinations_with_replacement(range(nv), d):
        exps = [0] * nv
        for i in combo:
            exps[i] += 1
        yield tuple(exps)


def standard_monomials(gb: GroebnerBasis, degree: int) -> tuple:
    """Monomials of the given degree outside the leading-term ideal."""
    for g in gb.polys:
        if not g.is_psi_homogeneous() or g.has_q():
            raise NonHomogeneousIdeal("standard monomials require a homogeneous psi ideal")
    nv = gb.nv
    if nv is None:
        raise PolyError("Groebner basis does not record its variable count")
    leads = [g.leading_monomial()[0] for g in gb.polys]
    out = []
    for mono in _monomials_of_degree(nv, degree):
        if not any(all(x <= y for x, y in zip(lm, mono)) for lm in leads):
            out.append(mono)
    return tuple(out)


# ---- determinants ---------------------------------------------------------

def exact_div(p: Polynomial, d: Polynomial) -> Polynomial:
    """Quotient p / d when d divides p exactly; raises otherwise."""
    if not d:
        raise PolyError("division by the zero polynomial")
    nv, nq = p.nv, p.nq
    ld = d.leading_monomial()
    lc = d.leading_coefficient()
    work = dict(p.terms)
    quot = {}
    while work:
        mon = max(work, key=monomial_key)
        if not _mon_divides(ld, mon):
            raise PolyError("inexact polynomial division")
        factor = work[mon] / lc
        shift = _mon_div(mon, ld)
        quot[shift] = quot.get(shift, 0) + factor
        for m2, c2 in d.terms.items():
            tgt = _mon_mul(shift, m2)
            s = work.get(tgt, 0) - factor * c2
            if s:
                work[tgt] = s
            else:
                work.pop(tgt, None)
    return Polynomial(nv, nq, quot)


def det(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Exact determinant of a square matrix of polynomials.

    Cofactor expansion for small sizes, fraction-free Bareiss elimination
    (with exact polynomial division) beyond; the sign convention is the
    Leibniz sign in the given row order.
    """
    n = len(matrix)
    if n == 0:
        raise NonSquare("empty matrix")
    if any(len(row) != n for row in matrix):
        raise NonSquare("matrix is not square")
    ref = matrix[0][0]
    nv, nq = ref.nv, ref.nq
    if n <= 4:
        return _det_cofactor(matrix, nv, nq)
    m = [[e for e in row] for row in matrix]
    sign = 1
    prev = Polynomial.const(nv, 1, nq)
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Polynomial.zero(nv, nq)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev)
            m[i][k] = Polynomial.zero(nv, nq)
        prev = m[k][k]
    result = m[n - 1][n - 1]
    return result if sign == 1 else -result


def _det_cofactor(matrix, nv: int, nq: int) -> Polynomial:
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = Polynomial.zero(nv, nq)
    for j in range(n):
        entry = matrix[0][j]
        if not entry:
            continue
        minor = [[matrix[i][c] for c in range(n) if c != j] for i in range(1, n)]
        sub = _det_cofactor(minor, nv, nq)
        term = entry * sub
        total = total + (term if j % 2 == 0 else -term)
    return total


# ---- parsing --------------------------------------------------------------

def parse_polynomial(text: str, d_symbols: Sequence[Polynomial],
                     q_symbols: Sequence[Polynomial] = ()) -> Polynomial:
    """Parse the user-facing polynomial syntax.

    Terms like ``3/2*D1^2*D3 - q1*D4``; ``D<i>`` is the class of the i-th
    ray divisor (1-based) and ``q<j>`` the j-th Mori generator, both taken
    from the supplied symbol tables.  Whitespace is insignificant.
    """
    if not d_symbols:
        raise PolyError("no divisor symbols supplied")
    ref = (list(q_symbols) + list(d_symbols))[0]
    nv, nq = ref.nv, ref.nq
    one = Polynomial.const(nv, 1, nq)

    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else ("end", None, len(text))

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def parse_expr():
        kind, _, at = peek()
        sign = 1
        if kind == "op" and peek()[1] in "+-":
            if take()[1] == "-":
                sign = -1
        total = parse_term() * sign
        while True:
            kind, val, at = peek()
            if kind == "op" and val in "+-":
                take()
                nxt = parse_term()
                total = total + (nxt if val == "+" else -nxt)
            else:
                return total

    def parse_term():
        result = parse_factor()
        while True:
            kind, val, at = peek()
            if kind == "op" and val == "*":
                take()
                result = result * parse_factor()
            else:
                return result

    def parse_factor():
        base = parse_atom()
        kind, val, at = peek()
        if kind == "op" and val == "^":
            take()
            kind, val, at = peek()
            if kind != "num" or "/" in val:
                raise ParseError("exponent must be a nonnegative integer", at)
            take()
            exp = int(val)
            if exp < 0:
                raise ParseError("exponent must be a nonnegative integer", at)
            return base ** exp
        return base

    def parse_atom():
        kind, val, at = take()
        if kind == "num":
            if "/" in val:
                num, den = val.split("/")
                return one * Fraction(int(num), int(den))
            return one * int(val)
        if kind == "sym":
            letter, index = val
            table = d_symbols if letter == "D" else q_symbols
            if index < 1 or index > len(table):
                raise ParseError(f"unknown symbol {letter}{index}", at)
            return table[index - 1]
        if kind == "op" and val == "(":
            inner = parse_expr()
            kind, val, at = take()
            if val != ")":
                raise ParseError("expected ')'", at)
            return inner
        if kind == "op" and val == "-":
            return -parse_atom()
        raise ParseError(f"unexpected token {val!r}", at)

    result = parse_expr()
    kind, val, at = peek()
    if kind != "end":
        raise ParseError(f"unexpected token {val!r}", at)
    return result


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()":
            tokens.append(("op", ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "/":
                k = j + 1
                while k < n and text[k].isdigit():
                    k += 1
                if k == j + 1:
                    raise ParseError("malformed rational number", j)
                tokens.append(("num", text[i:k], i))
                i = k
            else:
                tokens.append(("num", text[i:j], i))
                i = j
            continue
        if ch in "Dq":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError(f"symbol '{ch}' needs a numeric index", i)
            tokens.append(("sym", (ch, int(text[i + 1:j])), i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    return tokens
