"""Frobenius powers, Frobenius-closure tests, and tight-closure multiplier
searches in F_p[x, y, z] / (x^3 + y^3 + z^3).

Tight closure is only ever tested up to a finite Frobenius exponent e_max;
reports therefore state "verified for e <= e_max" rather than claiming the
unbounded statement.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

from .coefficients import PrimeField
from .groebner import GroebnerBasis, groebner, normal_form
from .polynomials import Poly, RingPresentation, format_poly


@lru_cache(maxsize=None)
def fermat_ring(p: int) -> RingPresentation:
    """F_p[x, y, z] / (x^3 + y^3 + z^3); rejects p = 3."""
    return RingPresentation(PrimeField(p), ("z", "x", "y"), relations=["z^3 + x^3 + y^3"])


@dataclass(frozen=True)
class FrobeniusPower:
    base: tuple[Poly, ...]
    e: int

    @property
    def p(self) -> int:
        return self.base[0].ring.domain.p

    @property
    def q(self) -> int:
        return self.p ** self.e

    def generators(self) -> list[Poly]:
        return [g ** self.q for g in self.base]


def frobenius_power(gens, e: int) -> list[Poly]:
    """Bracket power I^[q]: the q-th powers of the generators, q = p^e."""
    if e < 0:
        raise ValueError("Frobenius exponent must be >= 0")
    return FrobeniusPower(tuple(gens), e).generators()


@lru_cache(maxsize=None)
def _bracket_basis(p: int, gen_texts: tuple[str, ...], e: int) -> GroebnerBasis:
    ring = fermat_ring(p)
    gens = [ring.parse(g) for g in gen_texts]
    return groebner(frobenius_power(gens, e), ring)


def _basis_for(gens, e: int) -> GroebnerBasis:
    ring = gens[0].ring
    return _bracket_basis(ring.domain.p, tuple(format_poly(g) for g in gens), e)


def frobenius_closure_test(f: Poly, gens, e: int) -> bool:
    """True iff f^q lies in I^[q] in the quotient ring, q = p^e."""
    q = f.ring.domain.p ** e
    return normal_form(f ** q, _basis_for(list(gens), e)).is_zero()


def tight_closure_witness(f: Poly, gens, c: Poly, e_max: int) -> list[bool]:
    """For e = 1..e_max, whether c * f^(p^e) lies in I^[p^e] in the quotient."""
    ring = f.ring
    if normal_form(c, groebner([], ring)).is_zero():
        raise ZeroDivisionError("multiplier reduces to zero in the quotient ring")
    gens = list(gens)
    p = ring.domain.p
    out = []
    for e in range(1, e_max + 1):
        basis = _basis_for(gens, e)
        out.append(normal_form(c * f ** (p ** e), basis).is_zero())
    return out


def monomials_of_degree(ring: RingPresentation, d: int, lex_names=("x", "y", "z")):
    """Degree-d monomials in graded-lex order with x > y > z."""
    idx = [ring.variables.index(v) for v in lex_names]
    seen = []
    for combo in combinations_with_replacement(range(len(lex_names)), d):
        e = [0] * len(ring.variables)
        for c in combo:
            e[idx[c]] += 1
        seen.append(tuple(e))
    # graded-lex: sort by exponents of (x, y, z) descending
    seen.sort(key=lambda m: tuple(-m[i] for i in idx))
    return [ring.monomial(m) for m in seen]


def find_multiplier(f: Poly, gens, deg_bound: int, e_max: int) -> Poly | None:
    """Smallest-degree nonzero homogeneous c with c * f^q in I^[q] for all
    q = p^e, e <= e_max; monomials are scanned first (graded-lex within a
    degree), then the colon ideal decides whether any non-monomial form of
    the remaining degrees exists.
    """
    if deg_bound < 0 or e_max < 1:
        raise ValueError("deg_bound must be >= 0 and e_max >= 1")
    ring = f.ring
    gens = list(gens)
    p = ring.domain.p
    rel_basis = groebner([], ring)
    bases = [_basis_for(gens, e) for e in range(1, e_max + 1)]
    powers = [f ** (p ** e) for e in range(1, e_max + 1)]

    def qualifies(c: Poly) -> bool:
        if normal_form(c, rel_basis).is_zero():
            return False
        return all(normal_form(c * fe, b).is_zero() for fe, b in zip(powers, bases))

    for d in range(deg_bound + 1):
        for c in monomials_of_degree(ring, d):
            if qualifies(c):
                return c
    # no monomial worked: the admissible multipliers form the intersection of
    # the colon ideals (I^[q] : f^q); a qualifying form of degree <= bound
    # exists iff the reduced basis of that intersection contains one that
    # stays nonzero in the quotient
    from .groebner import colon

    current = None
    for e in range(1, e_max + 1):
        piece = colon(frobenius_power(gens, e), f ** (p ** e), ring)
        current = piece if current is None else _intersect(current, piece, ring)
    for g in groebner(current, ring).generators:
        if g.degree() <= deg_bound and not normal_form(g, rel_basis).is_zero():
            return g.monic()
    return None


def _intersect(gens_a, gens_b, ring: RingPresentation):
    """Intersection of two ideals via a second elimination round."""
    from .groebner import elimination_ring, _lift, _drop, groebner as _gb

    ext = elimination_ring(ring)
    t = ext.var("_t")
    one_minus_t = ext.one() - t
    lifted = [t * _lift(g, ext) for g in list(gens_a) + list(ring.relations)]
    lifted += [one_minus_t * _lift(g, ext) for g in list(gens_b) + list(ring.relations)]
    gb = _gb(lifted, ext, include_relations=False)
    return [_drop(g, ring) for g in gb.generators if g.lm()[0] == 0]


@dataclass(frozen=True)
class ContrastRow:
    p: int
    z2_in_xy: bool
    frobenius_closure_e1: bool
    multiplier: str | None
    multiplier_degree: int | None
    witness_checks: tuple[bool, ...]


def contrast_row(p: int, e_max: int = 2, deg_bound: int = 3) -> ContrastRow:
    """One line of the ordinary/supersingular experiment matrix for z^2
    against (x, y)."""
    ring = fermat_ring(p)
    z2 = ring.parse("z^2")
    gens = [ring.parse("x"), ring.parse("y")]
    member = normal_form(z2, groebner(gens, ring)).is_zero()
    frob = frobenius_closure_test(z2, gens, 1)
    c = find_multiplier(z2, gens, deg_bound, e_max)
    checks: tuple[bool, ...] = ()
    if c is not None:
        checks = tuple(tight_closure_witness(z2, gens, c, e_max))
    return ContrastRow(
        p=p,
        z2_in_xy=member,
        frobenius_closure_e1=frob,
        multiplier=format_poly(c) if c is not None else None,
        multiplier_degree=int(c.degree()) if c is not None else None,
        witness_checks=checks,
    )
