"""Sparse multivariate polynomials over a pluggable exact coefficient domain.

Monomials are plain exponent tuples indexed by the ring's variable list.
The monomial order is graded reverse lexicographic by weighted degree with
ties broken by reverse lex on the declared variable order; weights are exact
Fractions so towers with weights 3^-n stay exact.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .coefficients import CYCLO, CycloNum


def mono_mul(a, b):
    return tuple(i + j for i, j in zip(a, b))


def mono_divides(a, b):
    """True when a divides b componentwise."""
    return all(i <= j for i, j in zip(a, b))


def mono_div(a, b):
    """a / b; caller guarantees divisibility."""
    return tuple(i - j for i, j in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(i, j) for i, j in zip(a, b))


def mono_coprime(a, b):
    return all(i == 0 or j == 0 for i, j in zip(a, b))


class WeightedGrevlex:
    """Weighted grevlex order.  Sort keys increase with the order."""

    tag = "wgrevlex"

    def __init__(self, weights):
        self.weights = tuple(Fraction(w) for w in weights)

    def degree(self, exps) -> Fraction:
        return sum((w * e for w, e in zip(self.weights, exps)), Fraction(0))

    def key(self, exps):
        return (self.degree(exps), tuple(-e for e in reversed(exps)))

    def __eq__(self, other):
        return isinstance(other, WeightedGrevlex) and other.weights == self.weights

    def __hash__(self):
        return hash((self.tag, self.weights))


class BlockElimination:
    """First block of k variables compared by total degree first, then the
    inner order on the remaining variables.  Eliminates the leading block."""

    tag = "elim"

    def __init__(self, block_size: int, inner: WeightedGrevlex):
        self.block_size = block_size
        self.inner = inner
        self.weights = (Fraction(1),) * block_size + inner.weights

    def degree(self, exps) -> Fraction:
        return sum((w * e for w, e in zip(self.weights, exps)), Fraction(0))

    def key(self, exps):
        head = exps[: self.block_size]
        return (sum(head), head, self.inner.key(exps[self.block_size :]))

    def __eq__(self, other):
        return (
            isinstance(other, BlockElimination)
            and other.block_size == self.block_size
            and other.inner == self.inner
        )

    def __hash__(self):
        return hash((self.tag, self.block_size, self.inner))


class RingPresentation:
    """Coefficient domain + ordered variables + weights + relation ideal.

    Relations may be given as polynomial text; they are parsed against this
    ring and must be homogeneous for the declared weights.  Quotient-ring
    semantics: every ideal computation appends the relations internally.
    """

    def __init__(self, domain, variables, weights=None, relations=(), order_tag="wgrevlex"):
        self.domain = domain
        self.variables = tuple(variables)
        if weights is None:
            weights = (Fraction(1),) * len(self.variables)
        self.weights = tuple(Fraction(w) for w in weights)
        if len(self.weights) != len(self.variables):
            raise ValueError("one weight per variable required")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if order_tag != "wgrevlex":
            raise ValueError(f"unknown order tag {order_tag!r}")
        self.order_tag = order_tag
        self.order = WeightedGrevlex(self.weights)
        self._index = {v: i for i, v in enumerate(self.variables)}
        rels = []
        for r in relations:
            poly = self.parse(r) if isinstance(r, str) else r
            if poly.ring is not self:
                poly = Poly(self, dict(poly.terms))
            if not poly.is_homogeneous():
                raise ValueError(f"relation {poly} is not weighted-homogeneous")
            rels.append(poly)
        self.relations = tuple(rels)

    # -- construction helpers ------------------------------------------------

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(self.domain.one)

    def const(self, c) -> "Poly":
        return Poly(self, {(0,) * len(self.variables): self.domain.coerce(c)})

    def var(self, name: str) -> "Poly":
        e = [0] * len(self.variables)
        e[self._index[name]] = 1
        return Poly(self, {tuple(e): self.domain.one})

    def monomial(self, exps, coeff=None) -> "Poly":
        c = self.domain.one if coeff is None else self.domain.coerce(coeff)
        return Poly(self, {tuple(exps): c})

    def parse(self, text: str) -> "Poly":
        return parse_poly(self, text)

    def compatible(self, other: "RingPresentation") -> bool:
        return (
            self.domain == other.domain
            and self.variables == other.variables
            and self.weights == other.weights
            and self.order_tag == other.order_tag
        )

    def descriptor(self) -> dict:
        return {
            "domain": self.domain.descriptor(),
            "variables": list(self.variables),
            "weights": [str(w) for w in self.weights],
            "order": self.order_tag,
            "relations": [format_poly(r) for r in self.relations],
        }

    def __repr__(self):
        rel = f" / ({', '.join(format_poly(r) for r in self.relations)})" if self.relations else ""
        return f"{self.domain.name}[{', '.join(self.variables)}]{rel}"


def ring_from_descriptor(desc: dict) -> RingPresentation:
    from .coefficients import domain_from_descriptor

    return RingPresentation(
        domain_from_descriptor(desc["domain"]),
        desc["variables"],
        [Fraction(w) for w in desc.get("weights", [])] or None,
        desc.get("relations", ()),
        desc.get("order", "wgrevlex"),
    )


class Poly:
    """Immutable sparse polynomial: terms sorted strictly decreasing in the
    ring's order, no zero coefficients, zero polynomial is the empty tuple."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingPresentation, terms: dict):
        self.ring = ring
        key = ring.order.key
        self.terms = tuple(
            (m, c) for m, c in sorted(terms.items(), key=lambda t: key(t[0]), reverse=True) if c
        )

    # -- basic queries -------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def lm(self):
        """Leading monomial (exponent tuple)."""
        return self.terms[0][0]

    def lc(self):
        return self.terms[0][1]

    def lt(self):
        return self.terms[0]

    def degree(self) -> Fraction:
        """Maximal weighted degree among terms; -1 for the zero polynomial."""
        if not self.terms:
            return Fraction(-1)
        return max(self.ring.order.degree(m) for m, _ in self.terms)

    def min_degree(self) -> Fraction:
        if not self.terms:
            raise ValueError("zero polynomial has no minimal degree")
        return min(self.ring.order.degree(m) for m, _ in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        degs = {self.ring.order.degree(m) for m, _ in self.terms}
        return len(degs) == 1

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring.compatible(other.ring) and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if not self.ring.compatible(other.ring):
                raise ValueError("polynomials from incompatible rings")
            return other
        return self.ring.const(other)

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms:
            s = out.get(m)
            out[m] = c if s is None else s + c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms:
            s = out.get(m)
            out[m] = -c if s is None else s - c
        return Poly(self.ring, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Poly) or not self.terms:
            other = self._coerce(other)
            out = {}
            for m1, c1 in self.terms:
                for m2, c2 in other.terms:
                    m = mono_mul(m1, m2)
                    s = out.get(m)
                    prod = c1 * c2
                    out[m] = prod if s is None else s + prod
            return Poly(self.ring, out)
        c = self.ring.domain.coerce(other)
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {m: cc * c for m, cc in self.terms})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def mul_term(self, mono, coeff) -> "Poly":
        return Poly(self.ring, {mono_mul(m, mono): c * coeff for m, c in self.terms})

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        inv = self.ring.domain.inv(self.lc())
        return Poly(self.ring, {m: c * inv for m, c in self.terms})

    def substitute(self, images: dict, target: RingPresentation | None = None) -> "Poly":
        """Ring-map style substitution: each variable goes to its image Poly
        (missing variables map to the same-named variable of the target)."""
        ring = target or next(iter(images.values())).ring
        out = ring.zero()
        cache: dict[tuple[str, int], Poly] = {}
        for m, c in self.terms:
            term = ring.const(c)
            for v, e in zip(self.ring.variables, m):
                if e == 0:
                    continue
                img = cache.get((v, e))
                if img is None:
                    base = images.get(v)
                    if base is None:
                        base = ring.var(v)
                    img = base ** e
                    cache[(v, e)] = img
                term = term * img
            out = out + term
        return out

    def map_coefficients(self, fn, target: RingPresentation) -> "Poly":
        return Poly(target, {m: fn(c) for m, c in self.terms})

    def __repr__(self):
        return format_poly(self)


# ---------------------------------------------------------------------------
# text format: terms like (t^3 + 1)*x1^2*y1, scalars per coefficient domain


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    ring = p.ring
    parts = []
    for m, c in p.terms:
        mono = "*".join(
            v if e == 1 else f"{v}^{e}" for v, e in zip(ring.variables, m) if e
        )
        ctext = ring.domain.format(c, parenthesize=bool(mono))
        if not mono:
            term = ctext
        elif ctext == "1":
            term = mono
        elif ctext == "-1":
            term = f"-{mono}"
        else:
            term = f"{ctext}*{mono}"
        if not parts:
            parts.append(term)
        elif term.startswith("-"):
            parts.append("- " + term[1:])
        else:
            parts.append("+ " + term)
    return " ".join(parts)


_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[()+\-*^]))"
)


class PolyParseError(ValueError):
    pass


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise PolyParseError(f"unexpected character {text[pos]!r} at {pos}")
            break
        if m.group("number"):
            out.append(("num", m.group("number")))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    return out


class _Parser:
    """Recursive descent over + - * ^ ( ); `t` denotes the cyclotomic
    generator when the coefficient domain is Q(zeta_9)."""

    def __init__(self, ring: RingPresentation, tokens):
        self.ring = ring
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise PolyParseError(f"expected {op!r}, found {val!r}")

    def parse_expr(self) -> Poly:
        kind, val = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            self.take()
            negate = val == "-"
        result = self.parse_term()
        if negate:
            result = -result
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.parse_term()
                result = result - rhs if val == "-" else result + rhs
            else:
                return result

    def parse_term(self) -> Poly:
        result = self.parse_factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                result = result * self.parse_factor()
            else:
                return result

    def parse_factor(self) -> Poly:
        base = self.parse_atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k, v = self.take()
            if k != "num" or "/" in v:
                raise PolyParseError("exponent must be a nonnegative integer")
            return base ** int(v)
        return base

    def parse_atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            if "/" in val:
                n, d = val.split("/")
                return self.ring.const(Fraction(int(n), int(d)))
            return self.ring.const(Fraction(int(val)))
        if kind == "name":
            if val in self.ring._index:
                return self.ring.var(val)
            if val == "t" and self.ring.domain == CYCLO:
                return self.ring.const(CycloNum.zeta_power(1))
            raise PolyParseError(f"unknown variable {val!r} (ring has {self.ring.variables})")
        if kind == "op" and val == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if kind == "op" and val == "-":
            return -self.parse_atom()
        raise PolyParseError(f"unexpected token {val!r}")


def parse_poly(ring: RingPresentation, text: str) -> Poly:
    parser = _Parser(ring, _tokenize(text))
    result = parser.parse_expr()
    if parser.pos != len(parser.tokens):
        raise PolyParseError(f"trailing input near token {parser.pos}")
    return result


def parse_cyclo(text: str) -> CycloNum:
    """Parse a cyclotomic scalar given as a polynomial expression in t."""
    scratch = RingPresentation(CYCLO, ())
    poly = parse_poly(scratch, text)
    if not poly.terms:
        return CYCLO.zero
    return poly.terms[0][1]


def exact_divide(f: Poly, g: Poly) -> Poly:
    """Quotient f / g when g divides f exactly; raises otherwise.

    Single-divisor multivariate division: a one-element set is always a
    Groebner basis of the principal ideal it generates.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    inv_lc = ring.domain.inv(g.lc())
    q: dict = {}
    work = f
    while work.terms:
        m, c = work.lt()
        if not mono_divides(g.lm(), m):
            raise ValueError(f"{g} does not divide {f} exactly")
        qm = mono_div(m, g.lm())
        qc = c * inv_lc
        q[qm] = q.get(qm, ring.domain.zero) + qc
        work = work - g.mul_term(qm, qc)
    return Poly(ring, q)
