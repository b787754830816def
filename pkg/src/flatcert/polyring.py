"""Exact sparse polynomial arithmetic over Q, bigraded in two blocks.

Every ring here has n+1 point coordinates ``x1..x{n+1}``, n+1 dual
coordinates ``y1..y{n+1}``, and optionally a block of parameter variables
(chart coordinates ``d1..dn``, unipotent entries ``u{i}_{j}``, torus
coordinates ``c1..cn``).  The bidegree of a monomial counts x-exponents and
y-exponents only; parameters sit in bidegree (0, 0) and travel through all
graded bookkeeping as scalars.

Representation: a polynomial is a finite map from exponent tuples (one slot
per variable, x-block then y-block then parameter block) to nonzero
``Fraction`` coefficients.  The zero polynomial is the empty map, and a
polynomial is canonical by construction: no zero coefficients are stored
and equality is plain map equality.  All arithmetic is exact; nothing in
this package touches floating point.

The text format round-trips bit-exactly: ``str`` orders terms by descending
exponent tuple (equivalently, lex with x1 > ... > x{n+1} > y1 > ... >
y{n+1} > parameters) and ``parse_polynomial`` accepts what ``str`` emits,
plus whitespace and explicit unit coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

Exponents = tuple[int, ...]
Rational = Union[Fraction, int]


class UniverseMismatchError(ValueError):
    """Operands live over different variable universes."""


class UnknownVariableError(ValueError):
    """A substitution or parse referenced a variable the universe lacks."""


class ParseError(ValueError):
    """Malformed polynomial text."""


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_TOKEN_RE = re.compile(r"\s*([+\-*]|[A-Za-z][A-Za-z0-9_]*(?:\^[0-9]+)?|[0-9]+(?:/[0-9]+)?)")


@dataclass(frozen=True)
class VariableUniverse:
    """Variable layout of one ring: x-block, y-block, parameter block.

    Exponent tuples index variables in exactly this order.
    """

    n: int
    x_names: tuple[str, ...]
    y_names: tuple[str, ...]
    param_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"projective dimension must be >= 1, got {self.n}")
        if len(self.x_names) != self.n + 1 or len(self.y_names) != self.n + 1:
            raise ValueError("x and y blocks must each have n+1 names")
        names = (*self.x_names, *self.y_names, *self.param_names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"bad variable name {name!r}")

    @staticmethod
    def standard(n: int, params: Sequence[str] = ()) -> "VariableUniverse":
        """The ring for P^n x P^n-dual: x1..x{n+1}, y1..y{n+1}, given parameters."""
        return VariableUniverse(
            n,
            tuple(f"x{i}" for i in range(1, n + 2)),
            tuple(f"y{i}" for i in range(1, n + 2)),
            tuple(params),
        )

    @cached_property
    def names(self) -> tuple[str, ...]:
        return (*self.x_names, *self.y_names, *self.param_names)

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @property
    def num_vars(self) -> int:
        return 2 * (self.n + 1) + len(self.param_names)

    @property
    def num_xy(self) -> int:
        return 2 * (self.n + 1)

    def is_param_index(self, i: int) -> bool:
        return i >= self.num_xy

    def bidegree_of(self, exps: Exponents) -> tuple[int, int]:
        k = self.n + 1
        return (sum(exps[:k]), sum(exps[k:2 * k]))

    def drop_params(self, names: Iterable[str]) -> "VariableUniverse":
        gone = set(names)
        unknown = gone - set(self.param_names)
        if unknown:
            raise UnknownVariableError(f"not parameter variables: {sorted(unknown)}")
        return VariableUniverse(
            self.n, self.x_names, self.y_names,
            tuple(p for p in self.param_names if p not in gone),
        )

    # --- element constructors ---

    def zero(self) -> "BiPolynomial":
        return BiPolynomial(self, _canonical={})

    def one(self) -> "BiPolynomial":
        return self.constant(1)

    def constant(self, q: Rational) -> "BiPolynomial":
        q = Fraction(q)
        if not q:
            return self.zero()
        return BiPolynomial(self, _canonical={(0,) * self.num_vars: q})

    def variable(self, name: str) -> "BiPolynomial":
        i = self.index.get(name)
        if i is None:
            raise UnknownVariableError(name)
        exps = [0] * self.num_vars
        exps[i] = 1
        return BiPolynomial(self, _canonical={tuple(exps): Fraction(1)})

    def monomial(self, exps: Sequence[int]) -> "BiMonomial":
        return BiMonomial(self, tuple(int(e) for e in exps))

    def polynomial(self, terms: Mapping[Sequence[int], Rational]) -> "BiPolynomial":
        return BiPolynomial(self, terms)

    def parse(self, text: str) -> "BiPolynomial":
        return parse_polynomial(self, text)

    def monomial_text(self, exps: Exponents) -> str:
        parts = []
        for i, e in enumerate(exps):
            if e:
                name = self.names[i]
                parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)


@dataclass(frozen=True)
class BiMonomial:
    """One monomial of a universe, with its x/y bidegree."""

    universe: VariableUniverse
    exponents: Exponents

    def __post_init__(self) -> None:
        if len(self.exponents) != self.universe.num_vars:
            raise ValueError("exponent tuple length does not match the universe")
        if any(e < 0 for e in self.exponents):
            raise ValueError("exponents must be nonnegative")

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.universe.bidegree_of(self.exponents)

    def divides(self, other: "BiMonomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def as_polynomial(self) -> "BiPolynomial":
        return BiPolynomial(self.universe, _canonical={self.exponents: Fraction(1)})

    def __str__(self) -> str:
        return self.universe.monomial_text(self.exponents) or "1"

    def __repr__(self) -> str:
        return f"BiMonomial({str(self)!r})"


class BiPolynomial:
    """Sparse exact polynomial; treat instances as immutable."""

    __slots__ = ("universe", "terms")

    def __init__(self, universe: VariableUniverse,
                 terms: Mapping[Sequence[int], Rational] = (),
                 *, _canonical: dict[Exponents, Fraction] | None = None):
        self.universe = universe
        if _canonical is not None:
            self.terms = _canonical
            return
        nv = universe.num_vars
        acc: dict[Exponents, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, coeff in items:
            e = tuple(int(v) for v in exps)
            if len(e) != nv:
                raise ValueError(f"exponent tuple of length {len(e)}, universe has {nv} variables")
            if any(v < 0 for v in e):
                raise ValueError("exponents must be nonnegative")
            c = acc.get(e, Fraction(0)) + Fraction(coeff)
            if c:
                acc[e] = c
            else:
                acc.pop(e, None)
        self.terms = acc

    # --- predicates and views ---

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def terms_sorted(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in canonical order: descending exponent tuple."""
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def support(self) -> set[int]:
        used: set[int] = set()
        for e in self.terms:
            for i, v in enumerate(e):
                if v:
                    used.add(i)
        return used

    def is_bihomogeneous(self) -> bool:
        """True if every term has the same x/y bidegree (parameters ignored)."""
        return len({self.universe.bidegree_of(e) for e in self.terms}) <= 1

    def bidegree(self) -> tuple[int, int] | None:
        """The common bidegree, (0, 0) for zero, None if inhomogeneous."""
        degs = {self.universe.bidegree_of(e) for e in self.terms}
        if not degs:
            return (0, 0)
        if len(degs) > 1:
            return None
        return degs.pop()

    # --- arithmetic ---

    def _check(self, other: "BiPolynomial") -> None:
        if other.universe != self.universe:
            raise UniverseMismatchError(
                f"universes differ: {self.universe.names} vs {other.universe.names}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.universe.constant(other)
        if not isinstance(other, BiPolynomial):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return BiPolynomial(self.universe, _canonical=out)

    __radd__ = __add__

    def __neg__(self):
        return BiPolynomial(self.universe, _canonical={e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.universe.constant(other)
        if not isinstance(other, BiPolynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                return self.universe.zero()
            return BiPolynomial(self.universe,
                                _canonical={e: c * q for e, c in self.terms.items()})
        if not isinstance(other, BiPolynomial):
            return NotImplemented
        self._check(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                if v is None:
                    out[e] = c1 * c2
                else:
                    v = v + c1 * c2
                    if v:
                        out[e] = v
                    else:
                        del out[e]
        return BiPolynomial(self.universe, _canonical=out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                raise ZeroDivisionError("division of a polynomial by zero")
            return self * (1 / q)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        out = self.universe.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.universe.constant(other)
        if not isinstance(other, BiPolynomial):
            return NotImplemented
        return self.universe == other.universe and self.terms == other.terms

    __hash__ = None  # mutable-looking container; never used as a dict key

    def __str__(self) -> str:
        return polynomial_text(self)

    def __repr__(self) -> str:
        return f"BiPolynomial({polynomial_text(self)!r})"

    # --- substitution ---

    def substitute(self, assignment: Mapping[str, Union["BiPolynomial", Rational]],
                   drop_params: bool = True) -> "BiPolynomial":
        """Ring-map evaluation: replace named variables by values.

        Values are rationals or polynomials over the same universe.
        Parameter variables assigned a constant disappear from the result's
        universe (when drop_params is set); x/y variables always keep their
        slots.  Substituting into an x/y variable may break bihomogeneity;
        the caller can consult is_bihomogeneous() on the result.
        """
        uni = self.universe
        values: dict[int, BiPolynomial] = {}
        constant_params: list[str] = []
        for name, val in assignment.items():
            i = uni.index.get(name)
            if i is None:
                raise UnknownVariableError(name)
            v = val if isinstance(val, BiPolynomial) else uni.constant(val)
            if v.universe != uni:
                raise UniverseMismatchError(f"value for {name} lives in a different universe")
            values[i] = v
            if uni.is_param_index(i) and not v.support():
                constant_params.append(name)
        if not values:
            return self

        pow_cache: dict[tuple[int, int], BiPolynomial] = {}

        def power(i: int, e: int) -> BiPolynomial:
            key = (i, e)
            hit = pow_cache.get(key)
            if hit is None:
                hit = values[i] ** e
                pow_cache[key] = hit
            return hit

        total = uni.zero()
        for exps, coeff in self.terms.items():
            base = list(exps)
            factors = []
            for i, e in enumerate(exps):
                if e and i in values:
                    base[i] = 0
                    factors.append((i, e))
            piece = BiPolynomial(uni, _canonical={tuple(base): coeff})
            for i, e in factors:
                piece = piece * power(i, e)
            total = total + piece

        if drop_params and constant_params:
            total = total._project_off_params(constant_params)
        return total

    def _project_off_params(self, names: Sequence[str]) -> "BiPolynomial":
        uni = self.universe
        target = uni.drop_params(names)
        gone = sorted(uni.index[name] for name in names)
        keep = [i for i in range(uni.num_vars) if i not in set(gone)]
        out: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            if any(e[i] for i in gone):
                raise ValueError("cannot drop a parameter that still occurs")
            out[tuple(e[i] for i in keep)] = c
        return BiPolynomial(target, _canonical=out)


def substitute(f: BiPolynomial, assignment: Mapping[str, Union[BiPolynomial, Rational]],
               drop_params: bool = True) -> BiPolynomial:
    return f.substitute(assignment, drop_params=drop_params)


def proportionality_ratio(f: BiPolynomial, g: BiPolynomial) -> Fraction | None:
    """The rational q with f == q*g, or None if no such q exists (g nonzero)."""
    if g.universe != f.universe:
        raise UniverseMismatchError("cannot compare across universes")
    if g.is_zero():
        raise ValueError("proportionality against the zero polynomial")
    if f.is_zero():
        return Fraction(0)
    if f.terms.keys() != g.terms.keys():
        return None
    e0 = next(iter(f.terms))
    q = f.terms[e0] / g.terms[e0]
    for e, c in f.terms.items():
        if c != q * g.terms[e]:
            return None
    return q


# --- text format ---

def polynomial_text(f: BiPolynomial) -> str:
    if not f.terms:
        return "0"
    uni = f.universe
    out: list[str] = []
    for e, c in f.terms_sorted():
        neg = c < 0
        mag = -c if neg else c
        mono = uni.monomial_text(e)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def parse_polynomial(universe: VariableUniverse, text: str) -> BiPolynomial:
    """Parse the text format; inverse of str() on canonical output."""
    s = text.rstrip()
    pos = 0
    tokens: list[str] = []
    while pos < len(s):
        m = _TOKEN_RE.match(s, pos)
        if not m:
            raise ParseError(f"unexpected input at position {pos}: {s[pos:pos + 12]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    if not tokens:
        raise ParseError("empty polynomial text")

    nv = universe.num_vars
    acc: dict[Exponents, Fraction] = {}
    i = 0
    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i] in "+-":
            if tokens[i] == "-":
                sign = -sign
            i += 1
        if i >= len(tokens):
            raise ParseError("dangling sign at end of input")
        coeff = Fraction(sign)
        exps = [0] * nv
        while True:
            tok = tokens[i]
            if tok in "+-*":
                raise ParseError(f"expected a factor, got {tok!r}")
            if tok[0].isdigit():
                coeff *= Fraction(tok)
            else:
                name, _, exp_s = tok.partition("^")
                idx = universe.index.get(name)
                if idx is None:
                    raise UnknownVariableError(name)
                exps[idx] += int(exp_s) if exp_s else 1
            i += 1
            if i < len(tokens) and tokens[i] == "*":
                i += 1
                if i >= len(tokens):
                    raise ParseError("dangling '*' at end of input")
                continue
            break
        e = tuple(exps)
        c = acc.get(e, Fraction(0)) + coeff
        if c:
            acc[e] = c
        else:
            acc.pop(e, None)
    return BiPolynomial(universe, _canonical=acc)


# --- monomial enumeration ---

def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` nonnegative ints summing to `total`, descending lex."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def iter_exponents_of_bidegree(universe: VariableUniverse, a: int, b: int) -> Iterator[Exponents]:
    """Exponent tuples of bidegree (a, b) with zero parameter part, descending."""
    if a < 0 or b < 0:
        return
    k = universe.n + 1
    tail = (0,) * len(universe.param_names)
    for xa in _compositions(a, k):
        for yb in _compositions(b, k):
            yield xa + yb + tail


def monomials_of_bidegree(universe: VariableUniverse, a: int, b: int) -> list[BiMonomial]:
    """All monomials of bidegree (a, b); C(a+n,n)*C(b+n,n) of them."""
    return [BiMonomial(universe, e) for e in iter_exponents_of_bidegree(universe, a, b)]
