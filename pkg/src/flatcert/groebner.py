"""Monomial orders, Buchberger completion, reduced bases, initial ideals,
and combinatorial dimension of monomial quotients.

Determinism notes.  Reduction always rewrites the largest reducible term by
the first applicable divisor in the basis's stored order.  Completion
selects the pending S-pair with the smallest lcm in the active order, ties
broken lexicographically on the generator index pair; pairs are skipped by
the coprimality criterion and the chain criterion.  Verification
(is_groebner_basis) reduces every S-pair with no skipping and reports the
reduction chain lengths, so certificates are reproducible run to run.

Parameter variables compare below all x/y variables in every order, so
leading terms are taken with respect to x/y content when chart or torus
parameters are still symbolic.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, ClassVar, Iterable, Sequence

from .polyring import (
    BiMonomial,
    BiPolynomial,
    Exponents,
    UniverseMismatchError,
    VariableUniverse,
)

OrderKey = Callable[[Exponents], tuple]


class DimensionUndefinedError(ValueError):
    """Dimension was requested for the whole ring (the ideal contains a unit)."""


@dataclass(frozen=True)
class MonomialOrderSpec:
    """A monomial order: kind plus an optional ordering of the x/y variables.

    variable_permutation lists x/y variable names from most to least
    significant; None means the natural order x1 > ... > x{n+1} > y1 > ...
    > y{n+1}.  Parameters always compare below every x/y variable, among
    themselves by universe order.
    """

    kind: str = "lex"
    variable_permutation: tuple[str, ...] | None = None

    KINDS: ClassVar[tuple[str, ...]] = ("lex", "grevlex", "block_lex_x_then_y")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown order kind {self.kind!r}; choose from {self.KINDS}")
        if self.variable_permutation is not None:
            object.__setattr__(self, "variable_permutation", tuple(self.variable_permutation))

    def permutation_indices(self, universe: VariableUniverse) -> tuple[int, ...]:
        nxy = universe.num_xy
        if self.variable_permutation is None:
            return tuple(range(nxy))
        idx = []
        for name in self.variable_permutation:
            i = universe.index.get(name)
            if i is None or universe.is_param_index(i):
                raise ValueError(f"{name!r} is not an x/y variable of this universe")
            idx.append(i)
        if sorted(idx) != list(range(nxy)):
            raise ValueError("variable_permutation must list every x/y variable exactly once")
        return tuple(idx)

    def key_function(self, universe: VariableUniverse) -> OrderKey:
        """Additive key; comparing keys compares monomials."""
        perm = self.permutation_indices(universe)
        nxy = universe.num_xy
        if self.kind == "lex":
            def key(e: Exponents) -> tuple:
                return tuple(e[i] for i in perm) + e[nxy:]
        elif self.kind == "grevlex":
            rev = tuple(reversed(perm))

            def key(e: Exponents) -> tuple:
                deg = 0
                for i in perm:
                    deg += e[i]
                return (deg,) + tuple(-e[i] for i in rev) + e[nxy:]
        else:  # block_lex_x_then_y: x-block strictly dominates, graded lex inside each block
            k = universe.n + 1
            xs = tuple(i for i in perm if i < k)
            ys = tuple(i for i in perm if i >= k)

            def key(e: Exponents) -> tuple:
                dx = sum(e[i] for i in xs)
                dy = sum(e[i] for i in ys)
                return (dx,) + tuple(e[i] for i in xs) + (dy,) + tuple(e[i] for i in ys) + e[nxy:]
        return key

    def describe(self, universe: VariableUniverse) -> str:
        perm = self.permutation_indices(universe)
        return f"{self.kind}({'>'.join(universe.names[i] for i in perm)})"

    def to_json_dict(self) -> dict:
        return {"kind": self.kind,
                "variable_permutation": list(self.variable_permutation) if self.variable_permutation else None}


DEFAULT_ORDER = MonomialOrderSpec("lex", None)


def _resolve(order: MonomialOrderSpec | None) -> MonomialOrderSpec:
    return DEFAULT_ORDER if order is None else order


# --- monomial helpers on raw exponent tuples ---

def monomial_divides(a: Exponents, b: Exponents) -> bool:
    return all(x <= y for x, y in zip(a, b))

def monomial_mul(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x + y for x, y in zip(a, b))

def monomial_quotient(b: Exponents, a: Exponents) -> Exponents:
    q = tuple(x - y for x, y in zip(b, a))
    if any(v < 0 for v in q):
        raise ValueError("monomial quotient with negative exponent")
    return q

def monomial_lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(max(x, y) for x, y in zip(a, b))


def leading_term(f: BiPolynomial, keyf: OrderKey) -> tuple[Exponents, Fraction]:
    if not f.terms:
        raise ValueError("the zero polynomial has no leading term")
    e = max(f.terms, key=keyf)
    return e, f.terms[e]


def leading_monomial(f: BiPolynomial, order: MonomialOrderSpec | None = None) -> BiMonomial:
    keyf = _resolve(order).key_function(f.universe)
    e, _ = leading_term(f, keyf)
    return BiMonomial(f.universe, e)


# --- reduction ---

_GData = list[tuple[Exponents, Fraction, dict[Exponents, Fraction]]]


def _gdata(basis: Sequence[BiPolynomial], keyf: OrderKey) -> _GData:
    data = []
    for g in basis:
        lm, lc = leading_term(g, keyf)
        data.append((lm, lc, g.terms))
    return data


def _reduce_terms(terms: dict[Exponents, Fraction], gdata: _GData,
                  keyf: OrderKey) -> tuple[dict[Exponents, Fraction], int]:
    """Full division-algorithm remainder plus the reduction chain length."""
    h = dict(terms)
    r: dict[Exponents, Fraction] = {}
    steps = 0
    while h:
        lead = max(h, key=keyf)
        c = h[lead]
        for lm, lc, gterms in gdata:
            if monomial_divides(lm, lead):
                shift = tuple(a - b for a, b in zip(lead, lm))
                factor = c / lc
                for ge, gc in gterms.items():
                    e = tuple(a + b for a, b in zip(ge, shift))
                    v = h.get(e, Fraction(0)) - factor * gc
                    if v:
                        h[e] = v
                    else:
                        h.pop(e, None)
                steps += 1
                break
        else:
            r[lead] = c
            del h[lead]
    return r, steps


def normal_form(f: BiPolynomial, basis: Sequence[BiPolynomial],
                order: MonomialOrderSpec | None = None) -> BiPolynomial:
    """Deterministic full remainder of f modulo the listed polynomials."""
    order = _resolve(order)
    keyf = order.key_function(f.universe)
    for g in basis:
        if g.universe != f.universe:
            raise UniverseMismatchError("basis and argument universes differ")
        if g.is_zero():
            raise ValueError("zero polynomial in reduction basis")
    r, _ = _reduce_terms(f.terms, _gdata(basis, keyf), keyf)
    return BiPolynomial(f.universe, _canonical=r)


def spolynomial(f: BiPolynomial, g: BiPolynomial,
                order: MonomialOrderSpec | None = None) -> BiPolynomial:
    order = _resolve(order)
    keyf = order.key_function(f.universe)
    lmf, lcf = leading_term(f, keyf)
    lmg, lcg = leading_term(g, keyf)
    lcm = monomial_lcm(lmf, lmg)
    mf = BiPolynomial(f.universe, _canonical={monomial_quotient(lcm, lmf): 1 / lcf})
    mg = BiPolynomial(g.universe, _canonical={monomial_quotient(lcm, lmg): 1 / lcg})
    return mf * f - mg * g


# --- Buchberger completion ---

@dataclass
class SPairEvent:
    i: int
    j: int
    lcm: str
    action: str  # reduced_to_zero | new_generator | skipped_coprime | skipped_chain
    reduction_steps: int = 0

    def to_json_dict(self) -> dict:
        return {"pair": [self.i, self.j], "lcm": self.lcm,
                "action": self.action, "reduction_steps": self.reduction_steps}


@dataclass
class BuchbergerRun:
    """Audit trail of one completion: per-pair events and the reduced basis."""

    order: MonomialOrderSpec
    events: list[SPairEvent] = field(default_factory=list)
    basis: tuple[BiPolynomial, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "order": self.order.to_json_dict(),
            "events": [ev.to_json_dict() for ev in self.events],
            "basis": [str(g) for g in self.basis],
        }


def _monic(f: BiPolynomial, keyf: OrderKey) -> BiPolynomial:
    _, lc = leading_term(f, keyf)
    return f if lc == 1 else f / lc


def _interreduce(basis: list[BiPolynomial], keyf: OrderKey) -> list[BiPolynomial]:
    """Minimalize leading terms, then reduce tails to a fixpoint."""
    ordered = sorted(basis, key=lambda g: keyf(leading_term(g, keyf)[0]))
    minimal: list[BiPolynomial] = []
    for g in ordered:
        lm = leading_term(g, keyf)[0]
        if not any(monomial_divides(leading_term(h, keyf)[0], lm) for h in minimal):
            minimal.append(_monic(g, keyf))
    changed = True
    while changed:
        changed = False
        for i, g in enumerate(minimal):
            others = minimal[:i] + minimal[i + 1:]
            if not others:
                continue
            r, _ = _reduce_terms(g.terms, _gdata(others, keyf), keyf)
            rp = _monic(BiPolynomial(g.universe, _canonical=r), keyf)
            if rp != g:
                minimal[i] = rp
                changed = True
    minimal.sort(key=lambda g: keyf(leading_term(g, keyf)[0]))
    return minimal


def buchberger(gens: Sequence[BiPolynomial],
               order: MonomialOrderSpec | None = None) -> tuple[tuple[BiPolynomial, ...], BuchbergerRun]:
    """Reduced Groebner basis of <gens> plus the S-pair audit trail."""
    order = _resolve(order)
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    uni = gens[0].universe
    for g in gens:
        if g.universe != uni:
            raise UniverseMismatchError("generators live over different universes")
        if g.is_zero():
            raise ValueError("zero generator")
    keyf = order.key_function(uni)
    run = BuchbergerRun(order=order)

    G = [_monic(g, keyf) for g in gens]
    lms = [leading_term(g, keyf)[0] for g in G]
    pending: set[tuple[int, int]] = set(combinations(range(len(G)), 2))

    while pending:
        best = min(pending, key=lambda ij: (keyf(monomial_lcm(lms[ij[0]], lms[ij[1]])), ij))
        pending.remove(best)
        i, j = best
        lcm = monomial_lcm(lms[i], lms[j])
        lcm_text = uni.monomial_text(lcm)
        if lcm == monomial_mul(lms[i], lms[j]):
            run.events.append(SPairEvent(i, j, lcm_text, "skipped_coprime"))
            continue
        chain = False
        for k in range(len(G)):
            if k in (i, j) or not monomial_divides(lms[k], lcm):
                continue
            p1 = (min(i, k), max(i, k))
            p2 = (min(j, k), max(j, k))
            if p1 not in pending and p2 not in pending:
                chain = True
                break
        if chain:
            run.events.append(SPairEvent(i, j, lcm_text, "skipped_chain"))
            continue
        s = spolynomial(G[i], G[j], order)
        r, steps = _reduce_terms(s.terms, _gdata(G, keyf), keyf)
        if r:
            g_new = _monic(BiPolynomial(uni, _canonical=r), keyf)
            G.append(g_new)
            lms.append(leading_term(g_new, keyf)[0])
            m = len(G) - 1
            pending.update((t, m) for t in range(m))
            run.events.append(SPairEvent(i, j, lcm_text, "new_generator", steps))
        else:
            run.events.append(SPairEvent(i, j, lcm_text, "reduced_to_zero", steps))

    basis = tuple(_interreduce(G, keyf))
    run.basis = basis
    return basis, run


@dataclass
class GroebnerCertificate:
    """Exhaustive S-pair verification: every pair, its lcm, its chain length."""

    order: MonomialOrderSpec
    passed: bool
    spairs: list[dict]

    def to_json_dict(self) -> dict:
        return {"order": self.order.to_json_dict(), "passed": self.passed, "spairs": self.spairs}


def is_groebner_basis(basis: Sequence[BiPolynomial],
                      order: MonomialOrderSpec | None = None) -> tuple[bool, GroebnerCertificate]:
    """Reduce every S-pair of `basis`; no criteria, no shortcuts."""
    order = _resolve(order)
    basis = list(basis)
    if not basis:
        raise ValueError("need at least one basis element")
    uni = basis[0].universe
    keyf = order.key_function(uni)
    gdata = _gdata(basis, keyf)
    lms = [d[0] for d in gdata]
    spairs = []
    passed = True
    for i, j in combinations(range(len(basis)), 2):
        s = spolynomial(basis[i], basis[j], order)
        r, steps = _reduce_terms(s.terms, gdata, keyf)
        zero = not r
        passed = passed and zero
        spairs.append({
            "pair": [i, j],
            "lcm": uni.monomial_text(monomial_lcm(lms[i], lms[j])),
            "reduction_steps": steps,
            "remainder_zero": zero,
        })
    return passed, GroebnerCertificate(order=order, passed=passed, spairs=spairs)


# --- ideals ---

class Ideal:
    """A finitely generated bihomogeneous ideal with cached reduced bases.

    The cache maps an order spec to (reduced basis, initial ideal); writes
    happen once per order under a lock, so concurrent readers are safe.
    """

    __slots__ = ("universe", "generators", "_cache", "_lock")

    def __init__(self, universe: VariableUniverse, generators: Iterable[BiPolynomial]):
        gens = tuple(generators)
        if not gens:
            raise ValueError("an ideal here needs at least one generator")
        for g in gens:
            if not isinstance(g, BiPolynomial):
                raise TypeError("generators must be BiPolynomial")
            if g.universe != universe:
                raise UniverseMismatchError("generator universe differs from the ideal's")
            if g.is_zero():
                raise ValueError("zero generator")
        self.universe = universe
        self.generators = gens
        self._cache: dict[MonomialOrderSpec, tuple[tuple[BiPolynomial, ...], tuple[BiMonomial, ...]]] = {}
        self._lock = threading.Lock()

    def _computed(self, order: MonomialOrderSpec) -> tuple[tuple[BiPolynomial, ...], tuple[BiMonomial, ...]]:
        hit = self._cache.get(order)
        if hit is not None:
            return hit
        with self._lock:
            hit = self._cache.get(order)
            if hit is not None:
                return hit
            basis, _ = buchberger(self.generators, order)
            keyf = order.key_function(self.universe)
            lead = sorted((leading_term(g, keyf)[0] for g in basis), reverse=True)
            initial = tuple(BiMonomial(self.universe, e) for e in lead)
            self._cache[order] = (basis, initial)
            return self._cache[order]

    def groebner_basis(self, order: MonomialOrderSpec | None = None) -> tuple[BiPolynomial, ...]:
        return self._computed(_resolve(order))[0]

    def initial_ideal(self, order: MonomialOrderSpec | None = None) -> tuple[BiMonomial, ...]:
        """Minimal monomial generators of the ideal of leading terms."""
        return self._computed(_resolve(order))[1]

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators[:4])
        more = ", ..." if len(self.generators) > 4 else ""
        return f"Ideal({gens}{more})"


def initial_ideal(ideal: Ideal, order: MonomialOrderSpec | None = None) -> tuple[BiMonomial, ...]:
    return ideal.initial_ideal(order)


# --- dimension of monomial quotients ---

def _max_independent_subset(supports: list[frozenset[int]], num_vars: int) -> int:
    """Largest variable set containing no generator's full support."""
    for size in range(num_vars, -1, -1):
        for combo in combinations(range(num_vars), size):
            s = set(combo)
            if all(not sup <= s for sup in supports):
                return size
    return 0


def ideal_dimension(ideal: Ideal, order: MonomialOrderSpec | None = None,
                    projective: bool = False) -> int:
    """Krull dimension of the quotient by the initial ideal.

    Affine cone dimension by default; projective=True subtracts 2, one for
    each of the two projective scalings.
    """
    init = ideal.initial_ideal(order)
    supports = []
    for m in init:
        s = frozenset(i for i, e in enumerate(m.exponents) if e)
        if not s:
            raise DimensionUndefinedError("the ideal is the whole ring")
        supports.append(s)
    dim = _max_independent_subset(supports, ideal.universe.num_vars)
    return dim - 2 if projective else dim


# --- monomial ideal utilities ---

def minimalize_monomial_exponents(exps: Iterable[Exponents]) -> list[Exponents]:
    """Minimal generators: drop any monomial divisible by another one."""
    unique = sorted(set(exps), key=lambda e: (sum(e), e))
    out: list[Exponents] = []
    for e in unique:
        if not any(monomial_divides(kept, e) for kept in out):
            out.append(e)
    return sorted(out, reverse=True)


def intersect_monomial_exponents(a: Iterable[Exponents], b: Iterable[Exponents]) -> list[Exponents]:
    """Intersection of two monomial ideals via pairwise lcms."""
    return minimalize_monomial_exponents(monomial_lcm(x, y) for x in a for y in b)
