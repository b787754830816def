"""Diagonal Hilbert functions by two independent routes, exact interpolation
of Hilbert polynomials, and the closed forms they are measured against.

Route one counts standard monomials of the initial ideal (Groebner).  Route
two never touches a Groebner basis: it enumerates all bidegree-(t,t)
multiples of the generators and computes the exact rank of their
coefficient matrix over Q by sparse fraction-free elimination.  The second
route is the referee for the first throughout the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd
from typing import Iterable, Sequence

from .groebner import DEFAULT_ORDER, Ideal
from .polyring import BiPolynomial, Exponents, VariableUniverse, iter_exponents_of_bidegree
from .util import parallel_map, sparse_integer_rank

METHOD_INITIAL = "initial_ideal_count"
METHOD_RANK = "rank_oracle"
_METHOD_ALIASES = {
    "initial": METHOD_INITIAL, METHOD_INITIAL: METHOD_INITIAL,
    "rank": METHOD_RANK, METHOD_RANK: METHOD_RANK,
}


def normalize_method(method: str) -> str:
    """Accept the canonical method names or their short aliases."""
    full = _METHOD_ALIASES.get(method)
    if full is None:
        raise ValueError(f"unknown method {method!r}; choose {METHOD_INITIAL} or {METHOD_RANK}")
    return full


class NonBihomogeneousError(ValueError):
    """A generator mixes bidegrees; Hilbert bookkeeping needs bihomogeneity."""

    def __init__(self, generator: BiPolynomial):
        self.generator = generator
        super().__init__(f"generator is not bihomogeneous: {generator}")


class InterpolationError(RuntimeError):
    pass


class NoStabilizationError(InterpolationError):
    """The table never settles onto one polynomial; carries the residuals."""

    def __init__(self, message: str, residuals: dict[int, tuple[int, Fraction]] | None = None):
        self.residuals = residuals or {}
        detail = ""
        if self.residuals:
            rows = ", ".join(f"t={t}: table {obs} vs fit {pred}"
                             for t, (obs, pred) in sorted(self.residuals.items()))
            detail = f" [{rows}]"
        super().__init__(message + detail)


# --- univariate exact polynomial helpers (coefficient lists, low degree first) ---

def _poly_trim(c: list[Fraction]) -> tuple[Fraction, ...]:
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def _poly_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] += v
    return out


def _poly_scale(a: Sequence[Fraction], q: Fraction) -> list[Fraction]:
    return [v * q for v in a]


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, v in enumerate(a):
        for j, w in enumerate(b):
            out[i + j] += v * w
    return out


def _poly_eval(coeffs: Sequence[Fraction], t: Fraction | int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


@dataclass(frozen=True, eq=False)
class HilbertPolynomialQ:
    """Exact polynomial in t, coefficients low degree first.

    Equality compares coefficients only; the stabilization threshold is
    bookkeeping about where a sampled table started matching.
    """

    coefficients: tuple[Fraction, ...]
    stabilization_threshold: int | None = None

    @staticmethod
    def from_coefficients(coeffs: Iterable[Fraction | int],
                          stabilization_threshold: int | None = None) -> "HilbertPolynomialQ":
        c = [Fraction(v) for v in coeffs]
        return HilbertPolynomialQ(_poly_trim(c), stabilization_threshold)

    def evaluate(self, t: int) -> Fraction:
        return _poly_eval(self.coefficients, t)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1  # -1 for the zero polynomial

    def __eq__(self, other) -> bool:
        if not isinstance(other, HilbertPolynomialQ):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        pieces = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if not c:
                continue
            neg = c < 0
            mag = -c if neg else c
            if k == 0:
                body = str(mag) if mag.denominator == 1 else f"({mag})"
            else:
                var = "t" if k == 1 else f"t^{k}"
                if mag == 1:
                    body = var
                elif mag.denominator == 1:
                    body = f"{mag}{var}"
                else:
                    body = f"({mag}){var}"
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append(("-" if neg else "+") + body)
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"HilbertPolynomialQ({str(self)!r})"

    def to_json_dict(self) -> dict:
        return {
            "coefficients": [str(c) for c in self.coefficients],
            "rendered": str(self),
            "stabilization_threshold": self.stabilization_threshold,
        }


def binomial_basis_coordinates(poly: HilbertPolynomialQ) -> list[Fraction]:
    """Coordinates a_k with p(t) = sum a_k * C(t+k, k); integer for any
    integer-valued polynomial, which is the extra sanity check on fits."""
    work = list(poly.coefficients)
    coords = [Fraction(0)] * len(work)
    for k in range(len(work) - 1, -1, -1):
        basis = [Fraction(1)]
        for i in range(1, k + 1):
            basis = _poly_mul(basis, [Fraction(i), Fraction(1)])
        basis = _poly_scale(basis, Fraction(1, factorial(k)))
        a = work[k] / basis[k]
        coords[k] = a
        work = _poly_add(work, _poly_scale(basis, -a))
    if any(work):
        raise AssertionError("basis conversion did not terminate cleanly")
    return coords


# --- closed forms ---

def _binomial_in_2t(n: int, shift: int) -> list[Fraction]:
    """Coefficients of C(2t + shift, n) as a polynomial in t."""
    out = [Fraction(1)]
    for i in range(1, n + 1):
        out = _poly_mul(out, [Fraction(shift - n + i), Fraction(2)])
    return _poly_scale(out, Fraction(1, factorial(n)))


def chi_graph(n: int) -> HilbertPolynomialQ:
    """C(2t+n, n) - C(2(t-1)+n, n): the shared Hilbert polynomial every fiber
    of the family must hit.  Degree n-1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = _binomial_in_2t(n, n)
    b = _binomial_in_2t(n, n - 2)
    return HilbertPolynomialQ.from_coefficients(_poly_add(a, _poly_scale(b, Fraction(-1))))


def xi_formula(d0: int, d1: int) -> HilbertPolynomialQ:
    """(d0+d1)t - d0*d1*(d0+d1-4)/2, the generic curve count in the plane case."""
    if d0 < 1 or d1 < 1:
        raise ValueError("curve degrees must be >= 1")
    const = Fraction(-d0 * d1 * (d0 + d1 - 4), 2)
    return HilbertPolynomialQ.from_coefficients([const, Fraction(d0 + d1)])


# --- Hilbert function values ---

def _validated_generators(ideal: Ideal) -> list[tuple[BiPolynomial, tuple[int, int]]]:
    if ideal.universe.param_names:
        raise ValueError("specialize parameter variables before Hilbert computations")
    out = []
    for g in ideal.generators:
        deg = g.bidegree()
        if deg is None:
            raise NonBihomogeneousError(g)
        out.append((g, deg))
    return out


def _count_standard_monomials(universe: VariableUniverse, lead: list[Exponents],
                              i: int, j: int) -> int:
    count = 0
    for e in iter_exponents_of_bidegree(universe, i, j):
        for m in lead:
            if all(a <= b for a, b in zip(m, e)):
                break
        else:
            count += 1
    return count


def _rank_oracle_value(ideal: Ideal, i: int, j: int) -> int:
    """dim of the bidegree-(i,j) piece of the quotient, Groebner-free."""
    uni = ideal.universe
    cols: dict[Exponents, int] = {}
    for e in iter_exponents_of_bidegree(uni, i, j):
        cols[e] = len(cols)
    rows: list[dict[int, int]] = []
    for g, (a, b) in _validated_generators(ideal):
        if a > i or b > j:
            continue
        denom = 1
        for c in g.terms.values():
            denom = denom * c.denominator // gcd(denom, c.denominator)
        int_terms = [(e, int(c * denom)) for e, c in g.terms.items()]
        for m in iter_exponents_of_bidegree(uni, i - a, j - b):
            rows.append({cols[tuple(x + y for x, y in zip(e, m))]: v for e, v in int_terms})
    return len(cols) - sparse_integer_rank(rows)


def bigraded_hilbert_function(ideal: Ideal, i: int, j: int,
                              method: str = METHOD_INITIAL) -> int:
    """dim_Q (S/I)_(i,j) by the chosen route."""
    if i < 0 or j < 0:
        return 0
    method = _METHOD_ALIASES.get(method)
    if method is None:
        raise ValueError("unknown method; choose initial_ideal_count or rank_oracle")
    if method == METHOD_RANK:
        return _rank_oracle_value(ideal, i, j)
    _validated_generators(ideal)
    lead = [m.exponents for m in ideal.initial_ideal(DEFAULT_ORDER)]
    return _count_standard_monomials(ideal.universe, lead, i, j)


def diagonal_hilbert_function(ideal: Ideal, t: int, method: str = METHOD_INITIAL) -> int:
    """dim_Q (S/I)_(t,t)."""
    return bigraded_hilbert_function(ideal, t, t, method)


@dataclass
class HilbertFunctionTable:
    """Sampled diagonal values t -> dim, tagged with the route that made them."""

    values: dict[int, int]
    method: str = METHOD_INITIAL

    def to_json_rows(self) -> list[dict]:
        return [{"t": t, "value": self.values[t], "method": self.method}
                for t in sorted(self.values)]


def tabulate_diagonal(ideal: Ideal, ts: Iterable[int], method: str = METHOD_INITIAL,
                      workers: int = 1) -> HilbertFunctionTable:
    ts = sorted(set(int(t) for t in ts))
    method = _METHOD_ALIASES.get(method, method)
    if method == METHOD_INITIAL:
        # warm the basis cache once so threads only read
        _validated_generators(ideal)
        ideal.initial_ideal(DEFAULT_ORDER)
    vals = parallel_map(lambda t: diagonal_hilbert_function(ideal, t, method), ts, workers)
    return HilbertFunctionTable(dict(zip(ts, vals)), method)


def methods_agree(ideal: Ideal, ts: Iterable[int]) -> bool:
    """Cross-check the two routes on the same sample points."""
    return all(diagonal_hilbert_function(ideal, t, METHOD_INITIAL)
               == diagonal_hilbert_function(ideal, t, METHOD_RANK) for t in ts)


# --- interpolation ---

def _lagrange(points: list[tuple[int, int]]) -> list[Fraction]:
    total = [Fraction(0)]
    for i, (ti, vi) in enumerate(points):
        basis = [Fraction(1)]
        denom = 1
        for j, (tj, _) in enumerate(points):
            if j == i:
                continue
            basis = _poly_mul(basis, [Fraction(-tj), Fraction(1)])
            denom *= ti - tj
        total = _poly_add(total, _poly_scale(basis, Fraction(vi, denom)))
    return total


def interpolate_hilbert_polynomial(table: HilbertFunctionTable,
                                   dim_bound: int) -> HilbertPolynomialQ:
    """Fit the eventual polynomial of a sampled diagonal Hilbert function.

    Fits degree <= dim_bound through the trailing samples, walks backwards
    to find where the table starts agreeing, and fails loudly (with the
    residual rows) if the trailing dim_bound+2 samples never agree.  As an
    extra check the fit must have integer coordinates in the basis
    C(t+k, k), which every genuine Hilbert polynomial has.
    """
    if dim_bound < 0:
        dim_bound = 0
    ts = sorted(table.values)
    # trailing consecutive run
    run: list[int] = []
    for t in reversed(ts):
        if not run or t == run[-1] - 1:
            run.append(t)
        else:
            break
    run.reverse()
    need = dim_bound + 3
    if len(run) < need:
        raise ValueError(
            f"need at least dim_bound+3 = {need} consecutive trailing samples, have {len(run)}")

    fit_pts = [(t, table.values[t]) for t in run[-(dim_bound + 1):]]
    coeffs = _poly_trim(_lagrange(fit_pts))

    matched: list[int] = []
    residuals: dict[int, tuple[int, Fraction]] = {}
    for t in reversed(run):
        pred = _poly_eval(coeffs, t)
        if pred == table.values[t]:
            matched.append(t)
        else:
            residuals[t] = (table.values[t], pred)
            break
    if len(matched) < dim_bound + 2:
        raise NoStabilizationError(
            f"table does not stabilize onto a degree<={dim_bound} polynomial", residuals)

    poly = HilbertPolynomialQ(coeffs, stabilization_threshold=min(matched))
    coords = binomial_basis_coordinates(poly)
    bad = [c for c in coords if c.denominator != 1]
    if bad:
        raise NoStabilizationError(
            f"fit is not integer-valued (binomial coordinates {[str(c) for c in coords]})")
    return poly
