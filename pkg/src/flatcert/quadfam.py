"""The degenerating-quadrics family and everything needed to certify it flat.

Contents: the determinantal ideal of the pointwise graph, its monomial
special fiber, Gauss-graph ideals of fixed nondegenerate quadrics, the
unipotent-times-diagonal chart for quadric degenerations, the
cancelled-minor family ideal J over that chart, fiber evaluation, the torus
symmetry that contracts the chart onto the most special point, the primary
decomposition of the special monomial ideal, nonzerodivisor checks, the
global equations of the graph over a fixed conic, and the flatness
certificate comparing every fiber's Hilbert polynomial to the closed form
chi_graph(n).

Index conventions: variable names are 1-based (x1..x{n+1}), Python
containers 0-based.  A chart point is a pair (u, d) with u unipotent lower
triangular and d the n diagonal ratios; d = 0 is allowed (degenerate
quadrics are the point of the construction).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from random import Random
from typing import Iterable, Sequence

from .groebner import (
    DimensionUndefinedError,
    Ideal,
    ideal_dimension,
    intersect_monomial_exponents,
    minimalize_monomial_exponents,
)
from .hilbert import (
    METHOD_INITIAL,
    HilbertPolynomialQ,
    NoStabilizationError,
    NonBihomogeneousError,
    _count_standard_monomials,
    bigraded_hilbert_function,
    chi_graph,
    interpolate_hilbert_polynomial,
    tabulate_diagonal,
)
from .polyring import (
    BiMonomial,
    BiPolynomial,
    Exponents,
    VariableUniverse,
    proportionality_ratio,
)
from .util import (
    fraction_from_json,
    fraction_identity,
    fraction_to_json,
    mat_adjugate,
    mat_det,
    mat_mul,
    mat_transpose,
    parallel_map,
)


class NondegeneracyRequiredError(ValueError):
    """A construction needed an invertible matrix and got a singular one."""


# --- universes ---

def xy_universe(n: int) -> VariableUniverse:
    return VariableUniverse.standard(n)


def _d_names(n: int) -> list[str]:
    return [f"d{k}" for k in range(1, n + 1)]


def _u_names(n: int) -> list[str]:
    return [f"u{i}_{j}" for i in range(2, n + 2) for j in range(1, i)]


def _c_names(n: int) -> list[str]:
    return [f"c{k}" for k in range(1, n + 1)]


def family_universe(n: int, with_torus: bool = False) -> VariableUniverse:
    """x/y plus the chart parameters d1..dn, u{i}_{j}; torus adds c1..cn."""
    params = _d_names(n) + _u_names(n)
    if with_torus:
        params += _c_names(n)
    return VariableUniverse.standard(n, params)


def incidence_form(universe: VariableUniverse) -> BiPolynomial:
    """x.y = sum_i x_i y_i."""
    total = universe.zero()
    for xn, yn in zip(universe.x_names, universe.y_names):
        total = total + universe.variable(xn) * universe.variable(yn)
    return total


# --- rational data types ---

@dataclass(frozen=True)
class SymmetricMatrixQ:
    """A symmetric matrix of exact rationals."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        m = len(self.entries)
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        for row in rows:
            if len(row) != m:
                raise ValueError("matrix must be square")
        for i in range(m):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"not symmetric at ({i}, {j})")

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "SymmetricMatrixQ":
        return SymmetricMatrixQ(tuple(tuple(Fraction(v) for v in r) for r in rows))

    @staticmethod
    def identity(size: int) -> "SymmetricMatrixQ":
        return SymmetricMatrixQ.from_rows(fraction_identity(size))

    @staticmethod
    def diagonal(values: Sequence) -> "SymmetricMatrixQ":
        m = len(values)
        return SymmetricMatrixQ.from_rows(
            [[Fraction(values[i]) if i == j else Fraction(0) for j in range(m)] for i in range(m)])

    @property
    def size(self) -> int:
        return len(self.entries)

    def determinant(self) -> Fraction:
        return mat_det([list(r) for r in self.entries])

    def is_nondegenerate(self) -> bool:
        return self.determinant() != 0

    def to_json_dict(self) -> dict:
        return {"entries": [[fraction_to_json(v) for v in row] for row in self.entries]}


@dataclass(frozen=True)
class ChartPoint:
    """A point (u, d) of the chart: u unipotent lower triangular, d in Q^n."""

    u: tuple[tuple[Fraction, ...], ...]
    d: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        u = tuple(tuple(Fraction(v) for v in row) for row in self.u)
        d = tuple(Fraction(v) for v in self.d)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "d", d)
        m = len(d) + 1
        if len(u) != m or any(len(row) != m for row in u):
            raise ValueError("u must be (n+1) x (n+1) for n = len(d)")
        for i in range(m):
            if u[i][i] != 1:
                raise ValueError("u must have unit diagonal")
            for j in range(i + 1, m):
                if u[i][j] != 0:
                    raise ValueError("u must be lower triangular")

    @property
    def n(self) -> int:
        return len(self.d)

    @staticmethod
    def from_strict_lower(rows: Sequence[Sequence], d: Sequence) -> "ChartPoint":
        m = len(d) + 1
        if len(rows) != m - 1 or any(len(r) != i + 1 for i, r in enumerate(rows)):
            raise ValueError("need rows of lengths 1..n below the diagonal")
        full = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
        for i, row in enumerate(rows, start=1):
            for j, v in enumerate(row):
                full[i][j] = Fraction(v)
        return ChartPoint(tuple(tuple(r) for r in full), tuple(Fraction(v) for v in d))

    @staticmethod
    def special(n: int) -> "ChartPoint":
        """(I, 0): the most degenerate point of the chart."""
        return ChartPoint.from_strict_lower([[0] * i for i in range(1, n + 1)], [0] * n)

    @staticmethod
    def all_ones(n: int) -> "ChartPoint":
        """(I, (1,..,1)): the fiber is the graph over the smooth quadric sum x_i^2."""
        return ChartPoint.from_strict_lower([[0] * i for i in range(1, n + 1)], [1] * n)

    def is_nondegenerate(self) -> bool:
        return all(v != 0 for v in self.d)

    def strict_lower_rows(self) -> list[list[Fraction]]:
        return [[self.u[i][j] for j in range(i)] for i in range(1, self.n + 1)]

    def to_json_dict(self) -> dict:
        return {
            "u": [[fraction_to_json(v) for v in row] for row in self.strict_lower_rows()],
            "d": [fraction_to_json(v) for v in self.d],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "ChartPoint":
        rows = [[fraction_from_json(v) for v in row] for row in data["u"]]
        d = [fraction_from_json(v) for v in data["d"]]
        return ChartPoint.from_strict_lower(rows, d)

    def label(self) -> str:
        rows = ";".join(",".join(str(v) for v in row) for row in self.strict_lower_rows())
        ds = ",".join(str(v) for v in self.d)
        return f"(u=[{rows}], d=({ds}))"


@dataclass(frozen=True)
class TorusElement:
    """c in (Q*)^n acting on the chart and on both coordinate blocks."""

    c: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        c = tuple(Fraction(v) for v in self.c)
        object.__setattr__(self, "c", c)
        if any(v == 0 for v in c):
            raise ValueError("torus entries must be nonzero")

    @property
    def n(self) -> int:
        return len(self.c)

    def gamma(self, j: int) -> Fraction:
        """Diagonal entry j (1-based) of the induced matrix: c1*...*c{j-1}."""
        out = Fraction(1)
        for k in range(j - 1):
            out *= self.c[k]
        return out

    def to_json_dict(self) -> dict:
        return {"c": [fraction_to_json(v) for v in self.c]}


# --- ideal constructions ---

def diagonal_ideal(n: int) -> Ideal:
    """2x2 minors x_i y_j - x_j y_i: the graph of the identity over P^n."""
    uni = xy_universe(n)
    gens = []
    for i, j in combinations(range(n + 1), 2):
        gens.append(uni.variable(uni.x_names[i]) * uni.variable(uni.y_names[j])
                    - uni.variable(uni.x_names[j]) * uni.variable(uni.y_names[i]))
    return Ideal(uni, gens)


def special_fiber_ideal(n: int) -> Ideal:
    """<x_i y_j : i < j> plus the incidence form."""
    uni = xy_universe(n)
    gens = []
    for i, j in combinations(range(n + 1), 2):
        gens.append(uni.variable(uni.x_names[i]) * uni.variable(uni.y_names[j]))
    gens.append(incidence_form(uni))
    return Ideal(uni, gens)


def gauss_graph_ideal(a: SymmetricMatrixQ) -> Ideal:
    """Graph of x -> x.a over the quadric of a: incidence plus the 2x2
    minors of the matrix with rows y and x.a.  Needs a nondegenerate."""
    if not a.is_nondegenerate():
        raise NondegeneracyRequiredError("gauss_graph_ideal needs an invertible matrix")
    m = a.size
    uni = VariableUniverse.standard(m - 1)
    xs = [uni.variable(name) for name in uni.x_names]
    ys = [uni.variable(name) for name in uni.y_names]
    xa = []
    for j in range(m):
        acc = uni.zero()
        for k in range(m):
            acc = acc + xs[k] * a.entries[k][j]
        xa.append(acc)
    gens = [incidence_form(uni)]
    for i, j in combinations(range(m), 2):
        gens.append(ys[i] * xa[j] - ys[j] * xa[i])
    return Ideal(uni, gens)


def laksov_diagonal_matrices(n: int, d: Sequence | None = None,
                             universe: VariableUniverse | None = None):
    """The diagonal matrices d^(1)..d^(n) of the chart.

    d^(1) = diag(1, d1, d1*d2, ..., d1*...*dn).  d^(i) is the i-th compound
    of d^(1) (entries indexed by i-subsets of rows, lexicographically) with
    the common monomial d1^{i-1} d2^{i-2} ... d{i-1} cancelled.  The
    cancellation is exponent arithmetic, so numeric d may contain zeros.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    numeric = d is not None
    if numeric and len(d) != n:
        raise ValueError(f"need {n} diagonal ratios, got {len(d)}")
    if not numeric and universe is None:
        universe = family_universe(n)

    # exponent vectors over d1..dn for diag(1, d1, d1 d2, ...)
    first = [[1 if k < s else 0 for k in range(n)] for s in range(n + 1)]
    out = []
    for i in range(1, n + 1):
        common = [max(0, i - k) for k in range(1, n + 1)]
        entries = []
        for subset in combinations(range(n + 1), i):
            exps = [sum(first[s][k] for s in subset) - common[k] for k in range(n)]
            if any(e < 0 for e in exps):
                raise AssertionError("compound cancellation produced a negative exponent")
            if numeric:
                val = Fraction(1)
                for k, e in enumerate(exps):
                    val *= Fraction(d[k]) ** e
                entries.append(val)
            else:
                full = [0] * universe.num_vars
                for k, e in enumerate(exps):
                    full[universe.index[f"d{k + 1}"]] = e
                entries.append(BiPolynomial(universe, {tuple(full): 1}))
        out.append(tuple(entries))
    return out


# --- the family ideal J ---

def _unipotent_matrix(uni: VariableUniverse, n: int) -> list[list[BiPolynomial]]:
    m = n + 1
    mat = [[uni.zero() for _ in range(m)] for _ in range(m)]
    for i in range(m):
        mat[i][i] = uni.one()
        for j in range(i):
            mat[i][j] = uni.variable(f"u{i + 1}_{j + 1}")
    return mat


def _unipotent_inverse(mat: list[list[BiPolynomial]], uni: VariableUniverse) -> list[list[BiPolynomial]]:
    m = len(mat)
    nil = [[mat[i][j] if i != j else uni.zero() for j in range(m)] for i in range(m)]
    acc = [[uni.one() if i == j else uni.zero() for j in range(m)] for i in range(m)]
    power = nil
    sign = -1
    for _ in range(1, m):
        acc = [[acc[i][j] + power[i][j] * sign for j in range(m)] for i in range(m)]
        power = mat_mul(power, nil)
        sign = -sign
    return acc


def primed_coordinates(uni: VariableUniverse, n: int) -> tuple[list[BiPolynomial], list[BiPolynomial]]:
    """x'_j = sum_i u_ij x_i and y'_j = sum_i inv(u)_ji y_i."""
    m = n + 1
    u = _unipotent_matrix(uni, n)
    uinv = _unipotent_inverse(u, uni)
    xs = [uni.variable(name) for name in uni.x_names]
    ys = [uni.variable(name) for name in uni.y_names]
    xp, yp = [], []
    for j in range(m):
        accx = uni.zero()
        accy = uni.zero()
        for i in range(m):
            accx = accx + xs[i] * u[i][j]
            accy = accy + uinv[j][i] * ys[i]
        xp.append(accx)
        yp.append(accy)
    return xp, yp


def _d_monomial(uni: VariableUniverse, lo: int, hi: int) -> BiPolynomial:
    """d_lo * ... * d_hi (1-based, inclusive); 1 when the range is empty."""
    exps = [0] * uni.num_vars
    for k in range(lo, hi + 1):
        exps[uni.index[f"d{k}"]] = 1
    return BiPolynomial(uni, {tuple(exps): 1})


def _family_generators(uni: VariableUniverse, n: int) -> list[BiPolynomial]:
    xp, yp = primed_coordinates(uni, n)
    gens = [incidence_form(uni)]
    for i, j in combinations(range(n + 1), 2):
        scale = _d_monomial(uni, i + 1, j)  # d_{i+1} ... d_j in 1-based names
        gens.append(xp[i] * yp[j] - scale * (yp[i] * xp[j]))
    return gens


def family_ideal_J(n: int, with_torus: bool = False) -> Ideal:
    """The cancelled-minor family over the chart: the incidence form plus,
    for each 1 <= i < j <= n+1, the generator x'_i y'_j - d_i...d_{j-1} y'_i x'_j."""
    uni = family_universe(n, with_torus)
    return Ideal(uni, _family_generators(uni, n))


def evaluate_family_at(J: Ideal, point: ChartPoint) -> Ideal:
    """Specialize all chart parameters of J at a point; the result lives in
    the plain x/y ring."""
    uni = J.universe
    n = point.n
    assignment: dict[str, Fraction] = {}
    for k in range(1, n + 1):
        assignment[f"d{k}"] = point.d[k - 1]
    for i in range(2, n + 2):
        for j in range(1, i):
            assignment[f"u{i}_{j}"] = point.u[i - 1][j - 1]
    missing = [name for name in assignment if name not in uni.index]
    if missing:
        raise ValueError(f"ideal universe lacks chart parameters {missing}")
    gens = []
    for g in J.generators:
        h = g.substitute(assignment)
        if not h.is_zero():
            gens.append(h)
    return Ideal(gens[0].universe, gens)


def fiber_matrix(point: ChartPoint) -> SymmetricMatrixQ:
    """The symmetric matrix u * d^(1) * u^T presented by a chart point."""
    n = point.n
    diag = laksov_diagonal_matrices(n, d=point.d)[0]
    m = n + 1
    middle = [[diag[i] if i == j else Fraction(0) for j in range(m)] for i in range(m)]
    u = [list(row) for row in point.u]
    prod = mat_mul(mat_mul(u, middle), mat_transpose(u))
    return SymmetricMatrixQ.from_rows(prod)


# --- random chart data ---

def random_chart_point(n: int, rng: Random, degenerate: bool = False) -> ChartPoint:
    """Integer entries in [-9, 9]; degenerate zeroes one random d_i."""
    nonzero = [v for v in range(-9, 10) if v != 0]
    rows = [[rng.randint(-9, 9) for _ in range(i)] for i in range(1, n + 1)]
    d = [rng.choice(nonzero) for _ in range(n)]
    if degenerate:
        d[rng.randrange(n)] = 0
    return ChartPoint.from_strict_lower(rows, d)


def standard_chart_points(n: int, rng: Random) -> list[ChartPoint]:
    """The four canonical fibers: (I,0), (I,1..1), a random nondegenerate
    point, and a random point with one d_i = 0."""
    return [
        ChartPoint.special(n),
        ChartPoint.all_ones(n),
        random_chart_point(n, rng, degenerate=False),
        random_chart_point(n, rng, degenerate=True),
    ]


def random_torus_element(n: int, rng: Random) -> TorusElement:
    nonzero = [v for v in range(-9, 10) if v != 0]
    return TorusElement(tuple(Fraction(rng.choice(nonzero)) for _ in range(n)))


# --- torus action ---

@dataclass
class TorusReport:
    mode: str  # symbolic | numeric
    n: int
    passed: bool
    generator_scalars: list[str]
    param_law_ok: bool
    c: dict | None = None
    point: dict | None = None

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode, "n": self.n, "passed": self.passed,
            "generator_scalars": self.generator_scalars,
            "param_law_ok": self.param_law_ok,
            "c": self.c, "point": self.point,
        }


def _c_product(uni: VariableUniverse, lo: int, hi: int) -> BiPolynomial:
    """c_lo * ... * c_hi as a monomial; 1 when empty."""
    exps = [0] * uni.num_vars
    for k in range(lo, hi + 1):
        exps[uni.index[f"c{k}"]] = 1
    return BiPolynomial(uni, {tuple(exps): 1})


def _laurent_c_text(exps: Sequence[int], n: int) -> str:
    parts = []
    for k, e in enumerate(exps, start=1):
        if e == 0:
            continue
        parts.append(f"c{k}" if e == 1 else f"c{k}^{e}")
    return "*".join(parts) if parts else "1"


def _c_factor_match(transformed: BiPolynomial, base: BiPolynomial,
                    c_positions: Sequence[int]) -> tuple[bool, tuple[int, ...] | None]:
    """Is `transformed` a single c-monomial times `base`?  Returns the factor."""
    if len(transformed.terms) != len(base.terms):
        return False, None
    mu: tuple[int, ...] | None = None
    cset = set(c_positions)
    for e, coeff in transformed.terms.items():
        stripped = list(e)
        cpart = []
        for pos in c_positions:
            cpart.append(e[pos])
            stripped[pos] = 0
        b = tuple(stripped)
        if base.terms.get(b) != coeff:
            return False, None
        cp = tuple(cpart)
        if mu is None:
            mu = cp
        elif mu != cp:
            return False, None
    if mu is None:  # zero polynomial: only if base is zero too, which Ideal forbids
        mu = tuple(0 for _ in c_positions)
    return True, mu


def torus_action_check(n: int, point: ChartPoint | None = None,
                       c: TorusElement | None = None) -> TorusReport:
    """Each generator of J, pushed through the torus action, must come back
    as a nonzero scalar times itself.

    Symbolic mode (point and c omitted): works over Q(d, u, c), clearing
    the c-denominators by a global x-rescaling, and proves the scalar is a
    monomial in c.  Numeric mode evaluates at a chart point and reports the
    rational scalar per generator.
    """
    if (point is None) != (c is None):
        raise ValueError("give both a point and a torus element, or neither")
    if point is None:
        return _torus_check_symbolic(n)
    return _torus_check_numeric(n, point, c)


def _torus_check_symbolic(n: int) -> TorusReport:
    uni = family_universe(n, with_torus=True)
    gens = _family_generators(uni, n)
    c_positions = [uni.index[name] for name in _c_names(n)]

    subs: dict[str, BiPolynomial] = {}
    for j in range(1, n + 2):
        # x_j picks up c_j...c_n: the action divides by gamma_j = c_1...c_{j-1}
        # and we clear denominators by one global factor c_1...c_n.
        subs[uni.x_names[j - 1]] = _c_product(uni, j, n) * uni.variable(uni.x_names[j - 1])
        subs[uni.y_names[j - 1]] = _c_product(uni, 1, j - 1) * uni.variable(uni.y_names[j - 1])
    for i in range(2, n + 2):
        for j in range(1, i):
            subs[f"u{i}_{j}"] = _c_product(uni, j, i - 1) * uni.variable(f"u{i}_{j}")
    for k in range(1, n + 1):
        subs[f"d{k}"] = _c_product(uni, k, k) * _c_product(uni, k, k) * uni.variable(f"d{k}")

    scalars: list[str] = []
    passed = True
    for g in gens:
        transformed = g.substitute(subs, drop_params=False)
        ok, mu = _c_factor_match(transformed, g, c_positions)
        if not ok:
            passed = False
            scalars.append("not proportional")
            continue
        laurent = tuple(e - 1 for e in mu)  # divide the clearing factor c_1...c_n back out
        scalars.append(_laurent_c_text(laurent, n))

    # conjugation law: gamma_i * u_ij == (c_j...c_{i-1} * u_ij) * gamma_j
    law_ok = True
    for i in range(2, n + 2):
        for j in range(1, i):
            lhs = _c_product(uni, 1, i - 1) * uni.variable(f"u{i}_{j}")
            rhs = _c_product(uni, j, i - 1) * uni.variable(f"u{i}_{j}") * _c_product(uni, 1, j - 1)
            if lhs != rhs:
                law_ok = False
    return TorusReport("symbolic", n, passed and law_ok, scalars, law_ok)


def _torus_check_numeric(n: int, point: ChartPoint, c: TorusElement) -> TorusReport:
    if point.n != n or c.n != n:
        raise ValueError("point and torus element must match n")
    J = family_ideal_J(n)
    base = [g.substitute(_point_assignment(point)) for g in J.generators]

    gammas = [c.gamma(j) for j in range(1, n + 2)]
    moved_u = [[point.u[i][j] * gammas[i] / gammas[j] if i > j else point.u[i][j]
                for j in range(n + 1)] for i in range(n + 1)]
    moved_d = [c.c[k] ** 2 * point.d[k] for k in range(n)]
    moved = ChartPoint(tuple(tuple(row) for row in moved_u), tuple(moved_d))
    at_moved = [g.substitute(_point_assignment(moved)) for g in J.generators]

    uni0 = base[0].universe
    coord_subs: dict[str, BiPolynomial] = {}
    for j in range(1, n + 2):
        coord_subs[uni0.x_names[j - 1]] = uni0.variable(uni0.x_names[j - 1]) * (1 / gammas[j - 1])
        coord_subs[uni0.y_names[j - 1]] = uni0.variable(uni0.y_names[j - 1]) * gammas[j - 1]

    scalars: list[str] = []
    passed = True
    for g_moved, g_base in zip(at_moved, base):
        h = g_moved.substitute(coord_subs)
        ratio = proportionality_ratio(h, g_base)
        if ratio is None or ratio == 0:
            passed = False
            scalars.append("not proportional")
        else:
            scalars.append(str(ratio))

    # conjugation law, numerically: moved u must be gamma_i/gamma_j scalings
    law_ok = all(
        moved_u[i][j] == point.u[i][j] * gammas[i] / gammas[j]
        for i in range(n + 1) for j in range(i))
    return TorusReport("numeric", n, passed and law_ok, scalars, law_ok,
                       c=c.to_json_dict(), point=point.to_json_dict())


def _point_assignment(point: ChartPoint) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    for k in range(1, point.n + 1):
        out[f"d{k}"] = point.d[k - 1]
    for i in range(2, point.n + 2):
        for j in range(1, i):
            out[f"u{i}_{j}"] = point.u[i - 1][j - 1]
    return out


def closed_orbit_limit_check(n: int, point: ChartPoint) -> bool:
    """Scaling any chart point by the torus and sending every c_k -> 0 must
    land on (I, 0): each moved coordinate is a polynomial in c with zero
    constant term (the unipotent diagonal stays 1 and is not moved)."""
    if point.n != n:
        raise ValueError("point does not match n")
    uni = VariableUniverse.standard(n, params=_c_names(n))
    c_positions = [uni.index[name] for name in _c_names(n)]

    def zero_constant_term(p: BiPolynomial) -> bool:
        return all(any(e[pos] for pos in c_positions) for e in p.terms)

    ok = True
    for i in range(2, n + 2):
        for j in range(1, i):
            moved = uni.constant(point.u[i - 1][j - 1]) * _c_product(uni, j, i - 1)
            ok = ok and zero_constant_term(moved)
    for k in range(1, n + 1):
        moved = uni.constant(point.d[k - 1]) * _c_product(uni, k, k) * _c_product(uni, k, k)
        ok = ok and zero_constant_term(moved)
    return ok


# --- primary structure of the special monomial ideal ---

def component_primes(n: int) -> list[tuple[str, ...]]:
    """The primes <x_1..x_i, y_{i+2}..y_{n+1}> for i = 0..n, as name tuples."""
    out = []
    for i in range(n + 1):
        names = [f"x{k}" for k in range(1, i + 1)] + [f"y{k}" for k in range(i + 2, n + 2)]
        out.append(tuple(names))
    return out


def primary_intersection_check(n: int) -> bool:
    """<x_i y_j : i < j> must equal the intersection of its component primes."""
    uni = xy_universe(n)

    def var_exps(name: str) -> Exponents:
        e = [0] * uni.num_vars
        e[uni.index[name]] = 1
        return tuple(e)

    lhs = []
    for i, j in combinations(range(1, n + 2), 2):
        e = [0] * uni.num_vars
        e[uni.index[f"x{i}"]] = 1
        e[uni.index[f"y{j}"]] = 1
        lhs.append(tuple(e))
    lhs = minimalize_monomial_exponents(lhs)

    primes = component_primes(n)
    inter = [var_exps(name) for name in primes[0]]
    for prime in primes[1:]:
        inter = intersect_monomial_exponents(inter, [var_exps(name) for name in prime])
    return sorted(inter) == sorted(lhs)


def minimal_primes_of_monomial_ideal(universe: VariableUniverse,
                                     monomials: Iterable[BiMonomial]) -> list[tuple[str, ...]]:
    """Minimal primes of a squarefree monomial ideal: minimal covers of the
    generator supports, by subset enumeration (desk scale)."""
    supports = []
    for m in monomials:
        if any(e > 1 for e in m.exponents):
            raise ValueError("minimal primes implemented for squarefree monomial ideals only")
        supports.append(frozenset(i for i, e in enumerate(m.exponents) if e))
    if not supports:
        return []
    nv = universe.num_vars
    covers: list[set[int]] = []
    for size in range(nv + 1):
        for combo in combinations(range(nv), size):
            s = set(combo)
            if any(kept <= s for kept in covers):
                continue
            if all(sup & s for sup in supports):
                covers.append(s)
    return [tuple(universe.names[i] for i in sorted(s)) for s in covers]


def nonzerodivisor_check(f: BiPolynomial, monomials: Sequence[BiMonomial]) -> bool:
    """True iff f avoids every minimal prime of the (squarefree) monomial
    ideal; cross-checked against the Hilbert-function first-difference
    identity for t <= 5.  The two methods must agree."""
    uni = f.universe
    if f.is_zero():
        return False
    deg = f.bidegree()
    if deg is None:
        raise NonBihomogeneousError(f)
    primes = minimal_primes_of_monomial_ideal(uni, monomials)

    def in_prime(prime: tuple[str, ...]) -> bool:
        positions = [uni.index[name] for name in prime]
        for e in f.terms:
            if not any(e[p] for p in positions):
                return False  # a term survives modulo the prime
        return True

    avoids = not any(in_prime(p) for p in primes)

    lead = minimalize_monomial_exponents(m.exponents for m in monomials)

    def phi_m(i: int, j: int) -> int:
        if i < 0 or j < 0:
            return 0
        return _count_standard_monomials(uni, lead, i, j)

    bigger = Ideal(uni, [BiMonomial(uni, e).as_polynomial() for e in lead] + [f])
    dx, dy = deg
    identity = all(
        bigraded_hilbert_function(bigger, t, t) == phi_m(t, t) - phi_m(t - dx, t - dy)
        for t in range(6))
    if identity != avoids:
        raise RuntimeError("prime avoidance and Hilbert first-difference disagree; "
                           "this contradicts the exactness argument")
    return avoids


# --- global equations over a fixed conic ---

@dataclass
class ConicReport:
    identity_ok: bool
    sampling_skipped: bool
    base_point: tuple | None
    points_checked: int
    points_skipped: int
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "identity_ok": self.identity_ok,
            "sampling_skipped": self.sampling_skipped,
            "base_point": [fraction_to_json(v) for v in self.base_point] if self.base_point else None,
            "points_checked": self.points_checked,
            "points_skipped": self.points_skipped,
            "passed": self.passed,
        }


def conic_matrix_identity_symbolic() -> bool:
    """3 z adj(z) == trace(z adj(z)) I for a symmetric 3x3 of indeterminates."""
    names = ("z11", "z12", "z13", "z22", "z23", "z33")
    uni = VariableUniverse.standard(2, params=names)
    v = uni.variable
    z = [[v("z11"), v("z12"), v("z13")],
         [v("z12"), v("z22"), v("z23")],
         [v("z13"), v("z23"), v("z33")]]
    w = mat_adjugate(z)
    zw = mat_mul(z, w)
    trace = zw[0][0] + zw[1][1] + zw[2][2]
    for i in range(3):
        for j in range(3):
            lhs = zw[i][j] * 3
            rhs = trace if i == j else uni.zero()
            if lhs != rhs:
                return False
    return True


def _quadric_value(z: SymmetricMatrixQ, p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for i in range(z.size):
        for j in range(z.size):
            total += z.entries[i][j] * p[i] * q[j]
    return total


def _primitive(vec: Sequence[Fraction]) -> tuple[int, ...] | None:
    denom = 1
    for v in vec:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [int(v * denom) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return None
    ints = [v // g for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-w for w in ints]
            break
    return tuple(ints)


def find_rational_point(z: SymmetricMatrixQ, height: int = 12) -> tuple[int, ...] | None:
    """First primitive integer point on x z x^T = 0, scanning by height."""
    for h in range(1, height + 1):
        for a in range(-h, h + 1):
            for b in range(-h, h + 1):
                for cc in range(-h, h + 1):
                    if max(abs(a), abs(b), abs(cc)) != h:
                        continue
                    if gcd(gcd(abs(a), abs(b)), abs(cc)) != 1:
                        continue
                    vec = (Fraction(a), Fraction(b), Fraction(cc))
                    if _quadric_value(z, vec, vec) == 0:
                        return (a, b, cc)
    return None


def _vector_matrix(v: Sequence[Fraction], m: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    return [sum((v[k] * m[k][j] for k in range(len(v))), Fraction(0)) for j in range(len(m[0]))]


def _two_by_n_minors_zero(r1: Sequence[Fraction], r2: Sequence[Fraction]) -> bool:
    for i, j in combinations(range(len(r1)), 2):
        if r1[i] * r2[j] - r1[j] * r2[i] != 0:
            return False
    return True


def conic_global_equations_check(z: SymmetricMatrixQ, samples: int = 20,
                                 seed: int = 0, search_height: int = 12) -> ConicReport:
    """Check the graph equations of a fixed smooth conic.

    (a) the matrix identity 3 z w = trace(z w) I with w = adj(z), exactly;
    (b) on sampled rational points x of the conic, with y = x.z: the
    incidence x.y = 0 and the 2x2 minors of (x.z, y) and of (x, y.w) all
    vanish.  Conics with no rational point within the search height skip
    (b) and report that.
    """
    if z.size != 3:
        raise ValueError("conic checks are for 3x3 matrices")
    if not z.is_nondegenerate():
        raise NondegeneracyRequiredError("the conic must be smooth: det(z) != 0")

    w_rows = mat_adjugate([list(r) for r in z.entries])
    zw = mat_mul([list(r) for r in z.entries], w_rows)
    trace = zw[0][0] + zw[1][1] + zw[2][2]
    identity_ok = all(
        3 * zw[i][j] == (trace if i == j else Fraction(0))
        for i in range(3) for j in range(3))

    base = find_rational_point(z, search_height)
    if base is None:
        return ConicReport(identity_ok, True, None, 0, 0, identity_ok)

    rng = Random(seed)
    base_f = tuple(Fraction(v) for v in base)
    seen: set[tuple[int, ...]] = {_primitive(base_f)}
    checked = 0
    skipped = 0
    all_ok = True
    attempts = 0
    while checked < samples and attempts < samples * 40:
        attempts += 1
        q = tuple(Fraction(rng.randint(-9, 9)) for _ in range(3))
        if all(v == 0 for v in q):
            skipped += 1
            continue
        qq = _quadric_value(z, q, q)
        if qq == 0:
            skipped += 1
            continue
        pq = _quadric_value(z, base_f, q)
        x = tuple(qq * base_f[k] - 2 * pq * q[k] for k in range(3))
        prim = _primitive(x)
        if prim is None or prim in seen:
            skipped += 1
            continue
        seen.add(prim)
        xf = tuple(Fraction(v) for v in prim)
        y = _vector_matrix(xf, [list(r) for r in z.entries])
        on_conic = sum((xf[k] * y[k] for k in range(3)), Fraction(0)) == 0
        yw = _vector_matrix(y, w_rows)
        ok = (on_conic
              and _two_by_n_minors_zero(_vector_matrix(xf, [list(r) for r in z.entries]), y)
              and _two_by_n_minors_zero(xf, yw))
        all_ok = all_ok and ok
        checked += 1
    passed = identity_ok and all_ok and checked > 0
    return ConicReport(identity_ok, False, base, checked, skipped, passed)


def random_conic_with_rational_point(rng: Random, entry_bound: int = 5,
                                     search_height: int = 12,
                                     max_tries: int = 500) -> tuple[SymmetricMatrixQ, int]:
    """A random smooth integer conic that provably has a rational point;
    returns the number of draws it took."""
    for tries in range(1, max_tries + 1):
        vals = [rng.randint(-entry_bound, entry_bound) for _ in range(6)]
        z = SymmetricMatrixQ.from_rows([
            [vals[0], vals[1], vals[2]],
            [vals[1], vals[3], vals[4]],
            [vals[2], vals[4], vals[5]],
        ])
        if not z.is_nondegenerate():
            continue
        if find_rational_point(z, search_height) is not None:
            return z, tries
    raise RuntimeError(f"no isotropic smooth conic found in {max_tries} draws")


# --- the flatness certificate ---

@dataclass
class FiberCheck:
    index: int
    point: ChartPoint
    polynomial: HilbertPolynomialQ | None
    dimension: int | None
    matches: bool
    failure: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "point": self.point.to_json_dict(),
            "polynomial": self.polynomial.to_json_dict() if self.polynomial else None,
            "projective_dimension": self.dimension,
            "matches": self.matches,
            "failure": self.failure,
        }


@dataclass
class FlatnessReport:
    n: int
    t_max: int
    method: str
    corrupt: str | None
    expected: HilbertPolynomialQ
    fibers: list[FiberCheck]

    @property
    def divergent(self) -> list[FiberCheck]:
        return [f for f in self.fibers if not f.matches]

    @property
    def verdict(self) -> str:
        if any(not f.matches and f.failure is None for f in self.fibers):
            return "FAIL"
        if any(f.failure is not None for f in self.fibers):
            return "INCONCLUSIVE"
        return "PASS"

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "t_max": self.t_max,
            "method": self.method,
            "corrupt": self.corrupt,
            "expected": self.expected.to_json_dict(),
            "fibers": [f.to_json_dict() for f in self.fibers],
            "divergent": [f.index for f in self.divergent],
            "verdict": self.verdict,
        }


def apply_corruption(J: Ideal, corrupt: str) -> Ideal:
    """Negative-control hook: 'drop-generator:K' removes generator K (0-based)."""
    kind, _, arg = corrupt.partition(":")
    if kind != "drop-generator" or not arg:
        raise ValueError(f"unknown corruption {corrupt!r}; expected drop-generator:K")
    k = int(arg)
    if not 0 <= k < len(J.generators):
        raise ValueError(f"generator index {k} out of range 0..{len(J.generators) - 1}")
    gens = [g for i, g in enumerate(J.generators) if i != k]
    return Ideal(J.universe, gens)


def _check_fiber(J: Ideal, index: int, point: ChartPoint, t_max: int,
                 method: str, expected: HilbertPolynomialQ) -> FiberCheck:
    fiber = evaluate_family_at(J, point)
    try:
        dim = ideal_dimension(fiber, projective=True)
    except DimensionUndefinedError:
        dim = None
    table = tabulate_diagonal(fiber, range(t_max + 1), method)
    if dim is None:
        if all(v == 0 for v in table.values.values()):
            poly = HilbertPolynomialQ((), stabilization_threshold=0)
            return FiberCheck(index, point, poly, None, poly == expected)
        return FiberCheck(index, point, None, None, False, "dimension undefined")
    try:
        poly = interpolate_hilbert_polynomial(table, dim_bound=max(dim, 0))
    except NoStabilizationError as exc:
        return FiberCheck(index, point, None, dim, False, f"no stabilization: {exc}")
    return FiberCheck(index, point, poly, dim, poly == expected)


def flatness_certificate(n: int, extra_points: Sequence[ChartPoint] = (),
                         t_max: int = 8, method: str = METHOD_INITIAL,
                         corrupt: str | None = None, workers: int = 1) -> FlatnessReport:
    """Certify (or refute, under corruption) that every listed fiber of the
    family has Hilbert polynomial chi_graph(n).

    The fibers over (I, 0) and (I, (1,..,1)) are always included, followed
    by extra_points.  Fibers are independent and may run concurrently;
    results merge in point order.
    """
    J = family_ideal_J(n)
    if corrupt:
        J = apply_corruption(J, corrupt)
    points = [ChartPoint.special(n), ChartPoint.all_ones(n), *extra_points]
    for p in points:
        if p.n != n:
            raise ValueError("chart point does not match n")
    expected = chi_graph(n)

    def run(args: tuple[int, ChartPoint]) -> FiberCheck:
        idx, pt = args
        return _check_fiber(J, idx, pt, t_max, method, expected)

    fibers = parallel_map(run, list(enumerate(points)), workers)
    return FlatnessReport(n, t_max, method, corrupt, expected, fibers)
