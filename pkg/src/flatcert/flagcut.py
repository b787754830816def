"""Curves on the point-line incidence variety F2 in P2 x P2*.

Gamma_f = (f0 x f1) cut into F2, where f0 is a plane curve in the x-block
and f1 a curve of the dual plane in the y-block.  The module measures the
diagonal Hilbert polynomial of Gamma_f two ways: against the closed form
xi_formula(d0, d1) and against the inclusion-exclusion count coming from
the Koszul resolution of (f0, f1, x.y), which this module derives
numerically (koszul_hilbert_polynomial) rather than taking on faith.

The two closed forms agree at (1,1) and share their constant term, but the
leading coefficients differ: xi_formula says d0+d1, the Koszul count says
2*d0*d1.  run_xi_trials reports the observed polynomial against both so
the discrepancy is data, not a crash.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from random import Random

from .groebner import Ideal, ideal_dimension
from .hilbert import (
    METHOD_INITIAL,
    HilbertPolynomialQ,
    NoStabilizationError,
    _lagrange,
    interpolate_hilbert_polynomial,
    tabulate_diagonal,
    xi_formula,
)
from .polyring import BiPolynomial, VariableUniverse, monomials_of_bidegree, polynomial_text
from .quadfam import incidence_form, xy_universe
from .util import parallel_map

MAX_RETRIES_PER_TRIAL = 8


@dataclass(frozen=True)
class PlaneCurvePair:
    """f0 homogeneous in the x-block, f1 homogeneous in the y-block."""

    f0: BiPolynomial
    f1: BiPolynomial

    def __post_init__(self) -> None:
        for label, f, axis in (("f0", self.f0, 0), ("f1", self.f1, 1)):
            if f.is_zero():
                raise ValueError(f"{label} must be nonzero")
            deg = f.bidegree()
            if deg is None:
                raise ValueError(f"{label} must be bihomogeneous")
            if deg[1 - axis] != 0:
                block = "x" if axis == 0 else "y"
                raise ValueError(f"{label} must be pure in the {block} variables")
        if self.f0.universe != self.f1.universe:
            raise ValueError("f0 and f1 must share a universe")

    @property
    def degrees(self) -> tuple[int, int]:
        return (self.f0.bidegree()[0], self.f1.bidegree()[1])


def incidence_ideal(n: int = 2) -> Ideal:
    """The flag variety F_n cut by the single form x.y."""
    uni = xy_universe(n)
    return Ideal(uni, [incidence_form(uni)])


def gamma_curve_ideal(pair: PlaneCurvePair) -> Ideal:
    """<f0, f1, x.y>: the curve (f0 x f1) meet F2."""
    uni = pair.f0.universe
    return Ideal(uni, [pair.f0, pair.f1, incidence_form(uni)])


def codimension_check(pair: PlaneCurvePair) -> bool:
    """Gamma_f should be a curve: projective dimension 1 = dim F2 - 2."""
    return gamma_curve_dimension(pair) == 1


def gamma_curve_dimension(pair: PlaneCurvePair) -> int:
    return ideal_dimension(gamma_curve_ideal(pair), projective=True)


def koszul_hilbert_polynomial(d0: int, d1: int) -> HilbertPolynomialQ:
    """Hilbert polynomial of a proper complete intersection <f0, f1, x.y>
    in P2 x P2*, by inclusion-exclusion over the Koszul resolution.

    The three generators have bidegrees (d0,0), (0,d1), (1,1); the
    alternating sum of shifted monomial counts is interpolated on a window
    where every shift is in the stable range.
    """
    if d0 < 1 or d1 < 1:
        raise ValueError("degrees must be positive")

    def forms(u: int) -> int:
        return comb(u + 2, 2) if u >= 0 else 0

    shifts = ((d0, 0), (0, d1), (1, 1))

    def count(t: int) -> int:
        total = 0
        for mask in range(8):
            si = sum(shifts[b][0] for b in range(3) if mask >> b & 1)
            sj = sum(shifts[b][1] for b in range(3) if mask >> b & 1)
            sign = -1 if bin(mask).count("1") % 2 else 1
            total += sign * forms(t - si) * forms(t - sj)
        return total

    base = d0 + d1 + 2  # all shifted arguments >= 0 from here on
    points = [(t, count(t)) for t in range(base, base + 5)]
    coeffs = _lagrange(points)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return HilbertPolynomialQ.from_coefficients(coeffs, stabilization_threshold=base)


def random_plane_curve(degree: int, rng: Random, block: str = "x",
                       universe: VariableUniverse | None = None,
                       coeff_bound: int = 9) -> BiPolynomial:
    """A random nonzero form of the given degree, pure in one block."""
    if block not in ("x", "y"):
        raise ValueError("block must be 'x' or 'y'")
    if universe is None:
        universe = xy_universe(2)
    bidegree = (degree, 0) if block == "x" else (0, degree)
    while True:
        terms = {}
        for mono in monomials_of_bidegree(universe, *bidegree):
            coeff = rng.randint(-coeff_bound, coeff_bound)
            if coeff:
                terms[mono.exponents] = Fraction(coeff)
        if terms:
            return BiPolynomial(universe, terms)


def swap_blocks(poly: BiPolynomial) -> BiPolynomial:
    """Exchange the x- and y-blocks (x_i <-> y_i), fixing parameters."""
    uni = poly.universe
    m = uni.n + 1
    terms = {}
    for e, coeff in poly.terms.items():
        swapped = e[m:2 * m] + e[:m] + e[2 * m:]
        terms[swapped] = coeff
    return BiPolynomial(uni, terms)


def swap_pair(pair: PlaneCurvePair) -> PlaneCurvePair:
    """The zero-locus swap: (f0, f1) -> (f1 in x, f0 in y)."""
    return PlaneCurvePair(swap_blocks(pair.f1), swap_blocks(pair.f0))


@dataclass
class TrialRecord:
    index: int
    seed: int
    f0: str
    f1: str
    retries: list[str] = field(default_factory=list)
    polynomial: HilbertPolynomialQ | None = None
    xi_match: bool = False
    koszul_match: bool = False

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "seed": self.seed,
            "f0": self.f0,
            "f1": self.f1,
            "retries": self.retries,
            "polynomial": self.polynomial.to_json_dict() if self.polynomial else None,
            "xi_match": self.xi_match,
            "koszul_match": self.koszul_match,
        }


@dataclass
class XiTrialsReport:
    d0: int
    d1: int
    trials: int
    seed: int
    xi_expected: HilbertPolynomialQ
    koszul_expected: HilbertPolynomialQ
    records: list[TrialRecord]

    @property
    def xi_matches(self) -> int:
        return sum(1 for r in self.records if r.xi_match)

    @property
    def koszul_matches(self) -> int:
        return sum(1 for r in self.records if r.koszul_match)

    @property
    def total_retries(self) -> int:
        return sum(len(r.retries) for r in self.records)

    @property
    def passed(self) -> bool:
        """Spec semantics: every trial must match xi_formula."""
        return all(r.xi_match for r in self.records)

    def to_json_dict(self) -> dict:
        return {
            "d0": self.d0, "d1": self.d1,
            "trials": self.trials, "seed": self.seed,
            "xi_expected": self.xi_expected.to_json_dict(),
            "koszul_expected": self.koszul_expected.to_json_dict(),
            "records": [r.to_json_dict() for r in self.records],
            "xi_matches": self.xi_matches,
            "koszul_matches": self.koszul_matches,
            "total_retries": self.total_retries,
            "passed": self.passed,
        }


def _run_one_trial(index: int, trial_seed: int, d0: int, d1: int, t_max: int,
                   method: str, xi: HilbertPolynomialQ,
                   koszul: HilbertPolynomialQ) -> TrialRecord:
    rng = Random(trial_seed)
    uni = xy_universe(2)
    record = TrialRecord(index, trial_seed, "", "")
    for _ in range(MAX_RETRIES_PER_TRIAL):
        f0 = random_plane_curve(d0, rng, "x", uni)
        f1 = random_plane_curve(d1, rng, "y", uni)
        pair = PlaneCurvePair(f0, f1)
        record.f0 = polynomial_text(f0)
        record.f1 = polynomial_text(f1)
        dim = gamma_curve_dimension(pair)
        if dim != 1:
            record.retries.append(f"dimension {dim} != 1, redrawing")
            continue
        table = tabulate_diagonal(gamma_curve_ideal(pair), range(t_max + 1), method)
        try:
            poly = interpolate_hilbert_polynomial(table, dim_bound=1)
        except NoStabilizationError:
            record.retries.append("no stabilization, redrawing")
            continue
        record.polynomial = poly
        record.xi_match = poly == xi
        record.koszul_match = poly == koszul
        return record
    record.retries.append("retry budget exhausted")
    return record


def run_xi_trials(d0: int, d1: int, trials: int = 20, seed: int = 0,
                  t_max: int | None = None, method: str = METHOD_INITIAL,
                  workers: int = 1) -> XiTrialsReport:
    """Sample random curve pairs and compare Gamma_f's Hilbert polynomial
    to xi_formula(d0, d1) and to the Koszul count.  Degenerate draws retry
    with the same per-trial stream and are logged."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if t_max is None:
        t_max = d0 + d1 + 5
    xi = xi_formula(d0, d1)
    koszul = koszul_hilbert_polynomial(d0, d1)
    master = Random(seed)
    trial_seeds = [master.getrandbits(32) for _ in range(trials)]

    def run(args: tuple[int, int]) -> TrialRecord:
        idx, ts = args
        return _run_one_trial(idx, ts, d0, d1, t_max, method, xi, koszul)

    records = parallel_map(run, list(enumerate(trial_seeds)), workers)
    return XiTrialsReport(d0, d1, trials, seed, xi, koszul, records)
