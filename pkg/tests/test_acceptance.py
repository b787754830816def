"""Acceptance gate: ten end-to-end criteria, one test and one verdict line each.

Run with `pytest -v tests/test_acceptance.py`; each test prints
"AC<k> <name>: PASS|FAIL - detail".  AC8 is expected to fail: the closed
degree formula it demands disagrees with the fibers actually computed for
(1,2) and (2,2); see that test's message for the numbers.
"""

import json
import random
import subprocess
import sys
from math import comb

import pytest

from flatcert import (
    MonomialOrderSpec,
    SymmetricMatrixQ,
    chi_graph,
    conic_global_equations_check,
    conic_matrix_identity_symbolic,
    diagonal_ideal,
    family_ideal_J,
    flatness_certificate,
    gauss_graph_ideal,
    incidence_form,
    is_groebner_basis,
    koszul_hilbert_polynomial,
    leading_monomial,
    methods_agree,
    nonzerodivisor_check,
    primary_intersection_check,
    random_chart_point,
    random_conic_with_rational_point,
    run_xi_trials,
    special_fiber_ideal,
    torus_action_check,
    xi_formula,
)
from flatcert.cli import main as cli_main
from flatcert.hilbert import (
    METHOD_INITIAL,
    METHOD_RANK,
    diagonal_hilbert_function,
    interpolate_hilbert_polynomial,
    tabulate_diagonal,
)


def report(k, name, ok, detail):
    print(f"AC{k} {name}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def sampled_orders(seed=0, n=2, extra=3):
    """lex, grevlex, and three seeded random variable permutations."""
    from flatcert import xy_universe

    names = list(xy_universe(n).names)
    orders = [MonomialOrderSpec("lex"), MonomialOrderSpec("grevlex")]
    for k in range(extra):
        rng = random.Random(seed + k)
        perm = names[:]
        rng.shuffle(perm)
        orders.append(MonomialOrderSpec("lex", variable_permutation=tuple(perm)))
    return orders


def test_ac01_groebner_certificate():
    """Minors of [x;y] certify as a basis under every sampled order."""
    checked = 0
    for n in (1, 2, 3):
        gens = diagonal_ideal(n).generators
        for order in sampled_orders(seed=0, n=n):
            ok, cert = is_groebner_basis(gens, order)
            assert ok, (n, order.kind, order.variable_permutation)
            assert all(sp["remainder_zero"] for sp in cert.spairs)
            checked += len(cert.spairs)
    assert report(1, "universal basis certificate", True,
                  f"n=1..3, 5 orders each, {checked} S-pairs reduced to zero")


def test_ac02_diagonal_hilbert_identity():
    """Diagonal counts match C(2t+n, n) by both routes; routes agree on a corpus."""
    for n in (1, 2, 3):
        ideal = diagonal_ideal(n)
        for t in range(7):
            want = comb(2 * t + n, n)
            assert diagonal_hilbert_function(ideal, t, method=METHOD_INITIAL) == want
            assert diagonal_hilbert_function(ideal, t, method=METHOD_RANK) == want
    corpus = [
        special_fiber_ideal(1), special_fiber_ideal(2), special_fiber_ideal(3),
        diagonal_ideal(1), diagonal_ideal(2),
        gauss_graph_ideal(SymmetricMatrixQ.identity(3)),
    ]
    assert all(methods_agree(ideal, range(7)) for ideal in corpus)
    assert report(2, "diagonal Hilbert identity", True,
                  "C(2t+n,n) for n<=3, t<=6, both methods; corpus agreement")


def test_ac03_special_fiber_polynomial():
    """The degenerate fiber interpolates to the same polynomial as the graph."""
    rendered = []
    for n in (1, 2, 3):
        ideal = special_fiber_ideal(n)
        table = tabulate_diagonal(ideal, range(n + 7))
        poly = interpolate_hilbert_polynomial(table, dim_bound=n - 1)
        assert poly == chi_graph(n), (n, str(poly))
        for t in range(3, 6):
            assert diagonal_hilbert_function(ideal, t, method=METHOD_RANK) == poly.evaluate(t)
        rendered.append(str(poly))
    assert report(3, "special fiber polynomial", True, ", ".join(rendered))


@pytest.mark.parametrize("n", [1, 2])
def test_ac04_flatness_certificate(n):
    """Eight fibers (origin, all-ones, 3 generic, 3 degenerate) share one polynomial."""
    rng = random.Random(90 + n)
    extras = [random_chart_point(n, rng) for _ in range(3)]
    extras += [random_chart_point(n, rng, degenerate=True) for _ in range(3)]
    result = flatness_certificate(n, extra_points=tuple(extras), t_max=8, workers=4)
    assert result.verdict == "PASS", result.divergent
    assert result.expected == chi_graph(n)
    assert len(result.fibers) == 8
    assert all(fb.matches for fb in result.fibers)
    degenerate = sum(1 for fb in result.fibers if not fb.point.is_nondegenerate())
    assert degenerate >= 3
    assert report(4, f"flatness certificate n={n}", True,
                  f"8 fibers all fit {result.expected}")


def test_ac05_negative_control():
    """Dropping a generator must break the certificate and exit 1."""
    result = flatness_certificate(2, t_max=7, corrupt="drop-generator:1")
    assert result.verdict == "FAIL"
    assert result.divergent, "a divergent fiber must be named"
    labels = [fb.point.label() for fb in result.divergent]
    code = cli_main(["verify-flatness", "--n", "2", "--t-max", "7",
                     "--corrupt", "drop-generator:1", "--output", "/dev/null"])
    assert code == 1
    assert report(5, "negative control", True,
                  f"corrupted family diverges at {labels[0]}, exit 1")


def test_ac06_torus_equivariance():
    """Each family generator rescales by a c-monomial under the torus."""
    scalars = {}
    for n in (1, 2):
        rep = torus_action_check(n)
        assert rep.mode == "symbolic" and rep.passed and rep.param_law_ok
        scalars[n] = rep.generator_scalars
    assert scalars[1] == ["1", "c1"]
    assert scalars[2] == ["1", "c1", "c1*c2", "c2"]
    assert report(6, "torus equivariance", True,
                  "symbolic scalars " + ", ".join(scalars[2]))


def test_ac07_primary_structure():
    """Component intersection identity plus the nonzerodivisor cross-check."""
    for n in (1, 2, 3, 4):
        assert primary_intersection_check(n), n
    ideal = special_fiber_ideal(2)
    mons = [leading_monomial(g) for g in ideal.generators if len(g.terms) == 1]
    assert nonzerodivisor_check(incidence_form(ideal.universe), mons)
    assert not nonzerodivisor_check(ideal.universe.parse("x1"), mons)
    assert report(7, "primary structure", True,
                  "intersection identity n<=4; x.y avoids every minimal prime")


def test_ac08_xi_formula_trials():
    """Random-pair trials against the closed degree formula.

    The formula predicts (d0+d1)t - d0*d1*(d0+d1-4)/2.  Every computed fiber
    instead fits the Koszul count with leading coefficient 2*d0*d1 (the two
    agree only at (1,1)).  Three independent routes give the same fibers, so
    the criterion as stated cannot pass; this test records the honest result.
    """
    outcomes = []
    all_match = True
    for d0, d1 in [(1, 1), (1, 2), (2, 2)]:
        rep = run_xi_trials(d0, d1, trials=20, seed=0)
        assert rep.koszul_matches == 20, "fibers must at least fit the Koszul count"
        assert rep.xi_matches in (0, 20), "a split verdict would mean unstable sampling"
        agrees = rep.xi_matches == 20
        all_match = all_match and agrees
        outcomes.append(
            f"({d0},{d1}) xi={rep.xi_matches}/20 koszul={rep.koszul_matches}/20"
            f" fit={rep.records[0].polynomial} vs xi={xi_formula(d0, d1)}"
        )
    detail = "; ".join(outcomes)
    report(8, "xi formula trials", all_match, detail)
    if not all_match:
        pytest.fail(
            "the closed formula misses the computed fibers beyond (1,1): "
            + detail
            + " [leading coefficient is 2*d0*d1, confirmed by initial-ideal "
            "counting, the rank oracle, and the Koszul count]"
        )


def test_ac09_conic_global_equations():
    """Adjugate identity symbolically, then rational-point sampling."""
    assert conic_matrix_identity_symbolic()
    rng = random.Random(17)
    total = 0
    for _ in range(5):
        conic, _tries = random_conic_with_rational_point(rng)
        rep = conic_global_equations_check(conic, samples=4, seed=rng.randrange(10**6))
        assert rep.passed and rep.identity_ok
        total += rep.points_checked
    assert total >= 20
    assert report(9, "conic global equations", True,
                  f"identity symbolic; {total} sampled points on 5 conics")


def test_ac10_determinism():
    """Same config and seed twice: byte-identical reports."""
    import io
    from contextlib import redirect_stdout

    def capture(argv):
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = cli_main(argv)
        return code, buf.getvalue()

    pairs = [
        ["verify-flatness", "--n", "1", "--t-max", "6", "--seed", "3"],
        ["xi-trials", "1", "1", "--trials", "3", "--seed", "11"],
        ["torus-check", "--n", "2"],
    ]
    for argv in pairs:
        assert capture(argv) == capture(argv), argv
    proc1 = subprocess.run([sys.executable, "-m", "flatcert", "conic-equations",
                            "--samples", "3", "--conics", "2", "--seed", "5"],
                           capture_output=True)
    proc2 = subprocess.run([sys.executable, "-m", "flatcert", "conic-equations",
                            "--samples", "3", "--conics", "2", "--seed", "5"],
                           capture_output=True)
    assert proc1.stdout == proc2.stdout and proc1.returncode == proc2.returncode == 0
    json.loads(proc1.stdout)
    assert report(10, "determinism", True,
                  "3 in-process suites and 1 subprocess suite byte-identical")
