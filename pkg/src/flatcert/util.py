"""Small shared utilities: rationals in JSON, tiny exact linear algebra over
arbitrary rings, sparse fraction-free rank over the integers, and a
deterministic worker pool."""

from __future__ import annotations

import heapq
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

WORKERS_ENV_VAR = "FLATCERT_WORKERS"


def resolve_workers(requested: int | None = None) -> int:
    """Worker count: explicit argument, else FLATCERT_WORKERS, else cpu count."""
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get(WORKERS_ENV_VAR)
    if env is not None and env != "":
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"{WORKERS_ENV_VAR} must be an integer, got {env!r}")
    return max(1, os.cpu_count() or 1)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """Map preserving input order; thread pool when workers > 1.

    Shared inputs are treated as immutable and results are merged in input
    order, so the outcome does not depend on scheduling.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def fraction_to_json(q: Fraction | int) -> int | str:
    q = Fraction(q)
    return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fraction_from_json(v: object) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise ValueError(f"rationals must be integers or 'p/q' strings, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise ValueError(f"cannot read a rational from {v!r}")


# --- matrices over any commutative ring (entries need +, -, *) ---

def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = a[i][0] * b[0][j]
            for k in range(1, inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def mat_det(a: Sequence[Sequence]):
    """Determinant by cofactor expansion; fine for the small sizes used here."""
    m = len(a)
    if m == 1:
        return a[0][0]
    total = None
    for j in range(m):
        minor = [row[:j] + row[j + 1:] for row in (list(r) for r in a[1:])]
        term = a[0][j] * mat_det(minor)
        if total is None:
            total = term
        elif j % 2:
            total = total - term
        else:
            total = total + term
    return total


def mat_adjugate(a: Sequence[Sequence]) -> list[list]:
    """Transposed cofactor matrix; requires size >= 2."""
    m = len(a)
    if m < 2:
        raise ValueError("adjugate needs a matrix of size >= 2")
    rows = [list(r) for r in a]
    cof = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(rows) if k != i]
            d = mat_det(minor)
            cof[i][j] = -d if (i + j) % 2 else d
    return mat_transpose(cof)


def fraction_identity(m: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]


# --- sparse exact rank ---

def sparse_integer_rank(rows: Iterable[dict[int, int]]) -> int:
    """Rank of a sparse integer matrix by fraction-free elimination.

    Rows are dicts column -> nonzero integer.  Pivots favor short rows and
    thin columns; each update row is (pv*row - v*pivot) divided by its
    content, so all arithmetic stays in Z.  Deterministic.
    """
    active: dict[int, dict[int, int]] = {}
    col_rows: dict[int, set[int]] = {}
    heap: list[tuple[int, int]] = []
    for rid, row in enumerate(rows):
        r = {c: v for c, v in row.items() if v}
        if not r:
            continue
        g = 0
        for v in r.values():
            g = gcd(g, v)
        if g > 1:
            r = {c: v // g for c, v in r.items()}
        active[rid] = r
        for c in r:
            col_rows.setdefault(c, set()).add(rid)
        heapq.heappush(heap, (len(r), rid))

    rank = 0
    while heap:
        nnz, rid = heapq.heappop(heap)
        row = active.get(rid)
        if row is None or len(row) != nnz:
            continue  # stale entry
        del active[rid]
        for c in row:
            col_rows[c].discard(rid)
        pivot_col = min(row, key=lambda c: (len(col_rows[c]), c))
        pv = row[pivot_col]
        rank += 1
        for vid in sorted(col_rows.get(pivot_col, ())):
            vrow = active[vid]
            vv = vrow.pop(pivot_col)
            col_rows[pivot_col].discard(vid)
            old_keys = set(vrow)
            new = {c: pv * val for c, val in vrow.items()}
            for c, val in row.items():
                if c == pivot_col:
                    continue
                nv = new.get(c, 0) - vv * val
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            for c in old_keys - new.keys():
                col_rows[c].discard(vid)
            for c in new.keys() - old_keys:
                col_rows.setdefault(c, set()).add(vid)
            if new:
                g = 0
                for v in new.values():
                    g = gcd(g, v)
                if g > 1:
                    new = {c: v // g for c, v in new.items()}
                active[vid] = new
                heapq.heappush(heap, (len(new), vid))
            else:
                del active[vid]
    return rank
