"""Dense exact linear algebra used as an independent oracle.

Nothing here touches the standard-basis code: monomials are plain exponent
tuples and the quotient dimension comes from the rank of an explicit matrix.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Sequence

from gmpy2 import mpq

from .ring import FieldSpec, Polynomial


def monomials_up_to(n: int, N: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(N + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def rank(rows: list[dict], p: int) -> int:
    """Rank of sparse rows (column -> value) over F_p (p > 0) or Q (p == 0)."""
    pivots: dict = {}  # pivot column -> normalized row
    r = 0
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            if col not in pivots:
                c = row[col]
                inv = pow(int(c), -1, p) if p else 1 / mpq(c)
                if p:
                    row = {k: v * inv % p for k, v in row.items()}
                else:
                    row = {k: v * inv for k, v in row.items()}
                pivots[col] = row
                r += 1
                break
            prow = pivots[col]
            c = row[col]
            for k, v in prow.items():
                nv = row.get(k, 0) - c * v
                if p:
                    nv %= p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return r


def jet_quotient_dim_oracle(gens: Sequence[Polynomial], N: int) -> int:
    """dim K[x] / (I + m^(N+1)) by row reduction of all monomial multiples of the generators."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].nvars
    p = gens[0].field.characteristic
    cols = monomials_up_to(n, N)
    index = {m: i for i, m in enumerate(cols)}
    rows = []
    for g in gens:
        terms = [(e, c) for e, c in g.items() if sum(e) <= N]
        if not terms:
            continue
        og = min(sum(e) for e, _ in terms)
        for mono in cols:
            if sum(mono) + og > N:
                continue
            row = {}
            for e, c in terms:
                tgt = tuple(a + b for a, b in zip(e, mono))
                if sum(tgt) <= N:
                    row[index[tgt]] = c
            if row:
                rows.append(row)
    return len(cols) - rank(rows, p)


def solve_rank(matrix: list[list], field: FieldSpec) -> int:
    rows = [{j: v for j, v in enumerate(r) if v} for r in matrix]
    return rank(rows, field.characteristic)
