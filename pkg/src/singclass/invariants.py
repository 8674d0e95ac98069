"""Milnor and Tjurina numbers, Hessian rank, higher Milnor/Tjurina algebras."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

from .errors import NotInMaximalIdeal, OrderTooSmall
from .linalg import solve_rank
from .ring import Polynomial, gradient, mul_truncated, pack
from .stdbasis import (
    DimResult,
    FiniteDim,
    NotFiniteUpTo,
    StandardBasis,
    max_ideal_power,
    product_ideal,
    standard_basis,
)

DEFAULT_CAP = 64
SCHEDULE = (10, 20, 40, 64)


def default_cap() -> int:
    env = os.environ.get("SINGCLASS_MAX_BOUND")
    if env:
        try:
            v = int(env)
        except ValueError:
            v = 0
        if v >= 1:
            return v
    return DEFAULT_CAP


def bound_schedule(cap: int, start: int | None = None) -> list[int]:
    """Increasing jet bounds tried by the adaptive routines (always ends at ``cap``)."""
    steps = list(SCHEDULE)
    while steps[-1] < cap:
        steps.append(steps[-1] * 2)
    if start is not None:
        steps = [start] + [b for b in steps if b > start]
    return [b for b in steps if b < cap] + [cap]


@dataclass(frozen=True)
class InvariantValue:
    kind: str  # "milnor" | "tjurina" | "higher_milnor(k)" | "higher_tjurina(k)"
    value: DimResult

    @property
    def finite(self) -> bool:
        return self.value.finite

    def to_json(self) -> dict:
        return self.value.to_json()

    def __int__(self) -> int:
        if not self.finite:
            raise ValueError(f"{self.kind} not certified finite (bound {self.value.bound})")
        return self.value.value


def _require_in_m(f: Polynomial) -> None:
    if f.constant_term():
        raise NotInMaximalIdeal("germ must vanish at the origin")


def adaptive_sb(gens: Sequence[Polynomial], cap: int, start: int | None = None) -> StandardBasis:
    """Standard basis at the first scheduled bound that certifies finiteness (or at ``cap``)."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return None
    SB = None
    for N in bound_schedule(cap, start):
        SB = standard_basis(gens, N, reduce_tails=False)
        if SB.complete_flag:
            return SB
    return SB


def _dim(gens: Sequence[Polynomial], cap: int) -> DimResult:
    SB = adaptive_sb(gens, cap)
    if SB is None:  # the zero ideal
        return NotFiniteUpTo(cap, 0)
    return SB.dimension()


def jacobian_ideal(f: Polynomial) -> list[Polynomial]:
    return [g for g in gradient(f) if g]


def tjurina_ideal(f: Polynomial) -> list[Polynomial]:
    return [g for g in [f] + gradient(f) if g]


def milnor_number(f: Polynomial, cap: int | None = None) -> InvariantValue:
    _require_in_m(f)
    cap = cap or default_cap()
    return InvariantValue("milnor", _dim(jacobian_ideal(f), cap))


def tjurina_number(f: Polynomial, cap: int | None = None) -> InvariantValue:
    _require_in_m(f)
    cap = cap or default_cap()
    return InvariantValue("tjurina", _dim(tjurina_ideal(f), cap))


def _higher_gens(f: Polynomial, k: int, N: int, with_f: bool) -> list[Polynomial]:
    jac = jacobian_ideal(f)
    gens = product_ideal(max_ideal_power(f.field, f.nvars, k), jac, N) if k else list(jac)
    if with_f:
        gens = [f.truncate(N)] + gens
    return [g for g in gens if g]


def higher_algebra_dims(f: Polynomial, k: int, cap: int | None = None) -> tuple[InvariantValue, InvariantValue]:
    """(dim M_k, dim T_k) with M_k = K[[x]]/m^k j(f) and T_k = K[[x]]/(f, m^k j(f))."""
    _require_in_m(f)
    if k < 0:
        raise ValueError("k must be non-negative")
    cap = cap or default_cap()
    results = []
    for with_f, kind in ((False, f"higher_milnor({k})"), (True, f"higher_tjurina({k})")):
        val = None
        for N in bound_schedule(cap):
            gens = _higher_gens(f, k, N, with_f)
            if not gens:
                val = NotFiniteUpTo(N, 0)
                continue
            SB = standard_basis(gens, N, reduce_tails=False)
            val = SB.dimension()
            if SB.complete_flag:
                break
        results.append(InvariantValue(kind, val))
    return results[0], results[1]


# ---------------------------------------------------------------- quadratic part


def quadratic_matrix(f: Polynomial) -> list[list]:
    """Hessian of the 2-jet at the origin (entries in the ground field)."""
    n = f.nvars
    fld = f.field
    H = [[fld.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            e = [0] * n
            e[i] += 1
            e[j] += 1
            c = f.coefficient(e)
            H[i][j] = fld(2 * c) if i == j else fld(c)
    return H


def _check_order_two(f: Polynomial) -> None:
    _require_in_m(f)
    if f.order() == 1:
        raise OrderTooSmall("germ has a linear term (smooth); Hessian data needs f in m^2")


def hessian_rank_corank(f: Polynomial) -> tuple[int, int]:
    _check_order_two(f)
    r = solve_rank(quadratic_matrix(f), f.field)
    return r, f.nvars - r


def square_coefficients(f: Polynomial) -> list:
    """Coefficients of x_i^2; in characteristic 2 these are invisible to the Hessian."""
    n = f.nvars
    return [f.coefficient([2 if j == i else 0 for j in range(n)]) for i in range(n)]
