"""Standard bases for the local degree ordering ``ds`` in the jet ring K[x]/m^(N+1).

Because every monomial of degree > N is zero in the jet ring, the ordering
restricted to the surviving monomials is a well-ordering and a leading
monomial always has the minimal degree of its polynomial.  Plain Buchberger
with top-reduction therefore terminates and is correct; no ecart-driven Mora
reduction is needed.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .errors import BoundTooSmall, FieldMismatch, InputError
from .ring import (
    BITS,
    FieldSpec,
    Monomial,
    Polynomial,
    add_into,
    degree_limit,
    divides,
    key_lcm,
    layout,
    mul_dicts,
    pack,
    unpack,
)


# ---------------------------------------------------------------- result types


@dataclass(frozen=True)
class FiniteDim:
    value: int

    finite = True

    def to_json(self) -> dict:
        return {"finite": True, "value": self.value}


@dataclass(frozen=True)
class NotFiniteUpTo:
    """Finiteness not certified at ``bound``; ``lower_bound`` counts sub-N standard monomials."""

    bound: int
    lower_bound: int = 0

    finite = False

    def to_json(self) -> dict:
        return {"finite": False, "bound": self.bound}


DimResult = FiniteDim | NotFiniteUpTo


@dataclass(frozen=True)
class IdealGens:
    generators: tuple[Polynomial, ...]
    bound: int | None = None

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise InputError("an ideal needs at least one generator")
        f0 = gens[0]
        for g in gens:
            if g.field != f0.field or g.nvars != f0.nvars:
                raise FieldMismatch("ideal generators must share field and variables")

    @property
    def field(self) -> FieldSpec:
        return self.generators[0].field

    @property
    def nvars(self) -> int:
        return self.generators[0].nvars


def _as_ideal(I) -> IdealGens:
    if isinstance(I, IdealGens):
        return I
    if isinstance(I, Polynomial):
        return IdealGens((I,))
    return IdealGens(tuple(I))


@dataclass
class StandardBasis:
    field: FieldSpec
    nvars: int
    bound: int
    _elems: list  # (lead key, term dict), sorted by lead key
    staircase_keys: tuple[int, ...]
    complete_flag: bool
    standard_keys: tuple[int, ...] = dc_field(repr=False, default=())

    @property
    def elements(self) -> list[Polynomial]:
        return [Polynomial._raw(self.field, self.nvars, dict(t)) for _, t in self._elems]

    @property
    def staircase(self) -> list[Monomial]:
        return [Monomial.from_key(k, self.nvars) for k in self.staircase_keys]

    @property
    def standard_monomials(self) -> list[Monomial]:
        """Monomials of degree < N outside the leading ideal, largest first."""
        return [Monomial.from_key(k, self.nvars) for k in self.standard_keys]

    def in_leading_ideal(self, key: int) -> bool:
        guard = layout(self.nvars)[1]
        return any(divides(s, key, guard) for s in self.staircase_keys)

    def dimension(self) -> DimResult:
        if self.complete_flag:
            return FiniteDim(len(self.standard_keys))
        return NotFiniteUpTo(self.bound, len(self.standard_keys))


# ---------------------------------------------------------------- reduction kernels


def _reduce(h: dict, basis: list, limit: int, guard: int, p: int, full: bool, fld: FieldSpec) -> dict:
    """Reduce ``h`` (consumed) by ``basis`` = [(lead, terms)] with monic leads.

    Top reduction stops at the first irreducible leading term; full reduction
    keeps going and collects the irreducible terms as the remainder.
    Ties are broken towards the basis element with the largest leading monomial
    (the list is sorted by ascending key, i.e. descending monomial).
    """
    rem: dict = {}
    heap = list(h)
    heapq.heapify(heap)
    pop = heapq.heappop
    push = heapq.heappush
    while heap:
        k = pop(heap)
        c = h.get(k)
        if not c:
            continue
        while heap and heap[0] == k:
            pop(heap)
        red = None
        for lk, terms in basis:
            if lk > k:
                break
            if ((k | guard) - lk) & guard == guard:
                red = terms
                break
        if red is None:
            if not full:
                return h
            rem[k] = c
            del h[k]
            continue
        shift_key = k - lk
        get = h.get
        if p:
            for tk, tc in red.items():
                nk = tk + shift_key
                if nk >= limit:
                    continue
                v = (get(nk, 0) - c * tc) % p
                if v:
                    if nk not in h:
                        push(heap, nk)
                    h[nk] = v
                else:
                    h.pop(nk, None)
        else:
            for tk, tc in red.items():
                nk = tk + shift_key
                if nk >= limit:
                    continue
                v = get(nk, 0) - c * tc
                if v:
                    if nk not in h:
                        push(heap, nk)
                    h[nk] = v
                else:
                    h.pop(nk, None)
    return rem


def _monic(d: dict, p: int, fld: FieldSpec) -> tuple[int, dict]:
    lk = min(d)
    c = d[lk]
    if c == 1:
        return lk, d
    inv = fld.inv(c)
    if p:
        return lk, {k: v * inv % p for k, v in d.items()}
    return lk, {k: v * inv for k, v in d.items()}


def _standard_layers(stair: Sequence[int], n: int, N: int, guard: int) -> tuple[list[int], bool]:
    """Standard monomials of degree < N, layer by layer; flag = layer N is empty."""
    units = layout(n)[2]
    stair = sorted(stair)

    def inside(k: int) -> bool:
        for s in stair:
            if s > k:
                return False
            if ((k | guard) - s) & guard == guard:
                return True
        return False

    layer = [] if inside(0) else [0]
    out: list[int] = []
    d = 0
    while layer:
        if d == N:
            return out, False
        out.extend(layer)
        nxt = set()
        for k in layer:
            for u in units:
                nk = k + u
                if nk not in nxt and not inside(nk):
                    nxt.add(nk)
        layer = sorted(nxt)
        d += 1
    return out, True


# ---------------------------------------------------------------- engine


def standard_basis(I, N: int, reduce_tails: bool = True) -> StandardBasis:
    """Standard basis of (I + m^(N+1)) / m^(N+1) for the ordering ``ds``."""
    I = _as_ideal(I)
    if N < 1:
        raise InputError("jet bound must be at least 1")
    fld = I.field
    p = fld.characteristic
    n = I.nvars
    shift, guard, _ = layout(n)
    limit = degree_limit(N, n)

    basis: list = []  # sorted by lead key: [(lead, terms)]
    pairs: list = []  # heap of (lcm key degree, lcm key, i, j)
    elems: list = []  # index -> (lead, terms)
    done_pairs: set = set()

    def insert(lead: int, terms: dict) -> None:
        idx = len(elems)
        elems.append((lead, terms))
        for j, (lj, _) in enumerate(elems[:-1]):
            lc = key_lcm(lead, lj, n)
            if lc >= limit:
                continue  # every term of the S-polynomial has degree > N
            if lc == lead + lj:
                continue  # coprime leading monomials
            heapq.heappush(pairs, (lc, j, idx))
        pos = 0
        while pos < len(basis) and basis[pos][0] <= lead:
            pos += 1
        basis.insert(pos, (lead, terms))

    gens = sorted(
        (dict((k, v) for k, v in g._t.items() if k < limit) for g in I.generators),
        key=lambda d: min(d) if d else -1,
    )
    for g in gens:
        if not g:
            continue
        h = _reduce(dict(g), basis, limit, guard, p, False, fld)
        if h:
            insert(*_monic(h, p, fld))

    while pairs:
        lc, i, j = heapq.heappop(pairs)
        if _chain_skip(lc, i, j, elems, done_pairs, guard):
            done_pairs.add((i, j))
            continue
        done_pairs.add((i, j))
        li, ti = elems[i]
        lj, tj = elems[j]
        s = mul_dicts(ti, {lc - li: 1}, limit, p)
        add_into(s, mul_dicts(tj, {lc - lj: 1}, limit, p), p, -1)
        if not s:
            continue
        h = _reduce(s, basis, limit, guard, p, False, fld)
        if h:
            insert(*_monic(h, p, fld))

    # minimal basis
    leads = [lk for lk, _ in basis]
    minimal = []
    for lk, t in basis:
        if any(o != lk and divides(o, lk, guard) for o in leads):
            continue
        minimal.append((lk, t))
    if reduce_tails:
        red = []
        for lk, t in minimal:
            tail = dict(t)
            del tail[lk]
            tail = _reduce(tail, minimal, limit, guard, p, True, fld) if tail else {}
            tail[lk] = fld.one
            red.append((lk, tail))
        minimal = red
    stair = tuple(lk for lk, _ in minimal)
    std, complete = _standard_layers(stair, n, N, guard)
    return StandardBasis(fld, n, N, minimal, stair, complete, tuple(std))


def _chain_skip(lc: int, i: int, j: int, elems: list, done: set, guard: int) -> bool:
    """Buchberger's chain criterion against pairs that were already treated."""
    for k, (lk, _) in enumerate(elems):
        if k == i or k == j:
            continue
        if not divides(lk, lc, guard):
            continue
        a, b = (k, i) if k < i else (i, k)
        c, d = (k, j) if k < j else (j, k)
        if (a, b) in done and (c, d) in done:
            return True
    return False


# ---------------------------------------------------------------- public helpers


def normal_form(f: Polynomial, SB: StandardBasis) -> Polynomial:
    """Full reduction of ``jet_N(f)``: no remaining term lies in the leading ideal."""
    if f.field != SB.field or f.nvars != SB.nvars:
        raise FieldMismatch("polynomial and standard basis are incompatible")
    n = SB.nvars
    limit = degree_limit(SB.bound, n)
    guard = layout(n)[1]
    h = {k: v for k, v in f._t.items() if k < limit}
    rem = _reduce(h, SB._elems, limit, guard, SB.field.p, True, SB.field)
    return Polynomial._raw(SB.field, n, rem)


def quotient_dim(I, N: int) -> DimResult:
    return standard_basis(I, N, reduce_tails=False).dimension()


def highcorner(SB: StandardBasis) -> Monomial | None:
    """Smallest monomial (in ``ds``) outside the leading ideal, if the quotient is certified finite."""
    if not SB.complete_flag or not SB.standard_keys:
        return None
    return Monomial.from_key(max(SB.standard_keys), SB.nvars)


def contains_m_power(I, k: int, N: int, SB: StandardBasis | None = None) -> bool:
    """Whether m^k lies in I (checked at jet level N >= k)."""
    if k > N:
        raise BoundTooSmall(f"cannot test m^{k} at jet bound {N}")
    if SB is None:
        SB = standard_basis(I, N, reduce_tails=False)
    n = SB.nvars
    # m^k is inside iff no standard monomial has degree >= k
    deg_shift = BITS * n
    if not SB.complete_flag:
        # standard monomials reach degree N; m^k with k <= N cannot be inside
        return False
    return all((s >> deg_shift) < k for s in SB.standard_keys)


def ideal_from(field: FieldSpec, nvars: int, gens: Iterable[Polynomial]) -> IdealGens:
    gens = [g for g in gens]
    if not gens:
        gens = [Polynomial.zero(field, nvars)]
    return IdealGens(tuple(gens))


def monomials_of_degree(n: int, d: int) -> list[tuple[int, ...]]:
    if n == 1:
        return [(d,)]
    out = []
    for a in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - a):
            out.append((a,) + rest)
    return out


def max_ideal_power(field: FieldSpec, n: int, k: int) -> list[Polynomial]:
    return [Polynomial.monomial(field, e) for e in monomials_of_degree(n, k)]


def product_ideal(A: Sequence[Polynomial], B: Sequence[Polynomial], N: int) -> list[Polynomial]:
    from .ring import mul_truncated

    out = []
    for a in A:
        for b in B:
            c = mul_truncated(a, b, N)
            if c:
                out.append(c)
    return out
