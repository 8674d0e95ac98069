"""Recognition of simple singularities.

Contact classification works on jets.  At a jet bound ``N`` the germ is
split, the residual is typed by its order, the multiplicity type of its
cubic part and a chain of point blow-ups (each one lowers the index of an
A or D germ by a fixed amount), and finally the variant inside a
(family, index) cell is read off from the Tjurina number.  Every step checks
that the information it uses is exact modulo ``m^(N+1)``; if not, the bound
is raised.  When the cap is reached the germ is handed to the A∞/D∞
detector.

Right classification in positive characteristic filters the contact label
through the known list of right simple germs; univariate germs get the
exact determinacy and modality data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .errors import NotIsolated, NotUnivariate, OrderTooSmall, QNotFoundUpTo
from .invariants import InvariantValue, bound_schedule, default_cap, milnor_number, tjurina_ideal, tjurina_number
from .ring import (
    FieldSpec,
    JetAutomorphism,
    Monomial,
    Polynomial,
    pack,
    parse_poly,
    substitute_jet,
)
from .splitting import normalize_quadratic, quadratic_normal_form, split
from .stdbasis import standard_basis

SIMPLE_FAMILIES = ("A", "D", "E", "Smooth")


# ---------------------------------------------------------------- labels


@dataclass(frozen=True)
class ClassLabel:
    """Name of a singularity type; equality ignores the free-text reason."""

    family: str
    index: int | None = None
    variant: int | None = None
    reason: str | None = dc_field(default=None, compare=False)
    candidates: tuple = dc_field(default=(), compare=False)

    @property
    def name(self) -> str:
        if self.family in ("A", "D", "E"):
            return f"{self.family}_{self.index}"
        if self.family == "AInf":
            return "A_inf"
        if self.family == "DInf":
            return "D_inf"
        return self.family

    @property
    def full_name(self) -> str:
        return self.name if self.variant is None else f"{self.name}^{self.variant}"

    @property
    def simple(self) -> bool:
        return self.family in SIMPLE_FAMILIES

    @property
    def key(self) -> tuple:
        return (self.family, self.index, self.variant)

    def to_json(self) -> dict:
        out = {"label": self.name, "variant": self.variant, "index": self.index, "reason": self.reason}
        if self.candidates:
            out["candidates"] = [c.full_name for c in self.candidates]
        return out

    def __str__(self) -> str:
        return self.full_name


def _not_simple(reason: str) -> ClassLabel:
    return ClassLabel("NotSimple", reason=reason)


def _unclassified(reason: str, candidates=()) -> ClassLabel:
    return ClassLabel("Unclassified", reason=reason, candidates=tuple(candidates))


# ---------------------------------------------------------------- normal form tables
#
# Each row is (family, index, variant, text).  ``variant`` is None where the
# row carries no superscript.  Plane rows use the variables x, y and the
# three-variable rows of characteristic 2 use x, y, z.


def plane_rows_odd(p: int, kmax: int = 8) -> list[tuple]:
    """Contact simple plane curves for characteristic != 2 (including 0)."""
    rows = [("A", k, None, f"x^2+y^{k + 1}") for k in range(1, kmax + 1)]
    rows += [("D", k, None, f"x^2*y+y^{k - 1}") for k in range(4, kmax + 1)]
    rows.append(("E", 6, 0, "x^3+y^4"))
    if p == 3:
        rows.append(("E", 6, 1, "x^3+y^4+x^2*y^2"))
    rows.append(("E", 7, 0, "x^3+x*y^3"))
    if p == 3:
        rows.append(("E", 7, 1, "x^3+x*y^3+x^2*y^2"))
    rows.append(("E", 8, 0, "x^3+y^5"))
    if p == 3:
        rows.append(("E", 8, 1, "x^3+y^5+x^2*y^3"))
        rows.append(("E", 8, 2, "x^3+y^5+x^2*y^2"))
    if p == 5:
        rows.append(("E", 8, 1, "x^3+y^5+x^2*y^2"))
    return rows


def plane_rows_char2(mmax: int = 8) -> list[tuple]:
    """Contact simple plane curves in characteristic 2."""
    rows = []
    for m in range(1, mmax + 1):
        rows.append(("A", 2 * m - 1, None, f"x^2+x*y^{m}"))
        rows.append(("A", 2 * m, 0, f"x^2+y^{2 * m + 1}"))
        for r in range(1, m):
            rows.append(("A", 2 * m, r, f"x^2+y^{2 * m + 1}+x*y^{2 * m - r}"))
    for m in range(2, mmax + 1):
        rows.append(("D", 2 * m, None, f"x^2*y+x*y^{m}"))
        rows.append(("D", 2 * m + 1, 0, f"x^2*y+y^{2 * m}"))
        for r in range(1, m):
            rows.append(("D", 2 * m + 1, r, f"x^2*y+y^{2 * m}+x*y^{2 * m - r}"))
    rows += [
        ("E", 6, 0, "x^3+y^4"),
        ("E", 6, 1, "x^3+y^4+x*y^3"),
        ("E", 7, None, "x^3+x*y^3"),
        ("E", 8, None, "x^3+y^5"),
    ]
    return rows


def surface_rows_char2(kmax: int = 8, mmax: int = 8) -> list[tuple]:
    """Contact simple surfaces in characteristic 2 (three variables)."""
    rows = [("A", k, None, f"z^{k + 1}+x*y") for k in range(1, kmax + 1)]
    for m in range(2, mmax + 1):
        rows.append(("D", 2 * m, 0, f"z^2+x^2*y+x*y^{m}"))
        for r in range(1, m):
            rows.append(("D", 2 * m, r, f"z^2+x^2*y+x*y^{m}+x*y^{m - r}*z"))
        rows.append(("D", 2 * m + 1, 0, f"z^2+x^2*y+y^{m}*z"))
        for r in range(1, m):
            rows.append(("D", 2 * m + 1, r, f"z^2+x^2*y+y^{m}*z+x*y^{m - r}*z"))
    rows += [
        ("E", 6, 0, "z^2+x^3+y^2*z"),
        ("E", 6, 1, "z^2+x^3+y^2*z+x*y*z"),
        ("E", 7, 0, "z^2+x^3+x*y^3"),
        ("E", 7, 1, "z^2+x^3+x*y^3+x^2*y*z"),
        ("E", 7, 2, "z^2+x^3+x*y^3+y^3*z"),
        ("E", 7, 3, "z^2+x^3+x*y^3+x*y*z"),
        ("E", 8, 0, "z^2+x^3+y^5"),
        ("E", 8, 1, "z^2+x^3+y^5+x*y^3*z"),
        ("E", 8, 2, "z^2+x^3+y^5+x*y^2*z"),
        ("E", 8, 3, "z^2+x^3+y^5+y^3*z"),
        ("E", 8, 4, "z^2+x^3+y^5+x*y*z"),
    ]
    return rows


def classical_rows(kmax: int = 8) -> list[tuple]:
    """Characteristic 0 normal forms in the variables x1, x2 (squares are added by :func:`table_rows`)."""
    rows = [("A", k, None, f"x1^{k + 1}+x2^2") for k in range(1, kmax + 1)]
    rows += [("D", k, None, f"x1^2*x2+x2^{k - 1}") for k in range(4, kmax + 1)]
    rows += [
        ("E", 6, 0, "x1^3+x2^4"),
        ("E", 7, 0, "x1^3+x1*x2^3"),
        ("E", 8, 0, "x1^3+x2^5"),
    ]
    return rows


def right_rows(p: int) -> list[tuple]:
    """Right simple plane curves for p > 2 (labels without variant superscripts)."""
    if p <= 2:
        return []
    rows = [("A", k, None, f"x^2+y^{k + 1}") for k in range(1, p - 1)]
    rows += [("D", k, None, f"x^2*y+y^{k - 1}") for k in range(4, p)]
    if p > 3:
        rows += [("E", 6, 0, "x^3+y^4"), ("E", 7, 0, "x^3+x*y^3")]
    if p > 5:
        rows.append(("E", 8, 0, "x^3+y^5"))
    return rows


def _pad(g: Polynomial, n: int, used: int, char2: bool) -> Polynomial:
    """Add x_{used+1}^2 + ... (or the pairs x_i x_{i+1} in characteristic 2) up to n variables."""
    fld = g.field
    from .ring import embed

    f = embed(g, n, list(range(used)))
    i = used
    while i < n:
        if char2:
            f = f + Polynomial.variable(fld, n, i) * Polynomial.variable(fld, n, i + 1)
            i += 2
        else:
            f = f + Polynomial.variable(fld, n, i) ** 2
            i += 1
    return f


def table_rows(table: str, p: int, nvars: int | None = None, max_param: int = 8) -> list[tuple[ClassLabel, Polynomial]]:
    """Normal forms of a table as ``(label, polynomial)``.

    ``table`` is one of ``"classical"``, ``"odd"``, ``"char2"``, ``"right"``
    or ``"right2"``.  With ``nvars`` larger than the base dimension the rows
    are stabilized by squares (or by hyperbolic pairs in characteristic 2).
    For ``"char2"`` the base dimension follows the parity of ``nvars``: two
    variables for even counts, three for odd ones.
    """
    fld = FieldSpec(p)
    out = []
    if table == "right2":
        n = nvars or 2
        if p != 2 or n % 2:
            return []
        g = Polynomial.zero(fld, n)
        return [(ClassLabel("A", 1), _pad(g, n, 0, True))]
    if table == "classical":
        rows, names, base, c2 = classical_rows(max_param), ["x1", "x2"], 2, False
    elif table == "odd":
        rows, names, base, c2 = plane_rows_odd(p, max_param), ["x", "y"], 2, False
    elif table == "right":
        rows, names, base, c2 = right_rows(p), ["x", "y"], 2, False
    elif table == "char2":
        n = nvars or 2
        if n % 2 == 0:
            rows, names, base = plane_rows_char2(max_param), ["x", "y"], 2
        else:
            rows, names, base = surface_rows_char2(max_param, max_param), ["x", "y", "z"], 3
        c2 = True
    else:
        raise ValueError(f"unknown table {table!r}")
    n = nvars or base
    if n < base:
        raise ValueError(f"table {table!r} needs at least {base} variables")
    for fam, idx, var, text in rows:
        g = parse_poly(text, fld, names)
        out.append((ClassLabel(fam, idx, var), _pad(g, n, base, c2) if n > base else g))
    return out


# ---------------------------------------------------------------- jet-level helpers


class _NeedMore(Exception):
    """The current jet bound does not determine the answer; ``family`` tracks the branch."""

    def __init__(self, family: str = "A"):
        self.family = family
        super().__init__(family)


class _NotSimple(Exception):
    pass


def _linear_xy(g: Polynomial, t0, swap: bool, N: int) -> Polynomial:
    """x -> x + t0*y (or swap x and y) on the first two variables."""
    fld = g.field
    n = g.nvars
    mat = [[fld(int(i == j)) for j in range(n)] for i in range(n)]
    if swap:
        mat[0][0], mat[0][1], mat[1][0], mat[1][1] = fld(0), fld(1), fld(1), fld(0)
    else:
        if not t0:
            return g
        mat[0][1] = fld(t0)
    return substitute_jet(g, JetAutomorphism.linear(fld, mat, N))


def _blowup(g: Polynomial, s: int, N: int) -> tuple[Polynomial, int]:
    """Chart y = 1 of the point blow-up: every other variable v becomes v*y, divide by y^s.

    The input is exact modulo m^(N+1); the strict transform is exact modulo
    m^(N-s+1).  Variable 1 plays the role of y.
    """
    n = g.nvars
    M = N - s
    if M < 1:
        raise _NeedMore()
    out = {}
    for exps, c in g.items():
        d = sum(exps)
        if d < s:
            raise AssertionError("blow-up of a germ of too small order")
        new = list(exps)
        new[1] = d - s
        if sum(new) <= M:
            out[pack(new)] = c
    return Polynomial._raw(g.field, n, out), M


def _upoly_trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _upoly_gcd(a: list, b: list, fld: FieldSpec) -> list:
    """Monic gcd of univariate polynomials given as coefficient lists (low degree first)."""
    a, b = _upoly_trim(list(a)), _upoly_trim(list(b))
    while b:
        inv = fld.inv(b[-1])
        while len(a) >= len(b) and a:
            c = fld(a[-1] * inv)
            sh = len(a) - len(b)
            for i, bc in enumerate(b):
                a[i + sh] = fld(a[i + sh] - c * bc)
            _upoly_trim(a)
        a, b = b, a
    if not a:
        return []
    inv = fld.inv(a[-1])
    return [fld(c * inv) for c in a]


def binary_cubic_type(coeffs: tuple, fld: FieldSpec) -> tuple[str, object]:
    """Root structure of ``a x^3 + b x^2 y + c x y^2 + d y^3`` over the algebraic closure.

    Returns ``(kind, root)`` with kind in zero/three/double/triple.  The root
    is the repeated one: ``None`` for the direction ``y = 0`` and ``t`` for the
    linear factor ``x - t*y``.  Repeated roots of a cubic are always rational,
    so small prime fields are searched directly; otherwise (characteristic 0
    or p > 3) the repeated root comes from ``gcd(q, q')``.
    """
    a, b, c, d = (fld(v) for v in coeffs)
    if not (a or b or c or d):
        return "zero", None
    low = [d, c, b, a]  # q(t) = c(t, 1), low degree first
    m_inf = 0
    while not low[-1]:
        low.pop()
        m_inf += 1
    if m_inf >= 2:
        return ("triple" if m_inf == 3 else "double"), None
    p = fld.characteristic
    if p and p <= 1000:
        for t in range(p):
            q = list(low)
            mult = 0
            while len(q) > 1:
                # synthetic division by (t' - t)
                acc = 0
                quo = []
                for coef in reversed(q):
                    acc = (acc * t + coef) % p
                    quo.append(acc)
                if quo[-1]:
                    break
                mult += 1
                q = list(reversed(quo[:-1]))
            if mult >= 2:
                return ("triple" if mult == 3 else "double"), fld(t)
        return "three", None
    deriv = [fld(i * low[i]) for i in range(1, len(low))]
    g = _upoly_gcd(low, deriv, fld)
    if len(g) <= 1:
        return "three", None
    if len(g) == 2:
        return "double", fld(-g[0])
    return "triple", fld(-g[1] * fld.inv(fld(2)))


def _cubic_of(g: Polynomial, nv3: bool):
    """Coefficients of the degree-3 part of ``g`` restricted to the plane of the first two variables."""
    pad = (0,) if nv3 else ()
    return tuple(g.coefficient((i, 3 - i) + pad) for i in (3, 2, 1, 0))


def _move_root(g: Polynomial, root, N: int) -> Polynomial:
    return _linear_xy(g, None, True, N) if root is None else _linear_xy(g, root, False, N)


def _one_var_order(r: Polynomial, N: int) -> int:
    e = r.order()
    if e > N:
        raise _NeedMore()
    return e


def curve_type(g: Polynomial, N: int) -> tuple[str, int]:
    """Type of a plane curve germ from its N-jet: ("S", 0) smooth, or (family, index)."""
    fld = g.field
    p = fld.characteristic
    o = g.order()
    if o > N:
        raise _NeedMore()
    if o == 1:
        return "S", 0
    if o == 2:
        a, b, c = g.coefficient((2, 0)), g.coefficient((1, 1)), g.coefficient((0, 2))
        if p != 2:
            if fld(b * b - 4 * a * c):
                return "A", 1
            s = split(g, N, verify=False)
            return "A", _one_var_order(s.residual_in_corank_vars(), N) - 1
        if b:
            return "A", 1
        g1 = _linear_xy(g, fld(c * fld.inv(a)), False, N) if a else _linear_xy(g, None, True, N)
        g2, M = _blowup(g1, 2, N)
        fam, k = curve_type(g2, M)
        if fam == "S":
            return "A", 2
        if fam == "A":
            return "A", k + 2
        raise _NotSimple("square tangent cone with a non-A strict transform")
    if o == 3:
        kind, root = binary_cubic_type(_cubic_of(g, False), fld)
        if kind == "three":
            return "D", 4
        g1 = _move_root(g, root, N)
        if kind == "double":
            g2, M = _blowup(g1, 3, N)
            try:
                fam, k = curve_type(g2, M)
            except _NeedMore:
                raise _NeedMore("D")
            if fam == "S":
                return "D", 5
            if fam == "A":
                return "D", k + 5
            raise _NotSimple("double tangent line with a non-A strict transform")
        if N < 5:
            raise _NeedMore()
        if g1.coefficient((0, 4)):
            return "E", 6
        if g1.coefficient((1, 3)):
            return "E", 7
        if g1.coefficient((0, 5)):
            return "E", 8
        raise _NotSimple("triple tangent line beyond E8")
    raise _NotSimple(f"multiplicity {o} >= 4")


def surface_type(g: Polynomial, N: int) -> tuple[str, int]:
    """Type of a surface germ in three variables (characteristic 2) from its N-jet."""
    fld = g.field
    o = g.order()
    if o > N:
        raise _NeedMore()
    if o == 1:
        return "S", 0
    if o >= 3:
        raise _NotSimple("surface of multiplicity >= 3")
    _, g1, block = normalize_quadratic(g, N)  # a lone square ends up on z
    if block.pairs:
        s = split(g, N, verify=False)
        return "A", _one_var_order(s.residual_in_corank_vars(), N) - 1
    kind, root = binary_cubic_type(_cubic_of(g1, True), fld)
    if kind == "zero":
        if N < 3:
            raise _NeedMore()
        raise _NotSimple("double plane with vanishing cubic part")
    if kind == "three":
        return "D", 4
    g2, M = _blowup(_move_root(g1, root, N), 2, N)
    try:
        fam, k = surface_type(g2, M)
    except _NeedMore:
        raise _NeedMore("D" if kind == "double" else "E")
    if kind == "double":
        if fam == "A" and k == 3:
            return "D", 5
        if fam == "D":
            return "D", k + 2
        raise _NotSimple("double line of the cubic with an unexpected strict transform")
    table = {("A", 5): 6, ("D", 6): 7, ("E", 7): 8}
    if (fam, k) in table:
        return "E", table[(fam, k)]
    raise _NotSimple("triple line of the cubic beyond E8")


# ---------------------------------------------------------------- variants


def _cell_kind(p: int, nres: int) -> str:
    if p != 2:
        return "odd"
    return "char2_plane" if nres <= 2 else "char2_space"


@lru_cache(maxsize=None)
def _cell(kind: str, p: int, fam: str, idx: int) -> tuple:
    """Rows (variant, tau) of one (family, index) cell."""
    fld = FieldSpec(p)
    if fam == "E":
        param = 8
    else:
        param = idx // 2 + 1 if p == 2 else idx
    if kind == "odd":
        rows, names = plane_rows_odd(p, max(param, 8)), ["x", "y"]
    elif kind == "char2_plane":
        rows, names = plane_rows_char2(max(param, 2)), ["x", "y"]
    else:
        rows, names = surface_rows_char2(max(idx, 1), max(param, 2)), ["x", "y", "z"]
    cell = [(v, text) for f, k, v, text in rows if f == fam and k == idx]
    if len(cell) <= 1:
        return tuple((v, None) for v, _ in cell)
    out = []
    for v, text in cell:
        tau = tjurina_number(parse_poly(text, fld, names))
        out.append((v, int(tau)))
    return tuple(out)


def _jet_tau(r: Polynomial, N: int) -> int:
    """Tjurina number of the germ whose N-jet is ``r``, or NeedMore when the jet does not determine it."""
    SB = standard_basis(tjurina_ideal(r.truncate(N)), N, reduce_tails=False)
    if not SB.complete_flag:
        raise _NeedMore()
    shift = 16 * r.nvars
    if any((k >> shift) > N - 2 for k in SB.standard_keys):
        raise _NeedMore()
    return len(SB.standard_keys)


def _resolve_variant(fam: str, idx: int, r: Polynomial, N: int, p: int) -> ClassLabel:
    cell = _cell(_cell_kind(p, r.nvars), p, fam, idx)
    if not cell:
        return _not_simple(f"no normal form {fam}_{idx} in characteristic {p}")
    if len(cell) == 1:
        return ClassLabel(fam, idx, cell[0][0])
    # tau <= T forces m^T into the Tjurina ideal, so a jet of order T + 2 decides every candidate
    top = max(t for _, t in cell)
    M = min(N, top + 2)
    tau = None
    for L in sorted({min(M, 6), min(M, 10), M}):
        try:
            tau = _jet_tau(r, L)
            break
        except _NeedMore:
            if L == N:
                raise
    hits = [v for v, t in cell if t == tau]
    if len(hits) == 1:
        return ClassLabel(fam, idx, hits[0])
    cands = [ClassLabel(fam, idx, v) for v in hits] or [ClassLabel(fam, idx, v) for v, _ in cell]
    shown = f"above {top}" if tau is None else str(tau)
    why = "tied Tjurina numbers" if hits else f"Tjurina number {shown} matches no row"
    return _unclassified(f"{fam}_{idx}: {why}", cands)


# ---------------------------------------------------------------- contact


def _classify_at(f: Polynomial, N: int) -> ClassLabel:
    p = f.field.characteristic
    s = split(f.truncate(N), N, verify=False)
    c = s.corank
    if c == 0:
        return ClassLabel("A", 1)
    r = s.residual_in_corank_vars()
    if c == 1:
        return ClassLabel("A", _one_var_order(r, N) - 1)
    try:
        if c == 2:
            fam, k = curve_type(r, N)
        elif c == 3 and p == 2:
            fam, k = surface_type(r, N)
        else:
            return _not_simple(f"corank {c} too large for a simple germ")
    except _NotSimple as exc:
        return _not_simple(str(exc))
    if fam == "S":
        raise AssertionError("residual of order 1 after splitting")
    return _resolve_variant(fam, k, r, N, p)


def _jet_schedule(cap: int, order: int) -> list[int]:
    """Jet bounds tried by the classifier: growth by 3/2 from a small start, ending at ``cap``."""
    out = []
    N = max(8, order + 4)
    while N < cap:
        out.append(N)
        N = N * 3 // 2
    return out + [cap]


def classify_contact(f: Polynomial, cap: int | None = None) -> ClassLabel:
    cap = cap or default_cap()
    if f.is_zero():
        return detect_nonisolated_type(f, cap)
    if f.constant_term():
        return _unclassified("germ does not vanish at the origin")
    if f.order() == 1:
        return ClassLabel("Smooth")
    for N in _jet_schedule(cap, f.order()):
        try:
            return _classify_at(f, N)
        except _NeedMore:
            continue
    return detect_nonisolated_type(f, cap)


def detect_nonisolated_type(f: Polynomial, cap: int | None = None) -> ClassLabel:
    """Best-effort recognition of A∞ and D∞ at the jet bound ``cap``."""
    cap = cap or default_cap()
    if f.is_zero():
        return _unclassified("zero germ")
    if f.constant_term():
        return _unclassified("germ does not vanish at the origin")
    if f.order() == 1:
        return ClassLabel("Smooth")
    p = f.field.characteristic
    try:
        _classify_at(f, cap)
    except _NeedMore as exc:
        if tjurina_number(f, cap).finite:
            return _unclassified(f"isolated, but jet bound {cap} is too small to classify")
        s = split(f.truncate(cap), cap, verify=False)
        if exc.family == "A" and (s.corank == 1 or (p == 2 and s.corank == 2)):
            return ClassLabel("AInf")
        if exc.family == "D":
            return ClassLabel("DInf", reason=None)
    return _unclassified("non-isolated, not recognized")


# ---------------------------------------------------------------- right


def classify_right(f: Polynomial, cap: int | None = None) -> ClassLabel:
    fld = f.field
    p = fld.characteristic
    cap = cap or default_cap()
    if p == 0:
        return classify_contact(f, cap)
    if f.constant_term():
        return _unclassified("germ does not vanish at the origin")
    if f.is_zero():
        return _not_simple("zero germ")
    if f.order() == 1:
        return ClassLabel("Smooth")
    n = f.nvars
    if n == 1:
        try:
            rep = classify_univariate(f, cap)
        except QNotFoundUpTo:
            return _not_simple("Milnor number infinite")
        if rep.simple:
            return ClassLabel("A", int(rep.mu))
        return _not_simple(f"mu = {int(rep.mu)} >= p = {p}")
    if p == 2:
        if n % 2:
            return _not_simple("no right simple germ in an odd number of variables in characteristic 2")
        _, _, block = quadratic_normal_form(f, 2)
        if 2 * len(block.pairs) == n:
            return ClassLabel("A", 1)
        return _not_simple("quadratic part is not a nondegenerate sum of pairs")
    lab = classify_contact(f, cap)
    if lab.family not in ("A", "D", "E"):
        return lab
    if lab.variant not in (None, 0):
        return _not_simple(f"{lab.full_name} is not right simple (variant must be 0)")
    k = lab.index
    if lab.family == "A" and not k <= p - 2:
        return _not_simple(f"A_{k} needs k <= p-2 = {p - 2}")
    if lab.family == "D" and not k < p:
        return _not_simple(f"D_{k} needs k < p = {p}")
    if lab.family == "E" and k in (6, 7) and not p > 3:
        return _not_simple(f"E_{k} needs p > 3")
    if lab.family == "E" and k == 8 and not p > 5:
        return _not_simple("E_8 needs p > 5")
    return lab


# ---------------------------------------------------------------- univariate


@dataclass(frozen=True)
class UnivariateReport:
    mult: int
    e: int
    q: int
    k: int
    determinacy: int
    mu: InvariantValue
    modality: int
    simple: bool
    normal_form_hint: Monomial | None

    def to_json(self) -> dict:
        return {
            "mult": self.mult,
            "e": self.e,
            "q": self.q,
            "k": self.k,
            "determinacy": self.determinacy,
            "mu": self.mu.to_json(),
            "modality": self.modality,
            "simple": self.simple,
            "normal_form_hint": None if self.normal_form_hint is None else self.normal_form_hint.format(["x"]),
        }


def p_valuation(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def classify_univariate(f: Polynomial, cap: int | None = None) -> UnivariateReport:
    """Exact right determinacy, Milnor number and modality of a univariate germ."""
    if f.nvars != 1:
        raise NotUnivariate(f"expected one variable, got {f.nvars}")
    cap = cap or default_cap()
    if f.constant_term() or f.order() < 2:
        raise OrderTooSmall("univariate classification needs f in m^2")
    p = f.field.characteristic
    supp = sorted(e[0] for e, _ in f.items() if e[0] <= cap)
    mt = supp[0]
    if p == 0:
        mu = milnor_number(f, cap)
        return UnivariateReport(mt, 0, mt, 1, mt, mu, 0, True, Monomial((mt,)))
    ev = {n: p_valuation(n, p) for n in supp}
    e = min(ev.values())
    if e > 0:
        raise QNotFoundUpTo(f"every exponent up to {cap} is divisible by {p}", cap)
    q = next(n for n in supp if ev[n] == e)
    if mt == q:
        k = 1
    else:
        k = max(math.ceil((q - n) / (p ** ev[n] - p**e)) for n in supp if mt <= n < q)
    d = q + p**e * (k - 1)
    mu = milnor_number(f, max(cap, q + 2))
    if not mu.finite or int(mu) != q - 1:
        raise AssertionError(f"Milnor number {mu} disagrees with q - 1 = {q - 1}")
    m = q - 1
    simple = m < p
    return UnivariateReport(mt, e, q, k, d, mu, m // p, simple, Monomial((m + 1,)) if simple else None)
