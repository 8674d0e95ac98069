"""Constructive splitting lemma.

After a linear change puts the 2-jet into normal form, mixed terms are removed
degree by degree.  Characteristic != 2: the 2-jet is ``sum a_i x_i^2`` on the
rank block and a term ``x_i * s`` of degree d is absorbed by
``x_i -> x_i - s / (2 a_i)``.  Characteristic 2: the rank block consists of
pairs ``a x_i^2 + x_i x_j + b x_j^2`` and a term ``x_i * s`` is absorbed by
``x_j -> x_j - s``.  Each substitution only creates terms of higher degree,
so one pass per degree suffices.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .errors import InputError, NotInMaximalIdeal, OrderTooSmall
from .ring import (
    BITS,
    FIELD_MASK,
    FieldSpec,
    JetAutomorphism,
    Polynomial,
    compose,
    compose_polys,
    layout,
    pack,
    restrict,
    substitute_jet,
    unpack,
)


@dataclass(frozen=True)
class QuadBlock:
    """Normalized 2-jet: ``rank`` variables first, then the corank block."""

    rank: int
    diagonal: tuple  # ((i, a_i), ...): rank coefficients (char != 2) or residual squares (char 2)
    pairs: tuple = ()  # ((i, j, a_i, a_j), ...) in characteristic 2

    def to_json(self) -> dict:
        return {
            "pairs": [[i, j, int(a) if isinstance(a, int) else str(a), int(b) if isinstance(b, int) else str(b)] for i, j, a, b in self.pairs],
            "diagonal": [[i, int(a) if isinstance(a, int) else str(a)] for i, a in self.diagonal],
            "rank": self.rank,
        }


def _quad_coeffs(f: Polynomial) -> dict:
    n = f.nvars
    q = {}
    for i in range(n):
        for j in range(i, n):
            e = [0] * n
            e[i] += 1
            e[j] += 1
            c = f.coefficient(e)
            if c:
                q[(i, j)] = c
    return q


def _bilinear(q: dict, u: list, v: list, fld: FieldSpec):
    """Polar form B(u, v) = Q(u + v) - Q(u) - Q(v)."""
    s = 0
    for (i, j), c in q.items():
        if i == j:
            s += 2 * c * u[i] * v[i]
        else:
            s += c * (u[i] * v[j] + u[j] * v[i])
    return fld(s)


def _qval(q: dict, u: list, fld: FieldSpec):
    s = 0
    for (i, j), c in q.items():
        s += c * u[i] * u[j]
    return fld(s)


def _change_from_columns(cols: list[list], fld: FieldSpec, N: int) -> JetAutomorphism:
    """x_i -> sum_j cols[j][i] x_j, i.e. new coordinate j has direction cols[j]."""
    n = len(cols)
    mat = [[cols[j][i] for j in range(n)] for i in range(n)]
    return JetAutomorphism.linear(fld, mat, N)


def quadratic_normal_form(f: Polynomial, N: int | None = None) -> tuple[JetAutomorphism, Polynomial, QuadBlock]:
    """Linear change normalizing the 2-jet; returns (change, normalized 2-jet, block data)."""
    change, g, block = normalize_quadratic(f, N)
    return change, g.homogeneous_part(2), block


def normalize_quadratic(f: Polynomial, N: int | None = None) -> tuple[JetAutomorphism, Polynomial, QuadBlock]:
    """Like :func:`quadratic_normal_form` but returns the whole transformed N-jet."""
    if f.constant_term():
        raise NotInMaximalIdeal("germ must vanish at the origin")
    if f.order() == 1:
        raise OrderTooSmall("germ has a linear term")
    fld = f.field
    n = f.nvars
    N = N or max(f.degree(), 2)
    q = _quad_coeffs(f)
    one, zero = fld.one, fld.zero
    cols = [[one if i == j else zero for i in range(n)] for j in range(n)]

    if fld.characteristic != 2:
        r = 0
        while r < n:
            # pick a remaining direction with Q != 0, creating one from a mixed pair if needed
            piv = next((j for j in range(r, n) if _qval(q, cols[j], fld)), None)
            if piv is None:
                found = None
                for a in range(r, n):
                    for b in range(a + 1, n):
                        if _bilinear(q, cols[a], cols[b], fld):
                            found = (a, b)
                            break
                    if found:
                        break
                if not found:
                    break
                a, b = found
                cols[a] = [fld(x + y) for x, y in zip(cols[a], cols[b])]
                piv = a
            cols[r], cols[piv] = cols[piv], cols[r]
            ar = _qval(q, cols[r], fld)
            inv2a = fld.inv(fld(2 * ar))
            for j in range(r + 1, n):
                c = _bilinear(q, cols[j], cols[r], fld)
                if c:
                    t = fld(c * inv2a)
                    cols[j] = [fld(x - t * y) for x, y in zip(cols[j], cols[r])]
            r += 1
        change = _change_from_columns(cols, fld, N)
        diag = tuple((i, _qval(q, cols[i], fld)) for i in range(r))
        block = QuadBlock(r, diag, ())
    else:
        r = 0
        pairs = []
        while r + 1 < n:
            found = None
            for a in range(r, n):
                for b in range(a + 1, n):
                    if _bilinear(q, cols[a], cols[b], fld):
                        found = (a, b)
                        break
                if found:
                    break
            if not found:
                break
            a, b = found
            cols[r], cols[a] = cols[a], cols[r]
            cols[r + 1], cols[b] = cols[b], cols[r + 1]
            u, v = cols[r], cols[r + 1]
            c = _bilinear(q, u, v, fld)
            v = [fld(x * fld.inv(c)) for x in v]
            cols[r + 1] = v
            for j in range(r + 2, n):
                w = cols[j]
                bu = _bilinear(q, w, u, fld)
                bv = _bilinear(q, w, v, fld)
                if bu or bv:
                    cols[j] = [fld(x - bv * y + bu * z) for x, y, z in zip(w, u, v)]
            pairs.append((r, r + 1, _qval(q, u, fld), _qval(q, v, fld)))
            r += 2
        # the radical: Q is a sum of squares there; over F_2 merge them into one square
        rad = list(range(r, n))
        sq = [(j, _qval(q, cols[j], fld)) for j in rad]
        nz = [j for j, d in sq if d]
        if len(nz) > 1:
            # new direction set: keep the span, make exactly one vector with Q != 0
            keep = nz[0]
            for j in nz[1:]:
                cols[j] = [fld(x - y) for x, y in zip(cols[j], cols[keep])]
        # put the square direction last so the residual's square sits on the last variable
        if nz:
            last = n - 1
            cols[nz[0]], cols[last] = cols[last], cols[nz[0]]
        diag = tuple((j, _qval(q, cols[j], fld)) for j in rad if _qval(q, cols[j], fld))
        change = _change_from_columns(cols, fld, N)
        block = QuadBlock(r, diag, tuple(pairs))
    if all(cols[j][i] == (1 if i == j else 0) for i in range(n) for j in range(n)):
        return change, f.truncate(N), block
    return change, substitute_jet(f, change), block


@dataclass
class SplitResult:
    quad_rank: int
    quad_form: Polynomial
    residual: Polynomial
    bound: int
    block: QuadBlock
    steps: list = dc_field(repr=False)
    original: Polynomial = dc_field(repr=False, default=None)

    @property
    def corank(self) -> int:
        return self.residual.nvars - self.quad_rank

    @cached_property
    def transform(self) -> JetAutomorphism:
        phi = self.steps[0]
        for st in self.steps[1:]:
            phi = compose(st, phi)
        return phi

    def residual_in_corank_vars(self) -> Polynomial | None:
        """The residual as a polynomial in the ``corank`` last variables (None if corank is 0)."""
        n = self.residual.nvars
        if self.quad_rank == n:
            return None
        return restrict(self.residual, list(range(self.quad_rank, n)))

    def verify(self) -> bool:
        return substitute_jet(self.original, self.transform) == self.quad_form + self.residual

    def to_json(self, names=None) -> dict:
        return {
            "quad": self.block.to_json(),
            "quad_form": self.quad_form.format(names),
            "residual": self.residual.format(names),
            "bound": self.bound,
        }


def split(f: Polynomial, N: int, verify: bool = True) -> SplitResult:
    """Split ``jet_N(f)`` into a normalized quadratic form plus a residual.

    With ``verify`` the reconstruction identity is checked exactly; internal
    callers that only need the residual switch it off.
    """
    fld = f.field
    n = f.nvars
    p = fld.characteristic
    if N < 2:
        raise InputError("splitting needs a jet bound of at least 2")
    change, g, block = normalize_quadratic(f.truncate(N), N)
    steps = [change]
    r = block.rank
    shift = BITS * n
    # partner / divisor data per rank variable
    if p != 2:
        halfinv = {i: fld.inv(fld(2 * a)) for i, a in block.diagonal}
    partner = {}
    for i, j, _, _ in block.pairs:
        partner[i] = j
        partner[j] = i

    if r:
        units = layout(n)[2]
        for d in range(3, N + 1):
            corr: dict = {}
            for k, c in g._t.items():
                if k >> shift != d:
                    continue
                i = next((v for v in range(r) if (k >> (BITS * v)) & FIELD_MASK), None)
                if i is None:
                    continue
                s_key = k - units[i]
                if p != 2:
                    target, coef = i, c * halfinv[i]
                else:
                    target, coef = partner[i], c
                tgt = corr.setdefault(target, {})
                tgt[s_key] = tgt.get(s_key, 0) + coef
            if not corr:
                if not any(
                    (k >> shift) > d and any((k >> (BITS * v)) & FIELD_MASK for v in range(r)) for k in g._t
                ):
                    break
                continue
            images = []
            for v in range(n):
                img = {units[v]: fld.one}
                if v in corr:
                    for sk, sc in corr[v].items():
                        val = fld(-sc)
                        if val:
                            img[sk] = val
                images.append(Polynomial._raw(fld, n, img))
            step = JetAutomorphism(tuple(images), N)
            g = compose_polys(g, step.images, N)
            steps.append(step)

    quad_form = Polynomial._raw(fld, n, {})
    residual_terms = dict(g._t)
    qf = {}
    for k, c in list(residual_terms.items()):
        if k >> shift != 2:
            continue
        exps = unpack(k, n)
        if any(exps[v] for v in range(r)):
            qf[k] = residual_terms.pop(k)
    quad_form = Polynomial._raw(fld, n, qf)
    residual = Polynomial._raw(fld, n, residual_terms)
    res = SplitResult(r, quad_form, residual, N, block, steps, f.truncate(N))
    if any(any(unpack(k, n)[v] for v in range(r)) for k in residual_terms):
        raise AssertionError("splitting left a mixed term in the residual")
    if verify and not res.verify():
        raise AssertionError("splitting reconstruction identity failed")
    return res
