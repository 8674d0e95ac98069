"""Ground fields, sparse polynomials truncated at a jet bound, parsing, coordinate changes.

Monomials are stored internally as packed integers: every exponent gets a
16-bit field (top bit kept free as a guard for divisibility tests) and the
total degree sits above all exponent fields.  With that layout

* multiplying monomials is integer addition,
* a *larger* packed key is a *smaller* monomial in the local degree ordering
  ``ds`` (lower degree first, ties by reverse lexicographic order), so the
  leading monomial of a polynomial is simply ``min(keys)``,
* truncation at degree ``N`` is the comparison ``key < (N + 1) << shift``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .errors import (
    DivisionByZeroInCoefficient,
    FieldMismatch,
    IndexOutOfRange,
    InputError,
    NonInvertibleLinearPart,
    NonPrimeCharacteristic,
    PolySyntaxError,
    UnknownVariable,
)

BITS = 16
FIELD_MASK = (1 << BITS) - 1
MAX_EXPONENT = (1 << (BITS - 1)) - 1
INFINITE = math.inf


# ---------------------------------------------------------------- layout


@lru_cache(maxsize=None)
def layout(n: int) -> tuple[int, int, tuple[int, ...]]:
    """(shift of the degree field, guard mask, packed keys of x_1..x_n)."""
    shift = BITS * n
    guard = 0
    for i in range(n):
        guard |= 1 << (BITS * i + BITS - 1)
    units = tuple((1 << shift) | (1 << (BITS * i)) for i in range(n))
    return shift, guard, units


def pack(exps: Sequence[int]) -> int:
    n = len(exps)
    key = 0
    deg = 0
    for i, e in enumerate(exps):
        if e < 0 or e > MAX_EXPONENT:
            raise InputError(f"exponent {e} outside the supported range 0..{MAX_EXPONENT}")
        key |= e << (BITS * i)
        deg += e
    return key | (deg << (BITS * n))


def unpack(key: int, n: int) -> tuple[int, ...]:
    return tuple((key >> (BITS * i)) & FIELD_MASK for i in range(n))


def key_degree(key: int, n: int) -> int:
    return key >> (BITS * n)


def divides(a: int, b: int, guard: int) -> bool:
    """Whether monomial ``a`` divides monomial ``b`` (packed, same layout)."""
    return ((b | guard) - a) & guard == guard


def key_lcm(a: int, b: int, n: int) -> int:
    key = 0
    deg = 0
    for i in range(n):
        s = BITS * i
        e = max((a >> s) & FIELD_MASK, (b >> s) & FIELD_MASK)
        key |= e << s
        deg += e
    return key | (deg << (BITS * n))


def degree_limit(N: int, n: int) -> int:
    """Packed keys strictly below this value have total degree at most N."""
    return (N + 1) << (BITS * n)


# ---------------------------------------------------------------- fields


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The rationals (characteristic 0) or the prime field F_p.

    Calling a FieldSpec normalizes a value into the field: residues in
    ``[0, p)`` for ``F_p`` and reduced ``gmpy2.mpq`` fractions over Q.
    """

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if not isinstance(p, int) or p < 0 or (p != 0 and not _is_prime(p)):
            raise NonPrimeCharacteristic(f"characteristic must be 0 or a prime, got {p!r}")

    @property
    def p(self) -> int:
        return self.characteristic

    def __call__(self, value) -> object:
        p = self.characteristic
        if p == 0:
            if isinstance(value, Fraction):
                return mpq(value.numerator, value.denominator)
            if isinstance(value, str):
                value = value.strip()
                if "/" in value:
                    num, den = value.split("/", 1)
                    if int(den) == 0:
                        raise DivisionByZeroInCoefficient(f"zero denominator in {value!r}")
                    return mpq(int(num), int(den))
                return mpq(int(value))
            return mpq(value)
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, int):
            return value % p
        q = Fraction(value) if not isinstance(value, Fraction) else value
        if q.denominator % p == 0:
            raise DivisionByZeroInCoefficient(f"denominator of {q} vanishes in characteristic {p}")
        return q.numerator * pow(q.denominator, -1, p) % p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return pow(int(a), -1, p) if p else 1 / a

    def random_element(self, rng: random.Random, nonzero: bool = False, height: int = 3):
        """Uniform over F_p; small integers in [-height, height] over Q."""
        while True:
            if self.characteristic:
                c = rng.randrange(self.characteristic)
            else:
                c = mpq(rng.randint(-height, height))
            if c or not nonzero:
                return c

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"F_{self.characteristic}"


def coerce_scalar(field: FieldSpec, value) -> object:
    """Normalize ``value`` into ``field`` (scalars are plain ints / ``mpq``)."""
    return field(value)


def format_scalar(c) -> str:
    return str(c)


# ---------------------------------------------------------------- monomials


@total_ordering
@dataclass(frozen=True)
class Monomial:
    """Exponent vector.  Comparison follows the local ordering: ``1 > x > x**2``."""

    exponents: tuple[int, ...]
    degree: int = dc_field(init=False, compare=False)

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise InputError("negative exponent")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "degree", sum(exps))

    @property
    def nvars(self) -> int:
        return len(self.exponents)

    @property
    def key(self) -> int:
        return pack(self.exponents)

    @classmethod
    def from_key(cls, key: int, n: int) -> "Monomial":
        return cls(unpack(key, n))

    def __lt__(self, other: "Monomial") -> bool:
        # smaller in ds  <=>  larger packed key
        return self.key > other.key

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def format(self, names: Sequence[str] | None = None, style: str = "caret") -> str:
        names = names or default_var_names(self.nvars)
        parts = []
        for name, e in zip(names, self.exponents):
            if e == 0:
                continue
            if style == "singular":
                parts.append(name if e == 1 else f"{name}{e}")
            else:
                parts.append(name if e == 1 else f"{name}^{e}")
        if not parts:
            return "1"
        return ("" if style == "singular" else "*").join(parts)

    def __str__(self) -> str:
        return self.format()


def default_var_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i}" for i in range(1, n + 1)]


# ---------------------------------------------------------------- raw dict kernels


def _normalize(d: dict, p: int) -> dict:
    if p:
        return {k: v % p for k, v in d.items() if v % p}
    return {k: v for k, v in d.items() if v}


def mul_dicts(a: dict, b: dict, limit: int, p: int) -> dict:
    """Product of two term maps, keeping keys below ``limit``."""
    if not a or not b:
        return {}
    if len(b) == 1:
        (kb, cb), = b.items()
        res = {}
        for ka, ca in a.items():
            k = ka + kb
            if k < limit:
                res[k] = ca * cb
        return _normalize(res, p) if p else res
    if len(a) == 1:
        return mul_dicts(b, a, limit, p)
    bs = sorted(b.items())
    b0 = bs[0][0]
    res: dict = {}
    get = res.get
    for ka, ca in a.items():
        lim = limit - ka
        if b0 >= lim:
            continue
        for kb, cb in bs:
            if kb >= lim:
                break
            k = ka + kb
            res[k] = get(k, 0) + ca * cb
    return _normalize(res, p)


def add_into(acc: dict, other: dict, p: int, scale=1) -> None:
    """acc += scale * other, in place (zero coefficients removed)."""
    get = acc.get
    if p:
        for k, v in other.items():
            c = (get(k, 0) + scale * v) % p
            if c:
                acc[k] = c
            else:
                acc.pop(k, None)
    else:
        for k, v in other.items():
            c = get(k, 0) + scale * v
            if c:
                acc[k] = c
            else:
                acc.pop(k, None)


def truncate_dict(d: dict, limit: int) -> dict:
    return {k: v for k, v in d.items() if k < limit}


# ---------------------------------------------------------------- polynomials


class Polynomial:
    """Sparse polynomial over a :class:`FieldSpec` in ``nvars`` variables.

    Instances are immutable values.  ``terms`` maps :class:`Monomial` to
    normalized coefficients; the packed representation is internal.
    """

    __slots__ = ("field", "nvars", "_t", "_hash")

    def __init__(self, field: FieldSpec, nvars: int, terms: Mapping | None = None):
        if nvars < 1:
            raise InputError("a polynomial needs at least one variable")
        self.field = field
        self.nvars = nvars
        self._hash = None
        d: dict = {}
        if terms:
            p = field.characteristic
            for m, c in terms.items():
                exps = m.exponents if isinstance(m, Monomial) else tuple(m)
                if len(exps) != nvars:
                    raise InputError(f"exponent vector {exps} has wrong length for {nvars} variables")
                k = pack(exps)
                d[k] = d.get(k, 0) + field(c)
            d = _normalize(d, p)
        self._t = d

    @classmethod
    def _raw(cls, field: FieldSpec, nvars: int, d: dict) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.field = field
        obj.nvars = nvars
        obj._t = d
        obj._hash = None
        return obj

    # -- constructors
    @classmethod
    def zero(cls, field: FieldSpec, nvars: int) -> "Polynomial":
        return cls._raw(field, nvars, {})

    @classmethod
    def constant(cls, field: FieldSpec, nvars: int, c=1) -> "Polynomial":
        c = field(c)
        return cls._raw(field, nvars, {0: c} if c else {})

    @classmethod
    def variable(cls, field: FieldSpec, nvars: int, i: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise IndexOutOfRange(f"variable index {i} out of range for {nvars} variables")
        return cls._raw(field, nvars, {layout(nvars)[2][i]: field(1)})

    @classmethod
    def monomial(cls, field: FieldSpec, exps: Sequence[int], c=1) -> "Polynomial":
        c = field(c)
        return cls._raw(field, len(exps), {pack(exps): c} if c else {})

    # -- views
    @property
    def terms(self) -> dict:
        n = self.nvars
        return {Monomial(unpack(k, n)): c for k, c in sorted(self._t.items())}

    def items(self) -> list[tuple[tuple[int, ...], object]]:
        """(exponents, coefficient) pairs, largest monomial (in ds) first."""
        n = self.nvars
        return [(unpack(k, n), c) for k, c in sorted(self._t.items())]

    def coefficient(self, exps: Sequence[int]):
        return self._t.get(pack(exps), self.field.zero)

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def constant_term(self):
        return self._t.get(0, self.field.zero)

    def order(self) -> float | int:
        if not self._t:
            return INFINITE
        return min(self._t) >> (BITS * self.nvars)

    def degree(self) -> int:
        if not self._t:
            return -1
        return max(self._t) >> (BITS * self.nvars)

    def leading_monomial(self) -> Monomial | None:
        if not self._t:
            return None
        return Monomial(unpack(min(self._t), self.nvars))

    def leading_coefficient(self):
        return self._t[min(self._t)] if self._t else self.field.zero

    def homogeneous_part(self, d: int) -> "Polynomial":
        s = BITS * self.nvars
        return Polynomial._raw(self.field, self.nvars, {k: c for k, c in self._t.items() if k >> s == d})

    def truncate(self, N: int) -> "Polynomial":
        lim = degree_limit(N, self.nvars)
        return Polynomial._raw(self.field, self.nvars, truncate_dict(self._t, lim))

    jet = truncate

    def support_variables(self) -> list[int]:
        used = set()
        for exps, _ in self.items():
            used.update(i for i, e in enumerate(exps) if e)
        return sorted(used)

    # -- arithmetic
    def _check(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial):
            raise TypeError("expected a Polynomial")
        if other.field != self.field or other.nvars != self.nvars:
            raise FieldMismatch(
                f"operands live in {self.field}[{self.nvars}] and {other.field}[{other.nvars}]"
            )

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.field, self.nvars, other)

    def __add__(self, other) -> "Polynomial":
        other = self._lift(other)
        d = dict(self._t)
        add_into(d, other._t, self.field.characteristic)
        return Polynomial._raw(self.field, self.nvars, d)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        p = self.field.characteristic
        if p:
            return Polynomial._raw(self.field, self.nvars, {k: (-v) % p for k, v in self._t.items()})
        return Polynomial._raw(self.field, self.nvars, {k: -v for k, v in self._t.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._lift(other)
        d = dict(self._t)
        add_into(d, other._t, self.field.characteristic, -1)
        return Polynomial._raw(self.field, self.nvars, d)

    def __rsub__(self, other) -> "Polynomial":
        return self._lift(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        # untruncated: the limit just has to exceed every possible key
        lim = degree_limit(self.degree() + other.degree() + 1, self.nvars)
        return Polynomial._raw(self.field, self.nvars, mul_dicts(self._t, other._t, lim, self.field.p))

    def __rmul__(self, other) -> "Polynomial":
        return self.scale(other)

    def __pow__(self, e: int) -> "Polynomial":
        result = Polynomial.constant(self.field, self.nvars, 1)
        for _ in range(e):
            result = result * self
        return result

    def scale(self, c) -> "Polynomial":
        c = self.field(c)
        if not c:
            return Polynomial.zero(self.field, self.nvars)
        p = self.field.characteristic
        if p:
            return Polynomial._raw(self.field, self.nvars, {k: v * c % p for k, v in self._t.items()})
        return Polynomial._raw(self.field, self.nvars, {k: v * c for k, v in self._t.items()})

    def monic(self) -> "Polynomial":
        return self.scale(self.field.inv(self.leading_coefficient())) if self._t else self

    # -- comparison / hashing
    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.field == other.field and self.nvars == other.nvars and self._t == other._t
        if isinstance(other, (int, Fraction)) or type(other) is type(mpq(0)):
            return self == Polynomial.constant(self.field, self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field.characteristic, self.nvars, frozenset(self._t.items())))
        return self._hash

    # -- printing
    def format(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names else default_var_names(self.nvars)
        if not self._t:
            return "0"
        p = self.field.characteristic
        out = []
        for exps, c in self.items():
            mono = Monomial(exps).format(names)
            neg = (not p) and c < 0
            a = -c if neg else c
            if mono == "1":
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not out:
                out.append("-" + body if neg else body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Polynomial({self.format()!r}, char={self.field.characteristic}, nvars={self.nvars})"


# ---------------------------------------------------------------- spec-level operations


def mul_truncated(f: Polynomial, g: Polynomial, N: int) -> Polynomial:
    """``jet_N(f * g)``."""
    f._check(g)
    lim = degree_limit(N, f.nvars)
    return Polynomial._raw(f.field, f.nvars, mul_dicts(f._t, g._t, lim, f.field.p))


def partial_derivative(f: Polynomial, i: int) -> Polynomial:
    """Formal derivative with respect to the variable of 0-based index ``i``."""
    n = f.nvars
    if not 0 <= i < n:
        raise IndexOutOfRange(f"variable index {i} out of range for {n} variables")
    shift = BITS * i
    unit = layout(n)[2][i]
    p = f.field.characteristic
    d = {}
    for k, c in f._t.items():
        e = (k >> shift) & FIELD_MASK
        if e:
            v = e * c
            if p:
                v %= p
            if v:
                d[k - unit] = v
    return Polynomial._raw(f.field, n, d)


def gradient(f: Polynomial) -> list[Polynomial]:
    return [partial_derivative(f, i) for i in range(f.nvars)]


def order_of(f: Polynomial) -> float | int:
    """Minimal total degree of a term; ``INFINITE`` (``math.inf``) for zero."""
    return f.order()


def embed(f: Polynomial, nvars: int, positions: Sequence[int]) -> Polynomial:
    """Rename variable ``j`` of ``f`` to variable ``positions[j]`` of a ring with ``nvars`` variables."""
    out = {}
    for exps, c in f.items():
        new = [0] * nvars
        for j, e in enumerate(exps):
            new[positions[j]] += e
        out[pack(new)] = c
    return Polynomial._raw(f.field, nvars, out)


def restrict(f: Polynomial, keep: Sequence[int]) -> Polynomial:
    """Drop variables not listed in ``keep`` (they must not occur in ``f``)."""
    out = {}
    for exps, c in f.items():
        if any(e for i, e in enumerate(exps) if i not in keep):
            raise InputError("polynomial uses a variable that is being dropped")
        out[pack([exps[i] for i in keep])] = c
    return Polynomial._raw(f.field, len(keep), out)


# ---------------------------------------------------------------- substitution


def _horner(items: list, i: int, imgs: list[dict], ords: list[int], bound: int, tn: int, p: int) -> dict:
    """Sum of c * prod_{j <= i} imgs[j]**a_j over ``items``, truncated at ``bound``."""
    if bound < 0:
        return {}
    if i < 0:
        total = 0
        for _, c in items:
            total += c
        if p:
            total %= p
        return {0: total} if total else {}
    groups: dict[int, list] = {}
    for it in items:
        groups.setdefault(it[0][i], []).append(it)
    o = ords[i]
    img = imgs[i]
    acc: dict = {}
    prev = None
    for e in sorted(groups, reverse=True):
        if bound - e * o < 0:
            continue
        if prev is not None and acc:
            for step in range(prev - e):
                remaining = prev - step - 1
                acc = mul_dicts(acc, img, degree_limit(bound - remaining * o, tn), p)
        sub = _horner(groups[e], i - 1, imgs, ords, bound - e * o, tn, p)
        if acc:
            add_into(acc, sub, p)
        else:
            acc = dict(sub)
        prev = e
    if prev:
        for step in range(prev):
            remaining = prev - step - 1
            if not acc:
                break
            acc = mul_dicts(acc, img, degree_limit(bound - remaining * o, tn), p)
    return acc


def _as_permutation(images: Sequence[Polynomial]) -> list[int] | None:
    """Target index per variable if every image is a bare variable (coefficient 1)."""
    perm = []
    for g in images:
        if len(g._t) != 1:
            return None
        (k, c), = g._t.items()
        if c != 1:
            return None
        exps = unpack(k, g.nvars)
        if sum(exps) != 1:
            return None
        perm.append(exps.index(1))
    return perm if len(set(perm)) == len(perm) else None


def compose_polys(f: Polynomial, images: Sequence[Polynomial], N: int) -> Polynomial:
    """``jet_N(f(images))``; every image must lie in the maximal ideal."""
    if len(images) != f.nvars:
        raise InputError(f"{len(images)} images given for {f.nvars} variables")
    tn = images[0].nvars
    for g in images:
        if g.field != f.field or g.nvars != tn:
            raise FieldMismatch("images must share field and variable count")
    ords = []
    for g in images:
        o = g.order()
        if o == 0:
            raise InputError("substituted images must have zero constant term")
        ords.append(N + 1 if o == INFINITE else o)
    n = f.nvars
    limit = degree_limit(N, n)
    perm = _as_permutation(images)
    if perm is not None and tn == n:
        out = {}
        for k, c in f._t.items():
            if k < limit:
                exps = unpack(k, n)
                new = [0] * n
                for i, e in enumerate(exps):
                    new[perm[i]] = e
                out[pack(new)] = c
        return Polynomial._raw(f.field, n, out)
    items = [(unpack(k, n), c) for k, c in f._t.items() if k < limit]
    d = _horner(items, n - 1, [g._t for g in images], ords, N, tn, f.field.characteristic)
    return Polynomial._raw(f.field, tn, d)


def _det(rows: list[list], field: FieldSpec):
    m = [list(r) for r in rows]
    n = len(m)
    p = field.characteristic
    det = field.one
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        pv = m[c][c]
        det = det * pv
        inv = field.inv(pv)
        for r in range(c + 1, n):
            if m[r][c]:
                fac = m[r][c] * inv
                m[r] = [a - fac * b for a, b in zip(m[r], m[c])]
                if p:
                    m[r] = [a % p for a in m[r]]
    return field(det) if p else det


@dataclass(frozen=True)
class JetAutomorphism:
    """A coordinate change ``x_i -> images[i]`` (and optionally a unit) on N-jets.

    Applying it to ``f`` yields ``jet_N(unit * f(images))``.
    """

    images: tuple[Polynomial, ...]
    bound: int
    unit: Polynomial | None = None

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if not isinstance(self.bound, int) or self.bound < 1:
            raise InputError("jet bound must be a positive integer")
        if not imgs:
            raise InputError("an automorphism needs at least one image")
        n = len(imgs)
        fld = imgs[0].field
        for g in imgs:
            if g.field != fld or g.nvars != n:
                raise FieldMismatch("images must share field and have one variable per image")
            if g.constant_term():
                raise NonInvertibleLinearPart("images must have zero constant term")
        if _det(self.linear_matrix(), fld) == 0:
            raise NonInvertibleLinearPart("linear part of the coordinate change is singular")
        if self.unit is not None:
            if self.unit.field != fld or self.unit.nvars != n:
                raise FieldMismatch("unit must live in the same ring")
            if not self.unit.constant_term():
                raise NonInvertibleLinearPart("unit must have an invertible constant term")

    @property
    def field(self) -> FieldSpec:
        return self.images[0].field

    @property
    def nvars(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, field: FieldSpec, n: int, N: int) -> "JetAutomorphism":
        return cls(tuple(Polynomial.variable(field, n, i) for i in range(n)), N)

    @classmethod
    def linear(cls, field: FieldSpec, matrix: Sequence[Sequence], N: int) -> "JetAutomorphism":
        """``x_i -> sum_j matrix[i][j] x_j``."""
        n = len(matrix)
        imgs = []
        for row in matrix:
            imgs.append(Polynomial(field, n, {tuple(int(i == j) for i in range(n)): c for j, c in enumerate(row)}))
        return cls(tuple(imgs), N)

    def linear_matrix(self) -> list[list]:
        n = len(self.images)
        fld = self.images[0].field
        return [[g.coefficient([int(i == j) for i in range(n)]) for j in range(n)] for g in self.images]

    def is_identity(self) -> bool:
        n = self.nvars
        return self.unit is None and all(
            g == Polynomial.variable(self.field, n, i) for i, g in enumerate(self.images)
        )

    def __call__(self, f: Polynomial) -> Polynomial:
        return substitute_jet(f, self)

    def then(self, other: "JetAutomorphism") -> "JetAutomorphism":
        """The change that first applies ``self`` and then ``other``."""
        return compose(other, self)


def substitute_jet(f: Polynomial, phi: JetAutomorphism) -> Polynomial:
    if f.field != phi.field:
        raise FieldMismatch("polynomial and coordinate change over different fields")
    if f.nvars != phi.nvars:
        raise FieldMismatch(f"coordinate change on {phi.nvars} variables applied to {f.nvars}")
    out = compose_polys(f, phi.images, phi.bound)
    if phi.unit is not None:
        out = mul_truncated(out, phi.unit, phi.bound)
    return out


def compose(psi: JetAutomorphism, phi: JetAutomorphism) -> JetAutomorphism:
    """``psi o phi``: substituting by it equals substituting by ``phi`` then by ``psi``."""
    N = min(phi.bound, psi.bound)
    imgs = tuple(compose_polys(g, psi.images, N) for g in phi.images)
    unit = None
    if phi.unit is not None:
        unit = compose_polys(phi.unit, psi.images, N)
    if psi.unit is not None:
        unit = psi.unit.truncate(N) if unit is None else mul_truncated(unit, psi.unit, N)
    return JetAutomorphism(imgs, N, unit)


def random_automorphism(
    n: int,
    field: FieldSpec,
    N: int,
    seed: int,
    contact: bool = False,
    extra_terms: int = 2,
) -> JetAutomorphism:
    """Seeded random jet automorphism (plus unit when ``contact``).

    The linear part is drawn by rejection sampling until invertible; each
    image and the unit receive up to ``extra_terms`` random monomials of
    degree between 2 (resp. 1) and ``N``.
    """
    rng = random.Random(seed)
    while True:
        mat = [[field.random_element(rng, height=2) for _ in range(n)] for _ in range(n)]
        if _det(mat, field):
            break

    def rand_exps(dmin: int) -> tuple[int, ...] | None:
        if N < dmin:
            return None
        d = rng.randint(dmin, N)
        cuts = sorted(rng.randint(0, d) for _ in range(n - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [d])]
        return tuple(parts)

    imgs = []
    for i in range(n):
        terms = {tuple(int(k == j) for k in range(n)): mat[i][j] for j in range(n)}
        for _ in range(rng.randint(0, extra_terms)):
            ex = rand_exps(2)
            if ex is not None:
                terms[ex] = field.random_element(rng, nonzero=True)
        imgs.append(Polynomial(field, n, terms).truncate(N))
    unit = None
    if contact:
        terms = {(0,) * n: field.random_element(rng, nonzero=True)}
        for _ in range(rng.randint(0, extra_terms)):
            ex = rand_exps(1)
            if ex is not None:
                terms[ex] = field.random_element(rng, nonzero=True)
        unit = Polynomial(field, n, terms).truncate(N)
    return JetAutomorphism(tuple(imgs), N, unit)


# ---------------------------------------------------------------- parsing


def _tokenize(text: str, names: Sequence[str], single: bool) -> list[tuple[str, object, int]]:
    toks = []
    i = 0
    n = len(text)
    index = {name: j for j, name in enumerate(names)}
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("num", int(text[i:j]), i))
            i = j
        elif ch.isalpha() or ch == "_":
            if single:
                if ch not in index:
                    raise UnknownVariable(f"unknown variable {ch!r} at position {i}")
                toks.append(("var", index[ch], i))
                i += 1
            else:
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                if word not in index:
                    raise UnknownVariable(f"unknown variable {word!r} at position {i}")
                toks.append(("var", index[word], i))
                i = j
        elif ch in "+-*/^":
            toks.append((ch, ch, i))
            i += 1
        else:
            raise PolySyntaxError(f"unexpected character {ch!r}", i, text)
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, text: str, field: FieldSpec, names: Sequence[str]):
        self.text = text
        self.field = field
        self.n = len(names)
        self.single = all(len(s) == 1 and s.isalpha() for s in names)
        self.toks = _tokenize(text, names, self.single)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def fail(self, msg: str):
        raise PolySyntaxError(msg, self.peek()[2], self.text)

    def parse(self) -> dict:
        terms: dict = {}
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        self.term(terms, sign)
        while self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            self.term(terms, sign)
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return terms

    def coeff(self):
        num = self.take()[1]
        if self.peek()[0] == "/":
            if self.field.characteristic:
                self.fail("'/' in a coefficient is only allowed in characteristic 0")
            self.take()
            if self.peek()[0] != "num":
                self.fail("expected a denominator")
            den = self.take()[1]
            if den == 0:
                raise DivisionByZeroInCoefficient(f"zero denominator at position {self.toks[self.pos - 1][2]}")
            return self.field(Fraction(num, den))
        return self.field(num)

    def term(self, terms: dict, sign: int):
        kind = self.peek()[0]
        exps = [0] * self.n
        if kind == "num":
            c = self.coeff()
            if self.peek()[0] == "*":
                self.take()
                if self.peek()[0] != "var":
                    self.fail("expected a variable after '*'")
                self.monoms(exps)
            elif self.peek()[0] == "var":
                self.monoms(exps)
        elif kind == "var":
            c = self.field(1)
            self.monoms(exps)
        else:
            self.fail("expected a term")
        key = pack(exps)
        terms[key] = terms.get(key, 0) + (c if sign > 0 else -c)

    def monoms(self, exps: list):
        self.factor(exps)
        while True:
            kind = self.peek()[0]
            if kind == "*" and self.toks[self.pos + 1][0] == "var":
                self.take()
                self.factor(exps)
            elif kind == "var" and self.single:
                self.factor(exps)
            elif kind == "*":
                self.take()
                self.fail("expected a variable after '*'")
            else:
                return

    def factor(self, exps: list):
        _, idx, _ = self.take()
        e = 1
        if self.peek()[0] == "^":
            self.take()
            if self.peek()[0] != "num":
                self.fail("expected an exponent after '^'")
            e = self.take()[1]
        elif self.peek()[0] == "num" and self.single:
            e = self.take()[1]
        exps[idx] += e


def parse_poly(text: str, field: FieldSpec, var_names: Sequence[str] | None = None, nvars: int | None = None) -> Polynomial:
    """Parse ``text`` (see the README for the grammar) into a :class:`Polynomial`."""
    if var_names is None:
        var_names = default_var_names(nvars or 1)
    names = list(var_names)
    if not names or len(set(names)) != len(names):
        raise InputError("variable names must be nonempty and distinct")
    for s in names:
        if not s or not (s[0].isalpha() or s[0] == "_") or not all(ch.isalnum() or ch == "_" for ch in s):
            raise InputError(f"invalid variable name {s!r}")
    terms = _Parser(text, field, names).parse()
    return Polynomial._raw(field, len(names), _normalize(terms, field.characteristic))
