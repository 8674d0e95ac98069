"""Brute-force ground truth over tiny prime fields.

Jets are coefficient vectors over the monomials of degree 2..k, listed from
the largest monomial to the smallest in the local ordering.  The canonical
orbit representative is the lexicographically least vector, i.e. the jet
whose first nonzero coefficient sits as late as possible and is smallest.

Orbits are computed as closures under a generating set of the truncated
group (elementary substitutions and, for contact, elementary units); the
full groups are enumerated separately so the tests can check that both give
the same orbits.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import InputError, TooLarge
from .linalg import jet_quotient_dim_oracle
from .ring import FieldSpec, JetAutomorphism, Polynomial, _det, default_var_names, gradient, substitute_jet
from .stdbasis import monomials_of_degree

JET_CAP = 2**18
GROUP_CAP = 200_000
BUDGET = 10**9


def _monomials(n: int, dmin: int, dmax: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(dmin, dmax + 1):
        out.extend(monomials_of_degree(n, d))
    return out


def _names(n: int) -> list[str]:
    return ["x", "y", "z"][:n] if n <= 3 else default_var_names(n)


@dataclass(frozen=True)
class JetSpace:
    p: int
    nvars: int
    k: int
    guard: bool = dc_field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.k < 2:
            raise InputError("jet spaces start at degree 2; need k >= 2")
        if self.guard and self.size > JET_CAP:
            raise TooLarge(f"{self.size} jets exceed the enumeration cap {JET_CAP}")

    @cached_property
    def field(self) -> FieldSpec:
        return FieldSpec(self.p)

    @cached_property
    def monomials(self) -> list[tuple[int, ...]]:
        return _monomials(self.nvars, 2, self.k)

    @property
    def size(self) -> int:
        return self.p ** len(_monomials(self.nvars, 2, self.k))

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(self.p), repeat=len(self.monomials))

    def __len__(self) -> int:
        return self.size

    def polynomial(self, vec: Sequence[int]) -> Polynomial:
        return Polynomial(self.field, self.nvars, {m: c for m, c in zip(self.monomials, vec) if c})

    def vector(self, f: Polynomial) -> tuple[int, ...]:
        return tuple(int(f.coefficient(m)) for m in self.monomials)

    def format(self, vec: Sequence[int]) -> str:
        return self.polynomial(vec).format(_names(self.nvars))


def enumerate_jets(p: int, nvars: int, k: int) -> JetSpace:
    return JetSpace(p, nvars, k)


# ---------------------------------------------------------------- groups


def group_size(p: int, nvars: int, k: int, contact: bool) -> int:
    gl = 1
    for i in range(nvars):
        gl *= p**nvars - p**i
    size = gl * p ** (nvars * len(_monomials(nvars, 2, k)))
    if contact:
        size *= (p - 1) * p ** len(_monomials(nvars, 1, k - 2))
    return size


def enumerate_group(p: int, nvars: int, k: int, contact: bool = False) -> list[JetAutomorphism]:
    """Every truncated automorphism of level k (times every truncated unit for contact)."""
    size = group_size(p, nvars, k, contact)
    if size > GROUP_CAP:
        raise TooLarge(f"group of size {size} exceeds the cap {GROUP_CAP}")
    fld = FieldSpec(p)
    n = nvars
    lin = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    higher = _monomials(n, 2, k)
    mats = [m for m in itertools.product(range(p), repeat=n * n) if _det([list(m[i * n:(i + 1) * n]) for i in range(n)], fld)]
    unit_monos = [(0,) * n] + _monomials(n, 1, k - 2)
    units = [None]
    if contact:
        units = [
            Polynomial(fld, n, dict(zip(unit_monos, cs)))
            for cs in itertools.product(range(p), repeat=len(unit_monos))
            if cs[0]
        ]
    out = []
    for m in mats:
        for hs in itertools.product(range(p), repeat=n * len(higher)):
            imgs = []
            for i in range(n):
                terms = {lin[j]: m[i * n + j] for j in range(n)}
                for t, c in zip(higher, hs[i * len(higher):(i + 1) * len(higher)]):
                    if c:
                        terms[t] = c
                imgs.append(Polynomial(fld, n, terms))
            for u in units:
                out.append(JetAutomorphism(tuple(imgs), k, u))
    return out


def element_key(phi: JetAutomorphism) -> tuple:
    """Identity of a group element at its level (units only matter modulo m^(k-1))."""
    k = phi.bound
    imgs = tuple(tuple(sorted(g.truncate(k).items())) for g in phi.images)
    u = None if phi.unit is None else tuple(sorted(phi.unit.truncate(k - 2).items()))
    return imgs, u


def generators(p: int, nvars: int, k: int, contact: bool = False) -> list[JetAutomorphism]:
    """A generating set of the level-k group: elementary linear maps, x_i -> x_i + c*m, units c and 1 + c*m."""
    fld = FieldSpec(p)
    n = nvars
    X = [Polynomial.variable(fld, n, i) for i in range(n)]
    out = []
    prim = next(g for g in range(1, p) if all(pow(g, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1))) if p > 2 else 1
    for i in range(n):
        if prim != 1:
            imgs = list(X)
            imgs[i] = X[i].scale(prim)
            out.append(JetAutomorphism(tuple(imgs), k))
        for j in range(n):
            if i != j:
                imgs = list(X)
                imgs[i] = X[i] + X[j]
                out.append(JetAutomorphism(tuple(imgs), k))
    for i in range(n):
        for m in _monomials(n, 2, k):
            for c in range(1, p):
                imgs = list(X)
                imgs[i] = X[i] + Polynomial.monomial(fld, m, c)
                out.append(JetAutomorphism(tuple(imgs), k))
    if contact:
        one = Polynomial.constant(fld, n, 1)
        if prim != 1:
            out.append(JetAutomorphism(tuple(X), k, Polynomial.constant(fld, n, prim)))
        for m in _monomials(n, 1, k - 2):
            for c in range(1, p):
                out.append(JetAutomorphism(tuple(X), k, one + Polynomial.monomial(fld, m, c)))
    return out


def _prime_factors(m: int) -> list[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# ---------------------------------------------------------------- orbits


def jet_tau(f: Polynomial, k: int) -> int:
    """dim K[x] / (<f> + j(f) + m^k): the Tjurina number seen by k-jets (a contact orbit invariant)."""
    return _jet_dim([f] + gradient(f), f, k)


def jet_mu(f: Polynomial, k: int) -> int:
    """dim K[x] / (j(f) + m^k) (a right orbit invariant of k-jets)."""
    return _jet_dim(gradient(f), f, k)


def _jet_dim(gens: list[Polynomial], f: Polynomial, k: int) -> int:
    gens = [g for g in gens if g]
    if not gens:
        return len(_monomials(f.nvars, 0, k - 1))
    return jet_quotient_dim_oracle(gens, k - 1)


@dataclass
class Orbit:
    rep: tuple[int, ...]
    size: int
    tau: int
    mu: int | None


@dataclass
class OrbitTable:
    space: JetSpace
    action: str
    orbit_of: dict  # jet vector -> orbit id
    orbits: list[Orbit]

    def to_json(self) -> dict:
        rows = []
        for o in self.orbits:
            row = {"rep": self.space.format(o.rep), "size": o.size, "tau": o.tau}
            if o.mu is not None:
                row["mu"] = o.mu
            rows.append(row)
        return {"p": self.space.p, "n": self.space.nvars, "k": self.space.k, "action": self.action, "orbits": rows}

    def same_orbit(self, f: Polynomial, g: Polynomial) -> bool:
        return self.orbit_of[self.space.vector(f)] == self.orbit_of[self.space.vector(g)]


def _act(J: JetSpace, phi: JetAutomorphism, vec: tuple) -> tuple:
    return J.vector(substitute_jet(J.polynomial(vec), phi))


def orbit_decomposition(J: JetSpace, G: Sequence[JetAutomorphism] | None = None, action: str = "right") -> OrbitTable:
    """Exact orbits of the level-k group on J.

    With ``G`` given (a whole group, e.g. from :func:`enumerate_group`) each
    orbit is the image set of its first jet; otherwise orbits are closures
    under :func:`generators`.
    """
    if action not in ("right", "contact"):
        raise InputError("action must be 'right' or 'contact'")
    contact = action == "contact"
    gens = list(G) if G is not None else generators(J.p, J.nvars, J.k, contact)
    if J.size * len(gens) > BUDGET:
        raise TooLarge(f"{J.size} jets times {len(gens)} group elements exceed the budget {BUDGET}")
    orbit_of: dict = {}
    orbits: list[Orbit] = []
    for start in J:
        if start in orbit_of:
            continue
        oid = len(orbits)
        if G is not None:
            members = {_act(J, g, start) for g in gens}
            members.add(start)
        else:
            members = {start}
            frontier = [start]
            while frontier:
                nxt = []
                for v in frontier:
                    for g in gens:
                        w = _act(J, g, v)
                        if w not in members:
                            members.add(w)
                            nxt.append(w)
                frontier = nxt
        for v in members:
            if v in orbit_of:
                raise AssertionError("orbits overlap: the supplied set is not a group")
            orbit_of[v] = oid
        rep = min(members)
        f = J.polynomial(rep)
        orbits.append(Orbit(rep, len(members), jet_tau(f, J.k), None if contact else jet_mu(f, J.k)))
    return OrbitTable(J, action, orbit_of, orbits)


def orbit_fixture(p: int, nvars: int, k: int, action: str = "contact") -> str:
    table = orbit_decomposition(enumerate_jets(p, nvars, k), action=action)
    return json.dumps(table.to_json(), sort_keys=True)


# ---------------------------------------------------------------- determinacy


def bruteforce_determinacy_check(f: Polynomial, k: int, p: int, nvars: int, jet_level: int) -> bool:
    """Whether every jet at ``jet_level`` sharing the k-jet of ``f`` is right equivalent to ``f`` there."""
    if jet_level < k + 1:
        raise InputError("jet_level must be at least k + 1")
    if f.field.characteristic != p or f.nvars != nvars:
        raise InputError("f does not live in the requested ring")
    L = jet_level
    free = _monomials(nvars, k + 1, L)
    nfree = p ** len(free)
    size = group_size(p, nvars, L, False)
    if size * nfree > BUDGET or size > GROUP_CAP:
        raise TooLarge(f"determinacy check at level {L} is beyond the budget")
    J = JetSpace(p, nvars, L, guard=False)  # only used for vector conversion
    base = f.truncate(L)
    orbit = {J.vector(substitute_jet(base, g)) for g in enumerate_group(p, nvars, L)}
    fixed = f.truncate(k)
    for cs in itertools.product(range(p), repeat=len(free)):
        g = fixed + Polynomial(f.field, nvars, {m: c for m, c in zip(free, cs) if c})
        if J.vector(g) not in orbit:
            return False
    return True


# ---------------------------------------------------------------- univariate checks over F_{p^r}


class GaloisField:
    """F_{p^r} with elements encoded as integers (base-p digits of a polynomial in the generator)."""

    def __init__(self, p: int, r: int = 1):
        if r < 1 or p**r > 4096:
            raise InputError("extension degree must be >= 1 and p^r <= 4096")
        self.p, self.r, self.q = p, r, p**r
        self.modulus = self._irreducible() if r > 1 else None
        q = self.q
        self._add = [[self._add_slow(a, b) for b in range(q)] for a in range(q)]
        self._mul = [[self._mul_slow(a, b) for b in range(q)] for a in range(q)]

    def _digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.r)]

    def _encode(self, ds: Sequence[int]) -> int:
        return sum(d * self.p**i for i, d in enumerate(ds))

    def _add_slow(self, a: int, b: int) -> int:
        return self._encode([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _mul_slow(self, a: int, b: int) -> int:
        p, r = self.p, self.r
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
        if self.modulus is not None:
            for t in range(len(prod) - 1, r - 1, -1):  # reduce by the monic modulus
                c = prod[t]
                if c:
                    for i, m in enumerate(self.modulus[:-1]):
                        prod[t - r + i] = (prod[t - r + i] - c * m) % p
                    prod[t] = 0
        return self._encode(prod[:r])

    def _irreducible(self) -> list[int]:
        p, r = self.p, self.r
        for tail in itertools.product(range(p), repeat=r):
            poly = list(tail) + [1]
            if poly[0] == 0:
                continue
            # no roots is enough for r <= 3; for larger r test every monic factor of degree <= r/2
            if all(_polymod(poly, list(f) + [1], p) for d in range(1, r // 2 + 1) for f in itertools.product(range(p), repeat=d)):
                return poly
        raise AssertionError("no irreducible polynomial found")

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def elements(self) -> range:
        return range(self.q)


def _polymod(a: list[int], b: list[int], p: int) -> bool:
    """Whether b does not divide a over F_p (coefficient lists, lowest degree first, b monic)."""
    a = list(a)
    db = len(b) - 1
    for t in range(len(a) - 1, db - 1, -1):
        c = a[t] % p
        if c:
            for i in range(db + 1):
                a[t - db + i] = (a[t - db + i] - c * b[i]) % p
    return any(x % p for x in a[:db])


def _compose_univariate(fc: list[int], a: list[int], L: int, F: GaloisField) -> list[int]:
    """Coefficients (degrees 0..L) of f(phi) where phi = sum a[j] x^j, a[0] = 0."""
    out = [0] * (L + 1)
    power = [0] * (L + 1)
    power[0] = 1
    for d in range(1, L + 1):
        nxt = [0] * (L + 1)
        for i, c in enumerate(power):
            if c:
                for j in range(1, L + 1 - i):
                    if a[j]:
                        nxt[i + j] = F.add(nxt[i + j], F.mul(c, a[j]))
        power = nxt
        if fc[d]:
            for i in range(L + 1):
                if power[i]:
                    out[i] = F.add(out[i], F.mul(fc[d], power[i]))
    return out


def univariate_right_equivalent(fc: list[int], gc: list[int], L: int, F: GaloisField) -> bool:
    """Whether x -> phi(x) over ``F`` carries the L-jet ``fc`` to ``gc`` (coefficient lists, degrees 0..L).

    The coefficient of x^(m+j-1) in f(phi) only involves a_1..a_j (m the
    order of f), so phi is searched one coefficient at a time.
    """
    m = next((i for i, c in enumerate(fc) if c), None)
    if m is None or m == 0:
        raise InputError("f must be a nonzero jet in the maximal ideal")
    if next((i for i, c in enumerate(gc) if c), None) != m:
        return False
    a = [0] * (L + 1)

    def search(j: int) -> bool:
        t = m + j - 1
        if t > L:
            return True
        for c in F.elements():
            if j == 1 and c == 0:
                continue
            a[j] = c
            if _compose_univariate(fc, a, t, F)[t] == gc[t] and search(j + 1):
                return True
        a[j] = 0
        return False

    return search(1)


def univariate_determinacy_check(f: Polynomial, k: int, jet_level: int, ext_degree: int = 1) -> bool:
    """Whether every jet at ``jet_level`` over F_p sharing the k-jet of ``f`` is right equivalent to it over F_{p^r}.

    Finite fields are not algebraically closed, so an equivalence may need
    roots that only exist in an extension: over F_2 the jets x^2+x^3 and
    x^2+x^3+x^4 only become equivalent over F_4.  The competing jets keep
    their coefficients in F_p, the coordinate changes range over
    F_{p^r} with r = ``ext_degree``.
    """
    if f.nvars != 1:
        raise InputError("univariate check needs one variable")
    p = f.field.characteristic
    if not p:
        raise InputError("univariate check needs a prime field")
    if jet_level < k + 1:
        raise InputError("jet_level must be at least k + 1")
    F = GaloisField(p, ext_degree)
    L = jet_level
    if p ** (L - k) > 10**6:
        raise TooLarge("too many competing jets")
    fc = [int(f.coefficient((i,))) for i in range(L + 1)]
    base = fc[: k + 1] + [0] * (L - k)
    for tail in itertools.product(range(p), repeat=L - k):
        gc = base[: k + 1] + list(tail)
        if not univariate_right_equivalent(fc, gc, L, F):
            return False
    return True
