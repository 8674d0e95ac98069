"""Acceptance criteria 1-15.

Each criterion is a check function returning ``(ok, detail)``.  The pytest
wrapper prints ``CRITERION n: PASS|FAIL detail`` and asserts; the lines are
also collected and repeated in the terminal summary.  Running this file as
a script prints the same lines.
"""

from __future__ import annotations

import itertools
import random
import time

import pytest

from helpers import P, disguise, random_poly
from singclass.classify import classify_contact, classify_right, classify_univariate, table_rows
from singclass.deform import semicontinuity_scan, tjurina_basis_unfolding
from singclass.determinacy import contact_determinacy_bound, determinacy_ideal, right_determinacy_bound
from singclass.invariants import adaptive_sb, milnor_number, tjurina_ideal, tjurina_number
from singclass.linalg import jet_quotient_dim_oracle
from singclass.oracle import enumerate_jets, jet_mu, jet_tau, orbit_decomposition, univariate_determinacy_check
from singclass.ring import FieldSpec, JetAutomorphism, Polynomial, mul_truncated, random_automorphism, substitute_jet
from singclass.splitting import split
from singclass.stdbasis import contains_m_power, highcorner, monomials_of_degree, standard_basis

F_EX = "y^8+x^8*y^4+x^23"


# ---------------------------------------------------------------- golden values


def check_1():
    f = P("y^2+x^3*y", 2)
    tau = tjurina_number(f)
    SB = adaptive_sb(tjurina_ideal(f), 64)
    lead = sorted(m.format(["x", "y"]) for m in SB.staircase)
    ok = tau.finite and int(tau) == 5 and lead == sorted(["y^2", "x^2*y", "x^3"])
    return ok, f"tau={tau.value} leading ideal={lead}"


def check_2():
    f = P("y^2+x^3*y", 2)
    N = 8
    J = determinacy_ideal(f, N, contact=True)
    m5, m4 = contains_m_power(J, 5, N), contains_m_power(J, 4, N)
    return m5 and not m4, f"m^5 inside={m5} m^4 inside={m4}"


def check_3():
    got = {}
    for p in (3, 5, 7):
        f = P(f"x^{p}+y^{p - 1}", p)
        tau, mu = tjurina_number(f), milnor_number(f)
        got[p] = (tau.value, mu.value)
        if not (tau.finite and int(tau) == p * (p - 2)):
            return False, f"p={p}: tau={tau.value}"
        if mu.finite or mu.value.bound != 64:
            return False, f"p={p}: mu={mu.value}"
    return True, "tau=3,15,35; mu NotFiniteUpTo(64)"


def check_4():
    vals = {}
    for p in (3, 5, 7):
        # (1 + x)(x^p + y^(p-1)) expanded
        g = P(f"x^{p}+y^{p - 1}+x^{p + 1}+x*y^{p - 1}", p)
        mu = milnor_number(g)
        vals[p] = mu.value.value if mu.finite else None
        if vals[p] != p * (p - 2):
            return False, f"mu values {vals}"
    return True, f"mu values {vals}"


def check_5():
    out = []
    ok = True
    expect_contact = {3: ("x^22*y^2", 40), 2: ("x^21*y^7", 48)}
    for p, (mono, bound) in expect_contact.items():
        f = P(F_EX, p)
        b = contact_determinacy_bound(f)
        hc = b.highcorner.format(["x", "y"])
        ok &= hc == mono and b.example_reading == bound
        out.append(f"F{p} contact hc={hc} bound={b.example_reading}")
    for p in (3, 0):
        f = P(F_EX, p)
        b = right_determinacy_bound(f)
        hc = b.highcorner.format(["x", "y"])
        want = 56 if p == 3 else 31
        got = b.example_reading if p == 3 else b.char0
        ok &= hc == "x^29*y^2" and got == want
        out.append(f"{'Q' if p == 0 else 'F3'} right hc={hc} bound={got}")
    return ok, "; ".join(out)


def check_6():
    cases = [(1, 4), (2, 4), (2, 5), (3, 3)]
    done = 0
    for n, N in cases:
        names = ["x", "y", "z"][:n]
        text = "+".join(f"{v}^{N}" for v in names)
        for p in (0, 2, 3, 5, 7):
            if p and N % p == 0:
                continue
            mu = milnor_number(P(text, p, ",".join(names)))
            if not mu.finite or int(mu) != (N - 1) ** n:
                return False, f"n={n} N={N} p={p}: mu={mu.value}"
            done += 1
    return True, f"{done} cases"


# ---------------------------------------------------------------- properties


def _exact_automorphism(n, fld, seed, contact):
    """A random automorphism whose images (and unit) have degree at most 3."""
    return random_automorphism(n, fld, 3, seed, contact=contact)


def _apply_exact(f: Polynomial, phi: JetAutomorphism) -> Polynomial:
    big = 3 * f.degree() + 4
    return substitute_jet(f, JetAutomorphism(phi.images, big, phi.unit))


def check_7():
    rng = random.Random(7)
    counts = {"mu": 0, "tau": 0}
    for p in (0, 2, 3, 5):
        fld = FieldSpec(p)
        got = {"mu": 0, "tau": 0}
        tries = 0
        while min(got.values()) < 25 and tries < 2000:
            tries += 1
            n = rng.randint(1, 3)
            f = random_poly(fld, n, rng, 2, 5, rng.randint(2, 5))
            for kind, contact in (("mu", False), ("tau", True)):
                if got[kind] >= 25:
                    continue
                inv = milnor_number if kind == "mu" else tjurina_number
                a = inv(f, 40)
                if not a.finite:
                    continue
                g = _apply_exact(f, _exact_automorphism(n, fld, rng.randrange(10**6), contact))
                b = inv(g, 40)
                if not b.finite or int(b) != int(a):
                    return False, f"{kind} changed for {f} over p={p}: {a.value} vs {b.value}"
                got[kind] += 1
        for k in counts:
            counts[k] += got[k]
    ok = min(counts.values()) >= 100
    return ok, f"mu cases={counts['mu']} tau cases={counts['tau']}"


def check_8():
    rng = random.Random(8)
    fld = FieldSpec(0)
    checked_unit = 0
    for i in range(50):
        n = rng.randint(1, 3)
        f = random_poly(fld, n, rng, 2, 6, rng.randint(2, 5))
        mu, tau = milnor_number(f, 40), tjurina_number(f, 40)
        if mu.finite != tau.finite:
            return False, f"finiteness differs for {f}"
        u = random_automorphism(n, fld, 2, rng.randrange(10**6), contact=True).unit
        uf = mul_truncated(u, f, f.degree() + 3)
        mu2 = milnor_number(uf, 40)
        if mu.finite:
            checked_unit += 1
            if not mu2.finite or int(mu2) != int(mu):
                return False, f"mu(u f) != mu(f) for {f}"
    return True, f"50 germs, {checked_unit} with finite mu"


def _split_bound(f):
    try:
        return right_determinacy_bound(f, 40).best + 1
    except Exception:
        return contact_determinacy_bound(f, 40).general + 1


def _residual_invariants(res):
    r = res.residual_in_corank_vars()
    if r is None:
        return 1, 1
    if r.is_zero():
        return None, None
    mu, tau = milnor_number(r, 40), tjurina_number(r, 40)
    return (int(mu) if mu.finite else None), (int(tau) if tau.finite else None)


def check_9():
    rng = random.Random(9)
    fields = (0, 3, 5, 2)
    total = 0
    for p in fields:
        fld = FieldSpec(p)
        done = 0
        while done < 25:
            n = rng.randint(2, 3)
            base = random_poly(fld, n, rng, 3, 5, 3)
            rank = rng.randint(1, n)
            X = [Polynomial.variable(fld, n, i) for i in range(n)]
            quad = Polynomial.zero(fld, n)
            if p == 2:
                for i in range(0, rank - 1, 2):
                    quad = quad + X[i] * X[i + 1]
            else:
                for i in range(rank):
                    quad = quad + X[i] ** 2
            f0 = quad + base
            tau0 = tjurina_number(f0, 40)
            if not tau0.finite:
                continue
            N = _split_bound(f0)
            f = _apply_exact(f0, _exact_automorphism(n, fld, rng.randrange(10**6), False))
            res = split(f, N)
            if not res.verify():
                return False, f"reconstruction failed for {f} over p={p}"
            mu, tau = milnor_number(f, 40), tjurina_number(f, 40)
            rmu, rtau = _residual_invariants(res)
            if tau.finite and rtau != int(tau):
                return False, f"tau(f)={tau.value} vs residual {rtau} for {f} p={p}"
            if mu.finite and rmu != int(mu):
                return False, f"mu(f)={mu.value} vs residual {rmu} for {f} p={p}"
            g = _apply_exact(f0, _exact_automorphism(n, fld, rng.randrange(10**6), False))
            res2 = split(g, N)
            mu2, tau2 = _residual_invariants(res2)
            if tau2 != rtau or (mu.finite and mu2 != rmu) or res2.corank != res.corank:
                return False, f"residual invariants differ across pre-compositions for {f0} p={p}"
            done += 1
        total += done
    return True, f"{total} germs, chars {fields}"


ROUND_TRIP_CASES = [
    ("classical", 0, 2, True),
    ("classical", 0, 3, True),
    ("odd", 3, 2, True),
    ("odd", 5, 2, True),
    ("odd", 7, 2, True),
    ("char2", 2, 2, True),
    ("char2", 2, 3, True),
    ("right", 3, 2, False),
    ("right", 5, 2, False),
    ("right", 7, 2, False),
    ("right2", 2, 2, False),
    ("right2", 2, 4, False),
]


def check_10(disguises: int = 50):
    misses = []
    rows_total = 0
    for table, p, n, contact in ROUND_TRIP_CASES:
        rows = table_rows(table, p, n)
        rows_total += len(rows)
        fn = classify_contact if contact else classify_right
        for lab, f in rows:
            for s in range(disguises):
                got = fn(disguise(f, s, contact))
                if got != lab:
                    misses.append(f"{table}/p={p}/n={n} {lab.full_name} seed {s} -> {got.full_name}")
    detail = f"{rows_total} rows x {disguises} disguises, {len(misses)} misses"
    if misses:
        detail += ": " + "; ".join(misses[:5])
    return not misses, detail


def check_11():
    a = classify_contact(P("y^2+x^3*y", 2))
    b = classify_contact(P("y^2+x^3*y+x^5", 2))
    return a != b and a.simple, f"{a.full_name} vs {b.full_name}"


SCAN_GERMS = ["x^2+y^2", "x^2+y^3", "x^2+y^4", "x^2+y^5", "x^2*y+y^3", "x^3+y^4"]


def check_12():
    bad = []
    for p in (0, 5):
        for text in SCAN_GERMS:
            U = tjurina_basis_unfolding(P(text, p))
            rep = semicontinuity_scan(U, samples=100, seed=12, with_labels=False)
            if rep.violations:
                bad.append(f"{text} p={p}: {rep.violations[:2]}")
    return not bad, f"{2 * len(SCAN_GERMS)} unfoldings x 100 samples, violations: {bad or 'none'}"


# ---------------------------------------------------------------- oracle


def _random_ideal(rng, fld):
    n = rng.randint(1, 3)
    gens = []
    for _ in range(rng.randint(n, n + 2)):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            d = rng.randint(1, 5)
            terms[rng.choice(monomials_of_degree(n, d))] = fld.random_element(rng, nonzero=True)
        gens.append(Polynomial(fld, n, terms))
    return gens


def check_13():
    rng = random.Random(13)
    finite = 0
    for i in range(200):
        fld = FieldSpec(0 if i % 2 == 0 else rng.choice([2, 3, 5, 7]))
        gens = _random_ideal(rng, fld)
        N = 10
        dim = standard_basis(gens, N).dimension()
        if dim.finite:
            hc = highcorner(standard_basis(gens, N))
            top = max(N, (hc.degree if hc else 0) + 2)
            want = jet_quotient_dim_oracle(gens, top)
            finite += 1
        else:
            want = jet_quotient_dim_oracle(gens, N)
            if dim.lower_bound > want:
                return False, f"lower bound {dim.lower_bound} above oracle {want}"
            continue
        if dim.value != want:
            return False, f"dim {dim.value} != oracle {want} for {[str(g) for g in gens]}"
    return finite >= 100, f"200 ideals, {finite} zero-dimensional compared exactly"


def _univariate_jets(p: int, q: int):
    """All jets with first exponent of minimal valuation at q (exponents below q divisible by p)."""
    fld = FieldSpec(p)
    below = [j for j in range(2, q) if j % p == 0]
    for lower in itertools.product(range(p), repeat=len(below)):
        for cq in range(1, p):
            terms = {(j,): c for j, c in zip(below, lower) if c}
            terms[(q,)] = cq
            yield Polynomial(fld, 1, terms)


EXTENSIONS = (1, 2, 3, 4)  # degrees r of F_{p^r} tried for coordinate changes, while p^r <= 81


def _determined(f, k, level):
    """First extension degree over which every competing jet is equivalent to f, else None."""
    p = f.field.characteristic
    return next((r for r in EXTENSIONS if p**r <= 81 and univariate_determinacy_check(f, k, level, r)), None)


def check_14():
    counts = {}
    for p in (2, 3):
        fld = FieldSpec(p)
        for mu in range(1, 6):
            q = mu + 1
            if q % p == 0:
                counts[(p, mu)] = "none"
                continue
            n = 0
            for head in _univariate_jets(p, q):
                d = classify_univariate(head).determinacy
                free = list(range(q + 1, d + 1))
                for tail in itertools.product(range(p), repeat=len(free)):
                    f = head + Polynomial(fld, 1, {(j,): c for j, c in zip(free, tail) if c})
                    rep = classify_univariate(f)
                    if rep.determinacy != d or int(rep.mu) != mu:
                        return False, f"d or mu unstable for {f}"
                    if _determined(f, d, d + 1) is None:
                        return False, f"{f} over F{p}: not {d}-determined at level {d + 1}"
                    if d - 1 >= f.order() and univariate_determinacy_check(f, d - 1, d, 2):
                        return False, f"{f} over F{p} is already {d - 1}-determined"
                    n += 1
            counts[(p, mu)] = n
    flags = []
    for mu in (1, 2, 3):
        q = mu + 1
        if q % 3 == 0:
            flags.append(f"mu={mu}: no germ in char 3")
            continue
        rep = classify_univariate(P(f"x^{q}", 3, "x"))
        if rep.simple != (mu < 3) or rep.modality != mu // 3:
            return False, f"modality boundary wrong at mu={mu}"
        flags.append(f"mu={mu}: simple={rep.simple}")
    shown = ", ".join(f"F{p} mu={m}: {c}" for (p, m), c in counts.items())
    return True, f"jets checked [{shown}]; {', '.join(flags)}"


def check_15():
    notes = []
    for p, n, k in ((2, 2, 3), (3, 1, 4)):
        J = enumerate_jets(p, n, k)
        for action in ("right", "contact"):
            T = orbit_decomposition(J, action=action)
            for v in J:
                o = T.orbits[T.orbit_of[v]]
                f = J.polynomial(v)
                if jet_tau(f, k) != o.tau or (action == "right" and jet_mu(f, k) != o.mu):
                    return False, f"invariant varies on orbit of {J.format(o.rep)} ({action}, p={p})"
            notes.append(f"({p},{n},{k}) {action}: {len(T.orbits)} orbits")
    T = orbit_decomposition(enumerate_jets(2, 1, 3), action="right")
    sep = not T.same_orbit(P("x^2", 2, "x"), P("x^2+x^3", 2, "x"))
    notes.append(f"x^2 vs x^2+x^3 separated={sep}")
    return sep, "; ".join(notes)


CHECKS = {i: globals()[f"check_{i}"] for i in range(1, 16)}


def _report(i: int) -> tuple[bool, str]:
    t = time.time()
    try:
        ok, detail = CHECKS[i]()
    except Exception as exc:  # an exception is a failure, reported on the line
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return ok, f"CRITERION {i}: {'PASS' if ok else 'FAIL'} ({time.time() - t:.1f}s) {detail}"


@pytest.mark.parametrize("criterion", list(CHECKS))
def test_criterion(criterion):
    from conftest import ACCEPTANCE_LINES

    ok, line = _report(criterion)
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


if __name__ == "__main__":
    for i in CHECKS:
        print(_report(i)[1], flush=True)
