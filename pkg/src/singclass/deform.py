"""Semiuniversal unfoldings built from a monomial basis of the Tjurina algebra."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from gmpy2 import mpq

from .classify import ClassLabel, classify_contact
from .errors import ArityMismatch, NotInMaximalIdeal, NotIsolated
from .invariants import adaptive_sb, default_cap, jacobian_ideal, milnor_number, tjurina_ideal, tjurina_number
from .ring import Monomial, Polynomial


@dataclass(frozen=True)
class Unfolding:
    base: Polynomial
    basis: tuple[Polynomial, ...]

    @property
    def nparams(self) -> int:
        return len(self.basis)

    def monomials(self) -> list[Monomial]:
        return [g.leading_monomial() for g in self.basis]


def tjurina_basis_unfolding(f: Polynomial, cap: int | None = None) -> Unfolding:
    """``F = f + sum t_j g_j`` with ``g_j`` the standard monomials of the Tjurina ideal, 1 first."""
    if f.constant_term():
        raise NotInMaximalIdeal("germ must vanish at the origin")
    cap = cap or default_cap()
    SB = adaptive_sb(tjurina_ideal(f), cap)
    if SB is None or not SB.complete_flag:
        raise NotIsolated(f"Tjurina number not certified finite up to bound {cap}", cap)
    keys = sorted(SB.standard_keys)  # ascending key = descending monomial, so 1 comes first
    basis = tuple(Polynomial._raw(f.field, f.nvars, {k: f.field.one}) for k in keys)
    return Unfolding(f, basis)


def evaluate_unfolding(U: Unfolding, t: Sequence) -> Polynomial:
    if len(t) != U.nparams:
        raise ArityMismatch(f"expected {U.nparams} parameters, got {len(t)}")
    fld = U.base.field
    out = U.base
    for c, g in zip(t, U.basis):
        c = fld(c)
        if c:
            out = out + g.scale(c)
    return out


def _sample_params(U: Unfolding, rng: random.Random) -> list:
    fld = U.base.field
    if fld.characteristic:
        return [rng.randrange(fld.characteristic) for _ in range(U.nparams)]
    out = []
    for _ in range(U.nparams):
        num = rng.randint(-9, 9)
        den = rng.choice([d for d in range(-9, 10) if d])
        out.append(mpq(num, den))
    return out


@dataclass
class ScanReport:
    samples: int
    tau_base: int
    mu_base: int | None
    max_tau_observed: int = 0
    max_mu_observed: int | None = None
    violations: list = dc_field(default_factory=list)
    labels_observed: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "tau_base": self.tau_base,
            "max_tau_observed": self.max_tau_observed,
            "violations": self.violations,
            "labels_observed": self.labels_observed,
            "mu_base": self.mu_base,
            "max_mu_observed": self.max_mu_observed,
        }


def _fiber_invariants(F: Polynomial, cap: int) -> tuple[int | None, int | None]:
    """(tau, mu) of the fiber germ at the origin; 0 when the origin is not a singular point."""
    if F.constant_term() or F.order() == 1:
        return 0, 0
    tau = tjurina_number(F, cap)
    mu = milnor_number(F, cap)
    return (int(tau) if tau.finite else None), (int(mu) if mu.finite else None)


def semicontinuity_scan(
    U: Unfolding, samples: int = 100, seed: int = 0, cap: int | None = None, with_labels: bool = True
) -> ScanReport:
    """Sample parameter values and check that tau (and mu, when finite) never exceeds the base value."""
    cap = cap or default_cap()
    tau0 = int(tjurina_number(U.base, cap))
    mu_val = milnor_number(U.base, cap)
    mu0 = int(mu_val) if mu_val.finite else None
    rep = ScanReport(samples, tau0, mu0)
    labels = set()
    rng = random.Random(seed)
    for i in range(samples):
        t = _sample_params(U, rng)
        F = evaluate_unfolding(U, t)
        tau, mu = _fiber_invariants(F, cap)
        point = [str(c) for c in t]
        if tau is None or tau > tau0:
            rep.violations.append({"sample": i, "params": point, "tau": tau, "kind": "tau"})
        else:
            rep.max_tau_observed = max(rep.max_tau_observed, tau)
        if mu0 is not None:
            if mu is None or mu > mu0:
                rep.violations.append({"sample": i, "params": point, "mu": mu, "kind": "mu"})
            else:
                rep.max_mu_observed = max(rep.max_mu_observed or 0, mu)
        if with_labels:
            labels.add(_label_at_origin(F, cap))
    rep.labels_observed = sorted(lab.full_name for lab in labels)
    return rep


def _label_at_origin(F: Polynomial, cap: int) -> ClassLabel:
    if F.constant_term():
        return ClassLabel("Smooth", reason="origin not on the fiber")
    return classify_contact(F, cap)


def adjacency_scan(U: Unfolding, samples: int = 100, seed: int = 0, cap: int | None = None) -> set[ClassLabel]:
    """Contact labels of the fibers at the origin over sampled parameters."""
    cap = cap or default_cap()
    rng = random.Random(seed)
    out = set()
    for _ in range(samples):
        out.add(_label_at_origin(evaluate_unfolding(U, _sample_params(U, rng)), cap))
    return out
