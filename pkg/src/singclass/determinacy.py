"""Right and contact determinacy bounds.

Three families of bounds are reported side by side, never collapsed into a
minimum:

* ``general``: from ``m^(k+2) ⊆ J`` the germ is ``(2k - ord + 2)``-determined,
  with ``J = m^2 j(f)`` (right) or ``m<f> + m^2 j(f)`` (contact).  The
  minimal such ``k`` is ``deg(hc) - 1`` where ``hc`` is the highcorner of J.
* ``char0``: ``m^(k+1) ⊆ J`` gives ``k``-determinacy in characteristic 0 or
  when ``p >= k + 2 - ord``; the minimal ``k`` is ``deg(hc)``.
* ``mu_based``: ``2 mu - ord + 2`` (right) resp. ``2 tau - ord + 2`` (contact).

``example_reading`` reproduces the worked numbers of the literature this
package was checked against: ``2 deg(hc) - ord`` for contact and
``2 deg(hc) - ord + 2`` for right determinacy.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotIsolated, OrderTooSmall
from .invariants import (
    InvariantValue,
    adaptive_sb,
    default_cap,
    jacobian_ideal,
    milnor_number,
    tjurina_ideal,
    tjurina_number,
)
from .ring import Monomial, Polynomial
from .stdbasis import StandardBasis, highcorner, max_ideal_power, product_ideal, standard_basis


@dataclass(frozen=True)
class DeterminacyBound:
    equivalence: str  # "right" | "contact"
    order: int
    highcorner: Monomial | None
    k_star: int
    general: int
    example_reading: int
    char0: int | None
    mu_based: int
    invariant: int  # mu (right) or tau (contact)

    @property
    def best(self) -> int:
        """Smallest bound whose hypotheses hold."""
        cands = [self.general, self.mu_based]
        if self.char0 is not None:
            cands.append(self.char0)
        return min(cands)

    def to_json(self, names=None) -> dict:
        return {
            "k_star": self.k_star,
            "general": self.general,
            "example_reading": self.example_reading,
            "char0": self.char0,
            "mu_based": self.mu_based,
            "highcorner": None if self.highcorner is None else self.highcorner.format(names, style="singular"),
        }


def determinacy_ideal(f: Polynomial, N: int, contact: bool) -> list[Polynomial]:
    """Generators of m^2 j(f) (right) or m<f> + m^2 j(f) (contact), truncated at N."""
    m2 = max_ideal_power(f.field, f.nvars, 2)
    gens = product_ideal(m2, jacobian_ideal(f), N)
    if contact:
        gens = product_ideal(max_ideal_power(f.field, f.nvars, 1), [f], N) + gens
    return [g for g in gens if g]


def determinacy_sb(f: Polynomial, contact: bool, inv_sb: StandardBasis) -> StandardBasis:
    """Standard basis of the determinacy ideal at a bound where it is certainly complete.

    If the Milnor/Tjurina ideal contains m^(h+1), the determinacy ideal contains
    m^(h+3), so the bound h + 3 certifies it.
    """
    hc = highcorner(inv_sb)
    h = hc.degree if hc is not None else 0
    N = h + 3
    return standard_basis(determinacy_ideal(f, N, contact), N, reduce_tails=False)


def _bound(f: Polynomial, contact: bool, cap: int | None) -> DeterminacyBound:
    cap = cap or default_cap()
    o = f.order()
    if f.constant_term() or o == float("inf") or o < 2:
        raise OrderTooSmall("determinacy bounds need a germ of order at least 2")
    gens = tjurina_ideal(f) if contact else jacobian_ideal(f)
    inv_sb = adaptive_sb(gens, cap)
    name = "tau" if contact else "mu"
    if inv_sb is None or not inv_sb.complete_flag:
        raise NotIsolated(f"{name} not certified finite up to bound {cap}", cap)
    inv = len(inv_sb.standard_keys)
    SB = determinacy_sb(f, contact, inv_sb)
    hc = highcorner(SB)
    d = hc.degree if hc is not None else 0
    k_star = max(d - 1, 0)
    general = 2 * k_star - o + 2
    example = 2 * d - o + (0 if contact else 2)
    p = f.field.characteristic
    char0 = d if (p == 0 or p >= d + 2 - o) else None
    mu_based = 2 * inv - o + 2
    # every bound is at least the order
    return DeterminacyBound(
        "contact" if contact else "right",
        o,
        hc,
        k_star,
        max(general, o),
        max(example, o),
        None if char0 is None else max(char0, o),
        max(mu_based, o),
        inv,
    )


def right_determinacy_bound(f: Polynomial, cap: int | None = None) -> DeterminacyBound:
    return _bound(f, False, cap)


def contact_determinacy_bound(f: Polynomial, cap: int | None = None) -> DeterminacyBound:
    return _bound(f, True, cap)
