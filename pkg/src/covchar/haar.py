"""Haar data for finite groups: weights, modular functions, and conjugation moduli.

On a finite group every Haar measure is a multiple of counting measure, so a
measure is one positive scalar weight: u per element of G, v per element of N.
Weil's formula then forces the quotient weight w = u/v (see weil_normalize).
The modular functions and the conjugation homomorphism are identically 1, but
they are exposed as evaluable maps, and sigma_n / haar_modulus compute their
values by the defining integral quotients so the finite case doubles as a
regression test for the continuous model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveWeight, NotAnAutomorphism, NotNormal
from .groups import FiniteGroup, Subgroup


@dataclass(frozen=True)
class HaarData:
    """Weights (u, v, w) for lambda_G, lambda_N and the Weil-normalized lambda_{G/N}."""

    u: float
    v: float
    w: float

    # The finite-case homomorphisms; kept as methods so code written against
    # this interface transfers to models where they are not constant.
    def delta_G(self, x: int) -> float:
        return 1.0

    def delta_N(self, s: int) -> float:
        return 1.0

    def delta_quotient(self, coset: int) -> float:
        return 1.0

    def sigma_N(self, x: int) -> float:
        return 1.0

    def serialize(self) -> dict:
        return {"u": self.u, "v": self.v, "w": self.w}


def weil_normalize(u: float, v: float) -> HaarData:
    """Haar data with the quotient weight fixed by Weil's formula, w = u/v."""
    u = float(u)
    v = float(v)
    if u <= 0 or v <= 0:
        raise NonPositiveWeight(f"weights must be positive, got u={u}, v={v}")
    return HaarData(u=u, v=v, w=u / v)


def counting_weights() -> HaarData:
    """u = v = 1: plain counting measure everywhere; w = 1."""
    return weil_normalize(1.0, 1.0)


def probability_weights(n: Subgroup | int, u: float = 1.0) -> HaarData:
    """v = 1/|N| so lambda_N is a probability measure; then w = u*|N|."""
    size = len(n.members) if isinstance(n, Subgroup) else int(n)
    return weil_normalize(u, 1.0 / size)


def _probe(i: int) -> float:
    # fixed positive test function with no accidental symmetry
    return 1.0 + ((3 * i + 1) % 11) / 11.0


def sigma_n(g: FiniteGroup, n: Subgroup, x: int) -> float:
    """Conjugation modulus of x on N, computed by the defining integral quotient.

    The quotient integrates a fixed positive function against the pushforward
    of lambda_N under s -> x s x^{-1} and divides by its plain integral; on a
    finite group conjugation permutes N, so the value is 1 for every x.
    """
    if not n.is_normal:
        raise NotNormal("sigma_n requires a normal subgroup")
    x = g._check_element(x)
    pushed = sum(_probe(g.table[g.table[x, s], g.inverse[x]]) for s in n.members)
    plain = sum(_probe(s) for s in n.members)
    return pushed / plain


def haar_modulus(g: FiniteGroup, alpha) -> float:
    """Scaling factor by which the automorphism alpha distorts Haar measure.

    ``alpha`` is an element permutation; it is verified to be bijective and
    product-preserving before the defining quotient of sums is evaluated.
    """
    perm = np.asarray(alpha, dtype=np.int64)
    if perm.shape != (g.order,) or not np.array_equal(np.sort(perm), np.arange(g.order)):
        raise NotAnAutomorphism("alpha is not a permutation of the elements")
    lhs = perm[g.table]
    rhs = g.table[np.ix_(perm, perm)]
    if not np.array_equal(lhs, rhs):
        i, j = np.argwhere(lhs != rhs)[0]
        raise NotAnAutomorphism(
            f"alpha does not preserve the product at pair ({i},{j}): "
            f"alpha({i}*{j}) = {lhs[i, j]} but alpha({i})*alpha({j}) = {rhs[i, j]}"
        )
    total = sum(_probe(y) for y in range(g.order))
    composed = sum(_probe(int(perm[y])) for y in range(g.order))
    return total / composed
