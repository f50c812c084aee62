"""Characters of finite subgroups, stored as exact exponents of a root of unity.

A character of N is a homomorphism into the circle group; here it is kept as
an integer exponent map s -> k(s) with value zeta_m^{k(s)}, zeta_m = exp(2*pi*i/m).
All characters of one subgroup share the modulus m = exponent of the
abelianization N/[N,N], so characters of the same N compare exactly.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .errors import NotInDomain, NotNormal, TooLarge
from .groups import FiniteGroup, Subgroup, coset_decomposition

CHARACTER_ENUM_LIMIT = 512


class Character:
    """A homomorphism from a subgroup into the m-th roots of unity.

    ``exponents`` is aligned with ``domain.members``; the homomorphism law
    exponents[s*t] == exponents[s] + exponents[t] (mod m) and
    exponents[identity] == 0 are enforced at construction.
    """

    def __init__(self, domain: Subgroup, modulus: int, exponents):
        modulus = int(modulus)
        if modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {modulus}")
        exps = tuple(int(e) % modulus for e in exponents)
        if len(exps) != len(domain.members):
            raise ValueError(
                f"{len(exps)} exponents for a subgroup of size {len(domain.members)}"
            )
        self.domain = domain
        self.modulus = modulus
        self.exponents = exps
        self._by_element = dict(zip(domain.members, exps))
        self._validate()

    def _validate(self) -> None:
        g = self.domain.parent
        members = np.array(self.domain.members, dtype=np.int64)
        exps = np.array(self.exponents, dtype=np.int64)
        if self._by_element[g.identity] != 0:
            raise ValueError("character must send the identity to exponent 0")
        pos = np.full(g.order, -1, dtype=np.int64)
        pos[members] = np.arange(len(members))
        prod_pos = pos[g.table[np.ix_(members, members)]]
        lhs = exps[prod_pos]
        rhs = (exps[:, None] + exps[None, :]) % self.modulus
        if not np.array_equal(lhs, rhs):
            i, j = np.argwhere(lhs != rhs)[0]
            raise ValueError(
                f"exponent map is not a homomorphism at pair "
                f"({members[i]},{members[j]})"
            )

    def exponent(self, s: int) -> int:
        """Exact exponent k with value zeta_m^k; raises NotInDomain off N."""
        if s not in self._by_element:
            raise NotInDomain(f"element {s} is not in the character's domain")
        return self._by_element[s]

    def value(self, s: int) -> complex:
        return np.exp(2j * np.pi * self.exponent(s) / self.modulus)

    def values_on_members(self) -> np.ndarray:
        """Complex values aligned with domain.members."""
        if getattr(self, "_values", None) is None:
            exps = np.array(self.exponents, dtype=np.float64)
            self._values = np.exp(2j * np.pi * exps / self.modulus)
            self._values.setflags(write=False)
        return self._values

    @property
    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def serialize(self) -> dict:
        return {
            "modulus": self.modulus,
            "exponents": {str(m): e for m, e in zip(self.domain.members, self.exponents)},
        }

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Character)
            and self.domain.parent is other.domain.parent
            and self.domain.members == other.domain.members
            and self.modulus == other.modulus
            and self.exponents == other.exponents
        )

    def __hash__(self) -> int:
        return hash((id(self.domain.parent), self.domain.members,
                     self.modulus, self.exponents))

    def __repr__(self) -> str:
        return f"Character(m={self.modulus}, exponents={self.exponents})"


def evaluate(xi: Character, s: int) -> complex:
    """Value of the character at s, exp(2*pi*i*exponent/m)."""
    return xi.value(s)


def _generated_subgroup(g: FiniteGroup, gens) -> list[int]:
    members = {g.identity}
    frontier = [x for x in set(gens)]
    members.update(frontier)
    while frontier:
        new = []
        for a in frontier:
            for b in list(members):
                for c in (int(g.table[a, b]), int(g.table[b, a])):
                    if c not in members:
                        members.add(c)
                        new.append(c)
        frontier = new
    return sorted(members)


def commutator_subgroup(g: FiniteGroup) -> list[int]:
    """[G,G] as a sorted member list."""
    gens = set()
    for a in range(g.order):
        ia = g.inverse[a]
        for b in range(g.order):
            c = g.table[g.table[g.table[ia, g.inverse[b]], a], b]
            gens.add(int(c))
    return _generated_subgroup(g, gens)


def cyclic_decomposition(a: FiniteGroup) -> list[tuple[int, int]]:
    """Write the abelian group a as a direct sum of cyclic subgroups.

    Returns (generator, order) pairs; the first generator has maximal order,
    which equals the exponent of a.  Implemented by extracting a maximal-order
    element and recursing on the quotient, lifting quotient generators so that
    their orders are preserved.
    """
    if not a.is_abelian:
        raise ValueError("cyclic decomposition requires an abelian group")
    if a.order == 1:
        return []
    orders = [a.element_order(x) for x in range(a.order)]
    m1 = max(orders)
    a1 = orders.index(m1)
    if m1 == a.order:
        return [(a1, m1)]
    cyc = [a.power(a1, k) for k in range(m1)]
    log_a1 = {x: k for k, x in enumerate(cyc)}
    decomp = coset_decomposition(a, Subgroup(a, cyc))
    out = [(a1, m1)]
    for q_gen, n_i in cyclic_decomposition(decomp.quotient):
        x = int(decomp.representatives[q_gen])
        t = log_a1[a.power(x, n_i)]
        # maximality of m1 forces n_i | t, so the correction below has order n_i
        assert t % n_i == 0, (t, n_i)
        y = a.mul(x, a.power(a1, (-(t // n_i)) % m1))
        assert a.element_order(y) == n_i
        out.append((y, n_i))
    return out


def _coordinates(a: FiniteGroup, decomp: list[tuple[int, int]]) -> dict[int, tuple[int, ...]]:
    """Map each element to its exponent tuple over the cyclic decomposition."""
    coords = {}
    gens = [g for g, _ in decomp]
    orders = [o for _, o in decomp]
    for tup in product(*(range(o) for o in orders)):
        x = a.identity
        for gen, e in zip(gens, tup):
            x = a.mul(x, a.power(gen, e))
        assert x not in coords, "cyclic decomposition is not a direct sum"
        coords[x] = tup
    assert len(coords) == a.order
    return coords


def enumerate_characters(n: Subgroup) -> list[Character]:
    """All characters of n, trivial first, in a deterministic order.

    Characters factor through the abelianization N/[N,N]; its cyclic
    decomposition turns enumeration into a product of cyclic duals.
    """
    if len(n.members) > CHARACTER_ENUM_LIMIT:
        raise TooLarge(
            f"subgroup of size {len(n.members)} exceeds bound {CHARACTER_ENUM_LIMIT}"
        )
    h, members = n.as_group()
    comm = commutator_subgroup(h)
    ab = coset_decomposition(h, Subgroup(h, comm))
    a = ab.quotient
    decomp = cyclic_decomposition(a)
    if not decomp:
        return [Character(n, 1, [0] * len(members))]
    m = decomp[0][1]  # exponent of the abelianization
    orders = [o for _, o in decomp]
    coords = _coordinates(a, decomp)
    # exponent tuple of each subgroup element's image in the abelianization
    elem_coords = [coords[int(ab.coset_of[h_idx])] for h_idx in range(h.order)]
    weights = [m // o for o in orders]
    chars = []
    for dual in product(*(range(o) for o in orders)):
        exps = [
            sum(c * w * e for c, w, e in zip(dual, weights, tup)) % m
            for tup in elem_coords
        ]
        chars.append(Character(n, m, exps))
    return chars


def conjugate_character(xi: Character, x: int) -> Character:
    """The character s -> xi(x^{-1} s x); requires the domain normal in G."""
    n = xi.domain
    if not n.is_normal:
        raise NotNormal("conjugating a character requires a normal domain")
    g = n.parent
    exps = [xi.exponent(g.conjugate(x, s)) for s in n.members]
    return Character(n, xi.modulus, exps)
