"""Finite groups as validated Cayley tables, with subgroups, cosets and quotients.

Element convention: a group of order n has elements 0..n-1 and a table with
table[i][j] = index of g_i * g_j.  Builtin families fix a canonical element
ordering (documented on each constructor) so downstream output is reproducible.
"""

from __future__ import annotations

import json
import random
from functools import cached_property
from itertools import permutations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    IndexOutOfRange,
    MalformedTable,
    NotAGroup,
    NotASubgroup,
    NotNormal,
    ParameterOutOfRange,
    TooLarge,
    UnknownFamily,
)

# Exhaustive associativity check up to this order; sampled above (see _check_associativity).
FULL_ASSOC_LIMIT = 64
# Order bound for normal-subgroup enumeration.
NORMAL_ENUM_LIMIT = 128
# Hard cap on conjugacy-class subsets visited during normal-subgroup enumeration.
_CLASS_SUBSET_LIMIT = 1 << 20


def _validated_table(table) -> np.ndarray:
    tbl = np.asarray(table)
    if tbl.ndim != 2 or tbl.shape[0] != tbl.shape[1] or tbl.shape[0] == 0:
        raise MalformedTable(f"table must be square and non-empty, got shape {tbl.shape}")
    if not np.issubdtype(tbl.dtype, np.integer):
        if np.issubdtype(tbl.dtype, np.floating) and np.all(tbl == np.floor(tbl)):
            tbl = tbl.astype(np.int64)
        else:
            raise MalformedTable("table entries must be integers")
    tbl = tbl.astype(np.int64)
    n = tbl.shape[0]
    bad = np.argwhere((tbl < 0) | (tbl >= n))
    if bad.size:
        i, j = bad[0]
        raise MalformedTable(
            f"table entry {tbl[i, j]} at cell ({i},{j}) is outside 0..{n - 1}"
        )
    return tbl


def _check_latin(tbl: np.ndarray) -> None:
    n = tbl.shape[0]
    for axis, kind in ((1, "row"), (0, "column")):
        lines = tbl if axis == 1 else tbl.T
        for i, line in enumerate(lines):
            counts = np.bincount(line, minlength=n)
            if np.any(counts != 1):
                v = int(np.argmax(counts > 1))
                where = np.where(line == v)[0][:2]
                raise NotAGroup(
                    f"{kind} {i} is not a permutation: value {v} repeats at "
                    f"{kind} positions {where[0]} and {where[1]}"
                )


def _find_identity(tbl: np.ndarray) -> int:
    n = tbl.shape[0]
    rng_n = np.arange(n)
    rows = np.where((tbl == rng_n).all(axis=1))[0]
    for e in rows:
        if (tbl[:, e] == rng_n).all():
            return int(e)
    raise NotAGroup("no two-sided identity element")


def _find_inverses(tbl: np.ndarray, identity: int) -> np.ndarray:
    n = tbl.shape[0]
    inv = np.argmax(tbl == identity, axis=1)
    bad = np.where(tbl[inv, np.arange(n)] != identity)[0]
    if bad.size:
        x = int(bad[0])
        raise NotAGroup(f"element {x} has no two-sided inverse")
    return inv.astype(np.int64)


def _check_associativity(tbl: np.ndarray, strict: bool) -> None:
    n = tbl.shape[0]
    if n <= FULL_ASSOC_LIMIT or strict:
        # chunked over the first index to bound memory at O(n^2)
        for i in range(n):
            lhs = tbl[tbl[i], :]          # (i*j)*k
            rhs = tbl[i, tbl]             # i*(j*k)
            if not np.array_equal(lhs, rhs):
                j, k = np.argwhere(lhs != rhs)[0]
                raise NotAGroup(
                    f"associativity fails at triple ({i},{j},{k}): "
                    f"({i}*{j})*{k} = {lhs[j, k]} but {i}*({j}*{k}) = {rhs[j, k]}"
                )
    else:
        rng = random.Random(0xC0C0 ^ n)
        for _ in range(10 * n * n):
            i, j, k = (rng.randrange(n) for _ in range(3))
            if tbl[tbl[i, j], k] != tbl[i, tbl[j, k]]:
                raise NotAGroup(
                    f"associativity fails at sampled triple ({i},{j},{k})"
                )


class FiniteGroup:
    """A finite group given by a Cayley table, validated at construction.

    Validation checks the Latin-square property, a two-sided identity,
    two-sided inverses, and associativity (exhaustive up to order
    FULL_ASSOC_LIMIT, random-sampled above unless ``strict=True``).
    Instances are immutable and safe to share.
    """

    def __init__(self, table, labels: Sequence[str] | None = None,
                 name: str | None = None, strict: bool = False):
        tbl = _validated_table(table)
        _check_latin(tbl)
        self.order: int = tbl.shape[0]
        self.identity: int = _find_identity(tbl)
        self.inverse: np.ndarray = _find_inverses(tbl, self.identity)
        _check_associativity(tbl, strict=strict)
        tbl.setflags(write=False)
        self.inverse.setflags(write=False)
        self.table: np.ndarray = tbl
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != self.order:
                raise MalformedTable(
                    f"{len(labels)} labels for a group of order {self.order}"
                )
        else:
            labels = tuple(str(i) for i in range(self.order))
        self.labels: tuple[str, ...] = labels
        self.name: str = name if name is not None else f"G{self.order}"

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    def elements(self) -> range:
        return range(self.order)

    def _check_element(self, x: int) -> int:
        x = int(x)
        if not 0 <= x < self.order:
            raise IndexOutOfRange(f"element index {x} outside 0..{self.order - 1}")
        return x

    def mul(self, a: int, b: int) -> int:
        return int(self.table[self._check_element(a), self._check_element(b)])

    def inv(self, a: int) -> int:
        return int(self.inverse[self._check_element(a)])

    def conjugate(self, x: int, s: int) -> int:
        """x^{-1} * s * x."""
        x = self._check_element(x)
        s = self._check_element(s)
        return int(self.table[self.table[self.inverse[x], s], x])

    def power(self, a: int, k: int) -> int:
        a = self._check_element(a)
        result = self.identity
        base = a
        k = int(k)
        if k < 0:
            base = int(self.inverse[a])
            k = -k
        while k:
            if k & 1:
                result = int(self.table[result, base])
            base = int(self.table[base, base])
            k >>= 1
        return result

    def element_order(self, a: int) -> int:
        a = self._check_element(a)
        x = a
        n = 1
        while x != self.identity:
            x = int(self.table[x, a])
            n += 1
        return n

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        """Conjugacy classes as sorted tuples, ordered by minimal element."""
        if getattr(self, "_classes", None) is None:
            n = self.order
            all_x = np.arange(n)
            seen = np.zeros(n, dtype=bool)
            classes = []
            for s in range(n):
                if seen[s]:
                    continue
                orbit = np.unique(self.table[self.table[self.inverse, s], all_x])
                seen[orbit] = True
                classes.append(tuple(int(v) for v in orbit))
            self._classes = classes
        return self._classes

    def subgroup(self, members: Iterable[int]) -> "Subgroup":
        return Subgroup(self, members)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, [self.identity])

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, range(self.order))

    def serialize(self) -> dict:
        """Cayley-table document; fixed key order keeps the JSON byte-stable."""
        return {
            "order": self.order,
            "table": self.table.tolist(),
            "labels": list(self.labels),
        }

    def to_json(self) -> str:
        return json.dumps(self.serialize(), separators=(",", ":"))


def load_group(doc, name: str | None = None, strict: bool = False) -> FiniteGroup:
    """Build a FiniteGroup from a Cayley-table document.

    ``doc`` may be a parsed dict, a JSON string, or a path to a JSON file
    of the shape {"order": n, "table": [[...]], "labels": [...]?}.
    """
    if isinstance(doc, (str, Path)):
        text = Path(doc).read_text() if Path(str(doc)).exists() else str(doc)
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedTable(f"not a JSON document: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedTable(f"expected a table document, got {type(doc).__name__}")
    if "table" not in doc:
        raise MalformedTable("document has no 'table' key")
    table = doc["table"]
    if "order" in doc:
        declared = doc["order"]
        if not isinstance(declared, int) or declared != len(table):
            raise MalformedTable(
                f"declared order {declared!r} does not match table with {len(table)} rows"
            )
    return FiniteGroup(table, labels=doc.get("labels"),
                       name=name or doc.get("name"), strict=strict)


def conjugate(g: FiniteGroup, x: int, s: int) -> int:
    """x^{-1} * s * x in g."""
    return g.conjugate(x, s)


class Subgroup:
    """A validated subgroup: member set closed under product and inverse."""

    def __init__(self, parent: FiniteGroup, members: Iterable[int]):
        members = tuple(sorted({parent._check_element(m) for m in members}))
        if not members:
            raise NotASubgroup("empty member set")
        self.parent = parent
        self.members = members
        mset = frozenset(members)
        if parent.identity not in mset:
            raise NotASubgroup("member set does not contain the identity")
        sub = parent.table[np.ix_(members, members)]
        closed = np.isin(sub, members)
        if not closed.all():
            i, j = np.argwhere(~closed)[0]
            raise NotASubgroup(
                f"not closed: {members[i]} * {members[j]} = {sub[i, j]} is outside the set"
            )
        self._member_set = mset
        self.is_normal = self._compute_normality()

    def _compute_normality(self) -> bool:
        g = self.parent
        for x in range(g.order):
            for s in self.members:
                if g.conjugate(x, s) not in self._member_set:
                    return False
        return True

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self._member_set

    def __repr__(self) -> str:
        return f"Subgroup({self.parent.name}, members={list(self.members)})"

    def position(self, x: int) -> int:
        """Index of element x inside the members tuple."""
        if x not in self._member_set:
            raise NotASubgroup(f"element {x} not in subgroup")
        return self.members.index(x)

    @cached_property
    def cosets(self) -> "CosetDecomposition":
        return coset_decomposition(self.parent, self)

    def as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """The subgroup as a standalone group on 0..|N|-1, with the member map."""
        if getattr(self, "_as_group", None) is None:
            g = self.parent
            pos = np.full(g.order, -1, dtype=np.int64)
            members = np.array(self.members, dtype=np.int64)
            pos[members] = np.arange(len(members))
            tbl = pos[g.table[np.ix_(members, members)]]
            labels = [g.labels[m] for m in self.members]
            h = FiniteGroup(tbl, labels=labels, name=f"{g.name}.sub{len(members)}")
            self._as_group = (h, self.members)
        return self._as_group


class CosetDecomposition:
    """Left cosets of a normal subgroup, with the quotient group and projection."""

    def __init__(self, subgroup: Subgroup):
        if not subgroup.is_normal:
            raise NotNormal(
                f"subgroup {list(subgroup.members)} is not normal in {subgroup.parent.name}"
            )
        g = subgroup.parent
        n = g.order
        members = np.array(subgroup.members, dtype=np.int64)
        coset_of = np.full(n, -1, dtype=np.int64)
        representatives = []
        for x in range(n):
            if coset_of[x] >= 0:
                continue
            coset = g.table[x, members]
            coset_of[coset] = len(representatives)
            representatives.append(x)  # x is minimal in its coset by scan order
        reps = np.array(representatives, dtype=np.int64)
        q_table = coset_of[g.table[np.ix_(reps, reps)]]
        q_labels = [f"[{g.labels[r]}]" for r in representatives]
        quotient = FiniteGroup(q_table, labels=q_labels,
                               name=f"{g.name}/N{len(members)}")
        coset_of.setflags(write=False)
        reps.setflags(write=False)
        self.subgroup = subgroup
        self.representatives = reps
        self.coset_of = coset_of
        self.quotient = quotient
        self.n_cosets = len(representatives)

    @property
    def projection(self) -> np.ndarray:
        """The canonical map q: G -> G/N as an index array."""
        return self.coset_of


def coset_decomposition(g: FiniteGroup, n: Subgroup) -> CosetDecomposition:
    if n.parent is not g:
        raise NotASubgroup("subgroup does not belong to this group")
    return CosetDecomposition(n)


def enumerate_normal_subgroups(g: FiniteGroup) -> list[Subgroup]:
    """All normal subgroups of g, sorted by size then member list.

    Normal subgroups are exactly the subgroups that are unions of conjugacy
    classes, so candidates are generated as class unions containing the
    identity and filtered by closure.
    """
    if g.order > NORMAL_ENUM_LIMIT:
        raise TooLarge(f"order {g.order} exceeds enumeration bound {NORMAL_ENUM_LIMIT}")
    classes = g.conjugacy_classes()
    others = [c for c in classes if g.identity not in c]
    if 2 ** len(others) > _CLASS_SUBSET_LIMIT:
        raise TooLarge(
            f"{len(classes)} conjugacy classes give too many class unions to enumerate"
        )
    found = []
    for mask in range(2 ** len(others)):
        members = {g.identity}
        for bit, cls in enumerate(others):
            if mask >> bit & 1:
                members.update(cls)
        if g.order % len(members):
            continue
        m = sorted(members)
        if not np.isin(g.table[np.ix_(m, m)], m).all():
            continue
        found.append(Subgroup(g, m))
    found.sort(key=lambda s: (len(s.members), s.members))
    return found


# ---------------------------------------------------------------------------
# Builtin families
# ---------------------------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    """Z_n with elements 0..n-1 (addition mod n); identity 0."""
    if n < 1:
        raise ParameterOutOfRange(f"cyclic order must be >= 1, got {n}")
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    return FiniteGroup(table, name=f"Z{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """D_n of order 2n: element f*n + r encodes s^f r^r (0 <= r < n, f in {0,1}).

    Relations: r^n = s^2 = e and s r s = r^{-1}; identity is index 0.
    """
    if n < 2:
        raise ParameterOutOfRange(f"dihedral parameter must be >= 2, got {n}")
    order = 2 * n
    table = np.zeros((order, order), dtype=np.int64)
    for f1 in (0, 1):
        for r1 in range(n):
            for f2 in (0, 1):
                for r2 in range(n):
                    rot = (r2 + (r1 if f2 == 0 else -r1)) % n
                    table[f1 * n + r1, f2 * n + r2] = (f1 ^ f2) * n + rot
    labels = [("e" if r == 0 else f"r{r}") for r in range(n)]
    labels += [("s" if r == 0 else f"sr{r}") for r in range(n)]
    return FiniteGroup(table, labels=labels, name=f"D{n}")


def _cycle_label(perm: tuple[int, ...]) -> str:
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        cycles.append("(" + "".join(str(v) for v in cyc) + ")")
    return "".join(cycles) if cycles else "e"


def symmetric_group(n: int) -> FiniteGroup:
    """S_n, elements ordered lexicographically by one-line notation.

    Product is composition (p*q)(i) = p(q(i)); identity (0,1,..,n-1) is index 0.
    """
    if not 1 <= n <= 5:
        raise ParameterOutOfRange(f"symmetric parameter must be in 1..5, got {n}")
    elems = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(elems)}
    order = len(elems)
    table = np.zeros((order, order), dtype=np.int64)
    for i, p in enumerate(elems):
        for j, q in enumerate(elems):
            table[i, j] = index[tuple(p[q[k]] for k in range(n))]
    labels = [_cycle_label(p) for p in elems]
    return FiniteGroup(table, labels=labels, name=f"S{n}")


def quaternion_group() -> FiniteGroup:
    """Q_8 with element order 1, -1, i, -i, j, -j, k, -k; identity index 0."""
    # axis products: (axis, axis) -> (sign, axis) for axes 1,i,j,k = 0,1,2,3
    unit = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def encode(sign: int, axis: int) -> int:
        return 2 * axis + (0 if sign > 0 else 1)

    table = np.zeros((8, 8), dtype=np.int64)
    for a1 in range(4):
        for s1 in (1, -1):
            for a2 in range(4):
                for s2 in (1, -1):
                    s3, a3 = unit[(a1, a2)]
                    table[encode(s1, a1), encode(s2, a2)] = encode(s1 * s2 * s3, a3)
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return FiniteGroup(table, labels=labels, name="Q8")


def heisenberg_group(p: int) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over Z_p; element a*p^2 + b*p + c.

    (a,b,c)*(a',b',c') = (a+a', b+b', c+c'+a*b') mod p; identity index 0.
    """
    if p not in (2, 3, 5, 7):
        raise ParameterOutOfRange(f"heisenberg_mod parameter must be a prime <= 7, got {p}")
    order = p ** 3
    table = np.zeros((order, order), dtype=np.int64)
    labels = []
    for a in range(p):
        for b in range(p):
            for c in range(p):
                labels.append(f"({a},{b},{c})")
    for i in range(order):
        a1, r = divmod(i, p * p)
        b1, c1 = divmod(r, p)
        for j in range(order):
            a2, r = divmod(j, p * p)
            b2, c2 = divmod(r, p)
            a3 = (a1 + a2) % p
            b3 = (b1 + b2) % p
            c3 = (c1 + c2 + a1 * b2) % p
            table[i, j] = a3 * p * p + b3 * p + c3
    return FiniteGroup(table, labels=labels, name=f"Heis{p}")


def direct_product(g1: FiniteGroup, g2: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """g1 x g2 with element i1*|g2| + i2; identity pairs the identities."""
    n1, n2 = g1.order, g2.order
    i1 = np.arange(n1)
    i2 = np.arange(n2)
    # table[(i1,i2),(j1,j2)] = (i1*j1, i2*j2)
    t1 = g1.table[np.ix_(i1, i1)]
    t2 = g2.table[np.ix_(i2, i2)]
    table = (t1[:, None, :, None] * n2 + t2[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    labels = [f"({l1},{l2})" for l1 in g1.labels for l2 in g2.labels]
    return FiniteGroup(table, labels=labels, name=name or f"{g1.name}x{g2.name}")


_FAMILIES = {
    "cyclic": lambda p: cyclic_group(p),
    "dihedral": lambda p: dihedral_group(p),
    "symmetric": lambda p: symmetric_group(p),
    "quaternion8": lambda p: quaternion_group(),
    "heisenberg_mod": lambda p: heisenberg_group(p),
}


def builtin_group(family: str, parameter: int | None = None) -> FiniteGroup:
    """Construct a builtin family member; see the family constructors for orderings."""
    key = family.strip().lower()
    if key not in _FAMILIES:
        raise UnknownFamily(
            f"unknown family {family!r}; choose from {sorted(_FAMILIES)}"
        )
    if key == "quaternion8":
        if parameter not in (None, 8):
            raise ParameterOutOfRange("quaternion8 takes no parameter (or 8)")
        return quaternion_group()
    if parameter is None:
        raise ParameterOutOfRange(f"family {family!r} requires an integer parameter")
    return _FAMILIES[key](int(parameter))


def _atom_from_name(name: str) -> FiniteGroup:
    s = name.strip()
    low = s.lower()
    if low in ("q8", "quaternion8"):
        return quaternion_group()
    for prefix, family in (("heis", "heisenberg_mod"), ("z", "cyclic"),
                           ("c", "cyclic"), ("d", "dihedral"), ("s", "symmetric")):
        if low.startswith(prefix) and low[len(prefix):].isdigit():
            return builtin_group(family, int(low[len(prefix):]))
    raise UnknownFamily(f"cannot parse group name {name!r}")


def group_from_name(name: str) -> FiniteGroup:
    """Parse names like 'Z4', 'S3', 'D4', 'Q8', 'Heis3' and products 'Z2xZ2'."""
    parts = name.split("x")
    atoms = [_atom_from_name(p) for p in parts]
    g = atoms[0]
    for h in atoms[1:]:
        g = direct_product(g, h)
    if len(atoms) > 1:
        g.name = "x".join(a.name for a in atoms)
    return g


ZOO_NAMES = ("Z2", "Z4", "Z6", "Z2xZ2", "S3", "D4", "Q8", "Heis3")


def zoo() -> list[FiniteGroup]:
    """The standard test collection of groups."""
    return [group_from_name(n) for n in ZOO_NAMES]
