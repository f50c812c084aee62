import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covchar.errors import (
    IndexOutOfRange,
    MalformedTable,
    NotAGroup,
    NotNormal,
    ParameterOutOfRange,
    TooLarge,
    UnknownFamily,
)
from covchar.groups import (
    FiniteGroup,
    Subgroup,
    builtin_group,
    conjugate,
    coset_decomposition,
    direct_product,
    enumerate_normal_subgroups,
    group_from_name,
    load_group,
    zoo,
    ZOO_NAMES,
)


def brute_force_conjugacy_classes(g):
    """Independent oracle: orbit of every element under conjugation."""
    classes = []
    seen = set()
    for s in range(g.order):
        if s in seen:
            continue
        orbit = {g.mul(g.mul(g.inv(x), s), x) for x in range(g.order)}
        seen |= orbit
        classes.append(frozenset(orbit))
    return set(classes)


def brute_force_normal_subgroups(g):
    """Independent oracle: filter all identity-containing subsets (small g only)."""
    assert g.order <= 8
    found = []
    elements = [x for x in range(g.order) if x != g.identity]
    for r in range(len(elements) + 1):
        for extra in itertools.combinations(elements, r):
            members = {g.identity, *extra}
            closed = all(g.mul(a, b) in members for a in members for b in members)
            if not closed:
                continue
            normal = all(
                g.mul(g.mul(g.inv(x), s), x) in members
                for x in range(g.order)
                for s in members
            )
            if normal:
                found.append(tuple(sorted(members)))
    return sorted(found, key=lambda m: (len(m), m))


class TestLoadGroup:
    def test_z2_from_table(self):
        g = load_group({"order": 2, "table": [[0, 1], [1, 0]]})
        assert g.order == 2
        assert g.identity == 0
        assert g.inv(1) == 1

    def test_row_not_permutation(self):
        with pytest.raises(NotAGroup, match="row 1"):
            load_group({"order": 2, "table": [[0, 1], [1, 1]]})

    def test_declared_order_mismatch(self):
        with pytest.raises(MalformedTable):
            load_group({"order": 3, "table": [[0, 1], [1, 0]]})

    def test_out_of_range_entry_names_cell(self):
        with pytest.raises(MalformedTable, match=r"\(1,1\)"):
            load_group({"table": [[0, 1], [1, 5]]})

    def test_non_square(self):
        with pytest.raises(MalformedTable):
            load_group({"table": [[0, 1, 2], [1, 2, 0]]})

    def test_no_identity(self):
        # subtraction mod 3: a Latin square with no two-sided identity
        table = [[0, 2, 1], [1, 0, 2], [2, 1, 0]]
        with pytest.raises(NotAGroup, match="identity"):
            load_group({"table": table})

    def test_associativity_violation(self):
        # rows/columns are permutations and row 0/column 0 act as identity,
        # but the quasigroup is not associative
        table = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ]
        with pytest.raises(NotAGroup, match="associativity"):
            load_group({"table": table})

    def test_s3_conjugacy_classes(self):
        g = group_from_name("S3")
        assert len(brute_force_conjugacy_classes(g)) == 3
        assert len(g.conjugacy_classes()) == 3

    def test_round_trip_all_builtins(self):
        for name in ZOO_NAMES:
            g = group_from_name(name)
            doc = g.serialize()
            h = load_group(doc, name=g.name)
            assert h.order == g.order
            assert np.array_equal(h.table, g.table)
            assert h.labels == g.labels
            assert h.serialize() == doc


class TestBuiltins:
    def test_cyclic(self):
        g = builtin_group("cyclic", 4)
        assert g.order == 4
        assert g.mul(3, 2) == 1

    def test_symmetric_3(self):
        g = builtin_group("symmetric", 3)
        assert g.order == 6

    def test_heisenberg_center(self):
        g = builtin_group("heisenberg_mod", 3)
        assert g.order == 27
        center = [
            z for z in range(g.order)
            if all(g.mul(z, x) == g.mul(x, z) for x in range(g.order))
        ]
        assert len(center) == 3

    def test_unknown_family(self):
        with pytest.raises(UnknownFamily):
            builtin_group("sporadic", 1)

    def test_parameter_out_of_range(self):
        with pytest.raises(ParameterOutOfRange):
            builtin_group("symmetric", 6)
        with pytest.raises(ParameterOutOfRange):
            builtin_group("heisenberg_mod", 4)

    def test_quaternion_structure(self):
        q8 = builtin_group("quaternion8")
        i, j, k = 2, 4, 6
        minus_one = 1
        assert q8.mul(i, i) == minus_one
        assert q8.mul(j, j) == minus_one
        assert q8.mul(i, j) == k
        assert q8.mul(j, i) == q8.inv(k)

    def test_dihedral_relation(self):
        d4 = builtin_group("dihedral", 4)
        r, s = 1, 4
        # s r s = r^{-1}
        assert d4.mul(d4.mul(s, r), s) == d4.inv(r)

    def test_direct_product_order(self):
        g = direct_product(builtin_group("cyclic", 2), builtin_group("cyclic", 3))
        assert g.order == 6
        assert g.is_abelian

    def test_group_from_name_products(self):
        g = group_from_name("Z2xZ2")
        assert g.order == 4
        assert g.name == "Z2xZ2"


class TestSubgroups:
    def test_normal_subgroups_s3(self):
        g = group_from_name("S3")
        subs = enumerate_normal_subgroups(g)
        assert [s.members for s in subs] == brute_force_normal_subgroups(g)
        assert [len(s.members) for s in subs] == [1, 3, 6]

    def test_normal_subgroups_q8(self):
        g = group_from_name("Q8")
        subs = enumerate_normal_subgroups(g)
        assert [s.members for s in subs] == brute_force_normal_subgroups(g)
        assert [len(s.members) for s in subs] == [1, 2, 4, 4, 4, 8]

    def test_normal_subgroups_z4(self):
        g = group_from_name("Z4")
        subs = enumerate_normal_subgroups(g)
        assert [list(s.members) for s in subs] == [[0], [0, 2], [0, 1, 2, 3]]

    def test_all_flagged_normal_and_stable(self):
        for g in zoo():
            for n in enumerate_normal_subgroups(g):
                assert n.is_normal
                members = set(n.members)
                for x in range(g.order):
                    assert {g.conjugate(x, s) for s in n.members} == members

    def test_too_large(self):
        with pytest.raises(TooLarge):
            enumerate_normal_subgroups(builtin_group("cyclic", 129))

    def test_non_normal_subgroup_detected(self):
        g = group_from_name("S3")
        twisted = Subgroup(g, [0, 1])  # generated by a transposition
        assert not twisted.is_normal
        with pytest.raises(NotNormal):
            coset_decomposition(g, twisted)


class TestCosets:
    def test_s3_mod_a3(self):
        g = group_from_name("S3")
        a3 = enumerate_normal_subgroups(g)[1]
        dec = coset_decomposition(g, a3)
        assert dec.n_cosets == 2
        assert dec.quotient.order == 2
        assert np.array_equal(dec.quotient.table, [[0, 1], [1, 0]])

    def test_trivial_subgroup_gives_isomorphic_quotient(self):
        g = group_from_name("D4")
        dec = coset_decomposition(g, g.trivial_subgroup())
        assert dec.quotient.order == g.order
        assert np.array_equal(dec.projection, np.arange(g.order))
        assert np.array_equal(dec.quotient.table, g.table)

    def test_full_subgroup_gives_trivial_quotient(self):
        g = group_from_name("D4")
        dec = coset_decomposition(g, g.full_subgroup())
        assert dec.quotient.order == 1

    def test_representatives_minimal_and_consistent(self):
        for g in zoo():
            for n in enumerate_normal_subgroups(g):
                dec = n.cosets
                assert len(dec.representatives) * len(n.members) == g.order
                for c, rep in enumerate(dec.representatives):
                    coset = np.where(dec.coset_of == c)[0]
                    assert rep == coset.min()
                # coset_of[x] == coset_of[y] iff x^{-1} y in N
                for x in range(g.order):
                    for y in range(g.order):
                        same = dec.coset_of[x] == dec.coset_of[y]
                        assert same == (g.mul(g.inv(x), y) in n)

    def test_projection_is_homomorphism(self):
        for g in zoo():
            for n in enumerate_normal_subgroups(g):
                dec = n.cosets
                q = dec.projection
                expected = dec.quotient.table[np.ix_(q, q)]
                assert np.array_equal(q[g.table], expected)


class TestConjugation:
    def test_spec_example_s3(self):
        g = group_from_name("S3")
        # (01)^{-1} (012) (01) = (021) in zero-based cycle labels
        x = g.labels.index("(01)")
        s = g.labels.index("(012)")
        assert g.labels[conjugate(g, x, s)] == "(021)"

    def test_identity_and_abelian(self):
        g = group_from_name("Z6")
        for x in range(6):
            for s in range(6):
                assert conjugate(g, x, s) == s
        d4 = group_from_name("D4")
        for s in range(8):
            assert conjugate(d4, d4.identity, s) == s

    def test_index_out_of_range(self):
        g = group_from_name("Z4")
        with pytest.raises(IndexOutOfRange):
            conjugate(g, 4, 0)

    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(ZOO_NAMES), st.integers(0, 10**6))
    def test_conjugation_is_automorphism(self, name, x_raw):
        g = group_from_name(name)
        x = x_raw % g.order
        alpha = [g.conjugate(x, s) for s in range(g.order)]
        assert sorted(alpha) == list(range(g.order))
        for a in range(g.order):
            for b in range(g.order):
                assert alpha[g.mul(a, b)] == g.mul(alpha[a], alpha[b])
