import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covchar.characters import (
    Character,
    commutator_subgroup,
    conjugate_character,
    enumerate_characters,
    evaluate,
)
from covchar.errors import NotInDomain, NotNormal, TooLarge
from covchar.groups import Subgroup, builtin_group, enumerate_normal_subgroups, group_from_name, zoo

ZETA3 = np.exp(2j * np.pi / 3)


def brute_force_commutators(g):
    """Oracle: close the set of commutators under the group product."""
    gens = {
        g.mul(g.mul(g.mul(g.inv(a), g.inv(b)), a), b)
        for a in range(g.order)
        for b in range(g.order)
    }
    members = set(gens) | {g.identity}
    changed = True
    while changed:
        changed = False
        for a in list(members):
            for b in list(members):
                c = g.mul(a, b)
                if c not in members:
                    members.add(c)
                    changed = True
    return sorted(members)


def all_cyclic_characters(n):
    """Oracle for Z_n: every map k -> zeta_n^{c k} and nothing else."""
    return sorted(tuple((c * k) % n for k in range(n)) for c in range(n))


class TestEnumeration:
    def test_z3_dual(self):
        g = group_from_name("Z3")
        chars = enumerate_characters(g.full_subgroup())
        assert len(chars) == 3
        assert all(xi.modulus == 3 for xi in chars)
        assert sorted(xi.exponents for xi in chars) == all_cyclic_characters(3)

    def test_s3_two_characters(self):
        g = group_from_name("S3")
        full = g.full_subgroup()
        assert brute_force_commutators(g) == [0, 3, 4]  # A3
        chars = enumerate_characters(full)
        assert len(chars) == 2
        assert chars[0].is_trivial
        sign = chars[1]
        assert sign.modulus == 2
        # transpositions get exponent 1, rotations 0
        for s, label in enumerate(g.labels):
            expected = 0 if label in ("e", "(012)", "(021)") else 1
            assert sign.exponent(s) == expected

    def test_trivial_subgroup(self):
        g = group_from_name("D4")
        chars = enumerate_characters(g.trivial_subgroup())
        assert len(chars) == 1
        assert chars[0].modulus == 1
        assert chars[0].is_trivial

    def test_trivial_character_first_everywhere(self):
        for g in zoo():
            for n in enumerate_normal_subgroups(g):
                chars = enumerate_characters(n)
                assert chars[0].is_trivial

    def test_count_equals_abelianization_order(self):
        for g in zoo():
            for n in enumerate_normal_subgroups(g):
                h, _ = n.as_group()
                ab_order = len(h.elements()) // len(brute_force_commutators(h))
                assert len(enumerate_characters(n)) == ab_order

    def test_characters_unique(self):
        for g in zoo():
            for n in enumerate_normal_subgroups(g):
                chars = enumerate_characters(n)
                assert len({xi.exponents for xi in chars}) == len(chars)

    def test_too_large(self):
        huge = builtin_group("cyclic", 513)
        with pytest.raises(TooLarge):
            enumerate_characters(huge.full_subgroup())


class TestEvaluation:
    def test_trivial_is_one(self):
        g = group_from_name("Z6")
        xi = enumerate_characters(g.full_subgroup())[0]
        for s in range(6):
            assert evaluate(xi, s) == pytest.approx(1.0)

    def test_generator_value(self):
        g = group_from_name("Z3")
        chars = enumerate_characters(g.full_subgroup())
        xi = next(c for c in chars if c.exponent(1) == 1)
        assert evaluate(xi, 1) == pytest.approx(ZETA3)

    def test_inverse_values_multiply_to_one(self):
        for g in zoo():
            n = enumerate_normal_subgroups(g)[-1]
            for xi in enumerate_characters(n):
                for s in n.members:
                    assert evaluate(xi, s) * evaluate(xi, g.inv(s)) == pytest.approx(1.0)

    def test_not_in_domain(self):
        g = group_from_name("S3")
        a3 = enumerate_normal_subgroups(g)[1]
        xi = enumerate_characters(a3)[1]
        with pytest.raises(NotInDomain):
            evaluate(xi, 1)

    def test_orthogonality(self):
        for g in zoo():
            for n in enumerate_normal_subgroups(g):
                chars = enumerate_characters(n)
                mats = np.array([xi.values_on_members() for xi in chars])
                gram = mats @ mats.conj().T
                expected = len(n.members) * np.eye(len(chars))
                assert np.abs(gram - expected).max() < 1e-12


class TestValidation:
    def test_rejects_non_homomorphism(self):
        g = group_from_name("Z4")
        full = g.full_subgroup()
        with pytest.raises(ValueError, match="homomorphism"):
            Character(full, 4, [0, 1, 3, 2])

    def test_rejects_nonzero_identity(self):
        g = group_from_name("Z2")
        with pytest.raises(ValueError, match="identity"):
            Character(g.full_subgroup(), 2, [1, 0])

    @settings(max_examples=25, deadline=None)
    @given(st.sampled_from(["Z2", "Z4", "Z6", "Z2xZ2", "S3", "D4", "Q8"]),
           st.integers(0, 10**6))
    def test_homomorphism_law_exact(self, name, pick):
        g = group_from_name(name)
        subs = enumerate_normal_subgroups(g)
        n = subs[pick % len(subs)]
        chars = enumerate_characters(n)
        xi = chars[pick % len(chars)]
        for s in n.members:
            for t in n.members:
                combined = xi.exponent(g.mul(s, t))
                assert combined == (xi.exponent(s) + xi.exponent(t)) % xi.modulus


class TestConjugateCharacter:
    def test_a3_example(self):
        g = group_from_name("S3")
        a3 = enumerate_normal_subgroups(g)[1]
        rot = g.labels.index("(012)")
        xi = next(c for c in enumerate_characters(a3) if c.exponent(rot) == 1)
        x = g.labels.index("(01)")
        twisted = conjugate_character(xi, x)
        assert twisted.exponent(rot) == 2

    def test_abelian_inner_conjugation_fixes(self):
        g = group_from_name("Z6")
        n = enumerate_normal_subgroups(g)[1]
        for xi in enumerate_characters(n):
            for x in n.members:
                assert conjugate_character(xi, x) == xi

    def test_trivial_stays_trivial(self):
        g = group_from_name("Q8")
        for n in enumerate_normal_subgroups(g):
            triv = enumerate_characters(n)[0]
            for x in range(g.order):
                assert conjugate_character(triv, x).is_trivial

    def test_involution(self):
        for g in (group_from_name("S3"), group_from_name("Q8")):
            for n in enumerate_normal_subgroups(g):
                for xi in enumerate_characters(n):
                    for x in range(g.order):
                        back = conjugate_character(conjugate_character(xi, x), g.inv(x))
                        assert back.exponents == xi.exponents

    def test_requires_normal_domain(self):
        g = group_from_name("S3")
        twisted = Subgroup(g, [0, 1])
        xi = enumerate_characters(twisted)[1]
        with pytest.raises(NotNormal):
            conjugate_character(xi, 3)


class TestSerialization:
    def test_shape(self):
        g = group_from_name("S3")
        a3 = enumerate_normal_subgroups(g)[1]
        xi = enumerate_characters(a3)[1]
        doc = xi.serialize()
        assert doc == {"modulus": 3, "exponents": {"0": 0, "3": 1, "4": 2}}
