import logging
import unittest

import pytest

from bredon.config import Budgets
from bredon.exceptions import (
    InvalidActionError,
    InvalidPermutationError,
    NotASubgroupError,
    NotNormalError,
    SizeBoundError,
)
from bredon.permgroup import (
    GAction,
    PermGroup,
    all_subgroups,
    alternating,
    conjugacy_classes_of_subgroups,
    cyclic,
    dihedral,
    direct_product,
    double_cosets,
    is_simple,
    klein_four,
    normalizer,
    perm_compose,
    perm_from_cycles,
    perm_inverse,
    quaternion,
    quotient_group,
    semidirect_product,
    stabilizer_chain_order,
    symmetric,
)

# Configure logging for tests (optional, but helpful for debugging)
logging.basicConfig(level=logging.INFO)


class TestPermutations(unittest.TestCase):
    def test_compose_applies_right_factor_first(self):
        p = (1, 2, 0)
        q = (1, 0, 2)
        self.assertEqual(perm_compose(p, q), (2, 1, 0))

    def test_inverse(self):
        p = perm_from_cycles(5, [(0, 1, 2), (3, 4)])
        self.assertEqual(perm_compose(p, perm_inverse(p)), (0, 1, 2, 3, 4))

    def test_invalid_generator(self):
        with self.assertRaises(InvalidPermutationError):
            PermGroup(3, [[0, 0, 1]])
        with self.assertRaises(InvalidPermutationError):
            PermGroup(3, [[0, 1]])

    def test_stabilizer_chain_order(self):
        A5 = alternating(5)
        self.assertEqual(stabilizer_chain_order(5, A5.generators), 60)


class TestPermGroup(unittest.TestCase):
    def test_orders(self):
        expected = {
            cyclic(6): 6,
            symmetric(3): 6,
            dihedral(4): 8,
            quaternion(): 8,
            klein_four(): 4,
            alternating(4): 12,
            dihedral(5): 10,
            symmetric(4): 24,
            alternating(5): 60,
        }
        for G, order in expected.items():
            self.assertEqual(G.order, order, G)

    def test_identity_first(self):
        G = symmetric(3)
        self.assertEqual(G.elements[G.identity], (0, 1, 2))
        for x in range(G.order):
            self.assertEqual(G.mul[x][G.inv[x]], G.identity)

    def test_cayley_table_is_associative(self):
        G = dihedral(4)
        mul = G.mul
        for a in range(G.order):
            for b in range(G.order):
                for c in range(G.order):
                    self.assertEqual(mul[mul[a][b]][c], mul[a][mul[b][c]])

    def test_abelian(self):
        self.assertTrue(cyclic(4).is_abelian())
        self.assertTrue(direct_product(cyclic(2), cyclic(3)).is_abelian())
        self.assertFalse(symmetric(3).is_abelian())
        self.assertFalse(quaternion().is_abelian())

    def test_element_outside_group(self):
        G = alternating(4)
        with self.assertRaises(NotASubgroupError):
            G.element_index(perm_from_cycles(4, [(0, 1)]))

    def test_subgroup_from_mask_rejects_non_subgroups(self):
        G = symmetric(3)
        # the identity and one 3-cycle, without its inverse
        with self.assertRaises(NotASubgroupError):
            G.subgroup_from_mask(0b1001)
        self.assertEqual(G.subgroup_from_mask(G.full_mask), G.whole)


class TestSubgroups(unittest.TestCase):
    def test_counts(self):
        for G, total, classes in (
            (symmetric(3), 6, 4),
            (cyclic(4), 3, 3),
            (klein_four(), 5, 5),
            (quaternion(), 6, 6),
            (dihedral(4), 10, 8),
            (alternating(4), 10, 5),
            (symmetric(4), 30, 11),
        ):
            self.assertEqual(len(all_subgroups(G)), total, G)
            self.assertEqual(len(conjugacy_classes_of_subgroups(G)), classes, G)

    @pytest.mark.slow
    def test_a5_counts(self):
        G = alternating(5)
        self.assertEqual(len(all_subgroups(G)), 59)
        classes = conjugacy_classes_of_subgroups(G)
        self.assertEqual(len(classes), 9)
        self.assertEqual(sorted(len(c) for c in classes), [1, 1, 5, 5, 6, 6, 10, 10, 15])

    def test_subgroups_sorted_and_closed(self):
        G = dihedral(4)
        subgroups = all_subgroups(G)
        self.assertEqual(subgroups, sorted(subgroups, key=lambda H: H.sort_key))
        for H in subgroups:
            self.assertEqual(G.subgroup_from_mask(H.mask), H)

    def test_class_conjugators(self):
        G = symmetric(4)
        for cls in conjugacy_classes_of_subgroups(G):
            rep = cls.representative
            self.assertEqual(rep, cls.members[0])
            for member in cls.members:
                self.assertEqual(rep.conjugate(cls.conjugators[member.mask]), member)

    def test_budget(self):
        with self.assertRaises(SizeBoundError):
            all_subgroups(alternating(5), Budgets(max_group_order=10))

    def test_budget_applies_after_caching(self):
        G = symmetric(4)
        self.assertEqual(len(all_subgroups(G)), 30)
        with self.assertRaises(SizeBoundError):
            all_subgroups(G, Budgets(max_group_order=12))

    def test_generators_generate(self):
        G = alternating(4)
        for H in all_subgroups(G):
            self.assertEqual(G.closure(H.generators), H.mask)
            self.assertEqual(H.as_group.order, H.order)

    def test_lift_and_restrict(self):
        G = symmetric(4)
        H = G.subgroup([perm_from_cycles(4, [(0, 1, 2, 3)])])
        for K in all_subgroups(G):
            if K.issubgroup(H):
                self.assertEqual(H.lift(H.restrict(K)), K)

    def test_normalizer(self):
        G = symmetric(3)
        C2 = G.subgroup([perm_from_cycles(3, [(0, 1)])])
        C3 = G.subgroup([perm_from_cycles(3, [(0, 1, 2)])])
        self.assertEqual(normalizer(G, C2), C2)
        self.assertEqual(normalizer(G, C3), G.whole)
        self.assertTrue(C3.is_normal())
        self.assertFalse(C2.is_normal())


class TestDoubleCosets(unittest.TestCase):
    def test_sym3(self):
        G = symmetric(3)
        C2 = G.subgroup([perm_from_cycles(3, [(0, 1)])])
        blocks = double_cosets(G, C2, C2)
        self.assertEqual(sorted(len(b) for b in blocks), [2, 4])

    def test_partition(self):
        G = symmetric(4)
        subgroups = [cls.representative for cls in conjugacy_classes_of_subgroups(G)]
        for H in subgroups[::3]:
            for K in subgroups[::4]:
                blocks = double_cosets(G, H, K)
                union = set()
                for block in blocks:
                    self.assertFalse(union & block)
                    union |= block
                    for x in block:
                        for h in H.members:
                            self.assertIn(G.mul[h][x], block)
                        for k in K.members:
                            self.assertIn(G.mul[x][k], block)
                self.assertEqual(union, set(range(G.order)))


class TestSimplicityAndQuotients(unittest.TestCase):
    def test_is_simple(self):
        self.assertTrue(is_simple(cyclic(5)))
        self.assertFalse(is_simple(symmetric(4)))
        self.assertFalse(is_simple(alternating(4)))

    @pytest.mark.slow
    def test_a5_is_simple(self):
        self.assertTrue(is_simple(alternating(5)))

    def test_quotient(self):
        G = symmetric(4)
        V = G.subgroup(
            [perm_from_cycles(4, [(0, 1), (2, 3)]), perm_from_cycles(4, [(0, 2), (1, 3)])]
        )
        quotient = quotient_group(G, V)
        self.assertEqual(quotient.group.order, 6)
        self.assertEqual(quotient.preimage(quotient.group.trivial_subgroup), V)
        for x in range(G.order):
            q = quotient.projection[x]
            self.assertEqual(quotient.projection[quotient.lift(q)], q)

    def test_quotient_needs_normal(self):
        G = symmetric(3)
        C2 = G.subgroup([perm_from_cycles(3, [(0, 1)])])
        with self.assertRaises(NotNormalError):
            quotient_group(G, C2)


class TestActions(unittest.TestCase):
    def test_inversion_action(self):
        G, pi = cyclic(2), cyclic(3)
        act = GAction.from_generator_images(G, pi, {0: list(pi.inv)})
        act.validate()
        product = semidirect_product(pi, G, act)
        self.assertEqual(product.group.order, 6)
        self.assertFalse(product.group.is_abelian())
        self.assertTrue(product.pi_subgroup.is_normal())
        self.assertEqual(product.actor_subgroup.order, 2)
        for x in range(product.group.order):
            alpha, g = product.decompose(x)
            self.assertEqual(product.element(alpha, g), x)

    def test_trivial_action_gives_direct_product(self):
        G, pi = cyclic(2), cyclic(2)
        product = semidirect_product(pi, G, GAction.trivial(G, pi))
        self.assertTrue(product.group.is_abelian())
        self.assertEqual(product.group.order, 4)

    def test_rejects_non_automorphism(self):
        G, pi = cyclic(2), cyclic(3)
        with self.assertRaises(InvalidActionError):
            GAction.from_generator_images(G, pi, {0: [1, 0, 2]})
        with self.assertRaises(InvalidActionError):
            GAction.from_generator_images(G, pi, {0: [0, 1, 1]})

    def test_rejects_non_homomorphism(self):
        # an automorphism of order 2 assigned to a generator of order 3
        G, pi = cyclic(3), cyclic(3)
        with self.assertRaises(InvalidActionError):
            GAction.from_generator_images(G, pi, {0: list(pi.inv)})

    def test_action_must_match_groups(self):
        G, pi = cyclic(2), cyclic(3)
        act = GAction.trivial(G, pi)
        with self.assertRaises(InvalidActionError):
            semidirect_product(cyclic(3), G, act)


if __name__ == "__main__":
    unittest.main()
