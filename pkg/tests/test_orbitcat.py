import logging
import unittest

import pytest

from bredon.config import Budgets
from bredon.exceptions import BudgetExceededError, NotNormalError, UnsupportedInputError
from bredon.family import all_family, proper_family, trivial_family
from bredon.orbitcat import (
    OrbitCategory,
    coinduce,
    double_coset_decomposition,
    fixed_point_coefficients,
    pointed_orbit_category,
    pushforward_of_free,
    quotient_pushforward,
    restrict,
    trivial_action_pair,
)
from bredon.permgroup import alternating, cyclic, double_cosets, perm_from_cycles, symmetric
from bredon.zcat import regular_module, sign_module, trivial_module

logging.basicConfig(level=logging.INFO)


def _sym3():
    G = symmetric(3)
    C2 = G.subgroup([perm_from_cycles(3, [(0, 1)])])
    C3 = G.subgroup([perm_from_cycles(3, [(0, 1, 2)])])
    return G, C2, C3


class TestOrbitCategory(unittest.TestCase):
    def test_skeleton(self):
        G, C2, C3 = _sym3()
        orbit = OrbitCategory(proper_family(G))
        self.assertEqual([H.order for H in orbit.subgroups], [1, 2, 3])
        self.assertEqual(OrbitCategory(proper_family(G), skeleton=False).category.n_objects, 5)

    def test_hom_sets(self):
        G, _, _ = _sym3()
        orbit = OrbitCategory(all_family(G))
        C = orbit.category
        for b, K in enumerate(orbit.subgroups):
            self.assertEqual(len(C.hom[0][b]), G.order // K.order)
        # automorphisms of G/H are N(H)/H
        self.assertEqual([len(C.hom[c][c]) for c in range(C.n_objects)], [6, 1, 2, 1])

    def test_locate_conjugates(self):
        G, C2, _ = _sym3()
        orbit = OrbitCategory(proper_family(G))
        for member in orbit.family.members:
            obj, c = orbit.locate(member)
            self.assertEqual(orbit.subgroups[obj].conjugate(c), member)

    @pytest.mark.slow
    def test_a5(self):
        orbit = OrbitCategory(proper_family(alternating(5)))
        self.assertEqual(
            [H.order for H in orbit.subgroups], [1, 2, 3, 4, 5, 6, 10, 12]
        )

    def test_to_json(self):
        G, _, _ = _sym3()
        data = OrbitCategory(proper_family(G)).to_json()
        self.assertEqual(len(data["objects"]), 3)
        self.assertTrue(data["skeleton"])
        self.assertTrue(all(h["cosets"] for h in data["homs"]))


class TestRestriction(unittest.TestCase):
    def test_restricted_constant_is_constant(self):
        G, _, C3 = _sym3()
        orbit = OrbitCategory(proper_family(G))
        sub, _ = orbit.restriction(C3)
        self.assertEqual(sub.category.n_objects, 2)
        self.assertTrue(restrict(orbit, orbit.constant(), C3).same_as(sub.constant()))

    def test_double_cosets(self):
        G, C2, _ = _sym3()
        orbit = OrbitCategory(all_family(G))
        decomposition = double_coset_decomposition(orbit, C2, C2)
        data = decomposition.to_json()
        self.assertEqual(data["double_cosets"], 2)
        self.assertEqual(sorted(data["block_sizes"]), [2, 4])
        self.assertEqual(len(decomposition.summand.generators), 2)

    def test_decomposition_for_every_pair(self):
        G = symmetric(4)
        orbit = OrbitCategory(proper_family(G))
        for H in orbit.subgroups[1::2]:
            for K in orbit.subgroups:
                decomposition = double_coset_decomposition(orbit, K, H)
                self.assertEqual(
                    len(decomposition.summand.generators), len(double_cosets(G, H, K))
                )

    def test_coinduce(self):
        G, C2, _ = _sym3()
        orbit = OrbitCategory(all_family(G))
        sub, _ = orbit.restriction(C2)
        module = coinduce(orbit, sub.constant(), C2)
        expected = [len(double_cosets(G, C2, K)) for K in orbit.subgroups]
        self.assertEqual(module.ranks, expected)


class TestQuotients(unittest.TestCase):
    def test_pushforward(self):
        G, C2, C3 = _sym3()
        orbit = OrbitCategory(all_family(G))
        sub, pushed = quotient_pushforward(orbit, orbit.constant(), C3)
        self.assertEqual(sub.group.order, 2)
        self.assertTrue(pushed.same_as(sub.constant()))

    def test_pushforward_of_free(self):
        G, C2, C3 = _sym3()
        orbit = OrbitCategory(all_family(G))
        self.assertIsNone(pushforward_of_free(orbit, C2, C3))
        self.assertIsNotNone(pushforward_of_free(orbit, G.whole, C3))
        self.assertIsNotNone(pushforward_of_free(orbit, C3, C3))

    def test_normal_subgroup_outside_family(self):
        G, _, C3 = _sym3()
        orbit = OrbitCategory(trivial_family(G))
        with self.assertRaises(UnsupportedInputError):
            orbit.quotient(C3)


class TestTrivialActions(unittest.TestCase):
    def test_res_of_ind(self):
        G = cyclic(6)
        N = G.subgroup([[(i + 2) % 6 for i in range(6)]])
        pair = trivial_action_pair(G, N)
        self.assertEqual(pair.orbit.category.n_objects, 2)
        Q = pair.quotient.group
        for P in (
            trivial_module(Q, category=pair.group_category),
            sign_module(Q, pair.group_category),
        ):
            induced = pair.ind(P)
            induced.validate()
            self.assertTrue(pair.res(induced).same_as(P))

    def test_needs_normal(self):
        G, C2, _ = _sym3()
        with self.assertRaises(NotNormalError):
            trivial_action_pair(G, C2)

    def test_fixed_points(self):
        G = cyclic(2)
        orbit = OrbitCategory(all_family(G))
        module = fixed_point_coefficients(orbit, regular_module(G))
        self.assertEqual(module.ranks, [2, 1])


class TestPointed(unittest.TestCase):
    def test_sym3(self):
        G, _, _ = _sym3()
        pointed, equivalence = pointed_orbit_category(proper_family(G))
        self.assertEqual(len(pointed.objects), 6 + 3 * 3 + 2)
        self.assertEqual(equivalence.isomorphism_classes, 5)
        pointed.check_thin()
        pointed.category.validate()

    def test_budget(self):
        G, _, _ = _sym3()
        with self.assertRaises(BudgetExceededError):
            pointed_orbit_category(proper_family(G), Budgets(max_pointed_objects=10))


if __name__ == "__main__":
    unittest.main()
