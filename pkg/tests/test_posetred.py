import logging
import unittest

import pytest

from bredon.exceptions import (
    InvalidCategoryError,
    NoInitialObjectError,
    NotSimpleError,
    UnsupportedInputError,
)
from bredon.family import proper_family, subgroup_poset
from bredon.permgroup import alternating, cyclic, symmetric
from bredon.posetred import (
    REGIMES,
    FinPoset,
    chain,
    cheng_check,
    crown,
    e_reduction,
    find_crown,
    from_subgroup_poset,
    is_isomorphic,
    maximal_subgroups,
    point,
    superfluous,
    verify_crown_survives,
)

logging.basicConfig(level=logging.INFO)


def _proper_poset(G):
    return from_subgroup_poset(subgroup_poset(proper_family(G)))


class TestFinPoset(unittest.TestCase):
    def test_chain(self):
        P = chain(2)
        P.validate()
        self.assertEqual(P.depths(), [2, 1, 0])
        self.assertEqual(P.covers(2), [1])
        self.assertEqual(P.initial(), 0)
        self.assertEqual(superfluous(P), [1, 2])

    def test_crown(self):
        P = crown(2, 2)
        P.validate()
        self.assertEqual(len(P), 5)
        self.assertEqual(superfluous(P), [])
        self.assertIsNone(crown(2, 2, bottom=False).initial())

    def test_not_transitive(self):
        leq = [[True, True, False], [False, True, True], [False, False, True]]
        with self.assertRaises(InvalidCategoryError):
            FinPoset(["a", "b", "c"], leq).validate()

    def test_not_antisymmetric(self):
        with self.assertRaises(InvalidCategoryError):
            FinPoset(["a", "b"], [[True, True], [True, True]]).validate()

    def test_to_json(self):
        data = chain(2).to_json()
        self.assertEqual(data["size"], 3)
        self.assertEqual(data["covers"], [[0, 1], [1, 2]])


class TestEReduction(unittest.TestCase):
    def test_chains_reduce_to_a_point(self):
        for length in range(5):
            for regime in REGIMES:
                self.assertTrue(e_reduction(chain(length), regime, seed=1).is_point())

    def test_crown_is_stable(self):
        P = crown(2, 3)
        self.assertTrue(is_isomorphic(e_reduction(P), P))

    def test_unknown_regime(self):
        with self.assertRaises(UnsupportedInputError):
            e_reduction(point(), "greedy")

    def test_origin_tracks_survivors(self):
        P = _proper_poset(symmetric(3))
        E = e_reduction(P)
        self.assertTrue(E.is_point())
        (index,) = E.origin
        self.assertIs(P.elements[index], E.elements[0])

    def test_order_of_removal_does_not_matter(self):
        P = _proper_poset(symmetric(4))
        reference = e_reduction(P)
        for regime in REGIMES:
            for seed in (0, 1, 2):
                self.assertTrue(is_isomorphic(e_reduction(P, regime, seed), reference))


class TestIsomorphism(unittest.TestCase):
    def test_crowns(self):
        self.assertTrue(is_isomorphic(crown(2, 3), crown(2, 3)))
        self.assertFalse(is_isomorphic(crown(2, 3), crown(3, 2)))
        self.assertFalse(is_isomorphic(chain(3), crown(1, 2)))

    def test_relabelled(self):
        # the same chain listed top first
        P = FinPoset([2, 1, 0], [[True, False, False], [True, True, False], [True, True, True]])
        P.validate()
        self.assertTrue(is_isomorphic(P, chain(2)))


class TestChengCheck(unittest.TestCase):
    def test_crown_has_dimension_two(self):
        report = cheng_check(crown(2, 2))
        self.assertTrue(report.passed, report.failed())
        self.assertEqual(report.details["reduced_size"], 5)
        self.assertEqual(report.details["cd"], 2)

    def test_tree(self):
        report = cheng_check(_proper_poset(symmetric(3)))
        self.assertTrue(report.passed, report.failed())
        self.assertEqual(report.details["size"], 5)
        self.assertEqual(report.details["reduced_size"], 1)
        self.assertEqual(report.details["cd"], 1)

    def test_needs_initial_element(self):
        with self.assertRaises(NoInitialObjectError):
            cheng_check(crown(2, 2, bottom=False))


class TestCrowns(unittest.TestCase):
    def test_maximal_subgroups(self):
        self.assertEqual(
            sorted(H.order for H in maximal_subgroups(symmetric(3))), [2, 2, 2, 3]
        )
        self.assertEqual([H.order for H in maximal_subgroups(cyclic(4))], [2])

    def test_needs_non_abelian_simple(self):
        for G in (symmetric(4), cyclic(5)):
            with self.assertRaises(NotSimpleError):
                find_crown(G)

    @pytest.mark.slow
    def test_a5(self):
        witness = find_crown(alternating(5))
        data = witness.to_json()
        self.assertEqual(data["A_orders"], [12])
        self.assertEqual(data["B_orders"], [3])
        self.assertTrue(all(data["conditions"].values()))
        self.assertGreaterEqual(len(witness.A), 2)

    @pytest.mark.slow
    def test_crown_survives_in_a5(self):
        report = verify_crown_survives(alternating(5), seeds=[0, 1])
        self.assertTrue(report.passed, report.failed())
        self.assertEqual(report.details["poset_size"], 58)


if __name__ == "__main__":
    unittest.main()
