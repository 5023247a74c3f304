import logging
import unittest

from bredon.config import Budgets
from bredon.exceptions import BudgetExceededError, UnsupportedInputError
from bredon.nonab import (
    Cocycle,
    cocycle_from_complement,
    cocycles,
    h1,
    principal_cocycle,
    subconjugate_iff_principal,
    subgroup_from_cocycle,
)
from bredon.permgroup import GAction, cyclic, semidirect_product, symmetric

logging.basicConfig(level=logging.INFO)


def _inverting():
    G, pi = cyclic(2), cyclic(3)
    return GAction.from_generator_images(G, pi, {0: list(pi.inv)})


class TestCocycles(unittest.TestCase):
    def test_inverting_action(self):
        act = _inverting()
        found = cocycles(act)
        self.assertEqual(len(found), 3)
        self.assertTrue(all(phi.is_cocycle() for phi in found))

    def test_trivial_action_gives_homomorphisms(self):
        G = cyclic(2)
        self.assertEqual(len(cocycles(GAction.trivial(G, cyclic(2)))), 2)
        self.assertEqual(len(cocycles(GAction.trivial(G, symmetric(3)))), 4)

    def test_not_a_cocycle(self):
        act = GAction.trivial(cyclic(2), cyclic(3))
        self.assertFalse(Cocycle(act, (0, 1)).is_cocycle())

    def test_principal_cocycles(self):
        act = _inverting()
        values = {phi.values for phi in cocycles(act)}
        for alpha in range(act.target.order):
            phi = principal_cocycle(act, alpha)
            self.assertTrue(phi.is_cocycle())
            self.assertIn(phi.values, values)

    def test_budget(self):
        with self.assertRaises(BudgetExceededError):
            cocycles(_inverting(), Budgets(max_cocycle_candidates=1))


class TestH1(unittest.TestCase):
    def test_sym3(self):
        classes = h1(_inverting())
        self.assertEqual(len(classes), 1)
        data = classes.to_json()
        self.assertEqual(data["cocycle_count"], 3)
        self.assertEqual(data["principal_class_size"], 3)

    def test_klein_four(self):
        classes = h1(GAction.trivial(cyclic(2), cyclic(2)))
        self.assertEqual(len(classes), 2)
        self.assertTrue(classes.is_principal(classes.cocycles[0]))
        self.assertFalse(classes.is_principal(classes.cocycles[1]))

    def test_conjugacy_classes_of_homomorphisms(self):
        # Hom(Z/2, Sym(3)) up to conjugacy: trivial and one class of involutions
        classes = h1(GAction.trivial(cyclic(2), symmetric(3)))
        self.assertEqual(sorted(len(c) for c in classes.classes), [1, 3])


class TestComplements(unittest.TestCase):
    def test_round_trip(self):
        act = _inverting()
        product = semidirect_product(act.target, act.actor, act)
        H = act.actor.whole
        for phi in cocycles(act.restricted(H)):
            complement = subgroup_from_cocycle(product, H, phi)
            back_H, back = cocycle_from_complement(product, complement)
            self.assertEqual(back_H, H)
            self.assertEqual(back.values, phi.values)

    def test_normal_factor_is_not_a_complement(self):
        act = _inverting()
        product = semidirect_product(act.target, act.actor, act)
        with self.assertRaises(UnsupportedInputError):
            cocycle_from_complement(product, product.pi_subgroup)

    def test_subconjugate_iff_principal(self):
        for act in (_inverting(), GAction.trivial(cyclic(2), cyclic(2))):
            for H in (act.actor.whole, act.actor.trivial_subgroup):
                report = subconjugate_iff_principal(act, H)
                self.assertTrue(report.passed, report.failed())

    def test_report_details(self):
        act = GAction.trivial(cyclic(2), cyclic(2))
        report = subconjugate_iff_principal(act, act.actor.whole)
        self.assertEqual(report.details["cocycles"], 2)
        self.assertEqual(report.details["classes"], 2)


if __name__ == "__main__":
    unittest.main()
