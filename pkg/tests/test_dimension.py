import logging
import unittest

import pytest

from bredon.exceptions import NotNormalError, UnsupportedInputError
from bredon.dimension import (
    bar_cohomology,
    category_cd_le,
    cd_le,
    cd_report,
    equivariant_cd,
    proper_reduction_chain,
    simple_quotient_chain,
    verify_double_cosets,
    verify_mainalg,
    verify_poset_bound,
    verify_quotient,
    verify_reduction,
    verify_shapiro,
    verify_trivial_action,
)
from bredon.family import all_family, family_generated, proper_family, trivial_family
from bredon.orbitcat import OrbitCategory
from bredon.permgroup import (
    GAction,
    alternating,
    cyclic,
    dihedral,
    perm_from_cycles,
    symmetric,
)
from bredon.zcat import FinCategory, constant_module, sign_module, trivial_module

logging.basicConfig(level=logging.INFO)


def _sym3():
    G = symmetric(3)
    return (
        G,
        G.subgroup([perm_from_cycles(3, [(0, 1)])]),
        G.subgroup([perm_from_cycles(3, [(0, 1, 2)])]),
    )


def _z6():
    G = cyclic(6)
    return G, G.subgroup([[(i + 2) % 6 for i in range(6)]])


class TestVerdicts(unittest.TestCase):
    def test_trivial_family_of_z2(self):
        G = cyclic(2)
        self.assertFalse(cd_le(G, trivial_family(G), 1).le)
        self.assertTrue(cd_le(G, all_family(G), 0).le)

    def test_lower_bound_only(self):
        G = cyclic(2)
        report = cd_report(G, trivial_family(G), 3)
        self.assertIsNone(report.value)
        self.assertEqual(report.lower_bound, 4)
        self.assertEqual([v["le"] for v in report.to_json()["verdicts"]], [False] * 4)

    def test_all_family_has_dimension_zero(self):
        G = symmetric(3)
        report = cd_report(G, all_family(G), 2)
        self.assertEqual(report.value, 0)
        self.assertEqual(report.lower_bound, 0)

    def test_monotone(self):
        G, C2, _ = _sym3()
        F = family_generated(G, [C2])
        verdicts = [v.le for v in cd_report(G, F, 3).verdicts]
        self.assertEqual(verdicts, sorted(verdicts))

    def test_proper_families_have_dimension_at_least_two(self):
        for G in (cyclic(3), symmetric(3), dihedral(4)):
            F = proper_family(G)
            self.assertFalse(cd_le(G, F, 1).le, G)

    def test_foreign_family(self):
        with self.assertRaises(UnsupportedInputError):
            cd_le(cyclic(2), trivial_family(cyclic(2)), 1)

    def test_poset_with_top(self):
        C = FinCategory.from_poset(["a", "b"], [[True, True], [False, True]])
        self.assertTrue(category_cd_le(C, 0).le)

    @pytest.mark.slow
    def test_a5_proper(self):
        G = alternating(5)
        F = proper_family(G)
        self.assertEqual(OrbitCategory(F).category.n_objects, 8)
        report = cd_report(G, F, 2)
        self.assertEqual(report.value, 2)


class TestMainSweep(unittest.TestCase):
    def test_z2(self):
        report = verify_mainalg(cyclic(2))
        self.assertTrue(report.passed)
        self.assertEqual(report.details["proper_families"], 1)
        self.assertEqual(report.exit_code, 0)

    def test_sym3(self):
        report = verify_mainalg(symmetric(3))
        self.assertTrue(report.passed)
        self.assertEqual(report.details["families"], 5)
        self.assertEqual(report.details["proper_families"], 4)

    @pytest.mark.slow
    def test_a4(self):
        report = verify_mainalg(alternating(4))
        self.assertTrue(report.passed)
        self.assertEqual(report.details["proper_families"], 6)


class TestStructuralChecks(unittest.TestCase):
    def test_shapiro(self):
        G, C2, C3 = _sym3()
        for F in (all_family(G), proper_family(G), trivial_family(G)):
            for H in (C2, C3):
                report = verify_shapiro(G, F, H, n_max=3)
                self.assertTrue(report.passed, report.failed())

    def test_shapiro_torsion_coefficients(self):
        G, C2, _ = _sym3()
        orbit = OrbitCategory(proper_family(G))
        sub, _ = orbit.restriction(C2)
        M = constant_module(sub.category, 2)
        report = verify_shapiro(G, orbit.family, C2, M, 2, orbit=orbit)
        self.assertTrue(report.passed, report.failed())

    def test_double_cosets(self):
        report = verify_double_cosets(proper_family(symmetric(4)))
        self.assertTrue(report.passed, report.failed())
        self.assertEqual(report.details["pairs"], 11 * 10)

    def test_quotient(self):
        G, _, C3 = _sym3()
        for F in (all_family(G), family_generated(G, [C3])):
            report = verify_quotient(G, F, C3, 2)
            self.assertTrue(report.passed, report.failed())

    def test_quotient_needs_normal(self):
        G, C2, _ = _sym3()
        with self.assertRaises(NotNormalError):
            verify_quotient(G, all_family(G), C2)


class TestTrivialAction(unittest.TestCase):
    def test_bar_cohomology(self):
        Q = cyclic(2)
        C = FinCategory.group_category(Q)
        groups = bar_cohomology(Q, trivial_module(Q, category=C), 3)
        self.assertEqual([g.to_json() for g in groups], [[0], [], [2], []])
        groups = bar_cohomology(Q, sign_module(Q, C), 3)
        self.assertEqual([g.to_json() for g in groups], [[], [2], [], [2]])

    def test_z6_over_z3_trivial(self):
        G, N = _z6()
        report = verify_trivial_action(G, N, "trivial", 4)
        self.assertTrue(report.passed, report.failed())
        self.assertEqual(report.details["orbit"], [[0], [], [2], [], [2]])

    def test_z6_over_z3_sign(self):
        G, N = _z6()
        report = verify_trivial_action(G, N, "sign", 4)
        self.assertTrue(report.passed, report.failed())
        self.assertEqual(report.details["orbit"], [[], [2], [], [2], []])

    def test_regular(self):
        G, _, C3 = _sym3()
        report = verify_trivial_action(G, C3, "regular", 3)
        self.assertTrue(report.passed, report.failed())
        self.assertEqual(report.details["bar"], [[0], [], [], []])

    def test_unknown_coefficients(self):
        G, N = _z6()
        with self.assertRaises(UnsupportedInputError):
            verify_trivial_action(G, N, "adjoint")


class TestEquivariant(unittest.TestCase):
    def test_inverting_action(self):
        G, pi = cyclic(2), cyclic(3)
        act = GAction.from_generator_images(G, pi, {0: list(pi.inv)})
        report = equivariant_cd(pi, G, act, 3)
        self.assertEqual(report.checks["order"], 6)
        self.assertFalse(report.verdicts[1].le)

    def test_trivial_action_cross_check(self):
        G, pi = cyclic(2), cyclic(2)
        report = equivariant_cd(pi, G, GAction.trivial(G, pi), 3)
        check = report.checks["trivial_action"]
        self.assertTrue(check["verdicts_agree"])
        self.assertTrue(check["ext_agree"])
        self.assertEqual(check["ext"], [[0], [], [2], []])
        self.assertIsNone(report.value)


class TestReductions(unittest.TestCase):
    def test_proper_family_is_its_own_chain(self):
        G = symmetric(4)
        self.assertEqual(proper_reduction_chain(proper_family(G)), [G.whole])

    def test_chain(self):
        G, _, _ = _sym3()
        F = trivial_family(G)
        self.assertEqual([H.order for H in proper_reduction_chain(F)], [6, 3])
        report = verify_reduction(F, 2)
        self.assertTrue(report.passed, report.failed())

    def test_needs_proper(self):
        G = cyclic(4)
        with self.assertRaises(UnsupportedInputError):
            proper_reduction_chain(all_family(G))

    def test_simple_quotients(self):
        steps = simple_quotient_chain(symmetric(4))
        self.assertEqual(
            [s.to_json() for s in steps],
            [
                {"order": 24, "normal_order": 4, "quotient_order": 6},
                {"order": 6, "normal_order": 3, "quotient_order": 2},
            ],
        )

    def test_poset_bound(self):
        G, _, _ = _sym3()
        report = verify_poset_bound(proper_family(G), 2)
        self.assertTrue(report.passed, report.failed())
        self.assertEqual(report.details["poset_size"], 5)


if __name__ == "__main__":
    unittest.main()
