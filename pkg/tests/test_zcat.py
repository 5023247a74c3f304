import logging
import unittest

from bredon.config import Budgets
from bredon.exceptions import (
    BudgetExceededError,
    InvalidCategoryError,
    InvalidModuleError,
    UnsupportedInputError,
)
from bredon.permgroup import cyclic, symmetric
from bredon.smith import AbGroupInvariants
from bredon.zcat import (
    FinCategory,
    FreeModule,
    constant_module,
    direct_sum,
    ext_groups,
    free_cover,
    free_module,
    free_resolution,
    group_module,
    hom_group,
    is_projective,
    regular_module,
    sign_module,
    trivial_module,
)

logging.basicConfig(level=logging.INFO)


def _factors(groups):
    return [list(g.factors) for g in groups]


def _chain(n):
    labels = [chr(ord("a") + i) for i in range(n)]
    return FinCategory.from_poset(labels, [[i <= j for j in range(n)] for i in range(n)])


class TestFinCategory(unittest.TestCase):
    def test_poset_category(self):
        C = _chain(3)
        self.assertEqual(C.n_objects, 3)
        self.assertEqual(C.n_arrows, 6)
        self.assertEqual(C.terminal_object(), 2)
        self.assertEqual(C.reach, [3, 2, 1])

    def test_group_category(self):
        G = symmetric(3)
        C = FinCategory.group_category(G)
        self.assertEqual(C.n_objects, 1)
        self.assertEqual(C.n_arrows, 6)
        self.assertEqual(C.terminal_object(), None)

    def test_missing_composite(self):
        with self.assertRaises(InvalidCategoryError):
            FinCategory(["a", "b"], [(0, 0), (1, 1), (0, 1)], {(0, 0): 0, (1, 1): 1}, [0, 1])

    def test_identity_not_neutral(self):
        arrows = [(0, 0), (0, 0)]
        composition = {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 1}
        with self.assertRaises(InvalidCategoryError):
            FinCategory(["a"], arrows, composition, [0])


class TestModules(unittest.TestCase):
    def test_constant(self):
        C = FinCategory.group_category(cyclic(3))
        M = constant_module(C)
        M.validate()
        self.assertEqual(M.values(), [AbGroupInvariants((0,))])
        self.assertTrue(M.is_lattice)
        torsion = constant_module(C, 4)
        torsion.validate()
        self.assertEqual(torsion.values(), [AbGroupInvariants((4,))])
        self.assertFalse(torsion.is_lattice)

    def test_representables(self):
        C = _chain(2)
        F = free_module(C, 1)
        F.validate()
        self.assertEqual(F.ranks, [1, 1])
        self.assertEqual(free_module(C, 0).ranks, [1, 0])
        self.assertEqual(regular_module(cyclic(4)).ranks, [4])

    def test_free_module_with_several_summands(self):
        F = FreeModule(_chain(2), [0, 1, 1])
        F.validate()
        self.assertEqual(F.ranks, [3, 2])
        self.assertEqual(F.rank, 3)
        self.assertEqual(F.generator_vector(1), [1, 0])
        self.assertEqual(F.generator_vector(2), [0, 1])
        self.assertEqual(F.generator_vector(0), [1, 0, 0])

    def test_sign_module(self):
        M = sign_module(symmetric(3))
        M.validate()
        self.assertEqual(M.ranks, [1])

    def test_not_a_representation(self):
        with self.assertRaises(InvalidModuleError):
            group_module(cyclic(2), [[[2]]])

    def test_direct_sum(self):
        G = cyclic(2)
        C = FinCategory.group_category(G)
        summands = [trivial_module(G, category=C), constant_module(C, 3), regular_module(G, C)]
        M = direct_sum(summands)
        M.validate()
        self.assertEqual(M.ranks, [4])
        self.assertEqual(M.value(0), AbGroupInvariants((3, 0, 0, 0)))

    def test_cover_is_onto(self):
        C = _chain(2)
        cover = free_cover(constant_module(C))
        self.assertEqual(cover.free.generators, [1])
        cover.map.validate()


class TestResolutions(unittest.TestCase):
    def test_free_module_resolves_in_one_step(self):
        C = FinCategory.group_category(cyclic(3))
        resolution = free_resolution(free_module(C, 0), 3)
        self.assertEqual(resolution.length, 0)

    def test_constant_over_chain_is_free(self):
        C = _chain(2)
        resolution = free_resolution(constant_module(C), 3)
        self.assertEqual(resolution.length, 0)
        self.assertEqual(resolution.generator_objects(), [[1]])

    def test_torsion_is_not_resolved(self):
        C = FinCategory.group_category(cyclic(2))
        with self.assertRaises(UnsupportedInputError):
            free_resolution(constant_module(C, 2), 1)

    def test_budget(self):
        C = FinCategory.group_category(cyclic(2))
        with self.assertRaises(BudgetExceededError):
            free_resolution(constant_module(C), 3, Budgets(max_resolution_rank=1))


class TestExt(unittest.TestCase):
    def test_cyclic_group_cohomology(self):
        for n in (2, 3, 5):
            C = FinCategory.group_category(cyclic(n))
            Z = constant_module(C)
            self.assertEqual(_factors(ext_groups(Z, Z, 4)), [[0], [], [n], [], [n]])

    def test_mod_two_coefficients(self):
        C = FinCategory.group_category(cyclic(2))
        groups = ext_groups(constant_module(C), constant_module(C, 2), 3)
        self.assertEqual(_factors(groups), [[2], [2], [2], [2]])

    def test_sign_coefficients(self):
        G = cyclic(2)
        C = FinCategory.group_category(G)
        groups = ext_groups(constant_module(C), sign_module(G, C), 3)
        self.assertEqual(_factors(groups), [[], [2], [], [2]])

    def test_sym3(self):
        C = FinCategory.group_category(symmetric(3))
        Z = constant_module(C)
        # H^2(Sym(3); Z) is the abelianization, H^4 has order 6
        self.assertEqual(_factors(ext_groups(Z, Z, 4)), [[0], [], [2], [], [6]])

    def test_ext_vanishes_over_chain(self):
        C = _chain(3)
        Z = constant_module(C)
        self.assertEqual(_factors(ext_groups(Z, Z, 3)), [[0], [], [], []])

    def test_ext_ignores_object_order(self):
        # two minima below two maxima: the nerve is a circle
        leq = [
            [True, False, True, True],
            [False, True, True, True],
            [False, False, True, False],
            [False, False, False, True],
        ]
        C = FinCategory.from_poset(["a", "b", "c", "d"], leq)
        Z = constant_module(C)
        expected = [[0], [0], [], []]
        self.assertEqual(_factors(ext_groups(Z, Z, 3)), expected)
        for order in ([3, 2, 1, 0], [2, 0, 3, 1]):
            groups = ext_groups(Z, Z, 3, object_order=order)
            self.assertEqual(_factors(groups), expected)


class TestHomAndProjectivity(unittest.TestCase):
    def test_hom(self):
        C = FinCategory.group_category(cyclic(2))
        Z = constant_module(C)
        result = hom_group(Z, Z)
        self.assertEqual(result.invariants, AbGroupInvariants((0,)))
        self.assertEqual(len(result.generators), 1)

    def test_regular_is_projective(self):
        G = cyclic(3)
        result = is_projective(regular_module(G))
        self.assertTrue(result.projective)
        self.assertIsNotNone(result.section)

    def test_constant_is_not_projective(self):
        C = FinCategory.group_category(cyclic(2))
        result = is_projective(constant_module(C))
        self.assertFalse(result.projective)
        self.assertIsNotNone(result.certificate)
        self.assertIn("certificate", result.to_json())

    def test_projective_over_poset_with_top(self):
        C = _chain(2)
        self.assertTrue(is_projective(constant_module(C)).projective)


if __name__ == "__main__":
    unittest.main()
