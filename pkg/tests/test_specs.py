import json
import logging
import tempfile
import unittest
from pathlib import Path

from bredon.config import Budgets
from bredon.exceptions import InputError, InvalidActionError, InvalidCategoryError
from bredon.jobs import execute
from bredon.specs import (
    BatchManifest,
    CoefficientSpec,
    FamilySpec,
    GroupSpec,
    InputResolver,
    JobSpec,
    PosetSpec,
    load_document,
    parse,
)

logging.basicConfig(level=logging.INFO)


def _resolver(**inputs):
    return InputResolver(JobSpec(command="subgroups", inputs=inputs), Budgets())


def _run(command, suite=None, options=None, **inputs):
    document = {"id": command, "command": command, "inputs": inputs}
    if suite is not None:
        document["suite"] = suite
    if options is not None:
        document["options"] = options
    return execute(parse(JobSpec, document))


class TestModels(unittest.TestCase):
    def test_validation_errors_are_input_errors(self):
        with self.assertRaises(InputError):
            parse(GroupSpec, {"degree": 0})
        with self.assertRaises(InputError):
            parse(GroupSpec, {"degree": 3, "order": 6})

    def test_group(self):
        G = parse(GroupSpec, {"degree": 3, "generators": [[1, 2, 0], [1, 0, 2]]}).build()
        self.assertEqual(G.order, 6)

    def test_family_seeds(self):
        with self.assertRaises(InputError):
            parse(FamilySpec, {"type": "generated"})
        with self.assertRaises(InputError):
            parse(FamilySpec, {"type": "proper", "seeds": [[[1, 0]]]})
        G = parse(GroupSpec, {"degree": 3, "generators": [[1, 2, 0], [1, 0, 2]]}).build()
        F = parse(FamilySpec, {"type": "generated", "seeds": [[[1, 2, 0]]]}).build(G)
        self.assertEqual(len(F), 2)

    def test_coefficients(self):
        with self.assertRaises(InputError):
            parse(CoefficientSpec, {"type": "free"})
        with self.assertRaises(InputError):
            parse(CoefficientSpec, {"type": "sign", "modulus": 2})
        with self.assertRaises(InputError):
            parse(CoefficientSpec, {"modulus": -1})
        spec = parse(CoefficientSpec, {"type": "free", "subgroup": {"generators": []}})
        self.assertEqual(spec.type, "free")

    def test_poset_is_closed_up(self):
        spec = parse(PosetSpec, {"elements": ["a", "b", "c"], "relations": [[0, 1], [1, 2]]})
        P = spec.build()
        self.assertTrue(P.leq[0][2])
        self.assertEqual(P.initial(), 0)

    def test_poset_errors(self):
        with self.assertRaises(InputError):
            parse(PosetSpec, {"elements": ["a"], "relations": [[0]]})
        with self.assertRaises(InputError):
            parse(PosetSpec, {"elements": ["a"], "relations": [[0, 3]]}).build()
        cycle = {"elements": ["a", "b"], "relations": [[0, 1], [1, 0]]}
        with self.assertRaises(InvalidCategoryError):
            parse(PosetSpec, cycle).build()

    def test_named_posets(self):
        self.assertEqual(len(parse(PosetSpec, {"type": "chain", "length": 3}).build()), 4)
        crown = parse(PosetSpec, {"type": "crown", "m": 2, "n": 3, "bottom": False})
        self.assertEqual(len(crown.build()), 5)

    def test_suite_only_for_verify(self):
        with self.assertRaises(InputError):
            parse(JobSpec, {"command": "verify"})
        with self.assertRaises(InputError):
            parse(JobSpec, {"command": "cd", "suite": "mainalg"})
        with self.assertRaises(InputError):
            parse(JobSpec, {"command": "cd", "inputs": {"colour": "red"}})
        job = parse(JobSpec, {"command": "verify", "suite": "all"})
        self.assertEqual(job.options.n_max, 3)

    def test_budget_overrides(self):
        job = parse(JobSpec, {"command": "cd", "options": {"budgets": {"workers": 4}}})
        budgets = job.budgets(Budgets(max_group_order=24))
        self.assertEqual(budgets.workers, 4)
        self.assertEqual(budgets.max_group_order, 24)

    def test_budgets_from_env(self):
        budgets = Budgets.from_env({"BREDON_WORKERS": "3", "BREDON_JOB_TIMEOUT": "2.5"})
        self.assertEqual(budgets.workers, 3)
        self.assertEqual(budgets.job_timeout, 2.5)
        self.assertEqual(budgets.max_group_order, 360)
        with self.assertRaises(InputError):
            Budgets.from_env({"BREDON_MAX_GROUP_ORDER": "many"})

    def test_unique_ids(self):
        jobs = [{"id": "a", "command": "cd"}, {"id": "a", "command": "h1"}]
        with self.assertRaises(InputError):
            parse(BatchManifest, {"jobs": jobs})


class TestLoading(unittest.TestCase):
    def test_inline(self):
        self.assertEqual(load_document('{"degree": 2}'), {"degree": 2})
        self.assertEqual(load_document({"degree": 2}), {"degree": 2})

    def test_file_relative_to_base(self):
        with tempfile.TemporaryDirectory() as tmp:
            Path(tmp, "g.json").write_text(json.dumps({"degree": 2, "generators": [[1, 0]]}))
            self.assertEqual(load_document("g.json", Path(tmp))["degree"], 2)

    def test_errors(self):
        with self.assertRaises(InputError):
            load_document("/nonexistent/group.json")
        with self.assertRaises(InputError):
            load_document("{not json")


class TestInputResolver(unittest.TestCase):
    def test_battery_and_inline_groups(self):
        self.assertEqual(_resolver(group="S3").group().order, 6)
        inline = '{"degree": 4, "generators": [[1, 2, 3, 0]]}'
        self.assertEqual(_resolver(group=inline).group().order, 4)

    def test_missing_input(self):
        with self.assertRaises(InputError):
            _resolver().group()

    def test_family_names(self):
        inputs = _resolver(group="s3")
        G = inputs.group()
        self.assertEqual(len(inputs.family(G)), 5)
        self.assertEqual(len(_resolver(family="all").family(G)), 6)

    def test_battery_action(self):
        act = _resolver(action="invert").action()
        self.assertEqual((act.actor.order, act.target.order), (2, 3))
        act = _resolver(action="invert", g="z2", pi="z3").action()
        self.assertEqual(act.target.order, 3)
        with self.assertRaises(InvalidActionError):
            _resolver(action="invert", g="z3", pi="z3").action()

    def test_inline_action(self):
        act = _resolver(action={"generator_images": {0: [0, 2, 1]}}, g="z2", pi="z3").action()
        act.validate()
        self.assertEqual(act.apply(1, 1), 2)

    def test_coefficients(self):
        self.assertEqual(_resolver().coefficients().type, "constant")
        self.assertEqual(_resolver(coefficients="sign").coefficients().type, "sign")


class TestExecute(unittest.TestCase):
    def test_subgroups(self):
        outcome = _run("subgroups", group="s3")
        self.assertEqual(outcome.exit_code, 0)
        self.assertEqual(outcome.result["subgroup_count"], 6)
        self.assertEqual(outcome.result["class_count"], 4)
        self.assertEqual(outcome.to_json()["status"], "pass")

    def test_cohomology(self):
        outcome = _run("cohomology", group="z2", family="trivial")
        self.assertEqual(outcome.result["ext"], [[0], [], [2], []])
        self.assertEqual(outcome.result["ext_text"][2], "Z/2")

    def test_h1(self):
        outcome = _run("h1", action="invert")
        self.assertEqual(outcome.exit_code, 0)
        self.assertEqual(outcome.result["class_count"], 1)

    def test_ereduce(self):
        outcome = _run("ereduce", poset={"type": "crown"})
        self.assertFalse(outcome.result["is_point"])
        self.assertTrue(outcome.result["cheng"]["passed"])

    def test_input_error(self):
        outcome = _run("subgroups", group="nope")
        self.assertEqual(outcome.exit_code, 2)
        self.assertEqual(outcome.error["category"], "input")
        self.assertEqual(outcome.result, {})

    def test_budget_is_indeterminate(self):
        options = {"budgets": {"max_family_classes": 5}}
        outcome = _run("families", options=options, group="s4")
        self.assertEqual(outcome.exit_code, 3)
        self.assertEqual(outcome.status, "indeterminate")

    def test_crown_needs_simple_group(self):
        self.assertEqual(_run("crown", group="s4").exit_code, 2)

    def test_verify_trivial_action(self):
        outcome = _run("verify", suite="trivial-action")
        self.assertEqual(outcome.exit_code, 0)
        self.assertEqual(outcome.result["report_count"], 2)
        self.assertTrue(outcome.result["passed"])


if __name__ == "__main__":
    unittest.main()
