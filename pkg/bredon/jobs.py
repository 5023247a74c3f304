"""
Running one :class:`~bredon.specs.JobSpec`.

:func:`execute` resolves the job's inputs, dispatches on its command and
wraps the outcome, including errors, in a :class:`JobResult` with the
exit code of the command-line interface.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from bredon.battery import (
    GROUPS,
    SMALL,
    battery_families,
    group_by_name,
    shapiro_instances,
    standard_families,
)
from bredon.config import DEFAULT_BUDGETS, Budgets
from bredon.dimension import (
    cd_report,
    equivariant_cd,
    verify_double_cosets,
    verify_mainalg,
    verify_quotient,
    verify_shapiro,
    verify_trivial_action,
)
from bredon.exceptions import BredonError, InputError
from bredon.family import all_families, family_generated, subgroup_poset
from bredon.nonab import h1, subconjugate_iff_principal
from bredon.orbitcat import OrbitCategory
from bredon.permgroup import (
    PermGroup,
    all_subgroups,
    conjugacy_classes_of_subgroups,
    cyclic,
    semidirect_product,
)
from bredon.posetred import (
    chain,
    cheng_check,
    crown,
    e_reduction,
    find_crown,
    from_subgroup_poset,
    verify_crown_survives,
)
from bredon.report import VerificationReport
from bredon.specs import InputResolver, JobSpec, RejectedJob
from bredon.zcat import constant_module, ext_groups

logger = logging.getLogger(__name__)

STATUS = {0: "pass", 1: "fail", 2: "input_error", 3: "indeterminate"}


@dataclass
class JobResult:
    """
    Outcome of one job.

    Attributes
    ----------
    job : JobSpec or RejectedJob
        A rejected manifest entry carries its document as written.
    exit_code : int
        0 pass, 1 verification failure, 2 input error, 3 indeterminate.
    result : dict
        The command's report; empty when the job raised.
    error : dict or None
        ``BredonError.to_json()`` of the error that stopped the job.
    """

    job: Union[JobSpec, RejectedJob]
    exit_code: int = 0
    result: Dict[str, Any] = field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None

    @property
    def status(self) -> str:
        return STATUS[self.exit_code]

    def to_json(self) -> dict:
        data = {
            "job": (
                self.job.model_dump(mode="json")
                if isinstance(self.job, JobSpec)
                else self.job.document
            ),
            "exit_code": self.exit_code,
            "status": self.status,
            "result": self.result,
        }
        if self.error is not None:
            data["error"] = self.error
        return data


def _group_json(G: PermGroup) -> dict:
    return {"name": G.name, "degree": G.degree, "order": G.order}


# _________________________ Commands ________________________


def _subgroups(inputs: InputResolver) -> dict:
    G = inputs.group()
    classes = conjugacy_classes_of_subgroups(G, inputs.budgets)
    return {
        "group": _group_json(G),
        "subgroup_count": len(all_subgroups(G, inputs.budgets)),
        "class_count": len(classes),
        "classes": [
            {"size": len(cls), **cls.representative.to_json()} for cls in classes
        ],
    }


def _families(inputs: InputResolver) -> dict:
    G = inputs.group()
    families = all_families(G, inputs.budgets)
    return {
        "group": _group_json(G),
        "count": len(families),
        "families": [F.to_json() for F in families],
    }


def _orbitcat(inputs: InputResolver) -> dict:
    G = inputs.group()
    F = inputs.family(G)
    orbit = OrbitCategory(F, inputs.job.options.skeleton)
    return {"group": _group_json(G), "family": F.to_json(), **orbit.to_json()}


def _cohomology(inputs: InputResolver) -> dict:
    G = inputs.group()
    F = inputs.family(G)
    orbit = OrbitCategory(F, inputs.job.options.skeleton)
    coefficients = inputs.coefficients()
    M = coefficients.build(orbit)
    groups = ext_groups(orbit.constant(), M, inputs.job.options.n_max, inputs.budgets)
    return {
        "group": _group_json(G),
        "family": F.to_json(),
        "coefficients": coefficients.model_dump(mode="json"),
        "ext": [g.to_json() for g in groups],
        "ext_text": [str(g) for g in groups],
    }


def _cd(inputs: InputResolver) -> dict:
    G = inputs.group()
    F = inputs.family(G)
    return cd_report(G, F, inputs.job.options.n_max, inputs.budgets).to_json()


def _h1(inputs: InputResolver) -> dict:
    act = inputs.action()
    data = h1(act, inputs.budgets).to_json()
    complements = subconjugate_iff_principal(act, act.actor.whole, inputs.budgets)
    data["complements"] = complements.to_json()
    data["exit_code"] = complements.exit_code
    return data


def _semidirect(inputs: InputResolver) -> dict:
    act = inputs.action()
    product = semidirect_product(act.target, act.actor, act)
    family = family_generated(product.group, [product.actor_subgroup], inputs.budgets)
    report = equivariant_cd(
        act.target, act.actor, act, inputs.job.options.n_max, inputs.budgets
    )
    return {
        "group": _group_json(product.group),
        "generators": [list(g) for g in product.group.generators],
        "family": family.to_json(),
        "cd": report.to_json(),
    }


def _ereduce(inputs: InputResolver) -> dict:
    options = inputs.job.options
    if inputs.has("poset"):
        P = inputs.poset().build()
    else:
        G = inputs.group()
        P = from_subgroup_poset(subgroup_poset(inputs.family(G)))
    E = e_reduction(P, options.regime, options.seed)
    data = {
        "input": P.to_json(),
        "reduced": E.to_json(),
        "is_point": E.is_point(),
        "regime": options.regime,
    }
    if P.initial() is not None:
        data["cheng"] = cheng_check(P, inputs.budgets).to_json()
    return data


def _crown(inputs: InputResolver) -> dict:
    G = inputs.group() if inputs.has("group") else group_by_name("a5")
    return {"group": _group_json(G), "witness": find_crown(G, inputs.budgets).to_json()}


# ____________________ Verification suites __________________


def _battery_groups(
    inputs: InputResolver, names: Sequence[str] = tuple(GROUPS)
) -> List[Tuple[str, PermGroup]]:
    """The input group, or the named battery groups."""
    if inputs.has("group"):
        raw = inputs.job.inputs["group"]
        name = raw.lower() if isinstance(raw, str) and raw.lower() in GROUPS else ""
        return [(name, inputs.group())]
    return [(name, group_by_name(name)) for name in names]


def _suite_mainalg(inputs: InputResolver) -> List[VerificationReport]:
    reports = []
    for name, G in _battery_groups(inputs):
        families = (
            battery_families(name, G, inputs.budgets)
            if name
            else all_families(G, inputs.budgets)
        )
        if inputs.has("family"):
            families = [inputs.family(G)]
        reports.append(verify_mainalg(G, families, inputs.budgets))
    return reports


def _suite_shapiro(inputs: InputResolver) -> List[VerificationReport]:
    n_max = inputs.job.options.n_max
    budgets = inputs.budgets
    if inputs.has("subgroup"):
        G = inputs.group()
        F = inputs.family(G)
        orbit = OrbitCategory(F)
        H = inputs.subgroup(G)
        sub, _ = orbit.restriction(H)
        M = inputs.coefficients().build(sub)
        return [verify_shapiro(G, F, H, M, n_max, budgets, orbit)]
    reports = []
    for k, (name, G, F, H) in enumerate(shapiro_instances(budgets)):
        orbit = OrbitCategory(F)
        sub, _ = orbit.restriction(H)
        # alternate between Z̄ and Z/2 coefficients
        M = constant_module(sub.category, 2 * (k % 2))
        report = verify_shapiro(G, F, H, M, n_max, budgets, orbit)
        report.details.update(group=name, family=F.name, coefficients="Z/2" if k % 2 else "Z")
        reports.append(report)
    return reports


def _suite_quotient(inputs: InputResolver) -> List[VerificationReport]:
    n_max = inputs.job.options.n_max
    budgets = inputs.budgets
    if inputs.has("normal"):
        G = inputs.group()
        F = inputs.family(G)
        return [verify_quotient(G, F, inputs.subgroup(G, "normal"), n_max, budgets)]
    reports = []
    for name in SMALL:
        G = group_by_name(name)
        for N in all_subgroups(G, budgets):
            if N.is_trivial() or N.is_whole() or not N.is_normal():
                continue
            families = standard_families(G, budgets)
            generated = family_generated(G, [N], budgets)
            if generated not in families:
                families.append(generated)
            for F in families:
                if N in F:
                    report = verify_quotient(G, F, N, n_max, budgets)
                    report.details.update(group=name, family=F.name)
                    reports.append(report)
    return reports


def _suite_trivial_action(inputs: InputResolver) -> List[VerificationReport]:
    budgets = inputs.budgets
    options = inputs.job.options
    n_max = options.n_max if "n_max" in options.model_fields_set else 4
    if inputs.has("normal"):
        G = inputs.group()
        N = inputs.subgroup(G, "normal")
        kind = inputs.coefficients().type
        if kind not in ("trivial", "sign", "regular"):
            raise InputError("Trivial-action coefficients are trivial, sign or regular")
        return [verify_trivial_action(G, N, kind, n_max, budgets)]
    G = cyclic(6)
    N = G.subgroup([[(i + 2) % 6 for i in range(6)]])
    return [
        verify_trivial_action(G, N, kind, n_max, budgets) for kind in ("trivial", "sign")
    ]


def _suite_doublecoset(inputs: InputResolver) -> List[VerificationReport]:
    reports = []
    for name, G in _battery_groups(inputs, SMALL):
        if inputs.has("family"):
            families = [inputs.family(G)]
        else:
            families = standard_families(G, inputs.budgets)
        for F in families:
            report = verify_double_cosets(F, inputs.budgets)
            report.details.update(group=name or G.name, family=F.name)
            reports.append(report)
    return reports


def _suite_crown(inputs: InputResolver) -> List[VerificationReport]:
    budgets = inputs.budgets
    seed = inputs.job.options.seed
    G = inputs.group() if inputs.has("group") else group_by_name("a5")
    reports = [
        verify_crown_survives(
            G, budgets, direct=inputs.job.options.direct, seeds=range(seed, seed + 10)
        )
    ]
    posets = [chain(k) for k in range(5)]
    posets += [crown(m, n) for m in range(1, 4) for n in range(1, 4)]
    for name in SMALL:
        H = group_by_name(name)
        for F in standard_families(H, budgets):
            posets.append(from_subgroup_poset(subgroup_poset(F)))
    for P in posets:
        reports.append(cheng_check(P, budgets))
    return reports


SUITES: Dict[str, Callable[[InputResolver], List[VerificationReport]]] = {
    "mainalg": _suite_mainalg,
    "shapiro": _suite_shapiro,
    "quotient": _suite_quotient,
    "trivial-action": _suite_trivial_action,
    "doublecoset": _suite_doublecoset,
    "crown": _suite_crown,
}


def _verify(inputs: InputResolver) -> dict:
    suite = inputs.job.suite
    names = list(SUITES) if suite == "all" else [suite]
    reports = []
    for name in names:
        reports += SUITES[name](inputs)
    return {
        "suite": suite,
        "passed": _combine([r.passed for r in reports]),
        "exit_code": max((r.exit_code for r in reports), default=0),
        "report_count": len(reports),
        "reports": [r.to_json() for r in reports],
    }


def _combine(outcomes: List[Optional[bool]]) -> Optional[bool]:
    if any(o is False for o in outcomes):
        return False
    if any(o is None for o in outcomes):
        return None
    return True


COMMANDS: Dict[str, Callable[[InputResolver], dict]] = {
    "subgroups": _subgroups,
    "families": _families,
    "orbitcat": _orbitcat,
    "cohomology": _cohomology,
    "cd": _cd,
    "h1": _h1,
    "semidirect": _semidirect,
    "ereduce": _ereduce,
    "crown": _crown,
    "verify": _verify,
}


def execute(
    job: JobSpec, budgets: Budgets = DEFAULT_BUDGETS, base: Optional[Path] = None
) -> JobResult:
    """Runs ``job``; errors become the result's exit code and error report.

    Errors that are not :class:`BredonError` propagate.
    """
    outcome = JobResult(job)
    try:
        job_budgets = job.budgets(budgets)
        outcome.result = COMMANDS[job.command](InputResolver(job, job_budgets, base))
    except BredonError as exc:
        logger.info("Job %s stopped: %s", job.id, exc)
        outcome.exit_code = exc.exit_code
        outcome.error = exc.to_json()
        return outcome
    outcome.exit_code = outcome.result.get("exit_code", 0)
    logger.info("Job %s finished with status %s", job.id, outcome.status)
    return outcome
