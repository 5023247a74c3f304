"""
JSON input documents, validated with pydantic.

Every model forbids unknown keys. Inputs may be given inline, as paths to
JSON files, or (for groups and actions) as names from the battery.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union, get_args

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from bredon.battery import ACTIONS, GROUPS, group_by_name
from bredon.config import DEFAULT_BUDGETS, DEFAULT_N_MAX, Budgets
from bredon.exceptions import InputError, InvalidActionError, UnsupportedInputError
from bredon.family import Family, all_family, family_generated, proper_family, trivial_family
from bredon.permgroup import GAction, PermGroup, Subgroup
from bredon.posetred import FinPoset, chain, crown, point
from bredon.zcat import CatModule, constant_module

logger = logging.getLogger(__name__)

Command = Literal[
    "subgroups",
    "families",
    "orbitcat",
    "cohomology",
    "cd",
    "h1",
    "semidirect",
    "ereduce",
    "crown",
    "verify",
]
Suite = Literal["mainalg", "shapiro", "quotient", "trivial-action", "doublecoset", "crown", "all"]
COMMANDS = get_args(Command)
SUITES = get_args(Suite)
INPUT_KEYS = (
    "group",
    "family",
    "subgroup",
    "normal",
    "coefficients",
    "pi",
    "g",
    "action",
    "poset",
)


class Spec(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GroupSpec(Spec):
    """``{"degree": d, "generators": [[img_0, ..., img_{d-1}], ...]}``."""

    degree: int = Field(ge=1)
    generators: List[List[int]] = []
    name: Optional[str] = None

    def build(self) -> PermGroup:
        return PermGroup(self.degree, self.generators, self.name)


class SubgroupSpec(Spec):
    """A subgroup by generating permutations of the ambient group."""

    generators: List[List[int]] = []

    def build(self, G: PermGroup) -> Subgroup:
        return G.subgroup(self.generators)


class ActionSpec(Spec):
    """``{"generator_images": {g_index: [automorphism of π]}}``.

    Each image permutes the element indices of ``π``; generators that are
    not listed act trivially.
    """

    generator_images: Dict[int, List[int]] = {}

    def build(self, G: PermGroup, pi: PermGroup) -> GAction:
        return GAction.from_generator_images(G, pi, self.generator_images)


class FamilySpec(Spec):
    type: Literal["generated", "proper", "all", "trivial"]
    seeds: List[List[List[int]]] = []

    @model_validator(mode="after")
    def _seeds_only_when_generated(self) -> "FamilySpec":
        if self.type == "generated" and not self.seeds:
            raise ValueError("a generated family needs seeds")
        if self.type != "generated" and self.seeds:
            raise ValueError("seeds are only allowed for generated families")
        return self

    def build(self, G: PermGroup, budgets: Budgets = DEFAULT_BUDGETS) -> Family:
        if self.type == "proper":
            return proper_family(G, budgets)
        if self.type == "all":
            return all_family(G, budgets)
        if self.type == "trivial":
            return trivial_family(G)
        seeds = [G.subgroup(gens) for gens in self.seeds]
        return family_generated(G, seeds, budgets)


class CoefficientSpec(Spec):
    """``constant`` is ``Z`` (``modulus`` 0) or ``Z/m``; ``free`` is the
    representable at ``subgroup``; the remaining kinds are modules over the
    quotient group for ``verify trivial-action``."""

    type: Literal["constant", "free", "trivial", "sign", "regular"] = "constant"
    modulus: int = Field(default=0, ge=0)
    subgroup: Optional[SubgroupSpec] = None

    @model_validator(mode="after")
    def _subgroup_only_when_free(self) -> "CoefficientSpec":
        if (self.type == "free") != (self.subgroup is not None):
            raise ValueError("a subgroup is given exactly for free coefficients")
        if self.modulus and self.type != "constant":
            raise ValueError("a modulus is only allowed for constant coefficients")
        return self

    def build(self, orbit: Any) -> CatModule:
        """The module over an :class:`~bredon.orbitcat.OrbitCategory`."""
        if self.type == "constant":
            return constant_module(orbit.category, self.modulus)
        if self.type == "free":
            return orbit.free(self.subgroup.build(orbit.group))
        raise UnsupportedInputError(
            "Coefficients %r are defined over a quotient group only", self.type
        )


class PosetSpec(Spec):
    """A poset by ``elements`` and ``relations`` (pairs ``[i, j]`` with
    ``i <= j``, closed up here), or one of the named shapes."""

    type: Literal["explicit", "chain", "crown", "point"] = "explicit"
    elements: List[str] = []
    relations: List[List[int]] = []
    length: int = Field(default=1, ge=0)
    m: int = Field(default=2, ge=1)
    n: int = Field(default=2, ge=1)
    bottom: bool = True

    @field_validator("relations")
    @classmethod
    def _pairs(cls, value: List[List[int]]) -> List[List[int]]:
        if any(len(pair) != 2 for pair in value):
            raise ValueError("relations are pairs [i, j]")
        return value

    def build(self) -> FinPoset:
        if self.type == "chain":
            return chain(self.length)
        if self.type == "crown":
            return crown(self.m, self.n, self.bottom)
        if self.type == "point":
            return point()
        size = len(self.elements)
        leq = [[i == j for j in range(size)] for i in range(size)]
        for i, j in self.relations:
            if not (0 <= i < size and 0 <= j < size):
                raise InputError("Relation %s, %s is out of range", i, j)
            leq[i][j] = True
        for k in range(size):
            for i in range(size):
                if leq[i][k]:
                    for j in range(size):
                        if leq[k][j]:
                            leq[i][j] = True
        poset = FinPoset(list(self.elements), leq)
        poset.validate()
        return poset


class BudgetOverrides(Spec):
    max_group_order: Optional[int] = Field(default=None, ge=1)
    max_family_classes: Optional[int] = Field(default=None, ge=1)
    max_resolution_rank: Optional[int] = Field(default=None, ge=1)
    max_cocycle_candidates: Optional[int] = Field(default=None, ge=1)
    exhaustive_cocycle_order: Optional[int] = Field(default=None, ge=0)
    max_pointed_objects: Optional[int] = Field(default=None, ge=1)
    job_timeout: Optional[float] = Field(default=None, gt=0)
    workers: Optional[int] = Field(default=None, ge=1)

    def apply(self, budgets: Budgets) -> Budgets:
        return budgets.merged(**self.model_dump())


class JobOptions(Spec):
    n_max: int = Field(default=DEFAULT_N_MAX, ge=0)
    skeleton: bool = True
    budgets: BudgetOverrides = BudgetOverrides()
    output: Optional[str] = None
    seed: int = 0
    regime: Literal["canonical", "random", "depth_one_first"] = "canonical"
    direct: bool = False


InputValue = Union[str, Dict[str, Any]]


class JobSpec(Spec):
    """One command with its inputs and options.

    Inputs are battery names, paths to JSON files, or inline JSON objects.
    """

    id: str = "job"
    command: Command
    suite: Optional[Suite] = None
    inputs: Dict[str, InputValue] = {}
    options: JobOptions = JobOptions()

    @field_validator("inputs")
    @classmethod
    def _known_inputs(cls, value: Dict[str, InputValue]) -> Dict[str, InputValue]:
        unknown = set(value) - set(INPUT_KEYS)
        if unknown:
            raise ValueError(f"unknown inputs {sorted(unknown)}")
        return value

    @model_validator(mode="after")
    def _suite_for_verify(self) -> "JobSpec":
        if (self.command == "verify") != (self.suite is not None):
            raise ValueError("a suite is given exactly for the verify command")
        return self

    def budgets(self, base: Budgets) -> Budgets:
        return self.options.budgets.apply(base)


@dataclass(frozen=True)
class RejectedJob:
    """A manifest entry that is not a valid job, kept as written."""

    id: str
    document: Any


def entry_id(entry: Any, position: int) -> str:
    """The id a manifest entry is reported under, valid or not."""
    if isinstance(entry, JobSpec):
        return entry.id
    if isinstance(entry, dict) and isinstance(entry.get("id", "job"), str):
        return entry.get("id", "job")
    return f"job-{position}"


class BatchManifest(Spec):
    """``{"jobs": [...]}`` with unique job ids.

    Entries are validated one at a time by :meth:`entries`, so a malformed
    job is reported on its own and the others still run.
    """

    jobs: List[Any] = []

    @field_validator("jobs")
    @classmethod
    def _unique_ids(cls, value: List[Any]) -> List[Any]:
        ids = [entry_id(entry, k) for k, entry in enumerate(value)]
        if len(ids) != len(set(ids)):
            raise ValueError("job ids must be unique")
        return value

    def entries(self) -> List[Tuple[Union[JobSpec, RejectedJob], Optional[InputError]]]:
        entries: List[Tuple[Union[JobSpec, RejectedJob], Optional[InputError]]] = []
        for k, entry in enumerate(self.jobs):
            if isinstance(entry, JobSpec):
                entries.append((entry, None))
                continue
            try:
                entries.append((parse(JobSpec, entry), None))
            except InputError as exc:
                logger.info("Manifest entry %s rejected: %s", k, exc)
                entries.append((RejectedJob(entry_id(entry, k), entry), exc))
        return entries

# ________________________ Loading __________________________


def load_document(value: InputValue, base: Optional[Path] = None) -> Any:
    """An inline document as is; a string as inline JSON or a file path.

    Raises:
        InputError: If the file is missing or not valid JSON.
    """
    if not isinstance(value, str):
        return value
    text = value.strip()
    if text.startswith("{") or text.startswith("["):
        source = text
    else:
        path = Path(value)
        if base is not None and not path.is_absolute():
            path = base / path
        try:
            source = path.read_text()
        except OSError as exc:
            raise InputError("Cannot read %s: %s", path, exc.strerror)
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise InputError("Invalid JSON in %s: %s", value, exc.msg)


def parse(model: type, document: Any) -> Any:
    """``model.model_validate`` with validation errors as :class:`InputError`."""
    try:
        return model.model_validate(document)
    except ValidationError as exc:
        raise InputError("Invalid %s: %s", model.__name__, exc.errors(include_url=False))


class InputResolver:
    """Builds the algebraic objects named by a job's inputs."""

    def __init__(self, job: JobSpec, budgets: Budgets, base: Optional[Path] = None) -> None:
        self.job = job
        self.budgets = budgets
        self.base = base

    def _raw(self, key: str) -> InputValue:
        try:
            return self.job.inputs[key]
        except KeyError:
            raise InputError("Command %s needs the input %r", self.job.command, key)

    def has(self, key: str) -> bool:
        return key in self.job.inputs

    def group(self, key: str = "group") -> PermGroup:
        value = self._raw(key)
        if isinstance(value, str) and value.lower() in GROUPS:
            return group_by_name(value)
        return parse(GroupSpec, load_document(value, self.base)).build()

    def family(self, G: PermGroup, default: str = "proper") -> Family:
        value = self.job.inputs.get("family", default)
        if isinstance(value, str) and value in ("proper", "all", "trivial"):
            value = {"type": value}
        return parse(FamilySpec, load_document(value, self.base)).build(G, self.budgets)

    def subgroup(self, G: PermGroup, key: str = "subgroup") -> Subgroup:
        return parse(SubgroupSpec, load_document(self._raw(key), self.base)).build(G)

    def action(self) -> GAction:
        """The action of input ``g`` on input ``pi``.

        A battery action brings its own groups; if ``g`` and ``pi`` are
        given as well, its images are checked against them.
        """
        value = self._raw("action")
        if isinstance(value, str) and value in ACTIONS:
            act = ACTIONS[value]()
            if not (self.has("g") or self.has("pi")):
                return act
            G, pi = self.group("g"), self.group("pi")
            if act.actor.order != G.order or act.target.order != pi.order:
                raise InvalidActionError("Action %r is not between these groups", value)
            act = GAction(G, pi, act.images)
            act.validate()
            return act
        G, pi = self.group("g"), self.group("pi")
        return parse(ActionSpec, load_document(value, self.base)).build(G, pi)

    def coefficients(self) -> CoefficientSpec:
        value = self.job.inputs.get("coefficients", {"type": "constant"})
        if isinstance(value, str) and value in ("constant", "trivial", "sign", "regular"):
            value = {"type": value}
        return parse(CoefficientSpec, load_document(value, self.base))

    def poset(self) -> PosetSpec:
        return parse(PosetSpec, load_document(self._raw("poset"), self.base))

