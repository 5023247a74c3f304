"""
Bounded cohomological dimension and the consistency checks built on it.

``cd_F(Γ) <= n`` is decided by resolving ``Z̄`` over ``O_F(Γ)`` and asking
whether the ``n``-th syzygy is projective. Every answer is a verdict for a
finite window of degrees; a group whose dimension exceeds the window is
reported with a lower bound only.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Union

from bredon.config import DEFAULT_BUDGETS, DEFAULT_N_MAX, Budgets
from bredon.exceptions import (
    BudgetExceededError,
    InvalidModuleError,
    NotNormalError,
    UnsupportedInputError,
    VerificationError,
)
from bredon.family import (
    Family,
    all_families,
    family_generated,
    intersect_with_subgroup,
    is_proper,
    proper_family,
    quotient_family,
    subgroup_poset,
)
from bredon.orbitcat import (
    OrbitCategory,
    coinduce,
    double_coset_decomposition,
    pointed_orbit_category,
    pushforward_of_free,
    restrict,
    trivial_action_pair,
)
from bredon.permgroup import (
    GAction,
    PermGroup,
    Quotient,
    Subgroup,
    all_subgroups,
    conjugacy_classes_of_subgroups,
    double_cosets,
    proper_normal_subgroup,
    quotient_group,
    semidirect_product,
)
from bredon.report import VerificationReport
from bredon.smith import AbGroupInvariants, kernel_basis, subquotient, transpose
from bredon.typing import Matrix
from bredon.zcat import (
    CatModule,
    FinCategory,
    ProjectivityResult,
    Resolution,
    constant_module,
    ext_groups,
    free_map,
    free_module,
    free_resolution,
    hom_group,
    is_projective,
    regular_module,
    sign_module,
    trivial_module,
)

logger = logging.getLogger(__name__)


# _________________________ Verdicts ________________________


@dataclass
class CdVerdict:
    """
    Whether ``cd <= n``, with the projectivity certificate of the syzygy.

    Attributes
    ----------
    n : int
    le : bool
    projectivity : ProjectivityResult
        A splitting when ``le`` holds, an infeasibility witness otherwise.
    """

    n: int
    le: bool
    projectivity: ProjectivityResult

    def to_json(self) -> dict:
        return {"n": self.n, "le": self.le, "certificate": self.projectivity.to_json()}


def _syzygy_verdict(resolution: Resolution, n: int, budgets: Budgets) -> CdVerdict:
    if n > 0 and n - 1 >= len(resolution.kernels):
        # resolution stopped early: the syzygy is zero
        return CdVerdict(n, True, ProjectivityResult(True))
    syzygy = resolution.syzygy(n)
    if not any(syzygy.ranks):
        return CdVerdict(n, True, ProjectivityResult(True))
    result = is_projective(syzygy, budgets)
    return CdVerdict(n, result.projective, result)


def category_cd_le(
    C: FinCategory,
    n: int,
    budgets: Budgets = DEFAULT_BUDGETS,
    object_order: Optional[Sequence[int]] = None,
) -> CdVerdict:
    """Decides whether ``Z̄`` has a projective resolution of length ``n``
    over ``C``.

    Raises:
        BudgetExceededError: If a resolution stage is too large.
    """
    Z = constant_module(C)
    resolution = free_resolution(Z, max(n - 1, 0), budgets, object_order) if n else None
    if resolution is None:
        result = is_projective(Z, budgets)
        return CdVerdict(0, result.projective, result)
    return _syzygy_verdict(resolution, n, budgets)


def cd_le(
    G: PermGroup,
    F: Family,
    n: int,
    budgets: Budgets = DEFAULT_BUDGETS,
    orbit: Optional[OrbitCategory] = None,
) -> CdVerdict:
    """``cd_F(Γ) <= n`` over the skeletal orbit category.

    Raises:
        BudgetExceededError: The verdict is indeterminate within budget.
    """
    if F.group is not G:
        raise UnsupportedInputError("Family does not belong to the group")
    orbit = orbit or OrbitCategory(F)
    verdict = category_cd_le(orbit.category, n, budgets)
    logger.info("cd_F(%s) <= %s: %s", G.name or "G", n, verdict.le)
    return verdict


@dataclass
class CdReport:
    """
    Verdicts ``cd <= n`` for ``n = 0..n_max``.

    ``value`` is the dimension when the window pins it; otherwise
    ``lower_bound`` is ``n_max + 1``.
    """

    group: str
    family: Dict[str, Any]
    verdicts: List[CdVerdict]
    value: Optional[int] = None
    lower_bound: int = 0
    checks: Dict[str, Any] = field(default_factory=dict)

    @property
    def n_max(self) -> int:
        return len(self.verdicts) - 1

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "family": self.family,
            "verdicts": [{"n": v.n, "le": v.le} for v in self.verdicts],
            "certificates": [v.to_json() for v in self.verdicts],
            "value": self.value,
            "lower_bound": self.lower_bound,
            "checks": self.checks,
        }


def category_cd_report(
    C: FinCategory, n_max: int = DEFAULT_N_MAX, budgets: Budgets = DEFAULT_BUDGETS
) -> List[CdVerdict]:
    """One resolution of ``Z̄``, then the syzygies in increasing degree.

    After the first projective syzygy every later verdict holds as well.
    """
    Z = constant_module(C)
    verdicts: List[CdVerdict] = []
    first = is_projective(Z, budgets)
    verdicts.append(CdVerdict(0, first.projective, first))
    if first.projective or n_max == 0:
        verdicts += [CdVerdict(n, True, first) for n in range(1, n_max + 1)]
        return verdicts
    resolution = free_resolution(Z, n_max - 1, budgets)
    for n in range(1, n_max + 1):
        if verdicts[-1].le:
            verdicts.append(CdVerdict(n, True, verdicts[-1].projectivity))
        else:
            verdicts.append(_syzygy_verdict(resolution, n, budgets))
    return verdicts


def _pin(verdicts: Sequence[CdVerdict]) -> Optional[int]:
    return next((v.n for v in verdicts if v.le), None)


def cd_report(
    G: PermGroup, F: Family, n_max: int = DEFAULT_N_MAX, budgets: Budgets = DEFAULT_BUDGETS
) -> CdReport:
    """Runs :func:`cd_le` for every ``n <= n_max`` on one resolution.

    Raises:
        VerificationError: If the ``cd = 0`` verdict disagrees with ``Γ ∈ F``.
    """
    orbit = OrbitCategory(F)
    verdicts = category_cd_report(orbit.category, n_max, budgets)
    if verdicts[0].le != (not is_proper(F)):
        raise VerificationError("cd = 0 verdict disagrees with membership of the group")
    value = _pin(verdicts)
    report = CdReport(
        G.name or "G",
        F.to_json(),
        verdicts,
        value,
        value if value is not None else n_max + 1,
    )
    logger.info(
        "cd report for %s: value=%s lower_bound=%s", report.group, value, report.lower_bound
    )
    return report


def _invariants(groups: Sequence[AbGroupInvariants]) -> List[List[int]]:
    return [g.to_json() for g in groups]


# ______________________ Main theorem sweep _________________


def verify_mainalg(
    G: PermGroup,
    families: Optional[Sequence[Family]] = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> VerificationReport:
    """``cd_F(Γ) >= 2`` for every proper family, and ``cd = 0`` exactly for
    families containing ``Γ``.

    Families over budget are reported indeterminate; the sweep goes on.
    """
    if families is None:
        families = all_families(G, budgets)
    report = VerificationReport("mainalg", True, details={"group": G.name, "families": 0})
    for F in families:
        report.details["families"] += 1
        key = [list(members) for _, members in F.canonical()]
        try:
            orbit = OrbitCategory(F)
            verdicts = category_cd_report(orbit.category, 1 if is_proper(F) else 0, budgets)
        except BudgetExceededError as exc:
            logger.warning("Family %s indeterminate: %s", F.name or key, exc)
            report.add("family", None, family=key, error=exc.to_json())
            continue
        zero_ok = verdicts[0].le == (not is_proper(F))
        report.add("cd0_criterion", zero_ok, family=key, le0=verdicts[0].le)
        if is_proper(F):
            v1 = verdicts[1]
            report.add(
                "cd_at_least_2",
                not v1.le,
                family=key,
                certificate=v1.projectivity.to_json(),
            )
    report.details["proper_families"] = sum(
        1 for c in report.checks if c["check"] == "cd_at_least_2"
    )
    return report


# ____________________ Shapiro and quotients ________________


def verify_shapiro(
    G: PermGroup,
    F: Family,
    H: Subgroup,
    M: Optional[CatModule] = None,
    n_max: int = DEFAULT_N_MAX,
    budgets: Budgets = DEFAULT_BUDGETS,
    orbit: Optional[OrbitCategory] = None,
) -> VerificationReport:
    """Compares ``Extⁿ(Z̄, M)`` over ``O_{H∩F}(H)`` with
    ``Extⁿ(Z̄, coind M)`` over ``O_F(Γ)``.

    ``M`` defaults to ``Z̄`` over the subgroup's orbit category. Also checks
    the adjunction on representables and ``cd_F(Γ) <= n ⇒ cd_{H∩F}(H) <= n``.
    """
    orbit = orbit or OrbitCategory(F)
    sub, _ = orbit.restriction(H)
    if M is None:
        M = sub.constant()
    report = VerificationReport("shapiro", True, details={"subgroup_order": H.order})
    coinduced = coinduce(orbit, M, H)
    for k, K in enumerate(orbit.subgroups):
        hom = hom_group(restrict(orbit, orbit.free(K), H), M, budgets).invariants
        report.add(
            "adjunction", hom == coinduced.value(k), object=k, hom=hom.to_json()
        )
    left = ext_groups(sub.constant(), M, n_max, budgets)
    right = ext_groups(orbit.constant(), coinduced, n_max, budgets)
    for n, (a, b) in enumerate(zip(left, right)):
        report.add("ext", a == b, n=n, subgroup=a.to_json(), group=b.to_json())
    big = category_cd_report(orbit.category, n_max, budgets)
    small = category_cd_report(sub.category, n_max, budgets)
    for vb, vs in zip(big, small):
        report.add("cd_implication", (not vb.le) or vs.le, n=vb.n, group=vb.le, subgroup=vs.le)
    report.details.update(left=_invariants(left), right=_invariants(right))
    return report


def verify_double_cosets(
    F: Family, budgets: Budgets = DEFAULT_BUDGETS, orbit: Optional[OrbitCategory] = None
) -> VerificationReport:
    """The Mackey isomorphism for every object ``Γ/K`` and every subgroup
    ``H`` up to conjugacy: invertible, one summand per double coset."""
    G = F.group
    orbit = orbit or OrbitCategory(F)
    report = VerificationReport("doublecoset", True, details={"pairs": 0})
    for cls in conjugacy_classes_of_subgroups(G, budgets):
        H = cls.representative
        for K in orbit.subgroups:
            report.details["pairs"] += 1
            try:
                decomposition = double_coset_decomposition(orbit, K, H)
            except VerificationError as exc:
                report.add("invertible", False, H=H.order, K=K.order, error=exc.to_json())
                continue
            report.add("invertible", True, H=H.order, K=K.order)
            expected = len(double_cosets(G, H, K))
            report.add(
                "summand_count",
                len(decomposition.summand.generators) == expected,
                H=H.order,
                K=K.order,
                double_cosets=expected,
            )
    return report


def verify_quotient(
    G: PermGroup,
    F: Family,
    N: Subgroup,
    n_max: int = DEFAULT_N_MAX,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> VerificationReport:
    """``cd_F(Γ) <= n ⇒ cd_{F_N}(Γ/N) <= n``, and ``p_*`` on a resolution of
    ``Z̄``: the constant module goes to the constant module and every free
    stage to a sum of representables.

    Raises:
        NotNormalError: If ``N`` is not normal.
        UnsupportedInputError: If ``N`` is not in ``F``.
    """
    if not N.is_normal():
        raise NotNormalError("%r is not normal", N)
    orbit = OrbitCategory(F)
    _, sub, functor = orbit.quotient(N)
    report = VerificationReport("quotient", True, details={"normal_order": N.order})
    pushed = orbit.constant().pullback(functor)
    report.add("constant", pushed.same_as(sub.constant()))

    resolution = free_resolution(orbit.constant(), max(n_max - 1, 0), budgets)
    summands = 0
    for stage, Fi in enumerate(resolution.modules):
        ok = True
        for c in Fi.generators:
            try:
                summands += pushforward_of_free(orbit, orbit.subgroups[c], N) is not None
            except VerificationError as exc:
                logger.warning("Stage %s: %s", stage, exc)
                ok = False
        report.add("free_stage", ok, stage=stage, generators=len(Fi.generators))
    report.details["representable_summands"] = summands

    big = category_cd_report(orbit.category, n_max, budgets)
    small = category_cd_report(sub.category, n_max, budgets)
    for vb, vs in zip(big, small):
        report.add("cd_implication", (not vb.le) or vs.le, n=vb.n, group=vb.le, quotient=vs.le)
    return report


# ____________________ Group cohomology _____________________


def bar_cohomology(
    Q: PermGroup,
    P: CatModule,
    n_max: int = DEFAULT_N_MAX,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> List[AbGroupInvariants]:
    """``Hⁿ(Q; P)`` from the inhomogeneous bar complex, ``n <= n_max``.

    ``P`` is a lattice over :meth:`FinCategory.group_category` of ``Q``.

    Raises:
        UnsupportedInputError: If ``P`` has torsion.
        BudgetExceededError: If a cochain group is too large.
    """
    if not P.is_lattice:
        raise UnsupportedInputError("Bar cohomology is computed for lattices only")
    r = P.ranks[0]
    order = Q.order
    if order ** (n_max + 1) * r > budgets.max_resolution_rank:
        raise BudgetExceededError(
            "Bar complex of degree %s has rank %s, over the budget %s",
            n_max + 1,
            order ** (n_max + 1) * r,
            budgets.max_resolution_rank,
        )
    mul, rho = Q.mul, P.maps

    def coboundary(n: int) -> Matrix:
        # C^n -> C^{n+1}; a cochain's coordinates are (tuple index, component)
        cols = order**n * r
        matrix: Matrix = []
        for gs in itertools.product(range(order), repeat=n + 1):
            block = [[0] * cols for _ in range(r)]

            def add(sign: int, args: Sequence[int], action: Optional[Matrix] = None) -> None:
                index = 0
                for x in args:
                    index = index * order + x
                for i in range(r):
                    if action is None:
                        block[i][index * r + i] += sign
                    else:
                        for k in range(r):
                            if action[i][k]:
                                block[i][index * r + k] += sign * action[i][k]

            add(1, gs[1:], rho[gs[0]])
            for i in range(n):
                merged = gs[:i] + (mul[gs[i]][gs[i + 1]],) + gs[i + 2 :]
                add((-1) ** (i + 1), merged)
            add((-1) ** (n + 1), gs[:n])
            matrix.extend(block)
        return matrix

    groups = []
    previous: Optional[Matrix] = None
    for n in range(n_max + 1):
        dim = order**n * r
        delta = coboundary(n)
        cycles = kernel_basis(delta, dim)
        boundaries = transpose(previous, order ** (n - 1) * r) if previous else []
        groups.append(subquotient(cycles, boundaries, dim))
        previous = delta
    logger.debug("Bar cohomology: %s", [str(g) for g in groups])
    return groups


def _quotient_coefficients(
    Q: PermGroup, C: FinCategory, coefficients: Union[str, CatModule]
) -> CatModule:
    if isinstance(coefficients, CatModule):
        if coefficients.category is not C:
            raise InvalidModuleError("Coefficients are not over the quotient group")
        return coefficients
    if coefficients == "trivial":
        return trivial_module(Q, category=C)
    if coefficients == "sign":
        return sign_module(Q, C)
    if coefficients == "regular":
        return regular_module(Q, C)
    raise UnsupportedInputError("Unknown coefficient module %r", coefficients)


def verify_trivial_action(
    G: PermGroup,
    N: Subgroup,
    coefficients: Union[str, CatModule] = "trivial",
    n_max: int = 4,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> VerificationReport:
    """``Extⁿ(Z̄, ind P)`` over ``O_{F⟨N⟩}(Γ)`` against ``Hⁿ(Γ/N; P)``.

    ``coefficients`` is ``"trivial"``, ``"sign"``, ``"regular"`` or a module
    over the quotient's group category from :func:`trivial_action_pair`.
    The bar complex supplies the right-hand side; the pair's functors are
    also checked on ``Z̄`` and on free modules.
    """
    pair = trivial_action_pair(G, N)
    Q = pair.quotient.group
    P = _quotient_coefficients(Q, pair.group_category, coefficients)
    orbit = pair.orbit
    report = VerificationReport("trivial_action", True, details={"quotient_order": Q.order})

    report.add(
        "ind_constant",
        pair.ind(trivial_module(Q, category=pair.group_category)).same_as(orbit.constant()),
    )
    induced = pair.ind(P)
    induced.validate()
    report.add("res_ind", pair.res(induced).same_as(P))
    regular = regular_module(Q, pair.group_category)
    n_obj = pair.n_object
    generator = [int(i == 0) for i in range(Q.order)]
    report.add(
        "ind_free",
        free_map(free_module(orbit.category, n_obj), pair.ind(regular), [generator]).is_invertible(),
    )
    report.add(
        "res_free",
        free_map(regular, pair.res(free_module(orbit.category, n_obj)), [generator]).is_invertible(),
    )

    left = ext_groups(orbit.constant(), induced, n_max, budgets)
    right = bar_cohomology(Q, P, n_max, budgets)
    for n, (a, b) in enumerate(zip(left, right)):
        report.add("ext", a == b, n=n, orbit=a.to_json(), bar=b.to_json())
    report.details.update(orbit=_invariants(left), bar=_invariants(right))
    return report


# ___________________ Equivariant dimension _________________


def equivariant_cd(
    pi: PermGroup,
    G: PermGroup,
    act: GAction,
    n_max: int = DEFAULT_N_MAX,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> CdReport:
    """``cd_G(π)``: the dimension of ``π ⋊ G`` for the family of
    subgroups conjugate into ``1 × G``.

    For a trivial action the answer is compared degree-wise with the
    dimension and cohomology of ``π`` itself.
    """
    product = semidirect_product(pi, G, act)
    family = family_generated(product.group, [product.actor_subgroup], budgets)
    report = cd_report(product.group, family, n_max, budgets)
    report.checks["order"] = product.group.order
    if all(image == act.images[G.identity] for image in act.images):
        N = product.actor_subgroup
        pair = trivial_action_pair(product.group, N)
        if pair.orbit.family != family:
            raise VerificationError("Family of the normal factor differs from F<G>")
        quotient_verdicts = category_cd_report(pair.group_category, n_max, budgets)
        agree = [a.le == b.le for a, b in zip(report.verdicts, quotient_verdicts)]
        Z = constant_module(pair.group_category)
        left = ext_groups(pair.orbit.constant(), pair.ind(Z), n_max, budgets)
        right = ext_groups(Z, Z, n_max, budgets)
        report.checks["trivial_action"] = {
            "verdicts_agree": all(agree),
            "ext_agree": left == right,
            "ext": _invariants(right),
        }
        if not (all(agree) and left == right):
            raise VerificationError("Trivial-action cross-check failed")
    return report


# _______________________ Reductions ________________________


def proper_reduction_chain(F: Family, budgets: Budgets = DEFAULT_BUDGETS) -> List[Subgroup]:
    """``Γ = H_0 > H_1 > ... > H_k`` with ``H_i ∉ F`` and every proper
    subgroup of ``H_k`` in ``F``.

    The next subgroup is a proper subgroup outside ``F``, largest order
    first, then least member set.

    Raises:
        UnsupportedInputError: If ``F`` is not proper.
    """
    if not is_proper(F):
        raise UnsupportedInputError("Reduction needs a proper family")
    G = F.group
    subgroups = all_subgroups(G, budgets)
    chain = [G.whole]
    while True:
        current = chain[-1]
        outside = [
            K
            for K in subgroups
            if K.issubgroup(current) and K != current and K.mask not in F.masks
        ]
        if not outside:
            break
        chain.append(max(outside, key=lambda K: (K.order, [-x for x in K.members])))
    logger.debug("Reduction chain orders: %s", [H.order for H in chain])
    return chain


def verify_reduction(
    F: Family, n_max: int = DEFAULT_N_MAX, budgets: Budgets = DEFAULT_BUDGETS
) -> VerificationReport:
    """Along :func:`proper_reduction_chain`, ``cd_F(Γ) <= n`` implies
    ``cd_{H∩F}(H) <= n``, and the last family is all proper subgroups."""
    chain = proper_reduction_chain(F, budgets)
    report = VerificationReport(
        "reduction", True, details={"chain_orders": [H.order for H in chain]}
    )
    top = category_cd_report(OrbitCategory(F).category, n_max, budgets)
    for H in chain[1:]:
        restricted = intersect_with_subgroup(F, H)
        verdicts = category_cd_report(OrbitCategory(restricted).category, n_max, budgets)
        for vt, vh in zip(top, verdicts):
            report.add(
                "cd_implication", (not vt.le) or vh.le, order=H.order, n=vt.n
            )
    last = chain[-1]
    final = intersect_with_subgroup(F, last)
    report.add(
        "terminal_family",
        len(final) == len(proper_family(last.as_group, budgets)),
        order=last.order,
    )
    return report


@dataclass
class QuotientStep:
    group: PermGroup
    normal: Subgroup
    quotient: Quotient

    def to_json(self) -> dict:
        return {
            "order": self.group.order,
            "normal_order": self.normal.order,
            "quotient_order": self.quotient.group.order,
        }


def simple_quotient_chain(G: PermGroup, budgets: Budgets = DEFAULT_BUDGETS) -> List[QuotientStep]:
    """Quotients by a smallest proper nontrivial normal subgroup until a
    simple group remains.

    Raises:
        VerificationError: If the image of the proper family is not the
            proper family of a quotient.
    """
    steps = []
    current = G
    while current.order > 1:
        N = proper_normal_subgroup(current)
        if N is None:
            break
        quotient = quotient_group(current, N)
        image = quotient_family(proper_family(current, budgets), N, quotient, budgets)
        if image.masks != proper_family(quotient.group, budgets).masks:
            raise VerificationError("Quotient of the proper family is not proper")
        steps.append(QuotientStep(current, N, quotient))
        current = quotient.group
    logger.debug("Simple quotient chain: %s", [s.to_json() for s in steps])
    return steps


def verify_poset_bound(
    F: Family, n_max: int = DEFAULT_N_MAX, budgets: Budgets = DEFAULT_BUDGETS
) -> VerificationReport:
    """``cd(A_F(Γ)) <= cd_F(Γ)`` on bounded verdicts, with the pointed orbit
    category in between.

    For each representable ``Z[O_F Γ(-, Γ/K)]``, its pullback to a pointed
    object has the rank of ``⊕_{δK} Z[pointed(-, (Γ/K, δK))]``.
    """
    report = VerificationReport("poset_bound", True)
    pointed, equivalence = pointed_orbit_category(F, budgets)
    pointed.check_thin()
    report.add("isomorphism_classes", equivalence.isomorphism_classes == len(F))
    orbit = pointed.orbit
    C = orbit.category
    for k in range(C.n_objects):
        targets = [
            i for i, (b, _) in enumerate(pointed.objects) if b == k
        ]
        ok = all(
            len(C.hom[a][k]) == sum(pointed.has_arrow(i, j) for j in targets)
            for i, (a, _) in enumerate(pointed.objects)
        )
        report.add("forgetful_ranks", ok, object=k)

    poset = subgroup_poset(F)
    category = FinCategory.from_poset(poset.labels, poset.leq)
    orbit_verdicts = category_cd_report(OrbitCategory(F).category, n_max, budgets)
    poset_verdicts = category_cd_report(category, n_max, budgets)
    for vo, vp in zip(orbit_verdicts, poset_verdicts):
        report.add("cd_implication", (not vo.le) or vp.le, n=vo.n, orbit=vo.le, poset=vp.le)
    report.details["poset_size"] = len(poset.elements)
    return report
