"""
Non-abelian ``H¹(G; π)`` for a finite group acting on a finite group.

A 1-cocycle is a map ``φ: G -> π`` with ``φ(gh) = φ(g)·ᵍφ(h)``; ``π`` acts
on cocycles by ``(α·φ)(g) = α⁻¹ φ(g) ᵍα`` and ``H¹`` is the orbit set,
pointed by the class of the trivial cocycle. Cocycles on ``H <= G``
correspond to the complements ``{(φ(h), h)}`` of ``π`` over ``H`` in
``π ⋊ G``.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from bredon.config import DEFAULT_BUDGETS, Budgets
from bredon.exceptions import (
    BudgetExceededError,
    InvalidActionError,
    UnsupportedInputError,
    VerificationError,
)
from bredon.family import family_generated
from bredon.permgroup import (
    GAction,
    SemidirectProduct,
    Subgroup,
    all_subgroups,
    mask_of,
    semidirect_product,
)
from bredon.report import VerificationReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cocycle:
    """
    Attributes
    ----------
    action : GAction
        The action of ``G`` on ``π`` the cocycle is relative to.
    values : tuple of int
        ``values[g]`` is the index in ``π`` of ``φ(g)``.
    """

    action: GAction
    values: Tuple[int, ...]

    def __call__(self, g: int) -> int:
        return self.values[g]

    def is_cocycle(self) -> bool:
        G, pi, act = self.action.actor, self.action.target, self.action
        phi = self.values
        return all(
            phi[G.mul[g][h]] == pi.mul[phi[g]][act.apply(g, phi[h])]
            for g in range(G.order)
            for h in range(G.order)
        )

    def twist(self, alpha: int) -> "Cocycle":
        """``g ↦ α⁻¹ φ(g) ᵍα``."""
        pi, act = self.action.target, self.action
        inv = pi.inv[alpha]
        return Cocycle(
            act,
            tuple(
                pi.mul[pi.mul[inv][x]][act.apply(g, alpha)] for g, x in enumerate(self.values)
            ),
        )

    def to_json(self) -> List[List[int]]:
        pi = self.action.target
        return [list(pi.elements[x]) for x in self.values]


def principal_cocycle(act: GAction, alpha: int) -> Cocycle:
    """``g ↦ α·ᵍ(α⁻¹)``."""
    pi = act.target
    inv = pi.inv[alpha]
    return Cocycle(act, tuple(pi.mul[alpha][act.apply(g, inv)] for g in range(act.actor.order)))


def _propagate(act: GAction, generator_values: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
    # φ(x s) = φ(x)·ˣφ(s), breadth first from the identity
    G, pi = act.actor, act.target
    values: Dict[int, int] = {G.identity: pi.identity}
    frontier = [G.identity]
    for x in frontier:
        for s, value in zip(G.gen_indices, generator_values):
            y = G.mul[x][s]
            image = pi.mul[values[x]][act.apply(x, value)]
            if y not in values:
                values[y] = image
                frontier.append(y)
            elif values[y] != image:
                return None
    return tuple(values[g] for g in range(G.order))


def _by_generators(act: GAction, budgets: Budgets) -> List[Cocycle]:
    G, pi = act.actor, act.target
    count = pi.order ** len(G.gen_indices)
    if count > budgets.max_cocycle_candidates:
        raise BudgetExceededError(
            "%s cocycle candidates exceed the budget %s", count, budgets.max_cocycle_candidates
        )
    found = []
    for assignment in itertools.product(range(pi.order), repeat=len(G.gen_indices)):
        values = _propagate(act, assignment)
        if values is None:
            continue
        phi = Cocycle(act, values)
        if phi.is_cocycle():
            found.append(phi)
    return found


def _exhaustive(act: GAction) -> List[Cocycle]:
    G, pi = act.actor, act.target
    others = [g for g in range(G.order) if g != G.identity]
    found = []
    for assignment in itertools.product(range(pi.order), repeat=len(others)):
        values = [pi.identity] * G.order
        for g, x in zip(others, assignment):
            values[g] = x
        phi = Cocycle(act, tuple(values))
        if phi.is_cocycle():
            found.append(phi)
    return found


def cocycles(act: GAction, budgets: Budgets = DEFAULT_BUDGETS) -> List[Cocycle]:
    """Every 1-cocycle, sorted by values.

    Values are assigned on the generators and propagated through the
    Cayley graph; inconsistent assignments are dropped. Small groups
    are cross-checked against enumeration of all maps.

    Raises:
        BudgetExceededError: If there are too many generator assignments.
        VerificationError: If the two enumerations disagree.
    """
    found = sorted(_by_generators(act, budgets), key=lambda phi: phi.values)
    G, pi = act.actor, act.target
    if (
        G.order <= budgets.exhaustive_cocycle_order
        and pi.order ** (G.order - 1) <= budgets.max_cocycle_candidates
    ):
        exhaustive = sorted(_exhaustive(act), key=lambda phi: phi.values)
        if exhaustive != found:
            raise VerificationError("Generator and exhaustive cocycle enumerations differ")
    logger.debug("%s cocycles of %r on %r", len(found), G, pi)
    return found


@dataclass
class H1Classes:
    """
    Cocycles partitioned into twisted-conjugacy classes.

    ``classes`` holds indices into ``cocycles``; ``principal`` is the index
    of the class of the trivial cocycle.
    """

    cocycles: List[Cocycle]
    classes: List[List[int]]
    principal: int

    @cached_property
    def class_of(self) -> Dict[Tuple[int, ...], int]:
        return {
            self.cocycles[i].values: k for k, members in enumerate(self.classes) for i in members
        }

    def is_principal(self, phi: Cocycle) -> bool:
        return self.class_of[phi.values] == self.principal

    def __len__(self) -> int:
        return len(self.classes)

    def to_json(self) -> dict:
        return {
            "cocycle_count": len(self.cocycles),
            "class_count": len(self.classes),
            "principal_class_size": len(self.classes[self.principal]),
            "classes": [
                [self.cocycles[i].to_json() for i in members] for members in self.classes
            ],
        }


def h1(act: GAction, budgets: Budgets = DEFAULT_BUDGETS) -> H1Classes:
    """``H¹(G; π)`` as orbits of ``π`` on :func:`cocycles`.

    Raises:
        VerificationError: If twisting leaves the cocycle set, orbits
            overlap, or a principal cocycle is outside the marked class.
    """
    found = cocycles(act, budgets)
    pi = act.target
    index = {phi.values: i for i, phi in enumerate(found)}
    orbit_of: Dict[int, int] = {}
    classes: List[List[int]] = []
    for i, phi in enumerate(found):
        if i in orbit_of:
            continue
        members = set()
        for alpha in range(pi.order):
            try:
                members.add(index[phi.twist(alpha).values])
            except KeyError:
                raise VerificationError("Twisted cocycle is not a cocycle")
        for j in members:
            if j in orbit_of:
                raise VerificationError("Twisted-conjugacy classes overlap")
            orbit_of[j] = len(classes)
        classes.append(sorted(members))
    trivial = index[tuple(pi.identity for _ in range(act.actor.order))]
    principal = orbit_of[trivial]
    for alpha in range(pi.order):
        if orbit_of[index[principal_cocycle(act, alpha).values]] != principal:
            raise VerificationError("Principal cocycle outside the trivial class")
    logger.info("|H^1| = %s from %s cocycles", len(classes), len(found))
    return H1Classes(found, classes, principal)


# ______________________ Complements ________________________


def _product_for(act: GAction) -> SemidirectProduct:
    return semidirect_product(act.target, act.actor, act)


def subgroup_from_cocycle(product: SemidirectProduct, H: Subgroup, phi: Cocycle) -> Subgroup:
    """``H_φ = {(φ(h), h) : h ∈ H}`` for a cocycle of the restricted action.

    Raises:
        InvalidActionError: If ``phi`` is not over ``H``.
    """
    if phi.action.actor.order != H.order:
        raise InvalidActionError("Cocycle is not defined on the given subgroup")
    embed = H.embedding
    mask = mask_of(product.element(phi(h), embed[h]) for h in range(H.order))
    return product.group.subgroup_from_mask(mask)


def cocycle_from_complement(
    product: SemidirectProduct, complement: Subgroup
) -> Tuple[Subgroup, Cocycle]:
    """The subgroup ``H`` of ``G`` a complement projects onto, and the
    cocycle ``φ`` with ``complement = H_φ``.

    Raises:
        UnsupportedInputError: If the complement meets ``π × 1``.
    """
    if complement.mask & product.pi_subgroup.mask != 1:
        raise UnsupportedInputError("Subgroup meets the normal factor nontrivially")
    G = product.actor
    pairs = [product.decompose(x) for x in complement.members]
    H = Subgroup(G, mask_of(g for _, g in pairs))
    position = {p: i for i, p in enumerate(H.embedding)}
    values = [0] * H.order
    for alpha, g in pairs:
        values[position[g]] = alpha
    phi = Cocycle(product.action.restricted(H), tuple(values))
    if not phi.is_cocycle():
        raise VerificationError("Complement does not define a cocycle")
    return H, phi


def subconjugate_iff_principal(
    act: GAction, H: Subgroup, budgets: Budgets = DEFAULT_BUDGETS
) -> VerificationReport:
    """For every cocycle ``φ`` on ``H``: ``H_φ`` is subconjugate to
    ``1 × G`` exactly when ``φ`` is principal.

    Also checks the cocycle/complement round trip and that complements of
    ``π`` over ``H`` are exactly the subgroups ``H_φ``.
    """
    product = _product_for(act)
    family = family_generated(product.group, [product.actor_subgroup], budgets)
    restricted = act.restricted(H)
    classes = h1(restricted, budgets)
    report = VerificationReport(
        "subconjugacy",
        details={"cocycles": len(classes.cocycles), "classes": len(classes)},
    )
    images = set()
    for phi in classes.cocycles:
        Hphi = subgroup_from_cocycle(product, H, phi)
        images.add(Hphi.mask)
        back_H, back = cocycle_from_complement(product, Hphi)
        report.add("round_trip", back_H == H and back.values == phi.values, cocycle=phi.to_json())
        in_family = Hphi in family
        principal = classes.is_principal(phi)
        report.add(
            "subconjugate_iff_principal",
            in_family == principal,
            cocycle=phi.to_json(),
            subconjugate=in_family,
            principal=principal,
        )
    image_of_H = product.embed_actor_subgroup(H).mask
    complements = {
        K.mask
        for K in all_subgroups(product.group, budgets)
        if K.order == H.order
        and K.mask & product.pi_subgroup.mask == 1
        and mask_of(product.element(0, g) for _, g in map(product.decompose, K.members))
        == image_of_H
    }
    report.add("complements", complements == images, complements=len(complements))
    report.details["family_level_claim"] = "not applicable to finite groups"
    return report
