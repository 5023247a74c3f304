"""
Families of subgroups.

A family is a nonempty set of subgroups closed under conjugation and under
passing to subgroups. Families are stored as explicit sets of subgroup
masks; their canonical form is the sorted list of conjugacy-class
representatives they contain.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from bredon.config import DEFAULT_BUDGETS, Budgets
from bredon.exceptions import EmptyFamilyError, NotASubgroupError, SizeBoundError
from bredon.permgroup import (
    ConjugacyClass,
    PermGroup,
    Quotient,
    Subgroup,
    all_subgroups,
    conjugacy_classes_of_subgroups,
    quotient_group,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Family:
    """
    A family of subgroups of :attr:`group`.

    Attributes
    ----------
    group : PermGroup
    masks : frozenset of int
        Member subgroups as element masks.
    name : str or None
        How the family was specified (``"proper"``, ``"generated"`` ...).
    """

    group: PermGroup = field(repr=False)
    masks: FrozenSet[int]
    name: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.masks:
            raise EmptyFamilyError("A family needs at least one member")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return self.group is other.group and self.masks == other.masks

    def __hash__(self) -> int:
        return hash(self.masks)

    def __contains__(self, H: Subgroup) -> bool:
        return H.group is self.group and H.mask in self.masks

    def __len__(self) -> int:
        return len(self.masks)

    def __repr__(self) -> str:
        return f"Family(name={self.name!r}, size={len(self)})"

    @cached_property
    def members(self) -> List[Subgroup]:
        return sorted((Subgroup(self.group, m) for m in self.masks), key=lambda H: H.sort_key)

    def classes(self, budgets: Budgets = DEFAULT_BUDGETS) -> List[ConjugacyClass]:
        """The conjugacy classes of subgroups contained in the family."""
        return [
            cls
            for cls in conjugacy_classes_of_subgroups(self.group, budgets)
            if cls.representative.mask in self.masks
        ]

    def canonical(self) -> Tuple[Tuple[int, Tuple[int, ...]], ...]:
        return tuple(cls.representative.sort_key for cls in self.classes())

    def validate(self) -> None:
        """Checks both closure properties against the subgroup lattice.

        Raises:
            NotASubgroupError: If the family is not conjugation or subgroup
                closed.
        """
        G = self.group
        for H in self.members:
            for g in G.gen_indices:
                if G.conjugate_mask(g, H.mask) not in self.masks:
                    raise NotASubgroupError("Family is not closed under conjugation")
        for K in all_subgroups(G):
            if K.mask not in self.masks and any(K.issubgroup(H) for H in self.members):
                raise NotASubgroupError("Family is not closed under subgroups")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "size": len(self),
            "classes": [
                {
                    "order": cls.representative.order,
                    "conjugates": len(cls),
                    "generators": cls.representative.to_json()["generators"],
                }
                for cls in self.classes()
            ],
        }


def _down_closure(G: PermGroup, tops: Iterable[int], budgets: Budgets) -> FrozenSet[int]:
    tops = list(tops)
    return frozenset(
        K.mask for K in all_subgroups(G, budgets) if any(K.mask & ~t == 0 for t in tops)
    )


def family_generated(
    G: PermGroup, seeds: Sequence[Subgroup], budgets: Budgets = DEFAULT_BUDGETS
) -> Family:
    """The smallest family containing ``seeds``: all subconjugates of a seed.

    Raises:
        NotASubgroupError: If a seed is not a subgroup of ``G``.
    """
    tops = set()
    for S in seeds:
        G.check_subgroup(S)
        G.subgroup_from_mask(S.mask)
        for cls in conjugacy_classes_of_subgroups(G, budgets):
            if S in cls:
                tops.update(cls.conjugators)
                break
    if not tops:
        tops.add(1)
    return Family(G, _down_closure(G, tops, budgets), "generated")


def all_family(G: PermGroup, budgets: Budgets = DEFAULT_BUDGETS) -> Family:
    return Family(G, frozenset(H.mask for H in all_subgroups(G, budgets)), "all")


def proper_family(G: PermGroup, budgets: Budgets = DEFAULT_BUDGETS) -> Family:
    """All subgroups except ``G``.

    Raises:
        EmptyFamilyError: For the trivial group.
    """
    masks = frozenset(H.mask for H in all_subgroups(G, budgets) if not H.is_whole())
    return Family(G, masks, "proper")


def trivial_family(G: PermGroup) -> Family:
    return Family(G, frozenset({1}), "trivial")


def subgroups_of(N: Subgroup, budgets: Budgets = DEFAULT_BUDGETS) -> Family:
    """The family of subgroups contained in ``N`` (normal in its group)."""
    return Family(N.group, _down_closure(N.group, [N.mask], budgets), "contained")


def is_proper(F: Family) -> bool:
    return F.group.full_mask not in F.masks


def intersect_with_subgroup(F: Family, H: Subgroup) -> Family:
    """``H ∩ F``: the members contained in ``H``, as a family over
    :attr:`Subgroup.as_group`."""
    F.group.check_subgroup(H)
    members = [K for K in F.members if K.issubgroup(H)]
    return Family(H.as_group, frozenset(H.restrict(K).mask for K in members), F.name)


def quotient_family(
    F: Family,
    N: Subgroup,
    quotient: Optional[Quotient] = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> Family:
    """``F_N``: subgroups of ``Γ/N`` whose preimage lies in ``F``.

    Raises:
        NotNormalError: If ``N`` is not normal.
        EmptyFamilyError: If no preimage lies in ``F`` (``N`` not in ``F``).
    """
    if quotient is None:
        quotient = quotient_group(F.group, N)
    Q = quotient.group
    masks = frozenset(
        L.mask for L in all_subgroups(Q, budgets) if quotient.preimage(L).mask in F.masks
    )
    if not masks:
        raise EmptyFamilyError("Quotient family is empty: the normal subgroup is not in the family")
    return Family(Q, masks, F.name)


def all_families(G: PermGroup, budgets: Budgets = DEFAULT_BUDGETS) -> List[Family]:
    """Every family of ``G``: down-closed sets of conjugacy classes
    containing the trivial class.

    Raises:
        SizeBoundError: If ``G`` has more classes than
            ``budgets.max_family_classes``.
    """
    classes = conjugacy_classes_of_subgroups(G, budgets)
    if len(classes) > budgets.max_family_classes:
        raise SizeBoundError(
            "%s conjugacy classes exceed the family enumeration bound %s",
            len(classes),
            budgets.max_family_classes,
        )
    below: List[List[int]] = []
    for j, cj in enumerate(classes):
        below.append(
            [
                i
                for i, ci in enumerate(classes[:j])
                if any(ci.representative.issubgroup(K) for K in cj.members)
            ]
        )
    results: List[FrozenSet[int]] = []

    def extend(j: int, chosen: List[int]) -> None:
        if j == len(classes):
            results.append(frozenset(m for i in chosen for m in classes[i].conjugators))
            return
        extend(j + 1, chosen)
        if all(i in chosen for i in below[j]):
            extend(j + 1, chosen + [j])

    # the trivial class is first and always included
    extend(1, [0])
    families = [Family(G, masks) for masks in results]
    families.sort(key=lambda F: (len(F), F.canonical()))
    logger.debug("%s families over %r", len(families), G)
    return families


@dataclass
class SubgroupPoset:
    """
    The members of a family ordered by inclusion.

    ``leq[i][j]`` holds when ``elements[i] <= elements[j]``; element 0 is
    the trivial subgroup.
    """

    elements: List[Subgroup]
    leq: List[List[bool]]

    @property
    def labels(self) -> List[str]:
        return [f"H{i}(order {H.order})" for i, H in enumerate(self.elements)]

    def index(self) -> Dict[int, int]:
        return {H.mask: i for i, H in enumerate(self.elements)}


def subgroup_poset(F: Family) -> SubgroupPoset:
    elements = F.members
    leq = [[H.issubgroup(K) for K in elements] for H in elements]
    return SubgroupPoset(elements, leq)
