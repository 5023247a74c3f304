"""
The curated battery: named groups, the families swept for each, and the
instances the verification commands run on by default.
"""

import logging
from typing import Callable, Dict, Iterator, List, Tuple

from bredon.config import DEFAULT_BUDGETS, Budgets
from bredon.exceptions import UnsupportedInputError
from bredon.family import (
    Family,
    all_families,
    all_family,
    family_generated,
    proper_family,
    trivial_family,
)
from bredon.permgroup import (
    GAction,
    PermGroup,
    Subgroup,
    alternating,
    conjugacy_classes_of_subgroups,
    cyclic,
    dihedral,
    klein_four,
    perm_from_cycles,
    quaternion,
    symmetric,
)

logger = logging.getLogger(__name__)

GROUPS: Dict[str, Callable[[], PermGroup]] = {
    "z2": lambda: cyclic(2),
    "z3": lambda: cyclic(3),
    "z4": lambda: cyclic(4),
    "z2xz2": klein_four,
    "z5": lambda: cyclic(5),
    "z6": lambda: cyclic(6),
    "s3": lambda: symmetric(3),
    "d4": lambda: dihedral(4),
    "q8": quaternion,
    "a4": lambda: alternating(4),
    "d5": lambda: dihedral(5),
    "s4": lambda: symmetric(4),
    "a5": lambda: alternating(5),
}

SMALL = tuple(name for name in GROUPS if name != "a5")
"""Battery groups of order at most 24, swept over all their families."""


def group_by_name(name: str) -> PermGroup:
    """A fresh copy of a battery group.

    Raises:
        UnsupportedInputError: If ``name`` is not in the battery.
    """
    try:
        factory = GROUPS[name.lower()]
    except KeyError:
        raise UnsupportedInputError(
            "Unknown group %r, expected one of %s", name, ", ".join(GROUPS)
        )
    return factory()


def a4_in_a5(G: PermGroup) -> Subgroup:
    """The point stabilizer ``A4`` of the battery ``A5``."""
    return G.subgroup(
        [perm_from_cycles(5, [(0, 1, 2)]), perm_from_cycles(5, [(0, 1), (2, 3)])]
    )


def battery_families(
    name: str, G: PermGroup, budgets: Budgets = DEFAULT_BUDGETS
) -> List[Family]:
    """The families swept for a battery group.

    ``A5`` is limited to the proper family and ``F⟨A4⟩``; every other
    group gets all of its families.
    """
    if name == "a5":
        return [proper_family(G, budgets), family_generated(G, [a4_in_a5(G)], budgets)]
    return all_families(G, budgets)


def standard_families(G: PermGroup, budgets: Budgets = DEFAULT_BUDGETS) -> List[Family]:
    """The trivial, proper and full families, without repeats."""
    families: List[Family] = []
    for F in (trivial_family(G), proper_family(G, budgets), all_family(G, budgets)):
        if F not in families:
            families.append(F)
    return families


def shapiro_instances(
    budgets: Budgets = DEFAULT_BUDGETS, exhaustive: bool = False
) -> Iterator[Tuple[str, PermGroup, Family, Subgroup]]:
    """``(name, G, F, H)`` for every small battery group and every proper
    nontrivial subgroup up to conjugacy.

    Families are :func:`standard_families`, or all families when
    ``exhaustive`` is set.
    """
    for name in SMALL:
        G = group_by_name(name)
        classes = conjugacy_classes_of_subgroups(G, budgets)
        families = all_families(G, budgets) if exhaustive else standard_families(G, budgets)
        for F in families:
            for cls in classes:
                H = cls.representative
                if not H.is_trivial() and not H.is_whole():
                    yield name, G, F, H


# _____________________ Curated actions _____________________


def inverting_action() -> GAction:
    """``Z/2`` acting on ``Z/3`` by inversion; ``Z/3 ⋊ Z/2 = Sym(3)``."""
    G, pi = cyclic(2), cyclic(3)
    return GAction.from_generator_images(G, pi, {0: list(pi.inv)})


def trivial_klein_action() -> GAction:
    """``Z/2`` acting trivially on ``Z/2``; the product is ``Z/2 × Z/2``."""
    return GAction.trivial(cyclic(2), cyclic(2))


ACTIONS: Dict[str, Callable[[], GAction]] = {
    "invert": inverting_action,
    "trivial": trivial_klein_action,
}

