"""
Finite posets, their E-reduction, and crowns in subgroup lattices.

An element of a finite poset is *superfluous* when it is maximal and covers
exactly one element, or has depth 1 and lies under exactly one maximal
element. Depth counts the longest chain up to a maximal element, so maximal
elements have depth 0. ``E(P)`` removes superfluous elements until none is
left; its isomorphism type does not depend on the order of removal, and
``cd(P) <= 1`` exactly when ``E(P)`` is a point (for ``P`` with an initial
element).
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from bredon.config import DEFAULT_BUDGETS, Budgets
from bredon.dimension import category_cd_le, category_cd_report
from bredon.exceptions import (
    InvalidCategoryError,
    NoInitialObjectError,
    NotSimpleError,
    UnsupportedInputError,
    VerificationError,
)
from bredon.family import SubgroupPoset, proper_family, subgroup_poset
from bredon.permgroup import PermGroup, Subgroup, all_subgroups, is_simple
from bredon.report import VerificationReport
from bredon.zcat import FinCategory

logger = logging.getLogger(__name__)

REGIMES = ("canonical", "random", "depth_one_first")


@dataclass
class FinPoset:
    """
    A finite poset on ``elements`` with ``leq[i][j]`` meaning ``i <= j``.

    ``origin`` maps each element to its index in the poset it was cut
    from, when there is one.
    """

    elements: List[Any]
    leq: List[List[bool]]
    origin: Optional[List[int]] = None

    def __len__(self) -> int:
        return len(self.elements)

    def validate(self) -> None:
        """Raises:
        InvalidCategoryError: If ``leq`` is not a partial order.
        """
        n = len(self)
        if len(self.leq) != n or any(len(row) != n for row in self.leq):
            raise InvalidCategoryError("Order relation has the wrong shape")
        for i in range(n):
            if not self.leq[i][i]:
                raise InvalidCategoryError("Order is not reflexive at %s", i)
            for j in range(n):
                if i != j and self.leq[i][j] and self.leq[j][i]:
                    raise InvalidCategoryError("Order is not antisymmetric at %s, %s", i, j)
                if self.leq[i][j]:
                    for k in range(n):
                        if self.leq[j][k] and not self.leq[i][k]:
                            raise InvalidCategoryError("Order is not transitive")

    def less(self, i: int, j: int) -> bool:
        return i != j and self.leq[i][j]

    def is_maximal(self, x: int) -> bool:
        return not any(self.less(x, z) for z in range(len(self)))

    def covers(self, x: int) -> List[int]:
        """Elements ``y < x`` with nothing strictly between."""
        below = [y for y in range(len(self)) if self.less(y, x)]
        return [y for y in below if not any(self.less(y, z) for z in below)]

    def covered_by(self, x: int) -> List[int]:
        above = [z for z in range(len(self)) if self.less(x, z)]
        return [z for z in above if not any(self.less(y, z) for y in above)]

    def depths(self) -> List[int]:
        n = len(self)
        order = sorted(range(n), key=lambda x: -sum(self.leq[y][x] for y in range(n)))
        depth = [0] * n
        # elements with more elements below come first, so every strict
        # upper bound is settled before x
        for x in order:
            ups = [depth[z] + 1 for z in range(n) if self.less(x, z)]
            depth[x] = max(ups, default=0)
        return depth

    def depth(self, x: int) -> int:
        return self.depths()[x]

    def initial(self) -> Optional[int]:
        return next((i for i in range(len(self)) if all(self.leq[i])), None)

    def is_point(self) -> bool:
        return len(self) == 1

    def sub(self, keep: Sequence[int]) -> "FinPoset":
        keep = list(keep)
        origin = [self.origin[i] for i in keep] if self.origin is not None else keep
        return FinPoset(
            [self.elements[i] for i in keep],
            [[self.leq[i][j] for j in keep] for i in keep],
            origin,
        )

    def category(self) -> FinCategory:
        return FinCategory.from_poset(self.labels, self.leq)

    @property
    def labels(self) -> List[str]:
        return [_label(e) for e in self.elements]

    def to_json(self) -> dict:
        return {
            "size": len(self),
            "elements": self.labels,
            "covers": [[y, x] for x in range(len(self)) for y in self.covers(x)],
        }


def _label(element: Any) -> str:
    if isinstance(element, Subgroup):
        return f"order {element.order}: {list(element.members)}"
    return str(element)


def superfluous(P: FinPoset) -> List[int]:
    n = len(P)
    depth = P.depths()
    result = []
    for x in range(n):
        if depth[x] == 0:
            if len(P.covers(x)) == 1:
                result.append(x)
        elif depth[x] == 1:
            if sum(1 for z in range(n) if P.less(x, z) and depth[z] == 0) == 1:
                result.append(x)
    return result


def is_superfluous(P: FinPoset, x: int) -> bool:
    return x in superfluous(P)


# ______________________ Named posets _______________________


def chain(length: int) -> FinPoset:
    """``0 < 1 < ... < length``."""
    n = length + 1
    return FinPoset(list(range(n)), [[i <= j for j in range(n)] for i in range(n)])


def point() -> FinPoset:
    return chain(0)


def crown(m: int, n: int, bottom: bool = True) -> FinPoset:
    """``m`` elements each below all of ``n`` elements, over a bottom."""
    labels = (["b"] if bottom else []) + [f"x{i}" for i in range(m)] + [f"y{j}" for j in range(n)]
    offset = 1 if bottom else 0
    level = [0] * offset + [1] * m + [2] * n
    size = len(labels)
    leq = [
        [i == j or (level[i] < level[j] and (level[i] == 0 or level[j] == 2)) for j in range(size)]
        for i in range(size)
    ]
    return FinPoset(labels, leq)


def from_subgroup_poset(poset: SubgroupPoset) -> FinPoset:
    return FinPoset(list(poset.elements), [list(row) for row in poset.leq])


# _______________________ E-reduction _______________________


def e_reduction(
    P: FinPoset, regime: str = "canonical", seed: Optional[int] = None
) -> FinPoset:
    """``E(P)``, removing one superfluous element at a time.

    ``canonical`` removes the first superfluous element and ``random`` a
    uniformly chosen one (seeded). ``depth_one_first`` removes superfluous
    elements of depth 1 while there are any, maximal ones only after that.
    """
    if regime not in REGIMES:
        raise UnsupportedInputError("Unknown removal regime %r", regime)
    rng = random.Random(seed)
    current = P.sub(range(len(P)))
    removed = 0
    while True:
        candidates = superfluous(current)
        if not candidates:
            break
        if regime == "random":
            x = rng.choice(candidates)
        elif regime == "depth_one_first":
            depth = current.depths()
            x = next((c for c in candidates if depth[c] == 1), candidates[0])
        else:
            x = candidates[0]
        current = current.sub([i for i in range(len(current)) if i != x])
        removed += 1
    logger.debug("E-reduction (%s): removed %s, kept %s", regime, removed, len(current))
    return current


# ______________________ Isomorphism ________________________


def _refine(posets: Sequence[FinPoset]) -> List[List[int]]:
    colours = []
    for P in posets:
        depth = P.depths()
        colours.append(
            [
                (sum(P.leq[y][x] for y in range(len(P))), sum(P.leq[x]), depth[x])
                for x in range(len(P))
            ]
        )
    count = -1
    while True:
        palette: Dict[Any, int] = {}
        for P, col in zip(posets, colours):
            for x in range(len(P)):
                palette.setdefault(col[x], len(palette))
        numbered = [[palette[c] for c in col] for col in colours]
        if len(palette) == count:
            return numbered
        count = len(palette)
        colours = [
            [
                (
                    col[x],
                    tuple(sorted(col[z] for z in range(len(P)) if P.less(x, z))),
                    tuple(sorted(col[y] for y in range(len(P)) if P.less(y, x))),
                )
                for x in range(len(P))
            ]
            for P, col in zip(posets, numbered)
        ]


def isomorphism(P: FinPoset, Q: FinPoset) -> Optional[List[int]]:
    """An order isomorphism ``P -> Q`` as a list of images, or ``None``.

    Colour refinement narrows the candidates; backtracking decides.
    """
    if len(P) != len(Q):
        return None
    if sum(map(sum, P.leq)) != sum(map(sum, Q.leq)):
        return None
    cp, cq = _refine([P, Q])
    if sorted(cp) != sorted(cq):
        return None
    n = len(P)
    class_size = {c: cp.count(c) for c in cp}
    order = sorted(range(n), key=lambda x: (class_size[cp[x]], x))
    image: Dict[int, int] = {}
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        p = order[k]
        for q in range(n):
            if used[q] or cq[q] != cp[p]:
                continue
            if all(
                P.leq[p][p2] == Q.leq[q][q2] and P.leq[p2][p] == Q.leq[q2][q]
                for p2, q2 in image.items()
            ):
                image[p] = q
                used[q] = True
                if extend(k + 1):
                    return True
                del image[p]
                used[q] = False
        return False

    if not extend(0):
        return None
    return [image[p] for p in range(n)]


def is_isomorphic(P: FinPoset, Q: FinPoset) -> bool:
    return isomorphism(P, Q) is not None


# _______________________ Cheng's check _____________________


def cheng_check(P: FinPoset, budgets: Budgets = DEFAULT_BUDGETS) -> VerificationReport:
    """``E(P)`` is a point exactly when ``cd(P) <= 1``, the latter decided
    by resolving ``Z̄`` over ``P``.

    Raises:
        NoInitialObjectError: If ``P`` has no least element.
    """
    if P.initial() is None:
        raise NoInitialObjectError("Poset has no initial element")
    reduced = e_reduction(P)
    category = P.category()
    verdict = category_cd_le(category, 1, budgets)
    report = VerificationReport("cheng", details={"size": len(P), "reduced_size": len(reduced)})
    report.add(
        "agreement",
        reduced.is_point() == verdict.le,
        e_point=reduced.is_point(),
        cd_le_1=verdict.le,
    )
    verdicts = category_cd_report(category, 2, budgets)
    report.details["cd"] = next((v.n for v in verdicts if v.le), None)
    return report


# _________________________ Crowns __________________________


def maximal_subgroups(G: PermGroup, budgets: Budgets = DEFAULT_BUDGETS) -> List[Subgroup]:
    proper = [H for H in all_subgroups(G, budgets) if not H.is_whole()]
    return [
        H for H in proper if not any(H != K and H.issubgroup(K) for K in proper)
    ]


@dataclass
class CrownWitness:
    """
    Collections ``A`` of maximal subgroups and ``B`` of maximal-size
    pairwise intersections forming a crown.

    ``H``, ``K`` are maximal with ``T = H ∩ K`` normal in neither;
    ``y1 ∈ K \\ H`` and ``y2 ∈ H \\ K`` move ``T``.
    """

    group: PermGroup
    A: List[Subgroup]
    B: List[Subgroup]
    H: Subgroup
    K: Subgroup
    T: Subgroup
    y1: int
    y2: int
    intersection_order: int
    conditions: Dict[str, bool] = field(default_factory=dict)

    def check(self, maximal: Sequence[Subgroup]) -> None:
        """Raises:
        VerificationError: If a crown condition fails.
        """
        maximal_masks = {M.mask for M in maximal}
        self.conditions = {
            "maximal": all(a.mask in maximal_masks for a in self.A),
            "b_in_two": all(sum(b.issubgroup(a) for a in self.A) >= 2 for b in self.B),
            "a_has_two": all(sum(b.issubgroup(a) for b in self.B) >= 2 for a in self.A),
            "intersection_order": all(b.order == self.intersection_order for b in self.B),
        }
        failed = [name for name, ok in self.conditions.items() if not ok]
        if failed:
            raise VerificationError("Crown conditions fail: %s", failed)

    def to_json(self) -> dict:
        G = self.group
        return {
            "A": [list(a.members) for a in self.A],
            "B": [list(b.members) for b in self.B],
            "A_orders": sorted({a.order for a in self.A}),
            "B_orders": sorted({b.order for b in self.B}),
            "H": list(self.H.members),
            "K": list(self.K.members),
            "T": list(self.T.members),
            "y1": list(G.elements[self.y1]),
            "y2": list(G.elements[self.y2]),
            "conditions": self.conditions,
        }


def _normal_in(T: Subgroup, H: Subgroup) -> bool:
    G = T.group
    return all(G.conjugate_mask(h, T.mask) == T.mask for h in H.generators)


def find_crown(G: PermGroup, budgets: Budgets = DEFAULT_BUDGETS) -> CrownWitness:
    """Builds crown collections by following the construction in the
    proof that they exist.

    Raises:
        NotSimpleError: If ``G`` is abelian or not simple.
        VerificationError: If the construction breaks down.
    """
    if G.is_abelian() or not is_simple(G):
        raise NotSimpleError("%r is not a non-abelian simple group", G)
    maximal = maximal_subgroups(G, budgets)
    pairs = [
        (H1, H2, H1.intersection(H2))
        for i, H1 in enumerate(maximal)
        for H2 in maximal[i + 1 :]
    ]
    pairs.sort(key=lambda p: (-p[2].order, p[0].sort_key, p[1].sort_key))
    if not pairs or pairs[0][2].order == 1:
        raise VerificationError("Maximal subgroups intersect trivially")
    H1, H2, T = pairs[0]
    m = T.order
    if _normal_in(T, H1) and _normal_in(T, H2):
        raise VerificationError("Intersection is normal in both maximal subgroups")
    if _normal_in(T, H1) or _normal_in(T, H2):
        if _normal_in(T, H2):
            H1, H2 = H2, H1
        x = next(g for g in H1.members if g not in H2)
        H1, H2 = H2, H2.conjugate(x)
        T = H1.intersection(H2)
        if T.order != m or _normal_in(T, H1) or _normal_in(T, H2):
            raise VerificationError("Normality adjustment failed")
    H, K = H1, H2
    y1 = next(y for y in K.members if y not in H and G.conjugate_mask(y, T.mask) != T.mask)
    y2 = next(y for y in H.members if y not in K and G.conjugate_mask(y, T.mask) != T.mask)
    z = G.mul[y1][y2]
    powers = [G.identity]
    while G.mul[powers[-1]][z] != G.identity:
        powers.append(G.mul[powers[-1]][z])
    A, B = {}, {}
    for p in powers:
        q = G.mul[p][y1]
        for S in (K.conjugate(p), H.conjugate(q)):
            A[S.mask] = S
        for S in (T.conjugate(p), T.conjugate(q)):
            B[S.mask] = S
    witness = CrownWitness(
        G,
        sorted(A.values(), key=lambda S: S.sort_key),
        sorted(B.values(), key=lambda S: S.sort_key),
        H,
        K,
        T,
        y1,
        y2,
        m,
    )
    witness.check(maximal)
    logger.info("Crown: |A| = %s, |B| = %s, |b| = %s", len(witness.A), len(witness.B), m)
    return witness


def verify_crown_survives(
    G: PermGroup,
    budgets: Budgets = DEFAULT_BUDGETS,
    direct: bool = False,
    seeds: Sequence[int] = (),
) -> VerificationReport:
    """``A ∪ B`` survives in ``E(A_P(G))``, so ``E`` is not a point.

    ``direct`` additionally decides ``cd(A_P(G)) <= 1`` by resolution;
    each seed in ``seeds`` replays the reduction in random order and
    compares the result up to isomorphism.
    """
    witness = find_crown(G, budgets)
    poset = subgroup_poset(proper_family(G, budgets))
    P = from_subgroup_poset(poset)
    report = VerificationReport(
        "crown", details={"witness": witness.to_json(), "poset_size": len(P)}
    )
    crown_masks = {S.mask for S in witness.A + witness.B}
    reduced = {}
    for regime in ("canonical", "depth_one_first"):
        E = e_reduction(P, regime)
        reduced[regime] = E
        kept = {S.mask for S in E.elements}
        report.add("contains_crown", crown_masks <= kept, regime=regime, size=len(E))
        report.add("not_point", not E.is_point(), regime=regime)
    report.add(
        "regimes_isomorphic", is_isomorphic(reduced["canonical"], reduced["depth_one_first"])
    )
    for seed in seeds:
        E = e_reduction(P, "random", seed)
        report.add("random_isomorphic", is_isomorphic(E, reduced["canonical"]), seed=seed)
    report.details["steps"] = [
        "E(A_P(G)) is not a point",
        "so cd(A_P(G)) >= 2 by the E-reduction criterion",
        "so cd_P(G) >= 2 since cd(A_P(G)) <= cd_P(G)",
    ]
    if direct:
        verdict = category_cd_le(P.category(), 1, budgets)
        report.add("direct_cd_gt_1", not verdict.le)
    return report
