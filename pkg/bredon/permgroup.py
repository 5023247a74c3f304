"""
Finite permutation groups.

Groups are realized by permutations of ``{0, ..., d-1}``. Elements are
enumerated exhaustively and indexed in lexicographic order of their image
tuples, so the identity always has index 0. Subgroups are bit masks over
element indices; the sorted member tuple is their canonical identity.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from bredon.config import DEFAULT_BUDGETS, Budgets
from bredon.exceptions import (
    InvalidActionError,
    InvalidPermutationError,
    NotASubgroupError,
    NotNormalError,
    SizeBoundError,
    VerificationError,
)
from bredon.typing import Perm

logger = logging.getLogger(__name__)


# ______________________ Permutations ______________________


def perm_compose(p: Perm, q: Perm) -> Perm:
    """``p ∘ q``: apply ``q`` first, then ``p``."""
    return tuple(p[i] for i in q)


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, image in enumerate(p):
        inv[image] = i
    return tuple(inv)


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def validate_perm(images: Sequence[int], degree: int) -> Perm:
    """Checks that ``images`` is a bijection of ``{0, ..., degree-1}``.

    Raises:
        InvalidPermutationError: If it is not.
    """
    perm = tuple(int(i) for i in images)
    if len(perm) != degree or sorted(perm) != list(range(degree)):
        raise InvalidPermutationError(
            "Not a permutation of degree %s: %s", degree, list(images)
        )
    return perm


def perm_from_cycles(degree: int, cycles: Iterable[Sequence[int]]) -> Perm:
    """Builds a permutation from disjoint cycles, e.g. ``[(0, 1, 2)]``."""
    images = list(range(degree))
    for cycle in cycles:
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            images[a] = b
    return validate_perm(images, degree)


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def _sims_filter(degree: int, gens: Iterable[Perm]) -> List[Perm]:
    # At most one generator per (first moved point, its image).
    table: Dict[Tuple[int, int], Perm] = {}
    for h in gens:
        while True:
            moved = next((i for i in range(degree) if h[i] != i), None)
            if moved is None:
                break
            key = (moved, h[moved])
            if key not in table:
                table[key] = h
                break
            h = perm_compose(perm_inverse(table[key]), h)
    return [table[k] for k in sorted(table)]


def stabilizer_chain_order(degree: int, generators: Sequence[Perm]) -> int:
    """Group order from a stabilizer chain (orbit-stabilizer at each level).

    Used only to cross-check the exhaustive element enumeration.
    """
    identity = identity_perm(degree)
    gens = _sims_filter(degree, [g for g in generators if g != identity])
    order = 1
    for base in range(degree):
        if not gens:
            break
        transversal = {base: identity}
        queue = [base]
        for x in queue:
            for s in gens:
                y = s[x]
                if y not in transversal:
                    transversal[y] = perm_compose(s, transversal[x])
                    queue.append(y)
        order *= len(transversal)
        schreier = []
        for x, u in transversal.items():
            for s in gens:
                h = perm_compose(perm_inverse(transversal[s[x]]), perm_compose(s, u))
                if h != identity:
                    schreier.append(h)
        gens = _sims_filter(degree, schreier)
    return order


# ________________________ Groups __________________________


class PermGroup:
    """
    A finite group of permutations, enumerated on demand.

    Attributes
    ----------
    degree : int
        Number of points permuted.
    generators : tuple of Perm
        The generating permutations as given.
    name : str or None
        Optional display name (``"A5"``, ``"Z/3 x| Z/2"``).
    """

    def __init__(
        self, degree: int, generators: Sequence[Sequence[int]], name: Optional[str] = None
    ) -> None:
        if degree < 1:
            raise InvalidPermutationError("Degree must be positive, got %s", degree)
        self.degree = degree
        self.generators: Tuple[Perm, ...] = tuple(
            validate_perm(g, degree) for g in generators
        )
        self.name = name
        self._cache: Dict[str, object] = {}

    def __repr__(self) -> str:
        label = self.name or "PermGroup"
        return f"<{label} degree={self.degree} gens={len(self.generators)}>"

    @cached_property
    def elements(self) -> Tuple[Perm, ...]:
        identity = identity_perm(self.degree)
        seen = {identity}
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for s in self.generators:
                y = perm_compose(x, s)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        expected = stabilizer_chain_order(self.degree, self.generators)
        if expected != len(seen):
            raise VerificationError(
                "Closure has %s elements but the stabilizer chain gives %s",
                len(seen),
                expected,
            )
        logger.debug("Enumerated %s elements of %r", len(seen), self)
        return tuple(sorted(seen))

    @cached_property
    def index(self) -> Dict[Perm, int]:
        return {p: i for i, p in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> int:
        return 0

    @cached_property
    def mul(self) -> List[List[int]]:
        """``mul[i][j]`` is the index of ``elements[i] ∘ elements[j]``."""
        index, elements = self.index, self.elements
        return [[index[perm_compose(p, q)] for q in elements] for p in elements]

    @cached_property
    def inv(self) -> List[int]:
        return [self.index[perm_inverse(p)] for p in self.elements]

    @cached_property
    def gen_indices(self) -> Tuple[int, ...]:
        return tuple(self.index[g] for g in self.generators)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def element_index(self, perm: Sequence[int]) -> int:
        perm = validate_perm(perm, self.degree)
        try:
            return self.index[perm]
        except KeyError:
            raise NotASubgroupError("Permutation %s is not in %r", list(perm), self)

    def conj(self, g: int, x: int) -> int:
        """Index of ``g x g^-1``."""
        return self.mul[self.mul[g][x]][self.inv[g]]

    def conjugation(self, g: int) -> List[int]:
        key = f"conj:{g}"
        table = self._cache.get(key)
        if table is None:
            table = [self.conj(g, x) for x in range(self.order)]
            self._cache[key] = table
        return table  # type: ignore[return-value]

    def conjugate_mask(self, g: int, mask: int) -> int:
        table = self.conjugation(g)
        return mask_of(table[x] for x in bits(mask))

    def closure(self, gens: Iterable[int], seed: int = 1) -> int:
        """Mask of the subgroup generated by ``gens`` and the seed set."""
        gens = list(gens)
        mask = seed | 1
        queue = deque(bits(mask))
        mul = self.mul
        while queue:
            x = queue.popleft()
            row = mul[x]
            for s in gens:
                y = row[s]
                if not (mask >> y) & 1:
                    mask |= 1 << y
                    queue.append(y)
        return mask

    def subgroup(self, gens: Iterable[Sequence[int]]) -> "Subgroup":
        """The subgroup generated by the given permutations."""
        return Subgroup(self, self.closure(self.element_index(g) for g in gens))

    def subgroup_from_mask(self, mask: int) -> "Subgroup":
        """Wraps ``mask``, checking that it is a subgroup.

        Raises:
            NotASubgroupError: If the mask is not closed or misses 1.
        """
        if not mask & 1 or mask & ~self.full_mask:
            raise NotASubgroupError("Element set is not a subgroup of %r", self)
        mul, inv = self.mul, self.inv
        members = list(bits(mask))
        for a in members:
            if not (mask >> inv[a]) & 1:
                raise NotASubgroupError("Element set is not closed under inverses")
            row = mul[a]
            for b in members:
                if not (mask >> row[b]) & 1:
                    raise NotASubgroupError("Element set is not closed under products")
        return Subgroup(self, mask)

    @property
    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, 1)

    @property
    def whole(self) -> "Subgroup":
        return Subgroup(self, self.full_mask)

    def is_abelian(self) -> bool:
        gens = self.gen_indices
        return all(self.mul[a][b] == self.mul[b][a] for a in gens for b in gens)

    def left_cosets(self, K: "Subgroup") -> List[int]:
        """Masks of the left cosets ``gK``, ordered by least element."""
        self.check_subgroup(K)
        seen = 0
        cosets = []
        members = K.members
        for g in range(self.order):
            if (seen >> g) & 1:
                continue
            coset = mask_of(self.mul[g][k] for k in members)
            seen |= coset
            cosets.append(coset)
        return cosets

    def check_subgroup(self, H: "Subgroup") -> None:
        if H.group is not self:
            raise NotASubgroupError("%r is not a subgroup of %r", H, self)


@dataclass(frozen=True, eq=False)
class Subgroup:
    """
    A subgroup of a :class:`PermGroup`, stored as a mask of element indices.

    Equality and hashing use the ambient group's identity and the mask.
    """

    group: PermGroup = field(repr=False)
    mask: int

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.group is other.group and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> x) & 1)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, members={list(self.members)})"

    @cached_property
    def members(self) -> Tuple[int, ...]:
        return tuple(bits(self.mask))

    @property
    def order(self) -> int:
        return bin(self.mask).count("1")

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.order, self.members)

    def __lt__(self, other: "Subgroup") -> bool:
        return self.sort_key < other.sort_key

    def issubgroup(self, other: "Subgroup") -> bool:
        return self.mask & ~other.mask == 0

    def is_trivial(self) -> bool:
        return self.mask == 1

    def is_whole(self) -> bool:
        return self.mask == self.group.full_mask

    @cached_property
    def generators(self) -> Tuple[int, ...]:
        """A small generating set, chosen greedily by element index."""
        gens: List[int] = []
        span = 1
        for x in self.members:
            if not (span >> x) & 1:
                gens.append(x)
                span = self.group.closure(gens)
                if span == self.mask:
                    break
        return tuple(gens)

    @property
    def perms(self) -> List[Perm]:
        return [self.group.elements[i] for i in self.members]

    def conjugate(self, g: int) -> "Subgroup":
        """``g H g^-1``."""
        return Subgroup(self.group, self.group.conjugate_mask(g, self.mask))

    def is_normal(self) -> bool:
        G = self.group
        return all(G.conjugate_mask(g, self.mask) == self.mask for g in G.gen_indices)

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, self.mask & other.mask)

    @cached_property
    def as_group(self) -> PermGroup:
        """This subgroup as a permutation group in its own right."""
        name = None if self.group.name is None else f"sub({self.group.name})"
        return PermGroup(
            self.group.degree, [self.group.elements[i] for i in self.generators], name
        )

    @cached_property
    def embedding(self) -> Tuple[int, ...]:
        """Parent index of each element of :attr:`as_group`."""
        parent = self.group.index
        return tuple(parent[p] for p in self.as_group.elements)

    def lift(self, sub: "Subgroup") -> "Subgroup":
        """A subgroup of :attr:`as_group` as a subgroup of the parent."""
        emb = self.embedding
        return Subgroup(self.group, mask_of(emb[i] for i in sub.members))

    def restrict(self, sub: "Subgroup") -> "Subgroup":
        """A parent subgroup contained in this one, inside :attr:`as_group`."""
        if not sub.issubgroup(self):
            raise NotASubgroupError("%r is not contained in %r", sub, self)
        position = {p: i for i, p in enumerate(self.embedding)}
        return Subgroup(self.as_group, mask_of(position[x] for x in sub.members))

    def to_json(self) -> Dict[str, object]:
        return {
            "order": self.order,
            "generators": [list(self.group.elements[i]) for i in self.generators],
        }


# ______________________ Operations ________________________


def group_from_generators(
    degree: int, gens: Sequence[Sequence[int]], name: Optional[str] = None
) -> PermGroup:
    """The closure of ``gens`` as a permutation group of the given degree.

    Raises:
        InvalidPermutationError: If a generator is not a bijection.
    """
    G = PermGroup(degree, gens, name)
    logger.debug("Built %r of order %s", G, G.order)
    return G


def all_subgroups(G: PermGroup, budgets: Budgets = DEFAULT_BUDGETS) -> List[Subgroup]:
    """All subgroups of ``G``, sorted by order then member set.

    Layer k+1 is obtained by adjoining single elements to the layer-k
    subgroups (cyclic extension), deduplicated by member set.

    Raises:
        SizeBoundError: If ``|G|`` exceeds ``budgets.max_group_order``.
    """
    if G.order > budgets.max_group_order:
        raise SizeBoundError(
            "Group order %s exceeds the subgroup enumeration bound %s",
            G.order,
            budgets.max_group_order,
        )
    cached = G._cache.get("subgroups")
    if cached is not None:
        return cached  # type: ignore[return-value]
    found = {1: ()}  # mask -> generators
    layer = [1]
    depth = 0
    while layer:
        next_layer = []
        for mask in layer:
            gens = found[mask]
            visited = mask
            for g in range(G.order):
                if (visited >> g) & 1:
                    continue
                visited |= mask_of(G.mul[g][s] for s in bits(mask))
                extended = G.closure(gens + (g,), mask)
                if extended not in found:
                    found[extended] = gens + (g,)
                    next_layer.append(extended)
        depth += 1
        logger.debug("Subgroup layer %s: %s new subgroups", depth, len(next_layer))
        layer = next_layer
    result = sorted((Subgroup(G, m) for m in found), key=lambda H: H.sort_key)
    G._cache["subgroups"] = result
    return result


@dataclass
class ConjugacyClass:
    """
    One conjugacy class of subgroups.

    Attributes
    ----------
    representative : Subgroup
        The member with the lexicographically least member set.
    members : list of Subgroup
        All conjugates, sorted.
    conjugators : dict
        For each member mask, an element ``c`` with
        ``member = c representative c^-1``.
    """

    representative: Subgroup
    members: List[Subgroup]
    conjugators: Dict[int, int]

    def __contains__(self, H: Subgroup) -> bool:
        return H.mask in self.conjugators

    def __len__(self) -> int:
        return len(self.members)


def _conjugacy_orbit(G: PermGroup, rep: Subgroup) -> Dict[int, int]:
    conjugators = {rep.mask: G.identity}
    queue = deque([rep.mask])
    while queue:
        mask = queue.popleft()
        c = conjugators[mask]
        for s in G.gen_indices:
            image = G.conjugate_mask(s, mask)
            if image not in conjugators:
                conjugators[image] = G.mul[s][c]
                queue.append(image)
    return conjugators


def conjugacy_classes_of_subgroups(
    G: PermGroup, budgets: Budgets = DEFAULT_BUDGETS
) -> List[ConjugacyClass]:
    """Partition of :func:`all_subgroups` into conjugacy classes.

    Classes are ordered by their representatives.
    """
    cached = G._cache.get("classes")
    if cached is not None:
        return cached  # type: ignore[return-value]
    classes = []
    assigned: set = set()
    for H in all_subgroups(G, budgets):
        if H.mask in assigned:
            continue
        conjugators = _conjugacy_orbit(G, H)
        assigned.update(conjugators)
        members = sorted((Subgroup(G, m) for m in conjugators), key=lambda K: K.sort_key)
        classes.append(ConjugacyClass(H, members, conjugators))
    G._cache["classes"] = classes
    return classes


def normalizer(G: PermGroup, H: Subgroup) -> Subgroup:
    """The largest subgroup of ``G`` in which ``H`` is normal."""
    G.check_subgroup(H)
    gens = H.generators
    mask = 0
    for g in range(G.order):
        if all(G.conj(g, h) in H for h in gens):
            mask |= 1 << g
    return Subgroup(G, mask)


def double_cosets(G: PermGroup, H: Subgroup, K: Subgroup) -> List[FrozenSet[int]]:
    """The double cosets ``H g K``, ordered by least element."""
    G.check_subgroup(H)
    G.check_subgroup(K)
    seen = 0
    blocks = []
    for g in range(G.order):
        if (seen >> g) & 1:
            continue
        left = [G.mul[h][g] for h in H.members]
        block = mask_of(G.mul[x][k] for x in left for k in K.members)
        seen |= block
        blocks.append(frozenset(bits(block)))
    return blocks


def normal_closure(G: PermGroup, x: int) -> Subgroup:
    """The smallest normal subgroup containing the element ``x``."""
    mask = G.closure([x])
    while True:
        grown = G.closure(
            [G.conj(g, y) for g in G.gen_indices for y in bits(mask)], mask
        )
        if grown == mask:
            return Subgroup(G, mask)
        mask = grown


def proper_normal_subgroup(G: PermGroup) -> Optional[Subgroup]:
    """A proper nontrivial normal subgroup (smallest, then least), if any."""
    candidates = {
        normal_closure(G, x).mask for x in range(1, G.order)
    } - {G.full_mask}
    if not candidates:
        return None
    return min((Subgroup(G, m) for m in candidates), key=lambda N: N.sort_key)


def is_simple(G: PermGroup) -> bool:
    return G.order > 1 and proper_normal_subgroup(G) is None


# _______________________ Quotients _________________________


@dataclass
class Quotient:
    """
    ``Γ/N`` realized as a permutation group on the cosets of ``N``.

    Attributes
    ----------
    group : PermGroup
        The quotient group.
    parent : PermGroup
        ``Γ``.
    kernel : Subgroup
        ``N``.
    projection : tuple of int
        Quotient index of each element of ``Γ``.
    """

    group: PermGroup
    parent: PermGroup
    kernel: Subgroup
    projection: Tuple[int, ...]

    def image(self, H: Subgroup) -> Subgroup:
        return Subgroup(self.group, mask_of(self.projection[x] for x in H.members))

    def preimage(self, L: Subgroup) -> Subgroup:
        return Subgroup(
            self.parent,
            mask_of(x for x, q in enumerate(self.projection) if (L.mask >> q) & 1),
        )

    def lift(self, q: int) -> int:
        """The least element of ``Γ`` projecting to ``q``."""
        return self.projection.index(q)


def quotient_group(G: PermGroup, N: Subgroup) -> Quotient:
    """``G/N`` acting on the left cosets of ``N``.

    Raises:
        NotNormalError: If ``N`` is not normal in ``G``.
    """
    G.check_subgroup(N)
    if not N.is_normal():
        raise NotNormalError("%r is not normal in %r", N, G)
    cosets = G.left_cosets(N)
    coset_of = [0] * G.order
    reps = []
    for i, coset in enumerate(cosets):
        reps.append(next(bits(coset)))
        for x in bits(coset):
            coset_of[x] = i

    def action(g: int) -> Perm:
        return tuple(coset_of[G.mul[g][r]] for r in reps)

    name = None if G.name is None else f"{G.name}/N"
    Q = PermGroup(len(cosets), [action(g) for g in G.gen_indices], name)
    projection = tuple(Q.index[action(x)] for x in range(G.order))
    return Quotient(Q, G, N, projection)


# ________________________ Actions __________________________


@dataclass(frozen=True)
class GAction:
    """
    An action of ``actor`` on ``target`` by automorphisms.

    ``images[g]`` is the automorphism of ``target`` for the actor element of
    index ``g``, as a permutation of target element indices.
    """

    actor: PermGroup
    target: PermGroup
    images: Tuple[Perm, ...]

    def apply(self, g: int, alpha: int) -> int:
        """Index of ``{}^g alpha``."""
        return self.images[g][alpha]

    @classmethod
    def trivial(cls, actor: PermGroup, target: PermGroup) -> "GAction":
        identity = identity_perm(target.order)
        return cls(actor, target, tuple(identity for _ in range(actor.order)))

    @classmethod
    def from_generator_images(
        cls, actor: PermGroup, target: PermGroup, generator_images: Dict[int, Sequence[int]]
    ) -> "GAction":
        """Extends automorphisms given on the actor's generators.

        Generators missing from ``generator_images`` act trivially.

        Raises:
            InvalidActionError: If an image is not an automorphism, or the
                assignment does not extend to a homomorphism.
        """
        n = target.order
        unknown = set(generator_images) - set(range(len(actor.generators)))
        if unknown:
            raise InvalidActionError("Unknown generator indices %s", sorted(unknown))
        gen_maps = []
        for k in range(len(actor.generators)):
            images = generator_images.get(k, range(n))
            try:
                perm = validate_perm(images, n)
            except InvalidPermutationError:
                raise InvalidActionError(
                    "Image of generator %s is not a bijection of %s elements", k, n
                )
            _check_automorphism(target, perm)
            gen_maps.append(perm)

        maps: Dict[int, Perm] = {actor.identity: identity_perm(n)}
        queue = deque([actor.identity])
        while queue:
            x = queue.popleft()
            for s, perm in zip(actor.gen_indices, gen_maps):
                y = actor.mul[x][s]
                composed = perm_compose(maps[x], perm)
                if y not in maps:
                    maps[y] = composed
                    queue.append(y)
                elif maps[y] != composed:
                    raise InvalidActionError(
                        "Generator images do not define a homomorphism"
                    )
        return cls(actor, target, tuple(maps[g] for g in range(actor.order)))

    def restricted(self, H: Subgroup) -> "GAction":
        """The action of ``H`` (as :attr:`Subgroup.as_group`)."""
        return GAction(
            H.as_group, self.target, tuple(self.images[g] for g in H.embedding)
        )

    def validate(self) -> None:
        """Checks the automorphism and homomorphism laws exhaustively."""
        for perm in self.images:
            _check_automorphism(self.target, perm)
        if self.images[self.actor.identity] != identity_perm(self.target.order):
            raise InvalidActionError("The identity does not act trivially")
        for g in range(self.actor.order):
            for h in range(self.actor.order):
                gh = self.actor.mul[g][h]
                if self.images[gh] != perm_compose(self.images[g], self.images[h]):
                    raise InvalidActionError("Action is not a homomorphism")


def _check_automorphism(target: PermGroup, perm: Perm) -> None:
    mul = target.mul
    for a in range(target.order):
        row, pa = mul[a], mul[perm[a]]
        for b in range(target.order):
            if perm[row[b]] != pa[perm[b]]:
                raise InvalidActionError("Map is not an automorphism of the target")


@dataclass
class SemidirectProduct:
    """
    ``π ⋊ G`` acting on the set ``π × G`` by left translation.

    The point ``(β, h)`` has index ``β * |G| + h`` (element indices).
    """

    group: PermGroup
    pi: PermGroup
    actor: PermGroup
    action: GAction
    pairs: Tuple[Tuple[int, int], ...]
    pair_index: Dict[Tuple[int, int], int]

    def element(self, alpha: int, g: int) -> int:
        """Index of ``(alpha, g)`` in :attr:`group`."""
        return self.pair_index[(alpha, g)]

    def decompose(self, x: int) -> Tuple[int, int]:
        return self.pairs[x]

    @cached_property
    def pi_subgroup(self) -> Subgroup:
        """The normal subgroup ``π × 1``."""
        return Subgroup(self.group, mask_of(self.element(a, 0) for a in range(self.pi.order)))

    @cached_property
    def actor_subgroup(self) -> Subgroup:
        """The complement ``1 × G``."""
        return Subgroup(
            self.group, mask_of(self.element(0, g) for g in range(self.actor.order))
        )

    def embed_actor_subgroup(self, H: Subgroup) -> Subgroup:
        """``1 × H`` for a subgroup ``H`` of the actor."""
        return Subgroup(self.group, mask_of(self.element(0, g) for g in H.members))


def semidirect_product(pi: PermGroup, G: PermGroup, act: GAction) -> SemidirectProduct:
    """Realizes ``(α,g)·(β,h) = (α ᵍβ, gh)`` by permutations of ``π × G``.

    Raises:
        InvalidActionError: If ``act`` is not an action of ``G`` on ``π``.
        VerificationError: If the realized group fails the semidirect
            product invariants.
    """
    if act.actor is not G or act.target is not pi:
        raise InvalidActionError("Action does not belong to these groups")
    act.validate()
    n_pi, n_g = pi.order, G.order

    def translation(alpha: int, g: int) -> Perm:
        row_pi, row_g, image = pi.mul[alpha], G.mul[g], act.images[g]
        return tuple(
            row_pi[image[beta]] * n_g + row_g[h] for beta in range(n_pi) for h in range(n_g)
        )

    gens = [translation(a, 0) for a in pi.gen_indices]
    gens += [translation(0, g) for g in G.gen_indices]
    name = None
    if pi.name and G.name:
        name = f"{pi.name} x| {G.name}"
    group = PermGroup(n_pi * n_g, gens or [identity_perm(n_pi * n_g)], name)
    if group.order != n_pi * n_g:
        raise VerificationError(
            "Semidirect product has order %s, expected %s", group.order, n_pi * n_g
        )
    pairs = tuple(divmod(p[0], n_g) for p in group.elements)
    pair_index = {pair: x for x, pair in enumerate(pairs)}
    product = SemidirectProduct(group, pi, G, act, pairs, pair_index)

    if product.pi_subgroup.mask & product.actor_subgroup.mask != 1:
        raise VerificationError("Embedded factors intersect nontrivially")
    if not product.pi_subgroup.is_normal():
        raise VerificationError("Embedded normal factor is not normal")
    for g in range(n_g):
        x = product.element(0, g)
        for alpha in range(n_pi):
            image = group.conj(x, product.element(alpha, 0))
            if image != product.element(act.apply(g, alpha), 0):
                raise VerificationError("Conjugation does not realize the action")
    logger.debug("Built semidirect product of order %s", group.order)
    return product


# _____________________ Named groups ________________________


def cyclic(n: int) -> PermGroup:
    gens = [tuple((i + 1) % n for i in range(n))] if n > 1 else []
    return PermGroup(n, gens, f"Z/{n}")


def symmetric(n: int) -> PermGroup:
    if n < 2:
        return PermGroup(1, [], "Sym(1)")
    gens = [perm_from_cycles(n, [(0, 1)]), tuple((i + 1) % n for i in range(n))]
    return PermGroup(n, gens, f"Sym({n})")


def alternating(n: int) -> PermGroup:
    if n < 3:
        return PermGroup(max(n, 1), [], f"A{n}")
    if n == 5:
        gens = [perm_from_cycles(5, [(0, 1, 2)]), perm_from_cycles(5, [(2, 3, 4)])]
    else:
        gens = [perm_from_cycles(n, [(0, 1, k)]) for k in range(2, n)]
    return PermGroup(n, gens, f"A{n}")


def dihedral(n: int) -> PermGroup:
    """The dihedral group of order ``2n`` acting on an ``n``-gon."""
    rotation = tuple((i + 1) % n for i in range(n))
    reflection = tuple((-i) % n for i in range(n))
    return PermGroup(n, [rotation, reflection], f"D{n}")


def klein_four() -> PermGroup:
    return PermGroup(
        4,
        [perm_from_cycles(4, [(0, 1), (2, 3)]), perm_from_cycles(4, [(0, 2), (1, 3)])],
        "Z/2xZ/2",
    )


def quaternion() -> PermGroup:
    """``Q8`` in its regular representation on ``±1, ±i, ±j, ±k``."""
    units = "1ijk"
    table = {
        ("1", u): (1, u) for u in units
    }
    table.update({(u, "1"): (1, u) for u in units})
    table.update(
        {
            ("i", "i"): (-1, "1"),
            ("j", "j"): (-1, "1"),
            ("k", "k"): (-1, "1"),
            ("i", "j"): (1, "k"),
            ("j", "k"): (1, "i"),
            ("k", "i"): (1, "j"),
            ("j", "i"): (-1, "k"),
            ("k", "j"): (-1, "i"),
            ("i", "k"): (-1, "j"),
        }
    )
    points = [(s, u) for u in units for s in (1, -1)]
    position = {p: i for i, p in enumerate(points)}

    def left(unit: str) -> Perm:
        images = []
        for sign, u in points:
            s, v = table[(unit, u)]
            images.append(position[(sign * s, v)])
        return tuple(images)

    return PermGroup(8, [left("i"), left("j")], "Q8")


def direct_product(A: PermGroup, B: PermGroup) -> PermGroup:
    """``A × B`` acting on the disjoint union of the two point sets."""
    shift = A.degree
    gens = [tuple(g) + tuple(range(shift, shift + B.degree)) for g in A.generators]
    gens += [tuple(range(shift)) + tuple(shift + i for i in g) for g in B.generators]
    name = None if not (A.name and B.name) else f"{A.name}x{B.name}"
    return PermGroup(shift + B.degree, gens, name)
