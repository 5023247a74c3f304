"""
Orbit categories and the functors between their module categories.

The orbit category ``O_F(Γ)`` has the cosets ``Γ/H`` (``H`` in ``F``) as
objects. An arrow ``Γ/H -> Γ/K`` is a coset ``γK`` with ``γ⁻¹Hγ <= K``,
labelled here by the least element of the coset, and ``γK`` followed by
``γ'L`` is ``γγ'L``. By default one object per conjugacy class is kept
(the skeleton), represented by the class member with the least element set.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from bredon.config import DEFAULT_BUDGETS, Budgets
from bredon.exceptions import (
    BudgetExceededError,
    InvalidModuleError,
    NotASubgroupError,
    NotNormalError,
    UnsupportedInputError,
    VerificationError,
)
from bredon.family import Family, intersect_with_subgroup, quotient_family, subgroup_poset, subgroups_of
from bredon.permgroup import (
    ConjugacyClass,
    PermGroup,
    Quotient,
    Subgroup,
    bits,
    double_cosets,
    quotient_group,
)
from bredon.smith import kernel_basis, left_inverse, mat_mul, mat_vec, right_inverse, transpose
from bredon.typing import Matrix
from bredon.zcat import (
    CatModule,
    FinCategory,
    FreeModule,
    Functor,
    NatMap,
    constant_module,
    free_map,
    free_module,
)

logger = logging.getLogger(__name__)


class OrbitCategory:
    """
    ``O_F(Γ)`` as a :class:`FinCategory` with subgroup and coset labels.

    Attributes
    ----------
    group : PermGroup
    family : Family
    skeleton : bool
        One object per conjugacy class (default) or one per member.
    subgroups : list of Subgroup
        The subgroup ``H`` of each object ``Γ/H``.
    labels : list of int
        For each arrow, the least element of its coset ``γK``.
    category : FinCategory
    """

    def __init__(self, family: Family, skeleton: bool = True) -> None:
        G = family.group
        self.group = G
        self.family = family
        self.skeleton = skeleton
        self._classes: List[ConjugacyClass] = family.classes() if skeleton else []
        if skeleton:
            self.subgroups = [cls.representative for cls in self._classes]
        else:
            self.subgroups = list(family.members)
        self._object_of: Dict[int, int] = {H.mask: i for i, H in enumerate(self.subgroups)}
        for i, cls in enumerate(self._classes):
            for mask in cls.conjugators:
                self._object_of[mask] = i
        self._cache: Dict[Tuple[str, int], object] = {}

        self._coset_min = []
        for K in self.subgroups:
            least = [0] * G.order
            for coset in G.left_cosets(K):
                rep = next(bits(coset))
                for x in bits(coset):
                    least[x] = rep
            self._coset_min.append(least)

        arrows: List[Tuple[int, int]] = []
        self.labels: List[int] = []
        self._arrow_index: Dict[Tuple[int, int, int], int] = {}
        for a, H in enumerate(self.subgroups):
            for b, K in enumerate(self.subgroups):
                for coset in G.left_cosets(K):
                    gamma = next(bits(coset))
                    inv = G.inv[gamma]
                    if all(G.conj(inv, h) in K for h in H.generators):
                        self._arrow_index[(a, b, gamma)] = len(arrows)
                        arrows.append((a, b))
                        self.labels.append(gamma)

        composition = {}
        n = len(self.subgroups)
        outgoing: List[List[int]] = [[] for _ in range(n)]
        for f, (a, _) in enumerate(arrows):
            outgoing[a].append(f)
        for f, (a, b) in enumerate(arrows):
            for g in outgoing[b]:
                c = arrows[g][1]
                label = self._coset_min[c][G.mul[self.labels[f]][self.labels[g]]]
                composition[(g, f)] = self._arrow_index[(a, c, label)]
        identities = [self._arrow_index[(c, c, G.identity)] for c in range(n)]
        names = [f"G/H{i}(order {H.order})" for i, H in enumerate(self.subgroups)]
        self.category = FinCategory(
            names, arrows, composition, identities, [str(x) for x in self.labels]
        )
        logger.debug(
            "Orbit category: %s objects, %s arrows (skeleton=%s)", n, len(arrows), skeleton
        )

    def __repr__(self) -> str:
        return f"<OrbitCategory objects={len(self.subgroups)} skeleton={self.skeleton}>"

    def locate(self, L: Subgroup) -> Tuple[int, int]:
        """The object of ``Γ/L`` and ``c`` with ``L = c R c⁻¹``, ``R`` its
        subgroup."""
        try:
            obj = self._object_of[L.mask]
        except KeyError:
            raise NotASubgroupError("%r is not in the family", L)
        if not self.skeleton:
            return obj, self.group.identity
        return obj, self._classes[obj].conjugators[L.mask]

    def arrow(self, a: int, b: int, gamma: int) -> int:
        """The arrow ``γK`` from object ``a`` to object ``b``."""
        key = (a, b, self._coset_min[b][gamma])
        try:
            return self._arrow_index[key]
        except KeyError:
            raise VerificationError("Coset %s does not define an arrow %s -> %s", gamma, a, b)

    def transport(self, source: Subgroup, target: Subgroup, delta: int) -> int:
        """The arrow corresponding to ``δ·target: Γ/source -> Γ/target``."""
        G = self.group
        a, ca = self.locate(source)
        b, cb = self.locate(target)
        return self.arrow(a, b, G.mul[G.mul[G.inv[ca]][delta]][cb])

    def coset_rep(self, b: int, gamma: int) -> int:
        """The least element of ``γK`` for ``K`` the subgroup of object ``b``."""
        return self._coset_min[b][gamma]

    def object_of(self, L: Subgroup) -> int:
        return self.locate(L)[0]

    def constant(self) -> CatModule:
        return constant_module(self.category)

    def free(self, L: Subgroup) -> FreeModule:
        """The representable module at ``Γ/L``."""
        return free_module(self.category, self.object_of(L))

    # ___________________ derived categories ___________________

    def restriction(self, H: Subgroup) -> Tuple["OrbitCategory", Functor]:
        """``O_{H∩F}(H)`` and the induction functor into this category."""
        key = ("restrict", H.mask)
        if key not in self._cache:
            self.group.check_subgroup(H)
            sub = OrbitCategory(intersect_with_subgroup(self.family, H), self.skeleton)
            embed = H.embedding
            ob = [self.object_of(H.lift(J)) for J in sub.subgroups]
            ar = []
            for f in range(sub.category.n_arrows):
                a, b = sub.category.src[f], sub.category.dst[f]
                ar.append(
                    self.transport(
                        H.lift(sub.subgroups[a]), H.lift(sub.subgroups[b]), embed[sub.labels[f]]
                    )
                )
            functor = Functor(sub.category, self.category, ob, ar)
            functor.validate()
            self._cache[key] = (sub, functor)
        return self._cache[key]  # type: ignore[return-value]

    def quotient(self, N: Subgroup) -> Tuple[Quotient, "OrbitCategory", Functor]:
        """``O_{F_N}(Γ/N)`` and the functor ``p*`` into this category.

        Raises:
            NotNormalError: If ``N`` is not normal.
            UnsupportedInputError: If ``N`` is not in the family.
        """
        key = ("quotient", N.mask)
        if key not in self._cache:
            if N not in self.family:
                raise UnsupportedInputError("The normal subgroup must belong to the family")
            quotient = quotient_group(self.group, N)
            sub = OrbitCategory(quotient_family(self.family, N, quotient), self.skeleton)
            ob = [self.object_of(quotient.preimage(L)) for L in sub.subgroups]
            ar = []
            for f in range(sub.category.n_arrows):
                a, b = sub.category.src[f], sub.category.dst[f]
                ar.append(
                    self.transport(
                        quotient.preimage(sub.subgroups[a]),
                        quotient.preimage(sub.subgroups[b]),
                        quotient.lift(sub.labels[f]),
                    )
                )
            functor = Functor(sub.category, self.category, ob, ar)
            functor.validate()
            self._cache[key] = (quotient, sub, functor)
        return self._cache[key]  # type: ignore[return-value]

    def to_json(self) -> dict:
        G = self.group
        C = self.category
        return {
            "skeleton": self.skeleton,
            "objects": [
                {"order": H.order, "generators": H.to_json()["generators"]} for H in self.subgroups
            ],
            "homs": [
                {
                    "source": a,
                    "target": b,
                    "cosets": [list(G.elements[self.labels[f]]) for f in C.hom[a][b]],
                    "arrows": C.hom[a][b],
                }
                for a in range(C.n_objects)
                for b in range(C.n_objects)
                if C.hom[a][b]
            ],
            "composition": sorted([g, f, gf] for (g, f), gf in C.composition.items()),
        }


def orbit_category(family: Family, skeleton: bool = True) -> OrbitCategory:
    return OrbitCategory(family, skeleton)


# _________________________ Restriction _____________________


def restrict(orbit: OrbitCategory, M: CatModule, H: Subgroup) -> CatModule:
    """``res^Γ_H M``: precomposition with ``O_{H∩F}(H) -> O_F(Γ)``."""
    _, functor = orbit.restriction(H)
    return M.pullback(functor)


@dataclass
class DoubleCosetDecomposition:
    """
    ``res^Γ_H Z[O_F Γ(-, Γ/K)] ≅ ⊕ Z[O_{H∩F} H(-, H/(H ∩ γKγ⁻¹))]``.

    Attributes
    ----------
    blocks : list of frozenset
        The double cosets ``HγK``.
    representatives : list of int
        The least element ``γ`` of each block.
    summand : FreeModule
        The direct sum, over the orbit category of ``H``.
    restricted : CatModule
        The restriction of the representable at ``Γ/K``.
    iso : NatMap
        The isomorphism ``summand -> restricted``.
    inverse : list of Matrix
        Its componentwise inverse.
    """

    sub: OrbitCategory
    K: Subgroup
    blocks: List[frozenset]
    representatives: List[int]
    summand: FreeModule
    restricted: CatModule
    iso: NatMap
    inverse: List[Matrix]

    def to_json(self) -> dict:
        G = self.K.group
        return {
            "double_cosets": len(self.blocks),
            "block_sizes": [len(b) for b in self.blocks],
            "representatives": [list(G.elements[g]) for g in self.representatives],
            "summand_objects": self.summand.generators,
        }


def double_coset_decomposition(orbit: OrbitCategory, K: Subgroup, H: Subgroup) -> DoubleCosetDecomposition:
    """The Mackey isomorphism for the representable at ``Γ/K``, restricted to ``H``.

    ``K`` is replaced by the representative of its object. Generator ``γ``
    of the sum maps to the arrow ``Γ/J -> Γ/K`` through ``H/(H ∩ γKγ⁻¹)``.

    Raises:
        VerificationError: If the assembled map is not invertible.
    """
    G = orbit.group
    k_obj = orbit.object_of(K)
    K = orbit.subgroups[k_obj]
    sub, functor = orbit.restriction(H)
    restricted = orbit.free(K).pullback(functor)
    blocks = double_cosets(G, H, K)
    representatives = [min(b) for b in blocks]
    embed = H.embedding
    generators, images = [], []
    for gamma in representatives:
        J = H.restrict(K.conjugate(gamma).intersection(H))
        j_obj, c = sub.locate(J)
        generators.append(j_obj)
        delta = G.mul[G.inv[embed[c]]][gamma]
        # arrow Γ/J_rep -> Γ/J -> Γ/K in the parent category
        arrow = orbit.transport(H.lift(sub.subgroups[j_obj]), K, delta)
        vector = [0] * restricted.ranks[j_obj]
        vector[orbit.category.position[arrow]] = 1
        images.append(vector)
    summand = FreeModule(sub.category, generators)
    iso = free_map(summand, restricted, images)
    if not iso.is_invertible():
        raise VerificationError("Double coset map is not invertible")
    inverse = [
        right_inverse(comp, summand.ranks[c]) if summand.ranks[c] else []
        for c, comp in enumerate(iso.components)
    ]
    logger.debug("Double coset decomposition: %s summands", len(blocks))
    return DoubleCosetDecomposition(sub, K, blocks, representatives, summand, restricted, iso, inverse)


# _________________________ Co-induction ____________________


def coinduce(orbit: OrbitCategory, M: CatModule, H: Subgroup) -> CatModule:
    """The right adjoint of :func:`restrict`.

    The value at ``Γ/K`` is ``hom(res Z[O_F Γ(-, Γ/K)], M)``, computed
    through the double coset isomorphism as ``⊕ M(H/(H ∩ γKγ⁻¹))``;
    an arrow ``f`` acts by precomposition with ``res(f∘-)``.
    """
    sub, functor = orbit.restriction(H)
    if M.category is not sub.category:
        raise InvalidModuleError("Module is not over the orbit category of the subgroup")
    C = orbit.category
    decompositions = [double_coset_decomposition(orbit, K, H) for K in orbit.subgroups]
    offsets: List[List[int]] = []
    ranks, relations = [], []
    for dec in decompositions:
        offs, total = [], 0
        for j in dec.summand.generators:
            offs.append(total)
            total += M.ranks[j]
        offsets.append(offs)
        ranks.append(total)
        rows = []
        for offset, j in zip(offs, dec.summand.generators):
            for rel in M.relations[j]:
                rows.append([0] * offset + list(rel) + [0] * (total - offset - M.ranks[j]))
        relations.append(rows)

    maps = []
    for f in range(C.n_arrows):
        k1, k2 = C.src[f], C.dst[f]
        d1, d2 = decompositions[k1], decompositions[k2]
        matrix = [[0] * ranks[k2] for _ in range(ranks[k1])]
        for D1, j1 in enumerate(d1.summand.generators):
            x = d1.iso.components[j1]
            column = d1.summand.generator_vector(D1)
            x = mat_vec(x, column)
            # postcompose with f inside the representable at Γ/k2
            u = functor.ob[j1]
            y = [0] * d2.restricted.ranks[j1]
            for coeff, phi in zip(x, C.hom[u][k1]):
                if coeff:
                    y[C.position[C.compose(f, phi)]] += coeff
            z = mat_vec(d2.inverse[j1], y) if y else []
            for coeff, (D2, psi) in zip(z, d2.summand.basis[j1]):
                if not coeff:
                    continue
                block = M.maps[psi]
                r0, c0 = offsets[k1][D1], offsets[k2][D2]
                for r, row in enumerate(block):
                    for k, v in enumerate(row):
                        if v:
                            matrix[r0 + r][c0 + k] += coeff * v
        maps.append(matrix)
    module = CatModule(C, ranks, maps, relations)
    try:
        module.validate()
    except InvalidModuleError as exc:
        raise VerificationError("Co-induced module is not functorial: %s", exc)
    return module


# _________________________ Quotients _______________________


def quotient_pushforward(orbit: OrbitCategory, M: CatModule, N: Subgroup) -> Tuple[OrbitCategory, CatModule]:
    """``p_* M``: precomposition with ``O_{F_N}(Γ/N) -> O_F(Γ)``.

    Raises:
        UnsupportedInputError: If ``N`` is not in the family.
    """
    _, sub, functor = orbit.quotient(N)
    return sub, M.pullback(functor)


def pushforward_of_free(orbit: OrbitCategory, S: Subgroup, N: Subgroup) -> Optional[NatMap]:
    """Checks ``p_* Z[O_F Γ(-, Γ/S)]``: zero unless ``N <= S``, else
    isomorphic to the representable at ``(Γ/N)/(S/N)``.

    Returns the isomorphism in the second case, ``None`` in the first.

    Raises:
        VerificationError: If the pushforward is not of that form.
    """
    quotient, sub, functor = orbit.quotient(N)
    s_obj = orbit.object_of(S)
    S = orbit.subgroups[s_obj]
    pushed = orbit.free(S).pullback(functor)
    if not N.issubgroup(S):
        if any(pushed.ranks):
            raise VerificationError("Pushforward of a representable without N is nonzero")
        return None
    t_obj, c = sub.locate(quotient.image(S))
    G = orbit.group
    arrow = orbit.transport(
        quotient.preimage(sub.subgroups[t_obj]), S, G.inv[quotient.lift(c)]
    )
    vector = [0] * pushed.ranks[t_obj]
    vector[orbit.category.position[arrow]] = 1
    iso = free_map(free_module(sub.category, t_obj), pushed, [vector])
    if not iso.is_invertible():
        raise VerificationError("Pushforward of a representable is not representable")
    return iso


# ______________________ Trivial actions ____________________


@dataclass
class TrivialActionPair:
    """
    ``res_F`` and ``ind_F`` between ``O_{F⟨N⟩}(Γ)``-modules and
    ``Γ/N``-modules.
    """

    orbit: OrbitCategory
    quotient: Quotient
    group_category: FinCategory
    functor: Functor

    @property
    def n_object(self) -> int:
        return self.functor.ob[0]

    def res(self, M: CatModule) -> CatModule:
        """``M(Γ/N)`` with its ``Γ/N``-action."""
        return M.pullback(self.functor)

    def ind(self, P: CatModule) -> CatModule:
        """``Γ/H ↦ P^H = P``; the arrow ``γK`` acts as ``γN``."""
        if P.category is not self.group_category:
            raise InvalidModuleError("Module is not over the quotient group")
        C = self.orbit.category
        projection = self.quotient.projection
        n = C.n_objects
        maps = [P.maps[projection[self.orbit.labels[f]]] for f in range(C.n_arrows)]
        return CatModule(C, [P.ranks[0]] * n, maps, [P.relations[0]] * n)


def trivial_action_pair(G: PermGroup, N: Subgroup, skeleton: bool = True) -> TrivialActionPair:
    """The pair of functors for the family of subgroups contained in ``N``.

    Raises:
        NotNormalError: If ``N`` is not normal.
    """
    if not N.is_normal():
        raise NotNormalError("%r is not normal", N)
    orbit = OrbitCategory(subgroups_of(N), skeleton)
    quotient = quotient_group(G, N)
    Q = quotient.group
    category = FinCategory.group_category(Q)
    n_obj = orbit.object_of(N)
    ar = [orbit.arrow(n_obj, n_obj, quotient.lift(q)) for q in range(Q.order)]
    functor = Functor(category, orbit.category, [n_obj], ar)
    functor.validate()
    return TrivialActionPair(orbit, quotient, category, functor)


def fixed_point_coefficients(orbit: OrbitCategory, module: CatModule) -> CatModule:
    """``N^(-)``: the ``H``-fixed sublattice at ``Γ/H``.

    ``module`` is a lattice over :meth:`FinCategory.group_category` of the
    orbit category's group; ``γK`` acts by ``v ↦ ρ(γ) v``.

    Raises:
        UnsupportedInputError: For modules with torsion.
    """
    if not module.is_lattice:
        raise UnsupportedInputError("Fixed points are computed for lattices only")
    G = orbit.group
    n = module.ranks[0]
    rho = module.maps
    inclusions, retractions, ranks = [], [], []
    for H in orbit.subgroups:
        rows = []
        for h in H.generators:
            rows.extend(
                [rho[h][i][j] - int(i == j) for j in range(n)] for i in range(n)
            )
        basis = kernel_basis(rows, n)
        columns = transpose(basis, n) if basis else [[] for _ in range(n)]
        inclusions.append(columns)
        retractions.append(left_inverse(columns, len(basis)) if basis else [])
        ranks.append(len(basis))
    C = orbit.category
    maps = []
    for f in range(C.n_arrows):
        a, b = C.src[f], C.dst[f]
        if not ranks[a] or not ranks[b]:
            maps.append([[0] * ranks[b] for _ in range(ranks[a])])
            continue
        moved = mat_mul(rho[orbit.labels[f]], inclusions[b], ranks[b])
        maps.append(mat_mul(retractions[a], moved, ranks[b]))
    result = CatModule(C, ranks, maps)
    result.validate()
    return result


# ______________________ Pointed category ___________________


@dataclass
class PointedOrbitCategory:
    """
    Pairs ``(Γ/H, xH)`` with at most one arrow between two objects.

    ``(Γ/H, xH) -> (Γ/K, yK)`` exists exactly when ``xHx⁻¹ <= yKy⁻¹``,
    the arrow being ``x⁻¹y K``.
    """

    orbit: OrbitCategory
    objects: List[Tuple[int, int]]
    stabilizers: List[int]

    def has_arrow(self, i: int, j: int) -> bool:
        return self.stabilizers[i] & ~self.stabilizers[j] == 0

    def arrow_label(self, i: int, j: int) -> Optional[int]:
        """The coset label of the unique arrow, if any."""
        if not self.has_arrow(i, j):
            return None
        G = self.orbit.group
        (_, x), (_, y) = self.objects[i], self.objects[j]
        return G.mul[G.inv[x]][y]

    def forget(self, i: int) -> int:
        """Object of the underlying orbit category."""
        return self.objects[i][0]

    @cached_property
    def category(self) -> FinCategory:
        n = len(self.objects)
        leq = [[self.has_arrow(i, j) for j in range(n)] for i in range(n)]
        return FinCategory.from_poset([f"({a},{x})" for a, x in self.objects], leq)

    def check_thin(self) -> None:
        """Every orbit-category arrow over a pair of points is the one given
        by :meth:`arrow_label`."""
        G = self.orbit.group
        C = self.orbit.category
        rep = self.orbit.coset_rep
        for i, (a, x) in enumerate(self.objects):
            for j, (b, y) in enumerate(self.objects):
                # orbit arrows γK with xγK = yK
                target = rep(b, y)
                over = [
                    f for f in C.hom[a][b] if rep(b, G.mul[x][self.orbit.labels[f]]) == target
                ]
                if len(over) > 1 or (len(over) == 1) != self.has_arrow(i, j):
                    raise VerificationError("Pointed category is not thin at %s -> %s", i, j)


@dataclass
class PointedEquivalence:
    """``H ↦ (Γ/H, 1H)`` from the subgroup poset of the family."""

    pointed: PointedOrbitCategory
    object_of_subgroup: List[int]
    isomorphism_classes: int


def pointed_orbit_category(family: Family, budgets: Budgets = DEFAULT_BUDGETS) -> Tuple[PointedOrbitCategory, PointedEquivalence]:
    """The pointed orbit category over the full orbit category, with the
    equivalence from the subgroup poset verified.

    Raises:
        BudgetExceededError: Beyond ``budgets.max_pointed_objects`` objects.
        VerificationError: If the equivalence fails.
    """
    orbit = OrbitCategory(family, skeleton=False)
    G = orbit.group
    count = sum(G.order // H.order for H in orbit.subgroups)
    if count > budgets.max_pointed_objects:
        raise BudgetExceededError(
            "Pointed orbit category has %s objects, over the budget %s",
            count,
            budgets.max_pointed_objects,
        )
    objects, stabilizers = [], []
    for a, H in enumerate(orbit.subgroups):
        for coset in G.left_cosets(H):
            x = next(bits(coset))
            objects.append((a, x))
            stabilizers.append(G.conjugate_mask(x, H.mask))
    pointed = PointedOrbitCategory(orbit, objects, stabilizers)

    poset = subgroup_poset(family)
    index = {(a, x): i for i, (a, x) in enumerate(objects)}
    object_of_subgroup = [index[(orbit.object_of(H), G.identity)] for H in poset.elements]
    for p, i in enumerate(object_of_subgroup):
        for q, j in enumerate(object_of_subgroup):
            if pointed.has_arrow(i, j) != poset.leq[p][q]:
                raise VerificationError("Equivalence is not fully faithful")
    position = {H.mask: p for p, H in enumerate(poset.elements)}
    for i, stab in enumerate(stabilizers):
        j = object_of_subgroup[position[stab]]
        if not (pointed.has_arrow(i, j) and pointed.has_arrow(j, i)):
            raise VerificationError("Equivalence is not essentially surjective")
    classes = len(set(stabilizers))
    logger.debug("Pointed orbit category: %s objects, %s isomorphism classes", len(objects), classes)
    return pointed, PointedEquivalence(pointed, object_of_subgroup, classes)
