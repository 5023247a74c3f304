"""
Homological algebra over finite categories with integer coefficients.

A :class:`CatModule` is a contravariant functor from a :class:`FinCategory`
to finitely generated abelian groups. For ``f: a -> b`` the structure map
``M(f): M(b) -> M(a)`` is an integer matrix of shape ``rank(a) x rank(b)``
acting on column vectors, and ``M(g∘f) = M(f)·M(g)``.

Free modules are finite sums of representables ``Z[C(-, c)]``. Every
computation downstream (resolutions, Ext, projectivity) is reduced to
Smith normal form from :mod:`bredon.smith`.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from bredon.config import DEFAULT_BUDGETS, Budgets
from bredon.exceptions import (
    BudgetExceededError,
    InvalidCategoryError,
    InvalidModuleError,
    UnsupportedInputError,
    VerificationError,
)
from bredon.permgroup import PermGroup
from bredon.smith import (
    AbGroupInvariants,
    Certificate,
    identity_matrix,
    kernel_basis,
    left_inverse,
    mat_mul,
    mat_vec,
    right_inverse,
    smith_normal_form,
    solve,
    subquotient,
    transpose,
)
from bredon.typing import Matrix, Vector

logger = logging.getLogger(__name__)


# _______________________ Categories ________________________


class FinCategory:
    """
    A finite category given by its composition table.

    Morphisms are numbered ``0..m-1``; ``hom[a][b]`` lists the morphisms
    ``a -> b`` in increasing order and ``compose(g, f)`` is ``g∘f``
    (``f`` first).

    Raises:
        InvalidCategoryError: If ``validate`` finds a violated law.
    """

    def __init__(
        self,
        objects: Sequence[str],
        arrows: Sequence[Tuple[int, int]],
        composition: Mapping[Tuple[int, int], int],
        identities: Sequence[int],
        arrow_labels: Optional[Sequence[str]] = None,
        validate: bool = True,
    ) -> None:
        self.objects = tuple(objects)
        self.src = tuple(a for a, _ in arrows)
        self.dst = tuple(b for _, b in arrows)
        self.identities = tuple(identities)
        self.arrow_labels = tuple(arrow_labels) if arrow_labels else None
        self.composition = dict(composition)
        n = len(self.objects)
        self.hom: List[List[List[int]]] = [[[] for _ in range(n)] for _ in range(n)]
        for f, (a, b) in enumerate(arrows):
            self.hom[a][b].append(f)
        self.position = [0] * len(arrows)
        for row in self.hom:
            for arrows_ab in row:
                for i, f in enumerate(arrows_ab):
                    self.position[f] = i
        if validate:
            self.validate()

    def __repr__(self) -> str:
        return f"<FinCategory objects={len(self.objects)} arrows={self.n_arrows}>"

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.src)

    def compose(self, g: int, f: int) -> int:
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise InvalidCategoryError("Arrows %s and %s are not composable", g, f)

    def validate(self) -> None:
        """Checks identities and associativity exhaustively."""
        n = self.n_objects
        if len(self.identities) != n:
            raise InvalidCategoryError("Expected one identity per object")
        for c, e in enumerate(self.identities):
            if self.src[e] != c or self.dst[e] != c:
                raise InvalidCategoryError("Identity of object %s is not an endomorphism", c)
        for f in range(self.n_arrows):
            a, b = self.src[f], self.dst[f]
            if self.compose(self.identities[b], f) != f or self.compose(f, self.identities[a]) != f:
                raise InvalidCategoryError("Identities are not neutral at arrow %s", f)
            for c in range(n):
                for g in self.hom[b][c]:
                    gf = self.compose(g, f)
                    if self.src[gf] != a or self.dst[gf] != c:
                        raise InvalidCategoryError("Composite %s∘%s has the wrong ends", g, f)
        for f in range(self.n_arrows):
            b = self.dst[f]
            for c in range(n):
                for g in self.hom[b][c]:
                    gf = self.compose(g, f)
                    for d in range(n):
                        for h in self.hom[c][d]:
                            if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                                raise InvalidCategoryError("Composition is not associative")
        logger.debug("Validated %r", self)

    @cached_property
    def reach(self) -> List[int]:
        """For each object, the number of objects it maps to."""
        return [sum(1 for b in range(self.n_objects) if self.hom[a][b]) for a in range(self.n_objects)]

    def terminal_object(self) -> Optional[int]:
        for c in range(self.n_objects):
            if all(len(self.hom[a][c]) == 1 for a in range(self.n_objects)):
                return c
        return None

    @classmethod
    def from_poset(cls, labels: Sequence[str], leq: Sequence[Sequence[bool]]) -> "FinCategory":
        """One arrow ``a -> b`` exactly when ``a <= b``."""
        n = len(labels)
        arrows = [(a, b) for a in range(n) for b in range(n) if leq[a][b]]
        index = {ab: f for f, ab in enumerate(arrows)}
        composition = {
            (index[(b, c)], index[(a, b)]): index[(a, c)]
            for (a, b) in arrows
            for c in range(n)
            if leq[b][c]
        }
        identities = [index[(c, c)] for c in range(n)]
        return cls(labels, arrows, composition, identities)

    @classmethod
    def group_category(cls, G: PermGroup, validate: bool = True) -> "FinCategory":
        """One object, one arrow per element; ``g∘f`` is the product ``f·g``.

        With this convention modules over the category are left
        ``G``-modules, the orbit category of the trivial family.
        """
        mul = G.mul
        composition = {(g, f): mul[f][g] for f in range(G.order) for g in range(G.order)}
        arrows = [(0, 0)] * G.order
        return cls([G.name or "G"], arrows, composition, [G.identity], validate=validate)


@dataclass
class Functor:
    """A functor between finite categories, given on objects and arrows."""

    source: FinCategory
    target: FinCategory
    ob: List[int]
    ar: List[int]

    def validate(self) -> None:
        s, t = self.source, self.target
        for f in range(s.n_arrows):
            if t.src[self.ar[f]] != self.ob[s.src[f]] or t.dst[self.ar[f]] != self.ob[s.dst[f]]:
                raise VerificationError("Functor does not respect the ends of arrow %s", f)
        for c, e in enumerate(s.identities):
            if self.ar[e] != t.identities[self.ob[c]]:
                raise VerificationError("Functor does not preserve identities")
        for (g, f), gf in s.composition.items():
            if self.ar[gf] != t.compose(self.ar[g], self.ar[f]):
                raise VerificationError("Functor does not preserve composition")


# ________________________ Modules __________________________


def _in_span(vector: Vector, relations: Matrix, n: int) -> bool:
    if not any(vector):
        return True
    if not relations:
        return False
    return solve(transpose(relations, n), vector, len(relations)).feasible


@dataclass
class CatModule:
    """
    A contravariant functor to finitely generated abelian groups.

    Attributes
    ----------
    category : FinCategory
    ranks : list of int
        Number of generators of ``M(c)``.
    maps : list of Matrix
        ``maps[f]`` is ``M(f)``, indexed by arrow.
    relations : list of Matrix
        Relation rows of each ``M(c)``; empty for lattices.
    """

    category: FinCategory
    ranks: List[int]
    maps: List[Matrix]
    relations: List[Matrix] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.relations:
            self.relations = [[] for _ in self.ranks]

    @property
    def is_lattice(self) -> bool:
        return all(not rel for rel in self.relations)

    def is_zero(self) -> bool:
        return all(self.value(c).is_zero() for c in range(len(self.ranks)))

    def value(self, c: int) -> AbGroupInvariants:
        return AbGroupInvariants.cokernel(self.relations[c], self.ranks[c])

    def values(self) -> List[AbGroupInvariants]:
        return [self.value(c) for c in range(len(self.ranks))]

    def validate(self) -> None:
        """Checks functoriality and that every map respects the relations.

        Raises:
            InvalidModuleError: On the first violation.
        """
        C = self.category
        if len(self.ranks) != C.n_objects or len(self.maps) != C.n_arrows:
            raise InvalidModuleError("Module does not match the category's shape")
        for f in range(C.n_arrows):
            a, b = C.src[f], C.dst[f]
            matrix = self.maps[f]
            if len(matrix) != self.ranks[a] or any(len(row) != self.ranks[b] for row in matrix):
                raise InvalidModuleError("Map of arrow %s has the wrong shape", f)
            for rel in self.relations[b]:
                if not _in_span(mat_vec(matrix, rel), self.relations[a], self.ranks[a]):
                    raise InvalidModuleError("Map of arrow %s does not respect relations", f)
        for c, e in enumerate(C.identities):
            if not self._agree(c, self.maps[e], identity_matrix(self.ranks[c])):
                raise InvalidModuleError("Identity of object %s does not act trivially", c)
        for (g, f), gf in C.composition.items():
            a, b, c = C.src[f], C.dst[f], C.dst[g]
            composite = mat_mul(self.maps[f], self.maps[g], self.ranks[c])
            if not self._agree(a, self.maps[gf], composite):
                raise InvalidModuleError("Module is not functorial at %s∘%s", g, f)

    def _agree(self, c: int, A: Matrix, B: Matrix) -> bool:
        n = self.ranks[c]
        for j in range(len(A[0]) if A else 0):
            diff = [A[i][j] - B[i][j] for i in range(n)]
            if not _in_span(diff, self.relations[c], n):
                return False
        return True

    def pullback(self, functor: Functor) -> "CatModule":
        """``u*M = M∘u`` over the functor's source category."""
        return CatModule(
            functor.source,
            [self.ranks[c] for c in functor.ob],
            [self.maps[f] for f in functor.ar],
            [self.relations[c] for c in functor.ob],
        )

    def same_as(self, other: "CatModule") -> bool:
        """Equality of presentations (not isomorphism)."""
        return (
            self.ranks == other.ranks
            and self.maps == other.maps
            and self.relations == other.relations
        )

    def to_json(self) -> dict:
        return {
            "ranks": self.ranks,
            "relations": self.relations,
            "values": [v.to_json() for v in self.values()],
        }


class FreeModule(CatModule):
    """
    A direct sum of representables ``⊕ Z[C(-, c_g)]``.

    The basis of the value at ``d`` is the pairs ``(g, φ)`` with ``φ`` in
    ``hom(d, c_g)``, ordered by summand then arrow.
    """

    def __init__(self, category: FinCategory, generators: Sequence[int]) -> None:
        self.category = category
        self.generators = list(generators)
        C = category
        self.offsets: List[List[int]] = []
        self.basis: List[List[Tuple[int, int]]] = []
        for d in range(C.n_objects):
            offsets, basis = [], []
            for g, c in enumerate(self.generators):
                offsets.append(len(basis))
                basis.extend((g, phi) for phi in C.hom[d][c])
            self.offsets.append(offsets)
            self.basis.append(basis)
        ranks = [len(b) for b in self.basis]
        maps = []
        for f in range(C.n_arrows):
            a, d = C.src[f], C.dst[f]
            matrix = [[0] * ranks[d] for _ in range(ranks[a])]
            for j, (g, phi) in enumerate(self.basis[d]):
                matrix[self.index(a, g, C.compose(phi, f))][j] = 1
            maps.append(matrix)
        super().__init__(C, ranks, maps)

    def index(self, d: int, g: int, phi: int) -> int:
        return self.offsets[d][g] + self.category.position[phi]

    def generator_vector(self, g: int) -> Vector:
        """The generator ``id`` of summand ``g`` in the value at ``c_g``."""
        c = self.generators[g]
        vector = [0] * self.ranks[c]
        vector[self.index(c, g, self.category.identities[c])] = 1
        return vector

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def total_rank(self) -> int:
        return sum(self.ranks)


def constant_module(C: FinCategory, modulus: int = 0) -> CatModule:
    """``Z̄`` (or ``Z/m`` everywhere with identity maps when ``modulus > 1``)."""
    relations = [[[modulus]] if modulus > 1 else [] for _ in range(C.n_objects)]
    return CatModule(C, [1] * C.n_objects, [[[1]] for _ in range(C.n_arrows)], relations)


def free_module(C: FinCategory, c: int) -> FreeModule:
    """The representable ``Z[C(-, c)]``."""
    return FreeModule(C, [c])


def zero_module(C: FinCategory) -> CatModule:
    return CatModule(C, [0] * C.n_objects, [[] for _ in range(C.n_arrows)])


def group_module(
    G: PermGroup,
    generator_matrices: Sequence[Matrix],
    category: Optional[FinCategory] = None,
    modulus: int = 0,
) -> CatModule:
    """A left ``G``-lattice (or ``G``-module mod ``modulus``) from matrices
    for the generators, as a module over :meth:`FinCategory.group_category`.

    Raises:
        InvalidModuleError: If the matrices do not define a representation.
    """
    C = category or FinCategory.group_category(G)
    if len(generator_matrices) != len(G.generators):
        raise InvalidModuleError("Expected one matrix per generator of %r", G)
    rank = len(generator_matrices[0]) if generator_matrices else 1
    rho: Dict[int, Matrix] = {G.identity: identity_matrix(rank)}
    frontier = [G.identity]
    for x in frontier:
        for s, matrix in zip(G.gen_indices, generator_matrices):
            y = G.mul[x][s]
            if y not in rho:
                rho[y] = mat_mul(rho[x], matrix, rank)
                frontier.append(y)
    relations = [[[modulus if i == j else 0 for j in range(rank)] for i in range(rank)]] if modulus > 1 else [[]]
    module = CatModule(C, [rank], [rho[g] for g in range(G.order)], relations)
    module.validate()
    return module


def trivial_module(G: PermGroup, modulus: int = 0, category: Optional[FinCategory] = None) -> CatModule:
    return constant_module(category or FinCategory.group_category(G), modulus)


def regular_module(G: PermGroup, category: Optional[FinCategory] = None) -> FreeModule:
    """``Z[G]``: the representable module of the one-object category."""
    return free_module(category or FinCategory.group_category(G), 0)


def perm_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sign_module(G: PermGroup, category: Optional[FinCategory] = None) -> CatModule:
    """``Z`` with ``g`` acting by the sign of its permutation."""
    return group_module(G, [[[perm_sign(g)]] for g in G.generators], category)


def direct_sum(modules: Sequence[CatModule]) -> CatModule:
    C = modules[0].category
    ranks = [sum(M.ranks[c] for M in modules) for c in range(C.n_objects)]
    maps = []
    for f in range(C.n_arrows):
        a, b = C.src[f], C.dst[f]
        matrix = [[0] * ranks[b] for _ in range(ranks[a])]
        ra = rb = 0
        for M in modules:
            for i, row in enumerate(M.maps[f]):
                matrix[ra + i][rb : rb + M.ranks[b]] = row
            ra += M.ranks[a]
            rb += M.ranks[b]
        maps.append(matrix)
    relations = []
    for c in range(C.n_objects):
        rows, offset = [], 0
        for M in modules:
            for rel in M.relations[c]:
                rows.append([0] * offset + list(rel) + [0] * (ranks[c] - offset - M.ranks[c]))
            offset += M.ranks[c]
        relations.append(rows)
    return CatModule(C, ranks, maps, relations)


# _______________________ Natural maps ______________________


@dataclass
class NatMap:
    """A natural transformation given by its components ``s_c: M(c) -> N(c)``."""

    source: CatModule
    target: CatModule
    components: List[Matrix]

    def validate(self) -> None:
        """Checks naturality ``s_a·M(f) = N(f)·s_b`` modulo relations.

        Raises:
            VerificationError: If a square fails to commute.
        """
        M, N = self.source, self.target
        C = M.category
        for f in range(C.n_arrows):
            a, b = C.src[f], C.dst[f]
            left = mat_mul(self.components[a], M.maps[f], M.ranks[b])
            right = mat_mul(N.maps[f], self.components[b], M.ranks[b])
            if not N._agree(a, left, right):
                raise VerificationError("Map is not natural at arrow %s", f)

    def then(self, other: "NatMap") -> "NatMap":
        """``other ∘ self``."""
        return NatMap(
            self.source,
            other.target,
            [
                mat_mul(t, s, self.source.ranks[c])
                for c, (s, t) in enumerate(zip(self.components, other.components))
            ],
        )

    def is_identity(self) -> bool:
        return all(
            self.target._agree(c, comp, identity_matrix(self.source.ranks[c]))
            for c, comp in enumerate(self.components)
        )

    def is_invertible(self) -> bool:
        """For lattice modules: every component is unimodular."""
        for c, comp in enumerate(self.components):
            n = self.source.ranks[c]
            if self.target.ranks[c] != n:
                return False
            if n:
                form = smith_normal_form(comp, n, transforms=False)
                if form.rank != n or any(d != 1 for d in form.diagonal):
                    return False
        return True

    def to_json(self) -> dict:
        return {"components": self.components}


def free_map(F: FreeModule, M: CatModule, images: Sequence[Vector]) -> NatMap:
    """The natural map sending generator ``g`` of ``F`` to ``images[g]``."""
    C = F.category
    components = []
    for d in range(C.n_objects):
        columns = [mat_vec(M.maps[phi], images[g]) for g, phi in F.basis[d]]
        components.append(transpose(columns, M.ranks[d]) if columns else [[] for _ in range(M.ranks[d])])
    return NatMap(F, M, components)


def _evaluate(F: FreeModule, M: CatModule, images: Sequence[Vector], d: int, vector: Vector) -> Vector:
    # value at d of the map F -> M fixed by ``images``, applied to ``vector``
    out = [0] * M.ranks[d]
    for coeff, (g, phi) in zip(vector, F.basis[d]):
        if coeff:
            for i, x in enumerate(mat_vec(M.maps[phi], images[g])):
                out[i] += coeff * x
    return out


# _________________________ Covers __________________________


@dataclass
class Cover:
    """An epimorphism from a free module, given on its generators."""

    free: FreeModule
    target: CatModule
    images: List[Vector]

    @cached_property
    def map(self) -> NatMap:
        return free_map(self.free, self.target, self.images)


def _span_columns(F_gens: Sequence[int], images: Sequence[Vector], M: CatModule, c: int) -> Matrix:
    C = M.category
    columns = []
    for g, cg in enumerate(F_gens):
        for phi in C.hom[c][cg]:
            columns.append(mat_vec(M.maps[phi], images[g]))
    return columns


def free_cover(M: CatModule, object_order: Optional[Sequence[int]] = None) -> Cover:
    """A free module mapping onto ``M``.

    Objects are visited by how few objects they map to (ties by index)
    unless ``object_order`` is given. At each object, a lift of the first
    generator of ``M(c)`` modulo the image so far is added until the image
    is everything.
    """
    C = M.category
    order = (
        list(object_order)
        if object_order is not None
        else sorted(range(C.n_objects), key=lambda c: (C.reach[c], c))
    )
    generators: List[int] = []
    images: List[Vector] = []
    for c in order:
        n = M.ranks[c]
        while n:
            columns = _span_columns(generators, images, M, c) + list(M.relations[c])
            if not columns:
                images.append([int(i == 0) for i in range(n)])
                generators.append(c)
                continue
            form = smith_normal_form(transpose(columns, n), len(columns))
            missing = next(
                (i for i in range(n) if i >= form.rank or form.diagonal[i] != 1), None
            )
            if missing is None:
                break
            U_inv = form.U_inv
            assert U_inv is not None
            images.append([row[missing] for row in U_inv])
            generators.append(c)
    cover = Cover(FreeModule(C, generators), M, images)
    logger.debug("Free cover with %s generators", len(generators))
    return cover


@dataclass
class Kernel:
    """A saturated submodule with its inclusion and a left inverse per object."""

    module: CatModule
    inclusion: List[Matrix]
    retraction: List[Matrix]


def kernel(s: NatMap) -> Kernel:
    """The objectwise kernel lattice of ``s`` with induced structure maps.

    Raises:
        UnsupportedInputError: If source or target has torsion values.
    """
    M, N = s.source, s.target
    if not (M.is_lattice and N.is_lattice):
        raise UnsupportedInputError("Kernels are only computed between lattice modules")
    C = M.category
    inclusion, retraction, ranks = [], [], []
    for c in range(C.n_objects):
        basis = kernel_basis(s.components[c], M.ranks[c])
        columns = transpose(basis, M.ranks[c]) if basis else [[] for _ in range(M.ranks[c])]
        inclusion.append(columns)
        retraction.append(left_inverse(columns, len(basis)) if basis else [])
        ranks.append(len(basis))
    maps = []
    for f in range(C.n_arrows):
        a, b = C.src[f], C.dst[f]
        if not ranks[a] or not ranks[b]:
            maps.append([[0] * ranks[b] for _ in range(ranks[a])])
            continue
        pushed = mat_mul(M.maps[f], inclusion[b], ranks[b])
        maps.append(mat_mul(retraction[a], pushed, ranks[b]))
    return Kernel(CatModule(C, ranks, maps), inclusion, retraction)


# _______________________ Resolutions _______________________


@dataclass
class Resolution:
    """
    A free resolution ``... -> F_1 -> F_0 -> M -> 0``.

    ``covers[i]`` maps ``F_i`` onto the syzygy ``K_{i-1}`` (``K_{-1} = M``);
    ``kernels[i]`` is ``K_i = ker(F_i -> K_{i-1})``. ``differentials[i]``
    holds, for ``i >= 1``, the images of the generators of ``F_i`` in
    ``F_{i-1}``.
    """

    target: CatModule
    covers: List[Cover]
    kernels: List[Kernel]
    differentials: List[List[Vector]]

    @property
    def modules(self) -> List[FreeModule]:
        return [cover.free for cover in self.covers]

    @property
    def length(self) -> Optional[int]:
        """Index of the last nonzero stage, if the resolution has terminated."""
        for i, K in enumerate(self.kernels):
            if all(r == 0 for r in K.module.ranks):
                return i
        return None

    def syzygy(self, n: int) -> CatModule:
        """``K_{n-1}``; ``syzygy(0)`` is the resolved module."""
        return self.target if n == 0 else self.kernels[n - 1].module

    def generator_objects(self) -> List[List[int]]:
        return [cover.free.generators for cover in self.covers]


def free_resolution(
    M: CatModule,
    n: int,
    budgets: Budgets = DEFAULT_BUDGETS,
    object_order: Optional[Sequence[int]] = None,
) -> Resolution:
    """Resolves the lattice module ``M`` through stage ``n``.

    Every stage is checked: the cover is surjective onto the previous
    syzygy at each object, so image equals kernel.

    Raises:
        UnsupportedInputError: If ``M`` has torsion values.
        BudgetExceededError: If a stage exceeds ``budgets.max_resolution_rank``.
    """
    if not M.is_lattice:
        raise UnsupportedInputError("Only lattice modules are resolved")
    covers: List[Cover] = []
    kernels: List[Kernel] = []
    differentials: List[List[Vector]] = []
    current = M
    for stage in range(n + 1):
        cover = free_cover(current, object_order)
        F = cover.free
        if F.total_rank > budgets.max_resolution_rank:
            raise BudgetExceededError(
                "Resolution stage %s has rank %s, over the budget %s",
                stage,
                F.total_rank,
                budgets.max_resolution_rank,
            )
        epi = cover.map
        for c in range(M.category.n_objects):
            rows = current.ranks[c]
            if rows:
                form = smith_normal_form(epi.components[c], F.ranks[c], transforms=False)
                if form.rank != rows or any(d != 1 for d in form.invariant_factors):
                    raise VerificationError("Stage %s is not exact at object %s", stage, c)
        if stage:
            inclusion = kernels[-1].inclusion
            differentials.append(
                [mat_vec(inclusion[cg], image) for cg, image in zip(F.generators, cover.images)]
            )
        else:
            differentials.append([])
        K = kernel(epi)
        covers.append(cover)
        kernels.append(K)
        logger.debug(
            "Stage %s: %s generators, total rank %s, syzygy rank %s",
            stage,
            F.rank,
            F.total_rank,
            sum(K.module.ranks),
        )
        current = K.module
        if not any(current.ranks):
            break
    return Resolution(M, covers, kernels, differentials)


# ___________________________ Ext ___________________________


def _cochain_rank(F: FreeModule, N: CatModule) -> int:
    return sum(N.ranks[c] for c in F.generators)


def _cochain_relations(F: FreeModule, N: CatModule) -> Matrix:
    total = _cochain_rank(F, N)
    rows, offset = [], 0
    for c in F.generators:
        for rel in N.relations[c]:
            rows.append([0] * offset + list(rel) + [0] * (total - offset - N.ranks[c]))
        offset += N.ranks[c]
    return rows


def _coboundary(resolution: Resolution, i: int, N: CatModule) -> Matrix:
    """``δ: Hom(F_{i-1}, N) -> Hom(F_i, N)`` in Yoneda coordinates."""
    F_prev, F = resolution.modules[i - 1], resolution.modules[i]
    cols = _cochain_rank(F_prev, N)
    col_offsets, acc = [], 0
    for c in F_prev.generators:
        col_offsets.append(acc)
        acc += N.ranks[c]
    matrix: Matrix = []
    for g, cg in enumerate(F.generators):
        block = [[0] * cols for _ in range(N.ranks[cg])]
        for coeff, (h, phi) in zip(resolution.differentials[i][g], F_prev.basis[cg]):
            if not coeff:
                continue
            offset = col_offsets[h]
            for r, row in enumerate(N.maps[phi]):
                target = block[r]
                for k, x in enumerate(row):
                    if x:
                        target[offset + k] += coeff * x
        matrix.extend(block)
    return matrix


def _cohomology(resolution: Resolution, N: CatModule, i: int) -> AbGroupInvariants:
    modules = resolution.modules
    if i >= len(modules):
        return AbGroupInvariants()
    n_i = _cochain_rank(modules[i], N)
    if n_i == 0:
        return AbGroupInvariants()
    if i + 1 < len(modules):
        delta = _coboundary(resolution, i + 1, N)
        relations = _cochain_relations(modules[i + 1], N)
        extended = [row + [rel[r] for rel in relations] for r, row in enumerate(delta)]
        cycles = [v[:n_i] for v in kernel_basis(extended, n_i + len(relations))]
    else:
        cycles = identity_matrix(n_i)
    boundaries = list(_cochain_relations(modules[i], N))
    if i > 0:
        delta_prev = _coboundary(resolution, i, N)
        boundaries += transpose(delta_prev, _cochain_rank(modules[i - 1], N))
    return subquotient(cycles, boundaries, n_i)


def ext_groups(
    M: CatModule,
    N: CatModule,
    n_max: int,
    budgets: Budgets = DEFAULT_BUDGETS,
    resolution: Optional[Resolution] = None,
    object_order: Optional[Sequence[int]] = None,
) -> List[AbGroupInvariants]:
    """``Ext^n(M, N)`` for ``n = 0..n_max`` from a free resolution of ``M``."""
    if resolution is None or len(resolution.covers) < n_max + 2 and resolution.length is None:
        resolution = free_resolution(M, n_max + 1, budgets, object_order)
    groups = [_cohomology(resolution, N, i) for i in range(n_max + 1)]
    logger.debug("Ext groups: %s", [str(g) for g in groups])
    return groups


@dataclass
class HomResult:
    """``hom(M, N)`` with natural maps generating it."""

    invariants: AbGroupInvariants
    generators: List[NatMap]


def hom_group(M: CatModule, N: CatModule, budgets: Budgets = DEFAULT_BUDGETS) -> HomResult:
    """Natural maps ``M -> N`` as the degree-0 cohomology of a presentation."""
    if M.category is not N.category:
        raise InvalidModuleError("Modules live over different categories")
    resolution = free_resolution(M, 1, budgets)
    invariants = _cohomology(resolution, N, 0)
    cover = resolution.covers[0]
    F = cover.free
    n0 = _cochain_rank(F, N)
    if len(resolution.covers) > 1:
        delta = _coboundary(resolution, 1, N)
        relations = _cochain_relations(resolution.modules[1], N)
        extended = [row + [rel[r] for rel in relations] for r, row in enumerate(delta)]
        cycles = [v[:n0] for v in kernel_basis(extended, n0 + len(relations))]
    else:
        cycles = identity_matrix(n0)
    lifts = [
        right_inverse(cover.map.components[c], F.ranks[c]) if M.ranks[c] else []
        for c in range(M.category.n_objects)
    ]
    generators = []
    for psi in cycles:
        if not any(psi):
            continue
        images, offset = [], 0
        for c in F.generators:
            images.append(psi[offset : offset + N.ranks[c]])
            offset += N.ranks[c]
        components = []
        for c in range(M.category.n_objects):
            columns = [
                _evaluate(F, N, images, c, [row[j] for row in lifts[c]])
                for j in range(M.ranks[c])
            ]
            components.append(transpose(columns, N.ranks[c]) if columns else [[] for _ in range(N.ranks[c])])
        natmap = NatMap(M, N, components)
        natmap.validate()
        generators.append(natmap)
    return HomResult(invariants, generators)


# ______________________ Projectivity _______________________


@dataclass
class ProjectivityResult:
    """
    Outcome of :func:`is_projective`.

    ``section`` splits the free cover when the module is projective;
    otherwise ``certificate`` witnesses that the splitting system has no
    integer solution.
    """

    projective: bool
    section: Optional[NatMap] = None
    certificate: Optional[Certificate] = None
    unknowns: int = 0
    equations: int = 0

    def to_json(self) -> dict:
        result: dict = {
            "projective": self.projective,
            "unknowns": self.unknowns,
            "equations": self.equations,
        }
        if self.certificate is not None:
            result["certificate"] = self.certificate.to_json()
        if self.section is not None:
            result["section"] = self.section.to_json()
        return result


def is_projective(M: CatModule, budgets: Budgets = DEFAULT_BUDGETS) -> ProjectivityResult:
    """Decides whether the lattice module ``M`` is projective.

    With ``p: F -> M`` the free cover, ``ι: K -> F`` its kernel and
    ``e_j`` generators of ``K``, ``M`` is projective exactly when a
    natural ``r: F -> K`` with ``r(ι e_j) = e_j`` exists. The values
    ``r(gen_i)`` are the unknowns of one integer system.
    """
    resolution = free_resolution(M, 1, budgets)
    cover, K = resolution.covers[0], resolution.kernels[0]
    F, Kmod = cover.free, K.module
    C = M.category
    unknown_offsets, acc = [], 0
    for c in F.generators:
        unknown_offsets.append(acc)
        acc += Kmod.ranks[c]
    unknowns = acc
    rows: Matrix = []
    rhs: Vector = []
    if len(resolution.covers) > 1:
        K_cover = resolution.covers[1]
        for j, cj in enumerate(K_cover.free.generators):
            e_j = K_cover.images[j]
            lifted = resolution.differentials[1][j]
            block = [[0] * unknowns for _ in range(Kmod.ranks[cj])]
            for coeff, (i, phi) in zip(lifted, F.basis[cj]):
                if not coeff:
                    continue
                offset = unknown_offsets[i]
                for r, row in enumerate(Kmod.maps[phi]):
                    for k, x in enumerate(row):
                        if x:
                            block[r][offset + k] += coeff * x
            rows.extend(block)
            rhs.extend(e_j)
    result = ProjectivityResult(False, unknowns=unknowns, equations=len(rows))
    if rows:
        solution = solve(rows, rhs, unknowns)
        if not solution.feasible:
            result.certificate = solution.certificate
            logger.info("Not projective: splitting system %sx%s infeasible", len(rows), unknowns)
            return result
        r_values = solution.x or []
    else:
        r_values = [0] * unknowns
    r_images = [
        r_values[unknown_offsets[i] : unknown_offsets[i] + Kmod.ranks[c]]
        for i, c in enumerate(F.generators)
    ]
    components = []
    for c in range(C.n_objects):
        if not M.ranks[c]:
            components.append([[] for _ in range(F.ranks[c])])
            continue
        lift = right_inverse(cover.map.components[c], F.ranks[c])
        columns = []
        for j in range(M.ranks[c]):
            x = [row[j] for row in lift]
            r_x = _evaluate(F, Kmod, r_images, c, x)
            correction = mat_vec(K.inclusion[c], r_x) if Kmod.ranks[c] else [0] * len(x)
            columns.append([a - b for a, b in zip(x, correction)])
        components.append(transpose(columns, F.ranks[c]))
    section = NatMap(M, F, components)
    section.validate()
    if not section.then(cover.map).is_identity():
        raise VerificationError("Computed section does not split the cover")
    result.projective = True
    result.section = section
    logger.info("Projective: splitting found with %s unknowns", unknowns)
    return result
