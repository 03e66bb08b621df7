"""Integral representations of table groups.

A :class:`GammaModule` is a finitely generated abelian group (given by a
presentation) together with one action matrix per group element, stored
for the whole group rather than just generators. Construction verifies
the representation laws and relation preservation, so downstream code
never needs to re-check.

Vectors are tuples and matrices act on the left (column convention),
matching :mod:`depthzero.abelian`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from depthzero.abelian import (
    AbHom,
    FinAbGroup,
    IntMatrix,
    Presentation,
    QuotientData,
    hom_kernel_image,
    in_lattice,
    kernel_mod_lattice,
    lattice_quotient,
    tensor_mod_m_presentation,
)
from depthzero.galois import (
    FiniteGroup,
    GroupError,
    QuotientGroup,
    coset_reps,
    quotient_group,
)


class ModuleError(ValueError):
    """Action data violates the module axioms."""


@dataclass(frozen=True)
class GammaModule:
    group: FiniteGroup
    presentation: Presentation
    action: tuple  # action[g] is an IntMatrix for every group element g
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.group.order
        rank = self.presentation.rank
        if len(self.action) != n:
            raise ModuleError(f"need {n} action matrices, got {len(self.action)}")
        for g, mat in enumerate(self.action):
            if (mat.rows, mat.cols) != (rank, rank):
                raise ModuleError(f"action matrix {g} is not {rank}x{rank}")
        ident = self.action[self.group.identity]
        if ident.entries != IntMatrix.identity(rank).entries:
            raise ModuleError("identity must act as the identity matrix")
        for g, mat in enumerate(self.action):
            for rel in self.presentation.relation_vectors():
                if not self.presentation.contains_in_lattice(mat.apply(rel)):
                    raise ModuleError(
                        f"action of element {g} does not preserve the relations"
                    )
        for g in range(n):
            for h in range(n):
                prod = self.action[g] @ self.action[h]
                target = self.action[self.group.mul(g, h)]
                if not self._equal_mod_relations(prod, target):
                    raise ModuleError(
                        f"action({g})action({h}) differs from action of the product"
                    )

    def _equal_mod_relations(self, a, b):
        diff = a - b
        for j in range(diff.cols):
            if not self.presentation.contains_in_lattice(diff.column(j)):
                return False
        return True

    @property
    def rank(self):
        return self.presentation.rank

    @property
    def relations(self):
        return self.presentation.relations

    def act(self, g, vector):
        return self.action[g].apply(vector)

    def is_free(self):
        return self.presentation.is_free()

    def underlying_group(self) -> FinAbGroup:
        return self.presentation.group()

    def elements(self):
        """Canonical element vectors; only for finite underlying groups."""
        return self.presentation.elements()

    def reduce(self, vector):
        return self.presentation.reduce(vector)

    def contragredient(self):
        """Same lattice with the inverse-transpose action.

        For a free module this is the usual dual lattice action; it swaps
        the roles of character and cocharacter groups.
        """
        mats = tuple(
            self.action[self.group.inv(g)].transpose()
            for g in range(self.group.order)
        )
        label = f"{self.name}^" if self.name else ""
        return GammaModule(
            group=self.group,
            presentation=self.presentation,
            action=mats,
            name=label,
        )


def trivial_module(group: FiniteGroup, rank=1, relations=None) -> GammaModule:
    pres = (
        Presentation.free(rank)
        if relations is None
        else Presentation(rank=rank, relations=relations)
    )
    ident = IntMatrix.identity(rank)
    return GammaModule(
        group=group,
        presentation=pres,
        action=(ident,) * group.order,
        name="triv",
    )


def module_from_generator_images(group, presentation, images, name=""):
    """Build a module from matrices for a generating set.

    ``images`` maps element index -> matrix; every other element's matrix
    is derived by multiplying along a factorization found by closure.
    """
    n = group.order
    known = {group.identity: IntMatrix.identity(presentation.rank)}
    for g, mat in images.items():
        known[g] = mat
    changed = True
    while changed and len(known) < n:
        changed = False
        for a in list(known):
            for b in list(known):
                c = group.mul(a, b)
                if c not in known:
                    known[c] = known[a] @ known[b]
                    changed = True
    if len(known) < n:
        raise ModuleError("generator images do not generate the group")
    return GammaModule(
        group=group,
        presentation=presentation,
        action=tuple(known[g] for g in range(n)),
        name=name,
    )


def mod_m_reduction(module: GammaModule, m: int) -> GammaModule:
    """The module with coefficients reduced mod m (same action matrices)."""
    return GammaModule(
        group=module.group,
        presentation=tensor_mod_m_presentation(module.presentation, m),
        action=module.action,
        name=f"{module.name} mod {m}" if module.name else f"mod {m}",
    )


# ---------------------------------------------------------------------------
# Permutation modules


def permutation_module(group: FiniteGroup, subgroup) -> GammaModule:
    """Free module on the left cosets G/H with the translation action.

    >>> from depthzero.galois import FiniteGroup
    >>> m = permutation_module(FiniteGroup.cyclic(2), (0,))
    >>> m.action[1].to_lists()
    [[0, 1], [1, 0]]
    """
    if not group.is_subgroup(subgroup):
        raise GroupError(f"{tuple(subgroup)} is not a subgroup")
    reps = coset_reps(group, subgroup)
    rep_index = {}
    for idx, r in enumerate(reps):
        for h in subgroup:
            rep_index[group.mul(r, h)] = idx
    k = len(reps)
    mats = []
    for g in range(group.order):
        entries = [[0] * k for _ in range(k)]
        for j, r in enumerate(reps):
            entries[rep_index[group.mul(g, r)]][j] = 1
        mats.append(IntMatrix.from_rows(entries))
    label = f"Z[{group.name}/H]" if group.name else "perm"
    return GammaModule(
        group=group,
        presentation=Presentation.free(k),
        action=tuple(mats),
        name=label,
    )


# ---------------------------------------------------------------------------
# Invariants and coinvariants


def _difference_stack(module: GammaModule, subset):
    rank = module.rank
    ident = IntMatrix.identity(rank)
    blocks = None
    for s in subset:
        diff = module.action[s] - ident
        blocks = diff if blocks is None else blocks.stack_below(diff)
    if blocks is None:
        blocks = IntMatrix.zeros(0, rank)
    return blocks


def invariants(module: GammaModule, subset=None) -> QuotientData:
    """Fixed points under ``subset`` (default: the whole group).

    Returns quotient data whose ``group`` is the invariant subgroup and
    whose ``generators`` exhibit the inclusion into the module.
    """
    if subset is None:
        subset = range(module.group.order)
    stacked = _difference_stack(module, subset)
    fixed = kernel_mod_lattice(stacked, module.relations)
    return lattice_quotient(
        module.rank, fixed, module.presentation.relation_vectors()
    )


@dataclass(frozen=True)
class Coinvariants:
    """Largest quotient with trivial ``subset``-action.

    The projection is coordinate-wise: a module vector represents its own
    class, and ``presentation.reduce`` computes canonical forms.
    """

    group: FinAbGroup
    presentation: Presentation


def coinvariants_presentation(module: GammaModule, subset=None) -> Presentation:
    if subset is None:
        subset = range(module.group.order)
    rank = module.rank
    ident = IntMatrix.identity(rank)
    rel = module.relations
    for s in subset:
        # rows of (action - identity)^T span the sublattice (s - 1)M
        rel = rel.stack_below((module.action[s] - ident).transpose())
    return Presentation(rank=rank, relations=rel)


def coinvariants(module: GammaModule, subset=None) -> Coinvariants:
    pres = coinvariants_presentation(module, subset)
    return Coinvariants(group=pres.group(), presentation=pres)


def coinvariants_module(module: GammaModule, normal) -> tuple:
    """Coinvariants by a normal subgroup, as a module over the quotient.

    Returns (module over G/N, quotient data). The descended action is
    well defined since conjugation keeps the augmentation sublattice
    stable; the constructor re-verifies this.
    """
    if not module.group.is_normal(normal):
        raise GroupError(f"{tuple(normal)} is not normal")
    qdata = quotient_group(module.group, normal)
    pres = coinvariants_presentation(module, normal)
    mats = tuple(module.action[rep] for rep in qdata.sections)
    descended = GammaModule(
        group=qdata.group,
        presentation=pres,
        action=mats,
        name=f"({module.name})_N" if module.name else "",
    )
    return descended, qdata


# ---------------------------------------------------------------------------
# Norm maps


@dataclass(frozen=True)
class NormSum:
    """Sum of the action over coset representatives of G/H.

    ``matrix`` is the raw sum, which depends on the (deterministic)
    choice of representatives; ``on_coinvariants`` is the induced map
    from H-coinvariants to G-coinvariants, which does not.
    """

    matrix: IntMatrix
    on_coinvariants: AbHom


def norm_sum(module: GammaModule, subgroup) -> NormSum:
    """Σ over G/H of the action, plus the induced coinvariant map.

    >>> from depthzero.galois import FiniteGroup
    >>> m = permutation_module(FiniteGroup.cyclic(2), (0,))
    >>> norm_sum(m, (0,)).matrix.to_lists()
    [[1, 1], [1, 1]]
    """
    reps = coset_reps(module.group, subgroup)
    total = IntMatrix.zeros(module.rank, module.rank)
    for r in reps:
        total = total + module.action[r]
    src = coinvariants_presentation(module, subgroup)
    tgt = coinvariants_presentation(module, None)
    induced = AbHom(source=src, target=tgt, matrix=total)
    return NormSum(matrix=total, on_coinvariants=induced)


# ---------------------------------------------------------------------------
# Restriction, inflation


def restrict_action(module: GammaModule, subset) -> tuple:
    """View the module over a subgroup; returns (module, embedding)."""
    sub_group, embed = module.group.subgroup_as_group(subset)
    mats = tuple(module.action[g] for g in embed)
    return (
        GammaModule(
            group=sub_group,
            presentation=module.presentation,
            action=mats,
            name=module.name,
        ),
        embed,
    )


def inflate_action(
    module: GammaModule, qdata: QuotientGroup, big_group: FiniteGroup
) -> GammaModule:
    """Pull a G/N-module back to G through the projection."""
    if qdata.group.order != module.group.order:
        raise ModuleError("quotient data does not match the module's group")
    if len(qdata.projection) != big_group.order:
        raise ModuleError("quotient data does not match the big group")
    mats = tuple(module.action[qdata.projection[g]] for g in range(big_group.order))
    return GammaModule(
        group=big_group,
        presentation=module.presentation,
        action=mats,
        name=module.name,
    )


def act_through_quotient(module: GammaModule, normal) -> tuple:
    """Descend a G-module to G/N when N acts trivially.

    Returns (module over G/N, quotient data). Raises when some element
    of N acts nontrivially.
    """
    ident = IntMatrix.identity(module.rank)
    for s in normal:
        if not module._equal_mod_relations(module.action[s], ident):
            raise ModuleError(
                f"element {s} acts nontrivially; cannot factor the action"
            )
    qdata = quotient_group(module.group, normal)
    mats = tuple(module.action[rep] for rep in qdata.sections)
    return (
        GammaModule(
            group=qdata.group,
            presentation=module.presentation,
            action=mats,
            name=module.name,
        ),
        qdata,
    )


# ---------------------------------------------------------------------------
# Equivariant maps and short exact sequences


@dataclass(frozen=True)
class ModuleMap:
    source: GammaModule
    target: GammaModule
    matrix: IntMatrix

    def __post_init__(self):
        if self.source.group.table != self.target.group.table:
            raise ModuleError("source and target must share the acting group")
        AbHom(  # raises unless the matrix respects the presentations
            source=self.source.presentation,
            target=self.target.presentation,
            matrix=self.matrix,
        )
        for g in range(self.source.group.order):
            lhs = self.matrix @ self.source.action[g]
            rhs = self.target.action[g] @ self.matrix
            diff = lhs - rhs
            for j in range(diff.cols):
                if not self.target.presentation.contains_in_lattice(diff.column(j)):
                    raise ModuleError(f"map is not equivariant at element {g}")

    def as_hom(self) -> AbHom:
        return AbHom(
            source=self.source.presentation,
            target=self.target.presentation,
            matrix=self.matrix,
        )

    def apply(self, vector):
        return self.matrix.apply(vector)


@dataclass(frozen=True)
class ShortExactSeq:
    """A -> B -> C, verified exact at construction."""

    left: ModuleMap  # A -> B
    right: ModuleMap  # B -> C

    def __post_init__(self):
        report = exactness_report(self.left, self.right)
        bad = [name for name, ok, _ in report if not ok]
        if bad:
            raise ModuleError(f"sequence is not exact: {', '.join(bad)}")


def exactness_report(left: ModuleMap, right: ModuleMap):
    """Named checks for injectivity, surjectivity and middle exactness."""
    checks = []
    if left.target.presentation != right.source.presentation:
        return [("composable", False, "left.target differs from right.source")]
    dec_left = hom_kernel_image(left.as_hom())
    checks.append(
        ("left_injective", dec_left.kernel.is_trivial(), str(dec_left.kernel))
    )
    dec_right = hom_kernel_image(right.as_hom())
    checks.append(
        ("right_surjective", dec_right.cokernel.is_trivial(), str(dec_right.cokernel))
    )
    mid_rank = left.target.presentation.rank
    image_gens = [
        left.matrix.column(j) for j in range(left.matrix.cols)
    ] + left.target.presentation.relation_vectors()
    kernel_gens = kernel_mod_lattice(
        right.matrix, right.target.presentation.relations
    ) + right.source.presentation.relation_vectors()
    forward = all(in_lattice(v, kernel_gens, mid_rank) for v in image_gens)
    backward = all(in_lattice(v, image_gens, mid_rank) for v in kernel_gens)
    checks.append(
        (
            "middle_exact",
            forward and backward,
            "image and kernel lattices must coincide",
        )
    )
    return checks
