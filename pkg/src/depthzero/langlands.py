"""Tori over local fields and their depth-zero character data.

This is the layer that glues the finite Galois models, lattice modules
and the cohomology engine together: weakly unramified character groups
computed two independent ways, residue-field points of the connected
Neron model in the unramified case, tame inertial parameter groups with
a level-stabilization check, central classes of a dual group, and the
archimedean norm identity verified numerically.

Conventions, fixed once and calibrated by the three standard rank-one
tori (split, unramified norm-one, ramified norm-one):

* the Kottwitz-style quotient is Frobenius-invariants of the
  inertia-coinvariants of the cocharacter lattice;
* dual groups of finitely generated abelian groups keep the same
  invariants (see :func:`depthzero.abelian.dual_group`);
* torsion points of a diagonalizable group at level m are handled on
  character groups via :func:`torsion_dual_module`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import gcd

from depthzero.abelian import (
    FinAbGroup,
    IntMatrix,
    Presentation,
    cokernel,
    dual_group,
    integer_kernel,
    kernel_mod_lattice,
    lattice_quotient,
    snf,
)
from depthzero.cohomology import (
    Cocycle1,
    H1Result,
    conjugate_cocycle,
    h1,
    map_coefficients,
)
from depthzero.galois import (
    LocalGaloisDatum,
    _is_prime,
    validate_local_datum,
)
from depthzero.gmodule import (
    GammaModule,
    ModuleError,
    ModuleMap,
    coinvariants_module,
    invariants,
)


class TorusError(ValueError):
    """A torus datum or level parameter outside the supported shapes."""


class LevelStabilizationError(TorusError):
    """The tame inertial computation changed between coefficient levels."""


class RootDatumError(ValueError):
    """A root datum field violates one of the structural axioms."""


class ArchimedeanError(ValueError):
    """An archimedean character datum violates its invariants."""


def _prime_to_p_int(n, p):
    n = abs(n)
    while n and n % p == 0:
        n //= p
    return n


# ---------------------------------------------------------------------------
# Torus data


@dataclass(frozen=True)
class TorusDatum:
    """A torus presented by its cocharacter lattice over a Galois model.

    ``cochar`` must be a free lattice with an action by invertible
    integer matrices; ``field`` supplies inertia, wild inertia, the
    Frobenius element and the residue field size. The dual torus is
    carried implicitly: its character group is the same lattice.
    """

    field: LocalGaloisDatum
    cochar: GammaModule

    def __post_init__(self):
        report = validate_local_datum(self.field)
        if not report.ok:
            raise TorusError(
                "invalid local datum: " + ", ".join(report.failures())
            )
        if self.cochar.group.table != self.field.gamma.table:
            raise TorusError("cocharacter module is not over the datum's group")
        if not self.cochar.is_free():
            raise TorusError("cocharacter module must be a free lattice")
        for g in range(self.field.gamma.order):
            if not self.cochar.action[g].is_unimodular():
                raise TorusError(
                    f"action of element {g} is not invertible over the integers"
                )

    @property
    def rank(self):
        return self.cochar.rank

    @property
    def frobenius_action(self) -> IntMatrix:
        return self.cochar.action[self.field.frob]

    def is_unramified(self):
        ident = IntMatrix.identity(self.rank)
        return all(self.cochar.action[i] == ident for i in self.field.inertia)

    def is_tame(self):
        ident = IntMatrix.identity(self.rank)
        return all(self.cochar.action[w] == ident for w in self.field.wild)

    def inertia_image_order(self):
        """Order of the image of inertia in GL of the cocharacters."""
        return len({self.cochar.action[i] for i in self.field.inertia})


def kottwitz_quotient(torus: TorusDatum) -> FinAbGroup:
    """T/T0 under the fixed convention.

    Frobenius-invariants of the inertia-coinvariants of the cocharacter
    lattice. Calibration: the split rank-one torus gives Z, the
    unramified norm-one torus 0, the ramified norm-one torus Z/2.
    """
    descended, qdata = coinvariants_module(torus.cochar, torus.field.inertia)
    frob_bar = qdata.projection[torus.field.frob]
    return invariants(descended, subset=(frob_bar,)).group


def _fixed_subgroup(module: GammaModule, g) -> FinAbGroup:
    """Fixed points of one element, by a single augmented integer kernel.

    Solves (A_g - 1) y = -R^T w jointly, then projects away the relation
    coordinates. Deliberately avoids the blockwise kernel the invariants
    engine uses, so the two routes stay independent.
    """
    n = module.rank
    delta = module.action[g] - IntMatrix.identity(n)
    rel_rows = module.presentation.relation_vectors()
    if rel_rows:
        cols = [delta.column(j) for j in range(n)] + list(rel_rows)
        wide = IntMatrix.from_rows(cols).transpose()
    else:
        wide = delta
    gens = [tuple(v[:n]) for v in integer_kernel(wide)]
    return lattice_quotient(n, gens, rel_rows).group


def weakly_unramified_chars(torus: TorusDatum) -> FinAbGroup:
    """The weakly unramified character group, computed two ways.

    Way one dualizes :func:`kottwitz_quotient`. Way two computes the
    Frobenius-fixed subgroup of the inertia-coinvariants directly (the
    character group of the Frobenius-coinvariants of the dual
    diagonalizable group; the closed form for a free procyclic acting
    group) and dualizes that. The two must agree; a mismatch means a
    variance convention has drifted and is raised, never repaired.
    """
    descended, qdata = coinvariants_module(torus.cochar, torus.field.inertia)
    frob_bar = qdata.projection[torus.field.frob]
    way1 = dual_group(invariants(descended, subset=(frob_bar,)).group)
    way2 = dual_group(_fixed_subgroup(descended, frob_bar))
    if way1 != way2:
        raise TorusError(
            f"the two computations disagree ({way1} vs {way2}); "
            "this signals a variance convention bug"
        )
    return way1


def special_fiber_points(torus: TorusDatum, q=None) -> FinAbGroup:
    """Points of the special fiber of the connected integral model.

    For an unramified torus this is the cocharacter lattice modulo the
    image of (q sigma - 1), sigma the Frobenius action; its order is
    |det(q sigma - 1)|. Only defined here for unramified tori.
    """
    if not torus.is_unramified():
        raise TorusError("inertia acts nontrivially; no unramified model")
    if q is None:
        q = torus.field.q
    if q < 2:
        raise TorusError(f"residue field size {q} is too small")
    mat = torus.frobenius_action.scale(q) - IntMatrix.identity(torus.rank)
    return cokernel(mat.transpose())


# ---------------------------------------------------------------------------
# Torsion duals and tame inertial classes


def torsion_dual_module(module: GammaModule, m: int):
    """Hom(M, Z/m) as a module over the same group.

    Returns ``(dual, embed)``: ``dual`` presents the homomorphism group
    on coordinates transported through the Smith form of M's relations,
    and ``embed`` is the n-by-n matrix whose column i is the image of
    the i-th abstract generator inside Hom(Z^n, Z/m) = (Z/m)^n, where
    homomorphisms are recorded by their values on the standard basis.
    For a free module this is the inverse-transpose action reduced mod
    m and ``embed`` is the identity.
    """
    if m < 1:
        raise TorusError(f"level {m} must be positive")
    n = module.rank
    rel = module.presentation.relations
    if rel.rows == 0 or rel.is_zero():
        diag = ()
        vmat = IntMatrix.identity(n)
        v_inv = IntMatrix.identity(n)
    else:
        form = snf(rel)
        diag = form.diagonal
        vmat = form.V
        v_inv = form.v_inv
    stretch = []
    orders = []
    for i in range(n):
        d = diag[i] if i < len(diag) else 0
        g = gcd(d, m)
        stretch.append(m // g)
        orders.append(g)
    embed = IntMatrix.from_rows(
        [
            [vmat.entry(i, j) * stretch[j] for j in range(n)]
            for i in range(n)
        ]
    )
    rows = [
        [orders[i] if i == j else 0 for j in range(n)] for i in range(n)
    ]
    pres = Presentation.from_relation_rows(n, rows)

    group = module.group
    mats = []
    for g in range(group.order):
        target = module.action[group.inv(g)].transpose() @ embed
        entries = []
        for j in range(n):
            w = v_inv.apply(target.column(j))
            col = []
            for i in range(n):
                if w[i] % stretch[i]:
                    raise TorusError(
                        "coefficient transport failed; the action does not "
                        "preserve the torsion dual"
                    )
                col.append((w[i] // stretch[i]) % orders[i])
            entries.append(col)
        mats.append(
            IntMatrix.from_rows(
                [[entries[j][i] for j in range(n)] for i in range(n)]
            )
        )
    name = f"Hom({module.name}, Z/{m})" if module.name else f"torsion dual mod {m}"
    dual = GammaModule(
        group=group, presentation=pres, action=tuple(mats), name=name
    )
    return dual, embed


def _default_level(e_img, q, p):
    m = _prime_to_p_int(e_img * e_img * (q - 1), p)
    return m if m > 1 else 2


def _stable_classes_at_level(module: GammaModule, datum, m) -> FinAbGroup:
    """Frobenius-stable H^1 of the model's inertia, coefficients Hom(M, Z/m).

    The domain is the full inertia subgroup of the finite model, not
    its image in GL of the coefficients: classes inflated from a deeper
    tame level than the action itself needs are genuine classes at that
    level, so nothing is quotiented away here.
    """
    dual_mod, _ = torsion_dual_module(module, m)
    group = datum.gamma
    inertia = tuple(sorted(datum.inertia))
    frob = datum.frob
    result = h1(group, dual_mod, subgroup=inertia)
    k = len(result.divisors)
    if k == 0:
        return result.group
    cols = [
        result.class_of(conjugate_cocycle(rep, frob))
        for rep in result.representatives
    ]
    conj_mat = IntMatrix.from_rows(cols).transpose()
    diag_rows = [
        [result.divisors[i] if i == j else 0 for j in range(k)]
        for i in range(k)
    ]
    diag = IntMatrix.from_rows(diag_rows)
    stable = kernel_mod_lattice(conj_mat - IntMatrix.identity(k), diag)
    return lattice_quotient(k, stable, diag_rows).group


def _tame_inertial_classes(module: GammaModule, datum, level) -> FinAbGroup:
    """Stable inertial classes with the two-level stabilization check."""
    p, q = datum.p, datum.q
    e_img = len({module.action[i] for i in datum.inertia})
    m = _default_level(e_img, q, p) if level is None else level
    if m < 2 or m % p == 0:
        raise TorusError(f"level {m} must be at least 2 and coprime to p = {p}")
    first = _stable_classes_at_level(module, datum, m)
    step = _prime_to_p_int(e_img, p)
    if step < 2:
        step = 2 if p != 2 else 3
    second = _stable_classes_at_level(module, datum, m * step)
    if first != second:
        raise LevelStabilizationError(
            f"inertial classes changed between levels {m} and {m * step}: "
            f"{first} vs {second}"
        )
    return first


def depth_zero_inertial_params(torus: TorusDatum, level=None) -> FinAbGroup:
    """The inertial part of the depth-zero parameter group of a tame torus.

    Unramified tori use the closed form: the dual of the cocharacters
    modulo (q sigma - 1), which is the group of torsion points t of the
    dual torus with sigma(t) = t^q. Ramified tame tori are computed at
    a finite coefficient level coprime to p as the Frobenius-stable
    part of H^1 of the inertia image with torsion dual coefficients;
    the result is recomputed at a larger level and must not change
    (:class:`LevelStabilizationError` otherwise). ``level`` overrides
    the default starting level for the ramified route.
    """
    if not torus.is_tame():
        raise TorusError("wild inertia acts nontrivially on the cocharacters")
    if torus.is_unramified():
        return dual_group(special_fiber_points(torus))
    return _tame_inertial_classes(torus.cochar, torus.field, level)


def prime_to_p_part(group: FinAbGroup, p) -> FinAbGroup:
    """Largest quotient invariants with no p-part in the torsion.

    >>> from depthzero.abelian import FinAbGroup
    >>> prime_to_p_part(FinAbGroup.from_divisors([6]), 2)
    FinAbGroup(free_rank=0, torsion=(3,))
    """
    if not _is_prime(p):
        raise TorusError(f"{p} is not prime")
    return group.prime_to_p_part(p)


# ---------------------------------------------------------------------------
# The depth-zero comparison report


@dataclass(frozen=True)
class DepthZeroPiece:
    name: str
    character_side: object  # FinAbGroup or None when no formula applies
    parameter_side: object
    verdict: str  # "pass" | "fail" | "not-computed"


@dataclass(frozen=True)
class DepthZeroReport:
    """Graded comparison of the two sides of the depth-zero match."""

    pieces: tuple

    @property
    def ok(self):
        return all(piece.verdict != "fail" for piece in self.pieces)

    def __str__(self):
        lines = []
        for piece in self.pieces:
            lines.append(
                f"[{piece.verdict}] {piece.name}: "
                f"character side {piece.character_side} / "
                f"parameter side {piece.parameter_side}"
            )
        return "\n".join(lines)


def _verdict(a, b):
    return "pass" if a == b else "fail"


def verify_depth_zero_match(torus: TorusDatum, level=None) -> DepthZeroReport:
    """Compare character-side and parameter-side depth-zero pieces.

    The weakly unramified piece is checked for every torus. The
    inertial piece is checked in full for unramified tori; for ramified
    tame tori only the parameter side has a formula, so the piece is
    reported without a verdict; wildly acting tori report neither.
    """
    pieces = []
    char_wur = dual_group(kottwitz_quotient(torus))
    param_wur = weakly_unramified_chars(torus)
    pieces.append(
        DepthZeroPiece(
            name="weakly-unramified",
            character_side=char_wur,
            parameter_side=param_wur,
            verdict=_verdict(char_wur, param_wur),
        )
    )
    if torus.is_unramified():
        char_in = dual_group(special_fiber_points(torus))
        param_in = depth_zero_inertial_params(torus, level=level)
        pieces.append(
            DepthZeroPiece(
                name="depth-zero-inertial",
                character_side=char_in,
                parameter_side=param_in,
                verdict=_verdict(char_in, param_in),
            )
        )
    elif torus.is_tame():
        param_in = depth_zero_inertial_params(torus, level=level)
        pieces.append(
            DepthZeroPiece(
                name="depth-zero-inertial",
                character_side=None,
                parameter_side=param_in,
                verdict="not-computed",
            )
        )
    else:
        pieces.append(
            DepthZeroPiece(
                name="depth-zero-inertial",
                character_side=None,
                parameter_side=None,
                verdict="not-computed",
            )
        )
    return DepthZeroReport(pieces=tuple(pieces))


# ---------------------------------------------------------------------------
# Root data with Galois action


@dataclass(frozen=True)
class RootDatumGamma:
    """A root datum with a compatible action of a finite group.

    ``x_star`` and ``x_costar`` are free lattices over the same group;
    ``roots`` live in x_star coordinates, ``coroots`` in x_costar
    coordinates, aligned index by index; ``pairing`` is the bilinear
    form matrix, characters on the left. Construction verifies the
    axioms: normalization of the pairing on aligned pairs, reflections
    permuting roots and coroots consistently, and the group action
    permuting both sides the same way while preserving the pairing.
    """

    x_star: GammaModule
    x_costar: GammaModule
    roots: tuple
    coroots: tuple
    pairing: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(tuple(r) for r in self.roots))
        object.__setattr__(
            self, "coroots", tuple(tuple(c) for c in self.coroots)
        )
        if self.x_star.group.table != self.x_costar.group.table:
            raise RootDatumError("the two lattices have different groups")
        if not (self.x_star.is_free() and self.x_costar.is_free()):
            raise RootDatumError("character and cocharacter lattices must be free")
        if (self.pairing.rows, self.pairing.cols) != (
            self.x_star.rank,
            self.x_costar.rank,
        ):
            raise RootDatumError("pairing matrix shape does not match the lattices")
        if len(self.roots) != len(self.coroots):
            raise RootDatumError("roots and coroots must align index by index")
        for a in self.roots:
            if len(a) != self.x_star.rank or not any(a):
                raise RootDatumError(f"bad root {a}")
        for c in self.coroots:
            if len(c) != self.x_costar.rank or not any(c):
                raise RootDatumError(f"bad coroot {c}")
        if len(set(self.roots)) != len(self.roots):
            raise RootDatumError("repeated root")
        if len(set(self.coroots)) != len(self.coroots):
            raise RootDatumError("repeated coroot")
        for a, c in zip(self.roots, self.coroots):
            if self.pair(a, c) != 2:
                raise RootDatumError(
                    f"pairing of {a} with its coroot {c} is {self.pair(a, c)}, not 2"
                )
        self._check_reflections()
        self._check_group_action()

    def pair(self, chi, lam):
        row = self.pairing.apply(tuple(lam))
        return sum(chi[i] * row[i] for i in range(len(chi)))

    def _check_reflections(self):
        root_index = {a: i for i, a in enumerate(self.roots)}
        coroot_index = {c: i for i, c in enumerate(self.coroots)}
        for i, (alpha, alpha_co) in enumerate(zip(self.roots, self.coroots)):
            perm = []
            for beta in self.roots:
                n = self.pair(beta, alpha_co)
                image = tuple(b - n * a for b, a in zip(beta, alpha))
                if image not in root_index:
                    raise RootDatumError(
                        f"reflection in root {i} sends {beta} outside the roots"
                    )
                perm.append(root_index[image])
            for j, beta_co in enumerate(self.coroots):
                n = self.pair(alpha, beta_co)
                image = tuple(b - n * a for b, a in zip(beta_co, alpha_co))
                if image not in coroot_index:
                    raise RootDatumError(
                        f"reflection in root {i} sends coroot {beta_co} "
                        "outside the coroots"
                    )
                if coroot_index[image] != perm[j]:
                    raise RootDatumError(
                        f"reflection in root {i} permutes roots and coroots "
                        "differently"
                    )

    def _check_group_action(self):
        group = self.x_star.group
        root_index = {a: i for i, a in enumerate(self.roots)}
        coroot_index = {c: i for i, c in enumerate(self.coroots)}
        for g in range(group.order):
            a_star = self.x_star.action[g]
            a_co = self.x_costar.action[g]
            perm = []
            for a in self.roots:
                image = a_star.apply(a)
                if image not in root_index:
                    raise RootDatumError(
                        f"element {g} does not permute the roots"
                    )
                perm.append(root_index[image])
            for j, c in enumerate(self.coroots):
                image = a_co.apply(c)
                if image not in coroot_index:
                    raise RootDatumError(
                        f"element {g} does not permute the coroots"
                    )
                if coroot_index[image] != perm[j]:
                    raise RootDatumError(
                        f"element {g} permutes roots and coroots differently"
                    )
            if a_star.transpose() @ self.pairing @ a_co != self.pairing:
                raise RootDatumError(f"element {g} does not preserve the pairing")


def center_dual(datum: RootDatumGamma) -> GammaModule:
    """Character group of the dual group's center, with its action.

    The cocharacter lattice modulo the coroot lattice (the fundamental
    group of the datum), carried as a torsion-allowed module.
    """
    pres = Presentation.from_relation_rows(
        datum.x_costar.rank, [list(c) for c in datum.coroots]
    )
    try:
        return GammaModule(
            group=datum.x_costar.group,
            presentation=pres,
            action=datum.x_costar.action,
            name="center dual",
        )
    except ModuleError as exc:  # unreachable after datum validation
        raise RootDatumError(f"coroots are not stable under the action: {exc}")


def _invariants_submodule(module: GammaModule, subset) -> GammaModule:
    """The fixed points of a normal subset, as a standalone module."""
    if not module.group.is_normal(tuple(subset)):
        raise TorusError("invariants submodule needs a normal acting subset")
    data = invariants(module, subset)
    k = len(data.divisors)
    rows = [
        [d if i == j else 0 for j in range(k)]
        for i, d in enumerate(data.divisors)
        if d > 0
    ]
    pres = Presentation.from_relation_rows(k, rows)
    mats = []
    for g in range(module.group.order):
        act = module.action[g]
        cols = [data.class_coord(act.apply(gen)) for gen in data.generators]
        mats.append(
            IntMatrix.from_rows(
                [[cols[j][i] for j in range(k)] for i in range(k)]
            )
        )
    return GammaModule(
        group=module.group,
        presentation=pres,
        action=tuple(mats),
        name=f"{module.name} invariants" if module.name else "invariants",
    )


def depth_zero_center_classes(
    datum: RootDatumGamma, field: LocalGaloisDatum, level=None
) -> FinAbGroup:
    """Central classes of depth zero for a dual group over a local field.

    Computed on the character group of the center fixed by wild
    inertia, assembled as the direct sum of the unramified piece
    (Frobenius-fixed part of the inertia-coinvariants, dualized) and
    the inertial piece (the closed form through (q F - 1) when inertia
    acts trivially on the effective coefficients, the tame stable-class
    computation otherwise).
    """
    report = validate_local_datum(field)
    if not report.ok:
        raise TorusError("invalid local datum: " + ", ".join(report.failures()))
    if datum.x_costar.group.table != field.gamma.table:
        raise TorusError("root datum and local datum have different groups")
    center = center_dual(datum)
    ident = IntMatrix.identity(center.rank)
    wild_trivial = all(
        center._equal_mod_relations(center.action[w], ident)
        for w in field.wild
    )
    effective = center if wild_trivial else _invariants_submodule(center, field.wild)

    descended, qdata = coinvariants_module(effective, field.inertia)
    frob_bar = qdata.projection[field.frob]
    unramified_piece = dual_group(
        invariants(descended, subset=(frob_bar,)).group
    )

    ident_eff = IntMatrix.identity(effective.rank)
    inertia_trivial = all(
        effective._equal_mod_relations(effective.action[i], ident_eff)
        for i in field.inertia
    )
    if inertia_trivial:
        twist = effective.action[field.frob].scale(field.q) - ident_eff
        rows = effective.presentation.relation_vectors() + [
            twist.column(j) for j in range(effective.rank)
        ]
        inertial_piece = dual_group(
            Presentation.from_relation_rows(effective.rank, rows).group()
        )
    else:
        inertial_piece = _tame_inertial_classes(effective, field, level)
    return unramified_piece.direct_sum(inertial_piece)


# ---------------------------------------------------------------------------
# The central-classes-to-torus map


@dataclass(frozen=True)
class CenterToTorusMap:
    """Finite-level H^1 of central classes mapped into torus classes."""

    source_h1: H1Result
    target_h1: H1Result
    coefficient_map: ModuleMap
    level: int

    def push(self, cocycle: Cocycle1) -> Cocycle1:
        return map_coefficients(self.coefficient_map, cocycle)

    def on_class(self, coords) -> tuple:
        rep = self.source_h1.cocycle_from_coords(coords)
        return self.target_h1.class_of(self.push(rep))


def center_to_torus_map(
    datum: RootDatumGamma,
    torus: TorusDatum,
    projection: IntMatrix = None,
    level=None,
) -> CenterToTorusMap:
    """The map from central classes to torus classes at a finite level.

    ``projection`` sends the torus cocharacter lattice onto the ambient
    lattice of the datum's fundamental group; when the two lattices
    coincide (same rank, same action) it defaults to the identity. It
    must be equivariant and must cover the fundamental group together
    with the coroots. The returned object pushes cocycles forward along
    the dual coefficient map Hom(pi_1, Z/m) -> Hom(cochar, Z/m).
    """
    if datum.x_costar.group.table != torus.field.gamma.table:
        raise RootDatumError("root datum and torus have different groups")
    n_t = torus.rank
    n_r = datum.x_costar.rank
    if projection is None:
        if n_t != n_r or torus.cochar.action != datum.x_costar.action:
            raise RootDatumError(
                "no default projection: the cocharacter lattices differ; "
                "supply one"
            )
        projection = IntMatrix.identity(n_r)
    if (projection.rows, projection.cols) != (n_r, n_t):
        raise RootDatumError("projection has the wrong shape")
    for g in range(torus.field.gamma.order):
        if projection @ torus.cochar.action[g] != datum.x_costar.action[g] @ projection:
            raise RootDatumError(f"projection is not equivariant at element {g}")
    span_rows = [projection.column(j) for j in range(n_t)] + [
        list(c) for c in datum.coroots
    ]
    if cokernel(IntMatrix.from_rows(span_rows)) != FinAbGroup.trivial():
        raise RootDatumError(
            "projected cocharacters and coroots do not cover the ambient lattice"
        )

    if level is None:
        level = _default_level(
            torus.inertia_image_order(), torus.field.q, torus.field.p
        )
    if level < 2 or level % torus.field.p == 0:
        raise TorusError(
            f"level {level} must be at least 2 and coprime to p = {torus.field.p}"
        )
    source, source_embed = torsion_dual_module(center_dual(datum), level)
    target, target_embed = torsion_dual_module(torus.cochar, level)
    if target_embed != IntMatrix.identity(n_t):  # free lattice: always identity
        raise TorusError("unexpected embedding for free coefficients")
    matrix = projection.transpose() @ source_embed
    coefficient_map = ModuleMap(source=source, target=target, matrix=matrix)
    gamma = torus.field.gamma
    return CenterToTorusMap(
        source_h1=h1(gamma, source),
        target_h1=h1(gamma, target),
        coefficient_map=coefficient_map,
        level=level,
    )


# ---------------------------------------------------------------------------
# The archimedean norm identity


_ARCH_TOL = 1e-9


@dataclass(frozen=True)
class ArchimedeanCharDatum:
    """Character data of a real torus pulled through the complex norm.

    ``sigma`` is the integral Galois involution; ``mu`` and ``nu`` are
    the holomorphic and antiholomorphic exponents, ``h`` the extra
    parameter entering only through a term that cancels in the norm
    identity. Invariants: sigma squares to the identity, nu equals
    sigma applied to the conjugate of mu, and mu - nu is integral.
    """

    sigma: IntMatrix
    mu: tuple
    nu: tuple
    h: tuple

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(complex(z) for z in self.mu))
        object.__setattr__(self, "nu", tuple(complex(z) for z in self.nu))
        object.__setattr__(self, "h", tuple(complex(z) for z in self.h))
        r = self.sigma.rows
        if self.sigma.cols != r:
            raise ArchimedeanError("sigma must be square")
        if self.sigma @ self.sigma != IntMatrix.identity(r):
            raise ArchimedeanError("sigma is not an involution")
        if not (len(self.mu) == len(self.nu) == len(self.h) == r):
            raise ArchimedeanError("vector lengths do not match the rank")
        sigma_mu_bar = _complex_apply(self.sigma, tuple(z.conjugate() for z in self.mu))
        for i in range(r):
            if abs(self.nu[i] - sigma_mu_bar[i]) > _ARCH_TOL:
                raise ArchimedeanError(
                    f"nu is not sigma(conj(mu)) at coordinate {i}"
                )
            diff = self.mu[i] - self.nu[i]
            if abs(diff.imag) > _ARCH_TOL or abs(diff.real - round(diff.real)) > _ARCH_TOL:
                raise ArchimedeanError(
                    f"mu - nu is not integral at coordinate {i}"
                )

    @property
    def rank(self):
        return self.sigma.rows


def _complex_apply(mat: IntMatrix, vec):
    return tuple(
        sum(mat.entry(i, j) * vec[j] for j in range(mat.cols))
        for i in range(mat.rows)
    )


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class ArchimedeanReport:
    samples: int
    max_deviation: float
    worst_input: tuple
    tolerance: float

    @property
    def ok(self):
        return self.max_deviation <= self.tolerance

    def __str__(self):
        state = "pass" if self.ok else "FAIL"
        return (
            f"[{state}] archimedean norm identity: {self.samples} samples, "
            f"max relative deviation {self.max_deviation:.3e} "
            f"(tolerance {self.tolerance:.1e})"
        )


def archimedean_norm_check(
    datum: ArchimedeanCharDatum, samples, tolerance=_ARCH_TOL
) -> ArchimedeanReport:
    """Check the norm identity numerically on the given sample points.

    For each complex vector y: the character formula evaluated at
    x = y + sigma(conj(y)) must equal exp(<mu, y> + <nu, conj(y)>).
    Both sides are entire, so double precision is ample on bounded
    samples; the report carries the worst relative deviation.
    """
    samples = [tuple(complex(z) for z in y) for y in samples]
    r = datum.rank
    worst = 0.0
    worst_input = ()
    for y in samples:
        if len(y) != r:
            raise ArchimedeanError("sample length does not match the rank")
        y_bar = tuple(z.conjugate() for z in y)
        x = tuple(a + b for a, b in zip(y, _complex_apply(datum.sigma, y_bar)))
        x_bar = tuple(z.conjugate() for z in x)
        sx = _complex_apply(datum.sigma, x_bar)
        left_exponent = _dot(
            datum.h, tuple(a - b for a, b in zip(x, sx))
        ) + _dot(
            tuple(z / 2 for z in datum.mu), tuple(a + b for a, b in zip(x, sx))
        )
        right_exponent = _dot(datum.mu, y) + _dot(datum.nu, y_bar)
        lhs = cmath.exp(left_exponent)
        rhs = cmath.exp(right_exponent)
        deviation = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
        if deviation > worst:
            worst = deviation
            worst_input = y
    return ArchimedeanReport(
        samples=len(samples),
        max_deviation=worst,
        worst_input=worst_input,
        tolerance=tolerance,
    )


def random_archimedean_datum(rng, rank) -> ArchimedeanCharDatum:
    """Draw a datum satisfying the invariants exactly.

    The involution is assembled from +1, -1 and swap blocks (all
    symmetric: the identity needs sigma self-adjoint for the pairing).
    mu is real with mu - sigma(mu) integral, which pins the shape per
    block: free on +1 coordinates, half-integers on -1 coordinates,
    integer offsets across a swap. h is unconstrained.
    """
    blocks = []
    i = 0
    while i < rank:
        if i + 1 < rank and rng.random() < 0.4:
            blocks.append(("swap", i))
            i += 2
        else:
            blocks.append(("diag", i, 1 if rng.random() < 0.5 else -1))
            i += 1
    rows = [[0] * rank for _ in range(rank)]
    mu = [0.0] * rank
    for block in blocks:
        if block[0] == "swap":
            _, i = block
            rows[i][i + 1] = 1
            rows[i + 1][i] = 1
            mu[i] = rng.uniform(-3.0, 3.0)
            mu[i + 1] = mu[i] - rng.randrange(-3, 4)
        else:
            _, i, eps = block
            rows[i][i] = eps
            mu[i] = rng.uniform(-3.0, 3.0) if eps == 1 else rng.randrange(-6, 7) / 2
    sigma = IntMatrix.from_rows(rows)
    nu = _complex_apply(sigma, tuple(mu))
    h = tuple(
        complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))
        for _ in range(rank)
    )
    return ArchimedeanCharDatum(sigma=sigma, mu=tuple(mu), nu=nu, h=h)


def random_archimedean_samples(rng, rank, count, bound=5.0):
    """Complex sample vectors with every entry bounded by ``bound``."""
    half = bound * 0.7
    return [
        tuple(
            complex(rng.uniform(-half, half), rng.uniform(-half, half))
            for _ in range(rank)
        )
        for _ in range(count)
    ]
