"""Worked fixtures: finite-order matrices, named tori, module families.

Everything the sweep machinery and the test suite iterate over lives
here, built deterministically from small data. Nothing in this module
is random; callers that want variety get it by slicing these lists.
"""

from .abelian import FinAbGroup, IntMatrix, Presentation
from .cohomology import generating_set
from .galois import FiniteGroup, catalog, tame_local_datum
from .gmodule import (
    GammaModule,
    ModuleError,
    mod_m_reduction,
    module_from_generator_images,
    permutation_module,
    trivial_module,
)
from .langlands import RootDatumGamma, TorusDatum


class CatalogError(ValueError):
    pass


def matrix_order(mat: IntMatrix, cap=24):
    """Multiplicative order of an integer matrix, or raise beyond cap."""
    if mat.rows != mat.cols:
        raise CatalogError("order is only defined for square matrices")
    ident = IntMatrix.identity(mat.rows)
    power = mat
    for k in range(1, cap + 1):
        if power == ident:
            return k
        power = power @ mat
    raise CatalogError(f"order exceeds {cap}; not treated as finite here")


def _m(rows):
    return IntMatrix.from_rows(rows)


# Representatives of the finite-order conjugacy classes of GL_r(Z) for
# r <= 3: the classical rank-2 list (orders 1, 2, 3, 4, 6; two distinct
# order-2 classes of determinant -1), their block sums with rank-1
# entries, and the 3-cycle permutation lattice and its negative, which
# do not split off a direct summand over Z. A few block sums repeat a
# conjugacy class under coordinate permutation; the list is kept
# literal rather than minimal.
_RANK1 = (
    ("one", _m([[1]])),
    ("neg", _m([[-1]])),
)

_RANK2 = (
    ("id2", IntMatrix.identity(2)),
    ("neg2", _m([[-1, 0], [0, -1]])),
    ("mirror", _m([[1, 0], [0, -1]])),
    ("swap", _m([[0, 1], [1, 0]])),
    ("rot3", _m([[0, -1], [1, -1]])),
    ("rot4", _m([[0, -1], [1, 0]])),
    ("rot6", _m([[1, -1], [1, 0]])),
)


def _block_sum(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n, k = a.rows, b.rows
    rows = []
    for i in range(n):
        rows.append([a.entry(i, j) for j in range(n)] + [0] * k)
    for i in range(k):
        rows.append([0] * n + [b.entry(i, j) for j in range(k)])
    return IntMatrix.from_rows(rows)


def _rank3_entries():
    entries = []
    for name2, mat2 in _RANK2:
        for name1, mat1 in _RANK1:
            entries.append((f"{name2}+{name1}", _block_sum(mat2, mat1)))
    entries.append(("cycle3", _m([[0, 0, 1], [1, 0, 0], [0, 1, 0]])))
    entries.append(("-cycle3", _m([[0, 0, -1], [-1, 0, 0], [0, -1, 0]])))
    return tuple(entries)


_RANK3 = _rank3_entries()


def finite_order_matrices(rank):
    """Named finite-order representatives in GL_rank(Z), rank <= 3."""
    try:
        return {1: _RANK1, 2: _RANK2, 3: _RANK3}[rank]
    except KeyError:
        raise CatalogError(f"no matrix catalog for rank {rank}")


# ---------------------------------------------------------------------------
# Named tori


def unramified_torus(sigma: IntMatrix, p, q) -> TorusDatum:
    """The torus split by the unramified extension where sigma is Frobenius."""
    k = matrix_order(sigma)
    field = tame_local_datum(1, k, q, p)
    if k == 1:
        cochar = GammaModule(
            group=field.gamma,
            presentation=Presentation.free(sigma.rows),
            action=(IntMatrix.identity(sigma.rows),),
        )
    else:
        cochar = module_from_generator_images(
            field.gamma, Presentation.free(sigma.rows), {field.frob: sigma}
        )
    return TorusDatum(field=field, cochar=cochar)


def ramified_torus(sigma: IntMatrix, p, q) -> TorusDatum:
    """Totally ramified tame torus: inertia image generated by sigma.

    Needs q = 1 mod order(sigma) so the tame model closes with the
    q-power Frobenius acting trivially on the inertia image.
    """
    e = matrix_order(sigma)
    field = tame_local_datum(e, 1, q, p)
    if e == 1:
        raise CatalogError("sigma is the identity; use unramified_torus")
    cochar = module_from_generator_images(
        field.gamma, Presentation.free(sigma.rows), {1: sigma}
    )
    return TorusDatum(field=field, cochar=cochar)


def tame_s3_torus() -> TorusDatum:
    """Rank-2 torus with full S3 image: rot3 inertia, swap Frobenius."""
    field = tame_local_datum(3, 2, 2, 2)
    s = 2  # index of the inertia generator in the tame model
    f = 1
    cochar = module_from_generator_images(
        field.gamma,
        Presentation.free(2),
        {s: _m([[0, -1], [1, -1]]), f: _m([[0, 1], [1, 0]])},
    )
    return TorusDatum(field=field, cochar=cochar)


def mixed_swap_torus() -> TorusDatum:
    """Ramified times unramified: inertia by -1, Frobenius by swap."""
    field = tame_local_datum(2, 2, 3, 3)
    cochar = module_from_generator_images(
        field.gamma,
        Presentation.free(2),
        {2: _m([[-1, 0], [0, -1]]), 1: _m([[0, 1], [1, 0]])},
    )
    return TorusDatum(field=field, cochar=cochar)


def torus_catalog():
    """The named tori every duality sweep runs over."""
    entries = {
        "split-gm": unramified_torus(_m([[1]]), 3, 3),
        "unramified-norm-one": unramified_torus(_m([[-1]]), 3, 3),
        "unramified-swap": unramified_torus(_m([[0, 1], [1, 0]]), 2, 2),
        "unramified-rot3": unramified_torus(_m([[0, -1], [1, -1]]), 2, 2),
        "unramified-rot4": unramified_torus(_m([[0, -1], [1, 0]]), 3, 3),
        "unramified-rot6": unramified_torus(_m([[1, -1], [1, 0]]), 5, 5),
        "ramified-norm-one": ramified_torus(_m([[-1]]), 3, 3),
        "ramified-rot4": ramified_torus(_m([[0, -1], [1, 0]]), 5, 5),
        "ramified-rot3": ramified_torus(_m([[0, -1], [1, -1]]), 7, 7),
        "mixed-swap": mixed_swap_torus(),
        "tame-s3": tame_s3_torus(),
    }
    return entries


# ---------------------------------------------------------------------------
# Split root data


def split_root_datum(kind, group: FiniteGroup = None) -> RootDatumGamma:
    """SL2 / PGL2 / GL2 with trivial Galois action over ``group``."""
    if group is None:
        group = FiniteGroup.cyclic(1)
    shapes = {
        "SL2": (1, ((2,), (-2,)), ((1,), (-1,))),
        "PGL2": (1, ((1,), (-1,)), ((2,), (-2,))),
        "GL2": (2, ((1, -1), (-1, 1)), ((1, -1), (-1, 1))),
    }
    if kind not in shapes:
        raise CatalogError(f"unknown split datum {kind!r}")
    rank, roots, coroots = shapes[kind]
    lattice = trivial_module(group, rank)
    return RootDatumGamma(
        x_star=lattice,
        x_costar=lattice,
        roots=roots,
        coroots=coroots,
        pairing=IntMatrix.identity(rank),
    )


def root_datum_catalog(group: FiniteGroup = None):
    return {k: split_root_datum(k, group) for k in ("SL2", "PGL2", "GL2")}


# ---------------------------------------------------------------------------
# Module families for the closed-form and transfer sweeps


def _lattice_assignments(group: FiniteGroup, max_rank):
    gens = generating_set(group, tuple(range(group.order)))
    found = []
    for rank in range(1, max_rank + 1):
        pool = [mat for _name, mat in finite_order_matrices(rank)]
        choices = [()]
        for _g in gens:
            choices = [prev + (mat,) for prev in choices for mat in pool]
        for combo in choices:
            images = dict(zip(gens, combo))
            try:
                mod = module_from_generator_images(
                    group, Presentation.free(rank), images
                )
            except (ModuleError, ValueError):
                continue
            found.append(mod)
    return found


def _dedupe(modules):
    seen = set()
    out = []
    for mod in modules:
        key = (mod.presentation, mod.action)
        if key not in seen:
            seen.add(key)
            out.append(mod)
    return out


def module_family(group: FiniteGroup, max_rank=3, max_order=27):
    """Lattices with finite-order actions plus their finite reductions.

    Lattices come from assigning catalog matrices to a generating set
    (failed assignments are skipped) and from small permutation
    modules; finite members are uniform mod-m reductions with
    m ** rank <= max_order, plus rank-1 reductions at every modulus up
    to max_order and mixed two-step torsion quotients diag(m1, m2) of
    the rank-2 lattices whenever the action survives the quotient.
    """
    lattices = _lattice_assignments(group, max_rank)
    for sub in group.subgroups():
        if len(sub) * max_rank >= group.order:
            lattices.append(permutation_module(group, sub))
    lattices = _dedupe(lattices)

    finite = []
    for mod in lattices:
        if mod.rank == 1:
            moduli = range(2, max_order + 1)
        else:
            moduli = [m for m in range(2, max_order + 1) if m**mod.rank <= max_order]
        for m in moduli:
            finite.append(mod_m_reduction(mod, m))
        if mod.rank == 2:
            for m1 in range(2, max_order + 1):
                for m2 in range(m1 + 1, max_order + 1):
                    if m1 * m2 > max_order:
                        continue
                    pres = Presentation(
                        rank=2, relations=_m([[m1, 0], [0, m2]])
                    )
                    try:
                        finite.append(
                            GammaModule(
                                group=group,
                                presentation=pres,
                                action=mod.action,
                                name=f"{mod.name or 'lat'} mod ({m1},{m2})",
                            )
                        )
                    except ModuleError:
                        continue
    return _dedupe(lattices + finite)


def group_catalog(max_order=None):
    """The built-in finite groups, optionally capped by order."""
    groups = catalog()
    if max_order is None:
        return groups
    return {name: g for name, g in groups.items() if g.order <= max_order}


def finite_members(modules, max_size=27):
    """The members of a family with finite size at most max_size."""
    out = []
    for mod in modules:
        grp = mod.presentation.group()
        if grp.free_rank == 0:
            size = grp.order()
            if size <= max_size:
                out.append(mod)
    return out
