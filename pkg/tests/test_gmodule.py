"""Tests for group actions on finitely generated abelian groups."""

import pytest

from depthzero.abelian import FinAbGroup, IntMatrix, Presentation
from depthzero.galois import FiniteGroup, GroupError, catalog, quotient_group
from depthzero.gmodule import (
    GammaModule,
    ModuleError,
    ModuleMap,
    ShortExactSeq,
    act_through_quotient,
    coinvariants,
    coinvariants_module,
    exactness_report,
    inflate_action,
    invariants,
    mod_m_reduction,
    module_from_generator_images,
    norm_sum,
    permutation_module,
    restrict_action,
    trivial_module,
)


def sign_module(n):
    """C_n acting on Z through the surjection onto {1, -1}; n must be even."""
    group = FiniteGroup.cyclic(n)
    mats = tuple(
        IntMatrix.from_rows([[1 if g % 2 == 0 else -1]]) for g in range(n)
    )
    return GammaModule(group=group, presentation=Presentation.free(1), action=mats)


def test_action_laws_enforced():
    c2 = FiniteGroup.cyclic(2)
    good = sign_module(2)
    assert good.act(1, (5,)) == (-5,)

    with pytest.raises(ModuleError):
        # identity element must act as identity
        GammaModule(
            group=c2,
            presentation=Presentation.free(1),
            action=(
                IntMatrix.from_rows([[-1]]),
                IntMatrix.from_rows([[1]]),
            ),
        )
    with pytest.raises(ModuleError):
        # composition law: g*g = e but (2)(2) != 1
        GammaModule(
            group=c2,
            presentation=Presentation.free(1),
            action=(
                IntMatrix.from_rows([[1]]),
                IntMatrix.from_rows([[2]]),
            ),
        )
    with pytest.raises(ModuleError):
        # wrong number of matrices
        GammaModule(
            group=c2,
            presentation=Presentation.free(1),
            action=(IntMatrix.identity(1),),
        )


def test_action_must_preserve_relations():
    c2 = FiniteGroup.cyclic(2)
    pres = Presentation(rank=2, relations=IntMatrix.from_rows([[2, 0]]))
    swap = IntMatrix.from_rows([[0, 1], [1, 0]])
    with pytest.raises(ModuleError):
        GammaModule(
            group=c2,
            presentation=pres,
            action=(IntMatrix.identity(2), swap),
        )


def test_permutation_module_examples():
    c2 = FiniteGroup.cyclic(2)
    assert permutation_module(c2, (0, 1)).rank == 1

    swap = permutation_module(c2, (0,))
    assert swap.rank == 2
    assert swap.action[1].to_lists() == [[0, 1], [1, 0]]

    s3 = catalog()["S3"]
    h = next(s for s in s3.subgroups() if len(s) == 2)
    m = permutation_module(s3, h)
    assert m.rank == 3
    for g in s3.elements():
        cols = [m.action[g].column(j) for j in range(3)]
        assert all(sum(c) == 1 and set(c) <= {0, 1} for c in cols)

    with pytest.raises(GroupError):
        permutation_module(c2, (1,))


def test_invariants_basic():
    c2 = FiniteGroup.cyclic(2)
    triv = trivial_module(c2, rank=2)
    inv = invariants(triv)
    assert inv.group == FinAbGroup(free_rank=2)

    minus = sign_module(2)
    assert invariants(minus).group == FinAbGroup.trivial()

    swap = permutation_module(c2, (0,))
    inv = invariants(swap)
    assert inv.group == FinAbGroup(free_rank=1)
    (gen,) = inv.generators
    assert gen[0] == gen[1] != 0


def test_invariants_fix_exactly():
    s3 = catalog()["S3"]
    h = next(s for s in s3.subgroups() if len(s) == 2)
    m = permutation_module(s3, h)
    inv = invariants(m)
    for v in inv.generators:
        for g in s3.elements():
            assert m.act(g, v) == v


def test_coinvariants_examples():
    assert coinvariants(sign_module(2)).group == FinAbGroup(torsion=(2,))
    c2 = FiniteGroup.cyclic(2)
    swap = permutation_module(c2, (0,))
    assert coinvariants(swap).group == FinAbGroup(free_rank=1)
    triv = trivial_module(c2, rank=3)
    assert coinvariants(triv).group == FinAbGroup(free_rank=3)


def test_invariant_coinvariant_rank_counts_orbits():
    # For permutation modules both ranks equal the number of orbits.
    s3 = catalog()["S3"]
    for sub in s3.subgroups():
        m = permutation_module(s3, sub)
        full_inv = invariants(m).group
        full_coinv = coinvariants(m).group
        assert full_inv == FinAbGroup(free_rank=1)
        assert full_coinv.free_rank == 1


def test_coinvariants_module_descends():
    c4 = FiniteGroup.cyclic(4)
    mats = tuple(
        IntMatrix.from_rows([[1 if g % 2 == 0 else -1]]) for g in range(4)
    )
    m = GammaModule(group=c4, presentation=Presentation.free(1), action=mats)
    descended, qdata = coinvariants_module(m, (0, 2))
    assert qdata.group.order == 2
    assert descended.underlying_group() == FinAbGroup(free_rank=1)
    # the generator of C4/{0,2} still acts by -1
    assert descended.act(1, (1,)) == (-1,)


def test_norm_sum_examples():
    c2 = FiniteGroup.cyclic(2)
    swap = permutation_module(c2, (0,))
    assert norm_sum(swap, (0, 1)).matrix.to_lists() == [[1, 0], [0, 1]]
    assert norm_sum(swap, (0,)).matrix.to_lists() == [[1, 1], [1, 1]]

    m = sign_module(4)
    total = norm_sum(m, (0, 2)).matrix
    assert total.to_lists() == [[0]]


def test_norm_sum_coinvariant_map_well_defined():
    s3 = catalog()["S3"]
    h = next(s for s in s3.subgroups() if len(s) == 2)
    m = permutation_module(s3, h)
    ns = norm_sum(m, h)
    # AbHom construction already verified well-definedness; sanity-check
    # that the map lands where it should on a generator.
    image = ns.on_coinvariants.apply((1, 0, 0))
    assert len(image) == 3


def test_restrict_and_inflate():
    s3 = catalog()["S3"]
    a3 = next(s for s in s3.subgroups() if len(s) == 3)
    m = permutation_module(s3, a3)  # rank 2
    restricted, embed = restrict_action(m, a3)
    assert restricted.group.order == 3
    assert restricted.rank == 2
    for i, g in enumerate(embed):
        assert restricted.action[i].entries == m.action[g].entries

    triv_sub, _ = restrict_action(m, (s3.identity,))
    assert all(
        mat.entries == IntMatrix.identity(2).entries for mat in triv_sub.action
    )


def test_act_through_quotient():
    c4 = FiniteGroup.cyclic(4)
    mats = tuple(
        IntMatrix.from_rows([[1 if g % 2 == 0 else -1]]) for g in range(4)
    )
    m = GammaModule(group=c4, presentation=Presentation.free(1), action=mats)
    descended, qdata = act_through_quotient(m, (0, 2))
    assert descended.group.order == 2
    assert descended.act(1, (1,)) == (-1,)

    with pytest.raises(ModuleError):
        act_through_quotient(m, (0, 1, 2, 3))


def test_inflate_roundtrip():
    c4 = FiniteGroup.cyclic(4)
    qdata = quotient_group(c4, (0, 2))
    quotient_mod = sign_module(2)
    lifted = inflate_action(quotient_mod, qdata, c4)
    assert lifted.group.order == 4
    assert lifted.act(1, (1,)) == (-1,)
    assert lifted.act(2, (1,)) == (1,)


def test_module_from_generator_images():
    c4 = FiniteGroup.cyclic(4)
    rot = IntMatrix.from_rows([[0, -1], [1, 0]])
    m = module_from_generator_images(c4, Presentation.free(2), {1: rot})
    assert m.act(2, (1, 0)) == (-1, 0)
    assert invariants(m).group == FinAbGroup.trivial()
    assert coinvariants(m).group == FinAbGroup(torsion=(2,))

    with pytest.raises(ModuleError):
        # element 2 alone does not generate C4
        module_from_generator_images(c4, Presentation.free(2), {2: rot @ rot})


def test_mod_m_reduction():
    c2 = FiniteGroup.cyclic(2)
    swap = permutation_module(c2, (0,))
    reduced = mod_m_reduction(swap, 3)
    assert reduced.underlying_group() == FinAbGroup(torsion=(3, 3))
    assert invariants(reduced).group == FinAbGroup(torsion=(3,))


def test_contragredient_of_sign_module():
    m = sign_module(2)
    dual = m.contragredient()
    assert dual.act(1, (1,)) == (-1,)
    swap = permutation_module(FiniteGroup.cyclic(2), (0,))
    dual_swap = swap.contragredient()
    assert dual_swap.action[1].to_lists() == [[0, 1], [1, 0]]


def test_module_map_equivariance():
    c2 = FiniteGroup.cyclic(2)
    swap = permutation_module(c2, (0,))
    triv = trivial_module(c2, rank=1)
    # summing coordinates is equivariant swap -> triv
    ModuleMap(source=swap, target=triv, matrix=IntMatrix.from_rows([[1, 1]]))
    # projecting to the first coordinate is not
    with pytest.raises(ModuleError):
        ModuleMap(source=swap, target=triv, matrix=IntMatrix.from_rows([[1, 0]]))


def test_short_exact_sequence():
    c2 = FiniteGroup.cyclic(2)
    swap = permutation_module(c2, (0,))
    triv = trivial_module(c2, rank=1)
    minus = sign_module(2)

    # 0 -> Z(-1) -> Z[C2] -> Z -> 0 via x -> (x, -x) and (a, b) -> a + b.
    left = ModuleMap(
        source=minus, target=swap, matrix=IntMatrix.from_rows([[1], [-1]])
    )
    right = ModuleMap(
        source=swap, target=triv, matrix=IntMatrix.from_rows([[1, 1]])
    )
    ShortExactSeq(left=left, right=right)
    report = exactness_report(left, right)
    assert all(ok for _, ok, _ in report)

    # Doubling before summing breaks surjectivity.
    bad_right = ModuleMap(
        source=swap, target=triv, matrix=IntMatrix.from_rows([[2, 2]])
    )
    report = exactness_report(left, bad_right)
    assert not all(ok for _, ok, _ in report)
    with pytest.raises(ModuleError):
        ShortExactSeq(left=left, right=bad_right)
