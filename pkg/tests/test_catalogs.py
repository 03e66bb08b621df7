"""Fixture sanity: orders, family sizes, determinism."""

import pytest

from depthzero.abelian import FinAbGroup, IntMatrix
from depthzero.catalogs import (
    CatalogError,
    finite_members,
    finite_order_matrices,
    group_catalog,
    matrix_order,
    module_family,
    ramified_torus,
    split_root_datum,
    torus_catalog,
)
from depthzero.galois import FiniteGroup
from depthzero.langlands import weakly_unramified_chars


def test_matrix_catalog_orders_by_literal_powering():
    counts = {}
    for rank in (1, 2, 3):
        entries = finite_order_matrices(rank)
        counts[rank] = len(entries)
        for name, m in entries:
            k = matrix_order(m)
            power = IntMatrix.identity(rank)
            for _ in range(k):
                power = power @ m
            assert power == IntMatrix.identity(rank), name
            assert m.is_unimodular(), name
    assert counts == {1: 2, 2: 7, 3: 16}


def test_matrix_order_rejects_infinite_and_nonsquare():
    shear = IntMatrix.from_rows([[1, 1], [0, 1]])
    with pytest.raises(CatalogError):
        matrix_order(shear)
    with pytest.raises(CatalogError):
        matrix_order(IntMatrix.from_rows([[1, 0]]))


def test_torus_catalog_members_are_tame():
    cat = torus_catalog()
    assert set(cat) >= {"split-gm", "unramified-norm-one", "ramified-norm-one"}
    for name, torus in cat.items():
        assert torus.is_tame(), name


def test_torus_catalog_calibration_values():
    cat = torus_catalog()
    assert weakly_unramified_chars(cat["split-gm"]) == FinAbGroup(
        free_rank=1, torsion=()
    )
    assert weakly_unramified_chars(cat["unramified-norm-one"]).is_trivial()
    assert weakly_unramified_chars(cat["ramified-norm-one"]) == (
        FinAbGroup.from_divisors([2])
    )


def test_module_family_is_large_and_deterministic():
    for n in range(2, 9):
        g = FiniteGroup.cyclic(n)
        fam = module_family(g)
        assert len(fam) >= 50, n
        assert all(mod.group.table == g.table for mod in fam)
        again = module_family(g)
        assert [(m.presentation, m.action) for m in fam] == [
            (m.presentation, m.action) for m in again
        ]


def test_finite_members_are_actually_small():
    fam = module_family(FiniteGroup.cyclic(4))
    for mod in finite_members(fam, max_size=27):
        grp = mod.presentation.group()
        assert grp.free_rank == 0
        assert grp.order() <= 27


def test_bad_catalog_requests():
    with pytest.raises(CatalogError):
        split_root_datum("SO8")
    with pytest.raises(CatalogError):
        ramified_torus(IntMatrix.identity(1), 3, 3)
    with pytest.raises(CatalogError):
        finite_order_matrices(4)


def test_group_catalog_cap():
    assert "C12" in group_catalog()
    assert "C12" not in group_catalog(8)
    assert all(g.order <= 8 for g in group_catalog(8).values())
