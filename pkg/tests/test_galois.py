"""Tests for multiplication-table groups, cosets and local Galois data."""

import pytest

from depthzero.abelian import FinAbGroup
from depthzero.galois import (
    FiniteGroup,
    GroupError,
    LocalGaloisDatum,
    catalog,
    coset_of,
    coset_rep_of,
    coset_reps,
    double_cosets,
    is_cyclic,
    quotient_group,
    validate_local_datum,
)


def test_table_validation():
    FiniteGroup.cyclic(5)
    with pytest.raises(GroupError):
        FiniteGroup.from_table([[0, 1], [1, 1]])  # 1 has no inverse
    with pytest.raises(GroupError):
        FiniteGroup.from_table([[0, 1], [0, 1]])  # no identity
    with pytest.raises(GroupError):
        FiniteGroup.from_table([[0, 1]])  # not square


def test_catalog_contents():
    named = catalog()
    assert set(named) == {
        "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C12",
        "V4", "S3", "D4", "Q8",
    }
    for name, g in named.items():
        assert g.name == name
    assert named["S3"].order == 6 and not named["S3"].is_abelian()
    assert named["D4"].order == 8 and not named["D4"].is_abelian()
    assert named["Q8"].order == 8 and not named["Q8"].is_abelian()
    assert named["V4"].is_abelian()
    # Q8 has a unique element of order 2.
    q8 = named["Q8"]
    assert sum(1 for g in q8.elements() if q8.element_order(g) == 2) == 1
    # D4 has five elements of order 2.
    d4 = named["D4"]
    assert sum(1 for g in d4.elements() if d4.element_order(g) == 2) == 5


def test_element_orders_and_inverses():
    c6 = FiniteGroup.cyclic(6)
    assert [c6.element_order(i) for i in range(6)] == [1, 6, 3, 2, 3, 6]
    for i in range(6):
        assert c6.mul(i, c6.inv(i)) == c6.identity


def test_abelian_invariants():
    assert FiniteGroup.cyclic(12).abelian_invariants() == FinAbGroup(torsion=(12,))
    v4 = catalog()["V4"]
    assert v4.abelian_invariants() == FinAbGroup(torsion=(2, 2))
    c2xc4 = FiniteGroup.cyclic(2).direct_product(FiniteGroup.cyclic(4))
    assert c2xc4.abelian_invariants() == FinAbGroup(torsion=(2, 4))
    c6xc2 = FiniteGroup.cyclic(6).direct_product(FiniteGroup.cyclic(2))
    assert c6xc2.abelian_invariants() == FinAbGroup(torsion=(2, 6))
    with pytest.raises(GroupError):
        catalog()["S3"].abelian_invariants()


def test_generated_by_and_subgroups():
    s3 = catalog()["S3"]
    subs = s3.subgroups()
    assert [len(s) for s in subs] == [1, 2, 2, 2, 3, 6]
    a3 = next(s for s in subs if len(s) == 3)
    assert s3.is_normal(a3)
    transposition_subs = [s for s in subs if len(s) == 2]
    assert all(not s3.is_normal(s) for s in transposition_subs)

    q8 = catalog()["Q8"]
    assert all(q8.is_normal(s) for s in q8.subgroups())
    assert len(q8.subgroups()) == 6


def test_coset_reps_examples():
    c4 = FiniteGroup.cyclic(4)
    assert coset_reps(c4, (0, 1, 2, 3)) == [c4.identity]
    assert coset_reps(c4, (0, 2)) == [0, 1]

    s3 = catalog()["S3"]
    a3 = next(s for s in s3.subgroups() if len(s) == 3)
    reps = coset_reps(s3, a3)
    assert len(reps) == 2
    # Exhaustive check: every element is in exactly one rep coset.
    cover = [coset_of(s3, a3, r) for r in reps]
    seen = [g for block in cover for g in block]
    assert sorted(seen) == list(range(6))
    for g in s3.elements():
        assert coset_rep_of(s3, a3, g) in reps


def test_coset_reps_rejects_non_subgroup():
    with pytest.raises(GroupError):
        coset_reps(FiniteGroup.cyclic(4), (0, 1))


def test_double_cosets():
    s3 = catalog()["S3"]
    n = s3.order
    assert double_cosets(s3, tuple(range(n)), tuple(range(n))) == [tuple(range(n))]
    singletons = double_cosets(s3, (s3.identity,), (s3.identity,))
    assert len(singletons) == n

    h = next(s for s in s3.subgroups() if len(s) == 2)
    blocks = double_cosets(s3, h, h)
    assert sorted(len(b) for b in blocks) == [2, 4]
    assert sorted(g for b in blocks for g in b) == list(range(6))


def test_quotient_group():
    c4 = FiniteGroup.cyclic(4)
    q = quotient_group(c4, (0, 2))
    assert q.group.order == 2
    assert q.projection[0] == q.projection[2]
    assert q.projection[1] == q.projection[3]
    assert q.projection[0] != q.projection[1]

    full = quotient_group(c4, (0, 1, 2, 3))
    assert full.group.order == 1
    triv = quotient_group(c4, (0,))
    assert triv.group.order == 4

    # Projection is a homomorphism with kernel exactly N.
    s3 = catalog()["S3"]
    a3 = next(s for s in s3.subgroups() if len(s) == 3)
    q = quotient_group(s3, a3)
    for a in s3.elements():
        for b in s3.elements():
            assert q.projection[s3.mul(a, b)] == q.group.mul(
                q.projection[a], q.projection[b]
            )
    kernel = [g for g in s3.elements() if q.projection[g] == q.group.identity]
    assert tuple(kernel) == a3

    with pytest.raises(GroupError):
        h = next(s for s in s3.subgroups() if len(s) == 2)
        quotient_group(s3, h)


def test_double_coset_blocks_reassemble_group():
    for g in [catalog()["S3"], catalog()["D4"], catalog()["Q8"]]:
        for h1 in g.subgroups():
            for h2 in g.subgroups():
                blocks = double_cosets(g, h1, h2)
                flat = sorted(x for b in blocks for x in b)
                assert flat == list(range(g.order))


def test_direct_product_structure():
    c2, c3 = FiniteGroup.cyclic(2), FiniteGroup.cyclic(3)
    prod = c2.direct_product(c3)
    assert prod.order == 6
    assert is_cyclic(prod)  # C2 x C3 = C6
    v4 = FiniteGroup.cyclic(2).direct_product(FiniteGroup.cyclic(2))
    assert not is_cyclic(v4)


def test_subgroup_as_group_roundtrip():
    d4 = catalog()["D4"]
    for sub in d4.subgroups():
        g, embed = d4.subgroup_as_group(sub)
        assert g.order == len(sub)
        for a in range(g.order):
            for b in range(g.order):
                assert embed[g.mul(a, b)] == d4.mul(embed[a], embed[b])


# ---------------------------------------------------------------------------
# Local Galois data


def unramified_datum():
    c2 = FiniteGroup.cyclic(2)
    return LocalGaloisDatum(
        gamma=c2, inertia=(0,), wild=(0,), frob=1, p=2, q=3
    )


def tame_datum():
    c2 = FiniteGroup.cyclic(2)
    return LocalGaloisDatum(
        gamma=c2, inertia=(0, 1), wild=(0,), frob=0, p=3, q=3
    )


def test_validate_unramified_datum():
    report = validate_local_datum(unramified_datum())
    assert report.ok, str(report)


def test_validate_tame_datum():
    # Totally tamely ramified quadratic situation: inertia is everything,
    # Frobenius image is trivial, q = 3 acts as identity on C2 (3 odd).
    report = validate_local_datum(tame_datum())
    assert report.ok, str(report)


def test_validate_rejects_bad_wild_order():
    c2 = FiniteGroup.cyclic(2)
    datum = LocalGaloisDatum(gamma=c2, inertia=(0, 1), wild=(0, 1), frob=0, p=3, q=3)
    report = validate_local_datum(datum)
    assert not report.ok
    assert "wild_order_p_power" in report.failures()


def test_validate_rejects_bad_q_power_relation():
    # S3's inertia C3 with frob a transposition: conjugation inverts, so
    # the relation holds exactly when q = 2 mod 3; q = 4 must fail.
    s3 = catalog()["S3"]
    a3 = next(s for s in s3.subgroups() if len(s) == 3)
    transposition = next(
        g for g in s3.elements() if s3.element_order(g) == 2
    )
    bad = LocalGaloisDatum(
        gamma=s3, inertia=a3, wild=(s3.identity,), frob=transposition, p=5, q=4
    )
    report = validate_local_datum(bad)
    assert not report.ok
    assert "frob_conjugation_is_q_power" in report.failures()

    fixed = LocalGaloisDatum(
        gamma=s3, inertia=a3, wild=(s3.identity,), frob=transposition, p=2, q=2
    )
    assert validate_local_datum(fixed).ok, str(validate_local_datum(fixed))


def test_validate_rejects_noncyclic_unramified_quotient():
    v4 = catalog()["V4"]
    datum = LocalGaloisDatum(
        gamma=v4, inertia=(0,), wild=(0,), frob=1, p=2, q=3
    )
    report = validate_local_datum(datum)
    assert not report.ok
    assert "unramified_quotient_cyclic_frob_generates" in report.failures()


def test_report_formats_each_check():
    report = validate_local_datum(unramified_datum())
    text = str(report)
    assert "pass" in text
    assert "frob_conjugation_is_q_power" in text
