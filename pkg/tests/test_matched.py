"""Tests for matched pairs, bicrossed products, and factorizations."""

import numpy as np
import pytest

from opextkit.groups import (
    cyclic_group,
    direct_product,
    group_from_permutations,
)
from opextkit.matched import (
    AxiomViolation,
    MatchedPair,
    NotExactFactorization,
    bicrossed_product,
    from_factorization,
    is_semidirect,
    semidirect_pair,
    trivial_matched_pair,
    validate_matched_pair,
)

S3 = group_from_permutations([(1, 0, 2), (1, 2, 0)], 3, name="S3")


def test_trivial_pair_is_direct_product():
    F, G = cyclic_group(2), cyclic_group(3)
    mp = trivial_matched_pair(F, G)
    validate_matched_pair(mp)
    assert is_semidirect(mp)
    sigma = bicrossed_product(mp)
    assert np.array_equal(sigma.table, direct_product(F, G).table)


def test_s3_factorization():
    t = next(a for a in range(6) if S3.element_order(a) == 2)
    r = next(a for a in range(6) if S3.element_order(a) == 3)
    mp, iso = from_factorization(S3, [0, t], [0, r, S3.mul(r, r)])
    assert mp.F.n == 2 and mp.G.n == 3
    # <(123)> is normal in S3, so the left action must come out trivial
    # and the right one nontrivial: s <| x conjugates the rotation part.
    assert all(mp.left(s, x) == x for s in range(3) for x in range(2))
    assert any(mp.right(s, x) != s for s in range(3) for x in range(2))
    assert is_semidirect(mp)
    # iso transports the bicrossed table to the original group
    bp = bicrossed_product(mp)
    for a in range(6):
        for b in range(6):
            assert S3.mul(iso[a], iso[b]) == iso[bp.mul(a, b)]
    assert sorted(iso) == list(range(6))


def test_s3_mirror_factorization_is_not_semidirect():
    # with the rotation subgroup as F, the left action is the nontrivial one
    t = next(a for a in range(6) if S3.element_order(a) == 2)
    r = next(a for a in range(6) if S3.element_order(a) == 3)
    mp, _ = from_factorization(S3, [0, r, S3.mul(r, r)], [0, t])
    assert not is_semidirect(mp)
    assert any(mp.left(s, x) != x for s in range(2) for x in range(3))
    assert all(mp.right(s, x) == s for s in range(2) for x in range(3))


def test_from_factorization_rejects_shared_subgroup():
    Z4 = cyclic_group(4)
    with pytest.raises(NotExactFactorization):
        from_factorization(Z4, [0, 2], [0, 2])


def test_from_factorization_rejects_wrong_sizes():
    Z4 = cyclic_group(4)
    with pytest.raises(NotExactFactorization):
        from_factorization(Z4, [0], [0, 2])


def test_axiom_violation_reported_with_witness():
    F, G = cyclic_group(2), cyclic_group(2)
    mp = trivial_matched_pair(F, G)
    lt = mp.left_table.copy()
    lt[1, 1] = 0  # breaks s |> x only at s = 1, x = 1
    bad = MatchedPair(F, G, lt, mp.right_table)
    with pytest.raises(AxiomViolation) as ei:
        validate_matched_pair(bad)
    assert ei.value.axiom in ("left-action", "compat-left", "unit-left")
    assert isinstance(ei.value.witness, tuple)


def test_semidirect_pair_builds_s3():
    F, G = cyclic_group(2), cyclic_group(3)
    rt = np.zeros((3, 2), dtype=np.int64)
    for s in range(3):
        rt[s, 0] = s
        rt[s, 1] = (-s) % 3  # conjugation by the reflection inverts
    mp = semidirect_pair(F, G, rt)
    assert is_semidirect(mp)
    sigma = bicrossed_product(mp)
    assert sigma.n == 6
    assert not sigma.is_abelian()


def test_bicrossed_product_round_trips_through_factorization():
    F, G = cyclic_group(2), cyclic_group(3)
    rt = np.zeros((3, 2), dtype=np.int64)
    for s in range(3):
        rt[s, 0] = s
        rt[s, 1] = (-s) % 3
    mp = semidirect_pair(F, G, rt)
    sigma = bicrossed_product(mp)
    f_elems = [mp.embed_F(x) for x in range(2)]
    g_elems = [mp.embed_G(s) for s in range(3)]
    mp2, iso = from_factorization(sigma, f_elems, g_elems)
    assert np.array_equal(mp2.left_table, mp.left_table)
    assert np.array_equal(mp2.right_table, mp.right_table)
    assert iso == list(range(6))


def test_semidirect_pair_rejects_non_action():
    F, G = cyclic_group(2), cyclic_group(4)
    rt = np.zeros((4, 2), dtype=np.int64)
    for s in range(4):
        rt[s, 0] = s
        rt[s, 1] = (s + 1) % 4  # not an automorphism, shifts identity
    with pytest.raises(AxiomViolation):
        semidirect_pair(F, G, rt)
