"""Tests for the monomial resolution and chain complex layer."""

import numpy as np
import pytest

from opextkit.complexes import (
    BasisNotFree,
    NotSemidirect,
    NotTransitive,
    SigmaResolution,
    SizeBound,
    bar_resolution,
    cone_resolution,
    cyclic_resolution,
    extend_to_semidirect,
    full_total_complex,
    induced_parts,
    relative_total_complex,
    sigma_action_on_bar,
    standard_complex,
    tensor_of_cyclic,
)
from opextkit.exactlin import dual_homology, homology
from opextkit.groups import (
    GSet,
    abelian_group,
    cyclic_group,
    direct_product,
    group_from_permutations,
)
from opextkit.matched import from_factorization, semidirect_pair, trivial_matched_pair

from pairs import S3, s3_pair, swap_pair


# ---------------------------------------------------------------------------
# based resolutions


def test_bar_ranks_and_verify():
    V = abelian_group([2, 2, 2, 2])
    b = bar_resolution(V, 2)
    assert [b.rank(k) for k in range(3)] == [1, 15, 225]
    for B in (cyclic_group(4), abelian_group([2, 2])):
        for side in ("left", "right"):
            res = bar_resolution(B, 4, side=side)
            res.verify()


def test_bar_unnormalized_verify():
    res = bar_resolution(cyclic_group(3), 3, normalized=False)
    assert [res.rank(k) for k in range(4)] == [1, 3, 9, 27]
    res.verify()


def test_bar_size_bound():
    with pytest.raises(SizeBound):
        bar_resolution(abelian_group([2, 2, 2, 2]), 6)


def test_cyclic_resolution_verify():
    for n in (1, 2, 3, 5, 6):
        cyclic_resolution(n, 6).verify()


def test_cyclic_coinvariants_are_alternating():
    mats = cyclic_resolution(5, 4).coinvariant_diffs()
    dense = [m.to_dense() for m in mats]
    assert [int(d[0, 0]) for d in dense] == [0, 5, 0, 5]


def test_tensor_of_cyclic_verify_and_ranks():
    for mods in ([2, 2], [2, 4], [3, 3], [2, 2, 2]):
        res = tensor_of_cyclic(abelian_group(mods), 4)
        res.verify()
    res = tensor_of_cyclic(abelian_group([2, 4]), 5)
    # two factors: rank in degree k is the number of splittings k = a + b
    assert [res.rank(k) for k in range(6)] == [1, 2, 3, 4, 5, 6]


def test_bar_coinvariants_compute_integral_group_homology():
    # H_*(Z/2; Z) = Z, Z/2, 0, Z/2, 0, ...
    mats = bar_resolution(cyclic_group(2), 5).coinvariant_diffs()
    dense = [m.to_dense() for m in mats]
    for k in (1, 2, 3, 4):
        hk, _ = homology(dense[k], dense[k - 1], [0] * dense[k].shape[0])
        if k % 2 == 1:
            assert str(hk) == "Z/2"
        else:
            assert hk.is_trivial


# ---------------------------------------------------------------------------
# whole-group structure on factor resolutions


def test_sigma_actions_verify_on_twisted_pair():
    mp = s3_pair(mirror=True)
    P = sigma_action_on_bar(mp, "left", 3)
    assert any(mp.left(s, x) != x for s in range(mp.G.n) for x in range(mp.F.n))
    P.verify_action(3)
    Q = sigma_action_on_bar(mp, "right", 3)
    Q.verify_action(3)


def test_sigma_action_restricts_to_translation():
    mp = s3_pair()
    P = sigma_action_on_bar(mp, "left", 3)
    Q = sigma_action_on_bar(mp, "right", 3)
    for tag in P.base.tags[2]:
        for x in range(mp.F.n):
            for y in range(mp.F.n):
                assert P.act(mp.embed_F(y), (x, tag)) == (mp.F.mul(y, x), tag)
    for tag in Q.base.tags[2]:
        for s in range(mp.G.n):
            for t in range(mp.G.n):
                assert Q.act(mp.embed_G(t), (s, tag)) == (mp.G.mul(s, t), tag)


def test_extend_to_semidirect_rejects_twisted_pair():
    mp = s3_pair(mirror=True)
    with pytest.raises(NotSemidirect):
        extend_to_semidirect(mp, tensor_of_cyclic(mp.F, 3))


def test_broken_twists_are_caught():
    from opextkit.complexes import DoubleTotalComplex, default_p_resolution

    mp = swap_pair(cyclic_group(2))
    base = bar_resolution(mp.G, 3, side="right")
    P = default_p_resolution(mp, 3)
    # forgetting the twist entirely leaves a valid permutation action on
    # cells but breaks commutation with the differential
    lazy = SigmaResolution(base, mp, "Q", lambda xp, tag: tag, rel_over="F")
    with pytest.raises(AssertionError):
        lazy.verify_action(2)
    # a twist that is not even an orbit invariant trips the freeness
    # certificate inside the double complex build
    shifty = SigmaResolution(base, mp, "Q", lambda xp, tag: tag[1:] + tag[:1],
                             rel_over="F")
    with pytest.raises(BasisNotFree):
        DoubleTotalComplex(mp, P, shifty, 3, truncated=True, zcheck=False)


# ---------------------------------------------------------------------------
# the truncated double complex


def test_relative_complex_integral_exactness_small_pairs():
    pairs = [
        trivial_matched_pair(cyclic_group(2), cyclic_group(2)),
        s3_pair(),
        s3_pair(mirror=True),
        swap_pair(cyclic_group(2)),
    ]
    for mp in pairs:
        R = relative_total_complex(mp, 3)
        assert R.meta["exact_checked"], mp
        # d*d = 0 on the coinvariant matrices as well
        for k in range(2, 4):
            prod = R.diffs[k - 1].to_dense() @ R.diffs[k].to_dense()
            assert not prod.any()


def test_relative_complex_block_layout():
    mp = s3_pair()
    R = relative_total_complex(mp, 3)
    assert [bid for bid, _ in R.block_ranges(2)] == [(1, 0), (0, 1)]
    assert [bid for bid, _ in R.block_ranges(3)] == [(2, 0), (1, 1), (0, 2)]
    stops = [rng for _, rng in R.block_ranges(2)]
    assert stops[0][1] == stops[1][0]
    assert stops[-1][1] == len(R.labels[2])


def test_full_total_complex_resolves_the_integers():
    mp = s3_pair(mirror=True)
    T = full_total_complex(mp, 3, zcheck=True)
    assert T.meta["exact_checked"]


def test_trivial_pair_degree_two_and_three():
    # direct product Z/2 x Z/2: the lower sequence forces H2_rel = Z/2,
    # and with the derivation term vanishing, H3_rel = Z/2 as well
    mp = trivial_matched_pair(cyclic_group(2), cyclic_group(2))
    R = relative_total_complex(mp, 3)
    assert str(dual_homology(R.diffs[1], R.diffs[2], 4).group) == "Z/2"
    assert str(dual_homology(R.diffs[2], R.diffs[3], 4).group) == "Z/2"


def test_coprime_factorization_has_no_degree_three_classes():
    for mp in (s3_pair(), s3_pair(mirror=True)):
        R = relative_total_complex(mp, 3)
        assert str(dual_homology(R.diffs[1], R.diffs[2], 6).group) == "Z/3"
        assert dual_homology(R.diffs[2], R.diffs[3], 6).group.is_trivial


def test_resolution_choice_does_not_change_the_answer():
    mp = swap_pair(cyclic_group(3))
    got = {}
    for kind in ("bar", "cyclic-tensor"):
        R = relative_total_complex(mp, 3, resolution=kind)
        got[kind] = str(dual_homology(R.diffs[2], R.diffs[3], mp.sigma().n).group)
    assert got["bar"] == got["cyclic-tensor"] == "Z/3"


# ---------------------------------------------------------------------------
# permutation complexes


def test_standard_complex_of_regular_action():
    table = np.zeros((6, 6), dtype=np.int64)
    for g in range(6):
        for x in range(6):
            table[g, x] = S3.mul(x, g)
    X = GSet(S3, table, side="right")
    sc = standard_complex(X, 3)
    sc.verify_d2()
    mats, reps = sc.coinvariant_diffs()
    # free orbits: one per bar word
    assert [len(r) for r in reps] == [1, 6, 36, 216]
    # orbitwise homology of the regular action = group homology
    dense = [m.to_dense() for m in mats]
    h1, _ = homology(dense[1], dense[0], [0] * dense[1].shape[0])
    assert str(h1) == "Z/2"


def test_standard_complex_needs_transitivity():
    idle = GSet(cyclic_group(2), np.array([[0, 1, 2], [1, 0, 2]]), side="left")
    with pytest.raises(NotTransitive):
        standard_complex(idle, 2)


def test_normalized_standard_complex():
    table = np.zeros((3, 3), dtype=np.int64)
    Z3 = cyclic_group(3)
    for g in range(3):
        for x in range(3):
            table[g, x] = Z3.mul(g, x)
    X = GSet(Z3, table, side="left")
    sc = standard_complex(X, 3, normalized=True)
    sc.verify_d2()
    assert [len(level) for level in sc.cells] == [3, 6, 12, 24]


# ---------------------------------------------------------------------------
# induced resolutions and the cone model


def test_induced_parts_homotopies():
    for mp in (s3_pair(), swap_pair(cyclic_group(2))):
        part_G, part_F = induced_parts(mp, 3)
        part_G.verify_homotopy(2)
        part_F.verify_homotopy(2)


def test_cone_matches_double_complex():
    # three pairs exercising all three contractible-side kinds:
    # abelian whole group (cyclic tensor), order 6 (bar), order 8 (total)
    cases = [
        trivial_matched_pair(cyclic_group(2), cyclic_group(2)),
        s3_pair(mirror=True),
        swap_pair(cyclic_group(2)),
    ]
    for mp in cases:
        n = mp.sigma().n
        R = relative_total_complex(mp, 4)
        cone = cone_resolution(mp, 4)
        for k in (2, 3, 4):
            a = dual_homology(cone.diffs[k], cone.diffs[k + 1], n).group
            b = dual_homology(R.diffs[k - 1], R.diffs[k], n).group
            assert str(a) == str(b), (mp, k)


def test_cone_ranges_partition_each_degree():
    mp = s3_pair()
    cone = cone_resolution(mp, 3)
    for k in range(1, 5):
        ranges = cone.part_ranges(k) + [cone.b_range(k)]
        cursor = 0
        for lo, hi in ranges:
            assert lo == cursor
            cursor = hi
        assert cursor == cone.ranks[k]


def test_cone_psi_is_a_chain_map_into_coinvariants():
    # d_B . psi = psi . d_S also after collapsing positions
    mp = swap_pair(cyclic_group(2))
    cone = cone_resolution(mp, 3)
    b_coinv = cone.B.coinvariant_diffs()
    for k in (1, 2, 3):
        lhs = b_coinv[k - 1].to_dense() @ cone.psi_coinvariant(k).to_dense()
        parts_d = [p.coinvariant_diffs()[k - 1].to_dense() for p in cone.parts]
        rows = sum(pd.shape[0] for pd in parts_d)
        cols = sum(pd.shape[1] for pd in parts_d)
        ds = np.zeros((rows, cols), dtype=object)
        r = c = 0
        for pd in parts_d:
            ds[r:r + pd.shape[0], c:c + pd.shape[1]] = pd
            r += pd.shape[0]
            c += pd.shape[1]
        rhs = cone.psi_coinvariant(k - 1).to_dense() @ ds
        assert np.array_equal(lhs, rhs)
