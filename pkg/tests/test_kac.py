"""Tests for the bicomplex, the three extension-group routes, and the oracles."""

import random
from fractions import Fraction
from functools import cache

import numpy as np
import pytest

from opextkit.cohomology import CIRCLE, derivation_space, group_cohomology
from opextkit.complexes import SizeBound
from opextkit.exactlin import FpAbGroup, frac1
from opextkit.groups import abelian_group, cyclic_group
from opextkit.kac import (
    HypothesisViolated,
    IncompatiblePair,
    KacComplex,
    NotCocycle,
    _apply_cochain,
    _derivation_cochain,
    _pullback_module,
    character_module,
    cyclic_odd_opext,
    d2_lift,
    e2_page,
    five_term,
    hopf_data,
    involution_opext,
    kac_sequence,
    odd_abelian_opext,
    opext,
    swap_opext,
)
from opextkit.matched import from_factorization, trivial_matched_pair

from pairs import SWAP2, coords_of, flagship_pair, linear_action_pair, \
    matrix_action_pair, s3_pair, swap_pair

RNG_SEED = 20260819

Z2 = cyclic_group(2)
Z3 = cyclic_group(3)
Z4 = cyclic_group(4)


@cache
def c12_pair():
    return from_factorization(cyclic_group(12), (0, 3, 6, 9), (0, 4, 8))[0]


@cache
def flagship_report():
    return five_term(flagship_pair())


# ---------------------------------------------------------------------------
# the bicomplex itself


def test_trivial_pair_rectangle_by_hand():
    kc = KacComplex(trivial_matched_pair(Z2, Z2))
    for p in range(3):
        for q in range(3):
            assert kc.rank(p, q) == 1
    assert kc.total_chain(1).to_dense().tolist() == [[2, -2]]
    assert kc.total_chain(2).to_dense().tolist() == [[0, 2, 0], [0, 2, 0]]
    assert kc.verify() == 10


def test_squares_vanish_on_twisted_pairs():
    for mp in (matrix_action_pair(3, SWAP2), s3_pair(), s3_pair(mirror=True),
               c12_pair()):
        assert KacComplex(mp).verify() > 0


def test_vertical_blocks_when_left_action_trivial():
    kc = KacComplex(matrix_action_pair(3, SWAP2))
    nf = kc.F.n - 1
    for p, q in ((1, 1), (0, 1), (1, 2)):
        mat = kc.vertical_chain(p, q)
        nfp = (kc.F.n - 1) ** (p + 1)
        for j, col in enumerate(mat.cols):
            for i in col:
                assert i % nfp == j % nfp
    assert nf == 1


def test_vertical_twist_engages_on_a_real_double():
    kc = KacComplex(s3_pair(mirror=True))
    twisted = 0
    for j, (gt, ft) in enumerate(kc.cells(1, 1)):
        for i in kc.vertical_chain(1, 1).cols[j]:
            if i % (kc.F.n - 1) ** 2 != j % (kc.F.n - 1) ** 2:
                twisted += 1
    assert twisted > 0


def test_cell_bound_refused():
    kc = KacComplex(flagship_pair(), cell_bound=100)
    with pytest.raises(SizeBound):
        kc.total_chain(2)


# ---------------------------------------------------------------------------
# the character module


def test_character_module_is_the_translation_dual():
    rng = random.Random(RNG_SEED)
    for mp in (matrix_action_pair(3, SWAP2), s3_pair(), swap_pair(Z4)):
        chi = character_module(mp)
        mats = chi.module.matrices
        for _ in range(25):
            c = [rng.randrange(d) for d in chi.moduli]
            x = rng.randrange(mp.F.n)
            s = rng.randrange(mp.G.n)
            moved = [int(v) % d for v, d in zip(mats[x] @ np.array(c, dtype=object),
                                                chi.moduli)]
            assert chi.eval_coords(moved, s) == chi.eval_coords(c, mp.right(s, x))


def test_character_coordinates_round_trip():
    chi = character_module(swap_pair(Z4))
    rng = random.Random(RNG_SEED + 1)
    for _ in range(10):
        c = [rng.randrange(d) for d in chi.moduli]
        values = [chi.eval_coords(c, s) for s in range(chi.mp.G.n)]
        assert chi.coords_of_values(values) == c
    with pytest.raises(ValueError):
        chi.coords_of_values([Fraction(1, 3)] * chi.mp.G.n)


# ---------------------------------------------------------------------------
# route agreement


def test_routes_agree_on_small_pairs():
    semidirect = [trivial_matched_pair(Z2, Z2), trivial_matched_pair(Z4, Z3),
                  matrix_action_pair(3, SWAP2), swap_pair(Z2), s3_pair(),
                  c12_pair()]
    doubles = [s3_pair(mirror=True)]
    for mp in semidirect + doubles:
        direct = opext(mp, route="kac_total", reps=False).group
        assert opext(mp, route="relative", reps=False).group == direct
        if mp in semidirect:
            recon = opext(mp, route="five_term_reconstruction", reps=False)
            assert recon.group == direct


def test_unknown_route_refused():
    with pytest.raises(ValueError):
        opext(trivial_matched_pair(Z2, Z2), route="guess")


def test_doubles_have_no_reconstruction():
    from opextkit.complexes import NotSemidirect
    with pytest.raises(NotSemidirect):
        five_term(s3_pair(mirror=True))


# ---------------------------------------------------------------------------
# exported representatives


def test_trivial_pair_generator_tables():
    res = opext(trivial_matched_pair(Z2, Z2))
    assert res.group == FpAbGroup.from_factors([2])
    sigma, tau = res.representatives[0]
    assert all(v == 0 for v in sigma.flat)
    nonzero = {(s, t, x): v for s in range(2) for t in range(2)
               for x in range(2) if (v := tau[s, t, x]) != 0}
    assert nonzero == {(1, 1, 1): Fraction(1, 2)}


def test_exported_pairs_satisfy_the_three_laws_directly():
    mp = matrix_action_pair(3, SWAP2)
    res = opext(mp)
    F, G = mp.F, mp.G
    for sigma, tau in res.representatives:
        for s in range(G.n):
            for x in range(F.n):
                for y in range(F.n):
                    for z in range(F.n):
                        assert frac1(sigma[mp.right(s, x), y, z]
                                     + sigma[s, x, F.mul(y, z)]
                                     - sigma[s, F.mul(x, y), z]
                                     - sigma[s, x, y]) == 0
        for s3 in range(G.n):
            for s2 in range(G.n):
                for s1 in range(G.n):
                    for x in range(F.n):
                        assert frac1(tau[s3, s2, mp.left(s1, x)]
                                     + tau[G.mul(s3, s2), s1, x]
                                     - tau[s3, G.mul(s2, s1), x]
                                     - tau[s2, s1, x]) == 0
        for s in range(G.n):
            for t in range(G.n):
                for x in range(F.n):
                    for y in range(F.n):
                        tx = mp.left(t, x)
                        lhs = sigma[G.mul(s, t), x, y] + tau[s, t, F.mul(x, y)]
                        rhs = (sigma[s, tx, mp.left(mp.right(t, x), y)]
                               + sigma[t, x, y] + tau[s, t, x]
                               + tau[mp.right(s, tx), mp.right(t, x), y])
                        assert frac1(lhs - rhs) == 0


def test_all_small_reps_pass_the_bialgebra_axioms():
    for mp in (trivial_matched_pair(Z2, Z2), trivial_matched_pair(Z2, Z4),
               matrix_action_pair(3, SWAP2), swap_pair(Z2)):
        for route in ("kac_total", "five_term_reconstruction"):
            for sigma, tau in opext(mp, route=route).representatives:
                data = hopf_data(mp, sigma, tau)
                assert data.dim == mp.F.n * mp.G.n
                assert all(data.checks.values())


# ---------------------------------------------------------------------------
# the bicrossed product rejects broken input


def test_hopf_rejects_unnormalized_sigma():
    mp = trivial_matched_pair(Z2, Z2)
    sigma = np.full((2, 2, 2), Fraction(0), dtype=object)
    tau = np.full((2, 2, 2), Fraction(0), dtype=object)
    sigma[0, 1, 1] = Fraction(1, 2)
    with pytest.raises(NotCocycle) as info:
        hopf_data(mp, sigma, tau)
    assert info.value.which == "sigma normalization"


def test_hopf_rejects_broken_tau_cocycle():
    mp = trivial_matched_pair(Z2, Z4)
    sigma = np.full((4, 2, 2), Fraction(0), dtype=object)
    tau = np.full((4, 4, 2), Fraction(0), dtype=object)
    tau[1, 1, 1] = Fraction(1, 4)
    with pytest.raises(NotCocycle) as info:
        hopf_data(mp, sigma, tau)
    assert info.value.which == "tau cocycle"


def test_hopf_rejects_incompatible_pair():
    mp = trivial_matched_pair(Z2, Z2)
    sigma = np.full((2, 2, 2), Fraction(0), dtype=object)
    tau = np.full((2, 2, 2), Fraction(0), dtype=object)
    tau[1, 1, 1] = Fraction(1, 3)
    with pytest.raises(IncompatiblePair):
        hopf_data(mp, sigma, tau)


# ---------------------------------------------------------------------------
# transgression lifts


def explicit_derivation_cochain(kc, n):
    out = np.empty(kc.rank(0, 1), dtype=object)
    for i, (gt, _ft) in enumerate(kc.cells(0, 1)):
        s, t = coords_of(gt[1], [n, n]), coords_of(gt[0], [n, n])
        out[i] = Fraction(s[0] * t[1] % n, n)
    return out


def explicit_correction(kc, n, a, b, c):
    inv2 = pow(2, -1, n)
    out = np.empty(kc.rank(1, 0), dtype=object)
    for i, (gt, _ft) in enumerate(kc.cells(1, 0)):
        x, y = coords_of(gt[0], [n, n])
        out[i] = Fraction((-a * c * inv2 * x * x - b * c * x * y
                           + a * b * inv2 * y * y) % n, n)
    return out


def test_catalogued_correction_solves_the_lift_equation():
    for n, mat in ((3, SWAP2), (5, SWAP2), (3, [[1, 1], [0, -1]])):
        a, b, c = mat[0][0], mat[0][1], mat[1][0]
        mp = matrix_action_pair(n, mat)
        kc = KacComplex(mp)
        alpha = explicit_derivation_cochain(kc, n)
        gamma = explicit_correction(kc, n, a, b, c)
        assert all(v == 0 for v in _apply_cochain(kc.vertical_chain(0, 2), alpha))
        dva = _apply_cochain(kc.horizontal_chain(1, 1), alpha)
        dvg = _apply_cochain(kc.vertical_chain(1, 1), gamma)
        assert all(frac1(p - q) == 0 for p, q in zip(dvg, dva))
        assert all(v == 0 for v in _apply_cochain(kc.horizontal_chain(2, 0), gamma))
        lift = d2_lift(mp, alpha, kc=kc)
        assert all(int(v) == 0 for v in lift.coords)


def test_d2_lift_rejects_non_cocycle():
    mp = matrix_action_pair(3, SWAP2)
    kc = KacComplex(mp)
    bad = np.full(kc.rank(0, 1), Fraction(0), dtype=object)
    bad[0] = Fraction(1, 3)
    with pytest.raises(NotCocycle):
        d2_lift(mp, bad, kc=kc)


def test_flagship_d2_additive_and_choice_independent():
    mp = flagship_pair()
    report = flagship_report()
    kc = report.complex
    chi = character_module(mp)
    C3 = group_cohomology(mp.F, chi.module, 3)
    H2G = group_cohomology(mp.G, CIRCLE, 2)
    _, Kpres, Ktags = derivation_space(mp.F, _pullback_module(mp, H2G))
    L = report.maps["d2"]
    m = L.shape[1]
    cols = {j: [int(v) % 2 for v in L[:, j]] for j in range(m)}
    i = next(j for j in range(m) if any(cols[j]))
    k = next(j for j in range(m) if j != i and cols[j] != cols[i])

    def alpha_of(index):
        unit = [0] * m
        unit[index] = 1
        return _derivation_cochain(kc, H2G, Kpres.representative(unit), Ktags)

    ai, ak = alpha_of(i), alpha_of(k)
    assert [int(v) % 2 for v in d2_lift(mp, ai, kc=kc, chi=chi, target=C3).coords] \
        == cols[i]
    both = np.array([frac1(p + q) for p, q in zip(ai, ak)], dtype=object)
    expect = [(u + v) % 2 for u, v in zip(cols[i], cols[k])]
    assert [int(v) % 2 for v in d2_lift(mp, both, kc=kc, chi=chi, target=C3).coords] \
        == expect

    rng = random.Random(RNG_SEED + 2)
    mu = np.array([Fraction(rng.randrange(4), 4) for _ in range(kc.rank(0, 0))],
                  dtype=object)
    shifted = np.array(
        [frac1(p + q) for p, q in
         zip(ai, _apply_cochain(kc.vertical_chain(0, 1), mu))], dtype=object)
    assert [int(v) % 2 for v in d2_lift(mp, shifted, kc=kc, chi=chi,
                                        target=C3).coords] == cols[i]


# ---------------------------------------------------------------------------
# the edge sequence


def certs_hold(report):
    c = report.certificates
    joints = [c["injective_start"], c["middle"]["composite_zero"],
              c["middle"]["order_product"], c["kernel"]["composite_zero"],
              c["kernel"]["order_product"]]
    if "status" not in c["tail"]:
        joints += [c["tail"]["composite_zero"], c["tail"]["order_product"]]
    return all(joints)


def test_edge_sequence_small():
    rep = five_term(matrix_action_pair(3, SWAP2))
    assert [str(t) for t in rep.terms] == ["0", "Z/3", "Z/3", "0", "Z/3"]
    assert certs_hold(rep)
    rep = five_term(swap_pair(Z2))
    assert rep.group == FpAbGroup.from_factors([2])
    assert certs_hold(rep)
    rep = five_term(swap_pair(Z4))
    assert rep.group == FpAbGroup.from_factors([4])
    assert rep.kernel == FpAbGroup.from_factors([4])
    assert certs_hold(rep)


def test_edge_sequence_flagship():
    rep = flagship_report()
    assert rep.terms[0] == FpAbGroup.from_factors([2, 2])
    assert rep.group == FpAbGroup.from_factors([2, 2, 2, 4, 4])
    assert rep.terms[2] == FpAbGroup.from_factors([2] * 7)
    assert rep.kernel == FpAbGroup.from_factors([2] * 5)
    assert rep.terms[3] == FpAbGroup.from_factors([2, 2])
    assert rep.terms[4] is None and rep.maps["i2"] is None
    assert certs_hold(rep)
    assert rep.certificates["tail"]["status"] == "skipped"


def test_edge_sequence_tail_budget_toggle():
    rep = five_term(matrix_action_pair(3, SWAP2), tail_cells=10)
    assert rep.terms[4] is None
    assert rep.group == FpAbGroup.from_factors([3])


# ---------------------------------------------------------------------------
# the filtration page


def test_page_small():
    pg = e2_page(matrix_action_pair(3, SWAP2))
    assert str(pg.grid[(0, 0)]) == "Z/3"
    assert str(pg.grid[(0, 1)]) == "Z/3"
    assert pg.grid[(1, 0)].is_trivial and pg.grid[(2, 0)].is_trivial
    assert pg.differentials[(0, 1)]["target"] == (2, 0)
    assert pg.differentials[(0, 1)]["matrix"].shape[1] == 1


def test_page_matches_edge_sequence_kernel():
    rep = flagship_report()
    L = rep.maps["d2"]
    over_f2 = np.array([[int(v) % 2 for v in row] for row in L])
    pivots = 0
    work = over_f2.copy()
    for col in range(work.shape[1]):
        row = next((r for r in range(pivots, work.shape[0]) if work[r, col]), None)
        if row is None:
            continue
        work[[pivots, row]] = work[[row, pivots]]
        for r in range(work.shape[0]):
            if r != pivots and work[r, col]:
                work[r] = (work[r] + work[pivots]) % 2
        pivots += 1
    assert 2 ** (L.shape[1] - pivots) == rep.kernel.order()


# ---------------------------------------------------------------------------
# the long exact sequence


def test_sequence_terms_and_joints():
    expected = {
        "trivial": ["Z/2 + Z/2", "Z/2 + Z/2", "Z/2", "Z/2", "0", "Z/2",
                    "Z/2 + Z/2 + Z/2", "Z/2 + Z/2", "Z/2 + Z/2"],
        "s3": ["Z/2", "Z/6", "Z/3", "0", "0", "0", "Z/6", "Z/6", "0"],
        "c12": ["Z/12", "Z/12", "0", "0", "0", "0", "Z/12", "Z/12", "0"],
    }
    pairs = {"trivial": trivial_matched_pair(Z2, Z2), "s3": s3_pair(),
             "c12": c12_pair()}
    for name, mp in pairs.items():
        rep = kac_sequence(mp)
        assert [str(t) for t in rep.terms] == expected[name], name
        assert len(rep.certificates) == 7
        assert all(c["composite_zero"] and c["order_product"]
                   for c in rep.certificates)


def test_sequence_relative_terms_match_the_relative_route():
    rep = kac_sequence(s3_pair())
    direct = opext(s3_pair(), route="relative", reps=False)
    assert str(rep.terms[5]) == str(direct.group)


def test_sequence_size_cap():
    with pytest.raises(SizeBound):
        kac_sequence(matrix_action_pair(3, SWAP2))


# ---------------------------------------------------------------------------
# closed-form oracles


def test_swap_oracle_values():
    assert swap_opext(Z2) == FpAbGroup.from_factors([2])
    assert swap_opext(Z3) == FpAbGroup.from_factors([3])
    assert swap_opext(Z4) == FpAbGroup.from_factors([4])
    assert swap_opext(abelian_group([2, 2])) == FpAbGroup.from_factors(
        [2] + [2] * 4)


def test_involution_oracle_values_and_hypotheses():
    assert involution_opext(3, 0, 1, 1) == FpAbGroup.from_factors([3])
    assert involution_opext(5, 0, 1, 1) == FpAbGroup.from_factors([5])
    assert involution_opext(3, 1, 1, 0) == FpAbGroup.from_factors([3])
    with pytest.raises(HypothesisViolated):
        involution_opext(3, 1, 1, 1)


def test_odd_oracles_and_direct_agree():
    eye = [[1, 0], [0, 1]]
    neg = [[-1, 0], [0, -1]]
    rot = [[0, -1], [1, 0]]
    cases = [
        (linear_action_pair(Z2, [3, 3], {0: eye, 1: SWAP2}), 2, [3, 3], SWAP2),
        (linear_action_pair(Z2, [3, 3], {0: eye, 1: neg}), 2, [3, 3], neg),
        (linear_action_pair(Z4, [5, 5], {0: eye, 1: rot, 2: neg,
                                         3: [[0, 1], [-1, 0]]}), 4, [5, 5], rot),
    ]
    for mp, m, moduli, mat in cases:
        direct = opext(mp, route="kac_total", reps=False).group
        assert odd_abelian_opext(mp) == direct
        assert cyclic_odd_opext(m, moduli, mat) == direct


def test_odd_oracle_hypotheses():
    with pytest.raises(HypothesisViolated):
        odd_abelian_opext(s3_pair(mirror=True))
    with pytest.raises(HypothesisViolated):
        odd_abelian_opext(swap_pair(Z2))
    with pytest.raises(HypothesisViolated):
        cyclic_odd_opext(2, [3, 3], [[1, 1], [0, 1]])
    with pytest.raises(HypothesisViolated):
        cyclic_odd_opext(2, [4], [[1]])


def test_three_oracles_meet_on_the_swap_of_z3():
    value = FpAbGroup.from_factors([3])
    assert swap_opext(Z3) == value
    assert involution_opext(3, 0, 1, 1) == value
    assert cyclic_odd_opext(2, [3, 3], SWAP2) == value
