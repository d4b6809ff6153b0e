"""Matched pairs shared across the test suite.

Builders only; expected values stay next to the tests that freeze them.
The coordinate conventions here follow abelian_group: the last modulus
varies fastest, so an index decodes to coordinates most-significant first.
"""

import numpy as np

from opextkit.groups import (
    abelian_group,
    cyclic_group,
    direct_product,
    group_from_permutations,
)
from opextkit.matched import from_factorization, semidirect_pair

S3 = group_from_permutations([(1, 0, 2), (1, 2, 0)], 3, name="S3")


def s3_pair(mirror=False):
    """S3 = (transposition) x (rotations) as a matched pair, or its mirror."""
    t = next(a for a in range(6) if S3.element_order(a) == 2)
    r = next(a for a in range(6) if S3.element_order(a) == 3)
    rot = [0, r, S3.mul(r, r)]
    if mirror:
        mp, _ = from_factorization(S3, rot, [0, t])
    else:
        mp, _ = from_factorization(S3, [0, t], rot)
    return mp


def swap_pair(H):
    """F = Z/2 acting on H x H by exchanging the coordinates."""
    G = direct_product(H, H)
    F = cyclic_group(2)
    rt = np.zeros((G.n, 2), dtype=np.int64)
    for a in range(H.n):
        for b in range(H.n):
            s = a * H.n + b
            rt[s, 0] = s
            rt[s, 1] = b * H.n + a
    return semidirect_pair(F, G, rt)


def coords_of(idx, moduli):
    out = []
    for d in reversed(moduli):
        out.append(idx % d)
        idx //= d
    return list(reversed(out))


def index_of(coords, moduli):
    idx = 0
    for c, d in zip(coords, moduli):
        idx = idx * d + (int(c) % d)
    return idx


def linear_action_pair(F, moduli, mats):
    """Semidirect pair of F acting on an abelian group by integer matrices.

    mats[x] is the matrix of (s -> s <| x) on coordinates mod the given
    moduli, one entry per element of F; the pair validation will reject
    anything that is not an action by automorphisms.
    """
    G = abelian_group(moduli)
    rt = np.zeros((G.n, F.n), dtype=np.int64)
    mods = np.array(moduli, dtype=object)
    for s in range(G.n):
        v = np.array(coords_of(s, moduli), dtype=object)
        for x in range(F.n):
            w = (np.asarray(mats[x], dtype=object) @ v) % mods
            rt[s, x] = index_of(w, moduli)
    return semidirect_pair(F, G, rt)


def matrix_action_pair(n, A):
    """Z/2 acting on (Z/n)^2 by an integer matrix A with A^2 = 1 mod n."""
    I2 = np.eye(2, dtype=object)
    return linear_action_pair(cyclic_group(2), [n, n], {0: I2, 1: A})


SWAP2 = [[0, 1], [1, 0]]


def flagship_pair():
    """(Z/2)^2 acting on (Z/2)^4 by a pair of commuting involutions.

    Element 1 of the acting group is (0, 1) in its coordinates, so it
    picks up the second matrix; element 2 picks up the first.
    """
    M1 = np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 1, 0], [0, 1, 0, 1]], dtype=object
    )
    M2 = np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, 1, 0], [1, 1, 0, 1]], dtype=object
    )
    F = abelian_group([2, 2])
    mats = {0: np.eye(4, dtype=object), 1: M2, 2: M1, 3: (M1 @ M2) % 2}
    return linear_action_pair(F, [2, 2, 2, 2], mats)
