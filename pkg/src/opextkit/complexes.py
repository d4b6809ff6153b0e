"""Resolutions and chain complexes over integral group rings, in monomial form.

Every module here is free as an abelian group on cells (position, tag): the
position ranges over a finite group and the tag over a per-degree basis list.
Differentials are stored on based cells (position = identity) and translated,
group actions permute cells, and coinvariants fall out by canonicalizing each
orbit to its unique based representative. All matrices stay sparse and exact.

Degree windows are explicit everywhere; nothing here is lazy or infinite.
"""

from __future__ import annotations

import random
from itertools import product as iproduct

import numpy as np

from opextkit.exactlin import SparseCols, homology
from opextkit.groups import FiniteGroup, GSet, abelian_invariants, cyclic_group
from opextkit.matched import MatchedPair, is_semidirect

__all__ = [
    "SizeBound",
    "NotSemidirect",
    "BasisNotFree",
    "NotTransitive",
    "BasedResolution",
    "bar_resolution",
    "cyclic_resolution",
    "tensor_of_cyclic",
    "SigmaResolution",
    "sigma_action_on_bar",
    "extend_to_semidirect",
    "default_p_resolution",
    "DoubleTotalComplex",
    "relative_total_complex",
    "full_total_complex",
    "PermutationComplex",
    "standard_complex",
    "InducedResolution",
    "induced_parts",
    "ConeComplex",
    "cone_resolution",
]

CELL_BOUND = 2_500_000
RANK_BOUND = 200_000
ZCHECK_CELL_CAP = 800
VERIFY_CELL_CAP = 20_000


class SizeBound(Exception):
    """A requested construction exceeds the configured desk-scale bounds."""


class NotSemidirect(Exception):
    """The construction needs a trivial left action."""


class BasisNotFree(Exception):
    """Orbit canonicalization failed; the basis is not free over Sigma."""


class NotTransitive(Exception):
    """The standard complex needs a transitive G-set."""


class BasedResolution:
    """A complex of free B-modules with cells (position in B, tag).

    The differential is stored on based cells only; d(pos * tag) is obtained
    by translating (left side) or right-translating (right side). Since the
    translation action is free on cells, checking d*d = 0 on based tags is
    the full symbolic check. An optional contracting homotopy (a function of
    whole cells, not equivariant) certifies exactness over Z.
    """

    __slots__ = ("group", "side", "tags", "tag_index", "based_diff",
                 "homotopy_fn", "name", "meta")

    def __init__(self, group, side, tags, based_diff, homotopy_fn=None,
                 name=None, meta=None):
        self.group = group
        self.side = side
        self.tags = [list(t) for t in tags]
        self.tag_index = [{t: i for i, t in enumerate(level)} for level in self.tags]
        self.based_diff = based_diff  # per degree: dict tag -> [((pos, tag'), coeff)]
        self.homotopy_fn = homotopy_fn  # (degree, cell) -> [(cell', coeff)] one degree up
        self.name = name
        self.meta = dict(meta or {})
        total = sum(len(level) for level in self.tags) * group.n
        if total > CELL_BOUND:
            raise SizeBound(f"{total} cells exceed the bound {CELL_BOUND}")

    @property
    def degree_max(self):
        return len(self.tags) - 1

    def rank(self, k: int) -> int:
        if 0 <= k <= self.degree_max:
            return len(self.tags[k])
        return 0

    def cells(self, k: int):
        return [(pos, t) for t in self.tags[k] for pos in range(self.group.n)]

    def diff_cell(self, k: int, cell):
        """d(cell) as a list of ((pos, tag), coeff) in degree k-1."""
        pos, tag = cell
        out = []
        mul = self.group.mul
        for (p2, t2), c in self.based_diff[k][tag]:
            newpos = mul(pos, p2) if self.side == "left" else mul(p2, pos)
            out.append(((newpos, t2), c))
        return out

    def homotopy_cell(self, k: int, cell):
        return self.homotopy_fn(k, cell)

    def coinvariant_diffs(self):
        """Integer matrices of the coinvariant complex (positions collapsed)."""
        out = []
        for k in range(1, self.degree_max + 1):
            cols = []
            for tag in self.tags[k]:
                col = {}
                for (_, t2), c in self.based_diff[k][tag]:
                    i = self.tag_index[k - 1][t2]
                    col[i] = col.get(i, 0) + c
                cols.append({i: v for i, v in col.items() if v})
            out.append(SparseCols(len(self.tags[k - 1]), cols))
        return out

    def verify(self, rng=None):
        """Check d*d = 0 on based tags and the homotopy identity on cells.

        The homotopy identity is d h + h d = id, except in degree 0 where the
        right side is id - (unit after augmentation). Cell sets larger than a
        cap are sampled with a fixed seed.
        """
        for k in range(2, self.degree_max + 1):
            for tag in self.tags[k]:
                acc = {}
                for (p2, t2), c in self.based_diff[k][tag]:
                    for cell3, c2 in self.diff_cell(k - 1, (p2, t2)):
                        acc[cell3] = acc.get(cell3, 0) + c * c2
                if any(v for v in acc.values()):
                    raise AssertionError(f"d*d != 0 at degree {k} tag {tag}")
        if self.homotopy_fn is None:
            return
        rng = rng or random.Random(11)
        for k in range(0, self.degree_max):
            cells = self.cells(k)
            if len(cells) > VERIFY_CELL_CAP:
                cells = [cells[rng.randrange(len(cells))] for _ in range(500)]
            for cell in cells:
                acc = {}
                for cell2, c in self.homotopy_cell(k, cell):
                    for cell3, c2 in self.diff_cell(k + 1, cell2):
                        acc[cell3] = acc.get(cell3, 0) + c * c2
                if k >= 1:
                    for cell2, c in self.diff_cell(k, cell):
                        for cell3, c2 in self.homotopy_cell(k - 1, cell2):
                            acc[cell3] = acc.get(cell3, 0) + c * c2
                acc[cell] = acc.get(cell, 0) - 1
                if k == 0:
                    base = (0, cell[1])
                    acc[base] = acc.get(base, 0) + 1
                if any(v for v in acc.values()):
                    raise AssertionError(f"homotopy identity fails at degree {k} cell {cell}")


def bar_resolution(B: FiniteGroup, degree_max: int, normalized: bool = True,
                   side: str = "left") -> BasedResolution:
    """The (normalized) bar resolution of Z over ZB, through degree_max.

    Left side: based tags are tuples (x_1, ..., x_p); the differential acts
    by x_1 translating off the front, alternating-sign merges of adjacent
    entries, and dropping the last entry. Right side: tags (s_p, ..., s_1)
    with the mirror formula, the rightmost entry translating off the back.
    Normalization removes identity entries; merge terms that produce one are
    dropped. The contracting homotopy moves the position into a new tag slot
    (left: prepend, right: append).
    """
    letters = list(range(1, B.n)) if normalized else list(range(B.n))
    tags = []
    count = 0
    for k in range(degree_max + 1):
        level = list(iproduct(letters, repeat=k))
        count += len(level) * B.n
        if count > CELL_BOUND:
            raise SizeBound(f"bar resolution of an order-{B.n} group is too big at degree {k}")
        tags.append(level)
    diffs = [None]
    for k in range(1, degree_max + 1):
        dd = {}
        for tag in tags[k]:
            terms = []
            if side == "left":
                terms.append(((tag[0], tag[1:]), 1))
                for j in range(1, k):
                    m = B.mul(tag[j - 1], tag[j])
                    if normalized and m == 0:
                        continue
                    terms.append(((0, tag[:j - 1] + (m,) + tag[j + 1:]), (-1) ** j))
                terms.append(((0, tag[:-1]), (-1) ** k))
            else:
                terms.append(((tag[-1], tag[:-1]), 1))
                for a in range(k - 1):
                    m = B.mul(tag[a], tag[a + 1])
                    if normalized and m == 0:
                        continue
                    terms.append(((0, tag[:a] + (m,) + tag[a + 2:]), (-1) ** (k - a - 1)))
                terms.append(((0, tag[1:]), (-1) ** k))
            dd[tag] = terms
        diffs.append(dd)

    def homotopy(k, cell):
        pos, tag = cell
        if len(tag) >= degree_max:
            raise SizeBound("homotopy leaves the built degree window")
        if normalized and pos == 0:
            return []
        if side == "left":
            return [((0, (pos,) + tag), 1)]
        return [((0, tag + (pos,)), 1)]

    return BasedResolution(B, side, tags, diffs, homotopy_fn=homotopy,
                           name=f"bar({B.name or B.n})", meta={"kind": "bar"})


def cyclic_resolution(n: int, degree_max: int, group: FiniteGroup | None = None,
                      generator: int = 1) -> BasedResolution:
    """The periodic rank-one resolution of Z over a cyclic group of order n.

    Odd differentials are multiplication by g - 1, even ones by the norm
    1 + g + ... + g^{n-1}. The contracting homotopy sends g^c in even degree
    to the sum of g^j over j < c one degree up, and in odd degree to the
    based cell when c = n - 1, else to zero.
    """
    G = group or cyclic_group(n)
    powers = [0]
    for _ in range(1, n):
        powers.append(G.mul(powers[-1], generator))
    exponent = {p: i for i, p in enumerate(powers)}
    if len(exponent) != n:
        raise ValueError("generator must have full order")
    tags = [[k] for k in range(degree_max + 1)]
    diffs = [None]
    for k in range(1, degree_max + 1):
        if k % 2 == 1:
            terms = [((powers[1 % n], k - 1), 1), ((0, k - 1), -1)]
        else:
            terms = [((powers[j], k - 1), 1) for j in range(n)]
        diffs.append({k: terms})

    def homotopy(k, cell):
        pos, _ = cell
        if k >= degree_max:
            raise SizeBound("homotopy leaves the built degree window")
        c = exponent[pos]
        if k % 2 == 0:
            return [((powers[j], k + 1), 1) for j in range(c)]
        return [((0, k + 1), 1)] if c == n - 1 else []

    return BasedResolution(G, "left", tags, diffs, homotopy_fn=homotopy,
                           name=f"cyclic({n})", meta={"kind": "cyclic"})


def tensor_of_cyclic(A: FiniteGroup, degree_max: int) -> BasedResolution:
    """Tensor of periodic resolutions along the invariant factors of A.

    Tags are tuples of per-factor levels summing to the degree, so ranks
    grow polynomially; this is what keeps abelian groups cheap. The
    differential carries the sign (-1) to the sum of the levels to the left
    of the active factor. The homotopy is the standard tensor combination:
    factor i contributes its own homotopy with every earlier factor's
    position reset to the identity (the unit-augmentation idempotent), and
    the chain of contributions stops at the first factor with nonzero level.
    """
    st = abelian_invariants(A)
    moduli = st.moduli
    r = len(moduli)

    def compositions(k):
        if r == 0:
            return [()] if k == 0 else []
        out = []

        def rec(prefix, rest, slots):
            if slots == 1:
                out.append(prefix + (rest,))
                return
            for a in range(rest + 1):
                rec(prefix + (a,), rest - a, slots - 1)

        rec((), k, r)
        return out

    tags = [compositions(k) for k in range(degree_max + 1)]

    def factor_power(i, j):
        return st.from_coords(tuple(j if t == i else 0 for t in range(r)))

    unit = [factor_power(i, 1) for i in range(r)]
    diffs = [None]
    for k in range(1, degree_max + 1):
        dd = {}
        for tag in tags[k]:
            terms = []
            for i in range(r):
                a = tag[i]
                if a == 0:
                    continue
                sign = (-1) ** sum(tag[:i])
                t2 = tag[:i] + (a - 1,) + tag[i + 1:]
                if a % 2 == 1:
                    terms.append(((unit[i], t2), sign))
                    terms.append(((0, t2), -sign))
                else:
                    for j in range(moduli[i]):
                        terms.append(((factor_power(i, j), t2), sign))
            dd[tag] = terms
        diffs.append(dd)

    def homotopy(k, cell):
        pos, tag = cell
        if k >= degree_max:
            raise SizeBound("homotopy leaves the built degree window")
        coords = list(st.to_coords(pos))
        out = []
        for i in range(r):
            a, c, m = tag[i], coords[i], moduli[i]
            head = (0,) * i
            t2 = tag[:i] + (a + 1,) + tag[i + 1:]
            if a % 2 == 0:
                for j in range(c):
                    newc = head + (j,) + tuple(coords[i + 1:])
                    out.append(((st.from_coords(newc), t2), 1))
            elif c == m - 1:
                newc = head + (0,) + tuple(coords[i + 1:])
                out.append(((st.from_coords(newc), t2), 1))
            if a != 0:
                break
        return out

    return BasedResolution(A, "left", tags, diffs, homotopy_fn=homotopy,
                           name=f"cyclic-tensor({A.name or A.n})",
                           meta={"kind": "cyclic-tensor", "structure": st})


class SigmaResolution:
    """A based F- or G-resolution together with its whole-group action.

    Role "P" is a left complex over the first factor: acting by sigma on
    (x, b) factors sigma * x~ = y~ t~ and yields (y, twist(t, b)). Role "Q"
    is a right complex over the second factor: (s, c) . sigma factors
    s~ sigma = x'~ g'~ and yields (g', twist(x', c)). Twisting by the
    identity is the identity.
    """

    __slots__ = ("base", "mp", "role", "twist_fn", "_cache", "rel_over")

    def __init__(self, base: BasedResolution, mp: MatchedPair, role: str,
                 twist_fn, rel_over: str):
        if role == "P" and base.side != "left":
            raise ValueError("P-side resolutions must be left complexes")
        if role == "Q" and base.side != "right":
            raise ValueError("Q-side resolutions must be right complexes")
        self.base = base
        self.mp = mp
        self.role = role
        self.twist_fn = twist_fn
        self._cache = {}
        self.rel_over = rel_over

    def twist(self, elt: int, tag):
        if elt == 0:
            return tag
        key = (elt, tag)
        got = self._cache.get(key)
        if got is None:
            got = self.twist_fn(elt, tag)
            self._cache[key] = got
        return got

    def act(self, sigma: int, cell):
        """Left action for role P; right action cell . sigma for role Q."""
        mp = self.mp
        pos, tag = cell
        if self.role == "P":
            y, t = mp.factor(mp.sigma().mul(sigma, mp.embed_F(pos)))
            return (y, self.twist(t, tag))
        xp, gp = mp.factor(mp.sigma().mul(mp.embed_G(pos), sigma))
        return (gp, self.twist(xp, tag))

    def verify_action(self, depth: int, rng=None):
        """Action law and d-equivariance, exhaustive under a cap else sampled."""
        sig = self.mp.sigma()
        rng = rng or random.Random(23)
        for k in range(0, min(depth, self.base.degree_max) + 1):
            cells = self.base.cells(k)
            pairs = [(a, b) for a in range(sig.n) for b in range(sig.n)]
            if len(cells) * len(pairs) > VERIFY_CELL_CAP * 16:
                cells = [cells[rng.randrange(len(cells))] for _ in range(40)]
                pairs = [(rng.randrange(sig.n), rng.randrange(sig.n)) for _ in range(40)]
            for cell in cells:
                for a, b in pairs:
                    lhs = self.act(sig.mul(a, b), cell)
                    if self.role == "P":
                        rhs = self.act(a, self.act(b, cell))
                    else:
                        rhs = self.act(b, self.act(a, cell))
                    if lhs != rhs:
                        raise AssertionError(f"action law fails at {cell}, {(a, b)}")
            if k >= 1:
                for cell in cells:
                    for a in range(sig.n):
                        acc = {}
                        for cell2, c in self.base.diff_cell(k, cell):
                            key = self.act(a, cell2)
                            acc[key] = acc.get(key, 0) + c
                        for cell2, c in self.base.diff_cell(k, self.act(a, cell)):
                            acc[cell2] = acc.get(cell2, 0) - c
                        if any(v for v in acc.values()):
                            raise AssertionError(f"action does not commute with d at {cell}")


def sigma_action_on_bar(mp: MatchedPair, side: str, depth: int = 6) -> SigmaResolution:
    """Bar resolution of one factor promoted to a whole-group complex.

    side "right": bar of the second factor as right modules; acting by a
    group element factors the position off one end and pushes the leftover
    first-factor element through the tag, each entry absorbing its right
    action and passing its left action along. side "left" is the mirror for
    the first factor. Restricting either action back to its own factor is
    plain translation.
    """
    if side == "right":
        base = bar_resolution(mp.G, depth, side="right")

        def twist(xp, tag):
            w = xp
            out = []
            for s in reversed(tag):
                out.append(mp.right(s, w))
                w = mp.left(s, w)
            return tuple(reversed(out))

        return SigmaResolution(base, mp, "Q", twist, rel_over="F")
    if side == "left":
        base = bar_resolution(mp.F, depth, side="left")

        def twist(t, tag):
            cur = t
            out = []
            for x in tag:
                out.append(mp.left(cur, x))
                cur = mp.right(cur, x)
            return tuple(out)

        return SigmaResolution(base, mp, "P", twist, rel_over="G")
    raise ValueError("side must be 'left' or 'right'")


def extend_to_semidirect(mp: MatchedPair, base: BasedResolution) -> SigmaResolution:
    """Extend a first-factor resolution to the whole group with no twist.

    Valid exactly when the left action is trivial, so that projection onto
    the first factor is a homomorphism.
    """
    if not is_semidirect(mp):
        raise NotSemidirect("extension needs a trivial left action")
    if not np.array_equal(base.group.table, mp.F.table):
        raise ValueError("resolution is not over the first factor")
    return SigmaResolution(base, mp, "P", lambda t, tag: tag, rel_over="G")


def default_p_resolution(mp: MatchedPair, depth: int, resolution: str = "auto") -> SigmaResolution:
    """First-factor resolution chooser: the cyclic tensor model for an
    abelian factor under a trivial left action, else the promoted bar."""
    if resolution == "auto":
        if mp.F.is_abelian() and is_semidirect(mp):
            resolution = "cyclic-tensor"
        else:
            resolution = "bar"
    if resolution == "cyclic-tensor":
        return extend_to_semidirect(mp, tensor_of_cyclic(mp.F, depth))
    if resolution == "bar":
        return sigma_action_on_bar(mp, "left", depth)
    raise ValueError(f"unknown resolution kind {resolution!r}")


class DoubleTotalComplex:
    """Coinvariants of a tensor double complex of promoted resolutions.

    truncated=True builds the shifted grid D[p,q] = P_{p+1} (x) Q_{q+1}
    completed in degree 0 by P_0 (x) Q_0 via minus the product of the two
    bottom differentials: a resolution of the augmentation ideal of the
    two-orbit coset space. truncated=False builds the plain total complex
    of P (x) Q, a free resolution of Z.

    The free basis over the whole group consists of based pairs. The
    canonical representative of ((x, b), (s, c)) twists b by s <| x and c
    by s |> x; it is the unique cell of its orbit with both positions at
    the identity, which makes coinvariants a lookup rather than an orbit
    search. Horizontal differential terms twist the Q-tag, vertical terms
    twist the P-tag, and the vertical sign is (-1) to the P-degree.
    """

    __slots__ = ("mp", "P", "Q", "k_max", "truncated", "labels", "label_index",
                 "diffs", "meta")

    def __init__(self, mp, P, Q, k_max, truncated=True, zcheck="auto", certify=True):
        self.mp = mp
        self.P = P
        self.Q = Q
        self.k_max = k_max
        self.truncated = truncated
        shift = 1 if truncated else 0
        self.labels = []
        self.label_index = []
        for k in range(k_max + 1):
            level = []
            if truncated and k == 0:
                for b in P.base.tags[0]:
                    for c in Q.base.tags[0]:
                        level.append((-1, -1, b, c))
            else:
                top = k - shift
                for p in range(top, -1, -1):
                    q = top - p
                    if p + shift > P.base.degree_max or q + shift > Q.base.degree_max:
                        raise SizeBound("factor resolutions are too short for this degree")
                    for b in P.base.tags[p + shift]:
                        for c in Q.base.tags[q + shift]:
                            level.append((p, q, b, c))
            if len(level) > RANK_BOUND:
                raise SizeBound(f"degree {k}: rank {len(level)} exceeds {RANK_BOUND}")
            self.labels.append(level)
            self.label_index.append({lab: i for i, lab in enumerate(level)})
        self.diffs = [None]
        for k in range(1, k_max + 1):
            self.diffs.append(self._build_diff(k))
        self.meta = {"exact_checked": False, "note": ""}
        if certify:
            self._certify_freeness()
        if zcheck == "auto":
            zcheck = max(self.cell_count(k) for k in range(k_max + 1)) <= ZCHECK_CELL_CAP
        if zcheck:
            self._integral_exactness_check()
            self.meta["exact_checked"] = True
        else:
            self.meta["note"] = "exactness above degree 0 assumed from the construction theorems"

    def cell_count(self, k: int) -> int:
        return len(self.labels[k]) * self.mp.F.n * self.mp.G.n

    def canonical(self, p, q, pcell, qcell):
        """Based representative of the orbit of pcell (x) qcell in D[p,q]."""
        mp = self.mp
        x, b = pcell
        s, c = qcell
        return (p, q, self.P.twist(mp.right(s, x), b), self.Q.twist(mp.left(s, x), c))

    def _based_diff_terms(self, k, label):
        """Differential of a based pair, as coinvariant (label, coeff) terms."""
        p, q, b, c = label
        out = []
        if self.truncated and k == 1:
            for (x1, b0), c1 in self.P.base.based_diff[1][b]:
                for (s1, c0), c2 in self.Q.base.based_diff[1][c]:
                    out.append((self.canonical(-1, -1, (x1, b0), (s1, c0)), -c1 * c2))
            return out
        shift = 1 if self.truncated else 0
        pdeg, qdeg = p + shift, q + shift
        if p >= 1:
            for (x1, b2), c1 in self.P.base.based_diff[pdeg][b]:
                out.append(((p - 1, q, b2, self.Q.twist(x1, c)), c1))
        if q >= 1:
            sign = (-1) ** pdeg
            for (s1, c2), c1 in self.Q.base.based_diff[qdeg][c]:
                out.append(((p, q - 1, self.P.twist(s1, b), c2), sign * c1))
        return out

    def _build_diff(self, k):
        cols = []
        idx = self.label_index[k - 1]
        for label in self.labels[k]:
            col = {}
            for lab, coeff in self._based_diff_terms(k, label):
                i = idx[lab]
                col[i] = col.get(i, 0) + coeff
            cols.append({i: v for i, v in col.items() if v})
        return SparseCols(len(self.labels[k - 1]), cols)

    def block_ranges(self, k):
        """Ordered (p, q) bidegrees with their [start, stop) label slices."""
        out = []
        start = 0
        cur = None
        for i, (p, q, _, _) in enumerate(self.labels[k]):
            if (p, q) != cur:
                if cur is not None:
                    out.append((cur, (start, i)))
                cur, start = (p, q), i
        if cur is not None:
            out.append((cur, (start, len(self.labels[k]))))
        return out

    # -- full cell-level complex, used by the integral exactness check --

    def _cells(self, k):
        mp = self.mp
        out = []
        for p, q, b, c in self.labels[k]:
            for x in range(mp.F.n):
                for s in range(mp.G.n):
                    out.append((p, q, (x, b), (s, c)))
        return out

    def _cell_diff(self, k, cell):
        p, q, pcell, qcell = cell
        P, Q = self.P.base, self.Q.base
        out = []
        if self.truncated and k == 1:
            for pc2, c1 in P.diff_cell(1, pcell):
                for qc2, c2 in Q.diff_cell(1, qcell):
                    out.append(((-1, -1, pc2, qc2), -c1 * c2))
            return out
        shift = 1 if self.truncated else 0
        pdeg, qdeg = p + shift, q + shift
        if p >= 1:
            for pc2, c1 in P.diff_cell(pdeg, pcell):
                out.append(((p - 1, q, pc2, qcell), c1))
        if q >= 1:
            sign = (-1) ** pdeg
            for qc2, c1 in Q.diff_cell(qdeg, qcell):
                out.append(((p, q - 1, pcell, qc2), sign * c1))
        return out

    def _integral_exactness_check(self):
        cell_lists = [self._cells(k) for k in range(self.k_max + 1)]
        indexes = [{c: i for i, c in enumerate(cells)} for cells in cell_lists]
        mats = []
        for k in range(1, self.k_max + 1):
            A = np.zeros((len(cell_lists[k - 1]), len(cell_lists[k])), dtype=object)
            for j, cell in enumerate(cell_lists[k]):
                for cell2, coeff in self._cell_diff(k, cell):
                    A[indexes[k - 1][cell2], j] += coeff
            mats.append(A)
        n0 = len(cell_lists[0])
        h0, _ = homology(mats[0], None, [0] * n0)
        want = self.mp.F.n + self.mp.G.n - 1 if self.truncated else 1
        assert h0.free_rank == want and not h0.invariant_factors, (
            f"degree-0 homology {h0} has the wrong isomorphism type")
        for k in range(1, self.k_max):
            hk, _ = homology(mats[k], mats[k - 1], [0] * len(cell_lists[k]))
            assert hk.is_trivial, f"complex is not exact at degree {k}: {hk}"

    def _certify_freeness(self):
        rng = random.Random(31)
        sig = self.mp.sigma()
        for k in range(self.k_max + 1):
            labels = self.labels[k]
            if not labels:
                continue
            if len(labels) * sig.n <= VERIFY_CELL_CAP:
                trials = labels
                sigmas = list(range(sig.n))
            else:
                trials = [labels[rng.randrange(len(labels))] for _ in range(30)]
                sigmas = [rng.randrange(sig.n) for _ in range(20)]
            for p, q, b, c in trials:
                for a in sigmas:
                    pc = self.P.act(a, (0, b))
                    qc = self.Q.act(sig.inverse(a), (0, c))
                    if self.canonical(p, q, pc, qc) != (p, q, b, c):
                        raise BasisNotFree(
                            f"orbit of {(p, q, b, c)} has an inconsistent canonical form")


def relative_total_complex(mp: MatchedPair, k_max: int, resolution: str = "auto",
                           zcheck="auto") -> DoubleTotalComplex:
    """The truncated double complex resolving the augmentation ideal of the
    two-orbit coset space. Its dual homology in degree k-1 gives the degree-k
    relative cohomology; the degree-2 dual classes carry the cocycle pairs."""
    P = default_p_resolution(mp, k_max, resolution)
    Q = sigma_action_on_bar(mp, "right", k_max)
    return DoubleTotalComplex(mp, P, Q, k_max, truncated=True, zcheck=zcheck)


def full_total_complex(mp: MatchedPair, k_max: int, resolution: str = "auto",
                       zcheck=False) -> DoubleTotalComplex:
    """The plain total complex of P (x) Q: a free resolution of Z over the
    whole group, with a contracting homotopy inherited from the factors."""
    P = default_p_resolution(mp, k_max, resolution)
    Q = sigma_action_on_bar(mp, "right", k_max)
    return DoubleTotalComplex(mp, P, Q, k_max, truncated=False, zcheck=zcheck)


class PermutationComplex:
    """A complex of permutation modules: cells permuted by the group, with a
    cell-level differential. Coinvariants are taken orbitwise; freeness is
    neither assumed nor needed."""

    __slots__ = ("sigma", "side", "cells", "cell_index", "diff_fn", "act_fn", "name")

    def __init__(self, sigma, side, cells, diff_fn, act_fn, name=None):
        self.sigma = sigma
        self.side = side
        self.cells = [list(level) for level in cells]
        self.cell_index = [{c: i for i, c in enumerate(level)} for level in self.cells]
        self.diff_fn = diff_fn
        self.act_fn = act_fn
        self.name = name

    def act(self, g, cell):
        return self.act_fn(g, cell)

    def degree_max(self):
        return len(self.cells) - 1

    def orbits(self, k):
        """(representatives, map cell -> representative index)."""
        reps = []
        rep_of = {}
        for cell in self.cells[k]:
            if cell in rep_of:
                continue
            r = len(reps)
            reps.append(cell)
            rep_of[cell] = r
            frontier = [cell]
            while frontier:
                nxt = []
                for c in frontier:
                    for g in range(self.sigma.n):
                        c2 = self.act(g, c)
                        if c2 not in rep_of:
                            rep_of[c2] = r
                            nxt.append(c2)
                frontier = nxt
        return reps, rep_of

    def coinvariant_diffs(self):
        """(matrices, representative lists); matrix k-1 maps degree k to k-1."""
        orbit_data = [self.orbits(k) for k in range(len(self.cells))]
        out = []
        for k in range(1, len(self.cells)):
            reps, _ = orbit_data[k]
            _, rep_of = orbit_data[k - 1]
            cols = []
            for cell in reps:
                col = {}
                for cell2, coeff in self.diff_fn(k, cell):
                    i = rep_of[cell2]
                    col[i] = col.get(i, 0) + coeff
                cols.append({i: v for i, v in col.items() if v})
            out.append(SparseCols(len(orbit_data[k - 1][0]), cols))
        return out, [od[0] for od in orbit_data]

    def verify_d2(self):
        for k in range(2, len(self.cells)):
            for cell in self.cells[k]:
                acc = {}
                for cell2, c in self.diff_fn(k, cell):
                    for cell3, c2 in self.diff_fn(k - 1, cell2):
                        acc[cell3] = acc.get(cell3, 0) + c * c2
                if any(v for v in acc.values()):
                    raise AssertionError(f"d*d != 0 at {cell}")


def standard_complex(X: GSet, degree_max: int, normalized: bool = False) -> PermutationComplex:
    """The standard complex of a transitive G-set: degree-k cells are
    (k+1)-tuples with the diagonal action, differential the alternating sum
    over omitted slots. normalized=True removes tuples with equal adjacent
    entries, and differential terms that create them."""
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in range(X.sigma.n):
                y = X.act(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    if len(seen) != X.size:
        raise NotTransitive(f"orbit of point 0 has size {len(seen)} < {X.size}")

    def ok(tup):
        return not normalized or all(tup[i] != tup[i + 1] for i in range(len(tup) - 1))

    cells = []
    count = 0
    for k in range(degree_max + 1):
        level = [t for t in iproduct(range(X.size), repeat=k + 1) if ok(t)]
        count += len(level)
        if count > CELL_BOUND:
            raise SizeBound(f"standard complex is too big at degree {k}")
        cells.append(level)

    def diff(k, cell):
        out = []
        for j in range(k + 1):
            t = cell[:j] + cell[j + 1:]
            if ok(t):
                out.append((t, (-1) ** j))
        return out

    def act(g, cell):
        return tuple(X.act(g, x) for x in cell)

    return PermutationComplex(X.sigma, X.side, cells, diff, act,
                              name=f"standard({X.size} points)")


class InducedResolution:
    """The big group ring tensored over a subgroup with that subgroup's bar
    resolution: cells are (group element, subgroup tag), the differential is
    the bar differential pushed through the embedding, and coinvariants are
    literally the subgroup's integral bar complex.

    decomp(sigma) -> (coset representative, local subgroup index) realizes
    sigma = rep * emb(h) and drives the per-coset contracting homotopy, which
    contracts onto the permutation module on the coset space.
    """

    __slots__ = ("sigma", "H", "emb", "base", "decomp", "name")

    def __init__(self, sigma, H, emb, base: BasedResolution, decomp, name=None):
        self.sigma = sigma
        self.H = H
        self.emb = list(emb)
        self.base = base
        self.decomp = decomp
        self.name = name

    def rank(self, k):
        return self.base.rank(k)

    def diff_cell(self, k, cell):
        sig, tag = cell
        out = []
        for (h, tag2), c in self.base.based_diff[k][tag]:
            out.append(((self.sigma.mul(sig, self.emb[h]), tag2), c))
        return out

    def homotopy_cell(self, k, cell):
        sig, tag = cell
        rep, h = self.decomp(sig)
        if h == 0:
            return []
        return [((rep, (h,) + tag), 1)]

    def coinvariant_diffs(self):
        return self.base.coinvariant_diffs()

    def verify_homotopy(self, depth):
        for k in range(0, min(depth, self.base.degree_max - 1) + 1):
            for tag in self.base.tags[k]:
                for sig in range(self.sigma.n):
                    cell = (sig, tag)
                    acc = {}
                    for cell2, c in self.homotopy_cell(k, cell):
                        for cell3, c2 in self.diff_cell(k + 1, cell2):
                            acc[cell3] = acc.get(cell3, 0) + c * c2
                    if k >= 1:
                        for cell2, c in self.diff_cell(k, cell):
                            for cell3, c2 in self.homotopy_cell(k - 1, cell2):
                                acc[cell3] = acc.get(cell3, 0) + c * c2
                    acc[cell] = acc.get(cell, 0) - 1
                    if k == 0:
                        rep, _ = self.decomp(sig)
                        base = (rep, tag)
                        acc[base] = acc.get(base, 0) + 1
                    if any(v for v in acc.values()):
                        raise AssertionError(f"induced homotopy fails at {cell}")


def induced_parts(mp: MatchedPair, depth: int):
    """The two induced resolutions covering the pair's coset space.

    Part 0 is induced from the embedded second factor (its cosets are the
    first factor's translates); part 1 from the embedded first factor. The
    direct sum resolves the permutation module on the disjoint coset space.
    """
    sig = mp.sigma()

    def decomp_G(idx):
        x, s = mp.factor(idx)
        return mp.embed_F(x), s

    def decomp_F(idx):
        inv = sig.inverse(idx)
        u, v = mp.factor(inv)
        sp = mp.G.inverse(v)
        xp = mp.F.inverse(u)
        return mp.embed_G(sp), xp

    part_G = InducedResolution(
        sig, mp.G, [mp.embed_G(s) for s in range(mp.G.n)],
        bar_resolution(mp.G, depth, side="left"), decomp_G,
        name="induced from the second factor")
    part_F = InducedResolution(
        sig, mp.F, [mp.embed_F(x) for x in range(mp.F.n)],
        bar_resolution(mp.F, depth, side="left"), decomp_F,
        name="induced from the first factor")
    return part_G, part_F


class _BasedOverSigma:
    """Adapter giving a based resolution over the whole group the interface
    the cone construction needs from its contractible side."""

    __slots__ = ("res",)

    def __init__(self, res: BasedResolution):
        self.res = res

    def rank(self, k):
        return self.res.rank(k)

    def tag_index(self, k, tag):
        return self.res.tag_index[k][tag]

    def unit_cell(self):
        return (0, self.res.tags[0][0])

    def translate(self, sigma, cell):
        pos, tag = cell
        return (self.res.group.mul(sigma, pos), tag)

    def diff_cell(self, k, cell):
        return self.res.diff_cell(k, cell)

    def homotopy_cell(self, k, cell):
        return self.res.homotopy_cell(k, cell)

    def canonical_tag(self, cell):
        return cell[1]

    def coinvariant_diffs(self):
        return self.res.coinvariant_diffs()


class _TotalOverSigma:
    """Adapter giving a full tensor total complex the cone interface.

    Cells are (p, q, pcell, qcell); the free basis consists of the based
    pairs. The homotopy is the tensor combination of the factor homotopies,
    with the second factor's contribution gated on the first sitting in
    degree 0 (where its augmentation-unit correction applies).
    """

    __slots__ = ("tot",)

    def __init__(self, tot: DoubleTotalComplex):
        assert not tot.truncated
        self.tot = tot

    def rank(self, k):
        return len(self.tot.labels[k])

    def tag_index(self, k, tag):
        return self.tot.label_index[k][tag]

    def unit_cell(self):
        b = self.tot.P.base.tags[0][0]
        c = self.tot.Q.base.tags[0][0]
        return (0, 0, (0, b), (0, c))

    def translate(self, sigma, cell):
        p, q, pc, qc = cell
        inv = self.tot.mp.sigma().inverse(sigma)
        return (p, q, self.tot.P.act(sigma, pc), self.tot.Q.act(inv, qc))

    def diff_cell(self, k, cell):
        return self.tot._cell_diff(k, cell)

    def homotopy_cell(self, k, cell):
        p, q, pcell, qcell = cell
        P, Q = self.tot.P.base, self.tot.Q.base
        out = [((p + 1, q, pc2, qcell), coeff)
               for pc2, coeff in P.homotopy_cell(p, pcell)]
        if p == 0:
            unit_p = (0, P.tags[0][0])
            out.extend(((0, q + 1, unit_p, qc2), coeff)
                       for qc2, coeff in Q.homotopy_cell(q, qcell))
        return out

    def canonical_tag(self, cell):
        p, q, pcell, qcell = cell
        return self.tot.canonical(p, q, pcell, qcell)

    def coinvariant_diffs(self):
        return [self.tot.diffs[k] for k in range(1, self.tot.k_max + 1)]


class ConeComplex:
    """Mapping cone of a chain lift from the coset-space resolution into a
    resolution of Z over the whole group; shifted by one it resolves the
    coset augmentation ideal, so its dual homology in degree k computes the
    same degree-k relative cohomology as the truncated double complex.

    Degree-k basis: the two induced parts' tags at degree k-1, then the
    contractible side's basis at degree k. An induced basis element u maps
    to (-d u, -psi u); a contractible-side element maps to its own
    differential. The lift psi is built degree by degree through the
    contracting homotopy and checked to commute with the differentials on
    every basis cell.
    """

    __slots__ = ("mp", "parts", "B", "depth", "psi", "diffs", "ranks", "offsets")

    def __init__(self, mp, parts, B, depth, verify=True):
        self.mp = mp
        self.parts = parts
        self.B = B
        self.depth = depth
        self.psi = self._lift(verify=verify)
        part_coinv = [p.coinvariant_diffs() for p in parts]
        b_coinv = B.coinvariant_diffs()
        self.ranks = []
        self.offsets = []
        for k in range(depth + 2):
            offs = []
            run = 0
            for p in self.parts:
                offs.append(run)
                run += p.rank(k - 1) if k >= 1 else 0
            offs.append(run)
            self.offsets.append(offs)
            self.ranks.append(run + B.rank(k))
        self.diffs = [None]
        for k in range(1, depth + 2):
            cols = []
            for pi, part in enumerate(self.parts):
                dcols = part_coinv[pi][k - 2] if k >= 2 else None
                for j, tag in enumerate(part.base.tags[k - 1]):
                    col = {}
                    if dcols is not None:
                        for i, v in dcols.cols[j].items():
                            key = self.offsets[k - 1][pi] + i
                            col[key] = col.get(key, 0) - v
                    for bcell, coeff in self.psi[pi][k - 1][tag]:
                        i = self.offsets[k - 1][-1] + B.tag_index(
                            k - 1, B.canonical_tag(bcell))
                        col[i] = col.get(i, 0) - coeff
                    cols.append({i: v for i, v in col.items() if v})
            bcols = b_coinv[k - 1]
            base_off = self.offsets[k - 1][-1]
            for j in range(B.rank(k)):
                cols.append({base_off + i: v for i, v in bcols.cols[j].items()})
            self.diffs.append(SparseCols(self.ranks[k - 1], cols))

    def _lift(self, verify=True):
        """psi[part][degree]: dict tag -> [(B-cell, coeff)], lifting the
        coset-point augmentation through B degree by degree."""
        unit = self.B.unit_cell()
        psi = []
        for part in self.parts:
            per_degree = [dict() for _ in range(self.depth + 1)]
            for tag in part.base.tags[0]:
                per_degree[0][tag] = [(unit, 1)]
            psi.append(per_degree)
        for pi, part in enumerate(self.parts):
            for k in range(1, self.depth + 1):
                for tag in part.base.tags[k]:
                    z = {}
                    for (g, tag2), c in part.diff_cell(k, (0, tag)):
                        for bcell, c2 in psi[pi][k - 1][tag2]:
                            cell = self.B.translate(g, bcell)
                            z[cell] = z.get(cell, 0) + c * c2
                    val = {}
                    for cell, c in z.items():
                        if c == 0:
                            continue
                        for cell2, c2 in self.B.homotopy_cell(k - 1, cell):
                            val[cell2] = val.get(cell2, 0) + c * c2
                    psi[pi][k][tag] = [(cell, c) for cell, c in val.items() if c]
                    if verify:
                        acc = dict(z)
                        for cell, c in psi[pi][k][tag]:
                            for cell2, c2 in self.B.diff_cell(k, cell):
                                acc[cell2] = acc.get(cell2, 0) - c * c2
                        if any(v for v in acc.values()):
                            raise AssertionError(
                                f"chain lift fails at part {pi} degree {k} tag {tag}")
        return psi

    def part_ranges(self, k):
        """[(start, stop)] column ranges of the induced parts in degree k."""
        offs = self.offsets[k]
        return [(offs[i], offs[i] + self.parts[i].rank(k - 1))
                for i in range(len(self.parts))]

    def b_range(self, k):
        """Column range of the contractible block in degree k."""
        return (self.offsets[k][-1], self.ranks[k])

    def psi_coinvariant(self, k):
        """Matrix of the lift at degree k: part tags to the contractible
        side's coinvariant basis."""
        cols = []
        for pi, part in enumerate(self.parts):
            for tag in part.base.tags[k]:
                col = {}
                for bcell, c in self.psi[pi][k][tag]:
                    i = self.B.tag_index(k, self.B.canonical_tag(bcell))
                    col[i] = col.get(i, 0) + c
                cols.append({i: v for i, v in col.items() if v})
        return SparseCols(self.B.rank(k), cols)


def cone_resolution(mp: MatchedPair, depth: int, b_kind: str = "auto",
                    verify: bool = True) -> ConeComplex:
    """Build the cone model for the relative cohomology of a matched pair.

    b_kind picks the resolution of Z over the whole group: "cyclic-tensor"
    (abelian only), "bar", or "total" (tensor of the two promoted bars);
    "auto" takes cyclic-tensor when the group is abelian, bar when its order
    is at most 6, and the tensor total otherwise.
    """
    sig = mp.sigma()
    parts = induced_parts(mp, depth + 1)
    if b_kind == "auto":
        if sig.is_abelian():
            b_kind = "cyclic-tensor"
        elif sig.n <= 6:
            b_kind = "bar"
        else:
            b_kind = "total"
    if b_kind == "cyclic-tensor":
        B = _BasedOverSigma(tensor_of_cyclic(sig, depth + 2))
    elif b_kind == "bar":
        B = _BasedOverSigma(bar_resolution(sig, depth + 2, side="left"))
    elif b_kind == "total":
        B = _TotalOverSigma(full_total_complex(mp, depth + 2, resolution="bar"))
    else:
        raise ValueError(f"unknown contractible-side kind {b_kind!r}")
    return ConeComplex(mp, parts, B, depth, verify=verify)
