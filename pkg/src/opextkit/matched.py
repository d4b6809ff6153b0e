"""Matched pairs of finite groups and their bicrossed products.

A matched pair (G, F, left, right) couples a left action of G on the set F
with a right action of F on the set G so that the product set F x G carries
a group structure (x, s)(y, t) = (x (s |> y), (s <| y) t). Conversely an
exact factorization Sigma = F G recovers the actions by solving
s x = (s |> x)(s <| x).
"""

from __future__ import annotations

import numpy as np

from opextkit.groups import FiniteGroup, NotAGroup, group_from_table, subgroup

__all__ = [
    "AxiomViolation",
    "NotExactFactorization",
    "MatchedPair",
    "validate_matched_pair",
    "bicrossed_product",
    "from_factorization",
    "is_semidirect",
    "trivial_matched_pair",
    "semidirect_pair",
]


class AxiomViolation(Exception):
    """A matched-pair axiom fails; carries the axiom name and a witness."""

    def __init__(self, axiom: str, witness: tuple):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"{axiom} fails at {witness}")


class NotExactFactorization(Exception):
    """The two subgroups do not factor the group uniquely."""


class MatchedPair:
    """Actions stored as tables: left[s, x] = s |> x, right[s, x] = s <| x."""

    __slots__ = ("F", "G", "left_table", "right_table", "name", "_sigma")

    def __init__(self, F: FiniteGroup, G: FiniteGroup, left_table, right_table, name=None):
        self.F = F
        self.G = G
        self.left_table = np.asarray(left_table, dtype=np.int64)
        self.right_table = np.asarray(right_table, dtype=np.int64)
        if self.left_table.shape != (G.n, F.n):
            raise ValueError("left action table must be |G| x |F|")
        if self.right_table.shape != (G.n, F.n):
            raise ValueError("right action table must be |G| x |F|")
        self.name = name
        self._sigma = None

    def left(self, s: int, x: int) -> int:
        """s |> x, an element of F."""
        return int(self.left_table[s, x])

    def right(self, s: int, x: int) -> int:
        """s <| x, an element of G."""
        return int(self.right_table[s, x])

    def sigma(self) -> FiniteGroup:
        if self._sigma is None:
            self._sigma = bicrossed_product(self)
        return self._sigma

    # index conventions for Sigma = F join G on F x G
    def pair_index(self, x: int, s: int) -> int:
        return x * self.G.n + s

    def factor(self, idx: int) -> tuple[int, int]:
        return idx // self.G.n, idx % self.G.n

    def embed_F(self, x: int) -> int:
        return x * self.G.n

    def embed_G(self, s: int) -> int:
        return s

    def __repr__(self):
        nm = self.name or f"|F|={self.F.n}, |G|={self.G.n}"
        return f"<MatchedPair {nm}>"


def validate_matched_pair(mp: MatchedPair) -> None:
    """Exhaustively check unit, action, and compatibility axioms.

    Raises AxiomViolation naming the first failing identity with the
    offending elements.
    """
    F, G = mp.F, mp.G
    lt, rt = mp.left_table, mp.right_table
    for x in range(F.n):
        if lt[0, x] != x:
            raise AxiomViolation("unit-left", (0, x))
        if rt[0, x] != 0:
            raise AxiomViolation("unit-right", (0, x))
    for s in range(G.n):
        if lt[s, 0] != 0:
            raise AxiomViolation("unit-left", (s, 0))
        if rt[s, 0] != s:
            raise AxiomViolation("unit-right", (s, 0))
    for s in range(G.n):
        for t in range(G.n):
            st = G.mul(s, t)
            for x in range(F.n):
                if lt[st, x] != lt[s, lt[t, x]]:
                    raise AxiomViolation("left-action", (s, t, x))
                # (st) <| x = (s <| (t |> x)) (t <| x)
                if rt[st, x] != G.mul(rt[s, lt[t, x]], rt[t, x]):
                    raise AxiomViolation("compat-right", (s, t, x))
    for s in range(G.n):
        for x in range(F.n):
            for y in range(F.n):
                xy = F.mul(x, y)
                if rt[s, xy] != rt[rt[s, x], y]:
                    raise AxiomViolation("right-action", (s, x, y))
                # s |> (xy) = (s |> x)((s <| x) |> y)
                if lt[s, xy] != F.mul(lt[s, x], lt[rt[s, x], y]):
                    raise AxiomViolation("compat-left", (s, x, y))


def bicrossed_product(mp: MatchedPair) -> FiniteGroup:
    """The group F join G on pairs (x, s) indexed as x*|G| + s.

    Validates the matched-pair axioms first; the resulting table is run
    through the full group check, so an inconsistency here is a bug, not
    bad input.
    """
    validate_matched_pair(mp)
    F, G = mp.F, mp.G
    n = F.n * G.n
    table = np.zeros((n, n), dtype=np.int64)
    for x in range(F.n):
        for s in range(G.n):
            a = mp.pair_index(x, s)
            for y in range(F.n):
                for t in range(G.n):
                    table[a, mp.pair_index(y, t)] = mp.pair_index(
                        F.mul(x, mp.left(s, y)), G.mul(mp.right(s, y), t)
                    )
    labels = None
    if F.labels and G.labels:
        labels = [
            f"({F.labels[x]};{G.labels[s]})" for x in range(F.n) for s in range(G.n)
        ]
    name = None
    if F.name and G.name:
        name = f"({F.name}) join ({G.name})"
    sigma = group_from_table(table, name=name, labels=labels)
    # unique factorization sanity: (x, e)(e, s) must land at index (x, s)
    for x in range(F.n):
        for s in range(G.n):
            assert sigma.mul(mp.embed_F(x), mp.embed_G(s)) == mp.pair_index(x, s)
    return sigma


def from_factorization(Sigma: FiniteGroup, F_elems, G_elems):
    """Recover the matched pair from an exact factorization Sigma = F G.

    F_elems and G_elems are element indices of Sigma forming subgroups with
    trivial intersection and |F| * |G| = |Sigma|. Returns (mp, iso) where
    iso[mp.pair_index(x, s)] is the Sigma index of x~ s~.

    Raises NotExactFactorization when the product map F x G -> Sigma is not
    bijective, and NotAGroup when a subset is not a subgroup.
    """
    F, f_emb = subgroup(Sigma, F_elems)
    G, g_emb = subgroup(Sigma, G_elems)
    inter = set(f_emb) & set(g_emb)
    if inter != {0}:
        raise NotExactFactorization(f"subgroups intersect in {sorted(inter)}")
    if F.n * G.n != Sigma.n:
        raise NotExactFactorization(
            f"|F| * |G| = {F.n * G.n} != |Sigma| = {Sigma.n}"
        )
    where = {}
    for x in range(F.n):
        for s in range(G.n):
            idx = Sigma.mul(f_emb[x], g_emb[s])
            if idx in where:
                raise NotExactFactorization(
                    f"element {idx} factors as both {where[idx]} and {(x, s)}"
                )
            where[idx] = (x, s)
    lt = np.zeros((G.n, F.n), dtype=np.int64)
    rt = np.zeros((G.n, F.n), dtype=np.int64)
    for s in range(G.n):
        for x in range(F.n):
            y, t = where[Sigma.mul(g_emb[s], f_emb[x])]
            lt[s, x] = y
            rt[s, x] = t
    mp = MatchedPair(F, G, lt, rt, name=Sigma.name and f"factorization of {Sigma.name}")
    validate_matched_pair(mp)
    iso = [0] * Sigma.n
    for idx, (x, s) in where.items():
        iso[mp.pair_index(x, s)] = idx
    return mp, iso


def is_semidirect(mp: MatchedPair) -> bool:
    """True when the left action is trivial (Sigma = F semidirect G).

    In that case each x acts on G as an automorphism s -> s <| x; this is
    forced by the axioms and asserted here.
    """
    expected = np.arange(mp.F.n)
    if not all(np.array_equal(mp.left_table[s], expected) for s in range(mp.G.n)):
        return False
    for x in range(mp.F.n):
        col = mp.right_table[:, x]
        assert len(set(int(v) for v in col)) == mp.G.n
        for s in range(mp.G.n):
            for t in range(mp.G.n):
                assert col[mp.G.mul(s, t)] == mp.G.mul(int(col[s]), int(col[t]))
    return True


def trivial_matched_pair(F: FiniteGroup, G: FiniteGroup) -> MatchedPair:
    """Both actions trivial; the bicrossed product is the direct product."""
    lt = np.tile(np.arange(F.n), (G.n, 1))
    rt = np.tile(np.arange(G.n)[:, None], (1, F.n))
    return MatchedPair(F, G, lt, rt)


def semidirect_pair(F: FiniteGroup, G: FiniteGroup, right_table) -> MatchedPair:
    """Trivial left action with the given right table s <| x; validated."""
    lt = np.tile(np.arange(F.n), (G.n, 1))
    mp = MatchedPair(F, G, lt, right_table)
    validate_matched_pair(mp)
    return mp
