"""Finite groups as index tables, abelian structure, modules, and G-sets.

Groups are immutable multiplication tables over indices 0..n-1 with the
identity pinned at index 0. Everything downstream (matched pairs, chain
complexes) works purely on indices, so constructors here fix canonical,
deterministic element orders.
"""

from __future__ import annotations

import random
from math import gcd

import numpy as np

from opextkit.exactlin import FpAbGroup, dual_of_map, smith_normal_form

__all__ = [
    "NotAGroup",
    "ClosureOverflow",
    "NotAbelian",
    "ActionNotByAutomorphisms",
    "FiniteGroup",
    "GroupHom",
    "GModule",
    "GSet",
    "group_from_table",
    "group_from_permutations",
    "cyclic_group",
    "abelian_group",
    "direct_product",
    "subgroup",
    "abelian_invariants",
    "AbelianStructure",
    "trivial_module",
    "module_from_matrices",
    "dual_module",
    "exterior_square",
    "orbit_stabilizer",
]

MAX_ORDER = 4096


class NotAGroup(Exception):
    """The table fails a group axiom; carries which one and a witness."""


class ClosureOverflow(Exception):
    """Permutation closure exceeded the configured element bound."""


class NotAbelian(Exception):
    """A witness pair of non-commuting elements."""


class ActionNotByAutomorphisms(Exception):
    """The supplied action matrices are not invertible on the module."""


class FiniteGroup:
    """A finite group given by its full multiplication table.

    table[a][b] is the index of a*b; index 0 is the identity. Validation
    happens in the constructors; this class assumes a correct table.
    """

    __slots__ = ("n", "table", "inv", "name", "generators", "labels")

    def __init__(self, table: np.ndarray, name=None, generators=None, labels=None):
        self.table = table
        self.n = table.shape[0]
        inv = np.zeros(self.n, dtype=np.int64)
        for a in range(self.n):
            hits = np.nonzero(table[a] == 0)[0]
            if len(hits) != 1 or table[hits[0], a] != 0:
                raise NotAGroup(f"no two-sided inverse for element {a}")
            inv[a] = hits[0]
        self.inv = inv
        self.name = name
        self.generators = tuple(generators) if generators else None
        self.labels = tuple(labels) if labels else None

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def conj(self, a: int, b: int) -> int:
        """b a b^-1."""
        return self.mul(self.mul(b, a), self.inverse(b))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse(a), -k
        out = 0
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def commuting_witness(self):
        """A pair (a, b) with ab != ba, or None."""
        bad = np.nonzero(self.table != self.table.T)
        if len(bad[0]) == 0:
            return None
        return int(bad[0][0]), int(bad[1][0])

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def __len__(self):
        return self.n

    def __repr__(self):
        nm = self.name or f"group of order {self.n}"
        return f"<FiniteGroup {nm}>"


def _validate_table(table: np.ndarray) -> None:
    n = table.shape[0]
    if table.shape != (n, n):
        raise NotAGroup("table is not square")
    if table.min() < 0 or table.max() >= n:
        raise NotAGroup("table entries out of range")
    if n > MAX_ORDER:
        raise NotAGroup(f"order {n} exceeds the supported bound {MAX_ORDER}")
    if not np.array_equal(table[0], np.arange(n)):
        j = int(np.nonzero(table[0] != np.arange(n))[0][0])
        raise NotAGroup(f"index 0 is not a left identity at {j}")
    if not np.array_equal(table[:, 0], np.arange(n)):
        i = int(np.nonzero(table[:, 0] != np.arange(n))[0][0])
        raise NotAGroup(f"index 0 is not a right identity at {i}")
    for a in range(n):
        if len(set(int(v) for v in table[a])) != n:
            raise NotAGroup(f"row {a} is not a permutation (no cancellation)")
        if len(set(int(v) for v in table[:, a])) != n:
            raise NotAGroup(f"column {a} is not a permutation (no cancellation)")
    if n <= 256:
        # lhs[a,b,c] = table[table[a,b], c]; rhs[a,b,c] = table[a, table[b,c]]
        lhs = table[table, :]
        rhs = np.empty_like(lhs)
        for a in range(n):
            rhs[a] = table[a][table]
        bad = np.nonzero(lhs != rhs)
        if len(bad[0]):
            a, b, c = (int(bad[k][0]) for k in range(3))
            raise NotAGroup(f"associativity fails at ({a},{b},{c})")
    else:
        rng = random.Random(0)
        for _ in range(200000):
            a = rng.randrange(n)
            b = rng.randrange(n)
            c = rng.randrange(n)
            if table[table[a, b], c] != table[a, table[b, c]]:
                raise NotAGroup(f"associativity fails at ({a},{b},{c})")


def group_from_table(table, name=None, generators=None, labels=None) -> FiniteGroup:
    """Validate a multiplication table and wrap it.

    >>> group_from_table([[0, 1], [1, 0]]).n
    2
    >>> try:
    ...     group_from_table([[0, 1], [1, 1]])
    ... except NotAGroup as e:
    ...     print("rejected")
    rejected
    """
    table = np.array(table, dtype=np.int64)
    _validate_table(table)
    return FiniteGroup(table, name=name, generators=generators, labels=labels)


def group_from_permutations(gens, degree: int, bound: int = 10**6, name=None) -> FiniteGroup:
    """Close a set of permutations of {0..degree-1} under composition.

    Elements are indexed with the identity first, then breadth-first
    products gen*known in generator order. Composition convention:
    (p*q)(i) = p[q[i]].
    """
    ident = tuple(range(degree))
    gens = [tuple(g) for g in gens]
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise NotAGroup(f"generator {g} is not a permutation of 0..{degree-1}")
    index = {ident: 0}
    elems = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for q in frontier:
            for g in gens:
                p = tuple(g[q[i]] for i in range(degree))
                if p not in index:
                    if len(elems) >= bound:
                        raise ClosureOverflow(f"closure exceeds {bound} elements")
                    index[p] = len(elems)
                    elems.append(p)
                    nxt.append(p)
        frontier = nxt
    n = len(elems)
    if n > MAX_ORDER:
        raise NotAGroup(f"order {n} exceeds the supported bound {MAX_ORDER}")
    table = np.zeros((n, n), dtype=np.int64)
    for a, p in enumerate(elems):
        for b, q in enumerate(elems):
            table[a, b] = index[tuple(p[q[i]] for i in range(degree))]
    gen_idx = [index[g] for g in gens]
    labels = [str(p) for p in elems]
    _validate_table(table)
    return FiniteGroup(table, name=name, generators=gen_idx, labels=labels)


def cyclic_group(n: int) -> FiniteGroup:
    """Z/n with element i at index i.

    >>> cyclic_group(4).mul(3, 2)
    1
    """
    if n < 1:
        raise NotAGroup("order must be >= 1")
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    return FiniteGroup(
        table.astype(np.int64),
        name=f"Z/{n}",
        generators=[1] if n > 1 else None,
        labels=[str(i) for i in range(n)],
    )


def abelian_group(moduli) -> FiniteGroup:
    """Direct sum of cyclic groups Z/m, elements indexed in mixed radix.

    The coordinate tuple of index i has the last modulus varying fastest.
    """
    moduli = [int(m) for m in moduli]
    if not moduli:
        return cyclic_group(1)
    for m in moduli:
        if m < 1:
            raise NotAGroup("moduli must be >= 1")
    n = 1
    for m in moduli:
        n *= m
    if n > MAX_ORDER:
        raise NotAGroup(f"order {n} exceeds the supported bound {MAX_ORDER}")

    def to_tuple(i):
        out = []
        for m in reversed(moduli):
            out.append(i % m)
            i //= m
        return tuple(reversed(out))

    def to_index(t):
        i = 0
        for x, m in zip(t, moduli):
            i = i * m + (x % m)
        return i

    table = np.zeros((n, n), dtype=np.int64)
    tuples = [to_tuple(i) for i in range(n)]
    for a in range(n):
        for b in range(n):
            table[a, b] = to_index(
                tuple(x + y for x, y in zip(tuples[a], tuples[b]))
            )
    gens = [to_index(tuple(1 if j == k else 0 for j in range(len(moduli))))
            for k in range(len(moduli)) if moduli[k] > 1]
    return FiniteGroup(
        table,
        name=" x ".join(f"Z/{m}" for m in moduli),
        generators=gens or None,
        labels=[str(t) for t in tuples],
    )


def direct_product(G1: FiniteGroup, G2: FiniteGroup) -> FiniteGroup:
    """G1 x G2 with (a, b) at index a*|G2| + b."""
    n1, n2 = G1.n, G2.n
    if n1 * n2 > MAX_ORDER:
        raise NotAGroup(f"order {n1 * n2} exceeds the supported bound {MAX_ORDER}")
    a = np.arange(n1)
    b = np.arange(n2)
    table = (
        G1.table[np.repeat(a, n2)][:, np.repeat(a, n2)] * n2
        + G2.table[np.tile(b, n1)][:, np.tile(b, n1)]
    )
    labels = None
    if G1.labels and G2.labels:
        labels = [f"({G1.labels[i]},{G2.labels[j]})" for i in range(n1) for j in range(n2)]
    name = None
    if G1.name and G2.name:
        name = f"({G1.name}) x ({G2.name})"
    return FiniteGroup(table.astype(np.int64), name=name, labels=labels)


def subgroup(G: FiniteGroup, elements) -> tuple[FiniteGroup, list[int]]:
    """The subgroup on the given element indices, plus its embedding.

    elements must be closed and contain the identity; the returned
    embedding maps subgroup indices to G indices (identity first).
    """
    elems = sorted(set(int(e) for e in elements))
    if not elems or elems[0] != 0:
        raise NotAGroup("subgroup must contain the identity (index 0)")
    pos = {e: i for i, e in enumerate(elems)}
    k = len(elems)
    table = np.zeros((k, k), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            ab = G.mul(a, b)
            if ab not in pos:
                raise NotAGroup(f"subset not closed: {a}*{b} escapes")
            table[i, j] = pos[ab]
    labels = [G.label(e) for e in elems] if G.labels else None
    H = FiniteGroup(table, labels=labels)
    return H, elems


class GroupHom:
    """A homomorphism given by its image table, validated on all pairs."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images):
        images = [int(v) for v in images]
        if len(images) != source.n:
            raise ValueError("image table has wrong length")
        if images[0] != 0:
            raise ValueError("homomorphism must send identity to identity")
        for a in range(source.n):
            for b in range(source.n):
                if target.mul(images[a], images[b]) != images[source.mul(a, b)]:
                    raise ValueError(f"not a homomorphism at ({a},{b})")
        self.source = source
        self.target = target
        self.images = images

    def __call__(self, a: int) -> int:
        return self.images[a]


class AbelianStructure:
    """Invariant-factor coordinates for a finite abelian group.

    fp: the FpAbGroup; to_coords(index) and from_coords(tuple) realize the
    isomorphism, with coordinate i reduced mod fp.invariant_factors[i].
    """

    __slots__ = ("group", "fp", "_coords", "_index")

    def __init__(self, group: FiniteGroup, fp: FpAbGroup, coords: list[tuple]):
        self.group = group
        self.fp = fp
        self._coords = coords
        self._index = {c: i for i, c in enumerate(coords)}

    def to_coords(self, idx: int) -> tuple:
        return self._coords[idx]

    def from_coords(self, coords) -> int:
        key = tuple(
            int(c) % d for c, d in zip(coords, self.fp.invariant_factors)
        )
        return self._index[key]

    @property
    def moduli(self) -> tuple:
        return self.fp.invariant_factors


def abelian_invariants(G: FiniteGroup) -> AbelianStructure:
    """Invariant factors of an abelian group, with the isomorphism.

    Builds a triangular relation lattice over a greedy generating set
    (for each new generator, the least power landing in the previous
    subgroup, with a witness expression), then Smith-reduces it.

    >>> abelian_invariants(direct_product(cyclic_group(2), cyclic_group(3))).fp
    FpAbGroup(0, (6,))
    """
    w = G.commuting_witness()
    if w is not None:
        raise NotAbelian(f"elements {w[0]} and {w[1]} do not commute")
    gens: list[int] = []
    # expr[x] = exponent tuple over gens with product x
    expr = {0: ()}
    for x in range(G.n):
        if x in expr:
            continue
        k = len(gens)
        gens.append(x)
        # extend expressions by powers of x
        new_expr = {}
        p, e = 0, 0
        while True:
            for h, ex in expr.items():
                y = G.mul(h, p)
                if y not in expr and y not in new_expr:
                    new_expr[y] = tuple(ex) + (e,)
            p = G.mul(p, x)
            e += 1
            if p == 0:
                break
        for h, ex in expr.items():
            new_expr.setdefault(h, tuple(ex) + (0,))
        expr = {h: ex for h, ex in new_expr.items()}
    k = len(gens)
    expr = {h: tuple(ex) + (0,) * (k - len(ex)) for h, ex in expr.items()}
    assert len(expr) == G.n

    # triangular relation rows: m_i g_i = combination of earlier gens
    rows = []
    for i, g in enumerate(gens):
        # enumerate the subgroup generated by earlier gens with expressions
        prev = {0: tuple([0] * i)}
        frontier = [0]
        while frontier:
            nxt = []
            for h0 in frontier:
                for j in range(i):
                    h1 = G.mul(h0, gens[j])
                    if h1 not in prev:
                        e0 = list(prev[h0])
                        e0[j] += 1
                        prev[h1] = tuple(e0)
                        nxt.append(h1)
            frontier = nxt
        m, p = 1, g
        while p not in prev:
            p = G.mul(p, g)
            m += 1
        row = [0] * k
        row[i] = m
        for j, c in enumerate(prev[p]):
            row[j] -= c
        rows.append(row)
    if rows:
        R = np.array(rows, dtype=object).T  # columns are relations
    else:
        R = np.zeros((0, 0), dtype=object)
    s = smith_normal_form(R)
    diag = list(s.divisors) + [0] * (k - s.rank)
    keep = [i for i, d in enumerate(diag) if d != 1]
    factors = [diag[i] for i in keep]
    assert all(d != 0 for d in factors), "abelian group relations must be full rank"
    fp = FpAbGroup.from_factors(factors)

    coords = []
    for x in range(G.n):
        a = np.array(expr[x], dtype=object)
        z = s.U @ a
        coords.append(tuple(int(z[i]) % diag[i] for i in keep))
    return AbelianStructure(G, fp, coords)


class GModule:
    """A finite abelian group with a left action of G by matrices.

    moduli: invariant factors of the underlying group (free rank 0).
    matrices[g]: integer matrix acting on coordinate columns; identities
    A_e = I and A_g A_h = A_{gh} (mod moduli) are validated, as is
    well-definedness A[i][j]*d_j = 0 mod d_i.
    """

    __slots__ = ("group", "moduli", "matrices")

    def __init__(self, group: FiniteGroup, moduli, matrices, check: bool = True):
        self.group = group
        self.moduli = tuple(int(d) for d in moduli)
        r = len(self.moduli)
        mats = []
        for g in range(group.n):
            A = np.asarray(matrices[g], dtype=object) % np.array(
                [[d] for d in self.moduli], dtype=object
            ) if r else np.zeros((0, 0), dtype=object)
            if A.shape != (r, r):
                raise ValueError(f"matrix for element {g} has shape {A.shape}")
            mats.append(A)
        self.matrices = mats
        if check:
            self._validate()

    def _validate(self):
        r = len(self.moduli)
        if r == 0:
            return
        for i in range(r):
            for j in range(r):
                for g in range(self.group.n):
                    if (int(self.matrices[g][i, j]) * self.moduli[j]) % self.moduli[i]:
                        raise ValueError(
                            f"action matrix of {g} not well defined at ({i},{j})"
                        )
        ident = np.eye(r, dtype=object)
        if not self._eq_mod(self.matrices[0], ident):
            raise ValueError("identity does not act as the identity matrix")
        pairs = (
            [(a, b) for a in range(self.group.n) for b in range(self.group.n)]
            if self.group.n <= 64
            else [
                (a, b)
                for a in (self.group.generators or range(self.group.n))
                for b in (self.group.generators or range(self.group.n))
            ]
        )
        for a, b in pairs:
            if not self._eq_mod(
                self.matrices[a] @ self.matrices[b], self.matrices[self.group.mul(a, b)]
            ):
                raise ValueError(f"A_{a} A_{b} != A_({a}{b}) on the module")

    def _eq_mod(self, A, B) -> bool:
        for i, d in enumerate(self.moduli):
            for j in range(len(self.moduli)):
                if (int(A[i, j]) - int(B[i, j])) % d:
                    return False
        return True

    def act(self, g: int, vec):
        out = self.matrices[g] @ np.asarray(vec, dtype=object)
        return np.array(
            [int(v) % d for v, d in zip(out, self.moduli)], dtype=object
        )

    @property
    def fp(self) -> FpAbGroup:
        return FpAbGroup.from_factors(self.moduli)


def trivial_module(group: FiniteGroup, moduli) -> GModule:
    r = len(tuple(moduli))
    ident = np.eye(r, dtype=object)
    return GModule(group, moduli, [ident] * group.n, check=False)


def module_from_matrices(group: FiniteGroup, moduli, matrices) -> GModule:
    return GModule(group, moduli, matrices)


def dual_module(M: GModule) -> GModule:
    """Character module with the contragredient action (g.chi) = chi(g^-1 .).

    For a module recording a right action via A_g = (x -> x <| g^-1), the
    dual action matrix of g is dual_of_map(A_{g^-1}), so (g.chi)(x) =
    chi(x <| g). Torsion is self-dual, so the moduli are unchanged.
    """
    mats = []
    for g in range(M.group.n):
        ginv = M.group.inverse(g)
        try:
            mats.append(dual_of_map(M.matrices[ginv], M.moduli, M.moduli))
        except ValueError as e:
            raise ActionNotByAutomorphisms(str(e)) from e
    try:
        return GModule(M.group, M.moduli, mats)
    except ValueError as e:
        raise ActionNotByAutomorphisms(str(e)) from e


def exterior_square(V: GModule) -> GModule:
    """Wedge square with basis e_i ^ e_j (i < j), moduli gcd(d_i, d_j).

    The induced action sends e_i ^ e_j to (A e_i) ^ (A e_j), with the
    coefficient on e_k ^ e_l equal to A[k,i]A[l,j] - A[l,i]A[k,j].
    """
    r = len(V.moduli)
    pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
    moduli = [gcd(V.moduli[i], V.moduli[j]) for i, j in pairs]
    keep = [p for p, m in zip(pairs, moduli) if m > 1]
    kept_moduli = [m for m in moduli if m > 1]
    mats = []
    for g in range(V.group.n):
        A = V.matrices[g]
        W = np.zeros((len(keep), len(keep)), dtype=object)
        for col, (i, j) in enumerate(keep):
            for row, (k, l) in enumerate(keep):
                W[row, col] = int(A[k, i]) * int(A[l, j]) - int(A[l, i]) * int(A[k, j])
        mats.append(W)
    return GModule(V.group, kept_moduli, mats)


class GSet:
    """A finite set with a validated group action, marked left or right."""

    __slots__ = ("sigma", "size", "side", "table")

    def __init__(self, sigma: FiniteGroup, table, side: str = "left"):
        table = np.asarray(table, dtype=np.int64)
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        n, m = table.shape
        if n != sigma.n:
            raise ValueError("action table has wrong number of rows")
        if table.min() < 0 or table.max() >= m:
            raise ValueError("action table entries out of range")
        if not np.array_equal(table[0], np.arange(m)):
            raise ValueError("identity does not act as the identity")
        for a in range(n):
            for b in range(n):
                ab = sigma.mul(a, b)
                # left: (ab).x = a.(b.x); right: x.(ab) = (x.a).b
                want = table[a][table[b]] if side == "left" else table[b][table[a]]
                if not np.array_equal(table[ab], want):
                    raise ValueError(f"action not associative at ({a},{b})")
        self.sigma = sigma
        self.size = m
        self.side = side
        self.table = table

    def act(self, g: int, x: int) -> int:
        return int(self.table[g, x])


def orbit_stabilizer(X: GSet, x: int):
    """(orbit as sorted list, (stabilizer group, embedding into sigma)).

    |orbit| * |stabilizer| = |sigma| is asserted.
    """
    orbit = sorted(set(int(X.table[g, x]) for g in range(X.sigma.n)))
    stab = [g for g in range(X.sigma.n) if X.table[g, x] == x]
    H, emb = subgroup(X.sigma, stab)
    assert len(orbit) * H.n == X.sigma.n
    return orbit, (H, emb)


if __name__ == "__main__":
    import doctest

    doctest.testmod()
