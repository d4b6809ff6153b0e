"""Exact linear algebra over Z, Z/N, and the circle group Q/Z.

Everything here is deterministic and exact. Integer matrices are numpy
arrays of dtype object (arbitrary precision Python ints) or bounded int64
residues; circle values are `fractions.Fraction` residues mod 1. The
homology pipeline (`dual_homology`) presents H_k = ker/im of an integer
chain complex segment through its Pontryagin dual, with representative
cocycles whose denominators are read off the invariant factors rather
than guessed.

The quotient step works modulo an exponent bound N. That is sound
whenever N * H_k = 0 (for coinvariant complexes of free resolutions in
degrees >= 1, N = group order works by the transfer argument): reducing
an entry mod N only ever adds a relation vector from N*Z^r, which is
already in the divisor lattice.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, prod
import heapq

import numpy as np

__all__ = [
    "FpAbGroup",
    "DualGroup",
    "SmithForm",
    "smith_normal_form",
    "snf_mod",
    "kernel_basis",
    "column_basis",
    "solve_congruence",
    "solve_over_circle",
    "homology",
    "Presentation",
    "pontryagin_dual",
    "dual_of_map",
    "SparseCols",
    "reduce_pair",
    "Reduction",
    "dual_homology",
    "DualClasses",
    "frac1",
]


def frac1(x) -> Fraction:
    """Reduce a rational to its residue in [0, 1), the additive circle.

    >>> frac1(Fraction(7, 4))
    Fraction(3, 4)
    >>> frac1(-2)
    Fraction(0, 1)
    """
    f = Fraction(x)
    return f - (f.numerator // f.denominator)


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class FpAbGroup:
    """A finitely generated abelian group in invariant factor form.

    free_rank copies of Z followed by Z/d_1 + ... + Z/d_r with
    2 <= d_1 | d_2 | ... | d_r. Elements are integer coordinate vectors of
    length free_rank + r, free coordinates first.

    >>> FpAbGroup(0, (2, 4)).order()
    8
    >>> str(FpAbGroup(1, (3,)))
    'Z + Z/3'
    >>> FpAbGroup.from_factors([6, 4]) == FpAbGroup(0, (2, 12))
    True
    """

    __slots__ = ("free_rank", "invariant_factors")

    def __init__(self, free_rank: int = 0, invariant_factors=()):
        factors = tuple(int(d) for d in invariant_factors)
        for d in factors:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(factors, factors[1:]):
            if b % a != 0:
                raise ValueError(f"invariant factors {factors} not a divisor chain")
        self.free_rank = int(free_rank)
        self.invariant_factors = factors

    @classmethod
    def from_factors(cls, moduli, free_rank: int = 0) -> "FpAbGroup":
        """Canonicalize an arbitrary list of cyclic orders into chain form."""
        by_prime: dict[int, list[int]] = {}
        for m in moduli:
            m = int(m)
            if m == 0:
                free_rank += 1
                continue
            if m < 0:
                m = -m
            if m == 1:
                continue
            for p, e in _factorize(m).items():
                by_prime.setdefault(p, []).append(e)
        slots = max((len(v) for v in by_prime.values()), default=0)
        chain = []
        for j in range(slots):
            d = 1
            for p, exps in by_prime.items():
                exps_sorted = sorted(exps, reverse=True)
                if j < len(exps_sorted):
                    d *= p ** exps_sorted[j]
            chain.append(d)
        return cls(free_rank, tuple(sorted(chain)))

    def order(self):
        """Group order, or None when there is a free part."""
        if self.free_rank:
            return None
        return prod(self.invariant_factors) if self.invariant_factors else 1

    def exponent(self):
        if self.free_rank:
            return None
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def rank(self) -> int:
        return self.free_rank + len(self.invariant_factors)

    def direct_sum(self, other: "FpAbGroup") -> "FpAbGroup":
        return FpAbGroup.from_factors(
            list(self.invariant_factors) + list(other.invariant_factors),
            self.free_rank + other.free_rank,
        )

    def __eq__(self, other):
        if not isinstance(other, FpAbGroup):
            return NotImplemented
        return (self.free_rank, self.invariant_factors) == (
            other.free_rank,
            other.invariant_factors,
        )

    def __hash__(self):
        return hash((self.free_rank, self.invariant_factors))

    def __repr__(self):
        return f"FpAbGroup({self.free_rank}, {self.invariant_factors})"

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"


class DualGroup:
    """Pontryagin dual of an FpAbGroup.

    Torsion is self-dual; each Z summand dualizes to a circle summand,
    reported separately in `circle_rank`.
    """

    __slots__ = ("circle_rank", "torsion")

    def __init__(self, circle_rank: int, torsion: FpAbGroup):
        self.circle_rank = circle_rank
        self.torsion = torsion

    def __eq__(self, other):
        if not isinstance(other, DualGroup):
            return NotImplemented
        return (self.circle_rank, self.torsion) == (other.circle_rank, other.torsion)

    def __repr__(self):
        return f"DualGroup({self.circle_rank}, {self.torsion!r})"

    def __str__(self):
        parts = ["Q/Z"] * self.circle_rank
        if not self.torsion.is_trivial:
            parts.append(str(self.torsion))
        return " + ".join(parts) if parts else "0"


def pontryagin_dual(group: FpAbGroup) -> DualGroup:
    """Dual of a finitely generated abelian group.

    >>> str(pontryagin_dual(FpAbGroup(0, (2, 4))))
    'Z/2 + Z/4'
    """
    return DualGroup(group.free_rank, FpAbGroup(0, group.invariant_factors))


def dual_of_map(T, src_moduli, dst_moduli) -> np.ndarray:
    """Matrix of the dual homomorphism between finite coordinate groups.

    T maps (+) Z/src_i -> (+) Z/dst_j by y = T x. The dual map sends a
    character with coordinates c (c_j against Z/dst_j) to coordinates
    c'_i = sum_j (T[j,i] * src_i / dst_j) * c_j. Well-definedness needs
    dst_j | T[j,i] * src_i, which is checked.

    >>> dual_of_map(np.array([[2]], dtype=object), [4], [4])
    array([[2]], dtype=object)
    """
    T = np.asarray(T, dtype=object)
    rows = len(dst_moduli)
    cols = len(src_moduli)
    if T.shape != (rows, cols):
        raise ValueError(f"shape {T.shape} does not match moduli ({rows},{cols})")
    out = np.zeros((cols, rows), dtype=object)
    for i in range(cols):
        for j in range(rows):
            num = int(T[j, i]) * int(src_moduli[i])
            if num % int(dst_moduli[j]) != 0:
                raise ValueError(
                    f"map not well defined: dst modulus {dst_moduli[j]} does not "
                    f"divide T[{j},{i}]*src[{i}] = {num}"
                )
            out[i, j] = (num // int(dst_moduli[j])) % int(src_moduli[i])
    return out


# ---------------------------------------------------------------------------
# Smith normal form


def _eye(n: int, dtype) -> np.ndarray:
    M = np.zeros((n, n), dtype=dtype)
    for i in range(n):
        M[i, i] = 1
    return M


class SmithForm:
    """Result of U @ A @ V = D with U, V unimodular and D diagonal.

    divisors is the nonzero diagonal (a divisor chain), rank its length.
    Inverse transforms are tracked so kernels and coordinates come out
    without extra solves: kernel basis = V[:, rank:], and the kernel
    coordinates of a vector w are (Vinv @ w)[rank:].
    """

    __slots__ = ("D", "U", "Uinv", "V", "Vinv", "rank", "divisors", "shape", "mod")

    def __init__(self, D, U, Uinv, V, Vinv, rank, divisors, shape, mod):
        self.D = D
        self.U = U
        self.Uinv = Uinv
        self.V = V
        self.Vinv = Vinv
        self.rank = rank
        self.divisors = divisors
        self.shape = shape
        self.mod = mod

    def verify(self, A) -> None:
        """Assert the defining identities (test helper, exact case only)."""
        A = np.asarray(A, dtype=object)
        assert self.mod is None
        r, c = self.shape
        assert np.array_equal(self.U @ A @ self.V, self.D)
        assert np.array_equal(self.U @ self.Uinv, _eye(r, object))
        assert np.array_equal(self.V @ self.Vinv, _eye(c, object))


def _balanced(v: int, mod: int) -> int:
    v %= mod
    return v - mod if 2 * v > mod else v


def _snf_engine(A, mod=None, want_uv=(True, True)):
    """Shared Smith normal form engine.

    mod=None: exact over Z, object dtype. mod=N: entries kept reduced in
    [0, N); elementary operations are still integer row/column operations,
    so the result describes the column lattice together with N*Z^r.

    want_uv = (track row transforms, track column transforms).
    """
    want_u, want_v = want_uv
    if mod is None:
        M = np.array(A, dtype=object, copy=True)
    else:
        M = np.asarray(A)
        M = np.remainder(np.array(M, dtype=np.int64, copy=True), mod)
    r, c = M.shape
    dt = object if mod is None else np.int64
    U = _eye(r, dt) if want_u else None
    Uinv = _eye(r, dt) if want_u else None
    V = _eye(c, dt) if want_v else None
    Vinv = _eye(c, dt) if want_v else None

    def lift(x):
        return x if mod is None else _balanced(int(x), mod)

    def red_rows(idx):
        if mod is not None:
            M[idx, :] %= mod
            if want_u:
                U[idx, :] %= mod

    def row_sub(i, t, q):
        # R_i -= q R_t
        M[i, :] -= q * M[t, :]
        if want_u:
            U[i, :] -= q * U[t, :]
            Uinv[:, t] += q * Uinv[:, i]
        if mod is not None:
            M[i, :] %= mod
            if want_u:
                U[i, :] %= mod
                Uinv[:, t] %= mod

    def col_sub(j, t, q):
        # C_j -= q C_t
        M[:, j] -= q * M[:, t]
        if want_v:
            V[:, j] -= q * V[:, t]
            Vinv[t, :] += q * Vinv[j, :]
        if mod is not None:
            M[:, j] %= mod
            if want_v:
                V[:, j] %= mod
                Vinv[t, :] %= mod

    def row_swap(i, t):
        if i == t:
            return
        M[[i, t], :] = M[[t, i], :]
        if want_u:
            U[[i, t], :] = U[[t, i], :]
            Uinv[:, [i, t]] = Uinv[:, [t, i]]

    def col_swap(j, t):
        if j == t:
            return
        M[:, [j, t]] = M[:, [t, j]]
        if want_v:
            V[:, [j, t]] = V[:, [t, j]]
            Vinv[[j, t], :] = Vinv[[t, j], :]

    def row_neg(i):
        M[i, :] = -M[i, :]
        if want_u:
            U[i, :] = -U[i, :]
            Uinv[:, i] = -Uinv[:, i]
        if mod is not None:
            M[i, :] %= mod
            if want_u:
                U[i, :] %= mod
                Uinv[:, i] %= mod

    n = min(r, c)
    t = 0
    while t < n:
        sub = M[t:, t:]
        nz = np.nonzero(sub)
        if len(nz[0]) == 0:
            break
        vals = sub[nz]
        best = min(range(len(vals)), key=lambda k: abs(lift(vals[k])))
        bi, bj = int(nz[0][best]) + t, int(nz[1][best]) + t
        row_swap(bi, t)
        col_swap(bj, t)
        while True:
            # clear column t below the pivot
            progressed = True
            while progressed:
                progressed = False
                pivot = lift(M[t, t])
                col = M[t + 1 :, t]
                live = np.nonzero(col)[0]
                for off in live:
                    i = t + 1 + int(off)
                    e = lift(M[i, t])
                    q = (2 * e + pivot) // (2 * pivot) if pivot > 0 else -(
                        (2 * e - pivot) // (-2 * pivot)
                    )
                    if q:
                        row_sub(i, t, q)
                col = M[t + 1 :, t]
                live = np.nonzero(col)[0]
                if len(live):
                    best = min(live, key=lambda k: abs(lift(col[int(k)])))
                    row_swap(t + 1 + int(best), t)
                    progressed = True
            # clear row t right of the pivot
            progressed = True
            row_touched = False
            while progressed:
                progressed = False
                pivot = lift(M[t, t])
                rowv = M[t, t + 1 :]
                live = np.nonzero(rowv)[0]
                for off in live:
                    j = t + 1 + int(off)
                    e = lift(M[t, j])
                    q = (2 * e + pivot) // (2 * pivot) if pivot > 0 else -(
                        (2 * e - pivot) // (-2 * pivot)
                    )
                    if q:
                        col_sub(j, t, q)
                        row_touched = True
                rowv = M[t, t + 1 :]
                live = np.nonzero(rowv)[0]
                if len(live):
                    best = min(live, key=lambda k: abs(lift(rowv[int(k)])))
                    col_swap(t + 1 + int(best), t)
                    progressed = True
                    row_touched = True
            if row_touched and np.count_nonzero(M[t + 1 :, t]):
                continue
            # pivot must divide the rest of the block for the divisor chain
            pivot = lift(M[t, t])
            if abs(pivot) != 1 and t + 1 < n:
                block = M[t + 1 :, t + 1 :]
                bad = np.nonzero(block % abs(pivot))
                if len(bad[0]):
                    i = t + 1 + int(bad[0][0])
                    row_sub(t, i, -1)  # R_t += R_i
                    continue
            break
        if lift(M[t, t]) < 0:
            row_neg(t)
        t += 1

    rank = t
    divisors = []
    for i in range(rank):
        d = int(M[i, i]) if mod is None else int(M[i, i]) % mod
        divisors.append(d)
    return SmithForm(M, U, Uinv, V, Vinv, rank, tuple(divisors), (r, c), mod)


def smith_normal_form(A, want_uv=(True, True)) -> SmithForm:
    """Exact Smith normal form over Z with tracked transforms.

    >>> s = smith_normal_form(np.array([[2, 4], [6, 8]], dtype=object))
    >>> s.divisors
    (2, 4)
    >>> s = smith_normal_form(np.array([[2, 0], [0, 3]], dtype=object))
    >>> s.divisors
    (1, 6)
    """
    return _snf_engine(np.asarray(A, dtype=object), mod=None, want_uv=want_uv)


def snf_mod(A, N: int, want_uv=(True, False)) -> SmithForm:
    """Smith form of [A | N*I] computed with entries reduced mod N.

    The diagonal entries are residues; gcd with N gives the invariant
    factors of Z^r / (col A + N Z^r). The divisor chain property survives
    the gcd because it holds for the residue chain.
    """
    if N <= 0:
        raise ValueError("modulus must be positive")
    return _snf_engine(A, mod=int(N), want_uv=want_uv)


def kernel_basis(A) -> np.ndarray:
    """Columns form a basis of the integer kernel lattice of A.

    >>> kernel_basis(np.array([[1, 1]], dtype=object)).T
    array([[-1, 1]], dtype=object)
    """
    A = np.asarray(A, dtype=object)
    s = smith_normal_form(A, want_uv=(False, True))
    return s.V[:, s.rank :]


def column_basis(A) -> np.ndarray:
    """Columns form a basis of the column lattice of A (full column rank)."""
    A = np.asarray(A, dtype=object)
    s = smith_normal_form(A, want_uv=(True, False))
    basis = np.zeros((A.shape[0], s.rank), dtype=object)
    for i in range(s.rank):
        basis[:, i] = s.Uinv[:, i] * s.divisors[i]
    return basis


def solve_congruence(A, b, moduli=None):
    """Solve A x = b with each row i read modulo moduli[i] (0 = exact).

    Returns an integer solution vector, or None when none exists. The
    certificate of unsolvability is the Smith form itself: a row of U@b
    outside the divisor pattern.

    >>> solve_congruence(np.array([[2]], dtype=object), [1], [4]) is None
    True
    >>> x = solve_congruence(np.array([[2]], dtype=object), [2], [4])
    >>> x[0] % 2
    1
    """
    A = np.asarray(A, dtype=object)
    r, c = A.shape
    b = np.asarray(b, dtype=object).reshape(r)
    extra = []
    if moduli is not None:
        for i, m in enumerate(moduli):
            if int(m) != 0:
                col = np.zeros(r, dtype=object)
                col[i] = int(m)
                extra.append(col)
    if extra:
        A2 = np.concatenate([A, np.stack(extra, axis=1)], axis=1)
    else:
        A2 = A
    s = smith_normal_form(A2, want_uv=(True, True))
    cvec = s.U @ b
    y = np.zeros(A2.shape[1], dtype=object)
    for i in range(s.rank):
        q, rem = divmod(int(cvec[i]), s.divisors[i])
        if rem:
            return None
        y[i] = q
    for i in range(s.rank, r):
        if cvec[i] != 0:
            return None
    x = s.V @ y
    return x[:c]


def solve_over_circle(A, b):
    """Solve A x = b over Q/Z (A integer, b a vector of Fractions).

    Returns a Fraction solution vector (not reduced mod 1) or None. By
    Smith reduction the solution denominators divide d_i * den(b), so
    they are read off the elementary divisors, never guessed.

    >>> x = solve_over_circle(np.array([[2]], dtype=object), [Fraction(1, 2)])
    >>> frac1(2 * x[0] - Fraction(1, 2))
    Fraction(0, 1)
    """
    A = np.asarray(A, dtype=object)
    r, c = A.shape
    b = np.array([Fraction(v) for v in b], dtype=object).reshape(r)
    s = smith_normal_form(A, want_uv=(True, True))
    cvec = s.U @ b
    z = np.zeros(c, dtype=object)
    for i in range(s.rank):
        z[i] = Fraction(cvec[i], s.divisors[i])
    for i in range(s.rank, r):
        if Fraction(cvec[i]).denominator != 1:
            return None
    x = s.V @ z
    return np.array([Fraction(v) for v in x], dtype=object)


class CircleSolver:
    """Smith data of one integer matrix, reused to solve A x = b over Q/Z.

    Factoring dominates the one-shot solver, so batch callers factor once
    and solve many times. Consistency of each candidate is certified by
    substituting it back through the sparse columns instead of through the
    dropped rows of U, keeping a solve linear in the nonzero entries plus
    one small triangular step.
    """

    __slots__ = ("_sp", "_Utop", "_V", "_divisors", "_rank", "nrows", "ncols")

    def __init__(self, A):
        self._sp = _as_sparse(A)
        dense = self._sp.to_dense()
        self.nrows, self.ncols = dense.shape
        s = smith_normal_form(dense, want_uv=(True, True))
        self._Utop = s.U[:s.rank]
        self._V = s.V
        self._divisors = s.divisors
        self._rank = s.rank

    def solve(self, b):
        """A solution vector of Fractions (not reduced mod 1), or None."""
        b = np.array([Fraction(v) for v in b], dtype=object).reshape(self.nrows)
        z = np.zeros(self.ncols, dtype=object)
        if self._rank:
            cvec = self._Utop @ b
            for i in range(self._rank):
                z[i] = Fraction(cvec[i], self._divisors[i])
        x = np.array([Fraction(v) for v in (self._V @ z)], dtype=object)
        residual = [-v for v in b]
        for j, col in enumerate(self._sp.cols):
            xv = x[j]
            if xv:
                for i, c in col.items():
                    residual[i] += c * xv
        if any(frac1(v) != 0 for v in residual):
            return None
        return x


# ---------------------------------------------------------------------------
# Homology of finitely presented abelian groups


class Presentation:
    """Witness for a homology(...)  computation.

    Holds the kernel basis and quotient Smith data so that elements can be
    classified (class_of) and classes realized (representative).
    Coordinate convention: free coordinates first, then torsion
    coordinates in invariant factor order.
    """

    __slots__ = ("group", "_BK", "_snf_bk", "_sy", "_tor_rows", "_free_rows", "_amb")

    def __init__(self, group, BK, snf_bk, sy, tor_rows, free_rows, amb):
        self.group = group
        self._BK = BK
        self._snf_bk = snf_bk
        self._sy = sy
        self._tor_rows = tor_rows
        self._free_rows = free_rows
        self._amb = amb

    def class_of(self, x) -> tuple:
        """Coordinates of an ambient vector that lies in the kernel."""
        x = np.asarray(x, dtype=object).reshape(self._amb)
        s = self._snf_bk
        cvec = s.U @ x
        ztmp = np.zeros(self._BK.shape[1], dtype=object)
        for i in range(s.rank):
            q, rem = divmod(int(cvec[i]), s.divisors[i])
            if rem:
                raise ValueError("vector not in the kernel lattice")
            ztmp[i] = q
        for i in range(s.rank, self._amb):
            if cvec[i] != 0:
                raise ValueError("vector not in the kernel lattice")
        w = s.V @ ztmp
        z = self._sy.U @ w if self._sy is not None else w
        coords = [int(z[i]) for i in self._free_rows]
        for i, d in self._tor_rows:
            coords.append(int(z[i]) % d)
        return tuple(coords)

    def representative(self, coords) -> np.ndarray:
        """An ambient vector whose class has the given coordinates."""
        coords = list(coords)
        k = self._BK.shape[1]
        z = np.zeros(k, dtype=object)
        nf = len(self._free_rows)
        if len(coords) != nf + len(self._tor_rows):
            raise ValueError("coordinate length mismatch")
        for c, i in zip(coords[:nf], self._free_rows):
            z[i] = int(c)
        for c, (i, _d) in zip(coords[nf:], self._tor_rows):
            z[i] = int(c)
        w = self._sy.Uinv @ z if self._sy is not None else z
        return self._BK @ w

    def generators(self) -> list:
        """Ambient representative vectors of the canonical generators."""
        n = self.group.rank()
        out = []
        for j in range(n):
            coords = [0] * n
            coords[j] = 1
            out.append(self.representative(coords))
        return out


def homology(f, g, moduli, target_moduli=None):
    """ker(g)/im(f) inside the presented group (+)_i Z/moduli[i].

    f: matrix into the middle group (columns are image generators), or
    None for zero. g: matrix out of the middle group, or None for zero;
    its target carries target_moduli (0 = free, default all zero).
    moduli[i] = 0 marks a free Z coordinate of the middle group.

    Returns (FpAbGroup, Presentation).

    >>> grp, _ = homology(np.array([[4]], dtype=object), None, [0])
    >>> str(grp)
    'Z/4'
    """
    moduli = [int(m) for m in moduli]
    a = len(moduli)
    if g is None:
        g = np.zeros((0, a), dtype=object)
    g = np.asarray(g, dtype=object)
    if g.shape[1] != a:
        raise ValueError("g has wrong number of columns")
    p = g.shape[0]
    if target_moduli is None:
        target_moduli = [0] * p
    target_moduli = [int(m) for m in target_moduli]

    # well-definedness of g on the presented middle group
    for j, m in enumerate(moduli):
        if m == 0:
            continue
        for i in range(p):
            v = int(g[i, j]) * m
            tm = target_moduli[i]
            if (tm == 0 and v != 0) or (tm != 0 and v % tm != 0):
                raise ValueError("g is not well defined on the presented group")

    # kernel lattice of the induced map, as a sublattice of Z^a
    extra = []
    for i, tm in enumerate(target_moduli):
        if tm != 0:
            col = np.zeros(p, dtype=object)
            col[i] = tm
            extra.append(col)
    B = np.concatenate([g] + ([np.stack(extra, axis=1)] if extra else []), axis=1)
    kb = kernel_basis(B)[:a, :]
    span = [kb]
    for j, m in enumerate(moduli):
        if m != 0:
            col = np.zeros((a, 1), dtype=object)
            col[j, 0] = m
            span.append(col)
    BK = column_basis(np.concatenate(span, axis=1)) if span else np.zeros((a, 0), object)
    k = BK.shape[1]
    snf_bk = smith_normal_form(BK, want_uv=(True, True))

    # image lattice generators, in kernel coordinates
    img = []
    if f is not None:
        f = np.asarray(f, dtype=object)
        if f.shape[0] != a:
            raise ValueError("f has wrong number of rows")
        img.append(f)
    for j, m in enumerate(moduli):
        if m != 0:
            col = np.zeros((a, 1), dtype=object)
            col[j, 0] = m
            img.append(col)
    if img:
        F = np.concatenate(img, axis=1)
        Y = np.zeros((k, F.shape[1]), dtype=object)
        for col in range(F.shape[1]):
            cvec = snf_bk.U @ F[:, col]
            ztmp = np.zeros(k, dtype=object)
            for i in range(snf_bk.rank):
                q, rem = divmod(int(cvec[i]), snf_bk.divisors[i])
                if rem:
                    raise ValueError("image does not lie in the kernel lattice")
                ztmp[i] = q
            for i in range(snf_bk.rank, a):
                if cvec[i] != 0:
                    raise ValueError("image does not lie in the kernel lattice")
            Y[:, col] = snf_bk.V @ ztmp
        sy = smith_normal_form(Y, want_uv=(True, True))
    else:
        sy = None

    tor_rows = []
    free_rows = []
    if sy is None:
        free_rows = list(range(k))
    else:
        for i in range(sy.rank):
            if sy.divisors[i] > 1:
                tor_rows.append((i, sy.divisors[i]))
        free_rows = list(range(sy.rank, k))
    group = FpAbGroup.from_factors([d for _, d in tor_rows], len(free_rows))
    # re-sort torsion rows so coordinates follow the canonical chain order
    tor_rows.sort(key=lambda t: t[1])
    return group, Presentation(group, BK, snf_bk, sy, tor_rows, free_rows, a)


# ---------------------------------------------------------------------------
# Sparse chain complex segments and discrete Morse reduction


class SparseCols:
    """A matrix stored column-wise as dicts {row: value}, exact ints."""

    __slots__ = ("nrows", "cols")

    def __init__(self, nrows: int, cols: list[dict[int, int]]):
        self.nrows = nrows
        self.cols = cols

    @property
    def ncols(self) -> int:
        return len(self.cols)

    @classmethod
    def from_dense(cls, A) -> "SparseCols":
        A = np.asarray(A)
        cols = []
        for j in range(A.shape[1]):
            col = {int(i): int(A[i, j]) for i in np.nonzero(A[:, j])[0]}
            cols.append(col)
        return cls(A.shape[0], cols)

    def to_dense(self) -> np.ndarray:
        M = np.zeros((self.nrows, self.ncols), dtype=object)
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                M[i, j] = v
        return M

    def deduped(self) -> "SparseCols":
        seen = set()
        out = []
        for col in self.cols:
            if not col:
                continue
            key = tuple(sorted(col.items()))
            if key not in seen:
                seen.add(key)
                out.append(col)
        return SparseCols(self.nrows, out)


def _as_sparse(M, nrows=None) -> SparseCols:
    if isinstance(M, SparseCols):
        return M
    return SparseCols.from_dense(M)


class Reduction:
    """Outcome of reduce_pair: a homotopy equivalent smaller segment.

    alive: sorted surviving row indices of the middle module C_k.
    stack: collapse records (sigma_row, eps, boundary items of tau at
    collapse time) in the order performed; cochain export replays them
    in reverse, assigning the removed coordinate so the restored
    boundary still pairs to zero.
    """

    __slots__ = ("n_full", "alive", "pos", "dk_cols", "dk1_cols", "stack")

    def __init__(self, n_full, alive, dk_cols, dk1_cols, stack):
        self.n_full = n_full
        self.alive = alive
        self.pos = {cell: idx for idx, cell in enumerate(alive)}
        self.dk_cols = dk_cols
        self.dk1_cols = dk1_cols
        self.stack = stack

    def restrict_cochain(self, f):
        return [f[cell] for cell in self.alive]

    def export_cochain(self, f_reduced):
        full = {cell: f_reduced[idx] for idx, cell in enumerate(self.alive)}
        for sigma, eps, items in reversed(self.stack):
            acc = Fraction(0)
            for row, v in items:
                if row != sigma:
                    acc += v * full[row]
            full[sigma] = frac1(-eps * acc)
        return np.array([full[i] for i in range(self.n_full)], dtype=object)

    def pad_cycle(self, w_reduced):
        out = np.zeros(self.n_full, dtype=object)
        for idx, cell in enumerate(self.alive):
            out[cell] = int(w_reduced[idx])
        return out


def reduce_pair(dk, dk1, n_k: int) -> Reduction:
    """Collapse unit entries of d_{k+1} (Gaussian chain reduction).

    dk: columns of d_k over C_k (may be None), dk1: columns of d_{k+1}
    into C_k. Removes pairs (tau in C_{k+1}, sigma in C_k) with
    <d tau, sigma> = +-1, Schur-updating the remaining columns of
    d_{k+1} and deleting the sigma column of d_k. Homology in degree k
    is preserved; transports are recorded on the Reduction.
    """
    dk1 = _as_sparse(dk1, n_k)
    cols: dict[int, dict[int, int]] = {j: dict(c) for j, c in enumerate(dk1.cols)}
    rows: dict[int, set[int]] = {i: set() for i in range(n_k)}
    for j, col in cols.items():
        for i in col:
            rows[i].add(j)

    heap = []
    for j, col in cols.items():
        for i, v in col.items():
            if v == 1 or v == -1:
                heap.append((min(len(rows[i]), 8) * min(len(col), 8), j, i))
    heapq.heapify(heap)

    dead_rows: set[int] = set()
    dead_cols: set[int] = set()
    stack = []
    while heap:
        _, tj, si = heapq.heappop(heap)
        if tj in dead_cols or si in dead_rows:
            continue
        col = cols[tj]
        eps = col.get(si, 0)
        if eps not in (1, -1):
            continue
        tau_items = list(col.items())
        stack.append((si, eps, tau_items))
        dead_cols.add(tj)
        dead_rows.add(si)
        for i in col:
            rows[i].discard(tj)
        touched = [j for j in rows[si] if j not in dead_cols]
        for j in touched:
            target = cols[j]
            factor = eps * target.pop(si)
            rows[si].discard(j)
            for i, v in tau_items:
                if i == si:
                    continue
                nv = target.get(i, 0) - factor * v
                if nv == 0:
                    if i in target:
                        del target[i]
                        rows[i].discard(j)
                else:
                    had = i in target
                    target[i] = nv
                    if not had:
                        rows[i].add(j)
                    if nv == 1 or nv == -1:
                        heapq.heappush(
                            heap, (min(len(rows[i]), 8) * min(len(target), 8), j, i)
                        )
        rows.pop(si, None)

    alive = sorted(set(range(n_k)) - dead_rows)
    remap = {cell: idx for idx, cell in enumerate(alive)}
    new_dk1 = SparseCols(
        len(alive),
        [
            {remap[i]: v for i, v in cols[j].items()}
            for j in range(len(dk1.cols))
            if j not in dead_cols
        ],
    )
    if dk is not None:
        dk = _as_sparse(dk)
        new_dk = SparseCols(dk.nrows, [dict(dk.cols[cell]) for cell in alive])
    else:
        new_dk = None
    return Reduction(n_k, alive, new_dk, new_dk1, stack)


# ---------------------------------------------------------------------------
# Circle-dual homology of a chain complex segment


class DualClasses:
    """H^k(Hom(C, Q/Z)) = dual of H_k(C) for an N-torsion segment.

    group: invariant factor form (no free part; degree-0 style circle
    summands are out of scope here). cocycles[i]: Fraction values on the
    full C_k basis representing the i-th canonical generator.
    generator_cycles[i]: an integer cycle in C_k pairing to 1/g_i with
    cocycles[i] and to 0 with the others.
    """

    __slots__ = (
        "group",
        "cocycles",
        "generator_cycles",
        "_red",
        "_dk1",
        "_n_k",
        "_gens_reduced",
        "N",
    )

    def __init__(self, group, cocycles, generator_cycles, red, dk1, n_k, gens_reduced, N):
        self.group = group
        self.cocycles = cocycles
        self.generator_cycles = generator_cycles
        self._red = red
        self._dk1 = dk1
        self._n_k = n_k
        self._gens_reduced = gens_reduced
        self.N = N

    def check_cocycle(self, f) -> bool:
        """True when f vanishes on every boundary (f composed with d_{k+1})."""
        for col in self._dk1.cols:
            acc = Fraction(0)
            for i, v in col.items():
                fv = f[i]
                if fv:
                    acc += v * fv
            if frac1(acc) != 0:
                return False
        return True

    def class_of(self, f, verify: bool = True) -> tuple:
        """Coordinates of a cocycle's class, one residue per generator."""
        f = [Fraction(v) for v in f]
        if len(f) != self._n_k:
            raise ValueError("cochain length mismatch")
        if verify and not self.check_cocycle(f):
            raise ValueError("not a cocycle: nonzero on a boundary")
        coords = []
        for gi, w in zip(self.group.invariant_factors, self.generator_cycles):
            acc = Fraction(0)
            for i in np.nonzero(w)[0]:
                acc += int(w[i]) * f[int(i)]
            val = gi * acc
            if val.denominator != 1:
                raise ValueError(
                    "pairing is not integral; input is not a cocycle of this segment"
                )
            coords.append(int(val) % gi)
        return tuple(coords)

    def zero(self) -> tuple:
        return tuple([0] * len(self.group.invariant_factors))


def dual_homology(dk, dk1, N: int, n_k: int | None = None, reduce: bool | None = None):
    """Dual presentation of H_k(C) for the segment d_k, d_{k+1}.

    dk: matrix of d_k: C_k -> C_{k-1} (None for zero), dk1: matrix of
    d_{k+1}: C_{k+1} -> C_k (None for zero). Either may be dense or
    SparseCols. N must annihilate H_k. When `reduce` is unset, unit-entry
    collapse runs if the segment is large.

    Returns DualClasses.
    """
    if dk is None and n_k is None:
        raise ValueError("need n_k when dk is None")
    if dk is not None:
        dk = _as_sparse(dk)
        n_k = dk.ncols
    if dk1 is None:
        dk1 = SparseCols(n_k, [])
    else:
        dk1 = _as_sparse(dk1)
        if dk1.nrows != n_k:
            raise ValueError("shape mismatch between d_k and d_{k+1}")

    if reduce is None:
        reduce = dk1.ncols > 1500 or n_k > 400
    if reduce:
        red = reduce_pair(dk, dk1, n_k)
        dk_r, dk1_r = red.dk_cols, red.dk1_cols
        m = len(red.alive)
    else:
        red = None
        dk_r, dk1_r, m = dk, dk1, n_k

    if dk_r is None:
        kappa = m
        KB = _eye(m, object)
        kernel_coords = _eye(m, object)
    else:
        dense_dk = dk_r.to_dense()
        s = smith_normal_form(dense_dk, want_uv=(False, True))
        kappa = m - s.rank
        KB = s.V[:, s.rank :]
        kernel_coords = s.Vinv[s.rank :, :]

    dk1_dd = dk1_r.deduped()
    M = np.zeros((kappa, dk1_dd.ncols), dtype=np.int64)
    KC = np.remainder(kernel_coords.astype(object), N).astype(np.int64)
    for j, col in enumerate(dk1_dd.cols):
        acc = np.zeros(kappa, dtype=np.int64)
        for i, v in col.items():
            acc += (v % N) * KC[:, i]
        M[:, j] = acc % N

    ts = snf_mod(M, N, want_uv=(True, False)) if M.size else None
    if ts is not None:
        diag = list(ts.divisors) + [0] * (kappa - ts.rank)
    else:
        diag = [0] * kappa

    # nontrivial components in SNF row order; gcd with N preserves the chain
    picked = []
    for i, d in enumerate(diag):
        g = gcd(int(d), N)
        g = N if g == 0 else g
        if g > 1:
            picked.append((i, g))
    group = FpAbGroup(0, tuple(g for _, g in picked))

    generator_cycles = []
    cocycles = []
    gens_reduced = []
    for i, g in picked:
        if ts is not None and i < ts.Uinv.shape[1]:
            u = ts.Uinv[:, i].astype(object)
            urow = ts.U[i, :].astype(object)
        else:
            u = np.zeros(kappa, dtype=object)
            u[i] = 1
            urow = np.zeros(kappa, dtype=object)
            urow[i] = 1
        w_red = KB @ u
        frow = urow @ kernel_coords if dk_r is not None else urow
        fvals = [frac1(Fraction(int(v), g)) for v in frow]
        gens_reduced.append((g, u))
        if red is not None:
            cocycles.append(red.export_cochain(fvals))
            generator_cycles.append(red.pad_cycle(w_red))
        else:
            cocycles.append(np.array(fvals, dtype=object))
            generator_cycles.append(np.asarray(w_red, dtype=object))

    return DualClasses(group, cocycles, generator_cycles, red, dk1, n_k, gens_reduced, N)


if __name__ == "__main__":
    import doctest

    doctest.testmod()
