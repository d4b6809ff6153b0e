"""Group cohomology and its relative variants, with explicit cocycles.

Coefficients come in three shapes. A finite module with a genuine action is
a ``GModule``; the integers and the circle group Q/Z (both with the trivial
action) are the markers ``INTEGERS`` and ``CIRCLE``. Circle-valued answers
ride the duality route (dual of integral homology of coinvariants) and hand
back Fraction-valued cochains reduced mod 1; the other two shapes go through
honest equivariant cochain complexes and hand back integer vectors.

Every computed group is wrapped in a :class:`CohomologyGroup`, which pairs
the invariant-factor answer with one representative cocycle per canonical
generator and the two coordinate maps between cocycles and classes.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from .complexes import (
    BasedResolution,
    PermutationComplex,
    bar_resolution,
    relative_total_complex,
    standard_complex,
    tensor_of_cyclic,
)
from .exactlin import FpAbGroup, dual_homology, frac1, homology
from .groups import (
    FiniteGroup,
    GModule,
    GSet,
    abelian_invariants,
    direct_product,
    subgroup,
)


class TrivialCoefficients:
    """Marker for a trivial coefficient system that is not a finite module."""

    __slots__ = ("label",)

    def __init__(self, label: str):
        self.label = label

    def __repr__(self) -> str:
        return self.label


INTEGERS = TrivialCoefficients("Z")
CIRCLE = TrivialCoefficients("Q/Z")


class CohomologyGroup:
    """One cohomology group plus its cochain-level interface.

    value is the group in invariant factor form. basis lists the cochain
    coordinates (tags or cells, depending on the chain model named by
    model), representatives holds one cocycle per canonical generator in
    that coordinate system, class_of sends a cocycle to its generator
    coordinates, and representative_of is a section of class_of, so
    class_of(representative_of(c)) == c.
    """

    __slots__ = ("value", "degree", "model", "basis", "_reps", "_class", "_rep")

    def __init__(self, value, degree, model, basis, representatives,
                 class_of, representative_of):
        self.value = value
        self.degree = degree
        self.model = model
        self.basis = list(basis)
        self._reps = list(representatives)
        self._class = class_of
        self._rep = representative_of

    @property
    def representatives(self) -> list:
        return list(self._reps)

    def class_of(self, cochain) -> tuple:
        """Generator coordinates of a cocycle; raises if it is not one."""
        return self._class(cochain)

    def representative_of(self, coords):
        """A cocycle whose class has the given coordinates."""
        return self._rep(coords)

    def __repr__(self) -> str:
        return f"CohomologyGroup({self.value}, degree={self.degree})"


class Bicharacter:
    """A pairing table G1 x G2 -> Q/Z, additive in each slot separately.

    Additivity is validated on construction (check=False skips it, for
    tables that were just assembled out of validated ones). Values are
    Fractions reduced into [0, 1).
    """

    __slots__ = ("G1", "G2", "table")

    def __init__(self, G1: FiniteGroup, G2: FiniteGroup, table, check: bool = True):
        self.G1 = G1
        self.G2 = G2
        T = np.empty((G1.n, G2.n), dtype=object)
        for a in range(G1.n):
            for b in range(G2.n):
                T[a, b] = frac1(Fraction(table[a][b]))
        self.table = T
        if check:
            self._validate()

    def _validate(self) -> None:
        T = self.table
        for a in range(self.G1.n):
            for a2 in range(self.G1.n):
                aa = self.G1.mul(a, a2)
                for b in range(self.G2.n):
                    if frac1(T[a, b] + T[a2, b]) != T[aa, b]:
                        raise ValueError(f"not additive in the first slot at ({a},{a2},{b})")
        for b in range(self.G2.n):
            for b2 in range(self.G2.n):
                bb = self.G2.mul(b, b2)
                for a in range(self.G1.n):
                    if frac1(T[a, b] + T[a, b2]) != T[a, bb]:
                        raise ValueError(f"not additive in the second slot at ({a},{b},{b2})")

    def __call__(self, a: int, b: int) -> Fraction:
        return self.table[a, b]


# ---------------------------------------------------------------------------
# chain models and the three coefficient routes


def _resolution_for(G: FiniteGroup, depth: int, resolution: str) -> BasedResolution:
    if resolution == "bar":
        return bar_resolution(G, depth)
    if resolution == "bar-full":
        return bar_resolution(G, depth, normalized=False)
    if resolution == "cyclic-tensor":
        return tensor_of_cyclic(G, depth)
    raise ValueError(f"unknown resolution {resolution!r}")


def _check_module_group(G: FiniteGroup, M: GModule) -> None:
    if M.group.n != G.n or not np.array_equal(M.group.table, G.table):
        raise ValueError("coefficient module is over a different group")


def _hom_delta(res: BasedResolution, M: GModule, k: int) -> np.ndarray:
    """Matrix of the cochain differential C^{k-1} -> C^k of Hom(res, M).

    Cochains are tag-major integer vectors: the value at tag t occupies the
    block [t*r, (t+1)*r) where r is the coordinate rank of M. Evaluating a
    cochain on a differential term (pos, tag') hits it with the action
    matrix of pos, which is what makes the blocks sums of action matrices.
    """
    if res.side != "left":
        raise ValueError("module cochains are set up for left-sided resolutions")
    r = len(M.moduli)
    rows = len(res.tags[k]) * r
    cols = len(res.tags[k - 1]) * r
    D = np.zeros((rows, cols), dtype=object)
    idx = res.tag_index[k - 1]
    for i, tag in enumerate(res.tags[k]):
        for (pos, t2), coeff in res.based_diff[k][tag]:
            j = idx[t2]
            D[i * r:(i + 1) * r, j * r:(j + 1) * r] += coeff * M.matrices[pos]
    return D


def _presented_cohomology(grp, pres, degree, model, basis) -> CohomologyGroup:
    return CohomologyGroup(grp, degree, model, basis, pres.generators(),
                           pres.class_of, pres.representative)


def _dual_cohomology(classes, degree, model, basis) -> CohomologyGroup:
    n_k = len(basis)

    def rep_of(coords):
        coords = list(coords)
        if len(coords) != classes.group.rank():
            raise ValueError("coordinate length mismatch")
        out = np.array([Fraction(0)] * n_k, dtype=object)
        for c, coc in zip(coords, classes.cocycles):
            if int(c):
                out = out + int(c) * np.asarray(coc, dtype=object)
        return np.array([frac1(v) for v in out], dtype=object)

    return CohomologyGroup(classes.group, degree, model, basis,
                           classes.cocycles, classes.class_of, rep_of)


def group_cohomology(G: FiniteGroup, M, n: int, resolution: str = "bar") -> CohomologyGroup:
    """H^n(G, M) with representatives in the chosen chain model.

    M is a GModule over G, or INTEGERS, or CIRCLE (the last two carry the
    trivial action). resolution is "bar" (normalized, the default),
    "bar-full" (unnormalized), or "cyclic-tensor" (abelian G only); the
    cochain basis is that model's degree-n tag list. Module-valued cochains
    are tag-major integer vectors, integer cochains are integer vectors,
    circle cochains are Fraction vectors mod 1.

    Raises SizeBound when the chain model blows the cell budget, and
    ValueError for circle coefficients in degree 0 (the answer there is the
    whole circle, which has no invariant-factor form).
    """
    if n < 0:
        raise ValueError("negative degree")
    res = _resolution_for(G, n + 1, resolution)
    basis = list(res.tags[n])
    if isinstance(M, GModule):
        _check_module_group(G, M)
        r = len(M.moduli)
        f = _hom_delta(res, M, n) if n >= 1 else None
        g = _hom_delta(res, M, n + 1)
        moduli = list(M.moduli) * len(res.tags[n])
        target = list(M.moduli) * len(res.tags[n + 1])
        grp, pres = homology(f, g, moduli, target)
        model = (f"{M.moduli}-valued tag-major cochains on degree-{n} tags "
                 f"of {res.name}")
        return _presented_cohomology(grp, pres, n, model, basis)
    if M is INTEGERS:
        mats = res.coinvariant_diffs()
        f = mats[n - 1].to_dense().T if n >= 1 else None
        g = mats[n].to_dense().T
        grp, pres = homology(f, g, [0] * len(res.tags[n]))
        model = f"integer cochains on degree-{n} tags of {res.name}"
        return _presented_cohomology(grp, pres, n, model, basis)
    if M is CIRCLE:
        if n == 0:
            raise ValueError("degree-0 circle cohomology is the circle itself; "
                             "use a finite module to land in invariant factors")
        mats = res.coinvariant_diffs()
        classes = dual_homology(mats[n - 1], mats[n], G.n)
        model = f"Fraction cochains mod 1 on degree-{n} tags of {res.name}"
        return _dual_cohomology(classes, n, model, basis)
    raise TypeError(f"unsupported coefficients {M!r}")


def derivation_space(F: FiniteGroup, M: GModule):
    """(group, presentation, tag basis) for the degree-1 cocycles Z^1(F, M).

    The basis tags are the single nonidentity letters, so a derivation is a
    tag-major integer vector of its values; the presentation's class_of and
    representative speak that format.
    """
    if not isinstance(M, GModule):
        raise TypeError("derivations need a finite coefficient module")
    _check_module_group(F, M)
    res = bar_resolution(F, 2)
    g = _hom_delta(res, M, 2)
    moduli = list(M.moduli) * len(res.tags[1])
    target = list(M.moduli) * len(res.tags[2])
    grp, pres = homology(None, g, moduli, target)
    return grp, pres, list(res.tags[1])


def derivations(F: FiniteGroup, M: GModule) -> FpAbGroup:
    """Z^1(F, M): maps f with f(xy) = f(x) + x.f(y), as an abelian group.

    For a trivial action this is Hom(F, M); no quotient by principal
    derivations is taken.
    """
    grp, _, _ = derivation_space(F, M)
    return grp


def pullback_matrix(H: CohomologyGroup, perm) -> np.ndarray:
    """Matrix of a group automorphism's pullback on circle-valued classes.

    H must be a circle-coefficient group over tag tuples of elements, and
    perm an array with perm[0] == 0 realizing an automorphism of the
    underlying group. The pullback sends a cochain f to f composed with
    perm in every slot; the returned matrix acts on generator coordinates
    and is what module_from_matrices wants, one call per acting element.
    """
    perm = [int(v) for v in perm]
    if perm[0] != 0:
        raise ValueError("automorphisms fix the identity")
    index = {tag: i for i, tag in enumerate(H.basis)}
    cols = []
    for rep in H.representatives:
        pulled = np.array([Fraction(0)] * len(H.basis), dtype=object)
        for i, tag in enumerate(H.basis):
            pulled[i] = rep[index[tuple(perm[t] for t in tag)]]
        cols.append(H.class_of(pulled))
    r = len(H.value.invariant_factors)
    A = np.zeros((r, r), dtype=object)
    for j, coords in enumerate(cols):
        for i, v in enumerate(coords):
            A[i, j] = v
    return A


# ---------------------------------------------------------------------------
# relative cohomology


def relative_auslander(mp, k: int, resolution: str = "auto",
                       total_complex=None) -> CohomologyGroup:
    """Degree-k relative cohomology of a matched pair, circle coefficients.

    Computed as the dual of integral homology of the truncated product
    total complex in chain degree k-1, which is where the relative groups
    of the pair live; k must be at least 2 (the low end is a direct
    presentation question, not a complex computation). Pass total_complex
    to reuse a complex already built to depth k or more.
    """
    if k < 2:
        raise ValueError("relative degrees below 2 are not read off this complex")
    R = total_complex
    if R is None:
        R = relative_total_complex(mp, k, resolution)
    if len(R.diffs) <= k:
        raise ValueError(f"supplied total complex stops before degree {k}")
    classes = dual_homology(R.diffs[k - 1], R.diffs[k], mp.sigma().n)
    model = (f"Fraction cochains mod 1 on the degree-{k - 1} based labels of "
             f"the truncated product total complex")
    return _dual_cohomology(classes, k, model, list(R.labels[k - 1]))


def coset_space(G: FiniteGroup, S, side: str = "left"):
    """(coset G-set, representatives) for a subgroup given by element indices.

    side "left" builds the left cosets gS with G acting by left
    translation; side "right" builds Sg with the right translation action.
    Cosets are numbered in order of their smallest member, identity coset
    first.
    """
    _, emb = subgroup(G, S)
    coset_of = [-1] * G.n
    reps: list[int] = []
    for g in range(G.n):
        if coset_of[g] >= 0:
            continue
        c = len(reps)
        reps.append(g)
        for s in emb:
            x = G.mul(g, s) if side == "left" else G.mul(s, g)
            coset_of[x] = c
    table = np.zeros((G.n, len(reps)), dtype=np.int64)
    for a in range(G.n):
        for c, rep in enumerate(reps):
            x = G.mul(a, rep) if side == "left" else G.mul(rep, a)
            table[a, c] = coset_of[x]
    return GSet(G, table, side), reps


def _orbit_transversals(pc: PermutationComplex, k: int):
    """(representatives, {cell: (rep index, group element moving rep to cell)})."""
    reps = []
    data: dict = {}
    mul = pc.sigma.mul
    for cell in pc.cells[k]:
        if cell in data:
            continue
        r = len(reps)
        reps.append(cell)
        data[cell] = (r, 0)
        frontier = [cell]
        while frontier:
            nxt = []
            for c in frontier:
                g0 = data[c][1]
                for g in range(pc.sigma.n):
                    c2 = pc.act(g, c)
                    if c2 not in data:
                        g2 = mul(g, g0) if pc.side == "left" else mul(g0, g)
                        data[c2] = (r, g2)
                        nxt.append(c2)
            frontier = nxt
    return reps, data


def _invariants(M: GModule, stabilizer):
    """Presentation of the stabilizer-fixed subgroup of M."""
    r = len(M.moduli)
    ident = np.eye(r, dtype=object)
    rows = [np.asarray(M.matrices[g], dtype=object) - ident
            for g in stabilizer if g != 0]
    if rows and r:
        T = np.concatenate(rows, axis=0)
        target = list(M.moduli) * len(rows)
    else:
        T = np.zeros((0, r), dtype=object)
        target = []
    return homology(None, T, list(M.moduli), target)


def _equivariant_degree(pc: PermutationComplex, M: GModule, k: int) -> dict:
    reps, data = _orbit_transversals(pc, k)
    pres = []
    moduli: list[int] = []
    offsets: list[int] = []
    for cell in reps:
        stab = [g for g in range(pc.sigma.n) if pc.act(g, cell) == cell]
        grp, pr = _invariants(M, stab)
        offsets.append(len(moduli))
        moduli.extend(grp.invariant_factors)
        pres.append(pr)
    return {"reps": reps, "data": data, "pres": pres,
            "moduli": moduli, "offsets": offsets}


def _equivariant_delta(pc: PermutationComplex, M: GModule, k: int,
                       lo: dict, hi: dict) -> np.ndarray:
    """Cochain differential C^k -> C^{k+1} on stabilizer-invariant coordinates.

    A column is one presented generator of one orbit's invariant subgroup;
    its image is read off by pushing the generator's ambient vector through
    every face of every degree-(k+1) representative, twisting by the
    transversal element of the face's orbit, and classifying the result in
    the target orbit's invariant presentation.
    """
    r = len(M.moduli)
    D = np.zeros((len(hi["moduli"]), len(lo["moduli"])), dtype=object)
    for i, pr in enumerate(lo["pres"]):
        ni = pr.group.rank()
        for c in range(ni):
            unit = [0] * ni
            unit[c] = 1
            vec = pr.representative(unit)
            col = lo["offsets"][i] + c
            for j, cell in enumerate(hi["reps"]):
                acc = np.zeros(r, dtype=object)
                touched = False
                for cell2, coeff in pc.diff_fn(k + 1, cell):
                    i2, g = lo["data"][cell2]
                    if i2 != i:
                        continue
                    acc = acc + coeff * (M.matrices[g] @ vec)
                    touched = True
                if not touched:
                    continue
                for t, v in enumerate(hi["pres"][j].class_of(acc)):
                    D[hi["offsets"][j] + t, col] = v
    return D


def relative_hochschild(G: FiniteGroup, S, M, n: int,
                        model: str = "standard") -> CohomologyGroup:
    """Cohomology of G relative to the subgroup S, from the coset complex.

    S is an iterable of G-element indices forming a subgroup. The chain
    model is the simplicial complex on the left coset space G/S, either
    plain ("standard", which is the iterated-induction relative bar
    construction) or with degenerate tuples removed ("standard-normalized");
    the value must agree between the two, and for trivial S it must agree
    with ordinary group cohomology. Coefficients follow the
    group_cohomology conventions; module-valued cochains are dicts mapping
    orbit-representative cells to integer vectors constrained to the cell
    stabilizer's invariants.
    """
    if model not in ("standard", "standard-normalized"):
        raise ValueError(f"unknown model {model!r}")
    if n < 0:
        raise ValueError("negative degree")
    X, _ = coset_space(G, S)
    pc = standard_complex(X, n + 1, normalized=(model == "standard-normalized"))
    where = f"orbit representatives of degree-{n} cells of {pc.name}"
    if M is CIRCLE:
        if n == 0:
            raise ValueError("degree-0 circle cohomology is the circle itself; "
                             "use a finite module to land in invariant factors")
        mats, reps = pc.coinvariant_diffs()
        classes = dual_homology(mats[n - 1], mats[n], G.n)
        return _dual_cohomology(classes, n, f"Fraction cochains mod 1 on {where}",
                                reps[n])
    if M is INTEGERS:
        mats, reps = pc.coinvariant_diffs()
        f = mats[n - 1].to_dense().T if n >= 1 else None
        g = mats[n].to_dense().T
        grp, pres = homology(f, g, [0] * len(reps[n]))
        return _presented_cohomology(grp, pres, n, f"integer cochains on {where}",
                                     reps[n])
    if not isinstance(M, GModule):
        raise TypeError(f"unsupported coefficients {M!r}")
    _check_module_group(G, M)
    degrees = {k: _equivariant_degree(pc, M, k) for k in (n - 1, n, n + 1) if k >= 0}
    f = _equivariant_delta(pc, M, n - 1, degrees[n - 1], degrees[n]) if n >= 1 else None
    g = _equivariant_delta(pc, M, n, degrees[n], degrees[n + 1])
    mid = degrees[n]
    grp, pres = homology(f, g, mid["moduli"], degrees[n + 1]["moduli"])
    r = len(M.moduli)

    def unpack(flat) -> dict:
        out = {}
        for i, cell in enumerate(mid["reps"]):
            lo = mid["offsets"][i]
            ni = mid["pres"][i].group.rank()
            piece = [int(flat[lo + t]) for t in range(ni)]
            vec = mid["pres"][i].representative(piece)
            if any(int(v) % d for v, d in zip(vec, M.moduli)):
                out[cell] = np.array([int(v) % d for v, d in zip(vec, M.moduli)],
                                     dtype=object)
        return out

    def pack(cochain: dict) -> np.ndarray:
        flat = np.zeros(len(mid["moduli"]), dtype=object)
        for cell, vec in cochain.items():
            i, g0 = mid["data"][cell]
            if g0 != 0:
                raise ValueError(f"cochain key {cell} is not an orbit representative")
            coords = mid["pres"][i].class_of(np.asarray(vec, dtype=object).reshape(r))
            for t, v in enumerate(coords):
                flat[mid["offsets"][i] + t] = v
        return flat

    model_str = (f"{M.moduli}-valued stabilizer-invariant functions on {where}")
    reps_out = [unpack(v) for v in pres.generators()]
    return CohomologyGroup(grp, n, model_str, mid["reps"], reps_out,
                           lambda cochain: pres.class_of(pack(cochain)),
                           lambda coords: unpack(pres.representative(coords)))


# ---------------------------------------------------------------------------
# the product decomposition of H^2 and the Alt correspondence


def _first_homology(G: FiniteGroup):
    """(group, per-element coordinates, generator cycles) of H_1(G)."""
    res = bar_resolution(G, 2)
    mats = res.coinvariant_diffs()
    grp, pres = homology(mats[1].to_dense(), mats[0].to_dense(),
                         [0] * len(res.tags[1]))
    index = res.tag_index[1]
    coords = {0: tuple([0] * grp.rank())}
    for g in range(1, G.n):
        vec = np.zeros(len(res.tags[1]), dtype=object)
        vec[index[(g,)]] = 1
        coords[g] = pres.class_of(vec)
    letters = [tag[0] for tag in res.tags[1]]
    cycles = [[(letters[i], int(v)) for i, v in enumerate(w) if int(v)]
              for w in pres.generators()]
    return grp, coords, cycles


class H2Decomposition:
    """Splitting of H^2 of a direct product into factor parts and pairings.

    first / second / product are the CohomologyGroups of the factors and of
    the whole group; pairing_moduli and pairing_basis describe the
    bicharacter part in its natural coordinates (one generator per pair of
    first-homology invariant factors with a nontrivial gcd), and pairings
    is its canonical invariant-factor form. split and merge move cochains
    between the three-part picture and the product, and they invert each
    other on classes.
    """

    __slots__ = ("G1", "G2", "group", "product", "first", "second",
                 "pairings", "pairing_moduli", "pairing_basis",
                 "_h1a", "_h1b", "_pairs", "_index")

    def __init__(self, G1, G2, group, product, first, second,
                 h1a, h1b):
        self.G1 = G1
        self.G2 = G2
        self.group = group
        self.product = product
        self.first = first
        self.second = second
        self._h1a = h1a
        self._h1b = h1b
        da = h1a[0].invariant_factors
        db = h1b[0].invariant_factors
        self._pairs = [(i, j) for i in range(len(da)) for j in range(len(db))
                       if gcd(da[i], db[j]) > 1]
        self.pairing_moduli = tuple(gcd(da[i], db[j]) for i, j in self._pairs)
        self.pairings = FpAbGroup.from_factors(self.pairing_moduli)
        self.pairing_basis = []
        ca, cb = h1a[1], h1b[1]
        for (i, j), g in zip(self._pairs, self.pairing_moduli):
            T = [[frac1(Fraction(int(ca[a][i]) * int(cb[b][j]), g))
                  for b in range(G2.n)] for a in range(G1.n)]
            self.pairing_basis.append(Bicharacter(G1, G2, T, check=False))
        self._index = {tag: k for k, tag in enumerate(product.basis)}

    def _embed(self, a: int, b: int) -> int:
        return a * self.G2.n + b

    def split(self, cochain):
        """(cochain on G1, cochain on G2, Bicharacter) of a product cocycle."""
        f1 = np.array([Fraction(cochain[self._index[(self._embed(a, 0), self._embed(b, 0))]])
                       for a, b in self.first.basis], dtype=object)
        f2 = np.array([Fraction(cochain[self._index[(self._embed(0, a), self._embed(0, b))]])
                       for a, b in self.second.basis], dtype=object)
        T = np.empty((self.G1.n, self.G2.n), dtype=object)
        for x in range(self.G1.n):
            for s in range(self.G2.n):
                if x == 0 or s == 0:
                    T[x, s] = Fraction(0)
                    continue
                ex, es = self._embed(x, 0), self._embed(0, s)
                T[x, s] = frac1(Fraction(cochain[self._index[(ex, es)]])
                                - Fraction(cochain[self._index[(es, ex)]]))
        return f1, f2, Bicharacter(self.G1, self.G2, T)

    def merge(self, f1, f2, chi: Bicharacter) -> np.ndarray:
        """Product cocycle assembling the two restrictions and a pairing."""
        idx1 = {tag: k for k, tag in enumerate(self.first.basis)}
        idx2 = {tag: k for k, tag in enumerate(self.second.basis)}

        def v1(a, b):
            if a == 0 or b == 0:
                return Fraction(0)
            return Fraction(f1[idx1[(a, b)]])

        def v2(a, b):
            if a == 0 or b == 0:
                return Fraction(0)
            return Fraction(f2[idx2[(a, b)]])

        out = np.empty(len(self.product.basis), dtype=object)
        for k, (a, b) in enumerate(self.product.basis):
            a1, a2 = divmod(a, self.G2.n)
            b1, b2 = divmod(b, self.G2.n)
            out[k] = frac1(v1(a1, b1) + v2(a2, b2) + chi(a1, b2))
        return out

    def pairing_class_of(self, chi: Bicharacter) -> tuple:
        """Natural coordinates of a bicharacter, one residue per kept pair."""
        coords = []
        for (i, j), g in zip(self._pairs, self.pairing_moduli):
            acc = Fraction(0)
            for a, ca in self._h1a[2][i]:
                for b, cb in self._h1b[2][j]:
                    acc += ca * cb * chi(a, b)
            val = frac1(acc) * g
            if val.denominator != 1:
                raise ValueError("pairing with a generator cycle is not integral")
            coords.append(int(val) % g)
        return tuple(coords)

    def pairing_representative_of(self, coords) -> Bicharacter:
        T = np.full((self.G1.n, self.G2.n), Fraction(0), dtype=object)
        for c, chi in zip(coords, self.pairing_basis):
            if int(c):
                T = T + int(c) * chi.table
        T = [[frac1(v) for v in row] for row in T]
        return Bicharacter(self.G1, self.G2, T, check=False)


def h2_product_decompose(G1: FiniteGroup, G2: FiniteGroup, M=CIRCLE) -> H2Decomposition:
    """Decompose H^2(G1 x G2, Q/Z) into the two factors and a pairing part.

    Only circle coefficients are supported. The returned object carries the
    three groups, representative bicharacters, and the split / merge maps;
    split of a cocycle restricts it to each factor and extracts the
    antisymmetrized cross term, merge rebuilds a product cocycle, and the
    two compose to the identity on classes.
    """
    if M is not CIRCLE:
        raise TypeError("the product decomposition is computed with circle coefficients")
    G = direct_product(G1, G2)
    product = group_cohomology(G, CIRCLE, 2)
    first = group_cohomology(G1, CIRCLE, 2)
    second = group_cohomology(G2, CIRCLE, 2)
    return H2Decomposition(G1, G2, G, product, first, second,
                           _first_homology(G1), _first_homology(G2))


def cochain_table(G: FiniteGroup, basis, flat) -> np.ndarray:
    """Expand a flat 2-cochain over pair tags into a full value table.

    Entries off the basis (any slot at the identity) are zero, matching the
    normalized-cochain convention.
    """
    T = np.full((G.n, G.n), Fraction(0), dtype=object)
    for k, tag in enumerate(basis):
        if len(tag) != 2:
            raise ValueError("tables are for 2-cochains")
        T[tag[0], tag[1]] = Fraction(flat[k])
    return T


def cochain_from_table(G: FiniteGroup, basis, table) -> np.ndarray:
    """Flatten a full 2-cochain value table onto a pair-tag basis."""
    return np.array([Fraction(table[a][b]) for a, b in basis], dtype=object)


def alt_map(V: FiniteGroup, table):
    """Antisymmetrization of a circle-valued 2-cocycle on an abelian group.

    table is a full value table (see cochain_table). Returns (matrix,
    moduli): skew integer matrices over the invariant-factor generators of
    V, where entry (i, j) lives mod moduli[i][j] = gcd(d_i, d_j) and equals
    that gcd times the antisymmetrized value on the generator pair. Raises
    ValueError when the values do not have the order a cocycle's
    antisymmetrization must have.
    """
    st = abelian_invariants(V)
    d = st.moduli
    r = len(d)
    gens = [st.from_coords(tuple(1 if t == i else 0 for t in range(r)))
            for i in range(r)]
    mat = np.zeros((r, r), dtype=object)
    mods = np.zeros((r, r), dtype=object)
    for i in range(r):
        mods[i, i] = d[i]
        for j in range(i + 1, r):
            g = gcd(d[i], d[j])
            mods[i, j] = mods[j, i] = g
            val = frac1(Fraction(table[gens[i]][gens[j]]) - Fraction(table[gens[j]][gens[i]]))
            scaled = val * g
            if scaled.denominator != 1:
                raise ValueError(f"value at generator pair ({i},{j}) does not have "
                                 f"order dividing {g}")
            mat[i, j] = int(scaled) % g
            mat[j, i] = (-int(scaled)) % g
    return mat, mods


def skew_cocycle(V: FiniteGroup, matrix) -> np.ndarray:
    """The bilinear cocycle of a skew matrix over the generators of V.

    Only the strict upper triangle of matrix is read; entry (i, j) scales
    the pairing x_i y_j / gcd(d_i, d_j) in invariant-factor coordinates.
    Returns a full value table, inverse to alt_map on classes.
    """
    st = abelian_invariants(V)
    d = st.moduli
    r = len(d)
    T = np.empty((V.n, V.n), dtype=object)
    for a in range(V.n):
        x = st.to_coords(a)
        for b in range(V.n):
            y = st.to_coords(b)
            acc = Fraction(0)
            for i in range(r):
                for j in range(i + 1, r):
                    m = int(matrix[i][j])
                    if m:
                        acc += Fraction(m * int(x[i]) * int(y[j]), gcd(d[i], d[j]))
            T[a, b] = frac1(acc)
    return T
