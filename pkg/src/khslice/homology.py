"""The cube of resolutions, integral Khovanov homology, and the Jones
polynomial, with the skein-relation and exact-triangle rank checks.

Conventions (pinned by the unknot and trefoil anchors)
------------------------------------------------------
* Frobenius algebra: V free of rank 2 on {1, X}, deg 1 = +1, deg X = -1;
  merge 1.1 -> 1, 1.X = X.1 -> X, X.X -> 0; split 1 -> 1@X + X@1,
  X -> X@X.
* Gradings: for a vertex v of the cube, i = |v| - n_minus and
  j = deg(labeling) + |v| + n_plus - 2 n_minus.
* Edge signs: (-1)^(number of 1-coordinates below the flipped one).
* Jones: chi(q) = sum (-1)^i q^j rank Kh^{i,j}; V = chi/(q + q^-1) at
  q = -t^(1/2).

Exact-triangle bookkeeping at a chosen crossing (0-smoothing is always
the "horizontal" resolution, 1-smoothing the "vertical" one, and v is
``LinkDiagram.crossing_v``):

* positive crossing:  ... -> Kh^{i,j}(P) -> Kh^{i,j-1}(H)
  -> Kh^{i-v,j-3v-2}(V) -> Kh^{i+1,j}(P) -> ...
* negative crossing:  ... -> Kh^{i,j}(N) -> Kh^{i-v+1,j-3v+2}(H)
  -> Kh^{i+1,j+1}(V) -> Kh^{i+1,j}(N) -> ...

whose graded Euler characteristics give exactly the two skein relations

* positive:  t^-1 V_P + t^(-1/2) V_H + t^(3v/2) V_V = 0
* negative:  t    V_N + t^(3v/2)  V_H + t^(1/2)  V_V = 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .diagram import LinkDiagram
from .laurent import LaurentPoly, monomial
from .snf import SparseIntMatrix, factor_prime_powers


class ResourceLimitError(RuntimeError):
    """Cube construction refused: the diagram exceeds the crossing guard."""


class ChainComplexError(AssertionError):
    """Internal consistency failure (d.d != 0 etc.); never expected."""


# -- abelian groups ----------------------------------------------------------


@dataclass(frozen=True)
class BigradedAbelianGroup:
    """Map (i, j) -> (free rank, sorted tuple of prime-power torsion orders)."""

    groups: tuple[tuple[tuple[int, int], tuple[int, tuple[int, ...]]], ...]

    @staticmethod
    def from_dict(d: dict) -> "BigradedAbelianGroup":
        items = []
        for key, (rank, torsion) in d.items():
            torsion = tuple(sorted(int(t) for t in torsion))
            if rank or torsion:
                items.append((tuple(key), (int(rank), torsion)))
        return BigradedAbelianGroup(tuple(sorted(items)))

    def as_dict(self) -> dict:
        return {k: v for k, v in self.groups}

    def rank(self, i: int, j: int) -> int:
        return self.as_dict().get((i, j), (0, ()))[0]

    def is_trivial(self) -> bool:
        return not self.groups

    def to_json(self) -> list:
        return [
            {"i": i, "j": j, "rank": rank, "torsion": list(torsion)}
            for (i, j), (rank, torsion) in self.groups
        ]


@dataclass(frozen=True)
class GradedAbelianGroup:
    """Map k -> (free rank, sorted tuple of prime-power torsion orders)."""

    groups: tuple[tuple[int, tuple[int, tuple[int, ...]]], ...]

    @staticmethod
    def from_dict(d: dict) -> "GradedAbelianGroup":
        items = []
        for k, (rank, torsion) in d.items():
            torsion = tuple(sorted(int(t) for t in torsion))
            if rank or torsion:
                items.append((int(k), (int(rank), torsion)))
        return GradedAbelianGroup(tuple(sorted(items)))

    def as_dict(self) -> dict:
        return {k: v for k, v in self.groups}

    def euler_characteristic(self) -> int:
        return sum(((-1) ** k) * rank for k, (rank, _t) in self.groups)

    def to_json(self) -> list:
        return [
            {"k": k, "rank": rank, "torsion": list(torsion)}
            for k, (rank, torsion) in self.groups
        ]


def collapse(kh: BigradedAbelianGroup) -> GradedAbelianGroup:
    """Collapse the bigrading to the single grading k = i - j."""
    out: dict[int, list] = {}
    for (i, j), (rank, torsion) in kh.groups:
        k = i - j
        cur = out.setdefault(k, [0, []])
        cur[0] += rank
        cur[1].extend(torsion)
    return GradedAbelianGroup.from_dict({k: (r, tuple(t)) for k, (r, t) in out.items()})


# -- the cube of resolutions -------------------------------------------------


def _popcount_array(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    x = a.copy()
    while x.any():
        out += x & 1
        x >>= 1
    return out


class _LabsByCount:
    """Per circle-count c: popcounts of all c-bit masks, the masks grouped by
    popcount, and each mask's rank inside its popcount class."""

    def __init__(self):
        self._memo: dict[int, tuple] = {}

    def tables(self, c: int):
        if c not in self._memo:
            labs = np.arange(1 << c, dtype=np.int64)
            pc = _popcount_array(labs)
            by_count = [labs[pc == k] for k in range(c + 1)]
            rank = np.empty(1 << c, dtype=np.int64)
            for k in range(c + 1):
                rank[by_count[k]] = np.arange(by_count[k].size, dtype=np.int64)
            sizes = np.array([b.size for b in by_count], dtype=np.int64)
            self._memo[c] = (pc, by_count, rank, sizes)
        return self._memo[c]

    def get(self, c: int) -> list[np.ndarray]:
        return self.tables(c)[1]


_LBC = _LabsByCount()


class ChainComplex:
    """Integral cube-of-resolutions complex of a diagram, sliced by quantum
    degree: differentials are per-(i, j) sparse integer matrices."""

    def __init__(self, diagram: LinkDiagram, sizes, mats, n_plus, n_minus):
        self.diagram = diagram
        self.sizes: dict[tuple[int, int], int] = sizes
        self.mats: dict[tuple[int, int], SparseIntMatrix] = mats
        self.n_plus = n_plus
        self.n_minus = n_minus
        self._snf_memo: dict[tuple[int, int], list[int]] = {}

    def i_range(self):
        return (-self.n_minus, self.n_plus)

    def total_rank(self) -> int:
        return sum(self.sizes.values())

    def check_d_squared(self) -> None:
        import scipy.sparse as sp

        for (i, j), m in self.mats.items():
            nxt = self.mats.get((i + 1, j))
            if nxt is None:
                continue
            # entries are tiny (+-1 sums over <= n_crossings terms): int64 exact
            a = _to_scipy(nxt)
            b = _to_scipy(m)
            prod = a @ b
            prod.eliminate_zeros()
            if prod.nnz:
                raise ChainComplexError(f"d.d != 0 at (i,j)=({i},{j})")

    def snf(self, i: int, j: int) -> list[int]:
        key = (i, j)
        if key not in self._snf_memo:
            m = self.mats.get(key)
            self._snf_memo[key] = [] if m is None else m.snf_diagonal()
        return self._snf_memo[key]


def _to_scipy(m: SparseIntMatrix):
    import scipy.sparse as sp

    rows, cols, vals = [], [], []
    for r, row in m.rows.items():
        for c, v in row.items():
            rows.append(r)
            cols.append(c)
            vals.append(v)
    return sp.coo_matrix(
        (np.array(vals, dtype=np.int64), (np.array(rows), np.array(cols))),
        shape=(m.n_rows, m.n_cols),
    ).tocsr()


def cube_size(diagram: LinkDiagram, max_crossings: int = 24, limit: int | None = None) -> int:
    """Total generator count sum_v 2^circles(v) without building the cube;
    with ``limit`` set, aborts early and returns ``limit + 1``."""
    N = diagram.n_crossings
    if N > max_crossings:
        raise ResourceLimitError(f"{N} crossings exceeds the guard of {max_crossings}")
    total = 0
    for v in range(1 << N):
        total += 1 << diagram.smooth([(v >> c) & 1 for c in range(N)]).n_circles
        if limit is not None and total > limit:
            return limit + 1
    return total


def build_cube(
    diagram: LinkDiagram,
    max_crossings: int = 18,
    max_generators: int | None = None,
    check: bool = True,
) -> ChainComplex:
    """Build the bigraded integral complex of the cube of resolutions."""
    N = diagram.n_crossings
    if N > max_crossings:
        raise ResourceLimitError(
            f"{N} crossings exceeds the guard of {max_crossings}; "
            "raise max_crossings explicitly to proceed"
        )
    n_plus, n_minus = diagram.n_plus, diagram.n_minus
    shift = n_plus - 2 * n_minus
    n_free = diagram.free_circles

    counts = np.empty(1 << N, dtype=np.int16)
    e2c: list[tuple[int, ...]] = [()] * (1 << N)
    reps: list[list[int]] = [[]] * (1 << N)
    total_gens = 0
    for v in range(1 << N):
        cs = diagram.smooth([(v >> c) & 1 for c in range(N)])
        counts[v] = cs.n_circles
        e2c[v] = cs.edge_to_circle
        r: list[int] = []
        for e, a in enumerate(cs.edge_to_circle):
            if a == len(r):
                r.append(e)
        reps[v] = r
        total_gens += 1 << cs.n_circles
        if max_generators is not None and total_gens > max_generators:
            raise ResourceLimitError(
                f"cube would exceed {max_generators} generators"
            )

    vertex_pc = np.array([bin(v).count("1") for v in range(1 << N)], dtype=np.int64)

    # index bookkeeping: basis of (i, j) is ordered by vertex then labeling
    sizes: dict[tuple[int, int], int] = {}
    off_arr: list[np.ndarray] = [None] * (1 << N)  # per vertex, offset by popcount k
    for v in range(1 << N):
        c = int(counts[v])
        i = int(vertex_pc[v]) - n_minus
        _pc, _byc, _rank, block_sizes = _LBC.tables(c)
        offs = np.empty(c + 1, dtype=np.int64)
        for k in range(c + 1):
            j = (c - 2 * k) + int(vertex_pc[v]) + shift
            offs[k] = sizes.get((i, j), 0)
            sizes[(i, j)] = offs[k] + int(block_sizes[k])
        off_arr[v] = offs

    # per homological degree i: COO triples plus the source quantum degree
    per_i: dict[int, list] = {}

    for v in range(1 << N):
        c_src = int(counts[v])
        r_src = c_src - n_free
        i = int(vertex_pc[v]) - n_minus
        pc_src, _byc1, rank_src, _sz1 = _LBC.tables(c_src)
        labs = np.arange(1 << c_src, dtype=np.int64)
        src_local = off_arr[v][pc_src] + rank_src
        j_src = (c_src - 2 * pc_src) + int(vertex_pc[v]) + shift
        for cbit in range(N):
            if (v >> cbit) & 1:
                continue
            v2 = v | (1 << cbit)
            c_tgt = int(counts[v2])
            r_tgt = c_tgt - n_free
            sign = -1 if (bin(v & ((1 << cbit) - 1)).count("1") & 1) else 1
            e2c_v, e2c_v2 = e2c[v], e2c[v2]
            img = [e2c_v2[reps[v][a]] for a in range(r_src)]

            perm = np.zeros(max(c_src, 1), dtype=np.int64)
            for a, g in enumerate(img):
                perm[a] = g
            for t in range(n_free):
                perm[r_src + t] = r_tgt + t
            pc_tgt, _byc2, rank_tgt, _sz2 = _LBC.tables(c_tgt)

            if c_tgt == c_src - 1:
                seen: dict[int, int] = {}
                pair = None
                for a, g in enumerate(img):
                    if g in seen:
                        pair = (seen[g], a, g)
                    else:
                        seen[g] = a
                if pair is None:
                    raise ChainComplexError("merge edge without a merged pair")
                ma, mb, mg = pair
                keep = ((labs >> ma) & (labs >> mb) & 1) == 0
                lsrc = labs[keep]
                tgt = np.zeros(lsrc.size, dtype=np.int64)
                for a in range(c_src):
                    if a == ma or a == mb:
                        continue
                    tgt |= ((lsrc >> a) & 1) << int(perm[a])
                tgt |= (((lsrc >> ma) | (lsrc >> mb)) & 1) << mg
                rows = off_arr[v2][pc_tgt[tgt]] + rank_tgt[tgt]
                cols = src_local[keep]
                jj = j_src[keep]
                vals = np.full(lsrc.size, sign, dtype=np.int64)
            elif c_tgt == c_src + 1:
                covered = set(img)
                missing = [g for g in range(r_tgt) if g not in covered]
                if len(missing) != 1:
                    raise ChainComplexError("split edge without a single new circle")
                sh = missing[0]
                sa = None
                for e in range(len(e2c_v2)):
                    if e2c_v2[e] == sh:
                        sa = e2c_v[e]
                        break
                sg = img[sa]
                base = np.zeros(labs.size, dtype=np.int64)
                for a in range(c_src):
                    if a == sa:
                        continue
                    base |= ((labs >> a) & 1) << int(perm[a])
                bits = ((labs >> sa) & 1).astype(bool)
                t_xx = base[bits] | (1 << sg) | (1 << sh)  # X -> X@X
                t_1x = base[~bits] | (1 << sh)  # 1 -> 1@X ...
                t_x1 = base[~bits] | (1 << sg)  # ... + X@1
                tgt = np.concatenate([t_xx, t_1x, t_x1])
                cols = np.concatenate([src_local[bits], src_local[~bits], src_local[~bits]])
                jj = np.concatenate([j_src[bits], j_src[~bits], j_src[~bits]])
                rows = off_arr[v2][pc_tgt[tgt]] + rank_tgt[tgt]
                vals = np.full(tgt.size, sign, dtype=np.int64)
            else:
                raise ChainComplexError("cube edge changes circle count by != 1")

            bucket = per_i.setdefault(i, [[], [], [], []])
            bucket[0].append(rows)
            bucket[1].append(cols)
            bucket[2].append(vals)
            bucket[3].append(jj)

    mats: dict[tuple[int, int], SparseIntMatrix] = {}
    for i, (rows, cols, vals, js) in per_i.items():
        r = np.concatenate(rows)
        cvec = np.concatenate(cols)
        vvec = np.concatenate(vals)
        jvec = np.concatenate(js)
        order = np.argsort(jvec, kind="stable")
        r, cvec, vvec, jvec = r[order], cvec[order], vvec[order], jvec[order]
        cuts = np.flatnonzero(np.diff(jvec)) + 1
        starts = np.concatenate([[0], cuts])
        stops = np.concatenate([cuts, [jvec.size]])
        for a, b in zip(starts, stops):
            j = int(jvec[a])
            mats[(i, j)] = SparseIntMatrix.from_coo(
                sizes.get((i + 1, j), 0), sizes[(i, j)], r[a:b], cvec[a:b], vvec[a:b]
            )

    complex_ = ChainComplex(diagram, sizes, mats, n_plus, n_minus)
    if check:
        complex_.check_d_squared()
    return complex_


def integral_homology(complex_: ChainComplex) -> BigradedAbelianGroup:
    """Homology from Smith normal forms, one quantum degree at a time."""
    out: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = {}
    for (i, j), size in complex_.sizes.items():
        d_out = complex_.snf(i, j)
        d_in = complex_.snf(i - 1, j)
        rank = size - len(d_out) - len(d_in)
        torsion: list[int] = []
        for e in d_in:
            if abs(e) > 1:
                torsion.extend(factor_prime_powers(e))
        if rank < 0:
            raise ChainComplexError("negative free rank; SNF bookkeeping broken")
        if rank or torsion:
            out[(i, j)] = (rank, tuple(sorted(torsion)))
    return BigradedAbelianGroup.from_dict(out)


def khovanov(
    diagram: LinkDiagram,
    max_crossings: int = 18,
    max_generators: int | None = None,
) -> BigradedAbelianGroup:
    return integral_homology(
        build_cube(diagram, max_crossings=max_crossings, max_generators=max_generators)
    )


# -- Jones polynomials --------------------------------------------------------


def euler_poly(kh: BigradedAbelianGroup) -> LaurentPoly:
    """chi(q) = sum (-1)^i q^j rank."""
    d: dict[int, int] = {}
    for (i, j), (rank, _torsion) in kh.groups:
        d[j] = d.get(j, 0) + ((-1) ** abs(i)) * rank
    return LaurentPoly.from_dict(d)


def jones(kh: BigradedAbelianGroup, components: int) -> LaurentPoly:
    """The Jones polynomial in t^(1/2) (keys are exponents of t^(1/2))."""
    chi = euler_poly(kh)
    qq = LaurentPoly.from_dict({1: 1, -1: 1})  # q + q^-1
    v_of_q = chi.divide_exact(qq)
    v = v_of_q.substitute_q_to_minus_sqrt_t()
    for p, _c in v.coeffs:
        if (p - (components - 1)) % 2 != 0:
            raise ChainComplexError(
                "Jones exponent parity disagrees with the component count"
            )
    return v


def jones_json(v: LaurentPoly) -> dict:
    return {f"t^({p}/2)": c for p, c in v.coeffs}


def kauffman_jones(diagram: LinkDiagram) -> LaurentPoly:
    """Independent Kauffman-bracket state sum.

    <D> = sum over states A^(a-b) (-A^2 - A^-2)^(circles-1), and
    V = (-A^3)^(-w) <D> evaluated at A = t^(-1/4); returned in the same
    t^(1/2) key convention as :func:`jones`.
    """
    N = diagram.n_crossings
    delta = LaurentPoly.from_dict({2: -1, -2: -1})  # -A^2 - A^-2, keys = A-exponent
    bracket_d: dict[int, int] = {}
    deltas = [monomial(0)]
    for _ in range(N + diagram.free_circles + 2):
        deltas.append(deltas[-1] * delta)
    for bits in range(1 << N):
        assignment = [(bits >> c) & 1 for c in range(N)]
        circles = diagram.smooth(assignment).n_circles
        a_minus_b = N - 2 * sum(assignment)  # 0-smoothing is the A-smoothing
        term = deltas[circles - 1].shift(a_minus_b)
        for e, c in term.coeffs:
            bracket_d[e] = bracket_d.get(e, 0) + c
    bracket = LaurentPoly.from_dict(bracket_d)
    w = diagram.writhe()
    f = bracket.shift(-3 * w).scale((-1) ** abs(w))  # (-A^3)^(-w) <D>
    # A = t^(-1/4): A-exponent e -> t-exponent -e/4, i.e. key -e/2 in t^(1/2)
    out: dict[int, int] = {}
    for e, c in f.coeffs:
        if e % 2 != 0:
            raise ChainComplexError("Kauffman bracket produced an odd A-exponent")
        out[-e // 2] = out.get(-e // 2, 0) + c
    return LaurentPoly.from_dict(out)


# -- skein and long-exact-sequence checks -------------------------------------


# -- Markov invariance trials --------------------------------------------------


@dataclass(frozen=True)
class MarkovTrial:
    braid_before: object
    braid_after: object
    trace: tuple
    kh_before: BigradedAbelianGroup
    kh_after: BigradedAbelianGroup

    @property
    def ok(self) -> bool:
        return self.kh_before == self.kh_after


def markov_invariance_trial(
    b,
    rng,
    moves: int = 6,
    max_crossings: int = 13,
    max_strands: int = 6,
    max_cube_size: int = 60_000,
    max_rerolls: int = 100,
) -> MarkovTrial:
    """Apply random Markov moves and compare bigraded homology exactly.

    Move sequences whose closure cube would blow past ``max_cube_size``
    generators are re-rolled (deterministically, since the rng state
    advances); the caps keep one trial within a couple of seconds.
    """
    from .braid import random_markov_sequence
    from .diagram import braid_closure_diagram

    before = khovanov(braid_closure_diagram(b))
    hard_cap = max_crossings + 3
    for _ in range(max_rerolls):
        b2, trace = random_markov_sequence(
            b, rng, moves, max_crossings=max_crossings, max_strands=max_strands
        )
        if len(b2) > hard_cap:
            continue
        d2 = braid_closure_diagram(b2)
        if cube_size(d2, limit=max_cube_size) > max_cube_size:
            continue
        after = khovanov(d2, max_crossings=hard_cap)
        return MarkovTrial(b, b2, tuple(trace), before, after)
    raise ResourceLimitError("could not sample an affordable Markov sequence")


@dataclass(frozen=True)
class SkeinReport:
    crossing: int
    sign: int
    v: int
    v_diagram: LaurentPoly
    v_horizontal: LaurentPoly
    v_vertical: LaurentPoly
    residual: LaurentPoly

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()


def skein_check(diagram: LinkDiagram, crossing: int, max_crossings: int = 18) -> SkeinReport:
    """Verify the Jones skein relation at one crossing, exactly.

    positive: t^-1 V_P + t^(-1/2) V_H + t^(3v/2) V_V = 0
    negative: t    V_N + t^(3v/2)  V_H + t^(1/2)  V_V = 0
    """
    sign = diagram.sign(crossing)
    v = diagram.crossing_v(crossing)
    horiz = diagram.resolve(crossing, 0)
    vert = diagram.resolve(crossing, 1)

    def jones_of(d):
        kh = khovanov(d, max_crossings=max_crossings)
        comps = _component_count(d)
        return jones(kh, comps)

    vd, vh, vv = jones_of(diagram), jones_of(horiz), jones_of(vert)
    # keys are exponents of t^(1/2): t^(a/2) shifts keys by a
    if sign > 0:
        residual = vd.shift(-2) + vh.shift(-1) + vv.shift(3 * v)
    else:
        residual = vd.shift(2) + vh.shift(3 * v) + vv.shift(1)
    return SkeinReport(crossing, sign, v, vd, vh, vv, residual)


def _component_count(diagram: LinkDiagram) -> int:
    # components of the underlying 1-manifold: walk strands through crossings
    from .diagram import _PARTNER

    seen = [False] * diagram.n_edges
    comps = diagram.free_circles
    for e0 in range(diagram.n_edges):
        if seen[e0]:
            continue
        comps += 1
        e, at = e0, diagram.edge_dst[e0]
        while not seen[e]:
            seen[e] = True
            ci, slot = at
            nslot = _PARTNER[slot]
            e = diagram.crossings[ci].edges[nslot]
            ends = [diagram.edge_src[e], diagram.edge_dst[e]]
            at = ends[1] if ends[0] == (ci, nslot) else ends[0]
    return comps


@dataclass(frozen=True)
class LesRankReport:
    crossing: int
    sign: int
    v: int
    violations: tuple[str, ...]
    euler_residual: LaurentPoly

    @property
    def ok(self) -> bool:
        return not self.violations and self.euler_residual.is_zero()


def les_rank_check(diagram: LinkDiagram, crossing: int, max_crossings: int = 18) -> LesRankReport:
    """Exactness consequences of the unoriented-skein long exact sequences,
    over Q: at every (i, j) the middle rank is at most the sum of its
    neighbours' ranks, plus the graded Euler identity."""
    sign = diagram.sign(crossing)
    v = diagram.crossing_v(crossing)
    kh_d = khovanov(diagram, max_crossings=max_crossings)
    kh_h = khovanov(diagram.resolve(crossing, 0), max_crossings=max_crossings)
    kh_v = khovanov(diagram.resolve(crossing, 1), max_crossings=max_crossings)

    keys = set()
    for kh, tag in ((kh_d, "d"), (kh_h, "h"), (kh_v, "v")):
        keys.update(k for k, _g in kh.groups)
    violations = []

    def r(kh, i, j):
        return kh.rank(i, j)

    i_vals = [i for i, _j in keys]
    j_vals = [j for _i, j in keys]
    lo_i, hi_i = min(i_vals, default=0) - 2, max(i_vals, default=0) + 2
    lo_j, hi_j = min(j_vals, default=0) - abs(3 * v) - 4, max(j_vals, default=0) + abs(3 * v) + 4
    for i in range(lo_i, hi_i + 1):
        for j in range(lo_j, hi_j + 1):
            if sign > 0:
                trip = [
                    (r(kh_d, i, j), r(kh_v, i - 1 - v, j - 3 * v - 2), r(kh_h, i, j - 1), "P"),
                    (r(kh_h, i, j - 1), r(kh_d, i, j), r(kh_v, i - v, j - 3 * v - 2), "H"),
                    (r(kh_v, i - v, j - 3 * v - 2), r(kh_h, i, j - 1), r(kh_d, i + 1, j), "V"),
                ]
            else:
                trip = [
                    (r(kh_d, i, j), r(kh_v, i, j + 1), r(kh_h, i - v + 1, j - 3 * v + 2), "N"),
                    (r(kh_h, i - v + 1, j - 3 * v + 2), r(kh_d, i, j), r(kh_v, i + 1, j + 1), "H"),
                    (r(kh_v, i + 1, j + 1), r(kh_h, i - v + 1, j - 3 * v + 2), r(kh_d, i + 1, j), "V"),
                ]
            for mid, prev, nxt, tag in trip:
                if mid > prev + nxt:
                    violations.append(
                        f"at (i,j)=({i},{j}) term {tag}: {mid} > {prev} + {nxt}"
                    )

    chi_d, chi_h, chi_v = euler_poly(kh_d), euler_poly(kh_h), euler_poly(kh_v)
    sv = -1 if v % 2 else 1
    if sign > 0:
        residual = chi_d - chi_h.shift(1) + chi_v.shift(3 * v + 2).scale(sv)
    else:
        residual = chi_d + chi_h.shift(3 * v - 2).scale(sv) - chi_v.shift(-1)
    return LesRankReport(crossing, sign, v, tuple(violations), residual)
