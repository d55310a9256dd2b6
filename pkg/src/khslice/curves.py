"""Arcs and crossingless matchings in the marked disc, with the half-twist
braid action and minimal geometric intersection counts.

Model
-----
Let D be a disc with n marked points p_1 < ... < p_n on a horizontal
line, and F_n = pi_1(D - {p_i}, *) the free group on x_1..x_n, where the
base point * lies below the line and x_i runs from * to p_i and once
counterclockwise around it.  An embedded unoriented arc from p_s to p_e
is stored as the pair

    (endpoints {s, e},  conjugacy class of  C = x_s . w x_e w^-1)

where w is the based class of the arc pushed off its endpoints (w = 1
for an arc running below the line) and C is the counterclockwise
boundary of a tubular neighbourhood of the arc, a simple loop enclosing
exactly the punctures s and e.  The class of C together with {s, e}
determines the arc up to isotopy, and the braid group acts on it by the
Artin substitution with no base-point corrections:

    sigma_k:  x_k -> x_k x_{k+1} x_k^-1,   x_{k+1} -> x_k,
    sigma_k^-1:  x_k -> x_{k+1},   x_{k+1} -> x_{k+1}^-1 x_k x_{k+1},

with the punctures k, k+1 exchanged.  Words in the braid group act
letters left to right.

Minimal intersection numbers are computed in the universal cover: the
cover of the wedge of n circles is a tree with the planar (ribbon)
cyclic order of edge germs at every vertex; a lift of an arc joins two
"cusps" (cosets g<x_i>), each of which is a single boundary point,
represented by the eventually constant ray g x_i^inf.  Two lifts cross
in minimal position exactly when their endpoint pairs link in the
circular order at infinity, and the interior intersection number of two
arcs is the number of translates of one lift linking a fixed lift of
the other.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .braid import BraidWord


class CurveError(ValueError):
    pass


# -- free group words ---------------------------------------------------------


def wreduce(word: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def winv(word: Sequence[int]) -> tuple[int, ...]:
    return tuple(-letter for letter in reversed(word))


def wmul(*words) -> tuple[int, ...]:
    out: list[int] = []
    for w in words:
        for letter in w:
            if out and out[-1] == -letter:
                out.pop()
            else:
                out.append(letter)
    return tuple(out)


def cyclic_reduce(word: Sequence[int]) -> tuple[int, ...]:
    w = list(wreduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def cyclic_canonical(word: Sequence[int]) -> tuple[int, ...]:
    w = cyclic_reduce(word)
    if not w:
        return ()
    rotations = [w[i:] + w[:i] for i in range(len(w))]
    return min(rotations)


# -- arcs and systems ---------------------------------------------------------


@dataclass(frozen=True)
class MarkedDisc:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise CurveError("a marked disc needs n >= 2 points")


@dataclass(frozen=True, order=True)
class Arc:
    """An embedded unoriented arc, as endpoint pair plus the cyclic word of
    its counterclockwise neighbourhood boundary."""

    endpoints: tuple[int, int]  # sorted
    cword: tuple[int, ...]

    def __repr__(self):
        return f"Arc({self.endpoints}, C={self.cword})"


def normalize_arc_word(s: int, e: int, w: Sequence[int]) -> tuple[int, ...]:
    w = list(wreduce(w))
    while w and abs(w[0]) == s:
        w.pop(0)
    while w and abs(w[-1]) == e:
        w.pop()
    return tuple(w)


def make_arc(n: int, s: int, e: int, w: Sequence[int] = ()) -> Arc:
    """Arc from p_s to p_e whose push-off path class is w (w = 1 is the arc
    running below the line)."""
    if s == e:
        raise CurveError("arc endpoints must be distinct marked points")
    if not (1 <= s <= n and 1 <= e <= n):
        raise CurveError(f"endpoint out of range for {n} marked points")
    for letter in w:
        if not 1 <= abs(letter) <= n:
            raise CurveError("arc word uses an unknown generator")
    w = normalize_arc_word(s, e, w)
    c = wmul((s,), w, (e,), winv(w))
    return Arc(tuple(sorted((s, e))), cyclic_canonical(c))


def arc_word(arc: Arc, from_point: int) -> tuple[int, ...]:
    """Recover the normalized path word of ``arc`` read from ``from_point``."""
    s = from_point
    e = arc.endpoints[0] if arc.endpoints[1] == s else arc.endpoints[1]
    if s not in arc.endpoints:
        raise CurveError("from_point is not an endpoint of the arc")
    c = arc.cword
    L = len(c)
    for r in range(L):
        rot = c[r:] + c[:r]
        if rot[0] != s:
            continue
        rest = rot[1:]
        if len(rest) % 2 == 0:
            continue
        t = len(rest) // 2
        if rest[t] != e:
            continue
        w = rest[:t]
        if tuple(rest[t + 1:]) == winv(w):
            return normalize_arc_word(s, e, w)
    raise CurveError(f"cannot decompose the arc word of {arc}")


@dataclass(frozen=True)
class ArcSystem:
    """A family of disjoint embedded arcs on n marked points."""

    n: int
    arcs: tuple[Arc, ...]

    @staticmethod
    def make(n: int, arcs: Iterable[Arc]) -> "ArcSystem":
        return ArcSystem(n, tuple(sorted(arcs)))

    def __len__(self):
        return len(self.arcs)


class Matching(ArcSystem):
    """An arc system pairing all n = 2m marked points, one arc per pair."""

    @staticmethod
    def make(n: int, arcs: Iterable[Arc]) -> "Matching":
        arcs = tuple(sorted(arcs))
        pts = sorted(x for a in arcs for x in a.endpoints)
        if pts != list(range(1, n + 1)):
            raise CurveError("matching must use every marked point exactly once")
        return Matching(n, arcs)

    def pairs(self) -> list[tuple[int, int]]:
        return [a.endpoints for a in self.arcs]


def standard_matching(m: int, half: str = "upper") -> Matching:
    """The nested matching pairing i with 2m+1-i, arcs in the chosen
    half-plane: lower arcs have trivial path word, upper arcs pass over the
    enclosed points."""
    if m < 1:
        raise CurveError("m must be >= 1")
    if half not in ("upper", "lower"):
        raise CurveError("half must be 'upper' or 'lower'")
    n = 2 * m
    arcs = []
    for i in range(1, m + 1):
        j = n + 1 - i
        if half == "lower":
            w: tuple[int, ...] = ()
        else:
            # inverse of the ccw loop around the enclosed block, which with
            # left-to-right path composition is x_{j-1} ... x_{i+1}
            w = tuple(-t for t in range(i + 1, j))
        arcs.append(make_arc(n, i, j, w))
    return Matching.make(n, arcs)


# -- the braid action ---------------------------------------------------------


def _artin_letter(word, k: int, sign: int) -> tuple[int, ...]:
    out: list[int] = []
    if sign > 0:
        sub = {k: (k, k + 1, -k), k + 1: (k,)}
    else:
        sub = {k: (k + 1,), k + 1: (-(k + 1), k, k + 1)}
    for letter in word:
        a = abs(letter)
        if a in sub:
            img = sub[a]
            out.extend(img if letter > 0 else winv(img))
        else:
            out.append(letter)
    return wreduce(out)


def act_arc(b: BraidWord, arc: Arc, n: int) -> Arc:
    if b.strands != n:
        raise CurveError(f"braid on {b.strands} strands cannot act on {n} points")
    c = arc.cword
    s, e = arc.endpoints
    for k, sign in b.letters:
        c = _artin_letter(c, k, sign)
        swap = {k: k + 1, k + 1: k}
        s = swap.get(s, s)
        e = swap.get(e, e)
    return Arc(tuple(sorted((s, e))), cyclic_canonical(c))


def act(b: BraidWord, system: ArcSystem) -> ArcSystem:
    """Image of the system under the word's half-twists, left to right."""
    arcs = tuple(act_arc(b, a, system.n) for a in system.arcs)
    if isinstance(system, Matching):
        return Matching.make(system.n, arcs)
    return ArcSystem.make(system.n, arcs)


# -- intersections in the universal cover -------------------------------------


@dataclass(frozen=True)
class Cusp:
    """The boundary point of the coset g<x_i>; g carries no trailing x_i."""

    g: tuple[int, ...]
    i: int

    @staticmethod
    def make(g: Sequence[int], i: int) -> "Cusp":
        g = list(wreduce(g))
        while g and abs(g[-1]) == i:
            g.pop()
        return Cusp(tuple(g), i)

    def ray_letter(self, idx: int) -> int:
        return self.g[idx] if idx < len(self.g) else self.i


def _lcp(a: Cusp, b: Cusp) -> int:
    if a == b:
        raise CurveError("rays of equal cusps do not diverge")
    idx = 0
    bound = len(a.g) + len(b.g) + 4
    while idx <= bound:
        if a.ray_letter(idx) != b.ray_letter(idx):
            return idx
        idx += 1
    raise CurveError("ray comparison failed to diverge")


def _ccw(order_pos, a: int, b: int, c: int) -> int:
    pa, pb, pc = order_pos[a], order_pos[b], order_pos[c]
    L = len(order_pos)
    return 1 if (pb - pa) % L < (pc - pa) % L else -1


def _germ_order(n: int) -> dict[int, int]:
    # counterclockwise germ order at every vertex: blocks by decreasing
    # puncture index, out-germ (+i) just east of the spoke, in-germ (-i) west
    cyc: list[int] = []
    for i in range(n, 0, -1):
        cyc.extend((i, -i))
    return {g: p for p, g in enumerate(cyc)}


def _orient(order_pos, p: Cusp, q: Cusp, r: Cusp) -> int:
    lpq, lpr, lqr = _lcp(p, q), _lcp(p, r), _lcp(q, r)
    m = max(lpq, lpr, lqr)
    if lpq == lpr == lqr:
        return _ccw(order_pos, p.ray_letter(m), q.ray_letter(m), r.ray_letter(m))
    if lpq == m:
        pair, odd = (p, q), r
        ga, gb = p.ray_letter(m), q.ray_letter(m)
        back = -p.ray_letter(m - 1)
        return _ccw(order_pos, ga, gb, back)
    if lpr == m:
        # r and p diverge deepest; q hangs off earlier
        ga, gb = p.ray_letter(m), r.ray_letter(m)
        back = -p.ray_letter(m - 1)
        return _ccw(order_pos, ga, back, gb)
    ga, gb = q.ray_letter(m), r.ray_letter(m)
    back = -q.ray_letter(m - 1)
    return _ccw(order_pos, back, ga, gb)


def _linked(order_pos, a0: Cusp, a1: Cusp, c0: Cusp, c1: Cusp) -> bool:
    if c0 in (a0, a1) or c1 in (a0, a1):
        return False  # geodesics sharing a cusp never cross
    return _orient(order_pos, a0, c0, a1) != _orient(order_pos, a0, c1, a1)


def _vertex_set(s: int, e: int, w: Sequence[int], pad: int) -> set[tuple[int, ...]]:
    """Vertices near the tree path of the arc's base lift, padded by cusp
    winds of both signs."""
    out: set[tuple[int, ...]] = set()
    prefixes = [tuple(w[:t]) for t in range(len(w) + 1)]
    for p in range(-pad, pad + 1):
        head = tuple([s * (1 if p > 0 else -1)] * abs(p))
        for pre in prefixes:
            out.add(wmul(head, pre))
    for q in range(-pad, pad + 1):
        tail = tuple([e * (1 if q > 0 else -1)] * abs(q))
        out.add(wmul(w, tail))
    return out


def _interior_pair(n: int, arc_a: Arc, arc_b: Arc) -> int:
    order_pos = _germ_order(n)
    sa, ea = arc_a.endpoints
    u = arc_word(arc_a, sa)
    sb, eb = arc_b.endpoints
    v = arc_word(arc_b, sb)
    a0 = Cusp.make((), sa)
    a1 = Cusp.make(u, ea)

    def run_count(pad: int) -> int:
        va = _vertex_set(sa, ea, u, pad)
        vb = _vertex_set(sb, eb, v, pad)
        seen: set[frozenset] = set()
        count = 0
        for a_vert in va:
            for b_vert in vb:
                h = wmul(a_vert, winv(b_vert))
                c0 = Cusp.make(h, sb)
                c1 = Cusp.make(wmul(h, v), eb)
                if c0 == c1:
                    raise CurveError("degenerate lift")
                key = frozenset((c0, c1))
                if key in seen:
                    continue
                seen.add(key)
                if _linked(order_pos, a0, a1, c0, c1):
                    count += 1
        return count

    runs = max([1] + [abs(x) for x in u] + [abs(x) for x in v])
    pad = max(3, len(u) // 2 + 2, len(v) // 2 + 2)
    prev = run_count(pad)
    cur = run_count(pad + 2)
    while cur != prev:
        pad += 2
        if pad > 24:
            raise CurveError("intersection count failed to stabilize")
        prev, cur = cur, run_count(pad + 2)
    return cur


@dataclass(frozen=True)
class IntersectionCount:
    endpoint_count: int
    interior_count: int
    degenerate: bool = False

    def as_pair(self) -> tuple[int, int]:
        return (self.endpoint_count, self.interior_count)


def intersection(a: ArcSystem, b: ArcSystem) -> IntersectionCount:
    """Shared endpoints and minimal transverse interior intersections of two
    systems on the same disc; identical arcs are dropped from both sides and
    flagged as degenerate."""
    if a.n != b.n:
        raise CurveError("systems live on different discs")
    pts_a = {x for arc in a.arcs for x in arc.endpoints}
    pts_b = {x for arc in b.arcs for x in arc.endpoints}
    endpoint_count = len(pts_a & pts_b)
    # identical arcs are parallel copies: disjoint interiors by definition
    arcs_a = list(a.arcs)
    arcs_b = list(b.arcs)
    degenerate = False
    for common in set(arcs_a) & set(arcs_b):
        arcs_a.remove(common)
        arcs_b.remove(common)
        degenerate = True
    interior = 0
    for arc_a in arcs_a:
        for arc_b in arcs_b:
            interior += _interior_pair(a.n, arc_a, arc_b)
    return IntersectionCount(endpoint_count, interior, degenerate)


def self_disjoint(system: ArcSystem) -> bool:
    """Whether the stored arcs are realizable disjointly: pairwise disjoint
    endpoints and zero minimal interior intersections."""
    arcs = system.arcs
    for idx, arc_a in enumerate(arcs):
        for arc_b in arcs[idx + 1:]:
            if set(arc_a.endpoints) & set(arc_b.endpoints):
                return False
            if _interior_pair(system.n, arc_a, arc_b):
                return False
    return True


# -- slides -------------------------------------------------------------------


def slide(p: Matching, component_pair: tuple[int, int], path_spec=("e", 1)) -> Matching:
    """Pass component ``j`` over component ``i`` (indices into ``p.arcs``),
    dragging it through the channel below the line.

    ``path_spec = (end, sign)``: the connecting path leaves the moving arc
    near its lower ('s') or upper ('e') endpoint and circles the fixed arc
    with the given orientation.  Sliding back with the opposite sign is the
    identity.  Raises when the dragged arc would collide with another
    component.
    """
    i, j = component_pair
    if len(p.arcs) < 2:
        raise CurveError("sliding needs at least two components")
    if i == j or not (0 <= i < len(p.arcs)) or not (0 <= j < len(p.arcs)):
        raise CurveError("invalid component pair")
    end, sign = path_spec
    if end not in ("s", "e") or sign not in (1, -1):
        raise CurveError("path_spec must be ('s'|'e', +-1)")
    fixed = p.arcs[i]
    moving = p.arcs[j]
    sf, ef = fixed.endpoints
    wf = arc_word(fixed, sf)
    lasso = wmul((sf,), wf, (ef,), winv(wf))
    if sign < 0:
        lasso = winv(lasso)
    sm, em = moving.endpoints
    wm = arc_word(moving, sm)
    if end == "e":
        new_w = wmul(wm, lasso)
    else:
        new_w = wmul(winv(lasso), wm)
    new_arc = make_arc(p.n, sm, em, new_w)
    arcs = list(p.arcs)
    arcs[j] = new_arc
    out = Matching.make(p.n, arcs)
    if not self_disjoint(out):
        raise CurveError("slide path collides with another component")
    return out


# -- text format ---------------------------------------------------------------


_PAIR_RE = re.compile(r"\((\d+)\s*,\s*(\d+)\)\s*([+-]?)")


def parse_matching(text: str) -> Matching:
    """Parse ``"m; (a1,b1)+ (a2,b2)- ..."``; '+' (default) puts the arc in
    the upper half plane, '-' below."""
    head, _, body = text.partition(";")
    try:
        m = int(head.strip())
    except ValueError:
        raise CurveError(f"bad matching header {head!r}") from None
    n = 2 * m
    arcs = []
    consumed = 0
    for match in _PAIR_RE.finditer(body):
        a, b, half = int(match.group(1)), int(match.group(2)), match.group(3)
        a, b = sorted((a, b))
        if half == "-":
            w: tuple[int, ...] = ()
        else:
            w = tuple(-t for t in range(a + 1, b))
        arcs.append(make_arc(n, a, b, w))
        consumed += 1
    if consumed != m:
        raise CurveError(f"expected {m} pairs, found {consumed}")
    return Matching.make(n, arcs)


def format_matching(p: Matching) -> str:
    m = p.n // 2
    parts = []
    for arc in p.arcs:
        a, b = arc.endpoints
        upper = make_arc(p.n, a, b, tuple(-t for t in range(a + 1, b)))
        lower = make_arc(p.n, a, b, ())
        if arc == upper:
            parts.append(f"({a},{b})+")
        elif arc == lower:
            parts.append(f"({a},{b})-")
        else:
            parts.append(f"({a},{b})~")  # non-standard embedding
    return f"{m}; " + " ".join(parts)
