"""Planar diagrams of braid and plat closures.

A diagram is a 4-valent graph: crossings with four corner slots
(top-left, top-right, bottom-left, bottom-right in the braid picture,
where both strands run downward) glued along edges, plus a count of
crossing-free circles.  Closure arcs of a braid run to the right of the
braid and cross nothing, so they are absorbed into the edges.

Crossing conventions
--------------------
* The two strands of a crossing are the TL-BR and TR-BL diagonals.
* ``over_tlbr`` records which diagonal is the over-strand; with both
  strands oriented downward the crossing sign is -1 when TL-BR is over
  (this is the letter ``s_k``) and +1 otherwise.
* Smoothings: the "identity" smoothing joins TL-BL and TR-BR, the
  "cap-cup" smoothing joins TL-TR and BL-BR.  The 0-smoothing is the one
  obtained by rotating the over-strand counterclockwise onto the
  under-strand: cap-cup when TL-BR is over, identity otherwise.  This is
  unoriented data and never changes under reorientation.
* The crossing sign for arbitrary orientations is the both-downward sign
  times (-1) for each strand running upward.

Resolving one crossing keeps the orientations when the chosen smoothing
is compatible with them; otherwise the arc of the crossing complement
ending at the top-left corner is reversed first.  The integer ``v``
returned by :meth:`LinkDiagram.crossing_v` is the signed count of
crossings of that arc with the other components of the complement, which
is exactly the writhe correction caused by the reversal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .braid import BraidWord

TL, TR, BL, BR = 0, 1, 2, 3
_PARTNER = (BR, BL, TR, TL)  # same-strand slot across the crossing
_IDENTITY_PAIRS = ((TL, BL), (TR, BR))
_CAPCUP_PAIRS = ((TL, TR), (BL, BR))


class DiagramError(ValueError):
    pass


@dataclass
class Crossing:
    edges: list[int]  # edge id at [TL, TR, BL, BR]
    over_tlbr: bool

    @property
    def zero_is_capcup(self) -> bool:
        return self.over_tlbr

    def pairs(self, smoothing: int):
        capcup = (smoothing == 0) == self.zero_is_capcup
        return _CAPCUP_PAIRS if capcup else _IDENTITY_PAIRS


@dataclass(frozen=True)
class CircleSet:
    """Circles of one full smoothing: total count and, for the edges that
    survive crossings, the circle index of each edge (free circles occupy
    the trailing indices)."""

    n_circles: int
    edge_to_circle: tuple[int, ...]
    n_free: int


class LinkDiagram:
    def __init__(self, crossings, edge_src, edge_dst, free_circles=0, provenance=""):
        self.crossings: list[Crossing] = crossings
        # edge_src[e] / edge_dst[e] are (crossing index, slot); an edge runs
        # from its src slot to its dst slot.
        self.edge_src: list[tuple[int, int]] = edge_src
        self.edge_dst: list[tuple[int, int]] = edge_dst
        self.free_circles = free_circles
        self.provenance = provenance
        self._check()

    # -- structure ---------------------------------------------------------

    def _check(self):
        n_ends = [0] * self.n_edges
        for ci, c in enumerate(self.crossings):
            for slot in (TL, TR, BL, BR):
                e = c.edges[slot]
                if not 0 <= e < self.n_edges:
                    raise DiagramError("crossing references unknown edge")
                n_ends[e] += 1
                if (ci, slot) != self.edge_src[e] and (ci, slot) != self.edge_dst[e]:
                    raise DiagramError("edge endpoint tables disagree with crossing slots")
        if any(n != 2 for n in n_ends):
            raise DiagramError("every edge must have exactly one head and one tail")

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_edges(self) -> int:
        return len(self.edge_src)

    def incoming(self, ci: int, slot: int) -> bool:
        """True when the edge at this slot flows into the crossing here."""
        e = self.crossings[ci].edges[slot]
        return self.edge_dst[e] == (ci, slot)

    def sign(self, ci: int) -> int:
        c = self.crossings[ci]
        base = -1 if c.over_tlbr else 1
        eps = 1
        for top, bottom in ((TL, BR), (TR, BL)):
            into_top = self.incoming(ci, top)
            into_bottom = self.incoming(ci, bottom)
            if into_top == into_bottom:
                raise DiagramError("inconsistent strand orientation at a crossing")
            if not into_top:  # strand runs upward
                eps = -eps
        return base * eps

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(self.sign(ci) for ci in range(self.n_crossings))

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    def writhe(self) -> int:
        return self.n_plus - self.n_minus

    # -- smoothing ---------------------------------------------------------

    def smooth(self, assignment: Sequence[int]) -> CircleSet:
        """Circles of the complete smoothing ``assignment`` in {0,1}^N."""
        if len(assignment) != self.n_crossings:
            raise DiagramError(
                f"assignment length {len(assignment)} != {self.n_crossings} crossings"
            )
        parent = list(range(self.n_edges))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for ci, c in enumerate(self.crossings):
            for sa, sb in c.pairs(assignment[ci]):
                ra, rb = find(c.edges[sa]), find(c.edges[sb])
                if ra != rb:
                    parent[ra] = rb
        reps = sorted({find(e) for e in range(self.n_edges)})
        index = {r: i for i, r in enumerate(reps)}
        edge_to_circle = tuple(index[find(e)] for e in range(self.n_edges))
        return CircleSet(len(reps) + self.free_circles, edge_to_circle, self.free_circles)

    # -- the complement arc at a crossing and the correction v --------------

    def _complement_arc(self, ci: int):
        """Walk the complement arc starting at the TL corner of ``ci``.

        Returns (edges, passages, end_slot): the edge ids traversed, the
        (crossing, entry slot) passages through other crossings, and the
        slot of ``ci`` where the arc terminates.
        """
        c = self.crossings[ci]
        e = c.edges[TL]
        at = (ci, TL)
        edges = []
        passages = []
        while True:
            edges.append(e)
            ends = [self.edge_src[e], self.edge_dst[e]]
            other = ends[1] if ends[0] == at else ends[0]
            cj, slot = other
            if cj == ci:
                return edges, passages, slot
            passages.append((cj, slot))
            at = (cj, _PARTNER[slot])
            e = self.crossings[cj].edges[_PARTNER[slot]]

    def crossing_v(self, ci: int) -> int:
        """Signed count of crossings between the complement arc ending at the
        top-left corner of ``ci`` and the other components of the complement."""
        if not 0 <= ci < self.n_crossings:
            raise DiagramError(f"no crossing {ci} in a {self.n_crossings}-crossing diagram")
        _, passages, _ = self._complement_arc(ci)
        hits: dict[int, int] = {}
        for cj, _slot in passages:
            hits[cj] = hits.get(cj, 0) + 1
        return sum(self.sign(cj) for cj, n in hits.items() if n == 1)

    # -- resolutions --------------------------------------------------------

    def _oriented_compatible(self, ci: int, smoothing: int) -> bool:
        c = self.crossings[ci]
        for sa, sb in c.pairs(smoothing):
            if self.incoming(ci, sa) == self.incoming(ci, sb):
                return False
        return True

    def resolve(self, ci: int, smoothing: int) -> "LinkDiagram":
        """The diagram with crossing ``ci`` replaced by one of its smoothings.

        For the orientation-incompatible smoothing, the complement arc at the
        top-left corner is reversed first, exactly compensating the non-local
        orientation change measured by :meth:`crossing_v`.
        """
        if smoothing not in (0, 1):
            raise DiagramError("smoothing must be 0 or 1")
        src = list(self.edge_src)
        dst = list(self.edge_dst)
        if not self._oriented_compatible(ci, smoothing):
            arc_edges, _, _ = self._complement_arc(ci)
            for e in set(arc_edges):
                src[e], dst[e] = dst[e], src[e]
        c = self.crossings[ci]

        # Fuse the four edge-ends at ci along the smoothing's pairs.
        parent = list(range(self.n_edges))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for sa, sb in c.pairs(smoothing):
            ra, rb = find(c.edges[sa]), find(c.edges[sb])
            if ra != rb:
                parent[ra] = rb

        touched = set(c.edges)
        groups: dict[int, list[int]] = {}
        for e in touched:
            groups.setdefault(find(e), []).append(e)

        new_free = self.free_circles
        new_src: list = []
        new_dst: list = []
        old_to_new: dict[int, int] = {}

        for e in range(self.n_edges):
            if e in touched:
                continue
            old_to_new[e] = len(new_src)
            new_src.append(src[e])
            new_dst.append(dst[e])

        for _root, members in groups.items():
            loose_srcs = [src[e] for e in members if src[e][0] != ci]
            loose_dsts = [dst[e] for e in members if dst[e][0] != ci]
            if not loose_srcs and not loose_dsts:
                new_free += 1
                continue
            if len(loose_srcs) != 1 or len(loose_dsts) != 1:
                raise DiagramError("resolved smoothing is not orientable; reversal failed")
            nid = len(new_src)
            new_src.append(loose_srcs[0])
            new_dst.append(loose_dsts[0])
            for e in members:
                old_to_new[e] = nid

        new_crossings = []
        cross_map = {}
        for cj, cc in enumerate(self.crossings):
            if cj == ci:
                continue
            cross_map[cj] = len(new_crossings)
            new_crossings.append(Crossing([old_to_new[e] for e in cc.edges], cc.over_tlbr))

        def remap(p):
            return (cross_map[p[0]], p[1])

        new_src = [remap(p) for p in new_src]
        new_dst = [remap(p) for p in new_dst]
        return LinkDiagram(
            new_crossings,
            new_src,
            new_dst,
            free_circles=new_free,
            provenance=f"{self.provenance}; resolve({ci},{smoothing})",
        )

    # -- export -------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "crossings": [
                {
                    "sign": self.sign(ci),
                    "over_tlbr": c.over_tlbr,
                    "edges": {
                        "tl": c.edges[TL],
                        "tr": c.edges[TR],
                        "bl": c.edges[BL],
                        "br": c.edges[BR],
                    },
                }
                for ci, c in enumerate(self.crossings)
            ],
            "free_circles": self.free_circles,
            "provenance": self.provenance,
        }


# -- constructors ------------------------------------------------------------


class _Builder:
    """Accumulates strand stubs and merge events, then compacts the merged
    stub classes into edges.  Builder-role "src" means the stub leaves a
    crossing bottom, "dst" that it enters a crossing top; cap edges of a
    plat can end up with two attachments of the same role and are
    reoriented afterwards."""

    def __init__(self):
        self.parent: list[int] = []
        self.att: list[list[tuple[str, tuple[int, int]]]] = []
        self.links: list[list[int]] = []

    def new_stub(self) -> int:
        self.parent.append(len(self.parent))
        self.att.append([])
        self.links.append([])
        return len(self.parent) - 1

    def attach(self, stub: int, role: str, pos: tuple[int, int]) -> None:
        self.att[stub].append((role, pos))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def merge(self, a: int, b: int) -> None:
        self.links[a].append(b)
        self.links[b].append(a)
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def side_attachment(self, stub: int, first_link: int) -> tuple[int, int]:
        """First crossing attachment reached from ``stub`` walking away from
        the merge partner ``first_link`` (used to find which attachment of a
        cap edge sits on a given endpoint's side)."""
        prev, cur = first_link, stub
        while True:
            if self.att[cur]:
                return self.att[cur][0][1]
            nxts = [s for s in self.links[cur] if s != prev]
            if len(nxts) != 1:
                raise DiagramError("cap chain walk failed")
            prev, cur = cur, nxts[0]

    def finish(self, crossings, free_circles, provenance):
        classes: dict[int, list[tuple[str, tuple[int, int]]]] = {}
        for s in range(len(self.parent)):
            if self.att[s]:
                classes.setdefault(self.find(s), []).extend(self.att[s])
        roots = sorted(classes)
        index = {r: i for i, r in enumerate(roots)}
        edge_src: list = []
        edge_dst: list = []
        for r in roots:
            atts = classes[r]
            if len(atts) != 2:
                raise DiagramError("edge with attachment count != 2")
            srcs = [p for role, p in atts if role == "src"]
            dsts = [p for role, p in atts if role == "dst"]
            if len(srcs) == 1 and len(dsts) == 1:
                edge_src.append(srcs[0])
                edge_dst.append(dsts[0])
            else:  # same-role pair; orientation fixed by the caller
                edge_src.append(atts[0][1])
                edge_dst.append(atts[1][1])
        for c in crossings:
            c.edges = [index[self.find(e)] for e in c.edges]
        d = LinkDiagram(crossings, edge_src, edge_dst, free_circles, provenance)
        root_to_edge = {r: i for i, r in enumerate(roots)}
        return d, root_to_edge


def _braid_body(b: BraidWord, builder: _Builder):
    """Lay out the crossings of a braid word; returns (crossings, top stubs,
    bottom stubs).  All strands run downward."""
    m = b.strands
    top = [builder.new_stub() for _ in range(m)]
    cur = list(top)
    crossings = []
    for k, s in b.letters:
        ci = len(crossings)
        tl, tr = cur[k - 1], cur[k]
        bl, br = builder.new_stub(), builder.new_stub()
        builder.attach(tl, "dst", (ci, TL))
        builder.attach(tr, "dst", (ci, TR))
        builder.attach(bl, "src", (ci, BL))
        builder.attach(br, "src", (ci, BR))
        crossings.append(Crossing([tl, tr, bl, br], over_tlbr=(s > 0)))
        cur[k - 1], cur[k] = bl, br
    return crossings, top, cur


def braid_closure_diagram(b: BraidWord) -> LinkDiagram:
    """Close off all strands of ``b`` to the right; one crossing per letter,
    crossing sign = minus the letter sign."""
    builder = _Builder()
    crossings, top, cur = _braid_body(b, builder)
    free = 0
    for p in range(b.strands):
        if top[p] == cur[p]:
            free += 1
        else:
            builder.merge(cur[p], top[p])
    d, _ = builder.finish(crossings, free, provenance=f"closure({b})")
    return d


def _pairing_of(matching) -> list[tuple[int, int]]:
    """Accept a curves.Matching (via .pairs()) or a bare iterable of pairs."""
    pairs = matching.pairs() if hasattr(matching, "pairs") else list(matching)
    return [tuple(sorted(p)) for p in pairs]


def plat_closure(top_matching, b: BraidWord, bottom_matching) -> LinkDiagram:
    """Cap the braid with matchings on top and bottom.

    Only the pairings matter for the resulting link: the cap arcs are
    crossingless and any two realizations of a pairing are ambient
    isotopic rel the braid endpoints.  Each component is oriented
    starting from its lowest-index top cap ``(i, j)``, flowing from point
    ``i`` across the cap to point ``j`` and onwards.
    """
    m2 = b.strands
    if m2 % 2 != 0:
        raise DiagramError("plat closure needs an even number of strands")
    top_pairs = _pairing_of(top_matching)
    bottom_pairs = _pairing_of(bottom_matching)
    for pairs in (top_pairs, bottom_pairs):
        pts = sorted(x for p in pairs for x in p)
        if pts != list(range(1, m2 + 1)):
            raise DiagramError(f"matching must pair the points 1..{m2} exactly once each")

    builder = _Builder()
    crossings, top, cur = _braid_body(b, builder)
    for i, j in top_pairs:
        builder.merge(top[i - 1], top[j - 1])
    for i, j in bottom_pairs:
        builder.merge(cur[i - 1], cur[j - 1])

    attached_roots = {
        builder.find(s) for s in range(len(builder.parent)) if builder.att[s]
    }
    free = len({builder.find(s) for s in top} - attached_roots)

    d, root_to_edge = builder.finish(crossings, free, provenance=f"plat({b})")

    cap_starts = []
    for i, j in sorted(top_pairs):
        root = builder.find(top[i - 1])
        if root not in root_to_edge:
            continue  # crossing-free circle
        e = root_to_edge[root]
        i_side = builder.side_attachment(top[i - 1], top[j - 1])
        j_side = builder.side_attachment(top[j - 1], top[i - 1])
        cap_starts.append((e, i_side, j_side))
    _orient_components(d, cap_starts)
    return d


def _orient_components(d: LinkDiagram, cap_starts) -> None:
    """Orient every component, seeding each from the first cap edge listed
    for it: the cap edge flows from its i-side attachment to its j-side."""
    oriented = [False] * d.n_edges

    def orient_edge(e: int, src: tuple[int, int], dst: tuple[int, int]):
        if {d.edge_src[e], d.edge_dst[e]} != {src, dst}:
            raise DiagramError("orientation seed does not match edge attachments")
        d.edge_src[e], d.edge_dst[e] = src, dst
        oriented[e] = True

    for e0, i_side, j_side in cap_starts:
        if oriented[e0]:
            continue
        orient_edge(e0, src=i_side, dst=j_side)
        # propagate forward from the dst end around the component
        at = d.edge_dst[e0]
        while True:
            ci, slot = at
            nslot = _PARTNER[slot]
            ne = d.crossings[ci].edges[nslot]
            if oriented[ne]:
                break
            near = (ci, nslot)
            ends = [d.edge_src[ne], d.edge_dst[ne]]
            far = ends[1] if ends[0] == near else ends[0]
            orient_edge(ne, src=near, dst=far)
            at = far
    if d.n_crossings and not all(oriented):
        raise DiagramError("some component has no top cap; cannot orient")
    for ci in range(d.n_crossings):
        d.sign(ci)  # raises on inconsistency
