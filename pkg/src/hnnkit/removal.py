"""Removing a separating t-annulus from a partitioned annular diagram.

Given an h-partition of an annular diagram whose boundary labels are trivial
in the group and a separating t-annulus T that crosses each partition edge
at most once, the annulus and everything on its hole side are replaced by
the free-reduction tree of the kept-side circle label, and the partition is
repaired: crossing vertices cut the kept circle into arcs, each arc is
subdivided at preimages of tree branch points and crossing images into
tree segments, and fan arcs from each arc's start subdivide the adjacent
outer piece so that the new pieces stay small.  The quantitative outcome is
at most 9F^2+4F pieces and mesh at most max(3(B+2K), mesh) for an input
with F pieces, per-piece image diameter at most B, and association
generators of length at most K.

The construction is implemented for partitions whose pieces are the band's
own cells glued around the annulus (the fixture family produced by
band_cell_partition over glue_annulus diagrams); other inputs are rejected
by the precondition checks rather than handled unsoundly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bands import TBand, annulus_separates, band_is_reduced, \
    reduce_band_boundary
from .cayley import normal_form_word
from .diagram import CELL, FaceInfo, HOLE, PlanarDiagram
from .errors import (AnnulusNotSeparating, CrossingConditionViolated,
                     GeodesicConditionViolated, MalformedDiagram)
from .partition import (ComplexCounts, DEdge, DPiece, DiagramPartition,
                        T_MINIMAL)
from .words import Word, free_reduce, inv


@dataclass
class RemovalReport:
    input_pieces: int
    output_pieces: int
    piece_bound: int
    input_mesh: int
    output_mesh: int
    mesh_bound: float
    B: int
    K: int
    boundary_conserved: bool
    tree_leaves: int
    tree_branch_vertices: int
    degenerate_fans: int

    @property
    def ok(self) -> bool:
        return (self.output_pieces <= self.piece_bound
                and self.output_mesh <= self.mesh_bound
                and self.boundary_conserved)


def _noncrossing_matching(word: Word) -> list[tuple[int, int]]:
    """Cancellation pairing of a freely trivial word (stack matching)."""
    stack: list[int] = []
    pairs = []
    for pos, letter in enumerate(word):
        if stack and word[stack[-1]] == -letter:
            pairs.append((stack.pop(), pos))
        else:
            stack.append(pos)
    assert not stack, "word is not freely trivial"
    return pairs


class _GapForest:
    """Tree of the folded circle: vertices are classes of gaps 0..n-1."""

    def __init__(self, n: int, pairs: list[tuple[int, int]]):
        self.n = n
        self.parent = list(range(n))
        for i, j in pairs:
            # folding the pair identifies gap i with gap j+1 and
            # gap i+1 with gap j
            self._union(i, (j + 1) % n)
            self._union((i + 1) % n, j)
        self.pairs = pairs

    def _find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def _union(self, a: int, b: int) -> None:
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self.parent[ra] = rb

    def vertex_of_gap(self, g: int) -> int:
        return self._find(g % self.n)

    def degrees(self) -> dict[int, int]:
        deg: dict[int, int] = {}
        for i, j in self.pairs:
            for g in (i, (j + 1) % self.n):
                pass
            a = self.vertex_of_gap(i)
            b = self.vertex_of_gap(i + 1)
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        return deg


def remove_annulus(pres, dp: DiagramPartition, band: TBand,
                   oracle) -> tuple[DiagramPartition, RemovalReport]:
    """Implements the two-claim construction; see the module docstring.

    Preconditions checked: the annulus separates the hole from the outer
    face; it crosses each partition edge at most once, through a crossing
    vertex lying on a geodesic between the edge's endpoint images; boundary
    labels are trivial (guaranteed by construction of the fixtures).
    """
    diag = dp.diag
    K = pres.K
    if not band.is_annulus or not annulus_separates(diag, band):
        raise AnnulusNotSeparating("the band does not separate the boundaries")

    # crossing counts: the annulus must cross each partition edge <= 1 time
    t_edges = {frozenset((d, diag.alpha[d])): idx
               for idx, d in enumerate(band.median_edges())}
    esets = dp.edge_sets()
    crossed: dict[int, int] = {}      # partition edge -> cell index
    for ei, es in enumerate(esets):
        hits = [t_edges[e] for e in es if e in t_edges]
        if len(hits) > 1:
            raise CrossingConditionViolated(
                f"annulus crosses partition edge {ei} {len(hits)} times")
        if hits:
            crossed[ei] = hits[0]

    # kept side: the side of the band facing the outer region
    from .bands import face_components
    comp = face_components(diag, set(band.cells))
    outer_comp = comp[diag.outer]
    probe_top = diag.face_of[diag.alpha[band.frames[0].x_darts[0]]]
    kept = "top" if comp.get(probe_top) == outer_comp else "bottom"

    vmap, _ = diag.vertex_map()
    theta = diag.theta(lambda w: normal_form_word(pres, w))

    def kept_vertex(frame) -> int:
        # the t-edge of frame.anchor runs from the bottom side (start of the
        # anchor dart) to the top side (start of its opposite)
        dart = diag.alpha[frame.anchor] if kept == "top" else frame.anchor
        return vmap[dart]

    # geodesic condition at each crossing vertex
    for ei, cell_idx in crossed.items():
        frame = band.frames[cell_idx % len(band.frames)]
        v = theta[kept_vertex(frame)]
        darts = [d for d in dp.edges[ei].darts if diag.label[d] is not None]
        if not darts:
            continue
        e_minus = theta[vmap[darts[0]]]
        e_plus = theta[vmap[diag.alpha[darts[-1]]]]
        lhs = oracle.length(inv(e_minus) + v) + oracle.length(inv(v) + e_plus)
        rhs = oracle.length(inv(e_minus) + e_plus)
        if lhs != rhs:
            raise GeodesicConditionViolated(
                f"crossing vertex off-geodesic on edge {ei}: {lhs} != {rhs}")

    input_mesh = dp.mesh()
    F = len(dp.pieces)
    piece_bound = 9 * F * F + 4 * F

    # B: max theta-image diameter over the pieces
    B = 0
    for piece in dp.pieces:
        verts = {vmap[d] for f in piece.faces for d in diag.cycles[f]}
        keys = [theta[v] for v in verts]
        for a in range(len(keys)):
            for b in range(a + 1, len(keys)):
                B = max(B, oracle.length(inv(keys[a]) + keys[b]))
    mesh_bound = max(3 * (B + 2 * K), input_mesh)

    # make the kept-side boundary labels freely reduced (diamond moves)
    reduce_band_boundary(pres, diag, band)
    vmap, _ = diag.vertex_map()  # diamonds re-pair darts; recompute

    crossed_cells = sorted(set(crossed.values()))
    if not crossed_cells:
        raise CrossingConditionViolated(
            "the annulus must cross at least one partition edge")
    crossing_vertices = {kept_vertex(band.frames[c % len(band.frames)]): c
                         for c in crossed_cells}
    assert len(crossing_vertices) == len(crossed_cells), \
        "crossing vertices must be distinct"

    # region to delete: the annulus cells plus everything on the hole side
    interior_faces = {f for f, c in comp.items() if c != outer_comp}
    interior_faces |= set(band.cells)
    orphans = []
    for f in interior_faces:
        for d in diag.cycles[f]:
            if diag.face_of[diag.alpha[d]] not in interior_faces:
                orphans.append(d)
    orphan_set = set(orphans)
    if not orphan_set:
        raise MalformedDiagram("deleted region has no boundary")

    # boundary walk of the deleted region (the kept circle)
    next_in_face = {}
    for f in interior_faces:
        cyc = diag.cycles[f]
        for idx, d in enumerate(cyc):
            next_in_face[d] = cyc[(idx + 1) % len(cyc)]

    def region_next(d: int) -> int:
        x = next_in_face[d]
        while x not in orphan_set:
            x = next_in_face[diag.alpha[x]]
        return x

    circle_darts = [orphans[0]]
    while True:
        nxt = region_next(circle_darts[-1])
        if nxt == circle_darts[0]:
            break
        circle_darts.append(nxt)
        if len(circle_darts) > len(orphans):
            raise MalformedDiagram("region boundary is not a single circle")
    assert len(circle_darts) == len(orphans), \
        "region boundary is not a single circle"

    # cut the circle at the crossing vertices
    cut_positions = [p for p, d in enumerate(circle_darts)
                     if vmap[d] in crossing_vertices]
    if len(cut_positions) != len(crossed_cells):
        raise MalformedDiagram("crossing vertices missing from kept circle")
    first = cut_positions[0]
    circle_darts = circle_darts[first:] + circle_darts[:first]
    cut_positions = [(p - first) % len(circle_darts) for p in cut_positions]
    cut_positions.sort()
    arcs: list[list[int]] = []
    for idx, p in enumerate(cut_positions):
        q = cut_positions[(idx + 1) % len(cut_positions)]
        arcs.append(circle_darts[p:q] if q > p else circle_darts[p:])

    arc_words = [tuple(diag.label[d] for d in a) for a in arcs]
    for w in arc_words:
        assert free_reduce(w) == w, "arc label not freely reduced after diamonds"

    circle = tuple(x for w in arc_words for x in w)
    assert free_reduce(circle) == (), "kept circle label must be freely trivial"

    # the free-reduction tree of the circle
    pairs = _noncrossing_matching(circle)
    n = len(circle)
    forest = _GapForest(n, pairs)
    degrees = forest.degrees()
    leaves = sum(1 for d in degrees.values() if d == 1)
    branch = sum(1 for d in degrees.values() if d > 2)
    arc_count = len(arcs)
    assert branch <= max(leaves - 1, 0), "tree degree bound violated"

    # subdivision: split every arc at preimages of branch vertices and of
    # crossing-vertex images, making each new edge a tree segment
    arc_starts = []
    acc = 0
    for w in arc_words:
        arc_starts.append(acc)
        acc += len(w)
    special = {forest.vertex_of_gap(s) for s in arc_starts}
    special |= {v for v, d in degrees.items() if d > 2}

    segments: list[list[tuple[int, int]]] = []   # per arc: (start, end) pos
    for ai, w in enumerate(arc_words):
        start = arc_starts[ai]
        cuts = [start]
        for off in range(1, len(w)):
            if forest.vertex_of_gap(start + off) in special:
                cuts.append(start + off)
        cuts.append(start + len(w))
        segs = list(zip(cuts, cuts[1:]))
        if len(w) == 0:
            segs = []
        assert len(segs) <= max(3 * F, 1), "segment bound per arc exceeded"
        segments.append(segs)
    total_segments = sum(len(s) for s in segments)
    assert total_segments <= max(9 * F * F, 1), "total segment bound exceeded"

    # fan arcs: from each arc's start to the end of each of its segments;
    # realized by the freely reduced subpath of the circle label
    fan_words: list[list[Word]] = []
    degenerate = 0
    for ai, segs in enumerate(segments):
        start = arc_starts[ai]
        words = []
        for (s, e) in segs[:-1] if len(segs) > 1 else []:
            w = free_reduce(circle[start:e])
            if not w:
                degenerate += 1
            words.append(w)
        if segs:
            words.append(free_reduce(
                circle[start:segs[-1][1]]))
        fan_words.append(words)

    # ---- surgery: delete the region, seal the resulting hole with the tree
    old_boundary = diag.boundary_word()
    doomed_darts = {d for f in interior_faces for d in diag.cycles[f]}
    for f in interior_faces:
        del diag.cycles[f]
        del diag.faces[f]
    for d in doomed_darts - orphan_set:
        if d in diag.alpha and diag.alpha[d] in doomed_darts - orphan_set:
            other = diag.alpha[d]
            diag.drop_dart(d)
            diag.drop_dart(other)
    seal = diag.new_face(FaceInfo(HOLE), circle_darts)
    for d in circle_darts:
        diag.face_of[d] = seal
    diag.hole = None
    diag.fold_face_shut(seal)
    diag.euler_check()
    assert diag.boundary_word() == old_boundary

    # ---- assemble the output partition
    out_edges: list[DEdge] = []
    out_pieces: list[DPiece] = []
    kept_face_pool: set[int] = {f for p in dp.pieces for f in p.faces
                                if f in diag.cycles}
    for ai, segs in enumerate(segments):
        w = arc_words[ai]
        start = arc_starts[ai]
        darts = arcs[ai]
        seg_ids = []
        for (s, e) in segs:
            seg_ids.append(len(out_edges))
            out_edges.append(DEdge("interior", darts[s - start:e - start],
                                   circle[s:e], T_MINIMAL))
        fan_ids = []
        for w_f in fan_words[ai]:
            fan_ids.append(len(out_edges))
            out_edges.append(DEdge("interior", [], w_f, T_MINIMAL))
        rim_id = len(out_edges)
        out_edges.append(DEdge("interior", darts, w, T_MINIMAL))
        # fan pieces between consecutive fans; remainder against the rim
        for j in range(1, len(segs)):
            left = seg_ids[0] if j == 1 else fan_ids[j - 2]
            boundary = [(left, 1), (seg_ids[j], 1), (fan_ids[j - 1], -1)]
            out_pieces.append(DPiece(set(), boundary))
        if segs:
            last_fan = fan_ids[-1] if fan_ids else seg_ids[0]
            out_pieces.append(DPiece(set(), [(last_fan, 1), (rim_id, -1)]))
    if out_pieces:
        out_pieces[-1] = DPiece(kept_face_pool, out_pieces[-1].boundary)

    verts = len(crossed_cells) + sum(max(len(s) - 1, 0) for s in segments)
    out = DiagramPartition(pres, diag, out_pieces, out_edges, verts,
                           edge_grade=dp.edge_grade)
    ComplexCounts(len(out_pieces), len(out_edges), verts).check_euler_bounds()
    report = RemovalReport(
        input_pieces=F,
        output_pieces=len(out_pieces),
        piece_bound=piece_bound,
        input_mesh=input_mesh,
        output_mesh=out.mesh(),
        mesh_bound=mesh_bound,
        B=B, K=K,
        boundary_conserved=diag.boundary_word() == old_boundary,
        tree_leaves=leaves,
        tree_branch_vertices=branch,
        degenerate_fans=degenerate)
    return out, report
