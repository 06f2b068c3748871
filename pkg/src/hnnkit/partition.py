"""Loop partitions, induced diagram partitions, and crossing checks.

A partition of a loop is a tiling of the disc by pieces whose vertices map
to Cayley-graph vertices; boundary edges are subpaths of the loop and
interior edges are realized by Britton-reduced (t-minimal) words, whose
grade is recorded in every artifact since full t-shortestness is only
certified against a ball oracle.  The exact searches below restrict interior
vertices to images of the loop's own vertices (chords, plus single-center
tripods); certificates state that restricted class.

Induced diagram partitions fill every piece with a reduced disc diagram and
glue the discs along their interior arcs; the interior-edge structure of a
disc partition is a tree, so the assembly is a sequence of two-component
gluings (zero-length chords become 0-edge bridges).

The Euler bounds (edges <= 3F, vertices <= 2F for F pieces) are asserted on
every complex produced here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .bands import TBand, extract_bands, maximal_annuli, reduce_all_bands
from .britton import britton_reduce, verify_t_shortest
from .diagram import (CELL, FaceInfo, OUTER, PlanarDiagram, build_diagram,
                      merge_diagrams)
from .errors import PieceNotTrivial, SearchSpaceTooLarge
from .presentation import MultipleHnnPresentation
from .words import Word, inv

T_MINIMAL = "t-minimal"
T_SHORTEST = "t-shortest-certified"


# -- abstract complex counts --------------------------------------------------

@dataclass
class ComplexCounts:
    pieces: int
    edges: int
    vertices: int
    degree_violations: int = 0

    def check_euler_bounds(self) -> None:
        assert self.edges <= 3 * self.pieces, \
            f"{self.edges} edges > 3 * {self.pieces} pieces"
        assert self.vertices <= 2 * self.pieces, \
            f"{self.vertices} vertices > 2 * {self.pieces} pieces"


# -- loop partitions -----------------------------------------------------------

@dataclass
class PEdge:
    kind: str                      # 'boundary' | 'interior'
    word: Word
    span: tuple[int, int] | None   # boundary positions [start, end) mod n
    ends: tuple[int, int]          # vertex ids; -1 for the degenerate case
    grade: str

    @property
    def length(self) -> int:
        return len(self.word)


@dataclass
class LoopPartition:
    pres: MultipleHnnPresentation
    loop: Word
    vertex_words: list[Word]              # image words of partition vertices
    edges: list[PEdge]
    pieces: list[list[tuple[int, int]]]   # cyclic boundary: (edge id, dir)

    def piece_word(self, k: int) -> Word:
        out: list[int] = []
        for eid, direction in self.pieces[k]:
            w = self.edges[eid].word
            out.extend(w if direction > 0 else inv(w))
        return tuple(out)

    def piece_perimeter(self, k: int) -> int:
        return sum(self.edges[eid].length for eid, _ in self.pieces[k])

    def mesh(self) -> int:
        return max(self.piece_perimeter(k) for k in range(len(self.pieces)))

    def rmesh(self, subset) -> int:
        vals = [self.piece_perimeter(k) for k in subset]
        return max(vals) if vals else 0

    def edge_grade(self) -> str:
        grades = {e.grade for e in self.edges if e.kind == "interior"}
        return T_MINIMAL if (not grades or T_MINIMAL in grades) else T_SHORTEST

    def counts(self) -> ComplexCounts:
        genuine = [e for e in self.edges if e.ends != (-1, -1)]
        verts = {v for e in genuine for v in e.ends if v != -1}
        c = ComplexCounts(len(self.pieces), len(genuine), len(verts))
        c.check_euler_bounds()
        return c

    def certify_edges(self, oracle) -> None:
        """Upgrade interior edges to t-shortest when the oracle certifies."""
        for e in self.edges:
            if e.kind != "interior":
                continue
            if verify_t_shortest(self.pres, e.word, oracle).is_t_shortest:
                e.grade = T_SHORTEST


def chord_word(pres: MultipleHnnPresentation, loop: Word, i: int, j: int) -> Word:
    """t-minimal word from loop vertex i to loop vertex j (0 <= i < j < n)."""
    return britton_reduce(pres, loop[i:j])


def single_piece_partition(pres, loop: Word) -> LoopPartition:
    e = PEdge("boundary", loop, (0, 0), (-1, -1), "boundary")
    return LoopPartition(pres, loop, [], [e], [[(0, 1)]])


def two_piece_partition(pres, loop: Word, i: int, j: int,
                        cw: Word | None = None) -> LoopPartition:
    if cw is None:
        cw = chord_word(pres, loop, i, j)
    arc_in = PEdge("boundary", loop[i:j], (i, j), (0, 1), "boundary")
    arc_out = PEdge("boundary", loop[j:] + loop[:i], (j, i), (1, 0), "boundary")
    chord = PEdge("interior", cw, None, (0, 1), T_MINIMAL)
    return LoopPartition(
        pres, loop, [loop[:i], loop[:j]], [arc_in, arc_out, chord],
        [[(0, 1), (2, -1)], [(2, 1), (1, 1)]])


def nested_partition(pres, loop, i, j, k, l, c1, c2) -> LoopPartition:
    # chords (i, j) and (k, l) with i < k < l < j
    e = [PEdge("boundary", loop[i:k], (i, k), (0, 2), "boundary"),
         PEdge("boundary", loop[k:l], (k, l), (2, 3), "boundary"),
         PEdge("boundary", loop[l:j], (l, j), (3, 1), "boundary"),
         PEdge("boundary", loop[j:] + loop[:i], (j, i), (1, 0), "boundary"),
         PEdge("interior", c1, None, (0, 1), T_MINIMAL),
         PEdge("interior", c2, None, (2, 3), T_MINIMAL)]
    pieces = [[(4, 1), (3, 1)],                      # outside (i,j)
              [(0, 1), (5, 1), (2, 1), (4, -1)],     # between the chords
              [(1, 1), (5, -1)]]                     # inside (k,l)
    verts = [loop[:i], loop[:j], loop[:k], loop[:l]]
    return LoopPartition(pres, loop, verts, e, pieces)


def disjoint_partition(pres, loop, i, j, k, l, c1, c2) -> LoopPartition:
    # chords (i, j) and (k, l) with i < j < k < l
    e = [PEdge("boundary", loop[i:j], (i, j), (0, 1), "boundary"),
         PEdge("boundary", loop[j:k], (j, k), (1, 2), "boundary"),
         PEdge("boundary", loop[k:l], (k, l), (2, 3), "boundary"),
         PEdge("boundary", loop[l:] + loop[:i], (l, i), (3, 0), "boundary"),
         PEdge("interior", c1, None, (0, 1), T_MINIMAL),
         PEdge("interior", c2, None, (2, 3), T_MINIMAL)]
    pieces = [[(0, 1), (4, -1)],
              [(2, 1), (5, -1)],
              [(1, 1), (5, 1), (3, 1), (4, 1)]]
    verts = [loop[:i], loop[:j], loop[:k], loop[:l]]
    return LoopPartition(pres, loop, verts, e, pieces)


def tripod_partition(pres, loop, i, j, k, ci, cj, ck, center) -> LoopPartition:
    # boundary vertices i < j < k joined to a common center image
    e = [PEdge("boundary", loop[i:j], (i, j), (0, 1), "boundary"),
         PEdge("boundary", loop[j:k], (j, k), (1, 2), "boundary"),
         PEdge("boundary", loop[k:] + loop[:i], (k, i), (2, 0), "boundary"),
         PEdge("interior", ci, None, (0, 3), T_MINIMAL),
         PEdge("interior", cj, None, (1, 3), T_MINIMAL),
         PEdge("interior", ck, None, (2, 3), T_MINIMAL)]
    pieces = [[(0, 1), (4, 1), (3, -1)],
              [(1, 1), (5, 1), (4, -1)],
              [(2, 1), (3, 1), (5, -1)]]
    verts = [loop[:i], loop[:j], loop[:k], center]
    return LoopPartition(pres, loop, verts, e, pieces)


def enumerate_partitions(pres, loop: Word, budget: int):
    """All partitions of the restricted class with at most ``budget`` pieces.

    Interior vertices only at images of the loop's vertices; chords pairwise
    non-crossing with distinct endpoints; tripods through a single center.
    """
    n = len(loop)
    yield single_piece_partition(pres, loop)
    if budget < 2:
        return
    chords = {}
    for i, j in itertools.combinations(range(n), 2):
        chords[(i, j)] = chord_word(pres, loop, i, j)
        yield two_piece_partition(pres, loop, i, j, chords[(i, j)])
    if budget < 3:
        return
    for (i, j), (k, l) in itertools.combinations(sorted(chords), 2):
        if i < k < l < j:
            yield nested_partition(pres, loop, i, j, k, l,
                                   chords[(i, j)], chords[(k, l)])
        elif k < i < j < l:
            yield nested_partition(pres, loop, k, l, i, j,
                                   chords[(k, l)], chords[(i, j)])
        elif j < k or l < i:
            a, b = ((i, j), (k, l)) if j < k else ((k, l), (i, j))
            yield disjoint_partition(pres, loop, a[0], a[1], b[0], b[1],
                                     chords[a], chords[b])

    def cw(a, b):
        if a == b:
            return ()
        return chords[(a, b)] if a < b else inv(chords[(b, a)])

    for i, j, k in itertools.combinations(range(n), 3):
        for m in range(n):
            yield tripod_partition(pres, loop, i, j, k,
                                   cw(i, m), cw(j, m), cw(k, m), loop[:m])


def is_partitionable(pres, loop: Word, budget: int,
                     delta: float | None = None) -> LoopPartition | None:
    """A partition with mesh < delta (default |loop|/2) within the budget.

    Exact over the restricted class for budget <= 3; greedy recursive
    bisection above that.
    """
    assert len(loop) >= 2 and britton_reduce(pres, loop) == ()
    if delta is None:
        delta = len(loop) / 2
    if budget <= 3:
        best = None
        for part in enumerate_partitions(pres, loop, budget):
            if part.mesh() < delta and \
                    (best is None or len(part.pieces) < len(best.pieces)):
                best = part
        if best is not None:
            best.counts()
        return best
    return _greedy_bisection(pres, loop, budget, delta)


def _greedy_bisection(pres, loop, budget, delta) -> LoopPartition | None:
    """Split the worst piece by its best chord until under the mesh target.

    Heuristic: nested splits are flattened, keeping only the perimeter
    bookkeeping that the mesh reports.
    """
    part = single_piece_partition(pres, loop)
    while len(part.pieces) < budget and part.mesh() >= delta:
        worst = max(range(len(part.pieces)), key=part.piece_perimeter)
        word = part.piece_word(worst)
        n = len(word)
        best = None
        for i, j in itertools.combinations(range(n), 2):
            cwd = britton_reduce(pres, word[i:j])
            m = max((j - i) + len(cwd), (n - j + i) + len(cwd))
            if best is None or m < best[0]:
                best = (m, i, j, cwd)
        if best is None or best[0] >= part.piece_perimeter(worst):
            return None
        inner = two_piece_partition(pres, word, best[1], best[2], best[3])
        edges = list(part.edges)
        pieces = [p for idx, p in enumerate(part.pieces) if idx != worst]
        base = len(edges)
        for e in inner.edges:
            edges.append(PEdge(e.kind, e.word, None, (-1, -1), e.grade))
        for p in inner.pieces:
            pieces.append([(base + eid, d) for eid, d in p])
        part = LoopPartition(pres, loop, part.vertex_words, edges, pieces)
    return part if part.mesh() < delta else None


@dataclass
class PartitionCertificate:
    loop: Word
    delta: float
    budget: int
    witness: LoopPartition | None
    lower_bound: float          # piece count needed; inf when impossible
    searched_class: str
    edge_grade: str
    partitions_examined: int


def P_lower_bound(pres, loop: Word, delta: float, budget: int,
                  max_len: int = 20) -> PartitionCertificate:
    """Exhaustive verdict on delta-partitions within the restricted class.

    Either a witness partition with mesh < delta and at most ``budget``
    pieces, or the certificate that none exists among partitions whose
    interior vertices sit on images of the loop's own vertices.
    """
    searched = ("chords between loop vertices, non-crossing, distinct "
                "endpoints; tripods centered on loop-vertex images")
    if delta <= 0:
        return PartitionCertificate(loop, delta, budget, None, float("inf"),
                                    searched, T_MINIMAL, 0)
    if len(loop) > max_len:
        raise SearchSpaceTooLarge(f"|loop| = {len(loop)} > {max_len}")
    if budget > 3:
        raise SearchSpaceTooLarge("exact search supports at most 3 pieces")
    examined = 0
    witness = None
    for part in enumerate_partitions(pres, loop, budget):
        examined += 1
        if part.mesh() < delta and len(part.pieces) <= budget:
            if witness is None or len(part.pieces) < len(witness.pieces):
                witness = part
    lower = len(witness.pieces) if witness is not None else budget + 1
    return PartitionCertificate(loop, delta, budget, witness, lower,
                                searched, T_MINIMAL, examined)


# -- diagram partitions ---------------------------------------------------------

@dataclass
class DEdge:
    kind: str                 # 'boundary' | 'interior' | 'hole'
    darts: list[int]          # dart path (or representative opposite darts)
    word: Word
    grade: str

    @property
    def length(self) -> int:
        return len(self.word)


@dataclass
class DPiece:
    faces: set[int]
    boundary: list[tuple[int, int]]   # (edge id, dir)


@dataclass
class DiagramPartition:
    pres: MultipleHnnPresentation
    diag: PlanarDiagram
    pieces: list[DPiece]
    edges: list[DEdge]
    num_vertices: int
    edge_grade: str = T_MINIMAL

    def piece_perimeter(self, k: int) -> int:
        return sum(self.edges[eid].length for eid, _ in self.pieces[k].boundary)

    def mesh(self) -> int:
        return max(self.piece_perimeter(k) for k in range(len(self.pieces)))

    def rmesh(self, subset) -> int:
        vals = [self.piece_perimeter(k) for k in subset]
        return max(vals) if vals else 0

    def counts(self) -> ComplexCounts:
        c = ComplexCounts(len(self.pieces), len(self.edges), self.num_vertices)
        c.check_euler_bounds()
        return c

    def validate(self) -> None:
        owned = [f for p in self.pieces for f in p.faces]
        assert len(owned) == len(set(owned)), "pieces overlap"
        skip = {self.diag.outer, self.diag.hole}
        expected = {f for f in self.diag.cycles if f not in skip}
        assert set(owned) == expected, "pieces must cover the diagram"
        self.counts()

    def edge_sets(self) -> list[set[frozenset[int]]]:
        """Unordered edge sets per partition edge, for crossing counts.

        Recorded darts may have been consumed by later surgery; they are
        resolved to the surviving physical edge through the diagram's
        edge-identity classes.
        """
        out = []
        for e in self.edges:
            cur: set[frozenset[int]] = set()
            for d in e.darts:
                live = self.diag.live_edge(d)
                if live is not None and self.diag.label[live] is not None:
                    cur.add(frozenset((live, self.diag.alpha[live])))
            out.append(cur)
        return out


def induce_diagram_partition(pres, part: LoopPartition) -> DiagramPartition:
    """Fill each piece with a reduced disc diagram and glue along the chords.

    The resulting diagram's boundary label is letterwise the loop; each
    piece subdiagram is reduced (mirror pairs are cancelled into 0-cell
    membranes); zero-length chords are realized as 0-edge bridges.
    """
    npieces = len(part.pieces)
    for k in range(npieces):
        if britton_reduce(pres, part.piece_word(k)) != ():
            raise PieceNotTrivial(f"piece {k} reads a nontrivial word")
    piece_diags = []
    for k in range(npieces):
        d = build_diagram(pres, part.piece_word(k))
        reduce_all_bands(pres, d)
        piece_diags.append(d)

    # incidences of interior edges: (piece, slot) pairs
    slots: dict[int, list[tuple[int, int]]] = {}
    for k, cycle in enumerate(part.pieces):
        for slot, (eid, _d) in enumerate(cycle):
            if part.edges[eid].kind == "interior":
                slots.setdefault(eid, []).append((k, slot))

    host = PlanarDiagram(pres)
    outer: list[int] = []          # evolving outer dart list
    # layout items aligned with `outer`: ('arc', piece, slot) carrying the
    # slot's word length in darts, or ('z',) for one bridge dart
    items: list[tuple] = []
    piece_faces: dict[int, set[int]] = {}
    edge_darts: dict[int, list[int]] = {}
    placed: set[int] = set()

    def item_len(it) -> int:
        if it[0] == "z":
            return 1
        return part.edges[part.pieces[it[1]][it[2]][0]].length

    def arc_bounds(piece_cycle, slot):
        start = sum(part.edges[eid].length for eid, _ in piece_cycle[:slot])
        return start, start + part.edges[piece_cycle[slot][0]].length

    def place(k: int):
        dmap, fmap = merge_diagrams(host, piece_diags[k])
        src = piece_diags[k]
        cyc = [dmap[d] for d in src.cycles[src.outer]]
        del host.cycles[fmap[src.outer]]
        del host.faces[fmap[src.outer]]
        piece_faces[k] = {fmap[f] for f in src.cycles if f != src.outer}
        return cyc

    root = 0
    outer = place(root)
    items = [("arc", root, s) for s in range(len(part.pieces[root]))]
    placed.add(root)
    glued: set[int] = set()

    # spanning-tree phase, preferring positive-length seams so that 0-edge
    # bridges never interleave with legs that still need zipping
    progress = True
    while len(placed) < npieces and progress:
        progress = False
        candidates = sorted(slots, key=lambda e: -part.edges[e].length)
        for eid in candidates:
            inc = slots[eid]
            if len(inc) != 2:
                continue
            (k0, s0), (k1, s1) = inc
            if (k0 in placed) == (k1 in placed):
                continue
            if k1 in placed:
                (k0, s0), (k1, s1) = (k1, s1), (k0, s0)
            # k0 placed, k1 new; glue along edge eid
            cyc_k = place(k1)
            idx = items.index(("arc", k0, s0))
            a_start = sum(item_len(it) for it in items[:idx])
            length = part.edges[eid].length
            b_start, b_end = arc_bounds(part.pieces[k1], s1)
            new_items = [("arc", k1, (s1 + off) % len(part.pieces[k1]))
                         for off in range(1, len(part.pieces[k1]))]
            if length > 0:
                arc_a = outer[a_start:a_start + length]
                arc_b = cyc_k[b_start:b_end]
                seam = list(arc_a)
                host.identify_arcs(arc_a, arc_b)
                outer = outer[:a_start] + cyc_k[b_end:] + cyc_k[:b_start] \
                    + outer[a_start + length:]
                edge_darts[eid] = seam
                items[idx:idx + 1] = new_items
            else:
                z1, z2 = host.new_edge(None)
                outer = outer[:a_start] + [z1] + cyc_k[b_start:] \
                    + cyc_k[:b_start] + [z2] + outer[a_start:]
                edge_darts[eid] = [z1]
                items[idx:idx + 1] = [("z",)] + new_items + [("z",)]
            placed.add(k1)
            glued.add(eid)
            progress = True
            break
    assert len(placed) == npieces, "interior edges do not connect the pieces"

    # zip phase: interior edges between already-placed pieces (they occur
    # around interior partition vertices); their two boundary copies are
    # adjacent in the outer walk and fold together
    for eid, inc in slots.items():
        if eid in glued or len(inc) != 2:
            continue
        length = part.edges[eid].length
        if length == 0:
            edge_darts[eid] = []
            continue
        (k0, s0), (k1, s1) = inc
        i0 = items.index(("arc", k0, s0))
        i1 = items.index(("arc", k1, s1))
        p0 = sum(item_len(it) for it in items[:i0])
        p1 = sum(item_len(it) for it in items[:i1])
        if p1 < p0:
            (i0, p0), (i1, p1) = (i1, p1), (i0, p0)
        assert p0 + length == p1, "leftover leg copies are not adjacent"
        copy1 = outer[p0:p0 + length]
        seam = list(copy1)
        for m in range(length):
            d1, d2 = outer[p0 + length - 1 - m], outer[p0 + length + m]
            assert host.label[d1] == -host.label[d2], "zip labels mismatch"
            if host.alpha[d1] == d2:
                host.drop_dart(d1)
                host.drop_dart(d2)
            else:
                x1, x2 = host.alpha[d1], host.alpha[d2]
                host.alpha[x1] = x2
                host.alpha[x2] = x1
                host._edge_union(d1, d2)
                host.drop_dart(d1)
                host.drop_dart(d2)
        outer = outer[:p0] + outer[p0 + 2 * length:]
        edge_darts[eid] = seam
        del items[i1]
        del items[i0]

    host.outer = host.new_face(FaceInfo(OUTER), outer)
    # rotate the reading start to loop position 0 (a word position)
    n = len(part.loop)
    pos0 = None
    acc = 0
    for it in items:
        if it[0] == "z":
            continue
        eid, _dir = part.pieces[it[1]][it[2]]
        e = part.edges[eid]
        if e.kind == "boundary" and e.span is not None:
            offset = (0 - e.span[0]) % n
            if offset < e.length:
                pos0 = acc + offset
                break
        acc += e.length
    assert pos0 is not None, "no boundary arc covers loop position 0"
    # account for 0-edge bridge darts before pos0
    real = [d for d in outer if host.label[d] is not None]
    if pos0 > 0:
        target = real[pos0]
        shift = outer.index(target)
        outer = outer[shift:] + outer[:shift]
        host.cycles[host.outer] = outer
    host.euler_check()
    assert host.boundary_word() == part.loop, "assembled boundary drift"

    # collect boundary-edge darts from the final outer cycle
    dedges: list[DEdge] = []
    eid_map: dict[int, int] = {}
    # real[p] is the outer dart reading loop position p
    real = [d for d in host.cycles[host.outer] if host.label[d] is not None]
    for eid, e in enumerate(part.edges):
        if e.kind == "boundary":
            if e.span is None:
                darts = []
            else:
                start = e.span[0]
                darts = [real[(start + m) % len(real)] for m in range(e.length)]
            eid_map[eid] = len(dedges)
            dedges.append(DEdge("boundary", darts, e.word, e.grade))
        else:
            eid_map[eid] = len(dedges)
            dedges.append(DEdge("interior", edge_darts.get(eid, []),
                                e.word, e.grade))

    dpieces = [DPiece(piece_faces[k],
                      [(eid_map[eid], d) for eid, d in part.pieces[k]])
               for k in range(npieces)]
    dp = DiagramPartition(pres, host, dpieces, dedges,
                          num_vertices=part.counts().vertices,
                          edge_grade=part.edge_grade())
    dp.validate()
    return dp


# -- crossing checks -------------------------------------------------------------

@dataclass
class CrossingReport:
    max_crossings: int
    violations: list[tuple[int, int, int]]   # on t-minimal edges
    detours: list[tuple[int, int, int]]      # on edges that are not t-minimal
    num_maximal_annuli: int
    num_vertices: int

    @property
    def ok(self) -> bool:
        return not self.violations and \
            self.num_maximal_annuli <= max(self.num_vertices, 0)


def check_crossings(pres, dp: DiagramPartition) -> CrossingReport:
    """Each t-band crosses each t-minimal partition edge at most once.

    Multiple crossings of an edge whose realization is Britton-reducible are
    reported as detours, not violations (such an edge is not t-minimal, so
    the crossing bound does not apply to it).  Also checks that the number
    of maximal t-annuli is bounded by the partition vertex count.
    """
    bands = extract_bands(pres, dp.diag)
    esets = dp.edge_sets()
    minimal = [britton_reduce(pres, e.word) == e.word for e in dp.edges]
    worst = 0
    violations = []
    detours = []
    for bi, band in enumerate(bands):
        t_edges = {frozenset((d, dp.diag.alpha[d]))
                   for d in band.median_edges()}
        for ei, es in enumerate(esets):
            c = len(t_edges & es)
            worst = max(worst, c)
            if c > 1:
                (violations if minimal[ei] else detours).append((bi, ei, c))
    annuli = maximal_annuli(pres, dp.diag)
    return CrossingReport(worst, violations, detours,
                          len(annuli), dp.num_vertices)


def band_cell_partition(pres, diag: PlanarDiagram,
                        band: TBand) -> DiagramPartition:
    """The single-cell-per-piece partition of a glued closed-band diagram.

    Radial edges are the band's t-edges (length-1 t-minimal realizations);
    the top and bottom arcs are the cells' u- and v-sides, shared between
    pieces where the hole circle has been folded.
    """
    frames = band.frames
    r = len(frames)
    edges: list[DEdge] = []
    radial: list[int] = []
    for fr in frames:
        radial.append(len(edges))
        edges.append(DEdge("interior", [fr.anchor],
                           (diag.label[fr.anchor],), T_MINIMAL))
    arc_key: dict[frozenset, int] = {}
    top_arc: list[int] = []
    bottom_arc: list[int] = []
    for fr in frames:
        for darts, store in ((fr.x_darts, top_arc), (fr.y_darts, bottom_arc)):
            key = frozenset(frozenset((d, diag.alpha[d])) for d in darts)
            if key in arc_key:
                store.append(arc_key[key])
                continue
            opposite = diag.face_of[diag.alpha[darts[0]]]
            kind = "interior" if diag.faces[opposite].kind == CELL else (
                "boundary" if opposite == diag.outer else "hole")
            arc_key[key] = len(edges)
            store.append(len(edges))
            edges.append(DEdge(kind, list(darts),
                               tuple(diag.label[d] for d in darts), T_MINIMAL))
    pieces = []
    for j, fr in enumerate(frames):
        boundary = [(radial[j], 1), (top_arc[j], 1),
                    (radial[(j + 1) % r], -1), (bottom_arc[j], -1)]
        pieces.append(DPiece({fr.face}, boundary))
    vmap, _ = diag.vertex_map()
    verts = set()
    for fr in frames:
        verts.add(vmap[fr.anchor])
        verts.add(vmap[diag.alpha[fr.anchor]])
    dp = DiagramPartition(pres, diag, pieces, edges, len(verts))
    dp.validate()
    return dp
