"""van Kampen diagrams as planar combinatorial maps.

A diagram is stored as face cycles plus a fixed-point-free dart involution
``alpha``; vertices are the orbits of the derived rotation and planarity is
the Euler count V - E + F = 2 on the sphere (the outer face, and for annular
diagrams also a hole face, are distinguished).  All surgery operations -
boundary spikes and folds, diamond re-pairings, arc identifications and
0-refinements - edit only face cycles, ``alpha`` and labels, and every public
operation re-checks the Euler invariant.

Disc diagrams for trivial words are built from the Britton reduction: the
word is decomposed into a product of conjugated relators (each pinch
contributes one conjugate per basis letter of its interior), the conjugates
are laid out as a bouquet of lollipops, and the boundary is folded following
the free-reduction trace of the raw product.  The t-bands required by the
band machinery arise from those folds.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .britton import Pinch, detect_pinch
from .errors import (MalformedDiagram, NoCancellationAtPosition,
                     NotTrivialWord, ParseError)
from .presentation import MultipleHnnPresentation, concat_expression
from .words import Word, free_reduce, free_reduce_trace, inv

OUTER, HOLE, CELL, ZERO = "outer", "hole", "cell", "zero"


@dataclass
class FaceInfo:
    kind: str
    rel: tuple[int, int, int] | None = None  # (i, s, sign) for relator cells


@dataclass
class RefinementOp:
    kind: str
    data: tuple


class PlanarDiagram:

    def __init__(self, pres: MultipleHnnPresentation):
        self.pres = pres
        self.alpha: dict[int, int] = {}
        self.label: dict[int, int | None] = {}
        self.face_of: dict[int, int] = {}
        self.cycles: dict[int, list[int]] = {}
        self.faces: dict[int, FaceInfo] = {}
        self.outer: int | None = None
        self.hole: int | None = None
        self._next_dart = 0
        self._next_face = 0
        self.refinement_log: list[RefinementOp] = []
        # edge-identity classes across fold/identify surgery, so references
        # to deleted darts can be resolved to the surviving physical edge
        self._edge_class: dict[int, int] = {}

    def _edge_find(self, d: int) -> int:
        root = d
        while self._edge_class.get(root, root) != root:
            root = self._edge_class[root]
        while self._edge_class.get(d, d) != root:
            self._edge_class[d], d = root, self._edge_class[d]
        return root

    def _edge_union(self, a: int, b: int) -> None:
        ra, rb = self._edge_find(a), self._edge_find(b)
        if ra != rb:
            self._edge_class[ra] = rb

    def live_edge(self, d: int) -> int | None:
        """A surviving dart of the physical edge that dart d once belonged to.

        Only identifications through folds and arc gluings are tracked, which
        covers every stable-letter edge; diamond moves reshuffle base-letter
        edges without updating classes.
        """
        root = self._edge_find(d)
        if d in self.alpha:
            return d
        for cand, r in list(self._edge_class.items()):
            if cand in self.alpha and self._edge_find(cand) == root:
                return cand
        return None

    # -- low-level helpers --------------------------------------------------

    def new_face(self, info: FaceInfo, cycle: list[int]) -> int:
        fid = self._next_face
        self._next_face += 1
        self.faces[fid] = info
        self.cycles[fid] = cycle
        for d in cycle:
            self.face_of[d] = fid
        return fid

    def new_dart(self, label: int | None) -> int:
        d = self._next_dart
        self._next_dart += 1
        self.label[d] = label
        return d

    def new_edge(self, label: int | None) -> tuple[int, int]:
        d1 = self.new_dart(label)
        d2 = self.new_dart(None if label is None else -label)
        self.alpha[d1] = d2
        self.alpha[d2] = d1
        self._edge_union(d1, d2)
        return d1, d2

    def drop_dart(self, d: int) -> None:
        del self.alpha[d]
        del self.label[d]
        self.face_of.pop(d, None)

    @property
    def num_edges(self) -> int:
        return len(self.alpha) // 2

    def cells(self) -> list[int]:
        return [f for f, info in self.faces.items() if info.kind == CELL]

    # -- vertices and metrics ------------------------------------------------

    def vertex_map(self) -> tuple[dict[int, int], int]:
        """dart -> id of its start vertex; also returns the vertex count."""
        prev: dict[int, int] = {}
        for cyc in self.cycles.values():
            for idx, d in enumerate(cyc):
                prev[d] = cyc[idx - 1]
        vertex: dict[int, int] = {}
        count = 0
        for d0 in prev:
            if d0 in vertex:
                continue
            orbit = d0
            while orbit not in vertex:
                vertex[orbit] = count
                orbit = self.alpha[prev[orbit]]
            count += 1
        return vertex, count

    def num_vertices(self) -> int:
        if not self.alpha:
            return 1
        return self.vertex_map()[1]

    def euler_check(self) -> None:
        darts = set(self.alpha)
        assert set(self.label) == darts
        assert set(self.face_of) == darts
        covered = [d for cyc in self.cycles.values() for d in cyc]
        assert len(covered) == len(darts) and set(covered) == darts
        for d, d2 in self.alpha.items():
            assert self.alpha[d2] == d and d2 != d
            l1, l2 = self.label[d], self.label[d2]
            assert (l1 is None) == (l2 is None)
            if l1 is not None:
                assert l1 == -l2
        chi = self.num_vertices() - self.num_edges + len(self.cycles)
        assert chi == 2, f"Euler characteristic {chi} != 2"

    def vertex_graph(self) -> tuple[dict[int, int], list[list[tuple[int, int]]]]:
        """Vertex adjacency with 0/1 edge weights (0-edges have length 0)."""
        vmap, n = self.vertex_map()
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for d, d2 in self.alpha.items():
            if d < d2:
                u, v = vmap[d], vmap[d2]
                w = 0 if self.label[d] is None else 1
                adj[u].append((v, w))
                adj[v].append((u, w))
        return vmap, adj

    def distances_from(self, start: int, adj) -> list[int]:
        dist = [-1] * len(adj)
        dist[start] = 0
        dq = deque([start])
        while dq:
            v = dq.popleft()
            for w, weight in adj[v]:
                nd = dist[v] + weight
                if dist[w] == -1 or nd < dist[w]:
                    dist[w] = nd
                    if weight == 0:
                        dq.appendleft(w)
                    else:
                        dq.append(w)
        return dist

    def diameter(self) -> int:
        """Max vertex distance in the 1-skeleton, 0-edges counting 0."""
        if not self.alpha:
            return 0
        _vmap, adj = self.vertex_graph()
        best = 0
        for start in range(len(adj)):
            dist = self.distances_from(start, adj)
            best = max(best, max(dist))
        return best

    # -- boundary ------------------------------------------------------------

    def boundary_word(self, face: int | None = None) -> Word:
        fid = self.outer if face is None else face
        return tuple(self.label[d] for d in self.cycles[fid]
                     if self.label[d] is not None)

    def base_vertex(self) -> int | None:
        cyc = self.cycles[self.outer]
        if not cyc:
            return None
        return self.vertex_map()[0][cyc[0]]

    # -- surgery primitives ---------------------------------------------------

    def spike_insert(self, face: int, pos: int, letter: int) -> None:
        """Insert darts reading (letter, -letter) at cycle position pos."""
        d1, d2 = self.new_edge(letter)
        cyc = self.cycles[face]
        cyc[pos:pos] = [d1, d2]
        self.face_of[d1] = face
        self.face_of[d2] = face

    def fold_at(self, face: int, pos: int) -> None:
        """Identify the edges of the adjacent inverse pair at (pos, pos+1)."""
        cyc = self.cycles[face]
        assert pos + 1 < len(cyc), "folds never wrap past the reading start"
        d1, d2 = cyc[pos], cyc[pos + 1]
        l1, l2 = self.label[d1], self.label[d2]
        assert l1 is not None and l1 == -l2, "fold requires a cancelling pair"
        del cyc[pos:pos + 2]
        if self.alpha[d1] == d2:
            self.drop_dart(d1)
            self.drop_dart(d2)
            return
        p1, p2 = self.alpha[d1], self.alpha[d2]
        self.alpha[p1] = p2
        self.alpha[p2] = p1
        self._edge_union(d1, d2)
        self.drop_dart(d1)
        self.drop_dart(d2)

    def fold_face_shut(self, face: int) -> None:
        """Fold a face with freely trivial reading down to nothing."""
        cyc = self.cycles[face]
        while cyc:
            for pos in range(len(cyc) - 1):
                l1, l2 = self.label[cyc[pos]], self.label[cyc[pos + 1]]
                if l1 is not None and l1 == -l2:
                    self.fold_at(face, pos)
                    break
            else:
                raise MalformedDiagram(
                    "face label is not freely trivial; cannot seal")
        del self.cycles[face]
        del self.faces[face]

    def identify_arcs(self, arc1: list[int], arc2: list[int]) -> None:
        """Identify arc1 with the reversal of arc2 (anti-parallel gluing).

        Both dart lists are removed; callers fix up the face cycles.  The
        involution is re-chained through the identified edges, so arcs may
        contain both sides of one edge.
        """
        assert len(arc1) == len(arc2)
        n = len(arc1)
        partner: dict[int, int] = {}
        for k in range(n):
            a, b = arc1[k], arc2[n - 1 - k]
            if self.label[a] != (None if self.label[b] is None
                                 else -self.label[b]):
                raise MalformedDiagram("arc labels do not match anti-parallel")
            partner[a] = b
            partner[b] = a
            self._edge_union(a, b)
        removed = set(partner)
        if len(removed) != 2 * n:
            raise MalformedDiagram("gluing arcs overlap")
        new_alpha: dict[int, int] = {}
        for x in list(self.alpha):
            if x in removed:
                continue
            y = self.alpha[x]
            steps = 0
            while y in removed:
                y = self.alpha[partner[y]]
                steps += 1
                if steps > 2 * n + 1:
                    raise MalformedDiagram("gluing arcs close onto themselves")
            if y == x:
                raise MalformedDiagram("gluing would pinch an edge onto itself")
            new_alpha[x] = y
        for x, y in new_alpha.items():
            if new_alpha.get(y) != x:
                raise MalformedDiagram("inconsistent arc identification")
        for d in removed:
            self.drop_dart(d)
        for x, y in new_alpha.items():
            self.alpha[x] = y

    def cut_glue(self, start1: int, n1: int, start2: int, n2: int) -> int:
        """Identify two disjoint arcs of the outer boundary, creating a hole.

        The arc at start2 (length n2 == n1) is glued anti-parallel onto the
        arc at start1.  The outer face splits; the part containing position 0
        remains the outer face and the other becomes the hole.  Returns the
        hole face id.
        """
        cyc = self.cycles[self.outer]
        assert n1 == n2 and n1 > 0
        assert 0 < start1 and start1 + n1 < start2 and start2 + n2 <= len(cyc)
        arc1 = cyc[start1:start1 + n1]
        arc2 = cyc[start2:start2 + n2]
        middle = cyc[start1 + n1:start2]
        assert middle, "the glued arcs must enclose a nonempty hole boundary"
        self.identify_arcs(arc1, arc2)
        # reading start (position 0) stays first; arc2's end merges into
        # arc1's start, so the walk continues from P0 directly into P2
        outer_cycle = cyc[:start1] + cyc[start2 + n2:]
        self.cycles[self.outer] = outer_cycle
        for d in outer_cycle:
            self.face_of[d] = self.outer
        hole = self.new_face(FaceInfo(HOLE), middle)
        self.hole = hole
        self.euler_check()
        return hole

    def diamond(self, path_d1: int, path_d2: int) -> None:
        """Diamond move at a cancelling pair of band-boundary path darts.

        The two darts read inverse labels and meet at a vertex; after the
        move they traverse one common edge out and back, so the cancellation
        disappears from the topological boundary path while cell count and
        the diagram boundary label are unchanged.
        """
        l1, l2 = self.label[path_d1], self.label[path_d2]
        if l1 is None or l2 is None or l1 != -l2:
            raise NoCancellationAtPosition("labels do not cancel")
        if self.alpha[path_d1] == path_d2:
            raise NoCancellationAtPosition("pair is already a backtrack")
        x1, x2 = self.alpha[path_d1], self.alpha[path_d2]
        self.alpha[path_d1] = path_d2
        self.alpha[path_d2] = path_d1
        self.alpha[x1] = x2
        self.alpha[x2] = x1

    # -- 0-refinements --------------------------------------------------------

    def subdivide_edge(self, d: int) -> tuple[int, int]:
        """Split the edge of dart d, appending a 0-edge after it."""
        d2 = self.alpha[d]
        z1, z2 = self.new_edge(None)
        f1, f2 = self.face_of[d], self.face_of[d2]
        cyc1 = self.cycles[f1]
        cyc1.insert(cyc1.index(d) + 1, z1)
        self.face_of[z1] = f1
        cyc2 = self.cycles[f2]
        cyc2.insert(cyc2.index(d2), z2)
        self.face_of[z2] = f2
        self.refinement_log.append(RefinementOp("subdivide", (d, z1, z2)))
        self.euler_check()
        return z1, z2

    def insert_zero_cell(self, d: int) -> int:
        """Double the edge of dart d with a parallel copy bounding a 0-cell."""
        d2 = self.alpha[d]
        lab = self.label[d]
        c1 = self.new_dart(None if lab is None else -lab)
        c2 = self.new_dart(lab)
        self.alpha[d] = c1
        self.alpha[c1] = d
        self.alpha[d2] = c2
        self.alpha[c2] = d2
        fid = self.new_face(FaceInfo(ZERO), [c1, c2])
        self.refinement_log.append(RefinementOp("zerocell", (d, c1, c2, fid)))
        self.euler_check()
        return fid

    def split_vertex(self, d_a: int, d_b: int | None = None) -> tuple[int, int]:
        """Split the start vertex of d_a along a new 0-edge.

        The corners before d_a and before d_b (darts with the same start
        vertex) receive the two ends of the 0-edge; with d_b omitted the
        split is degenerate and adds a dangling 0-edge at the vertex.
        """
        if d_b is None:
            d_b = d_a
        vmap, _ = self.vertex_map()
        assert vmap[d_a] == vmap[d_b], "darts must share their start vertex"
        z1, z2 = self.new_edge(None)
        fa = self.face_of[d_a]
        cyc_a = self.cycles[fa]
        cyc_a.insert(cyc_a.index(d_a), z1)
        self.face_of[z1] = fa
        fb = self.face_of[d_b]
        cyc_b = self.cycles[fb]
        cyc_b.insert(cyc_b.index(d_b), z2)
        self.face_of[z2] = fb
        self.refinement_log.append(RefinementOp("split", (d_a, z1, z2)))
        self.euler_check()
        return z1, z2

    # -- theta: labels of paths from the base -------------------------------

    def theta(self, normal_form_word) -> dict[int, Word]:
        """Vertex -> canonical word of its image in the Cayley graph.

        ``normal_form_word`` maps words to canonical keys.  Consistency over
        all edges is asserted, which certifies that every cell reads a
        relator.
        """
        vmap, n = self.vertex_map()
        if not self.alpha:
            return {0: ()}
        base = self.base_vertex()
        if base is None:
            base = 0
        images: dict[int, Word] = {base: ()}
        incident: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for d in self.alpha:
            incident[vmap[d]].append((d, vmap[self.alpha[d]]))
        queue = deque([base])
        while queue:
            v = queue.popleft()
            for d, w in incident[v]:
                lab = self.label[d]
                img = images[v] if lab is None else \
                    normal_form_word(images[v] + (lab,))
                if w not in images:
                    images[w] = img
                    queue.append(w)
                else:
                    assert images[w] == img, "inconsistent edge labels"
        return images

    # -- serialization --------------------------------------------------------

    def to_text(self) -> str:
        lines = []
        for fid in sorted(self.cycles):
            info = self.faces[fid]
            rel = "-" if info.rel is None else \
                f"{info.rel[0]},{info.rel[1]},{info.rel[2]}"
            darts = " ".join(str(d) for d in self.cycles[fid])
            lines.append(f"face {fid} {info.kind} {rel} : {darts}")
        alpha = " ".join(f"{d}:{self.alpha[d]}" for d in sorted(self.alpha))
        labels = " ".join(
            f"{d}:{'0' if self.label[d] is None else self.label[d]}"
            for d in sorted(self.label))
        lines.append(f"alpha {alpha}")
        lines.append(f"labels {labels}")
        lines.append(f"outer {self.outer} hole "
                     f"{self.hole if self.hole is not None else '-'}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, pres: MultipleHnnPresentation, text: str) -> "PlanarDiagram":
        diag = cls(pres)
        for line in text.splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "face":
                fid = int(parts[1])
                kind = parts[2]
                rel = None if parts[3] == "-" else tuple(
                    int(x) for x in parts[3].split(","))
                darts = [int(x) for x in parts[5:]]
                diag.faces[fid] = FaceInfo(kind, rel)
                diag.cycles[fid] = darts
                for d in darts:
                    diag.face_of[d] = fid
                diag._next_face = max(diag._next_face, fid + 1)
            elif parts[0] == "alpha":
                for tok in parts[1:]:
                    a, b = tok.split(":")
                    diag.alpha[int(a)] = int(b)
            elif parts[0] == "labels":
                for tok in parts[1:]:
                    a, b = tok.split(":")
                    diag.label[int(a)] = None if b == "0" else int(b)
                    diag._next_dart = max(diag._next_dart, int(a) + 1)
            elif parts[0] == "outer":
                diag.outer = int(parts[1])
                diag.hole = None if parts[3] == "-" else int(parts[3])
            else:
                raise ParseError(f"bad diagram line: {line!r}")
        diag.euler_check()
        return diag

    def to_dot(self, extra_edges=()) -> str:
        vmap, n = self.vertex_map()
        ab = self.pres.alphabet
        colors = ["red", "blue", "darkgreen", "orange", "purple"]
        lines = ["graph diagram {"]
        for d, d2 in self.alpha.items():
            if d > d2:
                continue
            u, v = vmap[d], vmap[d2]
            lab = self.label[d]
            if lab is None:
                lines.append(f'  {u} -- {v} [style=dotted, label="0"];')
            else:
                name = ab.symbol(lab) + ("'" if lab < 0 else "")
                attr = f'label="{name}"'
                if ab.is_stable(lab):
                    c = colors[(abs(lab) - ab.num_base - 1) % len(colors)]
                    attr += f', color={c}, penwidth=2'
                lines.append(f"  {u} -- {v} [{attr}];")
        for (u, v, attr) in extra_edges:
            lines.append(f"  {u} -- {v} [{attr}];")
        lines.append("}")
        return "\n".join(lines)


def merge_diagrams(dst: PlanarDiagram,
                   src: PlanarDiagram) -> tuple[dict[int, int], dict[int, int]]:
    """Copy src disjointly into dst; returns (dart map, face map).

    The result is temporarily a two-component map, so dst fails the Euler
    check until the caller glues the components together.
    """
    dmap = {d: dst.new_dart(src.label[d]) for d in sorted(src.label)}
    for d, d2 in src.alpha.items():
        dst.alpha[dmap[d]] = dmap[d2]
    fmap = {}
    for f in sorted(src.cycles):
        fmap[f] = dst.new_face(FaceInfo(src.faces[f].kind, src.faces[f].rel),
                               [dmap[d] for d in src.cycles[f]])
    return dmap, fmap


# -- building disc diagrams ---------------------------------------------------


@dataclass
class Conjugate:
    z: Word
    i: int
    s: int
    sign: int


def conjugate_decomposition(pres: MultipleHnnPresentation,
                            word: Word) -> list[Conjugate]:
    """Express the freely reduced form of ``word`` as conjugated relators.

    Follows the Britton pinch order: each pinch over an interior with basis
    expression x_{s_1}^{e_1}..x_{s_r}^{e_r} contributes r conjugates.  The
    concatenated product freely reduces to free_reduce(word); this identity
    is asserted.
    """
    w = free_reduce(word)
    target = w
    out: list[Conjugate] = []
    while True:
        pinch = detect_pinch(pres, w)
        if pinch is None:
            break
        out.extend(_pinch_conjugates(pres, w[:pinch.start], pinch))
        w = free_reduce(w[:pinch.start] + pinch.image + w[pinch.end + 1:])
    if w:
        raise NotTrivialWord(
            f"word does not represent the identity; Britton residue {w}")
    product: list[int] = []
    for c in out:
        r = pres.relator(c.i, c.s).word
        block = c.z + (r if c.sign > 0 else inv(r)) + inv(c.z)
        product.extend(block)
    assert free_reduce(tuple(product)) == target, "conjugate decomposition drift"
    return out


def _pinch_conjugates(pres: MultipleHnnPresentation, prefix: Word,
                      pinch: Pinch) -> list[Conjugate]:
    assoc = pres.association(pinch.i)
    t = pres.stable_letter(pinch.i)
    out = []
    running: list[int] = list(prefix)
    if pinch.direction == "u":
        # t' u t -> v through u = prod u_{s_j}^{e_j}
        for x in pinch.expr:
            s, e = abs(x), (1 if x > 0 else -1)
            if e > 0:
                out.append(Conjugate(free_reduce(tuple(running)), pinch.i, s, 1))
            else:
                z = tuple(running) + inv(assoc.v_words[s - 1])
                out.append(Conjugate(free_reduce(z), pinch.i, s, -1))
            running.extend(concat_expression((x,), assoc.v_words))
    else:
        # t v t' -> u through v = prod v_{s_j}^{e_j}
        for x in pinch.expr:
            s, e = abs(x), (1 if x > 0 else -1)
            if e > 0:
                z = tuple(running) + (t,)
                out.append(Conjugate(free_reduce(z), pinch.i, s, -1))
            else:
                z = tuple(running) + inv(assoc.u_words[s - 1]) + (t,)
                out.append(Conjugate(free_reduce(z), pinch.i, s, 1))
            running.extend(concat_expression((x,), assoc.u_words))
    return out


def build_diagram(pres: MultipleHnnPresentation, word: Word) -> PlanarDiagram:
    """Disc diagram with boundary label letterwise equal to ``word``.

    Raises NotTrivialWord when the word is not trivial in the group.
    """
    word = tuple(word)
    for x in word:
        if not pres.alphabet.contains(x):
            raise ParseError(f"letter {x} outside the alphabet")
    reduced, reduction_ops = free_reduce_trace(word)
    conjugates = conjugate_decomposition(pres, reduced)

    diag = PlanarDiagram(pres)
    outer_cycle: list[int] = []
    raw_word: list[int] = []
    for c in conjugates:
        r = pres.relator(c.i, c.s).word
        loop_word = r if c.sign > 0 else inv(r)
        stem = [diag.new_edge(x) for x in c.z]
        loop = [diag.new_edge(x) for x in loop_word]
        cell_cycle = [diag.alpha[d1] for d1, _ in reversed(loop)]
        diag.new_face(FaceInfo(CELL, (c.i, c.s, c.sign)), cell_cycle)
        outer_cycle.extend(d1 for d1, _ in stem)
        outer_cycle.extend(d1 for d1, _ in loop)
        outer_cycle.extend(diag.alpha[d1] for d1, _ in reversed(stem))
        raw_word.extend(c.z)
        raw_word.extend(loop_word)
        raw_word.extend(inv(c.z))
    outer = diag.new_face(FaceInfo(OUTER), outer_cycle)
    diag.outer = outer

    _reduced_raw, fold_ops = free_reduce_trace(tuple(raw_word))
    assert _reduced_raw == reduced
    for pos, letter in fold_ops:
        cyc = diag.cycles[outer]
        assert diag.label[cyc[pos]] == letter
        diag.fold_at(outer, pos)
    for pos, letter in reversed(reduction_ops):
        diag.spike_insert(outer, pos, letter)

    assert diag.boundary_word() == word
    diag.euler_check()
    return diag
