"""t-bands, medians and annuli in van Kampen diagrams.

Every relator cell is a 4-gon with exactly two stable-letter edges, read
t' u t v' from its anchor dart.  Consecutive cells of a band share a t-edge
coherently (the shared edge is read positively by one cell and negatively by
the next), so bands are extracted by following exits; a chain that closes up
is a t-annulus.  The combinatorial top of a band reads a product of u-basis
words, the bottom the corresponding v-product; topological boundary paths
drop maximal literal backtracking.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import (CELL, FaceInfo, HOLE, OUTER, ZERO, PlanarDiagram,
                      build_diagram)
from .errors import MalformedDiagram, NoCancellationAtPosition, RadiusTooLarge
from .presentation import MultipleHnnPresentation
from .words import Word, free_reduce, inv


@dataclass
class CellFrame:
    face: int
    i: int
    s: int
    eps: int
    anchor: int          # dart reading -t
    exit: int            # dart reading +t
    x_darts: list[int]   # read u_{i,s}^eps
    y_darts: list[int]   # read v_{i,s}^-eps


@dataclass
class TBand:
    i: int
    frames: list[CellFrame]
    is_annulus: bool

    @property
    def cells(self) -> list[int]:
        return [fr.face for fr in self.frames]

    def __len__(self) -> int:
        return len(self.frames)

    def signature(self) -> list[tuple[int, int]]:
        return [(fr.s, fr.eps) for fr in self.frames]

    def median_edges(self) -> list[int]:
        """The shared t-darts e_0..e_n crossed by the median, as anchor darts."""
        out = [fr.anchor for fr in self.frames]
        if not self.is_annulus:
            out.append(self.frames[-1].exit)
        return out


@dataclass
class BandBoundary:
    top_combinatorial: list[int]
    bottom_combinatorial: list[int]
    top: list[int]
    bottom: list[int]
    top_label: Word
    bottom_label: Word
    top_topological_label: Word
    bottom_topological_label: Word


def cell_frame(pres: MultipleHnnPresentation, diag: PlanarDiagram,
               face: int) -> CellFrame:
    info = diag.faces[face]
    assert info.kind == CELL and info.rel is not None
    i, s, _sign = info.rel
    nb = pres.alphabet.num_base
    cyc = diag.cycles[face]
    stable = [k for k, d in enumerate(cyc)
              if diag.label[d] is not None and abs(diag.label[d]) > nb]
    if len(stable) != 2:
        raise MalformedDiagram(f"cell {face} has {len(stable)} stable edges")
    t = pres.stable_letter(i)
    anchor_pos = next(k for k in stable if diag.label[cyc[k]] == -t)
    rot = cyc[anchor_pos:] + cyc[:anchor_pos]
    exit_pos = next(k for k in range(1, len(rot))
                    if diag.label[rot[k]] == t)
    x_darts = rot[1:exit_pos]
    y_darts = rot[exit_pos + 1:]
    u = pres.association(i).u_words[s - 1]
    x_label = tuple(diag.label[d] for d in x_darts)
    if x_label == u:
        eps = 1
    elif x_label == inv(u):
        eps = -1
    else:
        raise MalformedDiagram(f"cell {face} u-arc reads {x_label}")
    v = pres.association(i).v_words[s - 1]
    y_expect = inv(v) if eps == 1 else v
    if tuple(diag.label[d] for d in y_darts) != y_expect:
        raise MalformedDiagram(f"cell {face} v-arc mismatch")
    return CellFrame(face, i, s, eps, rot[0], rot[exit_pos], x_darts, y_darts)


def extract_bands(pres: MultipleHnnPresentation,
                  diag: PlanarDiagram) -> list[TBand]:
    """Partition of all relator cells into maximal t-bands and t-annuli."""
    frames = {f: cell_frame(pres, diag, f) for f in diag.cells()}
    by_anchor = {fr.anchor: fr for fr in frames.values()}

    def successor(fr: CellFrame) -> CellFrame | None:
        nxt = diag.alpha[fr.exit]
        return by_anchor.get(nxt)

    exits = {fr.exit for fr in frames.values()}
    bands: list[TBand] = []
    seen: set[int] = set()
    for fr in frames.values():
        if fr.face in seen or diag.alpha[fr.anchor] in exits:
            continue
        chain = [fr]
        seen.add(fr.face)
        cur = fr
        while True:
            nxt = successor(cur)
            if nxt is None:
                break
            chain.append(nxt)
            seen.add(nxt.face)
            cur = nxt
        bands.append(TBand(fr.i, chain, False))
    for fr in frames.values():
        if fr.face in seen:
            continue
        chain = [fr]
        seen.add(fr.face)
        cur = successor(fr)
        while cur.face != fr.face:
            chain.append(cur)
            seen.add(cur.face)
            cur = successor(cur)
        bands.append(TBand(fr.i, chain, True))
    return bands


def band_boundaries(diag: PlanarDiagram, band: TBand) -> BandBoundary:
    top = [d for fr in band.frames for d in fr.x_darts]
    bottom = [diag.alpha[d] for fr in band.frames
              for d in reversed(fr.y_darts)]

    def strip_backtracking(path: list[int]) -> list[int]:
        stack: list[int] = []
        for d in path:
            if stack and stack[-1] == diag.alpha[d]:
                stack.pop()
            else:
                stack.append(d)
        return stack

    top_t = strip_backtracking(top)
    bottom_t = strip_backtracking(bottom)

    def lab(path):
        return tuple(diag.label[d] for d in path)

    return BandBoundary(top, bottom, top_t, bottom_t,
                        lab(top), lab(bottom), lab(top_t), lab(bottom_t))


def band_is_reduced(band: TBand) -> bool:
    sig = band.signature()
    pairs = list(zip(sig, sig[1:]))
    if band.is_annulus and len(sig) > 1:
        pairs.append((sig[-1], sig[0]))
    return all(not (a[0] == b[0] and a[1] == -b[1]) for a, b in pairs)


def find_mirror_pair(band: TBand) -> int | None:
    sig = band.signature()
    for j in range(len(sig) - 1):
        if sig[j][0] == sig[j + 1][0] and sig[j][1] == -sig[j + 1][1]:
            return j
    if band.is_annulus and len(sig) > 1 and \
            sig[-1][0] == sig[0][0] and sig[-1][1] == -sig[0][1]:
        return len(sig) - 1
    return None


def cancel_mirror_pair(diag: PlanarDiagram, band: TBand, j: int) -> None:
    """Cancel the mirror cells j, j+1 into a 0-cell membrane.

    The two cells merge across their shared t-edge into one face whose
    boundary label is freely trivial, marked as a 0-cell; sealing the
    membrane completely would pinch the surface whenever the band separates,
    so the membrane stays.  Cell count drops by two and the diagram boundary
    label is unchanged.
    """
    fr1 = band.frames[j]
    fr2 = band.frames[(j + 1) % len(band.frames)]
    assert diag.alpha[fr1.exit] == fr2.anchor, "cells are not adjacent"
    merged = [fr1.anchor] + fr1.x_darts + fr2.x_darts + [fr2.exit] \
        + fr2.y_darts + fr1.y_darts
    zero_face = fr1.face
    del diag.cycles[fr2.face]
    del diag.faces[fr2.face]
    diag.cycles[zero_face] = merged
    diag.faces[zero_face] = FaceInfo(ZERO)
    for d in merged:
        diag.face_of[d] = zero_face
    diag.drop_dart(fr1.exit)
    diag.drop_dart(fr2.anchor)
    diag.euler_check()


def reduce_all_bands(pres: MultipleHnnPresentation,
                     diag: PlanarDiagram) -> int:
    """Cancel mirror pairs until every band is reduced; returns pairs removed."""
    removed = 0
    while True:
        bands = extract_bands(pres, diag)
        for band in bands:
            j = find_mirror_pair(band)
            if j is not None:
                cancel_mirror_pair(diag, band, j)
                removed += 1
                break
        else:
            return removed


def diamond_move(diag: PlanarDiagram, band: TBand, side: str,
                 j: int) -> None:
    """Diamond move at the junction after cell j on 'top' or 'bottom'.

    Requires an adjacent cancelling pair of the band-boundary path there;
    preserves cell count and the diagram boundary label while removing the
    cancellation from the topological boundary path.
    """
    n = len(band.frames)
    if not band.is_annulus and j >= n - 1:
        raise NoCancellationAtPosition(f"no junction {j} in band of {n} cells")
    fr1 = band.frames[j]
    fr2 = band.frames[(j + 1) % n]
    if side == "top":
        d1, d2 = fr1.x_darts[-1], fr2.x_darts[0]
    elif side == "bottom":
        d1, d2 = diag.alpha[fr1.y_darts[0]], diag.alpha[fr2.y_darts[-1]]
    else:
        raise ValueError("side must be 'top' or 'bottom'")
    diag.diamond(d1, d2)
    diag.euler_check()


def reduce_band_boundary(pres: MultipleHnnPresentation, diag: PlanarDiagram,
                         band: TBand) -> int:
    """Diamond moves to a fixpoint: topological boundary labels freely reduced."""
    moves = 0
    progress = True
    while progress:
        progress = False
        for side in ("top", "bottom"):
            n = len(band.frames)
            juncs = range(n if band.is_annulus else n - 1)
            for j in juncs:
                fr1, fr2 = band.frames[j], band.frames[(j + 1) % n]
                if side == "top":
                    d1, d2 = fr1.x_darts[-1], fr2.x_darts[0]
                else:
                    d1 = diag.alpha[fr1.y_darts[0]]
                    d2 = diag.alpha[fr2.y_darts[-1]]
                l1, l2 = diag.label[d1], diag.label[d2]
                if l1 == -l2 and diag.alpha[d1] != d2:
                    diag.diamond(d1, d2)
                    moves += 1
                    progress = True
    return moves


# -- annuli -----------------------------------------------------------------

def face_components(diag: PlanarDiagram, blocked: set[int]) -> dict[int, int]:
    """Connected components of the dual graph avoiding ``blocked`` faces."""
    comp: dict[int, int] = {}
    cid = 0
    for f in diag.cycles:
        if f in blocked or f in comp:
            continue
        comp[f] = cid
        stack = [f]
        while stack:
            cur = stack.pop()
            for d in diag.cycles[cur]:
                nxt = diag.face_of[diag.alpha[d]]
                if nxt in blocked or nxt in comp:
                    continue
                comp[nxt] = cid
                stack.append(nxt)
        cid += 1
    return comp


def annulus_separates(diag: PlanarDiagram, band: TBand) -> bool:
    """Does the annulus median separate the hole face from the outer face?"""
    if not band.is_annulus or diag.hole is None:
        return False
    comp = face_components(diag, set(band.cells))
    return comp[diag.outer] != comp[diag.hole]


def annulus_interior_faces(diag: PlanarDiagram, band: TBand) -> set[int]:
    """Faces inside the annulus median (the side not containing the outer face)."""
    comp = face_components(diag, set(band.cells))
    return {f for f, c in comp.items() if c != comp[diag.outer]}


def maximal_annuli(pres: MultipleHnnPresentation,
                   diag: PlanarDiagram) -> list[TBand]:
    annuli = [b for b in extract_bands(pres, diag) if b.is_annulus]
    interiors = [annulus_interior_faces(diag, b) for b in annuli]
    out = []
    for i, band in enumerate(annuli):
        inside_other = any(
            j != i and set(band.cells) <= interiors[j]
            for j in range(len(annuli)))
        if not inside_other:
            out.append(band)
    return out


def find_separating_annulus(pres: MultipleHnnPresentation,
                            diag: PlanarDiagram) -> TBand | None:
    for band in extract_bands(pres, diag):
        if band.is_annulus and annulus_separates(diag, band):
            return band
    return None


# -- quantitative checks ------------------------------------------------------

def compute_L(pres: MultipleHnnPresentation, oracle_ball) -> tuple[int, int]:
    """(L', L): L' = max |g|_s over subgroup members with |g|_G <= 2K.

    The elements are enumerated from the ball oracle; L = L'K + K + 1 bounds
    the distance from a reduced band's top to its bottom.
    """
    K = pres.K
    if oracle_ball.radius < 2 * K:
        raise RadiusTooLarge(
            f"need ball radius {2 * K}, have {oracle_ball.radius}")
    nb = pres.alphabet.num_base
    l_prime = 0
    for idx in range(oracle_ball.num_vertices):
        if oracle_ball.dist[idx] > 2 * K:
            continue
        key = oracle_ball.nfs[idx].key
        if any(abs(x) > nb for x in key):
            continue
        for i in range(1, pres.num_stable + 1):
            for side in "uv":
                ln = pres.subgroup_length(i, key, side)
                if ln is not None:
                    l_prime = max(l_prime, ln)
    return l_prime, l_prime * K + K + 1


@dataclass
class BandNeighborhoodReport:
    band_cells: int
    max_distance: int | None   # None when the bottom is empty
    bound: int

    @property
    def ok(self) -> bool:
        return self.max_distance is not None and self.max_distance <= self.bound


def check_band_neighborhood(diag: PlanarDiagram, band: TBand,
                            L: int) -> BandNeighborhoodReport:
    """Every vertex of the topological top within L of the bottom."""
    bb = band_boundaries(diag, band)
    vmap, adj = diag.vertex_graph()

    def path_vertices(path):
        verts = [vmap[d] for d in path]
        if path:
            verts.append(vmap[diag.alpha[path[-1]]])
        return set(verts)

    top_v = path_vertices(bb.top)
    bot_v = path_vertices(bb.bottom)
    if not bot_v or not top_v:
        return BandNeighborhoodReport(len(band), None, L)
    # multi-source 0/1 BFS from the bottom vertices
    from collections import deque
    dist = [-1] * len(adj)
    dq = deque()
    for v in bot_v:
        dist[v] = 0
        dq.append(v)
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
    worst = max(dist[v] for v in top_v)
    return BandNeighborhoodReport(len(band), worst, L)


# -- annular constructions ------------------------------------------------

def closed_band(pres: MultipleHnnPresentation, i: int,
                expr: list[tuple[int, int]]) -> PlanarDiagram:
    """Standalone t_i-annulus from a cyclic cell signature [(s, eps), ...].

    The top side (reading the u-concatenation around the annulus) is created
    as the hole face and the bottom side as the outer face; both get replaced
    when the band is glued into a larger diagram.
    """
    assert expr
    diag = PlanarDiagram(pres)
    t = pres.stable_letter(i)
    assoc = pres.association(i)
    r = len(expr)
    anchors = [diag.new_dart(-t) for _ in expr]
    exits = [diag.new_dart(t) for _ in expr]
    xs, ys = [], []
    for (s, eps) in expr:
        u = assoc.u_words[s - 1] if eps > 0 else inv(assoc.u_words[s - 1])
        y = inv(assoc.v_words[s - 1]) if eps > 0 else assoc.v_words[s - 1]
        xs.append([diag.new_dart(x) for x in u])
        ys.append([diag.new_dart(x) for x in y])
    for j in range(r):
        diag.alpha[exits[j]] = anchors[(j + 1) % r]
        diag.alpha[anchors[(j + 1) % r]] = exits[j]
        diag._edge_union(exits[j], anchors[(j + 1) % r])
    top_cycle: list[int] = []
    bottom_cycle: list[int] = []
    # the top circle runs along the band direction, so the top face walks the
    # cells in reverse; the cell cycles already traverse the v-side against
    # the band direction, so the bottom face walks the cells forward
    for j in reversed(range(r)):
        for d in reversed(xs[j]):
            b = diag.new_dart(-diag.label[d])
            diag.alpha[d] = b
            diag.alpha[b] = d
            diag._edge_union(d, b)
            top_cycle.append(b)
    for j in range(r):
        for d in reversed(ys[j]):
            b = diag.new_dart(-diag.label[d])
            diag.alpha[d] = b
            diag.alpha[b] = d
            diag._edge_union(d, b)
            bottom_cycle.append(b)
    for j, (s, eps) in enumerate(expr):
        diag.new_face(FaceInfo(CELL, (i, s, eps)),
                      [anchors[j]] + xs[j] + [exits[j]] + ys[j])
    diag.hole = diag.new_face(FaceInfo(HOLE), top_cycle)
    diag.outer = diag.new_face(FaceInfo(OUTER), bottom_cycle)
    diag.euler_check()
    return diag


def glue_annulus(pres: MultipleHnnPresentation, i: int,
                 expr: list[tuple[int, int]], outer_on: str = "bottom",
                 seal: int = 0) -> tuple[PlanarDiagram, list[int]]:
    """Annular diagram whose separating t-annulus is a glued closed band.

    The band's two boundary circles read the u- and v-concatenations of
    ``expr``; both must be freely trivial (so the boundary labels are
    trivial in the group), which means the cyclic signature cancels, e.g.
    [(s, 1), (s, -1)].  ``outer_on`` selects which side of the band faces
    the outer region.  ``seal`` folds that many cancelling pairs of the
    hole circle inward, shrinking the hole boundary (it must stay
    nonempty).  Returns the diagram and the band's cell faces.
    """
    assoc = pres.association(i)
    u_cyc: list[int] = []
    v_cyc: list[int] = []
    for (s, eps) in expr:
        u = assoc.u_words[s - 1]
        v = assoc.v_words[s - 1]
        u_cyc.extend(u if eps > 0 else inv(u))
        v_cyc.extend(v if eps > 0 else inv(v))
    if free_reduce(tuple(u_cyc)) or free_reduce(tuple(v_cyc)):
        raise MalformedDiagram(
            "closed-band fixtures need freely trivial u/v concatenations")

    diag = closed_band(pres, i, expr)
    band_faces = diag.cells()
    if outer_on == "top":
        diag.outer, diag.hole = diag.hole, diag.outer
        diag.faces[diag.outer].kind = OUTER
        diag.faces[diag.hole].kind = HOLE
    for _ in range(seal):
        cyc = diag.cycles[diag.hole]
        if len(cyc) < 4:
            break
        for pos in range(len(cyc) - 1):
            l1, l2 = diag.label[cyc[pos]], diag.label[cyc[pos + 1]]
            if l1 is not None and l1 == -l2:
                diag.fold_at(diag.hole, pos)
                break
    diag.euler_check()
    return diag, band_faces


@dataclass
class Diameter2Report:
    theta_diameter: int
    budget: float
    segment_terms: list[tuple[int, bool]]

    @property
    def ok(self) -> bool:
        return self.theta_diameter <= self.budget


def check_diameter2(pres: MultipleHnnPresentation, diag: PlanarDiagram,
                    marks: list[int], certified: set[int], L: int,
                    oracle_ball) -> Diameter2Report:
    """Theta-image diameter against (5L/2) * (mixed boundary sum).

    ``marks`` are boundary positions 0 <= p_0 < ... < p_k < |boundary|
    cutting the boundary word into segments; segment j is [p_j, p_{j+1})
    (cyclically).  Indices in ``certified`` use the oracle distance of the
    segment endpoints; all others contribute their full length.
    """
    from .cayley import normal_form_word
    bw = diag.boundary_word()
    n = len(bw)
    assert marks and all(0 <= p < n for p in marks)
    marks = sorted(marks)
    terms: list[tuple[int, bool]] = []
    total = 0
    for idx, p in enumerate(marks):
        q = marks[(idx + 1) % len(marks)]
        seg_len = (q - p) % n if len(marks) > 1 else n
        if idx in certified:
            a = normal_form_word(pres, bw[:p])
            bword = bw[:q] if q > p else bw + bw[:q]
            b = normal_form_word(pres, tuple(bword))
            d = oracle_ball.length(inv(a) + b)
            terms.append((d, True))
            total += d
        else:
            terms.append((seg_len, False))
            total += seg_len
    images = diag.theta(lambda w: normal_form_word(pres, w))
    keys = list(images.values())
    worst = 0
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            worst = max(worst, oracle_ball.length(inv(keys[i]) + keys[j]))
    return Diameter2Report(worst, 2.5 * L * total, terms)
