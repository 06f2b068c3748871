"""Desk-scale Cayley graph exploration for multiple HNN extensions.

Elements are keyed by a canonical pinch-free coset normal form
``c_0 t^(e1) c_1 ... t^(en) f`` where each c_j is the Schreier representative
of its left coset (relative to U_i when the following stable letter is
positive, V_i when negative, matching which elements can be pushed through
the letter) taken from the folded graph's shortlex spanning tree, and f is a
freely reduced base word.  Normal forms are built by appending one letter at
a time, so extending a ball vertex by a generator is cheap.

The exact metric ball built here is the |.|_G oracle used throughout the
test suite: distances are BFS depths, edges are recorded between ball
vertices, and side/separation predicates are cross-checked against component
computations on the ball with midpoint edge sets removed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .britton import britton_reduce
from .errors import OracleRadiusExceeded, OutOfBall, RadiusTooLarge
from .presentation import MultipleHnnPresentation
from .words import EMPTY, Word, free_reduce, inv

DEFAULT_MAX_RADIUS = 8


def _max_radius() -> int:
    env = os.environ.get("HNN_MAX_RADIUS")
    return int(env) if env else DEFAULT_MAX_RADIUS


@dataclass(frozen=True)
class NormalForm:
    """Canonical representative; equal keys iff equal group elements."""
    segments: tuple[tuple[Word, int], ...]  # (coset rep, signed stable letter)
    final: Word

    @property
    def key(self) -> Word:
        flat: list[int] = []
        for rep, t in self.segments:
            flat.extend(rep)
            flat.append(t)
        flat.extend(self.final)
        return tuple(flat)

    @property
    def t_length(self) -> int:
        return len(self.segments)


IDENTITY_NF = NormalForm((), EMPTY)


def append_letter(pres: MultipleHnnPresentation, nf: NormalForm,
                  letter: int) -> NormalForm:
    """Normal form of nf * letter."""
    if pres.alphabet.is_base(letter):
        f = nf.final
        if f and f[-1] == -letter:
            return NormalForm(nf.segments, f[:-1])
        return NormalForm(nf.segments, f + (letter,))
    i = pres.stable_index(letter)
    if nf.segments and nf.segments[-1][1] == -letter:
        # candidate pinch  t^e f t^-e  around the final factor
        prev_rep, prev_t = nf.segments[-1]
        image = (pres.v_to_u(i, nf.final) if prev_t > 0
                 else pres.u_to_v(i, nf.final))
        if image is not None:
            return NormalForm(nf.segments[:-1],
                              free_reduce(prev_rep + image[2]))
    assoc = pres.association(i)
    if letter > 0:
        rep, h = assoc.u_graph.decompose(nf.final)
        pushed = pres.u_to_v(i, h)[2]
    else:
        rep, h = assoc.v_graph.decompose(nf.final)
        pushed = pres.v_to_u(i, h)[2]
    return NormalForm(nf.segments + ((rep, letter),), pushed)


def normal_form(pres: MultipleHnnPresentation, word: Word) -> NormalForm:
    nf = IDENTITY_NF
    for letter in word:
        nf = append_letter(pres, nf, letter)
    return nf


def normal_form_word(pres: MultipleHnnPresentation, word: Word) -> Word:
    return normal_form(pres, word).key


@dataclass
class Ball:
    """Exact metric ball of given radius about the identity."""
    pres: MultipleHnnPresentation
    radius: int
    keys: dict[Word, int] = field(default_factory=dict)
    nfs: list[NormalForm] = field(default_factory=list)
    dist: list[int] = field(default_factory=list)
    adj: list[dict[int, int]] = field(default_factory=list)  # letter -> idx
    parent: list[tuple[int, int] | None] = field(default_factory=list)

    @property
    def num_vertices(self) -> int:
        return len(self.nfs)

    def vertex_of_key(self, key: Word) -> int | None:
        return self.keys.get(key)

    def vertex(self, word: Word) -> int:
        idx = self.keys.get(normal_form_word(self.pres, word))
        if idx is None:
            raise OutOfBall(f"element of {word!r} is outside radius {self.radius}")
        return idx

    def length(self, word: Word) -> int:
        """Exact |word|_G, or OracleRadiusExceeded beyond the ball."""
        idx = self.keys.get(normal_form_word(self.pres, word))
        if idx is None:
            raise OracleRadiusExceeded(
                f"|w|_G exceeds oracle radius {self.radius}")
        return self.dist[idx]

    def length_or_none(self, word: Word) -> int | None:
        idx = self.keys.get(normal_form_word(self.pres, word))
        return None if idx is None else self.dist[idx]

    def distance(self, g: Word, h: Word) -> int:
        return self.length(inv(g) + h)

    def trace(self, word: Word, start: int = 0) -> int | None:
        """Follow the ball's recorded edges; None when the path leaves it."""
        v = start
        for letter in word:
            nxt = self.adj[v].get(letter)
            if nxt is None:
                return None
            v = nxt
        return v

    def geodesic_word(self, idx: int) -> Word:
        out: list[int] = []
        while self.parent[idx] is not None:
            up, letter = self.parent[idx]
            out.append(letter)
            idx = up
        return tuple(reversed(out))

    def word_of(self, idx: int) -> Word:
        return self.nfs[idx].key


def ball(pres: MultipleHnnPresentation, radius: int,
         max_radius: int | None = None) -> Ball:
    cap = max_radius if max_radius is not None else _max_radius()
    if radius > cap:
        raise RadiusTooLarge(f"radius {radius} exceeds cap {cap}")
    letters = [x for k in range(1, len(pres.alphabet.symbols) + 1)
               for x in (k, -k)]
    b = Ball(pres, radius)
    b.keys[EMPTY] = 0
    b.nfs.append(IDENTITY_NF)
    b.dist.append(0)
    b.adj.append({})
    b.parent.append(None)
    frontier = [0]
    for d in range(radius + 1):
        nxt: list[int] = []
        for v in frontier:
            nf = b.nfs[v]
            for letter in letters:
                nf2 = append_letter(pres, nf, letter)
                key = nf2.key
                w = b.keys.get(key)
                if w is None:
                    if d == radius:
                        continue
                    w = len(b.nfs)
                    b.keys[key] = w
                    b.nfs.append(nf2)
                    b.dist.append(d + 1)
                    b.adj.append({})
                    b.parent.append((v, letter))
                    nxt.append(w)
                b.adj[v][letter] = w
        frontier = nxt
    return b


def geodesic(pres: MultipleHnnPresentation, g: Word, h: Word,
             b: Ball) -> Word:
    """A geodesic word from g to h, certified by the ball oracle."""
    u = free_reduce(inv(g) + h)
    idx = b.keys.get(normal_form_word(pres, u))
    if idx is None:
        raise OutOfBall(f"distance from g to h exceeds radius {b.radius}")
    return b.geodesic_word(idx)


@dataclass
class DivergenceResult:
    value: int | None          # path length, or None when no path in the ball
    forbidden_radius: float    # delta*r - gamma actually used
    ball_radius: int           # provenance: search truncated to this ball
    lower_bound: int | None = None

    @property
    def is_no_path_marker(self) -> bool:
        return self.value is None


def divergence(pres: MultipleHnnPresentation, a: Word, b_pt: Word, c: Word,
               delta: float, gamma: float, b: Ball) -> DivergenceResult:
    """Shortest a-to-b path length avoiding the open ball B(c, delta*r-gamma).

    Computed inside the finite ball; a missing path is reported as a marker
    carrying the ball radius (a lower bound, never a number).  Distances to c
    certified through normal forms; vertices whose distance to c provably
    exceeds the ball radius count as allowed when the forbidden radius fits
    inside the ball.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0,1)")
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    va, vb = b.vertex(a), b.vertex(b_pt)
    ra = b.length(inv(c) + a)
    rb = b.length(inv(c) + b_pt)
    r = min(ra, rb)
    if r <= 0:
        raise ValueError("c must be distinct from {a, b}")
    rho = delta * r - gamma
    if rho <= 0:
        return DivergenceResult(b.length(inv(a) + b_pt), rho, b.radius)
    c_word = free_reduce(c)
    allowed = []
    for idx in range(b.num_vertices):
        d = b.length_or_none(inv(c_word) + b.word_of(idx))
        allowed.append(d >= rho if d is not None else b.radius >= rho)
    if not allowed[va] or not allowed[vb]:
        return DivergenceResult(None, rho, b.radius)
    # BFS from a to b over allowed vertices
    seen = {va: 0}
    queue = [va]
    while queue:
        nxt = []
        for v in queue:
            if v == vb:
                return DivergenceResult(seen[v], rho, b.radius)
            for letter, w in b.adj[v].items():
                if allowed[w] and w not in seen:
                    seen[w] = seen[v] + 1
                    nxt.append(w)
        queue = nxt
    return DivergenceResult(None, rho, b.radius)


# -- t-separation ----------------------------------------------------------

@dataclass(frozen=True)
class SeparationWitness:
    """Coset translate of the midpoint set of the t_i-edges based at U_i."""
    g: Word
    i: int


def side(pres: MultipleHnnPresentation, witness: SeparationWitness,
         h: Word) -> str:
    """'far' or 'near' side of the witness's midpoint set for vertex h.

    Far means the Britton reduction of g'h is p t_i s with p its maximal
    base-letter prefix, p in U_i, and the t_i positively signed; vertices of
    gU_i itself are near (midpoints are removed, not vertices).
    """
    w = britton_reduce(pres, inv(witness.g) + h)
    nb = pres.alphabet.num_base
    cut = 0
    while cut < len(w) and abs(w[cut]) <= nb:
        cut += 1
    if cut == len(w):
        return "near"
    t = w[cut]
    if t != pres.stable_letter(witness.i):
        return "near"
    prefix = w[:cut]
    graph = pres.association(witness.i).u_graph
    return "far" if graph.accepts(prefix) else "near"


def t_separated(pres: MultipleHnnPresentation, zs, zs2,
                witness: SeparationWitness) -> bool:
    """All of zs strictly on one side and all of zs2 on the other."""
    zs, zs2 = list(zs), list(zs2)
    if not zs or not zs2:
        return False
    sides1 = {side(pres, witness, z) for z in zs}
    sides2 = {side(pres, witness, z) for z in zs2}
    return len(sides1) == 1 and len(sides2) == 1 and sides1 != sides2


def removed_midpoint_edges(pres: MultipleHnnPresentation,
                           witness: SeparationWitness,
                           b: Ball) -> set[tuple[int, int]]:
    """Ball edges (v, w) whose midpoint lies in the witness's removed set."""
    t = pres.stable_letter(witness.i)
    graph = pres.association(witness.i).u_graph
    nb = pres.alphabet.num_base
    out: set[tuple[int, int]] = set()
    ginv = inv(witness.g)
    for idx in range(b.num_vertices):
        w = britton_reduce(pres, ginv + b.word_of(idx))
        if all(abs(x) <= nb for x in w) and graph.accepts(w):
            tgt = b.adj[idx].get(t)
            if tgt is not None:
                out.add((idx, tgt))
    return out


def components_without(b: Ball, removed: set[tuple[int, int]]) -> list[int]:
    """Connected component ids of ball vertices after deleting edges."""
    comp = [-1] * b.num_vertices
    cid = 0
    for start in range(b.num_vertices):
        if comp[start] != -1:
            continue
        comp[start] = cid
        stack = [start]
        while stack:
            v = stack.pop()
            for _letter, w in b.adj[v].items():
                if (v, w) in removed or (w, v) in removed:
                    continue
                if comp[w] == -1:
                    comp[w] = cid
                    stack.append(w)
        cid += 1
    return comp


@dataclass
class SideOracleReport:
    """side() versus ball components with the midpoint set deleted."""
    agreements: int
    checked: int
    excluded: int            # vertices in components touching neither side
    conflicts: int           # components containing both sides: separation fails
    mismatches: list[Word]

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.conflicts == 0 and self.checked > 0


def side_component_check(pres: MultipleHnnPresentation,
                         witness: SeparationWitness, b: Ball) -> SideOracleReport:
    removed = removed_midpoint_edges(pres, witness, b)
    comp = components_without(b, removed)
    near_comps: set[int] = set()
    far_comps: set[int] = set()
    try:
        gv = b.vertex(witness.g)
        near_comps.add(comp[gv])
    except OutOfBall:
        pass
    for (v, w) in removed:
        near_comps.add(comp[v])
        far_comps.add(comp[w])
    agreements = checked = excluded = conflicts = 0
    mismatches: list[Word] = []
    for idx in range(b.num_vertices):
        c = comp[idx]
        in_near = c in near_comps
        in_far = c in far_comps
        if in_near and in_far:
            conflicts += 1
            continue
        if not in_near and not in_far:
            excluded += 1  # unreachable from either side at this radius
            continue
        checked += 1
        predicted = side(pres, witness, b.word_of(idx))
        actual = "near" if in_near else "far"
        if predicted == actual:
            agreements += 1
        else:
            mismatches.append(b.word_of(idx))
    return SideOracleReport(agreements, checked, excluded, conflicts, mismatches)
