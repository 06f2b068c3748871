"""Stallings foldings for finitely generated subgroups of a free group.

A subgroup given by a list of freely reduced generator words is folded into a
deterministic core automaton rooted at a base vertex.  Folding keeps a
history word on every edge (a "gauge potential") so that tracing an accepted
word through the folded graph recovers its unique expression in the original
generators, not merely in some basis of non-tree edges.  The gauge bookkeeping
is only meaningful when the generators are a free basis; that is exactly the
case the rest of the library needs, and it is certified by the Betti-number
check at the end of the fold.
"""

from __future__ import annotations

from .errors import AlphabetMismatch, BasisNotFree, ParseError
from .words import EMPTY, Word, free_reduce, inv, is_reduced

# Expressions in the abstract basis letters x_1..x_m are themselves Words:
# tuples of signed 1-based generator indices.
BasisExpression = Word


def _key_order(key: int) -> tuple[int, int]:
    return (abs(key), 0 if key > 0 else 1)


class FoldedGraph:
    """Folded core automaton for ``<generators>`` inside a free group.

    Vertices are ``0..num_vertices-1`` with base vertex 0, numbered by BFS
    from the base with shortlex edge ordering, so construction is
    deterministic.  ``step[v][letter]`` gives ``(target, history)`` where
    ``history`` is the contribution of that traversal to the expression of a
    traced word in the original generators.
    """

    def __init__(self, generators, step, tree_parent, betti):
        self.generators = [tuple(g) for g in generators]
        self.step = step                # list[dict[int, (int, Word)]]
        self.tree_parent = tree_parent  # v -> (parent, letter); base -> None
        self.betti = betti
        self._transversal: dict[int, Word] = {0: EMPTY}

    # -- construction -----------------------------------------------------

    @classmethod
    def fold(cls, generators) -> "FoldedGraph":
        gens = [tuple(g) for g in generators]
        for g in gens:
            if not g:
                raise BasisNotFree("the empty word cannot be a basis element")
            if not is_reduced(g):
                raise ParseError(f"basis generator {g} is not freely reduced")

        edges: dict[int, list] = {}          # eid -> [src, dst, sym, hist]
        trans: dict[int, dict[int, int]] = {0: {}}
        incident: dict[int, set[int]] = {0: set()}
        parent: dict[int, int] = {0: 0}
        pending: list[tuple[int, int, int]] = []

        def find(v: int) -> int:
            root = v
            while parent[root] != root:
                root = parent[root]
            while parent[v] != root:
                parent[v], v = root, parent[v]
            return root

        def other_end(eid: int, key: int) -> tuple[int, Word]:
            s, d, _sym, hist = edges[eid]
            if key > 0:
                return find(d), hist
            return find(s), inv(hist)

        def gauge_and_merge(gone: int, target: int, g: Word) -> None:
            for eid in incident[gone]:
                if eid not in edges:
                    continue
                e = edges[eid]
                s, d = find(e[0]), find(e[1])
                if s == gone and d == gone:
                    e[3] = free_reduce(g + e[3] + inv(g))
                elif s == gone:
                    e[3] = free_reduce(g + e[3])
                elif d == gone:
                    e[3] = free_reduce(e[3] + inv(g))
            parent[gone] = target
            incident[target] |= incident.pop(gone)
            for key, eid in trans.pop(gone).items():
                pending.append((target, key, eid))

        def remove_edge(eid: int) -> None:
            s, d, sym, _ = edges[eid]
            for v, key in ((find(s), sym), (find(d), -sym)):
                slot = trans.get(v)
                if slot is not None and slot.get(key) == eid:
                    del slot[key]
            del edges[eid]

        def fold_pair(v: int, key: int, e_old: int, e_new: int) -> None:
            w1, h1 = other_end(e_old, key)
            w2, h2 = other_end(e_new, key)
            if w1 == w2:
                remove_edge(e_new)
                return
            if w2 != 0:
                gauge_and_merge(w2, w1, free_reduce(inv(h1) + h2))
                remove_edge(e_new)
            else:
                # never gauge at the base vertex; sacrifice e_old instead
                trans[v][key] = e_new
                gauge_and_merge(w1, w2, free_reduce(inv(h2) + h1))
                remove_edge(e_old)

        def add(v: int, key: int, eid: int) -> None:
            v = find(v)
            slot = trans.setdefault(v, {})
            cur = slot.get(key)
            if cur is None:
                slot[key] = eid
            elif cur != eid:
                fold_pair(v, key, cur, eid)

        # Build the whole wedge of petals before any folding: every edge must
        # carry its final pre-fold history, since gauges are one-time events.
        next_vertex = 1
        next_edge = 0
        for gidx, gen in enumerate(gens, start=1):
            path = [0] + [next_vertex + i for i in range(len(gen) - 1)] + [0]
            next_vertex += len(gen) - 1
            for p in path[1:-1]:
                parent[p] = p
                trans[p] = {}
                incident[p] = set()
            for pos, letter in enumerate(gen):
                a, b = path[pos], path[pos + 1]
                hist: Word = (gidx,) if pos == 0 else EMPTY
                sym = abs(letter)
                if letter > 0:
                    edges[next_edge] = [a, b, sym, hist]
                else:
                    edges[next_edge] = [b, a, sym, inv(hist)]
                incident[a].add(next_edge)
                incident[b].add(next_edge)
                pending.append((a, sym if letter > 0 else -sym, next_edge))
                pending.append((b, -sym if letter > 0 else sym, next_edge))
                next_edge += 1
        while pending:
            pv, pk, pe = pending.pop()
            if pe in edges:
                add(pv, pk, pe)

        # canonical BFS renumbering with shortlex edge order
        base = find(0)
        order = {base: 0}
        tree_parent: dict[int, tuple[int, int] | None] = {0: None}
        queue = [base]
        edge_set: set[int] = set()
        raw_rows = []
        while queue:
            v = queue.pop(0)
            row = {}
            for key in sorted(trans.get(v, {}), key=_key_order):
                eid = trans[v][key]
                w, hist = other_end(eid, key)
                row[key] = (w, hist)
                edge_set.add(eid)
                if w not in order:
                    order[w] = len(order)
                    tree_parent[len(order) - 1] = (order[v], key)
                    queue.append(w)
            raw_rows.append(row)
        if len(order) != len(trans):
            raise BasisNotFree("folded graph is not connected")
        step = [{k: (order[w], h) for k, (w, h) in row.items()}
                for row in raw_rows]
        betti = len(edge_set) - len(order) + 1
        if betti < len(gens):
            raise BasisNotFree(
                f"generators have rank {betti}, expected {len(gens)}")
        graph = cls(gens, step, tree_parent, betti)
        graph._check_folded()
        return graph

    def _check_folded(self) -> None:
        for v, row in enumerate(self.step):
            for key, (w, _h) in row.items():
                assert -key in self.step[w], (v, key, w)

    # -- queries -----------------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.step)

    def trace(self, word: Word, start: int = 0) -> int | None:
        v = start
        for letter in word:
            nxt = self.step[v].get(letter)
            if nxt is None:
                return None
            v = nxt[0]
        return v

    def trace_prefix(self, word: Word, start: int = 0) -> tuple[int, int]:
        """Longest traceable prefix: returns (consumed, end_vertex)."""
        v = start
        for i, letter in enumerate(word):
            nxt = self.step[v].get(letter)
            if nxt is None:
                return i, v
            v = nxt[0]
        return len(word), v

    def accepts(self, word: Word) -> bool:
        return self.trace(free_reduce(word)) == 0

    def express(self, word: Word) -> BasisExpression | None:
        """Expression of ``word`` in the original generators, if a member."""
        w = free_reduce(word)
        v = 0
        hist: list[int] = []
        for letter in w:
            nxt = self.step[v].get(letter)
            if nxt is None:
                return None
            v = nxt[0]
            for x in nxt[1]:
                if hist and hist[-1] == -x:
                    hist.pop()
                else:
                    hist.append(x)
        if v != 0:
            return None
        return tuple(hist)

    def transversal(self, v: int) -> Word:
        """Spanning-tree word from the base to vertex ``v`` (shortlex tree)."""
        cached = self._transversal.get(v)
        if cached is None:
            up, letter = self.tree_parent[v]
            cached = self.transversal(up) + (letter,)
            self._transversal[v] = cached
        return cached

    def strip(self, word: Word) -> tuple[Word, int]:
        """Split reduced ``word`` as ``g * t`` with ``inv(t)`` traceable.

        Returns ``(g, y)`` where ``y`` is the endpoint of the maximal
        traceable prefix of ``inv(word)``; used for left-coset
        representatives.
        """
        consumed, y = self.trace_prefix(inv(word))
        return word[: len(word) - consumed], y

    def coset_rep(self, word: Word) -> Word:
        """Canonical representative of the left coset ``word * H``."""
        g, y = self.strip(free_reduce(word))
        return free_reduce(g + inv(self.transversal(y)))

    def decompose(self, word: Word) -> tuple[Word, Word]:
        """``word = rep * h`` with ``h`` in the subgroup; both reduced."""
        rep = self.coset_rep(word)
        h = free_reduce(inv(rep) + word)
        return rep, h

    def is_full_rose(self, num_base: int) -> bool:
        """Does the subgroup exhaust the ambient free group F(A)?"""
        return self.num_vertices == 1 and \
            all(letter in self.step[0] for letter in range(1, num_base + 1))


def fold(generators, num_base: int | None = None) -> FoldedGraph:
    if num_base is not None:
        for g in generators:
            if any(abs(x) > num_base for x in g):
                raise AlphabetMismatch(
                    "subgroup generators must be words over the base alphabet")
    return FoldedGraph.fold(generators)


def member(word: Word, graph: FoldedGraph,
           num_base: int | None = None) -> BasisExpression | None:
    """Expression of ``word`` in the basis, or None if not a member.

    The length of the returned expression is the subgroup length |word|_s.
    """
    if num_base is not None and any(abs(x) > num_base for x in word):
        raise AlphabetMismatch("membership is only defined for base-letter words")
    return graph.express(word)


def evaluate_expression(expr: BasisExpression, generators) -> Word:
    out: list[int] = []
    for x in expr:
        piece = generators[abs(x) - 1]
        if x < 0:
            piece = inv(piece)
        for letter in piece:
            if out and out[-1] == -letter:
                out.pop()
            else:
                out.append(letter)
    return tuple(out)
