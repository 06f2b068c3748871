"""Multiple HNN extensions of a free group with free associated subgroups.

A presentation has base letters A, stable letters t_1..t_k, and for each
stable letter an index-paired family of freely reduced base words
(u_{i,1}..u_{i,j_i}) and (v_{i,1}..v_{i,j_i}) subject to the relations
t_i' u_{i,s} t_i = v_{i,s}.  Conjugation by t_i carries U_i = <u_{i,*}> onto
V_i = <v_{i,*}> through the index pairing; both families are required to be
free bases, which the Stallings fold certifies.

File format (line oriented, ``#`` comments allowed)::

    base: a b
    stable: t1 t2
    assoc t1: a -> a a
    assoc t2: b -> a

with one ``assoc`` line per (i, s) pair; the left word is u_{i,s}, the right
its image v_{i,s}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MismatchedAssociationLengths, ParseError
from .folding import FoldedGraph, evaluate_expression, fold, member
from .words import Alphabet, Word, free_reduce, inv, is_reduced


@dataclass
class Association:
    """Paired free bases for one stable letter."""
    u_words: list[Word]
    v_words: list[Word]
    u_graph: FoldedGraph
    v_graph: FoldedGraph


@dataclass
class Relator:
    """Defining relator t_i' u_{i,s} t_i v_{i,s}'  for the pair (i, s)."""
    word: Word
    i: int  # 1-based stable-letter index
    s: int  # 1-based association index


def concat_expression(expr, words) -> Word:
    """Unreduced concatenation of basis words along an expression."""
    out: list[int] = []
    for x in expr:
        piece = words[abs(x) - 1]
        out.extend(piece if x > 0 else inv(piece))
    return tuple(out)


class MultipleHnnPresentation:

    def __init__(self, base: list[str], stable: list[str],
                 pairs: list[list[tuple[Word, Word]]]):
        if not stable:
            raise ParseError("at least one stable letter is required")
        self.alphabet = Alphabet(base, stable)
        if len(pairs) != len(stable):
            raise MismatchedAssociationLengths(
                "one association family per stable letter is required")
        self.associations: list[Association] = []
        nb = self.alphabet.num_base
        for idx, family in enumerate(pairs):
            if not family:
                raise MismatchedAssociationLengths(
                    f"stable letter {stable[idx]} has no associations")
            u_words = [tuple(u) for u, _ in family]
            v_words = [tuple(v) for _, v in family]
            for w in u_words + v_words:
                if not w:
                    raise ParseError("association words must be nonempty")
                if not is_reduced(w):
                    raise ParseError("association words must be freely reduced")
                if any(abs(x) > nb for x in w):
                    raise ParseError("association words must use base letters only")
            self.associations.append(Association(
                u_words, v_words,
                fold(u_words, num_base=nb), fold(v_words, num_base=nb)))
        self.K = max(len(w) for assoc in self.associations
                     for w in assoc.u_words + assoc.v_words)

    # -- construction ------------------------------------------------------

    @classmethod
    def loads(cls, text: str) -> "MultipleHnnPresentation":
        base: list[str] | None = None
        stable: list[str] | None = None
        assoc_lines: list[tuple[str, str, str]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("base:"):
                base = line[len("base:"):].split()
            elif line.startswith("stable:"):
                stable = line[len("stable:"):].split()
            elif line.startswith("assoc "):
                head, _, rhs = line[len("assoc "):].partition(":")
                t = head.strip()
                if "->" not in rhs:
                    raise ParseError(f"line {lineno}: expected 'u -> v'")
                u_text, _, v_text = rhs.partition("->")
                assoc_lines.append((t, u_text.strip(), v_text.strip()))
            else:
                raise ParseError(f"line {lineno}: unrecognized line {line!r}")
        if base is None or stable is None:
            raise ParseError("presentation needs 'base:' and 'stable:' lines")
        alphabet = Alphabet(base, stable)
        by_letter: dict[str, list[tuple[Word, Word]]] = {t: [] for t in stable}
        for t, u_text, v_text in assoc_lines:
            if t not in by_letter:
                raise ParseError(f"assoc references unknown stable letter {t!r}")
            by_letter[t].append((alphabet.parse(u_text), alphabet.parse(v_text)))
        return cls(base, stable, [by_letter[t] for t in stable])

    @classmethod
    def load(cls, path: str) -> "MultipleHnnPresentation":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())

    def serialize(self) -> str:
        ab = self.alphabet
        lines = ["base: " + " ".join(ab.symbols[:ab.num_base]),
                 "stable: " + " ".join(ab.symbols[ab.num_base:])]
        for i, assoc in enumerate(self.associations):
            t = ab.symbols[ab.num_base + i]
            for u, v in zip(assoc.u_words, assoc.v_words):
                lines.append(f"assoc {t}: {ab.format(u)} -> {ab.format(v)}")
        return "\n".join(lines) + "\n"

    # -- structure ---------------------------------------------------------

    @property
    def num_stable(self) -> int:
        return len(self.associations)

    def stable_letter(self, i: int) -> int:
        """Positive letter for the i-th stable symbol (1-based i)."""
        return self.alphabet.num_base + i

    def stable_index(self, letter: int) -> int:
        """1-based stable index of a (signed) stable letter."""
        if not self.alphabet.is_stable(letter):
            raise ParseError(f"{letter} is not a stable letter")
        return abs(letter) - self.alphabet.num_base

    def association(self, i: int) -> Association:
        return self.associations[i - 1]

    def relators(self) -> list[Relator]:
        out = []
        for i, assoc in enumerate(self.associations, start=1):
            t = self.stable_letter(i)
            for s, (u, v) in enumerate(zip(assoc.u_words, assoc.v_words), start=1):
                out.append(Relator((-t,) + u + (t,) + inv(v), i, s))
        return out

    def relator(self, i: int, s: int) -> Relator:
        assoc = self.association(i)
        t = self.stable_letter(i)
        return Relator((-t,) + assoc.u_words[s - 1] + (t,)
                       + inv(assoc.v_words[s - 1]), i, s)

    def is_proper_u(self, i: int) -> bool:
        return not self.association(i).u_graph.is_full_rose(self.alphabet.num_base)

    def is_proper_v(self, i: int) -> bool:
        return not self.association(i).v_graph.is_full_rose(self.alphabet.num_base)

    # -- the U_i <-> V_i isomorphism ----------------------------------------

    def u_to_v(self, i: int, word: Word) -> tuple[Word, Word, Word] | None:
        """If ``word`` lies in U_i: (expression, raw v-image, reduced v-image)."""
        assoc = self.association(i)
        expr = member(word, assoc.u_graph)
        if expr is None:
            return None
        raw = concat_expression(expr, assoc.v_words)
        return expr, raw, free_reduce(raw)

    def v_to_u(self, i: int, word: Word) -> tuple[Word, Word, Word] | None:
        """If ``word`` lies in V_i: (expression, raw u-image, reduced u-image)."""
        assoc = self.association(i)
        expr = member(word, assoc.v_graph)
        if expr is None:
            return None
        raw = concat_expression(expr, assoc.u_words)
        return expr, raw, free_reduce(raw)

    def subgroup_length(self, i: int, word: Word, side: str) -> int | None:
        """|word|_s in U_i (side 'u') or V_i (side 'v'), or None."""
        graph = self.association(i).u_graph if side == "u" \
            else self.association(i).v_graph
        expr = member(word, graph)
        return None if expr is None else len(expr)

    def evaluate(self, i: int, expr, side: str) -> Word:
        words = self.association(i).u_words if side == "u" \
            else self.association(i).v_words
        return evaluate_expression(expr, words)

    def __repr__(self):
        ab = self.alphabet
        return (f"MultipleHnnPresentation(base={ab.symbols[:ab.num_base]}, "
                f"stable={ab.symbols[ab.num_base:]}, K={self.K})")
