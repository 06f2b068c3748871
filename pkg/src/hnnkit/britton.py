"""Pinch detection and Britton reduction for HNN words.

A pinch is a subword t_i' u t_i with u in U_i (or t_i v t_i' with v in V_i);
removing it through the association isomorphism drops two stable letters.
A word equal to the identity either has no stable letters (then it is freely
trivial) or contains a pinch, so iterated pinch removal decides the word
problem and realizes the minimal stable-letter count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import OracleRadiusExceeded
from .presentation import MultipleHnnPresentation
from .words import Word, free_reduce

Oracle = Callable[[Word], int]  # exact |.|_G, raises OracleRadiusExceeded


@dataclass
class Pinch:
    """A rewritable subword w[start..end] (inclusive, both stable letters)."""
    start: int
    end: int
    i: int              # 1-based stable-letter index
    direction: str      # 'u': t' u t with u in U_i;  'v': t v t' with v in V_i
    expr: Word          # expression of the interior in the side's basis
    raw_image: Word     # unreduced image concatenation (other side's basis)
    image: Word         # freely reduced image


@dataclass
class TShortestReport:
    word: Word
    t_count: int
    is_pinch_free: bool
    is_almost_t_shortest: bool
    is_t_shortest: bool | None
    geodesic_length: int | None = None
    decomposition_length: int | None = None


def t_count(pres: MultipleHnnPresentation, word: Word) -> int:
    nb = pres.alphabet.num_base
    return sum(1 for x in word if abs(x) > nb)


def stable_positions(pres: MultipleHnnPresentation, word: Word) -> list[int]:
    nb = pres.alphabet.num_base
    return [p for p, x in enumerate(word) if abs(x) > nb]


def maximal_a_subwords(pres: MultipleHnnPresentation, word: Word) -> list[Word]:
    nb = pres.alphabet.num_base
    out, cur = [], []
    for x in word:
        if abs(x) > nb:
            out.append(tuple(cur))
            cur = []
        else:
            cur.append(x)
    out.append(tuple(cur))
    return out


def detect_pinch(pres: MultipleHnnPresentation, word: Word) -> Pinch | None:
    """Leftmost innermost pinch of ``word``, or None if pinch-free.

    Innermost pairs are consecutive stable letters, so candidates are scanned
    left to right over consecutive stable positions.
    """
    positions = stable_positions(pres, word)
    for p, q in zip(positions, positions[1:]):
        x, y = word[p], word[q]
        if x != -y:
            continue
        i = pres.stable_index(x)
        interior = free_reduce(word[p + 1: q])
        if x < 0:
            found = pres.u_to_v(i, interior)
            direction = "u"
        else:
            found = pres.v_to_u(i, interior)
            direction = "v"
        if found is not None:
            expr, raw, image = found
            return Pinch(p, q, i, direction, expr, raw, image)
    return None


def britton_reduce(pres: MultipleHnnPresentation, word: Word) -> Word:
    """Pinch-free word equal to ``word`` in G, with reduced a-subwords.

    Pinches are removed leftmost-innermost; each removal drops two stable
    letters, so this terminates.  The result is empty iff word = 1 in G.
    """
    w = free_reduce(word)
    while True:
        pinch = detect_pinch(pres, w)
        if pinch is None:
            return w
        w = free_reduce(w[:pinch.start] + pinch.image + w[pinch.end + 1:])


def is_pinch_free(pres: MultipleHnnPresentation, word: Word) -> bool:
    return detect_pinch(pres, word) is None


def equal_in_group(pres: MultipleHnnPresentation, w1: Word, w2: Word) -> bool:
    from .words import inv
    return britton_reduce(pres, w1 + inv(w2)) == ()


def make_t_minimal(pres: MultipleHnnPresentation, word: Word) -> Word:
    """Britton-reduce: minimal t-count with freely reduced a-parts.

    This is the constructive grade used by the partition machinery; it is
    t-shortest up to geodesity of the a-subwords, which verify_t_shortest
    certifies separately when a ball oracle is available.
    """
    return britton_reduce(pres, word)


def verify_t_shortest(pres: MultipleHnnPresentation, word: Word,
                      oracle: Oracle | None = None) -> TShortestReport:
    """Classify ``word``: pinch-free / almost t-shortest / t-shortest.

    Almost t-shortest (minimal t-count) is decided by Britton reduction
    alone.  Full t-shortestness also needs |w|_G = |w|_t + sum |v_i|_G over
    maximal a-subwords with every a-subword freely reduced; the geodesic
    lengths come from ``oracle``, which raises OracleRadiusExceeded when it
    cannot certify a length.
    """
    reduced = britton_reduce(pres, word)
    tc = t_count(pres, word)
    almost = tc == t_count(pres, reduced)
    pinchfree = is_pinch_free(pres, word)
    if oracle is None:
        return TShortestReport(word, tc, pinchfree, almost, None)
    parts = maximal_a_subwords(pres, word)
    parts_reduced = all(free_reduce(p) == p for p in parts)
    total = oracle(word)
    decomposition = tc + sum(oracle(p) for p in parts if p)
    shortest = almost and parts_reduced and total == decomposition
    return TShortestReport(word, tc, pinchfree, almost, shortest,
                           geodesic_length=total,
                           decomposition_length=decomposition)
