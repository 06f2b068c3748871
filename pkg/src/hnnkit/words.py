"""Signed-letter words over a fixed alphabet of base and stable symbols.

A word is a plain ``tuple`` of nonzero ints: letter ``+k`` is the k-th symbol
of the alphabet (1-based), ``-k`` its inverse.  Base symbols come first,
stable symbols after them, so ``abs(x) > alphabet.num_base`` tests stability.

Text syntax: whitespace-separated letters, inverses written with a trailing
apostrophe or ``^-1`` (``a t a' t'``).  Integer powers like ``a^3`` are
accepted on input; output always uses single letters and apostrophes, with
``1`` for the empty word, so parse(format(w)) == w.
"""

from __future__ import annotations

from .errors import ParseError

Word = tuple[int, ...]

EMPTY: Word = ()


class Alphabet:
    """Symbol table: base letters first, stable letters after."""

    def __init__(self, base: list[str], stable: list[str]):
        symbols = list(base) + list(stable)
        if len(set(symbols)) != len(symbols):
            raise ParseError(f"duplicate symbols in alphabet: {symbols}")
        for s in symbols:
            if not s or not s[0].isalpha() or not s.isalnum():
                raise ParseError(f"invalid symbol name: {s!r}")
        self.symbols = symbols
        self.num_base = len(base)
        self._index = {s: i + 1 for i, s in enumerate(symbols)}

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols \
            and self.num_base == other.num_base

    def __repr__(self):
        return (f"Alphabet(base={self.symbols[:self.num_base]}, "
                f"stable={self.symbols[self.num_base:]})")

    @property
    def base_letters(self) -> list[int]:
        return list(range(1, self.num_base + 1))

    @property
    def stable_letters(self) -> list[int]:
        return list(range(self.num_base + 1, len(self.symbols) + 1))

    def letter(self, symbol: str, sign: int = 1) -> int:
        if symbol not in self._index:
            raise ParseError(f"unknown symbol {symbol!r}")
        return sign * self._index[symbol]

    def symbol(self, letter: int) -> str:
        return self.symbols[abs(letter) - 1]

    def is_stable(self, letter: int) -> bool:
        return abs(letter) > self.num_base

    def is_base(self, letter: int) -> bool:
        return abs(letter) <= self.num_base

    def contains(self, letter: int) -> bool:
        return 1 <= abs(letter) <= len(self.symbols)

    def parse(self, text: str) -> Word:
        out: list[int] = []
        for tok in text.split():
            if tok == "1":
                continue
            sym, power = tok, 1
            if "^" in tok:
                sym, _, exp = tok.partition("^")
                try:
                    power = int(exp)
                except ValueError:
                    raise ParseError(f"bad exponent in token {tok!r}") from None
            elif tok.endswith("'"):
                sym, power = tok[:-1], -1
            if sym not in self._index:
                raise ParseError(f"unknown symbol {sym!r} in {text!r}")
            letter = self._index[sym]
            out.extend([letter if power > 0 else -letter] * abs(power))
        return tuple(out)

    def format(self, word: Word) -> str:
        if not word:
            return "1"
        return " ".join(self.symbol(x) + ("'" if x < 0 else "") for x in word)


def inv(word: Word) -> Word:
    return tuple(-x for x in reversed(word))


def free_reduce(word: Word) -> Word:
    stack: list[int] = []
    for x in word:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def free_reduce_trace(word: Word) -> tuple[Word, list[tuple[int, int]]]:
    """Free reduction with a replayable cancellation trace.

    Returns ``(reduced, ops)`` where each op ``(p, x)`` deletes the adjacent
    pair ``x, -x`` at positions ``p, p+1`` of the word as it stands after the
    preceding ops.  Replaying ops in order on ``word`` yields ``reduced``;
    replaying them reversed as insertions rebuilds ``word`` from ``reduced``.
    """
    stack: list[int] = []
    ops: list[tuple[int, int]] = []
    for x in word:
        if stack and stack[-1] == -x:
            ops.append((len(stack) - 1, stack[-1]))
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack), ops


def is_reduced(word: Word) -> bool:
    return all(word[i] != -word[i + 1] for i in range(len(word) - 1))


def cyclic_reduce(word: Word) -> Word:
    w = free_reduce(word)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def power(word: Word, n: int) -> Word:
    if n < 0:
        return inv(word) * (-n)
    return word * n
