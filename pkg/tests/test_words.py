import pytest
from hypothesis import given, strategies as st

from hnnkit.errors import ParseError
from hnnkit.words import (Alphabet, cyclic_reduce, free_reduce,
                          free_reduce_trace, inv, is_reduced)

AB = Alphabet(["a", "b"], ["t"])

letters = st.sampled_from([1, -1, 2, -2, 3, -3])
words = st.lists(letters, max_size=24).map(tuple)


def test_parse_basics():
    assert AB.parse("a t a' t'") == (1, 3, -1, -3)
    assert AB.parse("a^-1") == (-1,)
    assert AB.parse("a^3 b'") == (1, 1, 1, -2)
    assert AB.parse("1") == ()
    assert AB.parse("") == ()


def test_parse_rejects_unknown():
    with pytest.raises(ParseError):
        AB.parse("c")
    with pytest.raises(ParseError):
        AB.parse("a^x")


def test_format():
    assert AB.format((1, 3, -1, -3)) == "a t a' t'"
    assert AB.format(()) == "1"


@given(words)
def test_parse_format_round_trip(w):
    assert AB.parse(AB.format(w)) == w


def test_reduce_examples():
    assert free_reduce(AB.parse("a a' b")) == AB.parse("b")
    assert free_reduce(()) == ()
    assert free_reduce(AB.parse("a b b' a")) == AB.parse("a a")


@given(words)
def test_reduce_idempotent_and_shorter(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert len(r) <= len(w)
    assert is_reduced(r)


@given(words)
def test_w_winv_trivial(w):
    assert free_reduce(w + inv(w)) == ()


@given(words)
def test_reduce_trace_replay(w):
    reduced, ops = free_reduce_trace(w)
    cur = list(w)
    for p, x in ops:
        assert cur[p] == x and cur[p + 1] == -x
        del cur[p:p + 2]
    assert tuple(cur) == reduced
    # reversed replay rebuilds the original
    rebuilt = list(reduced)
    for p, x in reversed(ops):
        rebuilt[p:p] = [x, -x]
    assert tuple(rebuilt) == w


@given(words)
def test_cyclic_reduce(w):
    c = cyclic_reduce(w)
    assert free_reduce(c) == c
    assert not (len(c) >= 2 and c[0] == -c[-1])
