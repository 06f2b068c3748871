import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hnnkit.errors import AlphabetMismatch, BasisNotFree
from hnnkit.folding import evaluate_expression, fold, member
from hnnkit.words import free_reduce, inv, is_reduced


def words_up_to(num_letters, max_len):
    alphabet = [x for k in range(1, num_letters + 1) for x in (k, -k)]
    for n in range(max_len + 1):
        for tup in itertools.product(alphabet, repeat=n):
            yield tup


def subgroup_elements_brute(gens, max_expr_len):
    """All subgroup elements as {reduced word: shortest expression length}."""
    out = {(): 0}
    frontier = {(): ()}
    m = len(gens)
    for _ in range(max_expr_len):
        new = {}
        for expr, val in frontier.items():
            for x in [k for k in range(1, m + 1) for k in (k, -k)]:
                if expr and expr[-1] == -x:
                    continue
                e2 = expr + (x,)
                w2 = free_reduce(val + (gens[x - 1] if x > 0 else inv(gens[-x - 1])))
                if w2 not in out:
                    out[w2] = len(e2)
                    new[e2] = w2
        frontier = new
    return out


def test_fold_single_loop():
    g = fold([(1,)])
    assert g.num_vertices == 1
    assert g.accepts((1, 1, 1))
    assert not g.accepts((2,) if False else (1, 1, 1, 1, -1, -1, -1, -1)) is False


def test_fold_a_squared():
    g = fold([(1, 1)])
    assert g.num_vertices == 2
    for m in range(-6, 7):
        w = (1,) * m if m >= 0 else (-1,) * (-m)
        assert g.accepts(w) == (m % 2 == 0)
    assert member((1, 1, 1, 1), g) == (1, 1)
    assert member((1, 1, 1), g) is None
    assert member((), g) == ()


def test_duplicate_generator_not_free():
    with pytest.raises(BasisNotFree):
        fold([(1,), (1,)])
    with pytest.raises(BasisNotFree):
        fold([(1,), (-1,)])
    with pytest.raises(BasisNotFree):
        fold([(1, 1), (1, 1, 1)])


def test_empty_generator_rejected():
    with pytest.raises(BasisNotFree):
        fold([()])


def test_alphabet_guard():
    with pytest.raises(AlphabetMismatch):
        fold([(1, 3)], num_base=2)


def test_expression_history_conjugate():
    g = fold([(1, 2, -1)])  # a b a'
    assert member((1, 2, -1), g) == (1,)
    assert member((1, 2, 2, -1), g) == (1, 1)
    assert member((2,), g) is None


def test_expression_two_generators():
    gens = [(1, 2), (1, 3)]  # ab, ac
    g = fold(gens)
    assert member((1, 2), g) == (1,)
    assert member((1, 3), g) == (2,)
    w = free_reduce((1, 2) + inv((1, 3)))
    assert member(w, g) == (1, -2)


BASES = [
    [(1,)],
    [(1, 1)],
    [(1, 1), (2,)],
    [(1, 2)],
    [(1, 2), (1, -2)],
    [(2, 1), (2, 2)],
    [(1, 2, -1)],
    [(1, 2, -1), (2, 2)],
    [(1,), (2, 1, -2)],
]


@pytest.mark.parametrize("gens", BASES)
def test_member_matches_brute_force(gens):
    g = fold(gens)
    table = subgroup_elements_brute(gens, 4)
    num_letters = max(abs(x) for w in gens for x in w)
    for w in words_up_to(num_letters, 4):
        expr = member(w, g)
        red = free_reduce(w)
        if expr is not None:
            # evaluating the expression reproduces the reduced word
            assert evaluate_expression(expr, gens) == red
            if red in table:
                assert len(expr) == table[red]
        else:
            assert red not in table or len(red) > 0 and red not in table


@pytest.mark.parametrize("gens", BASES)
def test_expression_length_is_minimal(gens):
    g = fold(gens)
    table = subgroup_elements_brute(gens, 5)
    for red, shortest in table.items():
        expr = member(red, g)
        assert expr is not None
        assert len(expr) == shortest
        assert evaluate_expression(expr, gens) == red


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=10).map(tuple))
def test_coset_rep_is_coset_function(w):
    g = fold([(1, 1), (2, 1)])
    rep = g.coset_rep(w)
    # rep is in the same left coset: rep' * w lies in the subgroup
    assert g.accepts(free_reduce(inv(rep) + w))
    # and is a function of the coset
    for h in [(1, 1), (2, 1), (-1, -2)]:
        w2 = free_reduce(w + h)
        assert g.coset_rep(w2) == rep


def test_decompose():
    g = fold([(1, 1)])
    rep, h = g.decompose((1, 1, 1))
    assert free_reduce(rep + h) == (1, 1, 1)
    assert g.accepts(h)


def test_is_full_rose():
    assert fold([(1,), (2,)]).is_full_rose(2)
    assert not fold([(1, 1), (2,)]).is_full_rose(2)
    assert not fold([(1,)]).is_full_rose(2)
