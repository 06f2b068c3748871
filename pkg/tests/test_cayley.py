import itertools

import pytest

from hnnkit.britton import britton_reduce, equal_in_group
from hnnkit.cayley import (SeparationWitness, ball, divergence, geodesic,
                           normal_form, normal_form_word, side,
                           side_component_check, t_separated)
from hnnkit.errors import OracleRadiusExceeded, OutOfBall, RadiusTooLarge
from hnnkit.words import free_reduce, inv


def all_words(pres, max_len):
    letters = [x for k in range(1, len(pres.alphabet.symbols) + 1)
               for x in (k, -k)]
    for n in range(max_len + 1):
        yield from map(tuple, itertools.product(letters, repeat=n))


def test_normal_form_examples(bs12):
    p = bs12.alphabet.parse
    assert normal_form_word(bs12, ()) == ()
    assert normal_form_word(bs12, p("t' a t")) == normal_form_word(bs12, p("a a"))
    nf = normal_form(bs12, p("t a t'"))
    assert nf.t_length == 2


def test_normal_form_commuting(two_t):
    p = two_t.alphabet.parse
    assert normal_form_word(two_t, p("a t1")) == normal_form_word(two_t, p("t1 a"))
    assert normal_form_word(two_t, p("t1 t2")) != normal_form_word(two_t, p("t2 t1"))


def test_normal_form_matches_word_problem_small(bs12):
    words = list(all_words(bs12, 4))
    for w in words[::7]:
        for w2 in words[::11]:
            same_nf = normal_form_word(bs12, w) == normal_form_word(bs12, w2)
            same_group = equal_in_group(bs12, w, w2)
            assert same_nf == same_group, (w, w2)


def test_ball_radius0(bs12):
    b = ball(bs12, 0)
    assert b.num_vertices == 1
    assert b.dist == [0]


def test_ball_radius1_bs12(bs12):
    b = ball(bs12, 1)
    assert b.num_vertices == 5  # 1, a, a', t, t'


def test_ball_radius2_matches_enumeration(bs12):
    b = ball(bs12, 2)
    seen = {normal_form_word(bs12, w) for w in all_words(bs12, 2)}
    assert b.num_vertices == len(seen)
    for idx in range(b.num_vertices):
        assert b.dist[idx] <= 2


def test_ball_distances_exact(bs12):
    b = ball(bs12, 5)
    # distance by ball equals minimal length over brute-force enumeration
    lengths = {}
    for w in all_words(bs12, 5):
        k = normal_form_word(bs12, w)
        lengths.setdefault(k, len(w))
    for idx in range(b.num_vertices):
        assert b.dist[idx] == lengths[b.nfs[idx].key]


def test_ball_radius_cap(bs12):
    with pytest.raises(RadiusTooLarge):
        ball(bs12, 99)


def test_ball_trace_oracle(bs12):
    b = ball(bs12, 4)
    p = bs12.alphabet.parse
    assert b.trace(p("t' a t a' a'")) == 0
    assert b.trace(p("a t")) == b.trace(p("t a a"))
    assert b.trace(p("a")) != 0


def test_triangle_inequality_and_symmetry(bs12):
    b = ball(bs12, 4)
    pts = [b.word_of(i) for i in range(0, b.num_vertices, 7)][:8]
    for x in pts:
        for y in pts:
            try:
                dxy = b.distance(x, y)
                dyx = b.distance(y, x)
            except OracleRadiusExceeded:
                continue
            assert dxy == dyx
            for z in pts:
                try:
                    assert dxy <= b.distance(x, z) + b.distance(z, y)
                except OracleRadiusExceeded:
                    pass


def test_geodesic(bs12):
    b = ball(bs12, 4)
    p = bs12.alphabet.parse
    assert geodesic(bs12, p("a"), p("a"), b) == ()
    w = geodesic(bs12, (), p("a a"), b)
    assert len(w) == 2 and equal_in_group(bs12, w, p("a a"))
    g = geodesic(bs12, p("t"), p("t a"), b)
    assert len(g) == 1


def test_geodesic_out_of_ball(bs12):
    b = ball(bs12, 2)
    p = bs12.alphabet.parse
    with pytest.raises(OutOfBall):
        geodesic(bs12, (), p("a^8 t a^8"), b)


def test_divergence_trivial_forbidden(bs12):
    b = ball(bs12, 5)
    p = bs12.alphabet.parse
    res = divergence(bs12, p("a"), p("a'"), p("t t t"), 0.5, 10.0, b)
    assert res.value == b.distance(p("a"), p("a'"))


def test_divergence_equal_endpoints(bs12):
    b = ball(bs12, 5)
    p = bs12.alphabet.parse
    res = divergence(bs12, p("a"), p("a"), p("t t"), 0.5, 10.0, b)
    assert res.value == 0


def test_divergence_detour(ff):
    # in the free group F(a,t) with the redundant generator b = t'at,
    # paths from a to a' avoiding the identity must detour
    b = ball(ff, 4)
    p = ff.alphabet.parse
    res = divergence(ff, p("a"), p("a'"), (), 0.9, 0.0, b)
    direct = b.distance(p("a"), p("a'"))
    assert res.value is None or res.value > direct


def test_side_examples(bs12):
    p = bs12.alphabet.parse
    w = SeparationWitness((), 1)
    assert side(bs12, w, ()) == "near"
    assert side(bs12, w, p("t")) == "far"
    assert side(bs12, w, p("t'")) == "near"
    assert side(bs12, w, p("a t")) == "far"
    assert side(bs12, w, p("a")) == "near"


def test_side_orbit_invariance(bs12):
    b = ball(bs12, 5)
    p = bs12.alphabet.parse
    w = SeparationWitness(p("a"), 1)
    for idx in range(0, b.num_vertices, 3):
        x = b.word_of(idx)
        lhs = side(bs12, w, free_reduce(p("a") + p("a a") + x))
        rhs = side(bs12, w, free_reduce(p("a") + x))
        assert lhs == rhs


def test_t_separated_examples(bs12):
    p = bs12.alphabet.parse
    w = SeparationWitness((), 1)
    assert not t_separated(bs12, [()], [()], w)
    assert not t_separated(bs12, [()], [p("a")], w)
    assert t_separated(bs12, [(), p("a")], [p("t"), p("a t")], w)


@pytest.mark.parametrize("name,radius", [("bs12", 4), ("ff", 4), ("two_t", 4)])
def test_side_matches_component_oracle(all_presentations, balls, name, radius):
    pres = all_presentations[name]
    b = balls.get(name, radius)
    p = pres.alphabet.parse
    witnesses = [SeparationWitness((), 1)]
    if name == "two_t":
        witnesses.append(SeparationWitness(p("t1"), 2))
    else:
        witnesses.append(SeparationWitness(p("t"), 1))
    for w in witnesses:
        rep = side_component_check(pres, w, b)
        assert rep.ok, (name, w, rep.mismatches[:5], rep.conflicts)
        assert rep.checked > 0
