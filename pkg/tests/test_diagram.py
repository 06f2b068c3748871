import random

import pytest

from hnnkit.cayley import normal_form_word
from hnnkit.diagram import build_diagram, conjugate_decomposition, PlanarDiagram
from hnnkit.errors import NotTrivialWord
from hnnkit.words import free_reduce, inv


def random_trivial_word(pres, rng, max_blocks=3, max_z=3):
    rels = [r.word for r in pres.relators()]
    w = []
    for _ in range(rng.randint(1, max_blocks)):
        letters = [x for k in range(1, len(pres.alphabet.symbols) + 1)
                   for x in (k, -k)]
        z = [rng.choice(letters) for _ in range(rng.randint(0, max_z))]
        r = rng.choice(rels)
        if rng.random() < 0.5:
            r = inv(r)
        w.extend(z + list(r) + [-x for x in reversed(z)])
    return tuple(w)


def test_single_relator_cell(bs12):
    d = build_diagram(bs12, bs12.relators()[0].word)
    assert len(d.cells()) == 1
    assert d.boundary_word() == bs12.relators()[0].word
    assert d.diameter() == 2  # 5-cycle


def test_free_cancellation_no_cells(bs12):
    w = bs12.alphabet.parse("a a'")
    d = build_diagram(bs12, w)
    assert len(d.cells()) == 0
    assert d.boundary_word() == w


def test_two_cell_band(bs12):
    w = bs12.alphabet.parse("t' a a t a' a' a' a'")
    d = build_diagram(bs12, w)
    assert len(d.cells()) == 2
    assert d.boundary_word() == w


def test_empty_word(bs12):
    d = build_diagram(bs12, ())
    assert len(d.cells()) == 0
    assert d.num_vertices() == 1
    assert d.diameter() == 0


def test_not_trivial(bs12):
    with pytest.raises(NotTrivialWord):
        build_diagram(bs12, bs12.alphabet.parse("t"))
    with pytest.raises(NotTrivialWord):
        build_diagram(bs12, bs12.alphabet.parse("a"))


def test_conjugate_decomposition_counts(bs12):
    # t'^2 a t^2 a^-4 needs 1 + 2 cells (one pinch of length 1, one of 2)
    w = bs12.alphabet.parse("t' t' a t t a' a' a' a'")
    assert len(conjugate_decomposition(bs12, w)) == 3


@pytest.mark.parametrize("name", ["bs12", "ff", "two_t"])
def test_random_products_boundary_and_euler(all_presentations, name):
    pres = all_presentations[name]
    rng = random.Random(7)
    for _ in range(60):
        w = random_trivial_word(pres, rng)
        d = build_diagram(pres, w)
        assert d.boundary_word() == w
        d.euler_check()


def test_theta_consistency(bs12):
    rng = random.Random(3)
    for _ in range(20):
        w = random_trivial_word(bs12, rng)
        d = build_diagram(bs12, w)
        images = d.theta(lambda v: normal_form_word(bs12, v))
        base = d.base_vertex()
        assert images[base] == ()


def test_serialize_round_trip(bs12):
    rng = random.Random(5)
    for _ in range(10):
        w = random_trivial_word(bs12, rng)
        d = build_diagram(bs12, w)
        text = d.to_text()
        d2 = PlanarDiagram.from_text(bs12, text)
        assert d2.to_text() == text
        assert d2.boundary_word() == w


def test_dot_export(bs12):
    d = build_diagram(bs12, bs12.relators()[0].word)
    dot = d.to_dot()
    assert dot.startswith("graph") and "color=" in dot


def test_zero_refinements(bs12):
    w = bs12.relators()[0].word
    d = build_diagram(bs12, w)
    n_verts, n_edges = d.num_vertices(), d.num_edges
    dart = d.cycles[d.outer][0]
    d.subdivide_edge(dart)
    assert d.num_vertices() == n_verts + 1
    assert d.num_edges == n_edges + 1
    # the 0-edge does not change the metric diameter
    assert d.diameter() == 2
    d.insert_zero_cell(dart)
    assert len([f for f in d.faces.values() if f.kind == "zero"]) == 1
    d.split_vertex(d.cycles[d.outer][0])
    d.euler_check()
    # boundary label unchanged up to dropped 0-letters
    assert tuple(x for x in d.boundary_word()) == w


def test_cut_glue_makes_annulus(bs12):
    # 2-cell band diagram; identify a top a-edge with a bottom a-edge,
    # both of which border cells, turning the disc into an annulus
    w = bs12.alphabet.parse("t' a a t a' a' a' a'")
    d = build_diagram(bs12, w)
    hole = d.cut_glue(1, 1, 4, 1)
    assert d.boundary_word() == (w[0],) + w[5:]
    assert d.boundary_word(hole) == w[2:4]
    d.euler_check()
    assert d.hole == hole
