import pytest

from hnnkit.errors import (BasisNotFree, MismatchedAssociationLengths,
                           ParseError)
from hnnkit.presentation import MultipleHnnPresentation


def test_load_bs12(bs12):
    assert bs12.alphabet.symbols == ["a", "t"]
    assert bs12.K == 2
    assert bs12.is_proper_v(1)
    assert not bs12.is_proper_u(1)


def test_load_ff(ff):
    assert ff.K == 1
    assert ff.is_proper_u(1) and ff.is_proper_v(1)


def test_load_two_t(two_t):
    assert two_t.num_stable == 2
    assert two_t.K == 1
    assert not two_t.is_proper_u(1) and not two_t.is_proper_v(2)


def test_basis_not_free():
    with pytest.raises(BasisNotFree):
        MultipleHnnPresentation.loads(
            "base: a\nstable: t\nassoc t: a -> a\nassoc t: a -> a a\n")


def test_missing_association():
    with pytest.raises(MismatchedAssociationLengths):
        MultipleHnnPresentation.loads("base: a\nstable: t\n")


def test_unreduced_association_rejected():
    with pytest.raises(ParseError):
        MultipleHnnPresentation.loads(
            "base: a\nstable: t\nassoc t: a a' a -> a\n")


def test_stable_letters_not_allowed_in_associations():
    with pytest.raises(ParseError):
        MultipleHnnPresentation.loads(
            "base: a\nstable: t\nassoc t: t -> a\n")


def test_relators_bs12(bs12):
    rels = bs12.relators()
    assert len(rels) == 1
    assert bs12.alphabet.format(rels[0].word) == "t' a t a' a'"
    assert (rels[0].i, rels[0].s) == (1, 1)


def test_relators_ff(ff):
    (r,) = ff.relators()
    assert ff.alphabet.format(r.word) == "t' a t b'"


def test_relators_two_t(two_t):
    rels = two_t.relators()
    assert len(rels) == 2
    assert two_t.alphabet.format(rels[0].word) == "t1' a t1 a'"
    assert two_t.alphabet.format(rels[1].word) == "t2' a t2 a'"


def test_serialize_round_trip(bs12, ff, two_t):
    for pres in (bs12, ff, two_t):
        text = pres.serialize()
        again = MultipleHnnPresentation.loads(text)
        assert again.serialize() == text
        assert again.K == pres.K
        assert again.alphabet.symbols == pres.alphabet.symbols


def test_mixed_alphabet_example():
    pres = MultipleHnnPresentation.loads(
        "base: a b\nstable: t\nassoc t: a -> b\nassoc t: b a -> a a b\n")
    assert pres.K == 3
    assert len(pres.relators()) == 2


def test_u_to_v_bs12(bs12):
    a = bs12.alphabet.parse("a")
    expr, raw, img = bs12.u_to_v(1, a)
    assert expr == (1,)
    assert bs12.alphabet.format(img) == "a a"
    assert bs12.v_to_u(1, a) is None
    expr2, raw2, img2 = bs12.v_to_u(1, bs12.alphabet.parse("a a"))
    assert img2 == a


def test_subgroup_length(bs12):
    w = bs12.alphabet.parse("a^4")
    assert bs12.subgroup_length(1, w, "u") == 4
    assert bs12.subgroup_length(1, w, "v") == 2
    assert bs12.subgroup_length(1, bs12.alphabet.parse("a^3"), "v") is None
