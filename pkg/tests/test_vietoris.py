import itertools
from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from compactoid.errors import CoverShapeError, EmptySetError, NotSelfInverse
from compactoid.invsys import End, bz_model, az_model, project_graph
from compactoid.relcore import FinMap, FinSet, cyclic_shift
from compactoid.vietoris import (
    Cover,
    VietorisBasic,
    ZCover,
    composition_discontinuity_witness,
    emit_cover,
    ends_cover,
    hyper_entourage_related,
    invert_cover,
    join_covers,
    pair_code,
    parse_cover,
    product_cover,
    refines,
    star,
    u_cover,
    vietoris_member,
    whole_cover,
)


@st.composite
def covers(draw, size=None):
    n = draw(st.integers(1, 7)) if size is None else size
    labels = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    blocks = {}
    for x, b in enumerate(labels):
        blocks.setdefault(b, set()).add(x)
    extra = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1), max_size=2))
    return Cover(FinSet(n), tuple(blocks.values()) + tuple(extra))


def test_member_whole_carrier():
    X = frozenset(range(4))
    assert vietoris_member(X, VietorisBasic((X,)))
    assert not vietoris_member(frozenset(), VietorisBasic((X,)))


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.sets(st.integers(0, n - 1)),
    st.lists(st.sets(st.integers(0, n - 1), min_size=1), min_size=1, max_size=3))))
def test_member_matches_definition(data):
    R, blocks = data
    B = VietorisBasic(tuple(blocks))
    expected = bool(R) and all(set(R) & b for b in blocks) and all(any(x in b for b in blocks) for x in R)
    assert vietoris_member(R, B) == expected


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.sets(st.integers(0, n - 1), min_size=1),
    st.lists(st.sets(st.integers(0, n - 1), min_size=1), min_size=1, max_size=3),
    st.integers(0, 2), st.sets(st.integers(0, n - 1)))))
def test_member_monotone_in_blocks(data):
    R, blocks, i, grow = data
    B = VietorisBasic(tuple(blocks))
    i %= len(blocks)
    bigger = VietorisBasic(tuple(b | grow if j == i else b for j, b in enumerate(blocks)))
    if vietoris_member(R, B):
        assert vietoris_member(R, bigger)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_composition_witness(n):
    w = composition_discontinuity_witness(n)
    assert w.RS == {(0, 0), (0, n)}
    assert w.RS_in_W
    assert [a for a, _, _ in w.perturbed] == [Fraction(a, n) for a in range(n // 2)]
    for _, RSa, member in w.perturbed:
        assert RSa == {(0, 0)} and not member
    assert w.holds


def test_composition_witness_needs_half_on_grid():
    with pytest.raises(ValueError):
        composition_discontinuity_witness(5)


@given(covers())
def test_star_and_refines_brute_force(u):
    n = u.carrier.size
    for A in itertools.chain.from_iterable(itertools.combinations(range(n), r) for r in range(3)):
        st_A = set()
        for b in u.blocks:
            if any(a in b for a in A):
                st_A |= b
        assert star(A, u) == st_A
    assert star(range(n), Cover.trivial(u.carrier)) == set(range(n))
    assert refines(u, Cover.trivial(u.carrier))
    assert refines(u, u)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(covers(n), covers(n))))
def test_join_refines_both(pair):
    u, v = pair
    j = join_covers(u, v)
    assert refines(j, u) and refines(j, v)
    pieces = {a & b for a in u.blocks for b in v.blocks if a & b}
    assert set(j.blocks) == pieces


@given(covers())
def test_invert_cover_twice(u):
    n = u.carrier.size
    s = FinMap(tuple(range(n - 1, -1, -1)), n)
    assert invert_cover(invert_cover(u, s), s).same_blocks(u)
    assert invert_cover(u, FinMap.identity(n)).same_blocks(u)


def test_invert_cover_rejects_non_involution():
    u = Cover.trivial(FinSet(3))
    with pytest.raises(NotSelfInverse):
        invert_cover(u, cyclic_shift(3))


def test_entourage_basics():
    u = Cover(FinSet(4), ({0}, {1}, {2, 3}))
    assert hyper_entourage_related({2}, {2}, u)
    assert hyper_entourage_related({2}, {3}, u)
    assert not hyper_entourage_related({0}, {1}, u)
    with pytest.raises(EmptySetError):
        hyper_entourage_related(set(), {1}, u)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_entourage_on_translation_graphs(n):
    """u_n partitions the level, so closeness of two shadows means they
    meet exactly the same product blocks."""
    m = bz_model()
    lvl = m.level(n)
    uc = u_cover(n).to_level_cover(m, n)
    uu = product_cover(uc)
    size = lvl.size
    for k in range(-2 * n - 3, 2 * n + 3):
        A = pair_code(project_graph(m, k, n), size)
        B = pair_code(project_graph(m, k + 1, n), size)
        expected = B <= star(A, uu) and A <= star(B, uu)
        assert hyper_entourage_related(A, B, uu) == expected
        blk = {x: i for i, b in enumerate(uc.blocks) for x in b}
        a_blocks = {(blk[x], blk[y]) for x, y in project_graph(m, k, n)}
        b_blocks = {(blk[x], blk[y]) for x, y in project_graph(m, k + 1, n)}
        assert expected == (a_blocks == b_blocks)


def test_symbolic_cover_shapes():
    assert u_cover(3).shape == "rays"
    assert ends_cover(3).shape == "ends"
    assert whole_cover().shape == "whole"
    with pytest.raises(CoverShapeError):
        ZCover((((None, 0),), ((2, None),)))  # 1 is uncovered
    with pytest.raises(CoverShapeError):
        ZCover((((None, 0),), ((1, 3),), ((4, None),)))


def test_symbolic_star_of_zero():
    u = u_cover(3)
    blk = u.block_of(0)
    assert u.blocks[blk] == ((0, 0),)
    assert u.block_of(End.MINUS_INF) == u.block_of(-7) == 0
    assert u.block_of(End.PLUS_INF) == u.block_of(3)


def test_negation_fixes_u_n_setwise():
    for n in (1, 2, 5):
        assert invert_cover(u_cover(n), "neg").same_blocks(u_cover(n))
        assert invert_cover(ends_cover(n), "neg").same_blocks(ends_cover(n))
    asym = parse_cover("ray(-inf,-1] | point(0) | point(1) | ray[2,+inf)")
    flipped = invert_cover(asym, "neg")
    assert emit_cover(flipped) == "ray(-inf,-2] | point(-1) | point(0) | ray[1,+inf)"
    assert invert_cover(flipped, "neg").same_blocks(asym)


def test_symbolic_refinement():
    assert u_cover(3).refines(u_cover(2))
    assert not u_cover(2).refines(u_cover(3))
    assert u_cover(2).refines(whole_cover())


def test_join_of_level_covers():
    m = bz_model()
    u2 = u_cover(2).to_level_cover(m, 3)
    u3 = u_cover(3).to_level_cover(m, 3)
    assert join_covers(u2, u3).same_blocks(u3)


@pytest.mark.parametrize("text", [
    "ray(-inf,-3] | point(-2) | ... | point(2) | ray[3,+inf)",
    "ray(-inf,-3] + ray[3,+inf) | point(-2) | ... | point(2)",
    "all",
    "ray(-inf,0] | point(1) | ray[2,+inf)",
])
def test_literal_round_trip(text):
    c = parse_cover(text)
    assert parse_cover(emit_cover(c)) == c.canonical()
    assert emit_cover(parse_cover(emit_cover(c))) == emit_cover(c)


def test_literal_expansion():
    assert parse_cover("ray(-inf,-3] | point(-2) | ... | point(2) | ray[3,+inf)").same_blocks(u_cover(3))
    assert parse_cover("ray(-inf,-3] | ... | ray[3,+inf)").same_blocks(u_cover(3))
    assert parse_cover("ray(-inf,-3) | ... | ray(3,+inf)").same_blocks(u_cover(4))
    with pytest.raises(CoverShapeError):
        parse_cover("ray(-inf,-3] | blob(2)")
    with pytest.raises(CoverShapeError):
        parse_cover("... | point(1)")


def test_level_cover_of_ends_cover():
    m = az_model()
    c = ends_cover(2).to_level_cover(m, 3)
    labels = m.cells(3)
    ends_block = next(b for b in c.blocks if m.cell_index(End.INF, 3) in b)
    assert {labels[i] for i in ends_block} == {-3, -2, 2, 3, End.INF}
