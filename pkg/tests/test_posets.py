import itertools

import pytest

from compactoid.ellis import ellis_map
from compactoid.errors import ImplicationError
from compactoid.graphmap import graph_map
from compactoid.invsys import BuilderModel, End, az_model, bz_model, trivial_model
from compactoid.posets import (
    IMPLICATIONS,
    PREDICATES,
    CompactificationMap,
    PredicateRecord,
    check_implications,
    classify,
    collapse_map,
    compare,
    compose_compactification_maps,
    find_map,
    identity_map,
    verify_map,
)
from compactoid.relcore import FinMap

MODELS = {
    "bz": bz_model,
    "az": az_model,
    "E(bz)": lambda: ellis_map(bz_model()),
    "E(az)": lambda: ellis_map(az_model()),
    "G(bz)": lambda: graph_map(bz_model()),
    "G(az)": lambda: graph_map(az_model()),
    "trivial": trivial_model,
}


@pytest.mark.parametrize("name", list(MODELS))
def test_classification_respects_implications(name):
    rec = classify(MODELS[name]())
    assert set(rec.verdicts) == set(PREDICATES)
    assert check_implications(rec)


def test_expected_verdicts():
    bz, az = classify(bz_model()), classify(az_model())
    assert [bz.mark(k) for k in PREDICATES] == ["yes", "yes", "yes", "no", "yes", "no", "no", "no"]
    assert all(az[k] for k in PREDICATES)
    assert az.extra["inverses"] == {"inf": "inf"}
    g = classify(graph_map(bz_model()))
    assert [g.mark(k) for k in PREDICATES] == ["yes"] * 3 + ["n/a"] * 5
    t = classify(trivial_model())
    assert t["G"] and t.extra["heuristic"]


def test_bz_s_witness():
    rec = classify(bz_model())
    x, y, lhs, rhs = rec.extra["s_involution_witness"]
    assert (x, y, lhs, rhs) == (End.MINUS_INF, End.PLUS_INF, End.MINUS_INF, End.PLUS_INF)
    # recomputed by hand: -inf . +inf = +inf, s(+inf) = -inf; s(+inf) . s(-inf) = -inf . +inf = +inf
    mul, s = bz_model().monoid(), bz_model().involution()
    assert s(mul(x, y)) == lhs and mul(s(y), s(x)) == rhs


def test_az_idempotent_inverses_by_brute_force():
    az = az_model()
    mul = az.monoid()
    cat = az.catalogue(5)
    for a in cat:
        inv = [b for b in cat if mul(mul(a, b), a) == a and mul(mul(b, a), b) == b]
        assert inv == [End.INF if a is End.INF else -a]


def test_corrupted_record_raises():
    rec = classify(ellis_map(bz_model()))
    rec.verdicts["G"] = False
    with pytest.raises(ImplicationError) as exc:
        check_implications(rec)
    assert exc.value.edge in (("Ellis", "G"), ("G<->", "G"))


def test_every_edge_is_enforced():
    for a, b in IMPLICATIONS:
        rec = PredicateRecord("x", {k: None for k in PREDICATES})
        rec.verdicts[a], rec.verdicts[b] = True, False
        with pytest.raises(ImplicationError):
            check_implications(rec)
        rec.verdicts[b] = None
        assert check_implications(rec)


class _Skewed(BuilderModel):
    """bz with a multiplication that is not associative."""

    def monoid(self):
        base = super().monoid()
        return lambda x, y: base(x, y) if isinstance(x, End) or isinstance(y, End) else x - y


def test_broken_multiplication_is_caught():
    rec = classify(_Skewed("bz"))
    assert rec["G"] and not rec["lts"] and not rec["Ellis"] and not rec["sm"]
    assert "not associative" in rec.witnesses["Ellis"]
    assert check_implications(rec)


class _Leaky(BuilderModel):
    """az whose translations do not fix the end."""

    def act(self, k, p):
        return 0 if p is End.INF and k else super().act(k, p)


def test_broken_action_fails_G():
    rec = classify(_Leaky("az"))
    assert rec["G"] is False and not rec["G*"]
    assert "limit point" in rec.witnesses["G"]
    assert check_implications(rec)


def test_collapse_map():
    phi = collapse_map()
    v = verify_map(phi)
    assert v.ok
    assert v.checks == {"factorizes": True, "levels": True, "bond_coherent": True,
                        "G_map": True, "commutes_with_s": True, "monoid_hom": True}
    assert phi.point_map(End.PLUS_INF) == phi.point_map(End.MINUS_INF) == End.INF


def test_collapse_levels_by_brute_force():
    bz, az = bz_model(), az_model()
    phi = collapse_map(4)
    for n, (m, f) in phi.levels.items():
        assert m == n
        for i, c in enumerate(bz.cells(n)):
            image = End.INF if isinstance(c, End) else c
            assert f(i) == az.cell_index(image, n)


def test_bad_level_map_has_bond_witness():
    phi = collapse_map(3)
    m3, f3 = phi.levels[3]
    swapped = FinMap(tuple(reversed(f3.images)), f3.codomain_size)
    bad = CompactificationMap(phi.source, phi.target, phi.point_map, {**phi.levels, 3: (m3, swapped)})
    v = verify_map(bad)
    assert not v.ok and v.checks["bond_coherent"] is False
    assert "level 2" in v.witnesses["bond_coherent"]


def test_bad_point_map_fails_factorization():
    phi = collapse_map(2)
    bad = CompactificationMap(phi.source, phi.target, lambda p: End.INF, phi.levels)
    v = verify_map(bad)
    assert v.checks["factorizes"] is False and v.checks["G_map"] is True


def test_no_map_from_az_to_bz():
    assert find_map(az_model(), bz_model(), 3) is None


def test_composition_of_maps():
    E = ellis_map(bz_model())
    to_bz = find_map(E, bz_model(), 3)
    assert verify_map(to_bz).ok
    both = compose_compactification_maps(collapse_map(3), to_bz)
    v = verify_map(both)
    assert v.ok and both.source is E
    assert both.point_map(E.limit_of(1)) == End.INF
    assert verify_map(identity_map(az_model(), 4)).ok


@pytest.mark.parametrize("a,b,rel", [
    ("bz", "az", "≥"),
    ("az", "bz", "≤"),
    ("E(bz)", "bz", "="),
    ("E(az)", "az", "="),
    ("G(bz)", "bz", "="),
    ("G(az)", "az", "="),
    ("G(bz)", "E(bz)", "="),
])
def test_compare(a, b, rel):
    assert compare(MODELS[a](), MODELS[b]()).relation == rel


def test_compare_ellis_twice():
    E = ellis_map(bz_model())
    assert compare(ellis_map(E), E).relation == "="


def test_compare_is_antisymmetric_on_builders():
    rels = {(a, b): compare(MODELS[a](), MODELS[b](), depth=3).relation
            for a, b in itertools.permutations(["bz", "az", "E(bz)"], 2)}
    flip = {"≥": "≤", "≤": "≥", "=": "="}
    for (a, b), r in rels.items():
        assert rels[b, a] == flip[r]
