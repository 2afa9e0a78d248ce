"""Acceptance suite: one test per criterion, each reported as a PASS/FAIL line
in the terminal summary."""

import functools
import itertools
import random

from compactoid.ellis import (
    check_left_topological,
    check_right_topological,
    ellis_classify,
    ellis_map,
)
from compactoid.graphmap import GraphModel, check_condition_F, graph_map
from compactoid.invsys import (
    End,
    SymbolicElement,
    az_model,
    bz_model,
    classify_threads,
    closure_levelwise,
    limit_relation,
    project_graph,
)
from compactoid.posets import PREDICATES, check_implications, classify, collapse_map, compare, verify_map
from compactoid.relcore import (
    FinMap,
    FinRelation,
    compose_maps,
    compose_rel,
    converse,
    graph_of,
    product_map,
)
from compactoid.vietoris import composition_discontinuity_witness, u_cover

from conftest import brute_compose

RESULTS = {}


def criterion(number, title):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException:
                RESULTS[number] = (title, False, "")
                raise
            RESULTS[number] = (title, True, detail or "")
        return wrapper
    return deco


def _monoid_laws(R, S, T):
    n = R.domain_size
    one = FinRelation.identity(n)
    return (
        compose_rel(R, compose_rel(S, T)) == compose_rel(compose_rel(R, S), T)
        and compose_rel(one, R) == R == compose_rel(R, one)
        and converse(compose_rel(R, S)) == compose_rel(converse(S), converse(R))
        and converse(converse(R)) == R
        and compose_rel(R, S) == brute_compose(R, S)
    )


@criterion(1, "relation monoid laws")
def test_c01_relation_monoid_laws():
    all2 = [FinRelation(2, 2, (a, b)) for a in range(4) for b in range(4)]
    exhaustive = sum(1 for R, S, T in itertools.product(all2, repeat=3) if not _monoid_laws(R, S, T))
    assert exhaustive == 0
    rng = random.Random(20261016)
    failures = 0
    for _ in range(10_000):
        n = rng.randint(1, 6)
        R, S, T = (FinRelation(n, n, tuple(rng.getrandbits(n) for _ in range(n))) for _ in range(3))
        failures += not _monoid_laws(R, S, T)
    assert failures == 0
    return f"{16 ** 3} exhaustive triples on |X| = 2, 10000 random on |X| <= 6, 0 failures"


@criterion(2, "graph embedding is multiplicative")
def test_c02_graph_embedding():
    rng = random.Random(7)
    failures = 0
    for _ in range(1000):
        n = rng.randint(1, 6)
        g = FinMap(tuple(rng.sample(range(n), n)), n)
        h = FinMap(tuple(rng.sample(range(n), n)), n)
        failures += graph_of(compose_maps(h, g)) != compose_rel(graph_of(h), graph_of(g))
        failures += converse(graph_of(g)) != graph_of(g.inverse())
    assert failures == 0
    return "1000 permutation pairs, 0 failures"


@criterion(3, "composition is not left continuous in the Vietoris topology")
def test_c03_composition_witness():
    for n in (4, 6, 8, 10):
        w = composition_discontinuity_witness(n)
        assert w.RS == frozenset({(0, 0), (0, n)})
        assert w.RS_in_W
        assert len(w.perturbed) == n // 2
        assert all(RSa == frozenset({(0, 0)}) and not member for _, RSa, member in w.perturbed)
    return "grids n = 4, 6, 8, 10"


@criterion(4, "enveloping semigroup of bz")
def test_c04_ellis_bz():
    M = ellis_classify(bz_model(), depth=5)
    E = M.model
    kinds = {e.kind for e in M.elements}
    assert kinds == {"Translate", "LimitPlus", "LimitMinus"}
    assert E.limit_points() == (SymbolicElement("LimitMinus"), SymbolicElement("LimitPlus"))
    mul = bz_model().monoid()
    P, N = End.PLUS_INF, End.MINUS_INF
    table = {}
    for x in (N, 3, P):
        for y in (N, -5, P):
            table[x, y] = E.pr_e(E.compose(E.limit_of(1) if x is P else E.limit_of(-1) if x is N else E.embed(x),
                                           E.limit_of(1) if y is P else E.limit_of(-1) if y is N else E.embed(y)))
            assert table[x, y] == mul(x, y)
    # the nine cases: +-inf . x = x . +-inf = +-inf; +-inf . +inf = +inf; +-inf . -inf = -inf
    assert table[P, -5] == P and table[N, -5] == N and table[3, P] == P and table[3, N] == N
    assert table[P, P] == table[N, P] == P and table[P, N] == table[N, N] == N
    assert table[3, -5] == -2
    assert check_right_topological(M).ok
    left = check_left_topological(M)
    assert not left.ok
    assert left.witness == (SymbolicElement("LimitPlus"), SymbolicElement("LimitMinus"))
    assert tuple(E.pr_e(f) for f in left.witness) == (P, N)
    return "left witness: multiplication by LimitPlus at -inf"


@criterion(5, "negation is not an involution of bz")
def test_c05_s_witness():
    rec = classify(bz_model())
    assert rec.extra["s_involution"] is False
    assert rec.extra["s_involution_witness"] == (End.MINUS_INF, End.PLUS_INF, End.MINUS_INF, End.PLUS_INF)
    return "s(-inf . +inf) = -inf, s(+inf) . s(-inf) = +inf"


def _limit_from_definition(model, graph_model, R, n):
    """Level-n shadow of a symbolic limit relation from its pair membership."""
    pts = model.catalogue(model.threshold(n) + 2)
    size = len(model.cells(n))
    return FinRelation.from_pairs(size, size, {
        (model.point_cell(x, n), model.point_cell(y, n))
        for x in pts for y in pts if graph_model.contains_pair(R, x, y)})


@criterion(6, "graph closures of bz and az")
def test_c06_graph_method():
    bz = bz_model()
    Gb = GraphModel(bz)
    RP, RM = SymbolicElement("RPlus"), SymbolicElement("RMinus")
    for N in (3, 4, 5, 6):
        sets = {n: closure_levelwise(bz, n).relations for n in range(1, N + 1)}
        lims = {limit_relation(bz, 1, N), limit_relation(bz, -1, N)}
        assert limit_relation(bz, 1, N) == _limit_from_definition(bz, Gb, RP, N)
        assert limit_relation(bz, -1, N) == _limit_from_definition(bz, Gb, RM, N)
        graphs = {project_graph(bz, k, N) for k in range(-4 * N, 4 * N + 1)}
        assert sets[N] == frozenset(graphs)
        # past |k| = 2N + 1 every graph shadow is a limit shadow
        near = {project_graph(bz, k, N) for k in range(-2 * N - 1, 2 * N + 2)}
        assert sets[N] - near == lims and len(lims) == 2
        if N >= 4:
            tc = classify_threads(bz, sets)
            assert tc.limits == (RM, RP)
    assert compare(graph_map(bz), bz).relation == "="

    az = az_model()
    Ga = GraphModel(az)
    AE = SymbolicElement("AllEndsInf")
    for N in (3, 4, 5, 6):
        top = closure_levelwise(az, N).relations
        extra = top - {project_graph(az, k, N) for k in range(-2 * N, 2 * N + 1)}
        assert extra == {_limit_from_definition(az, Ga, AE, N)}
        if N >= 4:
            sets = {n: closure_levelwise(az, n).relations for n in range(1, N + 1)}
            assert classify_threads(az, sets).limits == (AE,)
    assert compare(graph_map(az), az).relation == "="
    return "depths 3-6; G(bz) = bz, G(az) = az"


@criterion(7, "Ellis map fixed points and idempotence")
def test_c07_fixed_points():
    Eb = ellis_map(bz_model())
    assert compare(Eb, bz_model()).relation == "="
    assert compare(ellis_map(az_model()), az_model()).relation == "="
    assert compare(ellis_map(Eb), Eb).relation == "="
    return "E(bz) = bz, E(az) = az, E(E(bz)) = E(bz)"


@criterion(8, "star-cover condition on bz")
def test_c08_condition_F():
    bz = bz_model()
    for n in (2, 3, 5):
        assert check_condition_F(bz, u_cover(n), u_cover(2 * n)).ok
    witnesses = []
    for n in (2, 3, 5):
        v = check_condition_F(bz, u_cover(n), u_cover(n))
        assert not v.ok
        w = v.witness
        assert u_cover(n).block_of(w["g"]) == u_cover(n).block_of(w["h"]) and w["g"] != w["h"]
        witnesses.append(f"n={n}: (g, h) = ({w['g']}, {w['h']})")
    return "; ".join(witnesses)


@criterion(9, "taxonomy consistency")
def test_c09_taxonomy():
    models = [az_model(), bz_model(), ellis_map(bz_model()), ellis_map(az_model()),
              graph_map(bz_model()), graph_map(az_model())]
    for m in models:
        rec = classify(m)
        assert set(rec.verdicts) == set(PREDICATES)
        assert check_implications(rec)
    az = classify(az_model())
    assert az["sim"] and az.extra["inverses"] == {"inf": "inf"}
    bz = classify(bz_model())
    assert bz["Ellis"] and bz["G*"] and bz["sm"] is False
    return "6 models"


@criterion(10, "collapse map bz -> az")
def test_c10_collapse():
    v = verify_map(collapse_map())
    assert v.ok
    for key in ("factorizes", "levels", "bond_coherent", "G_map", "commutes_with_s", "monoid_hom"):
        assert v.checks[key] is True, key
    assert compare(bz_model(), az_model()).relation == "≥"
    return "bz ≥ az"


@criterion(11, "level coherence and stabilization bounds")
def test_c11_level_coherence():
    bounds = []
    for model in (bz_model(), az_model()):
        for n in range(1, 6):
            b = model.bond(n)
            for k in range(-4 * n - 8, 4 * n + 9):
                assert project_graph(model, k, n) == product_map(b, project_graph(model, k, n + 1))
            for sign in (1, -1):
                assert limit_relation(model, sign, n) == product_map(b, limit_relation(model, sign, n + 1))
            c = closure_levelwise(model, n)
            if model.kind == "bz":
                assert c.bound <= 2 * n + 2
                bounds.append(f"{n}:{c.bound}")
    return "bz bounds " + " ".join(bounds)
