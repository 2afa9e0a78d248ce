import hypothesis.strategies as st

from compactoid.relcore import FinMap, FinRelation


@st.composite
def relations(draw, size=None, max_size=6):
    n = draw(st.integers(1, max_size)) if size is None else size
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n))
    return FinRelation(n, n, tuple(rows))


@st.composite
def relation_triples(draw, max_size=6):
    n = draw(st.integers(1, max_size))
    return tuple(draw(relations(size=n)) for _ in range(3))


@st.composite
def permutations(draw, size):
    return FinMap(tuple(draw(st.permutations(range(size)))), size)


@st.composite
def permutation_pairs(draw, max_size=6):
    n = draw(st.integers(1, max_size))
    return draw(permutations(n)), draw(permutations(n))


def brute_compose(R, S):
    """Triple loop over (x, z, y): S first, then R."""
    pairs = set()
    for x in range(S.domain_size):
        for z in range(S.codomain_size):
            for y in range(R.codomain_size):
                if (x, z) in S and (z, y) in R:
                    pairs.add((x, y))
    return FinRelation.from_pairs(S.domain_size, R.codomain_size, pairs)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        title, ok, detail = mod.RESULTS[number]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
