"""The method of graphs: closures of translation graphs in the hyperspace.

Points of a :class:`GraphModel` are closed relations on the base model:
graphs ``GraphOf(k)`` of translations and the limit relations

* ``RPlus  = ({-inf} x X) + (X x {+inf})``,
* ``RMinus = ({+inf} x X) + (X x {-inf})``,
* ``AllEndsInf = ({inf} x X) + (X x {inf})`` when the base has one end.

A relation is seen at level ``n`` through its image in ``level(n)^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ClassificationError, CoverShapeError
from .invsys import (
    DEFAULT_BUDGET,
    CompactificationModel,
    SymbolicElement,
    TowerModel,
    Tower,
    classify_threads,
    closure_levelwise,
    custom_tower,
    limit_relation,
    limit_symbol,
    project_graph,
)
from .relcore import FinMap, FinRelation, compose_rel, converse, product_map
from .vietoris import VietorisBasic, ZCover, vietoris_member

_CONVERSE_KIND = {"RPlus": "RMinus", "RMinus": "RPlus", "AllEndsInf": "AllEndsInf"}


class GraphModel(CompactificationModel):
    provenance = "graph_map"

    def __init__(self, base: CompactificationModel):
        super().__init__()
        self.base = base
        self.name = f"G({base.name})"
        self.single_end = base.limit_of(1) == base.limit_of(-1)

    def embed(self, k):
        return SymbolicElement("GraphOf", k)

    def index(self, R):
        return R.k if R.kind == "GraphOf" else None

    def limit_of(self, sign):
        return limit_symbol(self.base, sign)

    def act(self, k, R):
        """Left translation of second coordinates; limit relations are fixed."""
        return R if R.is_limit else SymbolicElement("GraphOf", R.k + k)

    def act_right(self, k, R):
        """Translation of first coordinates: ``(x + k, x + m)`` is the graph of ``m - k``."""
        return R if R.is_limit else SymbolicElement("GraphOf", R.k - k)

    def converse(self, R):
        if R.kind == "GraphOf":
            return SymbolicElement("GraphOf", -R.k)
        return SymbolicElement(_CONVERSE_KIND[R.kind])

    def involution(self):
        return self.converse

    def project(self, R, n):
        if R.kind == "GraphOf":
            return project_graph(self.base, R.k, n)
        sign = 1 if R.kind in ("RPlus", "AllEndsInf") else -1
        return limit_relation(self.base, sign, n)

    def cell_label(self, cell):
        return "/".join(format(r, "x") for r in cell.rows)

    def contains_pair(self, R, x, y) -> bool:
        """Membership of a pair of base points in the symbolic relation."""
        if R.kind == "GraphOf":
            return self.base.act(R.k, x) == y
        sign = 1 if R.kind in ("RPlus", "AllEndsInf") else -1
        return x == self.base.limit_of(-sign) or y == self.base.limit_of(sign)


@dataclass(frozen=True)
class GraphTower:
    """Level-wise graph closures of a custom tower (no symbolic points)."""

    name: str
    levels: dict
    tower: Tower
    heuristic: bool = True


def graph_map(model, depth: int = 5, budget: int = DEFAULT_BUDGET):
    """The graph closure of ``model``.

    For symbolic models the level closures are classified first, so an
    unexpected limit relation raises instead of being mislabelled.
    """
    if depth < 4:
        raise ValueError("graph closures are classified from depth 4 on")
    sets = {n: closure_levelwise(model, n, budget).relations for n in range(1, depth + 1)}
    classify_threads(model, sets, budget)
    if isinstance(model, TowerModel):
        levels = {n: tuple(sorted(s)) for n, s in sets.items()}
        bonds = []
        for n in range(1, depth):
            pos = {R: i for i, R in enumerate(levels[n])}
            bonds.append(FinMap(tuple(pos[product_map(model.bond(n), R)] for R in levels[n + 1]),
                                len(levels[n])))
        t = custom_tower([len(levels[n]) for n in range(1, depth + 1)], bonds, name=f"G({model.name})")
        return GraphTower(f"G({model.name})", levels, t)
    return GraphModel(model)


# --- condition (F) -----------------------------------------------------------

@dataclass(frozen=True)
class ConditionFVerdict:
    ok: bool
    witness: dict | None = None
    representatives: int = 0


def _admissible(model, u: ZCover):
    shape = u.shape
    single = model.limit_of(1) == model.limit_of(-1)
    if shape == "whole":
        return
    if single and shape != "ends":
        raise CoverShapeError(f"{model.name} needs covers whose unbounded block joins both ends")
    if not single and shape != "rays":
        raise CoverShapeError(f"{model.name} needs covers with a left ray and a right ray")


def _pattern(u: ZCover, a: int, L: int) -> tuple:
    """For each block ``B``, the set of blocks met by ``a + B``.

    Decided on ``B`` sampled over ``[-L, L]``; beyond that every block is
    constant, so the samples see every block ``a + B`` can meet.
    """
    out = []
    for blk in u.blocks:
        met = set()
        for y in _block_samples(blk, 2 * L + abs(a) + 2):
            met.add(u.block_of(y + a))
        out.append(frozenset(met))
    return tuple(out)


def _block_samples(blk, R: int) -> list[int]:
    pts = []
    for lo, hi in blk:
        a = -R if lo is None else lo
        b = R if hi is None else hi
        pts.extend(range(max(a, -R), min(b, R) + 1))
    return pts


def check_condition_F(model, u: ZCover, v: ZCover) -> ConditionFVerdict:
    """Decide the two-sided star condition for every ``g`` in ``st(h, v)``.

    Both covers are partitions, so ``g in st(h, v)`` means ``g`` and ``h``
    share a ``v``-block, and the condition for a pair reduces to: for every
    ``u``-block ``B`` the blocks met by ``h + B`` and by ``g + B`` agree.
    That set only depends on the translation through its clamp to
    ``[-L, L]`` with ``L = 2M + 1``, ``M`` the largest finite endpoint of
    ``u``, so each ``v``-block is represented by its integers in
    ``[-L-1, L+1]`` together with its finite endpoints.
    """
    _admissible(model, u)
    _admissible(model, v)
    M = max([abs(e) for e in u.finite_endpoints()], default=0)
    L = 2 * M + 1
    reps_total = 0
    for ci, cblk in enumerate(v.blocks):
        reps = set(_block_samples(cblk, L + 1))
        reps |= {e for iv in cblk for e in iv if e is not None}
        reps = sorted(reps)
        reps_total += len(reps)
        pats = {a: _pattern(u, a, max(L, M + 1)) for a in reps}
        base = reps[0]
        for g in reps:
            if pats[g] != pats[base]:
                return ConditionFVerdict(False, _witness(u, g, base, ci, L), reps_total)
    return ConditionFVerdict(True, None, reps_total)


def _witness(u: ZCover, g: int, h: int, v_block: int, L: int) -> dict:
    R = 3 * L + abs(g) + abs(h) + 3
    for bi, blk in enumerate(u.blocks):
        samples = _block_samples(blk, R)
        met_g = {u.block_of(y + g) for y in samples}
        met_h = {u.block_of(y + h) for y in samples}
        for y in samples:
            if u.block_of(h + y) not in met_g:
                return {"g": g, "h": h, "u_block": bi, "v_block": v_block, "y": y,
                        "clause": "h(y) meets no block of g(st(y, u))"}
            if u.block_of(g + y) not in met_h:
                return {"g": g, "h": h, "u_block": bi, "v_block": v_block, "y": y,
                        "clause": "g(x) meets no block of h(st(x, u))"}
    raise AssertionError("patterns differ but no witness point was found")


# --- symmetry of the closure -------------------------------------------------

@dataclass(frozen=True)
class SymmetryVerdict:
    ok: bool
    witness: str = ""


def map_pairs(R: FinRelation, f: FinMap, g: FinMap) -> FinRelation:
    """``{(f x, g y) | (x, y) in R}``."""
    return FinRelation.from_pairs(f.codomain_size, g.codomain_size,
                                  ((f.images[x], g.images[y]) for x, y in R))


def shift_descent(model: CompactificationModel, k: int, n: int) -> FinMap:
    """The map ``level(n + 1) -> level(n)``, ``x -> x + k``, when well defined."""
    images = {}
    for p in model.catalogue(model.threshold(n + 1) + abs(k) + 1):
        c = model.point_cell(p, n + 1)
        d = model.point_cell(model.act(k, p), n)
        if images.setdefault(c, d) != d:
            raise ClassificationError(f"translation by {k} does not descend from level {n + 1} to {n}")
    return FinMap(tuple(images[c] for c in range(len(model.cells(n + 1)))), len(model.cells(n)))


def verify_closure_symmetry(model, depth: int = 5, budget: int = DEFAULT_BUDGET,
                            level_sets: dict | None = None) -> SymmetryVerdict:
    """Level sets are closed under converse and under both shifted actions.

    The actions are pushed through the exact descended maps: a relation at
    level ``n + 1`` shifted by the generator lands at level ``n`` as
    ``(bond x shift)(R)`` (second coordinates) or ``(shift x bond)(R)``.
    """
    sets = level_sets or {n: closure_levelwise(model, n, budget).relations for n in range(1, depth + 1)}
    for n in sorted(sets):
        for R in sorted(sets[n]):
            if converse(R) not in sets[n]:
                return SymmetryVerdict(False, f"level {n}: converse of\n{R.to_text()}is missing")
    if isinstance(model, TowerModel):
        return SymmetryVerdict(True)
    for n in sorted(sets):
        if n + 1 not in sets:
            continue
        b = model.bond(n)
        for k in (1, -1):
            a = shift_descent(model, k, n)
            for R in sorted(sets[n + 1]):
                for name, img in (("up", map_pairs(R, b, a)), ("right", map_pairs(R, a, b))):
                    if img not in sets[n]:
                        return SymmetryVerdict(
                            False, f"level {n}: {name}-shift by {k} of a level-{n + 1} relation is missing")
    return SymmetryVerdict(True)


def composed_shift_image(model, n: int, R: FinRelation, k: int = 1) -> FinRelation:
    """``Gamma_n(k) R``: shifting by composing with the level-``n`` graph shadow.

    Kept for comparison with the exact descended action: composing shadows
    can produce pairs no actual relation has.
    """
    return compose_rel(project_graph(model, k, n), R)


# --- Vietoris convergence to the limit relations -----------------------------

@dataclass(frozen=True)
class LimitConvergence:
    limit: SymbolicElement
    side: int
    level: int
    from_k: int | None  # graphs with sign * k >= from_k all lie in the basic set
    checked_up_to: int


def check_vietoris_limits(model: GraphModel, depth: int = 5, budget: int = DEFAULT_BUDGET) -> list:
    """For every limit relation, side and level: the smallest basic Vietoris set
    around the limit's shadow eventually contains every graph on that side.

    ``from_k`` is the start of the final run of members among ``0..budget``,
    or None when the last graph checked is not a member.
    """
    out = []
    for n in range(1, depth + 1):
        for sign in (1, -1):
            lim = model.limit_of(sign)
            B = VietorisBasic(tuple(frozenset({p}) for p in model.project(lim, n)))
            start = None
            for k in range(budget, -1, -1):
                if not vietoris_member(model.project(model.embed(sign * k), n), B):
                    break
                start = k
            out.append(LimitConvergence(lim, sign, n, start, budget))
    return out
