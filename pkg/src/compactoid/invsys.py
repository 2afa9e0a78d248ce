"""Inverse-system models of compactifications of the integers.

A model exposes a countable catalogue of *representable points*: the images
``embed(k)`` of the integers together with finitely many limit points, and a
tower of finite quotients ``level(n)`` through ``project(point, n)``.  The
translation action ``act(k, x)`` is carried on points.

Two builders are provided.  ``bz`` is the two-point compactification with
levels ``{-inf^} + [-n, n] + {+inf^}`` and ``az`` the one-point
compactification with levels ``[-n, n] + {inf^}``; both bonds clamp.  Derived
models (Ellis closures, graph closures) subclass :class:`CompactificationModel`
and only need to supply points, the action and a projection.

Closures are computed level by level: in a compact inverse limit the closure
of a set is the set of threads whose every coordinate lies in the projected
image.  This is taken as given and cross-checked against the closed-form
catalogue by :func:`classify_threads`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .errors import BudgetExceeded, ClassificationError, DimensionError
from .relcore import FinMap, FinRelation, FinSet, compose_maps, graph_of, product_map

DEFAULT_BUDGET = 64


class End(enum.Enum):
    MINUS_INF = "-inf"
    PLUS_INF = "+inf"
    INF = "inf"

    def __repr__(self):
        return self.value

    __str__ = __repr__


_END_RANK = {End.MINUS_INF: 0, End.PLUS_INF: 2, End.INF: 3}


def point_key(p) -> tuple:
    """Linear order ``-inf < integers < +inf < inf``."""
    if isinstance(p, End):
        return (_END_RANK[p], 0)
    return (1, p)


def point_label(p) -> str:
    return p.value if isinstance(p, End) else str(p)


def parse_point(text: str):
    text = text.strip()
    for e in End:
        if text == e.value:
            return e
    return int(text)


@dataclass(frozen=True)
class SymbolicElement:
    """Closed-form descriptor of a map or relation in a derived model.

    Map kinds: Translate(k), LimitPlus, LimitMinus, AbsorbInf.
    Relation kinds: GraphOf(k), RPlus, RMinus, AllEndsInf.
    """

    kind: str
    k: int = 0

    KINDS = ("LimitMinus", "Translate", "LimitPlus", "AbsorbInf",
             "RMinus", "GraphOf", "RPlus", "AllEndsInf")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown symbolic kind {self.kind!r}")
        if self.kind not in ("Translate", "GraphOf") and self.k != 0:
            raise ValueError(f"{self.kind} carries no integer")

    @property
    def is_limit(self) -> bool:
        return self.kind not in ("Translate", "GraphOf")

    @property
    def is_relation(self) -> bool:
        return self.KINDS.index(self.kind) >= 4

    def sort_key(self):
        rank = {"LimitMinus": 0, "RMinus": 0, "Translate": 1, "GraphOf": 1,
                "LimitPlus": 2, "RPlus": 2, "AbsorbInf": 3, "AllEndsInf": 3}[self.kind]
        return (rank, self.k)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return f"{self.kind}({self.k})" if self.kind in ("Translate", "GraphOf") else self.kind

    __repr__ = __str__


def sym_key(p):
    return p.sort_key() if isinstance(p, SymbolicElement) else point_key(p)


# --- towers ------------------------------------------------------------------

@dataclass(frozen=True)
class Tower:
    """A finite window of an inverse system: levels ``1..depth`` and bonds."""

    builder: str
    levels: tuple[FinSet, ...]
    bonds: tuple[FinMap, ...]
    sections: tuple[FinMap, ...]
    heuristic: bool = False

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> FinSet:
        return self.levels[n - 1]

    def bond(self, n: int) -> FinMap:
        """The surjection ``level(n + 1) -> level(n)``."""
        return self.bonds[n - 1]

    def section(self, n: int) -> FinMap:
        return self.sections[n - 1]

    def check(self) -> list[str]:
        problems = []
        for n in range(1, self.depth):
            b, s = self.bond(n), self.section(n)
            if b.domain_size != self.level(n + 1).size or b.codomain_size != self.level(n).size:
                problems.append(f"bond {n} has the wrong shape")
                continue
            if not b.is_surjective():
                problems.append(f"bond {n} is not surjective")
            if compose_maps(b, s) != FinMap.identity(self.level(n).size):
                problems.append(f"section {n} is not a right inverse of bond {n}")
        return problems


def custom_tower(sizes: Iterable[int], bonds: Iterable[FinMap], name: str = "custom") -> Tower:
    sizes = list(sizes)
    bonds = list(bonds)
    if len(bonds) != len(sizes) - 1:
        raise DimensionError("a tower of d levels needs d - 1 bonds")
    sections = []
    for n, b in enumerate(bonds, start=1):
        if b.domain_size != sizes[n] or b.codomain_size != sizes[n - 1]:
            raise DimensionError(f"bond {n} does not map level {n + 1} onto level {n}")
        if not b.is_surjective():
            raise DimensionError(f"bond {n} is not surjective")
        first = {}
        for x, y in enumerate(b.images):
            first.setdefault(y, x)
        sections.append(FinMap(tuple(first[y] for y in range(sizes[n - 1])), sizes[n]))
    return Tower(name, tuple(FinSet(s) for s in sizes), tuple(bonds), tuple(sections), heuristic=True)


# --- models ------------------------------------------------------------------

class CompactificationModel:
    """Interface shared by builder and derived models.

    Subclasses define ``name``, ``embed``, ``index``, ``limit_of``, ``act``
    and ``project``.  ``limit_of(sign)`` is the limit of ``embed(sign * k)``
    as ``k`` grows; limit points must be fixed by the action.
    """

    name = "model"
    provenance = "builder"
    heuristic = False

    def __init__(self):
        self._cells: dict[int, list] = {}
        self._thresholds: dict[int, int] = {}
        self._point_cells: dict = {}
        self._shadows: dict = {}

    # -- points
    def embed(self, k: int):
        raise NotImplementedError

    def index(self, p):
        """The integer ``k`` with ``embed(k) == p``, or None for limit points."""
        raise NotImplementedError

    def limit_of(self, sign: int):
        raise NotImplementedError

    def act(self, k: int, p):
        raise NotImplementedError

    def project(self, p, n: int):
        raise NotImplementedError

    def sort_key(self, p):
        return sym_key(p)

    def label(self, p) -> str:
        return point_label(p) if not isinstance(p, SymbolicElement) else str(p)

    def cell_key(self, cell):
        return cell

    def cell_label(self, cell) -> str:
        return str(cell)

    # -- optional algebra
    def monoid(self):
        """Multiplication on points, as a callable, or None."""
        return None

    def involution(self):
        """A self-inverse map on points extending negation, or None."""
        return None

    # -- generic
    def limit_points(self) -> tuple:
        pts = []
        for sign in (-1, 1):
            p = self.limit_of(sign)
            if p not in pts:
                pts.append(p)
        return tuple(sorted(pts, key=self.sort_key))

    def is_limit(self, p) -> bool:
        return p in self.limit_points()

    def catalogue(self, window: int) -> list:
        pts = list(self.limit_points()) + [self.embed(k) for k in range(-window, window + 1)]
        return sorted(pts, key=self.sort_key)

    def threshold(self, n: int) -> int:
        """Least ``T`` with ``project(embed(+-k), n) == project(limit, n)`` for ``k >= T``.

        Found by scanning; the models here are monotone so the first hit
        is final.
        """
        if n in self._thresholds:
            return self._thresholds[n]
        worst = 0
        for sign in (-1, 1):
            target = self.project(self.limit_of(sign), n)
            k = 0
            while self.project(self.embed(sign * k), n) != target:
                k += 1
                if k > 1 << 12:
                    raise BudgetExceeded(f"{self.name}: no projection threshold found at level {n}")
            worst = max(worst, k)
        self._thresholds[n] = worst
        return worst

    def cells(self, n: int) -> list:
        if n < 1:
            raise DimensionError("levels start at 1")
        if n not in self._cells:
            seen = {}
            for p in self.catalogue(self.threshold(n)):
                seen.setdefault(self.project(p, n), p)
            self._cells[n] = sorted(seen, key=self.cell_key)
            self._reps = getattr(self, "_reps", {})
            self._reps[n] = seen
        return self._cells[n]

    def representative(self, cell, n: int):
        self.cells(n)
        return self._reps[n][cell]

    def level(self, n: int) -> FinSet:
        cells = self.cells(n)
        return FinSet(len(cells), tuple(self.cell_label(c) for c in cells))

    def cell_index(self, cell, n: int) -> int:
        cells = self.cells(n)
        idx = getattr(self, "_cell_idx", {})
        self._cell_idx = idx
        if n not in idx:
            idx[n] = {c: i for i, c in enumerate(cells)}
        return idx[n][cell]

    def point_cell(self, p, n: int) -> int:
        key = (p, n)
        if key not in self._point_cells:
            self._point_cells[key] = self.cell_index(self.project(p, n), n)
        return self._point_cells[key]

    def bond(self, n: int) -> FinMap:
        upper = self.cells(n + 1)
        return FinMap(
            tuple(self.point_cell(self.representative(c, n + 1), n) for c in upper),
            len(self.cells(n)),
        )

    def section(self, n: int) -> FinMap:
        return FinMap(
            tuple(self.point_cell(self.representative(c, n), n + 1) for c in self.cells(n)),
            len(self.cells(n + 1)),
        )

    def tower(self, depth: int) -> Tower:
        return Tower(
            self.name,
            tuple(self.level(n) for n in range(1, depth + 1)),
            tuple(self.bond(n) for n in range(1, depth)),
            tuple(self.section(n) for n in range(1, depth)),
            heuristic=self.heuristic,
        )

    def level_action(self, k: int, n: int) -> FinMap:
        """The map induced on level ``n`` by translation by ``k``.

        Only defined when the action descends; raises otherwise.
        """
        images = {}
        for p in self.catalogue(self.threshold(n) + abs(k) + 1):
            c = self.point_cell(p, n)
            d = self.point_cell(self.act(k, p), n)
            if images.setdefault(c, d) != d:
                raise DimensionError(f"translation by {k} does not descend to level {n}")
        return FinMap(tuple(images[c] for c in range(len(self.cells(n)))), len(self.cells(n)))

    def graph_shadow(self, k: int, n: int) -> FinRelation:
        return project_graph(self, k, n)

    def inversion_extension(self):
        """Negation extended to limit points by continuity, as a dict-backed callable."""
        def s(p):
            k = self.index(p)
            if k is not None:
                return self.embed(-k)
            for sign in (-1, 1):
                if p == self.limit_of(sign):
                    return self.limit_of(-sign)
            raise ClassificationError(f"{self.label(p)} is not a catalogue point")
        return s

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class BuilderModel(CompactificationModel):
    """The canonical ``bz`` and ``az`` models."""

    def __init__(self, kind: str):
        super().__init__()
        if kind not in ("bz", "az"):
            raise ValueError(f"unknown builder {kind!r}; expected 'az' or 'bz'")
        self.kind = kind
        self.name = kind

    def embed(self, k):
        return k

    def index(self, p):
        return None if isinstance(p, End) else p

    def limit_of(self, sign):
        if self.kind == "az":
            return End.INF
        return End.PLUS_INF if sign > 0 else End.MINUS_INF

    def act(self, k, p):
        return p if isinstance(p, End) else p + k

    def project(self, p, n):
        if isinstance(p, End):
            if (p is End.INF) != (self.kind == "az"):
                raise ValueError(f"{p} is not a point of {self.kind}")
            return p
        if -n <= p <= n:
            return p
        return self.limit_of(1 if p > 0 else -1)

    def threshold(self, n):
        return n + 1

    def cell_key(self, cell):
        return point_key(cell)

    def cell_label(self, cell):
        return point_label(cell) + ("^" if isinstance(cell, End) else "")

    def monoid(self):
        if self.kind == "bz":
            def mul(x, y):
                if isinstance(y, End):
                    return y
                if isinstance(x, End):
                    return x
                return x + y
        else:
            def mul(x, y):
                if isinstance(x, End) or isinstance(y, End):
                    return End.INF
                return x + y
        return mul

    def involution(self):
        swap = {End.MINUS_INF: End.PLUS_INF, End.PLUS_INF: End.MINUS_INF, End.INF: End.INF}
        return lambda p: swap[p] if isinstance(p, End) else -p


def bz_model() -> BuilderModel:
    return BuilderModel("bz")


def az_model() -> BuilderModel:
    return BuilderModel("az")


def bz_tower(depth: int) -> Tower:
    return bz_model().tower(depth)


def az_tower(depth: int) -> Tower:
    return az_model().tower(depth)


class TowerModel:
    """A custom tower with a level-wise generator action.

    There are no symbolic points, so only level-wise graph closures are
    available, and every result is flagged heuristic.
    """

    provenance = "custom"
    heuristic = True

    def __init__(self, tower: Tower, generators: Iterable[FinMap], name: str = "custom"):
        self._tower = tower
        self.generators = tuple(generators)
        self.name = name
        if len(self.generators) != tower.depth:
            raise DimensionError("one generator per level is required")
        for n, g in enumerate(self.generators, start=1):
            if not g.is_bijection() or g.domain_size != tower.level(n).size:
                raise DimensionError(f"generator at level {n} is not a bijection of the level")

    def check(self) -> list[str]:
        problems = self._tower.check()
        for n in range(1, self._tower.depth):
            b = self._tower.bond(n)
            if compose_maps(b, self.generators[n]) != compose_maps(self.generators[n - 1], b):
                problems.append(f"generator does not commute with bond {n}")
        return problems

    def tower(self, depth: int) -> Tower:
        if depth > self._tower.depth:
            raise DimensionError(f"custom tower only has {self._tower.depth} levels")
        return self._tower

    def level(self, n: int) -> FinSet:
        return self._tower.level(n)

    def bond(self, n: int) -> FinMap:
        return self._tower.bond(n)

    def level_action(self, k: int, n: int) -> FinMap:
        g = self.generators[n - 1]
        base = g if k >= 0 else g.inverse()
        out = FinMap.identity(g.domain_size)
        for _ in range(abs(k)):
            out = compose_maps(base, out)
        return out

    def graph_shadow(self, k: int, n: int) -> FinRelation:
        return graph_of(self.level_action(k, n))

    def monoid(self):
        return None

    def involution(self):
        return None


def trivial_model(depth: int = 6) -> TowerModel:
    t = custom_tower([1] * depth, [FinMap((0,), 1)] * (depth - 1), name="trivial")
    return TowerModel(t, [FinMap((0,), 1)] * depth, name="trivial")


# --- projections -------------------------------------------------------------

def project_point(model: CompactificationModel, p, n: int):
    if n < 1:
        raise DimensionError("levels start at 1")
    return model.project(p, n)


def project_graph(model: CompactificationModel, k: int, n: int) -> FinRelation:
    """Image of the graph of translation by ``k`` in ``level(n) x level(n)``.

    Points beyond ``threshold(n) + |k|`` and their translates project to the
    same limit cell, so a finite window of the catalogue is exact.
    """
    if isinstance(model, TowerModel):
        return model.graph_shadow(k, n)
    if (k, n) in model._shadows:
        return model._shadows[k, n]
    size = len(model.cells(n))
    pairs = {
        (model.point_cell(p, n), model.point_cell(model.act(k, p), n))
        for p in model.catalogue(model.threshold(n) + abs(k) + 1)
    }
    model._shadows[k, n] = FinRelation.from_pairs(size, size, pairs)
    return model._shadows[k, n]


def limit_relation(model: CompactificationModel, sign: int, n: int) -> FinRelation:
    """Shadow of ``({limit(-sign)} x X) + (X x {limit(sign)})`` at level ``n``."""
    size = len(model.cells(n))
    a = model.point_cell(model.limit_of(-sign), n)
    b = model.point_cell(model.limit_of(sign), n)
    return FinRelation.from_pairs(
        size, size, [(x, y) for x in range(size) for y in range(size) if x == a or y == b]
    )


def sweep_order(limit: int):
    yield 0
    for j in range(1, limit + 1):
        yield j
        yield -j


@dataclass(frozen=True)
class LevelClosure:
    n: int
    relations: frozenset
    bound: int  # largest |k| whose sweep added a new relation
    sweeps: int  # number of sweeps performed, including the two empty ones


def closure_levelwise(model, n: int, budget: int = DEFAULT_BUDGET) -> LevelClosure:
    """All level-``n`` shadows of graphs of translations.

    Sweeps ``|k| = 0, 1, 2, ...`` and stops after two consecutive sweeps add
    nothing.  Raises :class:`BudgetExceeded` rather than truncating.
    """
    if n < 1:
        raise DimensionError("levels start at 1")
    found = {model.graph_shadow(0, n)}
    bound = 0
    quiet = 0
    j = 0
    while quiet < 2:
        j += 1
        if j > budget:
            raise BudgetExceeded(
                f"budget exceeded: level {n} closure of {model.name} still growing at |k| = {budget}"
            )
        added = False
        for k in (j, -j):
            R = model.graph_shadow(k, n)
            if R not in found:
                found.add(R)
                added = True
        if added:
            bound = j
            quiet = 0
        else:
            quiet += 1
    return LevelClosure(n, frozenset(found), bound, j)


def dump_level_sets(closures: Iterable[LevelClosure]) -> str:
    out = []
    for c in closures:
        out.append(f"level {c.n}\n")
        for R in sorted(c.relations):
            out.append(R.to_text())
    return "".join(out)


# --- thread classification ---------------------------------------------------

@dataclass(frozen=True)
class ThreadClassification:
    model: str
    depth: int
    translations: tuple[int, ...]  # k whose graph resolves from every limit at depth
    limits: tuple[SymbolicElement, ...]
    heuristic: bool = False

    def elements(self) -> list[SymbolicElement]:
        return [SymbolicElement("GraphOf", k) for k in self.translations] + list(self.limits)


def limit_symbol(model, sign: int) -> SymbolicElement:
    if model.limit_of(1) == model.limit_of(-1):
        return SymbolicElement("AllEndsInf")
    return SymbolicElement("RPlus" if sign > 0 else "RMinus")


def classify_threads(model, level_sets: dict, budget: int = DEFAULT_BUDGET) -> ThreadClassification:
    """Match the threads of a family of level closures to closed forms.

    ``level_sets`` maps ``n`` to the set of level-``n`` relations for every
    ``n`` in ``1..N``.  Every depth-``N`` relation must be the shadow of a
    translation graph or of a catalogued limit relation, and every relation
    must continue to a thread (bond images land in the lower level, and every
    lower relation is hit).
    """
    N = max(level_sets)
    if N < 4 or sorted(level_sets) != list(range(1, N + 1)):
        raise ClassificationError("thread classification needs level sets for 1..N with N >= 4")
    for n in range(1, N):
        b = model.bond(n)
        images = {product_map(b, R) for R in level_sets[n + 1]}
        if not images <= set(level_sets[n]):
            bad = sorted(images - set(level_sets[n]))[0]
            raise ClassificationError(f"relation at level {n + 1} has no compatible image at level {n}",
                                      data={"level": n, "relation": bad.to_text()})
        if images != set(level_sets[n]):
            bad = sorted(set(level_sets[n]) - images)[0]
            raise ClassificationError(f"relation at level {n} does not extend to level {n + 1}",
                                      data={"level": n, "relation": bad.to_text()})
    top = set(level_sets[N])
    limits = {}
    if not isinstance(model, TowerModel):
        for sign in (1, -1):
            sym = limit_symbol(model, sign)
            limits.setdefault(limit_relation(model, sign, N), sym)
    translations = []
    resolved = set()
    for k in sweep_order(budget):
        R = model.graph_shadow(k, N)
        if R in limits or R in resolved:
            continue
        resolved.add(R)
        translations.append(k)
    unmatched = top - resolved - set(limits)
    if unmatched:
        R = sorted(unmatched)[0]
        raise ClassificationError(
            f"{model.name}: a level-{N} relation matches no translation graph or catalogued limit",
            data={"level": N, "relation": R.to_text()},
        )
    lims = tuple(sorted({s for R, s in limits.items() if R in top}))
    return ThreadClassification(
        model.name, N, tuple(sorted(translations)), lims, heuristic=getattr(model, "heuristic", False)
    )
