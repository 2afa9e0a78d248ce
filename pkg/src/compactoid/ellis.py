"""Enveloping semigroups of the integer models.

The closure of the translations inside ``X^X`` is computed through finite
shadows: a map is seen through its values on finitely many coordinates,
projected to a finite level.  For the builder models every shadow thread is
either a translation or one of the pointwise limits

* ``LimitPlus``:  fixes the limit points, sends every integer to ``limit(+1)``;
* ``LimitMinus``: the mirror image;
* ``AbsorbInf``:  the single limit when both ends coincide.

Multiplication is composition, ``f . h = f o h``, and ``f -> f(embed(0))``
identifies the closure with the base model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import BudgetExceeded, ClassificationError
from .invsys import (
    DEFAULT_BUDGET,
    CompactificationModel,
    SymbolicElement,
    TowerModel,
)

DEFAULT_WINDOW = 16


@dataclass(frozen=True)
class MapShadow:
    n: int
    F: tuple
    values: tuple

    def restrict(self, F: Sequence, n: int, model) -> MapShadow:
        """Forget coordinates outside ``F`` and push values down to level ``n``."""
        pos = {x: i for i, x in enumerate(self.F)}
        vals = []
        for x in F:
            cell = self.values[pos[x]]
            rep = model.representative(model.cells(self.n)[cell], self.n)
            vals.append(model.point_cell(rep, n))
        return MapShadow(n, tuple(F), tuple(vals))


def _shadow_of(model, k: int, F, n: int) -> tuple:
    if isinstance(model, TowerModel):
        g = model.level_action(k, n)
        return tuple(g(x) for x in F)
    return tuple(model.point_cell(model.act(k, x), n) for x in F)


def ellis_shadow_set(model, F: Sequence, n: int, budget: int = DEFAULT_BUDGET) -> frozenset:
    """All ``(F, n)``-shadows of translations, by sweeps until two add nothing.

    For a :class:`TowerModel`, ``F`` lists level-``n`` cell indices.
    """
    F = tuple(F)
    if not F:
        raise ValueError("the coordinate set F must be nonempty")
    found = {_shadow_of(model, 0, F, n)}
    quiet, j = 0, 0
    while quiet < 2:
        j += 1
        if j > budget:
            raise BudgetExceeded(f"budget exceeded: ({len(F)} coordinates, level {n}) shadows still growing")
        new = {_shadow_of(model, k, F, n) for k in (j, -j)} - found
        found |= new
        quiet = 0 if new else quiet + 1
    return frozenset(MapShadow(n, F, v) for v in found)


class EllisModel(CompactificationModel):
    """The closure of the translations of ``base`` in ``base^base``."""

    provenance = "ellis_map"

    def __init__(self, base: CompactificationModel):
        super().__init__()
        self.base = base
        self.name = f"E({base.name})"
        self.single_end = base.limit_of(1) == base.limit_of(-1)

    def embed(self, k):
        return SymbolicElement("Translate", k)

    def index(self, f):
        return f.k if f.kind == "Translate" else None

    def limit_of(self, sign):
        if self.single_end:
            return SymbolicElement("AbsorbInf")
        return SymbolicElement("LimitPlus" if sign > 0 else "LimitMinus")

    def _sign(self, f) -> int:
        return {"LimitPlus": 1, "LimitMinus": -1, "AbsorbInf": 1}[f.kind]

    def apply(self, f: SymbolicElement, x):
        """Evaluate the map ``f`` at a base point."""
        if f.kind == "Translate":
            return self.base.act(f.k, x)
        if f.kind not in ("LimitPlus", "LimitMinus", "AbsorbInf"):
            raise ClassificationError(f"{f} is not a map of {self.name}")
        if self.base.is_limit(x):
            return x
        return self.base.limit_of(self._sign(f))

    def compose(self, f: SymbolicElement, h: SymbolicElement) -> SymbolicElement:
        """Closed form of ``f o h``.

        Limit maps take values in the limit points, which translations fix
        and limit maps leave alone.  So a limit on the right wins, and a
        limit on the left swallows any translation.
        """
        if h.is_limit:
            return h
        if f.is_limit:
            return f
        return SymbolicElement("Translate", f.k + h.k)

    def identify(self, fn: Callable, probe_window: int = 2) -> SymbolicElement:
        """The catalogue element agreeing with ``fn`` on a probe set.

        The candidate is read off ``fn(embed(0))`` and then confirmed on
        every probe point.
        """
        p = fn(self.base.embed(0))
        k = self.base.index(p)
        if k is not None:
            cand = self.embed(k)
        else:
            cand = next((self.limit_of(s) for s in (1, -1) if self.base.limit_of(s) == p), None)
            if cand is None:
                raise ClassificationError(f"{self.name}: value {p!r} at e is not a catalogue point")
        for x in self.base.catalogue(probe_window):
            if fn(x) != self.apply(cand, x):
                raise ClassificationError(
                    f"{self.name}: map matches {cand} at e but not at {self.base.label(x)}",
                    data={"candidate": str(cand), "point": self.base.label(x)},
                )
        return cand

    def compose_pointwise(self, f, h) -> SymbolicElement:
        return self.identify(lambda x: self.apply(f, self.apply(h, x)))

    def act(self, k, f):
        return self.compose(self.embed(k), f)

    def project(self, f, n):
        return tuple(self.base.point_cell(self.apply(f, x), n) for x in self.base.catalogue(n))

    def pr_e(self, f):
        return self.apply(f, self.base.embed(0))

    def monoid(self):
        return self.compose


@dataclass(frozen=True)
class SymbolicMonoid:
    model: CompactificationModel
    elements: tuple
    unit: object
    window: int = DEFAULT_WINDOW

    def mul(self, a, b):
        return self.model.monoid()(a, b)

    def table(self, window: int | None = None) -> dict:
        w = self.window if window is None else window
        els = self.model.catalogue(w)
        return {(a, b): self.mul(a, b) for a in els for b in els}

    def check_associativity(self, window: int | None = None):
        """First triple violating associativity on the window, or None."""
        w = self.window if window is None else window
        els = self.model.catalogue(w)
        m = self.mul
        for a, b, c in itertools.product(els, repeat=3):
            if m(a, m(b, c)) != m(m(a, b), c):
                return (a, b, c)
        return None

    def check_unit(self, window: int | None = None):
        w = self.window if window is None else window
        for a in self.model.catalogue(w):
            if self.mul(self.unit, a) != a or self.mul(a, self.unit) != a:
                return a
        return None

    def labels(self) -> list[str]:
        return [self.model.label(e) for e in self.elements]


def ellis_classify(model: CompactificationModel, depth: int = 5, window: int = DEFAULT_WINDOW,
                   budget: int = DEFAULT_BUDGET) -> SymbolicMonoid:
    """Classify the enveloping semigroup of a model into closed-form maps.

    Every ``(F_N, N)``-shadow of a translation must be the shadow of a
    catalogue translation or limit map, and each limit map's shadow must be
    reached, otherwise a :class:`ClassificationError` carries the data.
    """
    if isinstance(model, TowerModel):
        raise ClassificationError("enveloping semigroups need a model with symbolic points")
    E = EllisModel(model)
    F = tuple(model.catalogue(depth))
    shadows = {s.values for s in ellis_shadow_set(model, F, depth, budget)}
    known = {}
    for f in E.limit_points():
        known.setdefault(E.project(f, depth), f)
    T = E.threshold(depth)
    for k in range(-T - 1, T + 2):
        known.setdefault(E.project(E.embed(k), depth), E.embed(k))
    unmatched = shadows - set(known)
    if unmatched:
        raise ClassificationError(
            f"{E.name}: shadow matches no catalogue map",
            data={"level": depth, "values": sorted(unmatched)[0]},
        )
    missing = [str(f) for f in E.limit_points() if E.project(f, depth) not in shadows]
    if missing:
        raise ClassificationError(f"{E.name}: limit maps {missing} are not in the closure",
                                  data={"level": depth})
    return SymbolicMonoid(E, tuple(E.catalogue(window)), E.embed(0), window)


# --- continuity by canonical sequences ---------------------------------------

@dataclass(frozen=True)
class ContinuityVerdict:
    side: str
    ok: bool
    witness: tuple | None = None  # (s, point)
    detail: str = ""


def sequence_limit(model, points: Sequence):
    """Limit of a tail of points, or None when the tail does not settle.

    Either the tail is constant, or it consists of integers running off to
    one side, in which case the limit is that side's limit point.
    """
    if all(p == points[0] for p in points):
        return points[0]
    idx = [model.index(p) for p in points]
    if any(i is None for i in idx):
        return None
    steps = [b - a for a, b in zip(idx, idx[1:])]
    if all(d > 0 for d in steps):
        return model.limit_of(1)
    if all(d < 0 for d in steps):
        return model.limit_of(-1)
    return None


def _tail(window: int) -> range:
    return range(4 * window + 8, 4 * window + 14)


def _continuity(model, side: str, window: int) -> ContinuityVerdict:
    mul = model.monoid()
    if mul is None:
        raise ClassificationError(f"{model.name} carries no multiplication")
    elements = model.catalogue(window)
    for p in model.limit_points():
        signs = [s for s in (-1, 1) if model.limit_of(s) == p]
        for s in elements:
            op = (lambda x: mul(x, s)) if side == "right" else (lambda x: mul(s, x))
            for sign in signs:
                seq = [op(model.embed(sign * k)) for k in _tail(window)]
                lim = sequence_limit(model, seq)
                if lim != op(p):
                    return ContinuityVerdict(
                        side, False, (s, p),
                        f"{model.label(s)}: along embed({'+' if sign > 0 else '-'}k) -> {model.label(p)} "
                        f"the products tend to {model.label(lim) if lim is not None else 'nothing'} "
                        f"but the product at the limit is {model.label(op(p))}",
                    )
    return ContinuityVerdict(side, True)


def _as_model(M):
    return M.model if isinstance(M, SymbolicMonoid) else M


def check_right_topological(M, window: int = DEFAULT_WINDOW) -> ContinuityVerdict:
    """Continuity of ``x -> x . s`` for every ``s``."""
    return _continuity(_as_model(M), "right", window)


def check_left_topological(M, window: int = DEFAULT_WINDOW) -> ContinuityVerdict:
    """Continuity of ``x -> s . x``; the witness is the first failing (s, point).

    Discontinuity points are scanned in linear order, and for each point the
    multipliers in linear order.
    """
    return _continuity(_as_model(M), "left", window)


def right_multiplication_descends(model, s, n: int, m: int, window: int | None = None) -> bool:
    """Whether ``x -> x . s`` induces a map from level ``m`` to level ``n``."""
    mul = model.monoid()
    w = (window if window is not None else model.threshold(m)) + 1
    seen = {}
    for x in model.catalogue(w):
        c = model.point_cell(x, m)
        d = model.point_cell(mul(x, s), n)
        if seen.setdefault(c, d) != d:
            return False
    return True


# --- the Ellis map -----------------------------------------------------------

@dataclass(frozen=True)
class ProjectionCheck:
    bijective: bool
    embeds: bool
    witness: str = ""


def check_pr_e(E: EllisModel, window: int = DEFAULT_WINDOW) -> ProjectionCheck:
    """``f -> f(e)`` is a bijection of catalogues sending translations to the embedding."""
    cat = E.catalogue(window)
    images = [E.pr_e(f) for f in cat]
    base_cat = E.base.catalogue(window)
    bij = sorted(images, key=E.base.sort_key) == base_cat and len(set(images)) == len(images)
    emb = all(E.pr_e(E.embed(k)) == E.base.embed(k) for k in range(-window, window + 1))
    wit = "" if bij else "f(e) is not one-to-one onto the base catalogue"
    return ProjectionCheck(bij, emb, wit)


def ellis_map(model: CompactificationModel, depth: int = 4) -> EllisModel:
    """The Ellis closure of ``model`` as a new model, after classification."""
    ellis_classify(model, depth, window=4)
    return EllisModel(model)
