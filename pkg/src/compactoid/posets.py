"""Taxonomy of compactification models and maps between them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .ellis import (
    check_left_topological,
    check_right_topological,
    sequence_limit,
)
from .errors import ImplicationError
from .invsys import CompactificationModel, TowerModel, az_model, bz_model
from .relcore import FinMap, compose_maps

PREDICATES = ("G", "G<->", "G*", "lts", "Ellis", "sm", "sm*", "sim")

IMPLICATIONS = (
    ("sim", "sm*"),
    ("sm*", "sm"),
    ("sm*", "G*"),
    ("sm", "G<->"),
    ("sm", "Ellis"),
    ("sm", "lts"),
    ("Ellis", "G"),
    ("lts", "G"),
    ("G*", "G<->"),
    ("G<->", "G"),
)


@dataclass
class PredicateRecord:
    model: str
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.verdicts[key]

    def mark(self, key: str) -> str:
        v = self.verdicts.get(key)
        return "n/a" if v is None else ("yes" if v else "no")


def _tail(window: int) -> range:
    return range(4 * window + 8, 4 * window + 14)


def _limit_sides(model):
    return [(p, [s for s in (-1, 1) if model.limit_of(s) == p]) for p in model.limit_points()]


def _continuous_at_limits(model, f: Callable, window: int):
    """First (point, side) where ``f`` fails the canonical-sequence test."""
    for p, sides in _limit_sides(model):
        for s in sides:
            seq = [f(model.embed(s * k)) for k in _tail(window)]
            if sequence_limit(model, seq) != f(p):
                return (p, s)
    return None


def _check_action(model, window: int):
    ks = range(-3, 4)
    for k in ks:
        for j in range(-window, window + 1):
            if model.act(k, model.embed(j)) != model.embed(j + k):
                return f"translation by {k} moves embed({j}) off embed({j + k})"
        for p in model.limit_points():
            if model.act(k, p) != p:
                return f"translation by {k} moves the limit point {model.label(p)}"
        bad = _continuous_at_limits(model, lambda x, k=k: model.act(k, x), window)
        if bad:
            return f"translation by {k} is discontinuous at {model.label(bad[0])}"
    return None


def _check_right_action(model, window: int):
    """The right action extends: ``embed(j) -> embed(j - k)`` converges at every limit."""
    act_right = getattr(model, "act_right", None)
    for k in range(-3, 4):
        for p, sides in _limit_sides(model):
            for s in sides:
                seq = [model.embed(s * j - k) for j in _tail(window)]
                lim = sequence_limit(model, seq)
                if lim is None:
                    return f"right translation by {k} has no limit at {model.label(p)}"
                if lim != p:
                    return f"right translation by {k} moves {model.label(p)} to {model.label(lim)}"
                if act_right is not None and act_right(k, p) != lim:
                    return f"declared right action disagrees with its extension at {model.label(p)}"
    return None


def _involution(model):
    s = model.involution()
    return (s, "declared") if s is not None else (model.inversion_extension(), "extended")


def _check_star(model, s, window: int):
    cat = model.catalogue(window)
    for k in range(-window, window + 1):
        if s(model.embed(k)) != model.embed(-k):
            return f"s(embed({k})) is not embed({-k})"
    for p in cat:
        if s(s(p)) != p:
            return f"s(s({model.label(p)})) != {model.label(p)}"
    bad = _continuous_at_limits(model, s, window)
    if bad:
        return f"s is discontinuous at {model.label(bad[0])}"
    return None


def _first_triple(els, pred):
    for t in itertools.product(els, repeat=3):
        if not pred(*t):
            return t
    return None


def classify(model, window: int = 8) -> PredicateRecord:
    """Decide every taxonomy predicate on the symbolic catalogue.

    Models without multiplication get "not applicable" for the semigroup
    predicates; custom towers only get the G verdict.
    """
    rec = PredicateRecord(model.name)
    v, w = rec.verdicts, rec.witnesses
    if isinstance(model, TowerModel) or not isinstance(model, CompactificationModel):
        problems = model.check() if isinstance(model, TowerModel) else model.tower.check()
        v["G"] = not problems
        if problems:
            w["G"] = problems[0]
        for key in PREDICATES[1:]:
            v[key] = None
        rec.extra["heuristic"] = True
        return rec

    bad = _check_action(model, window)
    v["G"] = bad is None
    if bad:
        w["G"] = bad
    bad = _check_right_action(model, window)
    v["G<->"] = v["G"] and bad is None
    if bad:
        w["G<->"] = bad
    s, how = _involution(model)
    rec.extra["s"] = how
    bad = _check_star(model, s, window)
    v["G*"] = v["G<->"] and bad is None
    if bad:
        w["G*"] = bad

    mul = model.monoid()
    if mul is None:
        for key in ("lts", "Ellis", "sm", "sm*", "sim"):
            v[key] = None
        return rec

    small = model.catalogue(min(window, 4))
    cat = model.catalogue(window)
    E = model.embed
    hom = next(((a, b) for a in range(-window, window + 1) for b in range(-window, window + 1)
                if mul(E(a), E(b)) != E(a + b)), None)
    agrees = next(((k, x) for k in range(-3, 4) for x in cat if mul(E(k), x) != model.act(k, x)), None)
    unit = next((x for x in cat if mul(E(0), x) != x or mul(x, E(0)) != x), None)
    assoc = _first_triple(small, lambda a, b, c: mul(a, mul(b, c)) == mul(mul(a, b), c))
    right = check_right_topological(model, window)
    left = check_left_topological(model, window)
    rec.extra["right"] = right
    rec.extra["left"] = left
    semigroup = assoc is None
    if assoc:
        w["assoc"] = "not associative at " + ", ".join(model.label(t) for t in assoc)
    if hom:
        w["hom"] = f"embed({hom[0]}) . embed({hom[1]}) != embed({hom[0] + hom[1]})"

    v["lts"] = v["G"] and semigroup and hom is None and left.ok
    if not v["lts"]:
        w["lts"] = w.get("assoc") or w.get("hom") or left.detail
    v["Ellis"] = v["G"] and semigroup and unit is None and agrees is None and right.ok
    if not v["Ellis"]:
        w["Ellis"] = w.get("assoc") or right.detail or (
            f"unit law fails at {model.label(unit)}" if unit is not None
            else f"embed({agrees[0]}) . x differs from the action at x = {model.label(agrees[1])}")
    v["sm"] = v["G"] and semigroup and unit is None and hom is None and left.ok and right.ok
    if not v["sm"]:
        w["sm"] = left.detail or right.detail or w.get("assoc") or w.get("hom") or "unit law fails"

    inv_wit = next(((x, y) for x in cat for y in cat if s(mul(x, y)) != mul(s(y), s(x))), None)
    rec.extra["s_involution"] = inv_wit is None
    if inv_wit:
        x, y = inv_wit
        rec.extra["s_involution_witness"] = (x, y, s(mul(x, y)), mul(s(y), s(x)))
    v["sm*"] = v["sm"] and v["G*"] and inv_wit is None
    if not v["sm*"]:
        if inv_wit:
            x, y = inv_wit
            w["sm*"] = (f"s({model.label(x)} . {model.label(y)}) = {model.label(s(mul(x, y)))} but "
                        f"s({model.label(y)}) . s({model.label(x)}) = {model.label(mul(s(y), s(x)))}")
        else:
            w["sm*"] = w.get("sm") or w.get("G*")

    inverses = {}
    bad_inv = None
    for a in cat:
        cands = [b for b in cat if mul(mul(a, b), a) == a and mul(mul(b, a), b) == b]
        if len(cands) != 1:
            bad_inv = (a, cands)
            break
        inverses[a] = cands[0]
    inv_cont = None
    if bad_inv is None:
        star = lambda a: inverses[a] if a in inverses else model.inversion_extension()(a)  # noqa: E731
        inv_cont = _continuous_at_limits(model, star, window)
        rec.extra["inverses"] = {model.label(p): model.label(inverses[p]) for p in model.limit_points()}
    v["sim"] = v["sm"] and bad_inv is None and inv_cont is None
    if not v["sim"]:
        if not v["sm"]:
            w["sim"] = w["sm"]
        elif bad_inv is not None:
            a, cands = bad_inv
            w["sim"] = f"{model.label(a)} has {len(cands)} inverses: " + ", ".join(model.label(c) for c in cands)
        else:
            w["sim"] = f"inversion is discontinuous at {model.label(inv_cont[0])}"
    return rec


def check_implications(record: PredicateRecord) -> bool:
    """Raise :class:`ImplicationError` on the first violated edge."""
    for a, b in IMPLICATIONS:
        if record.verdicts.get(a) is True and record.verdicts.get(b) is False:
            raise ImplicationError((a, b), record)
    return True


# --- maps of compactifications -----------------------------------------------

@dataclass(frozen=True)
class CompactificationMap:
    """``phi: source -> target`` with level maps ``levels[n] = (m, f)``,
    ``f: source.level(m) -> target.level(n)``."""

    source: CompactificationModel
    target: CompactificationModel
    point_map: Callable
    levels: dict
    name: str = "phi"


@dataclass
class MapVerdict:
    ok: bool
    checks: dict
    witnesses: dict


def _chain_bond(model, hi: int, lo: int) -> FinMap:
    f = FinMap.identity(len(model.cells(hi)))
    for n in range(hi - 1, lo - 1, -1):
        f = compose_maps(model.bond(n), f)
    return f


def verify_map(phi: CompactificationMap, window: int = 8) -> MapVerdict:
    src, dst, P = phi.source, phi.target, phi.point_map
    checks, wit = {}, {}

    bad = next((k for k in range(-window, window + 1) if P(src.embed(k)) != dst.embed(k)), None)
    checks["factorizes"] = bad is None
    if bad is not None:
        wit["factorizes"] = f"phi(embed({bad})) != embed({bad})"

    bad = None
    for n, (m, f) in sorted(phi.levels.items()):
        w = max(src.threshold(m), dst.threshold(n)) + 2
        for p in src.catalogue(w):
            if f(src.point_cell(p, m)) != dst.point_cell(P(p), n):
                bad = f"level {n}: cell of {src.label(p)} maps to the wrong cell"
                break
        if bad:
            break
    checks["levels"] = bad is None
    if bad:
        wit["levels"] = bad

    bad = None
    ns = sorted(phi.levels)
    for lo, hi in zip(ns, ns[1:]):
        (m_lo, f_lo), (m_hi, f_hi) = phi.levels[lo], phi.levels[hi]
        if m_hi < m_lo:
            bad = f"level {hi} uses a coarser source level than level {lo}"
            break
        left = compose_maps(_chain_bond(dst, hi, lo), f_hi)
        right = compose_maps(f_lo, _chain_bond(src, m_hi, m_lo))
        if left != right:
            x = next(i for i in range(left.domain_size) if left(i) != right(i))
            bad = f"level {lo}: bonds and level maps disagree on source cell {x} of level {m_hi}"
            break
    checks["bond_coherent"] = bad is None
    if bad:
        wit["bond_coherent"] = bad

    cat = src.catalogue(window)
    bad = next(((k, p) for k in range(-3, 4) for p in cat if P(src.act(k, p)) != dst.act(k, P(p))), None)
    checks["G_map"] = bad is None
    if bad:
        wit["G_map"] = f"phi(embed({bad[0]}) . {src.label(bad[1])}) differs from the translate of its image"

    s1, s2 = src.involution(), dst.involution()
    if s1 is not None and s2 is not None:
        bad = next((p for p in cat if P(s1(p)) != s2(P(p))), None)
        checks["commutes_with_s"] = bad is None
        if bad is not None:
            wit["commutes_with_s"] = f"phi(s({src.label(bad)})) != s(phi({src.label(bad)}))"
    else:
        checks["commutes_with_s"] = None

    m1, m2 = src.monoid(), dst.monoid()
    if m1 is not None and m2 is not None:
        bad = next(((x, y) for x in cat for y in cat if P(m1(x, y)) != m2(P(x), P(y))), None)
        checks["monoid_hom"] = bad is None
        if bad:
            wit["monoid_hom"] = f"phi({src.label(bad[0])} . {src.label(bad[1])}) is not the product of the images"
    else:
        checks["monoid_hom"] = None

    ok = all(v is not False for v in checks.values())
    return MapVerdict(ok, checks, wit)


def sign_map(src: CompactificationModel, dst: CompactificationModel):
    """The only candidate for a map fixing the group: integers to integers,
    each limit to the limit of the same side.  None if a limit would have to
    go to two places."""
    table = {}
    for p, sides in _limit_sides(src):
        images = {dst.limit_of(s) for s in sides}
        if len(images) != 1:
            return None
        table[p] = images.pop()

    def point_map(p):
        k = src.index(p)
        return dst.embed(k) if k is not None else table[p]

    return point_map


def _level_map(src, dst, P, n: int, m: int):
    w = max(src.threshold(m), dst.threshold(n)) + 2
    images = {}
    for p in src.catalogue(w):
        c, d = src.point_cell(p, m), dst.point_cell(P(p), n)
        if images.setdefault(c, d) != d:
            return None
    if len(images) != len(src.cells(m)):
        return None
    return FinMap(tuple(images[c] for c in range(len(images))), len(dst.cells(n)))


def find_map(src, dst, depth: int, search_depth: int | None = None, name: str = "phi"):
    """Level-wise search for a map ``src -> dst`` through levels ``1..depth``."""
    P = sign_map(src, dst)
    if P is None:
        return None
    search_depth = 4 * depth if search_depth is None else search_depth
    levels = {}
    m = 1
    for n in range(1, depth + 1):
        f = None
        while m <= search_depth:
            f = _level_map(src, dst, P, n, m)
            if f is not None:
                break
            m += 1
        if f is None:
            return None
        levels[n] = (m, f)
    return CompactificationMap(src, dst, P, levels, name)


def identity_map(model, depth: int = 5) -> CompactificationMap:
    levels = {n: (n, FinMap.identity(len(model.cells(n)))) for n in range(1, depth + 1)}
    return CompactificationMap(model, model, lambda p: p, levels, "id")


def collapse_map(depth: int = 5) -> CompactificationMap:
    """``bz -> az``, sending both ends to the single end."""
    phi = find_map(bz_model(), az_model(), depth, search_depth=depth, name="collapse")
    assert phi is not None and all(m == n for n, (m, _) in phi.levels.items())
    return phi


def compose_compactification_maps(psi: CompactificationMap, phi: CompactificationMap) -> CompactificationMap:
    """``psi o phi``; levels are those ``psi`` defines whose source level ``phi`` reaches."""
    levels = {}
    for n, (m, g) in psi.levels.items():
        if m in phi.levels:
            m2, f = phi.levels[m]
            levels[n] = (m2, compose_maps(g, f))
    return CompactificationMap(phi.source, psi.target, lambda p: psi.point_map(phi.point_map(p)),
                               levels, f"{psi.name}.{phi.name}")


@dataclass(frozen=True)
class Comparison:
    relation: str
    forward: CompactificationMap | None
    backward: CompactificationMap | None
    depth: int


def compare(m1, m2, depth: int = 4, search_depth: int | None = None) -> Comparison:
    """``m1 ≥ m2`` when a map ``m1 -> m2`` fixing the group is found.

    ``=`` needs maps both ways whose composites fix the catalogue.
    Without either map the verdict is qualified by the depth searched.
    """
    fwd = find_map(m1, m2, depth, search_depth)
    bwd = find_map(m2, m1, depth, search_depth)
    if fwd and bwd:
        cat = m1.catalogue(8)
        if all(bwd.point_map(fwd.point_map(p)) == p for p in cat) and all(
            fwd.point_map(bwd.point_map(q)) == q for q in m2.catalogue(8)
        ):
            rel = "="
        else:
            rel = f"incomparable-at-depth-{depth}"
    elif fwd:
        rel = "≥"
    elif bwd:
        rel = "≤"
    else:
        rel = f"incomparable-at-depth-{depth}"
    return Comparison(rel, fwd, bwd, depth)
