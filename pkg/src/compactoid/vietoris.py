"""Vietoris basic sets, stars, hyperspace entourages and covers.

Finite covers are lists of frozensets over ``range(size)``.  Covers of the
integers are symbolic (:class:`ZCover`): each block is a union of intervals,
and only three shapes are admitted: the whole line, a left ray plus
singletons plus a right ray, and an "ends" block (both rays together) plus
singletons.  These are the shapes that can be pulled back from the finite
levels of the two-point and one-point compactifications of the integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import CoverShapeError, EmptySetError
from .relcore import FinMap, FinRelation, FinSet, check_self_inverse, compose_rel


def _as_pairs(R) -> frozenset:
    if isinstance(R, FinRelation):
        return R.pairs()
    return frozenset(R)


@dataclass(frozen=True)
class Cover:
    carrier: FinSet
    blocks: tuple[frozenset, ...]

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise CoverShapeError("a cover needs at least one block")
        seen = set()
        for b in blocks:
            if not b:
                raise CoverShapeError("cover blocks must be nonempty")
            if not b <= set(range(self.carrier.size)):
                raise CoverShapeError(f"block {sorted(b)} leaves the carrier")
            seen |= b
        if len(seen) != self.carrier.size:
            raise CoverShapeError(f"points {sorted(set(range(self.carrier.size)) - seen)} are uncovered")

    def same_blocks(self, other: Cover) -> bool:
        return self.carrier.size == other.carrier.size and set(self.blocks) == set(other.blocks)

    @classmethod
    def trivial(cls, carrier: FinSet) -> Cover:
        return cls(carrier, (frozenset(range(carrier.size)),))


@dataclass(frozen=True)
class VietorisBasic:
    blocks: tuple[frozenset, ...]

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks or not all(blocks):
            raise CoverShapeError("a basic Vietoris set needs n >= 1 nonempty blocks")

    @property
    def union(self) -> frozenset:
        return frozenset().union(*self.blocks)


def vietoris_member(R, B: VietorisBasic) -> bool:
    """``R`` meets every block of ``B`` and lies inside their union."""
    pts = _as_pairs(R)
    if not pts:
        return False
    return all(pts & b for b in B.blocks) and pts <= B.union


def star(A: Iterable, u: Cover) -> frozenset:
    A = frozenset(A)
    return frozenset().union(*(b for b in u.blocks if b & A))


def refines(v: Cover, u: Cover) -> bool:
    return all(any(bv <= bu for bu in u.blocks) for bv in v.blocks)


def hyper_entourage_related(A: Iterable, B: Iterable, u: Cover) -> bool:
    A, B = frozenset(A), frozenset(B)
    if not A or not B:
        raise EmptySetError("hyperspace entourages are only tested on nonempty sets")
    return B <= star(A, u) and A <= star(B, u)


def invert_cover(u, s):
    """Push every block through the self-inverse map ``s``.

    For a :class:`ZCover`, ``s`` is ``"neg"`` or ``"id"``.
    """
    if isinstance(u, ZCover):
        if s == "id":
            return u
        if s != "neg":
            raise CoverShapeError(f"symbolic covers can only be inverted by 'neg' or 'id', not {s!r}")
        return u.negated()
    if not isinstance(s, FinMap):
        raise TypeError("finite covers are inverted through a FinMap")
    check_self_inverse(s)
    if s.domain_size != u.carrier.size:
        raise CoverShapeError("inverting map does not act on the cover's carrier")
    return Cover(u.carrier, tuple(frozenset(s(x) for x in b) for b in u.blocks))


def join_covers(u: Cover, v: Cover) -> Cover:
    if u.carrier.size != v.carrier.size:
        raise CoverShapeError("covers live on different carriers")
    blocks = []
    for a in u.blocks:
        for b in v.blocks:
            c = a & b
            if c and c not in blocks:
                blocks.append(c)
    return Cover(u.carrier, tuple(blocks))


def product_cover(u: Cover, v: Cover | None = None) -> Cover:
    """The cover ``{U x V}`` of X x X, pairs encoded as ``x * size + y``."""
    v = u if v is None else v
    n = u.carrier.size
    m = v.carrier.size
    blocks = tuple(frozenset(x * m + y for x in a for y in b) for a in u.blocks for b in v.blocks)
    return Cover(FinSet(n * m) if n * m <= 64 else _BigSet(n * m), blocks)


@dataclass(frozen=True)
class _BigSet:
    size: int


def pair_code(pairs, size: int) -> frozenset:
    return frozenset(x * size + y for x, y in pairs)


# --- the grid witness for left discontinuity of composition ------------------

@dataclass(frozen=True)
class CompositionWitness:
    n: int
    RS: frozenset
    W: VietorisBasic
    RS_in_W: bool
    # a (as a grid fraction) -> (RS'_a, membership)
    perturbed: tuple[tuple[Fraction, frozenset, bool], ...]

    @property
    def holds(self) -> bool:
        return self.RS_in_W and not any(m for _, _, m in self.perturbed)


def composition_discontinuity_witness(n: int) -> CompositionWitness:
    """Left discontinuity of relation composition on the grid ``{k/n}``.

    Points are grid indices ``0..n``; ``n`` must be even so that 1/2 is a
    grid point.
    """
    if n < 2 or n % 2:
        raise ValueError("the grid needs an even n >= 2 so that 1/2 is a grid point")
    size = n + 1
    half = n // 2
    R = FinRelation.from_pairs(
        size, size,
        [(x, 0) for x in range(half + 1)] + [(x, n) for x in range(half, size)],
    )
    S = FinRelation.from_pairs(size, size, [(0, y) for y in range(half + 1)])
    everything = range(size)
    W = VietorisBasic((
        frozenset((x, y) for x in everything for y in range(half)),
        frozenset((x, y) for x in everything for y in range(half + 1, size)),
    ))
    RS = compose_rel(R, S).pairs()
    perturbed = []
    for a in range(half):
        Sa = FinRelation.from_pairs(size, size, [(0, y) for y in range(a + 1)])
        RSa = compose_rel(R, Sa).pairs()
        perturbed.append((Fraction(a, n), RSa, vietoris_member(RSa, W)))
    return CompositionWitness(n, RS, W, vietoris_member(RS, W), tuple(perturbed))


# --- symbolic covers of the integers -----------------------------------------

Interval = tuple  # (lo, hi), None meaning unbounded on that side


def _iv_contains(iv: Interval, k: int) -> bool:
    lo, hi = iv
    return (lo is None or lo <= k) and (hi is None or k <= hi)


@dataclass(frozen=True)
class ZCover:
    """A cover of the integers by finitely many unions of intervals."""

    blocks: tuple[tuple[Interval, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(tuple(iv) for iv in b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        self._shape()

    def _shape(self) -> str:
        b = self.blocks
        if not b or any(not blk for blk in b):
            raise CoverShapeError("cover blocks must be nonempty")
        for blk in b:
            for lo, hi in blk:
                if lo is not None and hi is not None and lo > hi:
                    raise CoverShapeError(f"empty interval [{lo},{hi}]")
        if b == (((None, None),),):
            return "whole"
        rays = [blk for blk in b if any(lo is None or hi is None for lo, hi in blk)]
        points = [blk for blk in b if blk not in rays]
        if any(len(blk) != 1 or blk[0][0] != blk[0][1] for blk in points):
            raise CoverShapeError("bounded blocks must be singletons")
        pts = sorted(blk[0][0] for blk in points)
        if len(set(pts)) != len(pts):
            raise CoverShapeError("repeated singleton block")
        if len(rays) == 2:
            left = [r for r in rays if len(r) == 1 and r[0][0] is None and r[0][1] is not None]
            right = [r for r in rays if len(r) == 1 and r[0][1] is None and r[0][0] is not None]
            if len(left) != 1 or len(right) != 1:
                raise CoverShapeError("two unbounded blocks must be a left ray and a right ray")
            a, c = left[0][0][1], right[0][0][0]
            if pts != list(range(a + 1, c)):
                raise CoverShapeError("singletons must fill the gap between the rays exactly")
            return "rays"
        if len(rays) == 1:
            blk = rays[0]
            if len(blk) != 2:
                raise CoverShapeError("a single unbounded block must join both rays")
            (l0, a), (c, r1) = sorted(blk, key=lambda iv: (iv[0] is not None, iv[0] or 0))
            if l0 is not None or r1 is not None or a is None or c is None or a >= c:
                raise CoverShapeError("the ends block must be (-inf,a] + [c,+inf) with a < c")
            if pts != list(range(a + 1, c)):
                raise CoverShapeError("singletons must fill the gap between the ends exactly")
            return "ends"
        raise CoverShapeError("unsupported symbolic cover shape")

    @property
    def shape(self) -> str:
        return self._shape()

    def block_of(self, point) -> int:
        """Index of the block containing an integer or an end point."""
        from .invsys import End

        for i, blk in enumerate(self.blocks):
            for lo, hi in blk:
                if isinstance(point, End):
                    if point is End.MINUS_INF and lo is None:
                        return i
                    if point is End.PLUS_INF and hi is None:
                        return i
                    if point is End.INF and (lo is None or hi is None):
                        return i
                elif _iv_contains((lo, hi), point):
                    return i
        raise CoverShapeError(f"point {point!r} is not covered")

    def contains(self, i: int, point) -> bool:
        return self.block_of(point) == i

    def finite_endpoints(self) -> list[int]:
        return sorted({e for blk in self.blocks for iv in blk for e in iv if e is not None})

    def negated(self) -> ZCover:
        def neg(iv):
            lo, hi = iv
            return (None if hi is None else -hi, None if lo is None else -lo)

        blocks = [tuple(sorted((neg(iv) for iv in blk), key=_iv_key)) for blk in self.blocks]
        return ZCover(tuple(sorted(blocks, key=_block_key)))

    def canonical(self) -> ZCover:
        return ZCover(tuple(sorted((tuple(sorted(b, key=_iv_key)) for b in self.blocks), key=_block_key)))

    def same_blocks(self, other: ZCover) -> bool:
        return self.canonical() == other.canonical()

    def refines(self, other: ZCover) -> bool:
        """Every block of ``self`` sits inside a block of ``other``.

        Decided on the finite endpoints of both covers plus one point beyond
        each side, where every block is constant.
        """
        ends = self.finite_endpoints() + other.finite_endpoints()
        lo = min(ends, default=0) - 1
        hi = max(ends, default=0) + 1
        from .invsys import End

        probe = list(range(lo, hi + 1)) + [End.MINUS_INF, End.PLUS_INF]
        target = {}
        for p in probe:
            i = self.block_of(p)
            j = other.block_of(p)
            if target.setdefault(i, j) != j:
                return False
        return True

    def to_level_cover(self, model, n: int) -> Cover:
        """Image of the cover in the level-``n`` quotient of ``model``."""
        lvl = model.level(n)
        blocks = [set() for _ in self.blocks]
        ends = self.finite_endpoints()
        window = max([abs(e) for e in ends] + [n]) + 1
        points = list(range(-window, window + 1)) + list(model.limit_points())
        for p in points:
            i = self.block_of(p)
            blocks[i].add(model.cell_index(model.project(p, n), n))
        return Cover(lvl, tuple(frozenset(b) for b in blocks if b))

    def to_literal(self) -> str:
        return emit_cover(self)


def _iv_key(iv):
    lo, hi = iv
    return (lo is not None, lo if lo is not None else 0, hi is None, hi if hi is not None else 0)


def _block_key(blk):
    return _iv_key(blk[0])


def u_cover(n: int) -> ZCover:
    """``(-inf,-n], {-n+1}, ..., {n-1}, [n,+inf)``."""
    if n < 1:
        raise CoverShapeError("u_n needs n >= 1")
    blocks = [((None, -n),)] + [((k, k),) for k in range(-n + 1, n)] + [((n, None),)]
    return ZCover(tuple(blocks))


def ends_cover(n: int) -> ZCover:
    """``(-inf,-n] + [n,+inf), {-n+1}, ..., {n-1}``."""
    if n < 1:
        raise CoverShapeError("the ends cover needs n >= 1")
    blocks = [((None, -n), (n, None))] + [((k, k),) for k in range(-n + 1, n)]
    return ZCover(tuple(blocks))


def whole_cover() -> ZCover:
    return ZCover((((None, None),),))


# --- literal syntax ----------------------------------------------------------

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<all>all)
      | (?P<ell>\.\.\.)
      | point\(\s*(?P<pt>[+-]?\d+)\s*\)
      | ray(?P<lb>[\(\[])\s*(?P<lo>[+-]?(?:inf|\d+))\s*,\s*(?P<hi>[+-]?(?:inf|\d+))\s*(?P<rb>[\)\]])
    )\s*$""",
    re.VERBOSE,
)


_JOIN = re.compile(r"\+(?!\s*inf)")


def _bound(text: str, closed: bool, is_lo: bool):
    if text.lstrip("+-") == "inf":
        if closed:
            raise CoverShapeError("infinite bounds take an open bracket")
        if is_lo != text.startswith("-"):
            raise CoverShapeError(f"bad infinite bound {text!r}")
        return None
    v = int(text)
    if not closed:
        v = v + 1 if is_lo else v - 1
    return v


def _parse_part(text: str):
    m = _TOKEN.match(text)
    if not m:
        raise CoverShapeError(f"cannot parse cover fragment {text.strip()!r}")
    if m.group("all"):
        return ("iv", (None, None))
    if m.group("ell"):
        return ("ell", None)
    if m.group("pt") is not None:
        k = int(m.group("pt"))
        return ("iv", (k, k))
    lo = _bound(m.group("lo"), m.group("lb") == "[", True)
    hi = _bound(m.group("hi"), m.group("rb") == "]", False)
    if lo is not None and hi is not None:
        raise CoverShapeError("a ray must be unbounded on one side")
    return ("iv", (lo, hi))


def parse_cover(text: str) -> ZCover:
    """Parse e.g. ``ray(-inf,-3] | point(-2) | ... | ray[3,+inf)``.

    ``...`` between two blocks expands to the singletons strictly between the
    largest point on its left and the smallest point on its right; ``+`` joins
    intervals inside one block.
    """
    raw = [seg for seg in text.split("|")]
    items = []
    for seg in raw:
        parts = [_parse_part(p) for p in _JOIN.split(seg)]
        if parts[0][0] == "ell":
            items.append(None)
        else:
            items.append(tuple(iv for _, iv in parts))
    blocks = []
    for i, blk in enumerate(items):
        if blk is not None:
            blocks.append(blk)
            continue
        if i == 0 or i == len(items) - 1 or items[i - 1] is None or items[i + 1] is None:
            raise CoverShapeError("'...' must sit between two blocks")
        left = max(e for iv in items[i - 1] for e in iv if e is not None)
        right = min(e for iv in items[i + 1] for e in iv if e is not None)
        blocks.extend(((k, k),) for k in range(left + 1, right))
    return ZCover(tuple(blocks))


def _emit_iv(iv) -> str:
    lo, hi = iv
    if lo is None and hi is None:
        return "all"
    if lo is None:
        return f"ray(-inf,{hi}]"
    if hi is None:
        return f"ray[{lo},+inf)"
    if lo == hi:
        return f"point({lo})"
    raise CoverShapeError("bounded non-singleton intervals have no literal")


def emit_cover(u: ZCover) -> str:
    c = u.canonical()
    blocks = list(c.blocks)
    out = []
    i = 0
    while i < len(blocks):
        blk = blocks[i]
        if len(blk) == 1 and blk[0][0] is not None and blk[0][0] == blk[0][1]:
            j = i
            while (
                j + 1 < len(blocks)
                and len(blocks[j + 1]) == 1
                and blocks[j + 1][0][0] == blocks[j + 1][0][1] == blocks[j][0][0] + 1
            ):
                j += 1
            if j - i >= 2:
                out += [_emit_iv(blk[0]), "...", _emit_iv(blocks[j][0])]
                i = j + 1
                continue
        out.append(" + ".join(_emit_iv(iv) for iv in blk))
        i += 1
    return " | ".join(out)
