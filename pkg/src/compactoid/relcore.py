"""Finite binary relations and transformations.

Relations are stored as tuples of row bitmasks: bit ``y`` of ``rows[x]`` is set
iff ``(x, y)`` belongs to the relation.  Composition follows the right-to-left
convention ``RS = {(x, y) | exists z: (x, z) in S and (z, y) in R}``, so that
``graph_of(h o g) == compose_rel(graph_of(h), graph_of(g))``.

Group elements of a :class:`FinGroupAction` are words: tuples of nonzero ints
where ``i`` stands for generator ``i - 1`` and ``-i`` for its inverse.  A word
``(w1, ..., wm)`` acts as ``w1 o ... o wm`` (the last letter acts first).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DimensionError, NotSelfInverse, NotSurjective

MAX_POINTS = 64


def _check_size(n: int, what: str = "size") -> None:
    if n < 1:
        raise DimensionError(f"{what} must be >= 1, got {n}")
    if n > MAX_POINTS:
        raise DimensionError(f"{what} {n} exceeds the point cap {MAX_POINTS}")


@dataclass(frozen=True)
class FinSet:
    size: int
    labels: tuple | None = None

    def __post_init__(self):
        _check_size(self.size)
        if self.labels is not None and len(self.labels) != self.size:
            raise DimensionError(f"{len(self.labels)} labels for a set of size {self.size}")

    def __iter__(self):
        return iter(range(self.size))

    def __len__(self):
        return self.size

    def label(self, i: int) -> str:
        return str(self.labels[i]) if self.labels is not None else str(i)


@dataclass(frozen=True, order=True)
class FinRelation:
    domain_size: int
    codomain_size: int
    rows: tuple[int, ...]

    def __post_init__(self):
        _check_size(self.domain_size, "domain_size")
        _check_size(self.codomain_size, "codomain_size")
        if len(self.rows) != self.domain_size:
            raise DimensionError(
                f"{len(self.rows)} rows for a relation of shape "
                f"{self.domain_size}x{self.codomain_size}"
            )
        mask = (1 << self.codomain_size) - 1
        for r in self.rows:
            if r & ~mask:
                raise DimensionError(f"row {r:b} has bits outside {self.codomain_size} columns")

    @classmethod
    def from_pairs(cls, domain_size: int, codomain_size: int, pairs: Iterable) -> FinRelation:
        rows = [0] * domain_size
        for x, y in pairs:
            if not (0 <= x < domain_size and 0 <= y < codomain_size):
                raise DimensionError(
                    f"pair {(x, y)} outside shape {domain_size}x{codomain_size}"
                )
            rows[x] |= 1 << y
        return cls(domain_size, codomain_size, tuple(rows))

    @classmethod
    def empty(cls, domain_size: int, codomain_size: int | None = None) -> FinRelation:
        m = domain_size if codomain_size is None else codomain_size
        return cls(domain_size, m, (0,) * domain_size)

    @classmethod
    def full(cls, domain_size: int, codomain_size: int | None = None) -> FinRelation:
        m = domain_size if codomain_size is None else codomain_size
        return cls(domain_size, m, ((1 << m) - 1,) * domain_size)

    @classmethod
    def identity(cls, size: int) -> FinRelation:
        return cls(size, size, tuple(1 << x for x in range(size)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.domain_size, self.codomain_size)

    @property
    def is_square(self) -> bool:
        return self.domain_size == self.codomain_size

    def __contains__(self, pair) -> bool:
        x, y = pair
        if not (0 <= x < self.domain_size and 0 <= y < self.codomain_size):
            return False
        return bool(self.rows[x] >> y & 1)

    def __len__(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    def __bool__(self) -> bool:
        return any(self.rows)

    def __iter__(self):
        for x, r in enumerate(self.rows):
            y = 0
            while r:
                if r & 1:
                    yield (x, y)
                r >>= 1
                y += 1

    def __matmul__(self, other: FinRelation) -> FinRelation:
        return compose_rel(self, other)

    def pairs(self) -> frozenset:
        return frozenset(self)

    def image(self, x: int) -> list[int]:
        r = self.rows[x]
        return [y for y in range(self.codomain_size) if r >> y & 1]

    def is_function(self) -> bool:
        return all(r and not (r & (r - 1)) for r in self.rows)

    def to_map(self) -> FinMap:
        if not self.is_function():
            raise ValueError("relation is not the graph of a total function")
        return FinMap(tuple(r.bit_length() - 1 for r in self.rows), self.codomain_size)

    def to_text(self) -> str:
        lines = [f"rel {self.domain_size} {self.codomain_size}"]
        for r in self.rows:
            lines.append("".join("1" if r >> y & 1 else "0" for y in range(self.codomain_size)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> FinRelation:
        lines = [ln.strip() for ln in text.strip().splitlines()]
        head = lines[0].split()
        if len(head) != 3 or head[0] != "rel":
            raise ValueError(f"bad relation header {lines[0]!r}")
        n, m = int(head[1]), int(head[2])
        body = lines[1:]
        if len(body) != n:
            raise ValueError(f"expected {n} rows, got {len(body)}")
        rows = []
        for ln in body:
            if len(ln) != m or set(ln) - {"0", "1"}:
                raise ValueError(f"bad relation row {ln!r}")
            rows.append(sum(1 << y for y, ch in enumerate(ln) if ch == "1"))
        return cls(n, m, tuple(rows))


@dataclass(frozen=True, order=True)
class FinMap:
    images: tuple[int, ...]
    codomain_size: int

    def __post_init__(self):
        _check_size(len(self.images), "domain_size")
        _check_size(self.codomain_size, "codomain_size")
        for x, y in enumerate(self.images):
            if not 0 <= y < self.codomain_size:
                raise DimensionError(f"image {y} of {x} outside codomain of size {self.codomain_size}")

    @classmethod
    def identity(cls, size: int) -> FinMap:
        return cls(tuple(range(size)), size)

    @classmethod
    def from_callable(cls, domain_size: int, codomain_size: int, fn) -> FinMap:
        return cls(tuple(fn(x) for x in range(domain_size)), codomain_size)

    @property
    def domain_size(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.codomain_size

    def is_bijection(self) -> bool:
        return self.domain_size == self.codomain_size and self.is_surjective()

    def inverse(self) -> FinMap:
        if not self.is_bijection():
            raise ValueError("only bijections have inverses")
        inv = [0] * self.domain_size
        for x, y in enumerate(self.images):
            inv[y] = x
        return FinMap(tuple(inv), self.domain_size)

    def is_self_inverse(self) -> bool:
        return self.domain_size == self.codomain_size and all(
            self.images[y] == x for x, y in enumerate(self.images)
        )


def compose_maps(f: FinMap, g: FinMap) -> FinMap:
    """``f o g``: apply ``g`` first."""
    if g.codomain_size != f.domain_size:
        raise DimensionError(
            f"cannot compose: inner map lands in {g.codomain_size} points, "
            f"outer map is defined on {f.domain_size}"
        )
    return FinMap(tuple(f.images[y] for y in g.images), f.codomain_size)


def compose_rel(R: FinRelation, S: FinRelation) -> FinRelation:
    """The relation ``RS``: ``S`` first, then ``R``."""
    if S.codomain_size != R.domain_size:
        raise DimensionError(
            f"cannot compose R of shape {R.domain_size}x{R.codomain_size} "
            f"after S of shape {S.domain_size}x{S.codomain_size}"
        )
    rows = []
    for r in S.rows:
        acc = 0
        z = 0
        while r:
            if r & 1:
                acc |= R.rows[z]
            r >>= 1
            z += 1
        rows.append(acc)
    return FinRelation(S.domain_size, R.codomain_size, tuple(rows))


def converse(R: FinRelation) -> FinRelation:
    return FinRelation.from_pairs(R.codomain_size, R.domain_size, ((y, x) for x, y in R))


def graph_of(f: FinMap) -> FinRelation:
    return FinRelation(f.domain_size, f.codomain_size, tuple(1 << y for y in f.images))


def _square_bijection(g: FinMap, R: FinRelation) -> None:
    if not R.is_square:
        raise DimensionError(f"relation of shape {R.domain_size}x{R.codomain_size} is not square")
    if not g.is_bijection() or g.domain_size != R.domain_size:
        raise DimensionError("acting map must be a bijection of the relation's carrier")


def act_up(g: FinMap, R: FinRelation) -> FinRelation:
    """``{(x, g(y)) | (x, y) in R}``."""
    _square_bijection(g, R)
    return FinRelation.from_pairs(R.domain_size, R.codomain_size, ((x, g.images[y]) for x, y in R))


def act_right(g: FinMap, R: FinRelation) -> FinRelation:
    """``{(g(x), y) | (x, y) in R}``."""
    _square_bijection(g, R)
    return FinRelation.from_pairs(R.domain_size, R.codomain_size, ((g.images[x], y) for x, y in R))


def swap_pairs(n: int) -> dict:
    """The symmetry ``(x, y) -> (y, x)`` of X x X, as a dict."""
    return {(x, y): (y, x) for x in range(n) for y in range(n)}


def product_map(phi: FinMap, R: FinRelation) -> FinRelation:
    """Image of ``R`` under ``phi x phi``.

    ``phi`` must be onto.  The image of a composite is contained in the
    composite of the images; equality can fail once ``phi`` identifies points.
    """
    if not phi.is_surjective():
        missed = sorted(set(range(phi.codomain_size)) - set(phi.images))
        raise NotSurjective(f"map is not onto: points {missed} have no preimage")
    if R.domain_size != phi.domain_size or R.codomain_size != phi.domain_size:
        raise DimensionError(
            f"relation of shape {R.domain_size}x{R.codomain_size} does not live on "
            f"the {phi.domain_size}-point domain of the map"
        )
    m = phi.codomain_size
    return FinRelation.from_pairs(m, m, ((phi.images[x], phi.images[y]) for x, y in R))


@dataclass(frozen=True)
class FinGroupAction:
    carrier: FinSet
    generators: tuple[FinMap, ...]
    inverses: tuple[FinMap, ...] = field(default=())
    name: str = "G"
    declared_order: int | None = None

    def __post_init__(self):
        gens = tuple(self.generators)
        invs = tuple(self.inverses) if self.inverses else tuple(g.inverse() for g in gens)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "inverses", invs)
        if len(invs) != len(gens):
            raise ValueError("one inverse per generator is required")
        ident = FinMap.identity(self.carrier.size)
        for i, (g, h) in enumerate(zip(gens, invs)):
            if g.domain_size != self.carrier.size or not g.is_bijection():
                raise ValueError(f"generator {i} is not a bijection of the carrier")
            if compose_maps(g, h) != ident or compose_maps(h, g) != ident:
                raise ValueError(f"inverse of generator {i} does not invert it")

    def letter(self, a: int) -> FinMap:
        if a == 0 or abs(a) > len(self.generators):
            raise ValueError(f"no generator letter {a}")
        return self.generators[a - 1] if a > 0 else self.inverses[-a - 1]

    def element(self, word: Sequence[int]) -> FinMap:
        f = FinMap.identity(self.carrier.size)
        for a in word:
            f = compose_maps(f, self.letter(a))
        return f

    def generated_group(self) -> set[FinMap]:
        ident = FinMap.identity(self.carrier.size)
        seen = {ident}
        todo = deque([ident])
        letters = list(self.generators) + list(self.inverses)
        while todo:
            f = todo.popleft()
            for g in letters:
                h = compose_maps(g, f)
                if h not in seen:
                    seen.add(h)
                    todo.append(h)
        return seen

    def is_effective(self) -> bool:
        """Only the identity fixes every point.

        Elements are compared as permutations, so the permutation group is
        always effective; with a declared abstract order the check compares
        the size of the generated permutation group against it.
        """
        if self.declared_order is None:
            return True
        return len(self.generated_group()) == self.declared_order


def check_self_inverse(s: FinMap) -> None:
    if s.domain_size != s.codomain_size:
        raise DimensionError("a self-inverse map must be a self-map")
    for x, y in enumerate(s.images):
        if s.images[y] != x:
            raise NotSelfInverse(x, y, s.images[y])


def inverse_action(action: FinGroupAction, s: FinMap) -> FinGroupAction:
    """The action ``(g, x) -> s(g(s(x)))``."""
    check_self_inverse(s)
    conj = lambda g: compose_maps(s, compose_maps(g, s))  # noqa: E731
    return FinGroupAction(
        action.carrier,
        tuple(conj(g) for g in action.generators),
        tuple(conj(h) for h in action.inverses),
        name=f"{action.name}*",
        declared_order=action.declared_order,
    )


def ellis_embed(action: FinGroupAction, word: Sequence[int]) -> FinMap:
    return action.element(word)


def diagonal_apply(action: FinGroupAction, word: Sequence[int], f: FinMap) -> FinMap:
    """Diagonal action on self-maps: ``x -> g(f(x))``."""
    g = action.element(word)
    if f.codomain_size != action.carrier.size:
        raise DimensionError("map does not land in the acting carrier")
    return FinMap(tuple(g.images[y] for y in f.images), f.codomain_size)


def cyclic_shift(n: int, k: int = 1) -> FinMap:
    return FinMap(tuple((x + k) % n for x in range(n)), n)


def dump_relations(rels: Iterable[FinRelation], header: str | None = None) -> str:
    out = [] if header is None else [header + "\n"]
    out.extend(r.to_text() for r in rels)
    return "".join(out)
