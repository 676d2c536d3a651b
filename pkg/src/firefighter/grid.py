"""Infinite grid graphs on integer coordinates.

Each topology is a neighbour rule plus a symmetry description: a finite list
of affine "point maps" and a translation lattice.  Every symmetry we use is a
point map followed by a lattice translation.  Where the native coordinates
hide part of the group (the brick wall), the maps act in a "chart", another
integer coordinate system, and ``GridTopology.act`` converts both ways.

Coordinate conventions
----------------------
square      4 axis neighbours.
strong      all 8 surrounding points.
triangular  axis neighbours plus the (+1,+1) / (-1,-1) diagonal.
hexagonal   brick wall: left/right, plus up when ``x+y`` is even, else down.
            Chart: the triangular lattice with the points ``a+b = 0 (mod 3)``
            removed, via ``(x, y) -> (x+1, (x+3y) // 2)``.
pentagonal  pentagon tiling given as a periodic table (period 2 in x, 4 in
            y).  Even rows ``y = 2k`` hold degree-4 vertices at
            ``x = k (mod 2)``, joined to ``(x±2, y)`` and ``(x, y±1)``.  Odd
            rows hold degree-3 vertices at every ``x``, joined to
            ``(x±1, y)`` and to whichever of ``(x, y±1)`` is a vertex.  So
            ``(0,0)`` and ``(2,0)`` have degree four and
            ``N(0,1) = {(-1,1), (1,1), (0,0)}``.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Iterable
from dataclasses import dataclass

Coord = tuple[int, int]
# (a, b, c, d, e, f): (x, y) -> (a*x + b*y + e, c*x + d*y + f)
Affine = tuple[int, int, int, int, int, int]

TOPOLOGIES = ("hexagonal", "square", "triangular", "strong", "pentagonal")


def apply(g: Affine, p: Coord) -> Coord:
    a, b, c, d, e, f = g
    x, y = p
    return (a * x + b * y + e, c * x + d * y + f)


@dataclass(frozen=True)
class GridTopology:
    name: str
    rule: Callable[[Coord], tuple[Coord, ...]]
    vertex: Callable[[Coord], bool]
    point_maps: tuple[Affine, ...]
    translation: Callable[[int, int], bool]
    degrees: frozenset[int]
    chart: Callable[[Coord], Coord] | None = None
    unchart: Callable[[Coord], Coord] | None = None

    def to_chart(self, p: Coord) -> Coord:
        return self.chart(p) if self.chart else p

    def from_chart(self, p: Coord) -> Coord:
        return self.unchart(p) if self.unchart else p

    def act(self, g: Affine, p: Coord) -> Coord:
        """Image of ``p`` under a symmetry returned by this topology."""
        if self.chart is None:
            return apply(g, p)
        return self.unchart(apply(g, self.chart(p)))

    def neighbors(self, c: Coord) -> tuple[Coord, ...]:
        return self.rule(c)

    def degree(self, c: Coord) -> int:
        return len(self.rule(c))

    def is_vertex(self, c: Coord) -> bool:
        return self.vertex(c)

    def symmetries_mapping(self, src: frozenset[Coord], dst: frozenset[Coord]):
        """Yield every symmetry ``g`` with ``g(src) == dst``."""
        if len(src) != len(dst) or not src:
            return
        src_c = [self.to_chart(p) for p in src]
        dst_c = {self.to_chart(p) for p in dst}
        target = min(dst_c)
        for pm in self.point_maps:
            image = [apply(pm, p) for p in src_c]
            lo = min(image)
            tx, ty = target[0] - lo[0], target[1] - lo[1]
            if not self.translation(tx, ty):
                continue
            if all((x + tx, y + ty) in dst_c for x, y in image):
                a, b, c, d, e, f = pm
                yield (a, b, c, d, e + tx, f + ty)

    def stabilizer(self, *sets: frozenset[Coord]) -> list[Affine]:
        """Symmetries fixing each of ``sets`` (the first must be nonempty)."""
        out = []
        for g in self.symmetries_mapping(sets[0], sets[0]):
            if all(frozenset(self.act(g, p) for p in s) == s for s in sets[1:]):
                out.append(g)
        return out

    def equivalent(self, a: tuple[frozenset[Coord], ...], b: tuple[frozenset[Coord], ...]) -> bool:
        """True if one symmetry maps each set of ``a`` onto the matching set of ``b``."""
        for g in self.symmetries_mapping(a[0], b[0]):
            if all(frozenset(self.act(g, p) for p in sa) == sb for sa, sb in zip(a[1:], b[1:])):
                return True
        return False

    def generators(self) -> list[Affine]:
        """Point maps plus short lattice translations, for property tests.

        Apply them with ``act``.
        """
        gens = list(self.point_maps)
        for tx in range(-2, 3):
            for ty in range(-2, 3):
                if (tx, ty) != (0, 0) and self.translation(tx, ty):
                    gens.append((1, 0, 0, 1, tx, ty))
        return gens


def _offsets(deltas: Iterable[Coord]) -> Callable[[Coord], tuple[Coord, ...]]:
    deltas = tuple(deltas)

    def rule(c: Coord) -> tuple[Coord, ...]:
        x, y = c
        return tuple((x + dx, y + dy) for dx, dy in deltas)

    return rule


def _hex_rule(c: Coord) -> tuple[Coord, ...]:
    x, y = c
    vertical = (x, y + 1) if (x + y) % 2 == 0 else (x, y - 1)
    return ((x - 1, y), (x + 1, y), vertical)


_DEG4 = ((-2, 0), (2, 0), (0, -1), (0, 1))
_UP = ((-1, 0), (1, 0), (0, 1))
_DOWN = ((-1, 0), (1, 0), (0, -1))

# neighbour offsets by (x mod 2, y mod 4); None marks a lattice point that is
# not a vertex
_PENT_TABLE: dict[tuple[int, int], tuple[Coord, ...] | None] = {
    (0, 0): _DEG4,
    (1, 0): None,
    (0, 1): _DOWN,
    (1, 1): _UP,
    (0, 2): None,
    (1, 2): _DEG4,
    (0, 3): _UP,
    (1, 3): _DOWN,
}


def _hex_chart(c: Coord) -> Coord:
    x, y = c
    return (x + 1, (x + 3 * y) // 2)


def _hex_unchart(c: Coord) -> Coord:
    a, b = c
    x = a - 1
    y, r = divmod(2 * b - x, 3)
    if r == 2:
        y += 1  # x + 3y was odd
    elif r == 1:
        raise ValueError(f"chart point {c} is a hexagon centre, not a vertex")
    return (x, y)


def _pent_vertex(c: Coord) -> bool:
    return _PENT_TABLE[(c[0] % 2, c[1] % 4)] is not None


def _pent_rule(c: Coord) -> tuple[Coord, ...]:
    x, y = c
    offsets = _PENT_TABLE[(x % 2, y % 4)]
    if offsets is None:
        raise ValueError(f"{c} is not a vertex of the pentagonal grid")
    return tuple((x + dx, y + dy) for dx, dy in offsets)


def _all(_: Coord) -> bool:
    return True


def _d4() -> tuple[Affine, ...]:
    return (
        (1, 0, 0, 1, 0, 0),
        (0, -1, 1, 0, 0, 0),
        (-1, 0, 0, -1, 0, 0),
        (0, 1, -1, 0, 0, 0),
        (-1, 0, 0, 1, 0, 0),
        (1, 0, 0, -1, 0, 0),
        (0, 1, 1, 0, 0, 0),
        (0, -1, -1, 0, 0, 0),
    )


def _tri_group() -> tuple[Affine, ...]:
    rot = ((1, -1), (1, 0))  # 60 degrees: (1,0)->(1,1), (0,1)->(-1,0)
    mats = [((1, 0), (0, 1))]
    for _ in range(5):
        (a, b), (c, d) = mats[-1]
        (p, q), (r, s) = rot
        mats.append(((p * a + q * c, p * b + q * d), (r * a + s * c, r * b + s * d)))
    swapped = [((b, a), (d, c)) for (a, b), (c, d) in mats]
    return tuple((a, b, c, d, 0, 0) for (a, b), (c, d) in mats + swapped)


SQUARE = GridTopology(
    "square",
    _offsets([(1, 0), (-1, 0), (0, 1), (0, -1)]),
    _all,
    _d4(),
    lambda tx, ty: True,
    frozenset({4}),
)

STRONG = GridTopology(
    "strong",
    _offsets([(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if (dx, dy) != (0, 0)]),
    _all,
    _d4(),
    lambda tx, ty: True,
    frozenset({8}),
)

TRIANGULAR = GridTopology(
    "triangular",
    _offsets([(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)]),
    _all,
    _tri_group(),
    lambda tx, ty: True,
    frozenset({6}),
)

HEXAGONAL = GridTopology(
    "hexagonal",
    _hex_rule,
    _all,
    _tri_group(),
    lambda tx, ty: (tx + ty) % 3 == 0,
    frozenset({3}),
    _hex_chart,
    _hex_unchart,
)

PENTAGONAL = GridTopology(
    "pentagonal",
    _pent_rule,
    _pent_vertex,
    ((1, 0, 0, 1, 0, 0), (-1, 0, 0, 1, 0, 0), (1, 0, 0, -1, 0, 0), (-1, 0, 0, -1, 0, 0)),
    lambda tx, ty: ty % 2 == 0 and (tx - ty // 2) % 2 == 0,
    frozenset({3, 4}),
)

_BY_NAME = {t.name: t for t in (HEXAGONAL, SQUARE, TRIANGULAR, STRONG, PENTAGONAL)}


def get_topology(name: str) -> GridTopology:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown topology {name!r}; known: {', '.join(TOPOLOGIES)}") from None


def neighbors(topo: GridTopology, c: Coord) -> frozenset[Coord]:
    return frozenset(topo.neighbors(c))


def distance(topo: GridTopology, a: Coord, b: Coord, cap: int) -> int | None:
    """BFS hop count from ``a`` to ``b``, or ``None`` if it exceeds ``cap``."""
    return distance_to_set(topo, a, {b}, cap, empty=None)


def distance_to_set(
    topo: GridTopology, v: Coord, targets: Iterable[Coord], cap: int, empty: int | None = 0
) -> int | None:
    """Distance from ``v`` to the nearest point of ``targets``.

    An empty target set gives ``empty`` (0 by default); ``None`` means the
    nearest target is farther than ``cap``.
    """
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    goal = set(targets)
    if not goal:
        return empty
    if v in goal:
        return 0
    seen = {v}
    frontier = deque([(v, 0)])
    while frontier:
        c, d = frontier.popleft()
        if d == cap:
            continue
        for nb in topo.neighbors(c):
            if nb in goal:
                return d + 1
            if nb not in seen:
                seen.add(nb)
                frontier.append((nb, d + 1))
    return None


def patch(topo: GridTopology, size: int = 20) -> list[Coord]:
    """Vertices in the ``size`` x ``size`` box centred near the origin."""
    lo = -(size // 2)
    return [
        (x, y)
        for x in range(lo, lo + size)
        for y in range(lo, lo + size)
        if topo.is_vertex((x, y))
    ]
