"""
Periodic square-lattice geometry shared by the frame simulator, the decoder and the
chunk analysis.

Conventions:
    - a cell (x, y) owns vertex (x, y), plaquette (x, y) and the two edges H(x, y), V(x, y)
    - H(x, y) joins vertex (x, y) to (x+1, y); V(x, y) joins (x, y) to (x, y+1)
    - plaquette (x, y) has its south-west corner at vertex (x, y)
    - edge arrays have shape (2, L, L), indexed [direction, y, x]
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

H, V = 0, 1
DIRECTIONS = ('N', 'E', 'S', 'W')


@dataclass(frozen=True)
class Torus:
    L: int

    @property
    def n_edges(self) -> int:
        return 2 * self.L * self.L

    def wrap(self, x: int, y: int) -> tuple[int, int]:
        return x % self.L, y % self.L

    def edge_index(self, d: int, x: int, y: int) -> int:
        return d * self.L * self.L + (y % self.L) * self.L + (x % self.L)

    def edge_coords(self, index: int) -> tuple[int, int, int]:
        d, rest = divmod(index, self.L * self.L)
        y, x = divmod(rest, self.L)
        return d, x, y

    def edge(self, d: int, x: int, y: int) -> tuple[int, int, int]:
        return d, x % self.L, y % self.L

    def vertex_edges(self, x: int, y: int) -> dict[str, tuple[int, int, int]]:
        return {
            'N': self.edge(V, x, y),
            'E': self.edge(H, x, y),
            'S': self.edge(V, x, y - 1),
            'W': self.edge(H, x - 1, y),
        }

    def plaquette_edges(self, x: int, y: int) -> dict[str, tuple[int, int, int]]:
        return {
            'N': self.edge(H, x, y + 1),
            'E': self.edge(V, x + 1, y),
            'S': self.edge(H, x, y),
            'W': self.edge(V, x, y),
        }

    def edge_endpoints(self, d: int, x: int, y: int) -> tuple[tuple[int, int], tuple[int, int]]:
        """Tail and head vertices of an edge."""
        if d == H:
            return self.wrap(x, y), self.wrap(x + 1, y)
        return self.wrap(x, y), self.wrap(x, y + 1)

    def edge_plaquettes(self, d: int, x: int, y: int) -> tuple[tuple[int, int], tuple[int, int]]:
        """The two plaquettes sharing an edge, the one it bounds on the south or west side first."""
        if d == H:
            return self.wrap(x, y), self.wrap(x, y - 1)
        return self.wrap(x, y), self.wrap(x - 1, y)

    def axis_offset(self, a: int, b: int) -> int:
        """Signed shortest displacement from a to b along one periodic axis."""
        delta = (b - a) % self.L
        return delta - self.L if delta > self.L // 2 else delta

    def axis_distance(self, a: int, b: int) -> int:
        return abs(self.axis_offset(a, b))

    def distance(self, a: tuple[int, int], b: tuple[int, int]) -> int:
        return max(self.axis_distance(a[0], b[0]), self.axis_distance(a[1], b[1]))

    def neighbourhood(self, x: int, y: int, radius: int = 1) -> list[tuple[int, int]]:
        cells = {self.wrap(x + dx, y + dy)
                 for dx in range(-radius, radius + 1)
                 for dy in range(-radius, radius + 1)}
        return sorted(cells)

    def vertex_path(self, a: tuple[int, int], b: tuple[int, int]) -> list[tuple[tuple[int, int, int], bool]]:
        """Shortest x-then-y vertex path; each step is (edge, forward) with forward meaning tail to head."""
        return _vertex_steps(self, a, self.axis_offset(a[0], b[0]), self.axis_offset(a[1], b[1]))

    def plaquette_path(self, p: tuple[int, int], q: tuple[int, int]) -> list[tuple[int, int, int]]:
        """Edges crossed by the shortest x-then-y dual path between two plaquettes."""
        return _plaquette_steps(self, p, self.axis_offset(p[0], q[0]), self.axis_offset(p[1], q[1]))


def _vertex_steps(torus: Torus, a, dx: int, dy: int):
    steps = []
    x, y = a
    for _ in range(abs(dx)):
        if dx > 0:
            steps.append((torus.edge(H, x, y), True))
            x += 1
        else:
            steps.append((torus.edge(H, x - 1, y), False))
            x -= 1
    for _ in range(abs(dy)):
        if dy > 0:
            steps.append((torus.edge(V, x, y), True))
            y += 1
        else:
            steps.append((torus.edge(V, x, y - 1), False))
            y -= 1
    return steps


def _plaquette_steps(torus: Torus, p, dx: int, dy: int):
    crossed = []
    x, y = p
    for _ in range(abs(dx)):
        if dx > 0:
            crossed.append(torus.edge(V, x + 1, y))
            x += 1
        else:
            crossed.append(torus.edge(V, x, y))
            x -= 1
    for _ in range(abs(dy)):
        if dy > 0:
            crossed.append(torus.edge(H, x, y + 1))
            y += 1
        else:
            crossed.append(torus.edge(H, x, y))
            y -= 1
    return crossed


def _covering_arc(coords: Iterable[int], L: int) -> tuple[int, int]:
    """Smallest periodic interval (start, length) holding every coordinate."""
    values = sorted({c % L for c in coords})
    if not values:
        msg = "cannot cover an empty set of coordinates"
        raise ValueError(msg)
    if len(values) == 1:
        return values[0], 1
    gaps = [((values[(i + 1) % len(values)] - values[i]) % L, i) for i in range(len(values))]
    widest, i = max(gaps, key=lambda g: (g[0], -g[1]))
    start = values[(i + 1) % len(values)]
    return start, L - widest + 1


def _arc_gap(a0: int, aw: int, b0: int, bw: int, L: int) -> int:
    if aw >= L or bw >= L:
        return 0
    forward = (b0 - (a0 + aw - 1)) % L
    backward = (a0 - (b0 + bw - 1)) % L
    if (b0 - a0) % L < aw or (a0 - b0) % L < bw:
        return 0
    return min(forward, backward)


@dataclass(frozen=True)
class Box:
    """Axis-aligned periodic block of cells."""
    x0: int
    y0: int
    width: int
    height: int
    L: int

    @classmethod
    def covering(cls, cells: Iterable[tuple[int, int]], L: int, inflate: int = 0) -> Box:
        cells = list(cells)
        x0, w = _covering_arc((c[0] for c in cells), L)
        y0, h = _covering_arc((c[1] for c in cells), L)
        return cls(x0, y0, w, h, L).inflated(inflate)

    def inflated(self, by: int) -> Box:
        if by == 0:
            return self
        return Box((self.x0 - by) % self.L, (self.y0 - by) % self.L,
                   self.width + 2 * by, self.height + 2 * by, self.L)

    def union(self, other: Box) -> Box:
        return Box.covering(self.cells() + other.cells(), self.L)

    @property
    def spans_torus(self) -> bool:
        return self.width >= self.L or self.height >= self.L

    @property
    def span(self) -> int:
        return max(self.width, self.height) - 1

    def contains(self, x: int, y: int) -> bool:
        return (x - self.x0) % self.L < self.width and (y - self.y0) % self.L < self.height

    def local(self, x: int, y: int) -> tuple[int, int]:
        return (x - self.x0) % self.L, (y - self.y0) % self.L

    def cells(self) -> list[tuple[int, int]]:
        return [((self.x0 + dx) % self.L, (self.y0 + dy) % self.L)
                for dy in range(self.height) for dx in range(self.width)]

    def overlaps(self, other: Box) -> bool:
        return any(other.contains(x, y) for x, y in self.cells())

    def distance(self, other: Box) -> int:
        return max(_arc_gap(self.x0, self.width, other.x0, other.width, self.L),
                   _arc_gap(self.y0, self.height, other.y0, other.height, self.L))

    def distance_to(self, x: int, y: int) -> int:
        return self.distance(Box(x % self.L, y % self.L, 1, 1, self.L))

    def edges(self, torus: Torus) -> set[tuple[int, int, int]]:
        """Every edge on the boundary of some plaquette of the box."""
        found = set()
        for x, y in self.cells():
            found.update(torus.plaquette_edges(x, y).values())
        return found

    def inner_edges(self, torus: Torus) -> list[tuple[int, int, int]]:
        """Edges joining two vertices that both belong to the box."""
        inner = []
        for x, y in self.cells():
            if self.contains(x + 1, y):
                inner.append(torus.edge(H, x, y))
            if self.contains(x, y + 1):
                inner.append(torus.edge(V, x, y))
        return inner

    def boundary_edges(self, torus: Torus) -> list[tuple[int, int, int]]:
        """Edges with exactly one endpoint vertex inside the box."""
        found = set()
        for x, y in self.cells():
            for edge in torus.vertex_edges(x, y).values():
                tail, head = torus.edge_endpoints(*edge)
                if self.contains(*tail) != self.contains(*head):
                    found.add(edge)
        return sorted(found)

    def vertex_path(self, torus: Torus, a, b):
        """In-box vertex path from a to b, never leaving the box."""
        ax, ay = self.local(*a)
        bx, by = self.local(*b)
        return _vertex_steps(torus, a, bx - ax, by - ay)

    def plaquette_path(self, torus: Torus, p, q):
        """In-box dual path from plaquette p to q."""
        px, py = self.local(*p)
        qx, qy = self.local(*q)
        return _plaquette_steps(torus, p, qx - px, qy - py)

    def as_dict(self) -> dict:
        return {'x0': self.x0, 'y0': self.y0, 'width': self.width, 'height': self.height}
