"""
Square-tiled surfaces stored as a pair of permutations of the squares.

Square ``x`` has ``h[x]`` glued to its right side and ``v[x]`` glued to its
top side.  Vertices of the tiling are tracked through the bottom-left corner
of each square; going counterclockwise around such a corner permutes the
squares by ``v h v^-1 h^-1``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InvalidInput

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


def _check_perm(images, n, name):
    if len(images) != n or sorted(images) != list(range(n)):
        raise InvalidInput(f"{name} is not a permutation of 0..{n - 1}")


def invert(p: Sequence[int]) -> tuple:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple:
    """Apply q first, then p."""
    return tuple(p[q[i]] for i in range(len(q)))


def cycles(p: Sequence[int]) -> list:
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = p[x]
        out.append(cyc)
    return out


@dataclass(frozen=True)
class Origami:
    h: tuple
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(int(x) for x in self.h))
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))
        n = len(self.h)
        if n == 0:
            raise InvalidInput("an origami needs at least one square")
        _check_perm(self.h, n, "h")
        _check_perm(self.v, n, "v")

    @property
    def n(self) -> int:
        return len(self.h)

    @property
    def hinv(self) -> tuple:
        return invert(self.h)

    @property
    def vinv(self) -> tuple:
        return invert(self.v)

    def is_connected(self) -> bool:
        seen = {0}
        todo = [0]
        while todo:
            x = todo.pop()
            for y in (self.h[x], self.v[x], self.hinv[x], self.vinv[x]):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return len(seen) == self.n

    def require_connected(self):
        if not self.is_connected():
            raise InvalidInput("origami is disconnected")

    def corner_permutation(self) -> tuple:
        """Counterclockwise rotation of bottom-left corners: v h v^-1 h^-1."""
        hi, vi = self.hinv, self.vinv
        return tuple(self.v[self.h[vi[hi[x]]]] for x in range(self.n))

    def vertices(self) -> list:
        """Each vertex as the list of squares having it as bottom-left corner."""
        return cycles(self.corner_permutation())

    def vertex_of_corner(self) -> list:
        """Index into vertices() of the bottom-left corner of each square."""
        lab = [0] * self.n
        for k, cyc in enumerate(self.vertices()):
            for x in cyc:
                lab[x] = k
        return lab

    def to_json(self) -> dict:
        return {"n": self.n, "h": list(self.h), "v": list(self.v)}

    @classmethod
    def from_json(cls, data) -> "Origami":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            h, v = data["h"], data["v"]
        except (KeyError, TypeError):
            raise InvalidInput("origami JSON needs keys 'h' and 'v'")
        o = cls(h, v)
        if "n" in data and int(data["n"]) != o.n:
            raise InvalidInput("declared n does not match permutation length")
        return o


def from_cycles(n: int, h_cycles, v_cycles) -> Origami:
    """Build from cycle notation, e.g. from_cycles(3, [(0, 1)], [(0, 2)])."""

    def perm(cs):
        p = list(range(n))
        for c in cs:
            for a, b in zip(c, list(c[1:]) + [c[0]]):
                p[a] = b
        return p

    return Origami(perm(h_cycles), perm(v_cycles))


def torus() -> Origami:
    return Origami((0,), (0,))


def l_origami() -> Origami:
    return from_cycles(3, [(0, 1)], [(0, 2)])


def singularity_profile(o: Origami) -> list:
    o.require_connected()
    return sorted(len(c) - 1 for c in o.vertices() if len(c) > 1)


def genus(o: Origami) -> int:
    total = sum(singularity_profile(o))
    return 1 + total // 2


def euler_characteristic(o: Origami) -> int:
    # squares - edges + vertices, with 2n edges
    return o.n - 2 * o.n + len(o.vertices())


@dataclass(frozen=True)
class Cylinder:
    direction: str
    rows: tuple
    circumference: int = field(init=False)
    height: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        object.__setattr__(self, "circumference", len(self.rows[0]))
        object.__setattr__(self, "height", len(self.rows))

    @property
    def squares(self) -> frozenset:
        return frozenset(x for row in self.rows for x in row)

    @property
    def top(self) -> tuple:
        return self.rows[-1]

    @property
    def bottom(self) -> tuple:
        return self.rows[0]

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "rows": [list(r) for r in self.rows],
            "circumference": self.circumference,
            "height": self.height,
        }


def _along_across(o: Origami, direction):
    if direction == HORIZONTAL:
        return o.h, o.v
    if direction == VERTICAL:
        return o.v, o.h
    raise InvalidInput(f"unknown direction {direction!r}")


def cylinders(o: Origami, direction=HORIZONTAL) -> list:
    along, across = _along_across(o, direction)
    rows = cycles(along)
    row_of = {}
    for k, r in enumerate(rows):
        for x in r:
            row_of[x] = k

    def glued_up(k):
        # the row above k continues the cylinder iff no cone point separates them
        r = rows[k]
        return all(across[along[x]] == along[across[x]] for x in r)

    up = {}
    for k, r in enumerate(rows):
        if glued_up(k):
            up[k] = row_of[across[r[0]]]
    down = {j: k for k, j in up.items()}

    out = []
    done = set()
    for k in range(len(rows)):
        if k in done:
            continue
        # walk down to the bottom of the stack, or around a closed stack
        b = k
        visited = {k}
        while b in down and down[b] not in visited:
            b = down[b]
            visited.add(b)
        if b in down:
            # closed stack: start at the row holding the smallest square
            b = min(visited, key=lambda j: min(rows[j]))
        stack_rows = []
        j = b
        start = min(rows[b])
        while True:
            done.add(j)
            if not stack_rows:
                r = rows[j]
                i = r.index(start)
                row = r[i:] + r[:i]
            else:
                row = [across[x] for x in stack_rows[-1]]
            stack_rows.append(row)
            if j not in up or up[j] == b:
                break
            j = up[j]
        out.append(Cylinder(direction, stack_rows))
    out.sort(key=lambda c: min(c.squares))
    return out


def cylinder_containing(o: Origami, square: int, direction=HORIZONTAL) -> Cylinder:
    for c in cylinders(o, direction):
        if square in c.squares:
            return c
    raise InvalidInput(f"square {square} out of range")


def _is_cylinder_of(o: Origami, c: Cylinder) -> bool:
    return c in cylinders(o, c.direction)


def shear_cylinder(o: Origami, c: Cylinder, turns: int = 1) -> Origami:
    """
    Full shear of a cylinder by its inverse modulus, `turns` times.

    The gluing across the top boundary is shifted by one circumference in the
    direction of the core (right for horizontal, up for vertical).  The
    marking changes by the inverse twist in the core; see shear_letter().
    """
    if not _is_cylinder_of(o, c):
        raise InvalidInput("not a cylinder of this origami")
    along, across = _along_across(o, c.direction)
    along_inv = invert(along)
    shift = turns * c.circumference
    new_across = list(across)
    for x in c.top:
        y = x
        for _ in range(shift % c.circumference if c.circumference else 0):
            y = along_inv[y]
        # a whole number of circumferences brings y back to x
        new_across[x] = across[y]
    if c.direction == HORIZONTAL:
        return Origami(o.h, new_across)
    return Origami(new_across, o.v)


def shear_letter(core_name, turns: int = 1):
    """Marking letter produced by shear_cylinder: inverse twists in the core."""
    return (core_name, -1 if turns > 0 else 1) if turns else None


def are_isomorphic(o1: Origami, o2: Origami) -> Optional[tuple]:
    """Relabeling pi with pi h1 pi^-1 = h2 and pi v1 pi^-1 = v2, or None."""
    if o1.n != o2.n:
        return None
    n = o1.n
    for target in range(n):
        pi = [-1] * n
        used = [False] * n
        pi[0] = target
        used[target] = True
        queue = deque([0])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for p1, p2 in ((o1.h, o2.h), (o1.v, o2.v)):
                y, z = p1[x], p2[pi[x]]
                if pi[y] == -1:
                    if used[z]:
                        ok = False
                        break
                    pi[y] = z
                    used[z] = True
                    queue.append(y)
                elif pi[y] != z:
                    ok = False
                    break
        if ok and all(p >= 0 for p in pi):
            return tuple(pi)
    return None
