"""
Closed combinatorial curves on origamis and their winding numbers.

A path is a cyclic list of steps (square, entry side, exit side).  Inside a
square the curve is the chord between the two side midpoints, so its direction
is one of eight octants.  Turning between consecutive chords is always less
than a half turn, which makes the total turning a well defined multiple of 8.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .errors import ConstructionError, InvalidInput
from .origami import HORIZONTAL, Cylinder, Origami, singularity_profile
from .spin import SpinStructure

SIDES = ("L", "R", "B", "T")
OPPOSITE = {"L": "R", "R": "L", "B": "T", "T": "B"}

OCTANT = {
    ("L", "R"): 0, ("B", "R"): 1, ("L", "T"): 1, ("B", "T"): 2,
    ("R", "T"): 3, ("B", "L"): 3, ("R", "L"): 4, ("T", "L"): 5,
    ("R", "B"): 5, ("T", "B"): 6, ("L", "B"): 7, ("T", "R"): 7,
}


def neighbor(o: Origami, square: int, side: str) -> int:
    if side == "R":
        return o.h[square]
    if side == "L":
        return o.hinv[square]
    if side == "T":
        return o.v[square]
    if side == "B":
        return o.vinv[square]
    raise InvalidInput(f"unknown side {side!r}")


def _turn(a: int, b: int) -> int:
    return (b - a + 4) % 8 - 4


@dataclass(frozen=True)
class CurvePath:
    origami: Origami
    steps: tuple

    def __post_init__(self):
        steps = tuple((int(s), str(i), str(e)) for s, i, e in self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise InvalidInput("empty path")
        o = self.origami
        for k, (sq, ent, ex) in enumerate(steps):
            if not 0 <= sq < o.n:
                raise InvalidInput(f"step {k}: square {sq} out of range")
            if ent not in SIDES or ex not in SIDES or ent == ex:
                raise InvalidInput(f"step {k}: bad sides {ent}->{ex}")
            nsq, nent, _ = steps[(k + 1) % len(steps)]
            if neighbor(o, sq, ex) != nsq or nent != OPPOSITE[ex]:
                raise InvalidInput(f"step {k}: exit {ex} of square {sq} is not glued to the next step")
        octs = self.octants()
        for k in range(len(octs)):
            if _turn(octs[k], octs[(k + 1) % len(octs)]) == -4:
                raise InvalidInput(f"path backtracks after step {k}")

    def __len__(self):
        return len(self.steps)

    def octants(self) -> list:
        return [OCTANT[(i, e)] for _, i, e in self.steps]

    def total_turn(self) -> int:
        octs = self.octants()
        return sum(_turn(octs[k], octs[(k + 1) % len(octs)]) for k in range(len(octs)))

    def reverse(self) -> "CurvePath":
        return CurvePath(self.origami, tuple((s, e, i) for s, i, e in reversed(self.steps)))

    def rotate(self, k: int) -> "CurvePath":
        k %= len(self.steps)
        return CurvePath(self.origami, self.steps[k:] + self.steps[:k])

    def to_json(self) -> list:
        return [{"sq": s, "in": i, "out": e} for s, i, e in self.steps]

    @classmethod
    def from_json(cls, o: Origami, data) -> "CurvePath":
        try:
            return cls(o, tuple((d["sq"], d["in"], d["out"]) for d in data))
        except (KeyError, TypeError):
            raise InvalidInput("path JSON entries need keys sq, in, out")


def turning_number(p: CurvePath) -> int:
    total = p.total_turn()
    if total % 8:
        raise ConstructionError(f"total turning {total} is not a multiple of 8")
    return total // 8


def wn_mod_r(p: CurvePath, r: int) -> int:
    prof = singularity_profile(p.origami)
    if r < 1 or any(k % r for k in prof):
        raise InvalidInput(f"r={r} does not divide every zero order {prof}")
    return turning_number(p) % r


# --- standard loops -------------------------------------------------------

def core_path(o: Origami, c: Cylinder, row: int = 0) -> CurvePath:
    """Core of a cylinder, traversed in the direction of h (or v)."""
    r = c.rows[row]
    if c.direction == HORIZONTAL:
        steps = [(x, "L", "R") for x in r]
    else:
        steps = [(x, "B", "T") for x in r]
    return CurvePath(o, tuple(steps))


# counterclockwise walk around a vertex: quadrant -> (entry, exit, move, next quadrant)
_CCW = {
    "NE": ("B", "L", "L", "NW"),
    "NW": ("R", "B", "B", "SW"),
    "SW": ("T", "R", "R", "SE"),
    "SE": ("L", "T", "T", "NE"),
}
_CW = {
    "NW": ("B", "R", "R", "NE"),
    "NE": ("L", "B", "B", "SE"),
    "SE": ("T", "L", "L", "SW"),
    "SW": ("R", "T", "T", "NW"),
}


def _walk(o: Origami, table, start, stop=None, limit=None):
    steps = []
    sq, quad = start
    stop = stop or start
    limit = limit or 4 * o.n + 4
    while True:
        ent, ex, move, nxt = table[quad]
        steps.append((sq, ent, ex))
        sq, quad = neighbor(o, sq, move), nxt
        if (sq, quad) == stop:
            return steps
        if len(steps) > limit:
            raise ConstructionError("vertex walk did not close")


def vertex_loop(o: Origami, square: int) -> CurvePath:
    """Small counterclockwise loop around the bottom-left corner of a square."""
    return CurvePath(o, tuple(_walk(o, _CCW, (square, "NE"))))


def seam_loop(o: Origami, left: int) -> CurvePath:
    """
    Loop crossing the horizontal row of `left` once going north, then closing
    up clockwise around the vertex at the right end of the seam between
    `left` and its right neighbour.  Requires both ends of that seam to be the
    same cone point.
    """
    up, down = o.v[left], o.vinv[left]
    tail = _walk(o, _CW, (up, "NW"), stop=(down, "SW"))
    ent, ex, _, _ = _CW["SW"]
    steps = [(left, "B", "T")] + tail + [(down, ent, ex)]
    return CurvePath(o, tuple(steps))


# --- crossings and homology -----------------------------------------------

def side_crossings(p: CurvePath, square: int, side: str) -> int:
    """Signed crossings of one side of a square: exiting through it counts +1."""
    n = 0
    for sq, ent, ex in p.steps:
        if sq == square:
            n += (ex == side) - (ent == side)
    return n


def cylinder_crossings(p: CurvePath, c: Cylinder) -> int:
    """Net crossings of the core: upward (horizontal) or eastward (vertical)."""
    sq = set(c.top)
    n = 0
    if c.direction == HORIZONTAL:
        for s, ent, ex in p.steps:
            if s in sq:
                n += (ex == "T") - (ent == "T")
        return n
    for s, ent, ex in p.steps:
        if s in sq:
            n += (ex == "R") - (ent == "R")
    return n


def transverse_passages(p: CurvePath, c: Cylinder) -> int:
    """
    Unsigned count of runs through a height-1 cylinder that enter on one
    boundary and leave on the other.  An upper bound for the geometric
    intersection with the core.
    """
    if c.height != 1:
        raise InvalidInput("transverse_passages needs a cylinder of height 1")
    inside = set(c.rows[0])
    lo, hi = ("B", "T") if c.direction == HORIZONTAL else ("L", "R")
    steps = p.steps
    m = len(steps)
    n = 0
    for k, (sq, ent, _) in enumerate(steps):
        if sq not in inside or ent not in (lo, hi):
            continue
        j = k
        while steps[j % m][2] not in (lo, hi):
            j += 1
        n += steps[j % m][2] != ent
    return n


def algebraic_intersection(p: CurvePath, c: Cylinder) -> int:
    """<p, core> with <east, north> = +1."""
    k = cylinder_crossings(p, c)
    return -k if c.direction == HORIZONTAL else k


# --- twisting ---------------------------------------------------------------

def _passage(o, row, start_sq, entry, exit_sq, exit_side, disp, direction):
    """Canonical passage through a height-1 cylinder with given displacement."""
    fwd, back = ("R", "L") if direction == HORIZONTAL else ("T", "B")
    idx = {x: k for k, x in enumerate(row)}
    m = len(row)
    steps = []
    if disp == 0:
        return [(start_sq, entry, exit_side)]
    step_side, arr = (fwd, back) if disp > 0 else (back, fwd)
    k = idx[start_sq]
    d = 1 if disp > 0 else -1
    steps.append((start_sq, entry, step_side))
    for t in range(1, abs(disp)):
        k = (k + d) % m
        steps.append((row[k], arr, step_side))
    k = (k + d) % m
    steps.append((row[k], arr, exit_side))
    assert row[k] == exit_sq
    return steps


def twist_path(p: CurvePath, c: Cylinder, turns: int = 1) -> CurvePath:
    """
    Image of a path under `turns` left-handed Dehn twists in the core of a
    height-1 cylinder.  Each transverse passage through the cylinder is
    rerouted once around it per turn.
    """
    if c.height != 1:
        raise InvalidInput("twist_path needs a cylinder of height 1")
    o = p.origami
    row = c.rows[0]
    inside = set(row)
    if c.direction == HORIZONTAL:
        lo, hi, fwd, back = "B", "T", "R", "L"
    else:
        lo, hi, fwd, back = "L", "R", "T", "B"
    steps = list(p.steps)
    outside = [k for k, (s, _, _) in enumerate(steps) if s not in inside]
    if not outside:
        raise InvalidInput("path runs inside the cylinder")
    k0 = outside[0]
    steps = steps[k0:] + steps[:k0]
    m = c.circumference
    out = []
    k = 0
    while k < len(steps):
        s, ent, ex = steps[k]
        if s not in inside:
            out.append(steps[k])
            k += 1
            continue
        j = k
        disp = 0
        while steps[j][2] in (fwd, back):
            disp += 1 if steps[j][2] == fwd else -1
            j += 1
        first, last = steps[k], steps[j]
        ent, ex = first[1], last[2]
        if ent == lo and ex == hi:
            shift = -m * turns if c.direction == HORIZONTAL else m * turns
        elif ent == hi and ex == lo:
            shift = m * turns if c.direction == HORIZONTAL else -m * turns
        else:
            shift = 0
        if shift == 0:
            out.extend(steps[k:j + 1])
        else:
            out.extend(_passage(o, row, first[0], ent, last[0], ex, disp + shift, c.direction))
        k = j + 1
    return CurvePath(o, tuple(out))


def twist_linearity_check(p: CurvePath, c: Cylinder, r: int, core: CurvePath = None) -> bool:
    """wn(T(core) p) = wn(p) + <p, core> wn(core) mod r."""
    core = core or core_path(p.origami, c)
    lhs = wn_mod_r(twist_path(p, c), r)
    rhs = (wn_mod_r(p, r) + algebraic_intersection(p, c) * wn_mod_r(core, r)) % r
    return lhs == rhs


def coherence_check(paths: Iterable[CurvePath], chi: int, r: int) -> bool:
    """Sum of winding numbers of an oriented boundary equals its Euler characteristic mod r."""
    return sum(wn_mod_r(p, r) for p in paths) % r == chi % r


def coherent_signs(vectors: Sequence[Sequence[int]]) -> list:
    """
    Sign patterns (first sign +1) making the signed sum of homology vectors
    vanish.  A boundary family should have exactly one.
    """
    n = len(vectors)
    out = []
    for rest in product((1, -1), repeat=n - 1):
        signs = (1,) + rest
        total = [sum(s * v[i] for s, v in zip(signs, vectors)) for i in range(len(vectors[0]))]
        if not any(total):
            out.append(list(signs))
    return out


def spin_from_values(r: int, a_values: Sequence[int], b_values: Sequence[int]) -> SpinStructure:
    return SpinStructure(r, len(a_values), tuple(a_values) + tuple(b_values))


def spin_from_prototype(o: Origami, basis_paths: Sequence[CurvePath], r: int = None) -> SpinStructure:
    """r-spin structure read off as winding numbers of 2g oriented basis paths."""
    prof = singularity_profile(o)
    if r is None:
        from math import gcd
        from functools import reduce
        r = reduce(gcd, prof) if prof else 0
        if r == 0:
            raise InvalidInput("torus has no canonical modulus")
    if len(basis_paths) % 2:
        raise InvalidInput("need an even number of basis paths")
    g = len(basis_paths) // 2
    vals = tuple(wn_mod_r(p, r) for p in basis_paths)
    return SpinStructure(r, g, vals)


def leaves(p: CurvePath, c: Cylinder) -> bool:
    """True when some step of p lies outside c, which twist_path needs."""
    return any(sq not in c.squares for sq, _, _ in p.steps)


def random_twisted_path(p: CurvePath, cyls: Sequence[Cylinder], rng, twists: int = 2) -> CurvePath:
    """Twist p a few times in randomly chosen height-1 cylinders it crosses."""
    for _ in range(twists):
        options = [c for c in cyls if c.height == 1 and transverse_passages(p, c) and leaves(p, c)]
        if not options:
            break
        c = options[rng.randrange(len(options))]
        p = twist_path(p, c, rng.choice((1, -1)))
    return p
