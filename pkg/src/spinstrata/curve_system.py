"""
Labeled filling curve systems and the square-tiled prototypes dual to them.

Curves come in three families: the horizontal chain curves a_1..a_g, the
vertical connectors a_1'..a_{g-1}', and vertical curves b_t indexed mod 2g-2,
each crossing a single a_i.  A system selects some of the b_t; its
intersection points become the squares of the prototype origami.
"""

from __future__ import annotations

import enum
import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional, Sequence

from .errors import ConstructionError, InvalidInput, UnsupportedCase
from .origami import HORIZONTAL, VERTICAL, Cylinder, Origami, cylinders, singularity_profile
from .spin import SpinStructure, arf_of_spin, parity_bit, parity_name, validate_partition
from .winding import CurvePath, core_path, seam_loop, side_crossings, spin_from_prototype


# --- names ------------------------------------------------------------------

_NAME_RE = re.compile(r"^(a'|a|b)(\d+)('?)$|^c\(?(\d+)[,_](\d+)\)?$")


@dataclass(frozen=True, order=True)
class CurveName:
    kind: str  # "a", "a'", "b" or "c"
    i: int
    j: int = 0

    def __post_init__(self):
        if self.kind not in ("a", "a'", "b", "c"):
            raise InvalidInput(f"unknown curve kind {self.kind!r}")
        if self.kind == "c" and not self.i < self.j:
            raise InvalidInput("c curves need i < j")

    def __str__(self):
        if self.kind == "c":
            return f"c({self.i},{self.j})"
        if self.kind == "a'":
            return f"a{self.i}'"
        return f"{self.kind}{self.i}"

    __repr__ = __str__

    @property
    def is_horizontal(self) -> bool:
        return self.kind == "a"

    @classmethod
    def parse(cls, text) -> "CurveName":
        if isinstance(text, CurveName):
            return text
        m = _NAME_RE.match(str(text).strip().replace(" ", ""))
        if not m:
            raise InvalidInput(f"cannot parse curve name {text!r}")
        if m.group(4):
            return cls("c", int(m.group(4)), int(m.group(5)))
        kind, idx, prime = m.group(1), int(m.group(2)), m.group(3)
        if kind == "a" and prime:
            kind = "a'"
        return cls(kind, idx)


def a(i: int) -> CurveName:
    return CurveName("a", i)


def ap(i: int) -> CurveName:
    return CurveName("a'", i)


def b(t: int) -> CurveName:
    return CurveName("b", t)


def c(i: int, j: int) -> CurveName:
    return CurveName("c", i, j)


class LabelingCase(enum.Enum):
    ONE_TWO = "OneTwo"
    THREE = "Three"

    def __str__(self):
        return self.value


def b_rep(t: int, g: int) -> int:
    m = 2 * g - 2
    t %= m
    return t if t else m


def normalize(name: CurveName, g: int, case: LabelingCase) -> CurveName:
    """Canonical representative: b indices in 1..2g-2, c pairs folded to i < j <= g."""
    name = CurveName.parse(name)
    if name.kind == "b":
        return b(b_rep(name.i, g))
    if name.kind == "a":
        if not 1 <= name.i <= g:
            raise InvalidInput(f"{name} out of range for genus {g}")
        return name
    if name.kind == "a'":
        if not 1 <= name.i <= g - 1:
            raise InvalidInput(f"{name} out of range for genus {g}")
        return name
    i, j = name.i, name.j
    if 1 <= i < j <= g:
        if case is LabelingCase.THREE and (i, j) == (1, 2) and g < 3:
            raise InvalidInput("c(1,2) needs genus at least 3")
        return name
    if j == 2 * g - 2 and g <= i < j:
        return c(2, 2 * g - i) if case is LabelingCase.ONE_TWO else c(1, 2 * g - i)
    if g <= i < j <= 2 * g - 3:
        return c(2 * g - j, 2 * g - i)
    raise InvalidInput(f"{name} is not a named curve in genus {g}")


# --- labeling and indices ----------------------------------------------------

def kappa_gcd(kappa: Sequence[int]) -> int:
    return reduce(math.gcd, kappa)


def labeling_case(kappa: Sequence[int], spin=None, g: int = None) -> LabelingCase:
    kap = validate_partition(kappa, g)
    g = sum(kap) // 2 + 1
    r = kappa_gcd(kap)
    if r % 2:
        if spin is not None:
            raise InvalidInput(f"spin is not defined for odd gcd {r}")
        return LabelingCase.ONE_TWO
    if spin is None:
        raise InvalidInput(f"gcd {r} is even, so a spin parity is required")
    odd = parity_bit(spin)
    if g % 4 in (1, 2):
        return LabelingCase.ONE_TWO if odd else LabelingCase.THREE
    return LabelingCase.THREE if odd else LabelingCase.ONE_TWO


def b_indices(kappa: Sequence[int], g: int = None) -> list:
    """b indices 3 + k_1 + ... + k_l in order of l, reduced to 1..2g-2."""
    kap = validate_partition(kappa, g)
    g = sum(kap) // 2 + 1
    out, s = [], 3
    for k in kap:
        s += k
        out.append(b_rep(s, g))
    return out


def b_index_set(kappa: Sequence[int], g: int = None) -> frozenset:
    return frozenset(b_indices(kappa, g))


# --- the model ---------------------------------------------------------------

def horizontal_tokens(g: int, case: LabelingCase) -> dict:
    """
    Crossings met along each a_i in its reference direction, before any b is
    dropped.  Tokens are curve names of a' and b curves.
    """
    m = 2 * g - 2
    out = {}
    for i in range(1, g + 1):
        seq = []
        if i > 1:
            seq.append(ap(i - 1))
        seq.append(b(i))
        if i < g:
            seq.append(ap(i))
            if i > 1:
                seq.append(b(2 * g - i))
        out[i] = seq
    if case is LabelingCase.THREE:
        if g < 3:
            raise UnsupportedCase("labeling case Three needs genus at least 3")
        out[1] = [ap(1), b(m)]
        out[2] = [ap(2), b(2)]
        seq = [ap(1), b(1), ap(2), b(3)]
        if g > 3:
            seq += [ap(3), b(2 * g - 3)]
        out[3] = seq
    return out


def connector_ends(g: int, case: LabelingCase) -> dict:
    """The two a curves met by each a_k'."""
    ends = {k: (k, k + 1) for k in range(1, g)}
    if case is LabelingCase.THREE:
        ends[1] = (1, 3)
        ends[2] = (2, 3)
    return ends


def reference_sign(i: int) -> int:
    """Crossing sign of a_i over the vertical curves, in reference directions."""
    return 1 if i % 2 else -1


@dataclass(frozen=True)
class CurveSystem:
    g: int
    kappa: tuple
    spin: Optional[int]
    labeling: LabelingCase
    selected_b: tuple
    curves: tuple
    vertices: tuple  # (horizontal name, vertical name) per vertex id
    signs: tuple  # reference crossing sign per vertex
    horizontal: dict  # a_i -> vertex ids in reference order
    vertical: dict  # a' or b -> vertex ids in reference order
    slots: dict  # b index -> (a_i, position) for every b, in reference order
    faces: tuple = field(default=())

    @property
    def r(self) -> int:
        return kappa_gcd(self.kappa)

    def intersection_graph(self) -> dict:
        adj = {n: set() for n in self.curves}
        for hname, vname in self.vertices:
            adj[hname].add(vname)
            adj[vname].add(hname)
        return adj

    def is_connected(self) -> bool:
        adj = self.intersection_graph()
        start = self.curves[0]
        seen = {start}
        todo = [start]
        while todo:
            x = todo.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return len(seen) == len(self.curves)

    def is_arboreal(self) -> bool:
        edges = {frozenset(p) for p in self.vertices}
        return self.is_connected() and len(edges) == len(self.curves) - 1

    def face_sizes(self) -> list:
        return sorted(len(f) for f in self.faces)

    def to_json(self) -> dict:
        return {
            "genus": self.g,
            "kappa": list(self.kappa),
            "labeling": str(self.labeling),
            "curves": [str(n) for n in self.curves],
            "vertices": [
                {
                    "id": k,
                    "horizontal": str(hn),
                    "vertical": str(vn),
                    "sign": s,
                    "half_edges": _half_edge_order(str(hn), str(vn), s),
                }
                for k, ((hn, vn), s) in enumerate(zip(self.vertices, self.signs))
            ],
            "faces": [{"corners": len(f), "cycle": [list(x) for x in f]} for f in self.faces],
        }

    def to_dot(self) -> str:
        lines = ["graph intersection {"]
        for n in self.curves:
            lines.append(f'  "{n}";')
        for hn, vn in self.vertices:
            lines.append(f'  "{hn}" -- "{vn}";')
        lines.append("}")
        return "\n".join(lines)


def _half_edge_order(hn, vn, s):
    # counterclockwise order of outgoing strands, reference directions
    if s > 0:
        return [[hn, "+"], [vn, "+"], [hn, "-"], [vn, "-"]]
    return [[hn, "+"], [vn, "-"], [hn, "-"], [vn, "+"]]


def _trace_faces(vertices, signs, horizontal, vertical) -> tuple:
    """Faces of the fatgraph as cycles of corners (vertex, dart)."""
    nxt_h, prv_h, nxt_v, prv_v = {}, {}, {}, {}
    for seq, nxt, prv in [(s, nxt_h, prv_h) for s in horizontal.values()] + [
        (s, nxt_v, prv_v) for s in vertical.values()
    ]:
        for k, x in enumerate(seq):
            nxt[x] = seq[(k + 1) % len(seq)]
            prv[x] = seq[k - 1]

    def rotation(x):
        if signs[x] > 0:
            return ["h+", "v+", "h-", "v-"]
        return ["h+", "v-", "h-", "v+"]

    def across(x, d):
        # follow the edge leaving x along dart d; arrive at the reverse dart
        return {
            "h+": (nxt_h[x], "h-"),
            "h-": (prv_h[x], "h+"),
            "v+": (nxt_v[x], "v-"),
            "v-": (prv_v[x], "v+"),
        }[d]

    def face_next(x, d):
        y, e = across(x, d)
        rot = rotation(y)
        return y, rot[(rot.index(e) - 1) % 4]

    seen = set()
    faces = []
    for x in range(len(vertices)):
        for d in ("h+", "h-", "v+", "v-"):
            if (x, d) in seen:
                continue
            cyc = []
            cur = (x, d)
            while cur not in seen:
                seen.add(cur)
                cyc.append(cur)
                cur = face_next(*cur)
            faces.append(tuple(cyc))
    return tuple(faces)


def build_curve_system(kappa: Sequence[int], spin=None, g: int = None) -> CurveSystem:
    kap = validate_partition(kappa, g)
    g = sum(kap) // 2 + 1
    if g < 3:
        raise UnsupportedCase("curve systems are built for genus at least 3")
    case = labeling_case(kap, spin, g)
    r = kappa_gcd(kap)
    spin_bit = parity_bit(spin) if r % 2 == 0 else None
    chosen = b_indices(kap, g)
    selected = set(chosen)
    if len(selected) != len(kap):
        raise ConstructionError("b indices collide", {"indices": chosen})
    tokens = horizontal_tokens(g, case)
    ends = connector_ends(g, case)

    vertices, signs = [], []
    horizontal, vertical, slots = {}, {}, {}
    at = {}
    for i in range(1, g + 1):
        seq = []
        for tok in tokens[i]:
            if tok.kind == "b":
                slots[tok.i] = (a(i), len(seq))
                if tok.i not in selected:
                    continue
            at[(a(i), tok)] = len(vertices)
            seq.append(len(vertices))
            vertices.append((a(i), tok))
            signs.append(reference_sign(i))
        horizontal[a(i)] = tuple(seq)
    for k in range(1, g):
        lo, hi = ends[k]
        vertical[ap(k)] = (at[(a(lo), ap(k))], at[(a(hi), ap(k))])
    for t in sorted(selected):
        host = slots[t][0]
        vertical[b(t)] = (at[(host, b(t))],)

    curves = tuple([a(i) for i in range(1, g + 1)] + [ap(k) for k in range(1, g)] + [b(t) for t in sorted(selected)])
    faces = _trace_faces(vertices, signs, horizontal, vertical)
    cs = CurveSystem(
        g=g,
        kappa=tuple(kap),
        spin=spin_bit,
        labeling=case,
        selected_b=tuple(chosen),
        curves=curves,
        vertices=tuple(vertices),
        signs=tuple(signs),
        horizontal=horizontal,
        vertical=vertical,
        slots=slots,
        faces=faces,
    )
    expected = sorted(4 * (k + 1) for k in kap)
    if cs.face_sizes() != expected:
        raise ConstructionError(
            "faces do not realize kappa",
            {"faces": cs.face_sizes(), "expected": expected},
        )
    return cs


def orient_curves(cs: CurveSystem, seed: int = 1) -> dict:
    """
    Orientation sign for every curve (relative to its reference direction)
    making each horizontal-over-vertical crossing positive.
    """
    if not cs.is_connected():
        raise ConstructionError("curve system is disconnected")
    if not cs.is_arboreal():
        raise ConstructionError("intersection graph is not a tree; orientation may be obstructed")
    sign_of = {}
    for x, (hn, vn) in enumerate(cs.vertices):
        key = frozenset((hn, vn))
        if key in sign_of:
            raise ConstructionError(f"{hn} and {vn} meet more than once")
        sign_of[key] = cs.signs[x]
    adj = cs.intersection_graph()
    root = a(1)
    eps = {root: 1 if seed >= 0 else -1}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in sorted(adj[x]):
            if y in eps:
                continue
            eps[y] = eps[x] * sign_of[frozenset((x, y))]
            queue.append(y)
    return eps


def crossing_signs(cs: CurveSystem, eps: dict) -> list:
    return [eps[hn] * eps[vn] * s for (hn, vn), s in zip(cs.vertices, cs.signs)]


# --- prototypes ---------------------------------------------------------------

def basis_b_index(i: int, g: int, case: LabelingCase) -> int:
    """Index t of the b curve dual to a_i in the standard basis."""
    if case is LabelingCase.THREE and i == 1:
        return 2 * g - 2
    return i


@dataclass(frozen=True)
class Prototype:
    system: CurveSystem
    orientation: dict
    origami: Origami
    cylinder_of: dict  # curve name -> Cylinder
    seam: dict  # b index -> square whose right side is the seam of b_t

    @property
    def g(self) -> int:
        return self.system.g

    @property
    def labeling(self) -> LabelingCase:
        return self.system.labeling

    @property
    def r(self) -> int:
        return self.system.r

    def row_of(self, i: int) -> tuple:
        return self.cylinder_of[a(i)].rows[0]

    def basis_names(self) -> list:
        g = self.g
        return [a(i) for i in range(1, g + 1)] + [b(basis_b_index(i, g, self.labeling)) for i in range(1, g + 1)]

    def path_of(self, name) -> CurvePath:
        """Oriented path for a named curve."""
        name = normalize(name, self.g, self.labeling)
        if name in self.cylinder_of:
            return core_path(self.origami, self.cylinder_of[name])
        if name.kind == "b":
            return seam_loop(self.origami, self.seam[name.i])
        return c_curve_path(self, name)

    def basis_paths(self) -> list:
        return [self.path_of(n) for n in self.basis_names()]

    def homology(self, p: CurvePath) -> tuple:
        """Coordinates in the basis (a_1..a_g, b-hat_1..b-hat_g)."""
        g = self.g
        xs = []
        for i in range(1, g + 1):
            t = basis_b_index(i, g, self.labeling)
            xs.append(side_crossings(p, self.seam[t], "R"))
        ys = []
        for i in range(1, g + 1):
            ys.append(sum(side_crossings(p, x, "T") for x in self.row_of(i)))
        return tuple(xs + ys)

    def spin_structure(self, r: int = None) -> SpinStructure:
        return spin_from_prototype(self.origami, self.basis_paths(), r or self.r)

    def to_json(self) -> dict:
        return {
            "kappa": list(self.system.kappa),
            "spin": None if self.system.spin is None else parity_name(self.system.spin),
            "genus": self.g,
            "labeling": str(self.labeling),
            "origami": self.origami.to_json(),
            "profile": singularity_profile(self.origami),
            "cylinders": {str(n): c.to_json() for n, c in sorted(self.cylinder_of.items())},
        }


def prototype_from_system(cs: CurveSystem, eps: dict = None) -> Prototype:
    eps = eps or orient_curves(cs)
    if any(s != 1 for s in crossing_signs(cs, eps)):
        raise ConstructionError("orientation leaves a negative crossing")
    n = len(cs.vertices)
    h = [None] * n
    v = [None] * n
    oriented = {}
    for name, seq in list(cs.horizontal.items()) + list(cs.vertical.items()):
        seq = seq if eps[name] > 0 else tuple(reversed(seq))
        oriented[name] = seq
        perm = h if name.kind == "a" else v
        for k, x in enumerate(seq):
            perm[x] = seq[(k + 1) % len(seq)]
    o = Origami(h, v)
    cyl = {}
    for direction in (HORIZONTAL, VERTICAL):
        for cy in cylinders(o, direction):
            owners = {cs.vertices[x][0 if direction == HORIZONTAL else 1] for x in cy.squares}
            if len(owners) != 1 or cy.height != 1:
                raise ConstructionError(f"{direction} cylinder {cy.rows} does not match a single curve")
            cyl[owners.pop()] = cy
    for name in cs.curves:
        if name not in cyl:
            raise ConstructionError(f"{name} is not a cylinder core")
    seam = {}
    for t, (host, pos) in cs.slots.items():
        seq = cs.horizontal[host]
        if t in cs.selected_b:
            seam[t] = seq[pos]
        elif eps[host] > 0:
            seam[t] = seq[(pos - 1) % len(seq)]
        else:
            seam[t] = seq[pos % len(seq)]
    return Prototype(cs, eps, o, cyl, seam)


def build_prototype(kappa: Sequence[int], spin=None, g: int = None, check: bool = True) -> Prototype:
    cs = build_curve_system(kappa, spin, g)
    proto = prototype_from_system(cs)
    if check:
        prof = singularity_profile(proto.origami)
        if prof != sorted(cs.kappa):
            raise ConstructionError("profile mismatch", {"profile": prof, "kappa": sorted(cs.kappa)})
        if cs.r % 2 == 0:
            parity = arf_of_spin(proto.spin_structure())
            if parity != cs.spin:
                raise ConstructionError("parity mismatch", {"arf": parity, "requested": cs.spin})
    return proto


# --- chain neighbourhoods and c curves -----------------------------------------

def chain_of(name: CurveName, g: int, case: LabelingCase) -> list:
    """Chain of curves whose neighbourhood has c(i,j) as a boundary curve."""
    name = normalize(name, g, case)
    if name.kind != "c":
        raise InvalidInput(f"{name} is not a c curve")
    i, j = name.i, name.j
    if case is LabelingCase.THREE and i == 1:
        if j == 2:
            return [a(1), ap(1), a(3), ap(2), a(2)]
        out = [a(1), ap(1), a(3)]
        for k in range(3, j):
            out += [ap(k), a(k + 1)]
        return out
    out = [a(i)]
    for k in range(i, j):
        out += [ap(k), a(k + 1)]
    return out


_CCW_SIDES = ["R", "T", "L", "B"]


def chain_boundary(proto: Prototype, chain: Sequence[CurveName]) -> list:
    """Boundary components of a regular neighbourhood of a chain, as paths."""
    from .winding import OPPOSITE, neighbor

    o = proto.origami
    graph = {}
    for name in chain:
        cy = proto.cylinder_of[name]
        sides = ("L", "R") if name.kind == "a" else ("B", "T")
        for x in cy.squares:
            graph.setdefault(x, set()).update(sides)
    seen = set()
    comps = []
    for x in sorted(graph):
        for s in _CCW_SIDES:
            if s not in graph[x] or (x, s) in seen:
                continue
            steps = []
            cur = (x, s)
            while cur not in seen:
                seen.add(cur)
                sq, ent = cur
                k = _CCW_SIDES.index(ent)
                ex = next(_CCW_SIDES[(k + d) % 4] for d in (1, 2, 3) if _CCW_SIDES[(k + d) % 4] in graph[sq])
                steps.append((sq, ent, ex))
                cur = (neighbor(o, sq, ex), OPPOSITE[ex])
            comps.append(CurvePath(o, tuple(steps)))
    return comps


def _along_score(p: CurvePath, row) -> int:
    """Net eastward progress of a path through the squares of a row."""
    row = set(row)
    east = 0
    for sq, ent, ex in p.steps:
        if sq in row:
            east += (ex == "R") - (ex == "L") + (ent == "L") - (ent == "R")
    return east


def c_curve_path(proto: Prototype, name) -> CurvePath:
    """
    The curve c(i,j) on a prototype: the boundary component of the chain
    neighbourhood that runs beside the last chain curve in that curve's own
    direction, oriented so its coefficient on that curve is positive.
    """
    g, case = proto.g, proto.labeling
    name = normalize(name, g, case)
    chain = chain_of(name, g, case)
    last = chain[-1].i
    want = proto.orientation[a(last)]
    picks = [p for p in chain_boundary(proto, chain) if _along_score(p, proto.row_of(last)) * want > 0]
    if len(picks) != 1:
        raise ConstructionError(f"cannot single out the boundary curve {name}")
    p = picks[0]
    if proto.homology(p)[last - 1] < 0:
        p = p.reverse()
    return p


def salter_conditions_check(proto: Prototype, phi: SpinStructure = None, extra=(), d=None):
    """Generation checklist on a prototype; see salter.salter_conditions_check."""
    from .salter import salter_conditions_check as check

    return check(proto, phi, extra, d)


def coherence_families(proto: Prototype) -> list:
    """
    Boundaries of neighbourhoods of growing subtrees of the network, taken in
    breadth-first order from a_1.  Each entry is (boundary paths, Euler
    characteristic of the neighbourhood).
    """
    adj = proto.system.intersection_graph()
    order = [a(1)]
    seen = {a(1)}
    queue = deque(order)
    while queue:
        x = queue.popleft()
        for y in sorted(adj[x], key=str):
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
    return [(chain_boundary(proto, order[:k]), 1 - k) for k in range(1, len(order) + 1)]
