"""
Checklist for the generation criterion on curve systems of the strata
H(r, r, ..., r): a connected filling network whose twists stabilize phi, a
D_(2r+3) arrangement with its companion curve, a curve crossing the cut curve
d once, and a connected arboreal subnetwork filling the surface cut along d.

Curves of the system are cylinder cores on the prototype, so their mutual
intersections are read from the network.  Intersections with d come from a
path for d on the prototype, pinned between its algebraic intersection and
its count of transverse passages.  Curves added from outside the system are
only known up to homology; their intersections are taken to be the absolute
algebraic ones.  Filling of the cut surface is decided homologically: a
connected arboreal network disjoint from d fills S minus d exactly when its
classes span a form of rank 2g-2 and d lies in their rational span.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .curve_system import CurveName, CurveSystem, LabelingCase, Prototype, a, ap, b, b_rep, chain_boundary
from .errors import UnsupportedCase
from .euclid import ExtraCurve, completion_curve
from .framed import spin_value
from .spin import SpinStructure, symplectic_pairing
from .winding import algebraic_intersection, transverse_passages, turning_number


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Exact rank over Q."""
    m = [[Fraction(x) for x in row] for row in rows if any(row)]
    rk = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(len(m)):
            if i != rk and m[i][col] != 0:
                f = m[i][col] / m[rk][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[rk])]
        rk += 1
    return rk


def d_configuration_witness(r: int) -> list:
    """b_3, a_2', then the chain a_3, a_3', ..., a_(r+3); b_(r+3) plays the companion."""
    chain = []
    for k in range(3, r + 3):
        chain += [a(k), ap(k)]
    chain.append(a(r + 3))
    return [b(3), ap(2)] + chain


def _expected_edges(witness: Sequence[CurveName]) -> set:
    fork, other, chain = witness[0], witness[1], witness[2:]
    edges = {frozenset((fork, chain[0])), frozenset((other, chain[0]))}
    for x, y in zip(chain, chain[1:]):
        edges.add(frozenset((x, y)))
    return edges


def _is_tree(nodes, edges) -> tuple:
    nodes = list(nodes)
    if not nodes:
        return False, False
    adj = {n: set() for n in nodes}
    for e in edges:
        x, y = tuple(e)
        adj[x].add(y)
        adj[y].add(x)
    seen = {nodes[0]}
    todo = [nodes[0]]
    while todo:
        x = todo.pop()
        for y in adj[x] - seen:
            seen.add(y)
            todo.append(y)
    connected = len(seen) == len(nodes)
    return connected, connected and len(edges) == len(nodes) - 1


@dataclass
class SalterReport:
    kappa: tuple
    g: int
    r: int
    labeling: LabelingCase
    conditions: dict = field(default_factory=dict)
    extra: tuple = ()

    @property
    def ok(self) -> bool:
        return all(v["ok"] for v in self.conditions.values())

    def passed(self, key: str) -> bool:
        return self.conditions[key]["ok"]

    def to_json(self) -> dict:
        return {
            "kappa": list(self.kappa),
            "g": self.g,
            "r": self.r,
            "labeling": str(self.labeling),
            "extra": [x.to_json() for x in self.extra],
            "ok": self.ok,
            "conditions": self.conditions,
        }


def _guard(cs: CurveSystem):
    if cs.r >= cs.g - 2:
        raise UnsupportedCase(f"the checklist needs r < g-2; got r = {cs.r}, g = {cs.g}")


def salter_conditions_check(
    proto: Prototype,
    phi: Optional[SpinStructure] = None,
    extra: Sequence[ExtraCurve] = (),
    d: CurveName = None,
) -> SalterReport:
    cs = proto.system
    _guard(cs)
    g, r = cs.g, cs.r
    phi = phi or proto.spin_structure()
    d = d or b(2)
    extra = tuple(extra)
    rep = SalterReport(cs.kappa, g, r, cs.labeling, extra=extra)
    curves = list(cs.curves)
    homology = {n: proto.homology(proto.path_of(n)) for n in curves}
    for x in extra:
        homology[x.name] = x.homology
    edges = {frozenset(v) for v in cs.vertices}
    for x in extra:
        for y in list(curves) + [z.name for z in extra]:
            if y != x.name and symplectic_pairing(x.homology, homology[y]):
                edges.add(frozenset((x.name, y)))

    # network
    rep.conditions["network"] = {
        "ok": cs.is_connected() and proto.origami.is_connected(),
        "connected": cs.is_connected(),
        "arboreal": cs.is_arboreal(),
        "curves": len(curves),
    }

    # (1) phi vanishes on every framed curve
    bad = [str(n) for n in curves if turning_number(proto.path_of(n)) % r]
    bad += [x.name for x in extra if spin_value(phi, x.framed) % r]
    rep.conditions["vanishing"] = {"ok": not bad, "nonzero": bad, "checked": len(curves) + len(extra)}

    # (2) D configuration and the companion
    wit = d_configuration_witness(r)
    comp = b(b_rep(r + 3, g))
    present = all(n in homology for n in wit + [comp])
    info = {"witness": [str(n) for n in wit], "companion": str(comp), "present": present}
    ok2 = False
    boundary = []
    if present:
        sub = {e for e in edges if e <= set(wit)}
        shape = sub == _expected_edges(wit)
        touches = {y for e in edges if comp in e for y in e if y != comp and y in set(wit)}
        boundary = [proto.homology(p) for p in chain_boundary(proto, wit[:-1])]
        hc = homology[comp]
        companion_is_boundary = any(h == hc or h == tuple(-t for t in hc) for h in boundary)
        ok2 = shape and touches == {wit[-1]} and len(boundary) == 3 and companion_is_boundary
        info.update(
            {
                "shape": shape,
                "companion_meets": sorted(str(t) for t in touches),
                "boundary_components": len(boundary),
                "companion_is_boundary": companion_is_boundary,
            }
        )
    info["ok"] = ok2
    rep.conditions["d_configuration"] = info

    # (3) a curve meeting d once
    dpath = proto.path_of(d)
    hd = proto.homology(dpath)
    meet = {}
    for n in curves:
        if n == d:
            continue
        cy = proto.cylinder_of[n]
        lo = abs(algebraic_intersection(dpath, cy))
        hi = transverse_passages(dpath, cy)
        meet[n] = (lo, hi)
    for x in extra:
        k = abs(symplectic_pairing(x.homology, hd))
        meet[x.name] = (k, k)
    once = sorted((str(n) for n, (lo, hi) in meet.items() if lo == hi == 1))
    d_in_boundary = any(h == hd or h == tuple(-t for t in hd) for h in boundary)
    rep.conditions["dual_curve"] = {
        "ok": bool(once) and d_in_boundary,
        "d": str(d),
        "d_is_boundary": d_in_boundary,
        "meets_once": once,
    }

    # (4) arboreal filling subnetwork of S cut along d
    disjoint = [n for n, (lo, hi) in meet.items() if hi == 0]
    candidates = [disjoint]
    chain_part = [n for n in disjoint if not isinstance(n, str) and n.kind in ("a", "a'")]
    alt = chain_part + [n for n in [b(3)] if n in disjoint] + [x.name for x in extra if x.name in disjoint]
    if set(alt) != set(disjoint):
        candidates.append(alt)
    tried = []
    ok4 = False
    for sub in candidates:
        sub_edges = {e for e in edges if e <= set(sub)}
        connected, arboreal = _is_tree(sub, sub_edges)
        vecs = [homology[n] for n in sub]
        form = [[symplectic_pairing(x, y) for y in vecs] for x in vecs]
        genus_rank = rank(form)
        spans_d = rank(vecs + [hd]) == rank(vecs) and any(hd)
        fills = connected and arboreal and genus_rank == 2 * g - 2 and spans_d
        tried.append(
            {
                "curves": [str(n) for n in sub],
                "connected": connected,
                "arboreal": arboreal,
                "form_rank": genus_rank,
                "d_in_span": spans_d,
                "ok": fills,
            }
        )
        if fills:
            ok4 = True
            break
    rep.conditions["cut_filling"] = {"ok": ok4, "disjoint_from_d": len(disjoint), "tried": tried}
    return rep


def salter_check(kappa: Sequence[int], spin=None, g: int = None, with_extra: bool = True) -> SalterReport:
    """Build the prototype and run the checklist, adding the completion curve in case OneTwo."""
    from .curve_system import build_prototype, build_curve_system

    cs = build_curve_system(kappa, spin, g)
    _guard(cs)
    proto = build_prototype(kappa, spin, g)
    extra = ()
    if with_extra and cs.labeling is LabelingCase.ONE_TWO:
        extra = (completion_curve(cs.g, cs.r),)
    return salter_conditions_check(proto, extra=extra)
