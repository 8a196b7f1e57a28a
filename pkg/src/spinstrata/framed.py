"""
Dehn twists acting on framed homology mod r and on the integral symplectic lattice.

A framed class is (x, m): homology coordinates x in the standard basis plus a
fiber coefficient m, meaning  sum x_i e_i-hat + m * fiber  where e_i-hat are
the tangent-framed lifts of the basis curves.  The fiber coefficient of a
named curve is read off the reference prototype of the stratum with a single
zero, where winding numbers are defined mod 2g-2.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .curve_system import (
    CurveName,
    LabelingCase,
    Prototype,
    a,
    ap,
    b,
    build_prototype,
    normalize,
)
from .errors import CapExceeded, InvalidInput
from .spin import DEFAULT_CAP, QuadraticForm, SpinStructure, symplectic_pairing
from .winding import turning_number

@dataclass(frozen=True)
class FramedClass:
    r: int
    homology: tuple
    alpha: int

    def __post_init__(self):
        object.__setattr__(self, "homology", tuple(int(x) % self.r for x in self.homology))
        object.__setattr__(self, "alpha", int(self.alpha) % self.r)

    @property
    def g(self) -> int:
        return len(self.homology) // 2

    def __neg__(self):
        return FramedClass(self.r, tuple(-x for x in self.homology), -self.alpha)

    def __add__(self, other):
        _same_modulus(self.r, other.r)
        return FramedClass(
            self.r, tuple(x + y for x, y in zip(self.homology, other.homology)), self.alpha + other.alpha
        )

    def scaled(self, k: int) -> "FramedClass":
        return FramedClass(self.r, tuple(k * x for x in self.homology), k * self.alpha)

    def reduce(self, s: int) -> "FramedClass":
        if self.r % s:
            raise InvalidInput(f"{s} does not divide {self.r}")
        return FramedClass(s, self.homology, self.alpha)

    def vector(self) -> tuple:
        return self.homology + (self.alpha,)

    def to_json(self) -> dict:
        return {"r": self.r, "homology": list(self.homology), "alpha": self.alpha}


def _same_modulus(r1, r2):
    if r1 != r2:
        raise InvalidInput(f"modulus mismatch: {r1} vs {r2}")


@dataclass(frozen=True)
class TwistGenerator:
    name: CurveName
    homology: tuple  # integer coordinates
    framed: FramedClass

    @property
    def r(self) -> int:
        return self.framed.r

    def reduce(self, s: int) -> "TwistGenerator":
        return TwistGenerator(self.name, self.homology, self.framed.reduce(s))


# --- reference data -------------------------------------------------------------

def reference_kappa_spin(g: int, case: LabelingCase):
    """A single-zero stratum whose curve system uses the given labeling."""
    for spin in ("even", "odd"):
        from .curve_system import labeling_case

        if labeling_case((2 * g - 2,), spin, g) is case:
            return (2 * g - 2,), spin
    raise InvalidInput("no reference stratum")  # pragma: no cover


@lru_cache(maxsize=None)
def reference_prototype(g: int, case: LabelingCase) -> Prototype:
    kap, spin = reference_kappa_spin(g, case)
    return build_prototype(kap, spin, g)


@lru_cache(maxsize=None)
def _reference_windings(g: int, case: LabelingCase) -> tuple:
    proto = reference_prototype(g, case)
    return tuple(turning_number(p) for p in proto.basis_paths())


@lru_cache(maxsize=None)
def _integral_data(name: CurveName, g: int, case: LabelingCase) -> tuple:
    proto = reference_prototype(g, case)
    p = proto.path_of(name)
    x = proto.homology(p)
    wn = turning_number(p)
    base = _reference_windings(g, case)
    m = wn - sum(xi * wi for xi, wi in zip(x, base))
    return x, m


def framed_class_of(name, g: int, case: LabelingCase, r: int = None) -> FramedClass:
    name = normalize(name, g, case)
    x, m = _integral_data(name, g, case)
    return FramedClass(r or 2 * g - 2, x, m)


def integral_homology(name, g: int, case: LabelingCase) -> tuple:
    name = normalize(name, g, case)
    return _integral_data(name, g, case)[0]


def twist_generator(name, g: int, case: LabelingCase, r: int = None) -> TwistGenerator:
    name = normalize(name, g, case)
    x, m = _integral_data(name, g, case)
    return TwistGenerator(name, x, FramedClass(r or 2 * g - 2, x, m))


def all_basic_names(g: int) -> list:
    return [a(i) for i in range(1, g + 1)] + [ap(k) for k in range(1, g)] + [b(t) for t in range(1, 2 * g - 1)]


def humphries_generators(g: int, case: LabelingCase, r: int) -> list:
    return [twist_generator(n, g, case, r) for n in all_basic_names(g)]


# --- actions ----------------------------------------------------------------------

def twist_transvection(x: FramedClass, t: TwistGenerator, power: int = 1) -> FramedClass:
    """x + power * <x, t> * t-hat."""
    _same_modulus(x.r, t.r)
    k = power * symplectic_pairing(x.homology, t.homology)
    return x + t.framed.scaled(k)


def spin_value(phi: SpinStructure, x: FramedClass) -> int:
    return (sum(xi * v for xi, v in zip(x.homology, phi.values)) + x.alpha) % phi.r


def spin_pullback(phi: SpinStructure, t: TwistGenerator, power: int = 1) -> SpinStructure:
    """The structure x -> phi(T(t)^power x)."""
    if t.r % phi.r:
        raise InvalidInput(f"modulus mismatch: {t.r} vs {phi.r}")
    tt = t.reduce(phi.r) if t.r != phi.r else t
    val = spin_value(phi, tt.framed) * power
    g = phi.g
    h = tt.homology
    new = list(phi.values)
    for i in range(g):
        new[i] += h[g + i] * val  # <a_i, t>
        new[g + i] -= h[i] * val  # <b_i, t>
    return SpinStructure(phi.r, g, tuple(new))


def orbit_bfs(phi0: SpinStructure, generators: Sequence[TwistGenerator], cap: int = DEFAULT_CAP) -> set:
    r, g = phi0.r, phi0.g
    gens = []
    for t in generators:
        tt = t.reduce(r) if t.r != r else t
        gens.append((np.array(tt.homology, dtype=np.int64), tt.framed.alpha))
    seen = {phi0.values}
    queue = deque([phi0.values])
    while queue:
        vals = queue.popleft()
        arr = np.array(vals, dtype=np.int64)
        for h, alpha in gens:
            val = int(arr @ h + alpha) % r
            if val == 0:
                continue
            delta = np.concatenate([h[g:], -h[:g]]) * val
            for sgn in (1, -1):
                nv = tuple(int(z) for z in (arr + sgn * delta) % r)
                if nv not in seen:
                    seen.add(nv)
                    if len(seen) > cap:
                        raise CapExceeded(f"orbit exceeds the state cap {cap}")
                    queue.append(nv)
    return seen


def orbit_partition(r: int, g: int, generators: Sequence[TwistGenerator], cap: int = DEFAULT_CAP) -> list:
    """Sizes of all orbits on the r-spin structures of genus g, largest first."""
    from .spin import all_spin_structures

    total = r ** (2 * g)
    if total > cap:
        raise CapExceeded(f"r^(2g) = {total} exceeds the state cap {cap}")
    remaining = set(s.values for s in all_spin_structures(r, g, cap))
    sizes = []
    while remaining:
        start = min(remaining)
        orb = orbit_bfs(SpinStructure(r, g, start), generators, cap)
        remaining -= orb
        sizes.append(len(orb))
    return sorted(sizes, reverse=True)


def shear_realization(proto: Prototype) -> list:
    """
    Shear each cylinder of a prototype once.  Every shear should return an
    isomorphic origami, and its marking letter should fix the spin structure.
    """
    from .origami import are_isomorphic, shear_cylinder, shear_letter

    g, case = proto.g, proto.labeling
    phi = proto.spin_structure()
    rows = []
    for name in sorted(proto.cylinder_of, key=lambda n: (n.kind, n.i, n.j or 0)):
        sheared = shear_cylinder(proto.origami, proto.cylinder_of[name])
        letter, e = shear_letter(name)
        t = twist_generator(letter, g, case, 2 * g - 2)
        rows.append(
            {
                "curve": str(name),
                "isomorphic": are_isomorphic(proto.origami, sheared) is not None,
                "letter": [str(letter), e],
                "stabilizes": spin_pullback(phi, t, e) == phi,
            }
        )
    return rows


# --- symplectic representation ----------------------------------------------------

def transvection_matrix(h: Sequence[int], power: int = 1) -> np.ndarray:
    """Matrix of x -> x + power * <x, h> h on column vectors."""
    n = len(h)
    g = n // 2
    hv = np.array(h, dtype=object)
    # <x, h> = sum_i x_i h_{g+i} - x_{g+i} h_i
    row = np.concatenate([hv[g:], -hv[:g]])
    return np.identity(n, dtype=object) + power * np.outer(hv, row)


def standard_form(g: int) -> np.ndarray:
    J = np.zeros((2 * g, 2 * g), dtype=object)
    for i in range(g):
        J[i, g + i] = 1
        J[g + i, i] = -1
    return J


def is_symplectic(M: np.ndarray) -> bool:
    g = M.shape[0] // 2
    J = standard_form(g)
    return bool((M.T.dot(J).dot(M) == J).all())


def preserves_quadratic_form(M: np.ndarray, q: QuadraticForm) -> bool:
    n = 2 * q.g
    M2 = np.array(M, dtype=np.int64) % 2
    for k in range(1 << n):
        x = np.array([(k >> j) & 1 for j in range(n)], dtype=np.int64)
        y = M2.dot(x) % 2
        if q(list(y)) != q(list(x)):
            return False
    return True


def mod2_orbit(start: Sequence[int], matrices: Iterable[np.ndarray]) -> set:
    mats = [np.array(M, dtype=np.int64) % 2 for M in matrices]
    s0 = tuple(int(x) % 2 for x in start)
    seen = {s0}
    queue = deque([s0])
    while queue:
        x = np.array(queue.popleft(), dtype=np.int64)
        for M in mats:
            y = tuple(int(z) for z in M.dot(x) % 2)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def level_set(q: QuadraticForm, value: int) -> set:
    n = 2 * q.g
    out = set()
    for k in range(1, 1 << n):
        x = tuple((k >> j) & 1 for j in range(n))
        if q(x) == value:
            out.add(x)
    return out


def mod2_monodromy_report(proto: Prototype) -> dict:
    """
    Mod 2 images of the twists in the curve system.  For odd r: is the action
    on nonzero vectors transitive?  For even r: do the generators preserve the
    mod 2 form of phi, and is the orbit of e_1 its whole level set?
    """
    from .spin import quadratic_form_of, reduce_spin

    g, r = proto.g, proto.r
    mats = [transvection_matrix(proto.homology(proto.path_of(n))) for n in proto.system.curves]
    e1 = [1] + [0] * (2 * g - 1)
    orbit = mod2_orbit(e1, mats)
    out = {"g": g, "r": r, "generators": len(mats), "orbit_of_e1": len(orbit)}
    if r % 2:
        out["nonzero"] = 2 ** (2 * g) - 1
        out["transitive"] = len(orbit) == out["nonzero"]
        out["ok"] = out["transitive"]
        return out
    q = quadratic_form_of(reduce_spin(proto.spin_structure(), 2))
    level = level_set(q, q(e1))
    out["preserves_form"] = all(preserves_quadratic_form(M, q) for M in mats)
    out["level_set"] = len(level)
    out["orbit_is_level_set"] = orbit == level
    out["ok"] = out["preserves_form"] and out["orbit_is_level_set"]
    return out
