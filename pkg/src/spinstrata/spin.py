"""
r-spin structures stored by their values on a geometric symplectic basis
(a_1..a_g, b_1..b_g), with the fiber value fixed to 1.  Parity is the Arf
invariant of the mod 2 quadratic form q(e) = phi(e) + 1 on basis curves.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import CapExceeded, InvalidInput, UnsupportedCase

DEFAULT_CAP = int(os.environ.get("SPINSTRATA_CAP", 10**8))


@dataclass(frozen=True)
class SpinStructure:
    r: int
    g: int
    values: tuple

    def __post_init__(self):
        if self.r < 1:
            raise InvalidInput("modulus must be positive")
        vals = tuple(int(x) % self.r for x in self.values)
        if len(vals) != 2 * self.g:
            raise InvalidInput(f"expected {2 * self.g} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @property
    def a_values(self) -> tuple:
        return self.values[: self.g]

    @property
    def b_values(self) -> tuple:
        return self.values[self.g :]

    def evaluate(self, homology: Sequence[int], alpha: int = 0) -> int:
        """Value on a framed class sum(x_i e_i) + alpha * fiber."""
        return (sum(x * y for x, y in zip(homology, self.values)) + alpha) % self.r

    def to_json(self) -> dict:
        return {"r": self.r, "g": self.g, "a": list(self.a_values), "b": list(self.b_values)}


def symplectic_pairing(x: Sequence[int], y: Sequence[int]) -> int:
    """<x, y> in the basis (a_1..a_g, b_1..b_g) with <a_i, b_i> = 1."""
    g = len(x) // 2
    return sum(x[i] * y[g + i] - x[g + i] * y[i] for i in range(g))


@dataclass(frozen=True)
class QuadraticForm:
    g: int
    values: tuple  # q on the basis vectors, bits

    def __post_init__(self):
        vals = tuple(int(x) & 1 for x in self.values)
        if len(vals) != 2 * self.g:
            raise InvalidInput("quadratic form needs 2g basis values")
        object.__setattr__(self, "values", vals)

    def __call__(self, x: Sequence[int]) -> int:
        g = self.g
        lin = sum(xi * qi for xi, qi in zip(x, self.values))
        cross = sum(x[i] * x[g + i] for i in range(g))
        return (lin + cross) & 1


def quadratic_form_of(phi: SpinStructure) -> QuadraticForm:
    if phi.r % 2:
        raise UnsupportedCase("odd r has no parity")
    return QuadraticForm(phi.g, tuple((v + 1) & 1 for v in phi.values))


def arf_of_form(q: QuadraticForm) -> int:
    g = q.g
    return sum(q.values[i] * q.values[g + i] for i in range(g)) & 1


def arf_by_majority(q: QuadraticForm) -> int:
    """The value q takes most often; equals the Arf invariant."""
    g = q.g
    zeros = 0
    for k in range(1 << (2 * g)):
        x = [(k >> j) & 1 for j in range(2 * g)]
        zeros += q(x) == 0
    return 0 if 2 * zeros > (1 << (2 * g)) else 1


def arf_of_spin(phi: SpinStructure) -> int:
    if phi.r % 2:
        raise UnsupportedCase(f"parity is undefined for odd r={phi.r}")
    g = phi.g
    a, b = phi.a_values, phi.b_values
    return sum((a[i] + 1) * (b[i] + 1) for i in range(g)) & 1


def parity_name(bit: int) -> str:
    return "odd" if bit else "even"


def parity_bit(spin) -> int:
    if spin in (0, 1):
        return int(spin)
    if spin in ("even", "odd"):
        return 0 if spin == "even" else 1
    raise InvalidInput(f"spin must be 'even' or 'odd', got {spin!r}")


def census_formulas(r: int, g: int) -> dict:
    out = {"total": r ** (2 * g)}
    if r % 2 == 0:
        half = (r // 2) ** (2 * g)
        out["even"] = half * 2 ** (g - 1) * (2**g + 1)
        out["odd"] = half * 2 ** (g - 1) * (2**g - 1)
    return out


def census(r: int, g: int, cap: int = DEFAULT_CAP, chunk: int = 1 << 20) -> tuple:
    """
    Exhaustive count of r-spin structures in genus g, split by parity for even r.

    Returns (total, even, odd); the split entries are None for odd r.
    """
    if r < 1 or g < 1:
        raise InvalidInput("need r >= 1 and g >= 1")
    total = r ** (2 * g)
    if total > cap:
        raise CapExceeded(f"r^(2g) = {total} exceeds the state cap {cap}")
    if r % 2:
        count = 0
        for start in range(0, total, chunk):
            count += min(chunk, total - start)
        return total, None, None
    odd = 0
    powers = [r**k for k in range(2 * g)]
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        arf = np.zeros(len(idx), dtype=np.int64)
        for i in range(g):
            a = (idx // powers[i]) % r
            b = (idx // powers[g + i]) % r
            arf += (a + 1) * (b + 1)
        odd += int(np.count_nonzero(arf & 1))
    return total, total - odd, odd


def all_spin_structures(r: int, g: int, cap: int = DEFAULT_CAP):
    total = r ** (2 * g)
    if total > cap:
        raise CapExceeded(f"r^(2g) = {total} exceeds the state cap {cap}")
    for k in range(total):
        vals = []
        for _ in range(2 * g):
            k, d = divmod(k, r)
            vals.append(d)
        yield SpinStructure(r, g, tuple(vals))


def reduce_spin(phi: SpinStructure, s: int) -> SpinStructure:
    if s < 1 or phi.r % s:
        raise InvalidInput(f"{s} does not divide {phi.r}")
    return SpinStructure(s, phi.g, phi.values)


def johnson_lift(x: Sequence[int], y: Sequence[int] = None, order=None) -> tuple:
    """
    Lift of a mod 2 homology class to framed homology mod 2.

    A basis curve e lifts to its framed class plus the fiber, and lifts of sums
    obey lift(x + y) = lift(x) + lift(y) + <x, y> fiber.  Returns
    (homology bits, fiber bit).  With y given, returns the lift of x + y.
    """
    if y is not None:
        hx, ax = johnson_lift(x)
        hy, ay = johnson_lift(y)
        s = tuple((i + j) & 1 for i, j in zip(hx, hy))
        return s, (ax + ay + symplectic_pairing(hx, hy)) & 1
    x = tuple(int(t) & 1 for t in x)
    n = len(x)
    terms = [k for k in (order if order is not None else range(n)) if x[k]]
    zero = (tuple([0] * n), 0)

    def add(acc, k):
        h, a = acc
        e = tuple(1 if j == k else 0 for j in range(n))
        return tuple((p + q) & 1 for p, q in zip(h, e)), (a + 1 + symplectic_pairing(h, e)) & 1

    return reduce(add, terms, zero)


def form_from_lift(phi: SpinStructure):
    """q(x) = phi(lift(x)) mod 2, evaluated through the lift."""

    def q(x):
        h, a = johnson_lift(x)
        return (sum(hi * v for hi, v in zip(h, phi.values)) + a) & 1

    return q


def genus_bound(r: int) -> int:
    """Smallest genus for which the generation theorem applies to modulus r."""
    return {4: 13, 8: 21}.get(r, 5)


def validate_partition(kappa: Sequence[int], g: int = None) -> tuple:
    kap = tuple(int(k) for k in kappa)
    if not kap or any(k < 1 for k in kap):
        raise InvalidInput("kappa must be a nonempty list of positive integers")
    total = sum(kap)
    if total % 2:
        raise InvalidInput(f"kappa sums to {total}, which is not of the form 2g-2")
    if g is not None and total != 2 * g - 2:
        raise InvalidInput(f"kappa sums to {total}, expected 2g-2 = {2 * g - 2}")
    return kap


def genus_of_partition(kappa: Sequence[int]) -> int:
    return sum(validate_partition(kappa)) // 2 + 1


def kappa_gcd(kappa: Sequence[int]) -> int:
    return reduce(math.gcd, kappa)


def component_census(kappa: Sequence[int], g: int = None, cap: int = DEFAULT_CAP) -> dict:
    kap = validate_partition(kappa, g)
    g = sum(kap) // 2 + 1
    r = kappa_gcd(kap)
    if r in (2 * g - 2, g - 1):
        raise UnsupportedCase(
            f"r = {r} is excluded for genus {g}: the stratum has a hyperelliptic "
            "component and infinitely many hyperelliptic components over Teichmuller space"
        )
    total, even, odd = census(r, g, cap=cap)
    formulas = census_formulas(r, g)
    out = {
        "kappa": list(kap),
        "g": g,
        "r": r,
        "genus_bound": genus_bound(r),
        "hypotheses_hold": g >= genus_bound(r),
        "census_total": total,
    }
    if r % 2:
        out.update({"components": total, "exact": True, "stabilizer_index": total})
    else:
        out.update(
            {
                "census_even": even,
                "census_odd": odd,
                "components_at_least": total,
                "even_at_least": formulas["even"],
                "odd_at_least": formulas["odd"],
                "exact": False,
                "stabilizer_index": {"even": formulas["even"], "odd": formulas["odd"]},
            }
        )
    return out


def partitions(n: int, smallest: int = 1):
    """Partitions of n into positive parts, each listed in increasing order."""
    if n == 0:
        yield ()
        return
    for k in range(smallest, n + 1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def admissible_spins(kappa: Sequence[int]) -> tuple:
    """Spin parities to pass alongside kappa: both for even gcd, none otherwise."""
    return ("even", "odd") if kappa_gcd(validate_partition(kappa)) % 2 == 0 else (None,)
