"""
Acceptance suite: one check per numbered criterion, each printed as a
PASS/FAIL line with its wall time and budget.  Run under pytest (lines appear
in the terminal summary) or directly with `python -m tests.test_acceptance`.
"""

import functools
import random
import time

import pytest

from spinstrata.curve_system import LabelingCase, ap, b, build_prototype, coherence_families
from spinstrata.errors import UnsupportedCase
from spinstrata.euclid import euclidean_trace, verify_trace
from spinstrata.framed import humphries_generators, mod2_monodromy_report, orbit_partition, shear_realization
from spinstrata.origami import HORIZONTAL, VERTICAL, cylinders, from_cycles, l_origami, singularity_profile, torus
from spinstrata.salter import salter_check
from spinstrata.spin import admissible_spins, arf_of_spin, census, component_census, partitions
from spinstrata.winding import (
    coherence_check,
    coherent_signs,
    core_path,
    leaves,
    random_twisted_path,
    turning_number,
    twist_linearity_check,
    vertex_loop,
)

from .oracles import census_oracle, euclid_remainders, gcd_all, profile_by_angles

RESULTS = []


def criterion(number, title, budget):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            status, note, elapsed = "PASS", "", None
            try:
                elapsed = fn(*args, **kwargs)
                if elapsed is None:
                    elapsed = time.perf_counter() - t0
                if elapsed > budget:
                    status, note = "FAIL", " over budget"
            except Exception as e:
                status, note = "FAIL", f" {type(e).__name__}: {e}".rstrip()
                raise
            finally:
                if elapsed is None:
                    elapsed = time.perf_counter() - t0
                RESULTS.append(f"criterion {number:2d} {status}  {title}  {elapsed:.4f}s (budget {budget:g}s){note}")
            assert elapsed <= budget, f"took {elapsed:.3f}s, budget {budget}s"

        return run

    return wrap


def strata(genera):
    for g in genera:
        for kappa in partitions(2 * g - 2):
            for spin in admissible_spins(kappa):
                yield tuple(kappa), spin


@criterion(1, "singularity profiles of the L and the torus", 1e-3)
def test_criterion_01_singularity_oracle():
    o, t = l_origami(), torus()
    t0 = time.perf_counter()
    p_l = singularity_profile(o)
    p_t = singularity_profile(t)
    elapsed = time.perf_counter() - t0
    assert p_l == [2] == profile_by_angles(o.h, o.v)
    assert p_t == [] == profile_by_angles(t.h, t.v)
    return elapsed


@criterion(2, "prototype sweep g=4..8", 60)
def test_criterion_02_prototype_sweep():
    count = 0
    for kappa, spin in strata(range(4, 9)):
        proto = build_prototype(kappa, spin)
        assert singularity_profile(proto.origami) == sorted(kappa), kappa
        assert profile_by_angles(proto.origami.h, proto.origami.v) == sorted(kappa), kappa
        phi = proto.spin_structure()
        if phi.r % 2 == 0:
            assert arf_of_spin(phi) == (1 if spin == "odd" else 0), (kappa, spin)
        count += 1
    assert count > 0


@criterion(3, "spin structure census", 10)
def test_criterion_03_census():
    for g, r in [(2, 2), (3, 2), (3, 4), (4, 2), (4, 6), (5, 2), (5, 4)]:
        assert census(r, g) == census_oracle(r, g), (g, r)
    assert census(2, 2) == (16, 10, 6)
    assert census(4, 3) == (4096, 2304, 1792)


@criterion(4, "twist orbits on r-spin structures", 30)
def test_criterion_04_orbits():
    for g, r, expected in [(4, 3, [6561]), (4, 2, [136, 120]), (3, 4, [2304, 1792])]:
        gens = humphries_generators(g, LabelingCase.ONE_TWO, 2 * g - 2)
        assert orbit_partition(r, g, gens) == expected, (g, r)


@criterion(5, "winding number properties", 10)
def test_criterion_05_winding():
    o = l_origami()
    for direction in (HORIZONTAL, VERTICAL):
        for cy in cylinders(o, direction):
            assert turning_number(core_path(o, cy)) == 0
    quad = from_cycles(4, [(0, 1), (2, 3)], [(0, 2), (1, 3)])
    assert turning_number(vertex_loop(quad, 0)) == 1
    rng = random.Random(2024)
    for kappa, spin in strata([4]):
        proto = build_prototype(kappa, spin)
        po = proto.origami
        for cyc in po.vertices():
            assert turning_number(vertex_loop(po, cyc[0])) == len(cyc), kappa
        r = proto.r
        cyls = list(proto.cylinder_of.values())
        start = proto.basis_paths()
        done = 0
        while done < 100:
            p = random_twisted_path(start[rng.randrange(len(start))], cyls, rng)
            cy = cyls[rng.randrange(len(cyls))]
            if not leaves(p, cy):
                continue
            assert twist_linearity_check(p, cy, r), kappa
            done += 1
        for paths, chi in coherence_families(proto):
            assert coherence_check(paths, chi, r), kappa
        pants = [proto.path_of(b(2)), proto.path_of(ap(2)), proto.path_of(b(3))]
        (signs,) = coherent_signs([proto.homology(p) for p in pants])
        oriented = [p if s > 0 else p.reverse() for p, s in zip(pants, signs)]
        assert coherence_check(oriented, -1, r), kappa


@criterion(6, "shear realization g=4..6", 30)
def test_criterion_06_shear():
    for kappa, spin in strata(range(4, 7)):
        rows = shear_realization(build_prototype(kappa, spin))
        assert rows and all(x["isomorphic"] and x["stabilizes"] for x in rows), kappa


def _check_trace(kappa, spin=None):
    tr = euclidean_trace(kappa, spin)
    assert tr.stages, kappa
    assert tr.stages[-1].r_next == gcd_all(kappa), kappa
    for st in tr.stages:
        Q, R = euclid_remainders(st.r_j, st.k_next)
        assert (st.Q, st.R) == (Q, R), kappa
        for l in range(1, len(st.Q) + 1):
            assert abs(st.y[l] - st.y_prime[l - 1]) == st.R[l - 1], (kappa, st.j, l)
    assert tr.certified == tr.targets(), kappa
    assert verify_trace(tr)["ok"], kappa
    return tr


@criterion(7, "Euclidean reduction and certificate words", 60)
def test_criterion_07_euclid():
    tr = _check_trace((5, 7))
    assert tr.g == 7
    assert tr.stages[0].Q == [1, 2, 2] and tr.stages[0].R == [2, 1, 0]
    for spin in ("even", "odd"):
        assert _check_trace((2, 4), spin).g == 4
        assert _check_trace((2, 6, 6), spin).g == 8
    for g in (5, 6, 7):
        for kappa in partitions(2 * g - 2):
            r = gcd_all(kappa)
            if len(kappa) > 1 and r < g - 2:
                for spin in (("even", "odd") if r % 2 == 0 else (None,)):
                    _check_trace(tuple(kappa), spin)


@criterion(8, "generation checklist on (r,...,r)", 10)
def test_criterion_08_checklist():
    for r in (1, 2, 3):
        for g in range(5, 9):
            if (2 * g - 2) % r:
                continue
            kappa = (r,) * ((2 * g - 2) // r)
            for spin in (("even", "odd") if r % 2 == 0 else (None,)):
                rep = salter_check(kappa, spin)
                assert rep.ok, (kappa, spin, rep.to_json()["conditions"])
    for kappa, spin in [((2, 2, 2), "even"), ((4, 4), "odd"), ((1, 1, 1, 1), None), ((6, 6), "even")]:
        with pytest.raises(UnsupportedCase):
            salter_check(kappa, spin)


@criterion(9, "mod 2 symplectic images at g=5", 60)
def test_criterion_09_mod2():
    for kappa, spin in strata([5]):
        rep = mod2_monodromy_report(build_prototype(kappa, spin))
        if rep["r"] % 2:
            assert rep["transitive"] and rep["orbit_of_e1"] == 2**10 - 1, kappa
        else:
            assert rep["preserves_form"] and rep["orbit_is_level_set"], (kappa, spin)


@criterion(10, "component census g=4,5", 5)
def test_criterion_10_components():
    for g in (4, 5):
        for kappa in partitions(2 * g - 2):
            r = gcd_all(kappa)
            if r in (2 * g - 2, g - 1):
                with pytest.raises(UnsupportedCase, match="hyperelliptic"):
                    component_census(kappa)
                continue
            out = component_census(kappa)
            total, even, odd = census_oracle(r, g)
            if r % 2:
                assert out["components"] == total, kappa
            else:
                assert (out["census_even"], out["census_odd"]) == (even, odd), kappa
                assert out["components_at_least"] == total, kappa


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for t in tests:
        try:
            t()
        except Exception:
            pass
    print("\n".join(RESULTS))
    return 0 if all(" PASS " in line for line in RESULTS) else 1


if __name__ == "__main__":
    raise SystemExit(main())
