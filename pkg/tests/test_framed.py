import random

import numpy as np
import pytest

from spinstrata.curve_system import LabelingCase, a, ap, b, build_prototype
from spinstrata.errors import CapExceeded, InvalidInput
from spinstrata.framed import (
    FramedClass,
    TwistGenerator,
    framed_class_of,
    humphries_generators,
    is_symplectic,
    mod2_monodromy_report,
    orbit_bfs,
    orbit_partition,
    preserves_quadratic_form,
    shear_realization,
    spin_pullback,
    spin_value,
    transvection_matrix,
    twist_generator,
    twist_transvection,
)
from spinstrata.spin import QuadraticForm, SpinStructure, arf_of_spin, symplectic_pairing

from .oracles import census_oracle

ONE_TWO = LabelingCase.ONE_TWO
THREE = LabelingCase.THREE


def rand_class(rng, r, g):
    return FramedClass(r, tuple(rng.randrange(r) for _ in range(2 * g)), rng.randrange(r))


def test_framed_arithmetic():
    x = FramedClass(4, (1, 2, 3, 5), 7)
    assert x.homology == (1, 2, 3, 1) and x.alpha == 3
    assert (x + (-x)).vector() == (0, 0, 0, 0, 0)
    assert x.scaled(2).vector() == (2, 0, 2, 2, 2)
    assert x.reduce(2).vector() == (1, 0, 1, 1, 1)
    with pytest.raises(InvalidInput):
        x.reduce(3)
    with pytest.raises(InvalidInput):
        x + FramedClass(6, (0, 0, 0, 0), 0)


@pytest.mark.parametrize("g,case", [(3, ONE_TWO), (4, THREE), (5, ONE_TWO)])
def test_transvection_inverse(g, case):
    rng = random.Random(g)
    r = 2 * g - 2
    gens = humphries_generators(g, case, r)
    for _ in range(50):
        x = rand_class(rng, r, g)
        t = rng.choice(gens)
        y = twist_transvection(x, t)
        assert twist_transvection(y, t, -1) == x
        assert twist_transvection(x, t, 3) == twist_transvection(twist_transvection(twist_transvection(x, t), t), t)


def test_twisting_along_itself_is_trivial():
    t = twist_generator(b(3), 4, ONE_TWO)
    assert twist_transvection(t.framed, t) == t.framed


def test_pullback_flips_a_value_in_genus_two():
    # a hand-made twist about b_1 with phi(b_1) = 1: phi(a_1) changes by <a_1, b_1> phi(b_1)
    phi = SpinStructure(2, 2, (0, 0, 1, 0))
    t = TwistGenerator(b(1), (0, 0, 1, 0), FramedClass(2, (0, 0, 1, 0), 0))
    new = spin_pullback(phi, t)
    assert new.values == (1, 0, 1, 0)
    s = TwistGenerator(b(1), (0, 0, 1, 0), FramedClass(2, (0, 0, 1, 0), 1))
    assert spin_pullback(phi, s).values == phi.values


@pytest.mark.parametrize("g,case", [(3, ONE_TWO), (4, THREE), (4, ONE_TWO)])
def test_pullback_agrees_with_transvected_evaluation(g, case):
    rng = random.Random(11)
    r = 2 * g - 2
    gens = humphries_generators(g, case, r)
    for _ in range(60):
        phi = SpinStructure(r, g, tuple(rng.randrange(r) for _ in range(2 * g)))
        t = rng.choice(gens)
        k = rng.choice((1, -1, 2))
        pulled = spin_pullback(phi, t, k)
        x = rand_class(rng, r, g)
        assert spin_value(pulled, x) == spin_value(phi, twist_transvection(x, t, k))


@pytest.mark.parametrize(
    "kappa,spin", [((2, 2), "even"), ((2, 4), "odd"), ((3, 3), None), ((2, 2, 2), "even"), ((1, 3, 4), None)]
)
def test_prototype_structure_is_fixed_by_its_twists(kappa, spin):
    proto = build_prototype(kappa, spin)
    phi = proto.spin_structure()
    for n in proto.system.curves:
        t = twist_generator(n, proto.g, proto.labeling)
        assert spin_value(phi, t.framed.reduce(phi.r)) == 0
        assert spin_pullback(phi, t) == phi


def test_framed_class_of_normalizes_names():
    g = 4
    assert framed_class_of(b(2 * g - 2 + 3), g, ONE_TWO) == framed_class_of(b(3), g, ONE_TWO)
    assert framed_class_of(a(1), g, ONE_TWO).homology[0] % 6 == 1


@pytest.mark.parametrize("g,r,expected", [(4, 3, [6561]), (4, 2, [136, 120]), (3, 4, [2304, 1792])])
def test_orbit_partition(g, r, expected):
    gens = humphries_generators(g, ONE_TWO, 2 * g - 2)
    sizes = orbit_partition(r, g, gens)
    assert sizes == expected
    total, even, odd = census_oracle(r, g)
    assert sum(sizes) == total
    if even is not None:
        assert sorted(sizes) == sorted([even, odd])


def test_orbit_cap():
    gens = humphries_generators(4, ONE_TWO, 6)
    with pytest.raises(CapExceeded):
        orbit_partition(3, 4, gens, cap=1000)
    with pytest.raises(CapExceeded):
        orbit_bfs(SpinStructure(3, 4, (1,) * 8), gens, cap=100)


def test_orbits_preserve_parity():
    g, r = 3, 4
    gens = humphries_generators(g, ONE_TWO, 2 * g - 2)
    phi = SpinStructure(r, g, (0, 1, 2, 3, 0, 1))
    orb = orbit_bfs(phi, gens)
    assert {arf_of_spin(SpinStructure(r, g, v)) for v in orb} == {arf_of_spin(phi)}


def test_transvection_matrices_are_symplectic():
    rng = random.Random(3)
    for g in (2, 3, 4):
        for _ in range(20):
            h = [rng.randrange(-3, 4) for _ in range(2 * g)]
            M = transvection_matrix(h)
            assert is_symplectic(M)
            x = [rng.randrange(-5, 6) for _ in range(2 * g)]
            y = M.dot(np.array(x, dtype=object))
            expect = [xi + symplectic_pairing(x, h) * hi for xi, hi in zip(x, h)]
            assert list(y) == expect
    assert not is_symplectic(np.array([[1, 1], [0, 2]], dtype=object))


def test_transvection_preserves_form_exactly_when_q_is_one():
    q = QuadraticForm(2, (1, 0, 1, 1))
    for k in range(1, 16):
        h = [(k >> j) & 1 for j in range(4)]
        assert preserves_quadratic_form(transvection_matrix(h), q) == (q(h) == 1)
    # a concrete failure: h = a_2 has q(h) = 0
    assert q([0, 1, 0, 0]) == 0
    assert not preserves_quadratic_form(transvection_matrix([0, 1, 0, 0]), q)


@pytest.mark.parametrize("kappa,spin", [((2, 2), "even"), ((2, 2), "odd"), ((3, 3), None), ((1, 1, 2), None)])
def test_mod2_monodromy(kappa, spin):
    rep = mod2_monodromy_report(build_prototype(kappa, spin))
    assert rep["ok"], rep
    if rep["r"] % 2:
        assert rep["orbit_of_e1"] == 2 ** (2 * rep["g"]) - 1
    else:
        assert rep["preserves_form"] and rep["orbit_is_level_set"]


@pytest.mark.parametrize("kappa,spin", [((2, 2), "even"), ((4,), "odd"), ((1, 1, 2), None), ((2, 2, 2), "odd")])
def test_shear_realization(kappa, spin):
    rows = shear_realization(build_prototype(kappa, spin))
    assert rows
    assert all(r["isomorphic"] and r["stabilizes"] for r in rows)
