import pytest

from spinstrata.curve_system import (
    CurveName,
    LabelingCase,
    a,
    ap,
    b,
    b_index_set,
    build_curve_system,
    build_prototype,
    crossing_signs,
    labeling_case,
    orient_curves,
)
from spinstrata.errors import InvalidInput, UnsupportedCase
from spinstrata.origami import genus, singularity_profile
from spinstrata.salter import salter_check, salter_conditions_check
from spinstrata.spin import admissible_spins, arf_of_spin, partitions

from .oracles import partial_sum_indices, profile_by_angles


def sweep(genera):
    for g in genera:
        for kappa in partitions(2 * g - 2):
            for spin in admissible_spins(kappa):
                yield tuple(kappa), spin


@pytest.mark.parametrize(
    "kappa,spin,case",
    [
        ((2, 2), "even", LabelingCase.ONE_TWO),
        ((2, 2), "odd", LabelingCase.THREE),
        ((3, 3), None, LabelingCase.ONE_TWO),
        ((2, 2, 2), "even", LabelingCase.ONE_TWO),
        ((2, 2, 2), "odd", LabelingCase.THREE),
        ((2, 2, 2, 2), "even", LabelingCase.THREE),
        ((8,), "even", LabelingCase.THREE),
        ((4, 6), "odd", LabelingCase.ONE_TWO),
        ((12,), "even", LabelingCase.ONE_TWO),
    ],
)
def test_labeling_case(kappa, spin, case):
    assert labeling_case(kappa, spin) is case


def test_labeling_needs_spin_exactly_for_even_gcd():
    with pytest.raises(InvalidInput):
        labeling_case((2, 2))
    with pytest.raises(InvalidInput):
        labeling_case((3, 3), "odd")


@pytest.mark.parametrize("kappa", [(5, 7), (2, 2, 2), (12,), (1, 1, 2), (3, 3, 3, 3), (1, 2, 3, 4)])
def test_b_index_set_against_partial_sums(kappa):
    g = sum(kappa) // 2 + 1
    assert set(b_index_set(kappa)) == partial_sum_indices(kappa, g)


def test_b_index_examples():
    assert b_index_set((5, 7)) == {8, 3}
    assert b_index_set((2, 2, 2)) == {1, 3, 5}
    assert b_index_set((12,)) == {3}


def test_single_zero_has_one_face():
    for g in (3, 4, 5, 6):
        cs = build_curve_system((2 * g - 2,), "even")
        assert cs.face_sizes() == [4 * (2 * g - 1)]
        assert len(cs.curves) == 2 * g


@pytest.mark.parametrize("kappa,spin", list(sweep((3, 4))))
def test_curve_system_shape(kappa, spin):
    cs = build_curve_system(kappa, spin)
    g = cs.g
    assert len(cs.curves) == 2 * g - 1 + len(kappa)
    assert cs.is_connected() and cs.is_arboreal()
    # every zero of order k is the center of a face with 4(k+1) corners
    assert cs.face_sizes() == sorted(4 * (k + 1) for k in kappa)
    eps = orient_curves(cs)
    assert set(crossing_signs(cs, eps)) == {1}
    flipped = orient_curves(cs, seed=-1)
    assert all(flipped[n] == -eps[n] for n in cs.curves)
    assert set(crossing_signs(cs, flipped)) == {1}


def test_curve_names_round_trip():
    for n in (a(3), ap(2), b(7)):
        assert CurveName.parse(str(n)) == n


def test_phi_on_small_prototype(proto22):
    phi = proto22.spin_structure()
    assert phi.r == 2 and phi.g == 3
    assert phi.a_values == (0, 0, 0)
    assert phi.b_values == (0, 1, 0)
    assert proto22.labeling is LabelingCase.ONE_TWO


@pytest.mark.parametrize("kappa,spin", list(sweep((3, 4, 5))))
def test_prototype_sweep(kappa, spin):
    proto = build_prototype(kappa, spin)
    o = proto.origami
    g = proto.g
    assert genus(o) == g
    assert singularity_profile(o) == sorted(kappa)
    assert profile_by_angles(o.h, o.v) == sorted(kappa)
    phi = proto.spin_structure()
    if phi.r % 2 == 0:
        assert arf_of_spin(phi) == proto.system.spin


def test_small_genus_is_rejected():
    with pytest.raises(UnsupportedCase):
        build_curve_system((1, 1))
    with pytest.raises(InvalidInput):
        build_curve_system((2, 3), g=4)


# --- generation checklist -------------------------------------------------------

def test_checklist_all_conditions_on_ones():
    rep = salter_check((1,) * 8)
    assert rep.g == 5 and rep.r == 1
    assert rep.ok, rep.to_json()
    assert set(rep.conditions) == {"network", "vanishing", "d_configuration", "dual_curve", "cut_filling"}


@pytest.mark.parametrize(
    "kappa,spin",
    [((2, 2, 2, 2), "even"), ((2, 2, 2, 2), "odd"), ((1,) * 10, None), ((2,) * 5, "even"), ((3, 3, 3, 3), None)],
)
def test_checklist_passes(kappa, spin):
    assert salter_check(kappa, spin).ok


def test_completion_curve_is_needed_in_case_one_two():
    proto = build_prototype((2, 2, 2, 2), "odd")
    assert proto.labeling is LabelingCase.ONE_TWO
    bare = salter_conditions_check(proto)
    assert not bare.passed("cut_filling")
    assert bare.passed("d_configuration") and bare.passed("dual_curve") and bare.passed("vanishing")
    full = salter_check((2, 2, 2, 2), "odd")
    assert full.ok
    assert [x.name for x in full.extra] == ["c*(3,5)"]


def test_checklist_guard():
    with pytest.raises(UnsupportedCase):
        salter_check((2, 2, 2), "odd")
    with pytest.raises(UnsupportedCase):
        salter_check((4, 4), "even")
