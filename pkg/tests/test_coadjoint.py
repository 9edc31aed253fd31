import numpy as np
import pytest
from hypothesis import given, strategies as st

from ncqm.coadjoint import (
    DualVector,
    OrbitLabel,
    coadjoint_act,
    coadjoint_matrix_check,
    invariants,
    orbit_rank,
    orbit_zero_section,
)
from ncqm.group_core import TransElement, compose_trans, random_trans

DOUBLE = (1.0, 0.7)
TRIPLE = (1.3, 0.7, -0.4)
coord = st.floats(-3, 3, allow_nan=False)


def _random_dual(rng, arity, nonzero=False):
    x = rng.uniform(-2, 2, 4 + arity)
    if nonzero:
        x[4:] = rng.choice([-1, 1], arity) * rng.uniform(0.2, 2, arity)
    return DualVector(x)


def test_identity_leaves_f_unchanged():
    F = DualVector((1, 2, 3, 4, 5, 6))
    assert coadjoint_act(TransElement.identity(DOUBLE), F) == F


def test_hand_value_double():
    g = TransElement.from_a_coords((2, 0, 0, 0, 0, 0), (1, 1))
    out = coadjoint_act(g, DualVector((0, 0, 0, 0, 1, 1)))
    assert out.coords == (0, -1, 1, 0, 1, 1)


def test_arity_mismatch():
    with pytest.raises(ValueError, match="arity"):
        coadjoint_act(TransElement.identity(TRIPLE), DualVector((0,) * 6))


@pytest.mark.parametrize("ext", [DOUBLE, TRIPLE])
def test_action_law(ext):
    rng = np.random.default_rng(0)
    for _ in range(500):
        g, h = random_trans(rng, ext), random_trans(rng, ext)
        F = _random_dual(rng, len(ext))
        lhs = coadjoint_act(g, coadjoint_act(h, F)).as_array()
        rhs = coadjoint_act(compose_trans(g, h), F).as_array()
        assert np.abs(lhs - rhs).max() < 1e-12


@pytest.mark.parametrize("ext", [DOUBLE, TRIPLE])
def test_closed_form_matches_conjugation(ext):
    rng = np.random.default_rng(1)
    worst = max(coadjoint_matrix_check(random_trans(rng, ext), _random_dual(rng, len(ext)))
                for _ in range(500))
    assert worst < 1e-12
    F = _random_dual(rng, len(ext))
    # the triple case round-trips X1 through -2/alpha, so allow one ulp
    assert coadjoint_matrix_check(TransElement.identity(ext), F) <= 4e-16


def test_invariants():
    assert invariants(DualVector((1, 2, 3, 4, 5, 6))) == OrbitLabel(5, 6)
    assert invariants(DualVector((0, 0, 0, 0, 1.5, -2, 3))).as_tuple() == (1.5, -2, 3)


@pytest.mark.parametrize("ext", [DOUBLE, TRIPLE])
@given(data=st.lists(coord, min_size=14, max_size=14))
def test_invariants_bit_preserved(ext, data):
    n = 4 + len(ext)
    g = TransElement.from_a_coords(data[:n], ext)
    F = DualVector(data[7:7 + n])
    assert invariants(coadjoint_act(g, F)) == invariants(F)


@pytest.mark.parametrize("ext", [DOUBLE, TRIPLE])
def test_zero_section(ext):
    rng = np.random.default_rng(2)
    F0 = DualVector((0, 0, 0, 0, 0.8, -1.1, 0.5)[: 4 + len(ext)])
    g = orbit_zero_section(F0, ext)
    assert g.a_coords()[:4] == (0, 0, 0, 0)
    for _ in range(100):
        F = _random_dual(rng, len(ext), nonzero=True)
        image = coadjoint_act(orbit_zero_section(F, ext), F).as_array()
        assert np.abs(image[:4]).max() < 1e-12
        assert tuple(image[4:]) == F.coords[4:]


def test_zero_section_hand_case():
    F = DualVector((1, 0, 0, 0, 1, 1))
    g = orbit_zero_section(F, (1, 1))
    assert np.allclose(coadjoint_act(g, F).coords, (0, 0, 0, 0, 1, 1), atol=1e-15)


def test_zero_section_refuses_degenerate_orbit():
    with pytest.raises(ValueError, match="vanishing invariant"):
        orbit_zero_section(DualVector((1, 0, 0, 0, 0, 1)), DOUBLE)


@pytest.mark.parametrize("ext", [DOUBLE, TRIPLE])
def test_generic_orbits_are_four_dimensional(ext):
    rng = np.random.default_rng(3)
    for _ in range(100):
        F = _random_dual(rng, len(ext), nonzero=True)
        point = DualVector((0, 0, 0, 0, *F.coords[4:]))
        assert orbit_rank(point, ext) == 4
    assert orbit_rank(DualVector((0,) * (4 + len(ext))), ext) == 0
