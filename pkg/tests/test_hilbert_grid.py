import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ncqm.group_core import (
    GalileiElement,
    GalileiParams,
    TransElement,
    compose_galilei,
    compose_trans,
    random_galilei,
)
from ncqm.hilbert_grid import (
    AS_PRINTED,
    REPRESENTATION,
    GridFunction,
    GridSpec,
    apply_double,
    apply_galilei_config,
    apply_galilei_momentum,
    apply_triple,
    fourier,
    free_evolution,
    gaussian,
    grid_aligned,
    inner,
    inv_fourier,
    rotate,
    shift,
)

SPEC = GridSpec(128, 10.0)
PARAMS = GalileiParams(1.3, 0.7)
F = gaussian(SPEC, (0.5, -0.3), 1.0)
G = gaussian(SPEC, (-0.4, 0.2), 0.8, momentum=(0.3, -0.5))


def _small_galilei(rng, b=True, rotations=True):
    g = random_galilei(rng, angle=False, b=b)
    angle = math.pi / 2 * int(rng.integers(4)) if rotations else 0.0
    return GalileiElement(g.theta, g.phi, angle, g.b / 2,
                          tuple(np.multiply(g.v, 0.5)), tuple(np.multiply(g.a, 0.5)))


# --- grid and Fourier -----------------------------------------------------

def test_spec_validation():
    with pytest.raises(ValueError, match="power of two"):
        GridSpec(100, 10.0)
    with pytest.raises(ValueError, match="power of two"):
        GridSpec(4, 10.0)
    with pytest.raises(ValueError, match="positive"):
        GridSpec(64, 0.0)
    assert SPEC.h == pytest.approx(20 / 128)
    assert SPEC.dk == pytest.approx(math.pi / 10)
    assert SPEC.k.max() < math.pi / SPEC.h <= -SPEC.k.min() + 1e-12


def test_inner_product_basics():
    assert inner(F, F).real == pytest.approx(1.0, abs=1e-6)
    assert inner(F, G) == pytest.approx(np.conj(inner(G, F)), abs=0)
    with pytest.raises(ValueError, match="mismatch"):
        inner(F, gaussian(GridSpec(64, 10.0)))


def test_parseval():
    assert abs(inner(F, G) - inner(fourier(F), fourier(G))) < 1e-10 * F.norm() * G.norm()


def test_gaussian_is_self_dual():
    g0 = GridFunction.from_callable(SPEC, lambda X, Y: np.exp(-(X**2 + Y**2) / 2))
    gk = GridFunction.from_callable(SPEC, lambda X, Y: np.exp(-(X**2 + Y**2) / 2), "k")
    assert np.abs(fourier(g0).values - gk.values).max() < 1e-8


def test_fourier_roundtrip():
    assert np.abs(inv_fourier(fourier(G)).values - G.values).max() < 1e-12
    with pytest.raises(ValueError):
        inv_fourier(G)


def test_translation_theorem():
    a = (0.37, -0.81)
    K1, K2 = SPEC.mesh("k")
    lhs = fourier(shift(F, (-a[0], -a[1]))).values
    rhs = np.exp(-1j * (K1 * a[0] + K2 * a[1])) * fourier(F).values
    assert np.abs(lhs - rhs).max() < 1e-8


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_shift_matches_analytic_gaussian(c1, c2):
    moved = shift(F, (c1, c2))
    expect = gaussian(SPEC, (0.5 - c1, -0.3 - c2), 1.0)
    assert np.abs(moved.values - expect.values).max() < 1e-10


def test_quarter_rotations_are_exact_permutations():
    f = gaussian(SPEC, (1.0, 0.5), 0.7)
    expect = gaussian(SPEC, (-0.5, 1.0), 0.7)        # centre rotated by +90 degrees
    assert np.abs(rotate(f, math.pi / 2).values - expect.values).max() < 1e-15
    four = f
    for _ in range(4):
        four = rotate(four, math.pi / 2)
    assert np.array_equal(four.values, f.values)


def test_free_evolution_semigroup_and_norm():
    a = free_evolution(free_evolution(G, 0.3, 1.3), 0.45, 1.3)
    b = free_evolution(G, 0.75, 1.3)
    assert (a - b).norm() < 1e-10
    assert abs(free_evolution(G, 0.7, 1.3).norm() - G.norm()) < 1e-12


def test_serialisation_roundtrip(tmp_path):
    path = tmp_path / "g.bin"
    G.save(path)
    raw = path.read_bytes()
    assert len(raw) == 16 + 16 * SPEC.n**2
    assert int.from_bytes(raw[:8], "little") == SPEC.n
    back = GridFunction.load(path)
    assert back.spec == SPEC
    assert np.array_equal(back.values, G.values)
    with pytest.raises(ValueError):
        GridFunction.from_bytes(raw[:-16])


def test_values_are_immutable():
    with pytest.raises(ValueError):
        F.values[0, 0] = 1


# --- Galilei representations ----------------------------------------------

def test_identity_acts_trivially():
    e = GalileiElement()
    assert np.array_equal(apply_galilei_config(e, F, PARAMS).values, F.values)
    Fh = fourier(F)
    assert np.array_equal(apply_galilei_momentum(e, Fh, PARAMS).values, Fh.values)


def test_unitarity_boosts_and_translations():
    rng = np.random.default_rng(0)
    Fh = fourier(F)
    for _ in range(10):
        g = _small_galilei(rng, b=False, rotations=False)
        assert abs(apply_galilei_config(g, F, PARAMS).norm() - F.norm()) < 1e-10
        assert abs(apply_galilei_momentum(g, Fh, PARAMS).norm() - Fh.norm()) < 1e-10


@pytest.mark.parametrize("b,rotations,tol", [(False, False, 1e-10), (True, True, 1e-8)])
def test_configuration_rep_law(b, rotations, tol):
    rng = np.random.default_rng(1)
    for _ in range(10):
        g, h = _small_galilei(rng, b, rotations), _small_galilei(rng, b, rotations)
        lhs = apply_galilei_config(g, apply_galilei_config(h, F, PARAMS), PARAMS)
        rhs = apply_galilei_config(compose_galilei(g, h, PARAMS), F, PARAMS)
        assert (lhs - rhs).norm() < tol


def test_momentum_rep_law_full_group():
    rng = np.random.default_rng(2)
    Fh = fourier(F)
    for _ in range(10):
        g, h = _small_galilei(rng), _small_galilei(rng)
        lhs = apply_galilei_momentum(g, apply_galilei_momentum(h, Fh, PARAMS), PARAMS)
        rhs = apply_galilei_momentum(compose_galilei(g, h, PARAMS), Fh, PARAMS)
        assert (lhs - rhs).norm() < 1e-8


def test_pictures_are_fourier_conjugate():
    rng = np.random.default_rng(3)
    for _ in range(10):
        g = _small_galilei(rng)
        lhs = fourier(apply_galilei_config(g, F, PARAMS)).values
        rhs = apply_galilei_momentum(g, fourier(F), PARAMS).values
        assert np.abs(lhs - rhs).max() < 1e-6


def test_printed_configuration_formula_is_not_a_representation():
    # the printed J-shift sign leaves an uncancelled phase exp(-i lam v^v')
    g = GalileiElement(v=(0.4, 0.0))
    h = GalileiElement(v=(0.0, 0.5))
    lhs = apply_galilei_config(g, apply_galilei_config(h, F, PARAMS, AS_PRINTED), PARAMS, AS_PRINTED)
    rhs = apply_galilei_config(compose_galilei(g, h, PARAMS), F, PARAMS, AS_PRINTED)
    assert (lhs - rhs).norm() > 0.1
    # and it disagrees with the momentum picture
    diff = fourier(apply_galilei_config(h, F, PARAMS, AS_PRINTED)).values \
        - apply_galilei_momentum(h, fourier(F), PARAMS).values
    assert np.abs(diff).max() > 0.01


def test_printed_time_sign_breaks_boost_time_composition():
    g, h = GalileiElement(v=(0.3, 0.2)), GalileiElement(b=0.4)
    Fh = fourier(F)
    lhs = apply_galilei_momentum(g, apply_galilei_momentum(h, Fh, PARAMS, AS_PRINTED),
                                 PARAMS, AS_PRINTED)
    rhs = apply_galilei_momentum(compose_galilei(g, h, PARAMS), Fh, PARAMS, AS_PRINTED)
    assert (lhs - rhs).norm() > 0.1
    ok = (apply_galilei_momentum(g, apply_galilei_momentum(h, Fh, PARAMS), PARAMS)
          - apply_galilei_momentum(compose_galilei(g, h, PARAMS), Fh, PARAMS))
    assert ok.norm() < 1e-12


def test_default_convention():
    assert (REPRESENTATION.shift_sign, REPRESENTATION.time_sign) == (1, -1)


def test_off_grid_warning():
    with pytest.warns(RuntimeWarning, match="grid edge"):
        apply_galilei_config(GalileiElement(a=(7.0, 0.0)), F, PARAMS)


# --- extended translation groups -----------------------------------------

@pytest.mark.parametrize("ext,apply", [((1.0, 0.7), apply_double),
                                       ((1.3, 0.7, -0.4), apply_triple)])
def test_translation_reps(ext, apply):
    rng = np.random.default_rng(4)
    e = TransElement.identity(ext)
    assert np.array_equal(apply(e, G).values, G.values)
    for _ in range(100):
        g, h = grid_aligned(SPEC, rng, ext), grid_aligned(SPEC, rng, ext)
        lhs = apply(g, apply(h, G))
        rhs = apply(compose_trans(g, h), G)
        assert (lhs - rhs).norm() / G.norm() < 1e-10
        assert abs(apply(g, G).norm() - G.norm()) < 1e-12


def test_translation_rep_arity_checks():
    with pytest.raises(ValueError, match="arity 2"):
        apply_double(TransElement.identity((1, 1, 1)), F)
    with pytest.raises(ValueError, match="arity 3"):
        apply_triple(TransElement.identity((1, 1)), F)


def test_double_rep_off_grid_shifts():
    ext = (1.0, 0.7)
    g = TransElement((0.1, 0.2), (0.33, -0.7), (0.41, 0.27), ext)
    h = TransElement((0.3, 0.2), (0.13, 0.7), (-0.41, 0.17), ext)
    lhs = apply_double(g, apply_double(h, F))
    assert (lhs - apply_double(compose_trans(g, h), F)).norm() < 1e-10
