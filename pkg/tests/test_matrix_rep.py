import numpy as np
import pytest
from hypothesis import given, strategies as st

from ncqm.group_core import TransElement, compose_trans, inverse_trans, random_trans
from ncqm.matrix_rep import (
    algebra_mat,
    basis_mats,
    element_of,
    expected_brackets,
    expm_nilpotent,
    load_matrix,
    logm_unipotent,
    master_factorize,
    master_factorize_numeric,
    mat7_of,
    mat8_of,
    mat_of,
    save_matrix,
    section_mat,
    structure_constants,
    subgroup_mat,
)

DOUBLE = (1.0, 0.7)
TRIPLE = (1.3, 0.7, -0.4)
coord = st.floats(-2, 2, allow_nan=False)


def test_golden_mat7(golden_dir):
    g = TransElement((1, 0), (1, 0), (0, 0), (2, 1))
    M = mat7_of(g)
    assert np.array_equal(M, load_matrix(golden_dir / "mat7_theta1_q10_alpha2_beta1.txt"))
    assert (M[0, 4], M[0, 6]) == (1, 1)


def test_golden_mat8(golden_dir):
    g = TransElement((0.5, -1, 2), (1, 2), (3, -1), (2, 1, 4))
    assert np.array_equal(mat8_of(g),
                          load_matrix(golden_dir / "mat8_mixed_alpha2_beta1_gamma4.txt"))


def test_golden_section(golden_dir):
    assert np.array_equal(section_mat((1, 2), (1, 1)),
                          load_matrix(golden_dir / "section_double_s12_alpha1_beta1.txt"))


def test_save_load_roundtrip(tmp_path):
    M = mat_of(random_trans(np.random.default_rng(2), TRIPLE))
    save_matrix(tmp_path / "m.txt", M)
    assert np.array_equal(load_matrix(tmp_path / "m.txt"), M)


def test_identity_and_arity_errors():
    assert np.array_equal(mat7_of(TransElement.identity(DOUBLE)), np.eye(7))
    assert np.array_equal(mat8_of(TransElement.identity(TRIPLE)), np.eye(8))
    with pytest.raises(ValueError, match="arity"):
        mat7_of(TransElement.identity(TRIPLE))
    with pytest.raises(ValueError, match="arity"):
        mat8_of(TransElement.identity(DOUBLE))


@pytest.mark.parametrize("ext", [DOUBLE, TRIPLE])
def test_homomorphism_and_inverse(ext):
    rng = np.random.default_rng(0)
    hom = inv = 0.0
    for _ in range(1000):
        g, h = random_trans(rng, ext), random_trans(rng, ext)
        hom = max(hom, np.abs(mat_of(g) @ mat_of(h) - mat_of(compose_trans(g, h))).max())
        inv = max(inv, np.abs(np.linalg.inv(mat_of(g)) - mat_of(inverse_trans(g))).max())
    assert hom < 1e-12
    assert inv < 1e-10


@pytest.mark.parametrize("ext", [DOUBLE, TRIPLE])
def test_unipotent_and_element_roundtrip(ext):
    g = random_trans(np.random.default_rng(5), ext)
    M = mat_of(g)
    assert np.array_equal(np.diag(M), np.ones(len(M)))
    assert np.array_equal(np.tril(M, -1), np.zeros_like(M))
    assert element_of(M, ext) == g


def test_bracket_p1_q1_is_alpha_theta():
    X = basis_mats(DOUBLE)
    q1, p1, theta = X[0], X[2], X[4]
    assert np.array_equal(p1 @ q1 - q1 @ p1, DOUBLE[0] * theta)


@pytest.mark.parametrize("ext", [DOUBLE, TRIPLE])
def test_structure_constants_reproduce_brackets(ext):
    table = structure_constants(ext)
    assert table == expected_brackets(ext)
    for (a, b), val in table.items():
        if {a, b} & {"Theta", "Phi", "Psi"}:
            assert val == {}


def test_named_brackets():
    assert structure_constants(DOUBLE)[("Q1", "Q2")] == {"Phi": DOUBLE[1]}
    assert structure_constants(TRIPLE)[("P1", "P2")] == {"Psi": TRIPLE[2]}


@pytest.mark.parametrize("ext", [DOUBLE, TRIPLE])
@given(data=st.lists(coord, min_size=7, max_size=7))
def test_nilpotency(ext, data):
    X = algebra_mat(data[: 4 + len(ext)], ext)
    assert not np.linalg.matrix_power(X, len(X)).any()


def test_algebra_mat_zero_and_length_check():
    assert not algebra_mat(np.zeros(6), DOUBLE).any()
    with pytest.raises(ValueError):
        algebra_mat(np.zeros(7), DOUBLE)


@pytest.mark.parametrize("ext", [DOUBLE, TRIPLE])
def test_exp_of_single_generator(ext):
    n = 4 + len(ext)
    for k in range(n):
        t = 0.7
        a = np.zeros(n)
        a[k] = t
        g = TransElement.from_a_coords(a, ext)
        assert np.allclose(expm_nilpotent(t * basis_mats(ext)[k]), mat_of(g), atol=1e-15)


@pytest.mark.parametrize("ext", [DOUBLE, TRIPLE])
def test_exp_log_roundtrip(ext):
    rng = np.random.default_rng(4)
    for _ in range(100):
        M = mat_of(random_trans(rng, ext))
        assert np.abs(expm_nilpotent(logm_unipotent(M)) - M).max() < 1e-12


def test_subgroup_abelian_and_closed():
    rng = np.random.default_rng(6)
    for ext, k in ((DOUBLE, 4), (TRIPLE, 5)):
        assert np.array_equal(subgroup_mat(np.zeros(k), ext), np.eye(len(ext) + 5))
        for _ in range(500):
            a, b = rng.uniform(-2, 2, k), rng.uniform(-2, 2, k)
            A, B = subgroup_mat(a, ext), subgroup_mat(b, ext)
            assert np.abs(A @ B - B @ A).max() < 1e-12
            assert np.abs(A @ B - subgroup_mat(a + b, ext)).max() < 1e-12


def test_section_products_factor_through_subgroup():
    rng = np.random.default_rng(7)
    for ext in (DOUBLE, TRIPLE):
        assert np.array_equal(section_mat((0, 0), ext), np.eye(len(ext) + 5))
        for _ in range(50):
            s, t = rng.uniform(-2, 2, 2), rng.uniform(-2, 2, 2)
            P = section_mat(s, ext) @ section_mat(t, ext)
            H = P @ np.linalg.inv(section_mat(s + t, ext))
            e = element_of(H, ext)
            h = (*e.phases, *e.q) if len(ext) == 2 else (*e.phases, e.p[0], e.q[1])
            assert np.abs(H - subgroup_mat(h, ext)).max() < 1e-12


def test_master_identity_and_hand_value():
    f = master_factorize((0.3, -0.2), TransElement.identity(DOUBLE))
    assert f.h_params == (0, 0, 0, 0)
    assert f.s_out == (0.3, -0.2)
    assert f.residual == 0
    g = TransElement((0, 0), (1, 1), (2, 3), (1, 1))
    f = master_factorize((0, 0), g)
    assert f.h_params == (-2.5, 0, 1, 1)
    assert f.s_out == (2, 3)
    assert f.residual < 1e-15


@pytest.mark.parametrize("ext", [DOUBLE, TRIPLE])
def test_master_closed_form_matches_brute_force(ext):
    rng = np.random.default_rng(8)
    for _ in range(500):
        g = random_trans(rng, ext)
        s = tuple(rng.uniform(-2, 2, 2))
        a, b = master_factorize(s, g), master_factorize_numeric(s, g)
        assert a.residual < 1e-12 and b.residual < 1e-12
        assert np.abs(np.subtract(a.h_params, b.h_params)).max() < 1e-12
        assert np.abs(np.subtract(a.s_out, b.s_out)).max() < 1e-12
