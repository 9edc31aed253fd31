"""Unipotent matrix realisations of the doubly (7x7) and triply (8x8) extended
translation groups, their Lie algebras, and the orbit-method master equation.

Basis ordering follows the ``a``-coordinates: X1, X2 generate ``p1, p2``
(named Q_1, Q_2), X3, X4 generate ``q1, q2`` (P_1, P_2), X5, X6[, X7] are
the central Theta, Phi[, Psi].
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .group_core import TransElement

BASIS_NAMES = {
    2: ("Q1", "Q2", "P1", "P2", "Theta", "Phi"),
    3: ("Q1", "Q2", "P1", "P2", "Theta", "Phi", "Psi"),
}


def dim_for(arity: int) -> int:
    if arity not in (2, 3):
        raise ValueError(f"matrix realisation exists for arity 2 or 3, got {arity}")
    return 5 + arity


def _fill(arity, ext, q, p, phases):
    """Shared layout of the group and algebra matrices (without the unit diagonal)."""
    alpha = ext[0]
    beta = ext[1]
    M = np.zeros((dim_for(arity),) * 2, dtype=float)
    if arity == 2:
        # rows: theta, phi | q1, q2, p1, p2 | 1
        M[0, 2:6] = (-alpha / 2 * p[0], -alpha / 2 * p[1], alpha / 2 * q[0], alpha / 2 * q[1])
        M[1, 4:6] = (-beta / 2 * p[1], beta / 2 * p[0])
        M[0:2, 6] = phases
        M[2:6, 6] = (q[0], q[1], p[0], p[1])
    else:
        gamma = ext[2]
        M[0, 3:7] = (-alpha / 2 * p[0], -alpha / 2 * p[1], alpha / 2 * q[0], alpha / 2 * q[1])
        M[1, 5:7] = (-beta / 2 * p[1], beta / 2 * p[0])
        M[2, 3:5] = (-gamma / 2 * q[1], gamma / 2 * q[0])
        M[0:3, 7] = phases
        M[3:7, 7] = (q[0], q[1], p[0], p[1])
    return M


def mat_of(g: TransElement) -> np.ndarray:
    M = _fill(g.arity, g.ext, g.q, g.p, g.phases)
    return M + np.eye(len(M))


def mat7_of(g: TransElement) -> np.ndarray:
    if g.arity != 2:
        raise ValueError(f"mat7_of needs a doubly extended element, got arity {g.arity}")
    return mat_of(g)


def mat8_of(g: TransElement) -> np.ndarray:
    if g.arity != 3:
        raise ValueError(f"mat8_of needs a triply extended element, got arity {g.arity}")
    return mat_of(g)


def element_of(M: np.ndarray, ext) -> TransElement:
    """Read the group parameters back off a group matrix (no consistency check)."""
    arity = len(ext)
    d = dim_for(arity)
    if M.shape != (d, d):
        raise ValueError(f"expected {d}x{d} matrix, got {M.shape}")
    col = M[:, -1]
    q = (col[arity], col[arity + 1])
    p = (col[arity + 2], col[arity + 3])
    return TransElement(tuple(col[:arity]), q, p, tuple(ext))


def algebra_mat(x, ext) -> np.ndarray:
    """Strictly upper triangular algebra matrix for coefficients ``x^1..x^n``."""
    x = np.asarray(x, dtype=float)
    arity = len(ext)
    if len(x) != 4 + arity:
        raise ValueError(f"expected {4 + arity} coefficients, got {len(x)}")
    return _fill(arity, ext, q=(x[2], x[3]), p=(x[0], x[1]), phases=x[4:])


def basis_mats(ext) -> list[np.ndarray]:
    n = 4 + len(ext)
    return [algebra_mat(np.eye(n)[k], ext) for k in range(n)]


def expm_nilpotent(X: np.ndarray) -> np.ndarray:
    """Matrix exponential of a nilpotent matrix; the series terminates."""
    n = len(X)
    out = np.eye(n)
    term = np.eye(n)
    for k in range(1, n):
        term = term @ X / k
        if not term.any():
            break
        out = out + term
    return out


def logm_unipotent(M: np.ndarray) -> np.ndarray:
    n = len(M)
    N = M - np.eye(n)
    out = np.zeros_like(N)
    term = np.eye(n)
    for k in range(1, n):
        term = term @ N
        if not term.any():
            break
        out = out + (-1) ** (k + 1) * term / k
    return out


def coeffs_of(X: np.ndarray, ext) -> tuple[np.ndarray, float]:
    """Coefficients of an algebra matrix, read from its last column.

    Each basis matrix owns a single unit entry there, so the read-off is exact;
    the returned residual measures how far ``X`` is from the span.
    """
    arity = len(ext)
    col = X[:, -1]
    x = np.array([col[arity + 2], col[arity + 3], col[arity], col[arity + 1], *col[:arity]])
    resid = float(np.abs(algebra_mat(x, ext) - X).max())
    return x, resid


def structure_constants(ext) -> dict[tuple[str, str], dict[str, float]]:
    """All brackets ``[X_i, X_j]`` (i < j) re-expressed in the basis.

    Entries are ``{(name_i, name_j): {name_k: c_k}}`` with zero coefficients
    dropped. Raises if some commutator leaves the span of the basis.
    """
    arity = len(ext)
    names = BASIS_NAMES[arity]
    basis = basis_mats(ext)
    table = {}
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            C = basis[i] @ basis[j] - basis[j] @ basis[i]
            coef, resid = coeffs_of(C, ext)
            if resid != 0:
                raise ArithmeticError(
                    f"[{names[i]}, {names[j]}] is not in the span of the basis "
                    f"(residual {resid:.3g})")
            table[(names[i], names[j])] = {
                names[k]: float(c) for k, c in enumerate(coef) if c != 0}
    return table


def expected_brackets(ext) -> dict[tuple[str, str], dict[str, float]]:
    """Bracket table as printed for the double / triple extension.

    ``[P_i, Q_j] = alpha delta_ij Theta``, ``[Q_1, Q_2] = beta Phi`` and, for the
    triple extension, ``[P_1, P_2] = gamma Psi``; everything else vanishes.
    """
    arity = len(ext)
    names = BASIS_NAMES[arity]
    alpha, beta = ext[0], ext[1]
    table = {(a, b): {} for i, a in enumerate(names) for b in names[i + 1:]}
    # stored with the basis order (Q before P), so [Q_i, P_i] = -alpha Theta
    table[("Q1", "P1")] = {"Theta": -alpha}
    table[("Q2", "P2")] = {"Theta": -alpha}
    table[("Q1", "Q2")] = {"Phi": beta}
    if arity == 3:
        table[("P1", "P2")] = {"Psi": ext[2]}
    return {k: {n: c for n, c in v.items() if c != 0} for k, v in table.items()}


# ---------------------------------------------------------------------------
# Polarising subgroup, section, master equation
# ---------------------------------------------------------------------------


def subgroup_mat(h_params, ext) -> np.ndarray:
    """Abelian subgroup matrix.

    double: ``h_params = (theta, phi, q1, q2)``;
    triple: ``h_params = (theta, phi, psi, p1, q2)``.
    """
    return mat_of(subgroup_element(h_params, ext))


def subgroup_element(h_params, ext) -> TransElement:
    if len(ext) == 2:
        theta, phi, q1, q2 = h_params
        return TransElement((theta, phi), (q1, q2), (0.0, 0.0), ext)
    theta, phi, psi, p1, q2 = h_params
    return TransElement((theta, phi, psi), (0.0, q2), (p1, 0.0), ext)


def section_element(s, ext) -> TransElement:
    """``delta(s1, s2)`` (double) or ``delta(r1, s2)`` (triple) as a group element."""
    if len(ext) == 2:
        return TransElement((0.0, 0.0), (0.0, 0.0), (s[0], s[1]), ext)
    r1, s2 = s
    return TransElement((0.0, 0.0, 0.0), (r1, 0.0), (0.0, s2), ext)


def section_mat(s, ext) -> np.ndarray:
    return mat_of(section_element(s, ext))


@dataclass
class Factorization:
    h_params: tuple
    s_out: tuple
    residual: float


def master_factorize(s, g: TransElement) -> Factorization:
    """Closed-form solution of ``delta(s) g = h delta(s_out)``."""
    ext = g.ext
    (q1, q2), (p1, p2) = g.q, g.p
    if g.arity == 2:
        alpha, beta = ext
        s1, s2 = s
        theta, phi = g.phases
        C = theta - alpha * (q1 * (s1 + p1 / 2) + q2 * (s2 + p2 / 2))
        D = phi - beta / 2 * (p1 * s2 - p2 * s1)
        h = (C, D, q1, q2)
        s_out = (p1 + s1, p2 + s2)
    elif g.arity == 3:
        alpha, beta, gamma = ext
        r1, s2 = s
        theta, phi, psi = g.phases
        C = (theta - alpha * q2 * s2 + alpha * p1 * r1
             + alpha / 2 * q1 * p1 - alpha / 2 * q2 * p2)
        D = phi - beta * p1 * s2 - beta / 2 * p1 * p2
        E = psi + gamma * q2 * r1 + gamma / 2 * q1 * q2
        h = (C, D, E, p1, q2)
        s_out = (r1 + q1, s2 + p2)
    else:
        raise ValueError(f"master equation defined for arity 2 or 3, got {g.arity}")
    lhs = section_mat(s, ext) @ mat_of(g)
    rhs = subgroup_mat(h, ext) @ section_mat(s_out, ext)
    return Factorization(h, s_out, float(np.abs(lhs - rhs).max()))


def master_factorize_numeric(s, g: TransElement) -> Factorization:
    """Brute-force factorisation by matrix algebra alone.

    The section coordinates are read from the slots of ``delta(s) g`` the
    subgroup does not touch, ``h`` is then ``delta(s) g delta(s_out)^-1``.
    """
    ext = g.ext
    P = section_mat(s, ext) @ mat_of(g)
    col = P[:, -1]
    if g.arity == 2:
        s_out = (col[4], col[5])              # p1, p2 slots
    else:
        s_out = (col[3], col[6])              # q1, p2 slots
    H = P @ np.linalg.inv(section_mat(s_out, ext))
    e = element_of(H, ext)
    if g.arity == 2:
        h = (*e.phases, *e.q)
    else:
        h = (*e.phases, e.p[0], e.q[1])
    resid = float(np.abs(H - subgroup_mat(h, ext)).max())
    return Factorization(tuple(float(x) for x in h), tuple(float(x) for x in s_out), resid)


# ---------------------------------------------------------------------------
# Golden matrix files
# ---------------------------------------------------------------------------


def save_matrix(path: str | Path, M: np.ndarray) -> None:
    """Plain text, one row per line, full double precision."""
    np.savetxt(path, M, fmt="%.17g")


def load_matrix(path: str | Path) -> np.ndarray:
    return np.loadtxt(path, dtype=float, ndmin=2)
