"""Coadjoint action on the dual of the extended translation algebras, its
polynomial invariants, and orbit representatives.

Dual coordinates follow the generator order ``X1..X6`` (double) or
``X1..X7`` (triple); group parameters are the ``a``-coordinates
``(p1, p2, q1, q2, phases...)`` of :class:`TransElement`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .group_core import TransElement, inverse_trans
from .matrix_rep import dim_for, mat_of


@dataclass(frozen=True)
class DualVector:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(x) for x in self.coords))
        if len(self.coords) not in (6, 7):
            raise ValueError(f"dual vector needs 6 or 7 coordinates, got {len(self.coords)}")

    @property
    def arity(self) -> int:
        return len(self.coords) - 4

    def as_array(self) -> np.ndarray:
        return np.array(self.coords)


@dataclass(frozen=True)
class OrbitLabel:
    rho: float
    sigma: float
    tau: float | None = None

    def as_tuple(self) -> tuple:
        return (self.rho, self.sigma) if self.tau is None else (self.rho, self.sigma, self.tau)


def _check(g: TransElement, F: DualVector):
    if g.arity != F.arity:
        raise ValueError(f"arity mismatch: element {g.arity}, dual vector {F.arity}")


def coadjoint_act(g: TransElement, F: DualVector) -> DualVector:
    """Closed-form action ``K(g) F``; central coordinates are copied verbatim."""
    _check(g, F)
    a1, a2, a3, a4 = g.a_coords()[:4]
    X = F.coords
    if F.arity == 2:
        alpha, beta = g.ext
        X5, X6 = X[4], X[5]
        head = (X[0] - alpha / 2 * a3 * X5 + beta / 2 * a2 * X6,
                X[1] - alpha / 2 * a4 * X5 - beta / 2 * a1 * X6,
                X[2] + alpha / 2 * a1 * X5,
                X[3] + alpha / 2 * a2 * X5)
    else:
        alpha, _, gamma = g.ext
        X5, X7 = X[4], X[6]
        # X1', X2' in the matrix-slot reading (slot value times -alpha/2)
        head = (X[0] - alpha / 2 * a3 * X5,
                X[1] - alpha / 2 * a4 * X5,
                X[2] + alpha / 2 * a1 * X5 + gamma / 2 * a4 * X7,
                X[3] + alpha / 2 * a2 * X5 - gamma / 2 * a3 * X7)
    return DualVector((*head, *X[4:]))


def dual_mat(F: DualVector, ext) -> np.ndarray:
    """Lower triangular matrix of ``F`` with ``<F, X> = tr(F X)``."""
    alpha = ext[0]
    X = F.coords
    M = np.zeros((dim_for(F.arity),) * 2)
    if F.arity == 2:
        M[6, :6] = (X[4], X[5], X[2], X[3], X[0], X[1])
    else:
        M[3, 0] = -2 / alpha * X[0]
        M[4, 0] = -2 / alpha * X[1]
        M[7, :5] = (X[4], X[5], X[6], X[2], X[3])
    return M


def read_dual(C: np.ndarray, ext) -> DualVector:
    """Pull the designated entries back out of a conjugated dual matrix."""
    if len(ext) == 2:
        r = C[6]
        return DualVector((r[4], r[5], r[2], r[3], r[0], r[1]))
    alpha = ext[0]
    r = C[7]
    return DualVector((-alpha / 2 * C[3, 0], -alpha / 2 * C[4, 0], r[3], r[4], r[0], r[1], r[2]))


def coadjoint_by_conjugation(g: TransElement, F: DualVector) -> DualVector:
    # mat(g)^-1 is the matrix of the group inverse, exactly
    return read_dual(mat_of(g) @ dual_mat(F, g.ext) @ mat_of(inverse_trans(g)), g.ext)


def coadjoint_matrix_check(g: TransElement, F: DualVector) -> float:
    """Max discrepancy between the closed form and ``g F g^-1`` read-off."""
    _check(g, F)
    return float(np.abs(coadjoint_by_conjugation(g, F).as_array()
                        - coadjoint_act(g, F).as_array()).max())


def invariants(F: DualVector) -> OrbitLabel:
    return OrbitLabel(*F.coords[4:])


def orbit_jacobian(F: DualVector, ext) -> np.ndarray:
    """Derivative of the first four coordinates of ``K(a) F`` in ``a1..a4``.

    The action is affine in ``a1..a4``, so unit steps give it exactly.
    """
    base = coadjoint_act(TransElement.identity(ext), F).as_array()[:4]
    cols = []
    for k in range(4):
        a = np.zeros(4 + len(ext))
        a[k] = 1.0
        cols.append(coadjoint_act(TransElement.from_a_coords(a, ext), F).as_array()[:4] - base)
    return np.stack(cols, axis=1)


def orbit_rank(F: DualVector, ext, rel_tol: float = 1e-8) -> int:
    sv = np.linalg.svd(orbit_jacobian(F, ext), compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv / sv[0] > rel_tol))


def orbit_zero_section(F: DualVector, ext) -> TransElement:
    """Group element carrying ``F`` to ``(0, 0, 0, 0, invariants...)``."""
    if any(x == 0 for x in F.coords[4:]):
        raise ValueError("vanishing invariant: the orbit degenerates")
    J = orbit_jacobian(F, ext)
    a = np.linalg.solve(J, -np.asarray(F.coords[:4]))
    return TransElement.from_a_coords((*a, *(0.0,) * len(ext)), ext)
