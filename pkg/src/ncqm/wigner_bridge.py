"""Hilbert-Schmidt realisation of the noncommutative algebra on a truncated
oscillator basis and the Wigner map to functions on the plane.

The map ``(W X)(x, y) = Tr[exp(-i(xQ + yP)) X] / sqrt(2 pi)`` is evaluated
from one eigendecomposition of ``Q`` in a padded oscillator basis: with ``x + iy = r e^{i phi}``,
``xQ + yP = e^{i phi N} (r Q) e^{-i phi N}`` (``N`` the number operator), so
every grid node costs O(dim^2) instead of a dense matrix exponential. The
dense ``scipy.linalg.expm`` route is kept as the oracle.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .generators import LinearOp, deriv, ncqm_ops, position
from .hilbert_grid import GridFunction, GridSpec, inner


@dataclass(frozen=True)
class FockOperator:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("FockOperator needs a square matrix")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def ket_bra(cls, m: int, n: int, dim: int) -> "FockOperator":
        x = np.zeros((dim, dim), complex)
        x[m, n] = 1
        return cls(x)

    def hs_inner(self, other: "FockOperator") -> complex:
        return complex(np.vdot(self.matrix, other.matrix))

    def tail_norm(self) -> float:
        """Frobenius norm of the entries outside the truncation-safe block."""
        h = self.dim // 2
        t = self.matrix.copy()
        t[:h, :h] = 0
        return float(np.linalg.norm(t))

    def __add__(self, other):
        return FockOperator(self.matrix + other.matrix)

    def __sub__(self, other):
        return FockOperator(self.matrix - other.matrix)

    def __mul__(self, c):
        return FockOperator(self.matrix * c)

    __rmul__ = __mul__


def base_qp(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Oscillator-basis ``Q = (a + a^+)/sqrt 2``, ``P = (a - a^+)/(i sqrt 2)``."""
    if dim < 4:
        raise ValueError("dim must be at least 4")
    a = np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)
    ad = a.conj().T
    return (a + ad) / math.sqrt(2), (a - ad) / (1j * math.sqrt(2))


def safe_block(x: np.ndarray) -> np.ndarray:
    h = x.shape[0] // 2
    return x[:h, :h]


def hs_ops(theta: float, dim: int) -> dict[str, callable]:
    """``Q1 X = QX``, ``Q2 X = theta PX``, ``P1 X = [P, X]``, ``P2 X = -[Q, X]/theta``."""
    if theta == 0:
        raise ValueError("theta must be nonzero (P2 divides by theta)")
    Q, P = base_qp(dim)
    return {
        "Q1": lambda X: FockOperator(Q @ X.matrix),
        "Q2": lambda X: FockOperator(theta * P @ X.matrix),
        "P1": lambda X: FockOperator(P @ X.matrix - X.matrix @ P),
        "P2": lambda X: FockOperator(-(Q @ X.matrix - X.matrix @ Q) / theta),
    }


def hs_commutator(a, b, X: FockOperator) -> FockOperator:
    return a(b(X)) - b(a(X))


# ---------------------------------------------------------------------------
# Wigner map
# ---------------------------------------------------------------------------


def _check_tail(X: FockOperator, tol: float = 1e-8):
    t = X.tail_norm()
    if t > tol * max(np.linalg.norm(X.matrix), 1e-300):
        warnings.warn(f"operator has tail norm {t:.3g} beyond the truncation-safe block",
                      RuntimeWarning, stacklevel=3)


def exp_dim_for(spec: GridSpec) -> int:
    """Oscillator levels needed to represent exp(-i(xQ + yP)) on the low block
    for every node of the grid: the displacement |alpha|^2 = r^2/2 at the
    grid corner plus a margin of several standard deviations."""
    a2 = spec.l**2                      # r_max^2 / 2 with r_max = sqrt(2) L
    return int(math.ceil(a2 + 8 * math.sqrt(a2) + 32))


def wigner_map(X: FockOperator, spec: GridSpec, exp_dim: int | None = None) -> GridFunction:
    """Evaluate the map on every grid node.

    The exponential is taken in an oscillator basis of ``exp_dim`` levels
    (default: enough for the grid extent, never less than ``X.dim``), so the
    only truncation is that of ``X`` itself.
    """
    _check_tail(X)
    dim = X.dim
    big = max(dim, exp_dim_for(spec) if exp_dim is None else exp_dim)
    Q, _ = base_qp(big)
    lam, V = np.linalg.eigh(Q)
    V = V.real[:dim]
    # c[j, d] = sum_{m - n = d} V[m, j] X[n, m] V[n, j]
    M = X.matrix.T
    shifts = np.arange(-(dim - 1), dim)
    c = np.zeros((big, len(shifts)), complex)
    for k, d in enumerate(shifts):
        m = np.arange(max(d, 0), min(dim, dim + d))
        n = m - d
        c[:, k] = np.einsum("ij,i,ij->j", V[m], M[m, n], V[n])
    Xg, Yg = spec.mesh("x")
    r = np.hypot(Xg, Yg).ravel()
    phi = np.arctan2(Yg, Xg).ravel()
    out = np.zeros(r.size, complex)
    step = 2048
    for s in range(0, r.size, step):
        rs, ps = r[s:s + step], phi[s:s + step]
        E = np.exp(-1j * rs[:, None] * lam[None, :])
        F = np.exp(1j * ps[:, None] * shifts[None, :])
        out[s:s + step] = np.sum(E * (F @ c.T), axis=1)
    return GridFunction(spec, out.reshape(spec.n, spec.n) / math.sqrt(2 * math.pi))


def wigner_value_expm(X: FockOperator, x: float, y: float, exp_dim: int | None = None) -> complex:
    """Dense-exponential oracle for a single point, in ``exp_dim`` levels."""
    big = max(X.dim, exp_dim or X.dim)
    Q, P = base_qp(big)
    U = expm(-1j * (x * Q + y * P))[:X.dim, :X.dim]
    return complex(np.trace(U @ X.matrix) / math.sqrt(2 * math.pi))


def number_state_value(n: int, x: float, y: float) -> float:
    """``W(|n><n|)`` from the Laguerre closed form ``exp(-r^2/4) L_n(r^2/2)/sqrt(2 pi)``."""
    from scipy.special import eval_laguerre
    r2 = x * x + y * y
    return float(math.exp(-r2 / 4) * eval_laguerre(n, r2 / 2) / math.sqrt(2 * math.pi))


def isometry_residual(X: FockOperator, Y: FockOperator, spec: GridSpec) -> float:
    lhs = inner(wigner_map(X, spec), wigner_map(Y, spec))
    return abs(lhs - X.hs_inner(Y))


# ---------------------------------------------------------------------------
# Intertwining
# ---------------------------------------------------------------------------


def derived_images(theta: float) -> dict[str, LinearOp]:
    """Grid operators ``T`` with ``W(A X) = T (W X)``, derived from
    ``D Q = (i d_x - y/2) D``, ``D P = (i d_y + x/2) D``, ``[D, P] = x D``,
    ``[D, Q] = -y D`` for ``D = exp(-i(xQ + yP))``."""
    x, y, dx, dy = position(0), position(1), deriv(0), deriv(1)
    return {
        "Q1": 1j * dx - 0.5 * y,
        "Q2": theta * (1j * dy + 0.5 * x),
        "P1": x,
        "P2": (1 / theta) * y,
    }


def stated_images(theta: float) -> dict[str, LinearOp]:
    ops = ncqm_ops(1.0, theta)
    return {k: ops[k] for k in ("Q1", "Q2", "P1", "P2")}


@dataclass
class EquivalenceReport:
    residuals: dict[tuple[str, int], float]

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    def by_pair(self) -> dict[str, float]:
        out: dict[str, float] = {}
        for (name, _), v in self.residuals.items():
            out[name] = max(out.get(name, 0.0), v)
        return out


def low_level_probes(dim: int) -> list[FockOperator]:
    """Fixed low-level probe operators: |0><0|, |1><0|, |1><2|, and a mixed combination."""
    mixed = np.zeros((dim, dim), complex)
    mixed[0, 0], mixed[1, 2], mixed[2, 1], mixed[3, 0] = 0.6, 0.3 - 0.2j, 0.3 + 0.2j, -0.4j
    return [FockOperator.ket_bra(0, 0, dim), FockOperator.ket_bra(1, 0, dim),
            FockOperator.ket_bra(1, 2, dim), FockOperator(mixed)]


def equivalence_check(theta: float, dim: int, spec: GridSpec,
                      probes: list[FockOperator] | None = None,
                      targets: str = "stated") -> EquivalenceReport:
    """Relative residual ``|W(A X) - T(W X)| / |W X|`` per operator and probe;
    ``targets`` picks the stated noncommutative operators or the derived images."""
    probes = low_level_probes(dim) if probes is None else probes
    sup = hs_ops(theta, dim)
    grid_ops = stated_images(theta) if targets == "stated" else derived_images(theta)
    res = {}
    for i, X in enumerate(probes):
        wx = wigner_map(X, spec)
        for name, A in sup.items():
            lhs = wigner_map(A(X), spec)
            res[(name, i)] = (lhs - grid_ops[name](wx)).norm() / wx.norm()
    return EquivalenceReport(res)
