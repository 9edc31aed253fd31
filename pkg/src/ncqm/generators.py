"""Differential-operator realisations of the Lie-algebra generators, numerical
generators of the representations, and commutator / bracket-table checks.

Derivatives are spectral (FFT multiplier ``ik``) so commutators close to
machine precision on band-limited probes. Generators of one-parameter
subgroups use the convention ``X = i dU(t)/dt`` at ``t = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .group_core import GalileiElement, GalileiParams, TransElement
from .hilbert_grid import (
    REPRESENTATION,
    GalileiConvention,
    GridFunction,
    GridSpec,
    _conjugate_axis,
    _dft,
    _idft,
    apply_double,
    apply_galilei_config,
    apply_galilei_momentum,
    apply_triple,
    gaussian,
    inner,
)


@dataclass(frozen=True)
class LinearOp:
    action: Callable[[GridFunction], GridFunction]
    label: str = ""

    def __call__(self, f: GridFunction) -> GridFunction:
        return self.action(f)

    def __add__(self, other: "LinearOp") -> "LinearOp":
        return LinearOp(lambda f: self(f) + other(f), f"({self.label} + {other.label})")

    def __sub__(self, other: "LinearOp") -> "LinearOp":
        return LinearOp(lambda f: self(f) - other(f), f"({self.label} - {other.label})")

    def __mul__(self, c) -> "LinearOp":
        return LinearOp(lambda f: self(f) * c, f"{c}*{self.label}")

    __rmul__ = __mul__

    def __matmul__(self, other: "LinearOp") -> "LinearOp":
        return LinearOp(lambda f: self(other(f)), f"{self.label}{other.label}")


IDENTITY = LinearOp(lambda f: f, "I")


def deriv(axis: int) -> LinearOp:
    """Spectral ``d/dx_axis`` on position-space functions."""
    def act(f: GridFunction) -> GridFunction:
        w = _conjugate_axis(f.spec, "x")
        mult = (1j * w)[:, None] if axis == 0 else (1j * w)[None, :]
        return f.like(_idft(mult * _dft(f.values)))
    return LinearOp(act, f"d{axis + 1}")


def position(axis: int) -> LinearOp:
    def act(f: GridFunction) -> GridFunction:
        return f.like(f.spec.mesh("x")[axis] * f.values)
    return LinearOp(act, f"x{axis + 1}")


def laplacian() -> LinearOp:
    def act(f: GridFunction) -> GridFunction:
        w = _conjugate_axis(f.spec, "x")
        return f.like(_idft(-(w[:, None] ** 2 + w[None, :] ** 2) * _dft(f.values)))
    return LinearOp(act, "lap")


def _named(op: LinearOp, label: str) -> LinearOp:
    return LinearOp(op.action, label)


# ---------------------------------------------------------------------------
# Operator sets
# ---------------------------------------------------------------------------


def ncqm_ops(m: float, theta: float, angular: str = "corrected") -> dict[str, LinearOp]:
    """``Q1, Q2, P1, P2, H, M, N1, N2, I`` of noncommutative quantum mechanics.

    ``angular='printed'`` gives ``-i (x d_x - y d_x)`` exactly as written;
    the default ``-i (x d_y - y d_x)`` is the one obeying the bracket table.
    """
    x, y, dx, dy = position(0), position(1), deriv(0), deriv(1)
    Q1 = x + (1j * theta / 2) * dy
    Q2 = y - (1j * theta / 2) * dx
    if angular == "corrected":
        M = -1j * (x @ dy - y @ dx)
    elif angular == "printed":
        M = -1j * (x @ dx - y @ dx)
    else:
        raise ValueError(f"angular must be 'corrected' or 'printed', got {angular!r}")
    ops = {
        "Q1": Q1, "Q2": Q2, "P1": -1j * dx, "P2": -1j * dy,
        "H": (-1 / (2 * m)) * laplacian(), "M": M,
        "N1": m * Q1, "N2": m * Q2, "I": IDENTITY,
    }
    return {k: _named(v, k) for k, v in ops.items()}


def canonical_ops() -> dict[str, LinearOp]:
    return {"Q1": position(0), "Q2": position(1), "P1": -1j * deriv(0), "P2": -1j * deriv(1)}


def noncanonical_transform(theta: float) -> dict[str, LinearOp]:
    """``Q1 - (theta/2) P2``, ``Q2 + (theta/2) P1`` from the canonical pair (hbar = 1)."""
    c = canonical_ops()
    return {"Q1": _named(c["Q1"] - (theta / 2) * c["P2"], "Q1hat"),
            "Q2": _named(c["Q2"] + (theta / 2) * c["P1"], "Q2hat"),
            "P1": c["P1"], "P2": c["P2"], "I": IDENTITY}


def double_ext_ops(alpha: float, beta: float, picture: str = "s") -> dict[str, LinearOp]:
    s1, s2, d1, d2 = position(0), position(1), deriv(0), deriv(1)
    if picture == "s":
        ops = {"P1": alpha * s1, "P2": alpha * s2,
               "Q1": (beta / 2) * s2 + 1j * d1, "Q2": (-beta / 2) * s1 + 1j * d2}
    elif picture == "x":
        ops = {"P1": (-1j * alpha) * d1, "P2": (-1j * alpha) * d2,
               "Q1": s1 - (1j * beta / 2) * d2, "Q2": s2 + (1j * beta / 2) * d1}
    else:
        raise ValueError(f"picture must be 's' or 'x', got {picture!r}")
    ops["I"] = IDENTITY
    return {k: _named(v, k) for k, v in ops.items()}


def triple_ext_ops(alpha: float, beta: float, gamma: float, picture: str = "s",
                   p1_variant: str = "printed") -> dict[str, LinearOp]:
    """Triple-extension generators.

    ``picture='s'``: after the Fourier transform in the first coordinate, as
    printed. ``picture='r'``: the mixed ``(r1, s2)`` coordinates the
    representation acts on. ``p1_variant='alpha'`` swaps in ``P1 = -alpha s1``.
    """
    u, s2, d1, d2 = position(0), position(1), deriv(0), deriv(1)
    if picture == "s":
        if p1_variant == "printed":
            P1 = -1.0 * u
        elif p1_variant == "alpha":
            P1 = -alpha * u
        else:
            raise ValueError(f"p1_variant must be 'printed' or 'alpha', got {p1_variant!r}")
        ops = {"P1": P1, "Q1": beta * s2 - (1j * alpha) * d1,
               "P2": alpha * s2 - (1j * gamma) * d1, "Q2": 1j * d2}
    elif picture == "r":
        ops = {"P1": 1j * d1, "Q1": beta * s2 - alpha * u,
               "P2": alpha * s2 - gamma * u, "Q2": 1j * d2}
    else:
        raise ValueError(f"picture must be 's' or 'r', got {picture!r}")
    ops["I"] = IDENTITY
    return {k: _named(v, k) for k, v in ops.items()}


# ---------------------------------------------------------------------------
# Expected bracket tables: {(A, B): {C: coeff}} meaning [A, B] = sum coeff * C
# ---------------------------------------------------------------------------

BracketTable = Mapping[tuple[str, str], Mapping[str, complex]]


def galilei_table(m: float, lam: float) -> dict:
    """Extended Galilei algebra in the ``M, N_i, P_i, H, I`` basis (hbar = 1)."""
    return {
        ("M", "N1"): {"N2": 1j}, ("M", "N2"): {"N1": -1j},
        ("M", "P1"): {"P2": 1j}, ("M", "P2"): {"P1": -1j},
        ("H", "P1"): {}, ("H", "P2"): {}, ("M", "H"): {},
        ("N1", "N2"): {"I": 1j * lam}, ("P1", "P2"): {},
        ("N1", "P1"): {"I": 1j * m}, ("N2", "P2"): {"I": 1j * m},
        ("N1", "P2"): {}, ("N2", "P1"): {},
        ("N1", "H"): {"P1": 1j}, ("N2", "H"): {"P2": 1j},
    }


def ncqm_table(theta: float) -> dict:
    return {("Q1", "Q2"): {"I": 1j * theta}, ("P1", "P2"): {},
            ("Q1", "P1"): {"I": 1j}, ("Q2", "P2"): {"I": 1j},
            ("Q1", "P2"): {}, ("Q2", "P1"): {}}


def double_table(alpha: float, beta: float) -> dict:
    return {("Q1", "P1"): {"I": 1j * alpha}, ("Q2", "P2"): {"I": 1j * alpha},
            ("Q1", "P2"): {}, ("Q2", "P1"): {},
            ("Q1", "Q2"): {"I": -1j * beta}, ("P1", "P2"): {}}


def triple_table(alpha: float, beta: float, gamma: float) -> dict:
    t = double_table(alpha, beta)
    t[("P1", "P2")] = {"I": -1j * gamma}
    return t


# ---------------------------------------------------------------------------
# Probes, commutators, checks
# ---------------------------------------------------------------------------


def standard_probes(spec: GridSpec) -> list[GridFunction]:
    """Gaussians at centres {0, (1, 0.5)} with widths {1, 0.7}, plus a
    Hermite-modulated Gaussian ``(x^2 - y/2) exp(-r^2/2)`` (normalised)."""
    probes = [gaussian(spec, c, w) for c in ((0.0, 0.0), (1.0, 0.5)) for w in (1.0, 0.7)]
    herm = GridFunction.from_callable(
        spec, lambda X, Y: (X**2 - Y / 2) * np.exp(-(X**2 + Y**2) / 2))
    probes.append(herm * (1 / herm.norm()))
    return probes


def commutator(a: LinearOp, b: LinearOp, f: GridFunction) -> GridFunction:
    return a(b(f)) - b(a(f))


def rel_residual(lhs: GridFunction, rhs: GridFunction, f: GridFunction) -> float:
    return (lhs - rhs).norm() / f.norm()


@dataclass
class BracketReport:
    residuals: dict[tuple[str, str], float] = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def failing(self, tol: float) -> list[tuple[str, str]]:
        return [k for k, v in self.residuals.items() if not v < tol]


def bracket_table_check(ops: Mapping[str, LinearOp], expected: BracketTable,
                        probes: list[GridFunction]) -> BracketReport:
    """Max relative residual of every bracket in ``expected`` over the probes."""
    report = BracketReport()
    for (a, b), rhs_terms in expected.items():
        worst = 0.0
        for f in probes:
            lhs = commutator(ops[a], ops[b], f)
            rhs = f.like(np.zeros_like(f.values))
            for name, c in rhs_terms.items():
                rhs = rhs + ops[name](f) * c
            worst = max(worst, rel_residual(lhs, rhs, f))
        report.residuals[(a, b)] = worst
    return report


def operator_identity_residual(a: LinearOp, b: LinearOp, probes: list[GridFunction]) -> float:
    return max(rel_residual(a(f), b(f), f) for f in probes)


def self_adjoint_residual(op: LinearOp, probes: list[GridFunction]) -> float:
    """Max ``|<f|A g> - <A f|g>|`` over probe pairs (relative to ``|f||g|``)."""
    worst = 0.0
    for f in probes:
        for g in probes:
            d = abs(inner(f, op(g)) - inner(op(f), g)) / (f.norm() * g.norm())
            worst = max(worst, d)
    return worst


def linearity_residual(op: LinearOp, f: GridFunction, g: GridFunction,
                       a: complex = 0.7 - 0.2j, b: complex = -1.3 + 0.5j) -> float:
    lhs = op(f * a + g * b)
    rhs = op(f) * a + op(g) * b
    return (lhs - rhs).norm() / (abs(a) * f.norm() + abs(b) * g.norm())


# ---------------------------------------------------------------------------
# Generators from one-parameter subgroups
# ---------------------------------------------------------------------------

GALILEI_DIRECTIONS = ("theta", "phi", "angle", "b", "v1", "v2", "a1", "a2")
TRANS_DIRECTIONS = ("p1", "p2", "q1", "q2", "theta", "phi", "psi")


@dataclass(frozen=True)
class RepParams:
    """Which representation to differentiate and its physical parameters.

    ``which`` is one of ``galilei_config``, ``galilei_momentum``,
    ``double_ext``, ``triple_ext``; ``physical`` is a :class:`GalileiParams`
    or the extension constants.
    """

    which: str
    physical: object
    convention: GalileiConvention = REPRESENTATION

    def element(self, direction: str, t: float):
        if self.which.startswith("galilei"):
            if direction not in GALILEI_DIRECTIONS:
                raise ValueError(f"unknown Galilei direction {direction!r}")
            kw = {"theta": 0.0, "phi": 0.0, "angle": 0.0, "b": 0.0,
                  "v": [0.0, 0.0], "a": [0.0, 0.0]}
            if direction[0] in "va" and direction[1:].isdigit():
                kw[direction[0]][int(direction[1]) - 1] = t
            else:
                kw[direction] = t
            return GalileiElement(kw["theta"], kw["phi"], kw["angle"], kw["b"],
                                  tuple(kw["v"]), tuple(kw["a"]))
        ext = tuple(self.physical)
        names = TRANS_DIRECTIONS[: 4 + len(ext)]
        if direction not in names:
            raise ValueError(f"unknown direction {direction!r}; expected one of {names}")
        a = [0.0] * len(names)
        a[names.index(direction)] = t
        return TransElement.from_a_coords(a, ext)

    def apply(self, g, f: GridFunction) -> GridFunction:
        if self.which == "galilei_config":
            return apply_galilei_config(g, f, self.physical, self.convention)
        if self.which == "galilei_momentum":
            return apply_galilei_momentum(g, f, self.physical, self.convention)
        if self.which == "double_ext":
            return apply_double(g, f)
        if self.which == "triple_ext":
            return apply_triple(g, f)
        raise ValueError(f"unknown representation {self.which!r}")


def generator_from_rep(rep: RepParams, direction: str, eps: float, f: GridFunction,
                       richardson: bool = False) -> GridFunction:
    """``i [U(eps) - U(-eps)] f / (2 eps)``; with ``richardson`` the eps and
    eps/2 quotients are combined to cancel the eps^2 term."""
    def quotient(e):
        up = rep.apply(rep.element(direction, e), f)
        down = rep.apply(rep.element(direction, -e), f)
        return (up - down) * (1j / (2 * e))
    d = quotient(eps)
    if not richardson:
        return d
    return (quotient(eps / 2) * 4 - d) * (1 / 3)


def convergence_order(rep: RepParams, direction: str, exact: GridFunction, f: GridFunction,
                      eps: float = 0.2) -> tuple[float, float, float]:
    """Errors at eps and eps/2 and the observed order ``log2(e1/e2)``."""
    e1 = (generator_from_rep(rep, direction, eps, f) - exact).norm() / f.norm()
    e2 = (generator_from_rep(rep, direction, eps / 2, f) - exact).norm() / f.norm()
    return e1, e2, math.log2(e1 / e2) if e2 > 0 else math.inf


def galilei_generators(params: GalileiParams,
                       convention: GalileiConvention = REPRESENTATION) -> dict[str, LinearOp]:
    """Analytic ``i dU/dt`` of the configuration-space rep, derived by hand.

    a_j: ``i d_j``; v_1: ``-m x + i s (lam/2m) d_y``; v_2: ``-m y - i s (lam/2m) d_x``
    with ``s`` the shift sign; b: ``(time_sign/2m) lap`` (= H for the default sign); theta, phi: ``-I``.
    """
    m, lam, s = params.m, params.lam, convention.shift_sign
    x, y, dx, dy = position(0), position(1), deriv(0), deriv(1)
    ops = {
        "a1": 1j * dx, "a2": 1j * dy,
        "v1": (-m) * x + (1j * s * lam / (2 * m)) * dy,
        "v2": (-m) * y - (1j * s * lam / (2 * m)) * dx,
        "b": (convention.time_sign / (2 * m)) * laplacian(),
        "theta": -1.0 * IDENTITY, "phi": -1.0 * IDENTITY,
    }
    return {k: _named(v, k) for k, v in ops.items()}
