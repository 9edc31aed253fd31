"""Discretised L^2(R^2) on a uniform periodic grid and the unitary
representation operators of the extended groups acting on it.

Grid nodes are ``x_j = -L + j h`` with ``h = 2L/n``; momentum nodes are
``k_j = (j - n/2) pi/L``. Axis 0 of every array is the first coordinate.
The Fourier transform is ``fhat(k) = (1/2pi) int f(x) exp(-i k.x) dx``,
discretised so that it is exactly unitary between the two grids.
"""
from __future__ import annotations

import math
import struct
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .group_core import GalileiElement, GalileiParams, TransElement

J = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class GridSpec:
    n: int = 128
    l: float = 10.0

    def __post_init__(self):
        if self.n < 8 or self.n & (self.n - 1):
            raise ValueError(f"n must be a power of two >= 8, got {self.n}")
        if not self.l > 0:
            raise ValueError(f"L must be positive, got {self.l}")

    @property
    def h(self) -> float:
        return 2 * self.l / self.n

    @property
    def dk(self) -> float:
        return math.pi / self.l

    @property
    def x(self) -> np.ndarray:
        return -self.l + self.h * np.arange(self.n)

    @property
    def k(self) -> np.ndarray:
        return self.dk * (np.arange(self.n) - self.n // 2)

    def mesh(self, space: str = "x") -> tuple[np.ndarray, np.ndarray]:
        axis = self.x if space == "x" else self.k
        return np.meshgrid(axis, axis, indexing="ij")

    def cell(self, space: str = "x") -> float:
        return self.h**2 if space == "x" else self.dk**2


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a function on the position (``space='x'``) or momentum grid."""

    spec: GridSpec
    values: np.ndarray
    space: str = "x"

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != (self.spec.n, self.spec.n):
            raise ValueError(f"expected shape {(self.spec.n,) * 2}, got {v.shape}")
        if self.space not in ("x", "k"):
            raise ValueError(f"space must be 'x' or 'k', got {self.space!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, spec: GridSpec, fn, space: str = "x") -> "GridFunction":
        X, Y = spec.mesh(space)
        return cls(spec, fn(X, Y), space)

    def like(self, values) -> "GridFunction":
        return GridFunction(self.spec, values, self.space)

    def norm(self) -> float:
        return math.sqrt(inner(self, self).real)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        _same(self, other)
        return self.like(self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        _same(self, other)
        return self.like(self.values - other.values)

    def __mul__(self, c) -> "GridFunction":
        return self.like(self.values * c)

    __rmul__ = __mul__

    # flat binary: little-endian int64 n, float64 L, then row-major complex128
    def to_bytes(self) -> bytes:
        head = struct.pack("<qd", self.spec.n, self.spec.l)
        return head + np.ascontiguousarray(self.values, dtype="<c16").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "GridFunction":
        n, l = struct.unpack_from("<qd", data)
        vals = np.frombuffer(data, dtype="<c16", offset=16)
        if vals.size != n * n:
            raise ValueError(f"payload holds {vals.size} samples, header says {n}x{n}")
        return cls(GridSpec(int(n), float(l)), vals.reshape(n, n))

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path: str | Path) -> "GridFunction":
        return cls.from_bytes(Path(path).read_bytes())


def _same(f: GridFunction, g: GridFunction):
    if f.spec != g.spec or f.space != g.space:
        raise ValueError(f"grid mismatch: {f.spec}/{f.space} vs {g.spec}/{g.space}")


def inner(f: GridFunction, g: GridFunction) -> complex:
    """``<f|g> = cell * sum conj(f) g`` (conjugate-linear in ``f``)."""
    _same(f, g)
    return complex(f.spec.cell(f.space) * np.vdot(f.values, g.values))


def gaussian(spec: GridSpec, center=(0.0, 0.0), width: float = 1.0,
             momentum=(0.0, 0.0)) -> GridFunction:
    """L^2-normalised Gaussian ``exp(-|x-c|^2 / 2w^2)`` with optional plane-wave factor."""
    def fn(X, Y):
        r2 = (X - center[0]) ** 2 + (Y - center[1]) ** 2
        return (np.exp(-r2 / (2 * width**2) + 1j * (momentum[0] * X + momentum[1] * Y))
                / (math.sqrt(math.pi) * width))
    return GridFunction.from_callable(spec, fn)


# ---------------------------------------------------------------------------
# Fourier transform and spectral helpers
# ---------------------------------------------------------------------------


def _dft(v):
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(v)))


def _idft(v):
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(v)))


def fourier(f: GridFunction) -> GridFunction:
    if f.space != "x":
        raise ValueError("fourier expects a position-space function")
    s = f.spec
    return GridFunction(s, s.h**2 / (2 * math.pi) * _dft(f.values), "k")


def inv_fourier(fhat: GridFunction) -> GridFunction:
    if fhat.space != "k":
        raise ValueError("inv_fourier expects a momentum-space function")
    s = fhat.spec
    return GridFunction(s, 2 * math.pi / s.h**2 * _idft(fhat.values), "x")


def _conjugate_axis(spec: GridSpec, space: str) -> np.ndarray:
    # frequencies dual to the given grid's own spacing, centred ordering
    step = spec.h if space == "x" else spec.dk
    return 2 * math.pi / (spec.n * step) * (np.arange(spec.n) - spec.n // 2)


def shift(f: GridFunction, c) -> GridFunction:
    """``f(y + c)`` on the function's own grid.

    Grid-aligned shifts are exact circular rolls; others use the Fourier
    phase ``exp(i w.c)``, exact for band-limited periodic data.
    """
    c = np.asarray(c, dtype=float)
    if not c.any():
        return f
    step = f.spec.h if f.space == "x" else f.spec.dk
    steps = c / step
    if np.allclose(steps, np.round(steps), rtol=0, atol=1e-12):
        return f.like(np.roll(f.values, tuple(-int(round(s)) for s in steps), axis=(0, 1)))
    w = _conjugate_axis(f.spec, f.space)
    phase = np.exp(1j * (w[:, None] * c[0] + w[None, :] * c[1]))
    return f.like(_idft(phase * _dft(f.values)))


def _warn_off_grid(f: GridFunction, c):
    extent = f.spec.l if f.space == "x" else math.pi / f.spec.h
    if np.max(np.abs(c)) > extent / 2:
        warnings.warn(f"shift {tuple(np.round(c, 3))} moves support towards the grid edge",
                      RuntimeWarning, stacklevel=3)


def rotate(f: GridFunction, angle: float) -> GridFunction:
    """``f(R^-1 y)``; exact index permutation for multiples of pi/2 about the origin.

    Other angles fall back to cubic spline resampling (not exact).
    """
    quarter = angle / (math.pi / 2)
    if abs(quarter - round(quarter)) < 1e-12:
        k = int(round(quarter)) % 4
        if k == 0:
            return f
        n = f.spec.n
        idx = np.arange(n) - n // 2                  # centred indices of the nodes
        U, V = np.meshgrid(idx, idx, indexing="ij")
        # R^-1 (u, v) for rotation by k quarter turns
        for _ in range(k):
            U, V = V, -U
        return f.like(f.values[(U + n // 2) % n, (V + n // 2) % n])
    n = f.spec.n
    idx = np.arange(n) - n // 2
    U, V = np.meshgrid(idx, idx, indexing="ij")
    c, s = math.cos(angle), math.sin(angle)
    src = np.stack([c * U + s * V, -s * U + c * V]) + n // 2
    out = (ndimage.map_coordinates(f.values.real, src, order=3, mode="grid-wrap")
           + 1j * ndimage.map_coordinates(f.values.imag, src, order=3, mode="grid-wrap"))
    return f.like(out)


def free_evolution(f: GridFunction, b: float, m: float) -> GridFunction:
    """Multiplier ``exp(i b |k|^2 / 2m)``, i.e. ``exp(-i (b/2m) Laplacian) f``."""
    if b == 0:
        return f
    kx = _conjugate_axis(f.spec, "x")
    K2 = kx[:, None] ** 2 + kx[None, :] ** 2
    return f.like(_idft(np.exp(1j * b / (2 * m) * K2) * _dft(f.values)))


# ---------------------------------------------------------------------------
# Galilei representations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GalileiConvention:
    """Sign and ordering choices in the Galilei representation formulas.

    ``shift_sign``: configuration argument ``x + a + shift_sign * (lam/2m) J v``.
    ``propagate_outer``: free evolution applied after (True) or before (False)
    the boost phase in configuration space.
    ``time_sign``: time-translation multiplier ``exp(i time_sign * b |k|^2 / 2m)``.

    ``REPRESENTATION`` is the combination for which both pictures are true
    representations of the group law and Fourier conjugate to each other;
    ``AS_PRINTED`` keeps the formulas exactly as first written down.
    """

    shift_sign: int = 1
    propagate_outer: bool = True
    time_sign: int = -1


REPRESENTATION = GalileiConvention(1, True, -1)
AS_PRINTED = GalileiConvention(-1, False, 1)


def apply_galilei_config(g: GalileiElement, f: GridFunction, params: GalileiParams,
                         convention: GalileiConvention = REPRESENTATION) -> GridFunction:
    m, lam = params.m, params.lam
    v = np.asarray(g.v, dtype=float)
    a = np.asarray(g.a, dtype=float)
    c = a + convention.shift_sign * lam / (2 * m) * (J @ v)
    _warn_off_grid(f, c)
    out = shift(rotate(f, g.angle), c)
    if not convention.propagate_outer:
        out = free_evolution(out, convention.time_sign * g.b, m)
    X, Y = f.spec.mesh("x")
    boost = np.exp(1j * (g.theta + g.phi + m * ((X + a[0] / 2) * v[0] + (Y + a[1] / 2) * v[1])))
    out = out.like(boost * out.values)
    if convention.propagate_outer:
        out = free_evolution(out, convention.time_sign * g.b, m)
    return out


def apply_galilei_momentum(g: GalileiElement, fhat: GridFunction, params: GalileiParams,
                           convention: GalileiConvention = REPRESENTATION) -> GridFunction:
    if fhat.space != "k":
        raise ValueError("apply_galilei_momentum expects a momentum-space function")
    m, lam = params.m, params.lam
    v = np.asarray(g.v, dtype=float)
    a = np.asarray(g.a, dtype=float)
    _warn_off_grid(fhat, m * v)
    moved = shift(rotate(fhat, g.angle), -m * v)
    K1, K2 = fhat.spec.mesh("k")
    phase = (g.theta + g.phi
             + a[0] * (K1 - m * v[0] / 2) + a[1] * (K2 - m * v[1] / 2)
             + convention.time_sign * g.b / (2 * m) * (K1**2 + K2**2)
             + lam / (2 * m) * (v[0] * K2 - v[1] * K1))
    return moved.like(np.exp(1j * phase) * moved.values)


# ---------------------------------------------------------------------------
# Extended translation groups
# ---------------------------------------------------------------------------


def double_phase(g: TransElement, S1, S2):
    alpha, beta = g.ext
    (q1, q2), (p1, p2) = g.q, g.p
    theta, phi = g.phases
    return (theta + phi - alpha * (q1 * (S1 + p1 / 2) + q2 * (S2 + p2 / 2))
            - beta / 2 * (p1 * S2 - p2 * S1))


def triple_phase(g: TransElement, R1, S2):
    alpha, beta, gamma = g.ext
    (q1, q2), (p1, p2) = g.q, g.p
    theta, phi, psi = g.phases
    return ((theta - alpha * q2 * S2 + alpha * p1 * R1 + alpha / 2 * q1 * p1 - alpha / 2 * q2 * p2)
            + (phi - beta * p1 * S2 - beta / 2 * p1 * p2)
            + (psi + gamma * q2 * R1 + gamma / 2 * q2 * q1))


def apply_double(g: TransElement, f: GridFunction) -> GridFunction:
    """``(U f)(s) = exp(i phase(s)) f(s + p)``."""
    if g.arity != 2:
        raise ValueError(f"apply_double needs arity 2, got {g.arity}")
    _warn_off_grid(f, g.p)
    moved = shift(f, g.p)
    S1, S2 = f.spec.mesh("x")
    return moved.like(np.exp(1j * double_phase(g, S1, S2)) * moved.values)


def apply_triple(g: TransElement, f: GridFunction) -> GridFunction:
    """``(U f)(r1, s2) = exp(i phase) f(r1 + q1, s2 + p2)``."""
    if g.arity != 3:
        raise ValueError(f"apply_triple needs arity 3, got {g.arity}")
    c = (g.q[0], g.p[1])
    _warn_off_grid(f, c)
    moved = shift(f, c)
    R1, S2 = f.spec.mesh("x")
    return moved.like(np.exp(1j * triple_phase(g, R1, S2)) * moved.values)


def grid_aligned(spec: GridSpec, rng: np.random.Generator, ext, max_steps: int = 6,
                 phase_range: float = 2.0) -> TransElement:
    """Random translation-group element whose shifts are whole grid steps."""
    steps = rng.integers(-max_steps, max_steps + 1, size=4) * spec.h
    phases = rng.uniform(-phase_range, phase_range, len(ext))
    return TransElement(tuple(phases), tuple(steps[:2]), tuple(steps[2:]), tuple(ext))
