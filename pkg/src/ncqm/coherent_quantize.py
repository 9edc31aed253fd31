"""Coherent states of the extended Galilei group, resolution of the identity,
coherent-state quantization of phase-space symbols and the POV measure.

The phase-space integral is a midpoint rule on a tensor grid in (q, p).
For each momentum node the coherent states of all position nodes are
handled as one block:

* ``direct``: the states are evaluated from the radial fiducial profile and
  the overlaps / synthesis are dense matrix products (the oracle);
* ``fft``: overlaps are a Fourier-space correlation evaluated at the
  off-grid shifts by separable trigonometric sums, O(n_q N^2) per node.

All sums run row-major over p then q, so results are bit-reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np

from .generators import LinearOp
from .group_core import GalileiElement, GalileiParams
from .hilbert_grid import (
    J,
    REPRESENTATION,
    GalileiConvention,
    GridFunction,
    GridSpec,
    _dft,
    _idft,
    _warn_off_grid,
    apply_galilei_config,
    gaussian,
    inner,
)

Symbol = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]

# candidate closed forms for the quantized positions, coefficient of d/dx_j
# relative to lam/2m^2, keyed by (sign of x, sign of the derivative term)
Q_FORMS = {
    "x+": (1, +1), "x-": (1, -1),      # x1 +/- (i lam/2m^2) d2 as stated
    "-x+": (-1, +1), "-x-": (-1, -1),
}


@dataclass(frozen=True)
class Fiducial:
    """Rotationally invariant fiducial vector.

    ``radial`` maps squared radius to the unnormalized profile;
    ``normalization`` is the factor making the grid vector a unit vector.
    ``factor``, when given, splits the profile as
    ``radial(u + v) == factor(u) * factor(v)`` (Gaussians), which lets the
    direct quadrature work axis by axis.
    """

    eta: GridFunction
    normalization: float
    radial: Callable[[np.ndarray], np.ndarray]
    factor: Callable[[np.ndarray], np.ndarray] | None = None

    @classmethod
    def from_radial(cls, spec: GridSpec, radial: Callable[[np.ndarray], np.ndarray],
                    factor: Callable[[np.ndarray], np.ndarray] | None = None) -> "Fiducial":
        raw = GridFunction.from_callable(spec, lambda X, Y: radial(X**2 + Y**2))
        c = 1.0 / raw.norm()
        return cls(raw * c, c, radial, factor)

    @classmethod
    def gaussian(cls, spec: GridSpec, width: float = 1.0) -> "Fiducial":
        def factor(u):
            return np.exp(-u / (2 * width**2))
        return cls.from_radial(spec, lambda r2: np.exp(-r2 / (2 * width**2)), factor)

    def at(self, r2: np.ndarray) -> np.ndarray:
        return self.normalization * self.radial(r2)

    def ring_residual(self, radii=(0.5, 1.0, 1.5, 2.0, 2.5), n_angles: int = 16) -> float:
        """Spread of the trigonometric interpolant of the grid vector on rings,
        relative to its maximum."""
        spec = self.eta.spec
        coeffs = _dft(self.eta.values)
        ang = np.linspace(0, 2 * math.pi, n_angles, endpoint=False)
        worst = 0.0
        for r in radii:
            e1 = np.exp(1j * np.outer(r * np.cos(ang), spec.k))
            e2 = np.exp(1j * np.outer(r * np.sin(ang), spec.k))
            vals = np.einsum("ak,kl,al->a", e1, coeffs, e2) / spec.n**2
            worst = max(worst, np.ptp(vals.real) + np.abs(vals.imag).max())
        return worst / np.abs(self.eta.values).max()


@dataclass(frozen=True)
class PhaseGrid:
    """Midpoint tensor grid on ``[-lq, lq)^2 x [-lp, lp)^2``."""

    nq: int = 24
    np_: int = 24
    lq: float = 6.0
    lp: float = 6.0

    @property
    def q(self) -> np.ndarray:
        d = 2 * self.lq / self.nq
        return -self.lq + d * (np.arange(self.nq) + 0.5)

    @property
    def p(self) -> np.ndarray:
        d = 2 * self.lp / self.np_
        return -self.lp + d * (np.arange(self.np_) + 0.5)

    @property
    def weight(self) -> float:
        return (2 * self.lq / self.nq) ** 2 * (2 * self.lp / self.np_) ** 2

    @property
    def volume(self) -> float:
        return (2 * self.lq) ** 2 * (2 * self.lp) ** 2

    @property
    def size(self) -> int:
        return self.nq**2 * self.np_**2

    def doubled(self) -> "PhaseGrid":
        return PhaseGrid(2 * self.nq, 2 * self.np_, self.lq, self.lp)


def section_beta(q, p, m: float) -> GalileiElement:
    return GalileiElement(0.0, 0.0, 0.0, 0.0,
                          (p[0] / m, p[1] / m), (float(q[0]), float(q[1])))


def _cs_shift(p, params: GalileiParams, convention: GalileiConvention) -> np.ndarray:
    # extra displacement (s lam / 2m^2) J p of the coherent-state argument
    return convention.shift_sign * params.lam / (2 * params.m**2) * (J @ np.asarray(p, float))


def coherent_state(fid: Fiducial, q, p, params: GalileiParams,
                   convention: GalileiConvention = REPRESENTATION) -> GridFunction:
    """``exp(i (x + q/2).p) eta(x + q + s (lam/2m^2) J p)`` with ``s`` the
    convention's shift sign, evaluated from the radial profile."""
    spec = fid.eta.spec
    d = np.asarray(q, float) + _cs_shift(p, params, convention)
    _warn_off_grid(fid.eta, d)
    X, Y = spec.mesh("x")
    phase = np.exp(1j * ((X + q[0] / 2) * p[0] + (Y + q[1] / 2) * p[1]))
    return GridFunction(spec, phase * fid.at((X + d[0]) ** 2 + (Y + d[1]) ** 2))


def covariance_residual(fid: Fiducial, q, p, params: GalileiParams,
                        convention: GalileiConvention = REPRESENTATION) -> float:
    """Max pointwise gap between the closed form and the representation
    applied to the fiducial along the section."""
    a = coherent_state(fid, q, p, params, convention)
    b = apply_galilei_config(section_beta(q, p, params.m), fid.eta, params, convention)
    return float(np.abs(a.values - b.values).max())


# ---------------------------------------------------------------------------
# Quadrature engine
# ---------------------------------------------------------------------------


def standard_symbols() -> dict[str, Symbol]:
    return {
        "1": lambda q1, q2, p1, p2: np.ones(np.broadcast(q1, q2, p1, p2).shape),
        "q1": lambda q1, q2, p1, p2: np.broadcast_to(q1, np.broadcast(q1, q2, p1, p2).shape),
        "q2": lambda q1, q2, p1, p2: np.broadcast_to(q2, np.broadcast(q1, q2, p1, p2).shape),
        "p1": lambda q1, q2, p1, p2: np.broadcast_to(p1, np.broadcast(q1, q2, p1, p2).shape),
        "p2": lambda q1, q2, p1, p2: np.broadcast_to(p2, np.broadcast(q1, q2, p1, p2).shape),
    }


@dataclass(frozen=True)
class Quantizer:
    fiducial: Fiducial
    grid: PhaseGrid = PhaseGrid()
    params: GalileiParams = GalileiParams(1.0, 0.5)
    convention: GalileiConvention = REPRESENTATION
    method: str = "direct"

    def __post_init__(self):
        if self.method not in ("direct", "fft"):
            raise ValueError(f"method must be 'direct' or 'fft', got {self.method!r}")

    @property
    def spec(self) -> GridSpec:
        return self.fiducial.eta.spec

    # -- per-momentum blocks ------------------------------------------------

    def _node(self, p):
        """Per-momentum data shared by overlaps and synthesis.

        The q-dependent phase ``exp(i q.p/2)`` and x-dependent phase
        ``exp(i x.p)`` are kept apart from the shifted fiducial so that the
        direct path works with a real matrix of shifted profiles.
        """
        spec, q = self.spec, self.grid.q
        d = _cs_shift(p, self.params, self.convention)
        X, Y = spec.mesh("x")
        node = {
            "qphase": np.exp(-0.5j * (q[:, None] * p[0] + q[None, :] * p[1])),
            "xphase": np.exp(1j * (X * p[0] + Y * p[1])),
        }
        if self.method == "direct":
            nq, N = len(q), spec.n
            u = (spec.x[None, :] + (q + d[0])[:, None]) ** 2      # (q1 node, x)
            v = (spec.x[None, :] + (q + d[1])[:, None]) ** 2      # (q2 node, y)
            fac = self.fiducial.factor
            if fac is not None:
                node["A"] = self.fiducial.normalization * fac(u)
                node["B"] = fac(v)
            else:
                r2 = u[:, None, :, None] + v[None, :, None, :]
                node["R"] = self.fiducial.at(r2).reshape(nq * nq, N * N)
        else:
            node["E1"] = np.exp(-1j * np.outer(q + d[0], spec.k))
            node["E2"] = np.exp(-1j * np.outer(q + d[1], spec.k))
        return node

    @cached_property
    def _eta_hat(self) -> np.ndarray:
        return _dft(self.fiducial.eta.values)

    def _overlaps_at(self, node, G: np.ndarray) -> np.ndarray:
        """<eta_{q,p}|g> for all q nodes and inputs, shape (nq, nq, n_in)."""
        spec, nq = self.spec, self.grid.nq
        Gp = np.conj(node["xphase"])[None] * G
        if "A" in node:
            C = np.einsum("ax,nxy,by->abn", node["A"], Gp, node["B"], optimize=True) * spec.h**2
        elif self.method == "direct":
            Gm = Gp.reshape(len(G), -1)
            R = node["R"]
            re = R @ np.ascontiguousarray(Gm.real.T)
            im = R @ np.ascontiguousarray(Gm.imag.T)
            C = (re + 1j * im).reshape(nq, nq, len(G)) * spec.h**2
        else:
            # Parseval: h^2 sum_x eta(x+d) g_p(x) == (h^2/N^2) sum_k conj(eta_hat) g_hat e^{-ik.d}
            A = np.conj(self._eta_hat)[None] * np.stack([_dft(g) for g in Gp])
            C = np.einsum("ak,nkl,bl->abn", node["E1"], A, node["E2"], optimize=True)
            C *= spec.h**2 / spec.n**2
        return C * node["qphase"][:, :, None]

    def _synthesize_at(self, node, coeffs: np.ndarray) -> np.ndarray:
        """sum_q coeffs[q, j] eta_{q,p}, shape (n_out, N, N)."""
        spec, nq = self.spec, self.grid.nq
        n_out = coeffs.shape[-1]
        b = coeffs * np.conj(node["qphase"])[:, :, None]
        if "A" in node:
            u = np.einsum("abn,ax,by->nxy", b, node["A"], node["B"], optimize=True)
        elif self.method == "direct":
            bm = b.reshape(nq * nq, n_out).T
            R = node["R"]
            re = np.ascontiguousarray(bm.real) @ R
            im = np.ascontiguousarray(bm.imag) @ R
            u = (re + 1j * im).reshape(n_out, spec.n, spec.n)
        else:
            B = np.einsum("ak,abn,bl->nkl", np.conj(node["E1"]), b, np.conj(node["E2"]),
                          optimize=True)
            u = np.stack([_idft(self._eta_hat * Bj) for Bj in B])
        return node["xphase"][None] * u

    # -- public passes --------------------------------------------------------

    def overlaps(self, inputs: Sequence[GridFunction]) -> np.ndarray:
        """<eta_{q,p}|g>, shape (np, np, nq, nq, n_in) indexed [p1, p2, q1, q2, j]."""
        G = np.stack([g.values for g in inputs])
        P = self.grid.p
        out = np.empty((len(P), len(P), self.grid.nq, self.grid.nq, len(G)), complex)
        for i, p1 in enumerate(P):
            for j, p2 in enumerate(P):
                out[i, j] = self._overlaps_at(self._node((p1, p2)), G)
        return out

    def apply_raw(self, symbols: Mapping[str, Symbol | np.ndarray],
                  inputs: Sequence[GridFunction]) -> dict[str, list[GridFunction]]:
        """Unnormalized ``sum w f(q,p) <eta_{q,p}|g> eta_{q,p}`` for every
        symbol and input in one sweep over phase space. A symbol may be a
        callable of (q1, q2, p1, p2) or a precomputed (np, np, nq, nq) array."""
        spec, gr = self.spec, self.grid
        G = np.stack([g.values for g in inputs])
        names = list(symbols)
        Q1, Q2 = np.meshgrid(gr.q, gr.q, indexing="ij")
        acc = {s: np.zeros((len(G), spec.n, spec.n), complex) for s in names}
        for i, p1 in enumerate(gr.p):
            for j, p2 in enumerate(gr.p):
                node = self._node((p1, p2))
                C = self._overlaps_at(node, G)
                vals = []
                for s in names:
                    f = symbols[s]
                    v = f[i, j] if isinstance(f, np.ndarray) else f(Q1, Q2, p1, p2)
                    vals.append(gr.weight * np.asarray(v)[:, :, None] * C)
                out = self._synthesize_at(node, np.concatenate(vals, axis=-1))
                for k, s in enumerate(names):
                    acc[s] += out[k * len(G):(k + 1) * len(G)]
        return {s: [GridFunction(spec, v) for v in acc[s]] for s in names}

    @cached_property
    def normalization(self) -> float:
        """Measured scalar c with quantize(1) = c I, read off on a centred unit Gaussian."""
        g = gaussian(self.spec)
        out = self.apply_raw({"1": standard_symbols()["1"]}, [g])["1"][0]
        return float(inner(g, out).real / inner(g, g).real)

    def apply(self, symbols, inputs) -> dict[str, list[GridFunction]]:
        c = self.normalization
        return {s: [v * (1 / c) for v in vs] for s, vs in self.apply_raw(symbols, inputs).items()}

    def quantize(self, symbol: Symbol, label: str = "O_f") -> LinearOp:
        return LinearOp(lambda g: self.apply({"f": symbol}, [g])["f"][0], label)


def quantize(symbol: Symbol, fid: Fiducial, pg: PhaseGrid, params: GalileiParams,
             method: str = "direct") -> LinearOp:
    return Quantizer(fid, pg, params, method=method).quantize(symbol)


# ---------------------------------------------------------------------------
# Resolution of the identity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResolutionResult:
    lhs: complex
    rhs_candidate: complex
    ratio: complex
    overlap: complex

    @property
    def constant(self) -> complex:
        """lhs / <f|g>: the measured multiple of the identity."""
        return self.lhs / self.overlap


def resolution_check(quantizer: Quantizer, f: GridFunction, g: GridFunction) -> ResolutionResult:
    """Quadrature of ``sum w <f|chi_qp><chi_qp|g>`` against ``(2 pi)^2 |chi|^2 <f|g>``."""
    return resolution_checks(quantizer, [(f, g)])[0]


def resolution_checks(quantizer: Quantizer,
                      pairs: Sequence[tuple[GridFunction, GridFunction]]) -> list[ResolutionResult]:
    """:func:`resolution_check` for several pairs from one sweep over phase space."""
    inputs: list[GridFunction] = []
    index = []
    for pair in pairs:
        idx = []
        for v in pair:
            pos = next((i for i, w in enumerate(inputs) if w is v), None)
            if pos is None:
                inputs.append(v)
                pos = len(inputs) - 1
            idx.append(pos)
        index.append(idx)
    ov = quantizer.overlaps(inputs)
    chi2 = quantizer.fiducial.eta.norm() ** 2
    out = []
    for (f, g), (i, j) in zip(pairs, index):
        lhs = quantizer.grid.weight * np.sum(np.conj(ov[..., i]) * ov[..., j])
        fg = inner(f, g)
        rhs = (2 * math.pi) ** 2 * chi2 * fg
        out.append(ResolutionResult(complex(lhs), complex(rhs), complex(lhs / rhs), complex(fg)))
    return out


def boundary_density(quantizer: Quantizer) -> float:
    """Largest phase-space density |<eta_qp|eta>|^2 / (2 pi)^2 on the faces of
    the phase grid (q or p at the outermost node)."""
    ov = quantizer.overlaps([quantizer.fiducial.eta])[..., 0]
    dens = np.abs(ov) ** 2 / (2 * math.pi) ** 2
    faces = [dens[[0, -1]], dens[:, [0, -1]], dens[:, :, [0, -1]], dens[:, :, :, [0, -1]]]
    return float(max(f.max() for f in faces))


# ---------------------------------------------------------------------------
# Quantized operators and their commutators
# ---------------------------------------------------------------------------


def interior_mask(spec: GridSpec, radius: float = 3.0) -> np.ndarray:
    X, Y = spec.mesh("x")
    return (np.abs(X) <= radius) & (np.abs(Y) <= radius)


def interior_residual(lhs: GridFunction, rhs: GridFunction, radius: float = 3.0) -> float:
    """||lhs - rhs|| / ||rhs|| restricted to the box |x_i| <= radius."""
    m = interior_mask(lhs.spec, radius)
    return float(np.linalg.norm((lhs.values - rhs.values)[m]) / np.linalg.norm(rhs.values[m]))


def q_form(name: str, axis: int, lam: float, m: float, g: GridFunction) -> GridFunction:
    """Candidate closed form for the quantized q_{axis+1} applied to ``g``."""
    from .generators import deriv, position
    sx, sd = Q_FORMS[name]
    t = lam / (2 * m**2)
    if axis == 0:
        op = sx * position(0) + (1j * sd * t) * deriv(1)
    else:
        op = sx * position(1) - (1j * sd * t) * deriv(0)
    return op(g)


@dataclass
class CommutatorEntry:
    pair: tuple[str, str]
    coefficient: complex        # fit of [A, B] g against i g
    residual: float             # interior misfit of that fit, relative to |g|


def _fit_i(out: GridFunction, g: GridFunction, radius: float = 3.0) -> tuple[complex, float]:
    m = interior_mask(g.spec, radius)
    ig = 1j * g.values[m]
    c = np.vdot(ig, out.values[m]) / np.vdot(ig, ig)
    res = np.linalg.norm(out.values[m] - c * ig) / np.linalg.norm(g.values[m])
    return complex(c), float(res)


COMMUTATOR_PAIRS = (("q1", "q2"), ("q1", "p1"), ("q2", "p2"), ("q1", "p2"),
                    ("q2", "p1"), ("p1", "p2"))


def quantized_commutators(quantizer: Quantizer, probes: Sequence[GridFunction],
                          pairs=COMMUTATOR_PAIRS,
                          first: Mapping[str, list[GridFunction]] | None = None,
                          ) -> dict[tuple[str, str], list[CommutatorEntry]]:
    """Two sweeps: quantize the coordinate symbols on the probes, then on the
    results; commutators are assembled from the stored products. ``first``
    may carry an already computed first sweep on ``probes``."""
    syms = {k: v for k, v in standard_symbols().items() if k != "1"}
    if first is None:
        first = quantizer.apply(syms, probes)
    names = list(syms)
    stacked = [first[s][i] for s in names for i in range(len(probes))]
    second = quantizer.apply(syms, stacked)

    def prod(a, b, i):          # A (B g_i)
        return second[a][names.index(b) * len(probes) + i]

    table = {}
    for a, b in pairs:
        entries = []
        for i, g in enumerate(probes):
            c, r = _fit_i(prod(a, b, i) - prod(b, a, i), g)
            entries.append(CommutatorEntry((a, b), c, r))
        table[(a, b)] = entries
    return table


def fit_q_operator(out: GridFunction, g: GridFunction, axis: int, radius: float = 3.0):
    """Least-squares ``out ~ a x_axis g + b d_other g`` on the interior; returns (a, b)."""
    from .generators import deriv, position
    m = interior_mask(g.spec, radius)
    other = 1 - axis
    cols = np.stack([position(axis)(g).values[m], deriv(other)(g).values[m]], axis=1)
    sol, *_ = np.linalg.lstsq(cols, out.values[m], rcond=None)
    return complex(sol[0]), complex(sol[1])


# ---------------------------------------------------------------------------
# POV measure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned box in (q1, q2, p1, p2); ``None`` is the empty set."""

    lo: tuple[float, float, float, float]
    hi: tuple[float, float, float, float]

    def indicator(self, q1, q2, p1, p2) -> np.ndarray:
        inside = np.ones(np.broadcast(q1, q2, p1, p2).shape, bool)
        for c, lo, hi in zip((q1, q2, p1, p2), self.lo, self.hi):
            inside &= (np.asarray(c) >= lo) & (np.asarray(c) < hi)
        return inside.astype(float)

    @classmethod
    def everything(cls) -> "Rectangle":
        inf = math.inf
        return cls((-inf,) * 4, (inf,) * 4)


def pov_measure(delta: Rectangle | None, quantizer: Quantizer) -> LinearOp:
    """``a(delta) = sum_{nodes in delta} w |eta_qp><eta_qp|`` scaled like quantize."""
    if delta is None:
        return LinearOp(lambda g: g * 0.0, "a(empty)")
    return quantizer.quantize(delta.indicator, f"a({delta.lo}..{delta.hi})")
