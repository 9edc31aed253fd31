"""Extended Galilei group, centrally extended translation groups of R^4, and
their local exponents (2-cocycles).

Elements are frozen dataclasses; every operation is a pure function. The
translation-group exponents are bilinear polynomials, so they are written in
plain arithmetic and evaluate exactly when fed :class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

Vec2 = tuple


def rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def _rot(angle, v):
    # exact for angle == 0 (Fraction inputs pass through untouched)
    if angle == 0:
        return (v[0], v[1])
    c, s = math.cos(angle), math.sin(angle)
    return (c * v[0] - s * v[1], s * v[0] + c * v[1])


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def wedge(u, v):
    """``u ∧ v = u1 v2 - u2 v1``."""
    return u[0] * v[1] - u[1] * v[0]


# ---------------------------------------------------------------------------
# Galilei group
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GalileiParams:
    m: float
    lam: float

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError("m must be positive")

    @property
    def theta(self) -> float:
        """Noncommutativity parameter, ``lam / m**2``."""
        return self.lam / self.m**2

    @classmethod
    def from_theta(cls, m: float, theta: float) -> "GalileiParams":
        return cls(m=m, lam=m * m * theta)


@dataclass(frozen=True)
class GalileiElement:
    """``(theta, phi, R, b, v, a)`` with the rotation stored as an angle."""

    theta: float = 0.0
    phi: float = 0.0
    angle: float = 0.0
    b: float = 0.0
    v: Vec2 = (0.0, 0.0)
    a: Vec2 = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(self.v))
        object.__setattr__(self, "a", tuple(self.a))

    @property
    def R(self) -> np.ndarray:
        return rotation(self.angle)

    def as_array(self) -> np.ndarray:
        """Flat ``(theta, phi, cos, sin, b, v1, v2, a1, a2)``; used for residuals."""
        return np.array(
            [self.theta, self.phi, math.cos(self.angle), math.sin(self.angle),
             self.b, *self.v, *self.a], dtype=float)


GALILEI_IDENTITY = GalileiElement()


def galilei_cocycle1(r: GalileiElement, r2: GalileiElement, m: float) -> float:
    """Mass exponent ``(m/2)(a.Rv' - v.Ra' + b' v.Rv')``."""
    Rv2 = _rot(r.angle, r2.v)
    Ra2 = _rot(r.angle, r2.a)
    return m / 2 * (dot(r.a, Rv2) - dot(r.v, Ra2) + r2.b * dot(r.v, Rv2))


def galilei_cocycle2(r: GalileiElement, r2: GalileiElement, lam: float) -> float:
    """Second exponent ``(lam/2) v ∧ Rv'``."""
    return lam / 2 * wedge(r.v, _rot(r.angle, r2.v))


def compose_galilei(g: GalileiElement, g2: GalileiElement,
                    params: GalileiParams) -> GalileiElement:
    Rv2 = _rot(g.angle, g2.v)
    Ra2 = _rot(g.angle, g2.a)
    return GalileiElement(
        theta=g.theta + g2.theta + galilei_cocycle1(g, g2, params.m),
        phi=g.phi + g2.phi + galilei_cocycle2(g, g2, params.lam),
        angle=_wrap(g.angle + g2.angle),
        b=g.b + g2.b,
        v=(g.v[0] + Rv2[0], g.v[1] + Rv2[1]),
        a=(g.a[0] + Ra2[0] + g.v[0] * g2.b, g.a[1] + Ra2[1] + g.v[1] * g2.b),
    )


def _wrap(angle):
    if angle == 0:
        return angle
    return math.remainder(angle, 2 * math.pi)


def inverse_galilei(g: GalileiElement, params: GalileiParams) -> GalileiElement:
    """Solve ``g g' = e`` component by component.

    The non-central part fixes ``R' = R^-1``, ``b' = -b``, ``v' = -R^-1 v`` and
    ``a' = -R^-1 (a - v b)``; the phases then absorb the two cocycles.
    """
    angle = -g.angle
    v2 = _rot(angle, (-g.v[0], -g.v[1]))
    a2 = _rot(angle, (-(g.a[0] - g.v[0] * g.b), -(g.a[1] - g.v[1] * g.b)))
    bare = GalileiElement(0.0, 0.0, angle, -g.b, v2, a2)
    return GalileiElement(
        theta=-g.theta - galilei_cocycle1(g, bare, params.m),
        phi=-g.phi - galilei_cocycle2(g, bare, params.lam),
        angle=angle, b=-g.b, v=v2, a=a2,
    )


# ---------------------------------------------------------------------------
# Extended translation groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransElement:
    """Element of the 1-, 2- or 3-fold central extension of R^4.

    ``phases`` holds ``(theta,)``, ``(theta, phi)`` or ``(theta, phi, psi)``;
    ``ext`` holds the matching extension constants ``(alpha[, beta[, gamma]])``.
    """

    phases: tuple
    q: Vec2
    p: Vec2
    ext: tuple

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(self.phases))
        object.__setattr__(self, "q", tuple(self.q))
        object.__setattr__(self, "p", tuple(self.p))
        object.__setattr__(self, "ext", tuple(self.ext))
        if len(self.phases) != len(self.ext) or not 1 <= len(self.ext) <= 3:
            raise ValueError(
                f"phase count {len(self.phases)} does not match extension "
                f"arity {len(self.ext)}")

    @property
    def arity(self) -> int:
        return len(self.ext)

    @classmethod
    def identity(cls, ext: Sequence[float]) -> "TransElement":
        return cls((0.0,) * len(ext), (0.0, 0.0), (0.0, 0.0), tuple(ext))

    def as_array(self) -> np.ndarray:
        return np.array([*self.phases, *self.q, *self.p], dtype=float)

    # group-parameter vector in the (a1, ..., a7) naming: p1, p2, q1, q2, phases
    def a_coords(self) -> tuple:
        return (*self.p, *self.q, *self.phases)

    @classmethod
    def from_a_coords(cls, a: Sequence[float], ext: Sequence[float]) -> "TransElement":
        n = len(ext)
        if len(a) != 4 + n:
            raise ValueError(f"expected {4 + n} coordinates, got {len(a)}")
        return cls(tuple(a[4:]), (a[2], a[3]), (a[0], a[1]), tuple(ext))


def _trans_phase_increments(g: TransElement, g2: TransElement) -> tuple:
    q, p, q2, p2 = g.q, g.p, g2.q, g2.p
    incs = [g.ext[0] / 2 * (dot(q, p2) - dot(p, q2))]
    if g.arity >= 2:
        incs.append(g.ext[1] / 2 * wedge(p, p2))
    if g.arity >= 3:
        incs.append(g.ext[2] / 2 * wedge(q, q2))
    return tuple(incs)


def _check_pair(g: TransElement, g2: TransElement, arity: int | None = None):
    if g.arity != g2.arity:
        raise ValueError(f"arity mismatch: {g.arity} vs {g2.arity}")
    if arity is not None and g.arity != arity:
        raise ValueError(f"expected arity {arity}, got {g.arity}")
    if g.ext != g2.ext:
        raise ValueError(f"extension constants differ: {g.ext} vs {g2.ext}")


def compose_trans(g: TransElement, g2: TransElement) -> TransElement:
    """Group law for any arity (1: Weyl-Heisenberg, 2: double, 3: triple)."""
    _check_pair(g, g2)
    incs = _trans_phase_increments(g, g2)
    phases = tuple(a + b + c for a, b, c in zip(g.phases, g2.phases, incs))
    return TransElement(
        phases,
        (g.q[0] + g2.q[0], g.q[1] + g2.q[1]),
        (g.p[0] + g2.p[0], g.p[1] + g2.p[1]),
        g.ext,
    )


def compose_double(g: TransElement, g2: TransElement) -> TransElement:
    _check_pair(g, g2, 2)
    return compose_trans(g, g2)


def compose_triple(g: TransElement, g2: TransElement) -> TransElement:
    _check_pair(g, g2, 3)
    return compose_trans(g, g2)


def inverse_trans(g: TransElement) -> TransElement:
    # every exponent is antisymmetric, so xi(g, g^-1) = 0 and phases just negate
    return TransElement(tuple(-x for x in g.phases), (-g.q[0], -g.q[1]),
                        (-g.p[0], -g.p[1]), g.ext)


# ---------------------------------------------------------------------------
# Local exponents
# ---------------------------------------------------------------------------

def _xi(g, g2):
    (q1, q2), (p1, p2) = g.q, g.p
    (r1, r2), (s1, s2) = g2.q, g2.p
    return (q1 * s1 + q2 * s2 - p1 * r1 - p2 * r2) / 2


def _xi_prime(g, g2):
    return (g.p[0] * g2.p[1] - g.p[1] * g2.p[0]) / 2


def _xi_doubleprime(g, g2):
    return (g.q[0] * g2.q[1] - g.q[1] * g2.q[0]) / 2


TRANSLATION_EXPONENTS: dict[str, Callable] = {
    "xi": _xi,
    "xi_prime": _xi_prime,
    "xi_doubleprime": _xi_doubleprime,
}
GALILEI_EXPONENTS = ("xi1_gal", "xi2_gal")


@dataclass(frozen=True)
class LocalExponent:
    """A real linear combination of named exponents, optionally plus a custom term.

    ``terms`` maps a kind (``xi``, ``xi_prime``, ``xi_doubleprime`` on the
    translation group, or ``xi1_gal`` / ``xi2_gal`` on the Galilei group) to its
    coefficient. For the Galilei kinds the coefficient plays the role of
    ``m`` resp. ``lam``. ``extra`` is any callable ``(g, g2) -> float`` added on
    top (used for negative controls).
    """

    terms: Mapping[str, float] = field(default_factory=dict)
    extra: Callable | None = None
    name: str = ""

    def __post_init__(self):
        kinds = set(self.terms)
        unknown = kinds - set(TRANSLATION_EXPONENTS) - set(GALILEI_EXPONENTS)
        if unknown:
            raise ValueError(f"unknown exponent kinds: {sorted(unknown)}")
        if kinds & set(GALILEI_EXPONENTS) and kinds & set(TRANSLATION_EXPONENTS):
            raise ValueError("cannot mix Galilei and translation exponents")
        object.__setattr__(self, "terms", dict(self.terms))

    @classmethod
    def of(cls, kind: str, coeff: float = 1.0) -> "LocalExponent":
        return cls({kind: coeff}, name=kind)

    @property
    def group(self) -> str:
        return "galilei" if set(self.terms) & set(GALILEI_EXPONENTS) else "translation"

    def __call__(self, g, g2):
        return evaluate_exponent(self, g, g2)

    def __add__(self, other: "LocalExponent") -> "LocalExponent":
        return self._combine(other, 1.0)

    def __sub__(self, other: "LocalExponent") -> "LocalExponent":
        return self._combine(other, -1.0)

    def _combine(self, other, sign):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0.0) + sign * c
        a, b = self.extra, other.extra
        extra = None
        if a is not None or b is not None:
            def extra(g, g2):
                return (a(g, g2) if a else 0) + sign * (b(g, g2) if b else 0)
        op = "+" if sign > 0 else "-"
        return LocalExponent(terms, extra, f"({self.name} {op} {other.name})")

    def with_extra(self, fn: Callable, label: str) -> "LocalExponent":
        return LocalExponent(self.terms, fn, f"{self.name} + {label}")


def evaluate_exponent(xi: LocalExponent, g, g2) -> float:
    total = 0
    for kind, coeff in xi.terms.items():
        if coeff == 0:
            continue
        if kind == "xi1_gal":
            total += galilei_cocycle1(g, g2, coeff)
        elif kind == "xi2_gal":
            total += galilei_cocycle2(g, g2, coeff)
        else:
            total += coeff * TRANSLATION_EXPONENTS[kind](g, g2)
    if xi.extra is not None:
        total += xi.extra(g, g2)
    return total


# ---------------------------------------------------------------------------
# Random sampling and the axiom / inequivalence checkers
# ---------------------------------------------------------------------------

SAMPLE_RANGE = 2.0


def random_trans(rng: np.random.Generator, ext: Sequence[float]) -> TransElement:
    x = rng.uniform(-SAMPLE_RANGE, SAMPLE_RANGE, size=4 + len(ext))
    return TransElement(tuple(x[4:]), tuple(x[:2]), tuple(x[2:4]), tuple(ext))


def random_galilei(rng: np.random.Generator, *, angle=True, b=True,
                   phases=True) -> GalileiElement:
    x = rng.uniform(-SAMPLE_RANGE, SAMPLE_RANGE, size=8)
    return GalileiElement(
        theta=x[0] if phases else 0.0,
        phi=x[1] if phases else 0.0,
        angle=float(rng.uniform(-math.pi, math.pi)) if angle else 0.0,
        b=x[3] if b else 0.0,
        v=tuple(x[4:6]),
        a=tuple(x[6:8]),
    )


# The abstract exponents live on the unextended groups; we reuse the element
# types with zero phases and a dummy extension constant.
_BARE_EXT = (1.0,)
_BARE_PARAMS = GalileiParams(1.0, 0.0)


def _bare_sampler(group):
    if group == "galilei":
        return lambda rng: random_galilei(rng, phases=False)
    return lambda rng: random_trans(rng, _BARE_EXT)


def _bare_ops(group):
    if group == "galilei":
        def mul(g, h):
            c = compose_galilei(g, h, _BARE_PARAMS)
            return GalileiElement(0.0, 0.0, c.angle, c.b, c.v, c.a)

        def inv(g):
            i = inverse_galilei(g, _BARE_PARAMS)
            return GalileiElement(0.0, 0.0, i.angle, i.b, i.v, i.a)
        return mul, inv, GALILEI_IDENTITY

    def mul(g, h):
        return TransElement((0.0,), (g.q[0] + h.q[0], g.q[1] + h.q[1]),
                            (g.p[0] + h.p[0], g.p[1] + h.p[1]), _BARE_EXT)

    def inv(g):
        return TransElement((0.0,), (-g.q[0], -g.q[1]), (-g.p[0], -g.p[1]), _BARE_EXT)
    return mul, inv, TransElement.identity(_BARE_EXT)


@dataclass
class AxiomReport:
    name: str
    samples: int
    cocycle: float
    right_identity: float
    left_identity: float
    inverse_symmetry: float

    @property
    def max_residual(self) -> float:
        return max(self.cocycle, self.right_identity, self.left_identity,
                   self.inverse_symmetry)

    def ok(self, tol: float = 1e-10) -> bool:
        return self.max_residual < tol


def check_exponent_axioms(xi: LocalExponent, samples: int = 500,
                          seed: int = 0) -> AxiomReport:
    """Max residuals of the cocycle identity and normalisation conditions.

    For random ``g'', g', g`` evaluates
    ``xi(g'', g') + xi(g'' g', g) - xi(g'', g' g) - xi(g', g)``,
    ``xi(g, e)``, ``xi(e, g)`` and ``xi(g, g^-1) - xi(g^-1, g)``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    draw = _bare_sampler(xi.group)
    mul, inv, e = _bare_ops(xi.group)
    res = np.zeros((samples, 4))
    for i in range(samples):
        g2, g1, g = draw(rng), draw(rng), draw(rng)
        res[i, 0] = abs(xi(g2, g1) + xi(mul(g2, g1), g) - xi(g2, mul(g1, g)) - xi(g1, g))
        res[i, 1] = abs(xi(g, e))
        res[i, 2] = abs(xi(e, g))
        gi = inv(g)
        res[i, 3] = abs(xi(g, gi) - xi(gi, g))
    worst = res.max(axis=0)
    return AxiomReport(xi.name, samples, *map(float, worst))


@dataclass
class WitnessReport:
    pair: tuple
    antisymmetry: float
    magnitude: float
    degenerate: bool

    @property
    def status(self) -> str:
        if self.degenerate:
            return "degenerate (equal exponents)"
        return "inequivalent" if self.antisymmetry < 1e-12 else "inconclusive"


def antisymmetry_witness(xi_a: LocalExponent, xi_b: LocalExponent,
                         samples: int = 200, seed: int = 1) -> WitnessReport:
    """On an abelian group a coboundary is symmetric in its arguments, so an
    antisymmetric, nonvanishing difference ``xi_a - xi_b`` proves the two
    exponents inequivalent."""
    diff = xi_a - xi_b
    rng = np.random.default_rng(seed)
    draw = _bare_sampler(diff.group)
    anti = mag = 0.0
    for _ in range(samples):
        g, g2 = draw(rng), draw(rng)
        d12, d21 = diff(g, g2), diff(g2, g)
        anti = max(anti, float(abs(d12 + d21)))
        mag = max(mag, float(abs(d12)))
    return WitnessReport((xi_a.name, xi_b.name), anti, mag, degenerate=mag == 0.0)
