"""Verification suites behind ``ncqm run``.

Each suite appends :class:`Record` objects to a :class:`Report`. Record ids
start with the acceptance-criterion number (``c1.`` .. ``c12.``); timings
are kept out of the records so reports are reproducible byte for byte.
"""
from __future__ import annotations

import json
import math
import platform
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np
import scipy

from . import coadjoint as co
from . import group_core as gc
from . import matrix_rep as mr
from .coherent_quantize import (
    COMMUTATOR_PAIRS,
    Fiducial,
    PhaseGrid,
    Quantizer,
    Rectangle,
    boundary_density,
    coherent_state,
    fit_q_operator,
    interior_residual,
    pov_measure,
    q_form,
    quantized_commutators,
    resolution_check,
    resolution_checks,
    standard_symbols,
)
from .config import RunConfig
from .generators import (
    IDENTITY,
    RepParams,
    bracket_table_check,
    convergence_order,
    deriv,
    double_ext_ops,
    double_table,
    galilei_generators,
    galilei_table,
    ncqm_ops,
    ncqm_table,
    standard_probes,
    triple_ext_ops,
    triple_table,
)
from .hilbert_grid import (
    GridFunction,
    GridSpec,
    apply_double,
    apply_galilei_config,
    apply_galilei_momentum,
    apply_triple,
    fourier,
    gaussian,
    grid_aligned,
    inner,
)
from .wigner_bridge import (
    FockOperator,
    equivalence_check,
    hs_commutator,
    hs_ops,
    isometry_residual,
    low_level_probes,
    safe_block,
    wigner_map,
)


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, dict):
        return {k: _num(v) for k, v in x.items()}
    return x


@dataclass
class Record:
    id: str
    paper_ref: str
    measured: object
    expected: object
    tolerance: float | None
    passed: bool
    quantity: bool = False      # a physical value (compared against baselines), not a residual

    def as_dict(self) -> dict:
        return {"id": self.id, "paper_ref": self.paper_ref, "measured": _num(self.measured),
                "expected": _num(self.expected), "tolerance": _num(self.tolerance),
                "pass": bool(self.passed)}


@dataclass
class Report:
    suite: str
    config: RunConfig
    records: list[Record] = field(default_factory=list)
    elapsed: dict[str, float] = field(default_factory=dict)
    started: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    # -- record constructors ------------------------------------------------

    def below(self, id, ref, measured, tol):
        self.records.append(Record(id, ref, float(measured), 0.0, tol, bool(measured < tol)))

    def near(self, id, ref, measured, expected, tol, rel=False, quantity=True):
        scale = abs(expected) if rel else 1.0
        ok = abs(measured - expected) <= tol * scale
        self.records.append(Record(id, ref, float(measured), expected, tol, bool(ok), quantity))

    def at_least(self, id, ref, measured, bound):
        self.records.append(Record(id, ref, float(measured), f">= {bound}", None,
                                   bool(measured >= bound)))

    def exact(self, id, ref, measured, expected):
        self.records.append(Record(id, ref, measured, expected, 0.0, measured == expected))

    def timed(self, id, ref, seconds, budget):
        self.elapsed[id] = seconds
        self.records.append(Record(id, ref, "within budget" if seconds < budget else "over budget",
                                   f"< {budget} s", None, seconds < budget))

    def add(self, record: Record):
        self.records.append(record)

    # -- output ---------------------------------------------------------------

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def header(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config.echo(),
            "environment": {"python": platform.python_version(), "numpy": np.__version__,
                            "scipy": scipy.__version__, "platform": platform.platform()},
            "n_records": len(self.records),
            "pass": self.passed,
            # the only non-reproducible field
            "timestamp": {"started": self.started,
                          "elapsed_s": {k: round(v, 3) for k, v in self.elapsed.items()}},
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps(self.header())]
        lines += [json.dumps(r.as_dict()) for r in self.records]
        return "\n".join(lines) + "\n"


@dataclass
class Context:
    cfg: RunConfig
    report: Report
    cache: dict = field(default_factory=dict)

    @property
    def spec(self) -> GridSpec:
        return GridSpec(self.cfg.n, self.cfg.l)

    @property
    def params(self) -> gc.GalileiParams:
        return gc.GalileiParams(self.cfg.m, self.cfg.lam)

    @property
    def ext2(self):
        return (self.cfg.alpha, self.cfg.beta)

    @property
    def ext3(self):
        return (self.cfg.alpha, self.cfg.beta, self.cfg.gamma)

    def rng(self, offset: int = 0) -> np.random.Generator:
        return np.random.default_rng(self.cfg.seed + offset)

    def dump(self, name: str, f: GridFunction):
        if self.cfg.dump_states:
            d = Path(self.cfg.dump_states)
            d.mkdir(parents=True, exist_ok=True)
            f.save(d / f"{self.report.suite}_{name}.bin")

    def quantizer(self, method: str | None = None) -> Quantizer:
        method = method or ("fft" if self.cfg.fast else "direct")
        if method not in self.cache:
            pg = PhaseGrid(self.cfg.phase_n, self.cfg.phase_n, self.cfg.phase_l, self.cfg.phase_l)
            self.cache[method] = Quantizer(Fiducial.gaussian(self.spec), pg, self.params,
                                           method=method)
        return self.cache[method]


def _gal_diff(g, h) -> float:
    return float(np.abs(g.as_array() - h.as_array()).max())


def _trans_diff(g, h) -> float:
    return float(np.abs(g.as_array() - h.as_array()).max())


# ---------------------------------------------------------------------------
# group: criteria 1 and 2
# ---------------------------------------------------------------------------


def suite_group(ctx: Context):
    R, rng, params = ctx.report, ctx.rng(), ctx.params
    t0 = time.perf_counter()
    e = gc.GALILEI_IDENTITY
    worst = {"assoc": 0.0, "identity": 0.0, "inverse": 0.0}
    for _ in range(1000):
        g, h, k = (gc.random_galilei(rng) for _ in range(3))
        comp = lambda a, b: gc.compose_galilei(a, b, params)    # noqa: E731
        worst["assoc"] = max(worst["assoc"], _gal_diff(comp(comp(g, h), k), comp(g, comp(h, k))))
        worst["identity"] = max(worst["identity"], _gal_diff(comp(g, e), g), _gal_diff(comp(e, g), g))
        gi = gc.inverse_galilei(g, params)
        worst["inverse"] = max(worst["inverse"], _gal_diff(comp(g, gi), e), _gal_diff(comp(gi, g), e))
    for key, v in worst.items():
        R.below(f"c1.galilei.{key}", "extended Galilei group law", v, 1e-12)
    for name, ext in (("double", ctx.ext2), ("triple", ctx.ext3)):
        e = gc.TransElement.identity(ext)
        worst = {"assoc": 0.0, "identity": 0.0, "inverse": 0.0}
        for _ in range(1000):
            g, h, k = (gc.random_trans(rng, ext) for _ in range(3))
            c = gc.compose_trans
            worst["assoc"] = max(worst["assoc"], _trans_diff(c(c(g, h), k), c(g, c(h, k))))
            worst["identity"] = max(worst["identity"], _trans_diff(c(g, e), g), _trans_diff(c(e, g), g))
            gi = gc.inverse_trans(g)
            worst["inverse"] = max(worst["inverse"], _trans_diff(c(g, gi), e), _trans_diff(c(gi, g), e))
        for key, v in worst.items():
            R.below(f"c1.{name}.{key}", f"{name}ly extended translation group law", v, 1e-12)
    R.timed("c1.runtime", "plumbing", time.perf_counter() - t0, 2.0)

    exponents = [gc.LocalExponent.of("xi1_gal", params.m), gc.LocalExponent.of("xi2_gal", params.lam),
                 gc.LocalExponent.of("xi"), gc.LocalExponent.of("xi_prime"),
                 gc.LocalExponent.of("xi_doubleprime")]
    for xi in exponents:
        rep = gc.check_exponent_axioms(xi, samples=500, seed=ctx.cfg.seed)
        R.below(f"c2.axioms.{xi.name}", "local exponent axioms", rep.max_residual, 1e-10)
    for a, b in (("xi", "xi_prime"), ("xi_prime", "xi_doubleprime"), ("xi", "xi_doubleprime")):
        w = gc.antisymmetry_witness(gc.LocalExponent.of(a), gc.LocalExponent.of(b),
                                    seed=ctx.cfg.seed + 1)
        R.below(f"c2.witness.{a}-{b}.antisymmetry", "inequivalent extensions of the translation group",
                w.antisymmetry, 1e-12)
        R.at_least(f"c2.witness.{a}-{b}.magnitude", "inequivalent extensions of the translation group",
                   w.magnitude, 1e-3)


# ---------------------------------------------------------------------------
# matrix: criteria 3 and 4
# ---------------------------------------------------------------------------


def _table_diff(a: dict, b: dict) -> float:
    worst = 0.0
    for key in set(a) | set(b):
        x, y = a.get(key, {}), b.get(key, {})
        for name in set(x) | set(y):
            worst = max(worst, abs(x.get(name, 0.0) - y.get(name, 0.0)))
    return worst


def suite_matrix(ctx: Context):
    R, rng = ctx.report, ctx.rng(2)
    for name, ext in (("double", ctx.ext2), ("triple", ctx.ext3)):
        hom = 0.0
        for _ in range(1000):
            g, h = gc.random_trans(rng, ext), gc.random_trans(rng, ext)
            hom = max(hom, float(np.abs(mr.mat_of(g) @ mr.mat_of(h)
                                        - mr.mat_of(gc.compose_trans(g, h))).max()))
        R.below(f"c3.{name}.homomorphism", "matrix realization of the extended group", hom, 1e-12)
        R.exact(f"c3.{name}.structure_constants", "Lie algebra of the extended translation group",
                _table_diff(mr.structure_constants(ext), mr.expected_brackets(ext)), 0.0)
        worst = 0.0
        for _ in range(500):
            g = gc.random_trans(rng, ext)
            s = tuple(rng.uniform(-2, 2, 2))
            a, b = mr.master_factorize(s, g), mr.master_factorize_numeric(s, g)
            worst = max(worst, float(np.abs(np.subtract(a.h_params, b.h_params)).max()),
                        float(np.abs(np.subtract(a.s_out, b.s_out)).max()))
        R.below(f"c4.{name}.master_equation", "master equation of the induced representation",
                worst, 1e-12)


# ---------------------------------------------------------------------------
# coadjoint: criterion 5
# ---------------------------------------------------------------------------


def _random_dual(rng, arity, nonzero=False):
    x = rng.uniform(-2, 2, 4 + arity)
    if nonzero:
        x[4:] = rng.choice([-1, 1], arity) * rng.uniform(0.2, 2, arity)
    return co.DualVector(x)


def suite_coadjoint(ctx: Context):
    R, rng = ctx.report, ctx.rng(3)
    for name, ext in (("double", ctx.ext2), ("triple", ctx.ext3)):
        arity = len(ext)
        worst, changed = 0.0, 0
        for _ in range(500):
            g, F = gc.random_trans(rng, ext), _random_dual(rng, arity)
            worst = max(worst, co.coadjoint_matrix_check(g, F))
            changed += co.invariants(co.coadjoint_act(g, F)) != co.invariants(F)
        R.below(f"c5.{name}.closed_form", "coadjoint action", worst, 1e-12)
        R.exact(f"c5.{name}.invariants_changed", "coadjoint orbit invariants", changed, 0)
        wrong = 0
        for _ in range(100):
            F = _random_dual(rng, arity, nonzero=True)
            point = co.DualVector((0, 0, 0, 0, *F.coords[4:]))
            wrong += co.orbit_rank(point, ext) != 4
        R.exact(f"c5.{name}.generic_rank4_failures", "generic coadjoint orbits are four dimensional",
                wrong, 0)


# ---------------------------------------------------------------------------
# rep: criterion 6
# ---------------------------------------------------------------------------


def _small_galilei(rng, b=True, rotations=True):
    g = gc.random_galilei(rng, angle=False, b=b)
    angle = math.pi / 2 * int(rng.integers(4)) if rotations else 0.0
    return gc.GalileiElement(g.theta, g.phi, angle, g.b / 2,
                             tuple(np.multiply(g.v, 0.5)), tuple(np.multiply(g.a, 0.5)))


def suite_rep(ctx: Context):
    R, rng, params, spec = ctx.report, ctx.rng(4), ctx.params, ctx.spec
    t0 = time.perf_counter()
    F = gaussian(spec, (0.5, -0.3), 1.0)
    G = gaussian(spec, (-0.4, 0.2), 0.8, momentum=(0.3, -0.5))
    Fh = fourier(F)
    unit = law_t = 0.0
    for ext, apply in ((ctx.ext2, apply_double), (ctx.ext3, apply_triple)):
        for _ in range(100):
            g, h = grid_aligned(spec, rng, ext), grid_aligned(spec, rng, ext)
            unit = max(unit, abs(apply(g, G).norm() - G.norm()))
            law_t = max(law_t, (apply(g, apply(h, G)) - apply(gc.compose_trans(g, h), G)).norm()
                        / G.norm())
    law_g = inter = 0.0
    for i in range(20):
        g, h = _small_galilei(rng, b=False, rotations=False), _small_galilei(rng, b=False, rotations=False)
        lhs = apply_galilei_config(g, apply_galilei_config(h, F, params), params)
        law_g = max(law_g, (lhs - apply_galilei_config(gc.compose_galilei(g, h, params), F, params)).norm())
        full = _small_galilei(rng)
        moved = apply_galilei_config(full, F, params)
        unit = max(unit, abs(moved.norm() - F.norm()),
                   abs(apply_galilei_momentum(full, Fh, params).norm() - Fh.norm()))
        inter = max(inter, float(np.abs(fourier(moved).values
                                        - apply_galilei_momentum(full, Fh, params).values).max()))
        if i == 0:
            ctx.dump("fiducial_probe", F)
            ctx.dump("galilei_moved_probe", moved)
    R.below("c6.unitarity", "unitary irreducible representations", unit, 1e-10)
    R.below("c6.translation.rep_law", "representations of the extended translation groups", law_t, 1e-10)
    R.below("c6.galilei_config.rep_law", "configuration-space representation of the Galilei group",
            law_g, 1e-6)
    R.below("c6.fourier_intertwining", "momentum and configuration representations", inter, 1e-6)
    R.timed("c6.runtime", "plumbing", time.perf_counter() - t0, 30.0)


# ---------------------------------------------------------------------------
# generators: criterion 7
# ---------------------------------------------------------------------------

_TRANS_DIRECTIONS = {"p1": "Q1", "p2": "Q2", "q1": "P1", "q2": "P2"}


def suite_generators(ctx: Context):
    R, cfg, spec = ctx.report, ctx.cfg, ctx.spec
    probes = standard_probes(spec)
    m, lam, theta = cfg.m, cfg.lam, cfg.theta
    checks = [
        ("galilei", ncqm_ops(m, theta), galilei_table(m, lam), 1e-6,
         "operator realization of the extended Galilei algebra"),
        ("ncqm", ncqm_ops(m, theta), ncqm_table(theta), 1e-6,
         "noncommutative commutation relations"),
        ("double_s", double_ext_ops(*ctx.ext2, "s"), double_table(*ctx.ext2), 1e-8,
         "operators of the doubly extended translation group"),
        ("double_x", double_ext_ops(*ctx.ext2, "x"), double_table(*ctx.ext2), 1e-8,
         "operators of the doubly extended translation group"),
        ("triple_s", triple_ext_ops(*ctx.ext3, "s"), triple_table(*ctx.ext3), 1e-8,
         "operators of the triply extended translation group"),
        ("triple_r", triple_ext_ops(*ctx.ext3, "r"), triple_table(*ctx.ext3), 1e-8,
         "operators of the triply extended translation group"),
    ]
    for name, ops, table, tol, ref in checks:
        ops = dict(ops, I=IDENTITY)
        R.below(f"c7.brackets.{name}", ref, bracket_table_check(ops, table, probes).max_residual, tol)
    f = gaussian(spec, (0.3, -0.2), 0.9)
    for which, ext, ops in (("double_ext", ctx.ext2, double_ext_ops(*ctx.ext2, "s")),
                            ("triple_ext", ctx.ext3, triple_ext_ops(*ctx.ext3, "r"))):
        rep = RepParams(which, ext)
        for direction, name in _TRANS_DIRECTIONS.items():
            *_, order = convergence_order(rep, direction, ops[name](f), f)
            R.at_least(f"c7.fd_order.{which}.{direction}", "generators of one-parameter subgroups",
                       order, 1.9)
    gens = galilei_generators(ctx.params)
    rep = RepParams("galilei_config", ctx.params)
    for direction in ("a1", "a2", "v1", "v2", "b", "theta", "phi"):
        *_, order = convergence_order(rep, direction, gens[direction](f), f)
        R.at_least(f"c7.fd_order.galilei.{direction}", "generators of one-parameter subgroups",
                   order, 1.9)


# ---------------------------------------------------------------------------
# resolution: criterion 8
# ---------------------------------------------------------------------------


def suite_resolution(ctx: Context):
    R, spec = ctx.report, ctx.spec
    t0 = time.perf_counter()
    quant = ctx.quantizer()
    P = standard_probes(spec)
    pairs = [(P[0], P[0]), (P[0], P[1]), (P[1], P[2]), (P[2], P[3]),
             (gaussian(spec, momentum=(0.5, -0.3)), P[0])]
    odd = GridFunction.from_callable(spec, lambda X, Y: X * np.exp(-(X**2 + Y**2) / 2))
    *results, orth = resolution_checks(quant, pairs + [(P[0], odd)])
    consts = [abs(r.constant) for r in results]
    spread = (max(consts) - min(consts)) / consts[0]
    R.below("c8.constant_spread", "resolution of the identity", spread, 0.01)
    chi2 = quant.fiducial.eta.norm() ** 2
    c = float(np.mean(consts)) / chi2
    candidates = {"(2pi)^2": (2 * math.pi) ** 2, "2pi": 2 * math.pi}
    ratios = {k: c / v for k, v in candidates.items()}
    match = min(ratios, key=lambda k: abs(math.log(ratios[k])))
    R.add(Record("c8.normalization_match", "resolution of the identity (constant)",
                 {"constant": c, "ratio_to_(2pi)^2": ratios["(2pi)^2"],
                  "ratio_to_2pi": ratios["2pi"], "match": match},
                 "one candidate within 1%", 0.01, abs(ratios[match] - 1) < 0.01))
    R.near("c8.constant", "resolution of the identity (constant)", c, (2 * math.pi) ** 2, 0.01,
           rel=True)
    R.timed("c8.runtime", "plumbing", time.perf_counter() - t0, 60.0)
    f, g = P[1], P[3]
    coarse = resolution_check(quant, f, g).lhs
    fine = resolution_check(Quantizer(quant.fiducial, quant.grid.doubled(), quant.params,
                                      method=quant.method), f, g).lhs
    R.below("c8.doubling", "resolution of the identity (quadrature convergence)",
            abs(fine - coarse) / abs(coarse), 2e-3)
    R.below("c8.orthogonal_pair", "resolution of the identity",
            abs(orth.lhs) / (P[0].norm() * odd.norm()), 1e-3)
    R.below("c8.boundary_density", "plumbing", boundary_density(quant), 1e-6)


# ---------------------------------------------------------------------------
# quantize: criteria 9 and 10
# ---------------------------------------------------------------------------


def suite_quantize(ctx: Context):
    R, cfg, spec, params = ctx.report, ctx.cfg, ctx.spec, ctx.params
    t0 = time.perf_counter()
    quant = ctx.quantizer()
    probes = standard_probes(spec)
    syms = {k: v for k, v in standard_symbols().items() if k != "1"}
    first = quant.apply(standard_symbols(), probes)
    R.near("c9.normalization", "coherent-state quantization (normalization)", quant.normalization,
           (2 * math.pi) ** 2, 0.01, rel=True)
    ident = max(interior_residual(out, g) for g, out in zip(probes, first["1"]))
    R.below("c9.identity", "coherent-state quantization of the constant symbol", ident, 5e-3)
    for axis, name in ((0, "p1"), (1, "p2")):
        res = max(interior_residual(out, (-1j * deriv(axis))(g)) for g, out in zip(probes, first[name]))
        R.below(f"c9.{name}.form", "quantized momentum is -i d", res, 0.01)
    for axis, name in ((0, "q1"), (1, "q2")):
        res = {k: max(interior_residual(out, q_form(k, axis, params.lam, params.m, g))
                      for g, out in zip(probes, first[name]))
               for k in ("x+", "x-", "-x+", "-x-")}
        R.below(f"c9.{name}.form_stated", "quantized position x -/+ (i lam/2m^2) d (best of both signs)",
                min(res["x+"], res["x-"]), 0.01)
        best = min(res, key=res.get)
        R.add(Record(f"c9.{name}.form_measured", "quantized position (measured form)",
                     {"form": best, "residual": res[best]}, "any of x+, x-, -x+, -x-", 0.01,
                     res[best] < 0.01))
        a, b = fit_q_operator(first[name][0], probes[0], axis)
        R.near(f"c9.{name}.fit_x_coefficient", "quantized position (multiplication part)", a.real,
               1.0, 0.01)
        R.near(f"c9.{name}.fit_d_coefficient_abs", "quantized position (derivative part)",
               abs(b), params.lam / (2 * params.m**2), 0.01, rel=True)
    for i, g in enumerate(probes[:3]):
        ctx.dump(f"quantized_q1_probe{i}", first["q1"][i])
    cprobes = probes[:2]
    table = quantized_commutators(quant, cprobes,
                                  first={s: first[s][:2] for s in syms})
    theta = params.lam / params.m**2
    targets = {("q1", "q2"): (theta, 0.02, True), ("q1", "p1"): (1.0, 0.02, True),
               ("q2", "p2"): (1.0, 0.02, True), ("q1", "p2"): (0.0, 0.02, False),
               ("q2", "p1"): (0.0, 0.02, False), ("p1", "p2"): (0.0, 1e-3, False)}
    for pair in COMMUTATOR_PAIRS:
        expected, tol, rel = targets[pair]
        for i, e in enumerate(table[pair]):
            c = e.coefficient
            ok = (abs(c.real - expected) <= tol * abs(expected)) if rel else abs(c) < tol
            R.add(Record(f"c9.comm.{pair[0]}{pair[1]}.probe{i}",
                         "quantized noncommutative commutation relations",
                         {"symbol": f"[{pair[0]},{pair[1]}]", "probe_id": i,
                          "coefficient_re": c.real, "coefficient_im": c.imag,
                          "residual": e.residual},
                         expected, tol, bool(ok), True))
    budget = 60.0 if quant.method == "fft" else 600.0
    R.timed("c9.runtime", "plumbing", time.perf_counter() - t0, budget)

    # theta -> 0: the derivative coefficient of the quantized q1 is linear in lambda
    g = probes[0]
    lams = (0.4, 0.2, 0.1)
    coeffs = []
    for lam in lams:
        q = Quantizer(quant.fiducial, quant.grid, gc.GalileiParams(cfg.m, lam), method=quant.method)
        _, b = fit_q_operator(q.apply({"q1": standard_symbols()["q1"]}, [g])["q1"][0], g, 0)
        coeffs.append(b.imag)
    slope = float(np.polyfit(lams, coeffs, 1)[0])
    expected = -1 / (2 * cfg.m**2)          # measured sign of the derivative term
    R.near("c10.derivative_slope", "commutative limit of the quantized position", slope, expected,
           0.05, rel=True)
    q0, p0 = (0.6, -0.4), (1.5, 0.8)
    canon = coherent_state(quant.fiducial, q0, p0, gc.GalileiParams(cfg.m, 0.0))
    gaps = [1 - abs(inner(canon, coherent_state(quant.fiducial, q0, p0, gc.GalileiParams(cfg.m, lam))))
            for lam in (0.4, 0.2, 0.1, 0.05)]
    R.add(Record("c10.coherent_state_convergence", "commutative limit of the coherent states",
                 {"gaps": gaps}, "strictly decreasing, last < 1e-3", 1e-3,
                 all(a > b for a, b in zip(gaps, gaps[1:])) and gaps[-1] < 1e-3))


# ---------------------------------------------------------------------------
# pov: criterion 11
# ---------------------------------------------------------------------------


def suite_pov(ctx: Context):
    R, spec = ctx.report, ctx.spec
    quant = ctx.quantizer()
    rng = ctx.rng(11)
    L = ctx.cfg.phase_l
    d1 = Rectangle((-L, -L, -L, -L), (0, L, L, L))
    d2 = Rectangle((0, -L, -L, -L), (L, L, L, L))
    box = Rectangle((-1, -1, -1, -1), (1, 1, 1, 1))
    probes = [gaussian(spec, tuple(rng.uniform(-1, 1, 2)), rng.uniform(0.7, 1.2),
                       momentum=tuple(rng.uniform(-1, 1, 2))) for _ in range(20)]
    outs = quant.apply({"d1": d1.indicator, "d2": d2.indicator, "box": box.indicator,
                        "all": Rectangle.everything().indicator, "1": standard_symbols()["1"]},
                       probes)
    worst_neg = min(inner(f, outs[k][i]).real for i, f in enumerate(probes)
                    for k in ("d1", "d2", "box"))
    R.add(Record("c11.positivity", "positive operator valued measure", worst_neg, ">= 0", None,
                 worst_neg >= 0))
    add = max((outs["d1"][i] + outs["d2"][i] - outs["all"][i]).norm() for i in range(len(probes)))
    R.below("c11.additivity", "positive operator valued measure (finite additivity)", add, 1e-10)
    full = max((outs["all"][i] - outs["1"][i]).norm() for i in range(len(probes)))
    R.below("c11.full_domain_is_identity", "positive operator valued measure (normalization)",
            full, 1e-10)
    R.exact("c11.empty_is_zero", "positive operator valued measure",
            pov_measure(None, quant)(probes[0]).norm(), 0.0)


# ---------------------------------------------------------------------------
# wigner: criterion 12
# ---------------------------------------------------------------------------


def suite_wigner(ctx: Context):
    R, spec, theta = ctx.report, ctx.spec, ctx.cfg.theta
    dim = 32
    rng = ctx.rng(12)
    sup = hs_ops(theta, dim)
    X = FockOperator(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    expect = {("Q1", "Q2"): 1j * theta}
    for a in ("Q1", "Q2"):
        for b in ("P1", "P2"):
            expect[(a, b)] = 1j if a[1] == b[1] else 0.0
    expect[("P1", "P2")] = 0.0
    for (a, b), c in expect.items():
        out = hs_commutator(sup[a], sup[b], X)
        res = np.abs(safe_block(out.matrix) - c * safe_block(X.matrix)).max()
        R.below(f"c12.hs_commutator.{a}{b}", "Hilbert-Schmidt realization of the algebra", res, 1e-10)
    probes = low_level_probes(dim)
    iso = max(isometry_residual(A, B, spec) for A in probes for B in probes)
    R.below("c12.isometry", "Wigner map is unitary", iso, 1e-4)
    ctx.dump("wigner_ground_state", wigner_map(probes[0], spec))
    stated, derived = {}, {}
    for d in (16, 32, 64):
        stated[d] = equivalence_check(theta, d, spec, targets="stated").max_residual
        derived[d] = equivalence_check(theta, d, spec, targets="derived").max_residual
        R.below(f"c12.intertwining_stated.dim{d}", "Wigner map intertwines the two realizations",
                stated[d], 1e-3)
        R.below(f"c12.intertwining_derived.dim{d}",
                "Wigner map intertwines the two realizations (derived images)", derived[d], 1e-3)
    dims = (16, 32, 64)
    R.add(Record("c12.intertwining_stated.monotone", "Wigner map intertwines the two realizations",
                 {f"dim{d}": stated[d] for d in dims}, "strictly decreasing in dim", None,
                 all(stated[a] > stated[b] for a, b in zip(dims, dims[1:]))))


SUITE_FUNCS: dict[str, Callable[[Context], None]] = {
    "group": suite_group,
    "matrix": suite_matrix,
    "coadjoint": suite_coadjoint,
    "rep": suite_rep,
    "generators": suite_generators,
    "resolution": suite_resolution,
    "quantize": suite_quantize,
    "pov": suite_pov,
    "wigner": suite_wigner,
}

_BASELINE_KEYS = ("m", "lam", "alpha", "beta", "gamma", "n", "l", "phase_n", "phase_l", "seed")


def baseline_key(cfg: RunConfig) -> dict:
    return {k: getattr(cfg, k) for k in _BASELINE_KEYS}


def load_baseline() -> dict:
    with resources.files("ncqm").joinpath("data/direct_baseline.json").open() as fh:
        return json.load(fh)


def _quantity_value(r: Record):
    m = r.measured
    return m["coefficient_re"] if isinstance(m, dict) else m


def baseline_values(report: Report) -> dict[str, float]:
    return {r.id: _quantity_value(r) for r in report.records if r.quantity}


def compare_baseline(report: Report, baseline: dict, rel: float = 1e-3):
    """Fast-path quantities against stored direct-quadrature values:
    ``|fast - direct| <= rel * max(|direct|, 1)``."""
    if baseline.get("config") != baseline_key(report.config):
        report.add(Record("baseline.available", "plumbing", "no stored baseline for this configuration",
                          "stored direct-quadrature baseline", None, True))
        return
    stored = baseline["values"]
    for r in [r for r in report.records if r.quantity and r.id in stored]:
        fast, direct = _quantity_value(r), stored[r.id]
        ok = abs(fast - direct) <= rel * max(abs(direct), 1.0)
        report.add(Record(f"baseline.{r.id}", "plumbing", float(fast), float(direct), rel, bool(ok)))


def run_suite(name: str, cfg: RunConfig, baseline: dict | None = None) -> Report:
    if name != "all" and name not in SUITE_FUNCS:
        raise ValueError(f"unknown suite {name!r}")
    report = Report(name, cfg)
    ctx = Context(cfg, report)
    for suite in (SUITE_FUNCS if name == "all" else [name]):
        t0 = time.perf_counter()
        SUITE_FUNCS[suite](ctx)
        report.elapsed[f"suite.{suite}"] = time.perf_counter() - t0
    if cfg.fast:
        compare_baseline(report, load_baseline() if baseline is None else baseline)
    return report
