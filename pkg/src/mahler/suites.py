"""Randomized property suites: root location, the alpha f + beta g measure, invariance, catalog."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .measure import QuadConfig, measure, verify_identity
from .poly import GaussianRational, LaurentPoly
from .roots import Location, classify_gamma, measure_alpha_f_plus_beta_g
from .special import named_constant
from .transform import TransformSpec, identity_catalog, verify_invariance

__all__ = [
    "SuiteReport",
    "random_g",
    "random_unit",
    "random_beta",
    "random_bivariate",
    "random_spec",
    "roots_lemma_suite",
    "alpha_beta_suite",
    "unit_beta_suite",
    "invariance_suite",
    "catalog_suite",
    "run_suite",
    "SUITES",
]

# primitive Pythagorean triples give exact rational points on the circle
_TRIPLES = ((3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29), (9, 40, 41))


@dataclass
class SuiteReport:
    name: str
    count: int
    violations: int
    seed: int
    stats: dict = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {"name": self.name, "count": self.count, "violations": self.violations,
                "seed": self.seed, "passed": self.passed, "stats": self.stats,
                "failures": self.failures[:20]}


def random_unit(rng: np.random.Generator) -> GaussianRational:
    """An exact unit: a power of i, optionally times a Pythagorean point."""
    u = (GaussianRational(1), GaussianRational(0, 1), GaussianRational(-1), GaussianRational(0, -1))[
        int(rng.integers(4))]
    if rng.random() < 0.6:
        a, b, c = _TRIPLES[int(rng.integers(len(_TRIPLES)))]
        if rng.random() < 0.5:
            a, b = b, a
        u = u * GaussianRational(Fraction(a, c), Fraction(b, c))
    return u


def random_g(rng: np.random.Generator, max_degree: int = 3, min_modulus: float = 1.25,
             var: str = "x", real: bool | None = None) -> LaurentPoly:
    """Product of (x - r) over Gaussian-rational roots r with |r| >= min_modulus, times a unit scale."""
    deg = int(rng.integers(0, max_degree + 1))
    real = bool(rng.random() < 0.5) if real is None else real
    x = LaurentPoly.var(var)
    g = LaurentPoly.constant(int(rng.integers(1, 4)) * (1 if rng.random() < 0.5 else -1))
    left = deg
    while left > 0:
        while True:
            a, b = (int(v) for v in rng.integers(-12, 13, size=2))
            if real and (left == 1 or rng.random() < 0.5):
                b = 0
            if math.hypot(a, b) / 4 >= min_modulus:
                break
        r = GaussianRational(Fraction(a, 4), Fraction(b, 4))
        if real and b != 0:
            g = g * (x - r) * (x - r.conjugate())
            left -= 2
        else:
            g = g * (x - r)
            left -= 1
    return g


def random_spec(rng: np.random.Generator, var: str = "x", max_degree: int = 2,
                max_k: int = 4) -> TransformSpec:
    g = random_g(rng, max_degree=max_degree, var=var)
    d = g.degree(var) if var in g.variables else 0
    k = int(rng.integers(d + 1, max(d + 1, max_k) + 1))
    return TransformSpec.make(var, g, k, random_unit(rng))


def random_beta(rng: np.random.Generator, gap: float = 1e-3) -> complex:
    """Complex beta with |beta| outside (1 - gap, 1 + gap)."""
    while True:
        r = float(np.exp(rng.uniform(-2.0, 2.0)))
        if abs(r - 1.0) >= gap:
            return r * complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))


def random_bivariate(rng: np.random.Generator, max_degree: int = 3, bound: int = 3) -> LaurentPoly:
    """Random P(x, y) of total degree <= max_degree, integer coefficients in [-bound, bound], x-degree >= 1."""
    while True:
        terms = {}
        for i in range(max_degree + 1):
            for j in range(max_degree + 1 - i):
                if rng.random() < 0.5:
                    c = int(rng.integers(-bound, bound + 1))
                    if c:
                        terms[(i, j)] = c
        p = LaurentPoly(("x", "y"), terms)
        if "x" in p.used_variables() and p.degree("x") >= 1:
            return p


def roots_lemma_suite(count: int = 1000, seed: int = 0, gap: float = 1e-3) -> SuiteReport:
    """f + beta g has all roots inside (|beta| < 1) or outside (|beta| > 1) the circle."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    bad, mixed, margins = [], 0, []
    for i in range(count):
        g = random_g(rng)
        d = g.degree("x") if "x" in g.variables else 0
        k = int(rng.integers(max(d, 1), d + 4))
        lam = random_unit(rng)
        beta = random_beta(rng, gap)
        cls = classify_gamma(g, k, lam, beta)
        want = Location.ALL_INSIDE if abs(beta) < 1 else Location.ALL_OUTSIDE
        margins.append(cls.margin)
        if cls.location == Location.MIXED:
            mixed += 1
        if cls.location != want:
            bad.append({"g": str(g), "k": k, "lambda": str(lam), "beta": [beta.real, beta.imag],
                        "location": cls.location.value})
    return SuiteReport("roots-lemma", count, len(bad), seed,
                       {"mixed": mixed, "min_margin": float(min(margins)) if margins else None},
                       bad, time.perf_counter() - t0)


def unit_beta_suite(count: int = 100, seed: int = 0, tol: float = 1e-9) -> SuiteReport:
    """|beta| = 1 exactly: every root of f + beta g lies on the circle."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    bad, worst = [], 0.0
    for _ in range(count):
        g = random_g(rng)
        d = g.degree("x") if "x" in g.variables else 0
        k = int(rng.integers(max(d, 1), d + 4))
        lam, beta = random_unit(rng), random_unit(rng)
        cls = classify_gamma(g, k, lam, beta)
        dev = float(np.max(np.abs(cls.moduli - 1.0))) if cls.moduli.size else 0.0
        worst = max(worst, dev)
        if dev > tol:
            bad.append({"g": str(g), "k": k, "lambda": str(lam), "beta": str(beta), "deviation": dev})
    return SuiteReport("unit-beta", count, len(bad), seed, {"max_deviation": worst}, bad,
                       time.perf_counter() - t0)


def alpha_beta_suite(count: int = 1000, seed: int = 0, tol: float = 1e-9) -> SuiteReport:
    """Jensen's formula for alpha f + beta g against m(g) + log max(|alpha|, |beta|)."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    bad, worst = [], 0.0
    for _ in range(count):
        g = random_g(rng)
        d = g.degree("x") if "x" in g.variables else 0
        k = int(rng.integers(d + 1, d + 4))
        lam = random_unit(rng)
        alpha, beta = random_beta(rng, 0.0), random_beta(rng, 0.0)
        if rng.random() < 0.1:
            alpha = 0.0
        res = measure_alpha_f_plus_beta_g(g, k, lam, alpha, beta)
        worst = max(worst, res.discrepancy)
        if not res.discrepancy <= tol:
            bad.append({"g": str(g), "k": k, "alpha": [alpha.real, alpha.imag] if alpha else 0,
                        "beta": [beta.real, beta.imag], "discrepancy": res.discrepancy})
    return SuiteReport("alpha-beta", count, len(bad), seed, {"max_discrepancy": worst}, bad,
                       time.perf_counter() - t0)


def invariance_suite(count: int = 20, seed: int = 0, cfg: QuadConfig | None = None) -> SuiteReport:
    """m(P) = m(P~) for random bivariate P and random admissible substitutions in x."""
    rng = np.random.default_rng(seed)
    cfg = cfg or QuadConfig(seed=seed)
    t0 = time.perf_counter()
    bad, worst = [], 0.0
    for i in range(count):
        P = random_bivariate(rng)
        spec = random_spec(rng)
        rep = verify_invariance(P, spec, cfg.with_(seed=(int(cfg.seed) + 2 * i) % 2 ** 64))
        worst = max(worst, rep.difference / rep.tolerance)
        if not rep.passed:
            bad.append({"P": str(P), "spec": spec.describe(), "m_P": rep.m_P.value,
                        "m_P_tilde": rep.m_P_tilde, "difference": rep.difference,
                        "tolerance": rep.tolerance})
    return SuiteReport("invariance", count, len(bad), seed, {"max_difference_over_tolerance": worst},
                       bad, time.perf_counter() - t0)


def catalog_suite(cfg: QuadConfig | None = None, l_value: float | None = None) -> SuiteReport:
    """Every proven identity against its constant; the conjectural family against itself."""
    cfg = cfg or QuadConfig()
    t0 = time.perf_counter()
    rows, bad = [], []
    conj = []
    for rec in identity_catalog():
        if rec.status == "proven":
            rhs = named_constant(rec.rhs).value
            rep = verify_identity(rec.lhs, rhs, cfg)
            rows.append({"key": rec.key, "status": rec.status, "value": rep.value, "stderr": rep.stderr,
                         "rhs": rhs, "difference": rep.difference, "passed": rep.passed})
            if not rep.passed:
                bad.append(rows[-1])
        else:
            res = measure(rec.lhs, cfg)
            row = {"key": rec.key, "status": rec.status, "value": res.value, "stderr": res.stderr}
            if l_value is not None:
                rhs = named_constant(rec.rhs, l_value).value
                row.update(rhs=rhs, difference=abs(res.value - rhs))
            rows.append(row)
            conj.append(res)
    # the conjectural entries are images of one another under the substitution
    spread = 0.0
    for a in conj:
        for b in conj:
            d = abs(a.value - b.value)
            spread = max(spread, d)
            if d > 3.0 * (a.stderr + b.stderr) + cfg.abs_tol:
                bad.append({"key": "conjectural-consistency", "a": a.value, "b": b.value, "difference": d})
    return SuiteReport("catalog", len(rows), len(bad), int(cfg.seed),
                       {"rows": rows, "conjectural_spread": spread}, bad, time.perf_counter() - t0)


SUITES = ("roots-lemma", "invariance", "catalog")


def run_suite(name: str, count: int | None = None, seed: int = 0, cfg: QuadConfig | None = None,
              l_value: float | None = None) -> list[SuiteReport]:
    if name == "roots-lemma":
        n = 1000 if count is None else count
        return [roots_lemma_suite(n, seed), unit_beta_suite(max(1, n // 10), seed),
                alpha_beta_suite(n, seed)]
    if name == "invariance":
        return [invariance_suite(20 if count is None else count, seed, cfg)]
    if name == "catalog":
        return [catalog_suite(cfg, l_value)]
    raise ValueError(f"unknown suite {name!r}; use one of {SUITES}")

