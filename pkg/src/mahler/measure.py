"""Numerical Mahler measures over the unit torus.

Two integrands are available:

* ``direct``: ``log|P|`` sampled on the torus.
* ``jensen_reduced``: one variable ``v`` is integrated exactly.  At each node
  ``y`` of the remaining torus, ``P(., y)`` is a polynomial in ``v`` and its
  one-variable measure ``log|c_k(y)| + sum_j log+|Delta_j(y)|`` is computed
  from its roots (closed form for degree one).  This removes one dimension
  and replaces the log singularity by a kink.

Nodes are placed on a tensor midpoint grid (angles ``2 pi (j + 1/2) / N``,
which avoids the torsion points where cyclotomic factors vanish) or on a
randomly shifted rank-1 lattice.  Node values are summed chunk by chunk with
numpy's pairwise summation and the chunk sums are combined by a fixed-shape
tree, so the result does not depend on the number of worker threads.

A rational function is measured as ``m(num) - m(den)``, each side with its
own reduction variable and grid.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import lattice as _lat
from .poly import LaurentPoly, PolyError, RationalFn, laurent_normalize
from .roots import jensen_measure_1d, mahler_1d_batch

logger = logging.getLogger(__name__)

__all__ = [
    "QuadConfig",
    "MeasureResult",
    "MeasureError",
    "IdentityReport",
    "measure",
    "measure_direct",
    "measure_jensen_reduced",
    "measure_lattice",
    "estimate_error",
    "verify_identity",
    "tree_sum",
    "choose_reduction_variable",
]

METHODS = ("jensen_reduced", "direct", "lattice_qmc")
_METHOD_ALIASES = {"jensen": "jensen_reduced", "qmc": "lattice_qmc", "lattice": "lattice_qmc"}
DEFAULT_NODES = {1: 1 << 14, 2: 1024}
DEFAULT_LATTICE_NODES = 1 << 18
CHUNK = 1 << 15
STDERR_FLOOR = 1e-12  # binary64 node-evaluation error, relative to 1 + |value|
SKIP_WARN_FRACTION = 1e-3


class MeasureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuadConfig:
    method: str = "jensen_reduced"
    nodes_per_dim: int | None = None      # tensor grids; None picks by dimension
    total_nodes: int = DEFAULT_LATTICE_NODES  # lattice points per shift (rounded up to a prime)
    shifts: int = 10
    seed: int = 0
    reduction_variable: str = "auto"
    pole_epsilon: float = 1e-14           # relative to the largest coefficient magnitude
    grid: str = "auto"                    # auto | tensor | lattice
    threads: int = 1
    abs_tol: float = 1e-9
    nodes: int | None = None              # total budget per pass; overrides the two above


    def __post_init__(self):
        m = _METHOD_ALIASES.get(self.method, self.method)
        if m not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; use one of {METHODS}")
        object.__setattr__(self, "method", m)
        if self.nodes_per_dim is not None and self.nodes_per_dim < 8:
            raise ValueError("nodes_per_dim must be at least 8")
        if self.shifts < 2:
            raise ValueError("shifts must be at least 2 for an error estimate")
        if self.grid not in ("auto", "tensor", "lattice"):
            raise ValueError(f"unknown grid {self.grid!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if self.nodes is not None and self.nodes < 8:
            raise ValueError("nodes must be at least 8")

    def with_(self, **kw) -> "QuadConfig":
        return replace(self, **kw)


@dataclass
class MeasureResult:
    value: float
    stderr: float
    method: str
    nodes_used: int
    nodes_skipped: int
    seed: int
    grid: str = ""
    reduction_variable: str | None = None
    warnings: list[str] = field(default_factory=list)
    parts: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def __str__(self) -> str:
        return f"{self.value:.12f} +/- {self.stderr:.2e} ({self.method}, {self.grid})"


# ---------------------------------------------------------------------------
# summation


def tree_sum(values: Sequence[float]) -> float:
    """Pairwise sum in a fixed order determined only by ``len(values)``."""
    vals = list(values)
    if not vals:
        return 0.0
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return float(vals[0])


def estimate_error(partials: Sequence[float], kind: str = "lattice") -> float:
    """Error estimate from shift averages (lattice) or successive grid averages (tensor).

    For tensor rules ``partials`` is ``(A_N, A_N/2)`` or ``(A_N, A_N/2, A_N/4)``;
    the third value guards against two grids that happen to err alike, by
    scaling the coarser difference for second-order convergence.
    """
    p = np.asarray(partials, dtype=float)
    if kind == "tensor":
        if p.size not in (2, 3):
            raise ValueError("tensor estimate needs (A_N, A_N/2[, A_N/4])")
        err = abs(p[0] - p[1])
        if p.size == 3:
            err = max(err, abs(p[1] - p[2]) / 4.0)
        return float(err)
    if p.size < 2:
        raise ValueError("at least two shift averages are needed")
    return float(np.std(p, ddof=1) / math.sqrt(p.size))


# ---------------------------------------------------------------------------
# float image of a polynomial on the torus


class _TorusPoly:
    """Evaluates a polynomial at torus angles, optionally as coefficients in one variable."""

    def __init__(self, p: LaurentPoly, torus_vars: Sequence[str], reduce_var: str | None):
        self.torus_vars = tuple(torus_vars)
        self.reduce_var = reduce_var
        names = p.variables
        pos = {v: i for i, v in enumerate(names)}
        rows = sorted(p.items(), key=lambda t: t[0])
        exps = np.array([e for e, _ in rows], dtype=np.int64).reshape(len(rows), len(names))
        self.coeffs = np.array([complex(c) for _, c in rows])
        self.scale = float(np.max(np.abs(self.coeffs))) if len(rows) else 0.0
        if reduce_var is not None:
            r = exps[:, pos[reduce_var]]
            self.slot = r - r.min()
            self.degree = int(self.slot.max())
        else:
            self.slot = np.zeros(len(rows), dtype=np.int64)
            self.degree = 0
        self.exps = np.stack([exps[:, pos[v]] if v in pos else np.zeros(len(rows), np.int64)
                              for v in self.torus_vars], axis=1) if self.torus_vars else \
            np.zeros((len(rows), 0), np.int64)

    def _phases(self, theta: np.ndarray) -> np.ndarray:
        B = theta.shape[0]
        T = len(self.coeffs)
        out = np.ones((B, T), dtype=complex)
        for d in range(len(self.torus_vars)):
            col = self.exps[:, d]
            for e in np.unique(col):
                if e == 0:
                    continue
                w = np.exp(1j * float(e) * theta[:, d])
                out[:, col == e] *= w[:, None]
        return out

    def coefficient_rows(self, theta: np.ndarray) -> np.ndarray:
        ph = self._phases(theta) * self.coeffs[None, :]
        rows = np.zeros((theta.shape[0], self.degree + 1), dtype=complex)
        for t in range(len(self.coeffs)):
            rows[:, self.slot[t]] += ph[:, t]
        return rows

    def values(self, theta: np.ndarray) -> np.ndarray:
        ph = self._phases(theta) * self.coeffs[None, :]
        acc = np.zeros(theta.shape[0], dtype=complex)
        for t in range(len(self.coeffs)):
            acc += ph[:, t]
        return acc


def _node_fn(tp: _TorusPoly, eps: float, reduced: bool) -> Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]:
    tol = eps * tp.scale

    if reduced:
        def fn(theta):
            rows = tp.coefficient_rows(theta)
            vals, skipped = mahler_1d_batch(rows, tol)
            return vals, skipped
    else:
        def fn(theta):
            v = np.abs(tp.values(theta))
            skipped = v <= tol
            with np.errstate(divide="ignore"):
                out = np.log(np.where(skipped, 1.0, v))
            return out, skipped
    return fn


# ---------------------------------------------------------------------------
# grids


@dataclass
class _Partial:
    total: float
    used: int
    skipped: int


def _run_chunks(fn, chunks: list[tuple[int, int]], make_theta, threads: int) -> _Partial:
    def work(ch):
        theta = make_theta(*ch)
        vals, skipped = fn(theta)
        vals = np.where(skipped, 0.0, vals)
        bad = ~np.isfinite(vals)
        if bad.any():
            skipped = skipped | bad
            vals = np.where(bad, 0.0, vals)
        return float(np.sum(vals)), int(vals.size - skipped.sum()), int(skipped.sum())

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            res = list(ex.map(work, chunks))
    else:
        res = [work(c) for c in chunks]
    return _Partial(tree_sum([r[0] for r in res]), sum(r[1] for r in res), sum(r[2] for r in res))


def _chunks(total: int) -> list[tuple[int, int]]:
    return [(s, min(s + CHUNK, total)) for s in range(0, total, CHUNK)]


def _tensor_average(fn, dim: int, n: int, threads: int) -> _Partial:
    total = n ** dim

    def make_theta(start, stop):
        idx = np.arange(start, stop, dtype=np.int64)
        cols = []
        for _ in range(dim):
            idx, r = np.divmod(idx, n)
            cols.append(r)
        j = np.stack(cols[::-1], axis=1).astype(float)
        return 2.0 * np.pi * (j + 0.5) / n

    return _run_chunks(fn, _chunks(total), make_theta, threads)


def _lattice_average(fn, dim: int, n: int, shift: np.ndarray, threads: int) -> _Partial:
    z = _lat.cbc_vector(n, dim)

    def make_theta(start, stop):
        return 2.0 * np.pi * _lat.lattice_points(n, z, shift, start, stop)

    return _run_chunks(fn, _chunks(n), make_theta, threads)


def _mean(p: _Partial) -> float:
    if p.used == 0:
        raise MeasureError("every quadrature node was skipped (pole or degenerate polynomial)")
    return p.total / p.used


# ---------------------------------------------------------------------------
# core driver for one polynomial


def _as_poly(P) -> LaurentPoly:
    if isinstance(P, LaurentPoly):
        return P
    return RationalFn.of(P).as_poly()


def choose_reduction_variable(p: LaurentPoly) -> str:
    """Variable of least degree; ties go to the sparsest leading coefficient, then the last."""
    used = p.used_variables()
    if not used:
        raise PolyError("constant polynomial has no reduction variable")
    best = None
    for pos, v in enumerate(used):
        i = p.variables.index(v)
        top = max(e[i] for e, _ in p.items())
        lo = min(e[i] for e, _ in p.items())
        lead_terms = sum(1 for e, _ in p.items() if e[i] == top)
        key = (top - lo, lead_terms, -pos)
        if best is None or key < best[0]:
            best = (key, v)
    return best[1]


def _measure_poly(p: LaurentPoly, cfg: QuadConfig, integrand: str) -> MeasureResult:
    if p.is_zero():
        raise MeasureError("the zero polynomial has no Mahler measure")
    if p.is_constant():
        c = abs(complex(p.constant_value()))
        return MeasureResult(math.log(c), 0.0, integrand, 1, 0, cfg.seed, grid="exact")
    used = p.used_variables()
    reduced = integrand in ("jensen_reduced", "lattice_qmc")
    rvar = None
    if reduced:
        rvar = cfg.reduction_variable
        if rvar in (None, "", "auto") or rvar not in used:
            if rvar not in (None, "", "auto"):
                logger.debug("reduction variable %s absent; choosing automatically", rvar)
            rvar = choose_reduction_variable(p)
        others = tuple(v for v in used if v != rvar)
    else:
        others = used
    dim = len(others)

    if reduced and dim == 0:
        norm, _ = laurent_normalize(p)
        val = jensen_measure_1d(norm.embed((rvar,)))
        return MeasureResult(val, STDERR_FLOOR * (1 + abs(val)), integrand, 1, 0, cfg.seed,
                             grid="exact", reduction_variable=rvar)

    tp = _TorusPoly(p, others, rvar)
    fn = _node_fn(tp, cfg.pole_epsilon, reduced)
    grid = cfg.grid
    if integrand == "lattice_qmc":
        grid = "lattice"
    elif grid == "auto":
        grid = "tensor" if dim <= 2 else "lattice"

    warnings: list[str] = []
    if grid == "tensor":
        n = cfg.nodes_per_dim
        if n is None and cfg.nodes is not None:
            n = max(8, int(round(cfg.nodes ** (1.0 / dim) * (1 + 1e-12))))
        n = n or DEFAULT_NODES.get(dim, 64)
        n += n % 2
        fine = _tensor_average(fn, dim, n, cfg.threads)
        coarse = _tensor_average(fn, dim, n // 2, cfg.threads)
        coarser = _tensor_average(fn, dim, n // 4, cfg.threads)
        value = _mean(fine)
        err = estimate_error([value, _mean(coarse), _mean(coarser)], "tensor")
        used_n = fine.used + coarse.used + coarser.used
        skipped = fine.skipped + coarse.skipped + coarser.skipped
    else:
        n = _lat.next_prime(cfg.nodes or cfg.total_nodes)
        rng = np.random.default_rng(int(cfg.seed))
        shifts = rng.random((cfg.shifts, dim))
        parts = [_lattice_average(fn, dim, n, s, cfg.threads) for s in shifts]
        means = [_mean(q) for q in parts]
        value = tree_sum(means) / len(means)
        err = estimate_error(means, "lattice")
        used_n = sum(q.used for q in parts)
        skipped = sum(q.skipped for q in parts)
    err = max(err, STDERR_FLOOR * (1 + abs(value)))
    if used_n and skipped / used_n > SKIP_WARN_FRACTION:
        warnings.append(f"degenerate nodes: {skipped} of {used_n + skipped} skipped")
    return MeasureResult(value, err, integrand, used_n, skipped, int(cfg.seed), grid=grid,
                         reduction_variable=rvar, warnings=warnings)


def _combine(num: MeasureResult, den: MeasureResult | None, method: str, seed: int) -> MeasureResult:
    if den is None:
        num.parts = []
        return num
    res = MeasureResult(
        num.value - den.value,
        num.stderr + den.stderr,
        method,
        num.nodes_used + den.nodes_used,
        num.nodes_skipped + den.nodes_skipped,
        seed,
        grid=num.grid if num.grid == den.grid or den.grid == "exact" else f"{num.grid}+{den.grid}",
        reduction_variable=num.reduction_variable,
        warnings=num.warnings + den.warnings,
        parts=[{"part": "numerator", **_brief(num)}, {"part": "denominator", **_brief(den)}],
    )
    return res


def _brief(r: MeasureResult) -> dict:
    return {"value": r.value, "stderr": r.stderr, "grid": r.grid,
            "reduction_variable": r.reduction_variable, "nodes_used": r.nodes_used}


def _measure_rational(P, cfg: QuadConfig, integrand: str) -> MeasureResult:
    P = RationalFn.of(P)
    if P.is_zero():
        raise MeasureError("the zero function has no Mahler measure")
    num = _measure_poly(P.num, cfg, integrand)
    if P.den.is_constant():
        c = abs(complex(P.den.constant_value()))
        if c != 1:
            num.value -= math.log(c)
        return num
    den = _measure_poly(P.den, cfg, integrand)
    return _combine(num, den, integrand, int(cfg.seed))


def measure_direct(P, cfg: QuadConfig | None = None) -> MeasureResult:
    """Average of log|num| - log|den| over torus nodes."""
    cfg = (cfg or QuadConfig()).with_(method="direct")
    return _measure_rational(P, cfg, "direct")


def measure_jensen_reduced(P, cfg: QuadConfig | None = None) -> MeasureResult:
    """Torus average of the one-variable measure in the reduction variable."""
    cfg = (cfg or QuadConfig())
    if cfg.method != "jensen_reduced":
        cfg = cfg.with_(method="jensen_reduced")
    return _measure_rational(P, cfg, "jensen_reduced")


def measure_lattice(P, cfg: QuadConfig | None = None) -> MeasureResult:
    """Jensen-reduced integrand on a randomly shifted rank-1 lattice."""
    cfg = (cfg or QuadConfig()).with_(method="lattice_qmc")
    return _measure_rational(P, cfg, "lattice_qmc")


def measure(P, cfg: QuadConfig | None = None) -> MeasureResult:
    cfg = cfg or QuadConfig()
    if cfg.method == "direct":
        return measure_direct(P, cfg)
    if cfg.method == "lattice_qmc":
        return measure_lattice(P, cfg)
    return measure_jensen_reduced(P, cfg)


# ---------------------------------------------------------------------------
# identity checks


@dataclass
class IdentityReport:
    value: float
    stderr: float
    rhs_value: float
    difference: float
    tolerance: float
    passed: bool
    result: MeasureResult

    def to_dict(self) -> dict:
        d = asdict(self)
        d["result"] = self.result.to_dict()
        return d


def verify_identity(lhs, rhs_value: float, cfg: QuadConfig | None = None,
                    abs_tol: float | None = None) -> IdentityReport:
    """Compare m(lhs) with a constant; pass if within max(3 stderr, abs_tol)."""
    if not math.isfinite(rhs_value):
        raise ValueError("rhs_value must be finite")
    cfg = cfg or QuadConfig()
    res = measure(lhs, cfg)
    tol = max(3.0 * res.stderr, cfg.abs_tol if abs_tol is None else abs_tol)
    diff = abs(res.value - rhs_value)
    return IdentityReport(res.value, res.stderr, float(rhs_value), diff, tol, diff <= tol, res)


def default_threads() -> int:
    return max(1, min(os.cpu_count() or 1, 8))
