"""Brute-force reference values: plain partial sums plus an explicit tail.

Nothing here shares code with the package's accelerated series.
"""

import json
from pathlib import Path

import numpy as np

TERMS = 10 ** 7


def zeta_brute(s: int, n: int = TERMS) -> float:
    k = np.arange(n, 0, -1, dtype=np.float64)  # small terms first
    head = float(np.sum(k ** -s))
    # Euler-Maclaurin tail sum_{k>n} k^-s
    tail = n ** (1.0 - s) / (s - 1) - 0.5 * n ** -float(s) + s / 12.0 * n ** (-s - 1.0)
    return head + tail


def catalan_type_brute(s: int, n: int = TERMS) -> float:
    """sum (-1)^k / (2k+1)^s, averaged over two consecutive partial sums."""
    k = np.arange(n - 1, -1, -1, dtype=np.float64)
    terms = np.where(k % 2 == 0, 1.0, -1.0) / (2 * k + 1) ** s
    s_n = float(np.sum(terms))
    nxt = (-1.0) ** n / (2.0 * n + 1) ** s
    return s_n + 0.5 * nxt


def chi3_brute(s: int, n: int = TERMS) -> float:
    """sum_k [(3k+1)^-s - (3k+2)^-s] over k < n/3, plus the integral tail."""
    K = n // 3
    k = np.arange(K - 1, -1, -1, dtype=np.float64)
    head = float(np.sum((3 * k + 1) ** -s - (3 * k + 2) ** -s))
    a, b = 3.0 * K + 1, 3.0 * K + 2
    integral = (a ** (1 - s) - b ** (1 - s)) / (3.0 * (s - 1))
    half = 0.5 * (a ** -s - b ** -s)
    return head + integral + half


def regression_constants() -> dict:
    path = Path(__file__).parent / "data" / "constants_regression.json"
    return {k: float(v) for k, v in json.loads(path.read_text()).items()}
