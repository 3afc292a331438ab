"""Rank-1 lattice rules with component-by-component generating vectors.

The generating vector is built by the fast CBC construction for a prime
number of points: the search over candidates ``z = g^i mod n`` (``g`` a
primitive root) becomes a circular convolution, evaluated with an FFT.  The
figure of merit is the worst-case error in the periodic Sobolev space with
smoothness 2 and product weights ``gamma_j``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["is_prime", "next_prime", "primitive_root", "cbc_vector", "cbc_vector_naive", "lattice_points"]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    f = 17
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def next_prime(n: int) -> int:
    n = max(int(n), 2)
    while not is_prime(n):
        n += 1
    return n


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def primitive_root(n: int) -> int:
    if not is_prime(n):
        raise ValueError(f"{n} is not prime")
    if n == 2:
        return 1
    factors = _prime_factors(n - 1)
    for g in range(2, n):
        if all(pow(g, (n - 1) // q, n) != 1 for q in factors):
            return g
    raise ArithmeticError("no primitive root found")


def _omega(x: np.ndarray) -> np.ndarray:
    # 2 pi^2 B_2(x) for x in [0, 1)
    return 2.0 * np.pi ** 2 * (x * x - x + 1.0 / 6.0)


def _weights(dim: int) -> np.ndarray:
    return 0.9 ** np.arange(dim)


def _pick(cands: np.ndarray, err: np.ndarray, n: int) -> int:
    """Smallest normalized candidate among the (numerically) tied minimizers."""
    lo = err.min()
    tied = cands[err <= lo + 1e-10 * max(abs(lo), 1.0)]
    return int(np.min(np.minimum(tied, n - tied)))


@lru_cache(maxsize=32)
def cbc_vector(n: int, dim: int) -> tuple[int, ...]:
    """Generating vector for an ``n``-point lattice (``n`` prime) in ``dim`` dimensions."""
    if dim < 1:
        return ()
    if not is_prime(n):
        raise ValueError("fast CBC needs a prime number of points")
    if n < 5:
        return tuple([1] * dim)
    gamma = _weights(dim)
    g = primitive_root(n)
    m = n - 1
    perm = np.empty(m, dtype=np.int64)
    perm[0] = 1
    for i in range(1, m):
        perm[i] = perm[i - 1] * g % n
    psi = _omega(perm / n)
    psi_hat = np.fft.fft(psi)
    k = np.arange(n)
    prod = 1.0 + gamma[0] * _omega(k / n)  # first component fixed to 1
    z = [1]
    inv_idx = perm[(-np.arange(m)) % m]  # k = g^(-j)
    for s in range(1, dim):
        q = prod[inv_idx]
        err = np.fft.ifft(psi_hat * np.fft.fft(q)).real
        zs = _pick(perm, err, n)
        z.append(zs)
        prod = prod * (1.0 + gamma[s] * _omega((k * zs % n) / n))
    return tuple(z)


def cbc_vector_naive(n: int, dim: int) -> tuple[int, ...]:
    """Quadratic-cost reference for :func:`cbc_vector` (small ``n`` only)."""
    gamma = _weights(dim)
    k = np.arange(n)
    prod = 1.0 + gamma[0] * _omega(k / n)
    z = [1]
    for s in range(1, dim):
        cands = np.arange(1, n)
        err = np.array([np.sum(prod[1:] * _omega((k[1:] * c % n) / n)) for c in cands])
        best = _pick(cands, err, n)
        z.append(best)
        prod = prod * (1.0 + gamma[s] * _omega((k * best % n) / n))
    return tuple(z)


def lattice_points(n: int, z, shift, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Points ``frac(k z / n + shift)`` for ``start <= k < stop`` as an array of shape (B, dim)."""
    stop = n if stop is None else stop
    k = np.arange(start, stop, dtype=np.int64)[:, None]
    zz = np.asarray(z, dtype=np.int64)[None, :]
    base = (k * zz % n) / n
    return np.mod(base + np.asarray(shift, dtype=float)[None, :], 1.0)
