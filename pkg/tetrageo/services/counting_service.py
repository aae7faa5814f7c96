from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from multiprocessing import Pool
from typing import Iterable, Sequence

import numpy as np

from tetrageo.exceptions import DomainError
from tetrageo.geometry.hypmath import check_alpha
from tetrageo.geometry.tetrahedron import Surface, TetraParams, build_surface
from tetrageo.logging import get_logger
from tetrageo.schema.dto.count_row import CountRow
from tetrageo.services.geodesic_service import (
    GeodesicService,
    GeodesicType,
    segment_bounds,
)

logger = get_logger(__name__)

ENUMERATION_LIMIT = 10_000


# -----------------------------
# Totients
# -----------------------------


def totient(n: int) -> int:
    """Euler's totient by trial-division factorization."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"totient needs a positive integer, got {n!r}")
    n = int(n)
    result = n
    rest = n
    factor = 2
    while factor * factor <= rest:
        if rest % factor == 0:
            while rest % factor == 0:
                rest //= factor
            result -= result // factor
        factor += 1
    if rest > 1:
        result -= result // rest
    return result


def totient_table(n: int) -> np.ndarray:
    """phi(0..n) by sieve; phi(0) is stored as 0."""
    phi = np.arange(n + 1, dtype=np.int64)
    for i in range(2, n + 1):
        if phi[i] == i:
            phi[i::i] -= phi[i::i] // i
    return phi


# -----------------------------
# Coprime pair counts
# -----------------------------


def _check_count_argument(x) -> int:
    if not isinstance(x, (int, np.integer)) or x < 0:
        raise DomainError(f"psi needs a non-negative integer, got {x!r}")
    return int(x)


def psi_enumerated_table(x: int) -> np.ndarray:
    """Cumulative counts of coprime 0 <= p < q with p + q <= y, for y = 0..x."""
    per_sum = np.zeros(x + 1, dtype=np.int64)
    for y in range(1, x + 1):
        p = np.arange((y - 1) // 2 + 1)
        per_sum[y] = int(np.count_nonzero(np.gcd(p, y) == 1))
    return np.cumsum(per_sum)


def psi_totient_table(x: int) -> np.ndarray:
    per_sum = totient_table(x) // 2
    # phi is odd at 1 and 2: (0, 1) counts once and nothing sums to 2.
    if x >= 1:
        per_sum[1] = 1
    if x >= 2:
        per_sum[2] = 0
    per_sum[0] = 0
    return np.cumsum(per_sum)


def psi_enumerated(x: int) -> int:
    x = _check_count_argument(x)
    return int(psi_enumerated_table(x)[x])


def psi_totient(x: int) -> int:
    x = _check_count_argument(x)
    return int(psi_totient_table(x)[x])


def psi(x: int) -> int:
    x = _check_count_argument(x)
    if x <= ENUMERATION_LIMIT:
        return psi_enumerated(x)
    return psi_totient(x)


def type_count(x: int) -> int:
    """psi(x) plus the self-mirror type (1, 1) once it fits under x."""
    x = _check_count_argument(x)
    return psi(x) + (1 if x >= 2 else 0)


def canonical_types(max_sum: int) -> list[GeodesicType]:
    """All canonical coprime types with p + q <= max_sum, by sum then p."""
    types = []
    for total in range(1, max_sum + 1):
        for p in range(total // 2 + 1):
            if math.gcd(p, total) == 1:
                types.append(GeodesicType(p, total - p))
    return types


# -----------------------------
# Asymptotics and bounds
# -----------------------------


@dataclass(frozen=True)
class CAlpha:
    alpha: float
    value: float


def c_alpha(alpha: float) -> CAlpha:
    check_alpha(alpha)
    bounds = segment_bounds(TetraParams(alpha))
    denominator = bounds.ln_short + bounds.ln_cross
    return CAlpha(alpha=alpha, value=27.0 / (32.0 * math.pi**2) / denominator**2)


def max_pq_bound(length: float, alpha: float) -> int:
    """Largest p + q a simple closed geodesic of length <= `length` can have."""
    if not (math.isfinite(length) and length > 0):
        raise DomainError(f"length bound {length!r} must be positive")
    bounds = segment_bounds(TetraParams(alpha))
    value = 0.75 * (length - 2.0 * bounds.ln_catch) / (bounds.ln_short + bounds.ln_cross) + 2.0
    return max(int(math.floor(value)), 0)


def trend_ratios(rows: Iterable[CountRow]) -> list[float]:
    return [row.n_exact / row.n_pred if row.n_pred > 0 else math.nan for row in rows]


# -----------------------------
# Enumeration
# -----------------------------


@lru_cache(maxsize=4)
def _worker_service(alpha: float, max_iter: int) -> GeodesicService:
    return GeodesicService(build_surface(TetraParams(alpha)), max_iter=max_iter)


def _type_length(job: tuple[float, int, int, int]) -> float:
    alpha, p, q, max_iter = job
    return _worker_service(alpha, max_iter).geodesic_length(GeodesicType(p, q))


class CountingService:
    """Counts the simple closed geodesics of bounded length on one surface."""

    def __init__(self, surface: Surface, *, threads: int = 1, max_iter: int = 100):
        self._surface = surface
        self._threads = threads
        self._max_iter = max_iter

    def type_lengths(self, types: Sequence[GeodesicType]) -> list[float]:
        jobs = [(self._surface.alpha, t.p, t.q, self._max_iter) for t in types]
        if self._threads > 1 and len(jobs) > 1:
            with Pool(processes=self._threads) as pool:
                # ordered map keeps the reduction independent of scheduling
                return pool.map(_type_length, jobs, chunksize=max(1, len(jobs) // (4 * self._threads)))
        return [_type_length(job) for job in jobs]

    def count_exact(self, length: float) -> CountRow:
        return self.count_table([length])[0]

    def count_table(self, lengths: Sequence[float]) -> list[CountRow]:
        alpha = self._surface.alpha
        caps = [max_pq_bound(length, alpha) for length in lengths]
        types = canonical_types(max(caps, default=0))
        type_lengths = np.array(self.type_lengths(types))
        sums = np.array([t.p + t.q for t in types], dtype=np.int64)
        c_value = c_alpha(alpha).value
        logger.info(
            f"Enumerated alpha={alpha:.12g} [types={len(types)} | "
            f"max_pq={max(caps, default=0)} | threads={self._threads}]"
        )

        rows = []
        for length, cap in zip(lengths, caps):
            counted = int(np.count_nonzero((sums <= cap) & (type_lengths <= length)))
            rows.append(
                CountRow(
                    alpha=alpha,
                    L=length,
                    n_exact=3 * counted,
                    n_pred=c_value * length * length,
                    n_cap=3 * type_count(cap),
                    max_pq=cap,
                )
            )
        return rows
