"""Truncated F_A power series, its term-wise derivatives and the solution vector.

Terms are kept for every multi-index ``n`` with ``|n| = n_1 + ... + n_m <= N``.
Coefficients are assembled from one-dimensional ratio tables built by
recursion, so no Pochhammer product is ever recomputed.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .combinatorics import Mask, enumerate_masks
from .connection import ConnectionForm, GaugeData, build_connection, build_gauge, gauged_omega_at
from .errors import DomainError, SingularParameterError, TruncationWarning
from .locus import as_point
from .params import ParameterSet


@dataclass(frozen=True)
class SeriesOptions:
    max_total_degree: int = 60
    tail_tolerance: float = 1e-12
    gamma_prefactor: bool = False

    def __post_init__(self):
        if self.max_total_degree < 1:
            raise ValueError("max_total_degree must be at least 1")


@dataclass(frozen=True)
class SolutionVector:
    values: np.ndarray
    point: np.ndarray
    truncation: int
    tail: float


def pochhammer(z: complex, n: int) -> complex:
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = 1 + 0j
    for k in range(n):
        out *= z + k
    return out


@lru_cache(maxsize=32)
def multi_indices(m: int, N: int) -> np.ndarray:
    """All ``n ∈ ℕ^m`` with ``|n| <= N``, sorted by total degree."""
    idx = np.arange(N + 1)[:, None]
    for _ in range(m - 1):
        tot = idx.sum(axis=1)
        reps = N - tot + 1
        base = np.repeat(idx, reps, axis=0)
        extra = np.concatenate([np.arange(r) for r in reps])
        idx = np.column_stack([base, extra])
    idx = idx[np.argsort(idx.sum(axis=1), kind="stable")]
    idx.setflags(write=False)
    return idx


def _check_c(params: ParameterSet) -> None:
    for i, ci in enumerate(params.c, start=1):
        if ci.imag == 0 and ci.real <= 0 and ci.real == round(ci.real):
            raise SingularParameterError(f"c_{i} = {ci.real:g} is a nonpositive integer")


def _coefficients(params: ParameterSet, N: int) -> np.ndarray:
    _check_c(params)
    n = multi_indices(params.m, N)
    # (a, k) for k <= N
    a_tab = np.ones(N + 1, dtype=complex)
    for k in range(1, N + 1):
        a_tab[k] = a_tab[k - 1] * (params.a + k - 1)
    coef = a_tab[n.sum(axis=1)]
    for i in range(params.m):
        t = np.ones(N + 1, dtype=complex)
        bi, ci = params.b[i], params.c[i]
        for k in range(1, N + 1):
            t[k] = t[k - 1] * (bi + k - 1) / ((ci + k - 1) * k)
        coef = coef * t[n[:, i]]
    return coef


def _check_domain(x: np.ndarray) -> None:
    s = float(np.abs(x).sum())
    if not s < 1:
        raise DomainError(
            f"point {x.tolist()} is outside the convergence domain (sum |x_i| = {s:.6g} >= 1); "
            "use analytic continuation instead"
        )


class _Series:
    """Terms of a truncated series at one point, reused for several derivatives."""

    def __init__(self, params: ParameterSet, x, opts: SeriesOptions):
        self.params = params
        self.opts = opts
        self.x = as_point(x, params.m)
        _check_domain(self.x)
        N = opts.max_total_degree
        self.n = multi_indices(params.m, N)
        self.coef = _coefficients(params, N)
        self.powers = [self.x[i] ** np.arange(N + 1) for i in range(params.m)]
        mono = np.ones(len(self.n), dtype=complex)
        for i in range(params.m):
            mono = mono * self.powers[i][self.n[:, i]]
        shell = self.n.sum(axis=1) == N
        self.tail = float(np.abs(self.coef[shell] * mono[shell]).sum())
        if self.tail > opts.tail_tolerance:
            warnings.warn(
                f"truncation at total degree {N} leaves a last-shell magnitude of {self.tail:.3e}",
                TruncationWarning,
                stacklevel=3,
            )
        self.prefactor = _gamma_prefactor(params) if opts.gamma_prefactor else 1.0

    def derivative(self, orders: Sequence[int], euler: Iterable[int] = ()) -> complex:
        """Σ coef · Π_{i∈euler} n_i · ∂^orders x^n.

        ``orders[i]`` is the number of x_i-derivatives; ``euler`` lists
        0-based coordinates whose Euler operator x_i ∂_i is applied first.
        """
        weight = self.coef.copy()
        for i in euler:
            weight = weight * self.n[:, i]
        mono = np.ones(len(self.n), dtype=complex)
        for i, d in enumerate(orders):
            ni = self.n[:, i]
            if d:
                falling = np.ones(len(ni))
                for r in range(d):
                    falling = falling * (ni - r)
                weight = weight * falling
            mono = mono * self.powers[i][np.maximum(ni - d, 0)]
        return complex(self.prefactor * np.sum(weight * mono))


def _gamma_prefactor(params: ParameterSet) -> complex:
    from scipy.special import loggamma

    b = np.array(params.b)
    c = np.array(params.c)
    return complex(np.exp(np.sum(loggamma(b) + loggamma(c - b) - loggamma(c))))


def _orders_from_index_set(m: int, I: Iterable[int]) -> list[int]:
    orders = [0] * m
    for i in set(I):
        if not 1 <= i <= m:
            raise IndexError(f"derivative index {i} out of range 1..{m}")
        orders[i - 1] = 1
    return orders


def fa_truncated(params: ParameterSet, x, opts: SeriesOptions = SeriesOptions()) -> complex:
    return _Series(params, x, opts).derivative([0] * params.m)


def fa_partial_truncated(params: ParameterSet, x, opts: SeriesOptions = SeriesOptions(), I: Iterable[int] = ()) -> complex:
    """∂_I F_A with each (1-based) index of ``I`` differentiated once."""
    s = _Series(params, x, opts)
    return s.derivative(_orders_from_index_set(params.m, I))


def series_derivative(params: ParameterSet, x, orders: Sequence[int], opts: SeriesOptions = SeriesOptions()) -> complex:
    """Term-wise mixed derivative with arbitrary orders (e.g. second derivatives)."""
    if len(orders) != params.m:
        raise ValueError("need one derivative order per variable")
    return _Series(params, x, opts).derivative(list(orders))


def tail_estimate(params: ParameterSet, x, opts: SeriesOptions = SeriesOptions()) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        return _Series(params, x, opts).tail


def _support0(v: Mask) -> list[int]:
    return [i - 1 for i in v.support()]


def solution_vector(params: ParameterSet, x, opts: SeriesOptions = SeriesOptions()) -> SolutionVector:
    """F_v = (Π_{v_i=1} x_i ∂_i) F_A, entries in total order."""
    s = _Series(params, x, opts)
    zero = [0] * params.m
    vals = np.array([s.derivative(zero, _support0(v)) for v in enumerate_masks(params.m)])
    return SolutionVector(vals, s.x, opts.max_total_degree, s.tail)


def solution_vector_derivatives(params: ParameterSet, x, opts: SeriesOptions = SeriesOptions()) -> np.ndarray:
    """``D[k]`` is ∂_{k+1} of the solution vector, computed term-wise."""
    s = _Series(params, x, opts)
    masks = enumerate_masks(params.m)
    out = np.empty((params.m, len(masks)), dtype=complex)
    for k in range(params.m):
        orders = [0] * params.m
        orders[k] = 1
        out[k] = [s.derivative(orders, _support0(v)) for v in masks]
    return out


def pfaffian_residual(
    params: ParameterSet,
    x,
    opts: SeriesOptions = SeriesOptions(),
    conn: ConnectionForm | None = None,
    gauge: GaugeData | None = None,
) -> np.ndarray:
    """Relative error of ∂_k F against (P Ω_k P^{-1}) F for each direction k.

    ``conn`` and ``gauge`` default to those built from ``params``; passing
    ones built from other parameters gives a negative control.
    """
    if conn is None:
        conn = build_connection(params)
    if gauge is None:
        gauge = build_gauge(params)
    F = solution_vector(params, x, opts).values
    dF = solution_vector_derivatives(params, x, opts)
    G = gauged_omega_at(conn, gauge, x)
    res = np.empty(params.m)
    for k in range(params.m):
        res[k] = np.linalg.norm(dF[k] - G[k] @ F) / np.linalg.norm(dF[k])
    return res
