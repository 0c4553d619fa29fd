"""Residue matrices, the connection form and the gauge to the derivative frame.

Matrices act on row vectors: a form ``z·Φ`` is represented by the row ``z``
and the residue map sends ``z`` to ``z·R``.  Equivalently the column of
integrals ``Y = ∫ u Φ`` satisfies ``dY = Ξ Y`` with

    Ξ = Σ_k R0[k] dlog x_k + Σ_{v≠0} RV[v] dlog(1 - v·x).

:func:`build_connection` assembles the residues from the intersection matrix;
:func:`residues_from_pde` reads them directly off the derivative formulas of
the frame and serves as an independent construction for cross-checking.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .combinatorics import Mask, bit_table, enumerate_masks, index_of, ordered_bits, positions
from .errors import DimensionError, SingularParameterError
from .intersection import intersection_matrix
from .locus import ensure_off_locus
from .params import ParameterSet


@dataclass(frozen=True)
class ConnectionForm:
    """Residues of Ξ.  ``RV`` maps each nonzero mask to its residue matrix.

    Rank-1 residues are also kept as factors (``rv_cols[j] ⊗ rv_rows[j]`` for
    bit pattern ``j + 1``), which is what Ω assembly uses when present.
    """

    m: int
    R0: tuple
    RV: dict
    rv_masks: np.ndarray = field(repr=False)
    rv_cols: np.ndarray | None = field(default=None, repr=False)
    rv_rows: np.ndarray | None = field(default=None, repr=False)
    rv_stack: np.ndarray | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return 1 << self.m

    @property
    def basis_order(self) -> list[Mask]:
        return enumerate_masks(self.m)

    @classmethod
    def from_factors(cls, m: int, R0: Sequence[np.ndarray], cols: np.ndarray, rows: np.ndarray):
        R0 = tuple(np.asarray(r, dtype=complex) for r in R0)
        RV = {Mask(m, j + 1): np.outer(cols[j], rows[j]) for j in range(cols.shape[0])}
        masks = bit_table(m)[1:].astype(float)
        return cls(m, R0, RV, masks, cols, rows)

    @classmethod
    def from_residues(cls, m: int, R0: Sequence[np.ndarray], RV: dict):
        """Dense residues of any rank (e.g. deliberately perturbed ones)."""
        R0 = tuple(np.asarray(r, dtype=complex) for r in R0)
        RV = {v: np.asarray(R, dtype=complex) for v, R in RV.items()}
        stack = np.array([RV[Mask(m, j)] for j in range(1, 1 << m)])
        return cls(m, R0, RV, bit_table(m)[1:].astype(float), rv_stack=stack)


@dataclass(frozen=True)
class GaugeData:
    P: np.ndarray
    Pinv: np.ndarray


def _beta_opposite(params: ParameterSet) -> np.ndarray:
    """``(2^m, m)`` array holding β_{1-v_j, j}."""
    bits = bit_table(params.m)
    return np.where(bits == 1, params.beta0[None, :], params.beta1[None, :])


def _require_a(params: ParameterSet) -> None:
    if params.a == 0:
        raise SingularParameterError("a vanishes")


def f_matrix(params: ParameterSet) -> np.ndarray:
    """Rows are the φ-frame coordinates f_v of ψ_v, both axes in total order."""
    _require_a(params)
    m, n, a = params.m, 1 << params.m, params.a
    pos = positions(m)
    opp = _beta_opposite(params)
    sig = params.sigma_beta_table()
    F = np.zeros((n, n), dtype=complex)
    for v in range(n):
        row = pos[v]
        F[row, pos[v]] = (a - sig[v]) / a
        for j in range(m):
            F[row, pos[v ^ (1 << j)]] -= opp[v, j] / a
    return F


def f_vector(v: Mask, params: ParameterSet) -> np.ndarray:
    if v.m != params.m:
        raise DimensionError("mask and parameters must share m")
    return f_matrix(params)[index_of(v)]


def _unit(n: int, idx: int) -> np.ndarray:
    e = np.zeros(n, dtype=complex)
    e[idx] = 1.0
    return e


def residue_zero(k: int, params: ParameterSet, C: np.ndarray, F: np.ndarray | None = None) -> np.ndarray:
    """Residue along ``x_k = 0`` from the intersection matrix (``k`` 1-based)."""
    m, n = params.m, 1 << params.m
    if not 1 <= k <= m:
        raise IndexError(f"k={k} out of range 1..{m}")
    if F is None:
        F = f_matrix(params)
    pos = positions(m)
    pib = params.pi_beta_table()
    b1k = params.beta1[k - 1]
    bit = 1 << (k - 1)
    R = (1 - params.c[k - 1]) * np.eye(n, dtype=complex)
    for v in range(n):
        if v & bit:
            continue
        iv, iw = pos[v], pos[v ^ bit]
        col = C @ (F[iv] - F[iw])
        row = _unit(n, iv) - _unit(n, iw)
        R += (b1k * pib[v]) * np.outer(col, row)
    return R


def _hyperplane_factors(params: ParameterSet, C: np.ndarray, F: np.ndarray):
    n = 1 << params.m
    pos = positions(params.m)
    pib = params.pi_beta_table()
    cols = np.empty((n - 1, n), dtype=complex)
    rows = np.empty((n - 1, n), dtype=complex)
    for v in range(1, n):
        fv = F[pos[v]]
        cols[v - 1] = (-params.a * pib[v]) * (C @ fv)
        rows[v - 1] = fv
    return cols, rows


def residue_hyperplane(v: Mask, params: ParameterSet, C: np.ndarray, F: np.ndarray | None = None) -> np.ndarray:
    """Residue along ``1 - v·x = 0``: ``(-a Πβ_v) C f_vᵀ f_v``."""
    if v.m != params.m:
        raise DimensionError("mask and parameters must share m")
    if v.bits == 0:
        raise ValueError("S_0 is empty; v must be nonzero")
    if F is None:
        F = f_matrix(params)
    fv = F[index_of(v)]
    return (-params.a * params.pi_beta(v)) * np.outer(C @ fv, fv)


def build_connection(params: ParameterSet) -> ConnectionForm:
    _require_a(params)
    C = intersection_matrix(params)
    F = f_matrix(params)
    R0 = [residue_zero(k, params, C, F) for k in range(1, params.m + 1)]
    cols, rows = _hyperplane_factors(params, C, F)
    return ConnectionForm.from_factors(params.m, R0, cols, rows)


def residues_from_pde(params: ParameterSet) -> ConnectionForm:
    """Residues read off the derivatives ∇_k φ_v of the frame.

    For ``v_k = 0`` the 1/x_k coefficient of ``∇_k φ_v`` is
    ``-β_{0,k} φ_v - β_{1,k} φ_{σ_k v}``; for ``v_k = 1`` it is
    ``-β_{0,k} φ_{σ_k v} - β_{1,k} φ_v`` and ``φ_v`` picks up
    ``a ψ_v / (1 - v·x)``.  With ``d(1 - v·x) = -Σ v_k dx_k`` the dlog
    residue along ``S_v`` is ``-e_vᵀ (a f_v)``.
    """
    _require_a(params)
    m, n = params.m, 1 << params.m
    pos = positions(m)
    R0 = []
    for k in range(m):
        R = np.zeros((n, n), dtype=complex)
        bit = 1 << k
        for v in range(n):
            row, other = pos[v], pos[v ^ bit]
            if v & bit:
                R[row, other] = -params.beta0[k]
                R[row, row] = -params.beta1[k]
            else:
                R[row, row] = -params.beta0[k]
                R[row, other] = -params.beta1[k]
        R0.append(R)
    F = f_matrix(params)
    cols = np.zeros((n - 1, n), dtype=complex)
    rows = np.empty((n - 1, n), dtype=complex)
    for v in range(1, n):
        cols[v - 1, pos[v]] = -params.a
        rows[v - 1] = F[pos[v]]
    return ConnectionForm.from_factors(m, R0, cols, rows)


def _rv_weighted(conn: ConnectionForm, weights: np.ndarray) -> np.ndarray:
    if conn.rv_cols is not None:
        return (conn.rv_cols.T * weights) @ conn.rv_rows
    return np.tensordot(weights, conn.rv_stack, axes=1)


def omega_at(conn: ConnectionForm, x, threshold: float = 1e-12) -> list[np.ndarray]:
    """Coefficients Ω_i(x) of dx_i in Ξ."""
    pt = ensure_off_locus(np.atleast_1d(x), threshold)
    if pt.size != conn.m:
        raise DimensionError(f"point has {pt.size} coordinates, connection has m={conn.m}")
    denom = 1 - conn.rv_masks @ pt
    out = []
    for i in range(conn.m):
        w = conn.rv_masks[:, i] / denom
        out.append(conn.R0[i] / pt[i] - _rv_weighted(conn, w))
    return out


def omega_along(conn: ConnectionForm, x: np.ndarray, dx: np.ndarray) -> np.ndarray:
    """Σ_i Ω_i(x) dx_i without the proximity check (hot path for integration)."""
    denom = 1 - conn.rv_masks @ x
    w = -(conn.rv_masks @ dx) / denom
    A = _rv_weighted(conn, w)
    for i in range(conn.m):
        A += conn.R0[i] * (dx[i] / x[i])
    return A


def flatness_residual(conn: ConnectionForm, x, i: int, j: int) -> float:
    """max-entry of [Ω_i, Ω_j] at ``x`` (``i``, ``j`` 1-based)."""
    om = omega_at(conn, x)
    A, B = om[i - 1], om[j - 1]
    return float(np.max(np.abs(A @ B - B @ A)))


def build_gauge(params: ParameterSet) -> GaugeData:
    """P (to the derivative frame) and its closed-form inverse.

    ``P[v, w] = Π_{v_i=1} (-β_{w_i,i})`` for ``v ⪰ w``;
    ``Pinv[v, w] = Π_{v_i=1, w_i=0} β_{0,i} / Π_{v_i=1} (-β_{1,i})`` for ``v ⪰ w``.
    """
    m, n = params.m, 1 << params.m
    if np.any(params.beta1 == 0):
        raise SingularParameterError("some beta_1,i vanishes; P is singular")
    bits = bit_table(m)
    b0, b1 = params.beta0, params.beta1
    P = np.zeros((n, n), dtype=complex)
    Pinv = np.zeros((n, n), dtype=complex)
    for v in range(n):
        diag = np.prod(-b1[bits[v] == 1])
        sub = v
        while True:
            w = sub
            chosen = np.where(bits[w] == 1, b1, b0)
            P[v, w] = np.prod(-chosen[bits[v] == 1])
            Pinv[v, w] = np.prod(b0[(bits[v] == 1) & (bits[w] == 0)]) / diag
            if sub == 0:
                break
            sub = (sub - 1) & v
    order = ordered_bits(m)
    return GaugeData(P[np.ix_(order, order)], Pinv[np.ix_(order, order)])


def gauged_omega_at(conn: ConnectionForm, gauge: GaugeData, x) -> list[np.ndarray]:
    return [gauge.P @ om @ gauge.Pinv for om in omega_at(conn, x)]


def eigenvalue_mismatch(M: np.ndarray, expected: Sequence[complex]) -> float:
    """Largest distance under the optimal one-to-one matching of eigenvalues."""
    ev = np.linalg.eigvals(M)
    expected = np.asarray(expected, dtype=complex)
    if ev.size != expected.size:
        raise DimensionError("expected multiset has the wrong size")
    cost = np.abs(ev[:, None] - expected[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def expected_zero_spectrum(params: ParameterSet, k: int) -> np.ndarray:
    half = 1 << (params.m - 1)
    return np.array([0.0] * half + [1 - params.c[k - 1]] * half, dtype=complex)


def projection_pairing(k: int, params: ParameterSet, C: np.ndarray, F: np.ndarray | None = None) -> np.ndarray:
    """Gram matrix of the kernel basis of R0[k] against its dual vectors.

    Entry ``(w, v)`` for ``v, w`` with ``v_k = w_k = 0`` is
    ``β_{1,k} Πβ_v / (β_{0,k} + β_{1,k}) · (e_w - e_{σ_k w}) C (f_v - f_{σ_k v})ᵀ``;
    it should be the identity.
    """
    if F is None:
        F = f_matrix(params)
    n = 1 << params.m
    pos = positions(params.m)
    bit = 1 << (k - 1)
    low = [v for v in range(n) if not v & bit]
    b0, b1 = params.beta0[k - 1], params.beta1[k - 1]
    pib = params.pi_beta_table()
    G = np.empty((len(low), len(low)), dtype=complex)
    for a_, w in enumerate(low):
        ew = _unit(n, pos[w]) - _unit(n, pos[w ^ bit])
        for b_, v in enumerate(low):
            fv = F[pos[v]] - F[pos[v ^ bit]]
            G[a_, b_] = b1 * pib[v] / (b0 + b1) * (ew @ C @ fv)
    return G
