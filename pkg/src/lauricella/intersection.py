"""Intersection numbers of the φ/ψ frames and the matrix C.

All pairings are normalized by (2π√−1)^m.  Matrices are laid out in the
total order of :func:`lauricella.combinatorics.enumerate_masks`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .combinatorics import Mask, a_coefficient, a_coefficients, bit_table, ordered_bits
from .errors import DimensionError, SingularParameterError
from .params import ParameterSet


@dataclass(frozen=True)
class IntersectionData:
    C: np.ndarray
    phi_psi: np.ndarray
    psi_psi: np.ndarray


def _require_nonzero_betas(params: ParameterSet) -> None:
    for s, arr in ((0, params.beta0), (1, params.beta1)):
        for i, z in enumerate(arr, start=1):
            if z == 0:
                raise SingularParameterError(f"beta_{s},{i} vanishes")


def _check(v: Mask, w: Mask, params: ParameterSet) -> None:
    if not v.m == w.m == params.m:
        raise DimensionError("masks and parameters must share m")


def phi_phi(v: Mask, vp: Mask, params: ParameterSet) -> complex:
    """Normalized I(φ_v, φ_v') as the direct sum over w ∈ F_2^m."""
    _check(v, vp, params)
    _require_nonzero_betas(params)
    total = 0j
    for w in range(1 << params.m):
        term = a_coefficient(Mask(params.m, w), params)
        for i in range(1, params.m + 1):
            if (w >> (i - 1)) & 1:
                continue
            if v[i] != vp[i]:
                term = 0j
                break
            term /= params.beta(v[i], i)
        total += term
    return total


def phi_psi(v: Mask, vp: Mask, params: ParameterSet) -> complex:
    _check(v, vp, params)
    _require_nonzero_betas(params)
    return 1 / params.pi_beta(v) if v == vp else 0j


def psi_psi(v: Mask, vp: Mask, params: ParameterSet) -> complex:
    """Normalized I(ψ_v, ψ_v').

    The off-diagonal case fires when ``v`` and ``v'`` agree in exactly
    ``m - 1`` coordinates.
    """
    _check(v, vp, params)
    _require_nonzero_betas(params)
    if params.a == 0:
        raise SingularParameterError("a vanishes")
    a = params.a
    if v == vp:
        return (a - params.sigma_beta(v)) / (a * params.pi_beta(v))
    agree = [i for i in range(1, params.m + 1) if v[i] == vp[i]]
    if len(agree) == params.m - 1:
        prod = 1 + 0j
        for i in agree:
            prod *= params.beta(v[i], i)
        return -1 / (a * prod)
    return 0j


def _to_ordered(M: np.ndarray, m: int) -> np.ndarray:
    order = ordered_bits(m)
    return M[np.ix_(order, order)]


def intersection_matrix(params: ParameterSet) -> np.ndarray:
    """C in total order, built by a superset-sum transform over w.

    ``C[v, v'] = Σ_{w ⊇ v⊕v'} A_w Π_{i: w_i=0} 1/β_{v_i,i}``.
    """
    _require_nonzero_betas(params)
    m, n = params.m, 1 << params.m
    A = a_coefficients(params)
    bits = bit_table(m)
    inv_beta = 1 / params._selected_betas()            # [v, i]
    # G[v, w] = A_w Π_{i: w_i = 0} 1/β_{v_i,i}
    log_free = (1 - bits)                               # [w, i]
    G = np.ones((n, n), dtype=complex)
    for i in range(m):
        G *= np.where(log_free[None, :, i] == 1, inv_beta[:, i][:, None], 1.0)
    G *= A[None, :]
    # superset sums along w
    for i in range(m):
        bit = 1 << i
        idx = np.arange(n)
        lower = idx[(idx & bit) == 0]
        G[:, lower] += G[:, lower | bit]
    v = np.arange(n)
    C_bits = G[v[:, None], v[:, None] ^ v[None, :]]
    return _to_ordered(C_bits, m)


def phi_psi_matrix(params: ParameterSet) -> np.ndarray:
    _require_nonzero_betas(params)
    return np.diag(1 / params.pi_beta_table()[ordered_bits(params.m)])


def psi_psi_matrix(params: ParameterSet) -> np.ndarray:
    _require_nonzero_betas(params)
    if params.a == 0:
        raise SingularParameterError("a vanishes")
    m, n, a = params.m, 1 << params.m, params.a
    bits = bit_table(m)
    sel = params._selected_betas()
    M = np.zeros((n, n), dtype=complex)
    M[np.arange(n), np.arange(n)] = (a - sel.sum(axis=1)) / (a * sel.prod(axis=1))
    for i in range(m):
        # neighbours differing only in coordinate i
        v = np.arange(n)
        vp = v ^ (1 << i)
        prod = np.prod(np.delete(sel, i, axis=1), axis=1) if m > 1 else np.ones(n, dtype=complex)
        M[v, vp] = -1 / (a * prod)
    return _to_ordered(M, m)


def build_intersection(params: ParameterSet) -> IntersectionData:
    return IntersectionData(
        C=intersection_matrix(params),
        phi_psi=phi_psi_matrix(params),
        psi_psi=psi_psi_matrix(params),
    )


def det_C_closed(params: ParameterSet) -> complex:
    """a^{2^m} / (Π_w γ_w · Π_i (β_{0,i} β_{1,i})^{2^{m-1}})."""
    m = params.m
    gam = params.gamma_table()
    denom = np.prod(gam) * np.prod((params.beta0 * params.beta1) ** (2 ** (m - 1)))
    if denom == 0:
        raise SingularParameterError("closed-form determinant has a vanishing denominator")
    return complex(params.a ** (2**m) / denom)


def det_phi_psi_closed(params: ParameterSet) -> complex:
    m = params.m
    return complex(1 / np.prod((params.beta0 * params.beta1) ** (2 ** (m - 1))))


def det_psi_psi_closed(params: ParameterSet) -> complex:
    m = params.m
    return complex(
        np.prod(params.gamma_table())
        / (params.a ** (2**m) * np.prod((params.beta0 * params.beta1) ** (2 ** (m - 1))))
    )


def verify_intersection_identities(params: ParameterSet, tol: float = 1e-12) -> dict:
    """Check C·Fᵀ = phiPsi and F·C·Fᵀ = psiPsi, F the matrix of f_v rows.

    Deviations are max-entry errors scaled by the max entry of the target.
    """
    from .connection import f_matrix

    data = build_intersection(params)
    F = f_matrix(params)
    lhs1 = data.C @ F.T
    lhs2 = F @ data.C @ F.T
    dev1 = np.max(np.abs(lhs1 - data.phi_psi)) / max(1.0, np.max(np.abs(data.phi_psi)))
    dev2 = np.max(np.abs(lhs2 - data.psi_psi)) / max(1.0, np.max(np.abs(data.psi_psi)))
    return {
        "phi_psi_deviation": float(dev1),
        "psi_psi_deviation": float(dev2),
        "tol": tol,
        "passed": bool(dev1 < tol and dev2 < tol),
    }
