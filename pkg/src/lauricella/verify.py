"""Numerical self-checks shared by the ``verify`` command and the test-suite."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .combinatorics import enumerate_masks
from .connection import (
    ConnectionForm,
    build_connection,
    build_gauge,
    eigenvalue_mismatch,
    expected_zero_spectrum,
    omega_at,
    residues_from_pde,
)
from .intersection import (
    build_intersection,
    det_C_closed,
    det_phi_psi_closed,
    det_psi_psi_closed,
    verify_intersection_identities,
)
from .locus import singular_distance
from .params import DEFAULT_EPS, ParameterSet, distance_to_integer, genericity_check
from .series import SeriesOptions, pfaffian_residual


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    tol: float

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "value": self.value, "tol": self.tol}


def _rel(x: complex, ref: complex) -> float:
    return float(abs(x - ref) / abs(ref))


def det_identity_error(params: ParameterSet) -> float:
    C = build_intersection(params).C
    return _rel(np.linalg.det(C), det_C_closed(params))


def auxiliary_det_errors(params: ParameterSet) -> tuple[float, float]:
    data = build_intersection(params)
    return (
        _rel(np.linalg.det(data.phi_psi), det_phi_psi_closed(params)),
        _rel(np.linalg.det(data.psi_psi), det_psi_psi_closed(params)),
    )


def dual_construction_error(params: ParameterSet) -> float:
    """Max-entry difference of the two residue constructions, relative to scale."""
    a, b = build_connection(params), residues_from_pde(params)
    worst = 0.0
    for x, y in zip(a.R0, b.R0):
        worst = max(worst, np.max(np.abs(x - y)) / max(1.0, np.max(np.abs(y))))
    for v, y in b.RV.items():
        worst = max(worst, np.max(np.abs(a.RV[v] - y)) / max(1.0, np.max(np.abs(y))))
    return float(worst)


def eigenstructure_errors(params: ParameterSet, conn: ConnectionForm | None = None) -> dict:
    """Spectral mismatch of each R0[k]; rank ratio and trace error of each RV[v]."""
    conn = conn or build_connection(params)
    r0 = []
    for k in range(1, params.m + 1):
        mis = eigenvalue_mismatch(conn.R0[k - 1], expected_zero_spectrum(params, k))
        r0.append(mis / (1 + abs(1 - params.c[k - 1])))
    ranks, traces = [], []
    for v, R in conn.RV.items():
        s = np.linalg.svd(R, compute_uv=False)
        ranks.append(float(s[1] / s[0]) if s.size > 1 else 0.0)
        expected = params.sigma_beta(v) - params.a
        traces.append(float(abs(np.trace(R) - expected) / max(1.0, abs(expected))))
    return {"R0_spectrum": max(r0), "RV_rank": max(ranks), "RV_trace": max(traces)}


def random_clear_point(m: int, rng: np.random.Generator, clearance: float, radius: float = 1.5) -> np.ndarray:
    while True:
        x = rng.uniform(-radius, radius, m) + 1j * rng.uniform(-radius, radius, m)
        if singular_distance(x) > clearance:
            return x


def random_series_point(m: int, rng: np.random.Generator, total: float = 0.4, clearance: float = 0.02) -> np.ndarray:
    """Random point with Σ|x_i| <= ``total`` kept off the locus."""
    while True:
        x = rng.uniform(-1, 1, m) + 1j * rng.uniform(-1, 1, m)
        x *= rng.uniform(0.1, 1.0) * total / np.abs(x).sum()
        if singular_distance(x) > clearance:
            return x


def flatness_error(conn: ConnectionForm, x) -> float:
    """max over i<j of ‖[Ω_i, Ω_j]‖ / (‖Ω_i‖ ‖Ω_j‖), max-entry norms."""
    om = omega_at(conn, x)
    worst = 0.0
    for i in range(conn.m):
        for j in range(i + 1, conn.m):
            A, B = om[i], om[j]
            comm = np.max(np.abs(A @ B - B @ A))
            worst = max(worst, comm / (np.max(np.abs(A)) * np.max(np.abs(B))))
    return float(worst)


def gauge_error(params: ParameterSet) -> float:
    g = build_gauge(params)
    return float(np.max(np.abs(g.P @ g.Pinv - np.eye(1 << params.m))))


def resonance_warnings(params: ParameterSet, eps: float = DEFAULT_EPS) -> list[dict]:
    """Integral local-exponent differences: 1 - c_k, and Σβ_v - a for v ≠ 0."""
    out = []
    for k, ck in enumerate(params.c, start=1):
        d = distance_to_integer(1 - ck)
        if d <= eps:
            out.append({"name": f"1-c_{k}", "value": [(1 - ck).real, (1 - ck).imag], "distance": d})
    for v in enumerate_masks(params.m)[1:]:
        z = params.sigma_beta(v) - params.a
        d = distance_to_integer(z)
        if d <= eps:
            tag = "".join(map(str, v.as_tuple()))
            out.append({"name": f"sigma_beta_{tag}-a", "value": [z.real, z.imag], "distance": d})
    return out


def run_checks(
    params: ParameterSet,
    rng: np.random.Generator,
    eps: float = DEFAULT_EPS,
    flat_points: int = 20,
    series_points: int = 5,
    opts: SeriesOptions = SeriesOptions(),
) -> dict:
    m = params.m
    conn = build_connection(params)
    checks = [
        Check("det_C_identity", *_pass(det_identity_error(params), 1e-10)),
        Check("intersection_C_Ft", *_pass(verify_intersection_identities(params)["phi_psi_deviation"], 1e-12)),
        Check("intersection_F_C_Ft", *_pass(verify_intersection_identities(params)["psi_psi_deviation"], 1e-12)),
    ]
    d1, d2 = auxiliary_det_errors(params)
    checks.append(Check("det_phi_psi_identity", *_pass(d1, 1e-10)))
    checks.append(Check("det_psi_psi_identity", *_pass(d2, 1e-10)))
    checks.append(Check("dual_construction", *_pass(dual_construction_error(params), 1e-12)))
    eig = eigenstructure_errors(params, conn)
    checks.append(Check("R0_spectrum", *_pass(eig["R0_spectrum"], 1e-8)))
    checks.append(Check("RV_rank_one", *_pass(eig["RV_rank"], 1e-10)))
    checks.append(Check("RV_trace", *_pass(eig["RV_trace"], 1e-10)))
    if m >= 2:
        flat = max(flatness_error(conn, random_clear_point(m, rng, 0.05)) for _ in range(flat_points))
        checks.append(Check("flatness", *_pass(flat, 1e-10)))
    checks.append(Check("gauge_inverse", *_pass(gauge_error(params), 1e-12)))
    gauge = build_gauge(params)
    res = max(
        float(np.max(pfaffian_residual(params, random_series_point(m, rng), opts, conn, gauge)))
        for _ in range(series_points)
    )
    checks.append(Check("pfaffian_residual", *_pass(res, 1e-8)))
    report = genericity_check(params, eps)
    return {
        "m": m,
        "params": params.to_dict(),
        "genericity": report.to_dict(),
        "warnings": [i["name"] for i in report.to_dict()["issues"]]
        + [w["name"] for w in resonance_warnings(params, eps)],
        "resonance": resonance_warnings(params, eps),
        "checks": [c.to_dict() for c in checks],
        "passed": all(c.passed for c in checks),
    }


def _pass(value: float, tol: float) -> tuple[bool, float, float]:
    value = float(value)
    return bool(value < tol), value, tol
