"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""
import sys
from pathlib import Path as _FsPath

import mpmath
import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

sys.path.insert(0, str(_FsPath(__file__).parent))

from lauricella.combinatorics import Mask, a_coefficient, enumerate_masks, total_less
from lauricella.connection import (
    ConnectionForm,
    build_connection,
    build_gauge,
    gauged_omega_at,
)
from lauricella.continuation import Path, integrate_path, monodromy_loop
from lauricella.intersection import build_intersection, verify_intersection_identities
from lauricella.params import ParameterSet
from lauricella.series import fa_partial_truncated, fa_truncated, pfaffian_residual, solution_vector
from lauricella.verify import (
    auxiliary_det_errors,
    det_identity_error,
    dual_construction_error,
    eigenstructure_errors,
    flatness_error,
    gauge_error,
    random_clear_point,
    random_series_point,
)

from conftest import draws

DRAWS = 10


def _report(number, title, checks):
    """Print one line per criterion; ``checks`` is a list of (label, value, tol, ok)."""
    ok = all(c[3] for c in checks)
    worst = "; ".join(f"{label}={value:.2e} (tol {tol:.0e})" for label, value, tol, _ in checks)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {worst}")
    return ok


def _below(label, value, tol):
    return (label, float(value), tol, bool(value < tol))


def _above(label, value, tol):
    return (label, float(value), tol, bool(value > tol))


def _match(ev, expected):
    cost = np.abs(np.asarray(ev)[:, None] - np.asarray(expected)[None, :])
    r, c = linear_sum_assignment(cost)
    return cost[r, c].max()


def _rel(a, b):
    return np.max(np.abs(a - b)) / np.max(np.abs(b))


def criterion_1():
    worst = max(det_identity_error(p) for m in (1, 2, 3, 4) for p in draws(m, DRAWS))
    return _report(1, "det(C) closed form", [_below("max rel", worst, 1e-10)])


def criterion_2():
    dev, aux = 0.0, 0.0
    for m in (1, 2, 3):
        for p in draws(m, DRAWS):
            r = verify_intersection_identities(p)
            dev = max(dev, r["phi_psi_deviation"], r["psi_psi_deviation"])
            aux = max(aux, *auxiliary_det_errors(p))
    return _report(2, "intersection consistency", [_below("C Ft / F C Ft", dev, 1e-12), _below("aux det", aux, 1e-10)])


def criterion_3():
    worst = max(dual_construction_error(p) for m in (1, 2, 3) for p in draws(m, DRAWS))
    return _report(3, "dual residue construction", [_below("max rel", worst, 1e-12)])


def criterion_4():
    spectrum = rank = trace = 0.0
    for m in (1, 2, 3, 4):
        for p in draws(m, DRAWS):
            e = eigenstructure_errors(p)
            spectrum, rank, trace = max(spectrum, e["R0_spectrum"]), max(rank, e["RV_rank"]), max(trace, e["RV_trace"])
    return _report(4, "residue eigenstructure", [
        _below("R0 spectrum", spectrum, 1e-8), _below("RV s2/s1", rank, 1e-10), _below("RV trace", trace, 1e-10),
    ])


def criterion_5():
    rng = np.random.default_rng(5)
    worst, control = 0.0, np.inf
    for m in (2, 3):
        for p in draws(m, DRAWS):
            conn = build_connection(p)
            pts = [random_clear_point(m, rng, 0.05) for _ in range(20)]
            worst = max(worst, max(flatness_error(conn, x) for x in pts))
        RV = dict(conn.RV)
        ones = Mask.ones(m)
        R = RV[ones].copy()
        i, j = np.unravel_index(np.argmax(np.abs(R)), R.shape)
        R[i, j] *= 1.1
        RV[ones] = R
        bad = ConnectionForm.from_residues(m, conn.R0, RV)
        control = min(control, max(flatness_error(bad, x) for x in pts))
    return _report(5, "flatness", [_below("commutator", worst, 1e-10), _above("perturbed control", control, 1e-4)])


def criterion_6():
    rng = np.random.default_rng(6)
    worst = 0.0
    for m in (1, 2, 3):
        p = draws(m, 1)[0]
        conn, g = build_connection(p), build_gauge(p)
        for _ in range(10):
            x = random_series_point(m, rng, 0.4)
            worst = max(worst, float(np.max(pfaffian_residual(p, x, conn=conn, gauge=g))))
    return _report(6, "Pfaffian residual N=60", [_below("max rel", worst, 1e-8)])


def criterion_7():
    worst = max(gauge_error(p) for m in (1, 2, 3, 4) for p in draws(m, DRAWS))
    return _report(7, "gauge inverse", [_below("|P Pinv - I|", worst, 1e-12)])


def criterion_8():
    ode, contig = 0.0, 0.0
    for p in draws(1, DRAWS):
        a, b, c = p.a, p.b[0], p.c[0]
        conn, g = build_connection(p), build_gauge(p)
        for x in (0.3, -0.7 + 0.2j, 2.5 - 1j):
            (G,) = gauged_omega_at(conn, g, [x])
            # x(1-x)F'' + (c-(a+b+1)x)F' - abF = 0 in the frame (F, xF')
            expected = np.array([[0, 1 / x], [a * b / (1 - x), (1 - c + (a + b) * x) / (x * (1 - x))]])
            ode = max(ode, _rel(G, expected))
        x = 0.3 + 0.1j
        lhs = fa_partial_truncated(p, [x], I=[1])
        shifted = a * b / c * complex(mpmath.hyp2f1(a + 1, b + 1, c + 1, x))
        contig = max(contig, abs(lhs - shifted) / abs(shifted))
        contig = max(contig, abs(lhs - a * b / c * fa_truncated(ParameterSet(a + 1, [b + 1], [c + 1]), [x])) / abs(shifted))
    return _report(8, "m=1 Gauss reduction", [_below("ODE coefficients", ode, 1e-10), _below("contiguous", contig, 1e-10)])


def criterion_9():
    series = compose = loop = small = 0.0
    starts = {1: ([0.2], [0.4 - 0.1j]), 2: ([0.1, 0.15], [0.2 + 0.05j, 0.1]), 3: ([0.1, 0.05, 0.1], [0.05, 0.12 - 0.05j, 0.15])}
    for m, (s, e) in starts.items():
        for p in draws(m, 2):
            conn, g = build_connection(p), build_gauge(p)
            res = integrate_path(conn, g, Path.line(s, e), solution_vector(p, s).values)
            series = max(series, _rel(res.end, solution_vector(p, e).values))
    p = draws(2, 1)[0]
    conn, g = build_connection(p), build_gauge(p)
    pq = Path.line([0.1, 0.2], [0.5 + 0.4j, -0.3 + 0.3j])
    qr = Path.line([0.5 + 0.4j, -0.3 + 0.3j], [1.6 + 0.3j, 0.7 - 0.6j])
    v0 = np.array([1, 0.5j, -0.3, 2])
    one = integrate_path(conn, g, pq.then(qr), v0).end
    two = integrate_path(conn, g, qr, integrate_path(conn, g, pq, v0).end).end
    back = integrate_path(conn, g, pq.then(qr).reversed(), one).end
    compose = max(_rel(two, one), _rel(back, v0))
    M = monodromy_loop(conn, g, Path.circle([0.3, 0.1], 1, 0.05))
    loop = np.max(np.abs(M - np.eye(4)))
    for m in (1, 2):
        for p in draws(m, 2):
            conn, g = build_connection(p), build_gauge(p)
            for k in range(1, m + 1):
                center = [0.0 if i == k - 1 else 0.2 + 0.1j for i in range(m)]
                M = monodromy_loop(conn, g, Path.circle(center, k, 0.1))
                half = 2 ** (m - 1)
                expected = [1] * half + [np.exp(2j * np.pi * (1 - p.c[k - 1]))] * half
                small = max(small, _match(np.linalg.eigvals(M), expected))
    hyper = 0.0
    for p in draws(2, 2):
        conn, g = build_connection(p), build_gauge(p)
        M = monodromy_loop(conn, g, Path.circle([0.3, 0.7], 2, 0.05))
        mu = np.exp(2j * np.pi * (p.sigma_beta(Mask.ones(2)) - p.a))
        hyper = max(hyper, float(np.min(np.abs(np.linalg.eigvals(M) - mu))))
    return _report(9, "continuation and monodromy", [
        _below("series vs ODE", series, 1e-8),
        _below("compose/reverse", compose, 1e-8),
        _below("contractible loop", loop, 1e-8),
        _below("loop x_k=0", small, 1e-6),
        _below("loop S_11", hyper, 1e-6),
    ])


def _chain(m):
    """Reference order: zero, then e_1 < ... < e_m, then pairs lexicographically, and so on."""
    import itertools

    out = []
    for r in range(m + 1):
        for combo in itertools.combinations(range(m), r):
            out.append(Mask.from_tuple(tuple(int(i in combo) for i in range(m))))
    return out


def criterion_10():
    order_ok = all(enumerate_masks(m) == _chain(m) for m in (1, 2, 3))
    order_ok &= all(total_less(u, v) for m in (1, 2, 3) for u, v in zip(_chain(m), _chain(m)[1:]))
    worst = 0.0
    for p in draws(2, DRAWS):
        a, (c1, c2) = p.a, p.c
        ref = 1 / (a - c1 - c2 + 2) * (1 / (a - c1 + 1) + 1 / (a - c2 + 1))
        worst = max(worst, abs(a_coefficient(Mask.ones(2), p) - ref) / abs(ref))
    for p in draws(3, DRAWS):
        a, (c1, c2, c3) = p.a, p.c
        ref = (1 / (a - c1 - c2 - c3 + 3)) * (
            1 / (a - c1 - c2 + 2) * (1 / (a - c1 + 1) + 1 / (a - c2 + 1))
            + 1 / (a - c1 - c3 + 2) * (1 / (a - c1 + 1) + 1 / (a - c3 + 1))
            + 1 / (a - c2 - c3 + 2) * (1 / (a - c2 + 1) + 1 / (a - c3 + 1))
        )
        worst = max(worst, abs(a_coefficient(Mask.ones(3), p) - ref) / abs(ref))
    return _report(10, "combinatorics", [("order", 0.0 if order_ok else 1.0, 0.5, order_ok), _below("A_w", worst, 1e-12)])


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_criterion(criterion, capsys):
    with capsys.disabled():
        print()
        ok = criterion()
    assert ok


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
