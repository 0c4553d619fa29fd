import json

import numpy as np
import pytest

from lauricella.combinatorics import Mask
from lauricella.connection import build_connection, build_gauge
from lauricella.continuation import Arc, Line, Path, integrate_path, monodromy_loop, singular_distance
from lauricella.errors import ClearanceError
from lauricella.series import solution_vector

from conftest import draws


def _rel(a, b):
    return np.max(np.abs(a - b)) / np.max(np.abs(b))


def test_singular_distance():
    assert singular_distance([0.5]) == pytest.approx(0.5)
    assert singular_distance([0.4, 0.6]) == pytest.approx(0.0, abs=1e-15)
    d = singular_distance([2, 3])
    assert d == pytest.approx(min(1, 2, 4 / np.sqrt(2)))


def test_path_json_round_trip():
    data = {
        "segments": [
            {"type": "line", "from": [[0.1, 0.0], [0.2, 0.0]], "to": [[0.2, 0.1], [0.2, 0.0]]},
            {"type": "arc", "center": [[0.1, 0.1], [0.2, 0.0]], "coordinate": 1, "radius": 0.1, "turns": 1},
        ]
    }
    path = Path.from_dict(data)
    assert path.m == 2 and path.is_closed() is False
    again = Path.from_json(json.dumps(path.to_dict()))
    np.testing.assert_allclose(again.end, path.end)
    with pytest.raises(ValueError, match="discontinuous"):
        Path((Line([0.1], [0.2]), Line([0.3], [0.4])))
    with pytest.raises(ValueError):
        Path.from_dict({"segments": [{"type": "spiral"}]})


def test_zero_length_path():
    p = draws(2, 1)[0]
    v = np.arange(4) + 1j
    res = integrate_path(build_connection(p), build_gauge(p), Path.line([0.1, 0.2], [0.1, 0.2]), v)
    np.testing.assert_array_equal(res.end, v)
    assert res.steps == 0


@pytest.mark.parametrize("m, start, end", [
    (1, [0.2], [0.4]),
    (2, [0.1, 0.15], [0.2 + 0.05j, 0.1]),
    (3, [0.1, 0.05, 0.1], [0.05, 0.12 - 0.05j, 0.15]),
])
def test_matches_series_inside_domain(m, start, end):
    for p in draws(m, 2):
        conn, g = build_connection(p), build_gauge(p)
        F0 = solution_vector(p, start).values
        F1 = solution_vector(p, end).values
        res = integrate_path(conn, g, Path.line(start, end), F0)
        assert _rel(res.end, F1) < 1e-8
        assert res.max_local_error < 1e-10


def test_flow_and_reversal():
    p = draws(2, 1)[0]
    conn, g = build_connection(p), build_gauge(p)
    P_, Q, R = [0.1, 0.2], [0.5 + 0.4j, -0.3 + 0.3j], [1.6 + 0.3j, 0.7 - 0.6j]
    v0 = np.array([1, 0.5j, -0.3, 2])
    pq = Path.line(P_, Q)
    qr = Path.line(Q, R)
    two = integrate_path(conn, g, qr, integrate_path(conn, g, pq, v0).end).end
    one = integrate_path(conn, g, pq.then(qr), v0).end
    assert _rel(two, one) < 1e-8
    back = integrate_path(conn, g, pq.then(qr).reversed(), one).end
    assert _rel(back, v0) < 1e-8


def test_gauge_covariance():
    p = draws(2, 1)[0]
    conn, g = build_connection(p), build_gauge(p)
    path = Path.polyline([[0.1, 0.2], [0.4 + 0.3j, -0.2 + 0.3j], [-0.5, -0.6 + 0.2j]])
    Mphi = integrate_path(conn, None, path, np.eye(4)).end
    MF = integrate_path(conn, g, path, np.eye(4)).end
    assert _rel(g.P @ Mphi @ g.Pinv, MF) < 1e-8


def test_clearance_violation():
    p = draws(2, 1)[0]
    conn, g = build_connection(p), build_gauge(p)
    with pytest.raises(ClearanceError) as err:
        integrate_path(conn, g, Path.line([0.2, 0.3], [0.5, 0.6]), np.eye(4))
    assert err.value.component == "S_11"


def test_contractible_loop():
    p = draws(2, 1)[0]
    conn, g = build_connection(p), build_gauge(p)
    M = monodromy_loop(conn, g, Path.circle([0.3, 0.1], 1, 0.05))
    assert np.max(np.abs(M - np.eye(4))) < 1e-8


def _matched(ev, expected):
    from scipy.optimize import linear_sum_assignment

    cost = np.abs(np.asarray(ev)[:, None] - np.asarray(expected)[None, :])
    r, c = linear_sum_assignment(cost)
    return cost[r, c].max()


def test_monodromy_m1_origin():
    for p in draws(1, 3):
        conn, g = build_connection(p), build_gauge(p)
        M = monodromy_loop(conn, g, Path.circle([0.0], 1, 0.1))
        expected = [1, np.exp(2j * np.pi * (1 - p.c[0]))]
        assert _matched(np.linalg.eigvals(M), expected) < 1e-6
        assert np.linalg.det(M) == pytest.approx(np.exp(2j * np.pi * np.trace(conn.R0[0])), rel=1e-6)


def test_monodromy_m2_hyperplane():
    for p in draws(2, 2):
        conn, g = build_connection(p), build_gauge(p)
        M = monodromy_loop(conn, g, Path.circle([0.3, 0.7], 2, 0.05))
        mu = p.sigma_beta(Mask.ones(2)) - p.a
        assert _matched(np.linalg.eigvals(M), [np.exp(2j * np.pi * mu), 1, 1, 1]) < 1e-6
        assert np.linalg.det(M) == pytest.approx(np.exp(2j * np.pi * mu), rel=1e-6)


def test_monodromy_needs_closed_loop():
    p = draws(1, 1)[0]
    with pytest.raises(ValueError):
        monodromy_loop(build_connection(p), build_gauge(p), Path.line([0.2], [0.3]))


def test_arc_reversal():
    arc = Arc([0.1 + 0.2j, 0.3], 2, 0.05, turns=0.75, phase=0.3)
    rev = arc.reversed()
    for s in np.linspace(0, 1, 5):
        np.testing.assert_allclose(rev.point(s), arc.point(1 - s), atol=1e-15)
