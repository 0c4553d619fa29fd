"""Analytic continuation along paths and monodromy around loops.

The system ``dY/ds = A(s) Y`` with ``A(s) = Σ_i Ω_i(x(s)) dx_i/ds`` (or its
conjugate by the gauge ``P``) is integrated segment by segment with the
Dormand-Prince 5(4) pair and a PI step-size controller.  Steps are further
capped in proportion to the distance from the singular locus.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .connection import ConnectionForm, GaugeData, omega_along
from .errors import ClearanceError, StepUnderflowError
from .locus import as_point, nearest_component, singular_distance

__all__ = [
    "Arc",
    "ContinuationResult",
    "Line",
    "Path",
    "integrate_path",
    "monodromy_loop",
    "singular_distance",
]

DEFAULT_CLEARANCE = 0.02
DEFAULT_TOL = 1e-10
MAX_STEPS = 10**6


def _pair(z: complex) -> list:
    return [z.real, z.imag]


def _parse_point(raw) -> np.ndarray:
    out = []
    for item in raw:
        if isinstance(item, (list, tuple)):
            out.append(complex(float(item[0]), float(item[1])))
        else:
            out.append(complex(item))
    return np.array(out, dtype=complex)


@dataclass(frozen=True)
class Line:
    start: np.ndarray
    end: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "start", as_point(self.start))
        object.__setattr__(self, "end", as_point(self.end, self.start.size))

    def point(self, s: float) -> np.ndarray:
        return self.start + s * (self.end - self.start)

    def velocity(self, s: float) -> np.ndarray:
        return self.end - self.start

    def reversed(self) -> "Line":
        return Line(self.end, self.start)

    def to_dict(self) -> dict:
        return {"type": "line", "from": [_pair(z) for z in self.start], "to": [_pair(z) for z in self.end]}


@dataclass(frozen=True)
class Arc:
    """Circle in coordinate ``coordinate`` (1-based) about ``center``.

    ``x_k(s) = center_k + radius·exp(i(phase + 2π·turns·s))``; the other
    coordinates stay at ``center``.  Negative ``turns`` run clockwise.
    """

    center: np.ndarray
    coordinate: int
    radius: float
    turns: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not 1 <= self.coordinate <= self.center.size:
            raise ValueError(f"arc coordinate {self.coordinate} out of range")
        if not self.radius > 0:
            raise ValueError("arc radius must be positive")

    def _angle(self, s: float) -> float:
        return self.phase + 2 * math.pi * self.turns * s

    def point(self, s: float) -> np.ndarray:
        x = self.center.copy()
        x[self.coordinate - 1] += self.radius * np.exp(1j * self._angle(s))
        return x

    def velocity(self, s: float) -> np.ndarray:
        dx = np.zeros_like(self.center)
        dx[self.coordinate - 1] = 2j * math.pi * self.turns * self.radius * np.exp(1j * self._angle(s))
        return dx

    @property
    def start(self) -> np.ndarray:
        return self.point(0.0)

    @property
    def end(self) -> np.ndarray:
        return self.point(1.0)

    def reversed(self) -> "Arc":
        return Arc(self.center, self.coordinate, self.radius, -self.turns, self._angle(1.0))

    def to_dict(self) -> dict:
        return {
            "type": "arc",
            "center": [_pair(z) for z in self.center],
            "coordinate": self.coordinate,
            "radius": self.radius,
            "turns": self.turns,
            "phase": self.phase,
        }


@dataclass(frozen=True)
class Path:
    segments: tuple
    samples: int = 64

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        for prev, nxt in zip(segs, segs[1:]):
            gap = np.max(np.abs(prev.end - nxt.start))
            if gap > 1e-12 * (1 + np.max(np.abs(prev.end))):
                raise ValueError(f"path is discontinuous: segment ends at {prev.end.tolist()}, next starts at {nxt.start.tolist()}")
        if segs and len({s.start.size for s in segs}) != 1:
            raise ValueError("all segments must have the same dimension")

    @property
    def start(self) -> np.ndarray:
        return self.segments[0].start

    @property
    def end(self) -> np.ndarray:
        return self.segments[-1].end

    @property
    def m(self) -> int:
        return self.segments[0].start.size

    def is_closed(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.start - self.end)) <= tol * (1 + np.max(np.abs(self.start))))

    def reversed(self) -> "Path":
        return Path(tuple(s.reversed() for s in reversed(self.segments)), self.samples)

    def then(self, other: "Path") -> "Path":
        return Path(self.segments + other.segments, max(self.samples, other.samples))

    def clearance(self) -> float:
        """Sampled minimum of the singular distance along the path."""
        s = np.linspace(0.0, 1.0, self.samples + 1)
        return min(singular_distance(seg.point(t)) for seg in self.segments for t in s)

    @classmethod
    def line(cls, start, end) -> "Path":
        return cls((Line(start, end),))

    @classmethod
    def polyline(cls, points: Sequence) -> "Path":
        return cls(tuple(Line(p, q) for p, q in zip(points, points[1:])))

    @classmethod
    def circle(cls, center, coordinate: int, radius: float, turns: float = 1.0, phase: float = 0.0) -> "Path":
        return cls((Arc(center, coordinate, radius, turns, phase),))

    @classmethod
    def from_dict(cls, data: dict) -> "Path":
        segs = []
        for raw in data["segments"]:
            kind = raw.get("type")
            if kind == "line":
                segs.append(Line(_parse_point(raw["from"]), _parse_point(raw["to"])))
            elif kind == "arc":
                segs.append(
                    Arc(
                        _parse_point(raw["center"]),
                        int(raw["coordinate"]),
                        float(raw["radius"]),
                        float(raw.get("turns", 1.0)),
                        float(raw.get("phase", 0.0)),
                    )
                )
            else:
                raise ValueError(f"unknown segment type {kind!r}")
        if not segs:
            raise ValueError("path has no segments")
        return cls(tuple(segs), int(data.get("samples", 64)))

    def to_dict(self) -> dict:
        return {"segments": [s.to_dict() for s in self.segments], "samples": self.samples}

    @classmethod
    def from_json(cls, text: str) -> "Path":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ContinuationResult:
    end: np.ndarray
    steps: int
    rejected: int
    max_local_error: float
    path_end: np.ndarray = field(repr=False)


# Dormand-Prince 5(4)
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

_SAFETY = 0.9
_ALPHA = 0.7 / 5
_BETA = 0.4 / 5
_STEP_FRACTION = 0.25


class _System:
    def __init__(self, conn: ConnectionForm, gauge: GaugeData | None):
        self.conn = conn
        self.gauge = gauge

    def matrix(self, x: np.ndarray, dx: np.ndarray) -> np.ndarray:
        A = omega_along(self.conn, x, dx)
        if self.gauge is not None:
            A = self.gauge.P @ A @ self.gauge.Pinv
        return A


def _integrate_segment(system, seg, y, tol, clearance, max_steps, stats):
    s, h = 0.0, None
    err_prev = 1.0
    k_first = None
    steps = 0
    while s < 1.0:
        x = seg.point(s)
        speed = float(np.max(np.abs(seg.velocity(s))))
        if speed == 0.0:
            return y
        cap = _STEP_FRACTION * singular_distance(x) / speed
        if h is None:
            h = min(0.05, cap)
        h = min(h, cap, 1.0 - s)
        if h < 1e-14:
            raise StepUnderflowError(f"step size underflow at s={s:.6g}, x={x.tolist()}")
        if k_first is None:
            k_first = system.matrix(x, seg.velocity(s)) @ y
        k = [k_first]
        for i in range(1, 7):
            t = s + _C[i] * h
            yi = y + h * sum(a * kj for a, kj in zip(_A[i], k) if a)
            k.append(system.matrix(seg.point(t), seg.velocity(t)) @ yi)
        y_new = y + h * sum(b * kj for b, kj in zip(_B5, k) if b)
        err_vec = h * sum(e * kj for e, kj in zip(_E, k) if e)
        scale = tol * (1.0 + np.maximum(np.abs(y), np.abs(y_new)))
        err = float(np.sqrt(np.mean(np.abs(err_vec / scale) ** 2)))
        if err <= 1.0:
            s = 1.0 if 1.0 - (s + h) < 1e-15 else s + h
            y = y_new
            k_first = k[-1]
            stats["max_err"] = max(stats["max_err"], err * tol)
            stats["steps"] += 1
            steps += 1
            if steps > max_steps:
                raise StepUnderflowError(f"exceeded {max_steps} steps on one segment")
            xp = seg.point(s)
            name, dist = nearest_component(xp)
            if dist < clearance:
                raise ClearanceError(
                    f"path comes within {dist:.3g} of {name} at {xp.tolist()} (clearance {clearance:g})",
                    component=name,
                    point=xp,
                )
            factor = _SAFETY * max(err, 1e-10) ** -_ALPHA * err_prev**_BETA
            h *= min(5.0, max(0.2, factor))
            err_prev = max(err, 1e-4)
        else:
            stats["rejected"] += 1
            h *= max(0.1, _SAFETY * err**-0.2)
    return y


def integrate_path(
    conn: ConnectionForm,
    gauge: GaugeData | None,
    path: Path,
    initial,
    tol: float = DEFAULT_TOL,
    clearance: float = DEFAULT_CLEARANCE,
    max_steps: int = MAX_STEPS,
) -> ContinuationResult:
    """Transport ``initial`` (a vector or a fundamental matrix) along ``path``.

    With ``gauge`` the derivative-frame system ``d F = P Ξ P^{-1} F`` is
    integrated; with ``gauge=None`` the φ-frame system ``dY = Ξ Y``.
    """
    y = np.array(initial, dtype=complex)
    n = conn.size
    if y.shape[0] != n:
        raise ValueError(f"initial data must have leading dimension {n}, got {y.shape}")
    if path.m != conn.m:
        raise ValueError(f"path lives in C^{path.m}, connection has m={conn.m}")
    for seg in path.segments:
        for t in np.linspace(0.0, 1.0, path.samples + 1):
            xp = seg.point(t)
            name, dist = nearest_component(xp)
            if dist < clearance:
                raise ClearanceError(
                    f"path comes within {dist:.3g} of {name} at {xp.tolist()} (clearance {clearance:g})",
                    component=name,
                    point=xp,
                )
    system = _System(conn, gauge)
    stats = {"steps": 0, "rejected": 0, "max_err": 0.0}
    for seg in path.segments:
        y = _integrate_segment(system, seg, y, tol, clearance, max_steps, stats)
    return ContinuationResult(y, stats["steps"], stats["rejected"], stats["max_err"], path.end)


def monodromy_loop(
    conn: ConnectionForm,
    gauge: GaugeData | None,
    loop: Path,
    tol: float = DEFAULT_TOL,
    clearance: float = DEFAULT_CLEARANCE,
) -> np.ndarray:
    """Matrix M with ``Y(end) = M Y(start)`` for solutions continued around ``loop``."""
    if not loop.is_closed(1e-10):
        raise ValueError("monodromy needs a closed loop")
    res = integrate_path(conn, gauge, loop, np.eye(conn.size, dtype=complex), tol, clearance)
    return res.end
