"""Distance from a point of ℂ^m to the singular locus.

The locus is the union of the coordinate hyperplanes ``x_i = 0`` and the
hyperplanes ``1 - v·x = 0`` for nonzero ``v ∈ F_2^m``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .combinatorics import bit_table
from .errors import SingularLocusError


@lru_cache(maxsize=None)
def _hyperplanes(m: int):
    V = bit_table(m)[1:].astype(float)
    norms = np.sqrt(V.sum(axis=1))
    return V, norms


def as_point(x, m: int | None = None) -> np.ndarray:
    pt = np.atleast_1d(np.asarray(x, dtype=complex))
    if pt.ndim != 1:
        raise ValueError("a point must be a 1-d sequence of complex numbers")
    if m is not None and pt.size != m:
        raise ValueError(f"expected a point with {m} coordinates, got {pt.size}")
    if not np.all(np.isfinite(pt)):
        raise ValueError("point has non-finite coordinates")
    return pt


def component_distances(x) -> tuple[np.ndarray, np.ndarray]:
    """Distances to each ``x_i = 0`` and to each normalized ``1 - v·x = 0``."""
    pt = as_point(x)
    V, norms = _hyperplanes(pt.size)
    return np.abs(pt), np.abs(1 - V @ pt) / norms


def singular_distance(x) -> float:
    coord, hyper = component_distances(x)
    return float(min(coord.min(), hyper.min()))


def nearest_component(x) -> tuple[str, float]:
    """Name and distance of the closest component of the locus."""
    pt = as_point(x)
    coord, hyper = component_distances(pt)
    i = int(np.argmin(coord))
    j = int(np.argmin(hyper))
    if coord[i] <= hyper[j]:
        return f"x_{i + 1}=0", float(coord[i])
    v = bit_table(pt.size)[j + 1]
    return f"S_{''.join(map(str, v))}", float(hyper[j])


def ensure_off_locus(x, threshold: float = 1e-12) -> np.ndarray:
    pt = as_point(x)
    name, dist = nearest_component(pt)
    if dist <= threshold:
        raise SingularLocusError(
            f"point {pt.tolist()} lies on (or within {threshold:g} of) the singular component {name}",
            component=name,
            point=pt,
        )
    return pt
