"""Bit-vector model of F_2^m.

A :class:`Mask` stores ``(v_1, ..., v_m)`` little-endian: ``v_1`` is the
least significant bit.  Variable indices in the public API are 1-based,
matching the usual mathematical notation.

Two orders are provided: the partial order ``v >= w`` (set inclusion of the
support) and the total order used to lay out every 2^m x 2^m matrix in the
package.  The position of a mask in :func:`enumerate_masks` is its matrix
index.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceededError, DimensionError, SingularParameterError

MAX_VARIABLES = 12


@dataclass(frozen=True, order=False)
class Mask:
    m: int
    bits: int

    def __post_init__(self):
        if self.m < 1:
            raise DimensionError(f"m must be positive, got {self.m}")
        if not 0 <= self.bits < (1 << self.m):
            raise ValueError(f"bits={self.bits} out of range for m={self.m}")

    @classmethod
    def from_tuple(cls, entries: Sequence[int]) -> "Mask":
        bits = 0
        for i, e in enumerate(entries):
            if e not in (0, 1):
                raise ValueError(f"mask entries must be 0 or 1, got {e!r}")
            bits |= int(e) << i
        return cls(len(entries), bits)

    @classmethod
    def zero(cls, m: int) -> "Mask":
        return cls(m, 0)

    @classmethod
    def unit(cls, m: int, i: int) -> "Mask":
        """The unit vector e_i (1-based)."""
        _check_index(i, m)
        return cls(m, 1 << (i - 1))

    @classmethod
    def ones(cls, m: int) -> "Mask":
        return cls(m, (1 << m) - 1)

    def __getitem__(self, i: int) -> int:
        """Entry v_i, 1-based."""
        _check_index(i, self.m)
        return (self.bits >> (i - 1)) & 1

    def as_tuple(self) -> tuple[int, ...]:
        return tuple((self.bits >> i) & 1 for i in range(self.m))

    def support(self) -> tuple[int, ...]:
        """The index set I_v = {i : v_i = 1}, 1-based."""
        return tuple(i + 1 for i in range(self.m) if (self.bits >> i) & 1)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)

    def __repr__(self):
        return f"Mask{self.as_tuple()}"


def _check_index(i: int, m: int) -> None:
    if not 1 <= i <= m:
        raise IndexError(f"index {i} out of range 1..{m}")


def _check_same(v: Mask, w: Mask) -> None:
    if v.m != w.m:
        raise DimensionError(f"masks have different lengths: {v.m} != {w.m}")


def weight(v: Mask) -> int:
    return v.bits.bit_count()


def partial_geq(v: Mask, w: Mask) -> bool:
    """``v ⪰ w``: every set bit of ``w`` is set in ``v``."""
    _check_same(v, w)
    return (w.bits & ~v.bits) == 0


def _order_key(bits: int, m: int) -> tuple:
    # Within a weight class the mask with a 1 at the first differing index
    # comes first, so (1,0) < (0,1).
    return (bits.bit_count(), tuple(-((bits >> i) & 1) for i in range(m)))


def total_less(v: Mask, w: Mask) -> bool:
    """``v < w`` in the total order (weight first, then first differing index)."""
    _check_same(v, w)
    if v.bits == w.bits:
        return False
    return _order_key(v.bits, v.m) < _order_key(w.bits, w.m)


def flip(v: Mask, j: int) -> Mask:
    """``σ_j · v``: toggle coordinate ``j`` (1-based)."""
    _check_index(j, v.m)
    return Mask(v.m, v.bits ^ (1 << (j - 1)))


def check_cap(m: int) -> None:
    if m < 1:
        raise DimensionError(f"m must be positive, got {m}")
    if m > MAX_VARIABLES:
        raise CapExceededError(f"m={m} exceeds the supported maximum {MAX_VARIABLES}")


@lru_cache(maxsize=None)
def ordered_bits(m: int) -> np.ndarray:
    """Integer bit patterns in total order; ``ordered_bits(m)[k]`` is row ``k``."""
    check_cap(m)
    order = sorted(range(1 << m), key=lambda b: _order_key(b, m))
    arr = np.array(order, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def positions(m: int) -> np.ndarray:
    """Inverse of :func:`ordered_bits`: matrix index of each bit pattern."""
    order = ordered_bits(m)
    pos = np.empty_like(order)
    pos[order] = np.arange(order.size)
    pos.setflags(write=False)
    return pos


@lru_cache(maxsize=None)
def bit_table(m: int) -> np.ndarray:
    """``(2^m, m)`` 0/1 array; row ``b`` holds the entries of bit pattern ``b``."""
    b = np.arange(1 << m)[:, None]
    table = ((b >> np.arange(m)[None, :]) & 1).astype(np.int64)
    table.setflags(write=False)
    return table


def enumerate_masks(m: int) -> list[Mask]:
    return [Mask(m, int(b)) for b in ordered_bits(m)]


def index_of(v: Mask) -> int:
    return int(positions(v.m)[v.bits])


def submasks(v: Mask) -> Iterable[Mask]:
    """All ``w`` with ``v ⪰ w``."""
    s = v.bits
    while True:
        yield Mask(v.m, s)
        if s == 0:
            return
        s = (s - 1) & v.bits


def a_coefficients(params) -> np.ndarray:
    """All chain sums A_w, indexed by integer bit pattern.

    Dynamic programming over the subset lattice:
    ``A_w = (1/γ_w) Σ_{i: w_i=1} A_{w - e_i}`` with ``A_0 = 1``.
    """
    m = params.m
    check_cap(m)
    gam = params.gamma_table()
    A = np.zeros(1 << m, dtype=complex)
    A[0] = 1.0
    for w in range(1, 1 << m):
        if gam[w] == 0:
            raise SingularParameterError(f"gamma vanishes at {Mask(m, w)!r}")
        acc = 0j
        rest = w
        while rest:
            low = rest & -rest
            acc += A[w ^ low]
            rest ^= low
        A[w] = acc / gam[w]
    return A


def a_coefficient(w: Mask, params) -> complex:
    """Chain sum A_w over maximal descending chains from ``w`` to 0."""
    if w.m != params.m:
        raise DimensionError(f"mask has m={w.m}, parameters have m={params.m}")
    gam = params.gamma_table()
    for u in submasks(w):
        if u.bits and gam[u.bits] == 0:
            raise SingularParameterError(f"gamma vanishes at {u!r}")
    # Only the sub-lattice below w matters; restrict the DP to it.
    A = {0: 1.0 + 0j}
    for u in sorted((s.bits for s in submasks(w)), key=int.bit_count):
        if u == 0:
            continue
        acc = 0j
        rest = u
        while rest:
            low = rest & -rest
            acc += A[u ^ low]
            rest ^= low
        A[u] = acc / gam[u]
    return complex(A[w.bits])
