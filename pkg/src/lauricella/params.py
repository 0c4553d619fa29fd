"""Complex parameters (a, b, c) and the derived β and γ quantities."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .combinatorics import Mask, bit_table, check_cap
from .errors import DimensionError, NonGenericError, NonGenericWarning

DEFAULT_EPS = 1e-8


def _as_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex pairs must be [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


@dataclass(frozen=True)
class ParameterSet:
    """Parameters of F_A in ``m = len(b)`` variables.

    ``beta0[i] = b_i``, ``beta1[i] = c_i - 1 - b_i`` and
    ``gamma_v = a - v·c + |v|``.
    """

    a: complex
    b: tuple
    c: tuple
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", _as_complex(self.a))
        object.__setattr__(self, "b", tuple(_as_complex(x) for x in self.b))
        object.__setattr__(self, "c", tuple(_as_complex(x) for x in self.c))
        if len(self.b) != len(self.c):
            raise DimensionError(f"len(b)={len(self.b)} != len(c)={len(self.c)}")
        check_cap(len(self.b))

    @property
    def m(self) -> int:
        return len(self.b)

    @cached_property
    def beta0(self) -> np.ndarray:
        return np.array(self.b, dtype=complex)

    @cached_property
    def beta1(self) -> np.ndarray:
        return np.array(self.c, dtype=complex) - 1 - self.beta0

    def beta(self, s: int, i: int) -> complex:
        if s not in (0, 1):
            raise ValueError(f"s must be 0 or 1, got {s!r}")
        if not 1 <= i <= self.m:
            raise IndexError(f"index {i} out of range 1..{self.m}")
        return complex((self.beta0 if s == 0 else self.beta1)[i - 1])

    def _check(self, v: Mask) -> None:
        if v.m != self.m:
            raise DimensionError(f"mask has m={v.m}, parameters have m={self.m}")

    def gamma(self, v: Mask) -> complex:
        self._check(v)
        return complex(self.gamma_table()[v.bits])

    def gamma_table(self) -> np.ndarray:
        """γ_v for every bit pattern ``v`` (indexed by integer value)."""
        if "gamma" not in self._cache:
            bits = bit_table(self.m)
            c = np.array(self.c, dtype=complex)
            self._cache["gamma"] = self.a - bits @ c + bits.sum(axis=1)
        return self._cache["gamma"]

    def _selected_betas(self) -> np.ndarray:
        """``(2^m, m)`` array whose row ``v`` holds β_{v_i, i}."""
        if "betas" not in self._cache:
            bits = bit_table(self.m)
            self._cache["betas"] = np.where(bits == 1, self.beta1[None, :], self.beta0[None, :])
        return self._cache["betas"]

    def sigma_beta_table(self) -> np.ndarray:
        return self._selected_betas().sum(axis=1)

    def pi_beta_table(self) -> np.ndarray:
        return self._selected_betas().prod(axis=1)

    def sigma_beta(self, v: Mask) -> complex:
        self._check(v)
        return complex(self.sigma_beta_table()[v.bits])

    def pi_beta(self, v: Mask) -> complex:
        self._check(v)
        return complex(self.pi_beta_table()[v.bits])

    def replace(self, **changes) -> "ParameterSet":
        kw = {"a": self.a, "b": self.b, "c": self.c}
        kw.update(changes)
        return ParameterSet(**kw)

    # JSON: {"a": [re, im], "b": [[re, im], ...], "c": [[re, im], ...]}
    def to_dict(self) -> dict:
        pair = lambda z: [z.real, z.imag]
        return {"a": pair(self.a), "b": [pair(z) for z in self.b], "c": [pair(z) for z in self.c]}

    @classmethod
    def from_dict(cls, data: dict) -> "ParameterSet":
        missing = {"a", "b", "c"} - set(data)
        if missing:
            raise ValueError(f"parameter JSON is missing keys: {sorted(missing)}")
        if not isinstance(data["b"], list) or not isinstance(data["c"], list):
            raise ValueError("'b' and 'c' must be lists of [re, im] pairs")
        return cls(data["a"], data["b"], data["c"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ParameterSet":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class GenericityIssue:
    name: str
    value: complex
    distance: float


@dataclass(frozen=True)
class GenericityReport:
    eps: float
    issues: tuple

    @property
    def is_generic(self) -> bool:
        return not self.issues

    def summary(self) -> str:
        if not self.issues:
            return "generic"
        return ", ".join(f"{i.name}={i.value:.6g} (dist {i.distance:.2e})" for i in self.issues)

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "generic": self.is_generic,
            "issues": [
                {"name": i.name, "value": [i.value.real, i.value.imag], "distance": i.distance}
                for i in self.issues
            ],
        }


def distance_to_integer(z: complex) -> float:
    z = complex(z)
    return abs(z - round(z.real))


def genericity_check(params: ParameterSet, eps: float = DEFAULT_EPS) -> GenericityReport:
    """List every β_{0,i}, β_{1,i}, γ_v within ``eps`` of an integer."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    issues = []
    for s, arr in ((0, params.beta0), (1, params.beta1)):
        for i, z in enumerate(arr, start=1):
            d = distance_to_integer(z)
            if d <= eps:
                issues.append(GenericityIssue(f"beta_{s},{i}", complex(z), d))
    for bits, z in enumerate(params.gamma_table()):
        d = distance_to_integer(z)
        if d <= eps:
            v = Mask(params.m, bits).as_tuple()
            issues.append(GenericityIssue(f"gamma_{''.join(map(str, v))}", complex(z), d))
    return GenericityReport(eps, tuple(issues))


def enforce_genericity(params: ParameterSet, eps: float = DEFAULT_EPS, strict: bool = False) -> GenericityReport:
    """Warn (or raise under ``strict``) when the parameters are not generic."""
    report = genericity_check(params, eps)
    if not report.is_generic:
        if strict:
            raise NonGenericError(report)
        warnings.warn(f"non-generic parameters: {report.summary()}", NonGenericWarning, stacklevel=2)
    return report


def random_generic(m: int, rng: np.random.Generator, margin: float = 0.05) -> ParameterSet:
    """Draw complex parameters whose β and γ stay ``margin`` away from ℤ."""
    while True:
        a = complex(rng.uniform(-1.5, 1.5), rng.uniform(-0.5, 0.5))
        b = rng.uniform(-1.5, 1.5, m) + 1j * rng.uniform(-0.5, 0.5, m)
        c = rng.uniform(-1.5, 1.5, m) + 1j * rng.uniform(-0.5, 0.5, m)
        p = ParameterSet(a, tuple(b), tuple(c))
        if genericity_check(p, margin).is_generic and all(
            distance_to_integer(z) > margin for z in p.c
        ):
            return p


def as_sequence(values: Sequence) -> tuple:
    return tuple(_as_complex(v) for v in values)
