"""Finitely supported complex measures and evaluable functions on a carrier.

A :class:`Measure` is the computational stand-in for a compactly supported
complex measure: a canonical, sorted tuple of (point, weight) pairs with exact
zeros removed.  Support points are merged by exact equality; on the real line
this means bitwise float equality after arithmetic, which keeps convolution
associative at the cost of not merging nearly-equal points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Union

from .errors import DomainError

Point = Union[int, float]


def _to_complex(w: Any) -> complex:
    z = complex(w)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite weight {w!r}")
    return z


@dataclass(frozen=True)
class Measure:
    """Finitely supported complex measure on a hypergroup carrier."""

    hypergroup: Any
    support: tuple[tuple[Point, complex], ...]

    @staticmethod
    def from_items(hypergroup: Any, items: Iterable[tuple[Point, Any]]) -> "Measure":
        """Canonicalise: validate points, merge duplicates, drop exact zeros, sort."""
        acc: dict[Point, complex] = {}
        for x, w in items:
            x = hypergroup.validate_point(x)
            acc[x] = acc.get(x, 0j) + _to_complex(w)
        cleaned = [(x, w) for x, w in acc.items() if w != 0]
        cleaned.sort(key=lambda item: item[0])
        return Measure(hypergroup, tuple(cleaned))

    @property
    def points(self) -> tuple[Point, ...]:
        return tuple(x for x, _ in self.support)

    @property
    def is_zero(self) -> bool:
        return not self.support

    def weight(self, x: Point) -> complex:
        for p, w in self.support:
            if p == x:
                return w
        return 0j

    def total_mass(self) -> complex:
        return sum((w for _, w in self.support), 0j)

    def prune(self, threshold: float) -> "Measure":
        """Drop weights with |w| <= threshold (opt-in; default pruning is exact-zero only)."""
        return Measure(self.hypergroup, tuple((x, w) for x, w in self.support if abs(w) > threshold))

    def __add__(self, other: "Measure") -> "Measure":
        _require_same(self, other)
        return Measure.from_items(self.hypergroup, list(self.support) + list(other.support))

    def __sub__(self, other: "Measure") -> "Measure":
        return self + (-1.0) * other

    def __neg__(self) -> "Measure":
        return (-1.0) * self

    def __rmul__(self, scalar: Any) -> "Measure":
        c = _to_complex(scalar)
        return Measure.from_items(self.hypergroup, [(x, c * w) for x, w in self.support])

    def __repr__(self) -> str:
        inner = " + ".join(f"({w:.6g})d[{x}]" for x, w in self.support) or "0"
        return f"Measure({inner})"


def dirac(hypergroup: Any, x: Point) -> Measure:
    """Point mass at x."""
    return Measure.from_items(hypergroup, [(x, 1.0)])


def _require_same(mu: Measure, nu: Measure) -> None:
    if mu.hypergroup != nu.hypergroup:
        raise DomainError("measures live on different hypergroups")


class CFunction:
    """Evaluable complex-valued function on a hypergroup carrier.

    Backed by a callable plus a descriptor (`kind`, `params`) used for
    serialisation and reporting.  Evaluation is deterministic.
    """

    __slots__ = ("_fn", "kind", "params")

    def __init__(self, fn: Callable[[Point], Any], kind: str = "callable", params: Mapping[str, Any] | None = None):
        self._fn = fn
        self.kind = kind
        self.params = dict(params or {})

    def __call__(self, x: Point) -> complex:
        try:
            return complex(self._fn(x))
        except DomainError:
            raise
        except Exception as exc:
            raise DomainError(f"function evaluation failed at point {x!r}: {exc}") from exc

    @classmethod
    def constant(cls, value: Any) -> "CFunction":
        c = _to_complex(value)
        return cls(lambda _x: c, kind="constant", params={"value": c})

    @classmethod
    def from_table(cls, values: Mapping[Point, Any], kind: str = "table") -> "CFunction":
        table = {x: _to_complex(v) for x, v in values.items()}

        def lookup(x: Point) -> complex:
            try:
                return table[x]
            except KeyError:
                raise DomainError(f"function table has no value at point {x!r}") from None

        return cls(lookup, kind=kind, params={"values": dict(table)})

    def __add__(self, other: "CFunction") -> "CFunction":
        return CFunction(lambda x: self(x) + other(x), kind="composite")

    def __mul__(self, other: Any) -> "CFunction":
        if isinstance(other, CFunction):
            return CFunction(lambda x: self(x) * other(x), kind="composite")
        c = _to_complex(other)
        return CFunction(lambda x: c * self(x), kind="composite")

    __rmul__ = __mul__

    def describe(self) -> str:
        if self.kind == "constant":
            return f"constant {self.params['value']:.6g}"
        if self.kind == "table":
            return "table"
        if self.params:
            inner = ", ".join(f"{k}={v}" for k, v in self.params.items() if k != "values")
            return f"{self.kind}({inner})" if inner else self.kind
        return self.kind

    def __repr__(self) -> str:
        return f"CFunction<{self.describe()}>"


ONE = CFunction.constant(1.0)


def pair(mu: Measure, f: CFunction | Callable[[Point], Any]) -> complex:
    """Integrate f against mu: sum of f(x) * mu({x}) over the support."""
    total = 0j
    for x, w in mu.support:
        try:
            value = complex(f(x))
        except DomainError:
            raise
        except Exception as exc:
            raise DomainError(f"function evaluation failed at point {x!r}: {exc}") from exc
        total += value * w
    return total


def convolve(mu: Measure, nu: Measure) -> Measure:
    """Convolution, extended bilinearly from the hypergroup's point convolution."""
    _require_same(mu, nu)
    hg = mu.hypergroup
    items: list[tuple[Point, complex]] = []
    for x, wx in mu.support:
        for y, wy in nu.support:
            for z, w in hg.convolve_points(x, y).support:
                items.append((z, wx * wy * w))
    return Measure.from_items(hg, items)


def module_action(phi: CFunction | Callable[[Point], Any], mu: Measure) -> Measure:
    """Multiplication of a measure by a function: weight at x becomes phi(x)*mu({x})."""
    items = []
    for x, w in mu.support:
        try:
            value = complex(phi(x))
        except DomainError:
            raise
        except Exception as exc:
            raise DomainError(f"function evaluation failed at point {x!r}: {exc}") from exc
        items.append((x, value * w))
    return Measure.from_items(mu.hypergroup, items)


def measure_residual(mu: Measure, nu: Measure) -> tuple[float, float]:
    """Worst pointwise weight difference and the scale max(1, |weights|)."""
    wa = dict(mu.support)
    wb = dict(nu.support)
    residual = 0.0
    scale = 1.0
    for p in set(wa) | set(wb):
        a = wa.get(p, 0j)
        b = wb.get(p, 0j)
        residual = max(residual, abs(a - b))
        scale = max(scale, abs(a), abs(b))
    return residual, scale


def as_literal(mu: Measure) -> list[list[Any]]:
    """Measure in the JSON literal shape [[point, [re, im]], ...]."""
    return [[x, [w.real, w.imag]] for x, w in mu.support]
