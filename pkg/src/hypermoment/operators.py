"""Measure operators: module homomorphisms and their verification.

Operator identity is tested extensionally on sample sets.  Sample sets that
include the point masses appearing in an assertion separate operators, so the
checks here decide the characterizations at desk scale: an operator is a
module homomorphism iff it is multiplication by its symbol, and a module
homomorphism is multiplicative iff its symbol is an exponential.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from .config import Tolerance, default_tolerance, scale_of
from .measures import (
    CFunction,
    Measure,
    Point,
    as_literal,
    convolve,
    dirac,
    measure_residual,
    module_action,
    pair,
)
from .reports import Report


@dataclass(frozen=True)
class MeasureOperator:
    """A self-map of the measure algebra, with construction metadata."""

    hypergroup: Any
    fn: Callable[[Measure], Measure]
    name: str = "operator"
    module_hom: bool = False  # additive and module-homogeneous by construction
    symbol: CFunction | None = field(default=None, compare=False)

    def __call__(self, mu: Measure) -> Measure:
        return self.fn(mu)

    def __repr__(self) -> str:
        return f"MeasureOperator<{self.name}>"


def make_module_hom(hg: Any, phi: CFunction, name: str | None = None) -> MeasureOperator:
    """Multiplication by a fixed function: mu -> phi * mu."""
    return MeasureOperator(
        hypergroup=hg,
        fn=lambda mu: module_action(phi, mu),
        name=name or f"mult[{phi.describe()}]",
        module_hom=True,
        symbol=phi,
    )


def zero_operator(hg: Any) -> MeasureOperator:
    return make_module_hom(hg, CFunction.constant(0.0), name="zero")


def identity_operator(hg: Any) -> MeasureOperator:
    return make_module_hom(hg, CFunction.constant(1.0), name="identity")


def symbol_of(op: MeasureOperator, points: Iterable[Point]) -> CFunction:
    """Tabulate x -> <F(dx), 1>: the unique symbol when F is a module homomorphism."""
    hg = op.hypergroup
    values = {hg.validate_point(x): pair(op(dirac(hg, x)), CFunction.constant(1.0)) for x in points}
    return CFunction.from_table(values)


def _worst(tracked: tuple[float, float, Any], residual: float, scale: float, witness: Any) -> tuple[float, float, Any]:
    res, scl, ce = tracked
    if residual / scale > res / scl:
        return residual, scale, witness
    return tracked


def is_module_hom(
    op: MeasureOperator,
    samples: list[tuple[Measure, CFunction]],
    tol: Tolerance | None = None,
) -> Report:
    """Check additivity, module homogeneity, and the symbol identity on samples."""
    if not samples:
        raise ValueError("samples must be nonempty")
    tol = tol or default_tolerance()
    report = Report(title=f"module homomorphism: {op.name}")

    add = (0.0, 1.0, None)
    measures = [mu for mu, _ in samples]
    for i in range(len(measures)):
        for j in range(i + 1, len(measures)):
            mu, nu = measures[i], measures[j]
            res, scl = measure_residual(op(mu + nu), op(mu) + op(nu))
            add = _worst(add, res, scl, [as_literal(mu), as_literal(nu)])
    if len(measures) == 1:
        mu = measures[0]
        res, scl = measure_residual(op(mu + mu), op(mu) + op(mu))
        add = _worst(add, res, scl, [as_literal(mu), as_literal(mu)])
    ok = tol.ok(add[0], add[1])
    report.add(
        "additivity",
        "F(mu+nu) = F(mu) + F(nu)",
        ok,
        add[0],
        add[1],
        counterexample=None if ok else add[2],
    )

    hom = (0.0, 1.0, None)
    for mu, phi in samples:
        res, scl = measure_residual(op(module_action(phi, mu)), module_action(phi, op(mu)))
        hom = _worst(hom, res, scl, [as_literal(mu), phi.describe()])
    ok = tol.ok(hom[0], hom[1])
    report.add(
        "module-homogeneity",
        "F(phi mu) = phi F(mu)",
        ok,
        hom[0],
        hom[1],
        counterexample=None if ok else hom[2],
    )

    hg = op.hypergroup
    support: list[Point] = []
    for mu in measures:
        for x in mu.points:
            if x not in support:
                support.append(x)
    sym = symbol_of(op, support) if support else CFunction.constant(0.0)
    symres = (0.0, 1.0, None)
    for mu in measures:
        res, scl = measure_residual(op(mu), module_action(sym, mu))
        symres = _worst(symres, res, scl, as_literal(mu))
    ok = tol.ok(symres[0], symres[1])
    report.add(
        "symbol-identity",
        "F(mu) = symbol(F) mu with symbol(F)(x) = <F(dx), 1>",
        ok,
        symres[0],
        symres[1],
        counterexample=None if ok else symres[2],
    )
    return report


def is_multiplicative_hom(
    op: MeasureOperator,
    samples: list[tuple[Measure, Measure]],
    tol: Tolerance | None = None,
) -> Report:
    """Check F(mu*nu) = F(mu)*F(nu) on sample pairs, through the total-mass pairing.

    Both sides are compared as <., 1> functionals: this is the sense in which
    multiplication by an exponential preserves convolution on a hypergroup
    (the canonical measures themselves differ whenever a point convolution has
    more than one support point).  On group carriers the two senses coincide.
    """
    if not samples:
        raise ValueError("samples must be nonempty")
    tol = tol or default_tolerance()
    one = CFunction.constant(1.0)
    report = Report(title=f"multiplicative homomorphism: {op.name}")
    worst = (0.0, 1.0, None)
    top = 0.0
    for mu, nu in samples:
        lhs = pair(op(convolve(mu, nu)), one)
        rhs = pair(convolve(op(mu), op(nu)), one)
        top = max(top, abs(lhs), abs(rhs))
        res = abs(lhs - rhs)
        scl = scale_of(lhs, rhs)
        worst = _worst(worst, res, scl, [as_literal(mu), as_literal(nu), lhs, rhs])
    ok = tol.ok(worst[0], worst[1])
    report.add(
        "multiplicativity",
        "<F(mu*nu), 1> = <F(mu)*F(nu), 1>",
        ok,
        worst[0],
        worst[1],
        counterexample=None if ok else worst[2],
        detail="operator is zero on all samples; multiplicativity holds trivially"
        if top <= tol.bound(1.0)
        else "",
    )
    return report


def is_exponential(
    hg: Any,
    f: CFunction,
    samples: list[tuple[Point, Point]],
    tol: Tolerance | None = None,
) -> Report:
    """Check f(o) = 1 and <dx*dy, f> = f(x) f(y) on sampled point pairs."""
    if not samples:
        raise ValueError("samples must be nonempty")
    tol = tol or default_tolerance()
    report = Report(title=f"exponential: {f.describe()}")
    at_identity = f(hg.identity)
    res0 = abs(at_identity - 1.0)
    ok0 = tol.ok(res0, 1.0)
    report.add(
        "normalization-at-identity",
        "f(o) = 1",
        ok0,
        res0,
        1.0,
        counterexample=None if ok0 else [hg.identity, at_identity],
    )
    worst = (0.0, 1.0, None)
    for x, y in samples:
        lhs = pair(hg.convolve_points(x, y), f)
        rhs = f(x) * f(y)
        res = abs(lhs - rhs)
        scl = scale_of(lhs, rhs)
        worst = _worst(worst, res, scl, [x, y, lhs, rhs])
    ok = tol.ok(worst[0], worst[1])
    report.add(
        "multiplicativity-on-pairs",
        "<dx*dy, f> = f(x) f(y)",
        ok,
        worst[0],
        worst[1],
        counterexample=None if ok else worst[2],
    )
    return report
