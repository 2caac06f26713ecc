"""Moment function sequences of higher rank and derivation families.

A moment sequence of rank r assigns to each multi-index alpha (|alpha| <= N)
a function phi_alpha with phi_0 an exponential and

    <dx*dy, phi_alpha> = sum_{beta <= alpha} binom(alpha, beta) phi_beta(x) phi_{alpha-beta}(y).

Such a sequence induces a derivation family D_alpha = multiplication by
phi_alpha obeying the generalized Leibniz rule

    D_alpha(mu*nu) = sum_{beta <= alpha} binom(alpha, beta) D_beta mu * D_{alpha-beta} nu

in the functional sense (both sides paired with the constant 1; on group
carriers the canonical measures agree outright), and conversely
phi_alpha(x) = <D_alpha dx, 1> recovers the sequence.  The truncation at
order N is exact, not approximate: every identity involves only indices
beta <= alpha.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np
import scipy.linalg

from .config import Tolerance, default_tolerance
from .errors import DomainError, PreconditionError
from .hypergroups import FiniteHypergroup, Hypergroup, PolynomialHypergroup, RealLineHypergroup
from .measures import CFunction, Measure, Point, as_literal, convolve, dirac, pair
from .operators import MeasureOperator, is_exponential, is_multiplicative_hom, make_module_hom
from .reports import Report

MultiIndex = tuple[int, ...]


def as_index(alpha: Sequence[int] | int) -> MultiIndex:
    """Coerce to a multi-index tuple of nonnegative integers."""
    if isinstance(alpha, int):
        alpha = (alpha,)
    out = tuple(int(a) for a in alpha)
    if not out:
        raise DomainError("multi-index must have rank >= 1")
    if any(a < 0 for a in out):
        raise DomainError(f"multi-index {out} has negative components")
    return out


def index_order(alpha: MultiIndex) -> int:
    return sum(alpha)


def index_leq(beta: MultiIndex, alpha: MultiIndex) -> bool:
    return len(beta) == len(alpha) and all(b <= a for b, a in zip(beta, alpha))


def index_sub(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    return tuple(a - b for a, b in zip(alpha, beta))


def multi_binomial(alpha: Sequence[int], beta: Sequence[int]) -> int:
    """Product of componentwise binomial coefficients; requires beta <= alpha."""
    a = as_index(alpha)
    b = as_index(beta)
    if len(a) != len(b):
        raise DomainError(f"rank mismatch: {a} vs {b}")
    if not index_leq(b, a):
        raise DomainError(f"{b} is not componentwise <= {a}")
    out = 1
    for ai, bi in zip(a, b):
        out *= math.comb(ai, bi)
    return out


def lower_indices(alpha: Sequence[int]) -> list[MultiIndex]:
    """All beta <= alpha in lexicographic order; length prod(alpha_i + 1)."""
    a = as_index(alpha)
    return [tuple(b) for b in itertools.product(*(range(ai + 1) for ai in a))]


def indices_up_to(rank: int, order: int) -> list[MultiIndex]:
    """All alpha in N^rank with |alpha| <= order, graded lexicographically."""
    if rank < 1:
        raise DomainError("rank must be >= 1")
    if order < 0:
        raise DomainError("order must be >= 0")
    out = [
        alpha
        for alpha in itertools.product(range(order + 1), repeat=rank)
        if sum(alpha) <= order
    ]
    out.sort(key=lambda a: (sum(a), a))
    return out


def _default_pairs(hg: Hypergroup, bound: int = 4) -> list[tuple[Point, Point]]:
    pts = hg.sample_points(bound)
    return [(x, y) for x in pts for y in pts]


@dataclass
class MomentSequence:
    """Rank-r, order-truncated family alpha -> phi_alpha."""

    hypergroup: Any
    rank: int
    order: int
    entries: dict[MultiIndex, CFunction]
    meta: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        hg: Hypergroup,
        rank: int,
        order: int,
        phi_of: Callable[[MultiIndex], CFunction] | Mapping[MultiIndex, CFunction],
        check_phi0: bool = True,
        check_pairs: list[tuple[Point, Point]] | None = None,
        tol: Tolerance | None = None,
    ) -> "MomentSequence":
        """Assemble entries for all |alpha| <= order; phi_0 must be an exponential."""
        getter = phi_of.__getitem__ if isinstance(phi_of, Mapping) else phi_of
        entries: dict[MultiIndex, CFunction] = {}
        for alpha in indices_up_to(rank, order):
            try:
                entries[alpha] = getter(alpha)
            except KeyError:
                raise DomainError(f"no entry provided for multi-index {alpha}") from None
        seq = cls(hypergroup=hg, rank=rank, order=order, entries=entries)
        if check_phi0:
            pairs = check_pairs if check_pairs is not None else _default_pairs(hg)
            rep = is_exponential(hg, seq.phi((0,) * rank), pairs, tol)
            if not rep.passed:
                worst = max(rep.records, key=lambda r: r.residual / max(r.scale, 1.0))
                raise PreconditionError(
                    f"phi_0 is not an exponential (residual {worst.residual:.3e} "
                    f"on {worst.name})"
                )
            seq.meta["phi0"] = "exponential verified"
        else:
            seq.meta["phi0"] = "check skipped"
        return seq

    @property
    def alphas(self) -> list[MultiIndex]:
        return indices_up_to(self.rank, self.order)

    def phi(self, alpha: Sequence[int]) -> CFunction:
        key = as_index(alpha)
        try:
            return self.entries[key]
        except KeyError:
            raise DomainError(f"no entry for multi-index {key} (order {self.order})") from None


@dataclass
class DerivationFamily:
    """Rank-r, order-truncated family alpha -> D_alpha of measure operators."""

    hypergroup: Any
    rank: int
    order: int
    entries: dict[MultiIndex, MeasureOperator]
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def alphas(self) -> list[MultiIndex]:
        return indices_up_to(self.rank, self.order)

    def op(self, alpha: Sequence[int]) -> MeasureOperator:
        key = as_index(alpha)
        try:
            return self.entries[key]
        except KeyError:
            raise DomainError(f"no operator for multi-index {key} (order {self.order})") from None


# ---------------------------------------------------------------------------
# built-in families


def realline_moments(lam: complex, order: int, hg: RealLineHypergroup | None = None) -> MomentSequence:
    """Rank-1 family phi_k(x) = x^k exp(lam x) on the real line."""
    hg = hg or RealLineHypergroup()
    lam = complex(lam)

    def entry(alpha: MultiIndex) -> CFunction:
        k = alpha[0]
        return CFunction(
            lambda x, _k=k: (x ** _k) * cmath.exp(lam * x),
            kind="moment",
            params={"k": k, "lambda": lam},
        )

    return MomentSequence.build(hg, 1, order, entry)


def poly_derivative_moments(hg: PolynomialHypergroup, z: complex, order: int) -> MomentSequence:
    """Rank-1 family phi_k(n) = P_n^(k)(z) on a polynomial hypergroup."""
    z = complex(z)

    def entry(alpha: MultiIndex) -> CFunction:
        k = alpha[0]
        return CFunction(
            lambda n, _k=k: hg.eval_poly_derivative(n, z, _k),
            kind="moment",
            params={"k": k, "z": z},
        )

    return MomentSequence.build(hg, 1, order, entry)


def rank_lift(seq: MomentSequence, weights: Sequence[complex]) -> MomentSequence:
    """Lift a rank-1 sequence to rank r: phi_alpha = (prod w_i^alpha_i) f_{|alpha|}.

    Valid because sum_{beta <= alpha, |beta| = s} binom(alpha, beta) = binom(|alpha|, s)
    reduces the rank-r identity to the rank-1 one.
    """
    if seq.rank != 1:
        raise DomainError("rank_lift starts from a rank-1 sequence")
    ws = tuple(complex(w) for w in weights)
    if not ws:
        raise DomainError("need at least one axis weight")

    def entry(alpha: MultiIndex) -> CFunction:
        factor = 1.0 + 0j
        for w, a in zip(ws, alpha):
            factor *= w**a
        return factor * seq.phi((sum(alpha),))

    return MomentSequence.build(seq.hypergroup, len(ws), seq.order, entry)


# ---------------------------------------------------------------------------
# verification


def verify_moment_sequence(
    seq: MomentSequence,
    pairs: list[tuple[Point, Point]],
    tol: Tolerance | None = None,
) -> Report:
    """Check the defining binomial identity for every |alpha| <= N on the pairs."""
    if not pairs:
        raise ValueError("pairs must be nonempty")
    tol = tol or default_tolerance()
    report = Report(
        title="moment sequence identity",
        meta={"rank": seq.rank, "order": seq.order, "pairs": len(pairs)},
    )
    for alpha in seq.alphas:
        worst = (0.0, 1.0, None)
        for x, y in pairs:
            conv = seq.hypergroup.convolve_points(x, y)
            lhs = pair(conv, seq.phi(alpha))
            rhs = 0j
            top = abs(lhs)
            for beta in lower_indices(alpha):
                term = (
                    multi_binomial(alpha, beta)
                    * seq.phi(beta)(x)
                    * seq.phi(index_sub(alpha, beta))(y)
                )
                rhs += term
                top = max(top, abs(term))
            res = abs(lhs - rhs)
            scl = max(1.0, top)
            if res / scl > worst[0] / worst[1]:
                worst = (res, scl, [list(alpha), x, y, lhs, rhs])
        ok = tol.ok(worst[0], worst[1])
        report.add(
            f"moment-identity alpha={list(alpha)}",
            "<dx*dy, phi_a> = sum_{b<=a} binom(a,b) phi_b(x) phi_{a-b}(y)",
            ok,
            worst[0],
            worst[1],
            counterexample=None if ok else worst[2],
        )
    return report


def derivation_from_moments(
    seq: MomentSequence,
    pairs: list[tuple[Point, Point]] | None = None,
    skip_verification: bool = False,
    tol: Tolerance | None = None,
) -> DerivationFamily:
    """Make D_alpha = multiplication by phi_alpha; the family obeys the Leibniz rule.

    The sequence is verified on `pairs` (defaults to a small deterministic
    sample) unless verification is explicitly skipped, which is recorded in
    the family metadata.
    """
    meta: dict[str, Any] = {}
    if skip_verification:
        meta["verification"] = "skipped"
    else:
        use = pairs if pairs is not None else _default_pairs(seq.hypergroup)
        rep = verify_moment_sequence(seq, use, tol)
        if not rep.passed:
            worst = max(rep.records, key=lambda r: r.residual / max(r.scale, 1.0))
            raise PreconditionError(
                f"moment sequence fails its identity at {worst.name} (residual {worst.residual:.3e})"
            )
        meta["verification"] = "passed"
    entries = {
        alpha: make_module_hom(seq.hypergroup, seq.phi(alpha), name=f"D{list(alpha)}")
        for alpha in seq.alphas
    }
    return DerivationFamily(
        hypergroup=seq.hypergroup,
        rank=seq.rank,
        order=seq.order,
        entries=entries,
        meta=meta,
    )


def _checkable_pairs(hg: Hypergroup, points: Sequence[Point]) -> list[tuple[Point, Point]]:
    """Pairs whose point convolution stays inside the tabulated points."""
    available = set(points)
    out = []
    for x in points:
        for y in points:
            try:
                conv = hg.convolve_points(x, y)
            except DomainError:
                continue
            if all(p in available for p in conv.points):
                out.append((x, y))
    return out


def moments_from_derivation(
    family: DerivationFamily,
    points: Sequence[Point],
    tol: Tolerance | None = None,
) -> MomentSequence:
    """Tabulate phi_alpha(x) = <D_alpha dx, 1> at the given points."""
    hg = family.hypergroup
    one = CFunction.constant(1.0)
    tables: dict[MultiIndex, CFunction] = {}
    for alpha in family.alphas:
        op = family.op(alpha)
        values = {hg.validate_point(x): pair(op(dirac(hg, x)), one) for x in points}
        tables[alpha] = CFunction.from_table(values)
    pairs = _checkable_pairs(hg, [hg.validate_point(x) for x in points])
    seq = MomentSequence.build(
        hg,
        family.rank,
        family.order,
        tables,
        check_phi0=bool(pairs),
        check_pairs=pairs or None,
        tol=tol,
    )
    if not pairs:
        seq.meta["phi0"] = "check skipped: no pairs stay inside the tabulated points"
    return seq


def verify_leibniz(
    family: DerivationFamily,
    samples: list[tuple[Measure, Measure]],
    f_probe: Sequence[CFunction] | None = None,
    tol: Tolerance | None = None,
) -> Report:
    """Check the generalized Leibniz rule on measure samples, per alpha.

    Both sides are compared through probe pairings; the default probe is the
    constant 1, under which the rule is the bilinear extension of the moment
    identity and holds exactly for families built from moment sequences.  On
    group carriers the canonical measures themselves agree, so arbitrary
    probes may be supplied there; on a proper hypergroup only constant probes
    are preserved.  The alpha = 0 row is plain multiplicativity of D_0;
    |alpha| = 1 rows are the two-term product rule relative to D_0.
    """
    if not samples:
        raise ValueError("samples must be nonempty")
    tol = tol or default_tolerance()
    probes = list(f_probe) if f_probe else [CFunction.constant(1.0)]
    report = Report(
        title="generalized Leibniz rule",
        meta={"rank": family.rank, "order": family.order, "samples": len(samples)},
    )
    for alpha in family.alphas:
        worst = (0.0, 1.0, None)
        for mu, nu in samples:
            lhs = family.op(alpha)(convolve(mu, nu))
            pieces = [
                multi_binomial(alpha, beta)
                * convolve(family.op(beta)(mu), family.op(index_sub(alpha, beta))(nu))
                for beta in lower_indices(alpha)
            ]
            for f in probes:
                lv = pair(lhs, f)
                terms = [pair(piece, f) for piece in pieces]
                rv = sum(terms, 0j)
                res = abs(lv - rv)
                scl = max(1.0, abs(lv), *(abs(t) for t in terms)) if terms else max(1.0, abs(lv))
                if res / scl > worst[0] / worst[1]:
                    worst = (res, scl, [list(alpha), as_literal(mu), as_literal(nu), lv, rv])
        if index_order(alpha) == 0:
            detail = "order 0: reduces to multiplicativity of D_0"
        elif index_order(alpha) == 1:
            detail = "order 1: reduces to D_0 mu * D_a nu + D_a mu * D_0 nu"
        else:
            detail = ""
        ok = tol.ok(worst[0], worst[1])
        report.add(
            f"leibniz alpha={list(alpha)}",
            "D_a(mu*nu) = sum_{b<=a} binom(a,b) D_b mu * D_{a-b} nu, paired with probes",
            ok,
            worst[0],
            worst[1],
            counterexample=None if ok else worst[2],
            detail=detail,
        )
    return report


def verify_d0_derivation(
    d0: MeasureOperator,
    d: MeasureOperator,
    samples: list[tuple[Measure, Measure]],
    tol: Tolerance | None = None,
) -> Report:
    """Check D(mu*nu) = D0 mu * D nu + D mu * D0 nu through the total-mass pairing.

    D0 must itself pass the multiplicativity check on the samples; that
    precondition is re-verified and included in the report.  With D0 the
    identity operator this is the ordinary derivation property.
    """
    if not samples:
        raise ValueError("samples must be nonempty")
    tol = tol or default_tolerance()
    one = CFunction.constant(1.0)
    report = Report(title=f"{d0.name}-derivation: {d.name}")
    report.extend(is_multiplicative_hom(d0, samples, tol), prefix="precondition: ")
    worst = (0.0, 1.0, None)
    for mu, nu in samples:
        lv = pair(d(convolve(mu, nu)), one)
        t1 = pair(convolve(d0(mu), d(nu)), one)
        t2 = pair(convolve(d(mu), d0(nu)), one)
        res = abs(lv - (t1 + t2))
        scl = max(1.0, abs(lv), abs(t1), abs(t2))
        if res / scl > worst[0] / worst[1]:
            worst = (res, scl, [as_literal(mu), as_literal(nu), lv, t1 + t2])
    ok = tol.ok(worst[0], worst[1])
    report.add(
        "product-rule",
        "<D(mu*nu), 1> = <D0 mu * D nu, 1> + <D mu * D0 nu, 1>",
        ok,
        worst[0],
        worst[1],
        counterexample=None if ok else worst[2],
    )
    return report


# ---------------------------------------------------------------------------
# extension solver (finite carriers)


@dataclass(frozen=True)
class AffineSolutionSet:
    """Solutions of the linear extension problem: particular + null space."""

    points: tuple[Point, ...]
    consistent: bool
    particular: tuple[complex, ...] | None
    nullspace: tuple[tuple[complex, ...], ...]  # basis vectors, one per row
    rank: int
    residual: float
    scale: float

    @property
    def nullity(self) -> int:
        return len(self.nullspace)

    def is_trivial(self, tol: Tolerance | None = None) -> bool:
        """True when the solution set is exactly {0}."""
        tol = tol or default_tolerance()
        if not self.consistent or self.nullspace or self.particular is None:
            return False
        return max(abs(v) for v in self.particular) <= tol.bound(self.scale)

    def describe(self) -> str:
        if not self.consistent:
            return "inconsistent"
        if self.nullspace:
            return f"affine: dimension {self.nullity}"
        assert self.particular is not None
        if max(abs(v) for v in self.particular) <= default_tolerance().bound(self.scale):
            return "unique: zero"
        return "unique: nonzero"


def extend_moment_sequence(
    hg: FiniteHypergroup,
    lower: Mapping[MultiIndex, CFunction] | MomentSequence,
    alpha: Sequence[int],
    tol: Tolerance | None = None,
) -> AffineSolutionSet:
    """Solve for the vector (phi_alpha(x))_x extending a partial moment sequence.

    The unknown enters the defining identity linearly once all phi_beta with
    beta < alpha are fixed; the system runs over every ordered pair of carrier
    points.  The lower entries must satisfy their own identities, otherwise a
    PreconditionError is raised.
    """
    if not isinstance(hg, FiniteHypergroup):
        raise DomainError("extension is implemented for finite hypergroups only")
    tol = tol or default_tolerance()
    alpha = as_index(alpha)
    if index_order(alpha) == 0:
        raise DomainError("alpha must have positive order")
    entries: Mapping[MultiIndex, CFunction]
    entries = lower.entries if isinstance(lower, MomentSequence) else dict(lower)
    needed = [beta for beta in lower_indices(alpha) if beta != alpha]
    missing = [beta for beta in needed if beta not in entries]
    if missing:
        raise DomainError(f"lower entries missing for {missing}")

    n = hg.size
    pts = list(range(n))
    zero = (0,) * len(alpha)

    # precondition: identities of the fixed lower entries hold
    for beta in needed:
        worst = 0.0
        worst_scale = 1.0
        witness = None
        for x in pts:
            for y in pts:
                lhs = pair(hg.convolve_points(x, y), entries[beta])
                rhs = 0j
                top = abs(lhs)
                for gamma in lower_indices(beta):
                    term = (
                        multi_binomial(beta, gamma)
                        * entries[gamma](x)
                        * entries[index_sub(beta, gamma)](y)
                    )
                    rhs += term
                    top = max(top, abs(term))
                res = abs(lhs - rhs)
                scl = max(1.0, top)
                if res / scl > worst / worst_scale:
                    worst, worst_scale, witness = res, scl, (x, y)
        if not tol.ok(worst, worst_scale):
            raise PreconditionError(
                f"lower entry phi_{list(beta)} violates its moment identity at "
                f"{witness} (residual {worst:.3e})"
            )

    phi0 = entries[zero]
    rows: list[list[complex]] = []
    rhs_vec: list[complex] = []
    strict = [beta for beta in needed if beta != zero]
    for x in pts:
        for y in pts:
            row = [0j] * n
            for k, w in hg.convolve_points(x, y).support:
                row[k] += w
            row[y] -= phi0(x)
            row[x] -= phi0(y)
            b = 0j
            for beta in strict:
                b += multi_binomial(alpha, beta) * entries[beta](x) * entries[index_sub(alpha, beta)](y)
            rows.append(row)
            rhs_vec.append(b)
    a_mat = np.array(rows, dtype=complex)
    b_mat = np.array(rhs_vec, dtype=complex)
    solution, *_ = np.linalg.lstsq(a_mat, b_mat, rcond=None)
    residual = float(np.max(np.abs(a_mat @ solution - b_mat))) if len(b_mat) else 0.0
    scale = max(
        1.0,
        float(np.max(np.abs(b_mat))) if len(b_mat) else 0.0,
        float(np.max(np.abs(a_mat))) * float(np.max(np.abs(solution), initial=0.0)),
    )
    consistent = tol.ok(residual, scale)
    null = scipy.linalg.null_space(a_mat)
    rank = int(np.linalg.matrix_rank(a_mat))
    return AffineSolutionSet(
        points=tuple(pts),
        consistent=consistent,
        particular=tuple(complex(v) for v in solution) if consistent else None,
        nullspace=tuple(tuple(complex(v) for v in null[:, j]) for j in range(null.shape[1])),
        rank=rank,
        residual=residual,
        scale=scale,
    )


def iterated_extension(
    hg: FiniteHypergroup,
    phi0: CFunction,
    alpha: Sequence[int],
    tol: Tolerance | None = None,
) -> tuple[Report, dict[MultiIndex, CFunction]]:
    """Extend phi_0 step by step to every beta <= alpha, adopting each solution.

    Each step solves the linear extension problem in graded order; a unique
    solution (zero or not) is adopted as the next entry.  The report carries
    one record per step with the solution-set shape in the detail.
    """
    tol = tol or default_tolerance()
    alpha = as_index(alpha)
    rank = len(alpha)
    entries: dict[MultiIndex, CFunction] = {(0,) * rank: phi0}
    report = Report(
        title="moment sequence extension",
        meta={"alpha": list(alpha), "rank": rank},
    )
    steps = [beta for beta in lower_indices(alpha) if index_order(beta) > 0]
    steps.sort(key=lambda b: (index_order(b), b))
    all_trivial = True
    for beta in steps:
        try:
            sol = extend_moment_sequence(hg, entries, beta, tol)
        except PreconditionError as exc:
            report.add(
                f"extend alpha={list(beta)}",
                "linear extension of the moment identity",
                False,
                counterexample=str(exc),
                detail="precondition failed",
            )
            all_trivial = False
            break
        trivial = sol.is_trivial(tol)
        all_trivial = all_trivial and trivial
        report.add(
            f"extend alpha={list(beta)}",
            "linear extension of the moment identity",
            sol.consistent,
            sol.residual,
            sol.scale,
            counterexample=None if sol.consistent else "inconsistent system",
            detail=sol.describe(),
        )
        if not sol.consistent:
            break
        values = dict(zip(sol.points, sol.particular or ()))
        entries[beta] = CFunction.from_table(values)
    report.meta["trivial"] = all_trivial and report.passed
    return report, entries
