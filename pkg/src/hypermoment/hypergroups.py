"""Hypergroup carriers and their point-mass convolution.

Three built-in families:

* :class:`FiniteHypergroup` -- explicit convolution table on {0, ..., n-1};
* :class:`PolynomialHypergroup` -- carrier N, convolution given by the
  linearization coefficients of a polynomial family P_m * P_n = sum c(m,n,l) P_l
  generated by a three-term recurrence;
* :class:`RealLineHypergroup` -- the group (R, +) viewed as a hypergroup.

Axioms (nonnegativity, normalization, identity, commutativity, associativity)
are *checked*, not assumed: defective tables and recurrences are constructible
and `check_axioms` reports the first counterexample per axiom.
"""

from __future__ import annotations

import cmath
import math
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from .config import Tolerance, default_tolerance, scale_of
from .errors import DecompositionError, DomainError
from .measures import CFunction, Measure, Point, convolve, dirac, measure_residual
from .reports import Report

CoeffRow = tuple[float, float, float]


class Hypergroup:
    """Base class: carrier + identity + point-mass convolution rule."""

    kind: str = "abstract"
    identity: Point = 0

    def _mix(self, x: Point, y: Point) -> tuple[tuple[Point, float], ...]:
        raise NotImplementedError

    def validate_point(self, x: Any) -> Point:
        raise NotImplementedError

    @property
    def signature(self) -> tuple:
        raise NotImplementedError

    def convolve_points(self, x: Point, y: Point) -> Measure:
        """Convolution of the point masses at x and y, as a probability measure."""
        x = self.validate_point(x)
        y = self.validate_point(y)
        return Measure.from_items(self, self._mix(x, y))

    def dirac(self, x: Point) -> Measure:
        return dirac(self, x)

    def sample_points(self, bound: int) -> list[Point]:
        """Deterministic point sample used by axiom and identity checks."""
        raise NotImplementedError

    def describe(self) -> str:
        return self.kind

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, Hypergroup) and self.signature == other.signature

    def __hash__(self) -> int:
        return hash(self.signature)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.describe()}>"


class FiniteHypergroup(Hypergroup):
    """Hypergroup on {0, ..., size-1} with an explicit convolution table.

    The table maps each ordered pair (i, j) to a weight list [(k, w), ...].
    A pair missing from the input is mirrored from (j, i) so symmetric tables
    can be given once per unordered pair; if both orientations are present
    they are kept as given (commutativity stays checkable).
    """

    kind = "finite"

    def __init__(self, size: int, identity: int, table: Any):
        if size < 1:
            raise DomainError("size must be positive")
        if not 0 <= identity < size:
            raise DomainError("identity index out of range")
        self.size = int(size)
        self.identity = int(identity)
        entries: dict[tuple[int, int], tuple[tuple[int, float], ...]] = {}
        for i, j, row in _table_entries(table):
            if not (0 <= i < size and 0 <= j < size):
                raise DomainError(f"table pair ({i},{j}) out of range")
            entries[(i, j)] = _canonical_row(row, size)
        self._table: dict[tuple[int, int], tuple[tuple[int, float], ...]] = {}
        for i in range(size):
            for j in range(size):
                if (i, j) in entries:
                    self._table[(i, j)] = entries[(i, j)]
                elif (j, i) in entries:
                    self._table[(i, j)] = entries[(j, i)]
                else:
                    raise DomainError(f"table entry for pair ({i},{j}) missing")

    def _mix(self, x: Point, y: Point) -> tuple[tuple[Point, float], ...]:
        return self._table[(x, y)]

    def validate_point(self, x: Any) -> int:
        if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
            raise DomainError(f"point {x!r} is not a carrier index")
        i = int(x)
        if not 0 <= i < self.size:
            raise DomainError(f"index {i} outside carrier of size {self.size}")
        return i

    def sample_points(self, bound: int = 0) -> list[Point]:
        return list(range(self.size))

    def translation_matrix(self, x: int) -> np.ndarray:
        """T_x[j, k] = weight of the point mass at k in delta_x * delta_j."""
        x = self.validate_point(x)
        mat = np.zeros((self.size, self.size), dtype=complex)
        for j in range(self.size):
            for k, w in self._table[(x, j)]:
                mat[j, k] += w
        return mat

    @property
    def signature(self) -> tuple:
        rows = tuple(self._table[(i, j)] for i in range(self.size) for j in range(self.size))
        return ("finite", self.size, self.identity, rows)

    def describe(self) -> str:
        return f"finite(size={self.size}, identity={self.identity})"


def _table_entries(table: Any) -> Iterable[tuple[int, int, Any]]:
    if isinstance(table, Mapping):
        for (i, j), row in table.items():
            yield int(i), int(j), row
    else:
        for item in table:
            i, j, row = item
            yield int(i), int(j), row


def _canonical_row(row: Any, size: int) -> tuple[tuple[int, float], ...]:
    acc: dict[int, float] = {}
    for k, w in row:
        k = int(k)
        w = float(w)
        if not 0 <= k < size:
            raise DomainError(f"support index {k} outside carrier of size {size}")
        if not math.isfinite(w):
            raise DomainError("non-finite table weight")
        acc[k] = acc.get(k, 0.0) + w
    return tuple(sorted((k, w) for k, w in acc.items() if w != 0.0))


class PolynomialHypergroup(Hypergroup):
    """Hypergroup on N induced by a polynomial family with P_n(1) = 1.

    Parametrisation: P_0 = 1, P_1(x) = (x - b0)/a0 with a0 > 0, a0 + b0 = 1,
    and for n >= 1 the recurrence P_1 * P_n = a_n P_{n+1} + b_n P_n + c_n P_{n-1}
    with a_n, c_n > 0, b_n >= 0, a_n + b_n + c_n = 1.  The convolution of point
    masses at m, n is the linearization of P_m * P_n in the P-basis.
    """

    kind = "polynomial"
    identity = 0

    def __init__(
        self,
        a0: float,
        b0: float,
        coeffs: Callable[[int], CoeffRow] | Sequence[CoeffRow],
        name: str | None = None,
    ):
        a0 = float(a0)
        b0 = float(b0)
        if a0 <= 0:
            raise DomainError("a0 must be positive")
        if abs(a0 + b0 - 1.0) > 1e-12:
            raise DomainError("a0 + b0 must equal 1")
        self.a0 = a0
        self.b0 = b0
        self.name = name
        if callable(coeffs):
            self._coeff_fn: Callable[[int], CoeffRow] | None = coeffs
            self._coeff_list: tuple[CoeffRow, ...] | None = None
        else:
            self._coeff_fn = None
            self._coeff_list = tuple((float(a), float(b), float(c)) for a, b, c in coeffs)
        self._rows: dict[int, CoeffRow] = {}
        # linearization cache; fills are idempotent so concurrent reads are safe
        self._lin: dict[tuple[int, int], tuple[tuple[int, float], ...]] = {}

    def coefficient_row(self, n: int) -> CoeffRow:
        """Recurrence row (a_n, b_n, c_n) for n >= 1, validated on first use."""
        if n < 1:
            raise DomainError("coefficient rows are indexed from 1")
        row = self._rows.get(n)
        if row is not None:
            return row
        if self._coeff_fn is not None:
            raw = self._coeff_fn(n)
        else:
            assert self._coeff_list is not None
            if n > len(self._coeff_list):
                raise DomainError(
                    f"coefficient list has {len(self._coeff_list)} rows, row {n} requested"
                )
            raw = self._coeff_list[n - 1]
        a, b, c = (float(v) for v in raw)
        if not (a > 0 and c > 0):
            raise DomainError(f"row {n}: a_n and c_n must be positive, got ({a}, {b}, {c})")
        if b < 0:
            raise DomainError(f"row {n}: b_n must be nonnegative, got {b}")
        if abs(a + b + c - 1.0) > 1e-12:
            raise DomainError(f"row {n}: a_n + b_n + c_n must equal 1, got {a + b + c}")
        self._rows[n] = (a, b, c)
        return self._rows[n]

    def linearization(self, m: int, n: int, tol: Tolerance | None = None) -> tuple[tuple[int, float], ...]:
        """Coefficients [(l, c(m,n,l)), ...] of P_m * P_n in the P-basis.

        Computed by induction on m: P_0 * P_n = P_n, P_1 * P_n from the
        recurrence row, and
        P_m * P_n = (1/a_{m-1}) [ P_1*(P_{m-1}*P_n) - b_{m-1} P_{m-1}*P_n - c_{m-1} P_{m-2}*P_n ].
        Results are memoized per instance.  Coefficients are lazily checked
        for nonnegativity; a violation raises rather than being accepted.
        """
        if m < 0 or n < 0:
            raise DomainError("linearization indices must be nonnegative")
        tol = tol or default_tolerance()
        key = (m, n)
        cached = self._lin.get(key)
        if cached is not None:
            return cached
        if m == 0:
            result = {n: 1.0}
        elif m == 1:
            if n == 0:
                result = {1: 1.0}
            else:
                a, b, c = self.coefficient_row(n)
                result = {n + 1: a, n - 1: c}
                if b != 0.0:
                    result[n] = result.get(n, 0.0) + b
        else:
            a, b, c = self.coefficient_row(m - 1)
            mid = self.linearization(m - 1, n, tol)
            low = self.linearization(m - 2, n, tol)
            acc: dict[int, float] = {}
            for l, w in mid:
                for l2, w2 in self.linearization(1, l, tol):
                    acc[l2] = acc.get(l2, 0.0) + w * w2
                acc[l] = acc.get(l, 0.0) - b * w
            for l, w in low:
                acc[l] = acc.get(l, 0.0) - c * w
            result = {l: w / a for l, w in acc.items()}
        lo, hi = abs(n - m), n + m
        cleaned: dict[int, float] = {}
        for l, w in result.items():
            if w == 0.0:
                continue
            if l < lo or l > hi:
                # analytically an exact cancellation; keep only float dust out
                if abs(w) > tol.bound(1.0):
                    raise DomainError(
                        f"linearization({m},{n}) produced coefficient {w} at l={l} outside [{lo},{hi}]"
                    )
                continue
            if w < -tol.bound(1.0):
                raise DomainError(
                    f"linearization({m},{n}) produced negative coefficient {w} at l={l}; "
                    "the recurrence does not define a hypergroup"
                )
            cleaned[l] = w
        out = tuple(sorted(cleaned.items()))
        self._lin[key] = out
        return out

    def _mix(self, x: Point, y: Point) -> tuple[tuple[Point, float], ...]:
        # sorted key makes convolve_points exactly symmetric in (x, y)
        return self.linearization(min(x, y), max(x, y))

    def validate_point(self, x: Any) -> int:
        if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
            raise DomainError(f"point {x!r} is not a nonnegative integer")
        i = int(x)
        if i < 0:
            raise DomainError(f"point {i} is negative")
        return i

    def sample_points(self, bound: int) -> list[Point]:
        return list(range(bound + 1))

    def eval_poly_derivative(self, n: int, z: complex, k: int) -> complex:
        """P_n^(k)(z) by the differentiated three-term recurrence.

        P_1 is affine, so (P_1 * P_m)^(i) = P_1(z) P_m^(i) + i P_1' P_m^(i-1)
        with P_1' = 1/a0; all orders 0..k are carried jointly forward in n.
        """
        if n < 0 or k < 0:
            raise DomainError("indices must be nonnegative")
        z = complex(z)
        prev = [1.0 + 0j] + [0j] * k  # P_0 and its derivatives
        if n == 0:
            return prev[k]
        p1 = (z - self.b0) / self.a0
        dp1 = 1.0 / self.a0
        cur = [p1] + ([dp1] if k >= 1 else []) + [0j] * max(0, k - 1)
        for m in range(1, n):
            a, b, c = self.coefficient_row(m)
            nxt = [0j] * (k + 1)
            for i in range(k + 1):
                s = p1 * cur[i] - b * cur[i] - c * prev[i]
                if i >= 1:
                    s += i * dp1 * cur[i - 1]
                nxt[i] = s / a
            prev, cur = cur, nxt
        return cur[k]

    @property
    def signature(self) -> tuple:
        if self.name is not None:
            src: Any = ("named", self.name)
        elif self._coeff_list is not None:
            src = ("rows", self._coeff_list)
        else:
            src = ("fn", id(self._coeff_fn))
        return ("polynomial", self.a0, self.b0, src)

    def describe(self) -> str:
        return f"polynomial({self.name})" if self.name else "polynomial"


class RealLineHypergroup(Hypergroup):
    """The group (R, +) as a hypergroup: delta_x * delta_y = delta_{x+y}."""

    kind = "realline"
    identity = 0.0

    def _mix(self, x: Point, y: Point) -> tuple[tuple[Point, float], ...]:
        return ((x + y, 1.0),)

    def validate_point(self, x: Any) -> float:
        if isinstance(x, bool) or not isinstance(x, (int, float, np.integer, np.floating)):
            raise DomainError(f"point {x!r} is not a real number")
        v = float(x)
        if not math.isfinite(v):
            raise DomainError(f"point {x!r} is not finite")
        return v

    def sample_points(self, bound: int) -> list[Point]:
        # dyadic grid: float addition on these points is exact, so the
        # bitwise support-merging convention makes group axioms exact
        return [0.5 * k for k in range(-bound, bound + 1)]

    @property
    def signature(self) -> tuple:
        return ("realline",)


# ---------------------------------------------------------------------------
# built-in carriers


def chebyshev() -> PolynomialHypergroup:
    """Chebyshev hypergroup on N: P_1(x) = x, P_1 * P_n = (P_{n+1} + P_{n-1})/2."""
    return PolynomialHypergroup(1.0, 0.0, lambda n: (0.5, 0.0, 0.5), name="chebyshev")


def legendre() -> PolynomialHypergroup:
    """Legendre hypergroup on N: x P_n = (n+1)/(2n+1) P_{n+1} + n/(2n+1) P_{n-1}.

    Linearization coefficients are nonnegative by the classical product
    formula for Legendre polynomials, so the recurrence defines a hypergroup.
    """
    return PolynomialHypergroup(
        1.0, 0.0, lambda n: ((n + 1) / (2 * n + 1), 0.0, n / (2 * n + 1)), name="legendre"
    )


def two_point(theta: float) -> FiniteHypergroup:
    """Two-point hypergroup on {0,1}: delta_1 * delta_1 = theta d0 + (1-theta) d1."""
    theta = float(theta)
    if not 0.0 < theta <= 1.0:
        raise DomainError("theta must lie in (0, 1]")
    table = {
        (0, 0): ((0, 1.0),),
        (0, 1): ((1, 1.0),),
        (1, 0): ((1, 1.0),),
        (1, 1): ((0, theta), (1, 1.0 - theta)),
    }
    return FiniteHypergroup(2, 0, table)


def real_line() -> RealLineHypergroup:
    return RealLineHypergroup()


def exponential_function(hg: Hypergroup, param: Any) -> CFunction:
    """The exponential family of a built-in carrier.

    polynomial: n -> P_n(z) with param z; real line: x -> exp(lambda x) with
    param lambda; finite: param is an index into `enumerate_exponentials`.
    """
    if isinstance(hg, PolynomialHypergroup):
        z = complex(param)
        return CFunction(lambda n: hg.eval_poly_derivative(n, z, 0), kind="exponential", params={"z": z})
    if isinstance(hg, RealLineHypergroup):
        lam = complex(param)
        return CFunction(lambda x: cmath.exp(lam * x), kind="exponential", params={"lambda": lam})
    if isinstance(hg, FiniteHypergroup):
        idx = int(param)
        expos = enumerate_exponentials(hg)
        if not 0 <= idx < len(expos):
            raise DomainError(f"exponential index {idx} out of range (found {len(expos)})")
        return expos[idx]
    raise DomainError(f"no exponential family for carrier kind {hg.kind!r}")


# ---------------------------------------------------------------------------
# axiom checking


def check_axioms(hg: Hypergroup, sample_bound: int = 8, tol: Tolerance | None = None) -> Report:
    """Check the hypergroup axioms on a bounded sample; failures become report entries.

    For finite carriers the check is exhaustive; for infinite carriers points
    are restricted by `sample_bound`.  Associativity is compared to tolerance.
    """
    if sample_bound < 1:
        raise DomainError("sample_bound must be >= 1")
    tol = tol or default_tolerance()
    pts = hg.sample_points(sample_bound)
    report = Report(
        title=f"hypergroup axioms: {hg.describe()}",
        meta={"sample_bound": sample_bound, "points": len(pts)},
    )

    def conv(x: Point, y: Point) -> Measure:
        return hg.convolve_points(x, y)

    # nonnegativity and normalization of every sampled point convolution
    worst_neg = 0.0
    neg_ce = None
    worst_norm = 0.0
    norm_ce = None
    error: str | None = None
    for x in pts:
        if error:
            break
        for y in pts:
            try:
                mu = conv(x, y)
            except DomainError as exc:
                error = f"({x},{y}): {exc}"
                break
            low = min((w.real for _, w in mu.support), default=0.0)
            if -low > worst_neg:
                worst_neg, neg_ce = -low, [x, y, list(mu.points)]
            drift = abs(mu.total_mass() - 1.0)
            if drift > worst_norm:
                worst_norm, norm_ce = drift, [x, y, [mu.total_mass().real, mu.total_mass().imag]]
    if error:
        report.add("nonnegativity", "weights of dx*dy are >= 0", False, error=True, detail=error)
        report.add("normalization", "weights of dx*dy sum to 1", False, error=True, detail=error)
    else:
        report.add(
            "nonnegativity",
            "weights of dx*dy are >= 0",
            tol.ok(worst_neg),
            worst_neg,
            1.0,
            counterexample=None if tol.ok(worst_neg) else neg_ce,
        )
        report.add(
            "normalization",
            "weights of dx*dy sum to 1",
            tol.ok(worst_norm),
            worst_norm,
            1.0,
            counterexample=None if tol.ok(worst_norm) else norm_ce,
        )

    def first_failure(name: str, law: str, gen) -> None:
        worst = 0.0
        worst_scale = 1.0
        ce = None
        try:
            for label, lhs, rhs in gen:
                res, scl = measure_residual(lhs, rhs)
                if res / scl > worst / worst_scale:
                    worst, worst_scale = res, scl
                if not tol.ok(res, scl):
                    ce = label
                    break
        except DomainError as exc:
            report.add(name, law, False, error=True, detail=str(exc))
            return
        report.add(name, law, ce is None, worst, worst_scale, counterexample=ce)

    o = hg.identity
    first_failure(
        "identity",
        "do * dx = dx",
        ((["o", x], conv(o, x), hg.dirac(x)) for x in pts),
    )
    first_failure(
        "commutativity",
        "dx * dy = dy * dx",
        (([x, y], conv(x, y), conv(y, x)) for x in pts for y in pts),
    )
    small = pts if len(pts) <= 24 else pts[:: max(1, len(pts) // 24)]
    first_failure(
        "associativity",
        "(dx*dy)*dz = dx*(dy*dz)",
        (
            ([x, y, z], convolve(conv(x, y), hg.dirac(z)), convolve(hg.dirac(x), conv(y, z)))
            for x in small
            for y in small
            for z in small
        ),
    )
    return report


# ---------------------------------------------------------------------------
# exponentials on finite carriers


def _cluster_indices(values: np.ndarray, tol: float) -> list[list[int]]:
    order = sorted(range(len(values)), key=lambda i: (values[i].real, values[i].imag))
    groups: list[list[int]] = []
    for i in order:
        if groups and abs(values[i] - values[groups[-1][-1]]) <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def enumerate_exponentials(hg: FiniteHypergroup, tol: Tolerance | None = None) -> list[CFunction]:
    """All exponentials of a finite hypergroup.

    An exponential is a joint eigenvector of the translation matrices T_x,
    normalised to 1 at the identity.  Eigenspaces are intersected across all
    generators; if the refinement does not end in one-dimensional joint
    eigenspaces, or a candidate fails re-verification against the defining
    equation, a DecompositionError names the defect.
    """
    tol = tol or default_tolerance()
    n = hg.size
    mats = [hg.translation_matrix(x) for x in range(n)]
    blocks: list[np.ndarray] = [np.eye(n, dtype=complex)]
    for x, T in enumerate(mats):
        refined: list[np.ndarray] = []
        for basis in blocks:
            if basis.shape[1] == 1:
                refined.append(basis)
                continue
            # restriction of T to the (T-invariant) subspace spanned by basis
            restricted, *_ = np.linalg.lstsq(basis, T @ basis, rcond=None)
            try:
                evals, evecs = np.linalg.eig(restricted)
            except np.linalg.LinAlgError as exc:
                raise DecompositionError(f"eigendecomposition of T_{x} failed: {exc}") from exc
            cluster_tol = 1e-8 * max(1.0, float(np.max(np.abs(evals))))
            for group in _cluster_indices(evals, cluster_tol):
                vecs = basis @ evecs[:, group]
                q, _ = np.linalg.qr(vecs)
                refined.append(q[:, : len(group)])
        blocks = refined
    for basis in blocks:
        if basis.shape[1] != 1:
            raise DecompositionError(
                f"joint eigenspace of dimension {basis.shape[1]} remains after refining over "
                "all translations; the translation algebra is not (numerically) semisimple"
            )
    o = hg.identity
    functions: list[CFunction] = []
    for basis in blocks:
        v = basis[:, 0]
        pivot = v[o]
        if abs(pivot) < 1e-10 * float(np.linalg.norm(v)):
            raise DecompositionError("joint eigenvector vanishes at the identity")
        v = v / pivot
        worst = 0.0
        worst_scale = 1.0
        for x in range(n):
            for y in range(n):
                lhs = sum(w * v[k] for k, w in hg._mix(x, y))
                rhs = v[x] * v[y]
                res = abs(lhs - rhs)
                scl = scale_of(lhs, rhs)
                if res / scl > worst / worst_scale:
                    worst, worst_scale = res, scl
        if not tol.ok(worst, worst_scale):
            raise DecompositionError(
                f"joint eigenvector failed exponential re-verification (residual {worst:.3e})"
            )
        values = {x: complex(v[x]) for x in range(n)}
        functions.append(CFunction.from_table(values, kind="exponential"))
    functions.sort(
        key=lambda f: tuple(
            (-round(f(x).real, 10), -round(f(x).imag, 10)) for x in range(n)
        )
    )
    return functions
