"""Dense linear programs and an exact simplex solver.

Problems are always minimization::

    min  c @ x
    s.t. a_i @ x  (<=, >=, =)  b_i
         lower <= x <= upper

The solver is a two-phase bounded-variable revised simplex using Bland's
smallest-index rule, so it terminates on degenerate problems. A brute-force
vertex enumerator lives alongside it for testing small instances.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

LE, GE, EQ = "<=", ">=", "="
SENSES = (LE, GE, EQ)

# fixed, not configurable: golden outputs depend on them
PIVOT_TOL = 1e-9
OPT_TOL = 1e-9
PHASE1_TOL = 1e-9
MAX_ITER = 50_000

ORACLE_MAX_VARS = 8
ORACLE_MAX_ROWS = 16


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LPValidationError(ValueError):
    """Raised when a LinearProgram is malformed."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


@dataclass(frozen=True)
class Constraint:
    coefs: tuple[float, ...]
    sense: str
    rhs: float
    name: str = ""


@dataclass(frozen=True)
class LinearProgram:
    """A minimization LP. Construction never raises; call :func:`validate`."""

    num_vars: int
    objective: tuple[float, ...]
    constraints: tuple[Constraint, ...] = ()
    lower: Optional[tuple[float, ...]] = None
    upper: Optional[tuple[Optional[float], ...]] = None
    var_names: Optional[tuple[str, ...]] = None

    @classmethod
    def build(
        cls,
        objective: Sequence[float],
        rows: Sequence[tuple] = (),
        lower: Optional[Sequence[float]] = None,
        upper: Optional[Sequence[Optional[float]]] = None,
        var_names: Optional[Sequence[str]] = None,
    ) -> "LinearProgram":
        """Convenience constructor; rows are ``(coefs, sense, rhs[, name])``."""
        cons = []
        for row in rows:
            coefs, sense, rhs, *rest = row
            cons.append(Constraint(tuple(float(a) for a in coefs), sense, float(rhs), rest[0] if rest else ""))
        return cls(
            num_vars=len(objective),
            objective=tuple(float(v) for v in objective),
            constraints=tuple(cons),
            lower=None if lower is None else tuple(float(v) for v in lower),
            upper=None if upper is None else tuple(None if u is None else float(u) for u in upper),
            var_names=None if var_names is None else tuple(var_names),
        )

    def lower_bounds(self) -> np.ndarray:
        if self.lower is None:
            return np.zeros(self.num_vars)
        return np.array(self.lower, dtype=float)

    def upper_bounds(self) -> np.ndarray:
        if self.upper is None:
            return np.full(self.num_vars, np.inf)
        return np.array([np.inf if u is None else u for u in self.upper], dtype=float)

    def matrix(self) -> tuple[np.ndarray, list[str], np.ndarray]:
        A = np.array([c.coefs for c in self.constraints], dtype=float).reshape(len(self.constraints), self.num_vars)
        b = np.array([c.rhs for c in self.constraints], dtype=float)
        return A, [c.sense for c in self.constraints], b

    def with_objective(self, objective: Sequence[float]) -> "LinearProgram":
        return LinearProgram(
            self.num_vars, tuple(float(v) for v in objective), self.constraints, self.lower, self.upper, self.var_names
        )

    def to_text(self) -> str:
        """Plain-text listing: objective, one line per row, then bounds."""
        names = self.var_names or tuple(f"x{j}" for j in range(self.num_vars))
        fmt = lambda v: format(v, ".10g")  # noqa: E731
        lines = ["vars: " + " ".join(names), "min: " + " ".join(fmt(v) for v in self.objective)]
        for i, con in enumerate(self.constraints):
            label = con.name or f"r{i}"
            lines.append(f"{label}: " + " ".join(fmt(v) for v in con.coefs) + f" {con.sense} {fmt(con.rhs)}")
        lb, ub = self.lower_bounds(), self.upper_bounds()
        for j, name in enumerate(names):
            hi = "inf" if math.isinf(ub[j]) else fmt(ub[j])
            lines.append(f"bound {name}: {fmt(lb[j])} <= x <= {hi}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SolveResult:
    status: Status
    x: Optional[np.ndarray] = field(default=None, compare=False)
    objective: Optional[float] = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def validate(lp: LinearProgram) -> list[str]:
    """Return a list of invariant violations; empty means the LP is well formed."""
    out: list[str] = []
    n = lp.num_vars
    if not isinstance(n, int) or n < 0:
        return [f"num_vars must be a non-negative integer, got {n!r}"]
    if len(lp.objective) != n:
        out.append(f"objective: length {len(lp.objective)} != num_vars {n}")
    for j, v in enumerate(lp.objective):
        if not math.isfinite(v):
            out.append(f"objective[{j}]: non-finite value {v}")
    for i, con in enumerate(lp.constraints):
        if len(con.coefs) != n:
            out.append(f"row {i}: length {len(con.coefs)} != num_vars {n}")
        for j, v in enumerate(con.coefs):
            if not math.isfinite(v):
                out.append(f"row {i} col {j}: non-finite value {v}")
        if con.sense not in SENSES:
            out.append(f"row {i}: unknown sense {con.sense!r}")
        if not math.isfinite(con.rhs):
            out.append(f"row {i}: non-finite rhs {con.rhs}")
    if lp.lower is not None:
        if len(lp.lower) != n:
            out.append(f"lower: length {len(lp.lower)} != num_vars {n}")
        for j, v in enumerate(lp.lower):
            if not math.isfinite(v):
                out.append(f"lower[{j}]: non-finite value {v}")
    if lp.upper is not None:
        if len(lp.upper) != n:
            out.append(f"upper: length {len(lp.upper)} != num_vars {n}")
        for j, v in enumerate(lp.upper):
            if v is not None and not math.isfinite(v):
                out.append(f"upper[{j}]: non-finite value {v}")
    if lp.lower is not None and lp.upper is not None and len(lp.lower) == len(lp.upper):
        for j, (lo, hi) in enumerate(zip(lp.lower, lp.upper)):
            if hi is not None and math.isfinite(lo) and math.isfinite(hi) and lo > hi:
                out.append(f"var {j}: lower bound {lo} > upper bound {hi}")
    return out


def _check(lp: LinearProgram) -> None:
    problems = validate(lp)
    if problems:
        raise LPValidationError(problems)


def _standard_form(lp: LinearProgram):
    """Rows as ``A x = b`` with one slack per inequality; equalities split in two."""
    A, senses, b = lp.matrix()
    rows, rhs, slack_sign = [], [], []
    for i, s in enumerate(senses):
        if s in (LE, EQ):
            rows.append(A[i])
            rhs.append(b[i])
            slack_sign.append(1.0)
        if s in (GE, EQ):
            rows.append(A[i])
            rhs.append(b[i])
            slack_sign.append(-1.0)
    m, n = len(rows), lp.num_vars
    A_std = np.zeros((m, n + m))
    if m:
        A_std[:, :n] = np.array(rows)
        A_std[np.arange(m), n + np.arange(m)] = slack_sign
    b_std = np.array(rhs, dtype=float)
    # row equilibration leaves the solution set untouched
    for i in range(m):
        scale = np.max(np.abs(A_std[i, :n])) if n else 0.0
        if scale > 0:
            A_std[i] /= scale
            b_std[i] /= scale
    return A_std, b_std


class _Simplex:
    """Bounded-variable revised simplex with Bland's rule.

    Nonbasic variables sit exactly at one of their bounds; basic values are
    recomputed from scratch every iteration (dense, small problems).
    """

    def __init__(self, A, b, lo, hi, basis, at_upper):
        self.A, self.b, self.lo, self.hi = A, b, lo, hi
        self.basis = list(basis)
        self.at_upper = at_upper
        self.iterations = 0
        self.recompute()

    def nonbasic_values(self) -> np.ndarray:
        x = np.where(self.at_upper, self.hi, self.lo)
        x[self.basis] = 0.0
        return x

    def recompute(self) -> None:
        x = self.nonbasic_values()
        B = self.A[:, self.basis]
        rhs = self.b - self.A @ x
        x[self.basis] = np.linalg.solve(B, rhs) if self.basis else 0.0
        self.x = x

    def run(self, c: np.ndarray, frozen: set[int]) -> Status:
        m = len(self.basis)
        while True:
            if self.iterations >= MAX_ITER:
                raise RuntimeError("simplex iteration limit reached")
            B = self.A[:, self.basis]
            y = np.linalg.solve(B.T, c[self.basis]) if m else np.zeros(0)
            d = c - self.A.T @ y
            in_basis = set(self.basis)
            entering, direction = -1, 0
            for j in range(self.A.shape[1]):
                if j in in_basis or j in frozen:
                    continue
                if not self.at_upper[j] and d[j] < -OPT_TOL and self.hi[j] > self.lo[j]:
                    entering, direction = j, 1
                    break
                if self.at_upper[j] and d[j] > OPT_TOL:
                    entering, direction = j, -1
                    break
            if entering < 0:
                return Status.OPTIMAL
            w = np.linalg.solve(B, self.A[:, entering]) if m else np.zeros(0)
            step = self.hi[entering] - self.lo[entering]
            leave_pos, leave_to_upper = -1, False
            # x_B(t) = x_B - direction * t * w
            for pos in range(m):
                rate = direction * w[pos]
                var = self.basis[pos]
                if rate > PIVOT_TOL:
                    limit, to_upper = max(self.x[var] - self.lo[var], 0.0) / rate, False
                elif rate < -PIVOT_TOL and math.isfinite(self.hi[var]):
                    limit, to_upper = max(self.hi[var] - self.x[var], 0.0) / -rate, True
                else:
                    continue
                if limit < step or (limit == step and leave_pos >= 0 and var < self.basis[leave_pos]):
                    step, leave_pos, leave_to_upper = limit, pos, to_upper
            if math.isinf(step):
                return Status.UNBOUNDED
            self.iterations += 1
            if leave_pos < 0:
                self.at_upper[entering] = direction > 0
            else:
                leaving = self.basis[leave_pos]
                self.at_upper[leaving] = leave_to_upper
                self.at_upper[entering] = False
                self.basis[leave_pos] = entering
            self.recompute()


def solve(lp: LinearProgram) -> SolveResult:
    """Solve ``lp`` to exact optimality.

    Infeasible and unbounded problems come back as statuses. Malformed input
    raises :class:`LPValidationError` before any work is done.
    """
    _check(lp)
    n = lp.num_vars
    A_std, b_std = _standard_form(lp)
    m, n_std = A_std.shape
    lo = np.concatenate([lp.lower_bounds(), np.zeros(n_std - n)])
    hi = np.concatenate([lp.upper_bounds(), np.full(n_std - n, np.inf)])

    # phase I: one artificial per row, signed so that it starts non-negative
    residual = b_std - A_std[:, :n] @ lo[:n]
    signs = np.where(residual >= 0, 1.0, -1.0)
    A1 = np.hstack([A_std, np.diag(signs)]) if m else A_std
    lo1 = np.concatenate([lo, np.zeros(m)])
    hi1 = np.concatenate([hi, np.full(m, np.inf)])
    artificial = list(range(n_std, n_std + m))
    simplex = _Simplex(A1, b_std, lo1, hi1, artificial, np.zeros(n_std + m, dtype=bool))
    c1 = np.concatenate([np.zeros(n_std), np.ones(m)])
    simplex.run(c1, frozen=set())
    infeas = float(np.sum(simplex.x[n_std:]))
    scale = max(1.0, float(np.max(np.abs(b_std))) if m else 1.0)
    if infeas > PHASE1_TOL * scale:
        return SolveResult(Status.INFEASIBLE, iterations=simplex.iterations)

    # drive zero-valued artificials out of the basis where possible
    for pos, var in enumerate(list(simplex.basis)):
        if var < n_std:
            continue
        B = A1[:, simplex.basis]
        row = np.linalg.solve(B, A1[:, :n_std])[pos]
        in_basis = set(simplex.basis)
        for j in range(n_std):
            if j not in in_basis and abs(row[j]) > PIVOT_TOL:
                simplex.basis[pos] = j
                simplex.at_upper[var] = False
                break
    simplex.hi[n_std:] = 0.0
    simplex.recompute()

    c2 = np.concatenate([np.asarray(lp.objective, dtype=float), np.zeros(n_std - n + m)])
    status = simplex.run(c2, frozen=set(artificial))
    if status is not Status.OPTIMAL:
        return SolveResult(status, iterations=simplex.iterations)
    x = _snap(simplex.x[:n].copy(), lo[:n], hi[:n], scale)
    return SolveResult(Status.OPTIMAL, x, float(np.dot(lp.objective, x)), simplex.iterations)


def _snap(x: np.ndarray, lo: np.ndarray, hi: np.ndarray, scale: float) -> np.ndarray:
    """Clamp round-off residue on basic variables onto nearby bounds."""
    tol = 1e-12 * max(scale, float(np.max(np.abs(np.where(np.isfinite(hi), hi, 0.0)), initial=0.0)))
    x = np.maximum(x, lo)
    x = np.minimum(x, hi)
    x = np.where(np.abs(x - lo) <= tol, lo, x)
    x = np.where(np.isfinite(hi) & (np.abs(hi - x) <= tol), hi, x)
    return x


def max_violation(lp: LinearProgram, x: np.ndarray) -> float:
    """Largest constraint or bound violation, each scaled by ``max(1, |rhs|)``."""
    A, senses, b = lp.matrix()
    worst = 0.0
    if len(b):
        act = A @ x
        for i, s in enumerate(senses):
            gap = act[i] - b[i]
            viol = max(gap, 0.0) if s == LE else max(-gap, 0.0) if s == GE else abs(gap)
            worst = max(worst, viol / max(1.0, abs(b[i])))
    lb, ub = lp.lower_bounds(), lp.upper_bounds()
    worst = max(worst, float(np.max((lb - x) / np.maximum(1.0, np.abs(lb)), initial=0.0)))
    finite = np.isfinite(ub)
    if finite.any():
        worst = max(worst, float(np.max((x[finite] - ub[finite]) / np.maximum(1.0, np.abs(ub[finite])))))
    return worst


# -- brute-force oracle -----------------------------------------------------


def _oracle_rows(lp: LinearProgram):
    """All constraints plus bounds as ``(G, h, kind)`` with kind in {le, ge, eq}."""
    A, senses, b = lp.matrix()
    G, h, kind = list(A), list(b), list(senses)
    lb, ub = lp.lower_bounds(), lp.upper_bounds()
    eye = np.eye(lp.num_vars)
    for j in range(lp.num_vars):
        G.append(eye[j])
        h.append(lb[j])
        kind.append(GE)
        if math.isfinite(ub[j]):
            G.append(eye[j])
            h.append(ub[j])
            kind.append(LE)
    return np.array(G).reshape(len(G), lp.num_vars), np.array(h), kind


def _satisfies(G, h, kind, X, tol):
    """Boolean mask over the rows of ``X`` (points) satisfying every row."""
    act = X @ G.T
    ok = np.ones(len(X), dtype=bool)
    for i, k in enumerate(kind):
        slack = tol * max(1.0, abs(h[i]))
        if k == LE:
            ok &= act[:, i] <= h[i] + slack
        elif k == GE:
            ok &= act[:, i] >= h[i] - slack
        else:
            ok &= np.abs(act[:, i] - h[i]) <= slack
    return ok


def enumerate_vertices_oracle(lp: LinearProgram) -> SolveResult:
    """Solve a tiny LP by enumerating every basic solution.

    Every variable has a finite lower bound, so a non-empty feasible region
    always has a vertex; unboundedness is detected from the extreme rays of
    the recession cone.
    """
    _check(lp)
    G, h, kind = _oracle_rows(lp)
    n = lp.num_vars
    if n > ORACLE_MAX_VARS or len(h) > ORACLE_MAX_ROWS:
        raise ValueError(f"oracle size guard: {n} vars, {len(h)} rows (max {ORACLE_MAX_VARS}, {ORACLE_MAX_ROWS})")
    c = np.asarray(lp.objective, dtype=float)
    if n == 0:
        ok = _satisfies(G, h, kind, np.zeros((1, 0)), 1e-9)[0]
        return SolveResult(Status.OPTIMAL, np.zeros(0), 0.0) if ok else SolveResult(Status.INFEASIBLE)

    combos = np.array(list(itertools.combinations(range(len(h)), n)))
    mats = G[combos]
    dets = np.linalg.det(mats)
    good = np.abs(dets) > 1e-10
    pts = np.linalg.solve(mats[good], h[combos[good]][..., None])[..., 0] if good.any() else np.zeros((0, n))
    feasible = pts[_satisfies(G, h, kind, pts, 1e-9)]
    if not len(feasible):
        return SolveResult(Status.INFEASIBLE, iterations=len(combos))

    # recession cone: homogeneous rows; equalities stay equalities
    if n == 1:
        rays = np.array([[1.0], [-1.0]])
    else:
        subs = np.array(list(itertools.combinations(range(len(h)), n - 1)))
        _, sv, vt = np.linalg.svd(G[subs])
        full_rank = np.sum(sv > 1e-10, axis=1) == n - 1
        null = vt[full_rank, -1, :]
        rays = np.vstack([null, -null])
    if len(rays):
        in_cone = _satisfies(G, np.zeros(len(h)), kind, rays, 1e-9)
        if np.any(rays[in_cone] @ c < -1e-9):
            return SolveResult(Status.UNBOUNDED, iterations=len(combos))

    values = feasible @ c
    best = int(np.argmin(values))
    return SolveResult(Status.OPTIMAL, feasible[best], float(values[best]), len(combos))
