"""Dense packing-LP engine over path (or other) columns.

Solves  max  sum_j r_j x_j  s.t.  A x <= b,  x >= 0  with A >= 0, b >= 0,
via a tableau simplex.  Bland's rule everywhere, so exact (Fraction) solves
never cycle; float solves use an absolute pivot tolerance.  Columns can be
appended to a solved tableau and reoptimized, which is what the column
generation loop relies on.

Rows with bound INF never bind and are dropped up front (their duals are 0);
a positive-reward column with no finite row left makes the LP unbounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .values import FLOAT_TOL, INF, is_exact, is_inf

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"  # cannot occur for b >= 0; kept for completeness


@dataclass(frozen=True)
class Column:
    key: object            # hashable identity (usually a path tuple)
    objective: object      # reward per unit
    coeffs: dict           # row key -> nonnegative coefficient (missing = 0)


@dataclass
class PackingLP:
    columns: list
    row_bounds: dict       # row key -> bound (may be INF)
    offset: object = 0     # constant added to the objective after solving

    def tolerance(self):
        values = list(self.row_bounds.values()) + [self.offset]
        for col in self.columns:
            values.append(col.objective)
            values.extend(col.coeffs.values())
        if all(is_exact(v) for v in values):
            return 0
        return FLOAT_TOL


@dataclass
class LPResult:
    primal: dict           # column key -> value (every column present)
    dual: dict             # row key -> y >= 0 (every row present)
    objective: object      # optimal value including the offset
    status: str = OPTIMAL


class SimplexTableau:
    """Primal simplex on  max c'x : Ax <= b, x >= 0  with b >= 0.

    Column layout: the m slack variables first (their tableau block is
    B^-1 at all times), then structural columns in insertion order.
    """

    def __init__(self, bounds, tol):
        self.m = len(bounds)
        self.tol = tol
        self.rows = [[1 if i == j else 0 for j in range(self.m)]
                     for i in range(self.m)]
        self.rhs = list(bounds)
        self.basis = list(range(self.m))        # variable index per row
        self.obj = [0] * self.m                 # reduced costs
        self.value = 0
        self.ncols = self.m

    def add_column(self, dense_coeffs, objective):
        """Append a structural column given its m raw row coefficients."""
        rows, obj = self.rows, self.obj
        reduced = objective
        for k, a in enumerate(dense_coeffs):
            if a:
                reduced += obj[k] * a           # obj[k] = -y_k on slacks
        for i in range(self.m):
            row = rows[i]
            entry = 0
            for k, a in enumerate(dense_coeffs):
                if a:
                    entry += row[k] * a         # B^-1 a via the slack block
            row.append(entry)
        obj.append(reduced)
        self.ncols += 1
        return self.ncols - 1

    def _pivot(self, r, e):
        rows, obj, rhs = self.rows, self.obj, self.rhs
        prow = rows[r]
        p = prow[e]
        inv = 1 / p if isinstance(p, float) else None
        if inv is None:
            for j in range(self.ncols):
                if prow[j]:
                    prow[j] = prow[j] / p
            rhs[r] = rhs[r] / p
        else:
            for j in range(self.ncols):
                if prow[j]:
                    prow[j] *= inv
            rhs[r] *= inv
        for i in range(self.m):
            if i == r:
                continue
            f = rows[i][e]
            if f:
                row = rows[i]
                for j in range(self.ncols):
                    if prow[j]:
                        row[j] -= f * prow[j]
                rhs[i] -= f * rhs[r]
        f = obj[e]
        if f:
            for j in range(self.ncols):
                if prow[j]:
                    obj[j] -= f * prow[j]
            self.value += f * rhs[r]
        self.basis[r] = e

    def optimize(self):
        """Pivot to optimality; returns OPTIMAL or UNBOUNDED."""
        tol = self.tol
        while True:
            enter = -1
            for j in range(self.ncols):         # Bland: lowest index
                if self.obj[j] > tol:
                    enter = j
                    break
            if enter < 0:
                return OPTIMAL
            leave = -1
            best = None
            for i in range(self.m):
                a = self.rows[i][enter]
                if a > tol:
                    ratio = self.rhs[i] / a
                    if (best is None or ratio < best
                            or (ratio == best
                                and self.basis[i] < self.basis[leave])):
                        best = ratio
                        leave = i
            if leave < 0:
                return UNBOUNDED
            self._pivot(leave, enter)

    def primal_values(self, nstruct):
        values = [0] * nstruct
        for i, var in enumerate(self.basis):
            if var >= self.m:
                values[var - self.m] = self.rhs[i]
        return values

    def dual_values(self):
        out = []
        for k in range(self.m):
            y = -self.obj[k]
            out.append(y if y > 0 else 0)
        return out


class _Master:
    """A packing LP being solved incrementally (restricted master)."""

    def __init__(self, row_bounds: dict, tol, offset=0):
        self.row_keys = [k for k, b in row_bounds.items() if not is_inf(b)]
        self.inf_rows = [k for k, b in row_bounds.items() if is_inf(b)]
        self.row_index = {k: i for i, k in enumerate(self.row_keys)}
        bounds = [row_bounds[k] for k in self.row_keys]
        for b in bounds:
            if b < 0:
                raise ValueError(f"negative row bound {b}")
        self.tableau = SimplexTableau(bounds, tol)
        self.columns = []
        self.keys = set()
        self.offset = offset

    def add(self, col: Column) -> bool:
        if col.key in self.keys:
            return False
        for v in col.coeffs.values():
            if is_inf(v):
                raise ValueError(
                    f"infinite coefficient in column {col.key!r}")
        dense = [0] * len(self.row_keys)
        for rk, v in col.coeffs.items():
            if rk in self.row_index:
                dense[self.row_index[rk]] = v
            elif rk not in self.inf_rows:
                raise ValueError(f"column {col.key!r} uses unknown row {rk!r}")
        self.tableau.add_column(dense, col.objective)
        self.columns.append(col)
        self.keys.add(col.key)
        return True

    def solve(self) -> str:
        return self.tableau.optimize()

    def result(self) -> LPResult:
        values = self.tableau.primal_values(len(self.columns))
        primal = {c.key: v for c, v in zip(self.columns, values)}
        duals = self.tableau.dual_values()
        dual = {k: y for k, y in zip(self.row_keys, duals)}
        for k in self.inf_rows:
            dual[k] = 0
        return LPResult(primal, dual, self.tableau.value + self.offset)


def solve_explicit(lp: PackingLP, tol=None) -> LPResult:
    """Solve a fully enumerated packing LP; exact when all data is exact."""
    if tol is None:
        tol = lp.tolerance()
    master = _Master(lp.row_bounds, tol, lp.offset)
    for col in lp.columns:
        if not master.add(col):
            raise ValueError(f"duplicate column key {col.key!r}")
    status = master.solve()
    if status != OPTIMAL:
        return LPResult({}, {}, INF, status)
    return master.result()


def column_generation(pricer, initial_columns, row_bounds: dict, *,
                      offset=0, tol=None, max_rounds=100000) -> LPResult:
    """Solve an implicitly-given packing LP by column generation.

    ``pricer(dual)`` must return a ``Column`` whose dual constraint is
    violated by more than the pricing tolerance, or ``None`` when the duals
    are feasible for the full column set.  A duplicate offer ends the loop
    (a master-optimal dual cannot violate a column already present).
    """
    if tol is None:
        probe = PackingLP(list(initial_columns), dict(row_bounds), offset)
        tol = probe.tolerance()
    master = _Master(row_bounds, tol, offset)
    for col in initial_columns:
        master.add(col)
    for _ in range(max_rounds):
        status = master.solve()
        if status != OPTIMAL:
            return LPResult({}, {}, INF, status)
        result = master.result()
        col = pricer(result.dual)
        if col is None:
            return result
        if not master.add(col):
            return result
    raise RuntimeError("column generation failed to converge")


def verify_certificate(lp: PackingLP, result: LPResult, tol=None) -> list:
    """Primal feasibility, dual feasibility on the given columns, and strong
    duality; returns the list of violations (empty = certified optimal)."""
    if tol is None:
        tol = lp.tolerance()
    problems = []
    loads = {k: 0 for k in lp.row_bounds}
    primal_obj = 0
    for col in lp.columns:
        x = result.primal.get(col.key, 0)
        if x < -tol:
            problems.append(f"negative primal value on {col.key!r}")
        primal_obj += col.objective * x
        for rk, a in col.coeffs.items():
            loads[rk] += a * x
    for rk, bound in lp.row_bounds.items():
        if not is_inf(bound) and loads[rk] > bound + tol:
            problems.append(f"row {rk!r} overloaded")
    dual_obj = 0
    for rk, bound in lp.row_bounds.items():
        y = result.dual.get(rk, 0)
        if y < -tol:
            problems.append(f"negative dual on row {rk!r}")
        if not is_inf(bound):
            dual_obj += bound * y
        elif y > tol:
            problems.append(f"positive dual on unbounded row {rk!r}")
    for col in lp.columns:
        covered = sum(
            result.dual.get(rk, 0) * a for rk, a in col.coeffs.items()
        )
        if covered < col.objective - tol:
            problems.append(f"dual constraint violated for {col.key!r}")
    gap = primal_obj - dual_obj
    slack = tol * (len(lp.row_bounds) + len(lp.columns) + 1)
    if gap > slack or -gap > slack:
        problems.append(f"duality gap {gap}")
    return problems
