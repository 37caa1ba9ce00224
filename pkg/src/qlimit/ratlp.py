"""Exact linear programming over the rationals.

Dense two-phase tableau simplex (Dantzig pricing, Bland's rule on
degenerate stalls) with GMP rationals inside the tableau; the interface
speaks ``fractions.Fraction``.  Every optimum comes
with a dual vector that is checked against the standard-form program, and
every returned assignment is re-substituted into the original constraints.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .errors import DimensionMismatch

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_RELATIONS = ("<=", "=", ">=")


def _frac(v):
    return Fraction(int(v.numerator), int(v.denominator))


def _q(v):
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass
class LinearProgram:
    """``optimize objective·x`` subject to ``row·x (<=|=|>=) rhs`` and per-variable bounds.

    ``bounds[j]`` is a ``(lower, upper)`` pair where ``None`` means unbounded;
    the default bound for every variable is ``(0, None)``.
    """

    objective: list
    sense: str = "max"
    constraints: list = field(default_factory=list)
    bounds: list = None

    def __post_init__(self):
        self.objective = [_q(c) for c in self.objective]
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {self.sense!r}")
        if self.bounds is None:
            self.bounds = [(Fraction(0), None)] * len(self.objective)
        self.bounds = [(None if lo is None else _q(lo), None if hi is None else _q(hi))
                       for lo, hi in self.bounds]
        self.constraints = [self._check(c) for c in self.constraints]
        if len(self.bounds) != self.nvars:
            raise DimensionMismatch("one bound pair per variable is required")

    @property
    def nvars(self):
        return len(self.objective)

    def _check(self, constraint):
        row, rel, rhs = constraint
        if len(row) != self.nvars:
            raise DimensionMismatch(
                f"constraint row has width {len(row)}, expected {self.nvars}")
        if rel not in _RELATIONS:
            raise ValueError(f"relation must be one of {_RELATIONS}, got {rel!r}")
        return ([_q(a) for a in row], rel, _q(rhs))

    def add(self, row, rel, rhs):
        self.constraints.append(self._check((row, rel, rhs)))


@dataclass
class Solution:
    status: str
    value: Fraction = None
    x: list = None
    dual: list = None  # one multiplier per original constraint
    pivots: int = 0
    certificate: tuple = None  # (standard-form primal, standard-form dual)

    @property
    def optimal(self):
        return self.status == OPTIMAL

    def __bool__(self):
        return self.status == OPTIMAL


# --- standard form ----------------------------------------------------------

class _StandardForm:
    """``min c·y  s.t.  A y = b, y >= 0, b >= 0`` plus the map back to original variables."""

    def __init__(self, lp):
        self.lp = lp
        n = lp.nvars
        # each original variable is offset + sum(sign * column)
        self.var_cols = []
        self.offset = []
        ncols = 0
        extra_rows = []  # (col, upper) for finite two-sided bounds
        for j, (lo, hi) in enumerate(lp.bounds):
            if lo is not None:
                self.var_cols.append([(ncols, 1)])
                self.offset.append(lo)
                if hi is not None:
                    if hi < lo:
                        self.empty = True
                    extra_rows.append((ncols, hi - lo))
                ncols += 1
            elif hi is not None:
                self.var_cols.append([(ncols, -1)])
                self.offset.append(hi)
                ncols += 1
            else:
                self.var_cols.append([(ncols, 1), (ncols + 1, -1)])
                self.offset.append(Fraction(0))
                ncols += 2
        self.nstruct = ncols
        self.empty = getattr(self, "empty", False)

        rows = []  # (coefficient dict over structural cols, relation, rhs, origin)
        for k, (row, rel, rhs) in enumerate(lp.constraints):
            coeffs = {}
            shift = Fraction(0)
            for j in range(n):
                a = row[j]
                if a == 0:
                    continue
                shift += a * self.offset[j]
                for col, sign in self.var_cols[j]:
                    coeffs[col] = coeffs.get(col, 0) + a * sign
            rows.append((coeffs, rel, rhs - shift, ("c", k)))
        for col, ub in extra_rows:
            rows.append(({col: Fraction(1)}, "<=", ub, ("b", col)))

        # slacks, then sign-normalize so b >= 0
        self.A = []
        self.b = []
        self.origin = []
        self.row_sign = []
        slack_cols = []
        width = ncols + sum(1 for _, rel, _, _ in rows if rel != "=")
        s = ncols
        for coeffs, rel, rhs, origin in rows:
            dense = [Fraction(0)] * width
            for col, a in coeffs.items():
                dense[col] = _q(a)
            slack = None
            if rel == "<=":
                dense[s] = Fraction(1)
                slack = s
                s += 1
            elif rel == ">=":
                dense[s] = Fraction(-1)
                slack = s
                s += 1
            sign = 1
            if rhs < 0:
                dense = [-a for a in dense]
                rhs = -rhs
                sign = -1
            self.A.append(dense)
            self.b.append(rhs)
            self.origin.append(origin)
            self.row_sign.append(sign)
            slack_cols.append(slack)
        self.ncols = width
        self.slack_cols = slack_cols

        c = [Fraction(0)] * width
        flip = -1 if lp.sense == "max" else 1
        self.const = Fraction(0)
        for j in range(n):
            cj = lp.objective[j]
            if cj == 0:
                continue
            self.const += cj * self.offset[j]
            for col, sign in self.var_cols[j]:
                c[col] += flip * cj * sign
        self.c = c
        self.flip = flip

    def to_original(self, y):
        x = []
        for j in range(self.lp.nvars):
            v = self.offset[j]
            for col, sign in self.var_cols[j]:
                v += sign * y[col]
            x.append(v)
        return x


# --- tableau simplex --------------------------------------------------------

def _pivot(T, r, c):
    prow = T[r]
    pv = prow[c]
    if pv != 1:
        inv = 1 / pv
        prow = [a * inv if a else a for a in prow]
        T[r] = prow
    nz = [j for j, a in enumerate(prow) if a]
    for i, row in enumerate(T):
        if i == r:
            continue
        factor = row[c]
        if factor:
            for j in nz:
                row[j] -= factor * prow[j]


def _simplex(T, basis, allowed, max_pivots, stall_limit=20):
    """Minimize the objective held in the last tableau row (reduced costs, -z in last column).

    Returns (status, pivots).  ``allowed`` limits entering columns.  Pricing is
    Dantzig's most-negative reduced cost; after ``stall_limit`` consecutive
    degenerate pivots it switches to Bland's rule until the objective moves
    again, which rules out cycling.
    """
    m = len(T) - 1
    last = len(T[m]) - 1
    allowed = list(allowed)
    pivots = 0
    stalled = 0
    while True:
        obj = T[m]
        if stalled >= stall_limit:
            enter = next((j for j in allowed if obj[j] < 0), None)
        else:
            enter, most = None, 0
            for j in allowed:
                if obj[j] < most:
                    enter, most = j, obj[j]
        if enter is None:
            return OPTIMAL, pivots
        best = None
        leave = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][last] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return UNBOUNDED, pivots
        stalled = stalled + 1 if best == 0 else 0
        _pivot(T, leave, enter)
        basis[leave] = enter
        pivots += 1
        if max_pivots is not None and pivots > max_pivots:
            raise RuntimeError("pivot limit exceeded")


def _solve_standard(sf, max_pivots=None):
    m = len(sf.A)
    N = sf.ncols
    # reuse +1 slack columns as the starting basis where possible
    basis = [None] * m
    for i, sc in enumerate(sf.slack_cols):
        if sc is not None and sf.A[i][sc] == 1:
            basis[i] = sc
    art_rows = [i for i in range(m) if basis[i] is None]
    width = N + len(art_rows)
    T = []
    zero, one = mpq(0), mpq(1)
    for i in range(m):
        row = [mpq(a) for a in sf.A[i]] + [zero] * len(art_rows) + [mpq(sf.b[i])]
        T.append(row)
    for k, i in enumerate(art_rows):
        T[i][N + k] = one
        basis[i] = N + k
    pivots = 0

    if art_rows:
        obj = [zero] * (width + 1)
        for i in art_rows:
            for j in range(width + 1):
                if j < N or j == width:
                    obj[j] -= T[i][j]
        T.append(obj)
        status, p = _simplex(T, basis, range(width), max_pivots)
        pivots += p
        if T[m][width] != 0:
            return INFEASIBLE, None, None, pivots
        # drive remaining artificials out of the basis
        drop = []
        for i in range(m):
            if basis[i] >= N:
                col = next((j for j in range(N) if T[i][j] != 0), None)
                if col is None:
                    drop.append(i)
                else:
                    _pivot(T, i, col)
                    basis[i] = col
                    pivots += 1
        T.pop()
        keep = [i for i in range(m) if i not in set(drop)]
        T = [T[i][:N] + [T[i][width]] for i in keep]
        basis = [basis[i] for i in keep]
        rows_kept = keep
    else:
        T = [row[:N] + [row[width]] for row in T]
        rows_kept = list(range(m))

    # phase two objective row in reduced form
    obj = [mpq(c) for c in sf.c] + [zero]
    for i, bcol in enumerate(basis):
        cb = mpq(sf.c[bcol])
        if cb:
            row = T[i]
            for j in range(N + 1):
                if row[j]:
                    obj[j] -= cb * row[j]
    T.append(obj)
    status, p = _simplex(T, basis, range(N), max_pivots)
    pivots += p
    if status == UNBOUNDED:
        return UNBOUNDED, None, None, pivots
    y = [Fraction(0)] * N
    for i, bcol in enumerate(basis):
        y[bcol] = _frac(T[i][N])
    dual = _dual_from_basis(sf, basis, rows_kept)
    return OPTIMAL, y, dual, pivots


def _solve_square(M, rhs):
    """Solve ``M z = rhs`` exactly (M square, nonsingular)."""
    k = len(M)
    aug = [list(M[i]) + [rhs[i]] for i in range(k)]
    for col in range(k):
        piv = next(r for r in range(col, k) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [a * inv for a in aug[col]]
        for r in range(k):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][k] for i in range(k)]


def _dual_from_basis(sf, basis, rows_kept):
    """``y = c_B B^{-1}`` over the kept rows; dropped (redundant) rows get zero."""
    BT = [[sf.A[i][bcol] for i in rows_kept] for bcol in basis]
    yk = _solve_square(BT, [sf.c[bcol] for bcol in basis])
    y = [Fraction(0)] * len(sf.A)
    for i, v in zip(rows_kept, yk):
        y[i] = v
    return y


def check_dual(sf, y, x):
    """Exact optimality certificate: ``Aᵀy <= c`` and ``b·y = c·x``."""
    for j in range(sf.ncols):
        if sum(sf.A[i][j] * y[i] for i in range(len(sf.A)) if sf.A[i][j]) > sf.c[j]:
            return False
    by = sum(bi * yi for bi, yi in zip(sf.b, y))
    cx = sum(cj * xj for cj, xj in zip(sf.c, x))
    return by == cx


def _satisfies(lp, x):
    for (lo, hi), v in zip(lp.bounds, x):
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            return False
    for row, rel, rhs in lp.constraints:
        lhs = sum(a * v for a, v in zip(row, x) if a)
        if rel == "<=" and lhs > rhs or rel == ">=" and lhs < rhs or rel == "=" and lhs != rhs:
            return False
    return True


def solve(lp, max_pivots=None):
    """Solve ``lp`` exactly.  Returns a :class:`Solution`."""
    sf = _StandardForm(lp)
    if sf.empty:
        return Solution(INFEASIBLE)
    status, y, dual, pivots = _solve_standard(sf, max_pivots)
    if status != OPTIMAL:
        return Solution(status, pivots=pivots)
    x = sf.to_original(y)
    if not _satisfies(lp, x):
        raise AssertionError("simplex returned an assignment violating the program")
    if not check_dual(sf, dual, y):
        raise AssertionError("dual certificate failed verification")
    value = sum(c * v for c, v in zip(lp.objective, x))
    # multipliers for the original constraints, in the original orientation
    orig_dual = [Fraction(0)] * len(lp.constraints)
    for yi, origin, sign in zip(dual, sf.origin, sf.row_sign):
        if origin[0] == "c":
            orig_dual[origin[1]] = sf.flip * sign * yi
    log.debug("LP solved: %d vars, %d constraints, %d pivots, value %s",
              lp.nvars, len(lp.constraints), pivots, value)
    return Solution(OPTIMAL, value, x, orig_dual, pivots, (y, dual))


def verify_duality(lp, solution):
    """Re-check an optimal solution's certificate against a freshly built standard form:
    primal feasibility, consistency with the reported point, dual feasibility and
    equal objective values."""
    if not solution.optimal or solution.certificate is None:
        return False
    y, dual = solution.certificate
    sf = _StandardForm(lp)
    if len(y) != sf.ncols or len(dual) != len(sf.A):
        return False
    if any(v < 0 for v in y):
        return False
    for row, bi in zip(sf.A, sf.b):
        if sum(a * v for a, v in zip(row, y) if a) != bi:
            return False
    if sf.to_original(y) != list(solution.x):
        return False
    if not check_dual(sf, dual, y):
        return False
    return sum(c * v for c, v in zip(lp.objective, solution.x)) == solution.value


def feasible(constraints, nvars, bounds=None):
    """Return a satisfying rational assignment, or ``None`` when the system is infeasible.

    Pure equality systems over free variables go through exact Gaussian
    elimination; anything else runs phase one of the simplex.
    """
    constraints = list(constraints)
    for row, _, _ in constraints:
        if len(row) != nvars:
            raise DimensionMismatch(f"constraint row has width {len(row)}, expected {nvars}")
    free = bounds is not None and all(lo is None and hi is None for lo, hi in bounds)
    if free and all(rel == "=" for _, rel, _ in constraints):
        return solve_equalities([r for r, _, _ in constraints], [b for _, _, b in constraints])
    lp = LinearProgram([0] * nvars, "max", constraints, bounds)
    sol = solve(lp)
    return sol.x if sol.optimal else None


def solve_equalities(rows, rhs):
    """Exact Gaussian elimination; a particular solution (free columns = 0) or ``None``."""
    m = len(rows)
    if m == 0:
        return []
    n = len(rows[0])
    aug = [[_q(a) for a in row] + [_q(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [a * inv for a in aug[r]]
        prow = aug[r]
        nz = [j for j in range(col, n + 1) if prow[j]]
        for i in range(m):
            if i != r and aug[i][col]:
                f = aug[i][col]
                row = aug[i]
                for j in nz:
                    row[j] -= f * prow[j]
        pivots.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = aug[i][n]
    return x
