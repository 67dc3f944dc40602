"""Constant-term machinery: slack systems, the Euler oracle, and the
column-elimination procedure with positivity/negativity certificates.

The analytic residue argument is re-expressed as finite checkable data:
at every elimination step the carried kernel vector stays strictly
positive and every row of every intermediate matrix keeps a negative
entry.  A completed trace certifies the sign count used by the
reciprocity identity.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import exactla as la
from .cone import Cone, ConeError
from .genfun import TruncatedSeries


class TraceInvariantError(RuntimeError):
    """A certificate failed; carries the offending system for inspection."""

    def __init__(self, message, system=None, certificate=None):
        super().__init__(message)
        self.system = system
        self.certificate = certificate


@dataclass(frozen=True)
class SlackSystem:
    """Equality system M·v = 0 with named variables (x's first, then y's)."""
    matrix: tuple
    var_names: tuple

    @property
    def num_rows(self):
        return len(self.matrix)

    @property
    def num_cols(self):
        return len(self.matrix[0]) if self.matrix else len(self.var_names)


def slack_matrix(A):
    """The slack system (A | I): one slack column per inequality row."""
    if not A or not A[0]:
        raise ValueError("empty inequality matrix")
    m, d = la.check_matrix(A)
    rows = tuple(la.as_integer_vector(r) for r in A)
    matrix = tuple(row + tuple(1 if j == i else 0 for j in range(m))
                   for i, row in enumerate(rows))
    names = tuple("x%d" % (j + 1) for j in range(d)) + \
        tuple("y%d" % (k + 1) for k in range(m))
    return SlackSystem(matrix, names)


def _orthant_cone(A):
    K = Cone(A)
    for r in K.ray_vectors:
        if any(x < 0 for x in r):
            raise ConeError(
                "cone is not contained in the nonnegative orthant; "
                "apply normalize() first")
    return K


@dataclass(frozen=True)
class ThetaSeries:
    """Truncated constant-term series in d x-variables and m y-variables.

    The coefficient of x^n y^p is 1 exactly when A·n + p = 0 with n, p >= 0.
    The x-exponents range over [0, B]^d; the y-box is widened to the largest
    slack attainable there so that setting y = 1 recovers the cone series.
    """
    series: TruncatedSeries
    num_x: int
    num_y: int

    def restrict_y1(self):
        """The x-marginal at y = 1 (sum over all slack exponents)."""
        bound = self.series.bounds[0] if self.num_x else 0
        coeffs = {}
        for key, value in self.series.coeffs.items():
            n = key[:self.num_x]
            coeffs[n] = coeffs.get(n, 0) + value
        return TruncatedSeries((bound,) * self.num_x, coeffs)


def euler_constant_term(A, bound):
    """Finite shadow of Euler's constant-term lemma for the cone {A·r <= 0}.

    Enumerates all x-exponents n in [0, bound]^d with A·n <= 0 together with
    their slack exponents p = -A·n.
    """
    _orthant_cone(A)
    m, d = la.check_matrix(A)
    rows = tuple(la.as_integer_vector(r) for r in A)
    y_bounds = tuple(bound * sum(max(0, -x) for x in row) for row in rows)
    coeffs = {}
    for n in itertools.product(range(bound + 1), repeat=d):
        values = la.mat_vec(rows, n)
        if all(v <= 0 for v in values):
            p = tuple(-v for v in values)
            coeffs[n + p] = 1
    series = TruncatedSeries((bound,) * d + y_bounds, coeffs)
    return ThetaSeries(series, d, m)


# ---------------------------------------------------------------------------
# elimination

def _check_carry(system, carry):
    if len(carry) != system.num_cols:
        raise ValueError("carry vector has wrong length")
    carry = tuple(Fraction(c) for c in carry)
    if any(c <= 0 for c in carry):
        raise ValueError("carry vector must be strictly positive")
    for row in system.matrix:
        if la.vec_dot(row, carry) != 0:
            raise ValueError("carry vector is not in the kernel")
    return carry


def eliminate_step(system, row, pivot_col, carry):
    """One elimination step: clear `row` using `pivot_col`, drop both.

    Adds -(M[row,k]/M[row,pivot]) times the pivot column to every other
    column, then deletes the pivot column and the row.  The carried
    solution loses its pivot coordinate and stays a strictly positive
    kernel vector of the reduced system.
    """
    matrix = system.matrix
    if not (0 <= row < system.num_rows):
        raise ValueError("row index out of range")
    if not (0 <= pivot_col < system.num_cols):
        raise ValueError("column index out of range")
    pivot = matrix[row][pivot_col]
    if pivot == 0:
        raise ValueError("pivot entry is zero")
    carry = _check_carry(system, carry)
    factors = [-Fraction(matrix[row][k]) / pivot
               for k in range(system.num_cols)]
    new_rows = []
    for i, old in enumerate(matrix):
        if i == row:
            continue
        new_rows.append(tuple(old[k] + factors[k] * old[pivot_col]
                              for k in range(system.num_cols)
                              if k != pivot_col))
    names = tuple(n for k, n in enumerate(system.var_names) if k != pivot_col)
    reduced = SlackSystem(tuple(new_rows), names)
    new_carry = tuple(c for k, c in enumerate(carry) if k != pivot_col)
    if any(c <= 0 for c in new_carry):
        raise TraceInvariantError("carried solution lost positivity",
                                  system=reduced)
    for r in reduced.matrix:
        if la.vec_dot(r, new_carry) != 0:
            raise TraceInvariantError("carried solution left the kernel",
                                      system=reduced)
    return reduced, new_carry


@dataclass(frozen=True)
class NegativityCertificate:
    ok: bool
    columns: tuple = None      # per-row column index of a negative entry
    failing_row: int = None

    def as_dict(self):
        return {"ok": self.ok,
                "columns": list(self.columns) if self.columns is not None else None,
                "failing_row": self.failing_row}


def negativity_certificate(system):
    """Per-row witness of a negative entry, or the first row lacking one."""
    columns = []
    for i, row in enumerate(system.matrix):
        for j, value in enumerate(row):
            if value < 0:
                columns.append(j)
                break
        else:
            return NegativityCertificate(False, failing_row=i)
    return NegativityCertificate(True, columns=tuple(columns))


@dataclass(frozen=True)
class TraceStep:
    pivot_row: int        # original inequality label, 1-based
    pivot_var: str        # eliminated variable name
    pivot_col: int        # column index inside the pre-step system
    system: SlackSystem   # system after the step
    carry: tuple
    certificate: NegativityCertificate


@dataclass(frozen=True)
class EliminationTrace:
    initial: SlackSystem
    initial_carry: tuple
    initial_certificate: NegativityCertificate
    steps: tuple

    @property
    def sign_count(self):
        return len(self.steps)


def _interior_lattice_point(K, cap=20):
    """Smallest strictly positive lattice point with A·n <= -1 per row.

    Scans boxes of growing size (graded lexicographic order) so the result
    is deterministic and small; falls back to the ray sum, which is always
    interior.
    """
    d = K.dim
    for radius in range(1, cap + 1):
        candidates = [p for p in itertools.product(range(1, radius + 1), repeat=d)
                      if max(p) == radius]
        for p in sorted(candidates, key=lambda q: (sum(q), q)):
            if all(la.vec_dot(row, p) <= -1 for row in K.rows):
                return p
    return la.vec_sum(K.ray_vectors, d)


def _pivot_column(row_entries):
    """Nonzero entry of smallest absolute value, lowest column on ties."""
    best = None
    for j, value in enumerate(row_entries):
        if value != 0 and (best is None or abs(value) < abs(row_entries[best])):
            best = j
    return best


def elimination_trace(A, carry="auto"):
    """Full m-step elimination of (A | I) with certificates at every step.

    Rows are eliminated in order; within each row the pivot is the nonzero
    entry of smallest absolute value (lowest column index on ties).  Any
    certificate failure aborts the trace loudly with the failing state.
    """
    K = _orthant_cone(A)
    system = slack_matrix(A)
    if carry == "auto":
        n = _interior_lattice_point(K)
        slack = tuple(-la.vec_dot(row, n) for row in K.rows)
        carry = n + slack
    carry = _check_carry(system, carry)
    certificate = negativity_certificate(system)
    if not certificate.ok:
        raise TraceInvariantError(
            "initial slack system has a nonnegative row %d"
            % certificate.failing_row, system=system, certificate=certificate)
    initial = system
    initial_carry = carry
    initial_certificate = certificate
    steps = []
    total = system.num_rows
    for step_index in range(total):
        pivot_col = _pivot_column(system.matrix[0])
        if pivot_col is None:
            raise TraceInvariantError("zero row encountered before elimination",
                                      system=system)
        pivot_var = system.var_names[pivot_col]
        system, carry = eliminate_step(system, 0, pivot_col, carry)
        certificate = negativity_certificate(system)
        if not certificate.ok:
            raise TraceInvariantError(
                "negativity certificate failed after eliminating row %d"
                % (step_index + 1),
                system=system, certificate=certificate)
        steps.append(TraceStep(step_index + 1, pivot_var, pivot_col,
                               system, carry, certificate))
    return EliminationTrace(initial, initial_carry, initial_certificate,
                            tuple(steps))
