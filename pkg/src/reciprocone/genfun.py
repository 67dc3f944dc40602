"""Rational generating functions of cone lattice points and reciprocity checks.

A generating function is stored as a signed sum of terms
``sign * (sum of monomials) / prod(1 - x^b)``.  Equality of rational
functions is decided by truncated-series comparison inside a box, never
by symbolic normalization; the brute-force lattice enumeration is the
ground-truth oracle throughout.
"""

import itertools
from dataclasses import dataclass

from . import exactla as la
from .cone import Cone, VCone, ConeError, triangulate_halfopen


@dataclass(frozen=True)
class Term:
    sign: int
    numerator: tuple   # ((exponent_vector, coefficient), ...)
    denominator: tuple  # (exponent_vector, ...), factors (1 - x^b)


@dataclass(frozen=True)
class RationalGenFun:
    terms: tuple
    dim: int

    def is_canonical(self):
        """Every denominator vector nonnegative and nonzero (expandable at 0)."""
        for term in self.terms:
            for b in term.denominator:
                if any(x < 0 for x in b) or all(x == 0 for x in b):
                    return False
        return True

    def sorted_terms(self):
        return tuple(sorted(self.terms,
                            key=lambda t: (t.denominator, t.numerator, t.sign)))


class TruncatedSeries:
    """Finite map from exponent vectors in a box to integer coefficients."""

    def __init__(self, bounds, coeffs):
        self.bounds = tuple(bounds)
        cleaned = {}
        for key, value in coeffs.items():
            if value == 0:
                continue
            if len(key) != len(self.bounds):
                raise ValueError("exponent key has wrong length: %r" % (key,))
            if any(k < 0 or k > b for k, b in zip(key, self.bounds)):
                raise ValueError("exponent key outside the box: %r" % (key,))
            cleaned[tuple(key)] = value
        self.coeffs = cleaned

    @classmethod
    def box(cls, bound, dim):
        return cls((bound,) * dim, {})

    def get(self, key):
        return self.coeffs.get(tuple(key), 0)

    def scaled(self, factor):
        return TruncatedSeries(self.bounds,
                               {k: factor * v for k, v in self.coeffs.items()})

    def items_sorted(self):
        return sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries)
                and self.bounds == other.bounds
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return "TruncatedSeries(bounds=%r, nonzero=%d)" % (self.bounds,
                                                           len(self.coeffs))


def series_first_mismatch(s1, s2):
    """First box point (graded lex) where the two series differ, or None."""
    if s1.bounds != s2.bounds:
        raise ValueError("series live in different boxes")
    keys = set(s1.coeffs) | set(s2.coeffs)
    for key in sorted(keys, key=lambda k: (sum(k), k)):
        if s1.get(key) != s2.get(key):
            return key, s1.get(key), s2.get(key)
    return None


# ---------------------------------------------------------------------------
# construction

def term_for_piece(piece, sign=1):
    numerator = tuple((p, 1) for p in piece.parallelepiped_points())
    denominator = tuple(sorted(piece.generators))
    return Term(sign, numerator, denominator)


def simplicial_sigma(S):
    """Generating function of a half-open simplicial cone.

    Numerator: lattice points of the half-open fundamental parallelepiped;
    denominator: one factor (1 - x^g) per generator.
    """
    return RationalGenFun((term_for_piece(S),), S.ambient_dim)


def _orthant_pieces(K, mode):
    for r in K.ray_vectors:
        if any(x < 0 for x in r):
            raise ConeError(
                "cone is not contained in the nonnegative orthant; "
                "apply normalize() first")
    pieces = triangulate_halfopen(K.rays())
    if mode == "interior":
        pieces = tuple(p.flipped() for p in pieces)
    elif mode != "closed":
        raise ValueError("unknown mode %r" % (mode,))
    return pieces


def sigma(K, mode="closed"):
    """Closed form of the lattice-point generating function of K.

    "closed" sums the half-open triangulation pieces; "interior" flips
    every excluded set (the flip is validated against the strict
    brute-force oracle by the reciprocity checkers before use).
    """
    pieces = _orthant_pieces(K, mode)
    return RationalGenFun(tuple(term_for_piece(p) for p in pieces), K.dim)


def sigma_halfopen(K):
    """Closed form for a half-open cone given by per-row openness flags.

    Inclusion-exclusion over the open rows: removing the points lying on
    the open facets amounts to an alternating sum of the closed faces
    {r in K : row_i . r = 0 for i in T} over subsets T of the open rows.
    Each face is a closed cone spanned by the rays tight on T.
    """
    d = K.dim
    for r in K.ray_vectors:
        if any(x < 0 for x in r):
            raise ConeError(
                "cone is not contained in the nonnegative orthant; "
                "apply normalize() first")
    open_rows = sorted(K.open_rows)
    terms = []
    for size in range(len(open_rows) + 1):
        for T in itertools.combinations(open_rows, size):
            sign = -1 if size % 2 else 1
            tight = tuple(r for r in K.ray_vectors
                          if all(la.vec_dot(K.rows[i], r) == 0 for i in T))
            if not tight:
                # the face is the origin alone
                terms.append(Term(sign, (((0,) * d, 1),), ()))
                continue
            for piece in triangulate_halfopen(VCone(tight, d)):
                terms.append(term_for_piece(piece, sign))
    return RationalGenFun(tuple(terms), d)


# ---------------------------------------------------------------------------
# variable inversion and expansion

def invert_variables(f):
    """Substitute x -> 1/x and re-canonicalize every denominator factor.

    Each factor 1/(1 - x^-b) = -x^b/(1 - x^b) flips the sign and shifts
    the numerator by b, so a term with k factors picks up (-1)^k and the
    numerator exponent m becomes (sum of denominator vectors) - m.
    """
    terms = []
    for term in f.terms:
        shift = la.vec_sum(term.denominator, f.dim)
        sign = term.sign * (-1 if len(term.denominator) % 2 else 1)
        numerator = tuple(sorted((la.vec_sub(shift, e), c)
                                 for e, c in term.numerator))
        terms.append(Term(sign, numerator, term.denominator))
    return RationalGenFun(tuple(terms), f.dim)


def expand(f, bound):
    """Exact series coefficients of f on the box [0, bound]^dim."""
    if not f.is_canonical():
        raise ValueError("non-canonical form")
    total = {}
    for term in f.terms:
        kept = [(e, c) for e, c in term.numerator
                if all(x <= bound for x in e)]
        if not kept:
            continue
        lows = tuple(min(e[j] for e, _ in kept) for j in range(f.dim))
        cur = {}
        for e, c in kept:
            cur[e] = cur.get(e, 0) + c
        points = sorted(
            itertools.product(*(range(lo, bound + 1) for lo in lows)),
            key=lambda p: (sum(p), p))
        for b in term.denominator:
            for p in points:
                q = la.vec_sub(p, b)
                prev = cur.get(q)
                if prev:
                    cur[p] = cur.get(p, 0) + prev
        for key, value in cur.items():
            if all(0 <= x <= bound for x in key) and value:
                total[key] = total.get(key, 0) + term.sign * value
    return TruncatedSeries((bound,) * f.dim, total)


def brute_force_series(K, mode, bound):
    """Ground-truth oracle: coefficient 1 exactly at box points of K."""
    coeffs = {}
    for p in itertools.product(range(bound + 1), repeat=K.dim):
        if K.membership(p, mode):
            coeffs[p] = 1
    return TruncatedSeries((bound,) * K.dim, coeffs)


# ---------------------------------------------------------------------------
# reciprocity checks

@dataclass(frozen=True)
class CheckReport:
    name: str
    passed: bool
    bound: int
    witness: tuple = None
    lhs: int = None
    rhs: int = None

    def as_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "bound": self.bound,
            "witness": list(self.witness) if self.witness is not None else None,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


def _validated_series(K, f, mode, bound):
    series = expand(f, bound)
    oracle = brute_force_series(K, mode, bound)
    mismatch = series_first_mismatch(series, oracle)
    if mismatch is not None:
        raise RuntimeError(
            "closed form disagrees with the %s brute-force oracle at %r: %d != %d"
            % (mode, mismatch[0], mismatch[1], mismatch[2]))
    return series


def stanley_reciprocity_check(K, bound):
    """Check sigma_K(1/x) = (-1)^d sigma_{K interior}(x) as a series identity.

    Both closed forms are validated against the brute-force oracle first,
    so the comparison is not circular.
    """
    d = K.dim
    f_closed = sigma(K, "closed")
    _validated_series(K, f_closed, "closed", bound)
    f_interior = sigma(K, "interior")
    interior_series = _validated_series(K, f_interior, "interior", bound)
    lhs = expand(invert_variables(f_closed), bound)
    rhs = interior_series.scaled((-1) ** d)
    mismatch = series_first_mismatch(lhs, rhs)
    if mismatch is None:
        return CheckReport("stanley_reciprocity", True, bound)
    return CheckReport("stanley_reciprocity", False, bound,
                       witness=mismatch[0], lhs=mismatch[1], rhs=mismatch[2])


@dataclass(frozen=True)
class HalfOpenSpec:
    """Complementary pair of half-open cones over the same inequality rows.

    base:        K1 = {r >= 0 : closed rows <= 0, open rows < 0}
    complement:  K2 = {r > 0  : closed rows < 0, open rows <= 0}
    """
    base: Cone

    def base_contains(self, p):
        return all(x >= 0 for x in p) and self.base.membership(p, "as_flagged")

    def complement_contains(self, p):
        if any(x <= 0 for x in p):
            return False
        flipped = frozenset(range(self.base.num_rows)) - self.base.open_rows
        for i, row in enumerate(self.base.rows):
            value = la.vec_dot(row, p)
            if i in flipped:
                if value >= 0:
                    return False
            elif value > 0:
                return False
        return True

    def _indicator_series(self, which, bound):
        member = self.base_contains if which == "base" else self.complement_contains
        coeffs = {}
        for p in itertools.product(range(bound + 1), repeat=self.base.dim):
            if member(p):
                coeffs[p] = 1
        return TruncatedSeries((bound,) * self.base.dim, coeffs)


def halfopen_reciprocity_check(spec, bound):
    """Measure sigma_{K1}(1/x) = (-1)^d sigma_{K2}(x) on a box.

    The closed form of sigma_{K1} (inclusion-exclusion over open facets)
    is validated against the brute-force K1 oracle, then inverted and
    compared coefficientwise against the brute-force K2 series.  The
    verdict is whatever the oracle dictates; nothing about which facet
    sets should work is hard-coded.
    """
    K = spec.base
    d = K.dim
    # precondition: at most one side may meet the coordinate hyperplanes
    def meets_hyperplanes(member):
        for p in itertools.product(range(bound + 1), repeat=d):
            if any(x == 0 for x in p) and member(p):
                return True
        return False
    if meets_hyperplanes(spec.base_contains) and \
            meets_hyperplanes(spec.complement_contains):
        raise ValueError(
            "both half-open cones meet the coordinate hyperplanes")
    f1 = sigma_halfopen(K)
    series1 = expand(f1, bound)
    oracle1 = spec._indicator_series("base", bound)
    mismatch = series_first_mismatch(series1, oracle1)
    if mismatch is not None:
        raise RuntimeError(
            "half-open closed form disagrees with its oracle at %r: %d != %d"
            % (mismatch[0], mismatch[1], mismatch[2]))
    lhs = expand(invert_variables(f1), bound)
    rhs = spec._indicator_series("complement", bound).scaled((-1) ** d)
    mismatch = series_first_mismatch(lhs, rhs)
    if mismatch is None:
        return CheckReport("halfopen_reciprocity", True, bound)
    return CheckReport("halfopen_reciprocity", False, bound,
                       witness=mismatch[0], lhs=mismatch[1], rhs=mismatch[2])
