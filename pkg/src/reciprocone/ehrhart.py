"""Rational polytopes: dilation counting, Ehrhart quasi-polynomials,
Ehrhart-Macdonald reciprocity, and the coning/specialization bridge.

Counts are always brute force over the dilated bounding box; interior
counts use strict inequalities directly and are never derived from
reciprocity, so the reciprocity tests stay non-circular.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import exactla as la
from .cone import VCone, triangulate_halfopen
from .genfun import term_for_piece


class PolytopeError(ValueError):
    pass


class RationalPolytope:
    """Full-dimensional polytope given by its rational vertices.

    The vertex list is reduced to the actual extreme points: any supplied
    point inside the convex hull of the others is dropped.
    """

    def __init__(self, points):
        if not points:
            raise PolytopeError("need at least one point")
        d = len(points[0])
        cleaned = []
        for p in points:
            if len(p) != d:
                raise PolytopeError("inconsistent point dimensions")
            q = tuple(Fraction(x) for x in p)
            if q not in cleaned:
                cleaned.append(q)
        vertices = [p for p in cleaned
                    if not _in_convex_hull(p, [q for q in cleaned if q != p])]
        if _affine_rank(vertices) < d:
            raise PolytopeError("not full-dimensional")
        self.vertices = tuple(sorted(vertices))
        self.dim = d
        self._facets = None

    def facets(self):
        """Irredundant facet inequalities a·x <= b with integer a, b."""
        if self._facets is None:
            self._facets = _facet_inequalities(self.vertices, self.dim)
        return self._facets

    def contains(self, p, t=1, mode="closed"):
        """Membership of p in the dilate t·P (strict for mode "interior")."""
        for normal, rhs in self.facets():
            value = la.vec_dot(normal, p)
            if mode == "interior":
                if value >= t * rhs:
                    return False
            elif value > t * rhs:
                return False
        return True

    def __repr__(self):
        return "RationalPolytope(%r)" % (self.vertices,)


def _affine_rank(points):
    if len(points) < 2:
        return 0
    base = points[0]
    rows = tuple(la.vec_sub(p, base) for p in points[1:])
    return la.matrix_rank(rows)


def _in_convex_hull(p, points):
    """Exact test p in conv(points) via Caratheodory subsets."""
    if not points:
        return False
    d = len(p)
    rhs = tuple(p) + (1,)
    for size in range(1, min(len(points), d + 1) + 1):
        for subset in itertools.combinations(points, size):
            system = la.columns_to_matrix(subset) + ((1,) * size,)
            x = la.solve_rational(system, rhs)
            if isinstance(x, str):
                continue
            if all(v >= 0 for v in x):
                return True
    return False


def _facet_inequalities(vertices, d):
    facets = set()
    for subset in itertools.combinations(vertices, d):
        base = subset[0]
        rows = tuple(la.vec_sub(q, base) for q in subset[1:])
        if d == 1:
            normals = ((1,),)
        else:
            kernel = la.kernel_basis(rows)
            if len(kernel) != 1:
                continue
            normals = (kernel[0],)
        normal = la.rational_to_primitive_integer(normals[0])
        rhs = la.vec_dot(normal, base)
        values = [la.vec_dot(normal, v) for v in vertices]
        if all(v <= rhs for v in values):
            pass
        elif all(v >= rhs for v in values):
            normal = la.vec_neg(normal)
            rhs = -rhs
        else:
            continue
        scale = Fraction(rhs).denominator
        facets.add((la.vec_scale(scale, normal), int(rhs * scale)))
    if not facets:
        raise PolytopeError("no facets found")
    return tuple(sorted(facets))


def count(P, t, mode="closed"):
    """Exact number of lattice points of t·P (interior: strict count)."""
    if t < 1:
        raise PolytopeError("dilation factor must be a positive integer")
    lows = []
    highs = []
    for c in range(P.dim):
        coords = [v[c] * t for v in P.vertices]
        lows.append(math.ceil(min(coords)))
        highs.append(math.floor(max(coords)))
    total = 0
    for p in itertools.product(*(range(lo, hi + 1)
                                 for lo, hi in zip(lows, highs))):
        if P.contains(p, t, mode):
            total += 1
    return total


def cone_over(P):
    """The (d+1)-cone generated by (v, 1) over the vertices v of P."""
    gens = []
    for v in P.vertices:
        lifted = tuple(v) + (Fraction(1),)
        gens.append(la.rational_to_primitive_integer(lifted))
    for g in gens:
        if g[-1] < 1:
            raise PolytopeError("internal error: lifted generator has height < 1")
    return VCone(tuple(gens), P.dim + 1)


# ---------------------------------------------------------------------------
# quasi-polynomials

@dataclass(frozen=True)
class QuasiPolynomial:
    """Period p and one coefficient list (constant first) per residue class."""
    period: int
    classes: tuple

    def __post_init__(self):
        degree = max(len(c) for c in self.classes) - 1
        leading = {c[degree] if len(c) > degree else 0 for c in self.classes}
        if len(leading) != 1:
            raise PolytopeError(
                "fit failed: leading coefficients differ between classes")

    @property
    def degree(self):
        return max(len(c) for c in self.classes) - 1

    def evaluate(self, t):
        coeffs = self.classes[t % self.period]
        value = Fraction(0)
        for c in reversed(coeffs):
            value = value * t + c
        return value


def _interpolate(ts, ys):
    """Exact coefficients (constant first) of the polynomial through the data."""
    n = len(ts)
    rows = tuple(tuple(Fraction(t) ** k for k in range(n)) for t in ts)
    coeffs = la.solve_rational(rows, ys)
    if isinstance(coeffs, str):
        raise PolytopeError("fit failed: interpolation system %s" % coeffs)
    return coeffs


def quasipolynomial(P, mode="closed"):
    """Fit the dilation counting function as a quasi-polynomial.

    The period is the lcm of the vertex coordinate denominators (an upper
    bound for the true period; no minimization is attempted).  Each
    residue class is interpolated through d+1 counts and then validated
    against d+1 fresh counts.
    """
    d = P.dim
    period = la.lcm_all(x.denominator for v in P.vertices for x in v)
    classes = []
    for residue in range(period):
        start = 1 if residue == 0 else 0
        ts = [residue + period * k for k in range(start, start + d + 1)]
        ys = [count(P, t, mode) for t in ts]
        coeffs = _interpolate(ts, ys)
        check_ts = [residue + period * k
                    for k in range(start + d + 1, start + 2 * (d + 1))]
        for t in check_ts:
            qp_value = Fraction(0)
            for c in reversed(coeffs):
                qp_value = qp_value * t + c
            if qp_value != count(P, t, mode):
                raise PolytopeError("fit failed: validation mismatch at t=%d" % t)
        classes.append(tuple(coeffs))
    return QuasiPolynomial(period, tuple(classes))


@dataclass(frozen=True)
class EhrhartReport:
    passed: bool
    bound: int
    witness_t: int = None
    lhs: object = None
    rhs: object = None

    def as_dict(self):
        return {"passed": self.passed, "bound": self.bound,
                "witness_t": self.witness_t,
                "lhs": None if self.lhs is None else str(self.lhs),
                "rhs": None if self.rhs is None else str(self.rhs)}


def reciprocity_check(P, T=12):
    """Ehrhart-Macdonald: L(-t) = (-1)^dim * L_interior(t) for 1 <= t <= T.

    The interior counts come from the strict brute-force counter, never
    from the fitted quasi-polynomial.
    """
    qp = quasipolynomial(P, "closed")
    sign = (-1) ** P.dim
    for t in range(1, T + 1):
        lhs = qp.evaluate(-t)
        rhs = sign * count(P, t, "interior")
        if lhs != rhs:
            return EhrhartReport(False, T, witness_t=t, lhs=lhs, rhs=rhs)
    return EhrhartReport(True, T)


# ---------------------------------------------------------------------------
# Hilbert series via the coning specialization

@dataclass(frozen=True)
class UnivariateRatFun:
    """numerator / prod(1 - q^h); numerator as (coefficient, ...) from degree 0."""
    numerator: tuple
    denominator: tuple   # the exponents h, each >= 1

    def series(self, trunc):
        """Exact expansion coefficients up to degree trunc."""
        coeffs = [0] * (trunc + 1)
        for deg, c in enumerate(self.numerator):
            if deg <= trunc:
                coeffs[deg] += c
        for h in self.denominator:
            for i in range(h, trunc + 1):
                coeffs[i] += coeffs[i - h]
        return tuple(coeffs)


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] += a * b
    return out


def _poly_trim(p):
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return tuple(p)


def hilbert_series(P, mode="closed"):
    """Specialize the coned generating function to the grading variable.

    Builds sigma of the cone over P from its half-open triangulation,
    sets the first d variables to 1 and the last one to q.  Every
    denominator factor becomes (1 - q^h) with h >= 1 because the lifted
    generators have height >= 1, so the substitution is pole-free.
    """
    pieces = triangulate_halfopen(cone_over(P))
    if mode == "interior":
        pieces = tuple(p.flipped() for p in pieces)
    elif mode != "closed":
        raise ValueError("unknown mode %r" % (mode,))
    term_data = []
    for piece in pieces:
        term = term_for_piece(piece)
        heights = sorted(g[-1] for g in term.denominator)
        if any(h < 1 for h in heights):
            raise PolytopeError(
                "internal error: denominator height 0 after substitution")
        num = {}
        for exps, coeff in term.numerator:
            num[exps[-1]] = num.get(exps[-1], 0) + coeff
        term_data.append((term.sign, num, tuple(heights)))
    # common denominator: max multiplicity of each height over the terms
    common = {}
    for _, _, heights in term_data:
        counts = {}
        for h in heights:
            counts[h] = counts.get(h, 0) + 1
        for h, c in counts.items():
            common[h] = max(common.get(h, 0), c)
    denominator = tuple(sorted(h for h, c in common.items() for _ in range(c)))
    total = [0]
    for sign, num, heights in term_data:
        missing = dict(common)
        for h in heights:
            missing[h] -= 1
        poly = [0] * (max(num) + 1) if num else [0]
        for deg, c in num.items():
            poly[deg] = c
        for h, c in missing.items():
            for _ in range(c):
                poly = _poly_mul(poly, [1] + [0] * (h - 1) + [-1])
        padded = max(len(total), len(poly))
        total = [(total[i] if i < len(total) else 0)
                 + sign * (poly[i] if i < len(poly) else 0)
                 for i in range(padded)]
    return UnivariateRatFun(_poly_trim(total), denominator)
