"""Pointed rational cones.

H- and V-representations, membership, extreme rays by the double
description method, unimodular normalization into the positive orthant,
and half-open simplicial triangulation with a generic reference point.
"""

import itertools
from fractions import Fraction

from . import exactla as la


class ConeError(ValueError):
    """Invalid cone data ("not pointed", "not full-dimensional", ...)."""


# ---------------------------------------------------------------------------
# unimodular maps

class UnimodularMap:
    """Lattice-preserving linear map: an integer matrix with determinant +1."""

    def __init__(self, matrix):
        m, n = la.check_matrix(matrix)
        if m != n:
            raise ConeError("unimodular map must be square")
        rows = tuple(la.as_integer_vector(r) for r in matrix)
        if la.det(rows) != 1:
            raise ConeError("unimodular map must have determinant +1")
        self.matrix = rows
        self.dim = n

    @classmethod
    def identity(cls, d):
        return cls(la.identity_matrix(d))

    def apply(self, v):
        return la.mat_vec(self.matrix, v)

    def inverse(self):
        return UnimodularMap(la.int_inverse(self.matrix))

    def __eq__(self, other):
        return isinstance(other, UnimodularMap) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return "UnimodularMap(%r)" % (self.matrix,)


# ---------------------------------------------------------------------------
# H-representation

class Cone:
    """Pointed full-dimensional cone {r : A·r <= 0} with per-row open flags.

    Rows flagged open stand for strict inequalities; a freshly constructed
    cone has every row closed.  Redundant rows are kept (they matter for
    the H-representation semantics) but do not contribute extreme rays.
    """

    def __init__(self, inequalities, open_rows=()):
        m, d = la.check_matrix(inequalities)
        rows = tuple(la.as_integer_vector(r) for r in inequalities)
        for row in rows:
            if all(x == 0 for x in row):
                raise ConeError("zero inequality row is not allowed")
        open_rows = frozenset(open_rows)
        for i in open_rows:
            if not (0 <= i < m):
                raise ConeError("open row index %r out of range" % (i,))
        if la.matrix_rank(rows) < d:
            raise ConeError("not pointed")
        rays = _extreme_rays(rows, d)
        interior = la.vec_sum(rays, d)
        if not rays or not all(la.vec_dot(row, interior) < 0 for row in rows):
            raise ConeError("not full-dimensional")
        self.rows = rows
        self.open_rows = open_rows
        self.dim = d
        self.num_rows = m
        self._rays = tuple(sorted(rays))

    @classmethod
    def from_inequalities(cls, A):
        return cls(A)

    def with_open_rows(self, open_rows):
        return Cone(self.rows, open_rows)

    @property
    def ray_vectors(self):
        return self._rays

    def rays(self):
        return VCone(self._rays, self.dim)

    def membership(self, p, mode="closed"):
        if len(p) != self.dim:
            raise ConeError("point has wrong dimension")
        if mode == "closed":
            return all(la.vec_dot(row, p) <= 0 for row in self.rows)
        if mode == "interior":
            return all(la.vec_dot(row, p) < 0 for row in self.rows)
        if mode == "as_flagged":
            for i, row in enumerate(self.rows):
                value = la.vec_dot(row, p)
                if i in self.open_rows:
                    if value >= 0:
                        return False
                elif value > 0:
                    return False
            return True
        raise ConeError("unknown membership mode %r" % (mode,))

    def __eq__(self, other):
        return (isinstance(other, Cone) and self.rows == other.rows
                and self.open_rows == other.open_rows)

    def __hash__(self):
        return hash((self.rows, self.open_rows))

    def __repr__(self):
        return "Cone(%r, open_rows=%r)" % (self.rows, sorted(self.open_rows))


def _greedy_independent_rows(rows, d):
    chosen = []
    for i, row in enumerate(rows):
        if la.matrix_rank(tuple(rows[j] for j in chosen) + (row,)) > len(chosen):
            chosen.append(i)
            if len(chosen) == d:
                return chosen
    raise ConeError("not pointed")


def _extreme_rays(rows, d):
    """Double description: extreme rays of {r : rows·r <= 0}, rank(rows) = d."""
    base = _greedy_independent_rows(rows, d)
    A_b = tuple(rows[i] for i in base)
    rays = []
    for j in range(d):
        e = tuple(-1 if i == j else 0 for i in range(d))
        x = la.solve_rational(A_b, e)
        rays.append(la.rational_to_primitive_integer(x))
    processed = list(base)

    for i in range(len(rows)):
        if i in base:
            continue
        a = rows[i]
        values = [la.vec_dot(a, r) for r in rays]
        if all(v <= 0 for v in values):
            processed.append(i)
            continue
        tight = [frozenset(j for j in processed if la.vec_dot(rows[j], r) == 0)
                 for r in rays]
        keep = [r for r, v in zip(rays, values) if v <= 0]
        fresh = []
        for p, q in itertools.combinations(range(len(rays)), 2):
            vp, vq = values[p], values[q]
            if vp * vq >= 0:
                continue
            if vp > 0:
                p, q = q, p
                vp, vq = vq, vp
            # now a·rays[p] < 0 and a·rays[q] > 0
            common = tight[p] & tight[q]
            blocked = any(k not in (p, q) and common <= tight[k]
                          for k in range(len(rays)))
            if blocked:
                continue
            combo = la.vec_sub(la.vec_scale(vq, rays[p]),
                               la.vec_scale(vp, rays[q]))
            fresh.append(la.primitive_vector(combo))
        for r in fresh:
            if r not in keep:
                keep.append(r)
        rays = keep
        processed.append(i)
    return tuple(sorted(set(rays)))


# ---------------------------------------------------------------------------
# V-representation

class VCone:
    """Pointed cone spanned by primitive integer generators."""

    def __init__(self, generators, ambient_dim=None):
        if not generators:
            raise ConeError("a V-cone needs at least one generator")
        d = ambient_dim if ambient_dim is not None else len(generators[0])
        gens = []
        for g in generators:
            iv = la.as_integer_vector(g)
            if len(iv) != d:
                raise ConeError("generator has wrong dimension")
            if la.primitive_vector(iv) != iv:
                raise ConeError("generator is not primitive: %r" % (g,))
            gens.append(iv)
        self.generators = tuple(gens)
        self.ambient_dim = d
        if not _generators_pointed(self.generators, d):
            raise ConeError("not pointed")

    def __eq__(self, other):
        return (isinstance(other, VCone)
                and self.generators == other.generators
                and self.ambient_dim == other.ambient_dim)

    def __repr__(self):
        return "VCone(%r)" % (self.generators,)


def _generators_pointed(gens, d):
    # Pointed iff no nontrivial nonnegative combination of generators is 0.
    # By Caratheodory a minimal positive circuit has at most d+1 members and
    # a unique normalized coefficient vector, so small subsets suffice.
    n = len(gens)
    for size in range(2, min(n, d + 1) + 1):
        for subset in itertools.combinations(range(n), size):
            cols = [gens[i] for i in subset]
            system = la.columns_to_matrix(cols) + ((1,) * size,)
            rhs = (0,) * d + (1,)
            x = la.solve_rational(system, rhs)
            if isinstance(x, str):
                continue
            if all(v > 0 for v in x):
                return False
    return True


def cone_from_generators(vcone):
    """H-representation of a full-dimensional pointed V-cone (dual DD run)."""
    gens = vcone.generators
    d = vcone.ambient_dim
    if la.matrix_rank(gens) < d:
        raise ConeError("not full-dimensional")
    dual_rows = tuple(la.vec_neg(g) for g in gens)
    dual_rays = _extreme_rays(dual_rows, d)
    if not dual_rays:
        raise ConeError("not pointed")
    return Cone(tuple(la.vec_neg(y) for y in dual_rays))


# ---------------------------------------------------------------------------
# transformation and normalization

def transform(K, phi):
    """Image cone phi(K): H-representation A·phi^{-1}, openness preserved."""
    if phi.dim != K.dim:
        raise ConeError("map dimension does not match the cone")
    inv = la.int_inverse(phi.matrix)
    return Cone(la.mat_mul(K.rows, inv), K.open_rows)


def normalize(K):
    """Unimodular map phi with det +1 sending K strictly into the orthant.

    The image phi(K) lies in the nonnegative orthant and touches the
    coordinate hyperplanes only at the origin.  Construction: a strictly
    separating integer functional c (the negated row sum works for every
    valid cone), a lattice basis of {c·x = 0}, and a last basis vector at
    lattice distance 1 pushed far enough towards the cone; the shift bound
    is computed exactly from the ray coordinates rather than iterated.
    """
    d = K.dim
    rays = K.ray_vectors
    if all(all(x > 0 for x in r) for r in rays):
        return UnimodularMap.identity(d), K
    if d == 1:
        # The only remaining 1-d cone is {r <= 0}; SL_1(Z) = {(1)} cannot move it.
        raise ConeError(
            "a negative 1-dimensional cone cannot be normalized by a det +1 map")
    c = la.primitive_vector(la.vec_neg(la.vec_sum(K.rows, d)))
    for r in rays:
        if la.vec_dot(c, r) <= 0:
            raise ConeError("internal error: separating functional failed")
    # rows of Lc form a lattice basis adapted to c: the first row pairs to
    # +-1 with c, the remaining rows span the hyperplane {c.x = 0}
    Lc, _ = la.row_reduce_unimodular(la.columns_to_matrix((c,)))
    v = Lc[0]
    if la.vec_dot(v, c) == -1:
        v = la.vec_neg(v)
    hyper = [Lc[i] for i in range(1, d)]
    if la.vec_dot(v, c) != 1 or any(la.vec_dot(b, c) != 0 for b in hyper):
        raise ConeError("internal error: dual basis construction failed")
    if la.det(la.columns_to_matrix(tuple(hyper) + (v,))) == -1:
        hyper[0] = la.vec_neg(hyper[0])
    U = la.columns_to_matrix(tuple(hyper) + (v,))
    # coordinates of each ray in the basis (hyper..., v)
    shift = 1
    for r in rays:
        coords = la.as_integer_vector(la.solve_rational(U, r))
        gamma = coords[-1]
        for beta in coords[:-1]:
            need = -((beta - 1) // gamma)  # smallest M with beta + gamma*M >= 1
            if need > shift:
                shift = need
    v_far = la.vec_sub(v, la.vec_scale(shift, la.vec_sum(hyper, d)))
    U_far = la.columns_to_matrix(tuple(hyper) + (v_far,))
    phi = UnimodularMap(la.int_inverse(U_far))
    image = transform(K, phi)
    for r in image.ray_vectors:
        if any(x <= 0 for x in r):
            raise ConeError("internal error: normalization postcondition failed")
    return phi, image


# ---------------------------------------------------------------------------
# half-open simplicial cones

class HalfOpenSimplicialCone:
    """Simplicial cone with a set of excluded facets.

    ``excluded`` holds generator indices i whose opposite facet (the one
    spanned by the other generators) is removed: membership requires the
    barycentric coordinate of generator i to be strictly positive, and the
    fundamental parallelepiped uses the range (0,1] instead of [0,1) there.
    """

    # bounding-box scan is preferred for the parallelepiped until the box
    # outgrows the lattice index by this factor, then the coset walk is used
    _BOX_FACTOR = 32
    _BOX_FLOOR = 4096

    def __init__(self, generators, excluded=()):
        if not generators:
            raise ConeError("need at least one generator")
        gens = tuple(la.as_integer_vector(g) for g in generators)
        d = len(gens[0])
        k = len(gens)
        for g in gens:
            if la.primitive_vector(g) != g:
                raise ConeError("generator is not primitive: %r" % (g,))
        if la.matrix_rank(gens) < k:
            raise ConeError("generators are linearly dependent")
        excluded = frozenset(excluded)
        for i in excluded:
            if not (0 <= i < k):
                raise ConeError("excluded index out of range")
        self.generators = gens
        self.excluded = excluded
        self.ambient_dim = d
        self.num_generators = k
        G = la.columns_to_matrix(gens)
        self._G = G
        self._L, self._S, self._R = la.integer_diagonal_form(G)
        self._diag = tuple(self._S[i][i] for i in range(k))
        self.index = 1
        for s in self._diag:
            self.index *= s
        self._points = None

    def flipped(self):
        """Complementary openness: every excluded facet included and vice versa."""
        complement = frozenset(range(self.num_generators)) - self.excluded
        return HalfOpenSimplicialCone(self.generators, complement)

    def barycentric(self, p):
        """Solve sum(lambda_i * g_i) = p; None when p is outside the span."""
        if len(p) != self.ambient_dim:
            raise ConeError("point has wrong dimension")
        y = la.mat_vec(self._L, p)
        k = self.num_generators
        for i in range(k, self.ambient_dim):
            if y[i] != 0:
                return None
        z = tuple(Fraction(y[i], self._diag[i]) for i in range(k))
        return la.mat_vec(self._R, z)

    def contains(self, p):
        lam = self.barycentric(p)
        if lam is None:
            return False
        for i, value in enumerate(lam):
            if i in self.excluded:
                if value <= 0:
                    return False
            elif value < 0:
                return False
        return True

    def parallelepiped_points(self):
        """Lattice points of the half-open fundamental parallelepiped."""
        if self._points is not None:
            return self._points
        k = self.num_generators
        lows = tuple(sum(min(0, g[c]) for g in self.generators)
                     for c in range(self.ambient_dim))
        highs = tuple(sum(max(0, g[c]) for g in self.generators)
                      for c in range(self.ambient_dim))
        box = 1
        for lo, hi in zip(lows, highs):
            box *= hi - lo + 1
        points = []
        if box <= max(self._BOX_FLOOR, self._BOX_FACTOR * self.index):
            for p in itertools.product(*(range(lo, hi + 1)
                                         for lo, hi in zip(lows, highs))):
                lam = self.barycentric(p)
                if lam is None:
                    continue
                if self._lambda_in_parallelepiped(lam):
                    points.append(p)
        else:
            # walk the coset representatives of Z^span / G·Z^k
            Linv = la.int_inverse(self._L)
            basis = [tuple(Linv[i][j] for i in range(self.ambient_dim))
                     for j in range(k)]
            for c in itertools.product(*(range(s) for s in self._diag)):
                rep = (0,) * self.ambient_dim
                for coeff, b in zip(c, basis):
                    rep = la.vec_add(rep, la.vec_scale(coeff, b))
                lam = self.barycentric(rep)
                shifted = []
                for i, value in enumerate(lam):
                    if i in self.excluded:
                        offset = -(-value.numerator // value.denominator) - 1
                    else:
                        offset = value.numerator // value.denominator
                    shifted.append(value - offset)
                point = (0,) * self.ambient_dim
                for value, g in zip(shifted, self.generators):
                    point = la.vec_add(point, la.vec_scale(value, g))
                points.append(la.as_integer_vector(point))
        points = tuple(sorted(set(points)))
        if len(points) != self.index:
            raise ConeError(
                "internal error: parallelepiped count %d != index %d"
                % (len(points), self.index))
        self._points = points
        return points

    def _lambda_in_parallelepiped(self, lam):
        for i, value in enumerate(lam):
            if i in self.excluded:
                if not (0 < value <= 1):
                    return False
            elif not (0 <= value < 1):
                return False
        return True

    def __eq__(self, other):
        return (isinstance(other, HalfOpenSimplicialCone)
                and self.generators == other.generators
                and self.excluded == other.excluded)

    def __hash__(self):
        return hash((self.generators, self.excluded))

    def __repr__(self):
        return ("HalfOpenSimplicialCone(%r, excluded=%r)"
                % (self.generators, sorted(self.excluded)))


# ---------------------------------------------------------------------------
# triangulation

def _outward_functional(vecs, facet, opposite):
    """Primitive integer functional vanishing on the facet, negative inside."""
    h = la.primitive_kernel_vector(tuple(vecs[i] for i in facet))
    if la.vec_dot(h, vecs[opposite]) > 0:
        h = la.vec_neg(h)
    return h


def _beneath_beyond(vecs, k):
    """Placing triangulation of a pointed full-rank vector configuration."""
    if k == 1:
        return [(0,)]
    independent = []
    for i, v in enumerate(vecs):
        if la.matrix_rank(tuple(vecs[j] for j in independent) + (v,)) > len(independent):
            independent.append(i)
            if len(independent) == k:
                break
    cells = [tuple(independent)]
    placed = set(independent)
    for idx in range(len(vecs)):
        if idx in placed:
            continue
        placed.add(idx)
        facet_owner = {}
        for cell in cells:
            for j in range(k):
                facet = cell[:j] + cell[j + 1:]
                facet_owner.setdefault(facet, []).append(cell[j])
        new_cells = []
        for facet, opposites in facet_owner.items():
            if len(opposites) != 1:
                continue
            h = _outward_functional(vecs, facet, opposites[0])
            if la.vec_dot(h, vecs[idx]) > 0:
                new_cells.append(tuple(sorted(facet + (idx,))))
        cells.extend(new_cells)
    return sorted(cells)


def _perturbed_reference(vecs, functionals, k):
    """Sum of generators plus a tiny lexicographic perturbation (exact)."""
    total = la.vec_sum(vecs, k)
    M = 2
    for h in functionals:
        M = max(M, sum(abs(x) for x in h) + 2)
    eps = tuple(Fraction(1, M ** (i + 1)) for i in range(k))
    return la.vec_add(tuple(Fraction(x) for x in total), eps)


def triangulate_halfopen(vcone, reference="auto"):
    """Half-open simplicial pieces that partition the closed cone.

    Every lattice point of the cone lies in exactly one piece.  Internal
    walls are assigned to the piece whose side contains the reference
    point; boundary facets stay closed.  The reference must be a generic
    interior point; "auto" constructs one from the generator sum with a
    lexicographic perturbation too small to cross any wall.
    """
    gens = vcone.generators
    d = vcone.ambient_dim
    k = la.matrix_rank(gens)

    # project onto pivot coordinates so the configuration is full-rank
    _, _, pivots = la.rref(gens)
    proj = lambda v: tuple(v[c] for c in pivots)
    pvecs = [proj(g) for g in gens]

    cells = _beneath_beyond(pvecs, k)
    if k == 1:
        return (HalfOpenSimplicialCone((gens[cells[0][0]],), ()),)

    facet_count = {}
    for cell in cells:
        for j in range(k):
            facet = cell[:j] + cell[j + 1:]
            facet_count[facet] = facet_count.get(facet, 0) + 1

    inward = {}
    functionals = []
    for cell in cells:
        for j in range(k):
            facet = cell[:j] + cell[j + 1:]
            h = la.vec_neg(_outward_functional(pvecs, facet, cell[j]))
            inward[(cell, j)] = h
            functionals.append(h)

    if reference == "auto":
        w = _perturbed_reference(pvecs, functionals, k)
        user_supplied = False
    else:
        if len(reference) != d:
            raise ConeError("reference point has wrong dimension")
        if k != d:
            raise ConeError("explicit reference requires a full-dimensional cone")
        w = tuple(Fraction(x) for x in proj(reference))
        user_supplied = True

    pieces = []
    for cell in cells:
        excluded = set()
        for j in range(k):
            facet = cell[:j] + cell[j + 1:]
            h = inward[(cell, j)]
            value = la.vec_dot(h, w)
            if facet_count[facet] == 1:
                # boundary facet: the reference must be strictly inside
                if value <= 0:
                    if user_supplied:
                        raise ConeError("reference point is not interior"
                                        if value < 0 else "non-generic reference")
                    raise ConeError("internal error: auto reference not interior")
            else:
                if value == 0:
                    if user_supplied:
                        raise ConeError("non-generic reference")
                    raise ConeError("internal error: auto reference not generic")
                if value < 0:
                    excluded.add(j)
        pieces.append(HalfOpenSimplicialCone(
            tuple(gens[i] for i in cell), frozenset(excluded)))
    return tuple(pieces)
