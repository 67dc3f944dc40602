"""Seeded random corpora used by the property and acceptance suites.

Cones: integer inequality matrices with entries in [-5, 5] whose cone is
pointed, full-dimensional, and contained in the nonnegative orthant (so
the series machinery applies without a normalization detour).  Half of
the draws are plain uniform matrices, half start from a negated diagonal
plus uniform noise; the latter keeps dimension 3 and 4 from being starved
by rejection.  Everything is deterministic for a fixed seed.
"""

import random
from fractions import Fraction

from .cone import Cone, ConeError
from .ehrhart import RationalPolytope, PolytopeError


def random_orthant_cones(count, seed, dims=(1, 2, 3, 4), entry_bound=5,
                         max_attempts=500000):
    rng = random.Random(seed)
    cones = []
    attempts = 0
    while len(cones) < count:
        attempts += 1
        if attempts > max_attempts:
            raise RuntimeError("cone corpus generation did not converge")
        # cycle the target dimension so rejection cannot starve the large ones
        d = dims[len(cones) % len(dims)]
        m = d + rng.randrange(0, 3)
        if rng.random() < 0.5:
            rows = [[rng.randint(-entry_bound, entry_bound) for _ in range(d)]
                    for _ in range(m)]
        else:
            rows = []
            for i in range(m):
                row = [rng.randint(-2, 2) for _ in range(d)]
                row[i % d] -= rng.randint(1, entry_bound - 2)
                rows.append([max(-entry_bound, min(entry_bound, x)) for x in row])
        if any(all(x == 0 for x in row) for row in rows):
            continue
        try:
            K = Cone(tuple(tuple(row) for row in rows))
        except ConeError:
            continue
        if any(any(x < 0 for x in r) for r in K.ray_vectors):
            continue
        cones.append(K)
    return cones


def random_rational_polytopes(count, seed, dims=(1, 2, 3), max_attempts=200000):
    """Random full-dimensional rational polytopes with vertex denominators <= 3.

    Each polytope mixes denominator 1 with a single other denominator (2 or
    3), keeping the quasi-polynomial period at most 3 so that brute-force
    validation stays cheap.
    """
    rng = random.Random(seed)
    polytopes = []
    attempts = 0
    while len(polytopes) < count:
        attempts += 1
        if attempts > max_attempts:
            raise RuntimeError("polytope corpus generation did not converge")
        d = dims[rng.randrange(len(dims))]
        den = rng.choice((2, 3))
        npoints = d + 1 + rng.randrange(0, 3)
        points = []
        for _ in range(npoints):
            points.append(tuple(
                Fraction(rng.randint(-4, 4), rng.choice((1, den)))
                for _ in range(d)))
        try:
            P = RationalPolytope(points)
        except PolytopeError:
            continue
        polytopes.append(P)
    return polytopes
