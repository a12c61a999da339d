"""
Exact Geometry Module
Rational scalars, points, determinant predicates, hyperplanes and
convex containment tests. No floating point anywhere.
"""

import logging
import operator
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from numbers import Rational
from typing import List, Optional, Sequence, Tuple

from src.errors import DegenerateInputError, InstanceFormatError

Scalar = Fraction
Point = Tuple[Fraction, ...]


# ========================================
# SCALARS AND POINTS
# ========================================

def to_scalar(value) -> Fraction:
    """
    Coerce an int, Fraction or "p/q" string into an exact Scalar.
    Floats are refused: they carry binary rounding the predicates cannot see.
    """
    if isinstance(value, bool):
        raise InstanceFormatError(f"boolean is not a scalar: {value!r}")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InstanceFormatError(f"bad scalar {value!r}: {e}") from e
    raise InstanceFormatError(f"unsupported scalar type {type(value).__name__}: {value!r}")


def format_scalar(value: Fraction):
    """Integers stay ints; everything else becomes "p/q" in lowest terms."""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def make_point(coords: Sequence) -> Point:
    return tuple(to_scalar(c) for c in coords)


def sub(p: Sequence[Fraction], q: Sequence[Fraction]) -> Point:
    return tuple(a - b for a, b in zip(p, q))


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def point_on_ray(origin: Point, through: Point, lam: Fraction) -> Point:
    """origin + lam * (through - origin)"""
    return tuple(o + lam * (t - o) for o, t in zip(origin, through))


# ========================================
# INSTANCE
# ========================================

@dataclass(frozen=True)
class Instance:
    """
    A point set S in R^d together with a query point z outside S.
    Points are addressed by their index in `points`.
    """
    d: int
    points: Tuple[Point, ...]
    z: Point

    def __post_init__(self):
        if self.d < 1:
            raise InstanceFormatError(f"dimension must be positive, got {self.d}")
        if not self.points:
            raise InstanceFormatError("point set S must be nonempty")
        if len(self.z) != self.d:
            raise InstanceFormatError(f"z has {len(self.z)} coordinates, expected {self.d}")
        for i, p in enumerate(self.points):
            if len(p) != self.d:
                raise InstanceFormatError(f"point {i} has {len(p)} coordinates, expected {self.d}")
        if len(set(self.points)) != len(self.points):
            raise InstanceFormatError("point set S contains duplicates")
        if self.z in self.points:
            raise InstanceFormatError("z must not be a point of S")

    @classmethod
    def from_coordinates(cls, d, points, z):
        return cls(d=d, points=tuple(make_point(p) for p in points), z=make_point(z))

    @property
    def n(self) -> int:
        return len(self.points)

    def select(self, indices) -> List[Point]:
        return [self.points[i] for i in indices]


# ========================================
# LINEAR ALGEBRA OVER THE RATIONALS
# ========================================

def det(rows: Sequence[Sequence]) -> Fraction:
    """
    Exact determinant by Bareiss elimination.

    Every division in the recurrence is exact, so entry size stays bounded by
    the minors of the input rather than growing with each elimination step.
    Integer matrices run on plain ints with floor division.
    """
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise DegenerateInputError("det needs a nonempty square matrix")
    m = [[Fraction(v) for v in r] for r in rows]
    if all(v.denominator == 1 for r in m for v in r):
        return Fraction(_bareiss([[v.numerator for v in r] for r in m], operator.floordiv))
    return _bareiss(m, operator.truediv)


def _bareiss(m: List[list], divide) -> Fraction:
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            factor = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = divide(row_i[j] * pivot - factor * row_k[j], prev)
        prev = pivot
    return sign * m[n - 1][n - 1]


def _rref(rows: Sequence[Sequence]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return m, []
    n_cols = len(m[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == len(m):
            break
        pivot_row = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def matrix_rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(_rref(rows)[1])


def solve_unique(rows: Sequence[Sequence], rhs: Sequence) -> Optional[List[Fraction]]:
    """
    Solve rows * x = rhs exactly. Returns None when the system is
    inconsistent or the solution is not unique.
    """
    n_cols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = _rref(aug)
    if n_cols in pivots or len(pivots) < n_cols:
        return None
    solution = [Fraction(0)] * n_cols
    for r, c in enumerate(pivots):
        solution[c] = reduced[r][-1]
    return solution


def affine_rank(X: Sequence[Point]) -> int:
    """dim R(X): rank of the difference vectors x - x0."""
    if not X:
        raise DegenerateInputError("affine_rank of an empty set")
    x0 = X[0]
    return matrix_rank([sub(x, x0) for x in X[1:]])


def orientation(P: Sequence[Point]) -> Fraction:
    """det[p1 - p0, ..., pd - p0] for d+1 points in R^d."""
    p0 = P[0]
    return det([sub(p, p0) for p in P[1:]])


# ========================================
# HYPERPLANES
# ========================================

class Side(IntEnum):
    NEGATIVE = -1
    ON = 0
    POSITIVE = 1


@dataclass(frozen=True)
class Hyperplane:
    """
    The functional p -> normal . p + offset, stored with integer
    coefficients, overall gcd 1 and first nonzero coefficient positive.
    """
    normal: Tuple[int, ...]
    offset: int

    @classmethod
    def canonical(cls, normal: Sequence, offset) -> 'Hyperplane':
        coeffs = [Fraction(c) for c in normal] + [Fraction(offset)]
        if all(c == 0 for c in coeffs[:-1]):
            raise DegenerateInputError("hyperplane normal is zero")
        scale = lcm(*(c.denominator for c in coeffs))
        ints = [int(c * scale) for c in coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        ints = [v // g for v in ints]
        lead = next(v for v in ints if v != 0)
        if lead < 0:
            ints = [-v for v in ints]
        return cls(normal=tuple(ints[:-1]), offset=ints[-1])

    @property
    def dimension(self) -> int:
        return len(self.normal)

    def evaluate(self, p: Sequence[Fraction]) -> Fraction:
        return dot(self.normal, p) + self.offset


def hyperplane_through(T: Sequence[Point]) -> Hyperplane:
    """
    Canonical hyperplane R(T) through d points spanning a (d-1)-flat.
    The normal is the generalized cross product of the difference vectors.
    """
    if not T:
        raise DegenerateInputError("hyperplane_through needs points")
    d = len(T[0])
    if len(T) != d:
        raise DegenerateInputError(f"hyperplane in R^{d} needs {d} points, got {len(T)}")
    t0 = T[0]
    if d == 1:
        return Hyperplane.canonical((1,), -t0[0])
    diffs = [sub(t, t0) for t in T[1:]]
    if matrix_rank(diffs) != d - 1:
        raise DegenerateInputError("points do not span a hyperplane")
    normal = []
    for i in range(d):
        minor = [row[:i] + row[i + 1:] for row in diffs]
        normal.append((-1) ** i * det(minor))
    return Hyperplane.canonical(normal, -dot(normal, t0))


def side(H: Hyperplane, p: Sequence[Fraction]) -> Side:
    if len(p) != H.dimension:
        raise DegenerateInputError(f"point of dimension {len(p)} against hyperplane in R^{H.dimension}")
    value = H.evaluate(p)
    if value > 0:
        return Side.POSITIVE
    if value < 0:
        return Side.NEGATIVE
    return Side.ON


# ========================================
# CONTAINMENT PREDICATES
# ========================================

def simplex_contains_interior(T: Sequence[Point], z: Point) -> bool:
    """
    True iff the d+1 points of T span a d-simplex with z strictly inside.

    Replacing vertex i by z scales the orientation by the i-th barycentric
    coordinate of z, so z is interior exactly when every replacement keeps
    the nonzero orientation sign of T.
    """
    d = len(z)
    if len(T) != d + 1:
        raise DegenerateInputError(f"a simplex in R^{d} has {d + 1} vertices, got {len(T)}")
    base = orientation(T)
    if base == 0:
        return False
    for i in range(d + 1):
        replaced = list(T)
        replaced[i] = z
        o = orientation(replaced)
        if o == 0 or (o > 0) != (base > 0):
            return False
    return True


def _phase_one_feasible(rows: Sequence[Sequence], rhs: Sequence) -> bool:
    """
    Exact phase-one simplex: is {x >= 0 : rows * x = rhs} nonempty?

    Artificial columns are kept implicit and dropped once they leave the
    basis. Bland's rule on both choices guarantees termination.
    """
    m = len(rows)
    if m == 0:
        return True
    n = len(rows[0])
    tableau = []
    for row, b in zip(rows, rhs):
        row = [Fraction(v) for v in row]
        b = Fraction(b)
        if b < 0:
            row = [-v for v in row]
            b = -b
        tableau.append(row + [b])
    basis = [n + i for i in range(m)]

    while True:
        art_rows = [i for i, bv in enumerate(basis) if bv >= n]
        if all(tableau[i][n] == 0 for i in art_rows):
            return True
        entering = None
        for j in range(n):
            if j in basis:
                continue
            if sum(tableau[i][j] for i in art_rows) > 0:
                entering = j
                break
        if entering is None:
            return False
        best = None
        for i in range(m):
            a = tableau[i][entering]
            if a > 0:
                key = (tableau[i][n] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        r = best[1]
        inv = 1 / tableau[r][entering]
        tableau[r] = [v * inv for v in tableau[r]]
        for i in range(m):
            if i != r and tableau[i][entering] != 0:
                f = tableau[i][entering]
                tableau[i] = [a - f * b for a, b in zip(tableau[i], tableau[r])]
        basis[r] = entering


def in_hull(X: Sequence[Point], z: Point) -> bool:
    """
    z in conv(X), decided as exact feasibility of
    sum(l_i x_i) = z, sum(l_i) = 1, l >= 0.
    """
    if not X:
        raise DegenerateInputError("in_hull of an empty set")
    d = len(z)
    rows = [[x[j] for x in X] for j in range(d)]
    rows.append([1] * len(X))
    return _phase_one_feasible(rows, list(z) + [1])


def barycentric(T: Sequence[Point], p: Point) -> Optional[List[Fraction]]:
    """Affine coordinates of p w.r.t. affinely independent T, or None if p is off R(T)."""
    d = len(p)
    rows = [[t[j] for t in T] for j in range(d)]
    rows.append([1] * len(T))
    return solve_unique(rows, list(p) + [1])


def in_hull_caratheodory(X: Sequence[Point], z: Point) -> bool:
    """Subset scan over affinely independent subsets of size <= d+1."""
    if not X:
        raise DegenerateInputError("in_hull of an empty set")
    d = len(z)
    for k in range(1, min(len(X), d + 1) + 1):
        for T in combinations(X, k):
            if affine_rank(T) != k - 1:
                continue
            lam = barycentric(T, z)
            if lam is not None and all(v >= 0 for v in lam):
                return True
    return False


def in_interior(X: Sequence[Point], z: Point) -> bool:
    """
    z in the full-dimensional interior of conv(X).

    Equivalent to the supporting-halfspace definition: X spans R^d and the
    vectors x - z positively span R^d, i.e. sum(l_i (x_i - z)) = 0 has a
    solution with every l_i >= 1.
    """
    if not X:
        raise DegenerateInputError("in_interior of an empty set")
    d = len(z)
    if len(X) <= d or affine_rank(X) < d:
        return False
    vectors = [sub(x, z) for x in X]
    rows = [[v[j] for v in vectors] for j in range(d)]
    rhs = [-sum((v[j] for v in vectors), Fraction(0)) for j in range(d)]
    return _phase_one_feasible(rows, rhs)


def interior_by_simplex_scan(X: Sequence[Point], z: Point) -> bool:
    d = len(z)
    return any(simplex_contains_interior(T, z) for T in combinations(X, d + 1))


# ========================================
# AFFINE CHARTS
# ========================================

class AffineChart:
    """
    Parametric coordinates on the affine hull of a point set: a point y of
    R(X) gets the unique c with y = origin + sum(c_j b_j). Used to recurse
    into facets without leaving exact arithmetic.
    """

    def __init__(self, X: Sequence[Point]):
        if not X:
            raise DegenerateInputError("chart of an empty set")
        self.origin = X[0]
        self.basis = []
        for x in X[1:]:
            candidate = self.basis + [sub(x, self.origin)]
            if matrix_rank(candidate) == len(candidate):
                self.basis = candidate
        self.dimension = len(self.basis)
        logging.debug(f"affine chart of {len(X)} points has dimension {self.dimension}")

    def coordinates(self, y: Sequence[Fraction]) -> Point:
        if self.dimension == 0:
            if tuple(y) != tuple(self.origin):
                raise DegenerateInputError("point is not on the chart")
            return ()
        ambient = len(self.origin)
        rows = [[b[j] for b in self.basis] for j in range(ambient)]
        c = solve_unique(rows, sub(y, self.origin))
        if c is None:
            raise DegenerateInputError("point is not on the affine hull of the chart")
        return tuple(c)
