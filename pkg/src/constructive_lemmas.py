"""
Constructive Lemmas Module
Certificate-producing constructions: ray-shooting simplex finder, facet
certificates, separation certificates, hull facets and the good vertex.
Every certificate is re-checked with the exact predicates before it is
returned; a failed re-check raises CertificateError.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from src.errors import CertificateError, DegenerateInputError, GeneralPositionError, PreconditionError
from src.exact_geometry import (
    AffineChart, Hyperplane, Instance, Point, Side, affine_rank, dot, hyperplane_through, in_hull,
    in_interior, point_on_ray, side, simplex_contains_interior, solve_unique, sub,
)
from src.models import (
    FacetCertificate, GoodVertexCertificate, HyperplaneRecord, SeparationCertificate, SimplexCertificate,
)
from src.position_analysis import z_position_witness


@dataclass(frozen=True)
class HullFacet:
    vertices: Tuple[int, ...]  # positions of the input points lying on the facet hyperplane
    hyperplane: Hyperplane
    inner: Side                # side holding the rest of the points

    def outward(self, p: Sequence[Fraction]) -> Fraction:
        """Signed value that is <= 0 on conv and > 0 beyond this facet."""
        return -int(self.inner) * self.hyperplane.evaluate(p)


# ========================================
# HULL STRUCTURE
# ========================================

def hull_facets(points: Sequence[Point]) -> List[HullFacet]:
    """
    Facets of conv(points) by side scan: every d-subset spanning a
    hyperplane with all points on one closed side, merged by hyperplane.
    """
    if not points:
        raise DegenerateInputError("hull of an empty set")
    d = len(points[0])
    if affine_rank(points) != d:
        raise DegenerateInputError(f"hull facets need a full-dimensional set in R^{d}")
    seen = {}
    for T in combinations(range(len(points)), d):
        pts = [points[i] for i in T]
        if affine_rank(pts) != d - 1:
            continue
        H = hyperplane_through(pts)
        if H in seen:
            continue
        sides = [side(H, p) for p in points]
        if Side.POSITIVE in sides and Side.NEGATIVE in sides:
            seen[H] = None
            continue
        inner = Side.POSITIVE if Side.POSITIVE in sides else Side.NEGATIVE
        seen[H] = HullFacet(tuple(i for i, s in enumerate(sides) if s == Side.ON), H, inner)
    return sorted((f for f in seen.values() if f is not None), key=lambda f: f.vertices)


def hull_vertices(points: Sequence[Point]) -> List[int]:
    """Positions of the points that are not in the hull of the others."""
    if len(points) == 1:
        return [0]
    return [
        i for i, p in enumerate(points)
        if not in_hull([q for j, q in enumerate(points) if j != i], p)
    ]


def _unique_extreme(candidates, largest: bool, what: str):
    if not candidates:
        raise PreconditionError(f"the ray meets no facet ({what})")
    pick = max if largest else min
    best = pick(lam for lam, _ in candidates)
    hits = [f for lam, f in candidates if lam == best]
    if len(hits) > 1:
        # t lies on a face of dimension <= d-2: the line meets a low-dimensional span
        raise GeneralPositionError(f"ray {what} point lies on {len(hits)} facets at once")
    return best, hits[0]


def ray_exit(facets: Sequence[HullFacet], p: Point, q: Point) -> Tuple[Fraction, HullFacet]:
    """Largest lam with p + lam (q - p) still in the polytope, and the facet hit there."""
    candidates = []
    for f in facets:
        gp, gq = f.outward(p), f.outward(q)
        if gq > gp:
            candidates.append((-gp / (gq - gp), f))
    return _unique_extreme(candidates, largest=False, what='exit')


def ray_entry(facets: Sequence[HullFacet], s: Point, q: Point) -> Tuple[Fraction, HullFacet]:
    """Smallest lam with s + lam (q - s) in the polytope, for s outside it."""
    candidates = []
    exit_bound = None
    for f in facets:
        gs, gq = f.outward(s), f.outward(q)
        if gq < gs:
            if gs > 0:
                candidates.append((gs / (gs - gq), f))
        elif gq > gs:
            bound = -gs / (gq - gs)
            exit_bound = bound if exit_bound is None else min(exit_bound, bound)
        elif gs > 0:
            raise PreconditionError("the ray from s runs parallel outside a facet of the hull")
    lam, facet = _unique_extreme(candidates, largest=True, what='entry')
    if exit_bound is not None and exit_bound < lam:
        raise PreconditionError("the ray from s misses the hull")
    return lam, facet


# ========================================
# RAY-SHOOTING SIMPLEX
# ========================================

def _containing_simplex(points: Sequence[Point], labels: Sequence[int], query: Point) -> List[int]:
    """
    Labels of a simplex among `points` whose relative interior holds `query`.

    Works in parametric coordinates on R(points): shoot from the lowest
    label through the query, find the exit facet, recurse into it.
    """
    chart = AffineChart(points)
    if chart.dimension == 0:
        return [labels[0]]
    local = [chart.coordinates(p) for p in points]
    q = chart.coordinates(query)
    if not in_interior(local, q):
        raise GeneralPositionError(
            f"query is not in the relative interior of a {chart.dimension}-dimensional face"
        )
    start = min(range(len(labels)), key=labels.__getitem__)
    lam, facet = ray_exit(hull_facets(local), local[start], q)
    t = point_on_ray(points[start], query, lam)
    members = facet.vertices
    logging.debug(f"ray from {labels[start]} exits through {[labels[i] for i in members]} at lam={lam}")
    inner = _containing_simplex([points[i] for i in members], [labels[i] for i in members], t)
    return inner + [labels[start]]


def find_containing_simplex(P: Sequence[int], inst: Instance) -> SimplexCertificate:
    """d+1 indices of P spanning a simplex with z strictly inside."""
    P = sorted(P)
    if not P or not in_interior(inst.select(P), inst.z):
        raise PreconditionError("z is not in the interior of conv(P)")
    vertices = sorted(_containing_simplex(inst.select(P), P, inst.z))
    if len(vertices) != inst.d + 1 or not simplex_contains_interior(inst.select(vertices), inst.z):
        raise CertificateError(f"ray-shooting simplex {vertices} does not contain z in its interior")
    return SimplexCertificate(vertices=vertices, verified=True)


# ========================================
# SEPARATION
# ========================================

def is_facet_hyperplane_separating(H: Hyperplane, A: Sequence[int], inst: Instance) -> bool:
    """
    H holds d affinely independent points of A, A lies on one closed side
    and z strictly on the other.
    """
    z_side = side(H, inst.z)
    if z_side == Side.ON:
        return False
    on = []
    for i in A:
        s = side(H, inst.points[i])
        if s == z_side:
            return False
        if s == Side.ON:
            on.append(inst.points[i])
    return len(on) >= inst.d and affine_rank(on) == inst.d - 1


def _separates(H: Hyperplane, A: Sequence[int], inst: Instance) -> bool:
    z_side = side(H, inst.z)
    return z_side != Side.ON and all(side(H, inst.points[i]) != z_side for i in A)


def _hyperplane_containing_flat(chart: AffineChart, z: Point) -> Hyperplane:
    """A hyperplane containing R(chart) but not z: normal is z - a0 minus its projection."""
    w = sub(z, chart.origin)
    normal = w
    if chart.basis:
        gram = [[dot(b, c) for c in chart.basis] for b in chart.basis]
        coeffs = solve_unique(gram, [dot(b, w) for b in chart.basis])
        normal = tuple(
            wj - sum((c * b[j] for c, b in zip(coeffs, chart.basis)), Fraction(0))
            for j, wj in enumerate(w)
        )
    if all(v == 0 for v in normal):
        raise GeneralPositionError("z lies on the affine hull of A")
    return Hyperplane.canonical(normal, -dot(normal, chart.origin))


def separating_hyperplane(A: Sequence[int], inst: Instance) -> SeparationCertificate:
    """A hyperplane with all of A on one closed side and z strictly on the other."""
    A = sorted(A)
    d = inst.d
    pts = inst.select(A)
    if A and in_interior(pts, inst.z):
        raise PreconditionError(f"{A} is z-containing, nothing separates it from z")
    if not A:
        H = Hyperplane.canonical((1,) + (0,) * (d - 1), -(inst.z[0] + 1))
    elif affine_rank(pts) == d:
        outside = [f for f in hull_facets(pts) if f.outward(inst.z) > 0]
        if not outside:
            raise GeneralPositionError("z lies on the boundary of conv(A)")
        H = outside[0].hyperplane
    else:
        H = _hyperplane_containing_flat(AffineChart(pts), inst.z)
    if not _separates(H, A, inst):
        raise CertificateError(f"hyperplane {H} does not separate {A} from z")
    incident = [i for i in A if side(H, inst.points[i]) == Side.ON]
    return SeparationCertificate(A=A, hyperplane=HyperplaneRecord.from_hyperplane(H, incident=incident))


# ========================================
# FACET CERTIFICATE
# ========================================

def is_maximal_avoiding(A: Sequence[int], inst: Instance) -> bool:
    if A and in_interior(inst.select(A), inst.z):
        return False
    rest = [i for i in range(inst.n) if i not in set(A)]
    return all(in_interior(inst.select(list(A) + [x]), inst.z) for x in rest)


def facet_certificate(A: Sequence[int], s: int, inst: Instance, checked: bool = False,
                      facets: Optional[List[HullFacet]] = None) -> FacetCertificate:
    """
    T subset of A with |T| = d on a facet of conv(A) such that conv(T + s)
    is a d-simplex around z and R(T) separates A from z.

    The ray from s through z first meets conv(A) at a point t in the
    relative interior of a facet; the simplex finder run inside that facet
    around t yields T.

    `facets` may pass in hull_facets of the points of A, in the order of
    sorted(A); `checked` skips the maximal-avoiding preconditions.
    """
    A = sorted(A)
    d = inst.d
    if s in A:
        raise PreconditionError(f"s = {s} must lie outside A")
    if not checked:
        if not in_interior(list(inst.points), inst.z):
            raise PreconditionError("S is z-avoiding; facet certificates need a z-containing S")
        if not is_maximal_avoiding(A, inst):
            raise PreconditionError(f"{A} is not a maximal z-avoiding set")

    pts = inst.select(A)
    s_pt = inst.points[s]
    rank = affine_rank(pts)
    if rank == d:
        lam, facet = ray_entry(hull_facets(pts) if facets is None else facets, s_pt, inst.z)
        face = [A[i] for i in facet.vertices]
    elif rank == d - 1:
        basis = [pts[0]]
        for p in pts[1:]:
            if affine_rank(basis + [p]) == len(basis):
                basis.append(p)
        H = hyperplane_through(basis)
        gs, gz = H.evaluate(s_pt), H.evaluate(inst.z)
        if gs == gz:
            raise GeneralPositionError("the line through s and z is parallel to R(A)")
        lam = gs / (gs - gz)
        face = A
    else:
        raise PreconditionError(f"conv(A) has dimension {rank} < d - 1")
    if lam <= 1:
        raise CertificateError(f"ray meets conv(A) at lam={lam}, not beyond z")

    t = point_on_ray(s_pt, inst.z, lam)
    T = sorted(_containing_simplex(inst.select(face), face, t))
    H = hyperplane_through(inst.select(T))
    if (len(T) != d or not set(T) <= set(A)
            or not simplex_contains_interior(inst.select(T + [s]), inst.z)
            or not is_facet_hyperplane_separating(H, A, inst)):
        raise CertificateError(f"facet certificate T={T} for A={A}, s={s} failed its re-check")
    incident = [i for i in range(inst.n) if side(H, inst.points[i]) == Side.ON]
    return FacetCertificate(T=T, s=s, hyperplane=HyperplaneRecord.from_hyperplane(H, incident=incident))


# ========================================
# GOOD VERTEX
# ========================================

def _verify_good_vertex(inst: Instance, V, simplex, H: Hyperplane, u: int, hull_planes) -> bool:
    on_simplex = [i for i in simplex if side(H, inst.points[i]) == Side.ON]
    rest = [i for i in range(inst.n) if i != u]
    return (
        set(simplex) <= set(V)
        and simplex_contains_interior(inst.select(simplex), inst.z)
        and H in hull_planes
        and len(on_simplex) == inst.d
        and side(H, inst.points[u]) == Side.ON
        and in_interior(inst.select(rest), inst.z)
    )


def good_vertex(inst: Instance) -> GoodVertexCertificate:
    """
    A simplex around z on hull vertices sharing a facet hyperplane H with
    conv(S), and a point u on H whose deletion leaves S z-containing.
    """
    d = inst.d
    if inst.n < d + 2:
        raise PreconditionError(f"good vertex needs |S| >= d + 2 = {d + 2}")
    S = list(range(inst.n))
    if not in_interior(inst.select(S), inst.z):
        raise PreconditionError("S is z-avoiding")
    witness = z_position_witness(inst)
    if witness is not None:
        raise GeneralPositionError(f"z lies on R({list(witness)})", witness=witness)

    V = hull_vertices(inst.select(S))
    facets = hull_facets(inst.select(S))
    hull_planes = {f.hyperplane for f in facets}

    if len(V) == d + 1:
        simplex = V
        v = min(i for i in S if i not in V)
        if in_interior(inst.select(V), inst.points[v]):
            # z sits inside one of the simplices conv(F + v), F a facet of P
            F = next(
                list(F) for F in combinations(V, d)
                if simplex_contains_interior(inst.select(list(F) + [v]), inst.z)
            )
            u = next(i for i in V if i not in F)
            through_u = next(list(G) for G in combinations(V, d) if u in G)
            H = hyperplane_through(inst.select(through_u))
            case = 'simplex-interior'
        else:
            facet = next(f for f in facets if v in f.vertices)
            u, H = v, facet.hyperplane
            case = 'simplex-boundary'
    else:
        delta_z = find_containing_simplex(V, inst).vertices
        v, F_z = None, None
        for w in delta_z:
            rest = [i for i in delta_z if i != w]
            if hyperplane_through(inst.select(rest)) not in hull_planes:
                v, F_z = w, rest
                break
        if v is None:
            raise CertificateError(f"every facet of {delta_z} is a hull facet, but conv(S) is not a simplex")
        lam, facet = ray_exit(facets, inst.points[v], inst.z)
        z_exit = point_on_ray(inst.points[v], inst.z, lam)
        face = [i for i in facet.vertices if i in V]
        simplex = sorted(_containing_simplex(inst.select(face), face, z_exit) + [v])
        H = facet.hyperplane
        u = min(i for i in face if i not in F_z)
        case = 'non-simplex'

    simplex = sorted(simplex)
    if not _verify_good_vertex(inst, V, simplex, H, u, hull_planes):
        raise CertificateError(f"good vertex u={u} with simplex {simplex} failed its re-check")
    return GoodVertexCertificate(u=u, simplex=simplex, hyperplane=HyperplaneRecord.from_hyperplane(H), case=case)
