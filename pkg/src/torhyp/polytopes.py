"""Divisor polytopes in H-representation, all arithmetic exact.

P(D) = {m : <m, u_rho> >= -a_rho for every ray}.  Vertex enumeration is by
brute-force triples of inequalities (at most 6 inequalities here), lattice
points by sliced integer scans, volumes by fan triangulation around the
vertex centroid, and triple intersection numbers by polarisation of the
Euclidean volume over the nef-cone generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from itertools import combinations
from math import gcd
from typing import Sequence

from .divisors import (
    PicClass,
    TDivisor,
    class_of,
    is_nef,
    nef_coordinates,
    nef_generators,
)
from .fans import Fan
from .intlin import solve_3x3

Vec3 = tuple[int, int, int]
QVec3 = tuple[Fraction, Fraction, Fraction]

LATTICE_SCAN_GUARD = 10**6


class UnboundedPolytopeError(ValueError):
    """The inequality system has a nonzero recession cone."""


class EnumerationGuardError(RuntimeError):
    """A lattice scan would exceed the candidate budget."""


@dataclass(frozen=True)
class HPolytope:
    """Intersection of half-spaces <m, normal_i> >= rhs_i."""

    normals: tuple[Vec3, ...]
    rhs: tuple[int, ...]

    def contains(self, m: Sequence) -> bool:
        return all(
            n[0] * m[0] + n[1] * m[1] + n[2] * m[2] >= r for n, r in zip(self.normals, self.rhs)
        )


def polytope_of(d: TDivisor) -> HPolytope:
    """H-representation of P(D), one inequality per ray in ray order."""
    return HPolytope(tuple(d.fan.rays), tuple(-c for c in d.coeffs))


def offset_polytope(fan: Fan, rhs: Sequence[int]) -> HPolytope:
    return HPolytope(tuple(fan.rays), tuple(int(x) for x in rhs))


def _is_bounded(p: HPolytope) -> bool:
    """Bounded iff the recession cone {<m, n_i> >= 0} is {0}.

    A nonzero recession vector exists iff either all normals lie in a plane
    or some cross product of two normals (up to sign) pairs nonnegatively
    with every normal.
    """
    normals = p.normals
    rows = [list(n) for n in normals]
    from .intlin import IntMat, rational_rank

    if rational_rank(IntMat.from_rows(rows)) < 3:
        return False
    for u, v in combinations(normals, 2):
        c = (
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        )
        if c == (0, 0, 0):
            continue
        for w in (c, tuple(-x for x in c)):
            if all(n[0] * w[0] + n[1] * w[1] + n[2] * w[2] >= 0 for n in normals):
                return False
    return True


@lru_cache(maxsize=None)
def vertices(p: HPolytope) -> tuple:
    """Exact rational vertex set, sorted; raises on unbounded input.

    Coordinates are plain ints whenever the vertex is integral (always the
    case for nef divisors on a smooth fan) and Fractions otherwise.
    """
    if not _is_bounded(p):
        raise UnboundedPolytopeError("inequality system is unbounded")
    seen = set()
    n = len(p.normals)
    normals = p.normals
    rhs = p.rhs
    for trip in combinations(range(n), 3):
        rows = [normals[i] for i in trip]
        sol = solve_3x3(rows, [rhs[i] for i in trip])
        if sol is None:
            continue
        (x, y, z), den = sol
        if x % den == 0 and y % den == 0 and z % den == 0:
            cand = (x // den, y // den, z // den)
        else:
            cand = (Fraction(x, den), Fraction(y, den), Fraction(z, den))
        if cand in seen:
            continue
        ok = True
        for i in range(n):
            ni = normals[i]
            if ni[0] * cand[0] + ni[1] * cand[1] + ni[2] * cand[2] < rhs[i]:
                ok = False
                break
        if ok:
            seen.add(cand)
    return tuple(sorted(seen, key=lambda v: (Fraction(v[0]), Fraction(v[1]), Fraction(v[2]))))


def dimension(p: HPolytope) -> int:
    """Dimension of the affine hull of the vertex set; -1 when empty."""
    verts = vertices(p)
    return _affine_dim(verts)


def _ceil_frac(num: int, den: int) -> int:
    return -((-num) // den)


def _floor_frac(num: int, den: int) -> int:
    return num // den


def lattice_points(p: HPolytope) -> tuple[Vec3, ...]:
    """All integer points of a bounded polytope, sorted.

    The scan walks x over its exact range, bounds y per x-slice from the
    slice's 2-d vertices, then reads off the z-interval from the remaining
    single-variable constraints, so work is proportional to the number of
    slices and the output.
    """
    verts = vertices(p)
    if not verts:
        return ()
    xs = [v[0] for v in verts]
    x_lo, x_hi = _ceil_frac(min(xs).numerator, min(xs).denominator), _floor_frac(
        max(xs).numerator, max(xs).denominator
    )
    if x_hi - x_lo + 1 > LATTICE_SCAN_GUARD:
        raise EnumerationGuardError("x-range exceeds the scan budget")
    out: list[Vec3] = []
    budget = LATTICE_SCAN_GUARD
    for x in range(x_lo, x_hi + 1):
        # Constraints restricted to the slice: ny*y + nz*z >= r - nx*x.
        slice_cons = [(n[1], n[2], r - n[0] * x) for n, r in zip(p.normals, p.rhs)]
        feasible = True
        for ny, nz, r in slice_cons:
            if ny == 0 and nz == 0 and r > 0:
                feasible = False
                break
        if not feasible:
            continue
        y_lo = y_hi = None
        for (ay, az, ar), (by, bz, br) in combinations(slice_cons, 2):
            det = ay * bz - az * by
            if det == 0:
                continue
            # Slice vertex (ynum/det, znum/det); feasibility and bounds by
            # cross-multiplied integer comparisons only.
            ynum = ar * bz - az * br
            znum = ay * br - ar * by
            if det < 0:
                det, ynum, znum = -det, -ynum, -znum
            if all(cy * ynum + cz * znum >= cr * det for cy, cz, cr in slice_cons):
                lo = _ceil_frac(ynum, det)
                hi = _floor_frac(ynum, det)
                y_lo = lo if y_lo is None else min(y_lo, lo)
                y_hi = hi if y_hi is None else max(y_hi, hi)
        # Unbounded slices cannot occur for bounded p; empty ones can.
        if y_lo is None:
            continue
        for y in range(y_lo, y_hi + 1):
            z_lo, z_hi = None, None
            ok = True
            for ny, nz, r in slice_cons:
                c = r - ny * y
                if nz == 0:
                    if c > 0:
                        ok = False
                        break
                elif nz > 0:
                    bound = _ceil_frac(c, nz)
                    z_lo = bound if z_lo is None else max(z_lo, bound)
                else:
                    bound = _floor_frac(c, nz)
                    z_hi = bound if z_hi is None else min(z_hi, bound)
            if not ok or z_lo is None or z_hi is None or z_lo > z_hi:
                continue
            budget -= z_hi - z_lo + 1
            if budget < 0:
                raise EnumerationGuardError("lattice scan exceeds the point budget")
            for z in range(z_lo, z_hi + 1):
                out.append((x, y, z))
    return tuple(sorted(out))


def lattice_count(p: HPolytope) -> int:
    return len(lattice_points(p))


@dataclass(frozen=True)
class IdpResult:
    ok: bool
    witness: Vec3 | None = None


def idp_check(e: TDivisor, eprime: TDivisor) -> IdpResult:
    """Does every lattice point of P(E+E') split as a sum of points of
    P(E) and P(E')?  Inputs must be nef; the first uncovered point is the
    witness on failure."""
    if not (is_nef(e) and is_nef(eprime)):
        raise ValueError("the decomposition test applies to nef pairs")
    pts_e = lattice_points(polytope_of(e))
    pts_ep = lattice_points(polytope_of(eprime))
    target = lattice_points(polytope_of(e + eprime))
    sums = {(a[0] + b[0], a[1] + b[1], a[2] + b[2]) for a in pts_e for b in pts_ep}
    for t in target:
        if t not in sums:
            return IdpResult(False, t)
    return IdpResult(True)


# Faces.


@dataclass(frozen=True)
class Face2:
    """Face of P(D) where one ray attains its minimum."""

    polytope: HPolytope
    ray_index: int
    vertices: tuple[QVec3, ...]  # cyclic order for 2-dimensional faces
    dim: int
    plane_basis: tuple[Vec3, Vec3] | None


@lru_cache(maxsize=None)
def _plane_lattice_basis(normal: Vec3) -> tuple[Vec3, Vec3]:
    """Basis of the rank-2 lattice {w in Z^3 : <w, normal> = 0}."""
    from .intlin import IntMat, integer_kernel

    basis = integer_kernel(IntMat.from_rows([list(normal)]))
    assert len(basis) == 2
    return tuple(basis)  # type: ignore[return-value]


def _cyclic_order(points: Sequence, basis: tuple[Vec3, Vec3]) -> tuple:
    """Sort coplanar points counterclockwise around their centroid, exactly.

    Works on n*p - sum(points), which clears denominators from the centroid
    and keeps everything in integers for integral inputs.
    """
    if len(points) <= 2:
        return tuple(points)
    n = len(points)
    sx = sum(p[0] for p in points)
    sy = sum(p[1] for p in points)
    sz = sum(p[2] for p in points)
    b1, b2 = basis
    plane_pts = []
    for p in points:
        d = (n * p[0] - sx, n * p[1] - sy, n * p[2] - sz)
        plane_pts.append((_dot(d, b1), _dot(d, b2), p))

    def half(q) -> int:
        x, y = q[0], q[1]
        return 0 if (y > 0 or (y == 0 and x > 0)) else 1

    def cmp(a, b) -> int:
        ha, hb = half(a), half(b)
        if ha != hb:
            return -1 if ha < hb else 1
        cross = a[0] * b[1] - a[1] * b[0]
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return 0

    plane_pts.sort(key=cmp_to_key(cmp))
    return tuple(q[2] for q in plane_pts)


def _dot(a, b) -> Fraction:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def min_face(d: TDivisor, ray_index: int) -> Face2:
    """Face of P(D) on which the given ray's pairing attains -a_rho.

    For nef divisors the minimum of <., u_rho> over P(D) is exactly -a_rho,
    so the face is the subset where that inequality is tight.
    """
    p = polytope_of(d)
    verts = vertices(p)
    normal = p.normals[ray_index]
    rhs = p.rhs[ray_index]
    face_verts = [v for v in verts if _dot(v, normal) == rhs]
    dim = _affine_dim(face_verts)
    basis = _plane_lattice_basis(normal) if dim == 2 else None
    ordered = _cyclic_order(face_verts, basis) if dim == 2 else tuple(sorted(face_verts))
    return Face2(p, ray_index, ordered, dim, basis)


def _affine_dim(points: Sequence) -> int:
    """Affine dimension via cross products and determinants, no division."""
    if not points:
        return -1
    v0 = points[0]
    d1 = None
    for v in points[1:]:
        d = (v[0] - v0[0], v[1] - v0[1], v[2] - v0[2])
        if d != (0, 0, 0):
            d1 = d
            break
    if d1 is None:
        return 0
    d2 = None
    for v in points[1:]:
        d = (v[0] - v0[0], v[1] - v0[1], v[2] - v0[2])
        c = (
            d1[1] * d[2] - d1[2] * d[1],
            d1[2] * d[0] - d1[0] * d[2],
            d1[0] * d[1] - d1[1] * d[0],
        )
        if c != (0, 0, 0):
            d2 = (d, c)
            break
    if d2 is None:
        return 1
    _, c = d2
    for v in points[1:]:
        d = (v[0] - v0[0], v[1] - v0[1], v[2] - v0[2])
        if c[0] * d[0] + c[1] * d[1] + c[2] * d[2] != 0:
            return 3
    return 2


def interior_lattice_count(face: Face2) -> int:
    """Lattice points in the relative interior of the face.

    Faces of dimension 0 or 1 count zero.  Two-dimensional faces with
    integral vertices are counted in their own plane lattice via Pick's
    identity; non-integral faces fall back to the strict-inequality scan.
    """
    if face.dim < 2:
        return 0
    p = face.polytope
    for i, (n, r) in enumerate(zip(p.normals, p.rhs)):
        if i == face.ray_index:
            continue
        # Another inequality tight across the whole face (the polytope is
        # flat there): no point can satisfy it strictly.
        if all(_dot(v, n) == r for v in face.vertices):
            return 0
    if all(all(c.denominator == 1 for c in v) for v in face.vertices):
        return _pick_interior(face)
    return interior_lattice_count_by_scan(face)


def _pick_interior(face: Face2) -> int:
    b1, b2 = face.plane_basis  # type: ignore[misc]
    v0 = face.vertices[0]
    coords = []
    for v in face.vertices:
        d = (int(v[0] - v0[0]), int(v[1] - v0[1]), int(v[2] - v0[2]))
        coords.append(_plane_coords(d, b1, b2))
    area2 = 0
    boundary = 0
    n = len(coords)
    for i in range(n):
        x1, y1 = coords[i]
        x2, y2 = coords[(i + 1) % n]
        area2 += x1 * y2 - x2 * y1
        boundary += gcd(abs(x2 - x1), abs(y2 - y1))
    area2 = abs(area2)
    # Pick: area = interior + boundary/2 - 1.
    return (area2 - boundary + 2) // 2


def _plane_coords(d: Vec3, b1: Vec3, b2: Vec3) -> tuple[int, int]:
    """Integer coordinates of d in the plane lattice basis (b1, b2)."""
    for i, j in ((0, 1), (0, 2), (1, 2)):
        det = b1[i] * b2[j] - b1[j] * b2[i]
        if det != 0:
            alpha = d[i] * b2[j] - d[j] * b2[i]
            beta = b1[i] * d[j] - b1[j] * d[i]
            if alpha % det or beta % det:
                raise ValueError("point not in the plane lattice")
            return alpha // det, beta // det
    raise ValueError("degenerate plane basis")


def interior_lattice_count_by_scan(face: Face2) -> int:
    """Independent interior count: every non-defining inequality strict."""
    p = face.polytope
    count = 0
    for m in lattice_points(p):
        if _dot(m, p.normals[face.ray_index]) != p.rhs[face.ray_index]:
            continue
        strict = True
        for i, (n, r) in enumerate(zip(p.normals, p.rhs)):
            if i == face.ray_index:
                continue
            if _dot(m, n) <= r:
                # Tight or violated elsewhere: not interior.  Opposite or
                # repeated normals tight on the whole face land here too.
                strict = False
                break
        if strict:
            count += 1
    return count


# Volumes and intersection numbers.


def volume(p: HPolytope) -> Fraction:
    """Euclidean volume by fan triangulation from the vertex centroid."""
    verts = vertices(p)
    if dimension(p) < 3:
        return Fraction(0)
    n = len(verts)
    centroid = (
        Fraction(sum(v[0] for v in verts), n),
        Fraction(sum(v[1] for v in verts), n),
        Fraction(sum(v[2] for v in verts), n),
    )
    total = Fraction(0)
    seen_facets: set[frozenset] = set()
    for i, (normal, rhs) in enumerate(zip(p.normals, p.rhs)):
        fverts = [v for v in verts if _dot(v, normal) == rhs]
        key = frozenset(fverts)
        if len(fverts) < 3 or key in seen_facets:
            continue
        seen_facets.add(key)
        if _affine_dim(fverts) != 2:
            continue
        ordered = _cyclic_order(fverts, _plane_lattice_basis(normal))
        w0 = ordered[0]
        for a, b in zip(ordered[1:], ordered[2:]):
            total += abs(_det3(_sub(w0, centroid), _sub(a, centroid), _sub(b, centroid)))
    return Fraction(total, 6)


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _det3(r0, r1, r2) -> Fraction:
    return (
        r0[0] * (r1[1] * r2[2] - r1[2] * r2[1])
        - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
    )


def minkowski_sum_polytope(p1: HPolytope, p2: HPolytope) -> HPolytope:
    """Minkowski sum computed from the V-representations.

    Both polytopes must share the same normal list (they come from divisors
    on one fan); the sum's support values are the minima of the pairwise
    vertex sums, which is exact because every facet normal of the sum is
    again one of the shared normals.
    """
    if p1.normals != p2.normals:
        raise ValueError("polytope normal lists differ")
    v1, v2 = vertices(p1), vertices(p2)
    if not v1 or not v2:
        raise ValueError("empty polytope in Minkowski sum")
    sums = [(a[0] + b[0], a[1] + b[1], a[2] + b[2]) for a in v1 for b in v2]
    rhs = []
    for nrm in p1.normals:
        rhs.append(min(_dot(s, nrm) for s in sums))
    if any(x.denominator != 1 for x in rhs):
        raise ValueError("non-integral support values")
    return HPolytope(p1.normals, tuple(int(x) for x in rhs))


@lru_cache(maxsize=None)
def _nef_combo_volume(fan: Fan, combo: tuple[int, ...]) -> Fraction:
    gens = nef_generators(fan)
    coeffs = [0] * fan.nrays
    for c, g in zip(combo, gens):
        for i, x in enumerate(g.coeffs):
            coeffs[i] += c * x
    return volume(polytope_of(TDivisor(fan, tuple(coeffs))))


@lru_cache(maxsize=None)
def intersection_tensor(fan: Fan) -> dict:
    """Symmetric tensor of triple products of the nef-cone generators.

    Each entry is obtained by polarising the volume: for divisor slots
    (i, j, k), D_i.D_j.D_k = sum over nonempty slot subsets S of
    (-1)^(3-|S|) vol(P(sum of the slots in S)).
    """
    rank = len(nef_generators(fan))
    tensor: dict[tuple[int, int, int], int] = {}
    for idx in combinations_with_replacement_range(rank):
        i, j, k = idx
        total = Fraction(0)
        slots = (i, j, k)
        for size in (1, 2, 3):
            sign = (-1) ** (3 - size)
            for subset in combinations(range(3), size):
                combo = [0] * rank
                for s in subset:
                    combo[slots[s]] += 1
                total += sign * _nef_combo_volume(fan, tuple(combo))
        if total.denominator != 1:
            raise ValueError("non-integer generator triple product")
        tensor[idx] = int(total)
    return tensor


def combinations_with_replacement_range(rank: int):
    from itertools import combinations_with_replacement

    return combinations_with_replacement(range(rank), 3)


def _tensor_entry(tensor: dict, i: int, j: int, k: int) -> int:
    return tensor[tuple(sorted((i, j, k)))]


def triple_intersection(d1, d2, d3) -> int:
    """Triple intersection number of three divisors or classes.

    Each argument is decomposed over the nef-cone generators and the cached
    generator tensor is contracted multilinearly; the result must come out
    an integer.
    """
    fan = d1.fan if isinstance(d1, TDivisor) else d1.basis.fan
    coords = []
    for d in (d1, d2, d3):
        cls = class_of(d) if isinstance(d, TDivisor) else d
        if cls.basis.fan.rays != fan.rays:
            raise ValueError("arguments live on different fans")
        coords.append(nef_coordinates(fan, cls))
    tensor = intersection_tensor(fan)
    rank = len(coords[0])
    total = 0
    for i in range(rank):
        if coords[0][i] == 0:
            continue
        for j in range(rank):
            if coords[1][j] == 0:
                continue
            for k in range(rank):
                if coords[2][k] == 0:
                    continue
                total += coords[0][i] * coords[1][j] * coords[2][k] * _tensor_entry(tensor, i, j, k)
    if isinstance(total, Fraction):
        if total.denominator != 1:
            raise ValueError("non-integer intersection number; inconsistent input")
        return int(total)
    return total


def polytope_json(p: HPolytope) -> dict:
    verts = vertices(p)
    return {
        "normals": [list(n) for n in p.normals],
        "offsets": list(p.rhs),
        "vertices": [[str(c) if c.denominator != 1 else int(c) for c in v] for v in verts],
        "lattice_points": [list(m) for m in lattice_points(p)],
        "dimension": dimension(p),
    }
