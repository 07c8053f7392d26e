"""Fans of the nine classified toric threefold families.

A family is selected by a case id ("2.0.1" ... "3.1.5") together with its
integer parameters.  Rays are primitive integer 3-vectors, maximal cones are
3-element ray index sets, and primitive collections (the minimal ray sets not
spanning a cone) are stored with their exact positive relations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .intlin import solve_3x3

Vec3 = tuple[int, int, int]

CASE_IDS = ("2.0.1", "2.0.2", "3.0.1", "3.0.2", "3.1.1", "3.1.2", "3.1.3", "3.1.4", "3.1.5")

PARAM_NAMES: dict[str, tuple[str, ...]] = {
    "2.0.1": ("l",),
    "2.0.2": ("l1", "l2"),
    "3.0.1": ("r", "a", "b"),
    "3.0.2": ("r", "a", "b"),
    "3.1.1": ("b1",),
    "3.1.2": ("b1",),
    "3.1.3": ("b1", "c2"),
    "3.1.4": ("b1", "b2"),
    "3.1.5": ("b1",),
}


class ParameterError(ValueError):
    """A family parameter violates its allowed range."""

    def __init__(self, violation: str):
        super().__init__(violation)
        self.violation = violation


class FanGeometryError(ValueError):
    """The combinatorial data does not assemble into a smooth complete fan."""


@dataclass(frozen=True)
class FamilySpec:
    """One of the nine classified cases with its integer parameters."""

    case_id: str
    params: tuple[tuple[str, int], ...]

    @classmethod
    def make(cls, case_id: str, **params: int) -> "FamilySpec":
        if case_id not in CASE_IDS:
            raise ParameterError(f"unknown case id {case_id!r}")
        names = PARAM_NAMES[case_id]
        missing = [n for n in names if n not in params]
        extra = [n for n in params if n not in names]
        if missing:
            raise ParameterError(f"case {case_id} needs parameter(s) {', '.join(missing)}")
        if extra:
            raise ParameterError(f"case {case_id} does not take parameter(s) {', '.join(extra)}")
        spec = cls(case_id, tuple((n, int(params[n])) for n in names))
        spec.validate()
        return spec

    def __getitem__(self, name: str) -> int:
        for n, v in self.params:
            if n == name:
                return v
        raise KeyError(name)

    def as_dict(self) -> dict[str, int]:
        return dict(self.params)

    def validate(self) -> None:
        p = self.as_dict()
        case = self.case_id
        if case == "2.0.1" and p["l"] < 0:
            raise ParameterError("l >= 0 required")
        if case == "2.0.2":
            if p["l1"] < 0:
                raise ParameterError("l1 >= 0 required")
            if p["l2"] < p["l1"]:
                raise ParameterError("l2 >= l1 required")
        if case in ("3.0.1", "3.0.2"):
            if p["r"] < 0:
                raise ParameterError("r >= 0 required")
            if p["a"] < 0:
                raise ParameterError("a >= 0 required")
            if case == "3.0.1" and p["b"] < 0:
                raise ParameterError("b >= 0 required in case 3.0.1")
            if case == "3.0.2" and p["b"] >= 0:
                raise ParameterError("b < 0 required in case 3.0.2")
        # 3.1.x parameters are unrestricted integers.


@dataclass(frozen=True)
class PrimitiveCollection:
    """Minimal non-face of the fan together with its positive relation.

    The ray sum u_{rho_1} + ... + u_{rho_k} equals
    sum(c * u_sigma for sigma, c in zip(relation_cone, relation_coeffs))
    with every coefficient strictly positive; both sides are empty exactly
    when the ray sum is zero.
    """

    rays: tuple[int, ...]
    relation_cone: tuple[int, ...] = ()
    relation_coeffs: tuple[int, ...] = ()


@dataclass(frozen=True)
class Fan:
    """Smooth complete fan in R^3 with labelled rays."""

    rays: tuple[Vec3, ...]
    max_cones: tuple[tuple[int, int, int], ...]
    ray_labels: tuple[str, ...]
    collections: tuple[PrimitiveCollection, ...] = ()
    family: FamilySpec | None = None

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def label_index(self, label: str) -> int:
        for i, lab in enumerate(self.ray_labels):
            if lab == label:
                return i
        # Numeric aliases D_1 ... D_n are always accepted.
        if label.startswith("D_"):
            tail = label[2:]
            if tail.isdigit() and 1 <= int(tail) <= self.nrays:
                return int(tail) - 1
        raise KeyError(f"no ray labelled {label!r}")


@dataclass(frozen=True)
class FanValidation:
    """Report from verify_smooth_complete: per-cone determinants and
    per-2-face incidence counts, with the failures spelled out."""

    cone_dets: tuple[tuple[tuple[int, int, int], int], ...]
    face_incidence: tuple[tuple[tuple[int, int], int], ...]
    failures: tuple[str, ...]

    @property
    def smooth(self) -> bool:
        return all(abs(d) == 1 for _, d in self.cone_dets)

    @property
    def complete(self) -> bool:
        return all(c == 2 for _, c in self.face_incidence) and bool(self.face_incidence)

    @property
    def ok(self) -> bool:
        return not self.failures


def _gcd_vec(v: Sequence[int]) -> int:
    from math import gcd

    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def verify_smooth_complete(fan: Fan) -> FanValidation:
    failures: list[str] = []
    for i, u in enumerate(fan.rays):
        if _gcd_vec(u) != 1:
            failures.append(f"ray {i} is not primitive")
    dets = []
    for cone in fan.max_cones:
        rows = [fan.rays[i] for i in cone]
        (a, b, c), (d, e, f), (g, h, i) = rows
        det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
        dets.append((cone, det))
        if abs(det) != 1:
            failures.append(f"cone {cone} has |det| = {abs(det)}")
    incidence: dict[tuple[int, int], int] = {}
    for cone in fan.max_cones:
        s = sorted(cone)
        for pair in ((s[0], s[1]), (s[0], s[2]), (s[1], s[2])):
            incidence[pair] = incidence.get(pair, 0) + 1
    for pair, count in sorted(incidence.items()):
        if count != 2:
            failures.append(f"2-face {pair} lies in {count} maximal cones")
    if not fan.max_cones:
        failures.append("fan has no maximal cones")
    return FanValidation(tuple(dets), tuple(sorted(incidence.items())), tuple(failures))


def cone_coordinates(fan: Fan, cone: Sequence[int], u: Sequence[int]):
    """Exact coordinates of u in the cone's ray basis, or None if singular."""
    rows = [[fan.rays[i][k] for i in cone] for k in range(3)]
    return solve_3x3(rows, tuple(u))


def find_containing_cone(fan: Fan, u: Sequence[int]):
    """First maximal cone containing u, with its nonnegative coordinates.

    Returns (cone, coords) where coords are Fractions; None if u lies in no
    cone (the fan is then not complete).
    """
    from fractions import Fraction

    for cone in fan.max_cones:
        sol = cone_coordinates(fan, cone, u)
        if sol is None:
            continue
        nums, den = sol
        if all(n >= 0 for n in nums):
            return cone, tuple(Fraction(n, den) for n in nums)
    return None


def cones_from_collections(
    rays: Sequence[Vec3], collections: Sequence[Sequence[int]]
) -> tuple[tuple[int, int, int], ...]:
    """Maximal cones = 3-subsets of rays containing no collection.

    The result is checked for smoothness and completeness; inconsistent
    input raises FanGeometryError.
    """
    from itertools import combinations

    csets = [frozenset(c) for c in collections]
    cones = tuple(
        trip
        for trip in combinations(range(len(rays)), 3)
        if not any(c <= frozenset(trip) for c in csets)
    )
    fan = Fan(tuple(tuple(u) for u in rays), cones, tuple(f"D_{i+1}" for i in range(len(rays))))
    report = verify_smooth_complete(fan)
    if not report.ok:
        raise FanGeometryError("; ".join(report.failures))
    _check_single_cover(fan)
    return cones


def _check_single_cover(fan: Fan) -> None:
    """Spot-check that generic points lie in exactly one maximal cone."""
    probes = [(97, 61, 31), (-89, 53, -29), (41, -103, 67), (-59, -71, -113), (13, 37, 101)]
    for p in probes:
        hits = 0
        boundary = False
        for cone in fan.max_cones:
            sol = cone_coordinates(fan, cone, p)
            if sol is None:
                continue
            nums, _ = sol
            if all(n > 0 for n in nums):
                hits += 1
            elif all(n >= 0 for n in nums):
                boundary = True
        if boundary:
            continue
        if hits != 1:
            raise FanGeometryError(f"probe point {p} lies in {hits} cone interiors")


def minimal_nonfaces(fan: Fan) -> set[frozenset[int]]:
    """Recompute primitive collections as minimal non-faces of the cone complex."""
    from itertools import combinations

    faces = set()
    for cone in fan.max_cones:
        for k in range(1, 4):
            for sub in combinations(sorted(cone), k):
                faces.add(frozenset(sub))
    nonfaces = []
    for k in range(2, fan.nrays + 1):
        for sub in combinations(range(fan.nrays), k):
            s = frozenset(sub)
            if s in faces:
                continue
            if all(frozenset(t) in faces for t in combinations(sub, k - 1)):
                nonfaces.append(s)
    return set(nonfaces)


def primitive_relation(fan: Fan, rays: Sequence[int]) -> PrimitiveCollection:
    """Fill in the positive relation of a primitive collection.

    Finds the smallest cone containing the ray sum and the unique expansion
    with positive integer coefficients; the identity is re-verified by
    substitution.
    """
    idx = tuple(sorted(rays))
    total = tuple(sum(fan.rays[i][k] for i in idx) for k in range(3))
    if total == (0, 0, 0):
        return PrimitiveCollection(idx)
    hit = find_containing_cone(fan, total)
    if hit is None:
        raise FanGeometryError(f"ray sum {total} lies in no cone; fan not complete")
    cone, coords = hit
    support = [(i, c) for i, c in zip(cone, coords) if c != 0]
    if any(c < 0 or c.denominator != 1 for _, c in support):
        raise FanGeometryError(f"relation for {idx} has a non-positive or fractional coefficient")
    rel_cone = tuple(i for i, _ in support)
    rel_coeffs = tuple(int(c) for _, c in support)
    check = tuple(
        sum(cf * fan.rays[i][k] for i, cf in zip(rel_cone, rel_coeffs)) for k in range(3)
    )
    if check != total:
        raise FanGeometryError("relation substitution failed")
    return PrimitiveCollection(idx, rel_cone, rel_coeffs)


def is_splitting(collections: Sequence[PrimitiveCollection]) -> bool:
    """True when no two primitive collections share a ray."""
    seen: set[int] = set()
    for c in collections:
        if seen & set(c.rays):
            return False
        seen |= set(c.rays)
    return True


# Catalog data: rays, labels and primitive collections per case (rays in the
# printed order, so divisor indices are stable across the whole package).


def _catalog_data(spec: FamilySpec):
    p = spec.as_dict()
    case = spec.case_id
    if case == "2.0.1":
        l = p["l"]
        rays = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1), (l, -1, -1)]
        labels = ["D_1", "D_2", "D_3", "D_4", "D_5"]
        colls = [(0, 1), (2, 3, 4)]
    elif case == "2.0.2":
        l1, l2 = p["l1"], p["l2"]
        rays = [(1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (l1, l2, -1)]
        labels = ["D_1", "D_2", "D_3", "D_4", "D_5"]
        colls = [(0, 1, 2), (3, 4)]
    elif case in ("3.0.1", "3.0.2"):
        r, a, b = p["r"], p["a"], p["b"]
        rays = [(1, 0, 0), (-1, r, a), (0, 1, 0), (0, -1, b), (0, 0, 1), (0, 0, -1)]
        labels = ["D_1", "D_2", "D_3", "D_4", "D_5", "D_6"]
        colls = [(0, 1), (2, 3), (4, 5)]
    elif case == "3.1.1":
        b1 = p["b1"]
        rays = [(1, 0, 0), (0, 1, 0), (-1, -1, b1), (-1, -1, b1 + 1), (0, 0, 1), (0, 0, -1)]
        labels = ["D_v1", "D_v2", "D_u1", "D_y1", "D_t1", "D_z1"]
        colls = [(0, 1, 3), (3, 5), (4, 5), (2, 4), (0, 1, 2)]
    elif case == "3.1.2":
        b1 = p["b1"]
        rays = [(1, 0, 0), (-1, 0, b1), (-1, -1, b1 + 1), (0, 1, 0), (0, 0, 1), (0, 0, -1)]
        labels = ["D_v1", "D_u1", "D_y1", "D_y2", "D_t1", "D_z1"]
        colls = [(0, 2, 3), (2, 3, 5), (4, 5), (1, 4), (0, 1)]
    elif case == "3.1.3":
        b1, c2 = p["b1"], p["c2"]
        rays = [(1, 0, 0), (-1, b1, c2), (-1, b1 + 1, c2), (0, 1, 0), (0, -1, -1), (0, 0, 1)]
        labels = ["D_v1", "D_u1", "D_y1", "D_t1", "D_z1", "D_z2"]
        colls = [(0, 2), (2, 4, 5), (3, 4, 5), (1, 3), (0, 1)]
    elif case == "3.1.4":
        b1, b2 = p["b1"], p["b2"]
        rays = [(1, 0, 0), (-1, b1, b2), (-1, b1 + 1, b2 + 1), (0, 1, 0), (0, 0, 1), (0, -1, -1)]
        labels = ["D_v1", "D_u1", "D_y1", "D_t1", "D_t2", "D_z1"]
        colls = [(0, 2), (2, 5), (3, 4, 5), (1, 3, 4), (0, 1)]
    elif case == "3.1.5":
        b1 = p["b1"]
        rays = [(1, 0, 0), (-1, -1, b1), (0, 1, 0), (-1, 0, b1 + 1), (0, 0, 1), (0, 0, -1)]
        labels = ["D_v1", "D_u1", "D_u2", "D_y1", "D_t1", "D_z1"]
        colls = [(0, 3), (3, 5), (4, 5), (1, 2, 4), (0, 1, 2)]
    else:  # pragma: no cover
        raise ParameterError(f"unknown case id {case!r}")
    return rays, labels, colls


@lru_cache(maxsize=None)
def build_family_fan(spec: FamilySpec) -> Fan:
    """Construct and validate the fan of a classified family.

    Primitive collections are part of the stored classification data; the
    reconstruction of the maximal cones from them, plus the recomputation of
    minimal non-faces, serves as the consistency check.
    """
    spec.validate()
    rays, labels, colls = _catalog_data(spec)
    cones = cones_from_collections(rays, colls)
    fan = Fan(tuple(rays), cones, tuple(labels), family=spec)
    filled = tuple(primitive_relation(fan, c) for c in colls)
    fan = Fan(tuple(rays), cones, tuple(labels), collections=filled, family=spec)
    if minimal_nonfaces(fan) != {frozenset(c) for c in colls}:
        raise FanGeometryError("stored collections disagree with recomputed minimal non-faces")
    return fan


def family_fan(case_id: str, **params: int) -> Fan:
    return build_family_fan(FamilySpec.make(case_id, **params))


def generic_fan(rays: Sequence[Sequence[int]], max_cones: Sequence[Sequence[int]],
                labels: Sequence[str] | None = None) -> Fan:
    """Fan from raw data (hand-written input); collections are recomputed."""
    rays_t = tuple(tuple(int(x) for x in u) for u in rays)
    cones_t = tuple(tuple(sorted(int(i) for i in c)) for c in max_cones)
    if labels is None:
        labels = [f"D_{i+1}" for i in range(len(rays_t))]
    fan = Fan(rays_t, cones_t, tuple(labels))
    report = verify_smooth_complete(fan)
    if not report.ok:
        raise FanGeometryError("; ".join(report.failures))
    colls = tuple(
        primitive_relation(fan, tuple(sorted(s))) for s in sorted(minimal_nonfaces(fan), key=sorted)
    )
    return Fan(rays_t, cones_t, tuple(labels), collections=colls)


def fan_to_json(fan: Fan) -> dict:
    out: dict = {
        "rays": [list(u) for u in fan.rays],
        "max_cones": [list(c) for c in fan.max_cones],
        "ray_labels": list(fan.ray_labels),
        "collections": [
            {
                "rays": list(c.rays),
                "relation_cone": list(c.relation_cone),
                "relation_coeffs": list(c.relation_coeffs),
            }
            for c in fan.collections
        ],
    }
    if fan.family is not None:
        out["case"] = fan.family.case_id
        out["params"] = fan.family.as_dict()
    return out


def fan_from_json(data: Mapping) -> Fan:
    if "case" in data:
        return family_fan(data["case"], **{k: int(v) for k, v in data.get("params", {}).items()})
    return generic_fan(data["rays"], data["max_cones"], data.get("ray_labels"))


def fan_from_json_str(text: str) -> Fan:
    return fan_from_json(json.loads(text))
