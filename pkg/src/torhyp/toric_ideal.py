"""Gale-dual presentation matrices, fiber graphs, and Markov move checks.

The short exact sequence 0 -> Z^3 -> Z^r -> Z^k -> 0 of a catalog fan is
realised by the ray matrix A (rays as rows) and the class map B computed
from the chosen Picard basis.  A finite move set in ker(B) is verified to
be a Markov basis up to a degree bound: every fiber
{v in Z^r_{>=0} : B v = t} touched by a vector of coordinate sum <= bound
is enumerated in full (it is finite because the fan is complete, which
makes the fiber an affine slice of a bounded polytope) and its move graph
must be connected.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .divisors import TDivisor, is_nef, picard_basis
from .fans import Fan
from .intlin import IntMat
from .polytopes import lattice_points, offset_polytope

Vec = tuple[int, ...]

DEFAULT_MARKOV_BOUND = 6


class InternalInconsistencyError(RuntimeError):
    """A recomputed matrix disagrees with the package's encoded tables."""


@dataclass(frozen=True)
class GaleMatrix:
    """Class map B of the presentation, with its ray and basis labels."""

    b: IntMat
    column_labels: tuple[str, ...]
    row_labels: tuple[str, ...]


@dataclass(frozen=True)
class FiberCertificate:
    """Outcome of a bounded fiber-connectivity verification."""

    degree_bound: int
    fibers_checked: int
    connected: bool
    failing_fiber: Vec | None = None

    def as_json(self) -> dict:
        return {
            "bound": self.degree_bound,
            "fibers_checked": self.fibers_checked,
            "connected": self.connected,
            "failing_fiber": list(self.failing_fiber) if self.failing_fiber else None,
        }


def encoded_gale_rows(fan: Fan) -> list[list[int]]:
    """The package's reference B per case, parameters substituted."""
    case = fan.family.case_id
    p = fan.family.as_dict()
    if case == "2.0.1":
        l = p["l"]
        return [[1, 1, 0, 0, 0], [-l, 0, 1, 1, 1]]
    if case == "2.0.2":
        l1, l2 = p["l1"], p["l2"]
        return [[1, 1, 1, 0, 0], [-l1, -l2, 0, 1, 1]]
    if case in ("3.0.1", "3.0.2"):
        r, a, b = p["r"], p["a"], p["b"]
        return [[1, 1, -r, 0, -a, 0], [0, 0, 1, 1, -b, 0], [0, 0, 0, 0, 1, 1]]
    if case == "3.1.1":
        b1 = p["b1"]
        return [[1, 1, 0, 1, -b1 - 1, 0], [0, 0, 1, -1, 1, 0], [0, 0, 0, 0, 1, 1]]
    if case == "3.1.2":
        b1 = p["b1"]
        return [[1, 0, 1, 1, -b1 - 1, 0], [0, 1, -1, -1, 1, 0], [0, 0, 0, 0, 1, 1]]
    if case == "3.1.3":
        b1, c2 = p["b1"], p["c2"]
        return [[1, 0, 1, -b1 - 1, 0, -c2], [0, 1, -1, 1, 0, 0], [0, 0, 0, 1, 1, 1]]
    if case == "3.1.4":
        b1, b2 = p["b1"], p["b2"]
        return [[1, 0, 1, -b1 - 1, -b2 - 1, 0], [0, 1, -1, 1, 1, 0], [0, 0, 0, 1, 1, 1]]
    if case == "3.1.5":
        b1 = p["b1"]
        return [[1, 0, 0, 1, -b1 - 1, 0], [0, 1, 1, -1, 1, 0], [0, 0, 0, 0, 1, 1]]
    raise ValueError(f"no encoded matrix for case {case!r}")


def markov_candidate(fan: Fan) -> tuple[Vec, ...]:
    """The reference Markov move set per case, parameters substituted."""
    case = fan.family.case_id
    p = fan.family.as_dict()
    if case == "2.0.1":
        l = p["l"]
        cols = [[1, -1, 0, 0, l], [0, 0, 1, 0, -1], [0, 0, 0, 1, -1]]
    elif case == "2.0.2":
        l1, l2 = p["l1"], p["l2"]
        cols = [[1, -1, 0, 0, l1 - l2], [0, 1, -1, 0, l2], [0, 0, 0, 1, -1]]
    elif case in ("3.0.1", "3.0.2"):
        r, a, b = p["r"], p["a"], p["b"]
        cols = [[1, -1, 0, 0, 0, 0], [0, r, 1, -1, 0, 0], [0, a + b * r, b, 0, 1, -1]]
    elif case == "3.1.1":
        b1 = p["b1"]
        cols = [[1, 0, -1, -1, 0, 0], [0, 1, -1, -1, 0, 0], [0, 0, b1, b1 + 1, 1, -1]]
    elif case == "3.1.2":
        b1 = p["b1"]
        cols = [[1, -1, -1, 0, 0, 0], [0, 0, -1, 1, 0, 0], [0, b1, b1 + 1, 0, 1, -1]]
    elif case == "3.1.3":
        b1, c2 = p["b1"], p["c2"]
        cols = [
            [1, -1, -1, 0, 0, 0],
            [0, b1, b1 + 1, 1, -1, 0],
            [0, b1 - c2, b1 + 1 - c2, 1, 0, -1],
        ]
    elif case == "3.1.4":
        b1, b2 = p["b1"], p["b2"]
        cols = [
            [1, -1, -1, 0, 0, 0],
            [0, b1, b1 + 1, 1, 0, -1],
            [0, b1 - b2, b1 - b2, 1, -1, 0],
        ]
    elif case == "3.1.5":
        b1 = p["b1"]
        cols = [[1, -1, 0, -1, 0, 0], [0, -1, 1, 0, 0, 0], [0, b1, 0, b1 + 1, 1, -1]]
    else:
        raise ValueError(f"no encoded move set for case {case!r}")
    return tuple(tuple(c) for c in cols)


@lru_cache(maxsize=None)
def gale_matrix(fan: Fan) -> GaleMatrix:
    """Class map recomputed from the ray matrix, checked against the
    encoded reference.  A mismatch means the package's own data is bad and
    raises InternalInconsistencyError."""
    basis = picard_basis(fan)
    b = basis.reduction
    encoded = encoded_gale_rows(fan)
    if b.to_rows() != encoded:
        raise InternalInconsistencyError(
            f"recomputed class map differs from the encoded matrix for "
            f"case {fan.family.case_id}: {b.to_rows()} vs {encoded}"
        )
    a = IntMat.from_rows(fan.rays)
    for j in range(3):
        if any(x != 0 for x in b.mul_vec(a.col(j))):
            raise InternalInconsistencyError("class map does not annihilate the ray matrix")
    return GaleMatrix(b, fan.ray_labels, basis.labels())


def _particular_solution(fan: Fan, image: Vec) -> Vec:
    """Integer preimage of an image vector: put it on the basis rays."""
    basis = picard_basis(fan)
    v = [0] * fan.nrays
    for c, i in zip(image, basis.basis_rays):
        v[i] = c
    return tuple(v)


@lru_cache(maxsize=None)
def fiber_elements(fan: Fan, image: Vec) -> tuple[Vec, ...]:
    """The full fiber {v >= 0 : B v = image}, via a bounded polytope slice.

    Writing v = v0 + A m, nonnegativity becomes <m, u_rho> >= -v0_rho, a
    bounded polytope because the fan is complete; its lattice points are in
    bijection with the fiber.
    """
    v0 = _particular_solution(fan, image)
    pts = lattice_points(offset_polytope(fan, tuple(-c for c in v0)))
    out = []
    for m in pts:
        out.append(
            tuple(c + u[0] * m[0] + u[1] * m[1] + u[2] * m[2] for c, u in zip(v0, fan.rays))
        )
    return tuple(sorted(out))


_PACK_BASE = 4096
_PACK_OFFSET = 1024
_PACK_LIMIT = 900


def _connected_under(fiber: Sequence[Vec], moves: Sequence[Vec]) -> bool:
    """Connectivity of the fiber under the signed moves.

    Elements are packed into single integers (offset digits in a base wide
    enough that componentwise addition never carries), so each BFS step is
    one integer addition and a set lookup.
    """
    if len(fiber) <= 1:
        return True
    if not moves:
        return False
    small = all(
        all(abs(x) <= _PACK_LIMIT for x in v) for v in fiber
    ) and all(all(abs(x) <= _PACK_LIMIT for x in m) for m in moves)
    if not small:  # pragma: no cover - desk-scale inputs never get here
        return _connected_under_tuples(fiber, moves)
    weights = [_PACK_BASE**i for i in range(len(fiber[0]))]

    def pack(v, offset):
        return sum((x + offset) * w for x, w in zip(v, weights))

    members = {pack(v, _PACK_OFFSET) for v in fiber}
    deltas = set()
    for m in moves:
        p = pack(m, 0)
        deltas.add(p)
        deltas.add(-p)
    deltas.discard(0)
    start = next(iter(members))
    stack = [start]
    seen = {start}
    n = len(members)
    while stack:
        v = stack.pop()
        for dlt in deltas:
            w = v + dlt
            if w in members and w not in seen:
                seen.add(w)
                stack.append(w)
        if len(seen) == n:
            return True
    return len(seen) == n


def _connected_under_tuples(fiber: Sequence[Vec], moves: Sequence[Vec]) -> bool:
    members = set(fiber)
    start = fiber[0]
    stack = [start]
    seen = {start}
    while stack:
        v = stack.pop()
        for mv in moves:
            for sgn in (1, -1):
                w = tuple(x + sgn * y for x, y in zip(v, mv))
                if w in members and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return len(seen) == len(members)


def fiber_graph_connected(fan: Fan, moves: Sequence[Vec], image: Sequence[int]) -> bool:
    """Connectivity of one fiber under the given moves (and their negatives).

    Every move must lie in ker(B); the enumeration guard of the lattice
    scan propagates for pathological inputs.
    """
    b = gale_matrix(fan).b
    for mv in moves:
        if any(x != 0 for x in b.mul_vec(mv)):
            raise ValueError(f"move {mv} is not in the kernel of the class map")
    fiber = fiber_elements(fan, tuple(int(x) for x in image))
    return _connected_under(fiber, [m for m in moves if any(m)])


def _degree_images(fan: Fan, bound: int) -> list[Vec]:
    """Distinct images of nonnegative vectors with coordinate sum <= bound."""
    b = gale_matrix(fan).b
    r = fan.nrays
    cols = [b.col(j) for j in range(r)]
    k = len(cols[0])
    images: set[Vec] = set()
    stack: list[tuple[int, Vec, int]] = [(0, (0,) * k, 0)]
    while stack:
        j, acc, used = stack.pop()
        if j == r:
            images.add(acc)
            continue
        for c in range(bound - used + 1):
            nxt = tuple(a + c * x for a, x in zip(acc, cols[j]))
            stack.append((j + 1, nxt, used + c))
    return sorted(images)


def markov_verify(fan: Fan, candidate: Sequence[Vec], bound: int = DEFAULT_MARKOV_BOUND) -> FiberCertificate:
    """Bounded Markov verification: connectivity of every fiber reached by
    a vector of coordinate sum <= bound.

    This certifies the move set up to the bound; it is exact but not a
    proof for all degrees.  Connectivity is first attempted with a small
    subset of short moves and falls back to the full set per fiber, which
    never changes the verdict, only the running time.
    """
    b = gale_matrix(fan).b
    moves = []
    for mv in candidate:
        mv = tuple(int(x) for x in mv)
        if any(x != 0 for x in b.mul_vec(mv)):
            raise ValueError(f"candidate move {mv} is not in the kernel of the class map")
        if any(mv):
            moves.append(mv)
    primary = sorted(set(moves), key=lambda m: sum(abs(x) for x in m))[:8]
    checked = 0
    for image in _degree_images(fan, bound):
        fiber = fiber_elements(fan, image)
        checked += 1
        if len(fiber) <= 1:
            continue
        if _connected_under(fiber, primary):
            continue
        if not _connected_under(fiber, moves):
            return FiberCertificate(bound, checked, False, image)
    return FiberCertificate(bound, checked, True)


@dataclass(frozen=True)
class ConnectedSectionsReport:
    """Result of the sufficient connected-sections criterion.

    The move set is the difference set of the embedded lattice points of
    P(E'); the configuration (E+E', E) has connected sections whenever that
    set passes the Markov verification.
    """

    moves: tuple[Vec, ...]
    certificate: FiberCertificate
    idp_ok: bool | None

    @property
    def ok(self) -> bool:
        return self.certificate.connected and self.idp_ok is not False

    def as_json(self) -> dict:
        return {
            "moves": [list(m) for m in self.moves],
            "certificate": self.certificate.as_json(),
            "idp_checked": self.idp_ok,
            "passes": self.ok,
        }


def section_difference_moves(eprime: TDivisor) -> tuple[Vec, ...]:
    """Difference set i(P(E') cap Z^3) - itself, embedded by the ray pairing.

    The embedding m -> (<m, u_rho>)_rho identifies lattice points of P(E')
    with their monomial exponent vectors; differences land in ker(B).
    Moves are normalised up to sign and deduplicated, zero dropped.
    """
    fan = eprime.fan
    pts = lattice_points(
        offset_polytope(fan, tuple(-c for c in eprime.coeffs))
    )
    diffs: set[Vec] = set()
    for p in pts:
        for q in pts:
            if p == q:
                continue
            m = tuple(a - b for a, b in zip(p, q))
            emb = tuple(u[0] * m[0] + u[1] * m[1] + u[2] * m[2] for u in fan.rays)
            if emb < tuple(-x for x in emb):
                emb = tuple(-x for x in emb)
            diffs.add(emb)
    return tuple(sorted(diffs))


def connected_sections_check(
    e: TDivisor,
    eprime: TDivisor,
    bound: int = DEFAULT_MARKOV_BOUND,
    verify_idp: bool = True,
) -> ConnectedSectionsReport:
    """Sufficient criterion for (E+E', E) to have connected sections.

    Both divisors must be nef; the decomposition property of the pair holds
    on these fans for every nef pair and is re-checked by enumeration when
    verify_idp is set.
    """
    if not (is_nef(e) and is_nef(eprime)):
        raise ValueError("connected-sections check needs a nef pair")
    idp_ok: bool | None = None
    if verify_idp:
        from .polytopes import idp_check

        idp_ok = idp_check(e, eprime).ok
    moves = section_difference_moves(eprime)
    cert = markov_verify(e.fan, moves, bound)
    return ConnectedSectionsReport(moves, cert, idp_ok)
