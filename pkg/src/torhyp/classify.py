"""Hyperbolicity verdicts: boundary genus analysis, sufficient-condition
derivation, and comparison against the package's reference tables.

The derivation engine is one-sided: a Hyperbolic verdict carries a full
machine-checked certificate (boundary curve genera at least two, a passing
connected-sections move verification, nef adjoint class, strictly positive
pairing numbers), a NotHyperbolic verdict names a boundary curve of genus
at most one (or a degenerate surface class), and everything else is Open.
The reference tables record the sharper published classification; the
comparator only demands that the two never contradict each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Callable, Iterable, Mapping, Sequence

from .divisors import (
    TDivisor,
    ample_reference,
    canonical_divisor,
    class_of,
    divisor,
    eff_generators,
    is_ample,
    is_nef,
)
from .fans import FamilySpec, Fan, ParameterError, build_family_fan
from .polytopes import dimension, interior_lattice_count, min_face, polytope_of, triple_intersection
from .toric_ideal import DEFAULT_MARKOV_BOUND, FiberCertificate, markov_verify, section_difference_moves

HYPERBOLIC = "Hyperbolic"
NOT_HYPERBOLIC = "NotHyperbolic"
OPEN = "Open"
UNLISTED = "Unlisted"
AMBIGUOUS = "Ambiguous"

COEFF_NAMES: dict[str, tuple[str, ...]] = {
    "2.0.1": ("a", "b"),
    "2.0.2": ("a", "b"),
    "3.0.1": ("d", "e", "f"),
    "3.0.2": ("d", "e", "f"),
    "3.1.1": ("d", "e", "f"),
    "3.1.2": ("d", "e", "f"),
    "3.1.3": ("d", "e", "f"),
    "3.1.4": ("d", "e", "f"),
    "3.1.5": ("d", "e", "f"),
}


def surface_divisor(fan: Fan, coeffs: Sequence[int]) -> TDivisor:
    """The surface class of a cell, in the case's table parametrisation.

    Coefficients are coordinates along the nef cone: nonnegative tuples are
    exactly the nef classes.
    """
    case = fan.family.case_id
    names = COEFF_NAMES[case]
    if len(coeffs) != len(names):
        raise ParameterError(f"case {case} takes coefficients {names}")
    if any(c < 0 for c in coeffs):
        raise ParameterError("table coefficients are nonnegative")
    p = fan.family.as_dict()
    if case == "2.0.1":
        a, b = coeffs
        return divisor(fan, {"D_2": a, "D_3": b})
    if case == "2.0.2":
        a, b = coeffs
        return divisor(fan, {"D_3": a, "D_4": b})
    if case == "3.0.1":
        d, e, f = coeffs
        return divisor(fan, {"D_1": d, "D_4": e, "D_6": f})
    if case == "3.0.2":
        d, e, f = coeffs
        return divisor(fan, {"D_1": d, "D_4": e - p["b"] * f, "D_6": f})
    d, e, f = coeffs
    return divisor(fan, {"D_v1": d, "D_u1": f, "D_z1": e + f})


# Boundary genus profiles.


@dataclass(frozen=True)
class BoundaryEntry:
    ray_index: int
    label: str
    face_dim: int
    interior_count: int

    @property
    def carries_curve(self) -> bool:
        """A zero-dimensional face means the restriction is trivial and the
        very general surface misses that boundary divisor entirely."""
        return self.face_dim >= 1

    @property
    def genus(self) -> int | None:
        return self.interior_count if self.carries_curve else None


@dataclass(frozen=True)
class BoundaryProfile:
    divisor: TDivisor
    big: bool
    entries: tuple[BoundaryEntry, ...]

    def low_genus_entry(self) -> BoundaryEntry | None:
        for e in self.entries:
            if e.carries_curve and e.interior_count <= 1:
                return e
        return None

    def all_genus_at_least_two(self) -> bool:
        return self.big and self.low_genus_entry() is None

    def as_json(self) -> dict:
        return {
            "big": self.big,
            "entries": [
                {
                    "ray": e.label,
                    "face_dim": e.face_dim,
                    "interior_count": e.interior_count,
                    "carries_curve": e.carries_curve,
                }
                for e in self.entries
            ],
        }


def boundary_genus_profile(d: TDivisor) -> BoundaryProfile:
    """Per-ray minimum faces with their interior lattice counts.

    For a big divisor every one-dimensional face yields a rational boundary
    curve and every two-dimensional face a curve whose genus is the face's
    interior count; zero-dimensional faces yield no curve.  A nontrivial
    divisor that is not big always has a genus-zero boundary curve, which
    the profile records by the big flag.
    """
    if class_of(d).is_zero():
        raise ValueError("the zero class has no boundary profile")
    if not is_nef(d):
        raise ValueError("boundary profiles assume a nef divisor")
    big = dimension(polytope_of(d)) == 3
    entries = []
    for i in range(d.fan.nrays):
        face = min_face(d, i)
        entries.append(
            BoundaryEntry(i, d.fan.ray_labels[i], face.dim, interior_lattice_count(face))
        )
    return BoundaryProfile(d, big, tuple(entries))


# Connected-sections configurations: per case, the listed auxiliary nef
# divisors E' (by parameter condition); the configuration splits the surface
# class as D = E + E'.


@dataclass(frozen=True)
class SectionConfig:
    name: str
    applies: Callable[[Mapping[str, int]], bool]
    eprime_coeffs: Callable[[Mapping[str, int]], dict[str, int]]


SECTION_CONFIGS: dict[str, tuple[SectionConfig, ...]] = {
    "2.0.1": (
        SectionConfig("D_2+D_3", lambda p: p["l"] == 0, lambda p: {"D_2": 1, "D_3": 1}),
        SectionConfig("D_2", lambda p: p["l"] >= 1, lambda p: {"D_2": 1}),
    ),
    "2.0.2": (
        SectionConfig(
            "D_3+D_4", lambda p: p["l1"] == 0 and p["l2"] == 0, lambda p: {"D_3": 1, "D_4": 1}
        ),
        SectionConfig("D_3", lambda p: p["l2"] >= 1, lambda p: {"D_3": 1}),
    ),
    "3.0.1": (
        SectionConfig(
            "D_1+D_4+D_6",
            lambda p: p["r"] == 0 and p["a"] == 0 and p["b"] == 0,
            lambda p: {"D_1": 1, "D_4": 1, "D_6": 1},
        ),
        SectionConfig(
            "D_4+D_6",
            lambda p: p["b"] == 0 and p["r"] + p["a"] >= 1,
            lambda p: {"D_4": 1, "D_6": 1},
        ),
        SectionConfig(
            "D_1+D_6",
            lambda p: p["b"] >= 1 and p["r"] + p["a"] == 0,
            lambda p: {"D_1": 1, "D_6": 1},
        ),
        SectionConfig(
            "D_6", lambda p: p["b"] >= 1 and p["r"] + p["a"] >= 1, lambda p: {"D_6": 1}
        ),
    ),
    "3.0.2": (
        SectionConfig(
            "D_1+D_6-bD_4",
            lambda p: p["r"] + p["a"] == 0,
            lambda p: {"D_1": 1, "D_4": -p["b"], "D_6": 1},
        ),
        SectionConfig(
            "D_6-bD_4",
            lambda p: p["r"] + p["a"] >= 1,
            lambda p: {"D_4": -p["b"], "D_6": 1},
        ),
    ),
}


def _five_collection_configs(case: str, zero_cond) -> tuple[SectionConfig, ...]:
    return (
        SectionConfig("D_u1+D_z1", zero_cond, lambda p: {"D_u1": 1, "D_z1": 1}),
        SectionConfig("D_v1+D_z1", zero_cond, lambda p: {"D_v1": 1, "D_z1": 1}),
        SectionConfig("D_z1", _Z1_CONDS[case], lambda p: {"D_z1": 1}),
    )


_Z1_CONDS: dict[str, Callable[[Mapping[str, int]], bool]] = {
    "3.1.1": lambda p: p["b1"] > 1,
    "3.1.2": lambda p: p["b1"] > 1,
    "3.1.3": lambda p: not (p["b1"] == 0 and p["c2"] == 0),
    "3.1.4": lambda p: not (p["b1"] == 0 and p["b2"] == 0),
    "3.1.5": lambda p: p["b1"] > 1,
}

SECTION_CONFIGS["3.1.1"] = _five_collection_configs("3.1.1", lambda p: p["b1"] == 0)
SECTION_CONFIGS["3.1.2"] = _five_collection_configs("3.1.2", lambda p: p["b1"] == 0)
SECTION_CONFIGS["3.1.3"] = _five_collection_configs(
    "3.1.3", lambda p: p["b1"] == 0 and p["c2"] == 0
)
SECTION_CONFIGS["3.1.4"] = _five_collection_configs(
    "3.1.4", lambda p: p["b1"] == 0 and p["b2"] == 0
)
SECTION_CONFIGS["3.1.5"] = _five_collection_configs("3.1.5", lambda p: p["b1"] == 0)


def applicable_configs(fan: Fan) -> list[SectionConfig]:
    p = fan.family.as_dict()
    return [c for c in SECTION_CONFIGS[fan.family.case_id] if c.applies(p)]


@lru_cache(maxsize=None)
def _config_certificate(fan: Fan, eprime_key: tuple[int, ...], bound: int) -> FiberCertificate:
    """Markov verification of the difference move set of one E'.

    This is independent of the surface class, so it is cached per family
    member and auxiliary divisor.
    """
    eprime = TDivisor(fan, eprime_key)
    moves = section_difference_moves(eprime)
    return markov_verify(fan, moves, bound)


# Genus-bound machinery.


def noether_lefschetz_applicable(d: TDivisor) -> bool:
    """The adjoint class D + K must be nef for the class-restriction step."""
    return is_nef(d + canonical_divisor(d.fan))


def genus_bound_class(d: TDivisor, e: TDivisor):
    """Class of E + K, the pairing partner in the genus bound."""
    return class_of(e + canonical_divisor(d.fan))


@dataclass(frozen=True)
class PositivityCertificate:
    pairings: tuple[int, ...]
    degrees: tuple[int, ...]
    eff_labels: tuple[str, ...]
    epsilon: Fraction | None

    def as_json(self) -> dict:
        return {
            "pairings": list(self.pairings),
            "degrees": list(self.degrees),
            "effective_generators": list(self.eff_labels),
            "epsilon": str(self.epsilon) if self.epsilon is not None else None,
        }


def positivity_certificate(d: TDivisor, e: TDivisor, h: TDivisor) -> PositivityCertificate:
    """Pairings of E + K and degrees of H against the effective generators.

    alpha_i = (E+K) . D . F_i and beta_i = H . D . F_i over the effective
    cone generators F_i.  When every alpha_i is at least one, epsilon is
    min(alpha_i / beta_i) capped at one, which bounds 2g - 2 from below by
    epsilon times the degree for every movable curve class.
    """
    if not is_ample(h):
        raise ValueError("the degree normaliser must be ample")
    fan = d.fan
    ek = e + canonical_divisor(fan)
    gens = eff_generators(fan)
    labels = []
    alphas = []
    betas = []
    for g in gens:
        labels.append(next(iter(g.label_dict())))
        alphas.append(triple_intersection(ek, d, g))
        betas.append(triple_intersection(h, d, g))
    epsilon: Fraction | None = None
    if all(a >= 1 for a in alphas):
        assert all(b >= 1 for b in betas), "positive pairing with degenerate degree"
        epsilon = min(Fraction(a, b) for a, b in zip(alphas, betas))
        epsilon = min(epsilon, Fraction(1))
    return PositivityCertificate(tuple(alphas), tuple(betas), tuple(labels), epsilon)


# Reference verdict tables.


def _ge(n):
    return ("ge", n)


def _le(n):
    return ("le", n)


def _eq(n):
    return ("eq", n)


def _in(*vals):
    return ("in", tuple(vals))


_ANY = ("any", None)


def _match1(pred, value: int) -> bool:
    op, arg = pred
    if op == "ge":
        return value >= arg
    if op == "le":
        return value <= arg
    if op == "eq":
        return value == arg
    if op == "in":
        return value in arg
    return True


@dataclass(frozen=True)
class TableRow:
    outcome: str
    preds: tuple
    permute: bool = False
    uncertain_permutation: bool = False
    cond: Callable[[Mapping[str, int]], bool] | None = None

    def matches(self, coeffs: Sequence[int], params: Mapping[str, int], allow_permute: bool) -> bool:
        if self.cond is not None and not self.cond(params):
            return False
        tuples = [self.preds]
        if self.permute and allow_permute:
            tuples = list(set(permutations(self.preds)))
        return any(all(_match1(p, c) for p, c in zip(t, coeffs)) for t in tuples)


@dataclass(frozen=True)
class TableBlock:
    name: str
    applies: Callable[[Mapping[str, int]], bool]
    rows: tuple[TableRow, ...]
    imported: bool = False
    # The general rank-3 splitting block lists its hyperbolic region as
    # "everything with e,f >= 2 except the not-hyperbolic column"; the same
    # proviso governs its parameter-dependent threshold rows, so in this
    # block a not-hyperbolic match silences every hyperbolic row.
    hyp_yields_to_nothyp: bool = False


def _rows(hyp, nothyp, open_):
    rows = [TableRow(HYPERBOLIC, p) for p in hyp]
    rows += [TableRow(NOT_HYPERBOLIC, p) for p in nothyp]
    rows += [TableRow(OPEN, p) for p in open_]
    return tuple(rows)


VERDICT_TABLES: dict[str, tuple[TableBlock, ...]] = {}

VERDICT_TABLES["2.0.1"] = (
    TableBlock(
        "l=0",
        lambda p: p["l"] == 0,
        _rows(
            [(_ge(3), _ge(4)), (_eq(2), _ge(5))],
            [(_le(1), _ANY), (_ANY, _le(3)), (_eq(2), _eq(4))],
            [],
        ),
        imported=True,
    ),
    TableBlock(
        "l=1",
        lambda p: p["l"] == 1,
        _rows(
            [(_ge(3), _ge(4)), (_eq(2), _ge(5)), (_ge(5), _eq(0))],
            [(_le(1), _ANY), (_ANY, _in(1, 2, 3)), (_le(4), _eq(0))],
            [],
        ),
        imported=True,
    ),
    TableBlock(
        "l=2",
        lambda p: p["l"] == 2,
        _rows(
            [(_ge(3), _ge(4)), (_eq(2), _ge(7)), (_ge(4), _eq(0))],
            [(_le(1), _ANY), (_ANY, _in(1, 2, 3)), (_eq(2), _eq(0))],
            [(_eq(2), _in(4, 5, 6)), (_eq(3), _eq(0))],
        ),
    ),
    TableBlock(
        "l=3",
        lambda p: p["l"] == 3,
        _rows(
            [(_ge(3), _ge(4)), (_eq(2), _ge(7)), (_ge(4), _eq(0))],
            [(_le(1), _ANY), (_ANY, _in(1, 2, 3))],
            [(_eq(2), _in(4, 5, 6)), (_in(2, 3), _eq(0))],
        ),
    ),
    TableBlock(
        "l>=4",
        lambda p: p["l"] >= 4,
        _rows(
            [(_ge(3), _ge(4)), (_eq(2), _ge(7)), (_ge(3), _eq(0))],
            [(_le(1), _ANY), (_ANY, _in(1, 2, 3))],
            [(_eq(2), _in(4, 5, 6)), (_eq(2), _eq(0))],
        ),
    ),
)

VERDICT_TABLES["2.0.2"] = (
    TableBlock(
        "l1=l2=0",
        lambda p: p["l1"] == 0 and p["l2"] == 0,
        _rows(
            [(_ge(4), _ge(3)), (_ge(5), _eq(2))],
            [(_le(3), _ANY), (_ANY, _le(1)), (_eq(4), _eq(2))],
            [],
        ),
        imported=True,
    ),
    TableBlock(
        "l1=0,l2>=1",
        lambda p: p["l1"] == 0 and p["l2"] >= 1,
        _rows(
            [(_ge(5), _ge(2))],
            [(_le(3), _ANY), (_ANY, _le(1))],
            [(_eq(4), _ge(2))],
        ),
    ),
    TableBlock(
        "l1>=1",
        lambda p: p["l1"] >= 1,
        _rows(
            [(_ge(5), _ANY)],
            [(_le(3), _ANY)],
            [(_eq(4), _ANY)],
        ),
    ),
)

VERDICT_TABLES["3.0.1"] = (
    TableBlock(
        "(0,0,0)",
        lambda p: p["r"] == 0 and p["a"] == 0 and p["b"] == 0,
        (
            TableRow(HYPERBOLIC, (_ge(3), _ge(3), _ge(3)), permute=True),
            TableRow(HYPERBOLIC, (_eq(2), _ge(4), _ge(4)), permute=True, uncertain_permutation=True),
            TableRow(NOT_HYPERBOLIC, (_le(1), _ANY, _ANY), permute=True),
            # The product symmetry extends the next row to all coordinate
            # orders, matching the low-genus boundary locus exactly.
            TableRow(NOT_HYPERBOLIC, (_eq(2), _le(3), _ANY), permute=True),
        ),
        imported=True,
    ),
    TableBlock(
        "(>=1,0,0)",
        lambda p: p["r"] >= 1 and p["a"] == 0 and p["b"] == 0,
        (
            TableRow(HYPERBOLIC, (_ge(2), _ge(3), _ge(3))),
            TableRow(HYPERBOLIC, (_ge(3), _ge(4), _eq(2))),
            TableRow(
                HYPERBOLIC,
                (_ge(2), _eq(2), _ge(4)),
                cond=lambda p: p["r"] != 1,
            ),
            TableRow(
                HYPERBOLIC,
                (_ge(3), _eq(2), _ge(4)),
                cond=lambda p: p["r"] == 1,
            ),
            TableRow(NOT_HYPERBOLIC, (_le(1), _ANY, _ANY), permute=True),
            TableRow(NOT_HYPERBOLIC, (_ANY, _eq(2), _in(2, 3))),
            TableRow(NOT_HYPERBOLIC, (_ANY, _eq(3), _eq(2))),
            TableRow(NOT_HYPERBOLIC, (_eq(2), _ANY, _eq(2))),
            TableRow(NOT_HYPERBOLIC, (_eq(2), _eq(2), _ge(1)), cond=lambda p: p["r"] == 1),
        ),
        imported=True,
    ),
    TableBlock(
        "(>=3,>=3,>=1)",
        lambda p: p["r"] >= 3 and p["a"] >= 3 and p["b"] >= 1,
        (
            TableRow(HYPERBOLIC, (_ANY, _ge(2), _ge(3))),
            TableRow(NOT_HYPERBOLIC, (_ANY, _le(1), _ANY)),
            TableRow(NOT_HYPERBOLIC, (_ANY, _ANY, _le(1))),
            TableRow(OPEN, (_ANY, _ge(2), _eq(2))),
        ),
    ),
    TableBlock(
        "general",
        lambda p: True,
        hyp_yields_to_nothyp=True,
        rows=(
            TableRow(NOT_HYPERBOLIC, (_le(0), _le(1), _ANY)),
            TableRow(NOT_HYPERBOLIC, (_ANY, _ANY, _le(1))),
            TableRow(NOT_HYPERBOLIC, (_ANY, _eq(2), _eq(2)), cond=lambda p: p["b"] == 0),
            TableRow(NOT_HYPERBOLIC, (_eq(1), _ANY, _ANY), cond=lambda p: p["a"] == 0),
            TableRow(NOT_HYPERBOLIC, (_eq(2), _ANY, _eq(2)), cond=lambda p: p["a"] == 0),
            TableRow(NOT_HYPERBOLIC, (_le(1), _ANY, _eq(2)), cond=lambda p: p["a"] == 1),
            TableRow(NOT_HYPERBOLIC, (_eq(0), _ANY, _eq(2)), cond=lambda p: p["a"] == 2),
            TableRow(NOT_HYPERBOLIC, (_le(1), _ANY, _ANY), cond=lambda p: p["r"] == 0),
            TableRow(NOT_HYPERBOLIC, (_eq(2), _eq(2), _ANY), cond=lambda p: p["r"] == 0),
            TableRow(NOT_HYPERBOLIC, (_le(1), _eq(2), _ANY), cond=lambda p: p["r"] == 1),
            TableRow(NOT_HYPERBOLIC, (_eq(0), _eq(2), _ANY), cond=lambda p: p["r"] == 2),
        ),
    ),
)


VERDICT_TABLES["3.0.2"] = (
    TableBlock(
        "(0,0)",
        lambda p: p["r"] == 0 and p["a"] == 0,
        _rows(
            [(_ge(4), _ge(2), _ge(4))],
            [
                (_ANY, _ANY, _le(1)),
                (_ANY, _le(1), _ANY),
                (_le(1), _ge(2), _ge(2)),
                (_eq(2), _eq(2), _ge(2)),
                (_eq(2), _ge(2), _eq(2)),
            ],
            [(_eq(2), _ge(3), _ge(3)), (_eq(3), _ge(2), _ge(2)), (_ge(4), _ge(2), _in(2, 3))],
        ),
    ),
    TableBlock(
        "(0,>=1)",
        lambda p: p["r"] == 0 and p["a"] >= 1,
        _rows(
            [(_ge(4), _ge(2), _ge(4))],
            [(_ANY, _ANY, _le(1)), (_ANY, _le(1), _ANY), (_le(1), _ge(2), _ge(2))],
            [(_in(2, 3), _ge(2), _ge(2)), (_ge(4), _ge(2), _in(2, 3))],
        ),
    ),
    TableBlock(
        "(>=1,0)",
        lambda p: p["r"] >= 1 and p["a"] == 0,
        _rows(
            [(_ge(4), _ge(2), _ge(4))],
            [
                (_ANY, _ANY, _le(1)),
                (_ANY, _le(1), _ANY),
                (_le(1), _ge(2), _ge(2)),
                (_eq(2), _ge(2), _eq(2)),
            ],
            [(_eq(2), _ge(2), _ge(3)), (_eq(3), _ge(2), _ge(2)), (_ge(4), _ge(2), _eq(3))],
        ),
    ),
    TableBlock(
        "(>=1,1)",
        lambda p: p["r"] >= 1 and p["a"] == 1,
        _rows(
            [(_ge(4), _ge(2), _ge(4))],
            [(_ANY, _ANY, _le(1)), (_ANY, _le(1), _ANY), (_le(1), _ge(2), _eq(2))],
            [(_le(3), _ge(2), _ge(3)), (_ge(4), _ge(2), _in(2, 3))],
        ),
    ),
    TableBlock(
        "(>=1,2)",
        lambda p: p["r"] >= 1 and p["a"] == 2,
        _rows(
            [(_ge(4), _ge(2), _ge(4))],
            [(_ANY, _ANY, _le(1)), (_ANY, _le(1), _ANY), (_eq(0), _ge(2), _eq(2))],
            [(_eq(0), _ge(2), _ge(3)), (_in(1, 2, 3), _ge(2), _ge(2)), (_ge(4), _ge(2), _in(2, 3))],
        ),
    ),
    TableBlock(
        "(>=1,>=3)",
        lambda p: p["r"] >= 1 and p["a"] >= 3,
        _rows(
            [(_ge(4), _ge(2), _ge(4))],
            [(_ANY, _ANY, _le(1)), (_ANY, _le(1), _ANY)],
            [(_le(3), _ge(2), _ge(2)), (_ge(4), _ge(2), _in(2, 3))],
        ),
    ),
)


def _blocks_311():
    hyp = [(_ge(4), _ge(3), _ge(2)), (_ge(4), _eq(2), _ge(3)), (_ge(4), _eq(0), _ge(5))]
    nothyp = [(_in(1, 2, 3), _ANY, _ANY), (_ANY, _ANY, _le(1)), (_ANY, _eq(1), _ANY)]
    open_ = [(_ge(4), _eq(2), _eq(2)), (_ge(4), _eq(0), _in(2, 3, 4))]
    return (
        TableBlock(
            "b1=0",
            lambda p: p["b1"] == 0,
            _rows(
                hyp,
                nothyp + [(_eq(0), _eq(0), _le(3)), (_eq(0), _ge(2), _le(3))],
                open_ + [(_eq(0), _ge(2), _ge(4)), (_eq(0), _eq(0), _ge(4))],
            ),
        ),
        TableBlock(
            "b1=1",
            lambda p: p["b1"] == 1,
            _rows(
                hyp,
                nothyp + [(_eq(0), _eq(0), _le(2)), (_eq(0), _ge(2), _le(2))],
                open_ + [(_eq(0), _ge(2), _ge(3)), (_eq(0), _eq(0), _ge(3))],
            ),
        ),
        TableBlock(
            "b1>=2",
            lambda p: p["b1"] >= 2,
            _rows(
                hyp,
                nothyp,
                open_ + [(_eq(0), _ge(2), _ge(2)), (_eq(0), _eq(0), _ge(2))],
            ),
        ),
    )


VERDICT_TABLES["3.1.1"] = _blocks_311()


def _blocks_312():
    hyp = [(_ge(4), _ge(4), _ge(1))]
    nothyp = [(_in(1, 2, 3), _ANY, _ANY), (_ANY, _in(1, 2, 3), _ANY)]
    open_ = [(_ge(4), _ge(4), _eq(0)), (_ge(4), _eq(0), _ge(2))]
    return (
        TableBlock(
            "b1=0",
            lambda p: p["b1"] == 0,
            _rows(
                hyp,
                nothyp
                + [(_eq(0), _ge(4), _le(1)), (_ge(4), _eq(0), _le(1)), (_eq(0), _eq(0), _le(3))],
                open_ + [(_eq(0), _ge(4), _ge(2)), (_eq(0), _eq(0), _ge(4))],
            ),
        ),
        TableBlock(
            "b1=1",
            lambda p: p["b1"] == 1,
            _rows(
                hyp,
                nothyp + [(_ge(4), _eq(0), _le(1)), (_eq(0), _eq(0), _le(2))],
                open_ + [(_eq(0), _ge(4), _ANY), (_eq(0), _eq(0), _ge(3))],
            ),
        ),
        TableBlock(
            "b1>=2",
            lambda p: p["b1"] >= 2,
            _rows(
                hyp,
                nothyp + [(_ge(4), _eq(0), _le(1)), (_eq(0), _eq(0), _le(1))],
                open_ + [(_eq(0), _ge(4), _ANY), (_eq(0), _eq(0), _ge(2))],
            ),
        ),
    )


VERDICT_TABLES["3.1.2"] = _blocks_312()

VERDICT_TABLES["3.1.3"] = (
    TableBlock(
        "c2=0",
        lambda p: p["c2"] == 0,
        _rows(
            [(_ge(2), _ge(4), _ge(2))],
            [
                (_ANY, _in(1, 2, 3), _ANY),
                (_ANY, _ANY, _le(1)),
                (_le(1), _ge(4), _ge(2)),
                (_ANY, _eq(0), _le(3)),
                (_le(1), _eq(0), _ANY),
            ],
            [(_ge(2), _eq(0), _ge(4))],
        ),
    ),
    TableBlock(
        "b1=0,c2=1",
        lambda p: p["b1"] == 0 and p["c2"] == 1,
        _rows(
            [(_ge(1), _ge(4), _ge(2))],
            [(_ANY, _in(1, 2, 3), _ANY), (_ANY, _ANY, _le(1)), (_ANY, _eq(0), _le(3))],
            [(_eq(0), _ge(4), _ge(2)), (_ANY, _eq(0), _ge(4))],
        ),
    ),
    TableBlock(
        "c2-positive",
        lambda p: (p["b1"] == 0 and p["c2"] >= 2) or (p["b1"] >= 1 and p["c2"] >= 1),
        _rows(
            [(_ANY, _ge(4), _ge(2))],
            [(_ANY, _in(1, 2, 3), _ANY), (_ANY, _ANY, _le(1)), (_ANY, _eq(0), _le(3))],
            [(_ANY, _eq(0), _ge(4))],
        ),
    ),
)

VERDICT_TABLES["3.1.4"] = (
    TableBlock(
        "b1=b2=0",
        lambda p: p["b1"] == 0 and p["b2"] == 0,
        _rows(
            [(_ge(1), _ge(2), _ge(4))],
            [
                (_ANY, _ANY, _in(1, 2, 3)),
                (_ANY, _le(1), _ANY),
                (_ANY, _le(3), _eq(0)),
                (_le(1), _ANY, _eq(0)),
            ],
            [(_eq(0), _ge(2), _ge(4)), (_ge(2), _ge(4), _eq(0))],
        ),
    ),
    TableBlock(
        "one-positive",
        lambda p: (p["b1"] >= 1 and p["b2"] == 0) or (p["b1"] == 0 and p["b2"] >= 1),
        _rows(
            [(_ANY, _ge(2), _ge(4))],
            [
                (_ANY, _ANY, _in(1, 2, 3)),
                (_ANY, _le(1), _ANY),
                (_ANY, _le(3), _eq(0)),
                (_le(1), _ANY, _eq(0)),
            ],
            [(_ge(2), _ge(4), _eq(0))],
        ),
    ),
    TableBlock(
        "both-positive",
        lambda p: p["b1"] >= 1 and p["b2"] >= 1,
        _rows(
            [(_ANY, _ge(2), _ge(4))],
            [(_ANY, _ANY, _in(1, 2, 3)), (_ANY, _le(1), _ANY), (_ANY, _le(3), _eq(0))],
            [(_ANY, _ge(4), _eq(0))],
        ),
    ),
)

VERDICT_TABLES["3.1.5"] = (
    TableBlock(
        "all",
        lambda p: True,
        _rows(
            [(_ge(2), _ANY, _ge(5)), (_ge(2), _ge(1), _eq(4))],
            [
                (_ANY, _ANY, _in(1, 2, 3)),
                (_in(0, 1), _ANY, _ANY),
                (_in(2, 3), _ANY, _eq(0)),
                (_ANY, _in(0, 1), _eq(0)),
            ],
            [(_ge(2), _eq(0), _eq(4)), (_ge(4), _ge(2), _eq(0))],
        ),
    ),
)


def _general_301_hyp_rows(p: Mapping[str, int]) -> list[TableRow]:
    """Parameter-dependent hyperbolic thresholds of the general block.

    The whole column is guarded by e, f >= 2, so the thresholds are
    tightened to at least 2 coordinate-wise.
    """
    r, a, b = p["r"], p["a"], p["b"]
    lo = lambda t: _ge(max(2, t))
    return [
        TableRow(HYPERBOLIC, (_ge(4 - a - r), lo(4 - b), lo(3))),
        TableRow(HYPERBOLIC, (_ge(4 - a - r), lo(3 - b), lo(4))),
        TableRow(HYPERBOLIC, (_ge(3 - a - r), lo(4 - b), lo(4))),
    ]


@dataclass(frozen=True)
class TableOutcome:
    value: str
    matched: tuple[str, ...]
    block: str | None
    imported: bool
    ambiguous: bool

    def as_json(self) -> dict:
        return {
            "outcome": self.value,
            "matched": list(self.matched),
            "block": self.block,
            "imported_block": self.imported,
            "ambiguous": self.ambiguous,
        }


def _lookup_in_block(
    block: TableBlock, params: Mapping[str, int], coeffs: Sequence[int], allow_uncertain: bool
) -> tuple[str, ...]:
    rows = list(block.rows)
    if block.name == "general":
        rows += _general_301_hyp_rows(params)
    matched = []
    nothyp_hit = any(
        r.matches(coeffs, params, allow_permute=True)
        for r in rows
        if r.outcome == NOT_HYPERBOLIC
    )
    for row in rows:
        allow_permute = True
        if row.uncertain_permutation and not allow_uncertain:
            allow_permute = False
        if row.outcome == HYPERBOLIC and nothyp_hit and block.hyp_yields_to_nothyp:
            continue
        if row.matches(coeffs, params, allow_permute=allow_permute):
            matched.append(row.outcome)
    return tuple(dict.fromkeys(matched))


def table_lookup(spec: FamilySpec, coeffs: Sequence[int]) -> TableOutcome:
    """Verdict of the encoded reference tables for one cell.

    Cells matching rows with conflicting outcomes, and cells whose outcome
    depends on the unresolved permutation reading of one row, come back as
    Ambiguous; cells matching nothing are Unlisted.
    """
    params = spec.as_dict()
    coeffs = tuple(int(c) for c in coeffs)
    block = next((b for b in VERDICT_TABLES[spec.case_id] if b.applies(params)), None)
    if block is None:
        return TableOutcome(UNLISTED, (), None, False, False)
    matched = _lookup_in_block(block, params, coeffs, allow_uncertain=True)
    strict = _lookup_in_block(block, params, coeffs, allow_uncertain=False)
    if len(set(matched)) > 1:
        return TableOutcome(AMBIGUOUS, matched, block.name, block.imported, True)
    val = matched[0] if matched else UNLISTED
    val_strict = strict[0] if strict else UNLISTED
    if val != val_strict:
        return TableOutcome(AMBIGUOUS, tuple(set(matched + strict)), block.name, block.imported, True)
    return TableOutcome(val, matched, block.name, block.imported, False)


# Verdict derivation.


@dataclass(frozen=True)
class Verdict:
    outcome: str
    evidence: dict
    table: TableOutcome

    @property
    def agree(self) -> bool:
        if self.table.value in (UNLISTED, AMBIGUOUS):
            return True
        return self.outcome == self.table.value

    @property
    def contradicts_table(self) -> bool:
        pair = {self.outcome, self.table.value}
        return pair == {HYPERBOLIC, NOT_HYPERBOLIC}

    def as_json(self) -> dict:
        return {
            "derived": {"outcome": self.outcome, "evidence": self.evidence},
            "table": self.table.as_json(),
            "agree": self.agree,
        }


def derive_verdict(
    spec: FamilySpec, coeffs: Sequence[int], bound: int = DEFAULT_MARKOV_BOUND
) -> Verdict:
    """Machine-checked verdict for one surface class.

    NotHyperbolic when the boundary contains a curve of genus at most one
    (or the class is trivial or not big); Hyperbolic when the boundary is
    clean and some listed configuration passes the connected-sections,
    adjoint-nef, and positivity checks; Open otherwise.
    """
    fan = build_family_fan(spec)
    table = table_lookup(spec, coeffs)
    d = surface_divisor(fan, coeffs)
    if class_of(d).is_zero():
        return Verdict(NOT_HYPERBOLIC, {"reason": "trivial class"}, table)
    profile = boundary_genus_profile(d)
    if not profile.big:
        return Verdict(
            NOT_HYPERBOLIC,
            {"reason": "class not big: genus 0 boundary curve", "boundary": profile.as_json()},
            table,
        )
    low = profile.low_genus_entry()
    if low is not None:
        return Verdict(
            NOT_HYPERBOLIC,
            {
                "reason": "boundary curve of genus <= 1",
                "ray": low.label,
                "face_dim": low.face_dim,
                "genus": low.interior_count,
                "boundary": profile.as_json(),
            },
            table,
        )
    tried: list[dict] = []
    if not noether_lefschetz_applicable(d):
        return Verdict(
            OPEN,
            {"reason": "adjoint class not nef", "boundary": profile.as_json()},
            table,
        )
    h = ample_reference(fan)
    for config in applicable_configs(fan):
        eprime = divisor(fan, config.eprime_coeffs(fan.family.as_dict()))
        e = d - eprime
        record = {"config": config.name}
        if not is_nef(eprime):
            # Out of the catalog's parameter domain (negative twists).
            record["skip"] = "E' not nef"
            tried.append(record)
            continue
        if not is_nef(e):
            record["skip"] = "E = D - E' not nef"
            tried.append(record)
            continue
        cert = _config_certificate(fan, eprime.coeffs, bound)
        record["connected_sections"] = cert.as_json()
        if not cert.connected:
            tried.append(record)
            continue
        pos = positivity_certificate(d, e, h)
        record["positivity"] = pos.as_json()
        tried.append(record)
        if pos.epsilon is not None:
            evidence = {
                "config": config.name,
                "eprime": eprime.label_dict(),
                "connected_sections": cert.as_json(),
                "adjoint_nef": True,
                "positivity": pos.as_json(),
                "epsilon": str(pos.epsilon),
                "boundary": profile.as_json(),
            }
            return Verdict(HYPERBOLIC, evidence, table)
    return Verdict(OPEN, {"reason": "no derivation applies", "tried": tried}, table)


def sweep(
    spec: FamilySpec,
    coeff_range: Sequence[int],
    bound: int = DEFAULT_MARKOV_BOUND,
) -> Iterable[dict]:
    """Derived and reference verdicts over a coefficient grid."""
    from itertools import product

    names = COEFF_NAMES[spec.case_id]
    for coeffs in product(coeff_range, repeat=len(names)):
        verdict = derive_verdict(spec, coeffs, bound)
        row = {"case": spec.case_id}
        row.update(spec.as_dict())
        row.update(dict(zip(names, coeffs)))
        row["derived"] = verdict.outcome
        row["table"] = verdict.table.value
        row["agree"] = verdict.agree
        yield row
