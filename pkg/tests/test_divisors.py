import pytest

from torhyp.divisors import (
    ample_reference,
    canonical_class,
    canonical_divisor,
    canonical_reference_coords,
    class_of,
    divisor,
    divisor_from_json,
    eff_generators,
    is_ample,
    is_big,
    is_nef,
    nef_coordinates,
    nef_generators,
    picard_basis,
    ray_divisor,
    ray_matrix,
    support_function_eval,
)
from torhyp.fans import family_fan

CASES = [
    ("2.0.1", {"l": 0}),
    ("2.0.1", {"l": 2}),
    ("2.0.2", {"l1": 0, "l2": 0}),
    ("2.0.2", {"l1": 1, "l2": 2}),
    ("3.0.1", {"r": 0, "a": 0, "b": 0}),
    ("3.0.1", {"r": 2, "a": 1, "b": 3}),
    ("3.0.2", {"r": 1, "a": 1, "b": -2}),
    ("3.1.1", {"b1": 0}),
    ("3.1.1", {"b1": 2}),
    ("3.1.2", {"b1": 1}),
    ("3.1.3", {"b1": 1, "c2": 2}),
    ("3.1.4", {"b1": 0, "b2": 1}),
    ("3.1.5", {"b1": 3}),
]


@pytest.fixture(params=CASES, ids=lambda c: f"{c[0]}-{c[1]}")
def fan(request):
    case, params = request.param
    return family_fan(case, **params)


def test_support_function_on_rays(fan):
    d = divisor(fan, [1] * fan.nrays)
    for u in fan.rays:
        assert support_function_eval(d, u) == -1
    assert support_function_eval(d, (0, 0, 0)) == 0


def test_support_function_201_collection_sum():
    fan = family_fan("2.0.1", l=2)
    d = divisor(fan, {"D_2": 3, "D_3": 5})
    # u_3 + u_4 + u_5 = 2 e_1 and the coefficient of D_1 is zero.
    assert support_function_eval(d, (2, 0, 0)) == 0


def test_support_function_signals_missing_cone():
    from torhyp.divisors import NotInFanError
    from torhyp.fans import Fan

    octant = Fan(((1, 0, 0), (0, 1, 0), (0, 0, 1)), ((0, 1, 2),), ("D_1", "D_2", "D_3"))
    d = divisor(octant, {"D_1": 1})
    with pytest.raises(NotInFanError):
        support_function_eval(d, (-1, 0, 0))


def test_nef_examples_201():
    fan = family_fan("2.0.1", l=1)
    assert is_nef(divisor(fan, {"D_2": 2, "D_3": 3}))
    assert is_ample(divisor(fan, {"D_2": 2, "D_3": 3}))
    assert not is_nef(divisor(fan, {"D_2": -1}))
    zero = divisor(fan, {})
    assert is_nef(zero) and not is_ample(zero)


def test_pic_reduction_kills_relations(fan):
    basis = picard_basis(fan)
    a = ray_matrix(fan)
    for j in range(3):
        assert basis.reduction.mul_vec(a.col(j)) == (0,) * basis.rank
    for pos, i in enumerate(basis.basis_rays):
        unit = tuple(1 if t == pos else 0 for t in range(basis.rank))
        assert class_of(ray_divisor(fan, fan.ray_labels[i])).coords == unit


def test_class_of_201_printed_relations():
    fan = family_fan("2.0.1", l=2)
    assert class_of(ray_divisor(fan, "D_1")).coords == (1, -2)
    assert class_of(ray_divisor(fan, "D_4")).coords == (0, 1)
    assert class_of(ray_divisor(fan, "D_5")).coords == (0, 1)
    assert class_of(divisor(fan, {})).is_zero()


def test_canonical_classes_match_reference(fan):
    assert canonical_class(fan).coords == canonical_reference_coords(fan)
    assert canonical_divisor(fan).coeffs == (-1,) * fan.nrays


def test_canonical_201_202_315_values():
    f1 = family_fan("2.0.1", l=2)
    assert canonical_class(f1).coords == (-2, -1)
    f2 = family_fan("2.0.2", l1=1, l2=2)
    assert canonical_class(f2).coords == (-3, 1)
    f3 = family_fan("3.1.5", b1=3)
    assert canonical_class(f3).coords == (2, -2, -2)


def test_nef_generators_are_nef(fan):
    for g in nef_generators(fan):
        assert is_nef(g)
    h = ample_reference(fan)
    assert is_ample(h)


def test_nef_generator_combos(fan):
    gens = nef_generators(fan)
    rank = len(gens)
    from itertools import product

    for combo in product(range(5), repeat=rank):
        d = divisor(fan, [0] * fan.nrays)
        for c, g in zip(combo, gens):
            d = d + c * g
        assert is_nef(d)
    for flip in range(rank):
        for other in (0, 2, 4):
            d = divisor(fan, [0] * fan.nrays)
            for i, g in enumerate(gens):
                d = d + (-1 if i == flip else other) * g
            assert not is_nef(d)


def test_eff_generators_cover_all_rays(fan):
    """Every ray divisor class decomposes nonnegatively over the printed
    effective generators."""
    from itertools import combinations

    from torhyp.intlin import IntMat, solve_exact

    gens = eff_generators(fan)
    basis = picard_basis(fan)
    gen_classes = [class_of(g).coords for g in gens]
    for i in range(fan.nrays):
        target = class_of(ray_divisor(fan, fan.ray_labels[i])).coords
        found = False
        for subset in combinations(range(len(gens)), basis.rank):
            mat = IntMat.from_rows(
                [[gen_classes[j][c] for j in subset] for c in range(basis.rank)]
            )
            try:
                sol = solve_exact(mat, list(target))
            except Exception:
                continue
            if sol is not None and all(x >= 0 for x in sol):
                found = True
                break
        assert found, f"ray {fan.ray_labels[i]} outside the printed effective cone"


def test_nef_coordinates_roundtrip(fan):
    gens = nef_generators(fan)
    d = gens[0] + 2 * gens[-1]
    coords = nef_coordinates(fan, class_of(d))
    assert coords[0] == 1 and coords[-1] == 2


def test_table2_nef_generators_302():
    fan = family_fan("3.0.2", r=1, a=1, b=-2)
    gens = nef_generators(fan)
    assert class_of(gens[2]).coords == (0, 2, 1)  # D_6 - b D_4 with b = -2


def test_is_big_examples():
    fan = family_fan("2.0.1", l=1)
    assert is_big(divisor(fan, {"D_2": 1, "D_3": 1}))
    assert not is_big(divisor(fan, {}))
    assert not is_big(divisor(fan, {"D_3": 1}))
    with pytest.raises(ValueError):
        is_big(divisor(fan, {"D_2": -1}))


def test_divisor_from_json():
    fan = family_fan("2.0.1", l=1)
    d = divisor_from_json(fan, {"coeffs": {"D_2": 2, "D_3": 3}})
    assert d.coeffs == (0, 2, 3, 0, 0)
    d2 = divisor_from_json(fan, {"class": [2, 3]})
    assert class_of(d2).coords == (2, 3)
    with pytest.raises(ValueError):
        divisor_from_json(fan, {"what": 1})
