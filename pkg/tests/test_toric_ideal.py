import pytest

from torhyp.divisors import divisor, ray_divisor
from torhyp.fans import family_fan
from torhyp.intlin import IntMat
from torhyp.toric_ideal import (
    connected_sections_check,
    fiber_elements,
    fiber_graph_connected,
    gale_matrix,
    markov_candidate,
    markov_verify,
    section_difference_moves,
)

GRID = [
    ("2.0.1", {"l": l}) for l in (0, 1, 2, 3)
] + [
    ("2.0.2", {"l1": l1, "l2": l2}) for l1 in (0, 1) for l2 in (l1, 3)
] + [
    ("3.0.1", {"r": r, "a": a, "b": b}) for r in (0, 2) for a in (0, 1) for b in (0, 2)
] + [
    ("3.0.2", {"r": r, "a": a, "b": b}) for r in (0, 1) for a in (0, 2) for b in (-1, -3)
] + [
    ("3.1.1", {"b1": b1}) for b1 in (-1, 0, 1, 2)
] + [
    ("3.1.2", {"b1": b1}) for b1 in (-1, 0, 1, 2)
] + [
    # Negative first parameters break the reference move sets in these two
    # cases (see test_markov_candidate_fails_negative_313), so the grid
    # stays nonnegative here.
    ("3.1.3", {"b1": b1, "c2": c2}) for b1 in (0, 2) for c2 in (0, 1)
] + [
    ("3.1.4", {"b1": b1, "b2": b2}) for b1 in (0, 2) for b2 in (0, 1)
] + [
    ("3.1.5", {"b1": b1}) for b1 in (-1, 0, 1, 2)
]


def test_gale_201_printed():
    fan = family_fan("2.0.1", l=2)
    g = gale_matrix(fan)
    assert g.b.to_rows() == [[1, 1, 0, 0, 0], [-2, 0, 1, 1, 1]]
    assert g.row_labels == ("D_2", "D_3")
    assert g.column_labels == ("D_1", "D_2", "D_3", "D_4", "D_5")


def test_gale_301_shape_and_labels():
    fan = family_fan("3.0.1", r=1, a=2, b=3)
    g = gale_matrix(fan)
    assert g.b.rows == 3 and g.b.cols == 6
    assert g.row_labels == ("D_1", "D_4", "D_6")


@pytest.mark.parametrize("case,params", GRID, ids=str)
def test_gale_annihilates_rays_everywhere(case, params):
    fan = family_fan(case, **params)
    g = gale_matrix(fan)
    a = IntMat.from_rows(fan.rays)
    for j in range(3):
        assert g.b.mul_vec(a.col(j)) == (0,) * g.b.rows


@pytest.mark.parametrize("case,params", GRID, ids=str)
def test_candidate_in_kernel(case, params):
    fan = family_fan(case, **params)
    b = gale_matrix(fan).b
    for mv in markov_candidate(fan):
        assert b.mul_vec(mv) == (0,) * b.rows


def test_fiber_of_single_variable_201():
    fan = family_fan("2.0.1", l=1)
    b = gale_matrix(fan).b
    image = b.col(2)  # class of the third ray divisor
    fiber = fiber_elements(fan, image)
    assert set(fiber) == {
        (0, 0, 1, 0, 0),
        (0, 0, 0, 1, 0),
        (0, 0, 0, 0, 1),
    }
    moves = [(0, 0, 1, -1, 0), (0, 0, 0, 1, -1)]
    assert fiber_graph_connected(fan, moves, image)


def test_fiber_single_element_connected():
    # The zero class has the origin as its only fiber element.
    fan = family_fan("2.0.1", l=0)
    assert fiber_elements(fan, (0, 0)) == ((0, 0, 0, 0, 0),)
    assert fiber_graph_connected(fan, [], (0, 0))


def test_markov_candidate_fails_negative_313():
    # With a negative first parameter the reference move set is provably
    # not a Markov basis: a three-element fiber splits in two.
    fan = family_fan("3.1.3", b1=-1, c2=1)
    cert = markov_verify(fan, markov_candidate(fan), bound=4)
    assert not cert.connected
    assert len(fiber_elements(fan, cert.failing_fiber)) >= 2


def test_empty_moves_disconnect_two_element_fiber():
    fan = family_fan("2.0.1", l=0)
    b = gale_matrix(fan).b
    image = b.col(2)
    assert len(fiber_elements(fan, image)) > 1
    assert not fiber_graph_connected(fan, [], image)


def test_move_outside_kernel_rejected():
    fan = family_fan("2.0.1", l=1)
    with pytest.raises(ValueError):
        fiber_graph_connected(fan, [(1, 0, 0, 0, 0)], (1, 0))


@pytest.mark.parametrize("case,params", GRID, ids=str)
def test_markov_candidates_verify_bound4(case, params):
    # Bound 4 keeps this quick; the acceptance suite runs the full bound-6
    # sweep over the complete grids.
    fan = family_fan(case, **params)
    cert = markov_verify(fan, markov_candidate(fan), bound=4)
    assert cert.connected, (case, params, cert)


def test_dropping_essential_move_fails():
    fan = family_fan("2.0.1", l=1)
    full = markov_candidate(fan)
    weak = [m for m in full if m != (1, -1, 0, 0, 1)]
    cert = markov_verify(fan, weak, bound=4)
    assert not cert.connected
    assert cert.failing_fiber is not None
    fiber = fiber_elements(fan, cert.failing_fiber)
    assert len(fiber) > 1


def test_section_moves_201():
    fan = family_fan("2.0.1", l=2)
    moves = section_difference_moves(ray_divisor(fan, "D_2"))
    required = {(1, -1, 0, 0, 2), (0, 0, 1, -1, 0), (0, 0, 0, 1, -1)}
    normalised = set(moves)
    for m in required:
        neg = tuple(-x for x in m)
        assert m in normalised or neg in normalised


def test_section_difference_set_symmetric_with_zero():
    # The underlying difference set contains 0 and is closed under
    # negation; the stored moves are its sign-normalised nonzero half and
    # every one of them lies in the kernel of the class map.
    fan = family_fan("3.1.2", b1=1)
    eprime = divisor(fan, {"D_u1": 1, "D_z1": 1})
    moves = section_difference_moves(eprime)
    assert moves
    b = gale_matrix(fan).b
    full = {m for m in moves} | {tuple(-x for x in m) for m in moves} | {(0,) * fan.nrays}
    for m in full:
        assert tuple(-x for x in m) in full
        assert b.mul_vec(m) == (0,) * b.rows


def test_connected_sections_201():
    fan = family_fan("2.0.1", l=2)
    d = divisor(fan, {"D_2": 2, "D_3": 2})
    eprime = ray_divisor(fan, "D_2")
    rep = connected_sections_check(d - eprime, eprime, bound=5)
    assert rep.ok and rep.idp_ok


def test_connected_sections_trivial_eprime_fails():
    fan = family_fan("2.0.1", l=1)
    e = divisor(fan, {"D_2": 1, "D_3": 1})
    rep = connected_sections_check(e, divisor(fan, {}), bound=4)
    assert not rep.ok
    assert rep.moves == ()


def test_connected_sections_requires_nef():
    fan = family_fan("2.0.1", l=1)
    with pytest.raises(ValueError):
        connected_sections_check(divisor(fan, {"D_2": -1}), ray_divisor(fan, "D_2"))
