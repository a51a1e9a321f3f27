import random

import pytest

from pgarcs.errors import BudgetExceededError, ParseError
from pgarcs.gf import Field, field_for_order
from pgarcs.geometry import build_plane, incident
from pgarcs.group import (
    GroupElement,
    apply_to_line,
    apply_to_point,
    closure,
    compose,
    conjugate_element,
    conjugate_group,
    format_group_file,
    identity_element,
    inverse,
    make_element,
    orbits,
    parse_group_file,
    point_permutation,
)

S3_GENS = (
    ((0, 1, 0), (0, 0, 1), (1, 0, 0)),
    ((0, 1, 0), (1, 0, 0), (0, 0, 1)),
)

C0_Q13 = ((0, 1, 0), (1, 0, 0), (0, 0, 12))


def random_invertible(spec, rng):
    while True:
        mat = tuple(
            tuple(rng.randrange(spec.q) for _ in range(3)) for _ in range(3)
        )
        try:
            return make_element(spec, mat)
        except ValueError:
            continue


def test_identity_fixes_points():
    f = field_for_order(9)
    plane = build_plane(f)
    ident = identity_element(f)
    for p in plane.points:
        assert apply_to_point(f, ident, p) == p
        assert apply_to_line(f, ident, p) == p


def test_cyclic_shift_on_gf16_point():
    f = field_for_order(16)
    g = make_element(f, S3_GENS[0])
    # (1,4,0) -> (4,0,1), normalized to (1,0,inv(4))
    assert apply_to_point(f, g, (1, 4, 0)) == (1, 0, f.inv(4))


def test_action_is_permutation():
    f = Field(7)
    plane = build_plane(f)
    rng = random.Random(1)
    for _ in range(5):
        g = random_invertible(f, rng)
        perm = point_permutation(plane, g)
        assert sorted(perm) == list(range(plane.n))


def test_line_image_matches_pointwise_image():
    f = field_for_order(8)
    plane = build_plane(f)
    rng = random.Random(2)
    for _ in range(5):
        g = random_invertible(f, rng)
        for li in (0, 3, 17):
            line = plane.lines[li]
            moved = apply_to_line(f, g, line)
            image_pts = {
                apply_to_point(f, g, plane.points[j]) for j in plane.incidence[li]
            }
            expected = {plane.points[j] for j in plane.incidence[plane.line_index[moved]]}
            assert image_pts == expected


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_incidence_preserved_exhaustively(q):
    f = field_for_order(q)
    plane = build_plane(f)
    g = random_invertible(f, random.Random(q))
    pperm = point_permutation(plane, g)
    lmap = {
        i: plane.line_index[apply_to_line(f, g, l)] for i, l in enumerate(plane.lines)
    }
    for i, line in enumerate(plane.lines):
        for j, pt in enumerate(plane.points):
            assert incident(f, line, pt) == incident(
                f, plane.lines[lmap[i]], plane.points[pperm[j]]
            )


def test_s3_closure_order_6():
    for q in (16, 29):
        f = field_for_order(q)
        g = closure(f, [make_element(f, m) for m in S3_GENS])
        assert g.order == 6


def test_empty_generators_trivial_group():
    f = Field(5)
    g = closure(f, [])
    assert g.order == 1
    assert g.elements[0] == identity_element(f)


def test_c0_order_2():
    f = Field(13)
    g = closure(f, [make_element(f, C0_Q13)])
    assert g.order == 2


def test_closure_cap():
    f = Field(11)
    gens = [random_invertible(f, random.Random(3)) for _ in range(2)]
    with pytest.raises(BudgetExceededError):
        closure(f, gens, cap=50)


def test_scalar_normalization():
    f = Field(13)
    m = ((2, 5, 0), (1, 1, 7), (0, 3, 4))
    g1 = make_element(f, m)
    lam = 6
    m2 = tuple(tuple(f.mul(lam, v) for v in row) for row in m)
    assert make_element(f, m2) == g1


def test_action_law_composition():
    f = field_for_order(9)
    plane = build_plane(f)
    rng = random.Random(4)
    g = random_invertible(f, rng)
    h = random_invertible(f, rng)
    gh = compose(f, g, h)
    for p in plane.points:
        assert apply_to_point(f, gh, p) == apply_to_point(f, g, apply_to_point(f, h, p))
    assert compose(f, g, inverse(f, g)) == identity_element(f)


def test_frobenius_twist_composition():
    f = field_for_order(4)
    plane = build_plane(f)
    g = GroupElement(((1, 0, 0), (0, 1, 0), (0, 0, 1)), frob=1)
    h = make_element(f, ((0, 1, 0), (0, 0, 1), (1, 0, 0)), frob=1)
    gh = compose(f, g, h)
    assert gh.frob == 0
    for p in plane.points:
        assert apply_to_point(f, gh, p) == apply_to_point(f, g, apply_to_point(f, h, p))
    assert compose(f, h, inverse(f, h)) == identity_element(f)


def test_trivial_group_orbits():
    f = Field(3)
    plane = build_plane(f)
    od = orbits(plane, closure(f, []))
    assert od.ell == 13
    assert all(w == 1 for w in od.weights)
    assert od.point_rep == tuple(range(13))


def test_s3_orbits_gf29():
    f = Field(29)
    plane = build_plane(f)
    od = orbits(plane, closure(f, [make_element(f, m) for m in S3_GENS]))
    assert sum(od.weights) == 871
    assert len(od.point_orbits) == len(od.line_orbits) == od.ell


def test_c0_orbit_lengths():
    f = Field(13)
    plane = build_plane(f)
    od = orbits(plane, closure(f, [make_element(f, C0_Q13)]))
    assert set(od.weights) <= {1, 2}
    assert all(len(o) in (1, 2) for o in od.line_orbits)


def test_orbit_partition_properties():
    f = Field(7)
    plane = build_plane(f)
    g = closure(f, [random_invertible(f, random.Random(5))])
    od = orbits(plane, g)
    covered = sorted(i for o in od.point_orbits for i in o)
    assert covered == list(range(plane.n))
    assert sum(od.weights) == plane.n
    for oid, orbit in enumerate(od.point_orbits):
        assert od.point_rep[oid] == min(orbit)
        for i in orbit:
            assert od.point_orbit_of[i] == oid
        assert g.order % len(orbit) == 0


def test_conjugate_group():
    f = Field(29)
    s3 = closure(f, [make_element(f, m) for m in S3_GENS])
    ident = identity_element(f)
    assert conjugate_group(f, ident, s3).elements == s3.elements

    plane = build_plane(f)
    rng = random.Random(6)
    alpha = random_invertible(f, rng)
    conj = conjugate_group(f, alpha, s3)
    assert conj.order == 6
    od1 = orbits(plane, s3)
    od2 = orbits(plane, conj)
    assert sorted(od1.weights) == sorted(od2.weights)


def test_conjugate_element_identity():
    f = Field(5)
    rng = random.Random(7)
    a = random_invertible(f, rng)
    b = random_invertible(f, rng)
    assert conjugate_element(f, identity_element(f), b) == b
    ab = conjugate_element(f, a, b)
    assert conjugate_element(f, inverse(f, a), ab) == b


def test_group_file_round_trip():
    f = Field(13)
    gens = [make_element(f, C0_Q13), make_element(f, S3_GENS[0])]
    text = format_group_file(gens)
    assert parse_group_file(text, f) == gens
    assert parse_group_file("# comment\n" + text, f) == gens


def test_group_file_errors():
    f = Field(13)
    with pytest.raises(ParseError):
        parse_group_file("1 2 3\n", f)
    with pytest.raises(ParseError):
        parse_group_file("0 0 0 0 0 0 0 0 0\n", f)  # singular
    with pytest.raises(ParseError):
        parse_group_file("1 0 0 0 1 0 0 0 x\n", f)


def test_singular_matrix_rejected():
    f = Field(5)
    with pytest.raises(ValueError):
        make_element(f, ((1, 2, 3), (2, 4, 6), (0, 0, 1)))
