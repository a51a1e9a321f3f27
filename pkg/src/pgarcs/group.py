"""Projective (semi)linear collineations of PG(2,q) and their orbits.

A group element is an invertible 3x3 matrix over GF(q) together with a
Frobenius exponent k; it maps a point x to M . x^(p^k) (coordinatewise
Frobenius first, then the matrix, acting on column vectors), taken up to
scalars.  Matrices are stored scalar-normalized: the first nonzero entry
in row-major order equals 1, which makes equality and hashing of
projective classes exact.  Groups are built by breadth-first closure from
generators, and orbit partitions on points and lines are computed from
the generators' permutations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError, ParseError
from .geometry import Plane, normalize_triple
from .gf import Field

__all__ = [
    "Group",
    "GroupElement",
    "OrbitData",
    "apply_to_line",
    "apply_to_point",
    "closure",
    "compose",
    "conjugate_element",
    "conjugate_group",
    "format_group_file",
    "identity_element",
    "inverse",
    "make_element",
    "orbits",
    "parse_group_file",
    "transpose_element",
]

CLOSURE_CAP = 10**6


@dataclass(frozen=True)
class GroupElement:
    """Scalar-normalized matrix plus Frobenius exponent."""

    mat: tuple
    frob: int = 0


def det3(spec: Field, m) -> int:
    mul = spec.mul_t
    add = spec.add_t
    neg = spec.neg_t
    (a, b, c), (d, e, f), (g, h, i) = m
    t1 = mul[a][add[mul[e][i]][neg[mul[f][h]]]]
    t2 = mul[b][add[mul[d][i]][neg[mul[f][g]]]]
    t3 = mul[c][add[mul[d][h]][neg[mul[e][g]]]]
    return add[add[t1][neg[t2]]][t3]


def matmul3(spec: Field, x, y):
    mul = spec.mul_t
    add = spec.add_t
    return tuple(
        tuple(
            add[add[mul[x[i][0]][y[0][j]]][mul[x[i][1]][y[1][j]]]][mul[x[i][2]][y[2][j]]]
            for j in range(3)
        )
        for i in range(3)
    )


def matinv3(spec: Field, m):
    """Inverse via the adjugate; raises on singular input."""
    d = det3(spec, m)
    if d == 0:
        raise ValueError("matrix is singular")
    mul = spec.mul_t
    sub = lambda a, b: spec.add_t[a][spec.neg_t[b]]
    (a, b, c), (e, f, g), (h, i, j) = m
    cof = (
        (sub(mul[f][j], mul[g][i]), sub(mul[c][i], mul[b][j]), sub(mul[b][g], mul[c][f])),
        (sub(mul[g][h], mul[e][j]), sub(mul[a][j], mul[c][h]), sub(mul[c][e], mul[a][g])),
        (sub(mul[e][i], mul[f][h]), sub(mul[b][h], mul[a][i]), sub(mul[a][f], mul[b][e])),
    )
    dinv = spec.inv_t[d]
    row = spec.mul_t[dinv]
    return tuple(tuple(row[v] for v in r) for r in cof)


def mat_transpose(m):
    return tuple(tuple(m[j][i] for j in range(3)) for i in range(3))


def mat_frob(spec: Field, m, k: int):
    if k % spec.e == 0:
        return tuple(tuple(r) for r in m)
    return tuple(tuple(spec.frob(v, k) for v in r) for r in m)


def _normalize_mat(spec: Field, m):
    for row in m:
        for v in row:
            if v:
                if v == 1:
                    return tuple(tuple(r) for r in m)
                scale = spec.mul_t[spec.inv_t[v]]
                return tuple(tuple(scale[x] for x in r) for r in m)
    raise ValueError("zero matrix")


def make_element(spec: Field, mat, frob: int = 0) -> GroupElement:
    """Validate, scalar-normalize and wrap a matrix as a group element."""
    mat = tuple(tuple(spec.check(v) for v in row) for row in mat)
    if len(mat) != 3 or any(len(r) != 3 for r in mat):
        raise ValueError("matrix must be 3x3")
    if det3(spec, mat) == 0:
        raise ValueError("matrix is singular")
    return GroupElement(_normalize_mat(spec, mat), frob % spec.e)


def identity_element(spec: Field) -> GroupElement:
    return GroupElement(((1, 0, 0), (0, 1, 0), (0, 0, 1)), 0)


def compose(spec: Field, g: GroupElement, h: GroupElement) -> GroupElement:
    """g after h: x -> g(h(x))."""
    mat = matmul3(spec, g.mat, mat_frob(spec, h.mat, g.frob))
    return GroupElement(_normalize_mat(spec, mat), (g.frob + h.frob) % spec.e)


def inverse(spec: Field, g: GroupElement) -> GroupElement:
    kinv = (-g.frob) % spec.e
    mat = mat_frob(spec, matinv3(spec, g.mat), kinv)
    return GroupElement(_normalize_mat(spec, mat), kinv)


def transpose_element(spec: Field, g: GroupElement) -> GroupElement:
    """Same matrix acting on row vectors instead (the transposed action)."""
    return GroupElement(_normalize_mat(spec, mat_transpose(g.mat)), g.frob)


def conjugate_element(spec: Field, alpha: GroupElement, beta: GroupElement) -> GroupElement:
    return compose(spec, compose(spec, alpha, beta), inverse(spec, alpha))


def apply_to_point(spec: Field, g: GroupElement, point):
    """Image of a normalized point: Frobenius, then the matrix, then normalize."""
    x = point if g.frob == 0 else tuple(spec.frob(v, g.frob) for v in point)
    mul = spec.mul_t
    add = spec.add_t
    m = g.mat
    y = tuple(
        add[add[mul[m[i][0]][x[0]]][mul[m[i][1]][x[1]]]][mul[m[i][2]][x[2]]]
        for i in range(3)
    )
    return normalize_triple(spec, y)


def apply_to_line(spec: Field, g: GroupElement, line):
    """Image line, computed from the inverse transpose of the matrix.

    If y = M x^s then d.x = 0 is equivalent to (M^-T d^s).y = 0, so the
    dual triple transforms by the same recipe with M replaced by its
    inverse transpose.
    """
    m = mat_transpose(matinv3(spec, g.mat))
    return apply_to_point(spec, GroupElement(m, g.frob), line)


class Group:
    """A finite subgroup of the collineation group, closed element list."""

    def __init__(self, spec: Field, generators, elements):
        self.spec = spec
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.order = len(self.elements)

    def __repr__(self):
        return f"Group(q={self.spec.q}, order={self.order})"


def closure(spec: Field, generators, cap: int = CLOSURE_CAP) -> Group:
    """Breadth-first closure of the generators, deterministic element order."""
    gens = [g if isinstance(g, GroupElement) else make_element(spec, g) for g in generators]
    ident = identity_element(spec)
    elements = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                v = compose(spec, u, g)
                if v not in seen:
                    seen.add(v)
                    elements.append(v)
                    nxt.append(v)
                    if len(elements) > cap:
                        raise BudgetExceededError(
                            f"group closure exceeded cap of {cap} elements"
                        )
        frontier = nxt
    return Group(spec, gens, elements)


def conjugate_group(spec: Field, alpha: GroupElement, group: Group) -> Group:
    """The group alpha G alpha^-1, same order."""
    gens = [conjugate_element(spec, alpha, g) for g in group.generators]
    elems = [conjugate_element(spec, alpha, g) for g in group.elements]
    if len(set(elems)) != group.order:
        raise AssertionError("conjugation must preserve the group order")
    return Group(spec, gens, elems)


def point_permutation(plane: Plane, g: GroupElement):
    """The permutation of point indices induced by the element."""
    idx = plane.point_index
    return tuple(idx[apply_to_point(plane.spec, g, p)] for p in plane.points)


def line_permutation(plane: Plane, g: GroupElement):
    idx = plane.line_index
    return tuple(idx[apply_to_line(plane.spec, g, l)] for l in plane.lines)


@dataclass(frozen=True)
class OrbitData:
    """Orbit partitions of a group on points and lines.

    point_orbits/line_orbits are sorted index tuples; representatives are
    the minimal indices; weights are the point-orbit lengths; ell is the
    common orbit count; *_orbit_of map an index to its orbit id.
    """

    point_orbits: tuple
    line_orbits: tuple
    point_rep: tuple
    line_rep: tuple
    weights: tuple
    ell: int
    point_orbit_of: tuple
    line_orbit_of: tuple


def _partition(n, perms):
    orbit_of = [-1] * n
    orbits_ = []
    for start in range(n):
        if orbit_of[start] >= 0:
            continue
        oid = len(orbits_)
        stack = [start]
        orbit_of[start] = oid
        members = [start]
        while stack:
            u = stack.pop()
            for perm in perms:
                v = perm[u]
                if orbit_of[v] < 0:
                    orbit_of[v] = oid
                    members.append(v)
                    stack.append(v)
        orbits_.append(tuple(sorted(members)))
    return tuple(orbits_), tuple(orbit_of)


def orbits(plane: Plane, group: Group) -> OrbitData:
    """Orbit partition from the generators' point/line permutations."""
    if group.spec != plane.spec:
        raise ValueError("group and plane live over different fields")
    pperms = [point_permutation(plane, g) for g in group.generators]
    lperms = [line_permutation(plane, g) for g in group.generators]
    point_orbits, point_orbit_of = _partition(plane.n, pperms)
    line_orbits, line_orbit_of = _partition(plane.n, lperms)
    if len(point_orbits) != len(line_orbits):
        raise AssertionError("point and line orbit counts must agree")
    weights = tuple(len(o) for o in point_orbits)
    assert sum(weights) == plane.n
    return OrbitData(
        point_orbits=point_orbits,
        line_orbits=line_orbits,
        point_rep=tuple(o[0] for o in point_orbits),
        line_rep=tuple(o[0] for o in line_orbits),
        weights=weights,
        ell=len(point_orbits),
        point_orbit_of=point_orbit_of,
        line_orbit_of=line_orbit_of,
    )


def parse_group_file(text: str, spec: Field):
    """Generators from text: nine codes per line, optional trailing frob=<k>."""
    gens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        frob = 0
        if tokens and tokens[-1].startswith("frob="):
            try:
                frob = int(tokens[-1][5:])
            except ValueError:
                raise ParseError(f"bad frobenius suffix {tokens[-1]!r}", lineno)
            tokens = tokens[:-1]
        if len(tokens) != 9:
            raise ParseError(f"expected 9 matrix entries, got {len(tokens)}", lineno)
        try:
            vals = [int(t) for t in tokens]
        except ValueError:
            raise ParseError("matrix entries must be integers", lineno)
        mat = (tuple(vals[0:3]), tuple(vals[3:6]), tuple(vals[6:9]))
        try:
            gens.append(make_element(spec, mat, frob))
        except ValueError as exc:
            raise ParseError(str(exc), lineno)
    return gens


def format_group_file(generators) -> str:
    out = []
    for g in generators:
        row = " ".join(str(v) for r in g.mat for v in r)
        if g.frob:
            row += f" frob={g.frob}"
        out.append(row)
    return "\n".join(out) + "\n"
