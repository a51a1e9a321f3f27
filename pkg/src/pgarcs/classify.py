"""Cyclic subgroups of PGL(3,q) for prime q, up to conjugacy, and the
automorphism-exclusion sweep.

Conjugacy of invertible 3x3 matrices is decided by the invariant-factor
label (characteristic and minimal polynomial); two projective elements
are conjugate in PGL iff some scalar multiple makes the labels match, so
the projective label is the minimum over scalars.  One representative
matrix per GL conjugacy class comes from the rational-form families
(companion matrices of cubics, a scalar block next to a quadratic
companion block, and scalars), and projecting those labels modulo
scalars yields exactly one generator per conjugacy class of PGL(3,q).
For each representative the sweep condenses the plane by the generated
cyclic group, asks the solver whether any selection reaches the target
size n, and combines the per-class outcomes into a rigidity verdict.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .condense import condense
from .errors import BudgetExceededError
from .geometry import build_plane
from .gf import Field, is_prime
from .group import GroupElement, closure, make_element, matmul3, orbits
from .solver import (
    FEASIBLE_FOUND,
    PROVED_INFEASIBLE,
    TIMEOUT,
    IlpModel,
    solve_feasible,
)

__all__ = [
    "ConjClassRep",
    "ExclusionReport",
    "canonical_label",
    "char_poly",
    "enumerate_cyclic_classes",
    "format_class_list",
    "gl3_class_representatives",
    "min_poly",
    "pgl_label",
    "projective_order",
    "run_exclusion",
    "subgroup_class_count",
]

ENUMERATION_MAX_P = 13

VERDICT_RIGID = "RigidOrNonexistent"
VERDICT_LISTED = "RigidOrListedGroups"
VERDICT_INCONCLUSIVE = "Inconclusive"


def char_poly(spec: Field, m):
    """Monic characteristic polynomial, coefficients low degree first."""
    mul = spec.mul_t
    add = spec.add_t
    neg = spec.neg_t
    (a, b, c), (d, e, f), (g, h, i) = m
    tr = add[add[a][e]][i]
    minors = add[
        add[add[mul[e][i]][neg[mul[f][h]]]][add[mul[a][i]][neg[mul[c][g]]]]
    ][add[mul[a][e]][neg[mul[b][d]]]]
    det = add[
        add[mul[a][add[mul[e][i]][neg[mul[f][h]]]]][
            neg[mul[b][add[mul[d][i]][neg[mul[f][g]]]]]
        ]
    ][mul[c][add[mul[d][h]][neg[mul[e][g]]]]]
    return (neg[det], minors, neg[tr], 1)


def _poly_div_exact(spec: Field, num, den):
    """num / den over GF(q) for monic den, asserting zero remainder."""
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(quot) - 1, -1, -1):
        c = num[i + dd]
        quot[i] = c
        if c:
            for j, dc in enumerate(den):
                num[i + j] = spec.add_t[num[i + j]][spec.neg_t[spec.mul_t[c][dc]]]
    assert not any(num[:dd]), "polynomial division left a remainder"
    return tuple(quot)


def min_poly(spec: Field, m):
    """Monic minimal polynomial of a 3x3 matrix (degree 1, 2 or 3)."""
    (a, b, c), (d, e, f), (g, h, i) = m
    if b == c == d == f == g == h == 0 and a == e == i:
        return (spec.neg_t[a], 1)
    m2 = matmul3(spec, m, m)
    # is m^2 in the span of I and m?  solve b0*I + b1*m = -m^2
    b0 = b1 = None
    eqs = []
    for r in range(3):
        for s in range(3):
            eqs.append((1 if r == s else 0, m[r][s], spec.neg_t[m2[r][s]]))
    for c0, c1, rhs in eqs:
        if c1 and not c0:
            b1 = spec.mul_t[rhs][spec.inv_t[c1]]
            break
    if b1 is None:
        # every off-diagonal of m is 0 handled above, so some c1 != 0 with
        # c0 != 0 remains; eliminate pairwise
        for (c0, c1, r1), (d0, d1, r2) in zip(eqs, eqs[1:]):
            det = spec.add_t[spec.mul_t[c0][d1]][spec.neg_t[spec.mul_t[c1][d0]]]
            if det:
                num = spec.add_t[spec.mul_t[c0][r2]][spec.neg_t[spec.mul_t[d0][r1]]]
                b1 = spec.mul_t[num][spec.inv_t[det]]
                break
    if b1 is not None:
        for c0, c1, rhs in eqs:
            if c0:
                b0 = spec.add_t[rhs][spec.neg_t[spec.mul_t[c1][b1]]]
                break
        candidate = (b0, b1, 1)
        if _matrix_annihilated(spec, m, m2, candidate):
            return candidate
    return char_poly(spec, m)


def _matrix_annihilated(spec, m, m2, poly):
    b0, b1, _ = poly
    for r in range(3):
        for s in range(3):
            v = spec.add_t[m2[r][s]][spec.mul_t[b1][m[r][s]]]
            if r == s:
                v = spec.add_t[v][b0]
            if v:
                return False
    return True


def canonical_label(spec: Field, m):
    """Invariant factors of the matrix: equal labels iff GL-conjugate."""
    from .group import det3

    if det3(spec, m) == 0:
        raise ValueError("matrix is singular")
    cp = char_poly(spec, m)
    mp = min_poly(spec, m)
    if len(mp) == 4:
        return (cp,)
    if len(mp) == 3:
        return (_poly_div_exact(spec, cp, mp), mp)
    return (mp, mp, mp)


def pgl_label(spec: Field, m):
    """Conjugacy label of the projective class: minimum over scalar
    multiples of the GL label."""
    best = None
    for lam in range(1, spec.q):
        row = spec.mul_t[lam]
        lab = canonical_label(spec, tuple(tuple(row[v] for v in r) for r in m))
        if best is None or lab < best:
            best = lab
    return best


def gl3_class_representatives(p: int):
    """Exactly one matrix per conjugacy class of GL(3,p).

    Rational-form families: the companion matrix of every monic cubic
    with nonzero constant term (the cyclic classes), a 1x1 eigenvalue
    block a next to the companion of (x-a)(x-b) for nonzero a, b, and the
    scalars.
    """
    if not is_prime(p):
        raise ValueError(f"p={p} must be prime")
    if p > 31:
        raise ValueError(f"p={p} out of supported range (<= 31)")
    spec = Field(p)
    neg = spec.neg_t
    mul = spec.mul_t
    add = spec.add_t
    reps = []
    for c0 in range(1, p):
        for c1 in range(p):
            for c2 in range(p):
                reps.append(((0, 0, neg[c0]), (1, 0, neg[c1]), (0, 1, neg[c2])))
    for a in range(1, p):
        for b in range(1, p):
            reps.append(((a, 0, 0), (0, 0, neg[mul[a][b]]), (0, 1, add[a][b])))
    for a in range(1, p):
        reps.append(((a, 0, 0), (0, a, 0), (0, 0, a)))
    assert len(reps) == p**3 - p
    return reps


def projective_order(spec: Field, m) -> int:
    """Least k >= 1 with m^k scalar."""

    def is_scalar(x):
        return (
            x[0][1] == x[0][2] == x[1][0] == x[1][2] == x[2][0] == x[2][1] == 0
            and x[0][0] == x[1][1] == x[2][2]
        )

    acc = m
    for k in range(1, spec.q**2 + spec.q + 2):
        if is_scalar(acc):
            return k
        acc = matmul3(spec, acc, m)
    raise AssertionError("projective order exceeded the group exponent bound")


@dataclass(frozen=True)
class ConjClassRep:
    """One conjugacy class of PGL(3,q): a generator, its projective order,
    its projective label, and the signature of the generated cyclic
    subgroup (labels of all coprime powers), which is equal for two
    classes iff the generated subgroups are conjugate."""

    class_id: int
    generator: GroupElement
    projective_order: int
    label: tuple
    signature: tuple

    @property
    def is_trivial(self):
        return self.projective_order == 1


def _subgroup_signature(spec, m, order):
    powers = {}
    acc = m
    for k in range(1, order + 1):
        powers[k] = acc
        acc = matmul3(spec, acc, m)
    sig = {pgl_label(spec, powers[k]) for k in powers if math.gcd(k, order) == 1}
    return tuple(sorted(sig))


def enumerate_cyclic_classes(p: int):
    """A transversal of the conjugacy classes of PGL(3,p), prime p.

    One representative per element class, the generators of the cyclic
    candidates for the exclusion sweep; the trivial class is flagged by
    projective_order 1 and sorts first.  The count is q^2+q+2 when 3
    divides q-1 and q^2+q otherwise, the trivial class included.
    """
    if not is_prime(p):
        raise ValueError(f"p={p} must be prime")
    if p > ENUMERATION_MAX_P:
        raise BudgetExceededError(
            f"full class enumeration supported for p <= {ENUMERATION_MAX_P}, got {p}"
        )
    spec = Field(p)
    by_label = {}
    for m in gl3_class_representatives(p):
        lab = pgl_label(spec, m)
        if lab not in by_label:
            by_label[lab] = m
    items = []
    for lab, m in by_label.items():
        order = projective_order(spec, m)
        sig = _subgroup_signature(spec, m, order)
        items.append((order, sig, lab, m))
    items.sort(key=lambda t: t[:3])
    return [
        ConjClassRep(
            class_id=i,
            generator=make_element(spec, m),
            projective_order=order,
            label=lab,
            signature=sig,
        )
        for i, (order, sig, lab, m) in enumerate(items)
    ]


def subgroup_class_count(classes) -> int:
    """Number of distinct cyclic subgroups up to conjugacy (element
    classes merged by signature)."""
    return len({rep.signature for rep in classes})


def format_class_list(classes) -> str:
    """One line per class: id, projective order, nine generator codes."""
    out = []
    for rep in classes:
        codes = " ".join(str(v) for row in rep.generator.mat for v in row)
        out.append(f"{rep.class_id} {rep.projective_order} {codes}")
    return "\n".join(out) + "\n"


@dataclass
class ExclusionReport:
    """Outcome of the sweep over all nontrivial cyclic classes."""

    q: int
    r: int
    n: int
    excluded: tuple
    undecided: tuple
    verdict: str
    classes: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {
            "q": self.q,
            "r": self.r,
            "n": self.n,
            "excluded": list(self.excluded),
            "undecided": list(self.undecided),
            "verdict": self.verdict,
            "classes": [dict(c) for c in self.classes],
        }


def _solve_class(plane, rep, r, n, budget):
    t0 = time.monotonic()
    group = closure(plane.spec, [rep.generator])
    od = orbits(plane, group)
    cs = condense(plane, od, r, provenance=f"class {rep.class_id}")
    sol = solve_feasible(IlpModel(cs), target=n, budget=budget)
    return {
        "id": rep.class_id,
        "order": rep.projective_order,
        "ell": cs.ell,
        "status": sol.status,
        "objective": sol.objective,
        "nodes": sol.nodes_explored,
        "time": round(time.monotonic() - t0, 3),
    }


def _load_checkpoint(path, key):
    if path and os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
        if data.get("key") == key:
            return {int(k): v for k, v in data.get("classes", {}).items()}
    return {}


def _save_checkpoint(path, key, records):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"key": key, "classes": {str(k): v for k, v in records.items()}}, fh)
    os.replace(tmp, path)


def run_exclusion(
    p: int,
    r: int,
    n: int,
    budget_per_class: float = 60.0,
    skip=(),
    threads: int = 1,
    checkpoint: str | None = None,
    progress=None,
) -> ExclusionReport:
    """Solve the target-n feasibility question for every nontrivial cyclic
    class and derive the rigidity verdict.

    A class whose system provably cannot reach n points is excluded; a
    timeout (or an explicit skip) leaves it undecided.  All classes
    excluded gives RigidOrNonexistent; a nonempty undecided remainder
    downgrades to RigidOrListedGroups; no exclusions at all is
    Inconclusive.  Timeouts are recorded, never raised.  With a
    checkpoint path, per-class results are flushed after every class and
    reused on resume.
    """
    classes = enumerate_cyclic_classes(p)
    plane = build_plane(Field(p))
    skip = set(skip)
    key = f"q={p} r={r} n={n}"
    records = _load_checkpoint(checkpoint, key)
    todo = [
        rep
        for rep in classes
        if not rep.is_trivial and rep.class_id not in skip and rep.class_id not in records
    ]

    def work(rep):
        rec = _solve_class(plane, rep, r, n, budget_per_class)
        if progress:
            progress(rec)
        return rec

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for rec in pool.map(work, todo):
                records[rec["id"]] = rec
                if checkpoint:
                    _save_checkpoint(checkpoint, key, records)
    else:
        for rep in todo:
            rec = work(rep)
            records[rec["id"]] = rec
            if checkpoint:
                _save_checkpoint(checkpoint, key, records)

    for rep in classes:
        if not rep.is_trivial and rep.class_id in skip and rep.class_id not in records:
            records[rep.class_id] = {
                "id": rep.class_id,
                "order": rep.projective_order,
                "ell": None,
                "status": "Skipped",
                "objective": None,
                "nodes": 0,
                "time": 0.0,
            }

    ordered = [records[rep.class_id] for rep in classes if not rep.is_trivial]
    excluded = tuple(rec["id"] for rec in ordered if rec["status"] == PROVED_INFEASIBLE)
    undecided = tuple(rec["id"] for rec in ordered if rec["status"] != PROVED_INFEASIBLE)
    if not undecided and excluded:
        verdict = VERDICT_RIGID
    elif excluded:
        verdict = VERDICT_LISTED
    else:
        verdict = VERDICT_INCONCLUSIVE
    return ExclusionReport(
        q=p,
        r=r,
        n=n,
        excluded=excluded,
        undecided=undecided,
        verdict=verdict,
        classes=tuple(ordered),
    )
