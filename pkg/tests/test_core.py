from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from facechains.core import (
    FaceChain,
    InputError,
    LengthPoint,
    alpha_from_beta,
    alpha_upper_bound,
    assoc_corollary_bound,
    beta_from_alpha,
    chain_excess,
    face_leq,
    face_polytope,
    facet_bound,
    length_estimates,
    min_excess,
    shortness_report,
    total_length_bound,
)
from facechains.permutahedron import OrderedSetPartition, make_zebra, permutahedron_polytope
from facechains.reference import cube_polytope, simplex_polytope

import oracles

OSP = OrderedSetPartition.of


# ---------------------------------------------------------------- face_leq


def test_face_leq_vertex_is_reflexive(perm_polytopes):
    P = perm_polytopes[3]
    v = OSP([[2], [1], [3]])
    assert face_leq(v, v, P)


def test_face_leq_irreflexive_above_dim_zero(perm_polytopes, assoc_polytopes, cubes):
    for P in (perm_polytopes[4], assoc_polytopes[6], cubes[3]):
        for i, f in enumerate(P.faces):
            assert face_leq(f, f, P) == (P.dims[i] == 0)


def test_face_leq_zebra_members():
    P = permutahedron_polytope(4)
    assert face_leq(OSP([[1, 2], [3, 4]]), OSP([[2, 4], [1, 3]]), P)
    # the 9-letter zebra pair, via the polytope-free relation
    from facechains.permutahedron import weak_face_leq

    assert weak_face_leq(OSP([[1, 2, 3], [4, 5, 6], [7, 8, 9]]), OSP([[3, 6, 9], [2, 5, 8], [1, 4, 7]]))


def test_face_leq_unknown_face(perm_polytopes):
    with pytest.raises(InputError):
        face_leq(OSP([[1, 2]]), OSP([[1], [2], [3]]), perm_polytopes[3])


@pytest.mark.parametrize("family", ["perm", "assoc", "cube", "simplex"])
def test_face_leq_transitive(family, perm_polytopes, assoc_polytopes, cubes, simplices):
    P = {"perm": perm_polytopes[4], "assoc": assoc_polytopes[5], "cube": cubes[3], "simplex": simplices[4]}[family]
    N = len(P)
    M = np.zeros((N, N), dtype=bool)
    for i in range(N):
        M[i, P.successors(i)] = True
    two_step = (M.astype(np.int64) @ M.astype(np.int64)) > 0
    assert not (two_step & ~M).any()


def test_comparability_matches_pairwise(perm_polytopes):
    P = perm_polytopes[4]
    for i, f in enumerate(P.faces):
        expect = [j for j, g in enumerate(P.faces) if face_leq(f, g, P)]
        assert list(P.successors(i)) == expect


# ---------------------------------------------------------------- excess


def test_chain_excess_single_facet(cubes):
    P = cubes[3]
    facet = "1**"
    assert chain_excess(P.chain([facet])) == 1


def test_chain_excess_two_vertices():
    for n in range(1, 7):
        assert chain_excess(FaceChain(("a", "b"), (0, 0), n)) == n + 1


def test_chain_excess_zebra_2_3_3():
    assert chain_excess(make_zebra(3, 3, 2)) == -3


def test_chain_excess_empty_rejected():
    with pytest.raises(InputError):
        FaceChain((), (), 3)


@pytest.mark.parametrize("k,n,expected", [(1, 5, 1), (1, 40, 1), (2, 9, -6), (4, 9, -20)])
def test_facet_bound(k, n, expected):
    assert facet_bound(k, n) == expected


def test_facet_bound_matches_definition():
    for k in range(1, 7):
        for n in range(1, 30):
            assert facet_bound(k, n) == (n - 1) - k * (n - 2)


# ---------------------------------------------------------------- min_excess


@pytest.mark.parametrize("n", range(1, 7))
def test_min_excess_simplex_pairs(n, simplices):
    P = simplices[n]
    # brute force over pairs of proper subsets: max F <= min G
    subsets = [c for s in range(1, n + 1) for c in combinations(range(n + 1), s)]
    best = min((n - 1) - (len(a) - 2) - (len(b) - 2) for a in subsets for b in subsets if max(a) <= min(b))
    rep = min_excess(P, 2)
    assert rep.e_k == best
    # a segment only has its two endpoints as proper faces
    assert best == (2 if n == 1 else 1)


def test_min_excess_perm4_witness(perm_polytopes):
    P = perm_polytopes[4]
    rep = min_excess(P, 2)
    assert rep.e_k == 0
    assert rep.witness.faces == (OSP([[1, 2], [3, 4]]), OSP([[2, 4], [1, 3]]))
    assert chain_excess(rep.witness) == 0


def test_min_excess_k5_pentagon(assoc_polytopes):
    assert min_excess(assoc_polytopes[4], 2).e_k >= 1


@pytest.mark.parametrize("n,k", [(3, 2), (3, 3), (4, 2), (4, 3)])
def test_min_excess_perm_matches_enumeration(n, k, perm_polytopes):
    P = perm_polytopes[n]
    from facechains.permutahedron import weak_face_leq

    expect = oracles.brute_min_excess(P.faces, [f.dim for f in P.faces], weak_face_leq, n - 1, k)
    assert min_excess(P, k).e_k == expect


@pytest.mark.parametrize("n,k", [(4, 2), (4, 3), (5, 2), (5, 3)])
def test_min_excess_assoc_matches_enumeration(n, k, assoc_polytopes):
    P = assoc_polytopes[n]
    up = oracles.tamari_up_sets(n)
    ext = {f: oracles.assoc_extremes_oracle(f, up) for f in P.faces}

    def leq(f, g):
        return ext[g][0] in up[ext[f][1]]

    dims = [int(d) for d in P.dims]
    assert min_excess(P, k).e_k == oracles.brute_min_excess(P.faces, dims, leq, n - 2, k)


@pytest.mark.parametrize("family", ["perm", "assoc", "cube"])
def test_min_excess_report_consistency(family, perm_polytopes, assoc_polytopes, cubes):
    P = {"perm": perm_polytopes[5], "assoc": assoc_polytopes[7], "cube": cubes[4]}[family]
    reports = {k: min_excess(P, k) for k in range(1, 6)}
    for k, r in reports.items():
        assert r.e_k == (P.ambient_dim - 1) - (r.f_k - k)
        assert chain_excess(r.witness) == r.e_k
        assert len(r.witness) == k
        assert r.e_k >= facet_bound(k, P.ambient_dim)
        P.chain(r.witness.faces)  # raises if the witness is not a chain
    for k in reports:
        for l in reports:
            if l >= k:
                assert reports[l].f_k * k <= l * reports[k].f_k


def test_min_excess_point_has_no_chain():
    # a point has no proper faces, hence no chain of any length
    rep = min_excess(simplex_polytope(0), 2)
    assert not rep.exists and rep.e_k is None and rep.witness is None


def test_min_excess_repeated_vertex_chain():
    # a segment: the only proper faces are its two vertices
    rep = min_excess(simplex_polytope(1), 3)
    assert rep.exists and rep.f_k == 0 and rep.e_k == 3


@pytest.mark.parametrize("P", [simplex_polytope(3), cube_polytope(3), permutahedron_polytope(4)], ids=str)
def test_min_excess_k1_is_one(P):
    assert min_excess(P, 1).e_k == 1 == facet_bound(1, P.ambient_dim)


def test_min_excess_rejects_k0(cubes):
    with pytest.raises(InputError):
        min_excess(cubes[2], 0)


def test_min_excess_deterministic(perm_polytopes):
    a = min_excess(perm_polytopes[5], 3)
    b = min_excess(permutahedron_polytope(5), 3)
    assert a == b


# ---------------------------------------------------------------- shortness


def test_cube4_short(cubes):
    assert shortness_report(cubes[4]).short
    assert shortness_report(cubes[4], recursive=True).short


def test_perm4_not_short(perm_polytopes):
    rep = shortness_report(perm_polytopes[4])
    assert not rep.short
    assert rep.excess <= 0
    assert chain_excess(rep.witness) == rep.excess
    perm_polytopes[4].chain(rep.witness.faces)


def test_single_vertex_short(simplices, cubes):
    assert shortness_report(simplices[0]).short
    assert shortness_report(cubes[0], recursive=True).short


def test_shortness_agrees_with_enumeration(perm_polytopes, cubes, assoc_polytopes):
    # exhaustive chains of proper faces, all lengths up to the face count bound
    from facechains.permutahedron import weak_face_leq

    for P, leq in ((perm_polytopes[3], weak_face_leq), (cubes[2], None), (assoc_polytopes[5], None)):
        if leq is None:
            leq = lambda f, g, P=P: face_leq(f, g, P)  # noqa: E731
        proper = [f for f in P.faces if P.dim(f) < P.ambient_dim]
        dims = [P.dim(f) for f in proper]
        worst = None
        for k in range(2, 6):
            e = oracles.brute_min_excess(proper, dims, leq, P.ambient_dim, k)
            worst = e if worst is None else min(worst, e)
        assert shortness_report(P).short == (worst > 0)


def test_face_polytope_rebuilds_order(perm_polytopes):
    P = perm_polytopes[4]
    face = OSP([[1, 2, 3], [4]])
    sub = face_polytope(P, face)
    assert sub.ambient_dim == 2 and len(sub) == 13
    assert not sub.check_invariants()
    # a face of a permutahedron is a permutahedron: the hexagon's order matches
    for u in sub.faces:
        for v in sub.faces:
            if sub.dim(u) == 0 and sub.dim(v) == 0:
                assert sub.vertex_leq(u, v) == P.vertex_leq(u, v)


def test_recursive_shortness_localises_violation():
    P = permutahedron_polytope(5)
    rep = shortness_report(P, recursive=True)
    assert not rep.short and rep.face is None  # P5 itself already fails


# ---------------------------------------------------------------- lengths


def test_length_estimates_k1():
    pts = [LengthPoint(n, 1, n) for n in range(2, 8)]
    est = length_estimates(pts, 1)
    assert all(r.ratio == 1 for r in est.rows)


def test_length_estimates_zebra_row():
    chain = make_zebra(3, 3, 2)
    est = length_estimates([LengthPoint(3, chain_excess(chain), 8, 9)], 2)
    row = est.rows[0]
    assert (row.e_k, row.E_k, row.ratio) == (-3, -6, Fraction(1, 2))
    assert row.beta_finite == Fraction(12, 8)


def test_length_estimates_thuja_row():
    from facechains.associahedron import thuja_excess

    est = length_estimates([LengthPoint(7, thuja_excess(7, 3), 5)], 3)
    assert est.rows[0].ratio == 0


def test_length_estimates_undefined_ratio():
    # k = 2 and dimension 3: the facet bound is zero
    est = length_estimates([LengthPoint(5, 1, 3)], 2)
    assert est.rows[0].ratio is None


def test_length_estimates_trend_flags():
    pts = [LengthPoint(n, e, 10) for n, e in ((1, -1), (2, -3), (3, -2))]
    est = length_estimates(pts, 2)
    assert not est.non_decreasing and not est.strictly_increasing


def test_beta_alpha():
    assert beta_from_alpha(0, 5) == 1
    assert beta_from_alpha(1, 3) == 3
    assert alpha_from_beta(2, 3) == Fraction(1, 2)
    with pytest.raises(InputError):
        alpha_from_beta(2, 1)


def test_beta_alpha_roundtrip():
    for k in range(2, 8):
        for a in (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)):
            assert alpha_from_beta(beta_from_alpha(a, k), k) == a


def test_alpha_upper_bound():
    for k in range(2, 6):
        for a in (Fraction(0), Fraction(1, 4), Fraction(1)):
            assert alpha_upper_bound(k, k, a) == a
    assert total_length_bound(2, 0) == Fraction(1, 2)
    assert alpha_upper_bound(3, 2, 0) == Fraction(1, 4)
    for l in range(2, 12):
        assert alpha_upper_bound(l, 2, 0) == assoc_corollary_bound(l)
    with pytest.raises(InputError):
        alpha_upper_bound(2, 3, 0)


def test_alpha_upper_bound_tends_to_total():
    k, a = 3, Fraction(1, 4)
    gap = [total_length_bound(k, a) - alpha_upper_bound(l, k, a) for l in (10, 100, 1000)]
    assert gap[0] > gap[1] > gap[2] > 0
