import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from posetcorr import atlas
from posetcorr.atlas import (
    AtlasMatrix, DimensionMismatch, NotSymmetric, bilinear, build_matrix, char_poly, check_diagonal_identity,
    check_hyp, check_row_identities, deletion_bilinears, lemma_half, lemma_quart, lemma_tri, positivity_witness,
    shephard_det,
)
from posetcorr.counting import RangeError, count_with_value, enumerate_extensions
from posetcorr.poset import antichain, chain, delete, from_relations
from posetcorr.verdict import FAILS

from conftest import all_posets, posets


def brute_matrix(P, a, k):
    """Atlas matrix straight from the entry rules, counting by enumeration."""
    n = P.n
    others = [x for x in range(n) if x != a]
    m = len(others)
    rest = list(others)
    mins = [x for x in rest if not any(P.less(y, x) for y in rest)]
    maxs = [x for x in rest if not any(P.less(x, y) for y in rest)]
    ext = list(enumerate_extensions(P))

    def N(kk, pred):
        return sum(1 for f in ext if f[a] == kk and pred(f))

    M = [[0] * (2 * m) for _ in range(2 * m)]
    for i, x in enumerate(others):
        for j, y in enumerate(others):
            if x in mins and y in mins:
                if x != y:
                    M[i][j] = N(k + 1, lambda f: f[x] == 1 and f[y] == 2)
                else:
                    M[i][i] = N(k + 1, lambda f: f[x] == 1) - N(k + 1, lambda f: f[x] == 2)
            if x in maxs and y in maxs:
                if x != y:
                    M[m + i][m + j] = N(k - 1, lambda f: f[x] == n and f[y] == n - 1)
                else:
                    M[m + i][m + i] = N(k - 1, lambda f: f[x] == n) - N(k - 1, lambda f: f[x] == n - 1)
            if x in mins and y in maxs:
                M[i][m + j] = M[m + j][i] = N(k, lambda f: f[x] == 1 and f[y] == n)
    return M


def atlas_triples(max_n):
    for P in all_posets(max_n, 3):
        for a in range(P.n):
            for k in range(2, P.n):
                yield P, a, k


class TestBuild:
    def test_dimension(self):
        P = from_relations(3, [(0, 1)])
        for a in range(3):
            assert build_matrix(P, a, 2).d == 4

    def test_antichain_three(self):
        M = build_matrix(antichain(3), 0, 2)
        assert [list(r) for r in M.entries] == brute_matrix(antichain(3), 0, 2)

    def test_range(self):
        with pytest.raises(RangeError):
            build_matrix(chain(4), 0, 1)
        with pytest.raises(RangeError):
            build_matrix(chain(4), 0, 4)

    def test_matches_brute_force(self):
        for P, a, k in atlas_triples(5):
            M = build_matrix(P, a, k)
            assert [list(r) for r in M.entries] == brute_matrix(P, a, k), (P, a, k)

    @given(posets(min_n=3, max_n=7), st.data())
    def test_structure(self, P, data):
        a = data.draw(st.integers(0, P.n - 1))
        k = data.draw(st.integers(2, P.n - 1))
        M = build_matrix(P, a, k)
        A = np.array(M.entries, dtype=np.int64)
        assert (A == A.T).all()
        assert (A >= 0).all()
        assert M.index_map()["down"][M.others[0]] == 0
        assert M.to_json()["d"] == 2 * (P.n - 1)


class TestHyp:
    def test_small_examples(self):
        r = check_hyp([[0, 1], [1, 0]])
        assert r.positive_eigenvalue_count == 1 and r.is_hyperbolic
        r = check_hyp([[1, 0], [0, 1]])
        assert r.positive_eigenvalue_count == 2 and not r.is_hyperbolic

    def test_zero_roots_stripped(self):
        r = check_hyp([[0, 0, 0], [0, 2, 0], [0, 0, -1]])
        assert r.positive_eigenvalue_count == 1
        assert check_hyp([[0]]).positive_eigenvalue_count == 0

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            check_hyp([[0, 1], [2, 0]])

    @given(st.integers(1, 6), st.data())
    def test_matches_numpy_sign_count(self, d, data):
        vals = data.draw(st.lists(st.integers(-5, 5), min_size=d * d, max_size=d * d))
        B = np.array(vals, dtype=np.int64).reshape(d, d)
        S = B + B.T
        eig = np.linalg.eigvalsh(S.astype(float))
        if np.any(np.abs(eig) < 1e-7):
            nonzero = eig[np.abs(eig) >= 1e-7]
        else:
            nonzero = eig
        expect = int((nonzero > 0).sum())
        assert check_hyp(S.tolist()).positive_eigenvalue_count == expect
        # characteristic polynomial against numpy's
        assert np.allclose(char_poly(S.tolist()), np.poly(S.astype(float)), atol=1e-6 * max(1, np.abs(S).max()) ** d)

    def test_all_small_atlas_matrices_hyperbolic(self):
        for P, a, k in atlas_triples(5):
            assert check_hyp(build_matrix(P, a, k).entries).is_hyperbolic


class TestBilinear:
    def test_entries(self):
        M = build_matrix(from_relations(4, [(0, 2), (1, 3)]), 0, 2)
        d = M.d
        for i in range(d):
            for j in range(d):
                ei = [int(t == i) for t in range(d)]
                ej = [int(t == j) for t in range(d)]
                assert bilinear(M.entries, ei, ej) == M.entries[i][j]

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            bilinear([[0, 1], [1, 0]], [1], [1, 0])

    @given(posets(min_n=3, max_n=6), st.data())
    def test_symmetry_and_up_indicator(self, P, data):
        a = data.draw(st.integers(0, P.n - 1))
        k = data.draw(st.integers(2, P.n - 1))
        M = build_matrix(P, a, k)
        u = data.draw(st.lists(st.integers(0, 4), min_size=M.d, max_size=M.d))
        v = data.draw(st.lists(st.integers(0, 4), min_size=M.d, max_size=M.d))
        assert bilinear(M.entries, u, v) == bilinear(M.entries, v, u)
        z = M.up_vector(M.others)
        assert bilinear(M.entries, z, z) == count_with_value(P, a, k - 1)


class TestIdentities:
    def test_examples(self):
        assert check_row_identities(antichain(3), 0, 2)
        assert check_row_identities(chain(4), 0, 2)

    def test_exhaustive_small(self):
        for P, a, k in atlas_triples(5):
            assert check_row_identities(P, a, k)
            assert check_diagonal_identity(P, a, k)

    def test_deletion_bilinears(self):
        for P, a, k in atlas_triples(5):
            mins = [x for x in range(P.n) if x != a and not P.down[x]]
            for i, x in enumerate(mins):
                for y in mins[i + 1:]:
                    for name, (form, direct) in deletion_bilinears(P, a, k, x, y).items():
                        assert form == direct, (P, a, k, x, y, name)

    def test_deletion_bilinears_explicit(self):
        P = from_relations(5, [(0, 2), (1, 3), (2, 4)])
        a, k, x, y = 4, 3, 0, 1
        vals = deletion_bilinears(P, a, k, x, y)
        assert vals["xy"][0] == count_with_value(delete(P, {x, y}), a - 2, k - 1)
        assert vals["xz"][0] == count_with_value(delete(P, {x}), a - 1, k - 1)
        assert vals["zz"][0] == count_with_value(P, a, k - 1)

    def test_deletion_bilinears_rejects_non_minimal(self):
        with pytest.raises(ValueError):
            deletion_bilinears(chain(4), 3, 2, 0, 1)


# -- lemmas on random vector triples ---------------------------------------------


def _unique_matrices(max_n):
    seen = {}
    for P, a, k in atlas_triples(max_n):
        E = build_matrix(P, a, k).entries
        seen.setdefault(E, (P, a, k))
    return list(seen)


def _lemma_failures(entries, rng, triples=1000, high=3):
    A = np.array(entries, dtype=np.int64)
    d = len(A)
    X, Y, Z = (rng.integers(0, high + 1, size=(triples, d), dtype=np.int64) for _ in range(3))

    def form(U, V):
        return np.einsum("ti,ij,tj->t", U, A, V).astype(object)

    xx, yy, zz, xy, xz, yz = form(X, X), form(Y, Y), form(Z, Z), form(X, Y), form(X, Z), form(Y, Z)
    quart = (yz * xx - xy * xz) ** 2 <= (xy * xy - xx * yy) * (xz * xz - xx * zz)
    tri = yy * xz * xz + zz * xy * xy <= 2 * xy * xz * yz
    half = zz * xy <= 2 * xz * yz
    two = (xx * yz <= xy * xz).astype(int) + (yy * xz <= xy * yz).astype(int) + (zz * xy <= xz * yz).astype(int)
    shep = xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) + xz * (xy * yz - yy * xz) >= 0
    return {
        "quart": int((~quart.astype(bool)).sum()),
        "tri": int((~tri.astype(bool)).sum()),
        "half": int((~half.astype(bool)).sum()),
        "two-of-three": int((two < 2).sum()),
        "shephard": int((~shep.astype(bool)).sum()),
    }


def test_lemmas_on_random_triples_all_matrices():
    rng = np.random.default_rng(20240601)
    mats = _unique_matrices(6)
    assert len(mats) > 100
    totals = dict.fromkeys(["quart", "tri", "half", "two-of-three", "shephard"], 0)
    for E in mats:
        for key, bad in _lemma_failures(E, rng).items():
            totals[key] += bad
    assert totals == dict.fromkeys(totals, 0)


def test_lemma_functions_agree_with_vectorized_forms():
    rnd = random.Random(3)
    for E in _unique_matrices(5)[:60]:
        d = len(E)
        for _ in range(20):
            x, y, z = ([rnd.randint(0, 3) for _ in range(d)] for _ in range(3))
            for fn in (lemma_quart, lemma_tri, lemma_half, shephard_det):
                assert fn(E, x, y, z).status != FAILS
            assert atlas.lemma_two_of_three(E, x, y, z).status != FAILS


def test_lemmas_degenerate_cases():
    E = build_matrix(from_relations(5, [(0, 3), (1, 3), (2, 4)]), 4, 2).entries
    x = [1] * len(E)
    assert lemma_quart(E, x, x, x).lhs == lemma_quart(E, x, x, x).rhs == 0
    assert shephard_det(E, x, x, x).lhs == 0
    v = lemma_half([[0, 1], [1, 0]], [1, 0], [0, 1], [1, 1])
    assert (v.lhs, v.rhs, v.status) == (2, 2, "Equality")


def test_tri_with_repeated_vector_is_hyp():
    # z = x turns the tri inequality into <x,x><y,y> <= <x,y>^2
    rnd = random.Random(11)
    for E in _unique_matrices(5)[:80]:
        d = len(E)
        x, y = [rnd.randint(0, 4) for _ in range(d)], [rnd.randint(0, 4) for _ in range(d)]
        xx, yy, xy = bilinear(E, x, x), bilinear(E, y, y), bilinear(E, x, y)
        lhs, rhs = lemma_tri(E, x, y, x).lhs, lemma_tri(E, x, y, x).rhs
        assert lhs <= rhs
        if xx:
            assert (lhs <= rhs) == (xx * yy <= xy * xy)


def test_positivity_dichotomy():
    rnd = random.Random(5)
    kernels = witnesses = 0
    for E in _unique_matrices(5):
        d = len(E)
        for _ in range(5):
            vecs = [[rnd.randint(0, 2) * (rnd.random() < 0.4) for _ in range(d)] for _ in range(3)]
            kind, v = positivity_witness(E, *vecs)
            if kind == "kernel":
                kernels += 1
                assert all(bilinear(E, w, w) == 0 for w in vecs)
                continue
            witnesses += 1
            assert all(t >= 0 for t in v)
            for w in vecs:
                for t in (1, 2, 5):
                    pert = [wi * 10 + t * vi for wi, vi in zip(w, v)]
                    assert bilinear(E, pert, pert) > 0
    assert kernels and witnesses


def test_atlas_json():
    M = build_matrix(antichain(3), 1, 2)
    doc = M.to_json()
    assert doc["anchor"] == 1 and doc["down"] == [0, 2] and len(doc["entries"]) == 4
    assert isinstance(M, AtlasMatrix)
    assert check_hyp(M.entries).to_json()["is_hyperbolic"] is True
