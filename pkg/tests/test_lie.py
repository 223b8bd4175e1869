import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from lorlie import exact as ex
from lorlie import lie
from lorlie.corpus import FAMILIES, heisenberg, sl2, unimodular_basis_change
from lorlie.lie import LieAlgebra

from conftest import r2

H3 = heisenberg(1)
F1, F2, F3 = (ex.unit(3, i) for i in range(3))
R3_PRIME = LieAlgebra.from_brackets(3, {(0, 1): [0, 0, 1], (0, 2): [0, -1, 0]})


def same_space(a, b):
    return a.contains_subspace(b) and b.contains_subspace(a)


def span(*cols):
    from lorlie.pseudo import Subspace
    n = len(cols[0])
    return Subspace.span(ex.mat([list(c) for c in zip(*cols)]), n)


# -- brackets, Jacobi, ad --------------------------------------------------------------

def test_bracket_examples():
    assert ex.allclose(H3.bracket(F1, F2), F3)
    u = ex.mat([1, -2, 5])
    assert not np.any(H3.bracket(u, u) != 0)
    ab = LieAlgebra.abelian(3)
    assert not np.any(ab.bracket(F1, F2) != 0)


def test_jacobi_defect_examples():
    assert lie.jacobi_defect(H3).is_zero
    assert lie.jacobi_defect(LieAlgebra.abelian(4)).is_zero
    bad = LieAlgebra.from_brackets(3, {(0, 1): [0, 0, 1], (0, 2): [1, 0, 0]}, check=False)
    d = lie.jacobi_defect(bad)
    assert d.triple == (0, 1, 2)
    assert list(d.vector) == [0, 0, -1]
    assert d.norm > 0
    with pytest.raises(lie.JacobiError):
        LieAlgebra(bad.c)


def test_ad_examples():
    a = H3.ad(F1)
    assert ex.allclose(a @ F2, F3)
    assert not np.any(a @ F1 != 0) and not np.any(a @ F3 != 0)
    assert not np.any(H3.ad(F3) != 0)
    u, v = ex.mat([1, 2, 0]), ex.mat([0, -1, 4])
    assert ex.allclose(H3.ad(u + v), H3.ad(u) + H3.ad(v))


# -- Killing form ------------------------------------------------------------------------

def test_killing_form_examples():
    assert not np.any(lie.killing_form(H3) != 0)
    assert not np.any(lie.killing_form(LieAlgebra.abelian(3)) != 0)
    # r2: ad(e1) = [[0, 0], [0, 1]], ad(e2) = [[0, 0], [-1, 0]]
    ad1 = ex.mat([[0, 0], [0, 1]])
    ad2 = ex.mat([[0, 0], [-1, 0]])
    want = ex.mat([[ex.trace(x @ y) for y in (ad1, ad2)] for x in (ad1, ad2)])
    assert ex.allclose(lie.killing_form(r2()), want)
    assert ex.allclose(want, ex.mat([[1, 0], [0, 0]]))


def test_killing_form_sl2():
    assert ex.allclose(lie.killing_form(sl2()), ex.mat([[8, 0, 0], [0, 0, 4], [0, 4, 0]]))


# -- series and predicates -----------------------------------------------------------------

def test_derived_series_examples():
    ds = lie.derived_series(H3)
    assert [s.dim for s in ds] == [3, 1, 0]
    assert same_space(ds[1], span(F3))
    assert lie.is_solvable(H3)
    assert [s.dim for s in lie.derived_series(LieAlgebra.abelian(3))] == [3, 0]
    ds = lie.derived_series(sl2())
    assert ds[-1].dim == 3
    assert not lie.is_solvable(sl2())


def test_nilpotency_examples():
    assert lie.is_nilpotent(H3)
    assert lie.is_solvable(r2()) and not lie.is_nilpotent(r2())
    assert lie.is_nilpotent(LieAlgebra.abelian(2))


def test_unimodularity_examples():
    assert lie.is_unimodular(H3)
    assert not lie.is_unimodular(r2())
    assert ex.trace(r2().ad(ex.unit(2, 0))) == 1
    assert lie.is_unimodular(LieAlgebra.abelian(5))


def test_center_and_derived_ideal_examples():
    assert same_space(lie.center(H3), span(F3))
    assert same_space(lie.derived_ideal(H3), span(F3))
    ab = LieAlgebra.abelian(3)
    assert lie.center(ab).dim == 3 and lie.derived_ideal(ab).dim == 0
    assert lie.center(r2()).dim == 0
    assert same_space(lie.derived_ideal(r2()), span([0, 1]))


# -- complete solvability -----------------------------------------------------------------

def test_complete_solvability_h3_flag():
    cs = lie.complete_solvability(H3)
    assert cs.holds
    assert [s.dim for s in cs.flag] == [1, 2, 3]
    assert same_space(cs.flag[0], span(F3))
    assert all(lie.is_ideal(H3, s) for s in cs.flag)


def test_complete_solvability_rotation_type():
    cs = lie.complete_solvability(R3_PRIME)
    assert cs.holds is False
    assert lie.is_solvable(R3_PRIME)


def test_complete_solvability_abelian_and_float():
    assert lie.is_completely_solvable(LieAlgebra.abelian(3))
    assert lie.is_completely_solvable(H3.to_float()) is None


def test_complete_solvability_irrational_weights():
    # [t, x] = x + 2y, [t, y] = x + y: ad(t) has eigenvalues 1 +- sqrt(2)
    d = ex.mat([[1, 1], [2, 1]])
    from lorlie.corpus import semidirect
    alg = semidirect(LieAlgebra.abelian(2), d)
    cs = lie.complete_solvability(alg)
    assert cs.holds and cs.flag is None


def test_classify_implications():
    for alg in (H3, r2(), R3_PRIME, sl2(), LieAlgebra.abelian(2)):
        f = lie.classify(alg)
        if f.abelian:
            assert f.nilpotent and f.unimodular
        if f.nilpotent:
            assert f.completely_solvable
        if f.completely_solvable:
            assert f.solvable


# -- derivations -------------------------------------------------------------------------

def _span_matrices(mats):
    return np.column_stack([m.ravel() for m in mats])


def test_derivation_space_abelian():
    assert len(lie.derivation_space(LieAlgebra.abelian(3))) == 9


def test_derivation_space_h3_graded():
    grading = ex.mat([[1, 0, 0], [0, 1, 0], [0, 0, 2]])
    # Leibniz on the one relation: D[f1, f2] = 2 f3 = [D f1, f2] + [f1, D f2]
    assert ex.allclose(grading @ H3.bracket(F1, F2), H3.bracket(grading @ F1, F2) + H3.bracket(F1, grading @ F2))
    ders = lie.derivation_space(H3)
    assert ex.in_span(_span_matrices(ders), grading.ravel())
    assert ex.trace(grading) == 4


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_derivations_contain_inner_and_are_b_skew(name):
    rng = np.random.default_rng(11)
    alg = FAMILIES[name](rng)
    alg = alg.change_basis(unimodular_basis_change(rng, alg.dim))
    ders = lie.derivation_space(alg)
    basis = _span_matrices(ders)
    b = lie.killing_form(alg)
    for a in alg.ad_basis:
        assert ex.in_span(basis, a.ravel())
    for d in ders:
        assert lie.is_derivation(alg, d)
        assert ex.allclose(d.T @ b, -(b @ d))


def test_non_derivation_detected():
    perm = ex.mat([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    assert not lie.is_derivation(H3, perm)


# -- properties of the flag certificate ---------------------------------------------------

@given(st.sampled_from(sorted(FAMILIES)), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_flag_soundness_and_triangular_ad(name, seed):
    rng = np.random.default_rng(seed)
    alg = FAMILIES[name](rng)
    cs = lie.complete_solvability(alg)
    if cs.flag is None:
        return
    for k, s in enumerate(cs.flag):
        assert s.dim == k + 1 and lie.is_ideal(alg, s)
    local = alg.change_basis(cs.basis)
    for a in local.ad_basis:
        assert not np.any(np.tril(a, -1) != 0)
    b = lie.killing_form(alg)
    for _ in range(10):
        u = ex.mat([mpq(int(x)) for x in rng.integers(-5, 6, alg.dim)])
        assert u @ b @ u >= 0
