import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from lorlie import exact as ex
from lorlie import lie
from lorlie import metric as mt
from lorlie.corpus import heisenberg
from lorlie.double_ext import (
    CENTER_DEGENERATE,
    DERIVED_DEGENERATE,
    DoubleExtensionParams,
    NondegenerateSubspace,
    NotAdmissible,
    ShapeMismatch,
    admissibility,
    build,
    ebar_column_residuals,
    ebar_trace_residual,
    einstein_conditions,
    extract,
    unimodularity,
)
from lorlie.lie import LieAlgebra
from lorlie.search import SearchConfig, search

from conftest import pe
from draws import BASES, random_params

ROT2 = [[0, 2], [-2, 0]]
E, EB, F1, F2 = (ex.unit(4, i) for i in range(4))


def worked(k=ROT2):
    return DoubleExtensionParams.over_abelian(k, [[1, 0], [0, -1]], 0, [0, 0])


def ricci_column(p, params):
    """``-4 ric(f_j, e_bar)`` from the literal curvature trace of the extension."""
    ric = mt.ricci_direct(build(params)).ric
    return np.array([-4 * ric[2 + j, 1] for j in range(params.n)], dtype=object)


# -- build ------------------------------------------------------------------------------------

def test_build_worked_example_brackets():
    p = build(worked())
    alg = p.alg
    assert p.metric.signature == (1, 3)
    assert ex.allclose(alg.bracket(EB, F1), F1)
    assert ex.allclose(alg.bracket(EB, F2), -F2)
    # [f1, f2] = <K f1, f2> e and K f1 = -2 f2
    assert ex.allclose(alg.bracket(F1, F2), -2 * E)
    assert not np.any(alg.bracket(E, F1) != 0) and not np.any(alg.bracket(E, EB) != 0)
    assert lie.jacobi_defect(alg).is_zero


def test_build_zero_parameters_is_abelian_and_flat():
    p = build(DoubleExtensionParams.over_abelian(ex.zeros((2, 2)), ex.zeros((2, 2)), 0, [0, 0]))
    assert lie.is_abelian(p.alg) and mt.is_flat(p)


def test_build_non_unimodular_line():
    params = DoubleExtensionParams.over_abelian([[0]], [[1]], 2, [0])
    p = build(params)
    assert lie.jacobi_defect(p.alg).is_zero
    assert admissibility(params).admissible
    assert not lie.is_unimodular(p.alg)
    assert unimodularity(params).H[0] == 3


def test_params_validation():
    with pytest.raises(ShapeMismatch):
        DoubleExtensionParams.over_abelian(ex.zeros((2, 2)), ex.zeros((3, 3)), 0, [0, 0])
    with pytest.raises(ValueError):
        DoubleExtensionParams.over_abelian([[0, 1], [1, 0]], ex.zeros((2, 2)), 0, [0, 0])
    lorentz = pe(LieAlgebra.abelian(2), [[-1, 0], [0, 1]])
    with pytest.raises(ValueError):
        DoubleExtensionParams(lorentz, ex.zeros((2, 2)), ex.zeros((2, 2)), 0, ex.zeros(2))


# -- admissibility ------------------------------------------------------------------------------

def test_admissibility_abelian_residual():
    k, d = ex.mat([[0, 1], [-1, 0]]), ex.mat([[2, 1], [0, 3]])
    params = DoubleExtensionParams.over_abelian(k, d, 1, [5, 7])
    rep = admissibility(params)
    assert rep.is_derivation and rep.is_cocycle
    assert ex.allclose(rep.dext0_residual, k @ d + d.T @ k - k)


def test_admissibility_worked_example():
    rep = admissibility(worked())
    assert rep.admissible and not np.any(rep.dext0_residual != 0)


def test_admissibility_detects_non_derivation():
    g0 = pe(heisenberg(1), ex.eye(3))
    perm = ex.mat([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    params = DoubleExtensionParams(g0, ex.zeros((3, 3)), perm, 0, ex.zeros(3))
    rep = admissibility(params)
    assert not rep.is_derivation and not rep.admissible
    assert not lie.jacobi_defect(build(params).alg).is_zero


@given(st.sampled_from(BASES), st.booleans(), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_jacobi_iff_admissible(kind, corrupt, seed):
    params = random_params(np.random.default_rng(seed), kind, corrupt)
    assert lie.jacobi_defect(build(params).alg).is_zero == admissibility(params).admissible


# -- mean curvature ------------------------------------------------------------------------------

def test_unimodularity_examples():
    assert unimodularity(DoubleExtensionParams.over_abelian([[0, 0], [0, 0]], [[1, 0], [0, 2]], -3, [1, 1])).is_unimodular
    rep = unimodularity(DoubleExtensionParams.over_abelian([[0]], [[1]], 1, [0]))
    assert list(rep.H) == [2, 0, 0] and not rep.is_unimodular
    # H = 2e: tr ad(e_bar) = mu + tr D = 2 computed in the built algebra
    p = build(DoubleExtensionParams.over_abelian([[0]], [[1]], 1, [0]))
    assert ex.trace(p.alg.ad(ex.unit(3, 1))) == 2
    zero = unimodularity(DoubleExtensionParams.over_abelian([[0]], [[0]], 0, [0]))
    assert not np.any(zero.H != 0)


@given(st.sampled_from(BASES), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_mean_curvature_formula(kind, seed):
    params = random_params(np.random.default_rng(seed), kind)
    rep = unimodularity(params)
    assert rep.formula_holds
    want = ex.zeros(params.n + 2)
    want[0] = params.mu + ex.trace(params.D)
    want[2:] = mt.mean_curvature(params.g0)
    assert ex.allclose(mt.mean_curvature(build(params)), want)


# -- Einstein conditions --------------------------------------------------------------------------

def test_einstein_conditions_worked_example():
    rep = einstein_conditions(worked())
    assert rep.dext1_residual == 0 and not np.any(rep.dext2_residuals != 0)
    assert rep.g0_ricci_flat and rep.einstein
    assert not np.any(mt.ricci_direct(build(worked())).Ric != 0)


def test_einstein_conditions_rescaled_rotation_fails():
    params = worked([[0, 1], [-1, 0]])
    rep = einstein_conditions(params)
    assert rep.dext1_residual == -6 and not rep.einstein
    assert np.any(mt.ricci_direct(build(params)).Ric != 0)


def test_einstein_conditions_non_unimodular_line():
    params = DoubleExtensionParams.over_abelian([[0]], [[1]], 1, [0])
    assert ebar_trace_residual(params) == 0
    assert einstein_conditions(params).einstein
    assert mt.ricci_direct(build(params)).ricci_flat


def test_einstein_conditions_reject_inadmissible():
    g0 = pe(heisenberg(1), ex.eye(3))
    params = DoubleExtensionParams(g0, ex.zeros((3, 3)), ex.mat([[0, 0, 1], [0, 1, 0], [1, 0, 0]]), 0, ex.zeros(3))
    with pytest.raises(NotAdmissible):
        einstein_conditions(params)


@given(st.sampled_from(BASES), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_einstein_conditions_iff_ricci_flat(kind, seed):
    params = random_params(np.random.default_rng(seed), kind)
    lam = mt.einstein_check(build(params), method="direct")
    assert einstein_conditions(params).einstein == (lam == 0)


@given(st.sampled_from(BASES), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_second_condition_is_the_mixed_ricci_component(kind, seed):
    params = random_params(np.random.default_rng(seed), kind)
    assert ex.allclose(ebar_column_residuals(params), ricci_column(None, params))


def test_second_condition_on_non_unimodular_base():
    # g0 = r2 + R, non-unimodular, where the sign of the D* term matters
    r2r = LieAlgebra.from_brackets(3, {(0, 1): [0, 1, 0]})
    g0 = pe(r2r, [[3, 1, 0], [1, 2, 1], [0, 1, 2]])
    ders = lie.derivation_space(r2r)
    rng = np.random.default_rng(4)
    for _ in range(5):
        d = sum((mpq(int(rng.integers(-2, 3))) * x for x in ders), ex.zeros((3, 3)))
        params = DoubleExtensionParams(g0, ex.zeros((3, 3)), d, mpq(int(rng.integers(-2, 3))), ex.zeros(3))
        if admissibility(params).admissible:
            assert ex.allclose(ebar_column_residuals(params), ricci_column(None, params))


@given(st.sampled_from(BASES), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_e_components_of_b_hat_and_j2(kind, seed):
    params = random_params(np.random.default_rng(seed), kind)
    ops = mt.operators(build(params))
    d, k, mu = params.D, params.K, params.mu
    # coefficient of e in B_hat(e_bar) and J2(e_bar) is <., e_bar> with <e, e_bar> = 1
    assert ops.B_hat[0, 1] == mu * mu + ex.trace(d @ d)
    assert ops.J2[0, 1] == -(2 * mu * mu + ex.trace(k @ k))


# -- extraction --------------------------------------------------------------------------------------

def test_extract_worked_example_derived_mode():
    p = build(worked())
    res = extract(p, DERIVED_DEGENERATE)
    params = res.params
    assert lie.is_abelian(params.g0.alg)
    assert ex.trace(params.D) == 0 == -params.mu
    assert res.einstein_lambda == 0
    local = p.change_basis(res.basis)
    assert ex.allclose(build(params).alg.c, local.alg.c)
    assert ex.allclose(build(params).g, local.g)


def test_extract_worked_example_center_mode():
    res = extract(build(worked()), CENTER_DEGENERATE)
    assert res.params.mu == 0 and all(res.facts.values())


def test_extract_abelian_lorentzian_center_mode():
    p = pe(LieAlgebra.abelian(3), [[-1, 0, 0], [0, 1, 0], [0, 0, 1]])
    params = extract(p, CENTER_DEGENERATE).params
    for x in (params.K, params.D, params.b):
        assert not np.any(x != 0)


def test_extract_h3_with_nondegenerate_derived_ideal():
    p = pe(heisenberg(1), [[1, 0, 0], [0, 1, 0], [0, 0, -1]])
    assert lie.derived_ideal(p.alg).dim == 1
    with pytest.raises(NondegenerateSubspace):
        extract(p, DERIVED_DEGENERATE)


def test_extract_hypotheses():
    with pytest.raises(mt.HypothesisFailed) as info:
        extract(pe(heisenberg(1), ex.eye(3)), DERIVED_DEGENERATE)
    assert info.value.hypothesis == "lorentzian"
    with pytest.raises(ValueError):
        extract(build(worked()).to_float(), DERIVED_DEGENERATE)
    with pytest.raises(ValueError):
        extract(build(worked()), "sideways")


def test_extract_rejects_non_einstein():
    params = worked([[0, 1], [-1, 0]])
    with pytest.raises(mt.HypothesisFailed) as info:
        extract(build(params), DERIVED_DEGENERATE)
    assert info.value.hypothesis == "einstein"


GENERATED = search(SearchConfig(3, 99, 30, 2)).certificates


def test_generated_examples_exist():
    assert len(GENERATED) >= 3


@pytest.mark.parametrize("cert", GENERATED[:6], ids=lambda c: f"draw{c.index}")
def test_extract_round_trip_on_generated_examples(cert):
    p = build(cert.params)
    done = 0
    for mode in (DERIVED_DEGENERATE, CENTER_DEGENERATE):
        try:
            res = extract(p, mode)
        except (NondegenerateSubspace, mt.HypothesisFailed):
            continue
        done += 1
        assert ex.allclose(build(res.params).alg.c, p.change_basis(res.basis).alg.c)
        assert res.einstein_lambda == 0
    assert done
