import numpy as np
import pytest
from gmpy2 import mpq

from lorlie import exact as ex
from lorlie import lie
from lorlie import metric as mt
from lorlie.double_ext import (
    MODES,
    DoubleExtensionParams,
    NondegenerateSubspace,
    build,
    einstein_conditions,
    extract,
)
from lorlie.metric import CrossCheckMismatch
from lorlie.poly import all_roots_real, charpoly
from lorlie.search import (
    SearchConfig,
    certify,
    einstein_rhs,
    generate,
    k_constraint_space,
    scale_to_einstein,
    search,
)

ROT = ex.mat([[0, 1], [-1, 0]])


def in_span(mats, m):
    return ex.in_span(np.column_stack([x.ravel() for x in mats]), m.ravel())


# -- the linear constraint on K -----------------------------------------------------------------

def test_k_space_hyperbolic_d():
    space = k_constraint_space(ex.mat([[1, 0], [0, -1]]), 0)
    assert in_span(space, ROT)
    d = ex.mat([[1, 0], [0, -1]])
    assert not np.any(ROT @ d + d @ ROT != 0)


def test_k_space_unconstrained_and_forced():
    assert len(k_constraint_space(ex.zeros((3, 3)), 0)) == 3
    assert k_constraint_space(ex.eye(3), 0) == []


@pytest.mark.parametrize("seed", range(5))
def test_k_space_solves_the_constraint(seed):
    rng = np.random.default_rng(seed)
    d = ex.mat([[mpq(int(x)) for x in row] for row in rng.integers(-2, 3, (3, 3))])
    mu = mpq(int(rng.integers(-2, 3)))
    for k in k_constraint_space(d, mu):
        assert not np.any(k + k.T != 0)
        assert not np.any(k @ d + d.T @ k - mu * k != 0)


# -- the scalar Einstein equation ------------------------------------------------------------------

def test_scale_worked_example():
    d = ex.mat([[1, 0], [0, -1]])
    t = scale_to_einstein(ROT, d, 0)
    assert t == 2
    # tr((tK)^2) = -2 t^2 = -8 = 4 mu tr D - 2 tr D^2 - 2 tr(D D^T)
    assert ex.trace((t * ROT) @ (t * ROT)) == -8


def test_scale_none_cases():
    assert scale_to_einstein(ROT, ex.zeros((2, 2)), 0) is None
    d = ex.mat([[-1]])
    assert einstein_rhs(d, 1) == 8
    assert scale_to_einstein(ex.zeros((1, 1)), d, 1) is None
    # irrational scale: t^2 = 2
    assert scale_to_einstein(ROT, ex.mat([[1, 0], [0, 0]]), 0) is None


# -- certificates ----------------------------------------------------------------------------------

CERTS = search(SearchConfig(2, 1, 12, 3)).certificates + search(SearchConfig(3, 1, 20, 2)).certificates


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(0, 1)
    with pytest.raises(ValueError):
        SearchConfig(2, 1, samples=0)
    with pytest.raises(ValueError):
        SearchConfig(2, 1, entry_bound=0)


def test_two_dimensional_certificates_are_hyperbolic_family():
    two = [c for c in CERTS if c.params.n == 2]
    assert two
    for c in two:
        p = c.params
        assert p.mu == 0 and ex.trace(p.D) == 0 and np.any(p.K != 0)
        # D is conjugate to diag(a, -a): the K found is a multiple of the rotation
        assert in_span([ROT], p.K)


@pytest.mark.parametrize("cert", CERTS, ids=lambda c: f"n{c.params.n}-draw{c.index}")
def test_certificate_soundness(cert):
    p = build(cert.params)
    assert lie.jacobi_defect(p.alg).is_zero
    assert lie.is_unimodular(p.alg)
    assert einstein_conditions(cert.params).einstein
    direct = mt.ricci_direct(p)
    assert not np.any(direct.Ric != 0) and direct.einstein_lambda == 0
    real = all(all_roots_real(charpoly(a)) for a in p.alg.ad_basis)
    assert cert.checks["completely_solvable"] == real
    assert ("not completely solvable" in cert.flags) == (not real)
    der = cert.checks["nonzero_trace_derivation"]
    if der is None:
        assert "no derivation of nonzero trace" in cert.flags
    else:
        assert lie.is_derivation(p.alg, der) and ex.trace(der) != 0


@pytest.mark.parametrize("cert", CERTS[:6], ids=lambda c: f"n{c.params.n}-draw{c.index}")
def test_certificates_extract(cert):
    p = build(cert.params)
    if not cert.checks["completely_solvable"]:
        pytest.skip("outside the completely solvable setting")
    ok = 0
    for mode in MODES:
        try:
            res = extract(p, mode)
        except NondegenerateSubspace:
            continue
        ok += 1
        assert ex.allclose(build(res.params).alg.c, p.change_basis(res.basis).alg.c)
    assert ok


def test_b_does_not_affect_einstein_property():
    c = CERTS[0]
    p = c.params
    for b in ([0] * p.n, [5, -3] + [1] * (p.n - 2)):
        q = DoubleExtensionParams(p.g0, p.K, p.D, p.mu, ex.mat(b))
        assert mt.ricci_direct(build(q)).ricci_flat


def test_certify_rejects_bad_candidate():
    bad = DoubleExtensionParams.over_abelian([[0, 1], [-1, 0]], [[1, 0], [0, -1]], 0, [0, 0])
    with pytest.raises(CrossCheckMismatch):
        certify(bad)


def test_dimension_one_is_empty():
    res = search(SearchConfig(1, 3, 20, 3))
    assert res.empty
    assert sum(res.rejected.values()) == 20
    assert list(generate(SearchConfig(1, 3, 5))) == []


def test_determinism_across_workers():
    cfg = SearchConfig(3, 42, 12, 2)
    a = search(cfg)
    b = search(cfg, workers=4)
    assert [c.index for c in a.certificates] == [c.index for c in b.certificates]
    for x, y in zip(a.certificates, b.certificates):
        assert ex.allclose(x.params.K, y.params.K) and ex.allclose(x.params.D, y.params.D)
        assert ex.allclose(x.params.b, y.params.b) and x.params.mu == y.params.mu
    assert a.rejected == b.rejected


def test_non_unimodular_search():
    res = search(SearchConfig(2, 8, 20, 2), unimodular=False)
    assert not res.empty
    for c in res.certificates:
        p = build(c.params)
        assert mt.ricci_direct(p).ricci_flat
        assert ("not unimodular" in c.flags) == (not lie.is_unimodular(p.alg))
