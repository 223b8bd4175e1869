"""Run every applicable structural check on an algebra or a set of double-extension parameters.

Each check yields a :class:`Check` with status ``pass``, ``fail``, ``n/a`` (its
hypotheses do not hold) or ``info`` (a reported value, not a claim).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from . import exact as ex
from . import lie
from .double_ext import (
    MODES,
    NondegenerateSubspace,
    admissibility,
    build,
    einstein_conditions,
    extract,
    unimodularity,
)
from .metric import (
    CrossCheckMismatch,
    HypothesisFailed,
    PseudoEuclideanLieAlgebra,
    change_of_basis_endos,
    einstein_check,
    lc_matrix,
    operators,
    ortho_frame,
    q_operator,
    ricci_direct,
    ricci_operator_formula,
    ricci_via_r,
    structure_endos,
    trace_Q_times,
    verify_nondegenerate_center_prop,
)
from .pseudo import isotropic_image, rational_isotropic_vector, skew_basis

PASS, FAIL, NA, INFO = "pass", "fail", "n/a", "info"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    detail: str = ""


def passed(checks) -> bool:
    return all(c.status != FAIL for c in checks)


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def _random_rational_matrix(rng, n: int, exact: bool) -> np.ndarray:
    m = ex.zeros((n, n), exact)
    for i in range(n):
        for j in range(n):
            v = mpq(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))
            m[i, j] = v if exact else float(v)
    return m


def _random_vector(rng, n: int, exact: bool) -> np.ndarray:
    return ex.like(ex.zeros(1, exact), [mpq(int(rng.integers(-3, 4)), int(rng.integers(1, 3))) for _ in range(n)])


def koszul_check(p: PseudoEuclideanLieAlgebra) -> Check:
    n = p.dim
    scale = max(ex.scale_of(p.alg.c), 1.0)
    ok = True
    for i in range(n):
        li = lc_matrix(p, ex.unit(n, i, p.exact))
        ok &= ex.is_zero(li.T @ p.g + p.g @ li, scale * ex.scale_of(p.g))
        for j in range(n):
            diff = p.lc_basis[i][:, j] - p.lc_basis[j][:, i] - p.alg.c[:, i, j]
            ok &= ex.is_zero(diff, scale)
    return Check("Levi-Civita product torsion-free and metric", _status(ok))


def ricci_check(p: PseudoEuclideanLieAlgebra):
    a, b, c = ricci_direct(p), ricci_via_r(p), ricci_operator_formula(p)
    ok = ex.allclose(a.Ric, b.Ric) and ex.allclose(a.Ric, c.Ric)
    return Check("Ricci: curvature trace = R_u route = operator formula", _status(ok)), a


def j_operator_checks(p: PseudoEuclideanLieAlgebra, rng) -> list[Check]:
    try:
        ops = operators(p, cross_check=True)
        ok, detail = True, f"tr J1 = tr J2 = {ex.trace(ops.J1)}"
    except CrossCheckMismatch as exc:
        ok, detail = False, str(exc)
    out = [Check("J1, J2 from traces = from structure endomorphisms, tr J1 = tr J2", _status(ok), detail)]
    se = structure_endos(p)
    for _ in range(5):
        new = _random_rational_matrix(rng, p.dim, p.exact)
        if ex.rank(new) == p.dim:
            break
    else:
        new = ex.eye(p.dim, p.exact)
    direct = structure_endos(p, new).S
    moved = change_of_basis_endos(se, new)
    ok = all(ex.allclose(x, y) for x, y in zip(direct, moved))
    recon = all(
        ex.allclose(se.bracket(ex.unit(p.dim, i, p.exact), ex.unit(p.dim, j, p.exact)), p.alg.c[:, i, j])
        for i in range(p.dim) for j in range(p.dim)
    )
    out.append(Check("structure endomorphisms: reconstruction and change of basis", _status(ok and recon)))
    return out


def trace_identity_checks(p: PseudoEuclideanLieAlgebra, ders, rng, samples: int) -> list[Check]:
    q = q_operator(p)
    frame = ortho_frame(p)
    scale = max(ex.scale_of(q), 1.0) * p.dim
    es = [ex.eye(p.dim, p.exact)] + [_random_rational_matrix(rng, p.dim, p.exact) for _ in range(samples)]
    ok = True
    for e in es:
        lhs, rhs = trace_Q_times(p, e, frame, q)
        ok &= ex.is_zero(lhs - rhs, scale * ex.scale_of(e))
    out = [Check("trace identity tr(QE)", _status(ok), f"{len(es)} maps")]
    ok = True
    for d in ders:
        lhs, rhs = trace_Q_times(p, d, frame, q)
        ok &= ex.is_zero(lhs, scale * ex.scale_of(d)) and ex.is_zero(rhs, scale * ex.scale_of(d))
    out.append(Check("tr(QD) = 0 for derivations", _status(ok), f"{len(ders)} derivations"))
    return out


def killing_checks(p: PseudoEuclideanLieAlgebra, ders, cs, rng, samples: int) -> list[Check]:
    kil = lie.killing_form(p.alg)
    scale = max(ex.scale_of(kil), 1.0)
    ok = all(ex.is_zero(d.T @ kil + kil @ d, scale * ex.scale_of(d)) for d in ders)
    out = [Check("Killing form: B(Du, v) = -B(u, Dv) for derivations", _status(ok))]
    if cs.holds:
        us = [ex.unit(p.dim, i, p.exact) for i in range(p.dim)]
        us += [_random_vector(rng, p.dim, p.exact) for _ in range(samples)]
        tol = 0 if p.exact else ex.get_eps() * scale
        ok = all(u @ kil @ u >= -tol for u in us)
        out.append(Check("Killing form positive semi-definite (completely solvable)", _status(ok), f"{len(us)} vectors"))
    else:
        why = "indeterminate in float mode" if cs.holds is None else "not completely solvable"
        out.append(Check("Killing form positive semi-definite (completely solvable)", NA, why))
    if cs.flag is not None:
        ok = all(s.dim == k + 1 and lie.is_ideal(p.alg, s) for k, s in enumerate(cs.flag))
        binv = ex.inverse(cs.basis)
        tri = all(ex.is_zero(np.tril(binv @ a @ cs.basis, -1)) for a in p.alg.ad_basis)
        out.append(Check("flag of ideals; ad upper triangular in adapted basis", _status(ok and tri)))
    else:
        out.append(Check("flag of ideals; ad upper triangular in adapted basis", NA, cs.reason))
    return out


def ricci_derivation_checks(p, ders, report, unimodular: bool) -> list[Check]:
    name = "tr(Ric D) = 0 for derivations (unimodular)"
    if not unimodular:
        return [Check(name, NA, "not unimodular"), Check("Einstein with nonzero-trace derivation has lambda = 0", NA, "not unimodular")]
    scale = max(ex.scale_of(report.Ric), 1.0)
    ok = all(ex.is_zero(ex.trace(report.Ric @ d), scale * ex.scale_of(d)) for d in ders)
    out = [Check(name, _status(ok), f"{len(ders)} derivations")]
    name = "Einstein with nonzero-trace derivation has lambda = 0"
    lam = report.einstein_lambda
    witness = next((d for d in ders if not ex.is_zero(ex.trace(d), ex.scale_of(d))), None)
    if lam is None:
        out.append(Check(name, NA, "not Einstein"))
    elif witness is None:
        out.append(Check(name, NA, "every derivation is traceless"))
    else:
        out.append(Check(name, _status(ex.is_zero(lam, scale)), f"lambda = {lam}"))
    return out


def isotropic_checks(p: PseudoEuclideanLieAlgebra, rng, samples: int) -> list[Check]:
    names = ("skew A, isotropic e: <Ae, Ae> >= 0, = 0 iff Ae in Re",
             "skew A with Ae = 0: tr(A^2) <= 0 and equality characterization")
    if not p.metric.is_lorentzian:
        return [Check(n, NA, "metric not Lorentzian") for n in names]
    e = rational_isotropic_vector(p.metric)
    if e is None:
        return [Check(n, NA, "no rational isotropic vector") for n in names]
    n = p.dim
    exact = p.exact
    tol = 0 if exact else ex.get_eps() * ex.scale_of(p.g) ** 3
    gens = skew_basis(p.metric)
    maps = list(gens) + [lc_matrix(p, ex.unit(n, i, exact)) for i in range(n)]
    for _ in range(samples):
        maps.append(sum((ex.q(int(rng.integers(-2, 3))) * a if exact else float(rng.integers(-2, 3)) * a
                         for a in gens), ex.zeros((n, n), exact)))
    ok = True
    for a in maps:
        val, inside = isotropic_image(a, e, p.metric)
        ok &= val >= -tol and ((abs(val) <= tol) == inside)
    out = [Check(names[0], _status(ok), f"{len(maps)} maps")]
    kgens = skew_basis(p.metric, kills=e)
    ok = True
    perp = ex.nullspace((p.g @ e).reshape(1, -1))
    for _ in range(samples):
        a = sum((ex.q(int(rng.integers(-2, 3))) * k if exact else float(rng.integers(-2, 3)) * k
                 for k in kgens), ex.zeros((n, n), exact))
        for cand in [a] + kgens:
            t = ex.trace(cand @ cand)
            ok &= t <= tol
            if abs(t) <= tol:
                image = cand @ perp
                ok &= all(ex.in_span(e.reshape(-1, 1), image[:, i]) for i in range(image.shape[1]))
                ok &= all(abs(ex.trace(cand @ b)) <= tol for b in kgens)
    out.append(Check(names[1], _status(ok), f"{len(kgens)}-dimensional annihilator"))
    return out


def center_check(p: PseudoEuclideanLieAlgebra) -> Check:
    name = "nondegenerate center: Euclidean, or flat with lambda = tr(K^2)/4 = 0"
    try:
        rep = verify_nondegenerate_center_prop(p)
    except HypothesisFailed as exc:
        return Check(name, NA, f"hypothesis not met: {exc.hypothesis}")
    bad = [k for k, v in rep.checks.items() if not v]
    return Check(name, _status(not bad), f"{rep.branch} center" + (f"; failed: {', '.join(bad)}" if bad else ""))


def extraction_checks(p: PseudoEuclideanLieAlgebra) -> list[Check]:
    out = []
    for mode in MODES:
        name = f"double-extension extraction ({mode})"
        if not p.exact:
            out.append(Check(name, NA, "float mode"))
            continue
        try:
            res = extract(p, mode)
        except (HypothesisFailed, NondegenerateSubspace) as exc:
            out.append(Check(name, NA, str(exc)))
            continue
        except CrossCheckMismatch as exc:
            out.append(Check(name, FAIL, str(exc)))
            continue
        local = p.change_basis(res.basis)
        rebuilt = build(res.params)
        ok = ex.allclose(rebuilt.alg.c, local.alg.c) and ex.allclose(rebuilt.g, local.g) and all(res.facts.values())
        out.append(Check(name, _status(ok), f"mu = {res.params.mu}, tr D = {ex.trace(res.params.D)}"))
    return out


def verify_algebra(p: PseudoEuclideanLieAlgebra, seed: int = 0, samples: int = 20) -> list[Check]:
    """All applicable checks for one algebra; deterministic for a given ``seed``."""
    rng = np.random.default_rng(seed)
    out = [Check("Jacobi identity", _status(lie.jacobi_defect(p.alg).is_zero))]
    out.append(koszul_check(p))
    ric, report = ricci_check(p)
    out.append(ric)
    out.extend(j_operator_checks(p, rng))
    ders = lie.derivation_space(p.alg)
    out.extend(trace_identity_checks(p, ders, rng, samples))
    cs = lie.complete_solvability(p.alg)
    out.extend(killing_checks(p, ders, cs, rng, samples))
    uni = lie.is_unimodular(p.alg)
    h_zero = ex.is_zero(report.H, max(ex.scale_of(p.alg.c), 1.0))
    out.append(Check("H = 0 iff unimodular", _status(h_zero == uni)))
    out.extend(ricci_derivation_checks(p, ders, report, uni))
    lam = report.einstein_lambda
    out.append(Check("Einstein", INFO, "none" if lam is None else f"lambda = {lam}"))
    out.extend(isotropic_checks(p, rng, max(samples // 2, 1)))
    out.append(center_check(p))
    out.extend(extraction_checks(p))
    return out


def verify_params(params, seed: int = 0, samples: int = 20) -> list[Check]:
    """Checks on the parameters, then on the built algebra when it is a Lie algebra."""
    built = build(params)
    jac = lie.jacobi_defect(built.alg)
    adm = admissibility(params)
    out = [Check("Lie conditions on (K, D, mu, b) iff Jacobi holds", _status(adm.admissible == jac.is_zero),
                 f"admissible = {adm.admissible}")]
    if not adm.admissible:
        return out
    uni = unimodularity(params)
    out.append(Check("H = (mu + tr D) e + H0", _status(uni.formula_holds)))
    ops = operators(built, cross_check=False)
    mu, d, k = params.mu, params.D, params.K
    ok = ex.allclose(ex.like(d, [ops.B_hat[0, 1], ops.J2[0, 1]]),
                     ex.like(d, [mu * mu + ex.trace(d @ d), -(2 * mu * mu + ex.trace(k @ k))]))
    out.append(Check("e-components of B(e_bar) and J2(e_bar)", _status(ok)))
    cond = einstein_conditions(params)
    lam = einstein_check(built, method="direct")
    zero = lam is not None and ex.is_zero(lam, max(ex.scale_of(built.alg.c), 1.0) ** 2)
    out.append(Check("Einstein conditions iff Ricci-flat extension", _status(cond.einstein == zero),
                     f"einstein = {cond.einstein}"))
    out.extend(verify_algebra(PseudoEuclideanLieAlgebra(lie.LieAlgebra(built.alg.c), built.metric), seed, samples))
    return out


def format_table(checks) -> str:
    width = max(len(c.name) for c in checks)
    lines = [f"{c.status.upper():5}  {c.name:<{width}}  {c.detail}".rstrip() for c in checks]
    failed = sum(c.status == FAIL for c in checks)
    applied = sum(c.status in (PASS, FAIL) for c in checks)
    lines.append(f"{applied - failed}/{applied} applicable checks passed")
    return "\n".join(lines)
