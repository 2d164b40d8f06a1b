"""The full verification suite run by ``kafourier verify``."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List

import numpy as np

from .config import RunConfig
from .corpus import basis_corpus, polynomial_corpus, symbolic_corpus
from .dunkl import dunkl_laplacian, k_harmonic_basis
from .exact import GaussianRational, fraction_str
from .kappa import (
    KappaParams,
    equivariance_check,
    full_h_relation,
    full_intertwining_check,
    group_law_check,
    intertwiner,
    kappa_unitarity_check,
    kelvin_check,
    power_conjugation_check,
    radial_intertwining_check,
    theta_conjugation_check,
)
from .polar import PolarSum
from .polynomials import Polynomial, monomials
from .radial import gram_matrix, norm
from .reporting import Check, Report
from .roots import coxeter_group, permutes_roots, weight_wk, weight_wka
from .sl2 import (
    EM,
    EP,
    H,
    RadialOperatorSpec,
    eigenvalue_of_k,
    full_apply,
    ladder_check,
    verify_sl2_relations,
)
from .spectral import (
    expand,
    ft_admissible,
    ft_consistency_check,
    generalized_ft,
    hilbert_schmidt_closed_form,
    hilbert_schmidt_sum,
    intertwine_check_ft,
    semigroup_law_check,
    synthesize,
)

GRAM_TOL = 1e-8
GRAM_SIZE = 8


def _root_checks(cfg: RunConfig) -> List[Check]:
    R, k = cfg.root_system, cfg.k
    G = coxeter_group(R)
    bad = sum(not permutes_roots(R, g) for g in G)
    checks = [Check("Coxeter group permutes roots", float(bad), 0.0, f"order={len(G)}", exact=R.exact)]
    rng = np.random.default_rng(cfg.seed)
    worst_inv = worst_pol = 0.0
    for _ in range(5):
        w = rng.normal(size=cfg.N)
        w /= np.linalg.norm(w)
        base = weight_wk(k, w)
        for g in G:
            gw = np.array([[float(c) for c in row] for row in g]) @ w
            worst_inv = max(worst_inv, abs(weight_wk(k, gw / np.linalg.norm(gw)) - base))
        for r in (0.5, 1.0, 2.0):
            want = r ** float(cfg.a - 2 + 2 * cfg.index) * base
            got = weight_wka(k, cfg.a, r * w)
            worst_pol = max(worst_pol, abs(got - want) / max(abs(want), 1e-300))
    checks.append(Check("w_k group invariance", worst_inv, 1e-12, ""))
    checks.append(Check("w_ka polar factorization", worst_pol, 1e-12, f"a={fraction_str(cfg.a)}"))
    return checks


def _dunkl_checks(cfg: RunConfig) -> List[Check]:
    R, k = cfg.root_system, cfg.k
    from .roots import MultiplicityFunction

    k0 = MultiplicityFunction.constant(R, 0)
    worst = 0.0
    for p in polynomial_corpus(cfg.N, count=10, max_degree=4, seed=cfg.seed):
        worst = max(worst, (dunkl_laplacian(k0, p) - p.laplacian()).max_abs_coeff())
    checks = [Check("Dunkl Laplacian at k=0 equals Laplacian", worst, 0.0, "10 polynomials", exact=True)]
    tol = 0.0 if R.exact else 1e-9
    max_m = max(cfg.sectors)
    bad_degree = 0
    for m in range(max_m + 1):
        for e in monomials(cfg.N, m):
            img = dunkl_laplacian(k, Polynomial.monomial(e))
            if not img.is_zero() and not img.is_homogeneous(m - 2):
                bad_degree += 1
    checks.append(Check("Dunkl Laplacian lowers degree by 2", float(bad_degree), 0.0, f"m<={max_m}", exact=R.exact))
    G = coxeter_group(R)
    for m in cfg.sectors:
        hb = k_harmonic_basis(k, m)
        lap = max((dunkl_laplacian(k, p).max_abs_coeff() for p in hb.basis), default=0.0)
        checks.append(Check("harmonic basis is k-harmonic", lap, tol, f"m={m} dim={hb.dimension}", exact=R.exact))
        outside = 0
        for g in G:
            ginv = [list(row) for row in zip(*g)]  # orthogonal: inverse is the transpose
            for p in hb.basis:
                if hb.coordinates(p.compose_linear(ginv)) is None:
                    outside += 1
        checks.append(Check("harmonic space is group stable", float(outside), 0.0, f"m={m}", exact=R.exact))
    return checks


def _sector_checks(cfg: RunConfig, m: int, sign: int, corpus) -> List[Check]:
    spec = cfg.sector_spec(m, sign)
    checks = []
    G = gram_matrix(spec, GRAM_SIZE, cfg.nodes)
    err = float(np.max(np.abs(G - np.eye(GRAM_SIZE))))
    checks.append(Check("Gram matrix is identity", err, GRAM_TOL,
                        f"m={m} a={fraction_str(spec.signed_a)} lam={fraction_str(spec.lam)}"))
    checks.extend(verify_sl2_relations(RadialOperatorSpec.from_basis(spec), corpus))
    for l in range(cfg.ladder_max_l + 1):
        checks.extend(ladder_check(spec, l))
    mismatch = 0
    for l in range(cfg.spectrum_max_l + 1):
        want = spec.lam + 2 * l + 1 if sign > 0 else spec.lam - 2 * l - 1
        mismatch += eigenvalue_of_k(spec, l) != want
    checks.append(Check("k-spectrum matches formula", float(mismatch), 0.0,
                        f"m={m} a={fraction_str(spec.signed_a)} l<={cfg.spectrum_max_l}", exact=True))
    return checks


def _factorization_checks(cfg: RunConfig, corpus) -> List[Check]:
    k = cfg.k
    tol = 0.0 if cfg.root_system.exact else 1e-10
    checks = []
    for a in (cfg.a_abs, -cfg.a_abs):
        worst = 0.0
        for m in cfg.sectors:
            for p in k_harmonic_basis(k, m).basis:
                for f in corpus[:4]:
                    for X in (H, EP, EM):
                        d = full_apply(k, a, X, p, f) - full_apply(k, a, X, p, f, factorized=True)
                        worst = max(worst, d.max_defect())
        checks.append(Check("radial factorization of H, E+, E-", worst, tol,
                            f"a={fraction_str(a)} m in {list(cfg.sectors)}", exact=cfg.root_system.exact))
    return checks


def _kappa_checks(cfg: RunConfig, corpus) -> tuple:
    N, index = cfg.N, cfg.index
    kp = intertwiner(N, index)
    checks = group_law_check(
        [(KappaParams(2, 1), KappaParams(3, 2)), (kp, kp), (KappaParams(Fraction(-3, 2), Fraction(1, 3)), kp)],
        corpus,
    )
    checks.append(theta_conjugation_check(kp, corpus))
    checks.append(power_conjugation_check(kp, Fraction(5, 2), corpus))
    for m in cfg.sectors:
        checks.extend(radial_intertwining_check(RadialOperatorSpec(N, index, cfg.a_abs, m), corpus))
        spec = cfg.sector_spec(m, 1)
        checks.append(kappa_unitarity_check(kp, spec.measure_exponent, basis_corpus(spec, 4, cfg.seed), cfg.nodes))
    checks.extend(full_intertwining_check(cfg.k, cfg.a_abs, corpus[:3], max_degree=min(max(cfg.sectors), 2)))
    finding = full_h_relation(cfg.k, cfg.a_abs, corpus[:2])
    rng = random.Random(cfg.seed)
    F = PolarSum(N, [(Polynomial.monomial(tuple(rng.randint(0, 2) for _ in range(N))) + Polynomial.constant(N, 1),
                      corpus[0])])
    checks.append(kelvin_check(F, seed=cfg.seed))
    if N >= 2:
        q, _ = np.linalg.qr(np.random.default_rng(cfg.seed).normal(size=(N, N)))
        checks.append(equivariance_check(kp, F, q, seed=cfg.seed))
    return checks, finding


def _spectral_checks(cfg: RunConfig) -> List[Check]:
    checks = []
    L = cfg.truncation
    for m in cfg.sectors:
        plus = cfg.sector_spec(m, 1)
        minus = cfg.sector_spec(m, -1)
        for spec in (plus, minus):
            s = spec.sign
            if ft_admissible(spec):
                checks.extend(ft_consistency_check(spec, L))
            checks.append(semigroup_law_check(spec, [(Fraction(s, 3), GaussianRational(Fraction(s, 2), 2)),
                                                     (0, GaussianRational(0, 5))], L))
            for re in (0.1, 0.5, 1.0):
                z = s * re
                got, want = hilbert_schmidt_sum(spec, z), hilbert_schmidt_closed_form(spec, z)
                checks.append(Check("Hilbert-Schmidt sum", abs(got - want) / want, 1e-10,
                                    f"m={m} a={fraction_str(spec.signed_a)} Re z={z}"))
        if not ft_admissible(plus):
            continue
        corpus = basis_corpus(plus, 3, cfg.seed)
        checks.extend(intertwine_check_ft(plus, L=min(L, 12), corpus=corpus, nodes=cfg.nodes))
        worst_c = worst_f = worst_rt = 0.0
        d = plus.measure_exponent
        for g in corpus:
            c = expand(g, plus, 16, cfg.nodes)
            worst_rt = max(worst_rt, c.residual)
            Fc = generalized_ft(c)
            worst_c = max(worst_c, abs(Fc.norm() - c.norm()))
            worst_f = max(worst_f, abs(norm(synthesize(Fc), d, cfg.nodes) - norm(g, d, cfg.nodes)))
        label = f"m={m} a={fraction_str(plus.a)}"
        checks.append(Check("FT preserves coefficient norm", worst_c, 1e-12, label))
        checks.append(Check("FT preserves function norm", worst_f, 1e-8, label))
        checks.append(Check("expansion round-trip residual", worst_rt, 1e-7, label + " L=16"))
    return checks


def run_verification(cfg: RunConfig) -> Report:
    """Run every identity check for ``cfg`` and collect a deterministic report."""
    report = Report("kafourier verification report", cfg.echo())
    corpus = symbolic_corpus(20, seed=cfg.seed)
    report.extend(_root_checks(cfg))
    report.extend(_dunkl_checks(cfg))
    for m in cfg.sectors:
        for sign in (1, -1):
            report.extend(_sector_checks(cfg, m, sign, corpus))
    report.extend(_factorization_checks(cfg, corpus))
    kchecks, finding = _kappa_checks(cfg, corpus)
    report.extend(kchecks)
    report.header.append(
        f"finding: kappa H_(k,a) = H_(k,?) kappa holds with ?={finding.satisfied} "
        f"(defect with +a: {finding.same_a_defect:.6g}, with -a: {finding.flipped_a_defect:.6g})"
    )
    report.header.append("finding: Lambda_(k,-a)(z) is admitted only for Re z <= 0 (bounded multipliers)")
    if not ft_admissible(cfg.sector_spec(0, 1)):
        report.header.append("note: lambda at m=0 violates the branch condition; Fourier-transform checks skipped")
    report.extend(_spectral_checks(cfg))
    return report
