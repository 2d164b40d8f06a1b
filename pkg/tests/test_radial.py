import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from conftest import GRID
from kafourier.corpus import symbolic_corpus
from kafourier.exact import GaussianRational
from kafourier.radial import (
    BranchHypothesisViolated,
    DivergentIntegrand,
    ExpMonomial,
    GammaPole,
    IncompatibleExponentials,
    LaguerreBasisSpec,
    apply_theta,
    basis_function,
    basis_norm_constant,
    basis_value,
    gauss_laguerre,
    gram_matrix,
    inner_product,
    lambda_param,
    laguerre_poly,
    laguerre_poly_sum,
    norm,
)

E = ExpMonomial.term
F = Fraction


class TestLaguerre:
    def test_examples(self):
        assert laguerre_poly(F(7, 3), 0, 2.5) == 1
        assert laguerre_poly(F(1, 2), 1, 2.0) == pytest.approx(-0.5, abs=1e-15)
        assert laguerre_poly(0, 2, 1.0) == pytest.approx(-0.5, abs=1e-15)

    @given(st.floats(-0.95, 6), st.integers(0, 20), st.floats(0, 30))
    def test_recurrence_matches_sum(self, lam, l, t):
        rec = laguerre_poly(lam, l, t)
        direct = laguerre_poly_sum(lam, l, t)
        ref = special.eval_genlaguerre(l, lam, t)
        scale = max(1.0, abs(ref))
        assert abs(rec - ref) <= 1e-12 * scale * (1 + t) ** 2
        # the finite sum is the displayed definition; it agrees at moderate t
        if t < 5:
            assert abs(direct - rec) <= 1e-12 * max(1.0, sum(
                abs(c) * t ** j for j, c in enumerate(special.genlaguerre(l, lam).coeffs[::-1])))

    def test_gamma_pole(self):
        with pytest.raises(GammaPole):
            laguerre_poly(-2, 3, 1.0)


class TestQuadrature:
    @pytest.mark.parametrize("n,alpha", [(5, 0.0), (32, -0.5), (64, 1.5), (128, 3.25)])
    def test_against_scipy(self, n, alpha):
        t, w = gauss_laguerre(n, alpha)
        t_ref, w_ref = special.roots_genlaguerre(n, alpha)
        assert np.allclose(t, t_ref, rtol=1e-12, atol=0)
        big = w_ref > 1e-250
        assert np.allclose(w[big], w_ref[big], rtol=1e-8, atol=0)

    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 2.0])
    def test_moments(self, alpha):
        t, w = gauss_laguerre(16, alpha)
        for j in range(31):
            want = math.exp(math.lgamma(alpha + j + 1))
            assert abs(np.dot(w, t ** j) - want) <= 1e-12 * want

    def test_inner_product_examples(self):
        assert inner_product(E(1, 0, F(1, 2), 1), E(1, 0, F(1, 2), 1), 0) == pytest.approx(1, abs=1e-14)
        spec = LaguerreBasisSpec(2, F(1, 2), 1, 1)
        f0, f1 = basis_function(spec, 0), basis_function(spec, 1)
        d = spec.measure_exponent
        assert inner_product(f0, f0, d) == pytest.approx(1, abs=1e-12)
        assert abs(inner_product(f0, f1, d)) <= 1e-12

    def test_against_adaptive(self):
        for f in symbolic_corpus(10, seed=4):
            for g in symbolic_corpus(3, seed=9):
                try:
                    got = inner_product(f, g, F(1, 2))
                except (DivergentIntegrand, IncompatibleExponentials):
                    continue
                h = lambda r: (f(r) * np.conj(g(r)) * r ** 0.5).real
                val = integrate.quad(h, 0, 1, epsabs=0, epsrel=1e-12, limit=300)[0]
                val += integrate.quad(h, 1, np.inf, epsabs=0, epsrel=1e-12, limit=300)[0]
                assert abs(got.real - val) <= 1e-8 * max(1.0, abs(val))

    def test_divergent(self):
        with pytest.raises(DivergentIntegrand):
            inner_product(E(1, 2), E(1, 0), 0)
        with pytest.raises(DivergentIntegrand):
            inner_product(E(1, -3, 1, 1), E(1, 0, 1, 1), 0)

    def test_incompatible(self):
        with pytest.raises(IncompatibleExponentials):
            inner_product(E(1, 0, 1, 1), E(1, 0, 1, 2), 0)


class TestLambda:
    def test_examples(self):
        assert lambda_param(3, 0, 2, 0) == F(1, 2)
        assert lambda_param(1, F(1, 2), 1, 0) == 0
        assert lambda_param(3, 0, -2, 0) == F(-1, 2)

    def test_zero_a(self):
        with pytest.raises(ValueError):
            lambda_param(1, 0, 0, 0)


class TestBasis:
    def test_gaussian_constant(self):
        f = basis_function(LaguerreBasisSpec(1, 0, 2, 0), 0)
        c = (2 / math.sqrt(math.pi)) ** 0.5
        assert f(1.3) == pytest.approx(c * math.exp(-1.3 ** 2 / 2), rel=1e-14)
        val = integrate.quad(lambda r: f(r).real ** 2, 0, np.inf, epsabs=0, epsrel=1e-13)[0]
        assert val == pytest.approx(1, rel=1e-12)

    def test_unit_norm_against_adaptive(self):
        for N, k, a, m in GRID[::7]:
            spec = LaguerreBasisSpec(N, k, a, m)
            if not spec.hypothesis_holds():
                continue
            d = float(spec.measure_exponent)
            for l in (0, 3):
                f = basis_function(spec, l)
                h = lambda r: abs(f(r)) ** 2 * r ** d
                val = sum(integrate.quad(h, lo, hi, epsabs=0, epsrel=1e-12, limit=400)[0]
                          for lo, hi in ((0, 1), (1, np.inf)))
                assert val == pytest.approx(1, rel=1e-8)

    def test_gram_identity(self):
        for N, k, a, m in GRID:
            for sign in (1, -1):
                spec = LaguerreBasisSpec(N, k, a, m, sign)
                if spec.hypothesis_holds():
                    assert np.max(np.abs(gram_matrix(spec) - np.eye(8))) <= 1e-8

    def test_negative_branch_is_kappa_image(self):
        for N, k, a, m in GRID[::5]:
            plus = LaguerreBasisSpec(N, k, a, m, 1)
            minus = plus.flipped()
            if not (plus.hypothesis_holds() and minus.hypothesis_holds()):
                continue
            c = float(plus.c)
            for l in range(4):
                for r in (0.5, 1.0, 2.0):
                    want = r ** (-c) * basis_value(plus, l, 1 / r)
                    assert basis_value(minus, l, r) == pytest.approx(want, rel=1e-12, abs=1e-300)
                    assert basis_function(minus, l)(r).real == pytest.approx(want, rel=1e-10, abs=1e-14)

    def test_symbolic_matches_recurrence(self):
        spec = LaguerreBasisSpec(3, F(1, 2), F(1, 2), 2)
        r = np.array([0.1, 0.7, 1.5, 3.0])
        for l in range(8):
            assert np.allclose(basis_function(spec, l)(r).real, basis_value(spec, l, r), rtol=1e-9, atol=1e-13)

    def test_branch_hypothesis(self):
        with pytest.raises(BranchHypothesisViolated):
            basis_function(LaguerreBasisSpec(1, 0, 1, 0, 1), 0)  # lambda = -1
        with pytest.raises(BranchHypothesisViolated):
            basis_function(LaguerreBasisSpec(1, 0, 1, 0, -1), 0)  # lambda_- = 1
        basis_function(LaguerreBasisSpec(3, 0, 1, 0, -1), 0)  # lambda_- = -1 is admissible

    def test_leading_behavior(self):
        for N, k, a, m in GRID[::3]:
            plus = LaguerreBasisSpec(N, k, a, m, 1)
            if plus.hypothesis_holds():
                f = basis_function(plus, 2)
                pure = [g for (g, q, s) in f.terms]
                assert min(pure) == m
                assert all(q == 1 / a and s == a for (_, q, s) in f.terms)
            minus = plus.flipped()
            if minus.hypothesis_holds():
                f = basis_function(minus, 2)
                assert max(g for (g, _, _) in f.terms) == -(plus.c + m)
                assert all(q == 1 / a and s == -a for (_, q, s) in f.terms)

    def test_norm_constant_needs_square_root(self):
        # without the square root the norm would be n_l^2 / n_l = n_l, not 1
        spec = LaguerreBasisSpec(2, 0, 1, 0)
        f = basis_function(spec, 1, normalized=False)
        n2 = inner_product(f, f, spec.measure_exponent).real
        assert basis_norm_constant(spec, 1) == pytest.approx(1 / math.sqrt(n2), rel=1e-12)


class TestTheta:
    def test_examples(self):
        assert apply_theta(E(1, 3)) == E(3, 3)
        assert apply_theta(E(1, 0, 1, 1)) == E(-1, 1, 1, 1)
        assert apply_theta(E(1, 1, 1, 2)) == E(1, 1, 1, 2) + E(-2, 3, 1, 2)

    @given(st.integers(0, 500), st.integers(0, 500))
    def test_linear_and_leibniz(self, s1, s2):
        f = symbolic_corpus(1, seed=s1)[0]
        g = symbolic_corpus(1, seed=s2)[0]
        c = GaussianRational(F(2, 3), -1)
        assert apply_theta(f * c + g) == apply_theta(f) * c + apply_theta(g)
        try:
            fg = f * g
        except IncompatibleExponentials:
            return
        assert apply_theta(fg) == apply_theta(f) * g + f * apply_theta(g)

    def test_against_finite_difference(self):
        for f in symbolic_corpus(5, seed=1):
            for r in (0.6, 1.4):
                h = 1e-5 * r
                fd = r * (f(r + h) - f(r - h)) / (2 * h)
                assert abs(apply_theta(f)(r) - fd) <= 1e-6 * max(1.0, abs(fd))


class TestClass:
    def test_merge_and_drop(self):
        f = ExpMonomial([(1, 1, 1, 1), (2, 1, 1, 1), (-3, 1, 1, 1), (5, 0, 0, 0)])
        assert f == E(5)

    def test_kappa_closed(self):
        assert E(1, 0, 1, 1).kappa(2, 1) == E(1, 1, 1, 2)
        for f in symbolic_corpus(5):
            assert f.kappa(1, 0) == f

    def test_json_round_trip(self):
        for f in symbolic_corpus(5):
            g = ExpMonomial.from_json(f.to_json())
            for r in (0.5, 2.0):
                assert abs(f(r) - g(r)) <= 1e-14 * max(1.0, abs(f(r)))

    def test_norm_of_zero(self):
        assert norm(E(1, 0, 1, 1) - E(1, 0, 1, 1), 0) == 0
