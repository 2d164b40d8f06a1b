import itertools
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kafourier.roots import (
    GroupTooLarge,
    MultiplicityFunction,
    OrbitConstancyViolation,
    ProportionalRootViolation,
    ReflectionClosureViolation,
    ZeroRoot,
    coxeter_group,
    dump_root_data,
    load_root_data,
    permutes_roots,
    preset,
    reflect,
    validate_root_system,
    weight_wk,
    weight_wka,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
vectors2 = st.tuples(rationals, rationals)


def _brute_force_closure(R):
    """Independent group oracle: words in reflections applied to the root list."""
    def refl_perm(alpha):
        return tuple(R.index_of(reflect(alpha, b)) for b in R.roots)

    gens = [refl_perm(a) for a in R.positive_roots]
    identity = tuple(range(len(R.roots)))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = tuple(g[s[i]] for i in range(len(s)))
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


class TestReflect:
    def test_examples(self):
        assert reflect((1, 0), (3, 4)) == (-3, 4)
        assert reflect((1, 1), (1, 1)) == (-1, -1)
        assert reflect((2, 0), (3, 4)) == (-3, 4)

    def test_zero_root_rejected(self):
        with pytest.raises(ZeroRoot):
            reflect((0, 0), (1, 2))

    @given(vectors2.filter(lambda v: any(v)), vectors2)
    def test_involutive(self, alpha, x):
        assert reflect(alpha, reflect(alpha, x)) == tuple(x)

    @given(vectors2.filter(lambda v: any(v)), vectors2, rationals.filter(bool))
    def test_scale_invariant(self, alpha, x, c):
        assert reflect(tuple(c * a for a in alpha), x) == reflect(alpha, x)

    @given(vectors2.filter(lambda v: any(v)), rationals)
    def test_fixes_orthogonal_line(self, alpha, t):
        perp = (-alpha[1] * t, alpha[0] * t)
        assert reflect(alpha, perp) == perp


class TestValidate:
    def test_a1_in_plane(self):
        R = validate_root_system([[1, 0], [-1, 0]])
        assert R.positive_roots == ((1, 0),)

    def test_proportional(self):
        with pytest.raises(ProportionalRootViolation):
            validate_root_system([[1, 0], [-1, 0], [2, 0], [-2, 0]])

    def test_zero(self):
        with pytest.raises(ZeroRoot):
            validate_root_system([[0, 0]])

    def test_not_closed(self):
        with pytest.raises(ReflectionClosureViolation):
            validate_root_system([[1, 0], [-1, 0], [1, 1], [-1, -1]])

    def test_dihedral_three(self):
        R = preset("I2(3)")
        assert len(R.roots) == 6 and len(R.positive_roots) == 3
        assert not R.exact
        # oracle: explicit closure over all pairs
        for a, b in itertools.product(R.roots, R.roots):
            assert R.contains(reflect(a, b))

    def test_positive_split(self):
        for name in ("A1", "A1xA1", "A1xA1xA1", "I2(3)", "I2(4)", "I2(5)"):
            R = preset(name)
            pos = set(R.positive_roots)
            neg = {tuple(-c for c in v) for v in R.positive_roots}
            assert not pos & neg
            assert len(pos) + len(neg) == len(R.roots)

    def test_non_spanning_accepted(self):
        R = validate_root_system([[0, 1, 0], [0, -1, 0]])
        assert R.dimension == 3 and len(R.positive_roots) == 1


class TestCoxeterGroup:
    @pytest.mark.parametrize("name,order", [("A1", 2), ("A1xA1", 4), ("I2(3)", 6), ("I2(4)", 8),
                                            ("I2(5)", 10), ("A1xA1xA1", 8)])
    def test_orders(self, name, order):
        R = preset(name)
        G = coxeter_group(R)
        assert len(G) == order
        assert len(_brute_force_closure(R)) == order

    def test_rank_one(self):
        G = coxeter_group(preset("A1"))
        assert sorted(g[0][0] for g in G) == [-1, 1]

    @pytest.mark.parametrize("name", ["A1xA1", "I2(4)", "A1xA1xA1"])
    def test_closed_orthogonal_permuting(self, name):
        R = preset(name)
        G = coxeter_group(R)
        keys = {tuple(map(tuple, g)) for g in G}
        for g in G:
            M = np.array(g, dtype=float)
            assert np.allclose(M @ M.T, np.eye(R.dimension))
            assert permutes_roots(R, g)
            assert tuple(map(tuple, np.array(g).T.tolist())) in keys
            for h in G:
                prod = tuple(tuple(sum(g[i][l] * h[l][j] for l in range(R.dimension)) for j in range(R.dimension))
                             for i in range(R.dimension))
                assert prod in keys

    def test_group_too_large(self):
        with pytest.raises(GroupTooLarge):
            coxeter_group(preset("I2(6)"), max_order=5)


class TestMultiplicity:
    def test_index(self):
        R = preset("I2(4)")
        k = MultiplicityFunction.from_orbits(R, [([1, 0], "1/2"), ([1, 1], "1/3")])
        assert k.index == 2 * Fraction(1, 2) + 2 * Fraction(1, 3)

    def test_orbit_constancy_enforced(self):
        R = preset("I2(3)")
        vals = [Fraction(1)] * 6
        vals[0] = Fraction(2)
        with pytest.raises(OrbitConstancyViolation):
            MultiplicityFunction.from_root_values(R, vals)

    def test_json_round_trip(self):
        R = preset("I2(4)")
        k = MultiplicityFunction.from_orbits(R, [([1, 0], "1/2"), ([1, 1], "2")])
        R2, k2 = load_root_data(json.dumps(dump_root_data(R, k)))
        assert R2.roots == R.roots and k2.values == k.values


class TestWeights:
    def test_wk_examples(self):
        R1 = preset("A1")
        assert weight_wk(MultiplicityFunction.constant(R1, 0), [1.0]) == 1
        assert weight_wk(MultiplicityFunction.constant(R1, "1/2"), [1.0]) == 1
        R = validate_root_system([[1, 0], [-1, 0]])
        k = MultiplicityFunction.constant(R, 1)
        t = 0.7
        assert weight_wk(k, [math.cos(t), math.sin(t)]) == pytest.approx(math.cos(t) ** 2, rel=1e-14)

    def test_wka_examples(self):
        R2 = preset("A1xA1")
        k0 = MultiplicityFunction.constant(R2, 0)
        assert weight_wka(k0, 2, [0.3, -1.2]) == 1
        assert weight_wka(k0, 1, [0.0, 4.0]) == pytest.approx(0.25)
        k = MultiplicityFunction.constant(preset("A1"), "1/2")
        assert weight_wka(k, 2, [3.0]) == pytest.approx(3.0)

    def test_wka_rejects_origin(self):
        with pytest.raises(ValueError):
            weight_wka(MultiplicityFunction.constant(preset("A1"), 1), 1, [0.0])

    @given(st.floats(-3, 3), st.floats(0.05, 2), st.sampled_from(["I2(3)", "I2(4)", "A1xA1"]))
    def test_wk_group_invariant(self, t, kval, name):
        R = preset(name)
        k = MultiplicityFunction.constant(R, Fraction(kval).limit_denominator(20))
        w = np.array([math.cos(t), math.sin(t)])
        base = weight_wk(k, w)
        for g in coxeter_group(R):
            gw = np.array(g, dtype=float) @ w
            assert abs(weight_wk(k, gw / np.linalg.norm(gw)) - base) <= 1e-12 * max(1.0, base)

    @given(st.floats(-3, 3), st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(2), Fraction(-1, 3)]))
    def test_wka_polar_factorization(self, t, a):
        R = preset("I2(4)")
        k = MultiplicityFunction.from_orbits(R, [([1, 0], "1/2"), ([1, 1], "3/2")])
        w = [math.cos(t), math.sin(t)]
        base = weight_wk(k, w)
        for r in (0.5, 1.0, 2.0):
            want = r ** float(a - 2 + 2 * k.index) * base
            got = weight_wka(k, a, [r * c for c in w])
            assert abs(got - want) <= 1e-12 * max(abs(want), 1e-300)
