"""Coefficient-table tests: eta-product integers, Hecke structure, lift oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftconv import coeffs
from shiftconv.errors import InsufficientBase, OutOfRange, UnsupportedWeight

# First integer coefficients of the weight-12 form (classical, hand-checkable
# via a(mn) = a(m)a(n) for coprime m,n and a(p^2) = a(p)^2 - p^11).
KNOWN_A = {
    1: 1, 2: -24, 3: 252, 4: -1472, 5: 4830, 6: -6048, 7: -16744,
    8: 84480, 9: -113643, 10: -115920, 11: 534612, 12: -370944,
    13: -577738, 14: 401856, 15: 1217160, 16: 987136, 17: -6905934,
    18: 2727432, 19: 10661420, 20: -7109760, 24: 21288960, 25: -25499225,
}


@pytest.fixture(scope="module")
def gl2():
    return coeffs.build_gl2_table(12, 4000)


@pytest.fixture(scope="module")
def gl3(gl2):
    return coeffs.build_gl3_sym2_table(gl2, 4000)


class TestGL2:
    def test_known_integers(self, gl2):
        for n, a in KNOWN_A.items():
            assert gl2.integer_values[n] == a

    def test_lambda_one(self, gl2):
        assert gl2.lam(1) == 1.0

    def test_lambda_two(self, gl2):
        assert gl2.lam(2) == pytest.approx(-24 / 2 ** 5.5, abs=1e-12)
        assert gl2.lam(2) == pytest.approx(-0.530330, abs=1e-6)

    def test_multiplicativity_example(self, gl2):
        assert gl2.lam(6) == pytest.approx(gl2.lam(2) * gl2.lam(3), rel=1e-12)

    @given(st.integers(2, 60), st.integers(2, 60))
    @settings(max_examples=60)
    def test_multiplicativity(self, gl2, m, n):
        if np.gcd(m, n) != 1:
            return
        assert gl2.lam(m * n) == pytest.approx(gl2.lam(m) * gl2.lam(n), rel=1e-10, abs=1e-12)

    def test_hecke_recursion_residual(self, gl2):
        for p in (2, 3, 5, 7, 11, 13):
            j = 1
            while p ** (j + 1) <= gl2.N:
                resid = abs(
                    gl2.lam(p ** (j + 1))
                    - gl2.lam(p) * gl2.lam(p ** j)
                    + gl2.lam(p ** (j - 1))
                )
                assert resid < 1e-10
                j += 1

    def test_deligne_bound(self, gl2):
        for p in range(2, gl2.N + 1):
            if coeffs.np.all([p % d for d in range(2, int(p ** 0.5) + 1)]):
                assert abs(gl2.lam(p)) <= 2.0 + 1e-12

    def test_unsupported_weight(self):
        with pytest.raises(UnsupportedWeight):
            coeffs.build_gl2_table(16, 10)

    def test_out_of_range(self, gl2):
        with pytest.raises(OutOfRange):
            gl2.lam(gl2.N + 1)


class TestGL3:
    def test_normalization(self, gl3):
        assert gl3.lam(1, 1) == 1.0

    def test_lift_at_two(self, gl3, gl2):
        expect = gl2.lam(2) ** 2 - 1.0
        assert gl3.lam(1, 2) == pytest.approx(expect, rel=1e-12)
        assert gl3.lam(1, 2) == pytest.approx(-0.718750, abs=1e-6)

    def test_self_duality_example(self, gl3):
        assert gl3.lam(2, 1) == gl3.lam(1, 2)

    @given(st.integers(1, 40), st.integers(1, 40))
    @settings(max_examples=80)
    def test_self_duality(self, gl3, m1, m2):
        if m1 * m2 > gl3.N:
            return
        assert gl3.lam(m1, m2) == pytest.approx(gl3.lam(m2, m1), rel=1e-10, abs=1e-12)

    @given(st.integers(1, 30), st.integers(1, 30), st.integers(1, 30), st.integers(1, 30))
    @settings(max_examples=60)
    def test_multiplicativity_coprime_supports(self, gl3, a1, a2, b1, b2):
        if np.gcd(a1 * a2, b1 * b2) != 1 or a1 * b1 * a2 * b2 > gl3.N:
            return
        lhs = gl3.lam(a1 * b1, a2 * b2)
        rhs = gl3.lam(a1, a2) * gl3.lam(b1, b2)
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)

    def test_euler_factor_oracle(self, gl3, gl2):
        # h_k from the recursion must match the direct local expansion
        for p in (2, 3, 5, 7, 13):
            h = gl3.h_tables[p]
            oracle = coeffs.sym2_local_expansion(gl2.lam(p), len(h) - 1)
            assert np.allclose(h, oracle, atol=1e-9)

    def test_first_row_matches_lam(self, gl3):
        for n in (1, 2, 12, 97, 1024, 3999):
            assert gl3.first_row[n] == pytest.approx(gl3.lam(1, n), rel=1e-12)

    def test_insufficient_base(self, gl2):
        with pytest.raises(InsufficientBase):
            coeffs.build_gl3_sym2_table(gl2, gl2.N + 1)


class TestRankinSelberg:
    def test_x_one(self, gl3):
        assert coeffs.rankin_selberg_average(gl3, 1) == 1.0

    def test_band_at_1000(self, gl3):
        v = coeffs.rankin_selberg_average(gl3, 1000)
        assert 0.1 < v < 10.0

    def test_gl2_band(self, gl2):
        v = coeffs.rankin_selberg_average(gl2, 1000)
        assert 0.1 < v < 10.0

    def test_no_growth_trend(self, gl3):
        # normalized averages on a dyadic grid should not trend like x^0.2
        xs = 2 ** np.arange(5, 12)
        vals = np.array([coeffs.rankin_selberg_average(gl3, int(x)) for x in xs])
        slope = np.polyfit(np.log(xs), np.log(vals), 1)[0]
        assert abs(slope) < 0.2

    def test_out_of_range(self, gl3):
        with pytest.raises(OutOfRange):
            coeffs.rankin_selberg_average(gl3, gl3.N + 1)


class TestHeckeInequality:
    def test_example_coprime(self, gl3):
        assert coeffs.hecke_inequality_check(gl3, 2, 3)

    def test_example_divisible(self, gl3):
        assert coeffs.hecke_inequality_check(gl3, 2, 2)

    def test_reduces_to_trivial(self, gl3):
        # m2 = 1: |lam(1,q1)|^2 <= 2 |lam(q1,1)|^2 by self-duality
        assert coeffs.hecke_inequality_check(gl3, 5, 1)

    def test_sweep(self, gl3):
        for q1 in (2, 3, 5, 7, 11):
            for m2 in range(1, 200):
                if q1 * m2 <= gl3.N:
                    assert coeffs.hecke_inequality_check(gl3, q1, m2)


class TestDumpLoad:
    def test_roundtrip_gl2(self, gl2, tmp_path):
        p = tmp_path / "gl2.csv"
        coeffs.dump_table_csv(gl2, p)
        loaded = coeffs.load_table_csv(p)
        assert loaded[2] == gl2.lam(2)
        assert len(loaded) == gl2.N

    def test_roundtrip_gl3(self, gl3, tmp_path):
        p = tmp_path / "gl3.csv"
        coeffs.dump_table_csv(gl3, p)
        loaded = coeffs.load_table_csv(p)
        assert loaded[(1, 7)] == pytest.approx(gl3.lam(1, 7))
