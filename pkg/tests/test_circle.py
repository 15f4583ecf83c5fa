"""Circle-method approximant tests: construction, evaluation, Parseval."""

import numpy as np
import pytest

from shiftconv import circle
from shiftconv.arith import euler_phi
from shiftconv.errors import OverlappingRanges


@pytest.fixture(scope="module")
def small_set():
    return circle.build_moduli_set(3, 11, 1)


class TestModuliSet:
    def test_example(self, small_set):
        q1s = sorted({m[0] for m in small_set.members})
        q2s = sorted({m[1] for m in small_set.members})
        assert q1s == [3, 5]
        assert q2s == [11, 13, 17, 19]
        assert len(small_set.members) == 8

    def test_h_exclusion(self):
        ms = circle.build_moduli_set(3, 11, 3)
        assert sorted({m[0] for m in ms.members}) == [5]

    def test_overlap_rejected(self):
        with pytest.raises(OverlappingRanges):
            circle.build_moduli_set(3, 5, 1)

    def test_L_consistent(self, small_set):
        assert small_set.L == small_set.recompute_L()
        assert small_set.L == sum(euler_phi(q) for _, _, q in small_set.members)

    def test_members_sorted_unique(self, small_set):
        ms = list(small_set.members)
        assert ms == sorted(set(ms))


class TestApproximantEval:
    def test_isolated_spike(self):
        # single-modulus family: Q1=2 -> {2,3}, Q2=7 -> {7,...}; build a
        # one-member set by exclusion
        ms = circle.build_moduli_set(2, 7, 3 * 11 * 13)  # keeps q1=2, q2=7
        assert len(ms.members) == 1
        q = ms.members[0][2]
        delta = 1.0 / (4 * q * q / 8.0)  # inside the allowed window, < 1/(2q^2)
        A = circle.Approximant(moduli=ms, delta=delta)
        x = 1.0 / q  # a/q with a=1
        expect = 1.0 / (2 * delta * euler_phi(q))
        assert circle.approximant_eval(A, x) == pytest.approx(expect, rel=1e-12)

    def test_zero_far_from_fractions(self, small_set):
        A = circle.Approximant(moduli=small_set, delta=1e-4)
        # x halfway between consecutive fractions with tiny delta
        assert circle.approximant_eval(A, 0.5 + 1.0 / (2 * 33 * 39)) >= 0.0
        assert circle.approximant_eval(A, np.pi / 7 % 1.0) == 0.0

    def test_nonnegative_and_mass_one(self, small_set):
        Q = small_set.max_modulus
        A = circle.Approximant(moduli=small_set, delta=1.0 / Q)
        xs = np.linspace(0, 1, 20011)[:-1]
        vals = np.array([circle.approximant_eval(A, float(x)) for x in xs])
        assert (vals >= 0).all()
        assert np.mean(vals) == pytest.approx(1.0, abs=5e-2)

    def test_delta_window_enforced(self, small_set):
        with pytest.raises(ValueError):
            circle.Approximant(moduli=small_set, delta=1.0)


class TestFourierCoeff:
    def test_a0_exact(self, small_set):
        A = circle.Approximant(moduli=small_set, delta=1.0 / small_set.max_modulus)
        assert circle.fourier_coeff(A, 0) == 1.0 + 0j

    def test_conjugate_symmetry_and_real(self, small_set):
        A = circle.Approximant(moduli=small_set, delta=1.0 / small_set.max_modulus)
        for n in (1, 5, 33, 100):
            an = circle.fourier_coeff(A, n)
            am = circle.fourier_coeff(A, -n)
            assert an.imag == 0.0
            assert an == np.conj(am)

    def test_quadrature_oracle(self, small_set):
        # a_n must equal the direct integral of I~(x) e(-n x)
        Q = small_set.max_modulus
        A = circle.Approximant(moduli=small_set, delta=1.0 / Q)
        m = 400_000
        xs = (np.arange(m) + 0.5) / m
        vals = np.array(
            [0.0] * m
        )
        from shiftconv.arith import unit_residues

        count = np.zeros(m)
        for q1, q2, q in small_set.members:
            for a in unit_residues(q):
                d = np.abs(xs - a / q)
                count += (np.minimum(d, 1.0 - d) <= A.delta)
        ivals = count / (2 * A.delta * small_set.L)
        for n in (1, 7, 40):
            direct = np.mean(ivals * np.exp(-2j * np.pi * n * xs))
            assert abs(circle.fourier_coeff(A, n) - direct) < 2e-3

    def test_trivial_bound(self, small_set):
        from shiftconv.arith import divisors
        import math

        A = circle.Approximant(moduli=small_set, delta=1.0 / small_set.max_modulus)
        for n in (1, 6, 33, 95):
            bound = sum(
                sum(d for d in divisors(math.gcd(n, q))) for _, _, q in small_set.members
            ) / small_set.L
            assert abs(circle.fourier_coeff(A, n)) <= bound + 1e-12

    def test_tail_decay_bound(self, small_set):
        # for |n| > 1/delta the coefficient obeys the 1/(2 pi n delta) form
        A = circle.Approximant(moduli=small_set, delta=1.0 / small_set.max_modulus)
        from shiftconv.arith import divisors
        import math

        n = int(3 / A.delta)
        bound = sum(
            sum(d for d in divisors(math.gcd(n, q))) for _, _, q in small_set.members
        ) / small_set.L / (2 * np.pi * n * A.delta) * np.pi
        assert abs(circle.fourier_coeff(A, n)) <= bound + 1e-12


class TestL2Error:
    def test_matches_grid_quadrature(self, small_set):
        Q = small_set.max_modulus
        A = circle.Approximant(moduli=small_set, delta=1.0 / Q)
        est = circle.l2_error(A, int(20000 / A.delta))
        grid = circle.quadrature_l2_error(A, A.delta / 50.0)
        assert est.value == pytest.approx(grid, rel=0.01)

    def test_requires_nmax_past_1_over_delta(self, small_set):
        A = circle.Approximant(moduli=small_set, delta=1.0 / small_set.max_modulus)
        with pytest.raises(ValueError):
            circle.l2_error(A, 10)

    def test_bound_shape(self, small_set):
        Q = small_set.max_modulus
        for e in (-1.0, -1.5, -2.0):
            delta = float(Q) ** e
            A = circle.Approximant(moduli=small_set, delta=delta)
            est = circle.l2_error(A, int(500 / delta))
            bound = 8 * Q * Q * np.log(Q) / (delta * small_set.L ** 2)
            assert est.value <= bound

    def test_delta_monotonicity(self, small_set):
        # wider intervals (delta = Q^-1) beat the narrow extreme (Q^-2)
        Q = small_set.max_modulus
        wide = circle.Approximant(moduli=small_set, delta=1.0 / Q)
        narrow = circle.Approximant(moduli=small_set, delta=float(Q) ** -2)
        e_wide = circle.l2_error(wide, int(500 * Q)).value
        e_narrow = circle.l2_error(narrow, int(500 * Q * Q)).value
        assert e_wide < e_narrow

    def test_more_moduli_helps(self):
        # same anchors, same delta: the 8-member set beats a 2-member subset
        big = circle.build_moduli_set(3, 11, 1)
        small = circle.build_moduli_set(3, 11, 5 * 13 * 17 * 19)  # q1 in {3}, q2 in {11}
        delta = 1.0 / big.max_modulus
        e_big = circle.l2_error(circle.Approximant(big, delta), int(500 / delta)).value
        e_small = circle.l2_error(circle.Approximant(small, delta), int(500 / delta)).value
        assert e_big < e_small


class TestCensus:
    def test_census_rows(self):
        rep = circle.l2_error_census([(3, 11), (3, 13)], [-1.0, -2.0])
        assert len(rep.records) == 4
        assert rep.summary["max_ratio"] <= 8.0
        for row in rep.records:
            assert 0.0 < row["density"] < 1.0
