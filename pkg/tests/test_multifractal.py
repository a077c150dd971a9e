import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from quasicrit import models as M
from quasicrit import multifractal as MF
from quasicrit import spectral as S
from quasicrit.errors import EmptyWindowError, ParameterError


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


states = arrays(np.float64, st.integers(2, 60), elements=st.floats(-1, 1)).filter(
    lambda v: np.linalg.norm(v) > 1e-3
).map(unit)


class TestMoments:
    @pytest.mark.parametrize("q", [0.5, 1.0, 2.0, 3.5])
    def test_uniform(self, q):
        N = 37
        assert MF.moment_pq(np.full(N, 1 / math.sqrt(N)), q) == pytest.approx(N ** (1 - q))

    @pytest.mark.parametrize("q", [0.5, 2.0, 4.0])
    def test_single_site(self, q):
        e = np.zeros(10)
        e[3] = 1.0
        assert MF.moment_pq(e, q) == 1.0

    def test_two_sites(self):
        assert MF.moment_pq(unit([1, 1]), 2) == pytest.approx(0.5)

    def test_q_zero_counts_support(self):
        assert MF.moment_pq(unit([1, 0, 2, 0]), 0) == 2


class TestDimensions:
    @pytest.mark.parametrize("q", [1.0, 1.5, 2.0, 4.0])
    def test_uniform_is_one(self, q):
        N = 50
        assert MF.fractal_dimension(np.full(N, N**-0.5), q, N) == pytest.approx(1.0)

    @pytest.mark.parametrize("q", [1.0, 2.0, 3.0])
    def test_single_site_is_zero(self, q):
        e = np.zeros(50)
        e[0] = 1
        assert MF.fractal_dimension(e, q, 50) == pytest.approx(0.0, abs=1e-15)

    @given(states)
    def test_renyi_monotone(self, v):
        N = len(v)
        ds = [MF.fractal_dimension(v, q, N) for q in (1.0, 1.5, 2.0, 3.0, 4.0)]
        assert all(a >= b - 1e-9 for a, b in zip(ds, ds[1:]))
        assert all(-1e-9 <= d <= 1 + 1e-9 for d in ds)

    def test_tau2_all_matches(self):
        es = S.diagonalize(M.build_hamiltonian(M.minimal_model(8, 2.0, 0.1)))
        vec = MF.tau2_all(es.states, es.N)
        assert vec[5] == pytest.approx(MF.fractal_dimension(es.states[:, 5], 2, es.N))

    def test_free_ring_average(self):
        # recorded mean over all states at n=12 is 0.9187; log corrections keep it below 1
        es = S.diagonalize(M.build_single_chain(M.free_chain(12)))
        mean = MF.tau2_all(es.states, es.N).mean()
        assert mean == pytest.approx(0.9187435808408758, abs=1e-9)
        assert abs(mean - 1) < 0.15

    def test_plane_wave_superposition_scaling(self):
        vals = []
        for n in range(10, 17):
            L = M.fibonacci_approximant(n).F_n
            m = np.arange(L)
            psi = sum(c * np.exp(2j * np.pi * k * m / L) for k, c in zip([1, 2, 3, 5, 8], [1, 0.5, 0.7, 0.3, 0.9]))
            psi /= np.linalg.norm(psi)
            vals.append(MF.moment_pq(psi, 2) * L)
        assert max(vals) / min(vals) < 1.05
        assert vals[0] == pytest.approx(1.925849403122129, rel=1e-9)


class TestAlpha:
    def test_uniform(self):
        assert np.allclose(MF.alpha_indices(np.full(16, 0.25), 16), 1.0)

    def test_single_site_and_zero(self):
        a = MF.alpha_indices(np.array([1.0, 0.0]), 2)
        assert a[0] == 0 and np.isinf(a[1])

    def test_half_exponent(self):
        L = 400
        v = np.zeros(L)
        v[0] = L**-0.25  # |psi|^2 = L^-1/2
        assert MF.alpha_indices(v, L)[0] == pytest.approx(0.5)

    def test_random_vector_reproducible(self):
        rng = np.random.default_rng(2024)
        v = unit(rng.normal(size=100))
        a = MF.alpha_min(v, 100)
        assert 0 < a < 1
        assert a == pytest.approx(0.5932809058893094, abs=1e-12)

    @given(states)
    def test_alpha_min_is_min_index(self, v):
        N = len(v)
        assert MF.alpha_min(v, N) == pytest.approx(np.min(MF.alpha_indices(v, N)))
        assert -1e-12 <= MF.alpha_min(v, N) <= 1 + 1e-9


class TestStats:
    def test_sum_rules(self):
        es = S.diagonalize(M.build_hamiltonian(M.minimal_model(10, 2.0, 0.1)))
        for s in MF.state_stats(es, qs=(1.0, 2.0)):
            assert abs(s.P[1.0] - 1) < 1e-12
            assert abs(s.ipr * s.npr * es.N - 1) < 1e-12
            assert s.P[2.0] == pytest.approx(s.ipr)

    def test_window_average(self):
        stats = [MF.StateStats(0, 0.1, {}, 0.3, 0.2, 0.1, 0.1), MF.StateStats(1, 5.0, {}, 0.9, 0.8, 0.1, 0.1)]
        assert MF.window_average(stats, 0.0, 1.0, "tau2") == 0.3
        assert MF.window_average(stats, -10, 10, "alpha_min") == pytest.approx(0.5)
        with pytest.raises(EmptyWindowError):
            MF.window_average(stats, 2, 3, "tau2")

    def test_masked_mean_empty(self):
        with pytest.raises(EmptyWindowError):
            MF.masked_mean([1, 2], [False, False])

    def test_classify(self):
        assert MF.classify_tau2([0.1, 0.5, 0.9]).tolist() == ["loc", "crit", "ext"]

    def test_mean_ipr_npr_dimer(self):
        es = S.diagonalize(np.array([[0.0, 1.0], [1.0, 0.0]]))
        ipr, npr = MF.mean_ipr_npr(es)
        assert ipr == pytest.approx(0.5) and npr == pytest.approx(1.0)


class TestExtrapolate:
    def test_constant(self):
        s = MF.ScalingSeries("x")
        for n in (10, 11, 12):
            s.add(n, 2 * n, 0.7)
        f = MF.extrapolate(s)
        assert f.intercept == pytest.approx(0.7) and f.slope == pytest.approx(0, abs=1e-12)

    def test_affine(self):
        s = MF.ScalingSeries("x")
        for n in range(12, 19):
            s.add(n, 0, 0.4 + 1.3 / n)
        f = MF.extrapolate(s)
        assert abs(f.intercept - 0.4) < 1e-12 and f.residual < 1e-12

    def test_log_abscissa(self):
        s = MF.ScalingSeries("D2", "1/lnL")
        for L in (100, 1000, 10000):
            s.add(0, L, 0.9 - 2.0 / math.log(L))
        assert MF.extrapolate(s).intercept == pytest.approx(0.9)

    def test_too_few(self):
        s = MF.ScalingSeries("x")
        s.add(1, 1, 1.0)
        s.add(2, 2, 1.0)
        with pytest.raises(ParameterError):
            MF.extrapolate(s)

    def test_degenerate(self):
        s = MF.ScalingSeries("x")
        for v in (1.0, 2.0, 3.0):
            s.add(5, 10, v)
        with pytest.raises(ParameterError):
            MF.extrapolate(s)


class TestHistogram:
    def test_identical_values(self):
        h = MF.alpha_histogram([0.31] * 9, 0.02, 100)
        assert np.count_nonzero(h.counts) == 1 and h.counts.sum() == 9
        assert h.modes() == 1

    def test_range_and_f(self):
        h = MF.alpha_histogram([0.0, 0.5, 1.0, 1.0], 0.02, 100)
        assert h.edges[0] == 0 and h.edges[-1] == pytest.approx(1.02)
        assert h.counts.sum() == 4
        f = h.f_L
        assert f[h.counts == 2][0] == pytest.approx(math.log(2) / math.log(100))
        assert np.isnan(f[h.counts == 0]).all()

    def test_infinite_values_dropped(self):
        h = MF.alpha_histogram([0.2, np.inf], 0.02, 10)
        assert h.counts.sum() == 1

    def test_modes(self):
        assert MF.count_modes([0, 10, 12, 0, 0, 9, 0]) == 2
        assert MF.count_modes([40, 0, 0, 0, 0, 0, 1]) == 1  # below the 5% floor
        assert MF.count_modes([0, 0]) == 0

    def test_bad_width(self):
        with pytest.raises(ParameterError):
            MF.alpha_histogram([0.1], 0.0, 10)

    @given(st.lists(st.floats(0, 1), min_size=1, max_size=200), st.sampled_from([0.01, 0.02, 0.05]))
    def test_counts_conserved(self, vals, d):
        assert MF.alpha_histogram(vals, d, 50).counts.sum() == len(vals)
