import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quasicrit import dynamics as D
from quasicrit import models as M
from quasicrit import spectral as S
from quasicrit.errors import ParameterError

# sigma=5 Gaussian amplitude: |psi|^2 ~ exp(-d^2/sigma^2), so the width is sigma/sqrt(2),
# value from a direct sum over the discretized packet on a 610-site chain
W0_SIGMA5 = 3.5355339059327378


@pytest.fixture(scope="module")
def free16():
    spec = M.CoupledModelSpec(M.free_chain(16), M.free_chain(16), M.Rung(0.0))
    return spec, S.diagonalize(M.build_hamiltonian(spec))


class TestPacket:
    def test_narrow_limit(self):
        spec = M.minimal_model(10, 2.0, 0.1)
        psi = D.gaussian_packet(D.PacketSpec(sigma=1e-6, m0=12), spec)
        assert psi[12] == pytest.approx(1.0) and np.count_nonzero(psi > 1e-12) == 1

    def test_norm_and_support(self):
        spec = M.minimal_model(15, 2.0, 0.1)
        psi = D.gaussian_packet(D.PacketSpec(sigma=5.0), spec)
        assert abs(np.linalg.norm(psi) - 1) < 1e-12
        m0 = spec.L_chain // 2
        assert np.sum(psi[m0 - 20 : m0 + 21] ** 2) > 0.9999

    def test_chain_support_disjoint(self):
        spec = M.minimal_model(10, 2.0, 0.1)
        a = D.gaussian_packet(D.PacketSpec(chain=1), spec)
        b = D.gaussian_packet(D.PacketSpec(chain=2), spec)
        L = spec.L_chain
        assert not a[L:].any() and not b[:L].any()
        assert a @ b == 0

    @pytest.mark.parametrize("sigma", [0.0, -1.0])
    def test_bad_sigma(self, sigma):
        with pytest.raises(ParameterError) as exc:
            D.PacketSpec(sigma=sigma)
        assert exc.value.path == "dynamics.sigma"

    def test_centre_out_of_range(self):
        with pytest.raises(ParameterError):
            D.gaussian_packet(D.PacketSpec(m0=1000), M.minimal_model(8, 1.0, 0.1))

    def test_packet_wraps_around_the_ring(self):
        spec = M.minimal_model(10, 2.0, 0.1)
        psi = D.gaussian_packet(D.PacketSpec(sigma=3.0, m0=0), spec)
        assert psi[54] == pytest.approx(psi[1])


class TestWidth:
    def test_single_site(self):
        psi = np.zeros(20)
        psi[4] = 1
        assert D.width(psi, 10, 4) == 0.0

    def test_two_sites(self):
        psi = np.zeros(20)
        psi[[0, 2]] = 1 / math.sqrt(2)
        assert D.width(psi, 10, 1) == pytest.approx(1.0)

    def test_both_chains_summed(self):
        psi = np.zeros(20)
        psi[0] = psi[12] = 1 / math.sqrt(2)
        assert D.width(psi, 10, 1) == pytest.approx(1.0)

    def test_initial_gaussian(self):
        spec = M.minimal_model(15, 2.0, 0.1)
        psi = D.gaussian_packet(D.PacketSpec(sigma=5.0), spec)
        assert D.width(psi, spec.L_chain) == pytest.approx(W0_SIGMA5, rel=1e-10)

    def test_displacement_range(self):
        d = D.signed_displacement(8, 0)
        assert d.max() == 4 and d.min() == -3
        d = D.signed_displacement(7, 3)
        assert d.tolist() == [-3, -2, -1, 0, 1, 2, 3]


class TestSpreading:
    def test_ballistic(self, free16):
        spec, es = free16
        tr = D.spread_exponent(es, spec, D.PacketSpec(sigma=1e-6), t_max=100, fit_window=(10, 100))
        assert abs(tr.kappa - 1.0) < 0.03
        # a single site on a free ring spreads as W = sqrt(2) t
        np.testing.assert_allclose(tr.W[tr.times > 10] / tr.times[tr.times > 10], math.sqrt(2), rtol=1e-3)
        assert not tr.reflected

    def test_wide_packet_is_slower(self, free16):
        spec, es = free16
        tr = D.spread_exponent(es, spec, D.PacketSpec(sigma=5.0), t_max=100, fit_window=(10, 100))
        assert tr.kappa < 0.9

    def test_norm_energy_conserved(self):
        spec = M.dual_coupled_model(10, 1.0, 1.0, 0.5)
        H = M.build_hamiltonian(spec)
        es = S.diagonalize(H)
        psi0 = D.gaussian_packet(D.PacketSpec(), spec)
        rows = S.propagate_many(es, psi0, D.log_times(200, 20))
        assert np.abs(np.linalg.norm(rows, axis=1) - 1).max() < 1e-8
        energies = np.einsum("ti,ij,tj->t", rows.conj(), H, rows).real
        assert np.abs(energies - psi0 @ H @ psi0).max() < 1e-8

    def test_window_outside_trace(self, free16):
        spec, es = free16
        with pytest.raises(ParameterError):
            D.spread_exponent(es, spec, D.PacketSpec(), t_max=100, fit_window=(0.1, 50))

    def test_reflection_flag(self):
        spec = M.CoupledModelSpec(M.free_chain(9), M.free_chain(9), M.Rung(0.0))
        es = S.diagonalize(M.build_hamiltonian(spec))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            tr = D.spread_exponent(es, spec, D.PacketSpec(sigma=1e-6), t_max=500)
        assert tr.reflected
        assert tr.t_reflect == pytest.approx(34 / 2 / 2)

    @given(st.floats(0.01, 100))
    def test_fit_scale_invariant(self, c):
        t = D.log_times(500)
        W = 0.6 * t**0.5 * (1 + 0.05 * np.sin(t))
        k1, _, _ = D.fit_power_law(t, W, (10, 100))
        k2, _, _ = D.fit_power_law(t, c * W, (10, 100))
        assert k1 == pytest.approx(k2, abs=1e-12)

    def test_log_times(self):
        t = D.log_times(500)
        assert len(t) == 60 and t[0] == 1 and t[-1] == pytest.approx(500)
