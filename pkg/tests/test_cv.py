import numpy as np
import pytest

from nptcert import cv
from nptcert.errors import ParameterOutOfRange, TruncationUnreliable
from nptcert.hermitian import validate_hermitian
from oracles import bs_fock1_output, coherent_vector, mancini_margin

SP1 = cv.FockSpace(1, 30)
SP2 = cv.FockSpace(2, 30)
SMALL1 = cv.FockSpace(1, 12)
SMALL2 = cv.FockSpace(2, 12)
MID1 = cv.FockSpace(1, 20)   # deep enough for order-4 moments of warm states


def kron_state(a, b):
    return validate_hermitian(np.kron(a.matrix, b.matrix),
                              a.dims + b.dims, tol=1e-12)


def number_mean(rho, mode=0):
    pops = cv.mode_populations(rho)
    return float(pops[mode] @ np.arange(pops.shape[1]))


class TestLadderOps:
    def test_destroy_cutoff_two(self):
        expected = np.array([[0, 1, 0], [0, 0, np.sqrt(2)], [0, 0, 0]])
        np.testing.assert_allclose(cv.destroy(2), expected, atol=1e-15)

    def test_annihilates_vacuum(self):
        a = cv.destroy(10)
        v = np.zeros(11)
        v[0] = 1.0
        np.testing.assert_array_equal(a @ v, np.zeros(11))

    def test_commutator_corner(self):
        n_c = 7
        a = cv.destroy(n_c)
        comm = a @ a.conj().T - a.conj().T @ a
        expected = np.eye(n_c + 1)
        expected[n_c, n_c] = -n_c
        np.testing.assert_allclose(comm, expected, atol=1e-13)

    def test_two_mode_embedding(self):
        (a1, ad1), (a2, ad2) = cv.ladder_ops(cv.FockSpace(2, 3))
        assert a1.shape == (16, 16)
        # a1 and a2 commute, [a1, a2^dag] = 0
        np.testing.assert_allclose(a1 @ a2 - a2 @ a1, np.zeros((16, 16)), atol=1e-14)
        np.testing.assert_allclose(a1 @ ad2 - ad2 @ a1, np.zeros((16, 16)), atol=1e-14)


class TestNormalOrderTerms:
    def test_single_boson(self):
        # a a^dag = a^dag a + 1
        assert cv.normal_order_terms(1, 1) == [(1, 1, 1), (1, 0, 0)]

    def test_identity_against_matrices(self):
        # away from the corrupted top corner the reordering is exact
        cutoff = 14
        a = cv.destroy(cutoff)
        ad = a.conj().T
        for j, k in [(1, 1), (2, 2), (2, 1), (3, 2)]:
            lhs = np.linalg.matrix_power(a, j) @ np.linalg.matrix_power(ad, k)
            rhs = sum(
                c * np.linalg.matrix_power(ad, jd) @ np.linalg.matrix_power(a, ka)
                for c, jd, ka in cv.normal_order_terms(j, k)
            )
            good = cutoff - max(j, k)
            np.testing.assert_allclose(lhs[:good, :good], rhs[:good, :good], atol=1e-10)


class TestFactories:
    def test_fock_number(self):
        assert number_mean(cv.fock(1, SP1)) == pytest.approx(1.0, abs=1e-14)

    def test_coherent_number(self):
        assert number_mean(cv.coherent(1.0, SP1)) == pytest.approx(1.0, abs=1e-10)

    def test_squeezed_moments(self):
        r, phi = 0.5, 0.3
        rho = cv.squeezed_vacuum(r, phi, SP1)
        a = cv.destroy(SP1.cutoff)
        mean_n = number_mean(rho)
        mean_a2 = np.trace(rho.matrix @ a @ a)
        assert mean_n == pytest.approx(np.sinh(r) ** 2, abs=1e-9)
        # phase convention: <a^2> = e^{i phi} sinh r cosh r
        expected = np.exp(1j * phi) * np.sinh(r) * np.cosh(r)
        assert abs(mean_a2 - expected) < 1e-9

    def test_two_mode_squeezed_schmidt(self):
        r = 0.5
        rho = cv.two_mode_squeezed(r, SP2)
        d = SP2.dim_per_mode
        # Schmidt coefficients of the pure state: |c_k| proportional to tanh^k
        diag_amps = np.sqrt(np.real(np.diagonal(rho.matrix).reshape(d, d).diagonal()))
        expected = np.tanh(r) ** np.arange(d)
        expected /= np.linalg.norm(expected)
        np.testing.assert_allclose(diag_amps, expected, atol=1e-10)

    def test_thermal_moments(self):
        rho = cv.thermal(1.0, SP1)
        assert number_mean(rho) == pytest.approx(1.0, rel=1e-6)

    def test_unit_trace(self):
        for rho in (cv.fock(2, SP1), cv.coherent(0.7, SP1),
                    cv.squeezed_vacuum(0.4, 0.0, SP1), cv.thermal(0.5, SP1),
                    cv.two_mode_squeezed(0.4, SP2), cv.vacuum(SP2)):
            assert rho.trace() == pytest.approx(1.0, abs=1e-12)

    def test_truncation_guard(self):
        with pytest.raises(TruncationUnreliable):
            cv.coherent(3.0, cv.FockSpace(1, 8))
        rho = cv.coherent(3.0, cv.FockSpace(1, 8), allow_unreliable=True)
        assert rho.trace() == pytest.approx(1.0, abs=1e-12)

    def test_parameter_validation(self):
        with pytest.raises(ParameterOutOfRange):
            cv.fock(31, SP1)
        with pytest.raises(ParameterOutOfRange):
            cv.thermal(-1.0, SP1)
        with pytest.raises(ParameterOutOfRange):
            cv.two_mode_squeezed(0.3, SP1)
        with pytest.raises(ParameterOutOfRange):
            cv.FockSpace(3, 10)
        with pytest.raises(ParameterOutOfRange):
            cv.FockSpace(1, 1)

    def test_diagnostics_fields(self):
        diag = cv.truncation_diagnostics(cv.fock(1, SP1), order=2)
        assert diag.tail_weight == pytest.approx(0.0, abs=1e-15)
        assert diag.reliable


class TestBeamSplitter:
    def test_vacuum_fixed_point(self):
        vac = cv.vacuum(SMALL2)
        out = cv.beam_splitter(vac, np.pi / 4)
        np.testing.assert_allclose(out.state.matrix, vac.matrix, atol=1e-12)
        assert out.unitarity_defect < 1e-12

    def test_single_photon_balanced(self):
        rho = cv.with_vacuum_ancilla(cv.fock(1, SMALL1))
        out = cv.beam_splitter(rho, np.pi / 4).state
        assert number_mean(out, 0) == pytest.approx(0.5, abs=1e-12)
        assert number_mean(out, 1) == pytest.approx(0.5, abs=1e-12)

    def test_single_photon_exact_state(self):
        theta = 0.7
        rho = cv.with_vacuum_ancilla(cv.fock(1, SMALL1))
        out = cv.beam_splitter(rho, theta).state
        np.testing.assert_allclose(out.matrix, bs_fock1_output(theta, SMALL1.cutoff),
                                   atol=1e-12)

    def test_coherent_stays_product(self):
        alpha, theta = 0.8, np.pi / 4
        rho = cv.with_vacuum_ancilla(cv.coherent(alpha, SP1))
        out = cv.beam_splitter(rho, theta).state
        target = np.kron(coherent_vector(alpha * np.cos(theta), SP1.cutoff),
                         coherent_vector(-alpha * np.sin(theta), SP1.cutoff))
        overlap = np.real(np.vdot(target, out.matrix @ target))
        assert overlap >= 1 - 1e-8

    def test_needs_two_modes(self):
        with pytest.raises(ParameterOutOfRange):
            cv.beam_splitter(cv.fock(1, SMALL1), np.pi / 4)


class TestIneq10:
    def test_vacuum_components(self):
        rep = cv.ineq10(cv.vacuum(SMALL2), 1, 1)
        assert rep.lhs == pytest.approx(4.0, abs=1e-12)   # 2 * 2
        assert rep.rhs == pytest.approx(4.0, abs=1e-12)
        assert rep.margin == pytest.approx(0.0, abs=1e-12)
        assert not rep.violated

    def test_two_mode_squeezed_violates(self):
        rep = cv.ineq10(cv.two_mode_squeezed(0.5, SP2), 1, 1)
        assert rep.violated
        assert rep.margin == pytest.approx(4 * np.exp(-2.0) - 4, abs=1e-9)

    def test_thermal_product_satisfied(self):
        th = cv.thermal(1.0, SP1)
        rep = cv.ineq10(kron_state(th, th), 1, 1)
        assert not rep.violated
        assert rep.margin == pytest.approx(32.0, rel=1e-5)

    def test_separable_margins_nonnegative(self):
        candidates = [
            kron_state(cv.coherent(0.9, MID1), cv.coherent(-0.4 + 0.2j, MID1)),
            kron_state(cv.thermal(0.3, MID1), cv.fock(1, MID1)),
            kron_state(cv.fock(2, MID1), cv.thermal(0.2, MID1)),
        ]
        mixtures = validate_hermitian(
            0.5 * candidates[0].matrix + 0.5 * candidates[1].matrix,
            candidates[0].dims, tol=1e-12)
        for rho in candidates + [mixtures]:
            for m, n in [(1, 1), (1, 2), (2, 1), (2, 2)]:
                rep = cv.ineq10(rho, m, n)
                assert rep.margin >= -1e-8, (m, n)

    def test_sum_form_weaker_than_product(self):
        states = [
            cv.two_mode_squeezed(0.3, SP2),
            kron_state(cv.coherent(0.5, MID1), cv.thermal(0.2, MID1)),
            cv.beam_splitter(cv.with_vacuum_ancilla(cv.squeezed_vacuum(0.4, 0.0, SP1)),
                             np.pi / 4).state,
        ]
        for rho in states:
            for m, n in [(1, 1), (2, 2)]:
                rep10 = cv.ineq10(rho, m, n)
                rep11 = cv.ineq11(rho, m, n)
                if rep10.hur_variant_margin >= 0:
                    assert rep10.sum_hur_margin >= -1e-10
                if rep11.hur_variant_margin >= 0:
                    assert rep11.sum_hur_margin >= -1e-10


class TestIneq11:
    def test_product_coherent_margin_zero(self):
        rho = kron_state(cv.coherent(0.7, SP1), cv.coherent(0.3 - 0.5j, SP1))
        rep = cv.ineq11(rho, 1, 1)
        assert rep.margin == pytest.approx(0.0, abs=1e-9)
        assert not rep.violated

    def test_single_photon_bs_output_violates(self):
        out = cv.beam_splitter(cv.with_vacuum_ancilla(cv.fock(1, SP1)), np.pi / 4).state
        rep = cv.ineq11(out, 1, 1)
        assert rep.violated
        assert rep.margin == pytest.approx(-2.0, abs=1e-10)

    def test_embedded_single_photon_entangled_violates(self):
        rep = cv.ineq11(cv.single_photon_entangled(SMALL2), 1, 1)
        assert rep.violated
        assert rep.margin == pytest.approx(-2.0, abs=1e-12)


class TestPtMomentRelation:
    def test_diagonal_state_exact(self):
        th = cv.thermal(0.3, MID1)
        rho = kron_state(th, cv.thermal(0.15, MID1))
        for m, p in [(1, 1), (2, 1), (1, 2)]:
            res = cv.pt_moment_relation_check(rho, m, m, p, p)
            assert res.defect == pytest.approx(0.0, abs=1e-14)

    def test_two_mode_squeezed(self):
        res = cv.pt_moment_relation_check(cv.two_mode_squeezed(0.3, SP2), 1, 1, 1, 1)
        assert res.defect < 1e-8

    def test_asymmetric_orders_random_state(self):
        rng = np.random.default_rng(77)
        d = SMALL2.dim_per_mode
        keep = 6  # support well below the cutoff keeps the check reliable
        g = rng.standard_normal((keep * keep, keep * keep)) \
            + 1j * rng.standard_normal((keep * keep, keep * keep))
        block = g @ g.conj().T
        block /= np.trace(block).real
        full = np.zeros((d * d, d * d), dtype=complex)
        idx = (np.arange(keep)[:, None] * d + np.arange(keep)[None, :]).reshape(-1)
        full[np.ix_(idx, idx)] = block
        rho = validate_hermitian(full, SMALL2.dims, tol=1e-12)
        res = cv.pt_moment_relation_check(rho, 0, 0, 1, 0)
        assert res.defect < 1e-8
        res2 = cv.pt_moment_relation_check(rho, 2, 1, 1, 2)
        assert res2.defect < 1e-8


class TestNonclassicality:
    def test_coherent_amplitude_flat(self):
        rho = cv.coherent(1.0, SP1)
        for m in (1, 2):
            for phi in (0.0, 0.7, np.pi / 2):
                assert abs(cv.amplitude_squeezing(rho, m, phi)) < 1e-9

    def test_squeezed_optimum(self):
        r = 0.5
        rho = cv.squeezed_vacuum(r, 0.0, SP1)
        best, phi = cv.amplitude_squeezing_scan(rho, 1)
        assert best == pytest.approx(np.exp(-2 * r) - 1, abs=1e-9)
        assert phi == pytest.approx(np.pi / 2, abs=0.1)

    def test_fock_not_quadrature_squeezed(self):
        rho = cv.fock(1, SP1)
        best, _ = cv.amplitude_squeezing_scan(rho, 1)
        assert best >= 0.0

    def test_photon_stats(self):
        assert cv.photon_stat_nonclassicality(cv.coherent(1.0, SP1), 1) == pytest.approx(
            0.0, abs=1e-9)
        assert cv.photon_stat_nonclassicality(cv.fock(2, SP1), 1) == pytest.approx(
            -2.0, abs=1e-12)
        assert cv.photon_stat_nonclassicality(cv.thermal(1.0, SP1), 1) == pytest.approx(
            1.0, rel=1e-5)

    def test_reliability_guard(self):
        hot = cv.thermal(5.0, cv.FockSpace(1, 10), allow_unreliable=True)
        with pytest.raises(TruncationUnreliable):
            cv.photon_stat_nonclassicality(hot, 2)


class TestCrosscheck:
    def test_vacuum_tight(self):
        res = cv.cv_pipeline_crosscheck(cv.vacuum(SMALL2), 1, 1, 10)
        assert res.defect < 1e-12

    def test_two_mode_squeezed_both(self):
        rho = cv.two_mode_squeezed(0.5, SP2)
        for which in (10, 11):
            res = cv.cv_pipeline_crosscheck(rho, 1, 1, which)
            assert res.defect < 1e-8

    def test_bs_output_higher_orders(self):
        out = cv.beam_splitter(cv.with_vacuum_ancilla(cv.squeezed_vacuum(0.4, 0.0, SP1)),
                               np.pi / 4).state
        for which in (10, 11):
            res = cv.cv_pipeline_crosscheck(out, 2, 2, which)
            assert res.defect < 1e-7

    def test_observable_set_hermitian(self):
        obs = cv.observable_set(SMALL2, 2, 1)
        for member in (obs.x1, obs.y1, obs.x2, obs.y2, obs.h1, obs.h2_sum,
                       obs.h2_tilde, obs.c1, obs.c2, obs.x_mn, obs.y_mn,
                       obs.pair_h1, obs.pair_h2, obs.comm_pair):
            np.testing.assert_array_equal(member.matrix, member.matrix.conj().T)

    def test_mancini_oracle_reduction(self):
        # HUR variant of the quadrature inequality = 4 x the standard-units
        # product-form criterion, coded independently
        states = [
            cv.two_mode_squeezed(0.4, SP2),
            kron_state(cv.coherent(0.6, SP1), cv.thermal(0.3, SP1)),
            cv.beam_splitter(cv.with_vacuum_ancilla(cv.squeezed_vacuum(0.5, 0.0, SP1)),
                             np.pi / 4).state,
        ]
        for rho in states:
            rep = cv.ineq10(rho, 1, 1)
            oracle = mancini_margin(rho.matrix, SP2.cutoff)
            assert rep.hur_variant_margin == pytest.approx(4 * oracle, abs=1e-10)
