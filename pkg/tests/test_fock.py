import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlcharge import fock
from nlcharge.fock import FockVector
from nlcharge.nonlinearity import catalog, model_hydrogen, model_poschl_teller, model_q_deformed, model_unit

PT = model_poschl_teller(3)
H = model_hydrogen()


def diag_value(op, n1, n2, cutoff=8):
    v = fock.apply(op, FockVector.basis(n1, n2, cutoff))
    return v.amplitudes[n1, n2]


class TestFockVector:
    def test_dict_round_trip(self):
        v = FockVector.from_dict({(1, 2): 0.6, (0, 0): 0.8j}, 3)
        assert v.to_dict() == {(0, 0): 0.8j, (1, 2): 0.6}
        assert v.norm() == pytest.approx(1.0, abs=1e-12)

    def test_outside_box(self):
        with pytest.raises(ValueError):
            FockVector.from_dict({(4, 0): 1.0}, 3)
        with pytest.raises(ValueError):
            FockVector(3, np.zeros((3, 3)))

    def test_immutable(self):
        v = FockVector.basis(0, 0, 2)
        with pytest.raises(ValueError):
            v.amplitudes[0, 0] = 2

    def test_linear_ops(self):
        u, w = FockVector.basis(0, 1, 2), FockVector.basis(1, 0, 2)
        s = 2 * u - w
        assert s.to_dict() == {(0, 1): 2.0, (1, 0): -1.0}
        assert u.vdot(w) == 0


class TestApply:
    def test_lowering(self):
        v = fock.apply(fock.a(1), FockVector.basis(1, 0, 4))
        assert v.to_dict() == {(0, 0): pytest.approx(1.0)}

    def test_deformed_lowering(self):
        v = fock.apply(fock.A(1, PT), FockVector.basis(1, 0, 4))
        assert v.to_dict() == {(0, 0): pytest.approx(2.0)}

    def test_charge_eigenvalue(self):
        v = fock.apply(fock.charge(), FockVector.basis(5, 3, 6))
        assert v.to_dict() == {(5, 3): pytest.approx(2.0)}

    def test_raising_and_truncation_loss(self):
        v = fock.apply(fock.adag(2), FockVector.basis(0, 3, 3))
        assert v.norm() == 0.0
        assert v.truncation_loss == pytest.approx(4.0)
        v = fock.apply(fock.adag(2), FockVector.basis(0, 2, 3))
        assert v.to_dict() == {(0, 3): pytest.approx(np.sqrt(3))}
        assert v.truncation_loss == 0.0

    def test_products_apply_right_to_left(self):
        v = FockVector.basis(2, 0, 4)
        ad_a = fock.apply(fock.adag(1) * fock.a(1), v)
        a_ad = fock.apply(fock.a(1) * fock.adag(1), v)
        assert ad_a.amplitudes[2, 0] == pytest.approx(2.0)
        assert a_ad.amplitudes[2, 0] == pytest.approx(3.0)

    @settings(max_examples=25)
    @given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False), min_size=16, max_size=16),
           st.complex_numbers(max_magnitude=5, allow_nan=False))
    def test_linearity(self, amps, c):
        v = FockVector(3, np.array(amps).reshape(4, 4))
        w = FockVector.basis(1, 2, 3)
        op = fock.K_minus(PT) + 0.5 * fock.adag(1) * fock.a(2)
        lhs = fock.apply(op, v * c + w).amplitudes
        rhs = (fock.apply(op, v) * c + fock.apply(op, w)).amplitudes
        np.testing.assert_allclose(lhs, rhs, atol=1e-9)

    def test_matrix_agrees_with_apply(self):
        rng = np.random.default_rng(1)
        amps = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        v = FockVector(5, amps)
        for op in fock.quadratures(H).values():
            direct = fock.apply(op, v).amplitudes.ravel()
            via_matrix = fock.to_matrix(op, 5) @ amps.ravel()
            np.testing.assert_allclose(direct, via_matrix, atol=1e-12)

    def test_dense_cap(self):
        with pytest.raises(ValueError):
            fock.to_dense(fock.a(1), fock.MAX_DENSE_CUTOFF + 1)


class TestDiagonals:
    def test_k0_undeformed_limit(self):
        K0 = fock.build_K0(model_unit())
        for n1, n2 in [(0, 0), (3, 1), (2, 5)]:
            assert diag_value(K0, n1, n2) == pytest.approx(0.5 * (n1 + n2 + 1))

    def test_k0_pt_vacuum(self):
        assert diag_value(fock.build_K0(PT), 0, 0) == pytest.approx(8.0)

    def test_k0_hydrogen(self):
        e1, e2 = 3 / 4, 8 / 9
        assert diag_value(fock.build_K0(H), 1, 1) == pytest.approx(0.5 * (e2 * e2 - e1 * e1))

    def test_g_undeformed(self):
        g = fock.build_g(model_unit())
        for n1, n2 in [(1, 1), (2, 3), (4, 2)]:
            want = 0.5 * ((n1 + 1) * (n2 + 1) - 2 * n1 * n2 + (n1 - 1) * (n2 - 1))
            assert diag_value(g, n1, n2) == pytest.approx(want)
        assert diag_value(g, 2, 2) == pytest.approx(1.0)

    def test_g_pt_substitution(self):
        e = PT.energy
        want = 0.5 * (e(2) * e(2) - 2 * e(1) * e(1) + 0.0)
        assert diag_value(fock.build_g(PT), 1, 1) == pytest.approx(want)

    def test_g_vacuum_boundary(self):
        e = PT.energy
        assert diag_value(fock.build_g(PT), 0, 3) == pytest.approx(0.5 * e(1) * e(4))

    def test_single_middle_weight_breaks_identity(self):
        # the variant 1/2[E E - E E + E E] fails [K0, K-] = -K- g already at f = 1
        m = model_unit()
        bad = fock.diagonal(lambda n1, n2: 0.5 * ((n1 + 1) * (n2 + 1) - n1 * n2 + (n1 - 1) * (n2 - 1)))
        k0, km = fock.build_K0(m), fock.K_minus(m)
        assert fock.commutator_residual(k0, km, -1 * (km * bad), 10) > 0.1
        assert fock.commutator_residual(k0, km, -1 * (km * fock.build_g(m)), 10) < 1e-12


class TestCommutators:
    def test_undeformed_su11(self):
        r = fock.commutator_residual(fock.k_minus(), fock.k_plus(), 2 * fock.k0(), 20, margin=2)
        assert r < 1e-12

    def test_margin_validation(self):
        with pytest.raises(ValueError):
            fock.commutator_residual(fock.a(1), fock.adag(1), fock.identity(), 5, margin=1)

    def test_truncation_visible_without_margin_effect(self):
        # the identity [a, a^dag] = 1 fails on the last row of the box
        m = fock.to_dense(fock.commutator(fock.a(1), fock.adag(1)), 4)
        assert m[-1, -1] != pytest.approx(1.0)

    def test_pt_su11(self):
        r = fock.commutator_residual(fock.K_minus(PT), fock.K_plus(PT), 2 * fock.build_K0(PT), 20)
        assert r < 1e-9

    def test_hydrogen_g_identity(self):
        km = fock.K_minus(H)
        r = fock.commutator_residual(fock.build_K0(H), km, -1 * (km * fock.build_g(H)), 20)
        assert r < 1e-9

    @pytest.mark.parametrize("model", catalog(), ids=lambda m: m.describe())
    def test_algebra_on_catalog(self, model):
        km, kp, k0, g = fock.K_minus(model), fock.K_plus(model), fock.build_K0(model), fock.build_g(model)
        assert fock.commutator_residual(km, kp, 2 * k0, 24, 3) < 1e-9
        assert fock.commutator_residual(k0, km, -1 * (km * g), 24, 3) < 1e-9
        assert fock.commutator_residual(k0, kp, g * kp, 24, 3) < 1e-9

    def test_q_deformed_relative(self):
        # e_n grows like qbar^-n, so the residual is judged against the entry scale
        m = model_q_deformed(0.5)
        cutoff = 14
        k0 = fock.build_K0(m)
        scale = np.max(np.abs(fock.to_dense(k0, cutoff)))
        r = fock.commutator_residual(fock.K_minus(m), fock.K_plus(m), 2 * k0, cutoff, 3)
        assert r / scale < 1e-12

    @pytest.mark.parametrize("model", catalog(), ids=lambda m: m.describe())
    def test_charge_commutes_with_pair(self, model):
        assert fock.commutator_residual(fock.charge(), fock.K_minus(model), 0 * fock.identity(), 16) == 0.0

    def test_canonical_quadratures(self):
        ops = fock.quadratures()
        half_i = 0.5j * fock.identity()
        assert fock.commutator_residual(ops["y1"], ops["y2"], half_i, 12) < 1e-14
        assert fock.commutator_residual(ops["z1"], ops["z2"], half_i, 12) < 1e-14

    @pytest.mark.parametrize("model", [PT, H], ids=["pt", "h"])
    def test_noncanonical_quadratures(self, model):
        ops = fock.quadratures(model)
        e = model.energy
        c1 = fock.diagonal(lambda n1, n2: 0.5j * (e(n1 + 1) - e(n1)))
        assert fock.commutator_residual(ops["Y1"], ops["Y2"], c1, 16) < 1e-12

    @pytest.mark.parametrize("model", catalog(), ids=lambda m: m.describe())
    def test_hermiticity(self, model):
        cutoff = 10
        k0 = fock.to_dense(fock.build_K0(model), cutoff)
        km = fock.to_dense(fock.K_minus(model), cutoff)
        kp = fock.to_dense(fock.K_plus(model), cutoff)
        np.testing.assert_allclose(k0, k0.conj().T)
        np.testing.assert_allclose(kp, km.conj().T, atol=1e-12)
        np.testing.assert_allclose(fock.to_dense(fock.K_minus(model).dag(), cutoff), kp, atol=1e-12)
