import numpy as np
import pytest

from resorbit.invariants import ComplexPair, SymmetryKind, apply_circle
from resorbit.normalform import (
    C_Z,
    D_Z,
    DELTA_Z,
    H2_Z,
    HamiltonianSpec,
    N_Z,
    NormalFormError,
    ResidueNonzero,
    attach_tau,
    check_symmetry,
    decompose,
    expand_reduced,
    is_real_valued,
    real_to_zrep,
    realize_ae,
    realize_combined,
    realize_sr,
    reduce_hamiltonian,
    reduced_from_coefficients,
    s1_average,
    zrep_to_real,
)
from resorbit.polyalg import MultiPoly


def zvar(i):
    return MultiPoly.variable(4, i)


def eval_zrep(p, pair):
    z1, z2 = pair
    return p.evaluate([z1, np.conj(z1), z2, np.conj(z2)])


class TestRepresentationConversion:
    def test_round_trip_real_coeffs(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            terms = {tuple(rng.integers(0, 2, 4)): float(rng.standard_normal()) for _ in range(6)}
            p = MultiPoly(4, terms)
            q = zrep_to_real(real_to_zrep(p))
            assert (q - p).chop(1e-12).is_zero()

    def test_reality_condition(self):
        p = MultiPoly(4, {(2, 0, 0, 0): 1.0, (0, 2, 0, 0): 3.0})  # x1^2 + 3 y1^2
        assert is_real_valued(real_to_zrep(p))

    def test_h2_is_half_delta(self):
        h2_real = zrep_to_real(H2_Z)
        expect = MultiPoly(
            4, {(2, 0, 0, 0): 0.5, (0, 2, 0, 0): 0.5, (0, 0, 2, 0): -0.5, (0, 0, 0, 2): -0.5}
        )
        assert (h2_real - expect).chop(1e-14).is_zero()


class TestCheckSymmetry:
    def test_h2_is_sr_admissible(self):
        spec = HamiltonianSpec(SymmetryKind.SR, zrep_to_real(H2_Z).chop(1e-15))
        assert check_symmetry(spec) == []

    def test_z1_quartic_violates(self):
        # |z1|^4 maps to |z2|^4 under the swap, not to -|z1|^4
        h = zrep_to_real(H2_Z + MultiPoly.monomial(4, (2, 2, 0, 0))).chop(1e-15)
        spec = HamiltonianSpec(SymmetryKind.SR, h)
        assert len(check_symmetry(spec)) > 0

    def test_delta_n_combined_admissible(self):
        h = zrep_to_real(H2_Z + DELTA_Z * N_Z).chop(1e-15)
        spec = HamiltonianSpec(SymmetryKind.COMBINED, h)
        assert check_symmetry(spec) == []

    def test_validate_rejects_wrong_quadratic_part(self):
        h = zrep_to_real(2.0 * H2_Z).chop(1e-15)
        with pytest.raises(NormalFormError):
            HamiltonianSpec(SymmetryKind.SR, h).validate()


class TestS1Average:
    def test_invariant_monomial_survives(self):
        p = MultiPoly.monomial(4, (1, 1, 1, 1))  # |z1|^2 |z2|^2
        assert s1_average(p) == p

    def test_charged_monomial_dies(self):
        p = MultiPoly.monomial(4, (2, 0, 0, 2))  # z1^2 z2bar^2, charge 4
        assert s1_average(p).is_zero()

    def test_z1z2_survives(self):
        p = MultiPoly.monomial(4, (1, 0, 1, 0))
        assert s1_average(p) == p

    def test_projection_idempotent(self):
        rng = np.random.default_rng(1)
        terms = {tuple(rng.integers(0, 3, 4)): complex(*rng.standard_normal(2)) for _ in range(12)}
        p = MultiPoly(4, terms)
        assert s1_average(s1_average(p)) == s1_average(p)

    def test_matches_quadrature(self):
        # trapezoid average over 256 uniform angles of p(circle(theta) z)
        rng = np.random.default_rng(2)
        terms = {tuple(rng.integers(0, 3, 4)): complex(*rng.standard_normal(2)) for _ in range(10)}
        p = MultiPoly(4, terms)
        avg = s1_average(p)
        thetas = np.arange(256) * (2 * np.pi / 256)
        for _ in range(20):
            vals = rng.standard_normal(4)
            z = ComplexPair(complex(vals[0], vals[1]), complex(vals[2], vals[3]))
            quad = np.mean([eval_zrep(p, apply_circle(th, z)) for th in thetas])
            assert eval_zrep(avg, z) == pytest.approx(quad, abs=1e-10)


class TestDecompose:
    def test_delta_n_gives_g_n(self):
        rh = decompose(DELTA_Z * N_Z, SymmetryKind.SR)
        assert rh.g == MultiPoly.monomial(4, (1, 0, 0, 0))

    def test_dn_gives_g2(self):
        rh = decompose(D_Z * N_Z, SymmetryKind.AE)
        assert rh.g1.is_zero()
        assert rh.g2 == MultiPoly.monomial(4, (1, 0, 0, 0))

    def test_mixed_ae(self):
        rh = decompose(DELTA_Z * C_Z + 3.0 * D_Z * N_Z, SymmetryKind.AE)
        assert rh.g1 == MultiPoly.monomial(4, (0, 1, 0, 0))
        assert rh.g2 == 3.0 * MultiPoly.monomial(4, (1, 0, 0, 0))

    def test_round_trip_sr(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            q = (
                float(rng.uniform(-1, 1)) * N_Z
                + float(rng.uniform(-1, 1)) * C_Z
                + float(rng.uniform(-1, 1)) * D_Z
                + float(rng.uniform(-1, 1)) * N_Z * C_Z
                + float(rng.uniform(-1, 1)) * D_Z * D_Z
            )
            p = DELTA_Z * q
            rh = decompose(p, SymmetryKind.SR)
            back = expand_reduced(rh)
            scale = p.max_coeff()
            assert (back - p).chop(1e-12 * scale).is_zero()

    def test_round_trip_ae(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            q1 = (
                float(rng.uniform(-1, 1)) * N_Z
                + float(rng.uniform(-1, 1)) * C_Z
                + float(rng.uniform(-1, 1)) * D_Z * D_Z
                + float(rng.uniform(-1, 1)) * N_Z * N_Z
            )
            q2 = (
                float(rng.uniform(-1, 1)) * N_Z
                + float(rng.uniform(-1, 1)) * C_Z
                + float(rng.uniform(-1, 1)) * N_Z * C_Z
            )
            p = DELTA_Z * q1 + D_Z * q2
            rh = decompose(p, SymmetryKind.AE)
            back = expand_reduced(rh)
            scale = p.max_coeff()
            assert (back - p).chop(1e-12 * scale).is_zero()

    def test_combined_even_in_d(self):
        p = DELTA_Z * (N_Z + 0.7 * D_Z * D_Z)
        rh = decompose(p, SymmetryKind.COMBINED)
        assert all(e[2] % 2 == 0 for e in rh.g.terms)

    def test_combined_rejects_odd_d(self):
        with pytest.raises(ResidueNonzero):
            decompose(DELTA_Z * D_Z, SymmetryKind.COMBINED)

    def test_sr_rejects_invariant_part(self):
        with pytest.raises(ResidueNonzero):
            decompose(N_Z * N_Z, SymmetryKind.SR)


class TestAttachTau:
    def test_sr_structural_term(self):
        rh = decompose(DELTA_Z * N_Z, SymmetryKind.SR)
        rh = attach_tau(rh)
        assert rh.g.coeff((0, 0, 0, 1)) == 0.5
        assert rh.n == 1.0

    def test_ae_derived_mode_has_no_b2(self):
        rh = attach_tau(decompose(D_Z * N_Z, SymmetryKind.AE))
        assert rh.b2 == 0.0

    def test_ae_direct_mode_b2(self):
        rh = attach_tau(decompose(D_Z * N_Z, SymmetryKind.AE), b2=-2.0)
        assert rh.b2 == -2.0

    def test_double_attach_rejected(self):
        rh = attach_tau(decompose(DELTA_Z * N_Z, SymmetryKind.SR))
        with pytest.raises(ValueError):
            attach_tau(rh)


class TestReducePipeline:
    def test_sr_coefficients_are_prescribed(self):
        spec = realize_sr(1.25, -0.5, 0.75)
        rh = reduce_hamiltonian(spec)
        assert (rh.n, rh.c, rh.d) == pytest.approx((1.25, -0.5, 0.75), abs=1e-12)
        assert rh.g.coeff((0, 0, 0, 1)) == pytest.approx(0.5)

    def test_ae_coefficients_are_prescribed(self):
        spec = realize_ae(1.0, 2.0, 5.0, 2.0)
        rh = reduce_hamiltonian(spec)
        assert (rh.a1, rh.c1, rh.a2, rh.c2) == pytest.approx((1.0, 2.0, 5.0, 2.0), abs=1e-12)
        assert rh.b2 == 0.0

    def test_combined_realization(self):
        rh = reduce_hamiltonian(realize_combined(1.0, 0.25))
        assert (rh.n, rh.c, rh.d) == pytest.approx((1.0, 0.25, 0.0), abs=1e-12)

    def test_nonresonant_terms_are_projected_out(self):
        # i*(z1^2 z2bar^2 - z1bar^2 z2^2) is real, swap-anti-invariant, and
        # carries circle charge 4, so averaging must discard it untouched
        anti = MultiPoly.monomial(4, (2, 0, 0, 2), 0.1j) + MultiPoly.monomial(4, (0, 2, 2, 0), -0.1j)
        anti_real = zrep_to_real(anti).chop(1e-15)
        assert not anti_real.is_zero()
        base = realize_sr(1.0, 0.0, 0.0)
        rh = reduce_hamiltonian(HamiltonianSpec(SymmetryKind.SR, base.H + anti_real))
        assert (rh.n, rh.c, rh.d) == pytest.approx((1.0, 0.0, 0.0), abs=1e-12)


class TestDirectCoefficients:
    def test_ae_names(self):
        rh = reduced_from_coefficients(
            SymmetryKind.AE, a1=1, c1=2, a2=5, c2=2, b2=1, e1=1.5, g1=-0.25
        )
        assert rh.a1 == 1 and rh.c1 == 2 and rh.a2 == 5 and rh.c2 == 2
        assert rh.b2 == 1 and rh.e1 == 1.5 and rh.g1coef == -0.25
        assert rh.g1.coeff((0, 0, 0, 1)) == pytest.approx(0.5)

    def test_sr_names(self):
        rh = reduced_from_coefficients(SymmetryKind.SR, n=2, c=1, d=1)
        assert (rh.n, rh.c, rh.d) == (2, 1, 1)

    def test_combined_rejects_odd_d_coefficient(self):
        with pytest.raises(ValueError):
            reduced_from_coefficients(SymmetryKind.COMBINED, n=1, d=0.5)
