import numpy as np
import pytest

from resorbit.invariants import ComplexPair, L_MAT, R_MAT, S_MAT, SymmetryKind, pair_to_real
from resorbit.normalform import realize_ae, realize_combined, realize_sr, reduce_hamiltonian
from resorbit.orbitverify import (
    NoConvergence,
    classify_orbit_symmetry,
    fix_s_radial_rate,
    fix_s_seeds,
    flow_map,
    integrate,
    seed_from_invariants,
    shoot_R_symmetric,
    shoot_generic,
    vector_field,
)
from resorbit.sr_analysis import nonsymmetric_branches


@pytest.fixture(scope="module")
def vf_sr_axis():
    return vector_field(realize_sr(1.0, 0.0, 0.0))


@pytest.fixture(scope="module")
def vf_sr_generic():
    return vector_field(realize_sr(2.0, 1.0, 1.0))


@pytest.fixture(scope="module")
def vf_ae62():
    return vector_field(realize_ae(1.0, 2.0, 5.0, 2.0))


class TestVectorField:
    def test_linearization_is_L(self, vf_sr_axis):
        h = 1e-7
        jac = np.zeros((4, 4))
        for j in range(4):
            e = np.zeros(4)
            e[j] = h
            jac[:, j] = (vf_sr_axis.f(e) - vf_sr_axis.f(-e)) / (2 * h)
        assert np.allclose(jac, L_MAT, atol=1e-7)

    def test_equilibrium(self, vf_sr_axis):
        assert np.allclose(vf_sr_axis.f(np.zeros(4)), 0.0)

    def test_sr_reversing_identity(self, vf_sr_generic):
        rng = np.random.default_rng(0)
        for _ in range(10):
            x = 0.3 * rng.standard_normal(4)
            assert np.allclose(
                vf_sr_generic.f(R_MAT @ x), -R_MAT @ vf_sr_generic.f(x), atol=1e-12
            )

    def test_ae_equivariance_identity(self, vf_ae62):
        rng = np.random.default_rng(1)
        for _ in range(10):
            x = 0.3 * rng.standard_normal(4)
            assert np.allclose(vf_ae62.f(S_MAT @ x), S_MAT @ vf_ae62.f(x), atol=1e-12)


class TestIntegrate:
    def test_linear_circle(self):
        # pure quadratic part: the orbit through (1, 0, 0, 0) is the unit
        # circle of period 2*pi in the (x1, y1) plane
        spec = realize_sr(0.0, 0.0, 0.0)
        vf = vector_field(spec)
        x0 = np.array([1.0, 0.0, 0.0, 0.0])
        end = flow_map(vf, x0, 2.0 * np.pi)
        assert np.abs(end - x0).max() <= 1e-10

    def test_energy_drift_long_run(self, vf_sr_generic):
        x0 = np.array([0.05, 0.02, -0.03, 0.04])
        traj = integrate(vf_sr_generic, x0, 100 * 2 * np.pi, n_samples=32, energy_tol=1e-10)
        assert traj.energy_drift <= 1e-10

    def test_reversibility_of_flow(self, vf_sr_generic):
        rng = np.random.default_rng(2)
        for _ in range(3):
            x = 0.05 * rng.standard_normal(4)
            t = 0.8
            lhs = flow_map(vf_sr_generic, R_MAT @ x, t)
            rhs = R_MAT @ flow_map(vf_sr_generic, x, -t)
            assert np.abs(lhs - rhs).max() <= 1e-10

    def test_equivariance_of_flow(self, vf_ae62):
        rng = np.random.default_rng(3)
        for _ in range(3):
            x = 0.05 * rng.standard_normal(4)
            t = 1.3
            lhs = flow_map(vf_ae62, S_MAT @ x, t)
            rhs = S_MAT @ flow_map(vf_ae62, x, t)
            assert np.abs(lhs - rhs).max() <= 1e-10


class TestShootRSymmetric:
    def test_linear_flow_period_2pi(self):
        vf = vector_field(realize_sr(0.0, 0.0, 0.0))
        res = shoot_R_symmetric(vf, 0.05 + 0.02j, 0.0, classify=False)
        assert res.period == pytest.approx(2 * np.pi, abs=1e-9)
        assert res.residual <= 1e-9

    def test_period_matches_prediction(self, vf_sr_generic):
        from resorbit.sr_analysis import tau_on_fix_r
        from resorbit.normalform import reduced_from_coefficients

        rh = reduced_from_coefficients(SymmetryKind.SR, n=2.0, c=1.0, d=1.0)
        for phi in (0.3, 1.7):
            z = 0.01 * np.exp(1j * phi)
            tau = tau_on_fix_r(rh, complex(z))
            res = shoot_R_symmetric(vf_sr_generic, complex(z), tau, classify=False)
            assert res.period == pytest.approx(2 * np.pi / (1 + tau), abs=1e-6)
            assert abs(res.energy) <= 1e-9

    def test_classifies_r_symmetric(self, vf_sr_generic):
        res = shoot_R_symmetric(vf_sr_generic, 0.01 + 0.0j, -0.0012)
        assert res.symmetry == "R_symmetric"

    def test_period_tends_to_2pi(self, vf_sr_axis):
        periods = []
        for rho in (1e-2, 5e-3, 2.5e-3):
            res = shoot_R_symmetric(vf_sr_axis, complex(rho), -4 * 2 * rho**2, classify=False)
            periods.append(res.period)
        gaps = np.abs(np.array(periods) - 2 * np.pi)
        assert gaps[2] < gaps[1] < gaps[0]

    def test_period_fit_over_four_point_sweep(self, vf_sr_generic):
        # (period - 2*pi) is linear in amplitude^2 at leading order
        from resorbit.normalform import reduced_from_coefficients
        from resorbit.sr_analysis import tau_on_fix_r

        rh = reduced_from_coefficients(SymmetryKind.SR, n=2.0, c=1.0, d=1.0)
        radii = np.array([1e-2, 5e-3, 2.5e-3, 1.25e-3])
        gaps = []
        for rho in radii:
            z = rho * np.exp(0.9j)
            tau = tau_on_fix_r(rh, complex(z))
            res = shoot_R_symmetric(vf_sr_generic, complex(z), tau, classify=False)
            gaps.append(res.period - 2 * np.pi)
        amp2 = radii**2
        coef = np.polyfit(amp2, gaps, 1)
        resid = gaps - np.polyval(coef, amp2)
        r2 = 1.0 - float(np.sum(resid**2) / np.sum((gaps - np.mean(gaps)) ** 2))
        assert r2 >= 0.999


class TestShootGeneric:
    def test_sr_axis_branch_orbits(self, vf_sr_axis):
        # branch data for (n, c, d) = (1, 0, 0): delta = +-N normal modes
        from resorbit.normalform import reduced_from_coefficients

        rh = reduced_from_coefficients(SymmetryKind.SR, n=1.0, c=0.0, d=0.0)
        branches = nonsymmetric_branches(rh, t_max=1e-3, n_samples=3)
        results = []
        for br in branches:
            p = br.points[0]
            x0, T = seed_from_invariants(p.N, p.C, p.D, p.delta, p.tau)
            res = shoot_generic(vf_sr_axis, x0, T)
            assert res.residual <= 1e-9
            results.append(res)
        assert all(r.symmetry == "NonSymmetric_paired" for r in results)
        e = sorted(r.energy for r in results)
        assert e[0] == pytest.approx(-e[1], abs=1e-9)
        assert e[1] > 0

    def test_partner_is_involution_image(self, vf_sr_axis):
        x0, T = seed_from_invariants(1e-4, 0.0, 0.0, 1e-4, -4e-4)
        res = shoot_generic(vf_sr_axis, x0, T)
        assert res.partner is not None
        assert res.partner.energy == pytest.approx(-res.energy, abs=1e-12)
        assert np.allclose(res.partner.x0, R_MAT @ res.x0)

    def test_no_orbit_raises(self, vf_ae62):
        # the conjugate-swap plane spirals for these coefficients: no orbit
        x0 = pair_to_real(ComplexPair(0.01 + 0.005j, 0.01 - 0.005j))
        with pytest.raises(NoConvergence):
            shoot_generic(vf_ae62, x0, 2 * np.pi, max_iter=8)


class TestClassification:
    def test_cone_orbit_through_fix_s_is_rs_symmetric(self):
        vf = vector_field(realize_combined(1.0, 0.25))
        rho = 0.01
        tau = -2 * (1.0 + 0.25) * 2 * rho**2
        res = shoot_R_symmetric(vf, complex(rho), tau)
        assert res.symmetry == "RS_symmetric"
        assert res.symmetry_flags["R"] and res.symmetry_flags["S"]

    def test_generic_cone_orbit_is_r_only(self):
        vf = vector_field(realize_combined(1.0, 0.25))
        z = 0.01 * np.exp(0.4j)
        from resorbit.normalform import reduced_from_coefficients
        from resorbit.sr_analysis import tau_on_fix_r

        rh = reduced_from_coefficients(SymmetryKind.COMBINED, n=1.0, c=0.25)
        tau = tau_on_fix_r(rh, complex(z))
        res = shoot_R_symmetric(vf, complex(z), tau)
        assert res.symmetry == "R_symmetric"
        assert not res.symmetry_flags["S"]

    def test_combined_axis_mode_is_rs_only(self):
        # the normal mode on the z1 axis is invariant under the product
        # involution but under neither factor
        vf = vector_field(realize_combined(1.0, 0.0))
        x0, T = seed_from_invariants(1e-4, 0.0, 0.0, 1e-4, -4e-4)
        res = shoot_generic(vf, x0, T)
        assert res.symmetry == "RS_symmetric"
        assert res.symmetry_flags["RS"]
        assert not res.symmetry_flags["R"] and not res.symmetry_flags["S"]

    def test_symmetric_orbit_energy_zero(self, vf_sr_generic):
        res = shoot_R_symmetric(vf_sr_generic, 0.008 + 0.003j, -0.001)
        assert abs(res.energy) <= 1e-9


@pytest.fixture(scope="module")
def ae_mixed_roots_setup():
    from resorbit.ae_analysis import AECoefficients, solve_blowup
    from resorbit.polyalg import SolveOptions

    co = AECoefficients(a1=1.0, a2=-0.5, c1=-1.5, c2=-2.0)
    vf = vector_field(realize_ae(co.a1, co.c1, co.a2, co.c2))
    report = solve_blowup(co, opts=SolveOptions(seed=0), probe_v0=False)
    return co, vf, report


class TestAEOrbitVerification:
    """Which blow-up roots are genuine orbits of a realized quartic system.

    The invariant-coordinate equations were multiplied by z1, z2, so the two
    always-present axis roots solve them without being critical points unless
    c1 and a2 both vanish; only roots with w != 0 (or axis roots of systems
    with c1 = a2 = 0) correspond to actual periodic orbits.  Verified here by
    direct integration on a b2-free coefficient set that has both kinds.
    """

    def test_nonaxis_roots_give_orbits(self, ae_mixed_roots_setup):
        co, vf, report = ae_mixed_roots_setup
        nonaxis = [
            s for s in report.solutions
            if s.chart == "v1" and s.is_real and abs(s.w.real) > 1e-8
        ]
        assert len(nonaxis) == 2
        r = 0.01
        for s in nonaxis:
            x0, T = seed_from_invariants(
                r, r * s.u.real, r * s.w.real, r * s.x.real, r * s.t.real
            )
            orb = shoot_generic(vf, x0, T)
            assert orb.residual <= 1e-9
            assert orb.symmetry == "NonSymmetric_paired"
            assert orb.partner is not None
            assert orb.partner.energy == pytest.approx(-orb.energy, abs=1e-9)

    def test_axis_roots_are_not_orbits_here(self, ae_mixed_roots_setup):
        # c1 != 0 for this set, so the axis pair solves only the multiplied
        # system; the flow leaves the axis and shooting must fail
        co, vf, report = ae_mixed_roots_setup
        r = 0.01
        for sign in (1.0, -1.0):
            x0, T = seed_from_invariants(r, 0.0, 0.0, sign * r, -4.0 * co.a1 * r)
            with pytest.raises(NoConvergence):
                shoot_generic(vf, x0, T, max_iter=8)

    def test_axis_mode_exists_when_c1_a2_vanish(self):
        vf = vector_field(realize_ae(1.0, 0.0, 0.0, 0.0))
        x0, T = seed_from_invariants(1e-4, 0.0, 0.0, 1e-4, -4e-4)
        orb = shoot_generic(vf, x0, T, classify=False)
        assert orb.residual <= 1e-9


class TestFixSPlane:
    def test_radial_rate_matches_coefficients(self, vf_ae62):
        # restricted to {(z, conj z)} the radial derivative of |z|^2 is
        # 8 |z|^4 (a2 + c2) for the quartic realization
        for x in fix_s_seeds(0.05, 5, seed=4):
            v = x[0] ** 2 + x[1] ** 2
            assert fix_s_radial_rate(vf_ae62, x) == pytest.approx(8 * v * v * 7.0, rel=1e-10)

    def test_no_periodic_orbits_found_in_fix_s(self, vf_ae62):
        hits = 0
        for x0 in fix_s_seeds(0.02, 10, seed=5):
            try:
                shoot_generic(vf_ae62, x0, 2 * np.pi, max_iter=6)
                hits += 1
            except (NoConvergence, Exception):
                pass
        assert hits == 0
