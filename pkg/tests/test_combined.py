import numpy as np
import pytest

from resorbit.combined_analysis import (
    analyze_combined,
    cone_family,
    rs_branches,
    s_symmetric_orbits,
    torus_fixsets,
)
from resorbit.invariants import SymmetryKind
from resorbit.normalform import realize_combined, reduce_hamiltonian, reduced_from_coefficients
from resorbit.sr_analysis import AllLeadingZero, Geometry, classify_period_geometry


def rh_combined(n, c):
    return reduced_from_coefficients(SymmetryKind.COMBINED, n=n, c=c)


class TestConeFamily:
    def test_linear_closed_form(self):
        rh = rh_combined(1.0, 0.4)
        samples = cone_family(rh, [1e-2], n_angles=8)
        for a in samples:
            s = a.sample
            assert s.tau == pytest.approx(-2.0 * (1.0 * s.N + 0.4 * s.C), abs=1e-12)

    def test_tau_to_zero_at_origin(self):
        rh = rh_combined(1.0, 0.0)
        taus = [a.sample.tau for a in cone_family(rh, [1e-2, 1e-3], n_angles=4)]
        assert abs(taus[-1]) < abs(taus[0])

    def test_s_annotations(self):
        rh = rh_combined(1.0, 0.2)
        samples = cone_family(rh, [1e-2], n_angles=8)
        tags = {round(a.phi, 6): a.s_tag for a in samples}
        assert tags[0.0] == "S"
        assert tags[round(np.pi / 2, 6)] == "S_pi"
        assert tags[round(np.pi, 6)] == "S"
        assert tags[round(3 * np.pi / 2, 6)] == "S_pi"
        assert tags[round(np.pi / 4, 6)] is None

    def test_distinguished_orbits(self):
        rh = rh_combined(1.0, 0.25)
        orbits = s_symmetric_orbits(rh, [1e-2])
        byw = {o.which: o for o in orbits}
        # through Fix S: C = N; through Fix(S, pi): C = -N
        assert byw["S"].C == pytest.approx(byw["S"].N)
        assert byw["S_pi"].C == pytest.approx(-byw["S_pi"].N)
        assert byw["S"].tau == pytest.approx(-2.0 * (1.0 + 0.25) * byw["S"].N, abs=1e-12)
        assert byw["S_pi"].tau == pytest.approx(-2.0 * (1.0 - 0.25) * byw["S_pi"].N, abs=1e-12)


class TestRsBranches:
    def test_axis_case(self):
        branches = rs_branches(rh_combined(1.0, 0.0))
        assert len(branches) == 2
        for br in branches:
            for p in br.points:
                assert p.C == pytest.approx(0.0, abs=1e-12)
                assert p.delta == pytest.approx(br.sign_delta * p.N, abs=1e-10)

    def test_no_branches_when_c_dominates(self):
        assert rs_branches(rh_combined(0.0, 1.0)) == []

    def test_degenerate_boundary(self):
        assert rs_branches(rh_combined(1.0, 1.0)) == []

    def test_all_zero_raises(self):
        with pytest.raises(AllLeadingZero):
            rs_branches(rh_combined(0.0, 0.0))

    def test_existence_matches_sr_special_case(self):
        # feeding the D-even g through the shared machinery with d = 0 must
        # agree with the combined verdict
        for n, c in [(1.0, 0.0), (0.0, 1.0), (2.0, 1.0), (1.0, 2.0), (-1.2, 0.5)]:
            combined = rs_branches(rh_combined(n, c))
            geometry = classify_period_geometry(n, c, 0.0)
            assert (len(combined) == 2) == (geometry is Geometry.ELLIPTIC)

    def test_branch_pair_mirrors(self):
        up, down = rs_branches(rh_combined(2.0, 1.0))
        for a, b in zip(up.points, down.points):
            assert (a.N, a.C, a.tau) == (b.N, b.C, b.tau)
            assert a.delta == pytest.approx(-b.delta)


class TestTorus:
    def test_fixsr_two_points(self):
        loci = torus_fixsets()
        assert loci["FixSR"].shape == (2, 2)
        assert np.allclose(loci["FixSR"], [[0, 0], [np.pi, np.pi]])

    def test_line_parametrizations(self):
        loci = torus_fixsets(64)
        t1, t2 = loci["FixR"].T
        assert np.allclose(t2, t1)
        t1, t2 = loci["FixS"].T
        assert np.allclose(np.mod(t1 + t2, 2 * np.pi), 0.0)
        t1, t2 = loci["FixSpi"].T
        assert np.allclose(np.mod(t1 + t2 - np.pi, 2 * np.pi), 0.0)

    def test_r_and_s_lines_cross_at_fixsr_points(self):
        # theta = -theta mod 2pi at theta in {0, pi}
        crossings = [(0.0, 0.0), (np.pi, np.pi)]
        loci = torus_fixsets()
        for c in crossings:
            dr = np.abs(loci["FixR"] - c).sum(axis=1).min()
            ds = np.abs(loci["FixS"] - c).sum(axis=1).min()
            assert dr < 1e-12 and ds < 1e-12

    def test_half_turn_shift_invariance(self):
        # each line locus is carried to itself by (t1, t2) -> (t1+pi, t2+pi)
        loci = torus_fixsets(128)
        two_pi = 2 * np.pi
        for name in ("FixR", "FixS", "FixSpi"):
            pts = loci[name]
            shifted = np.mod(pts + np.pi, two_pi)
            for q in shifted[::8]:
                dist = np.abs(np.mod(pts - q + np.pi, two_pi) - np.pi).max(axis=1).min()
                assert dist < 1e-9


class TestReport:
    def test_elliptic_report(self):
        rh = reduce_hamiltonian(realize_combined(1.0, 0.0))
        rep = analyze_combined(rh)
        assert rep.geometry is Geometry.ELLIPTIC
        assert len(rep.rs_branches) == 2
        assert len(rep.torus_fixsets["FixSR"]) == 2
        assert any(o.which == "S" for o in rep.s_orbits)
        assert any(o.which == "S_pi" for o in rep.s_orbits)

    def test_hyperbolic_report(self):
        rh = reduce_hamiltonian(realize_combined(0.0, 1.0))
        rep = analyze_combined(rh)
        assert rep.geometry is Geometry.HYPERBOLIC
        assert rep.rs_branches == []
