"""Swap-reversing case: symmetric cone family, non-symmetric branch dichotomy,
and the elliptic/hyperbolic classification of the period function.

With reduced Hamiltonian h = delta*g(N, C, D, tau) and leading coefficients
n = g_N(0), c = g_C(0), d = g_D(0), the cone delta = 0 is filled by a
two-parameter family of swap-symmetric orbits with tau = tau(z) solving
g = 0 on the diagonal; two non-symmetric branches (delta > 0 and delta < 0)
exist precisely when the discriminant n^2 - c^2 - d^2 is positive, in which
case they emanate along the ray (N, C, D) ~ t*(n, -c, -d).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from resorbit.invariants import ComplexPair, SymmetryKind, to_invariants
from resorbit.normalform import ReducedHamiltonian
from resorbit.polyalg import MultiPoly


class SRAnalysisError(Exception):
    pass


class NewtonFailure(SRAnalysisError):
    pass


class AllLeadingZero(SRAnalysisError):
    """n = c = d = 0 is outside the genericity the branch analysis assumes."""


class Geometry(enum.Enum):
    ELLIPTIC = "Elliptic"
    HYPERBOLIC = "Hyperbolic"
    DEGENERATE = "Degenerate"


def classify_period_geometry(n: float, c: float, d: float, tol: float = 1e-12) -> Geometry:
    """Sign classification of n^2 - c^2 - d^2 (Degenerate within tol of zero)."""
    disc = n * n - c * c - d * d
    scale = max(n * n, c * c + d * d, 1.0)
    if abs(disc) <= tol * scale:
        return Geometry.DEGENERATE
    return Geometry.ELLIPTIC if disc > 0 else Geometry.HYPERBOLIC


@dataclass
class ConeSample:
    """One swap-symmetric orbit datum: diagonal point (z, z), solved tau, period."""

    z: complex
    N: float
    C: float
    D: float
    tau: float
    period: float


def _g_and_gtau(rh: ReducedHamiltonian):
    g = rh.g
    gt = g.diff(3)
    return g, gt


def tau_on_fix_r(rh: ReducedHamiltonian, z: complex, tol: float = 1e-13, max_iter: int = 40) -> float:
    """Solve g(N(z), C(z), D(z), tau) = 0 for tau by scalar Newton from 0.

    On the diagonal (z, z): N = 2|z|^2 and C + iD = 2 z^2.
    """
    inv = to_invariants(ComplexPair(z, z))
    g, gt = _g_and_gtau(rh)
    args = [inv.N, inv.C, inv.D, 0.0]
    tau = 0.0
    for _ in range(max_iter):
        args[3] = tau
        val = g.evaluate(args).real
        if abs(val) <= tol:
            return tau
        slope = gt.evaluate(args).real
        if abs(slope) < 1e-10:
            raise NewtonFailure("dg/dtau vanished during the scalar solve")
        tau -= val / slope
        if abs(tau) > 0.9:
            raise NewtonFailure("tau left the perturbative neighbourhood")
    raise NewtonFailure("scalar Newton did not converge")


def symmetric_family(
    rh: ReducedHamiltonian,
    sample_radii: list[float],
    n_angles: int = 8,
) -> list[ConeSample]:
    """tau(z) sampled on the diagonal at the given radii (n_angles points each)."""
    if rh.kind is SymmetryKind.AE:
        raise ValueError("symmetric cone analysis applies to the SR/COMBINED kinds")
    gt0 = rh.g.coeff((0, 0, 0, 1)).real
    if abs(gt0 - 0.5) > 1e-12:
        raise SRAnalysisError("reduced data lacks the structural tau/2 term")
    out = []
    for rho in sample_radii:
        for k in range(n_angles):
            phi = 2.0 * np.pi * k / n_angles
            z = rho * complex(np.cos(phi), np.sin(phi))
            inv = to_invariants(ComplexPair(z, z))
            tau = tau_on_fix_r(rh, z)
            out.append(
                ConeSample(z=z, N=inv.N, C=inv.C, D=inv.D, tau=tau, period=2.0 * np.pi / (1.0 + tau))
            )
    return out


def morse_determinant(rh: ReducedHamiltonian, h: float = 1e-3) -> float:
    """Finite-difference Hessian determinant of tau(x, y) on the diagonal at 0.

    Its sign matches the geometry classification (elliptic for positive).
    """
    def tau(x, y):
        return tau_on_fix_r(rh, complex(x, y))

    txx = (tau(h, 0) - 2 * tau(0, 0) + tau(-h, 0)) / h**2
    tyy = (tau(0, h) - 2 * tau(0, 0) + tau(0, -h)) / h**2
    txy = (tau(h, h) - tau(h, -h) - tau(-h, h) + tau(-h, -h)) / (4 * h**2)
    return txx * tyy - txy * txy


@dataclass
class BranchPoint:
    t: float
    N: float
    C: float
    D: float
    tau: float
    delta: float


@dataclass
class SRBranch:
    sign_delta: int
    leading_ray: tuple[float, float, float]  # (n, -c, -d) direction
    points: list[BranchPoint] = field(default_factory=list)


def _branch_equations(rh: ReducedHamiltonian) -> list[MultiPoly]:
    """The four bifurcation equations as polynomials in (N, C, D, tau)."""
    g = rh.g
    gN, gC, gD = g.diff(0), g.diff(1), g.diff(2)
    nv, cv, dv = (MultiPoly.variable(4, i) for i in range(3))
    e_sum = g + nv * gN + cv * gC + dv * gD
    e_nc = nv * gC + cv * gN
    e_dc = dv * gC - cv * gD
    e_nd = nv * gD + dv * gN
    return [e_sum, e_nc, e_dc, e_nd]


_PIVOT_EQS = {
    # pivot coefficient -> (equation indices used, parameter slot in (N,C,D))
    "n": ((0, 1, 3), 0),
    "c": ((0, 1, 2), 1),
    "d": ((0, 2, 3), 2),
}


def solution_curve(
    rh: ReducedHamiltonian,
    t_values: np.ndarray,
    tol: float = 1e-12,
) -> list[BranchPoint]:
    """The unique local solution of the four-equation system, parametrized by
    the ray parameter t (N = n t, C = -c t, D = -d t at leading order).

    The pivot (largest of |n|, |c|, |d|) selects which three equations are
    solved and which invariant coordinate serves as the continuation
    parameter; the remaining two coordinates and tau are Newton unknowns.
    """
    n, c, d = rh.n, rh.c, rh.d
    if max(abs(n), abs(c), abs(d)) < 1e-14:
        raise AllLeadingZero("all leading coefficients vanish")
    pivot = max((("n", n), ("c", c), ("d", d)), key=lambda kv: abs(kv[1]))[0]
    eq_idx, par_slot = _PIVOT_EQS[pivot]
    eqs = _branch_equations(rh)
    eqs = [eqs[i] for i in eq_idx]
    ray = np.array([n, -c, -d])
    disc = n * n - c * c - d * d

    free_slots = [s for s in range(3) if s != par_slot]
    jac_polys = [[e.diff(s) for s in free_slots + [3]] for e in eqs]

    points: list[BranchPoint] = []
    prev = None
    for t in t_values:
        target_par = ray[par_slot] * t
        ncd = ray * t
        tau = -4.0 * disc * t
        guess = np.array([ncd[free_slots[0]], ncd[free_slots[1]], tau])
        if prev is not None:
            guess = prev
        x = guess.astype(float)
        converged = False
        for _ in range(60):
            args = [0.0, 0.0, 0.0, x[2]]
            args[par_slot] = target_par
            args[free_slots[0]] = x[0]
            args[free_slots[1]] = x[1]
            vals = np.array([e.evaluate(args).real for e in eqs])
            if np.abs(vals).max() <= tol:
                converged = True
                break
            jac = np.array([[p.evaluate(args).real for p in row] for row in jac_polys])
            try:
                step = np.linalg.solve(jac, vals)
            except np.linalg.LinAlgError as exc:
                raise NewtonFailure(f"singular branch Jacobian at t={t}") from exc
            x = x - step
        if not converged:
            raise NewtonFailure(f"branch Newton stalled at t={t}")
        prev = x
        full = [0.0, 0.0, 0.0]
        full[par_slot] = target_par
        full[free_slots[0]] = x[0]
        full[free_slots[1]] = x[1]
        points.append(BranchPoint(t=float(t), N=full[0], C=full[1], D=full[2], tau=float(x[2]), delta=0.0))
    return points


def nonsymmetric_branches(
    rh: ReducedHamiltonian,
    t_max: float = 0.1,
    n_samples: int = 20,
) -> list[SRBranch]:
    """The 0 or 2 non-symmetric branch curves.

    Two branches, distinguished by the sign of delta = +-sqrt(N^2 - C^2 - D^2),
    exist iff n^2 > c^2 + d^2; on or below the boundary nothing is emitted.
    """
    n, c, d = rh.n, rh.c, rh.d
    if max(abs(n), abs(c), abs(d)) < 1e-14:
        raise AllLeadingZero("all leading coefficients vanish")
    if classify_period_geometry(n, c, d) is not Geometry.ELLIPTIC:
        return []
    # parametrize so the leading N = n*t sweeps (0, t_max]; N must stay
    # nonnegative, which fixes the sign of t relative to n
    n_targets = np.linspace(t_max / n_samples, t_max, n_samples)
    ts = n_targets / n
    points = solution_curve(rh, ts)
    branches = []
    for sign in (+1, -1):
        pts = []
        for p in points:
            d2 = p.N**2 - p.C**2 - p.D**2
            if d2 < 0 or p.N < 0:
                raise SRAnalysisError("branch left the image of the orbit map")
            pts.append(
                BranchPoint(t=p.t, N=p.N, C=p.C, D=p.D, tau=p.tau, delta=sign * float(np.sqrt(d2)))
            )
        branches.append(SRBranch(sign_delta=sign, leading_ray=(n, -c, -d), points=pts))
    return branches


@dataclass
class SRReport:
    n: float
    c: float
    d: float
    discriminant: float
    geometry: Geometry
    symmetric_family: list[ConeSample]
    nonsymmetric_branches: list[SRBranch]
    morse_det: float


def analyze_sr(
    rh: ReducedHamiltonian,
    sample_radii: list[float] | None = None,
    n_angles: int = 8,
    t_max: float = 0.1,
) -> SRReport:
    if rh.kind is SymmetryKind.AE:
        raise ValueError("analyze_sr expects SR or COMBINED reduced data")
    radii = sample_radii if sample_radii is not None else [1e-2, 5e-3, 2.5e-3]
    n, c, d = rh.n, rh.c, rh.d
    geometry = classify_period_geometry(n, c, d)
    fam = symmetric_family(rh, radii, n_angles=n_angles)
    if geometry is Geometry.ELLIPTIC:
        branches = nonsymmetric_branches(rh, t_max=t_max)
    else:
        branches = []
    return SRReport(
        n=n,
        c=c,
        d=d,
        discriminant=n * n - c * c - d * d,
        geometry=geometry,
        symmetric_family=fam,
        nonsymmetric_branches=branches,
        morse_det=morse_determinant(rh),
    )
