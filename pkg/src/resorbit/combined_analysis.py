"""Both involutions at once: the cone family with its two distinguished
conjugate-swap-symmetric orbits, the swap*conjugate-swap branches off the
cone, and the fixed-point loci on the invariant torus.

The reduced Hamiltonian is the swap-reversing one restricted to even powers
of D, so the branch machinery is shared with the single-involution case with
d = 0; branches exist iff n^2 - c^2 > 0.  The torus is the intersection of
the cone delta = 0 with the unit sphere, parametrized by
z_j = e^{i theta_j}/sqrt(2); each circle-action orbit on it is the line
theta_1 + theta_2 = const.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from resorbit.invariants import ComplexPair, SymmetryKind, to_invariants
from resorbit.normalform import ReducedHamiltonian
from resorbit.sr_analysis import (
    AllLeadingZero,
    ConeSample,
    Geometry,
    SRBranch,
    classify_period_geometry,
    nonsymmetric_branches,
    tau_on_fix_r,
)

FIXSR_TORUS_POINTS = [(0.0, 0.0), (np.pi, np.pi)]


@dataclass
class AnnotatedConeSample:
    sample: ConeSample
    phi: float
    s_tag: str | None  # None | "S" | "S_pi"


def _s_tag_for_angle(phi: float, tol: float = 1e-9) -> str | None:
    """Which conjugate-swap element fixes the orbit through the diagonal
    point at angle phi: the orbit invariant is arg(z1 z2) = 2 phi, and the
    two distinguished orbits sit at 2 phi = 0 (C = N) and 2 phi = pi (C = -N).
    """
    two_phi = np.mod(2.0 * phi, 2.0 * np.pi)
    if min(two_phi, 2.0 * np.pi - two_phi) <= tol:
        return "S"
    if abs(two_phi - np.pi) <= tol:
        return "S_pi"
    return None


def cone_family(
    rh: ReducedHamiltonian,
    sample_radii: list[float],
    n_angles: int = 8,
) -> list[AnnotatedConeSample]:
    """tau(z) on the diagonal, annotated with the extra orbit symmetry.

    Every orbit in the cone is swap-symmetric; the ones through the
    conjugate-swap fixed sets (angles 0 and pi/2 on the diagonal) carry the
    extra symmetry and are flagged.
    """
    if rh.kind is not SymmetryKind.COMBINED:
        raise ValueError("cone_family expects COMBINED reduced data")
    out = []
    for rho in sample_radii:
        for k in range(n_angles):
            phi = 2.0 * np.pi * k / n_angles
            z = rho * complex(np.cos(phi), np.sin(phi))
            inv = to_invariants(ComplexPair(z, z))
            tau = tau_on_fix_r(rh, z)
            out.append(
                AnnotatedConeSample(
                    sample=ConeSample(
                        z=z, N=inv.N, C=inv.C, D=inv.D, tau=tau,
                        period=2.0 * np.pi / (1.0 + tau),
                    ),
                    phi=phi,
                    s_tag=_s_tag_for_angle(phi),
                )
            )
    return out


@dataclass
class DistinguishedOrbit:
    """One of the two conjugate-swap-symmetric cone orbits at a given radius."""

    which: str  # "S" (through Fix S) | "S_pi" (through Fix(S, pi))
    radius: float
    z_diagonal: complex  # crossing point on the diagonal
    N: float
    C: float
    tau: float
    period: float


def s_symmetric_orbits(rh: ReducedHamiltonian, sample_radii: list[float]) -> list[DistinguishedOrbit]:
    """The two distinguished orbits per radius: C = +N and C = -N on the cone."""
    out = []
    for rho in sample_radii:
        for which, z in (("S", complex(rho, 0.0)), ("S_pi", complex(0.0, rho))):
            inv = to_invariants(ComplexPair(z, z))
            tau = tau_on_fix_r(rh, z)
            out.append(
                DistinguishedOrbit(
                    which=which,
                    radius=rho,
                    z_diagonal=z,
                    N=inv.N,
                    C=inv.C,
                    tau=tau,
                    period=2.0 * np.pi / (1.0 + tau),
                )
            )
    return out


def rs_branches(rh: ReducedHamiltonian, t_max: float = 0.1, n_samples: int = 20) -> list[SRBranch]:
    """The 0 or 2 branch curves of doubly-symmetric orbits off the cone.

    On the real-real fixed plane D = 0, so the shared branch solver applies
    with d = g_D(0) = 0 (g is even in D); existence iff n^2 - c^2 > 0.  The
    two branches carry delta = +-sqrt(N^2 - C^2) and are exchanged by either
    involution.
    """
    if rh.kind is not SymmetryKind.COMBINED:
        raise ValueError("rs_branches expects COMBINED reduced data")
    if max(abs(rh.n), abs(rh.c)) < 1e-14:
        raise AllLeadingZero("n and c both vanish")
    branches = nonsymmetric_branches(rh, t_max=t_max, n_samples=n_samples)
    for br in branches:
        for p in br.points:
            if abs(p.D) > 1e-10:
                raise RuntimeError("combined branch left the D = 0 plane")
    return branches


def torus_fixsets(n_samples: int = 256) -> dict[str, np.ndarray]:
    """Fixed-point loci on the torus (theta1, theta2) in [0, 2*pi)^2.

    Lines for the swap (theta2 = theta1), the conjugate swap
    (theta2 = -theta1) and its half-turn composition (theta2 = pi - theta1);
    the product involution meets the torus in the two points (0, 0) and
    (pi, pi).
    """
    theta = np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False)
    two_pi = 2.0 * np.pi
    return {
        "FixR": np.column_stack([theta, theta]),
        "FixS": np.column_stack([theta, np.mod(-theta, two_pi)]),
        "FixSpi": np.column_stack([theta, np.mod(np.pi - theta, two_pi)]),
        "FixSR": np.array(FIXSR_TORUS_POINTS),
    }


@dataclass
class CombinedReport:
    n: float
    c: float
    geometry: Geometry
    cone_family: list[AnnotatedConeSample]
    s_orbits: list[DistinguishedOrbit]
    rs_branches: list[SRBranch]
    torus_fixsets: dict[str, np.ndarray] = field(default_factory=dict)


def analyze_combined(
    rh: ReducedHamiltonian,
    sample_radii: list[float] | None = None,
    n_angles: int = 8,
    t_max: float = 0.1,
    torus_samples: int = 256,
) -> CombinedReport:
    radii = sample_radii if sample_radii is not None else [1e-2, 5e-3, 2.5e-3]
    n, c = rh.n, rh.c
    geometry = classify_period_geometry(n, c, 0.0)
    branches = rs_branches(rh, t_max=t_max) if geometry is Geometry.ELLIPTIC else []
    return CombinedReport(
        n=n,
        c=c,
        geometry=geometry,
        cone_family=cone_family(rh, radii, n_angles=n_angles),
        s_orbits=s_symmetric_orbits(rh, radii),
        rs_branches=branches,
        torus_fixsets=torus_fixsets(torus_samples),
    )
