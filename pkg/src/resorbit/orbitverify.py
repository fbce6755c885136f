"""Direct verification of predicted periodic orbits by numerical integration.

The flow of x' = J grad H is integrated with a high-order adaptive
Runge-Kutta scheme under per-run energy monitoring; predicted families are
located by symmetry-adapted shooting (two-point boundary problem on the
swap-diagonal for symmetric orbits, a Poincare-section Newton for generic
ones) and classified by set-invariance of the computed orbit under the
involutions in play.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from resorbit.invariants import (
    ComplexPair,
    J_MAT,
    R_MAT,
    RS_MAT,
    S_MAT,
    SymmetryKind,
    pair_from_invariants,
    pair_to_real,
)
from resorbit.normalform import HamiltonianSpec
from resorbit.polyalg import MultiPoly, PolySystem


class OrbitVerifyError(Exception):
    pass


class StepFailure(OrbitVerifyError):
    pass


class NoConvergence(OrbitVerifyError):
    pass


@dataclass
class VectorFieldSpec:
    """f = J grad H with compiled polynomial evaluation."""

    ham: HamiltonianSpec

    def __post_init__(self):
        grads = [self.ham.H.diff(j) for j in range(4)]
        f_polys = []
        for i in range(4):
            p = MultiPoly.zero(4)
            for j in range(4):
                if J_MAT[i, j] != 0.0:
                    p = p + J_MAT[i, j] * grads[j]
            f_polys.append(p)
        self._f = PolySystem(f_polys).compiled()
        self._h = PolySystem([self.ham.H]).compiled()

    @property
    def kind(self) -> SymmetryKind:
        return self.ham.kind

    def f(self, x: np.ndarray) -> np.ndarray:
        return self._f.f(x).real

    def hamiltonian(self, x: np.ndarray) -> float:
        return float(self._h.f(x)[0].real)

    def involutions(self) -> dict[str, np.ndarray]:
        """The involution matrices whose symmetry the orbit classifier tests."""
        if self.kind is SymmetryKind.SR:
            return {"R": R_MAT}
        if self.kind is SymmetryKind.AE:
            return {"S": S_MAT}
        return {"R": R_MAT, "S": S_MAT, "RS": RS_MAT}


def vector_field(spec: HamiltonianSpec) -> VectorFieldSpec:
    return VectorFieldSpec(ham=spec)


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray  # shape (4, len(t))
    energy_drift: float
    sol: object = field(repr=False, default=None)

    def end(self) -> np.ndarray:
        return self.y[:, -1].copy()


def integrate(
    vf: VectorFieldSpec,
    x0: np.ndarray,
    T: float,
    rtol: float = 1e-12,
    atol: float = 1e-14,
    energy_tol: float = 1e-9,
    n_samples: int = 0,
    dense: bool = False,
) -> Trajectory:
    """Adaptive integration over [0, T] with an energy-drift gate."""
    x0 = np.asarray(x0, dtype=float)
    t_eval = np.linspace(0.0, T, n_samples) if n_samples else None
    sol = solve_ivp(
        lambda t, y: vf.f(y),
        (0.0, T),
        x0,
        method="DOP853",
        rtol=rtol,
        atol=atol,
        t_eval=t_eval,
        dense_output=dense,
    )
    if not sol.success:
        raise StepFailure(sol.message)
    h0 = vf.hamiltonian(x0)
    drift = max(abs(vf.hamiltonian(sol.y[:, k]) - h0) for k in range(0, sol.y.shape[1], max(1, sol.y.shape[1] // 16)))
    if drift > energy_tol:
        raise StepFailure(f"energy drift {drift:.3e} exceeds {energy_tol:.1e}")
    return Trajectory(t=sol.t, y=sol.y, energy_drift=drift, sol=sol.sol if dense else None)


def flow_map(vf: VectorFieldSpec, x0: np.ndarray, T: float, rtol: float = 1e-12) -> np.ndarray:
    return integrate(vf, x0, T, rtol=rtol).end()


@dataclass
class OrbitResult:
    x0: np.ndarray
    period: float
    residual: float
    symmetry: str  # R_symmetric | S_symmetric | RS_symmetric | NonSymmetric_paired
    energy: float
    tau: float
    partner: "OrbitResult | None" = None
    symmetry_flags: dict[str, bool] = field(default_factory=dict)


def _closest_on_orbit(dense_sol, T: float, y0: np.ndarray, n_coarse: int = 512) -> float:
    """Distance from y0 to the orbit curve via its dense interpolant."""
    ts = np.linspace(0.0, T, n_coarse, endpoint=False)
    vals = dense_sol(ts)
    d2 = ((vals - y0[:, None]) ** 2).sum(axis=0)
    k = int(np.argmin(d2))
    lo = ts[k] - T / n_coarse
    hi = ts[k] + T / n_coarse
    # golden-section polish on the interpolant
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    for _ in range(60):
        fc = np.sum((dense_sol(np.array([c]))[:, 0] - y0) ** 2)
        fd = np.sum((dense_sol(np.array([d]))[:, 0] - y0) ** 2)
        if fc < fd:
            b, d = d, c
            c = b - phi * (b - a)
        else:
            a, c = c, d
            d = a + phi * (b - a)
    tm = 0.5 * (a + b)
    return float(np.linalg.norm(dense_sol(np.array([tm]))[:, 0] - y0))


def classify_orbit_symmetry(
    vf: VectorFieldSpec,
    x0: np.ndarray,
    period: float,
    tol_scale: float = 1e-6,
    n_phases: int = 8,
    with_partner: bool = True,
) -> tuple[str, dict[str, bool], "OrbitResult | None"]:
    """Set-invariance of the computed orbit under the involutions in play.

    Distances of transformed phase samples to the orbit (via the dense
    interpolant) decide each flag; a non-symmetric orbit is paired with its
    involution image, whose energy has the opposite sign.
    """
    traj = integrate(vf, x0, period, dense=True)
    scale = float(np.abs(traj.y).max())
    tol = tol_scale * max(scale, 1e-12)
    phases = np.linspace(0.0, period, n_phases, endpoint=False)
    samples = traj.sol(phases)
    flags: dict[str, bool] = {}
    for name, mat in vf.involutions().items():
        dmax = 0.0
        for k in range(n_phases):
            image = mat @ samples[:, k]
            dmax = max(dmax, _closest_on_orbit(traj.sol, period, image))
            if dmax > tol:
                break
        flags[name] = dmax <= tol

    kind = vf.kind
    if kind is SymmetryKind.SR:
        tag = "R_symmetric" if flags["R"] else "NonSymmetric_paired"
        pair_mat = R_MAT
    elif kind is SymmetryKind.AE:
        tag = "S_symmetric" if flags["S"] else "NonSymmetric_paired"
        pair_mat = S_MAT
    else:
        if flags["R"] and flags["S"]:
            tag = "RS_symmetric"
        elif flags["RS"] and not flags["R"] and not flags["S"]:
            tag = "RS_symmetric"
        elif flags["R"]:
            tag = "R_symmetric"
        elif flags["S"]:
            tag = "S_symmetric"
        else:
            tag = "NonSymmetric_paired"
        pair_mat = R_MAT

    partner = None
    if tag == "NonSymmetric_paired" and with_partner:
        y0 = pair_mat @ x0
        res = float(np.abs(flow_map(vf, y0, period) - y0).max())
        partner = OrbitResult(
            x0=y0,
            period=period,
            residual=res,
            symmetry="NonSymmetric_paired",
            energy=vf.hamiltonian(y0),
            tau=2.0 * np.pi / period - 1.0,
            partner=None,
            symmetry_flags=dict(flags),
        )
    return tag, flags, partner


def _orbit_result(vf: VectorFieldSpec, x0: np.ndarray, period: float, classify: bool = True) -> OrbitResult:
    res = float(np.abs(flow_map(vf, x0, period) - x0).max())
    if classify:
        tag, flags, partner = classify_orbit_symmetry(vf, x0, period)
    else:
        tag, flags, partner = "unclassified", {}, None
    return OrbitResult(
        x0=x0,
        period=period,
        residual=res,
        symmetry=tag,
        energy=vf.hamiltonian(x0),
        tau=2.0 * np.pi / period - 1.0,
        partner=partner,
        symmetry_flags=flags,
    )


def shoot_R_symmetric(
    vf: VectorFieldSpec,
    z_guess: complex,
    tau_guess: float,
    tol: float = 1e-9,
    max_iter: int = 12,
    classify: bool = True,
) -> OrbitResult:
    """Two-point boundary shooting on the swap diagonal.

    Start at (z, z), integrate half a period, require arrival back on the
    diagonal; unknowns are the radial position along the start ray and the
    period (a diagonal-to-diagonal half orbit closes up by reversibility).
    """
    if vf.kind is SymmetryKind.AE:
        raise ValueError("swap-symmetric shooting needs a reversing kind")
    phi0 = math.atan2(z_guess.imag, z_guess.real)
    rho0 = abs(z_guess)
    e_dir = complex(math.cos(phi0), math.sin(phi0))

    def start_point(rho):
        z = rho * e_dir
        return pair_to_real(ComplexPair(z, z))

    def off_diagonal(y):
        return np.array([y[0] - y[2], y[1] - y[3]])

    q = np.array([rho0, 2.0 * np.pi / (1.0 + tau_guess)])
    best = None
    for _ in range(max_iter):
        p = start_point(q[0])
        arrive = flow_map(vf, p, q[1] / 2.0)
        fval = off_diagonal(arrive)
        err = float(np.abs(fval).max())
        if best is None or err < best[1]:
            best = (q.copy(), err)
        if err <= 0.1 * tol * max(1.0, q[0]):
            break
        jac = np.zeros((2, 2))
        h_rho = max(1e-8 * rho0, 1e-12)
        h_T = 1e-8
        jac[:, 0] = (off_diagonal(flow_map(vf, start_point(q[0] + h_rho), q[1] / 2.0)) - fval) / h_rho
        jac[:, 1] = (off_diagonal(flow_map(vf, p, (q[1] + h_T) / 2.0)) - fval) / h_T
        # minimum-norm step: integrable special cases zero out one residual
        # component identically, leaving a one-equation system in (rho, T)
        step, *_ = np.linalg.lstsq(jac, fval, rcond=1e-12)
        if not np.all(np.isfinite(step)):
            raise NoConvergence("shooting step not finite")
        q = q - step
        if not (0.0 < q[0] < 10.0 * rho0) or not (0.1 < q[1] < 20.0):
            raise NoConvergence("shooting iterate left the trust region")
    q, err = best
    x0 = start_point(q[0])
    result = _orbit_result(vf, x0, q[1], classify=classify)
    if result.residual > tol * max(1.0, q[0]):
        raise NoConvergence(f"return residual {result.residual:.3e} above tolerance")
    return result


def _section_basis(direction: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane normal to `direction` (columns)."""
    n = direction / np.linalg.norm(direction)
    mat = np.column_stack([n, np.eye(4)])
    q, _ = np.linalg.qr(mat)
    return q[:, 1:4]


def shoot_generic(
    vf: VectorFieldSpec,
    x_guess: np.ndarray,
    T_guess: float,
    tol: float = 1e-9,
    max_iter: int = 20,
    classify: bool = True,
) -> OrbitResult:
    """Poincare-section Newton for a periodic orbit near the seed.

    The section passes through the seed normal to the flow there; unknowns
    are the in-section displacement and the return time, with Armijo-damped
    steps.  Convergence to the equilibrium or far from the seed amplitude is
    rejected.
    """
    x_guess = np.asarray(x_guess, dtype=float)
    amp = float(np.linalg.norm(x_guess))
    fdir = vf.f(x_guess)
    if np.linalg.norm(fdir) < 1e-12:
        raise NoConvergence("seed is an equilibrium")
    basis = _section_basis(fdir)

    def point(xi):
        return x_guess + basis @ xi

    def residual_vec(xi, T):
        p = point(xi)
        return flow_map(vf, p, T) - p

    q = np.zeros(4)
    q[3] = T_guess
    fval = residual_vec(q[:3], q[3])
    err = float(np.abs(fval).max())
    for _ in range(max_iter):
        if err <= 0.1 * tol * max(1.0, amp):
            break
        jac = np.zeros((4, 4))
        h = max(1e-7 * amp, 1e-11)
        for j in range(3):
            dq = np.zeros(3)
            dq[j] = h
            jac[:, j] = (residual_vec(q[:3] + dq, q[3]) - fval) / h
        hT = 1e-8 * max(T_guess, 1.0)
        jac[:, 3] = (residual_vec(q[:3], q[3] + hT) - fval) / hT
        try:
            step = np.linalg.solve(jac, fval)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence("singular monodromy system") from exc
        # Armijo backtracking on the residual norm
        alpha = 1.0
        improved = False
        for _ in range(7):
            q_try = q - alpha * np.concatenate([step[:3], [step[3]]])
            if 0.25 * T_guess < q_try[3] < 4.0 * T_guess:
                f_try = residual_vec(q_try[:3], q_try[3])
                e_try = float(np.abs(f_try).max())
                if e_try < (1.0 - 0.25 * alpha) * err:
                    q, fval, err = q_try, f_try, e_try
                    improved = True
                    break
            alpha *= 0.5
        if not improved:
            raise NoConvergence("damped Newton stalled")
        p_now = point(q[:3])
        if np.linalg.norm(p_now) < 0.2 * amp or np.linalg.norm(p_now) > 5.0 * amp:
            raise NoConvergence("iterate collapsed toward the equilibrium or escaped")
    if err > tol * max(1.0, amp):
        raise NoConvergence(f"residual {err:.3e} above tolerance after {max_iter} iterations")
    return _orbit_result(vf, point(q[:3]), q[3], classify=classify)


# -- seed construction ----------------------------------------------------------


def seed_from_invariants(N: float, C: float, D: float, delta: float, tau: float,
                         phase: float = 0.0) -> tuple[np.ndarray, float]:
    """Initial point and period guess from an invariant-space prediction."""
    pair = pair_from_invariants(N, C, D, delta, phase=phase)
    return pair_to_real(pair), 2.0 * np.pi / (1.0 + tau)


def fix_s_seeds(amplitude: float, n_seeds: int, seed: int = 0) -> list[np.ndarray]:
    """Seed points inside the conjugate-swap fixed plane {(z, conj z)}."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_seeds):
        r = amplitude * (0.5 + 0.5 * rng.random())
        phi = 2.0 * np.pi * rng.random()
        z = r * complex(math.cos(phi), math.sin(phi))
        out.append(pair_to_real(ComplexPair(z, z.conjugate())))
    return out


def off_cone_seeds(amplitude: float, n_seeds: int, seed: int = 0,
                   min_delta_ratio: float = 0.3) -> list[np.ndarray]:
    """Random seeds with |delta| bounded away from zero (off the cone)."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n_seeds:
        x = rng.standard_normal(4)
        x *= amplitude / np.linalg.norm(x)
        z1 = complex(x[0], x[1])
        z2 = complex(x[2], x[3])
        delta = abs(z1) ** 2 - abs(z2) ** 2
        if abs(delta) >= min_delta_ratio * (abs(z1) ** 2 + abs(z2) ** 2):
            out.append(x)
    return out


def fix_s_radial_rate(vf: VectorFieldSpec, x: np.ndarray) -> float:
    """d/dt of |z|^2 along the flow restricted to the conjugate-swap plane."""
    f = vf.f(x)
    z = complex(x[0], x[1])
    zdot = complex(f[0], f[1])
    return 2.0 * (zdot * z.conjugate()).real
