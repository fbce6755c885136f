"""Conjugate-swap (anti-symplectic equivariant) case.

Generic nonexistence of symmetric orbits, the homogeneous blow-up system in
(v, t, u, w, x) with its complete root classification and non-degeneracy
certification, and the implicit-function continuation of non-degenerate
blow-up roots back to finite amplitude r > 0.

Blow-up convention: (N, C, D, tau, delta) = r*(v, u, w, t, x) with the cone
identity u^2 + w^2 + x^2 = v^2; the total-degree count of the four quadrics
over projective 4-space is 16, of which the v = 0 slice always accounts for
4 (one doubled real line plus a simple complex pair), leaving 12 in the
chart v = 1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, fields

import numpy as np

from resorbit.invariants import SymmetryKind
from resorbit.normalform import ReducedHamiltonian
from resorbit.polyalg import (
    Diverged,
    MultiPoly,
    PolySystem,
    SolveOptions,
    multiplicity_probe,
    newton_refine,
    solve_all_roots,
)

BEZOUT_TOTAL = 16
V1_EXPECTED = 12
V0_EXPECTED = 4

VAR_NAMES = ["v", "t", "u", "w", "x"]


class AEAnalysisError(Exception):
    pass


class B2Zero(AEAnalysisError):
    """The v = 0 closed forms need b2 != 0."""


class SingularContinuation(AEAnalysisError):
    def __init__(self, message: str, r_reached: float):
        super().__init__(message)
        self.r_reached = r_reached


@dataclass
class AECoefficients:
    """Taylor coefficients of the reduced pair g1, g2 under their usual names.

    g1 = tau/2 + a1*N + c1*C + d1*D^2 + e1*N^2 + f1*N*C + g1*N*tau + ...
    g2 = b2*tau + a2*N + c2*C + d2*D^2 + e2*N^2 + f2*N*C + g2*N*tau + ...
    """

    a1: float = 0.0
    c1: float = 0.0
    d1: float = 0.0
    e1: float = 0.0
    f1: float = 0.0
    g1: float = 0.0
    b2: float = 0.0
    a2: float = 0.0
    c2: float = 0.0
    d2: float = 0.0
    e2: float = 0.0
    f2: float = 0.0
    g2: float = 0.0

    @classmethod
    def from_reduced(cls, rh: ReducedHamiltonian) -> "AECoefficients":
        if rh.kind is not SymmetryKind.AE:
            raise ValueError("AE coefficients come from AE reduced data")
        return cls(
            a1=rh.a1, c1=rh.c1, d1=rh.d1, e1=rh.e1, f1=rh.f1, g1=rh.g1coef,
            b2=rh.b2, a2=rh.a2, c2=rh.c2, d2=rh.d2, e2=rh.e2, f2=rh.f2, g2=rh.g2coef,
        )

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class BlowupSolution:
    """A projective root of the blow-up quadrics, with certification data."""

    v: complex
    t: complex
    u: complex
    w: complex
    x: complex
    chart: str  # v1 | v0_w1 | v0_t1
    is_real: bool
    multiplicity: int
    cert_det: complex
    nondegenerate: bool
    residual: float

    @property
    def point(self) -> np.ndarray:
        return np.array([self.v, self.t, self.u, self.w, self.x], dtype=complex)

    def tuwx(self) -> tuple[float, float, float, float]:
        return (self.t.real, self.u.real, self.w.real, self.x.real)


def build_blowup_system(co: AECoefficients) -> PolySystem:
    """The four homogeneous quadrics of the leading blow-up equations."""
    v, t, u, w, x = (MultiPoly.variable(5, i) for i in range(5))
    p1 = v * (0.5 * t + co.a1 * v + co.c1 * u) + co.a1 * x**2 + co.a2 * x * w
    p2 = x * (0.5 * t + 2 * co.a1 * v + 2 * co.c1 * u) + w * (co.b2 * t + 2 * co.a2 * v + 2 * co.c2 * u)
    p3 = co.c1 * x * w - u * (co.b2 * t + co.a2 * v + co.c2 * u) + co.c2 * w**2
    p4 = u**2 + w**2 + x**2 - v**2
    return PolySystem([p1, p2, p3, p4], VAR_NAMES)


def certification_column(point: np.ndarray, chart: str, tol: float = 1e-9) -> int:
    """Index of the Jacobian column to drop for the 4x4 certification minor.

    Chart v1 roots drop the t column when t is certified nonzero (falling
    back to the largest remaining coordinate); w-normalized v = 0 roots drop
    the w column.
    """
    if chart == "v0_w1":
        return 3
    if chart == "v0_t1":
        return 1
    if abs(point[1]) > tol:
        return 1
    mags = [abs(point[i]) for i in range(1, 5)]
    return 1 + int(np.argmax(mags))


def certification_determinant(system: PolySystem, point: np.ndarray, drop: int) -> complex:
    jac = system.jacobian_at(point)
    sub = np.delete(jac, drop, axis=1)
    return complex(np.linalg.det(sub))


def v0_pair_det_closed_form(co: AECoefficients) -> complex:
    """det of the w-dropped minor at the simple v = 0 pair, in closed form."""
    if abs(co.b2) < 1e-12:
        raise B2Zero("closed form needs b2 != 0")
    return complex(
        -2.0
        * (co.a2**2 * co.b2**2 + co.b2**2 * co.c1**2 - 2.0 * co.b2 * co.c1 * co.c2 + co.c2**2)
        / co.b2
    )


def v0_solutions(
    co: AECoefficients,
    opts: SolveOptions | None = None,
    probe: bool = True,
) -> list[BlowupSolution]:
    """The v = 0 slice: the doubled real line and the simple complex pair.

    The line {t free, u = w = x = 0} is one projective point (normalized
    t = 1) of multiplicity two (epsilon-probe certified); the pair
    t = -+2i c2/b2, u = +-i, w = 1, x = 0 is simple with the closed-form
    certification determinant.
    """
    if abs(co.b2) < 1e-12:
        raise B2Zero("v = 0 closed forms require b2 != 0")
    opts = opts or SolveOptions()
    system = build_blowup_system(co)

    line_point = np.array([0.0, 1.0, 0.0, 0.0, 0.0], dtype=complex)
    if probe:
        # the paper's normalization for the probe: chart t = 2
        mult = multiplicity_probe(system, [0.0, 0.0, 0.0, 0.0], chart={1: 2.0}, seed=opts.seed)
    else:
        mult = 2
    line = BlowupSolution(
        v=0.0, t=1.0, u=0.0, w=0.0, x=0.0,
        chart="v0_t1",
        is_real=True,
        multiplicity=mult,
        cert_det=certification_determinant(system, line_point, drop=1),
        nondegenerate=False,
        residual=system.residual(line_point),
    )

    out = [line]
    for sign in (+1.0, -1.0):
        t = -sign * 2j * co.c2 / co.b2
        u = sign * 1j
        point = np.array([0.0, t, u, 1.0, 0.0], dtype=complex)
        det = certification_determinant(system, point, drop=3)
        out.append(
            BlowupSolution(
                v=0.0, t=t, u=u, w=1.0, x=0.0,
                chart="v0_w1",
                is_real=False,
                multiplicity=1,
                cert_det=det,
                nondegenerate=bool(abs(det) > 1e-9),
                residual=system.residual(point),
            )
        )
    return out


def prop_62_points(co: AECoefficients) -> list[np.ndarray]:
    """The two guaranteed chart-v1 roots (t, u, w, x) = (-4 a1, 0, 0, +-1)."""
    return [
        np.array([-4.0 * co.a1, 0.0, 0.0, 1.0], dtype=complex),
        np.array([-4.0 * co.a1, 0.0, 0.0, -1.0], dtype=complex),
    ]


def _sigma(point4: np.ndarray) -> np.ndarray:
    """(t, u, w, x) -> (t, u, -w, -x), an exact symmetry of the blow-up system."""
    return point4 * np.array([1.0, 1.0, -1.0, -1.0])


def _complete_roots(chart_sys: PolySystem, points: list[np.ndarray], opts: SolveOptions) -> list[np.ndarray]:
    """Close the root list under conjugation and the (w, x) sign flip."""
    out = [p.copy() for p in points]

    def known(q):
        return any(np.abs(q - p).max() <= opts.cluster_radius * max(1.0, np.abs(p).max()) for p in out)

    queue = list(out)
    while queue:
        p = queue.pop()
        for cand in (np.conj(p), _sigma(p), np.conj(_sigma(p))):
            if known(cand):
                continue
            try:
                rec = newton_refine(chart_sys, cand, tol=opts.tol, max_iter=opts.max_newton)
            except Diverged:
                continue
            if np.abs(rec.point - cand).max() > 1e-6 * max(1.0, np.abs(cand).max()):
                continue
            out.append(rec.point)
            queue.append(rec.point)
    return out


@dataclass
class BezoutAccount:
    expected: int
    found_v1: int
    found_v0: int

    @property
    def total(self) -> int:
        return self.found_v1 + self.found_v0

    @property
    def complete(self) -> bool:
        return self.total == self.expected


@dataclass
class ContinuedFamily:
    """A blow-up root continued to r > 0, with the invariant-space curve."""

    start: BlowupSolution
    r: np.ndarray
    v: np.ndarray
    t: np.ndarray
    u: np.ndarray
    w: np.ndarray
    x: np.ndarray

    @property
    def N(self) -> np.ndarray:
        return self.r * self.v

    @property
    def C(self) -> np.ndarray:
        return self.r * self.u

    @property
    def D(self) -> np.ndarray:
        return self.r * self.w

    @property
    def delta(self) -> np.ndarray:
        return self.r * self.x

    @property
    def tau(self) -> np.ndarray:
        return self.r * self.t


@dataclass
class NonexistenceReport:
    liapunov_coefficient: float
    eigenvalue_real_part: float
    verdict: str  # NoSymmetricOrbits | Degenerate


def symmetric_nonexistence(co: AECoefficients, tol: float = 1e-12) -> NonexistenceReport:
    """Generic nonexistence of conjugate-swap-symmetric orbits.

    A nonzero a2 gives the restricted linearization eigenvalues a nonzero
    real part; otherwise a nonzero b2 + c2 drives the radial monotonicity
    argument.  Both zero is reported Degenerate, claiming nothing.
    """
    lc = co.b2 + co.c2
    if abs(co.a2) > tol or abs(lc) > tol:
        verdict = "NoSymmetricOrbits"
    else:
        verdict = "Degenerate"
    return NonexistenceReport(
        liapunov_coefficient=lc, eigenvalue_real_part=2.0 * co.a2, verdict=verdict
    )


@dataclass
class AEReport:
    coefficients: AECoefficients
    solutions: list[BlowupSolution]
    n_real_v1: int
    bezout_account: BezoutAccount
    orbit_families: list[ContinuedFamily]
    nonexistence: NonexistenceReport
    warnings: list[str] = field(default_factory=list)

    def real_v1_solutions(self) -> list[BlowupSolution]:
        return [s for s in self.solutions if s.chart == "v1" and s.is_real]


def solve_blowup(
    co: AECoefficients,
    opts: SolveOptions | None = None,
    continue_families: bool = False,
    r_max: float = 0.05,
    probe_v0: bool = True,
) -> AEReport:
    """Complete root classification of the blow-up system over both charts."""
    opts = opts or SolveOptions()
    system = build_blowup_system(co)
    chart_sys = system.fix_var(0, 1.0)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        records = solve_all_roots(
            system,
            chart={0: 1.0},
            opts=SolveOptions(
                tol=opts.tol,
                cluster_radius=opts.cluster_radius,
                real_tol=opts.real_tol,
                seed=opts.seed,
                method=opts.method,
                expected_total=V1_EXPECTED,
            ),
        )
    points = [r.point for r in records]
    # the two guaranteed roots are exact for every coefficient set; reinstate
    # them and close under the exact symmetries before accounting
    for cand in prop_62_points(co):
        if not any(np.abs(cand - p).max() <= 1e-6 * max(1.0, np.abs(p).max()) for p in points):
            points.append(newton_refine(chart_sys, cand, tol=opts.tol).point)
    points = _complete_roots(chart_sys, points, opts)

    mult_by_point = {}
    for rec in records:
        mult_by_point[rec.point.tobytes()] = rec.multiplicity

    report_warnings: list[str] = []
    solutions: list[BlowupSolution] = []
    for p in points:
        mult = mult_by_point.get(p.tobytes(), 1)
        is_real = bool(np.abs(p.imag).max() <= opts.real_tol)
        if is_real:
            p = np.real(p).astype(complex)
        full = np.concatenate([[1.0 + 0.0j], p])
        drop = certification_column(full, "v1")
        det = certification_determinant(system, full, drop)
        solutions.append(
            BlowupSolution(
                v=1.0, t=p[0], u=p[1], w=p[2], x=p[3],
                chart="v1",
                is_real=is_real,
                multiplicity=mult,
                cert_det=det,
                nondegenerate=bool(abs(det) > 1e-9),
                residual=system.residual(full),
            )
        )
    solutions.sort(key=lambda s: (round(s.t.real, 9), round(s.t.imag, 9),
                                  round(s.u.real, 9), round(s.w.real, 9), round(s.x.real, 9)))
    found_v1 = sum(s.multiplicity for s in solutions)

    try:
        v0 = v0_solutions(co, opts=opts, probe=probe_v0)
        found_v0 = sum(s.multiplicity for s in v0)
    except B2Zero:
        v0 = []
        found_v0 = 0
        report_warnings.append("B2Zero: v = 0 closed forms unavailable (b2 = 0)")

    account = BezoutAccount(expected=BEZOUT_TOTAL, found_v1=found_v1, found_v0=found_v0)
    if found_v1 != V1_EXPECTED:
        report_warnings.append(
            f"BezoutDeficit: chart v=1 multiplicity {found_v1} != {V1_EXPECTED}"
        )

    families: list[ContinuedFamily] = []
    if continue_families:
        for s in solutions:
            if s.is_real and s.nondegenerate:
                try:
                    families.append(continue_to_r(co, s, r_max=r_max))
                except SingularContinuation as exc:
                    report_warnings.append(
                        f"SingularContinuation at r={exc.r_reached:.3g} for root t={s.t.real:.4f}"
                    )

    n_real = sum(1 for s in solutions if s.is_real)
    return AEReport(
        coefficients=co,
        solutions=solutions + v0,
        n_real_v1=n_real,
        bezout_account=account,
        orbit_families=families,
        nonexistence=symmetric_nonexistence(co),
        warnings=report_warnings,
    )


# -- continuation to r > 0 -----------------------------------------------------


def _rdep_system(co: AECoefficients) -> PolySystem:
    """The blown-up bifurcation equations with their r-dependent corrections.

    Variables (v, t, u, w, x, r); the reduced pair enters through
    gbar1 = t/2 + a1 v + c1 u + r (d1 w^2 + e1 v^2 + f1 v u + g1 v t) and the
    matching gbar2, truncated at the quoted coefficient list.
    """
    v, t, u, w, x, r = (MultiPoly.variable(6, i) for i in range(6))
    g1b = 0.5 * t + co.a1 * v + co.c1 * u + r * (co.d1 * w**2 + co.e1 * v**2 + co.f1 * v * u + co.g1 * v * t)
    g2b = co.b2 * t + co.a2 * v + co.c2 * u + r * (co.d2 * w**2 + co.e2 * v**2 + co.f2 * v * u + co.g2 * v * t)
    g1b_v = co.a1 + r * (2 * co.e1 * v + co.f1 * u + co.g1 * t)
    g2b_v = co.a2 + r * (2 * co.e2 * v + co.f2 * u + co.g2 * t)
    g1b_u = co.c1 + r * co.f1 * v
    g2b_u = co.c2 + r * co.f2 * v
    f1 = v * g1b + x**2 * g1b_v + x * w * g2b_v
    f2 = x * (g1b + v * g1b_v + u * g1b_u + 2 * r * w**2 * co.d1) + w * (
        g2b + v * g2b_v + u * g2b_u + 2 * r * w**2 * co.d2
    )
    f3 = x * (w * g1b_u - 2 * r * w * u * co.d1) - u * g2b + w * (w * g2b_u - 2 * r * u * w * co.d2)
    f4 = u**2 + w**2 + x**2 - v**2
    return PolySystem([f1, f2, f3, f4], ["v", "t", "u", "w", "x", "r"])


def continue_to_r(
    co: AECoefficients,
    sol: BlowupSolution,
    r_max: float,
    n_steps: int = 50,
    tol: float = 1e-12,
) -> ContinuedFamily:
    """Continue a non-degenerate chart-v1 root in r, holding t at its root value.

    (v, u, w, x)(r) solve the full r-dependent system; the invariant curve is
    recovered as (N, C, D, delta, tau) = r*(v, u, w, x, t).
    """
    if sol.chart != "v1":
        raise ValueError("continuation starts from a chart v=1 root")
    if not sol.nondegenerate:
        raise SingularContinuation("starting root is degenerate", r_reached=0.0)
    t0 = sol.t.real
    base = _rdep_system(co).fix_var(1, t0)  # vars (v, u, w, x, r)

    rs = np.linspace(0.0, r_max, n_steps + 1)
    q = np.array([1.0, sol.u.real, sol.w.real, sol.x.real], dtype=complex)
    rows = [q.copy()]
    reached = 0.0
    for r_target in rs[1:]:
        r_lo, q_lo = reached, q.copy()
        step = r_target - reached
        while True:
            r_try = min(r_lo + step, r_target)
            sys_r = base.fix_var(4, r_try)
            try:
                rec = newton_refine(sys_r, q_lo, tol=tol, max_iter=40)
                ok = np.abs(rec.point - q_lo).max() < 0.5
            except Diverged:
                ok = False
            if ok:
                r_lo, q_lo = r_try, rec.point
                if r_try >= r_target:
                    break
            else:
                step *= 0.5
                if step < 1e-9 * max(r_max, 1.0):
                    raise SingularContinuation(
                        f"continuation step underflow near r={r_lo:.6g}", r_reached=r_lo
                    )
        reached, q = r_target, q_lo
        rows.append(q.copy())
    arr = np.array(rows)
    return ContinuedFamily(
        start=sol,
        r=rs,
        v=arr[:, 0].real,
        t=np.full(len(rs), t0),
        u=arr[:, 1].real,
        w=arr[:, 2].real,
        x=arr[:, 3].real,
    )
