"""Built-in regression corpus: the worked coefficient sets with their known
root counts, root values, certification determinants, closed forms, and the
branch/torus facts, each diffed against freshly computed results.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from resorbit.ae_analysis import (
    AECoefficients,
    build_blowup_system,
    continue_to_r,
    prop_62_points,
    solve_blowup,
    v0_pair_det_closed_form,
    v0_solutions,
)
from resorbit.combined_analysis import analyze_combined, torus_fixsets
from resorbit.invariants import SymmetryKind
from resorbit.normalform import (
    realize_ae,
    realize_sr,
    reduce_hamiltonian,
    reduced_from_coefficients,
)
from resorbit.polyalg import SolveOptions
from resorbit.sr_analysis import Geometry, analyze_sr, classify_period_geometry

EXAMPLE_SETS = {
    "example-6.2": dict(a1=1.0, a2=5.0, b2=1.0, c1=2.0, c2=2.0),
    "example-6.3": dict(a1=1.0, a2=5.0, b2=-2.0, c1=2.0, c2=2.0),
    "example-6.4": dict(a1=-2.0, a2=-11.0, b2=-5.0, c1=1.0, c2=2.0),
    "example-6.5": dict(a1=1.0, a2=-4.0, b2=-1.0, c1=1.0, c2=2.0),
}

# (t, u, w, x) with the upper sign choice, |det| of the certification minor,
# relative tolerance on the determinant; the lower-sign partner negates w, x
# and the determinant
EXPECTED_ROOTS = {
    "example-6.2": [((-4.0, 0.0, 0.0, 1.0), 20.0, 1e-9)],
    "example-6.3": [
        ((-4.0, 0.0, 0.0, 1.0), 692.0, 1e-9),
        ((1.5602, -0.9681, 0.0855, 0.2354), 35.6351, 1e-3),
    ],
    "example-6.4": [
        ((8.0, 0.0, 0.0, 1.0), 20816.0, 1e-6),
        ((-2.5592, 0.0346, 0.4980, -0.8665), 164.8123, 1e-3),
        ((-3.7663, 0.1529, 0.8984, -0.4118), 1827.2294, 1e-3),
    ],
    "example-6.5": [
        ((-4.0, 0.0, 0.0, 1.0), 4.0, 1e-6),
        ((-4.9432, -0.2615, 0.2274, -0.9380), 13.8083, 1e-3),
        ((-2.8537, 0.8527, 0.4155, 0.3165), 43.7450, 1e-3),
        ((-6.4260, 0.2940, 0.8063, -0.5133), 111.6657, 1e-3),
    ],
}

EXPECTED_REAL_COUNTS = {
    "example-6.2": 2,
    "example-6.3": 4,
    "example-6.4": 6,
    "example-6.5": 8,
}


@dataclass
class Check:
    label: str
    passed: bool
    detail: str = ""


@dataclass
class CaseResult:
    name: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, label: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(label=label, passed=bool(passed), detail=detail))


def _root_match(report, target, tol):
    for s in report.solutions:
        if s.chart == "v1" and s.is_real:
            if np.abs(np.array(s.tuwx()) - np.array(target)).max() <= tol:
                return s
    return None


def _run_example(name: str, seed: int) -> CaseResult:
    res = CaseResult(name=name)
    co = AECoefficients(**EXAMPLE_SETS[name])
    exact_axis = name in ("example-6.2",)
    report = solve_blowup(co, opts=SolveOptions(seed=seed))
    res.add(
        "real root count",
        report.n_real_v1 == EXPECTED_REAL_COUNTS[name],
        f"found {report.n_real_v1}, expected {EXPECTED_REAL_COUNTS[name]}",
    )
    res.add(
        "chart v=1 multiplicity 12",
        report.bezout_account.found_v1 == 12,
        f"found {report.bezout_account.found_v1}",
    )
    res.add(
        "account reaches 16",
        report.bezout_account.complete,
        f"total {report.bezout_account.total}",
    )
    for target, det_abs, det_rtol in EXPECTED_ROOTS[name]:
        pos_tol = 1e-10 if exact_axis and target[1] == 0.0 == target[2] else 5e-4
        upper = _root_match(report, target, pos_tol)
        lower = _root_match(
            report, (target[0], target[1], -target[2], -target[3]), pos_tol
        )
        res.add(f"root {target} present (both signs)", upper is not None and lower is not None)
        if upper is None or lower is None:
            continue
        for s in (upper, lower):
            ok = abs(abs(s.cert_det.real) - det_abs) <= det_rtol * det_abs
            res.add(
                f"|det| at t={s.t.real:.4f}, w={s.w.real:+.4f}",
                ok,
                f"got {abs(s.cert_det.real):.6f}, expected {det_abs}",
            )
        res.add(
            "paired determinants have opposite signs",
            upper.cert_det.real * lower.cert_det.real < 0,
        )
    return res


def case_prop_guaranteed_roots(seed: int = 0, n_draws: int = 20, n_solved: int = 5) -> CaseResult:
    """The two axis roots are exact for random coefficient draws, and the
    solver reports them (full solve on a subset of the draws)."""
    res = CaseResult(name="prop-6.2")
    rng = np.random.default_rng(seed)
    worst = 0.0
    solver_ok = True
    for k in range(n_draws):
        vals = rng.uniform(-5.0, 5.0, 5)
        while abs(vals[2]) < 0.1:
            vals[2] = rng.uniform(-5.0, 5.0)
        co = AECoefficients(a1=vals[0], a2=vals[1], b2=vals[2], c1=vals[3], c2=vals[4])
        system = build_blowup_system(co)
        for p4 in prop_62_points(co):
            full = np.concatenate([[1.0], p4])
            worst = max(worst, system.residual(full))
        if k < n_solved:
            report = solve_blowup(co, opts=SolveOptions(seed=k), probe_v0=False)
            for sgn in (1.0, -1.0):
                s = _root_match(report, (-4.0 * co.a1, 0.0, 0.0, sgn), 1e-8)
                solver_ok = solver_ok and s is not None and s.residual <= 1e-10
    res.add(
        f"axis roots exact over {n_draws} draws",
        worst <= 1e-10,
        f"worst residual {worst:.3e}",
    )
    res.add(f"solver reports both axis roots on {n_solved} solved draws", solver_ok)
    return res


def case_v0_closed_forms(seed: int = 1, n_draws: int = 10, n_probe: int = 3) -> CaseResult:
    res = CaseResult(name="v0-closed-forms")
    rng = np.random.default_rng(seed)
    worst_pt, worst_det = 0.0, 0.0
    mult_ok = True
    for k in range(n_draws):
        vals = rng.uniform(-5.0, 5.0, 5)
        while abs(vals[2]) < 0.1:
            vals[2] = rng.uniform(-5.0, 5.0)
        co = AECoefficients(a1=vals[0], a2=vals[1], b2=vals[2], c1=vals[3], c2=vals[4])
        sols = v0_solutions(co, opts=SolveOptions(seed=k), probe=(k < n_probe))
        closed = v0_pair_det_closed_form(co)
        if k < n_probe:
            mult_ok = mult_ok and sols[0].multiplicity == 2
        for s in sols[1:]:
            expect_t = -np.sign(s.u.imag) * 2j * co.c2 / co.b2
            worst_pt = max(worst_pt, abs(s.t - expect_t))
            worst_det = max(worst_det, abs(s.cert_det - closed) / abs(closed))
    res.add("pair matches closed form", worst_pt <= 1e-10, f"worst {worst_pt:.2e}")
    res.add("determinant matches closed form (rel 1e-8)", worst_det <= 1e-8, f"worst {worst_det:.2e}")
    res.add(f"line root multiplicity 2 on {n_probe} probed draws", mult_ok)
    return res


def case_sr_dichotomy(seed: int = 0) -> CaseResult:
    res = CaseResult(name="sr-dichotomy")
    elliptic = analyze_sr(reduced_from_coefficients(SymmetryKind.SR, n=1.0))
    res.add("(1,0,0) elliptic", elliptic.geometry is Geometry.ELLIPTIC)
    res.add("(1,0,0) two branches", len(elliptic.nonsymmetric_branches) == 2)
    res.add("(1,0,0) Morse determinant positive", elliptic.morse_det > 0)
    hyper = analyze_sr(reduced_from_coefficients(SymmetryKind.SR, c=1.0))
    res.add("(0,1,0) hyperbolic", hyper.geometry is Geometry.HYPERBOLIC)
    res.add("(0,1,0) zero branches", len(hyper.nonsymmetric_branches) == 0)
    res.add("(0,1,0) Morse determinant negative", hyper.morse_det < 0)
    res.add(
        "(5,3,4) degenerate",
        classify_period_geometry(5.0, 3.0, 4.0) is Geometry.DEGENERATE,
    )
    rh = reduce_hamiltonian(realize_sr(1.25, -0.5, 0.75))
    res.add(
        "derive round-trip (SR)",
        max(abs(rh.n - 1.25), abs(rh.c + 0.5), abs(rh.d - 0.75)) <= 1e-12,
    )
    return res


def case_combined_torus(seed: int = 0) -> CaseResult:
    res = CaseResult(name="combined-torus")
    rep = analyze_combined(reduced_from_coefficients(SymmetryKind.COMBINED, n=1.0))
    loci = rep.torus_fixsets
    res.add("exactly 2 FixSR points", len(loci["FixSR"]) == 2)
    res.add(
        "FixSR points are (0,0) and (pi,pi)",
        np.allclose(loci["FixSR"], [[0.0, 0.0], [np.pi, np.pi]]),
    )
    t1, t2 = loci["FixR"].T
    res.add("FixR line theta2 = theta1", bool(np.allclose(t1, t2)))
    t1, t2 = loci["FixS"].T
    res.add("FixS line theta2 = -theta1", bool(np.allclose(np.mod(t1 + t2, 2 * np.pi), 0.0)))
    res.add("(1,0) has two branches", len(rep.rs_branches) == 2)
    hyper = analyze_combined(reduced_from_coefficients(SymmetryKind.COMBINED, c=1.0))
    res.add("(0,1) has no branches", len(hyper.rs_branches) == 0)
    tags = {o.which for o in rep.s_orbits}
    res.add("both distinguished orbits present", tags == {"S", "S_pi"})
    return res


def case_continuation_curvature(seed: int = 0) -> CaseResult:
    res = CaseResult(name="continuation-curvature")
    co = AECoefficients(a1=1.0, a2=5.0, b2=1.0, c1=2.0, c2=2.0, e1=1.0)
    report = solve_blowup(co, opts=SolveOptions(seed=seed), probe_v0=False)
    sol = _root_match(report, (-4.0, 0.0, 0.0, 1.0), 1e-8)
    res.add("start root present", sol is not None)
    if sol is not None:
        fam = continue_to_r(co, sol, r_max=1e-3, n_steps=4)
        h = fam.r[1] - fam.r[0]
        n2 = (2 * fam.N[0] - 5 * fam.N[1] + 4 * fam.N[2] - fam.N[3]) / h**2
        res.add(
            "d2N/dr2(0) = -3 within 1e-4",
            abs(n2 + 3.0) <= 1e-4,
            f"got {n2:.6f}",
        )
    return res


def case_derive_ae(seed: int = 0) -> CaseResult:
    res = CaseResult(name="derive-ae")
    rh = reduce_hamiltonian(realize_ae(1.0, 2.0, 5.0, 2.0))
    res.add(
        "derive round-trip (AE)",
        max(abs(rh.a1 - 1.0), abs(rh.c1 - 2.0), abs(rh.a2 - 5.0), abs(rh.c2 - 2.0)) <= 1e-12,
    )
    res.add("derived b2 is zero", rh.b2 == 0.0)
    return res


CASES = {
    "example-6.2": lambda seed: _run_example("example-6.2", seed),
    "example-6.3": lambda seed: _run_example("example-6.3", seed),
    "example-6.4": lambda seed: _run_example("example-6.4", seed),
    "example-6.5": lambda seed: _run_example("example-6.5", seed),
    "prop-6.2": case_prop_guaranteed_roots,
    "v0-closed-forms": lambda seed: case_v0_closed_forms(seed=seed + 1),
    "sr-dichotomy": case_sr_dichotomy,
    "combined-torus": case_combined_torus,
    "continuation-curvature": case_continuation_curvature,
    "derive-ae": case_derive_ae,
}


def run_case(name: str, seed: int = 0) -> CaseResult:
    if name not in CASES:
        raise KeyError(f"unknown corpus case {name!r}; known: {sorted(CASES)}")
    return CASES[name](seed)


def run_all(seed: int = 0) -> list[CaseResult]:
    return [run_case(name, seed=seed) for name in CASES]
