"""Command-line front end.

Subcommands: analyze-sr, analyze-ae, analyze-combined, derive, roots, verify,
reproduce.  Input is a JSON document carrying either reduced coefficients
under their conventional names or an explicit polynomial Hamiltonian; output
is a JSON report, with CSV tables and PNG figures written next to it when an
output path is given.

Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 regression
mismatch.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from pathlib import Path

import numpy as np

from resorbit import __version__
from resorbit.ae_analysis import AEAnalysisError, AECoefficients, solve_blowup
from resorbit.combined_analysis import analyze_combined
from resorbit.corpus import CASES, run_all, run_case
from resorbit.invariants import SymmetryKind
from resorbit.normalform import (
    HamiltonianSpec,
    NormalFormError,
    ReducedHamiltonian,
    realize_ae,
    realize_combined,
    realize_sr,
    reduce_hamiltonian,
    reduced_from_coefficients,
)
from resorbit.orbitverify import (
    NoConvergence,
    OrbitVerifyError,
    shoot_R_symmetric,
    shoot_generic,
    seed_from_invariants,
    vector_field,
)
from resorbit.polyalg import MultiPoly, PolyalgError, SolveOptions
from resorbit.sr_analysis import SRAnalysisError, analyze_sr
from resorbit import reporting

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_MISMATCH = 4

SR_NAMES = ("n", "c", "d")
AE_NAMES = ("a1", "c1", "d1", "e1", "f1", "g1", "b2", "a2", "c2", "d2", "e2", "f2", "g2")


class InputError(Exception):
    pass


def load_input(path: str | None) -> dict:
    if path is None:
        raise InputError("this mode requires --input FILE")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read input file: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"input is not valid JSON (line {exc.lineno}): {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InputError("input document must be a JSON object")
    return doc


def parse_kind(doc: dict, default: str | None = None) -> SymmetryKind:
    raw = doc.get("kind", default)
    if raw is None:
        raise InputError("missing field 'kind' (SR | AE | COMBINED)")
    try:
        return SymmetryKind(str(raw).upper())
    except ValueError as exc:
        raise InputError(f"unknown kind {raw!r}") from exc


def parse_hamiltonian(doc: dict, kind: SymmetryKind) -> HamiltonianSpec:
    block = doc.get("hamiltonian")
    if not isinstance(block, dict) or "terms" not in block:
        raise InputError("field 'hamiltonian' must be an object with a 'terms' array")
    terms = {}
    for k, item in enumerate(block["terms"]):
        try:
            exps = tuple(int(e) for e in item["exps"])
            coeff = float(item["coeff"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"hamiltonian.terms[{k}] needs 'exps' (4 ints) and 'coeff'") from exc
        if len(exps) != 4 or any(e < 0 for e in exps):
            raise InputError(f"hamiltonian.terms[{k}].exps must be 4 nonnegative integers")
        terms[exps] = terms.get(exps, 0.0) + coeff
    dmax = int(block.get("dmax", 4))
    try:
        spec = HamiltonianSpec(kind=kind, H=MultiPoly(4, terms), dmax=dmax)
        spec.validate()
    except (NormalFormError, ValueError) as exc:
        raise InputError(f"invalid hamiltonian: {exc}") from exc
    return spec


def parse_reduced(doc: dict, kind: SymmetryKind) -> ReducedHamiltonian:
    if "hamiltonian" in doc:
        return reduce_hamiltonian(parse_hamiltonian(doc, kind))
    block = doc.get("reduced")
    if not isinstance(block, dict):
        raise InputError("provide either 'reduced' coefficients or a 'hamiltonian'")
    names = AE_NAMES if kind is SymmetryKind.AE else SR_NAMES
    unknown = set(block) - set(names)
    if unknown:
        raise InputError(f"unknown reduced coefficient names {sorted(unknown)}; allowed: {names}")
    vals = {}
    for key, raw in block.items():
        try:
            vals[key] = float(raw)
        except (TypeError, ValueError) as exc:
            raise InputError(f"reduced.{key} must be a number") from exc
    return reduced_from_coefficients(kind, **vals)


def parse_ae_coefficients(doc: dict) -> AECoefficients:
    rh = parse_reduced(doc, SymmetryKind.AE)
    return AECoefficients.from_reduced(rh)


def _sweep_radii(arg: str | None) -> list[float]:
    if not arg:
        return [1e-2, 5e-3, 2.5e-3]
    try:
        radii = [float(tok) for tok in arg.split(",") if tok.strip()]
    except ValueError as exc:
        raise InputError(f"--sweep-radii must be a comma-separated float list: {exc}") from exc
    if not radii or any(r <= 0 for r in radii):
        raise InputError("--sweep-radii entries must be positive")
    return radii


def _base_report(args, mode: str, request: dict) -> dict:
    return {
        "provenance": reporting.provenance(
            mode, seed=args.seed, tolerances={"tol": args.tol}
        ),
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "request": request,
        "warnings": [],
    }


def _emit(args, body: dict, tables: dict[str, tuple[list[str], list[list]]] | None = None,
          figures: dict[str, object] | None = None) -> None:
    """Write the report (or, in table format, the primary table) to --output,
    with remaining tables and figures as sidecar files; print to stdout when
    no output path was given."""
    text = reporting.render_report(body)
    if args.output is None:
        print(text)
        return
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    stem = out.with_suffix("")
    tables = dict(tables or {})
    if args.format == "table" and tables:
        name, (header, rows) = next(iter(tables.items()))
        reporting.write_table(out, header, rows)
        tables.pop(name)
    else:
        out.write_text(text + "\n")
    for name, (header, rows) in tables.items():
        reporting.write_table(Path(f"{stem}_{name}.csv"), header, rows)
    for name, renderer in (figures or {}).items():
        renderer(Path(f"{stem}_{name}.png"))


def cmd_analyze_sr(args) -> int:
    doc = load_input(args.input)
    rh = parse_reduced(doc, parse_kind(doc, default="SR"))
    radii = _sweep_radii(args.sweep_radii)
    report = analyze_sr(rh, sample_radii=radii)
    body = _base_report(args, "analyze-sr", doc)
    body["results"] = reporting.sr_report_body(report)
    cone_rows = [
        [s.z.real, s.z.imag, s.N, s.C, s.D, s.tau, s.period]
        for s in report.symmetric_family
    ]
    branch_rows = [
        [br.sign_delta, p.t, p.N, p.C, p.D, p.tau, p.delta]
        for br in report.nonsymmetric_branches
        for p in br.points
    ]
    tables = {
        "cone": (["z_re", "z_im", "N", "C", "D", "tau", "period"], cone_rows),
    }
    if branch_rows:
        tables["branches"] = (["sign_delta", "t", "N", "C", "D", "tau", "delta"], branch_rows)
    _emit(args, body, tables, {"overview": lambda p: reporting.save_sr_figure(report, p)})
    return EXIT_OK


def cmd_analyze_ae(args) -> int:
    doc = load_input(args.input)
    co = parse_ae_coefficients(doc)
    report = solve_blowup(
        co,
        opts=SolveOptions(seed=args.seed, tol=args.tol),
        continue_families=bool(doc.get("continue_families", False)),
        r_max=float(doc.get("r_max", 0.05)),
    )
    body = _base_report(args, "analyze-ae", doc)
    body["results"] = reporting.ae_report_body(report)
    body["warnings"] = report.warnings
    header, rows = reporting.blowup_solutions_rows(report)
    _emit(args, body, {"roots": (header, rows)},
          {"roots": lambda p: reporting.save_roots_figure(report, p)})
    return EXIT_OK


def cmd_analyze_combined(args) -> int:
    doc = load_input(args.input)
    rh = parse_reduced(doc, parse_kind(doc, default="COMBINED"))
    radii = _sweep_radii(args.sweep_radii)
    report = analyze_combined(rh, sample_radii=radii)
    body = _base_report(args, "analyze-combined", doc)
    body["results"] = reporting.combined_report_body(report)
    header, rows = reporting.torus_rows(report)
    _emit(args, body, {"torus": (header, rows)},
          {"torus": lambda p: reporting.save_torus_figure(report, p)})
    return EXIT_OK


def cmd_derive(args) -> int:
    doc = load_input(args.input)
    kind = parse_kind(doc)
    spec = parse_hamiltonian(doc, kind)
    rh = reduce_hamiltonian(spec)
    body = _base_report(args, "derive", doc)
    if kind is SymmetryKind.AE:
        body["results"] = {
            "kind": kind.value,
            "coefficients": AECoefficients.from_reduced(rh).as_dict(),
        }
    else:
        body["results"] = {
            "kind": kind.value,
            "coefficients": {"n": rh.n, "c": rh.c, "d": rh.d},
        }
    _emit(args, body)
    return EXIT_OK


def cmd_roots(args) -> int:
    doc = load_input(args.input)
    co = parse_ae_coefficients(doc)
    report = solve_blowup(co, opts=SolveOptions(seed=args.seed, tol=args.tol), probe_v0=False)
    body = _base_report(args, "roots", doc)
    body["results"] = reporting.ae_report_body(report)
    body["warnings"] = report.warnings
    header, rows = reporting.blowup_solutions_rows(report)
    _emit(args, body, {"roots": (header, rows)},
          {"roots": lambda p: reporting.save_roots_figure(report, p)})
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = load_input(args.input)
    if "report" in doc:
        # re-run the seeds recorded in a prior report's request echo
        request = json.loads(Path(doc["report"]).read_text()).get("request", {})
    else:
        request = doc
    kind = parse_kind(request)
    rh = parse_reduced(request, kind)
    body = _base_report(args, "verify", doc)
    results: dict = {"orbits": [], "failures": []}
    figures = None

    if kind is SymmetryKind.AE:
        co = AECoefficients.from_reduced(rh)
        # the quartic realization carries only (a1, c1, a2, c2); tau-level and
        # higher coefficients cannot enter an autonomous quartic
        realized = AECoefficients(a1=co.a1, c1=co.c1, a2=co.a2, c2=co.c2)
        dropped = {k: v for k, v in co.as_dict().items() if v != getattr(realized, k)}
        if dropped:
            body["warnings"].append(f"coefficients not realizable in a quartic: {sorted(dropped)}")
        vf = vector_field(realize_ae(realized.a1, realized.c1, realized.a2, realized.c2))
        report = solve_blowup(realized, opts=SolveOptions(seed=args.seed), probe_v0=False)
        r_seed = float(doc.get("r", 1e-2))
        for s in report.real_v1_solutions():
            x0, T = seed_from_invariants(
                r_seed, r_seed * s.u.real, r_seed * s.w.real, r_seed * s.x.real,
                r_seed * s.t.real,
            )
            try:
                orb = shoot_generic(vf, x0, T)
                results["orbits"].append(_orbit_dict(orb, seed_root=list(s.tuwx())))
            except Exception as exc:  # noqa: BLE001 - failures are reported data
                results["failures"].append({"seed_root": list(s.tuwx()), "reason": str(exc)})
    else:
        radii = _sweep_radii(args.sweep_radii)
        if kind is SymmetryKind.SR:
            vf = vector_field(realize_sr(rh.n, rh.c, rh.d))
            analysis = analyze_sr(rh, sample_radii=radii)
            branches = analysis.nonsymmetric_branches
            cone = analysis.symmetric_family
        else:
            vf = vector_field(realize_combined(rh.n, rh.c))
            analysis = analyze_combined(rh, sample_radii=radii)
            branches = analysis.rs_branches
            cone = [a.sample for a in analysis.cone_family]
        amplitudes, periods = [], []
        for s in cone:
            try:
                orb = shoot_R_symmetric(vf, s.z, s.tau)
                results["orbits"].append(_orbit_dict(orb))
                amplitudes.append(abs(s.z))
                periods.append(orb.period)
            except Exception as exc:  # noqa: BLE001
                results["failures"].append({"seed_z": [s.z.real, s.z.imag], "reason": str(exc)})
        for br in branches:
            p = br.points[len(br.points) // 4]
            x0, T = seed_from_invariants(p.N, p.C, p.D, p.delta, p.tau)
            try:
                orb = shoot_generic(vf, x0, T)
                results["orbits"].append(_orbit_dict(orb, branch_sign=br.sign_delta))
            except Exception as exc:  # noqa: BLE001
                results["failures"].append({"branch_sign": br.sign_delta, "reason": str(exc)})
        if len(set(np.round(amplitudes, 12))) >= 3:
            figures = {
                "periods": lambda path: reporting.save_period_fit_figure(
                    np.array(amplitudes), np.array(periods), path
                )
            }

    results["n_converged"] = len(results["orbits"])
    results["n_failed"] = len(results["failures"])
    body["results"] = results
    _emit(args, body, None, figures)
    return EXIT_OK


def _orbit_dict(orb, **extra) -> dict:
    d = {
        "x0": orb.x0,
        "period": orb.period,
        "tau": orb.tau,
        "residual": orb.residual,
        "symmetry": orb.symmetry,
        "energy": orb.energy,
    }
    if orb.partner is not None:
        d["partner_energy"] = orb.partner.energy
    d.update(extra)
    return d


def cmd_reproduce(args) -> int:
    if args.case:
        cases = [run_case(args.case, seed=args.seed)]
    else:
        cases = run_all(seed=args.seed)
    body = _base_report(args, "reproduce", {"case": args.case or "all"})
    body["results"] = {
        "cases": [
            {
                "name": c.name,
                "status": "PASS" if c.passed else "FAIL",
                "checks": [
                    {"label": k.label, "status": "PASS" if k.passed else "FAIL", "detail": k.detail}
                    for k in c.checks
                ],
            }
            for c in cases
        ]
    }
    _emit(args, body)
    for c in cases:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}", file=sys.stderr)
    return EXIT_OK if all(c.passed for c in cases) else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resorbit",
        description="Periodic-orbit families near a 1:-1 resonant equilibrium "
        "with involutory symmetry",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", help="JSON input document")
        p.add_argument("--output", help="report path; tables and figures go next to it")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-12)
        p.add_argument("--sweep-radii", help="comma-separated amplitude list")
        p.add_argument("--format", choices=("report", "table"), default="report")

    for name, fn in [
        ("analyze-sr", cmd_analyze_sr),
        ("analyze-ae", cmd_analyze_ae),
        ("analyze-combined", cmd_analyze_combined),
        ("derive", cmd_derive),
        ("roots", cmd_roots),
        ("verify", cmd_verify),
    ]:
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("reproduce")
    common(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--case", choices=sorted(CASES))
    group.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NormalFormError, ValueError, KeyError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (PolyalgError, SRAnalysisError, AEAnalysisError, OrbitVerifyError, NoConvergence) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
