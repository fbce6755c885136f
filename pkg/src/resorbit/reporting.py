"""Report documents, delimited tables, and rendered figures.

Reports are nested dicts serialized to JSON with full float precision (the
shortest round-trip representation); tables are comma-separated with a
4-decimal echo column next to each float for eyeball comparison against
rounded listings.  Figure rendering uses the non-interactive backend and
writes PNG files next to the report.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from resorbit import __version__
from resorbit.ae_analysis import AEReport
from resorbit.combined_analysis import CombinedReport
from resorbit.sr_analysis import SRReport


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.complexfloating):
        return {"re": float(obj.real), "im": float(obj.imag)}
    return obj


def render_report(body: dict) -> str:
    """Canonical JSON text: sorted keys, full-precision floats."""
    return json.dumps(_jsonable(body), sort_keys=True, indent=2)


def write_report(body: dict, path: Path) -> None:
    path.write_text(render_report(body) + "\n")


def _fmt(value: float) -> str:
    return repr(float(value))


def write_table(path: Path, header: list[str], rows: list[list]) -> None:
    """CSV with a rounded echo column appended after each float column."""
    out_header: list[str] = []
    float_cols = set()
    probe = rows[0] if rows else []
    for j, name in enumerate(header):
        out_header.append(name)
        if probe and isinstance(probe[j], (float, np.floating)):
            float_cols.add(j)
            out_header.append(name + "_4dp")
    lines = [",".join(out_header)]
    for row in rows:
        cells: list[str] = []
        for j, val in enumerate(row):
            if j in float_cols:
                cells.append(_fmt(val))
                cells.append(f"{float(val):.4f}")
            else:
                cells.append(str(val))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


# -- report fragments -----------------------------------------------------------


def blowup_solutions_rows(report: AEReport) -> tuple[list[str], list[list]]:
    header = [
        "chart", "is_real", "multiplicity",
        "t_re", "t_im", "u_re", "u_im", "w_re", "w_im", "x_re", "x_im",
        "cert_det_re", "cert_det_im", "residual",
    ]
    rows = []
    for s in report.solutions:
        rows.append(
            [
                s.chart, int(s.is_real), s.multiplicity,
                float(s.t.real), float(s.t.imag), float(s.u.real), float(s.u.imag),
                float(s.w.real), float(s.w.imag), float(s.x.real), float(s.x.imag),
                float(s.cert_det.real), float(s.cert_det.imag), float(s.residual),
            ]
        )
    return header, rows


def ae_report_body(report: AEReport) -> dict:
    return {
        "coefficients": report.coefficients.as_dict(),
        "n_real_v1": report.n_real_v1,
        "bezout_account": {
            "expected": report.bezout_account.expected,
            "found_v1": report.bezout_account.found_v1,
            "found_v0": report.bezout_account.found_v0,
            "complete": report.bezout_account.complete,
        },
        "nonexistence": asdict(report.nonexistence),
        "solutions": [
            {
                "chart": s.chart,
                "point": {
                    "v": s.v, "t": s.t, "u": s.u, "w": s.w, "x": s.x,
                },
                "is_real": s.is_real,
                "multiplicity": s.multiplicity,
                "cert_det": s.cert_det,
                "nondegenerate": s.nondegenerate,
                "residual": s.residual,
            }
            for s in report.solutions
        ],
        "orbit_families": [
            {
                "start_t": fam.start.t.real,
                "start_x": fam.start.x.real,
                "r": fam.r,
                "N": fam.N,
                "C": fam.C,
                "D": fam.D,
                "delta": fam.delta,
                "tau": fam.tau,
            }
            for fam in report.orbit_families
        ],
        "warnings": report.warnings,
    }


def sr_report_body(report: SRReport) -> dict:
    return {
        "n": report.n,
        "c": report.c,
        "d": report.d,
        "discriminant": report.discriminant,
        "geometry": report.geometry.value,
        "morse_det": report.morse_det,
        "n_branches": len(report.nonsymmetric_branches),
        "symmetric_family": [
            {
                "z_re": s.z.real, "z_im": s.z.imag,
                "N": s.N, "C": s.C, "D": s.D, "tau": s.tau, "period": s.period,
            }
            for s in report.symmetric_family
        ],
        "branches": [
            {
                "sign_delta": br.sign_delta,
                "leading_ray": list(br.leading_ray),
                "points": [
                    {"t": p.t, "N": p.N, "C": p.C, "D": p.D, "tau": p.tau, "delta": p.delta}
                    for p in br.points
                ],
            }
            for br in report.nonsymmetric_branches
        ],
    }


def combined_report_body(report: CombinedReport) -> dict:
    return {
        "n": report.n,
        "c": report.c,
        "geometry": report.geometry.value,
        "n_branches": len(report.rs_branches),
        "cone_family": [
            {
                "phi": a.phi,
                "s_tag": a.s_tag,
                "N": a.sample.N,
                "C": a.sample.C,
                "tau": a.sample.tau,
                "period": a.sample.period,
            }
            for a in report.cone_family
        ],
        "s_orbits": [asdict(o) for o in report.s_orbits],
        "branches": [
            {
                "sign_delta": br.sign_delta,
                "points": [
                    {"t": p.t, "N": p.N, "C": p.C, "tau": p.tau, "delta": p.delta}
                    for p in br.points
                ],
            }
            for br in report.rs_branches
        ],
        "torus_fixsets": {k: v for k, v in report.torus_fixsets.items()},
    }


def torus_rows(report: CombinedReport) -> tuple[list[str], list[list]]:
    header = ["theta1", "theta2", "locus"]
    rows = []
    for name, pts in report.torus_fixsets.items():
        for t1, t2 in pts:
            rows.append([float(t1), float(t2), name])
    return header, rows


def provenance(mode: str, seed: int, tolerances: dict) -> dict:
    return {
        "tool": "resorbit",
        "version": __version__,
        "mode": mode,
        "seed": seed,
        "tolerances": tolerances,
    }


# -- figures ---------------------------------------------------------------------


def save_torus_figure(report: CombinedReport, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    style = {"FixR": ("C0", "-"), "FixS": ("C1", "--"), "FixSpi": ("C2", "-.")}
    for name, (color, ls) in style.items():
        pts = report.torus_fixsets[name]
        order = np.argsort(pts[:, 0])
        t1, t2 = pts[order, 0], pts[order, 1]
        jumps = np.where(np.abs(np.diff(t2)) > np.pi)[0]
        start = 0
        segments = list(jumps + 1) + [len(t1)]
        for end in segments:
            ax.plot(t1[start:end], t2[start:end], ls, color=color,
                    label=name if start == 0 else None, lw=1.4)
            start = end
    sr = report.torus_fixsets["FixSR"]
    ax.plot(sr[:, 0], sr[:, 1], "ko", ms=8, label="FixSR")
    ax.set_xlim(0, 2 * np.pi)
    ax.set_ylim(0, 2 * np.pi)
    ax.set_xlabel(r"$\theta_1$")
    ax.set_ylabel(r"$\theta_2$")
    ax.set_title("Fixed-point sets on the invariant torus")
    ax.legend(loc="upper right", fontsize=8)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def save_roots_figure(report: AEReport, path: Path) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 4.0))
    v1 = [s for s in report.solutions if s.chart == "v1"]
    ts = np.array([s.t for s in v1], dtype=complex)
    axes[0].scatter(ts.real, ts.imag, c=["C3" if s.is_real else "C0" for s in v1], s=24)
    axes[0].axhline(0.0, color="0.8", lw=0.8)
    axes[0].set_xlabel("Re t")
    axes[0].set_ylabel("Im t")
    axes[0].set_title("chart v=1 roots (red = real)")
    reals = [s for s in v1 if s.is_real]
    if reals:
        ws = [s.w.real for s in reals]
        xs = [s.x.real for s in reals]
        axes[1].scatter(ws, xs, c="C3", s=30)
        for s in reals:
            axes[1].annotate(f"t={s.t.real:.2f}", (s.w.real, s.x.real), fontsize=7,
                             textcoords="offset points", xytext=(4, 4))
    axes[1].set_xlabel("w")
    axes[1].set_ylabel("x")
    axes[1].set_title("real roots in the (w, x) plane")
    fig.suptitle(f"{report.n_real_v1} real of 12 chart roots; account "
                 f"{report.bezout_account.total}/{report.bezout_account.expected}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sr_figure(report: SRReport, path: Path) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 4.0))
    radii = sorted({round(abs(s.z), 12) for s in report.symmetric_family})
    taus = [
        np.mean([s.tau for s in report.symmetric_family if round(abs(s.z), 12) == r])
        for r in radii
    ]
    axes[0].plot([r * r for r in radii], taus, "o-", color="C0")
    axes[0].set_xlabel(r"$|z|^2$ on the diagonal")
    axes[0].set_ylabel(r"mean $\tau$")
    axes[0].set_title(f"cone family ({report.geometry.value})")
    for br in report.nonsymmetric_branches:
        ns = [p.N for p in br.points]
        ds = [p.delta for p in br.points]
        axes[1].plot(ns, ds, "o-", ms=3, label=rf"$\delta$ sign {br.sign_delta:+d}")
    if report.nonsymmetric_branches:
        axes[1].legend(fontsize=8)
    else:
        axes[1].text(0.5, 0.5, "no branches", ha="center", va="center",
                     transform=axes[1].transAxes)
    axes[1].set_xlabel("N")
    axes[1].set_ylabel(r"$\delta$")
    axes[1].set_title("non-symmetric branches")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_period_fit_figure(amplitudes: np.ndarray, periods: np.ndarray, path: Path) -> None:
    amp2 = np.asarray(amplitudes) ** 2
    gaps = np.asarray(periods) - 2 * np.pi
    coef = np.polyfit(amp2, gaps, 1)
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.plot(amp2, gaps, "o", color="C3")
    grid = np.linspace(0, amp2.max() * 1.05, 50)
    ax.plot(grid, np.polyval(coef, grid), "-", color="C0", lw=1.2)
    ax.set_xlabel(r"amplitude$^2$")
    ax.set_ylabel(r"period $- 2\pi$")
    ax.set_title("measured period against amplitude$^2$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
