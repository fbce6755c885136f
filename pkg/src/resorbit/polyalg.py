"""Sparse multivariate polynomials and a complete solver for small dense systems.

Polynomials are stored as exponent-vector -> complex-coefficient maps with no
zero terms.  Systems of a few quadrics are solved completely over C by a
total-degree homotopy (start system prod(x_i^{d_i} - 1), gamma trick,
predictor-corrector tracking), optionally topped up by dense multistart
Newton; every root is polished and roots are merged into clusters whose size
is the reported multiplicity.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np


class PolyalgError(Exception):
    pass


class Diverged(PolyalgError):
    """Newton refinement left the basin or exhausted its iterations."""


class IllPosed(PolyalgError):
    """The chart system is singular everywhere it was sampled."""


class Inconclusive(PolyalgError):
    """Multiplicity probe counts disagree across perturbation scales."""


class NonConvergentWarning(UserWarning):
    """Root count fell short of the requested total-degree account."""


class MultiPoly:
    """Polynomial in `nvars` variables with complex coefficients.

    terms maps exponent tuples to coefficients; zero coefficients are never
    stored, so equality of term dicts is canonical equality of polynomials.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], complex] | None = None):
        self.nvars = int(nvars)
        clean: dict[tuple[int, ...], complex] = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != self.nvars:
                    raise ValueError("exponent vector length mismatch")
                c = complex(coeff)
                if c != 0:
                    clean[tuple(int(e) for e in exps)] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value: complex) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "MultiPoly":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): 1.0})

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int], coeff: complex = 1.0) -> "MultiPoly":
        return cls(nvars, {tuple(exps): coeff})

    # -- ring operations ----------------------------------------------------

    def _require_same(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = MultiPoly.constant(self.nvars, other)
        self._require_same(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            terms[exps] = terms.get(exps, 0.0) + coeff
        return MultiPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, MultiPoly) else -complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return MultiPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        self._require_same(other)
        terms: dict[tuple[int, ...], complex] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                terms[key] = terms.get(key, 0.0) + c1 * c2
        return MultiPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(self.nvars, 1.0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, MultiPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- queries ------------------------------------------------------------

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def coeff(self, exps: Sequence[int]) -> complex:
        return self.terms.get(tuple(exps), 0.0)

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def chop(self, tol: float) -> "MultiPoly":
        """Drop terms with |coeff| <= tol and discard negligible imaginary parts."""
        terms = {}
        for e, c in self.terms.items():
            if abs(c) <= tol:
                continue
            if abs(c.imag) <= tol:
                c = complex(c.real, 0.0)
            terms[e] = c
        return MultiPoly(self.nvars, terms)

    def evaluate(self, x: Sequence[complex]) -> complex:
        if len(x) != self.nvars:
            raise ValueError("point dimension mismatch")
        total = 0.0 + 0.0j
        for exps, coeff in self.terms.items():
            term = coeff
            for xi, e in zip(x, exps):
                if e:
                    term *= xi**e
            total += term
        return total

    __call__ = evaluate

    def diff(self, index: int) -> "MultiPoly":
        terms = {}
        for exps, coeff in self.terms.items():
            e = exps[index]
            if e == 0:
                continue
            new = list(exps)
            new[index] = e - 1
            key = tuple(new)
            terms[key] = terms.get(key, 0.0) + coeff * e
        return MultiPoly(self.nvars, terms)

    def fix_var(self, index: int, value: complex) -> "MultiPoly":
        """Substitute x[index] = value, returning a polynomial in nvars - 1 variables."""
        terms: dict[tuple[int, ...], complex] = {}
        for exps, coeff in self.terms.items():
            c = coeff * (value ** exps[index] if exps[index] else 1.0)
            key = exps[:index] + exps[index + 1 :]
            terms[key] = terms.get(key, 0.0) + c
        return MultiPoly(self.nvars - 1, terms)

    def compose(self, args: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute each variable by a polynomial (all args share one variable set)."""
        if len(args) != self.nvars:
            raise ValueError("need one substitution per variable")
        m = args[0].nvars
        out = MultiPoly.zero(m)
        for exps, coeff in self.terms.items():
            term = MultiPoly.constant(m, coeff)
            for arg, e in zip(args, exps):
                if e:
                    term = term * arg**e
            out = out + term
        return out

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(exponent matrix, coefficient vector) in a deterministic term order."""
        items = sorted(self.terms.items())
        if not items:
            return np.zeros((0, self.nvars), dtype=int), np.zeros(0, dtype=complex)
        exps = np.array([e for e, _ in items], dtype=int)
        coeffs = np.array([c for _, c in items], dtype=complex)
        return exps, coeffs

    def __repr__(self):
        parts = []
        for exps, coeff in sorted(self.terms.items()):
            mono = "*".join(f"x{i}^{e}" for i, e in enumerate(exps) if e) or "1"
            parts.append(f"({coeff:g})*{mono}")
        return " + ".join(parts) if parts else "0"


def naive_evaluate(p: MultiPoly, x: Sequence[complex]) -> complex:
    """Independent reference evaluator: repeated multiplication, no fast paths."""
    total = 0.0 + 0.0j
    for exps, coeff in p.terms.items():
        term = complex(coeff)
        for xi, e in zip(x, exps):
            for _ in range(e):
                term = term * xi
        total += term
    return total


class _Compiled:
    """Vectorized evaluation of a system and its Jacobian.

    All monomials of all polynomials (and of the exact-derivative Jacobian)
    are collected once; evaluation is a power table followed by one matrix
    product, identical in exact arithmetic to term-by-term summation.
    """

    def __init__(self, polys: Sequence[MultiPoly], jac: Sequence[Sequence[MultiPoly]]):
        n = polys[0].nvars
        monoms: dict[tuple[int, ...], int] = {}

        def index(e):
            if e not in monoms:
                monoms[e] = len(monoms)
            return monoms[e]

        entries_f = [(i, index(e), c) for i, p in enumerate(polys) for e, c in p.terms.items()]
        entries_j = [
            (i * n + j, index(e), c)
            for i, row in enumerate(jac)
            for j, p in enumerate(row)
            for e, c in p.terms.items()
        ]
        self.nvars = n
        self.m = len(polys)
        self.exps = np.array(list(monoms), dtype=np.int64).reshape(len(monoms), n)
        self.mat_f = np.zeros((self.m, len(monoms)), dtype=complex)
        for i, k, c in entries_f:
            self.mat_f[i, k] += c
        self.mat_j = np.zeros((self.m * n, len(monoms)), dtype=complex)
        for i, k, c in entries_j:
            self.mat_j[i, k] += c

    def powers(self, x: np.ndarray) -> np.ndarray:
        return np.prod(np.asarray(x, dtype=complex)[None, :] ** self.exps, axis=1)

    def f(self, x: np.ndarray) -> np.ndarray:
        return self.mat_f @ self.powers(x)

    def f_and_jac(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        pw = self.powers(x)
        return self.mat_f @ pw, (self.mat_j @ pw).reshape(self.m, self.nvars)


class PolySystem:
    """A list of polynomials over a shared variable list."""

    def __init__(self, polys: Sequence[MultiPoly], var_names: Sequence[str] | None = None):
        polys = list(polys)
        if not polys:
            raise ValueError("empty system")
        nvars = polys[0].nvars
        if any(p.nvars != nvars for p in polys):
            raise ValueError("all polynomials must share the variable list")
        self.polys = polys
        self.nvars = nvars
        self.var_names = list(var_names) if var_names else [f"x{i}" for i in range(nvars)]
        if len(self.var_names) != nvars:
            raise ValueError("variable name count mismatch")
        self._jac: list[list[MultiPoly]] | None = None
        self._compiled: _Compiled | None = None

    def __len__(self):
        return len(self.polys)

    @property
    def degrees(self) -> list[int]:
        return [p.degree for p in self.polys]

    def is_homogeneous(self) -> bool:
        return all(p.is_homogeneous() for p in self.polys)

    def evaluate(self, x: Sequence[complex]) -> np.ndarray:
        return np.array([p.evaluate(x) for p in self.polys], dtype=complex)

    def residual(self, x: Sequence[complex]) -> float:
        return float(np.abs(self.evaluate(x)).max())

    def jacobian(self) -> list[list[MultiPoly]]:
        """Entry (i, j) is the exact partial of poly i by variable j."""
        if self._jac is None:
            self._jac = [[p.diff(j) for j in range(self.nvars)] for p in self.polys]
        return self._jac

    def jacobian_at(self, x: Sequence[complex]) -> np.ndarray:
        return self.compiled().f_and_jac(np.asarray(x, dtype=complex))[1]

    def compiled(self) -> _Compiled:
        if self._compiled is None:
            self._compiled = _Compiled(self.polys, self.jacobian())
        return self._compiled

    def fix_var(self, index: int, value: complex) -> "PolySystem":
        names = self.var_names[:index] + self.var_names[index + 1 :]
        return PolySystem([p.fix_var(index, value) for p in self.polys], names)

    def shifted(self, rhs: Sequence[complex]) -> "PolySystem":
        """System with each polynomial replaced by p_i - rhs_i."""
        return PolySystem([p - complex(r) for p, r in zip(self.polys, rhs)], self.var_names)


@dataclass
class RootRecord:
    point: np.ndarray
    multiplicity: int
    residual: float
    is_real: bool
    jacobian_rank: int

    def real_point(self) -> np.ndarray:
        return self.point.real.copy()


@dataclass
class SolveOptions:
    tol: float = 1e-12
    cluster_radius: float = 1e-6
    real_tol: float = 1e-8
    n_starts: int = 2000
    seed: int = 0
    method: str = "auto"  # auto | homotopy | multistart
    max_newton: int = 60
    infinity_threshold: float = 1e8
    expected_total: int | None = None
    rank_tol: float = 1e-7


def _numeric_rank(mat: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(mat, compute_uv=False)
    if s.size == 0:
        return 0
    return int(np.sum(s > tol * max(s[0], 1.0)))


def newton_refine(
    system: PolySystem,
    x0: Sequence[complex],
    tol: float = 1e-12,
    max_iter: int = 50,
    rank_tol: float = 1e-7,
) -> RootRecord:
    """Newton polish of a root of a square system; raises Diverged on failure."""
    if len(system) != system.nvars:
        raise ValueError("newton_refine needs a square system")
    x = np.array(x0, dtype=complex)
    comp = system.compiled()
    scale = max(1.0, float(np.abs(x).max()))
    best = None
    for _ in range(max_iter):
        f, jac = comp.f_and_jac(x)
        res = float(np.abs(f).max())
        if best is None or res < best[1]:
            best = (x.copy(), res)
        if res <= tol:
            break
        try:
            step = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(jac, f, rcond=None)
        if not np.all(np.isfinite(step)):
            raise Diverged("non-finite Newton step")
        x = x - step
        if np.abs(x).max() > 1e12 * scale:
            raise Diverged("iterates unbounded")
    x, res = best
    # a near-multiple root polishes to ~sqrt(eps); accept it and let the
    # caller read multiplicity off the cluster, but reject true divergence
    if res > max(tol, 1e-6):
        raise Diverged(f"residual {res:.3e} after {max_iter} iterations")
    jac = system.jacobian_at(x)
    rank = _numeric_rank(jac, rank_tol)
    return RootRecord(
        point=x,
        multiplicity=1,
        residual=res,
        is_real=bool(np.abs(x.imag).max() <= 1e-8),
        jacobian_rank=rank,
    )


# -- total-degree homotopy ---------------------------------------------------


def _start_roots(degrees: Sequence[int]) -> Iterable[tuple[complex, ...]]:
    axes = []
    for d in degrees:
        axes.append([np.exp(2j * np.pi * k / d) for k in range(d)])
    return itertools.product(*axes)


_AT_INFINITY = "infinity"
_FAILED = "failed"


def _track_path(
    target: _Compiled,
    start_vals: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    x0: np.ndarray,
    gamma: complex,
    opts: SolveOptions,
) -> np.ndarray | str:
    """Track one path of H(x, s) = (1-s)*gamma*g(x) + s*f(x) from s=0 to s=1.

    Returns the endpoint, "infinity" for a diverging path, or "failed" when
    the step size underflows (candidate for a retry with another gamma).
    """
    x = x0.astype(complex).copy()
    s = 0.0
    ds = 0.02
    ds_min = 1e-10
    streak = 0

    def h_and_jac(x, s):
        f, jf = target.f_and_jac(x)
        g, jg = start_vals(x)
        h = (1.0 - s) * gamma * g + s * f
        jh = (1.0 - s) * gamma * jg + s * jf
        dh_ds = f - gamma * g
        return h, jh, dh_ds

    while s < 1.0:
        step = min(ds, 1.0 - s)
        h, jh, dh_ds = h_and_jac(x, s)
        try:
            dx = np.linalg.solve(jh, -dh_ds)
        except np.linalg.LinAlgError:
            ds *= 0.4
            streak = 0
            if ds < ds_min:
                return _FAILED
            continue
        x_pred = x + step * dx
        s_new = s + step
        pred_size = float(np.abs(step * dx).max())
        scale = max(1.0, float(np.abs(x_pred).max()))
        xc = x_pred
        ok = False
        for _ in range(4):
            h, jh, _ = h_and_jac(xc, s_new)
            try:
                delta = np.linalg.solve(jh, h)
            except np.linalg.LinAlgError:
                break
            xc = xc - delta
            if not np.all(np.isfinite(xc)):
                break
            if np.abs(delta).max() <= 1e-9 * scale:
                ok = True
                break
        # backstop against jumping onto a neighbouring path: the corrector
        # should move far less than the predictor did
        if ok and np.abs(xc - x_pred).max() > max(10.0 * pred_size, 0.5 * scale):
            ok = False
        if ok:
            x = xc
            s = s_new
            streak += 1
            if streak >= 3:
                ds = min(ds * 1.7, 0.05)
            if np.abs(x).max() > opts.infinity_threshold:
                return _AT_INFINITY
        else:
            ds *= 0.4
            streak = 0
            if ds < ds_min:
                return _FAILED
    return x


def _normalized(system: PolySystem) -> PolySystem:
    """Each polynomial divided by its largest coefficient (same zero set)."""
    polys = []
    for p in system.polys:
        m = p.max_coeff()
        polys.append(p * (1.0 / m) if m > 0 else p)
    return PolySystem(polys, system.var_names)


def _homotopy_roots(system: PolySystem, opts: SolveOptions) -> list[np.ndarray]:
    n = system.nvars
    degrees = system.degrees
    if any(d == 0 for d in degrees):
        raise IllPosed("system contains a constant equation")
    work = _normalized(system)
    rng = np.random.default_rng(opts.seed)

    def start_vals(x: np.ndarray):
        g = np.array([x[i] ** degrees[i] - 1.0 for i in range(n)], dtype=complex)
        jg = np.zeros((n, n), dtype=complex)
        for i in range(n):
            jg[i, i] = degrees[i] * x[i] ** (degrees[i] - 1)
        return g, jg

    work_c = work.compiled()
    pending = [np.array(root, dtype=complex) for root in _start_roots(degrees)]
    endpoints: list[np.ndarray] = []
    for attempt in range(4):
        gamma = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
        still_failed = []
        for x0 in pending:
            end = _track_path(work_c, start_vals, x0, gamma, opts)
            if isinstance(end, str):
                if end == _FAILED:
                    still_failed.append(x0)
                continue
            try:
                rec = newton_refine(system, end, tol=opts.tol, max_iter=opts.max_newton)
                endpoints.append(rec.point)
            except Diverged:
                still_failed.append(x0)
        pending = still_failed
        if not pending:
            break
    return endpoints


def _multistart_roots(system: PolySystem, opts: SolveOptions) -> list[np.ndarray]:
    n = system.nvars
    rng = np.random.default_rng(opts.seed + 1)
    coeff_scale = max(1.0, max(p.max_coeff() for p in system.polys)) ** (1.0 / max(system.degrees))
    scale = min(coeff_scale, 10.0)
    found: list[np.ndarray] = []
    for _ in range(opts.n_starts):
        x0 = scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        try:
            rec = newton_refine(system, x0, tol=opts.tol, max_iter=opts.max_newton)
        except Diverged:
            continue
        found.append(rec.point)
    return found


def _check_well_posed(system: PolySystem, opts: SolveOptions) -> None:
    rng = np.random.default_rng(opts.seed + 2)
    n = system.nvars
    for _ in range(8):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        if _numeric_rank(system.jacobian_at(x), opts.rank_tol) == n:
            return
    raise IllPosed("Jacobian rank-deficient at every sampled point")


def _cluster(points: list[np.ndarray], radius: float) -> list[tuple[np.ndarray, int]]:
    """Greedy merge of points within `radius`; returns (representative, count)."""
    clusters: list[list[np.ndarray]] = []
    for p in points:
        for cl in clusters:
            if np.abs(cl[0] - p).max() <= radius * max(1.0, np.abs(cl[0]).max()):
                cl.append(p)
                break
        else:
            clusters.append([p])
    out = []
    for cl in clusters:
        rep = min(cl, key=lambda q: float(np.abs(q.imag).max()))
        out.append((rep, len(cl)))
    return out


def _canonical_sort(records: list[RootRecord]) -> list[RootRecord]:
    def key(rec: RootRecord):
        return tuple(
            (round(v.real, 9), round(v.imag, 9)) for v in rec.point
        )

    return sorted(records, key=key)


def solve_all_roots(
    system: PolySystem,
    chart: Mapping[int, complex] | None = None,
    opts: SolveOptions | None = None,
) -> list[RootRecord]:
    """All isolated complex roots of the (chart-restricted) square system.

    `chart` fixes variables by index before solving.  Roots within
    opts.cluster_radius are merged with summed path multiplicity.  When
    opts.expected_total is set and the multiplicity-weighted count falls
    short, a NonConvergentWarning is issued (shortfalls are reported, never
    silently dropped).
    """
    opts = opts or SolveOptions()
    sys_c = system
    if chart:
        for index in sorted(chart, reverse=True):
            sys_c = sys_c.fix_var(index, chart[index])
    if len(sys_c) != sys_c.nvars:
        raise ValueError("chart system is not square")
    _check_well_posed(sys_c, opts)

    points: list[np.ndarray] = []
    if opts.method in ("auto", "homotopy"):
        points = _homotopy_roots(sys_c, opts)
    if opts.method == "multistart" or (
        opts.method == "auto"
        and opts.expected_total is not None
        and len(points) < opts.expected_total
    ):
        points = points + _multistart_roots(sys_c, opts)

    records: list[RootRecord] = []
    for rep, count in _cluster(points, opts.cluster_radius):
        rank = _numeric_rank(sys_c.jacobian_at(rep), opts.rank_tol)
        # a root with full-rank Jacobian is simple; extra path arrivals there
        # are tracking duplicates, not multiplicity
        mult = count if rank < sys_c.nvars else 1
        rec = RootRecord(
            point=rep,
            multiplicity=mult,
            residual=sys_c.residual(rep),
            is_real=bool(np.abs(rep.imag).max() <= opts.real_tol),
            jacobian_rank=rank,
        )
        records.append(rec)
    records = _canonical_sort(records)

    if opts.expected_total is not None:
        total = sum(r.multiplicity for r in records)
        if total < opts.expected_total:
            warnings.warn(
                f"found multiplicity {total} of expected {opts.expected_total}",
                NonConvergentWarning,
                stacklevel=2,
            )
    return records


def multiplicity_probe(
    system: PolySystem,
    root: Sequence[complex],
    chart: Mapping[int, complex] | None = None,
    epsilons: Sequence[float] = (1e-4, 1e-6, 1e-8),
    seed: int = 0,
) -> int:
    """Multiplicity of an isolated root by right-hand-side perturbation.

    Each equation is offset by its own epsilon-scale constant; the perturbed
    system is re-solved completely and the solutions that split off near the
    root are counted.  The count must agree on at least two epsilon scales;
    it is cross-checked against the Jacobian rank (a defective Jacobian with
    a count of one is reported as Inconclusive).
    """
    opts = SolveOptions(seed=seed)
    sys_c = system
    if chart:
        for index in sorted(chart, reverse=True):
            sys_c = sys_c.fix_var(index, chart[index])
    if len(sys_c) != sys_c.nvars:
        raise ValueError("chart system is not square")
    x0 = np.array(root, dtype=complex)
    if sys_c.residual(x0) > 1e-8:
        raise ValueError("probe point is not a root of the chart system")

    rng = np.random.default_rng(seed)
    offsets = rng.uniform(0.5, 1.5, size=len(sys_c))
    counts = []
    for eps in epsilons:
        pert = sys_c.shifted(eps * offsets)
        # a multiplicity-m root splits to distance ~ eps^(1/m); the ball covers
        # m <= 2 with a wide margin while staying inside the isolation radius
        # of order-one normalized systems
        ball = 10.0 * math.sqrt(eps)
        local: list[np.ndarray] = []
        for _ in range(60):
            start = x0 + ball * (rng.standard_normal(len(x0)) + 1j * rng.standard_normal(len(x0)))
            try:
                rec = newton_refine(pert, start, tol=max(1e-13, 1e-4 * eps), max_iter=40)
            except Diverged:
                continue
            if np.abs(rec.point - x0).max() > ball:
                continue
            if not any(np.abs(rec.point - q).max() <= 0.02 * math.sqrt(eps) for q in local):
                local.append(rec.point)
        counts.append(len(local))
    stable = [c for c in counts if counts.count(c) >= 2 and c > 0]
    if not stable:
        raise Inconclusive(f"probe counts {counts} never agree across scales")
    mult = stable[0]
    rank = _numeric_rank(sys_c.jacobian_at(x0), opts.rank_tol)
    if mult == 1 and rank < sys_c.nvars:
        raise Inconclusive("simple count at a rank-deficient Jacobian")
    return mult


def rehomogenized_residual(system: PolySystem, chart_index: int, chart_value: complex,
                           point: Sequence[complex]) -> float:
    """Residual of a chart root on the homogeneous system it came from."""
    full = list(point)
    full.insert(chart_index, chart_value)
    return system.residual(full)
