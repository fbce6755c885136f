"""Reduced Hamiltonians from polynomial Hamiltonians on R^4.

A Hamiltonian with the resonant quadratic part delta/2 and a declared
anti-invariance is pushed through one resonant averaging step (projection of
each degree onto circle-invariant monomials) and rewritten in the invariant
generators.  The reduced data is the function g with h = delta*g for the
swap-reversing case, or the pair (g1, g2) with h = delta*g1 + D*g2 for the
conjugate-swap case; the structural tau/2 term is attached at the end.

Two variable orderings are used throughout: real coordinates
(x1, y1, x2, y2) and the z-representation (z1, z1bar, z2, z2bar).  Reduced
polynomials live in (N, C, D, tau); the conjugate-swap pair lives in
(N, C, E, tau) with E standing for D^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from resorbit.invariants import SymmetryKind
from resorbit.polyalg import MultiPoly


class NormalFormError(Exception):
    pass


class ResidueNonzero(NormalFormError):
    """The polynomial is not expressible in the declared anti-invariant form."""


# -- z-representation plumbing ------------------------------------------------

_Z1, _Z1B, _Z2, _Z2B = (MultiPoly.variable(4, i) for i in range(4))
_X1, _Y1, _X2, _Y2 = (MultiPoly.variable(4, i) for i in range(4))

# invariant generators in the z-representation
A_Z = _Z1 * _Z1B
B_Z = _Z2 * _Z2B
M_Z = _Z1 * _Z2
MBAR_Z = _Z1B * _Z2B
N_Z = A_Z + B_Z
DELTA_Z = A_Z - B_Z
C_Z = M_Z + MBAR_Z
D_Z = -1j * (M_Z - MBAR_Z)
H2_Z = 0.5 * DELTA_Z


def real_to_zrep(p: MultiPoly) -> MultiPoly:
    """Rewrite a polynomial in (x1, y1, x2, y2) over (z1, z1bar, z2, z2bar)."""
    half = 0.5
    args = [
        half * (_Z1 + _Z1B),
        -0.5j * (_Z1 - _Z1B),
        half * (_Z2 + _Z2B),
        -0.5j * (_Z2 - _Z2B),
    ]
    return p.compose(args)


def zrep_to_real(p: MultiPoly) -> MultiPoly:
    args = [_X1 + 1j * _Y1, _X1 - 1j * _Y1, _X2 + 1j * _Y2, _X2 - 1j * _Y2]
    return p.compose(args)


def is_real_valued(p_z: MultiPoly, tol: float = 1e-12) -> bool:
    """A z-representation polynomial is real iff coeff(a,b,c,d) = conj coeff(b,a,d,c)."""
    scale = max(p_z.max_coeff(), 1.0)
    for (a, b, c, d), coeff in p_z.terms.items():
        if abs(coeff - np.conj(p_z.coeff((b, a, d, c)))) > tol * scale:
            return False
    return True


def _act_zrep(p: MultiPoly, which: str) -> MultiPoly:
    """Pullback p∘T for the swap (R) or conjugate swap (S) in the z-representation."""
    terms = {}
    for (a, b, c, d), coeff in p.terms.items():
        if which == "R":
            key = (c, d, a, b)
        elif which == "S":
            key = (d, c, b, a)
        else:
            raise ValueError(f"unknown involution {which!r}")
        terms[key] = terms.get(key, 0.0) + coeff
    return MultiPoly(4, terms)


def s1_average(p: MultiPoly) -> MultiPoly:
    """Projection onto circle-invariant monomials.

    A monomial z1^a z1bar^b z2^c z2bar^d picks up e^{i((a-b)-(c-d))theta}
    under the action (e^{i theta} z1, e^{-i theta} z2) and survives averaging
    exactly when its charge (a-b)-(c-d) vanishes.
    """
    terms = {
        exps: c for exps, c in p.terms.items()
        if (exps[0] - exps[1]) - (exps[2] - exps[3]) == 0
    }
    return MultiPoly(4, terms)


# -- Hamiltonian specification ------------------------------------------------


@dataclass
class HamiltonianSpec:
    """A polynomial Hamiltonian on R^4 with a declared symmetry kind.

    The quadratic part is pinned to delta/2 = (|z1|^2 - |z2|^2)/2 so that the
    linearization of J grad H is exactly L = diag(J2, -J2) (unit frequency,
    linear period 2*pi).
    """

    kind: SymmetryKind
    H: MultiPoly  # real coordinates (x1, y1, x2, y2)
    dmax: int = 4

    def __post_init__(self):
        if self.H.nvars != 4:
            raise ValueError("Hamiltonian must be a polynomial in 4 real coordinates")
        if self.H.degree > self.dmax:
            raise ValueError(f"degree {self.H.degree} exceeds dmax={self.dmax}")

    def zrep(self) -> MultiPoly:
        return real_to_zrep(self.H)

    def validate(self, tol: float = 1e-12) -> None:
        scale = max(self.H.max_coeff(), 1.0)
        hz = self.zrep()
        if abs(hz.coeff((0, 0, 0, 0))) > tol * scale:
            raise NormalFormError("H(0) must vanish")
        for exps in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)):
            if abs(hz.coeff(exps)) > tol * scale:
                raise NormalFormError("grad H(0) must vanish")
        quad = MultiPoly(4, {e: c for e, c in hz.terms.items() if sum(e) == 2})
        if not (quad - H2_Z).chop(tol * scale).is_zero():
            raise NormalFormError(
                "quadratic part must equal (|z1|^2 - |z2|^2)/2 (unit-frequency normalization)"
            )
        violations = check_symmetry(self)
        if violations:
            raise NormalFormError(f"declared symmetry violated at {len(violations)} monomials")


def check_symmetry(spec: HamiltonianSpec, tol: float = 1e-12) -> list[tuple[tuple[int, ...], complex]]:
    """Monomial coefficients violating the declared anti-invariance H∘T = -H.

    Returns a list of (z-monomial exponents, residual coefficient); empty
    exactly when the spec is admissible.
    """
    hz = spec.zrep()
    scale = max(hz.max_coeff(), 1.0)
    checks = {
        SymmetryKind.SR: ["R"],
        SymmetryKind.AE: ["S"],
        SymmetryKind.COMBINED: ["R", "S"],
    }[spec.kind]
    bad: dict[tuple[int, ...], complex] = {}
    for which in checks:
        resid = _act_zrep(hz, which) + hz
        for exps, coeff in resid.terms.items():
            if abs(coeff) > tol * scale:
                bad[exps] = coeff
    return sorted(bad.items())


# -- decomposition into invariant generators ----------------------------------

# intermediate variable order (N, delta, C, D)
_NV, _DLV, _CV, _DV = (MultiPoly.variable(4, i) for i in range(4))
_A_OF = 0.5 * (_NV + _DLV)
_B_OF = 0.5 * (_NV - _DLV)
_M_OF = 0.5 * (_CV + 1j * _DV)
_MB_OF = 0.5 * (_CV - 1j * _DV)


def _to_ncd_delta(p: MultiPoly, tol: float = 1e-10) -> MultiPoly:
    """Rewrite a circle-invariant z-polynomial over (N, delta, C, D).

    Each invariant monomial factors as M^k A^b B^d (k = charge of z1 minus
    z1bar); substituting A = (N+delta)/2, B = (N-delta)/2, M = (C+iD)/2 gives
    one canonical representative.
    """
    scale = max(p.max_coeff(), 1.0)
    out = MultiPoly.zero(4)
    for (a, b, c, d), coeff in p.terms.items():
        k = a - b
        if k != c - d:
            if abs(coeff) > tol * scale:
                raise ResidueNonzero("polynomial is not circle-invariant")
            continue
        if k >= 0:
            term = _M_OF**k * _A_OF**b * _B_OF**d
        else:
            term = _MB_OF ** (-k) * _A_OF**a * _B_OF**c
        out = out + coeff * term
    return out


def _reduce_delta_powers(delta_exp: int, base: MultiPoly) -> MultiPoly:
    """Multiply base by (N^2 - C^2 - D^2)^j for delta^(2j), in (N, C, D, tau) vars."""
    n, c, d = (MultiPoly.variable(4, i) for i in range(3))
    cone = n**2 - c**2 - d**2
    return base * cone ** (delta_exp // 2)


@dataclass
class ReducedHamiltonian:
    """Coefficient data of the reduced Hamiltonian.

    For kinds SR/COMBINED, h = delta * g with g over (N, C, D, tau); for kind
    AE, h = delta * g1 + D * g2 with g1, g2 over (N, C, E, tau), E = D^2.
    Leading Taylor coefficients are exposed under their conventional names.
    """

    kind: SymmetryKind
    g: MultiPoly | None = None
    g1: MultiPoly | None = None
    g2: MultiPoly | None = None

    def __post_init__(self):
        if self.kind is SymmetryKind.AE:
            if self.g1 is None or self.g2 is None:
                raise ValueError("AE data needs g1 and g2")
        elif self.g is None:
            raise ValueError(f"{self.kind} data needs g")

    # -- leading coefficients ------------------------------------------------

    def _coeff(self, poly: MultiPoly, exps) -> float:
        return float(poly.coeff(exps).real)

    @property
    def n(self) -> float:
        return self._coeff(self.g, (1, 0, 0, 0))

    @property
    def c(self) -> float:
        return self._coeff(self.g, (0, 1, 0, 0))

    @property
    def d(self) -> float:
        return self._coeff(self.g, (0, 0, 1, 0))

    @property
    def a1(self) -> float:
        return self._coeff(self.g1, (1, 0, 0, 0))

    @property
    def c1(self) -> float:
        return self._coeff(self.g1, (0, 1, 0, 0))

    @property
    def d1(self) -> float:
        return self._coeff(self.g1, (0, 0, 1, 0))

    @property
    def e1(self) -> float:
        return self._coeff(self.g1, (2, 0, 0, 0))

    @property
    def f1(self) -> float:
        return self._coeff(self.g1, (1, 1, 0, 0))

    @property
    def g1coef(self) -> float:
        return self._coeff(self.g1, (1, 0, 0, 1))

    @property
    def b2(self) -> float:
        return self._coeff(self.g2, (0, 0, 0, 1))

    @property
    def a2(self) -> float:
        return self._coeff(self.g2, (1, 0, 0, 0))

    @property
    def c2(self) -> float:
        return self._coeff(self.g2, (0, 1, 0, 0))

    @property
    def d2(self) -> float:
        return self._coeff(self.g2, (0, 0, 1, 0))

    @property
    def e2(self) -> float:
        return self._coeff(self.g2, (2, 0, 0, 0))

    @property
    def f2(self) -> float:
        return self._coeff(self.g2, (1, 1, 0, 0))

    @property
    def g2coef(self) -> float:
        return self._coeff(self.g2, (1, 0, 0, 1))

    @property
    def has_tau(self) -> bool:
        polys = [self.g] if self.g is not None else [self.g1, self.g2]
        return any(e[3] > 0 for p in polys for e in p.terms)

    # -- evaluation ------------------------------------------------------------

    def eval_g(self, N: float, C: float, D: float, tau: float) -> float:
        if self.kind is SymmetryKind.AE:
            raise ValueError("eval_g is for SR/COMBINED data")
        return self.g.evaluate([N, C, D, tau]).real

    def eval_g12(self, N: float, C: float, D: float, tau: float) -> tuple[float, float]:
        if self.kind is not SymmetryKind.AE:
            raise ValueError("eval_g12 is for AE data")
        e = D * D
        return (
            self.g1.evaluate([N, C, e, tau]).real,
            self.g2.evaluate([N, C, e, tau]).real,
        )


def decompose(p: MultiPoly, kind: SymmetryKind, tol: float = 1e-10) -> ReducedHamiltonian:
    """Rewrite an averaged anti-invariant z-polynomial in the module generators.

    SR/COMBINED: p = delta * g(N, C, D); AE: p = delta * g1 + D * g2 with g1,
    g2 in (N, C, D^2).  Raises ResidueNonzero when terms of the wrong parity
    survive (symmetry violation upstream).  Round trip is exact: expanding
    the result reproduces p coefficient for coefficient.
    """
    scale = max(p.max_coeff(), 1.0)
    phat = _to_ncd_delta(p, tol=tol)

    def residue(parts):
        bad = [c for c in parts if abs(c) > tol * scale]
        if bad:
            raise ResidueNonzero(
                f"{len(bad)} coefficients (max {max(abs(c) for c in bad):.3e}) "
                "violate the declared parity"
            )

    if kind in (SymmetryKind.SR, SymmetryKind.COMBINED):
        residue([c for (en, ed, ec, edd), c in phat.terms.items() if ed % 2 == 0])
        if kind is SymmetryKind.COMBINED:
            residue([c for (en, ed, ec, edd), c in phat.terms.items() if edd % 2 == 1])
        g = MultiPoly.zero(4)
        for (en, ed, ec, edd), coeff in phat.terms.items():
            if ed % 2 == 0:
                continue
            mono = MultiPoly.monomial(4, (en, ec, edd, 0), coeff)
            g = g + _reduce_delta_powers(ed - 1, mono)
        return ReducedHamiltonian(kind=kind, g=g.chop(1e-15 * scale))

    # AE: split by (delta, D) parity
    residue([c for (en, ed, ec, edd), c in phat.terms.items() if (ed + edd) % 2 == 0])
    g1 = MultiPoly.zero(4)
    g2 = MultiPoly.zero(4)
    for (en, ed, ec, edd), coeff in phat.terms.items():
        if ed % 2 == 1 and edd % 2 == 0:
            # delta^(2j+1) D^(2l): cone^j E^l into g1
            mono = MultiPoly.monomial(4, (en, ec, 0, 0), coeff)
            term = _reduce_delta_powers(ed - 1, mono)
            g1 = g1 + _replace_d2_by_e(term, extra_e=edd // 2)
        elif ed % 2 == 0 and edd % 2 == 1:
            mono = MultiPoly.monomial(4, (en, ec, 0, 0), coeff)
            term = _reduce_delta_powers(ed, mono)
            g2 = g2 + _replace_d2_by_e(term, extra_e=(edd - 1) // 2)
    return ReducedHamiltonian(
        kind=kind, g1=g1.chop(1e-15 * scale), g2=g2.chop(1e-15 * scale)
    )


def _replace_d2_by_e(p: MultiPoly, extra_e: int = 0) -> MultiPoly:
    """Map a (N, C, D, tau) polynomial even in D to (N, C, E, tau), E = D^2."""
    terms = {}
    for (en, ec, ed, et), coeff in p.terms.items():
        if ed % 2 != 0:
            raise ResidueNonzero("odd D power where an even one was required")
        key = (en, ec, ed // 2 + extra_e, et)
        terms[key] = terms.get(key, 0.0) + coeff
    return MultiPoly(4, terms)


def expand_reduced(rh: ReducedHamiltonian) -> MultiPoly:
    """h in the z-representation: delta*g, or delta*g1 + D*g2 (tau set to 0)."""
    if rh.kind is SymmetryKind.AE:
        g1 = rh.g1.fix_var(3, 0.0)
        g2 = rh.g2.fix_var(3, 0.0)
        e_z = D_Z * D_Z
        return DELTA_Z * g1.compose([N_Z, C_Z, e_z]) + D_Z * g2.compose([N_Z, C_Z, e_z])
    g = rh.g.fix_var(3, 0.0)
    return DELTA_Z * g.compose([N_Z, C_Z, D_Z])


def attach_tau(rh: ReducedHamiltonian, b2: float | None = None) -> ReducedHamiltonian:
    """Add the structural tau/2 term (and, in direct mode, b2*tau to g2)."""
    if rh.has_tau:
        raise ValueError("reduced data already carries tau terms")
    tau = MultiPoly.monomial(4, (0, 0, 0, 1), 0.5)
    if rh.kind is SymmetryKind.AE:
        g2 = rh.g2
        if b2 is not None and b2 != 0.0:
            g2 = g2 + MultiPoly.monomial(4, (0, 0, 0, 1), b2)
        return ReducedHamiltonian(kind=rh.kind, g1=rh.g1 + tau, g2=g2)
    if b2 is not None:
        raise ValueError("b2 applies only to the AE pair")
    return ReducedHamiltonian(kind=rh.kind, g=rh.g + tau)


def reduce_hamiltonian(spec: HamiltonianSpec) -> ReducedHamiltonian:
    """Full pipeline: validate, average, decompose, calibrate, attach tau.

    The averaged part enters negated: periodic orbits of period 2pi/(1+tau)
    are critical points of H - (1+tau)*delta/2, so with h = tau*delta/2 - avg
    the reduced g carries +tau/2 and the flow's measured periods match
    2pi/(1+tau) (this fixes the sign left free by the algebraic split).
    """
    spec.validate()
    hz = spec.zrep()
    higher = MultiPoly(4, {e: c for e, c in hz.terms.items() if sum(e) > 2})
    avg = s1_average(higher)
    rh = decompose(avg, spec.kind)
    if rh.kind is SymmetryKind.AE:
        flipped = ReducedHamiltonian(kind=rh.kind, g1=-rh.g1, g2=-rh.g2)
    else:
        flipped = ReducedHamiltonian(kind=rh.kind, g=-rh.g)
    return attach_tau(flipped)


# -- synthetic Hamiltonians with prescribed reduced coefficients ---------------


def _spec_from_zrep(kind: SymmetryKind, hz: MultiPoly, dmax: int = 4) -> HamiltonianSpec:
    hr = zrep_to_real(hz).chop(1e-14 * max(hz.max_coeff(), 1.0))
    if any(abs(c.imag) > 0 for c in hr.terms.values()):
        raise NormalFormError("realization produced non-real coefficients")
    return HamiltonianSpec(kind=kind, H=hr, dmax=dmax)


def realize_sr(n: float, c: float, d: float) -> HamiltonianSpec:
    """Quartic swap-anti-invariant Hamiltonian whose reduced g is exactly
    tau/2 + n*N + c*C + d*D (resonant monomials only, so averaging is exact)."""
    hz = H2_Z - (n * DELTA_Z * N_Z + c * DELTA_Z * C_Z + d * DELTA_Z * D_Z)
    return _spec_from_zrep(SymmetryKind.SR, hz)


def realize_ae(a1: float, c1: float, a2: float, c2: float) -> HamiltonianSpec:
    """Quartic conjugate-swap-anti-invariant Hamiltonian with reduced pair
    g1 = tau/2 + a1*N + c1*C, g2 = a2*N + c2*C (b2 is a tau coefficient and
    cannot arise from an autonomous quartic; derived mode has b2 = 0)."""
    hz = H2_Z - (a1 * DELTA_Z * N_Z + c1 * DELTA_Z * C_Z + a2 * D_Z * N_Z + c2 * D_Z * C_Z)
    return _spec_from_zrep(SymmetryKind.AE, hz)


def realize_combined(n: float, c: float) -> HamiltonianSpec:
    """Quartic Hamiltonian anti-invariant under both involutions; reduced
    g = tau/2 + n*N + c*C (even in D)."""
    hz = H2_Z - (n * DELTA_Z * N_Z + c * DELTA_Z * C_Z)
    return _spec_from_zrep(SymmetryKind.COMBINED, hz)


def reduced_from_coefficients(kind: SymmetryKind, **coeffs: float) -> ReducedHamiltonian:
    """Reduced data entered directly by coefficient name (paper-style input).

    SR/COMBINED names: n, c, d; AE names: a1, c1, d1, e1, f1, g1, b2, a2, c2,
    d2, e2, f2, g2.  The tau/2 structural term is always included.
    """
    if kind is SymmetryKind.AE:
        g1 = (
            MultiPoly.monomial(4, (0, 0, 0, 1), 0.5)
            + MultiPoly.monomial(4, (1, 0, 0, 0), coeffs.get("a1", 0.0))
            + MultiPoly.monomial(4, (0, 1, 0, 0), coeffs.get("c1", 0.0))
            + MultiPoly.monomial(4, (0, 0, 1, 0), coeffs.get("d1", 0.0))
            + MultiPoly.monomial(4, (2, 0, 0, 0), coeffs.get("e1", 0.0))
            + MultiPoly.monomial(4, (1, 1, 0, 0), coeffs.get("f1", 0.0))
            + MultiPoly.monomial(4, (1, 0, 0, 1), coeffs.get("g1", 0.0))
        )
        g2 = (
            MultiPoly.monomial(4, (0, 0, 0, 1), coeffs.get("b2", 0.0))
            + MultiPoly.monomial(4, (1, 0, 0, 0), coeffs.get("a2", 0.0))
            + MultiPoly.monomial(4, (0, 1, 0, 0), coeffs.get("c2", 0.0))
            + MultiPoly.monomial(4, (0, 0, 1, 0), coeffs.get("d2", 0.0))
            + MultiPoly.monomial(4, (2, 0, 0, 0), coeffs.get("e2", 0.0))
            + MultiPoly.monomial(4, (1, 1, 0, 0), coeffs.get("f2", 0.0))
            + MultiPoly.monomial(4, (1, 0, 0, 1), coeffs.get("g2", 0.0))
        )
        return ReducedHamiltonian(kind=kind, g1=g1, g2=g2)
    g = (
        MultiPoly.monomial(4, (0, 0, 0, 1), 0.5)
        + MultiPoly.monomial(4, (1, 0, 0, 0), coeffs.get("n", 0.0))
        + MultiPoly.monomial(4, (0, 1, 0, 0), coeffs.get("c", 0.0))
        + MultiPoly.monomial(4, (0, 0, 1, 0), coeffs.get("d", 0.0))
    )
    if kind is SymmetryKind.COMBINED and coeffs.get("d", 0.0) != 0.0:
        raise ValueError("a combined-kind g cannot carry an odd D coefficient")
    return ReducedHamiltonian(kind=kind, g=g)
