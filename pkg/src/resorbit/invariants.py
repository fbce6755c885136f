"""Invariant coordinates and involution actions on the resonant kernel C^2.

The reduced phase space is a pair (z1, z2) of complex coordinates.  The circle
action rotates the pair as (e^{i*theta} z1, e^{-i*theta} z2); the two
involutions are the swap R(z1, z2) = (z2, z1) and the conjugate swap
S(z1, z2) = (conj z2, conj z1).  The ring of circle invariants is generated by

    N = |z1|^2 + |z2|^2,   C + i D = 2 z1 z2,   delta = |z1|^2 - |z2|^2,

bound by the cone identity delta^2 = N^2 - C^2 - D^2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class SymmetryKind(enum.Enum):
    """Which involutions act: swap only (SR), conjugate swap only (AE), or both."""

    SR = "SR"
    AE = "AE"
    COMBINED = "COMBINED"


class ComplexPair(NamedTuple):
    z1: complex
    z2: complex


@dataclass(frozen=True)
class InvariantPoint:
    """Circle-invariant coordinates of a kernel point, with the A, B intermediates."""

    N: float
    C: float
    D: float
    delta: float
    A: float
    B: float

    def cone_residual(self) -> float:
        """delta^2 - (N^2 - C^2 - D^2); zero up to rounding for any genuine point."""
        return self.delta**2 - (self.N**2 - self.C**2 - self.D**2)

    def check_cone(self, rel_tol: float = 1e-10, abs_floor: float = 1e-14) -> bool:
        # The identity is exact algebra; scale by N^2 so failures flag bugs,
        # not conditioning.
        return abs(self.cone_residual()) <= max(rel_tol * self.N**2, abs_floor)


def to_invariants(z: ComplexPair) -> InvariantPoint:
    a = abs(z.z1) ** 2
    b = abs(z.z2) ** 2
    m = 2.0 * z.z1 * z.z2
    return InvariantPoint(N=a + b, C=m.real, D=m.imag, delta=a - b, A=a, B=b)


def apply_R(z: ComplexPair) -> ComplexPair:
    """Swap involution; negates delta, fixes N, C, D."""
    return ComplexPair(z.z2, z.z1)


def apply_S(z: ComplexPair) -> ComplexPair:
    """Conjugate-swap involution; negates delta and D, fixes N, C."""
    return ComplexPair(z.z2.conjugate(), z.z1.conjugate())


def apply_circle(theta: float, z: ComplexPair) -> ComplexPair:
    w = complex(math.cos(theta), math.sin(theta))
    return ComplexPair(w * z.z1, z.z2 / w)


_FIXED_SPACE_TAGS = ("R", "S", "S_pi", "RS")


def fixed_space_distance(z: ComplexPair, which: str) -> float:
    """Euclidean distance from z to the named fixed subspace.

    Fix R = {(z, z)}, Fix S = {(z, conj z)}, Fix(S, pi) = {(z, -conj z)}
    (the conjugate swap composed with the theta = pi circle element) and
    Fix RS = R^2 (both components real).
    """
    if which == "R":
        return abs(z.z1 - z.z2) / math.sqrt(2.0)
    if which == "S":
        return abs(z.z2 - z.z1.conjugate()) / math.sqrt(2.0)
    if which == "S_pi":
        return abs(z.z2 + z.z1.conjugate()) / math.sqrt(2.0)
    if which == "RS":
        return math.hypot(z.z1.imag, z.z2.imag)
    raise ValueError(f"unknown fixed-space tag {which!r}; expected one of {_FIXED_SPACE_TAGS}")


def fixed_space_membership(z: ComplexPair, which: str, tol: float) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return fixed_space_distance(z, which) < tol


def pair_from_invariants(
    N: float, C: float, D: float, delta: float, phase: float = 0.0
) -> ComplexPair:
    """One kernel point with the given invariants (the circle orbit is free).

    Requires |delta| <= N up to rounding; z1 gets the phase, z2 is then fixed
    by C + iD = 2 z1 z2 (or by |z2| alone when z1 = 0).
    """
    a = max((N + delta) / 2.0, 0.0)
    b = max((N - delta) / 2.0, 0.0)
    z1 = math.sqrt(a) * complex(math.cos(phase), math.sin(phase))
    if a > 0:
        z2 = complex(C, D) / (2.0 * z1)
    else:
        z2 = math.sqrt(b) * complex(math.cos(phase), -math.sin(phase))
    return ComplexPair(z1, z2)


# Real-coordinate forms on R^4 with ordering (x1, y1, x2, y2), z_j = x_j + i y_j.

I2 = np.eye(2)
J2 = np.array([[0.0, -1.0], [1.0, 0.0]])
S2 = np.array([[1.0, 0.0], [0.0, -1.0]])

J_MAT = np.block([[J2, np.zeros((2, 2))], [np.zeros((2, 2)), J2]])
L_MAT = np.block([[J2, np.zeros((2, 2))], [np.zeros((2, 2)), -J2]])
R_MAT = np.block([[np.zeros((2, 2)), I2], [I2, np.zeros((2, 2))]])
S_MAT = np.block([[np.zeros((2, 2)), S2], [S2, np.zeros((2, 2))]])
RS_MAT = R_MAT @ S_MAT


def pair_to_real(z: ComplexPair) -> np.ndarray:
    return np.array([z.z1.real, z.z1.imag, z.z2.real, z.z2.imag])


def real_to_pair(x: np.ndarray) -> ComplexPair:
    return ComplexPair(complex(x[0], x[1]), complex(x[2], x[3]))


def invariants_of_real(x: np.ndarray) -> InvariantPoint:
    return to_invariants(real_to_pair(np.asarray(x, dtype=float)))
