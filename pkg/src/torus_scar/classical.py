"""The classical perturbed cat map on T^4 and its structural checks.

Coordinates are ``(p1, p2, q1, q2)``. The map is

    (p, q) -> (B^t p + grad g(B^-1 q),  B^-1 q)   mod 1.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from torus_scar.lattice import CatMatrix
from torus_scar.observable import TrigPoly, grad

OMEGA = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])


class PhasePoint(NamedTuple):
    p: tuple[float, float]
    q: tuple[float, float]

    @classmethod
    def make(cls, p, q) -> "PhasePoint":
        """Reduce all four coordinates into [0, 1)."""
        p = np.mod(np.asarray(p, dtype=np.float64), 1.0)
        q = np.mod(np.asarray(q, dtype=np.float64), 1.0)
        p[p >= 1.0] = 0.0
        q[q >= 1.0] = 0.0
        return cls((float(p[0]), float(p[1])), (float(q[0]), float(q[1])))

    def as_array(self) -> np.ndarray:
        return np.array([*self.p, *self.q], dtype=np.float64)


def _lift(B: CatMatrix, g: TrigPoly, x: np.ndarray) -> np.ndarray:
    """Phi_g on R^4 (no reduction mod 1); used for differentiation."""
    Bt = B.transpose().as_array()
    Binv = B.inverse().as_array()
    q_new = Binv @ x[2:]
    p_new = Bt @ x[:2] + grad(g, q_new)
    return np.concatenate([p_new, q_new])


def phi_step(B: CatMatrix, g: TrigPoly, x: PhasePoint) -> PhasePoint:
    y = _lift(B, g, x.as_array())
    return PhasePoint.make(y[:2], y[2:])


def phi_inverse(B: CatMatrix, g: TrigPoly, x: PhasePoint) -> PhasePoint:
    """``(p, q) -> (B^-t (p - grad g(q)), B q)`` mod 1."""
    arr = x.as_array()
    p, q = arr[:2], arr[2:]
    Binv_t = B.inverse().transpose().as_array()
    return PhasePoint.make(Binv_t @ (p - grad(g, q)), B.as_array() @ q)


def jacobian_fd(B: CatMatrix, g: TrigPoly, x: PhasePoint, h: float) -> np.ndarray:
    """4x4 Jacobian of the lifted map by central differences with step h."""
    x0 = x.as_array()
    J = np.empty((4, 4))
    for k in range(4):
        dx = np.zeros(4)
        dx[k] = h
        J[:, k] = (_lift(B, g, x0 + dx) - _lift(B, g, x0 - dx)) / (2 * h)
    return J


def symplectic_defect(B: CatMatrix, g: TrigPoly, x: PhasePoint, h: float = 1e-4) -> float:
    """``max |J^t Omega J - Omega|`` for the finite-difference Jacobian J."""
    if h <= 0:
        raise ValueError("step h must be positive")
    J = jacobian_fd(B, g, x, h)
    return float(np.max(np.abs(J.T @ OMEGA @ J - OMEGA)))


def trajectory(B: CatMatrix, g: TrigPoly, x0: PhasePoint, steps: int) -> list[PhasePoint]:
    if steps < 0:
        raise ValueError("steps must be >= 0")
    out = [x0]
    for _ in range(steps):
        out.append(phi_step(B, g, out[-1]))
    return out
