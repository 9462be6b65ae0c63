"""Weyl translations on H_N and the scar of the delta state on X_0 = {q = 0}.

Convention: ``(T(n) psi)(Q) = e(n_q . Q / N + n_p . n_q / (2N)) psi(Q + n_p)``,
with the phase evaluated exactly as a 2N-th root of unity. Then
``T(n) T(m) = e((n_p . m_q - n_q . m_p) / (2N)) T(n + m)``.
"""

from __future__ import annotations

import csv
import io
from typing import NamedTuple

import numpy as np

from torus_scar._phase import e_ratio
from torus_scar.errors import AliasingError, NormalizationError
from torus_scar.propagator import QuantumState, inner

NORM_TOL = 1e-10


class WeylIndex(NamedTuple):
    n_p: tuple[int, int]
    n_q: tuple[int, int]

    @classmethod
    def of(cls, p1, p2, q1, q2) -> "WeylIndex":
        return cls((int(p1), int(p2)), (int(q1), int(q2)))

    def __add__(self, other):
        return WeylIndex(
            (self.n_p[0] + other.n_p[0], self.n_p[1] + other.n_p[1]),
            (self.n_q[0] + other.n_q[0], self.n_q[1] + other.n_q[1]),
        )

    @property
    def flat(self) -> tuple[int, int, int, int]:
        return (*self.n_p, *self.n_q)


def weyl_apply(n: WeylIndex, psi: QuantumState) -> QuantumState:
    N = psi.N
    (p1, p2), (q1, q2) = n
    x1, x2 = np.divmod(np.arange(N * N, dtype=np.int64), N)
    src = ((x1 + p1) % N) * N + (x2 + p2) % N
    k = 2 * (q1 * x1 + q2 * x2) + (p1 * q1 + p2 * q2)
    return QuantumState(N, e_ratio(k, 2 * N) * psi.amplitudes[src])


def expectation(psi: QuantumState, n: WeylIndex) -> complex:
    """``<T(n) psi, psi>`` for a unit-norm state."""
    nrm = psi.norm()
    if abs(nrm - 1.0) > NORM_TOL:
        raise NormalizationError(f"state norm is {nrm:.12g}, expected 1")
    return inner(weyl_apply(n, psi), psi)


def delta_state(N: int) -> QuantumState:
    amps = np.zeros(N * N, dtype=np.complex128)
    amps[0] = 1.0
    return QuantumState(N, amps)


def uniform_state(N: int) -> QuantumState:
    return QuantumState(N, np.full(N * N, 1.0 / N, dtype=np.complex128))


def x0_moment(n: WeylIndex) -> float:
    """Integral of ``e(n_p . p + n_q . q)`` against Lebesgue measure on {q = 0}."""
    return 1.0 if n.n_p == (0, 0) else 0.0


def torus_moment(n: WeylIndex) -> float:
    return 1.0 if n.n_p == (0, 0) and n.n_q == (0, 0) else 0.0


def frequencies(max_abs: int) -> list[WeylIndex]:
    """All n in Z^4 with ``|n|_inf <= max_abs``, lexicographic."""
    r = range(-max_abs, max_abs + 1)
    return [WeylIndex.of(a, b, c, d) for a in r for b in r for c in r for d in r]


class ScarRow(NamedTuple):
    n: WeylIndex
    quantum: complex
    x0: float
    t4: float

    def to_dict(self) -> dict:
        return {
            "n_p": list(self.n.n_p),
            "n_q": list(self.n.n_q),
            "re_quantum": self.quantum.real,
            "im_quantum": self.quantum.imag,
            "x0_moment": self.x0,
            "t4_moment": self.t4,
        }


def scar_profile(psi: QuantumState, n_list) -> list[ScarRow]:
    N = psi.N
    rows = []
    for n in n_list:
        n = WeylIndex(tuple(n[0]), tuple(n[1]))
        if max(abs(v) for v in n.flat) >= N:
            raise AliasingError(f"frequency {n.flat} has a component >= N={N}")
        rows.append(ScarRow(n, expectation(psi, n), x0_moment(n), torus_moment(n)))
    return rows


def scar_csv(rows: list[ScarRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n_p1", "n_p2", "n_q1", "n_q2", "re_quantum", "im_quantum", "x0_moment", "t4_moment"])
    for r in rows:
        w.writerow([*r.n.flat, repr(r.quantum.real), repr(r.quantum.imag), r.x0, r.t4])
    return buf.getvalue()


def max_deviation(rows: list[ScarRow], column: str) -> float:
    """``max |quantum - column|`` over the table (column is ``"x0"`` or ``"t4"``)."""
    return max(abs(r.quantum - getattr(r, column)) for r in rows) if rows else 0.0
