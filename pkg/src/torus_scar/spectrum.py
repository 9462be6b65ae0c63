"""Closed-form spectrum of U_N via B-orbit decomposition.

For an orbit of period T with phase sum S = sum_k g(B^k xi / N) the eigenphases
are ``frac(N S / T + j / T)`` for ``j = 1..T``. The matching eigenfunction lives
on the orbit with ``psi(B^k xi) = lambda^k e(-N sum_{i<k} g(B^i xi / N))``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from torus_scar._phase import e, frac
from torus_scar.errors import DimensionError, TorusScarError
from torus_scar.lattice import CatMatrix, Orbit, orbit_decompose
from torus_scar.observable import TrigPoly, orbit_phase_sum
from torus_scar.propagator import PropagatorSpec, QuantumState, apply_U_many

DEGENERACY_TOL = 1e-9
CLOSURE_TOL = 1e-10


def _check_j(orbit: Orbit, j: int):
    if not 1 <= j <= orbit.period:
        raise TorusScarError(f"j={j} outside 1..{orbit.period}")


def _check_orbit_N(orbit: Orbit, N: int):
    if orbit.N != N:
        raise DimensionError(f"orbit lives on N={orbit.N}, asked for N={N}")


def _theta(N: int, S: float, T: int, j: int) -> float:
    return float(frac(frac(N * S / T) + j / T))


def eigenphase(g: TrigPoly, orbit: Orbit, j: int, N: int) -> float:
    """Eigenphase in [0, 1) of the pair (orbit, j); the eigenvalue is ``e(theta)``."""
    _check_orbit_N(orbit, N)
    _check_j(orbit, j)
    return _theta(N, orbit_phase_sum(g, orbit), orbit.period, j)


def _support_amplitudes(gv: np.ndarray, theta: float, N: int, orbit: Orbit) -> np.ndarray:
    # gv[i] = g(B^{i+1} xi / N); the last point is xi itself.
    T = len(gv)
    k = np.arange(1, T + 1)
    Ng = N * gv
    # N * sum_{i=0}^{k-1} g(B^i xi / N) for k = 1..T
    acc = Ng[-1] + np.concatenate([[0.0], np.cumsum(Ng[:-1])])
    arg = frac(k * theta) - frac(acc)
    amps = e(arg)
    closure = abs(amps[-1] - 1.0)
    if closure > CLOSURE_TOL:
        raise AssertionError(
            f"eigenfunction closure violated on {orbit!r}: |lambda^T e(-N S) - 1| = {closure:.3g}"
        )
    amps = amps / math.sqrt(T)
    # first nonzero entry in row-major order made real positive
    first = int(np.argmin(orbit.indices))
    ph = amps[first] / abs(amps[first])
    return amps * ph.conjugate()


def _expand(orbit: Orbit, support: np.ndarray) -> QuantumState:
    amps = np.zeros(orbit.N * orbit.N, dtype=np.complex128)
    amps[orbit.indices] = support
    return QuantumState(orbit.N, amps)


def eigenfunction(g: TrigPoly, orbit: Orbit, j: int, N: int) -> QuantumState:
    _check_orbit_N(orbit, N)
    _check_j(orbit, j)
    gv = g.values_at_lattice_points(orbit.points, N)
    theta = _theta(N, math.fsum(gv.tolist()), orbit.period, j)
    return _expand(orbit, _support_amplitudes(gv, theta, N, orbit))


@dataclass(frozen=True)
class EigenPair:
    orbit: Orbit
    j: int
    theta: float
    support: np.ndarray = field(repr=False)
    """Eigenvector amplitudes on ``orbit.indices`` (zero elsewhere)."""

    @property
    def eigenvalue(self) -> complex:
        return complex(e(self.theta))

    @property
    def eigenvector(self) -> QuantumState:
        return _expand(self.orbit, self.support)

    def summary(self) -> dict:
        return {"rep": list(self.orbit.rep), "T": self.orbit.period, "j": self.j, "theta": self.theta}


def circular_gaps(thetas: np.ndarray):
    """Sort phases; return ``(order, gaps)`` where ``gaps[i]`` separates sorted
    entries ``i`` and ``i+1`` and the last gap wraps round to the first."""
    order = np.argsort(thetas, kind="stable")
    s = thetas[order]
    if len(s) == 0:
        return order, np.empty(0)
    gaps = np.empty(len(s))
    gaps[:-1] = np.diff(s)
    gaps[-1] = s[0] + 1.0 - s[-1]
    return order, gaps


def min_circular_gap(thetas) -> float:
    """Smallest circular distance between distinct entries; 1.0 for a single phase."""
    thetas = np.asarray(thetas, dtype=np.float64)
    if len(thetas) < 2:
        return 1.0
    _, gaps = circular_gaps(thetas)
    return float(np.clip(gaps.min(), 0.0, 0.5))


def circular_clusters(thetas, tol: float) -> list[list[int]]:
    """Groups (size >= 2) of indices whose phases chain together within ``tol`` on the circle."""
    thetas = np.asarray(thetas, dtype=np.float64)
    n = len(thetas)
    if n < 2:
        return []
    order, gaps = circular_gaps(thetas)
    groups: list[list[int]] = [[int(order[0])]]
    for i in range(1, n):
        if gaps[i - 1] <= tol:
            groups[-1].append(int(order[i]))
        else:
            groups.append([int(order[i])])
    if len(groups) > 1 and gaps[-1] <= tol:
        groups[0] = groups.pop() + groups[0]
    return [sorted(gr) for gr in groups if len(gr) > 1]


@dataclass
class SpectrumReport:
    N: int
    pairs: list[EigenPair]
    min_gap: float
    clusters: list[list[int]]
    """Indices into ``pairs``; only groups with two or more members."""
    tol: float = DEGENERACY_TOL

    @property
    def thetas(self) -> np.ndarray:
        return np.array([p.theta for p in self.pairs])

    @property
    def is_simple(self) -> bool:
        return not self.clusters

    def cross_orbit_clusters(self) -> list[list[int]]:
        return [c for c in self.clusters if len({self.pairs[i].orbit.rep for i in c}) > 1]

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "eigs": [p.summary() for p in self.pairs],
            "min_gap": self.min_gap,
            "clusters": [
                [[*self.pairs[i].orbit.rep, self.pairs[i].j] for i in c] for c in self.clusters
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rep_x1", "rep_x2", "T", "j", "theta"])
        for p in self.pairs:
            w.writerow([*p.orbit.rep, p.orbit.period, p.j, repr(p.theta)])
        return buf.getvalue()


def full_spectrum(g: TrigPoly, B: CatMatrix, N: int, tol: float = DEGENERACY_TOL) -> SpectrumReport:
    """All N^2 eigenpairs, sorted by orbit representative then j."""
    orbits = orbit_decompose(B, N)
    gvals = g.lattice_values(N)
    pairs = []
    for orbit in orbits:
        gv = gvals[orbit.indices]
        S = math.fsum(gv.tolist())
        T = orbit.period
        for j in range(1, T + 1):
            theta = _theta(N, S, T, j)
            pairs.append(EigenPair(orbit, j, theta, _support_amplitudes(gv, theta, N, orbit)))
    thetas = np.array([p.theta for p in pairs])
    return SpectrumReport(N, pairs, min_circular_gap(thetas), circular_clusters(thetas, tol), tol)


class Verification(NamedTuple):
    ok: bool
    max_residual: float
    gram_error: float
    worst_pair: int


def eigenvector_matrix(report: SpectrumReport) -> sp.csc_matrix:
    """Sparse ``(N^2, N^2)`` matrix whose column k is the eigenvector of ``pairs[k]``."""
    rows, cols, vals = [], [], []
    for k, p in enumerate(report.pairs):
        rows.append(p.orbit.indices)
        cols.append(np.full(p.orbit.period, k))
        vals.append(p.support)
    n = report.N * report.N
    return sp.csc_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, len(report.pairs)),
    )


def verify_spectrum(report: SpectrumReport, g: TrigPoly, B: CatMatrix, N: int, tol: float = 1e-10) -> Verification:
    """Check ``|U psi - e(theta) psi| <= tol`` for every pair and ``|V^H V - I|_max <= tol``."""
    if report.N != N:
        raise DimensionError(f"report is for N={report.N}, asked for N={N}")
    spec = PropagatorSpec(B, g, N)
    V = eigenvector_matrix(report)
    lam = e(report.thetas)
    R = (apply_U_many(spec, V) - V @ sp.diags(lam)).tocsc()
    res = np.sqrt(np.asarray(abs(R).power(2).sum(axis=0)).ravel())
    gram = (V.conj().T @ V - sp.identity(V.shape[1], format="csc")).tocsc()
    gram_err = float(abs(gram).max()) if gram.nnz else 0.0
    max_res = float(res.max()) if len(res) else 0.0
    ok = len(report.pairs) == N * N and max_res <= tol and gram_err <= tol
    return Verification(ok, max_res, gram_err, int(np.argmax(res)) if len(res) else -1)
