"""Degeneracy analysis: resonance certificates and simplicity sweeps.

A coincidence ``lambda_{xi,j} = lambda_{eta,k}`` between distinct orbits forces

    T_eta * sum_n g(B^n xi / N) - T_xi * sum_m g(B^m eta / N)

to be rational. Multiplying the eigenphase identity through by ``T_xi T_eta``
shows it is in fact an integer multiple of ``1/N``, so certificates search for
the nearest rational with denominator at most N.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from torus_scar import _core
from torus_scar.errors import DuplicatePointError, IdenticalOrbitError, TorusScarError
from torus_scar.lattice import CatMatrix, Orbit, orbit_decompose
from torus_scar.observable import TrigPoly, _canonical, evaluate, orbit_phase_sum
from torus_scar.spectrum import DEGENERACY_TOL, SpectrumReport, full_spectrum


@dataclass(frozen=True)
class ResonanceCertificate:
    N: int
    points: list[tuple[int, int]]
    """Numerators of the rational points; each point is ``(x1/N, x2/N)``."""
    weights: list[int]
    value: float
    nearest: Fraction
    distance: float
    orbits: tuple[tuple[int, int], tuple[int, int]]

    @property
    def q_max(self) -> int:
        return self.N

    def to_dict(self) -> dict:
        return {
            "orbits": [list(r) for r in self.orbits],
            "points": [{"num": [a, b], "den": self.N} for a, b in self.points],
            "weights": self.weights,
            "value": self.value,
            "nearest_rational": {"num": self.nearest.numerator, "den": self.nearest.denominator},
            "distance": self.distance,
        }


def resonance_certificate(g: TrigPoly, orbit_a: Orbit, orbit_b: Orbit, N: int) -> ResonanceCertificate:
    if orbit_a.N != N or orbit_b.N != N:
        raise TorusScarError("orbits must live on the given N")
    if orbit_a.rep == orbit_b.rep:
        raise IdenticalOrbitError(f"both orbits are {orbit_a!r}")
    Ta, Tb = orbit_a.period, orbit_b.period
    pts = [tuple(map(int, p)) for p in orbit_a.points] + [tuple(map(int, p)) for p in orbit_b.points]
    if len(set(pts)) != len(pts):
        raise AssertionError("orbits overlap; not distinct cycles")
    weights = [Tb] * Ta + [-Ta] * Tb
    ga = g.values_at_lattice_points(orbit_a.points, N)
    gb = g.values_at_lattice_points(orbit_b.points, N)
    value = math.fsum([Tb * v for v in ga.tolist()] + [-Ta * v for v in gb.tolist()])
    nearest = Fraction(value).limit_denominator(N)
    return ResonanceCertificate(
        N=N,
        points=pts,
        weights=weights,
        value=value,
        nearest=nearest,
        distance=abs(value - float(nearest)),
        orbits=(orbit_a.rep, orbit_b.rep),
    )


def _as_torus_fraction(x) -> tuple[Fraction, Fraction]:
    fx = [Fraction(v) for v in x]
    return tuple(f - math.floor(f) for f in fx)


def membership_check(g: TrigPoly, y, x, z, tol: float = DEGENERACY_TOL) -> bool:
    """True iff ``|sum_j y_j g(x_j) - z| > tol``, i.e. g avoids this constraint."""
    if len(y) != len(x):
        raise TorusScarError("y and x must have the same length")
    reduced = [_as_torus_fraction(p) for p in x]
    if len(set(reduced)) != len(reduced):
        raise DuplicatePointError("points must be pairwise distinct on the torus")
    if not reduced:
        return abs(float(z)) > tol
    pts = np.array([[float(a), float(b)] for a, b in reduced])
    vals = np.atleast_1d(evaluate(g, pts))
    total = math.fsum(int(w) * v for w, v in zip(y, vals.tolist()))
    return abs(total - float(z)) > tol


class SweepRow(NamedTuple):
    N: int
    min_gap: float
    simple: bool
    clusters: int

    def to_dict(self) -> dict:
        return self._asdict()


def simplicity_sweep(g: TrigPoly, B: CatMatrix, N_range, tol: float = DEGENERACY_TOL,
                     workers: int | None = None) -> list[SweepRow]:
    Ns = list(N_range)
    if not Ns:
        raise TorusScarError("empty N range")

    def one(N):
        rep = full_spectrum(g, B, N, tol)
        return SweepRow(N, rep.min_gap, rep.is_simple, len(rep.clusters))

    workers = workers or min(_core.max_workers(), len(Ns))
    if workers <= 1:
        return [one(N) for N in Ns]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, Ns))


def degeneracy_explain(g: TrigPoly, report: SpectrumReport) -> list[ResonanceCertificate]:
    """One certificate per pair of distinct orbits that share a cluster."""
    seen = set()
    certs = []
    for cluster in report.cross_orbit_clusters():
        orbits = {}
        for i in cluster:
            o = report.pairs[i].orbit
            orbits.setdefault(o.rep, o)
        reps = sorted(orbits)
        for a in range(len(reps)):
            for b in range(a + 1, len(reps)):
                key = (reps[a], reps[b])
                if key in seen:
                    continue
                seen.add(key)
                certs.append(resonance_certificate(g, orbits[reps[a]], orbits[reps[b]], report.N))
    return certs


def force_collision(g: TrigPoly, B: CatMatrix, N: int, orbit_a: Orbit, orbit_b: Orbit,
                    mode=None, max_mode_degree: int = 2):
    """Retune one cosine mode of g so that two orbits share an eigenvalue.

    Adds ``t cos(2 pi m . x)`` to g, with t the smallest solution of the single
    linear equation that puts ``theta_a(j) - theta_b(k)`` on an integer.
    Returns ``(g_new, j, k)``.
    """
    if orbit_a.rep == orbit_b.rep:
        raise IdenticalOrbitError("need two distinct orbits")
    Ta, Tb = orbit_a.period, orbit_b.period
    Sa, Sb = orbit_phase_sum(g, orbit_a), orbit_phase_sum(g, orbit_b)

    def cos_sum(orbit, m):
        k = orbit.points @ np.array(m)
        return float(np.cos(2 * np.pi * np.mod(k, N) / N).sum())

    if mode is None:
        candidates = [
            (m1, m2)
            for m1 in range(0, max_mode_degree + 1)
            for m2 in range(-max_mode_degree, max_mode_degree + 1)
            if _canonical((m1, m2)) == (m1, m2) and (m1, m2) != (0, 0)
        ]
        mode = max(candidates, key=lambda m: abs(cos_sum(orbit_a, m) / Ta - cos_sum(orbit_b, m) / Tb))
    mode = _canonical((int(mode[0]), int(mode[1])))
    slope = N * (cos_sum(orbit_a, mode) / Ta - cos_sum(orbit_b, mode) / Tb)
    if abs(slope) < 1e-9:
        raise TorusScarError(f"mode {mode} cannot separate these orbits")
    base = N * (Sa / Ta - Sb / Tb)
    best = None
    for j in range(1, Ta + 1):
        for k in range(1, Tb + 1):
            off = base + j / Ta - k / Tb
            t = (round(off) - off) / slope
            if best is None or abs(t) < abs(best[0]):
                best = (t, j, k)
    t, j, k = best
    modes = dict(g.half)
    modes[mode] = modes.get(mode, 0) + t / 2
    return TrigPoly(modes), j, k
