"""Real trigonometric polynomials on the 2-torus: the perturbation g."""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from pathlib import Path

import numpy as np

from torus_scar._phase import e, e_ratio
from torus_scar.errors import SymmetryError, TorusScarError

MAX_DEGREE = 64
REAL_TOL = 1e-12


def _is_canonical(m):
    return m[0] > 0 or (m[0] == 0 and m[1] > 0)


def _canonical(m):
    return m if m == (0, 0) or _is_canonical(m) else (-m[0], -m[1])


class TrigPoly:
    """``g(x) = sum_m c_m e(m . x)`` with ``c_{-m} = conj(c_m)``.

    ``modes`` maps integer frequencies ``(m1, m2)`` to complex amplitudes.
    Either member of a ``+-m`` pair may be given; the mirror is implied. If both
    are given they must be conjugate.
    """

    def __init__(self, modes: Mapping | None = None, max_degree: int = MAX_DEGREE):
        half: dict[tuple[int, int], complex] = {}
        for m, c in (modes or {}).items():
            m = (int(m[0]), int(m[1]))
            c = complex(c)
            if max(abs(m[0]), abs(m[1])) > max_degree:
                raise TorusScarError(f"frequency {m} exceeds max_degree={max_degree}")
            key = _canonical(m)
            val = c if key == m else c.conjugate()
            if key == (0, 0) and abs(c.imag) > REAL_TOL * max(1.0, abs(c)):
                raise SymmetryError(f"constant term must be real, got {c}")
            if key in half:
                if abs(half[key] - val) > REAL_TOL * max(1.0, abs(val)):
                    raise SymmetryError(f"c{tuple(-x for x in m)} is not conj(c{m})")
                continue
            half[key] = complex(val.real, 0.0) if key == (0, 0) else val
        self.half = dict(sorted(half.items()))
        freqs, coeffs = [], []
        for m, c in self.half.items():
            if c == 0:
                continue
            freqs.append(m)
            coeffs.append(c)
            if m != (0, 0):
                freqs.append((-m[0], -m[1]))
                coeffs.append(c.conjugate())
        self._set_arrays(freqs, coeffs)

    def _set_arrays(self, freqs, coeffs):
        self.freqs = np.array(freqs, dtype=np.int64).reshape(-1, 2)
        self.coeffs = np.array(coeffs, dtype=np.complex128).reshape(-1)
        self.freqs.setflags(write=False)
        self.coeffs.setflags(write=False)

    @classmethod
    def _raw(cls, freqs, coeffs) -> "TrigPoly":
        """Unvalidated construction from full frequency/coefficient lists (testing aid)."""
        g = cls.__new__(cls)
        g.half = {}
        g._set_arrays(freqs, coeffs)
        return g

    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls({})

    @property
    def n_modes(self) -> int:
        """Number of nonzero Fourier coefficients, counting both members of each pair."""
        return len(self.coeffs)

    @property
    def amplitude(self) -> float:
        return float(np.abs(self.coeffs).max()) if len(self.coeffs) else 0.0

    @property
    def degree(self) -> int:
        return int(np.abs(self.freqs).max()) if len(self.freqs) else 0

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def _check_real(self, z):
        tol = REAL_TOL * max(1.0, float(np.abs(self.coeffs).sum()))
        if z.size and np.max(np.abs(z.imag)) >= tol:
            raise SymmetryError(f"imaginary residue {np.max(np.abs(z.imag)):.3g} exceeds {tol:.1g}")
        return z.real

    def __call__(self, x):
        return evaluate(self, x)

    # -- lattice evaluation ---------------------------------------------------

    def lattice_values(self, N: int) -> np.ndarray:
        """``g(Q/N)`` for every ``Q`` in (Z/NZ)^2, row-major, with exact integer phases."""
        x1, x2 = np.divmod(np.arange(N * N, dtype=np.int64), N)
        return self.values_at_lattice_points(np.stack([x1, x2], axis=1), N)

    def values_at_lattice_points(self, points, N: int) -> np.ndarray:
        pts = np.asarray(points, dtype=np.int64).reshape(-1, 2)
        if not len(self.coeffs):
            return np.zeros(len(pts))
        k = pts @ self.freqs.T  # (P, M) integer phases m.Q
        z = e_ratio(k, N) @ self.coeffs
        return self._check_real(z)

    # -- serialization ----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "modes": [
                {"m": [m[0], m[1]], "re": c.real, "im": c.imag}
                for m, c in self.half.items()
            ]
        }

    @classmethod
    def from_dict(cls, data: dict, max_degree: int = MAX_DEGREE) -> "TrigPoly":
        try:
            entries = data["modes"]
            modes: dict = {}
            for ent in entries:
                m = (int(ent["m"][0]), int(ent["m"][1]))
                c = complex(float(ent.get("re", 0.0)), float(ent.get("im", 0.0)))
                if m in modes:
                    raise TorusScarError(f"frequency {m} listed twice")
                modes[m] = c
        except (KeyError, TypeError, IndexError) as exc:
            raise TorusScarError(f"malformed trig polynomial: {exc}") from None
        return cls(modes, max_degree=max_degree)

    @classmethod
    def load(cls, path) -> "TrigPoly":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.half == other.half

    def __repr__(self):
        return f"TrigPoly(n_modes={self.n_modes}, degree={self.degree})"


def evaluate(g: TrigPoly, x) -> np.ndarray | float:
    """``g(x)`` for one point ``(x1, x2)`` or an array of shape ``(..., 2)``."""
    x = np.asarray(x, dtype=np.float64)
    if not len(g.coeffs):
        return 0.0 if x.ndim == 1 else np.zeros(x.shape[:-1])
    z = e(x @ g.freqs.T) @ g.coeffs
    out = g._check_real(np.atleast_1d(z))
    return float(out[0]) if x.ndim == 1 else out.reshape(x.shape[:-1])


def grad(g: TrigPoly, x) -> np.ndarray:
    """Gradient ``sum_m 2 pi i m c_m e(m . x)``; shape ``(2,)`` or ``(..., 2)``."""
    x = np.asarray(x, dtype=np.float64)
    if not len(g.coeffs):
        return np.zeros(x.shape)
    w = e(x @ g.freqs.T) * g.coeffs  # (..., M)
    z = 2j * np.pi * (w @ g.freqs)
    return g._check_real(z)


def hessian(g: TrigPoly, x) -> np.ndarray:
    """2x2 matrix of second derivatives at one point."""
    x = np.asarray(x, dtype=np.float64)
    if not len(g.coeffs):
        return np.zeros((2, 2))
    w = e(g.freqs @ x) * g.coeffs
    f = g.freqs.astype(np.float64)
    z = -(2 * np.pi) ** 2 * np.einsum("k,ki,kj->ij", w, f, f)
    return g._check_real(z)


def orbit_phase_sum(g: TrigPoly, orbit) -> float:
    """``sum_k g(B^k xi / N)`` over the orbit's points (exact lattice phases, fsum)."""
    vals = g.values_at_lattice_points(orbit.points, orbit.N)
    return math.fsum(vals.tolist())


def random_trig_poly(max_degree: int, amplitude: float, seed: int) -> TrigPoly:
    """Random real trig polynomial with zero mean.

    Real and imaginary parts of each ``c_m`` with ``0 < |m|_inf <= max_degree`` are
    uniform on ``[-amplitude, amplitude]``; only one member of each ``+-m`` pair is
    drawn, in lexicographic order, so the result depends only on the arguments.
    """
    if max_degree < 1:
        raise TorusScarError("max_degree must be >= 1")
    if amplitude < 0:
        raise TorusScarError("amplitude must be non-negative")
    rng = np.random.default_rng(seed)
    modes = {}
    for m1 in range(0, max_degree + 1):
        for m2 in range(-max_degree, max_degree + 1):
            if not _is_canonical((m1, m2)):
                continue
            re, im = rng.uniform(-amplitude, amplitude, size=2)
            if re or im:
                modes[(m1, m2)] = complex(re, im)
    return TrigPoly(modes, max_degree=max(max_degree, MAX_DEGREE))
