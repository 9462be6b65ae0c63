"""The quantum propagator ``U_N`` on H_N = L^2((Z/NZ)^2).

``(U psi)(Q) = e(N g(Q/N)) psi(B Q mod N)``. States are stored as flat complex
vectors in row-major order ``x1 * N + x2``.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from torus_scar import _core
from torus_scar._phase import e
from torus_scar.errors import DimensionError, SizeLimitError, TorusScarError
from torus_scar.lattice import MAX_N, CatMatrix, check_modulus, lattice_permutation
from torus_scar.observable import TrigPoly

DENSE_LIMIT = 32


class QuantumState:
    """Complex amplitudes on (Z/NZ)^2, row-major."""

    __slots__ = ("N", "amplitudes")

    def __init__(self, N: int, amplitudes):
        amps = np.ascontiguousarray(amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != N * N:
            raise DimensionError(f"expected {N * N} amplitudes for N={N}, got {amps.shape[0]}")
        if not np.all(np.isfinite(amps)):
            raise TorusScarError("amplitudes must be finite")
        self.N = int(N)
        self.amplitudes = amps

    @classmethod
    def random(cls, N: int, rng: np.random.Generator) -> "QuantumState":
        z = rng.standard_normal(N * N) + 1j * rng.standard_normal(N * N)
        return cls(N, z / np.linalg.norm(z))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __getitem__(self, Q):
        return self.amplitudes[(Q[0] % self.N) * self.N + Q[1] % self.N]

    def __repr__(self):
        return f"QuantumState(N={self.N}, norm={self.norm():.6g})"

    # JSON: {"N": N, "amplitudes": [[re, im], ...]}
    def to_json(self) -> str:
        pairs = [[z.real, z.imag] for z in self.amplitudes.tolist()]
        return json.dumps({"N": self.N, "amplitudes": pairs})

    @classmethod
    def from_json(cls, text: str) -> "QuantumState":
        data = json.loads(text)
        arr = np.asarray(data["amplitudes"], dtype=np.float64).reshape(-1, 2)
        return cls(int(data["N"]), arr[:, 0] + 1j * arr[:, 1])

    # binary: b"TSQS", uint32 N (little endian), then N^2 (re, im) float64 pairs
    _MAGIC = b"TSQS"

    def to_bytes(self) -> bytes:
        return self._MAGIC + struct.pack("<I", self.N) + self.amplitudes.astype("<c16").tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "QuantumState":
        if blob[:4] != cls._MAGIC:
            raise TorusScarError("not a quantum state file")
        (N,) = struct.unpack("<I", blob[4:8])
        amps = np.frombuffer(blob[8:], dtype="<c16")
        return cls(N, amps.copy())

    def save(self, path):
        path = Path(path)
        if path.suffix == ".json":
            path.write_text(self.to_json())
        else:
            path.write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path) -> "QuantumState":
        path = Path(path)
        if path.suffix == ".json":
            return cls.from_json(path.read_text())
        return cls.from_bytes(path.read_bytes())


def basis_state(N: int, Q) -> QuantumState:
    amps = np.zeros(N * N, dtype=np.complex128)
    amps[(Q[0] % N) * N + Q[1] % N] = 1.0
    return QuantumState(N, amps)


@dataclass(frozen=True, eq=False)
class PropagatorSpec:
    B: CatMatrix
    g: TrigPoly
    N: int

    def __post_init__(self):
        object.__setattr__(self, "N", check_modulus(self.N, MAX_N))

    @cached_property
    def image(self) -> np.ndarray:
        """Row-major index of ``B Q mod N`` for every Q."""
        return lattice_permutation(self.B, self.N)

    @cached_property
    def phases(self) -> np.ndarray:
        """``e(frac(N g(Q/N)))`` for every Q."""
        return e(self.N * self.g.lattice_values(self.N))


def apply_U(spec: PropagatorSpec, psi: QuantumState, nthreads: int | None = None) -> QuantumState:
    if psi.N != spec.N:
        raise DimensionError(f"state has N={psi.N}, propagator has N={spec.N}")
    if nthreads is None:
        nthreads = _core.max_workers() if spec.N >= 128 else 1
    out = _core.apply_monomial(spec.phases, spec.image, psi.amplitudes, nthreads)
    return QuantumState(spec.N, out)


def apply_U_many(spec: PropagatorSpec, vectors: np.ndarray) -> np.ndarray:
    """Apply U to each column of an ``(N^2, k)`` array (or sparse matrix)."""
    if vectors.shape[0] != spec.N * spec.N:
        raise DimensionError("row count does not match N^2")
    if sp.issparse(vectors):
        return sp.diags(spec.phases) @ vectors.tocsr()[spec.image]
    return spec.phases[:, None] * vectors[spec.image]


def dense_matrix(spec: PropagatorSpec, limit: int = DENSE_LIMIT) -> np.ndarray:
    """``M[Q, BQ] = e(N g(Q/N))``; only for small N (test oracle)."""
    if spec.N > limit:
        raise SizeLimitError(f"dense realization capped at N={limit}, got N={spec.N}")
    n = spec.N * spec.N
    M = np.zeros((n, n), dtype=np.complex128)
    M[np.arange(n), spec.image] = spec.phases
    return M


def sparse_matrix(spec: PropagatorSpec) -> sp.csr_matrix:
    n = spec.N * spec.N
    return sp.csr_matrix((spec.phases, (np.arange(n), spec.image)), shape=(n, n))


def inner(psi: QuantumState, phi: QuantumState) -> complex:
    """``sum_Q psi(Q) conj(phi(Q))`` (counting measure)."""
    if psi.N != phi.N:
        raise DimensionError(f"N mismatch: {psi.N} vs {phi.N}")
    return complex(np.vdot(phi.amplitudes, psi.amplitudes))
