"""Integer action of a cat matrix on (Z/NZ)^2 and its cycle decomposition."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from torus_scar import _core
from torus_scar.errors import InvalidMatrixError, TorusScarError

MAX_N = 256


@dataclass(frozen=True)
class CatMatrix:
    """Row-major 2x2 integer matrix ``[[a, b], [c, d]]`` in GL(2, Z), hyperbolic."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise InvalidMatrixError(f"entry {name}={v!r} is not an integer")
            object.__setattr__(self, name, int(v))
        if abs(self.det) != 1:
            raise InvalidMatrixError(f"|det B| = {abs(self.det)}, expected 1")
        # characteristic polynomial x^2 - t x + det must have no root on |x| = 1
        t, det = self.trace, self.det
        disc = cmath.sqrt(t * t - 4 * det)
        for root in ((t + disc) / 2, (t - disc) / 2):
            if abs(abs(root) - 1.0) < 1e-12:
                raise InvalidMatrixError(f"B = {self.rows} is not hyperbolic (eigenvalue {root:.6g})")

    @classmethod
    def parse(cls, text: str) -> "CatMatrix":
        """Build from ``"a,b,c,d"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise InvalidMatrixError(f"expected 4 comma-separated integers, got {text!r}")
        try:
            return cls(*(int(p) for p in parts))
        except ValueError as exc:
            if isinstance(exc, InvalidMatrixError):
                raise
            raise InvalidMatrixError(f"non-integer entry in {text!r}") from None

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    @property
    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    def inverse(self) -> "CatMatrix":
        # |det| = 1, so the adjugate divided by det is integral
        s = self.det
        return CatMatrix(s * self.d, -s * self.b, -s * self.c, s * self.a)

    def transpose(self) -> "CatMatrix":
        return CatMatrix(self.a, self.c, self.b, self.d)

    def __str__(self):
        return f"{self.a},{self.b},{self.c},{self.d}"


DEFAULT_B = CatMatrix(1, 2, 2, 3)


def check_modulus(N, max_n=MAX_N):
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise TorusScarError(f"N must be a positive integer, got {N!r}")
    if N > max_n:
        raise TorusScarError(f"N={N} exceeds the configured maximum {max_n}")
    return int(N)


def mat_apply_mod(B: CatMatrix, Q, N: int) -> tuple[int, int]:
    """``B Q mod N`` for a lattice point ``Q = (x1, x2)``."""
    N = check_modulus(N, max_n=np.iinfo(np.int64).max)
    x1, x2 = (int(v) % N for v in Q)
    return ((B.a * x1 + B.b * x2) % N, (B.c * x1 + B.d * x2) % N)


class Orbit:
    """One cycle of ``Q -> B Q mod N``.

    ``points`` has shape ``(T, 2)`` and lists ``B rep, B^2 rep, ..., B^T rep = rep``.
    """

    __slots__ = ("N", "rep", "points")

    def __init__(self, N: int, rep, points):
        pts = np.array(points, dtype=np.int64).reshape(-1, 2)
        pts.setflags(write=False)
        self.N = int(N)
        self.rep = (int(rep[0]), int(rep[1]))
        self.points = pts

    @property
    def period(self) -> int:
        return len(self.points)

    @property
    def indices(self) -> np.ndarray:
        """Row-major indices ``x1 * N + x2`` of the points, in orbit order."""
        return self.points[:, 0] * self.N + self.points[:, 1]

    def __len__(self):
        return self.period

    def __eq__(self, other):
        if not isinstance(other, Orbit):
            return NotImplemented
        return (
            self.N == other.N
            and self.rep == other.rep
            and np.array_equal(self.points, other.points)
        )

    def __hash__(self):
        return hash((self.N, self.rep, self.period))

    def __repr__(self):
        return f"Orbit(N={self.N}, rep={self.rep}, T={self.period})"

    def to_dict(self) -> dict:
        return {"rep": list(self.rep), "period": self.period}


def orbit_of(B: CatMatrix, xi, N: int) -> Orbit:
    """The cycle through ``xi``, canonicalized to its lexicographically smallest point."""
    N = check_modulus(N, max_n=np.iinfo(np.int64).max)
    start = (int(xi[0]) % N, int(xi[1]) % N)
    cycle = [start]
    cur = mat_apply_mod(B, start, N)
    while cur != start:
        cycle.append(cur)
        cur = mat_apply_mod(B, cur, N)
    k = cycle.index(min(cycle))
    rep = cycle[k]
    # rotate so the list reads B rep, ..., B^T rep = rep
    ordered = cycle[k + 1:] + cycle[: k + 1]
    return Orbit(N, rep, ordered)


class OrbitSet:
    """All B-orbits on (Z/NZ)^2, sorted by representative."""

    def __init__(self, N: int, orbits: list[Orbit], image: np.ndarray | None = None):
        self.N = N
        self.orbits = orbits
        self._image = image

    def __len__(self):
        return len(self.orbits)

    def __iter__(self):
        return iter(self.orbits)

    def __getitem__(self, k):
        return self.orbits[k]

    @property
    def periods(self) -> list[int]:
        return [o.period for o in self.orbits]

    @cached_property
    def labels(self) -> np.ndarray:
        """``labels[i]`` is the position in ``orbits`` of the orbit holding index ``i``."""
        lab = np.empty(self.N * self.N, dtype=np.int64)
        for k, o in enumerate(self.orbits):
            lab[o.indices] = k
        return lab

    def find(self, Q) -> Orbit:
        x1, x2 = (int(v) % self.N for v in Q)
        return self.orbits[self.labels[x1 * self.N + x2]]

    def to_dict(self) -> dict:
        return {"N": self.N, "orbits": [o.to_dict() for o in self.orbits]}


def lattice_permutation(B: CatMatrix, N: int) -> np.ndarray:
    """Row-major index array ``image[i] = index(B Q_i mod N)``."""
    N = check_modulus(N, max_n=np.iinfo(np.int32).max)
    return np.ascontiguousarray(_core.lattice_image(B.a, B.b, B.c, B.d, N), dtype=np.int64)


def orbit_decompose(B: CatMatrix, N: int, max_n: int = MAX_N) -> OrbitSet:
    N = check_modulus(N, max_n)
    image = lattice_permutation(B, N)
    order, starts = _core.cycle_decompose(image)
    x1, x2 = np.divmod(order, N)
    pts = np.stack([x1, x2], axis=1)
    orbits = []
    for k in range(len(starts) - 1):
        seg = pts[starts[k]:starts[k + 1]]
        orbits.append(Orbit(N, seg[-1], seg))
    return OrbitSet(N, orbits, image)
