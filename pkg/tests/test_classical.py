from fractions import Fraction

import numpy as np
import pytest

from torus_scar import PhasePoint, TrigPoly, phi_inverse, phi_step, random_trig_poly, symplectic_defect, trajectory
from torus_scar.classical import jacobian_fd
from torus_scar.observable import hessian


def torus_dist(a: PhasePoint, b: PhasePoint) -> float:
    d = np.abs(a.as_array() - b.as_array()) % 1.0
    return float(np.max(np.minimum(d, 1.0 - d)))


def random_point(rng, on_x0=False):
    return PhasePoint.make(rng.random(2), (0.0, 0.0) if on_x0 else rng.random(2))


def test_origin_fixed_g0(B, g_zero):
    assert phi_step(B, g_zero, PhasePoint.make((0, 0), (0, 0))) == PhasePoint((0.0, 0.0), (0.0, 0.0))


def test_linear_step_hand_computed(B, g_zero):
    # B^t p = (1/2, 0), B^-1 q = (1, -1/2) = (0, 1/2) mod 1
    y = phi_step(B, g_zero, PhasePoint.make((0.5, 0), (0, 0.5)))
    assert y.p == (0.5, 0.0) and y.q == (0.0, 0.5)


def test_x0_invariance(B, rng):
    for s in range(100):
        g = random_trig_poly(3, 0.05, s)
        y = phi_step(B, g, random_point(rng, on_x0=True))
        assert y.q == (0.0, 0.0)


def test_x0_restriction_area_preserving(B):
    assert abs(round(np.linalg.det(B.transpose().as_array()))) == 1


class TestSymplectic:
    def test_linear_map(self, B, g_zero, rng):
        for _ in range(20):
            assert symplectic_defect(B, g_zero, random_point(rng), 1e-4) <= 1e-9

    def test_random_g_small_step(self, B, rng):
        # the defect is pure O(h^2) truncation; at h = 1e-6 it is ~1e-6 for these g
        for s in range(100):
            g = random_trig_poly(3, 0.05, s)
            assert symplectic_defect(B, g, random_point(rng), 1e-6) <= 1e-5

    def test_second_order(self, B, g_rand, rng):
        x = random_point(rng)
        ratio = symplectic_defect(B, g_rand, x, 1e-2) / symplectic_defect(B, g_rand, x, 5e-3)
        assert 3.5 < ratio < 4.5

    @staticmethod
    def _analytic(B, g, x):
        Binv = B.inverse().as_array()
        H = hessian(g, Binv @ x.as_array()[2:])
        return np.block([[B.transpose().as_array(), H @ Binv], [np.zeros((2, 2)), Binv]])

    def test_analytic_jacobian_is_symplectic(self, B, rng):
        from torus_scar.classical import OMEGA

        for s in range(20):
            J = self._analytic(B, random_trig_poly(3, 0.05, s), random_point(rng))
            assert np.max(np.abs(J.T @ OMEGA @ J - OMEGA)) <= 1e-12

    def test_fd_jacobian_converges_to_analytic(self, B, g_rand, rng):
        x = random_point(rng)
        J = self._analytic(B, g_rand, x)
        e1 = np.abs(jacobian_fd(B, g_rand, x, 1e-3) - J).max()
        e2 = np.abs(jacobian_fd(B, g_rand, x, 5e-4) - J).max()
        assert 3.8 < e1 / e2 < 4.2
        assert np.abs(jacobian_fd(B, g_rand, x, 1e-5) - J).max() <= 1e-6 * np.abs(J).max()

    def test_bad_step(self, B, g_rand):
        with pytest.raises(ValueError):
            symplectic_defect(B, g_rand, PhasePoint.make((0, 0), (0, 0)), 0.0)


class TestTrajectory:
    def test_zero_steps(self, B, g_rand):
        x0 = PhasePoint.make((0.1, 0.2), (0.3, 0.4))
        assert trajectory(B, g_rand, x0, 0) == [x0]

    def test_negative_steps(self, B, g_rand):
        with pytest.raises(ValueError):
            trajectory(B, g_rand, PhasePoint.make((0, 0), (0, 0)), -1)

    def test_stays_on_x0(self, B, rng):
        for s in range(100):
            g = random_trig_poly(3, 0.05, s)
            traj = trajectory(B, g, random_point(rng, on_x0=True), 25)
            assert all(x.q == (0.0, 0.0) for x in traj)

    @staticmethod
    def _exact_orbit(p, q, steps):
        out = []
        for _ in range(steps + 1):
            out.append((p, q))
            p = [(p[0] + 2 * p[1]) % 1, (2 * p[0] + 3 * p[1]) % 1]
            q = [(-3 * q[0] + 2 * q[1]) % 1, (2 * q[0] - q[1]) % 1]
        return out

    def test_dyadic_lattice_exact_g0(self, B, g_zero):
        # quarters are exact in binary, so float iteration must equal Fraction iteration
        p, q = [Fraction(1, 4), Fraction(3, 4)], [Fraction(1, 2), Fraction(1, 4)]
        traj = trajectory(B, g_zero, PhasePoint.make([float(v) for v in p], [float(v) for v in q]), 40)
        for x, (pe, qe) in zip(traj, self._exact_orbit(p, q, 40)):
            assert x == PhasePoint.make([float(v) for v in pe], [float(v) for v in qe])
        # B mod 4 has order 2 on the lattice
        assert traj[2] == traj[0]

    def test_rational_lattice_g0(self, B, g_zero):
        N = 5
        p, q = [Fraction(1, N), Fraction(3, N)], [Fraction(2, N), Fraction(4, N)]
        traj = trajectory(B, g_zero, PhasePoint.make([float(v) for v in p], [float(v) for v in q]), 20)
        exact = self._exact_orbit(p, q, 20)
        for k, (x, (pe, qe)) in enumerate(zip(traj, exact)):
            ref = PhasePoint.make([float(v) for v in pe], [float(v) for v in qe])
            # rounding error grows like (2 + sqrt 5)^k along the unstable direction
            assert torus_dist(x, ref) <= 1e-15 * (2 + 5 ** 0.5) ** k
            if k <= 10:
                assert torus_dist(x, ref) <= 1e-9
            lattice = tuple(int(round(v * N)) % N for v in x.as_array())
            assert lattice == tuple(int(v * N) for v in (*pe, *qe))
        # the lattice permutation of B mod 5 has order 20
        assert torus_dist(traj[20], traj[0]) <= 1e-3


def test_inverse_round_trip(B, rng):
    for s in range(100):
        g = random_trig_poly(3, 0.05, s)
        x = random_point(rng)
        assert torus_dist(phi_inverse(B, g, phi_step(B, g, x)), x) <= 1e-12
