"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import time
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from conftest import ACCEPTANCE_LINES
from torus_scar import (
    DEFAULT_B, PhasePoint, PropagatorSpec, QuantumState, TrigPoly, WeylIndex, apply_U, degeneracy_explain,
    delta_state, dense_matrix, force_collision, full_spectrum, orbit_decompose, phi_inverse, phi_step,
    random_trig_poly, scar_profile, simplicity_sweep, symplectic_defect, trajectory, verify_spectrum,
    weyl_apply,
)
from torus_scar._phase import e
from torus_scar.scarring import frequencies

B = DEFAULT_B
G_ZERO = TrigPoly.zero()
G_RAND = random_trig_poly(3, 0.05, 1)
GS = {"zero": G_ZERO, "random(seed=1,deg=3,amp=0.05)": G_RAND}


def record(k, ok, detail):
    ACCEPTANCE_LINES[k] = f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(ACCEPTANCE_LINES[k])
    return ok


def test_criterion_1_dense_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    for g in GS.values():
        for N in range(2, 13):
            lam = e(full_spectrum(g, B, N).thetas)
            ev = np.linalg.eigvals(dense_matrix(PropagatorSpec(B, g, N)))
            cost = np.abs(lam[:, None] - ev[None, :])
            r, c = linear_sum_assignment(cost)
            worst = max(worst, cost[r, c].max())
    dt = time.perf_counter() - t0
    ok = worst <= 1e-9 and dt <= 60
    assert record(1, ok, f"max matched |e(theta) - eig| = {worst:.2e} (<= 1e-9), {dt:.1f}s (<= 60s)")


def test_criterion_2_residuals_and_gram():
    t0 = time.perf_counter()
    worst_res = worst_gram = 0.0
    all_ok = True
    for g in GS.values():
        for N in range(2, 49):
            rep = full_spectrum(g, B, N)
            v = verify_spectrum(rep, g, B, N, 1e-10)
            all_ok &= v.ok
            worst_res = max(worst_res, v.max_residual)
            worst_gram = max(worst_gram, v.gram_error)
    dt = time.perf_counter() - t0
    ok = all_ok and worst_res <= 1e-10 and worst_gram <= 1e-10 and dt <= 120
    assert record(2, ok, f"max residual {worst_res:.2e}, max |Gram - I| {worst_gram:.2e} (<= 1e-10), {dt:.1f}s (<= 120s)")


def test_criterion_3_counting():
    bad = []
    for N in range(1, 65):
        if sum(orbit_decompose(B, N).periods) != N * N:
            bad.append(("orbits", N))
        if len(full_spectrum(G_RAND, B, N).pairs) != N * N:
            bad.append(("pairs", N))
    assert record(3, not bad, f"N = 1..64, mismatches: {bad or 'none'}")


def _random_sweep_ok(seed):
    rows = simplicity_sweep(random_trig_poly(3, 0.05, seed), B, range(2, 49))
    failures = [(r.N, r.min_gap, r.simple) for r in rows if not (r.simple and r.min_gap > 1e-6)]
    return not failures, failures


def test_criterion_4_degenerate_vs_generic():
    zero_rows = simplicity_sweep(G_ZERO, B, range(2, 49))
    zero_bad = []
    for r in zero_rows:
        fixed = sum(1 for o in orbit_decompose(B, r.N) if o.period == 1)
        if fixed >= 2 and r.simple:
            zero_bad.append(r.N)
    n2 = full_spectrum(G_ZERO, B, 2)
    n2_ok = [p.theta for p in n2.pairs] == [0.0] * 4 and n2.clusters == [[0, 1, 2, 3]]
    ok1, fail1 = _random_sweep_ok(1)
    ok2, fail2 = (True, []) if ok1 else _random_sweep_ok(2)
    random_ok = ok1 or ok2
    fmt = lambda fs: ", ".join(f"N={n} gap={gp:.1e} simple={s}" for n, gp, s in fs)
    detail = (f"g=0 non-simple where >=2 fixed points: {'yes' if not zero_bad else zero_bad}; "
              f"N=2 spectrum {{1}}x4: {n2_ok}; random seed=1 failures [{fmt(fail1)}]")
    if not ok1:
        detail += f"; rerun seed=2 failures [{fmt(fail2)}]"
    assert record(4, not zero_bad and n2_ok and random_ok, detail)


def test_criterion_5_scar_identity():
    worst = 0.0
    eig_ok = True
    for N in (5, 11, 24):
        d = delta_state(N)
        spec = PropagatorSpec(B, G_RAND, N)
        eig_ok &= bool(np.allclose(apply_U(spec, d).amplitudes, e(N * G_RAND((0.0, 0.0))) * d.amplitudes,
                                   atol=1e-13, rtol=0))
        for row in scar_profile(d, frequencies(3)):
            worst = max(worst, abs(row.quantum - row.x0))
    ok = worst <= 1e-12 and eig_ok
    assert record(5, ok, f"max |<T(n) delta, delta> - X0 moment| = {worst:.1e} over |n|_inf <= 3, "
                         f"N in {{5, 11, 24}}; delta is an eigenvector of U: {eig_ok}")


def test_criterion_6_classical_structure():
    rng = np.random.default_rng(2024)
    defects = []
    x0_ok = True
    inv_err = 0.0
    for s in range(100):
        g = random_trig_poly(3, 0.05, s)
        x = PhasePoint.make(rng.random(2), rng.random(2))
        defects.append(symplectic_defect(B, g, x, 1e-4))
        traj = trajectory(B, g, PhasePoint.make(rng.random(2), (0.0, 0.0)), 20)
        x0_ok &= all(y.q == (0.0, 0.0) for y in traj)
        y = phi_inverse(B, g, phi_step(B, g, x))
        d = np.abs(y.as_array() - x.as_array()) % 1.0
        inv_err = max(inv_err, float(np.max(np.minimum(d, 1 - d))))
    max_def = max(defects)
    parts = [max_def <= 1e-6, x0_ok, inv_err <= 1e-12]
    detail = (f"max symplectic defect at h=1e-4: {max_def:.2e} (<= 1e-6: {parts[0]}); "
              f"X0 trajectories exact: {x0_ok}; inverse round trip {inv_err:.1e} (<= 1e-12: {parts[2]})")
    assert record(6, all(parts), detail)


def test_criterion_7_collision_certificate():
    N = 7
    orbs = orbit_decompose(B, N)
    a, b = orbs[1], orbs[2]
    g2, j, k = force_collision(G_RAND, B, N, a, b)
    rep = full_spectrum(g2, B, N)
    cluster_ok = any(
        {rep.pairs[i].orbit.rep for i in c} >= {a.rep, b.rep} for c in rep.cross_orbit_clusters()
    )
    certs = degeneracy_explain(g2, rep)
    cert = next((c for c in certs if c.orbits == (a.rep, b.rep)), None)
    qmax = a.period * b.period
    dist = abs(cert.value - float(Fraction(cert.value).limit_denominator(qmax))) if cert else float("inf")
    zero_ok = True
    n_zero = 0
    for Nz in range(2, 13):
        zc = degeneracy_explain(G_ZERO, full_spectrum(G_ZERO, B, Nz))
        n_zero += len(zc)
        zero_ok &= all(c.value == 0.0 for c in zc)
    ok = cluster_ok and dist <= 1e-6 and zero_ok and n_zero > 0
    assert record(7, ok, f"fixture cluster: {cluster_ok}; distance to p/q with q <= {qmax}: {dist:.1e} "
                         f"(<= 1e-6); g=0: {n_zero} certificates, all exactly 0: {zero_ok}")


def test_criterion_8_unitarity_and_weyl():
    worst = 0.0
    for N in range(1, 49):
        rng = np.random.default_rng(N)
        spec = PropagatorSpec(B, G_RAND, N)
        for _ in range(100):
            psi = QuantumState.random(N, rng)
            worst = max(worst, abs(apply_U(spec, psi).norm() - psi.norm()))
    rng = np.random.default_rng(8)
    weyl = 0.0
    for N in (2, 5, 11, 24, 48):
        psi = QuantumState.random(N, rng)
        for _ in range(50):
            n = WeylIndex.of(*rng.integers(-2 * N, 2 * N, size=4))
            m = WeylIndex.of(*rng.integers(-2 * N, 2 * N, size=4))
            omega = (n.n_p[0] * m.n_q[0] + n.n_p[1] * m.n_q[1]) - (n.n_q[0] * m.n_p[0] + n.n_q[1] * m.n_p[1])
            lhs = weyl_apply(n, weyl_apply(m, psi)).amplitudes
            rhs = e(omega / (2 * N)) * weyl_apply(n + m, psi).amplitudes
            weyl = max(weyl, float(np.max(np.abs(lhs - rhs))))
    ok = worst <= 1e-12 and weyl <= 1e-12
    assert record(8, ok, f"max norm change {worst:.1e} (<= 1e-12); Weyl composition error {weyl:.1e} (<= 1e-12)")
