"""Quantized perturbed cat maps on the 4-torus.

The propagator ``(U psi)(Q) = e(N g(Q/N)) psi(B Q)`` is a monomial operator, so
its spectrum follows in closed form from the B-orbits on (Z/NZ)^2.
"""

from torus_scar._core import BACKEND
from torus_scar.classical import PhasePoint, phi_inverse, phi_step, symplectic_defect, trajectory
from torus_scar.genericity import (
    ResonanceCertificate,
    degeneracy_explain,
    force_collision,
    membership_check,
    resonance_certificate,
    simplicity_sweep,
)
from torus_scar.lattice import DEFAULT_B, CatMatrix, Orbit, OrbitSet, mat_apply_mod, orbit_decompose, orbit_of
from torus_scar.observable import TrigPoly, evaluate, grad, orbit_phase_sum, random_trig_poly
from torus_scar.propagator import PropagatorSpec, QuantumState, apply_U, dense_matrix, inner
from torus_scar.scarring import WeylIndex, delta_state, expectation, scar_profile, weyl_apply
from torus_scar.spectrum import (
    EigenPair,
    SpectrumReport,
    eigenfunction,
    eigenphase,
    full_spectrum,
    verify_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CatMatrix", "DEFAULT_B", "EigenPair", "Orbit", "OrbitSet", "PhasePoint",
    "PropagatorSpec", "QuantumState", "ResonanceCertificate", "SpectrumReport", "TrigPoly",
    "WeylIndex", "apply_U", "degeneracy_explain", "delta_state", "dense_matrix", "eigenfunction",
    "eigenphase", "evaluate", "expectation", "force_collision", "full_spectrum", "grad", "inner",
    "mat_apply_mod", "membership_check", "orbit_decompose", "orbit_of", "orbit_phase_sum",
    "phi_inverse", "phi_step", "random_trig_poly", "resonance_certificate", "scar_profile",
    "simplicity_sweep", "symplectic_defect", "trajectory", "verify_spectrum", "weyl_apply",
]
