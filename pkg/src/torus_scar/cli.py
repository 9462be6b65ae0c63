"""Command-line front end: ``torus-scar {orbits,spectrum,sweep,scar,classical}``.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from torus_scar.classical import PhasePoint, symplectic_defect, trajectory
from torus_scar.errors import TorusScarError
from torus_scar.genericity import simplicity_sweep
from torus_scar.lattice import DEFAULT_B, CatMatrix, orbit_decompose, orbit_of
from torus_scar.observable import TrigPoly, random_trig_poly
from torus_scar.propagator import PropagatorSpec, apply_U
from torus_scar.scarring import delta_state, frequencies, max_deviation, scar_csv, scar_profile
from torus_scar.spectrum import DEGENERACY_TOL, eigenfunction, full_spectrum, verify_spectrum

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2
SMALLNESS_HINT = 0.1

DEFAULTS = {
    "B": str(DEFAULT_B),
    "N": None,
    "N_range": None,
    "g": "zero",
    "tol": DEGENERACY_TOL,
    "out": None,
    "format": "json",
    "verify": False,
    "verify_tol": 1e-10,
    "max_freq": 3,
    "state": "delta",
    "p0": "0,0",
    "q0": "0,0",
    "steps": 10,
    "h": 1e-4,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_g(text: str) -> TrigPoly:
    """``zero`` | ``file:PATH`` | ``random:seed=S,deg=D,amp=A``."""
    if text == "zero":
        return TrigPoly.zero()
    if text.startswith("file:"):
        return TrigPoly.load(text[5:])
    if text == "random" or text.startswith("random:"):
        opts = {"seed": "1", "deg": "3", "amp": "0.05"}
        body = text[7:]
        for item in filter(None, body.split(",")):
            key, sep, val = item.partition("=")
            if not sep or key not in opts:
                raise UsageError(f"bad random option {item!r}")
            opts[key] = val
        try:
            return random_trig_poly(int(opts["deg"]), float(opts["amp"]), int(opts["seed"]))
        except ValueError as exc:
            raise UsageError(f"bad random spec {text!r}: {exc}") from None
    raise UsageError(f"unknown g source {text!r}")


def parse_range(text: str) -> range:
    """``lo:hi``, both ends inclusive."""
    lo, sep, hi = text.partition(":")
    try:
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"bad N range {text!r}") from None
    if not sep or lo_i < 1:
        raise UsageError(f"bad N range {text!r}")
    if hi_i < lo_i:
        raise UsageError(f"empty N range {text!r}")
    return range(lo_i, hi_i + 1)


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected two comma-separated numbers, got {text!r}")
    return float(parts[0]), float(parts[1])


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig keys; flags override it")
    common.add_argument("--B", dest="B", help="matrix entries a,b,c,d (default 1,2,2,3)")
    common.add_argument("--N", dest="N", type=int)
    common.add_argument("--N-range", dest="N_range", help="lo:hi inclusive")
    common.add_argument("--g", dest="g", help="zero | file:PATH | random:seed=S,deg=D,amp=A")
    common.add_argument("--tol", type=float, help="degeneracy tolerance (default 1e-9)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=["json", "csv"])

    parser = _Parser(prog="torus-scar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("orbits", parents=[common], help="B-orbit decomposition of (Z/NZ)^2")
    p = sub.add_parser("spectrum", parents=[common], help="closed-form spectrum of U_N")
    p.add_argument("--verify", action="store_true", default=None)
    p.add_argument("--verify-tol", dest="verify_tol", type=float)
    sub.add_parser("sweep", parents=[common], help="simplicity sweep over N")
    p = sub.add_parser("scar", parents=[common], help="Weyl moment table of a state")
    p.add_argument("--max-freq", dest="max_freq", type=int, help="all n with |n|_inf <= K")
    p.add_argument("--state", help="delta | eigen:x1,x2,j")
    p = sub.add_parser("classical", parents=[common], help="trajectory and symplectic defect")
    p.add_argument("--p0")
    p.add_argument("--q0")
    p.add_argument("--steps", type=int)
    p.add_argument("--h", type=float)
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(data)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if cfg["tol"] is None or float(cfg["tol"]) <= 0:
        raise UsageError("tolerance must be positive")
    if cfg["N"] is not None and int(cfg["N"]) < 1:
        raise UsageError("N must be >= 1")
    return cfg


def _emit(cfg: dict, payload: str):
    if cfg["out"]:
        Path(cfg["out"]).write_text(payload)
    else:
        sys.stdout.write(payload)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _need_N(cfg) -> int:
    if cfg["N"] is None:
        raise UsageError("--N is required")
    return int(cfg["N"])


def _load_g(cfg) -> TrigPoly:
    g = parse_g(cfg["g"]) if isinstance(cfg["g"], str) else TrigPoly.from_dict(cfg["g"])
    if g.amplitude * g.n_modes > SMALLNESS_HINT:
        print(
            f"warning: amplitude*modes = {g.amplitude * g.n_modes:.3g} > {SMALLNESS_HINT}; "
            "the classical map may not be Anosov (quantum formulas are unaffected)",
            file=sys.stderr,
        )
    return g


def cmd_orbits(cfg) -> int:
    B = CatMatrix.parse(cfg["B"])
    N = _need_N(cfg)
    orbits = orbit_decompose(B, N)
    if cfg["format"] == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rep_x1", "rep_x2", "period"])
        for o in orbits:
            w.writerow([*o.rep, o.period])
        _emit(cfg, buf.getvalue())
    else:
        _emit(cfg, _dump(orbits.to_dict()))
    return EXIT_OK


def cmd_spectrum(cfg) -> int:
    B = CatMatrix.parse(cfg["B"])
    N = _need_N(cfg)
    g = _load_g(cfg)
    report = full_spectrum(g, B, N, float(cfg["tol"]))
    status = EXIT_OK
    check = None
    if cfg["verify"]:
        check = verify_spectrum(report, g, B, N, float(cfg["verify_tol"]))
        if not check.ok:
            status = EXIT_VERIFY
    if cfg["format"] == "csv":
        _emit(cfg, report.to_csv())
    else:
        out = report.to_dict()
        out["simple"] = report.is_simple
        if check is not None:
            out["verify"] = {
                "ok": check.ok,
                "max_residual": check.max_residual,
                "gram_error": check.gram_error,
            }
        _emit(cfg, _dump(out))
    if status == EXIT_VERIFY:
        print(f"verification failed: residual {check.max_residual:.3g}, gram {check.gram_error:.3g}",
              file=sys.stderr)
    return status


def cmd_sweep(cfg) -> int:
    B = CatMatrix.parse(cfg["B"])
    if cfg["N_range"] is not None:
        Ns = parse_range(cfg["N_range"])
    elif cfg["N"] is not None:
        Ns = [int(cfg["N"])]
    else:
        raise UsageError("--N-range or --N is required")
    g = _load_g(cfg)
    rows = simplicity_sweep(g, B, Ns, float(cfg["tol"]))
    if cfg["format"] == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "min_gap", "simple", "clusters"])
        for r in rows:
            w.writerow([r.N, repr(r.min_gap), str(r.simple).lower(), r.clusters])
        _emit(cfg, buf.getvalue())
    else:
        _emit(cfg, _dump({"rows": [r.to_dict() for r in rows]}))
    return EXIT_OK


def cmd_scar(cfg) -> int:
    B = CatMatrix.parse(cfg["B"])
    N = _need_N(cfg)
    K = int(cfg["max_freq"])
    if K < 0:
        raise UsageError("--max-freq must be >= 0")
    g = _load_g(cfg)
    state = cfg["state"]
    if state == "delta":
        psi = delta_state(N)
        label = "delta"
    elif state.startswith("eigen:"):
        try:
            x1, x2, j = (int(v) for v in state[6:].split(","))
        except ValueError:
            raise UsageError(f"bad state {state!r}; expected eigen:x1,x2,j") from None
        orbit = orbit_of(B, (x1, x2), N)
        psi = eigenfunction(g, orbit, j, N)
        label = f"eigen rep={list(orbit.rep)} T={orbit.period} j={j}"
    else:
        raise UsageError(f"unknown state {state!r}")
    rows = scar_profile(psi, frequencies(K))
    if cfg["format"] == "csv":
        _emit(cfg, scar_csv(rows))
    else:
        spec = PropagatorSpec(B, g, N)
        Upsi = apply_U(spec, psi).amplitudes
        # Rayleigh quotient and residual show the state really is an eigenvector
        lam = complex((psi.amplitudes.conj() @ Upsi))
        resid = float(abs(Upsi - lam * psi.amplitudes).max())
        _emit(cfg, _dump({
            "N": N,
            "state": label,
            "eigen_residual": resid,
            "max_dev_x0": max_deviation(rows, "x0"),
            "max_dev_t4": max_deviation(rows, "t4"),
            "rows": [r.to_dict() for r in rows],
        }))
    return EXIT_OK


def cmd_classical(cfg) -> int:
    B = CatMatrix.parse(cfg["B"])
    g = _load_g(cfg)
    steps = int(cfg["steps"])
    if steps < 0:
        raise UsageError("--steps must be >= 0")
    h = float(cfg["h"])
    if h <= 0:
        raise UsageError("--h must be positive")
    x0 = PhasePoint.make(_pair(cfg["p0"]), _pair(cfg["q0"]))
    traj = trajectory(B, g, x0, steps)
    if cfg["format"] == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "p1", "p2", "q1", "q2"])
        for k, x in enumerate(traj):
            w.writerow([k, *(repr(v) for v in (*x.p, *x.q))])
        _emit(cfg, buf.getvalue())
    else:
        _emit(cfg, _dump({
            "steps": steps,
            "trajectory": [[*x.p, *x.q] for x in traj],
            "on_X0": all(x.q == (0.0, 0.0) for x in traj),
            "symplectic_defect": [symplectic_defect(B, g, x, h) for x in traj],
            "h": h,
        }))
    return EXIT_OK


COMMANDS = {
    "orbits": cmd_orbits,
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "scar": cmd_scar,
    "classical": cmd_classical,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (UsageError, TorusScarError, OSError) as exc:
        print(f"torus-scar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
