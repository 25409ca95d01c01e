"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 numerical failure.  Every flag can also be set through an environment
variable ``PTCOUPLED_<FLAG>`` (upper case, dashes as underscores); explicit
flags win.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import adjoint_spectrum as adj
from . import classical_dynamics as cd
from . import gaussian_oracle as go
from .errors import (
    DegenerateModeError,
    InvalidArgumentError,
    NumericalFailureError,
    SingularParametersError,
)
from .operator_core import pt_paper_hamiltonian
from .polyroots import matrix_eigenvalues

ENV_PREFIX = "PTCOUPLED_"
EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

EPILOG = """exit codes:
  0  success
  1  verification check failed
  2  invalid arguments
  3  numerical failure (root finder did not converge)

Every flag may be given as an environment variable PTCOUPLED_<FLAG>,
e.g. PTCOUPLED_OMEGA=2 or PTCOUPLED_GRID_GAMMA=0:1:50."""


def fmt(x: float) -> str:
    """Round-trip float formatting used in every CSV cell."""
    return format(float(x), ".17g")


def grid_spec(text: str) -> np.ndarray:
    try:
        lo, hi, steps = text.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be min:max:steps, got {text!r}")
    if steps < 1:
        raise argparse.ArgumentTypeError("grid steps must be >= 1")
    if steps == 1:
        return np.array([lo])
    return np.linspace(lo, hi, steps)


def positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def cpair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _env_default(dest: str, default):
    return os.environ.get(ENV_PREFIX + dest.upper(), default)


def _add(parser, *flags, default=None, **kwargs):
    dest = kwargs.get("dest") or flags[0].lstrip("-").replace("-", "_")
    env = _env_default(dest, None)
    if env is not None:
        if kwargs.get("action") == "store_true":
            default = env.lower() in ("1", "true", "yes", "on")
        else:
            default = env
    parser.add_argument(*flags, default=default, **kwargs)


def _params_flags(parser, omega=1.0, gamma=0.05, epsilon=0.5):
    _add(parser, "--omega", type=positive_float, default=omega, help="oscillator frequency")
    _add(parser, "--gamma", type=float, default=gamma, help="gain/loss rate")
    _add(parser, "--epsilon", type=float, default=epsilon, help="coupling")


def _common_flags(parser, fmt_default):
    _add(parser, "--tol", type=positive_float, default=adj.DEFAULT_TOL, help="reality / boundary tolerance")
    _add(parser, "--format", choices=("csv", "json"), default=fmt_default)
    _add(parser, "--out", type=Path, default=None, help="output file (default stdout)")
    _add(parser, "--seed", type=int, default=12345)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptcoupled",
        description="Mode frequencies, spectra and PT phases of the coupled gain/loss oscillator pair.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="energy table E(n, k) with mode data header", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _params_flags(p)
    _add(p, "--nmax", type=int, default=2, help="largest n and k")
    _common_flags(p, "csv")

    p = sub.add_parser("phase-diagram", help="phase labels and frequencies on a (gamma, epsilon) grid",
                       epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    _add(p, "--omega", type=positive_float, default=1.0)
    _add(p, "--grid-gamma", type=grid_spec, default="0:1:50")
    _add(p, "--grid-epsilon", type=grid_spec, default="0:1.5:50")
    _common_flags(p, "csv")

    p = sub.add_parser("verify", help="run the invariant suite and emit a JSON report", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _params_flags(p)
    _add(p, "--nmax", type=int, default=4, help="largest n + k of oracle states")
    _common_flags(p, "json")
    # negative control: shifts the ground energy used by residual checks
    _add(p, "--perturb-a", type=float, default=0.0, help=argparse.SUPPRESS)

    p = sub.add_parser("classical", help="integrate the classical flow; trajectory CSV and frequency JSON",
                       epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    _params_flags(p)
    _add(p, "--t-final", type=positive_float, default=409.6)
    _add(p, "--dt", type=positive_float, default=0.05)
    _add(p, "--freq-out", type=Path, default=None, help="frequency report path (default stdout)")
    _common_flags(p, "csv")

    p = sub.add_parser("adjoint", help="adjoint matrix and mode frequencies", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _params_flags(p)
    _add(p, "--dump", action="store_true", help="include the serialized Hamiltonian")
    _common_flags(p, "json")
    return parser


def _emit(text: str, out: Path | None, stdout):
    if out is None:
        stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="")


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def _csv(header, rows, comments=()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# spectrum -------------------------------------------------------------------


def cmd_spectrum(args, stdout=sys.stdout, stderr=sys.stderr) -> int:
    if args.nmax < 0:
        raise InvalidArgumentError("--nmax must be non-negative")
    w, g, e = args.omega, args.gamma, args.epsilon
    freqs = adj.closed_form_frequencies(w, g, e, args.tol)
    region = adj.phase_classify(w, g, e, args.tol) if g >= 0 and e >= 0 else None
    try:
        gs = adj.ground_state_params(w, g, e)
        a, delta = gs.a, gs.delta
    except SingularParametersError:
        a, delta = adj.csqrt(adj.xi_roots(w, g, e)[0]), None
        stderr.write("warning: Gaussian ground state is singular here; delta unavailable\n")
    if freqs.degenerate:
        stderr.write("warning: degenerate mode frequencies (lambda1 == lambda2)\n")

    header = {
        "omega": w,
        "gamma": g,
        "epsilon": e,
        "lambda1": cpair(freqs.lambda1),
        "lambda2": cpair(freqs.lambda2),
        "a": cpair(a),
        "delta": None if delta is None else cpair(delta),
        "phase": None if region is None else region.value,
    }
    rows = []
    for n, k in itertools.product(range(args.nmax + 1), repeat=2):
        E = adj.energy(n, k, freqs, a)
        rows.append((n, k, E))

    if args.format == "json":
        body = {"header": header, "rows": [{"n": n, "k": k, "E": cpair(E)} for n, k, E in rows]}
        _emit(_json(body), args.out, stdout)
    else:
        comments = [
            f"omega={fmt(w)}",
            f"gamma={fmt(g)}",
            f"epsilon={fmt(e)}",
            f"lambda1_re={fmt(freqs.lambda1.real)} lambda1_im={fmt(freqs.lambda1.imag)}",
            f"lambda2_re={fmt(freqs.lambda2.real)} lambda2_im={fmt(freqs.lambda2.imag)}",
            f"a_re={fmt(a.real)} a_im={fmt(a.imag)}",
            "delta=none" if delta is None else f"delta_re={fmt(delta.real)} delta_im={fmt(delta.imag)}",
            f"phase={header['phase']}",
        ]
        table = [(n, k, fmt(E.real), fmt(E.imag)) for n, k, E in rows]
        _emit(_csv(("n", "k", "re_E", "im_E"), table, comments), args.out, stdout)
    return EXIT_OK


# phase diagram ----------------------------------------------------------------

PHASE_COLUMNS = ("gamma", "epsilon", "region", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im")


def phase_rows(omega: float, gammas, epsilons, tol: float):
    """One row per grid point, gamma outer and epsilon fastest."""
    rows = []
    for g in gammas:
        for e in epsilons:
            g, e = float(g), float(e)
            region = adj.phase_classify(omega, g, e, tol)
            freqs = adj.mode_frequencies(pt_paper_hamiltonian(omega, g, e), tol)
            rows.append((g, e, region, freqs.lambda1, freqs.lambda2))
    return rows


def cmd_phase_diagram(args, stdout=sys.stdout, stderr=sys.stderr) -> int:
    gammas = args.grid_gamma if isinstance(args.grid_gamma, np.ndarray) else grid_spec(args.grid_gamma)
    epsilons = args.grid_epsilon if isinstance(args.grid_epsilon, np.ndarray) else grid_spec(args.grid_epsilon)
    if np.any(gammas < 0) or np.any(epsilons < 0):
        raise InvalidArgumentError("grid values must be non-negative")
    rows = phase_rows(args.omega, gammas, epsilons, args.tol)
    if args.format == "json":
        body = {
            "omega": args.omega,
            "columns": list(PHASE_COLUMNS),
            "rows": [
                [g, e, r.value, l1.real, l1.imag, l2.real, l2.imag] for g, e, r, l1, l2 in rows
            ],
        }
        _emit(_json(body), args.out, stdout)
    else:
        table = [
            (fmt(g), fmt(e), r.value, fmt(l1.real), fmt(l1.imag), fmt(l2.real), fmt(l2.imag))
            for g, e, r, l1, l2 in rows
        ]
        _emit(_csv(PHASE_COLUMNS, table), args.out, stdout)
    return EXIT_OK


# verify -------------------------------------------------------------------------


class _Checks:
    def __init__(self):
        self.items = []

    def add(self, name, observed, tolerance, passed=None, comparison="<"):
        if passed is None:
            passed = observed < tolerance if comparison == "<" else observed > tolerance
        self.items.append(
            {
                "name": name,
                "observed": float(observed),
                "tolerance": float(tolerance),
                "comparison": comparison,
                "status": "pass" if passed else "fail",
            }
        )
        return passed

    def skip(self, name, reason):
        self.items.append({"name": name, "status": "skipped", "reason": reason})

    @property
    def failed(self):
        return [c["name"] for c in self.items if c["status"] == "fail"]


def multiset_deviation(u, v) -> float:
    """Smallest max-abs mismatch over all pairings of two equal-size root sets."""
    u, v = list(u), list(v)
    if len(u) != len(v):
        return math.inf
    return min(
        max(abs(x - y) for x, y in zip(u, perm)) for perm in itertools.permutations(v)
    )


def run_verification(omega, gamma, epsilon, nmax=4, tol=adj.DEFAULT_TOL, perturb_a=0.0) -> dict:
    checks = _Checks()
    H = pt_paper_hamiltonian(omega, gamma, epsilon)
    M = adj.adjoint_matrix(H)
    region = adj.phase_classify(omega, gamma, epsilon, tol)
    expected = 1j * np.array(
        [
            [gamma, 0, epsilon, omega**2 - gamma**2],
            [0, -gamma, omega**2 - gamma**2, epsilon],
            [0, -1, -gamma, 0],
            [-1, 0, 0, gamma],
        ]
    )
    checks.add("adjoint_matrix_golden", np.abs(M.M - expected).max(), 1e-14, comparison="<=",
               passed=np.abs(M.M - expected).max() <= 1e-14)

    numeric = adj.eigenfrequencies(M, tol)
    closed = adj.closed_form_frequencies(omega, gamma, epsilon, tol)
    checks.add("frequencies_numeric_vs_closed_form", multiset_deviation(numeric.all_roots, closed.all_roots), 1e-9)
    total, product = numeric.identities()
    checks.add("root_sum_identity", abs(total - (2 * omega**2 - 4 * gamma**2)), 1e-10)
    checks.add("root_product_identity", abs(product - (omega**4 - epsilon**2)), 1e-10)
    closure = max(min(abs(r + s) for s in numeric.all_roots) for r in numeric.all_roots)
    checks.add("root_negation_closure", closure, 1e-10)

    K = cd.classical_matrix(H).K
    checks.add(
        "classical_spectrum_is_i_times_quantum",
        multiset_deviation(matrix_eigenvalues(K), [1j * r for r in numeric.all_roots]),
        1e-10,
    )

    report = {
        "params": {"omega": omega, "gamma": gamma, "epsilon": epsilon},
        "phase": region.value,
        "lambda1": cpair(numeric.lambda1),
        "lambda2": cpair(numeric.lambda2),
        "states": [],
        "annihilation": None,
    }

    try:
        gs = adj.ground_state_params(omega, gamma, epsilon)
    except SingularParametersError as exc:
        gs = None
        for name in ("quartic_residual", "pairing_identities", "oracle_states", "annihilation_pattern"):
            checks.skip(name, str(exc))
    if gs is not None:
        report["a"] = cpair(gs.a)
        report["delta"] = cpair(gs.delta)
        checks.add("quartic_residual", abs(adj.a_quartic(gs.a, omega, gamma, epsilon)), 1e-12)

    oracle_ok = gs is not None and region is adj.PhaseRegion.UNBROKEN and not numeric.degenerate
    if gs is not None and not oracle_ok:
        reason = (
            "degenerate frequencies (exceptional point)"
            if numeric.degenerate or region is adj.PhaseRegion.BOUNDARY
            else f"oracle checks need the Unbroken phase, got {region.value}"
        )
        for name in ("pairing_identities", "oracle_states", "annihilation_pattern"):
            checks.skip(name, reason)

    if oracle_ok:
        checks.add("pairing_lambda1_delta_plus_a", abs(closed.lambda1 - (gs.delta + gs.a)), 1e-10)
        checks.add("pairing_lambda2_delta_minus_a", abs(closed.lambda2 - (gs.delta - gs.a)), 1e-10)
        try:
            ladders = go.ladder_set((omega, gamma, epsilon))
        except DegenerateModeError as exc:
            checks.skip("oracle_states", str(exc))
            checks.skip("annihilation_pattern", str(exc))
        else:
            a_used = gs.a + perturb_a
            for total_q in range(nmax + 1):
                for n in range(total_q + 1):
                    k = total_q - n
                    psi = go.build_state(n, k, (omega, gamma, epsilon), ladders=ladders)
                    E = n * ladders.freqs.lambda1 - k * ladders.freqs.lambda2 + a_used
                    res = go.eigen_residual(psi, E, (omega, gamma, epsilon))
                    parity = psi.parity()
                    expected = (-1) ** (n + k)
                    report["states"].append(
                        {"n": n, "k": k, "E": cpair(E), "residual": res, "parity": parity}
                    )
                    checks.add(f"eigen_residual_n{n}_k{k}", res, go.RESIDUAL_TOL)
                    checks.add(f"parity_n{n}_k{k}", 0.0 if parity == expected else 1.0, 0.5)
            ann = go.annihilation_check((omega, gamma, epsilon))
            report["annihilation"] = {
                "magnitudes": ann.magnitudes,
                "vanishes": ann.vanishes,
            }
            for label in ("Z2", "Z3"):
                checks.add(f"annihilation_{label}_vanishes", ann.magnitudes[label], go.VANISH_TOL)
            for label in ("Z1", "Z4"):
                checks.add(f"annihilation_{label}_nonzero", ann.magnitudes[label], 1e-3, comparison=">")

    report["checks"] = checks.items
    report["failed"] = checks.failed
    report["passed"] = not checks.failed
    return report


def cmd_verify(args, stdout=sys.stdout, stderr=sys.stderr) -> int:
    report = run_verification(
        args.omega, args.gamma, args.epsilon, args.nmax, args.tol, float(args.perturb_a)
    )
    _emit(_json(report), args.out, stdout)
    if report["failed"]:
        stderr.write("verification failed: " + ", ".join(report["failed"]) + "\n")
        return EXIT_VERIFY
    return EXIT_OK


# classical ------------------------------------------------------------------------


def cmd_classical(args, stdout=sys.stdout, stderr=sys.stderr) -> int:
    w, g, e = args.omega, args.gamma, args.epsilon
    H = pt_paper_hamiltonian(w, g, e)
    system = cd.classical_matrix(H)
    z0 = cd.random_initial_states(1, args.seed)[0]
    n_steps = int(round(args.t_final / args.dt))
    if n_steps < 2:
        raise InvalidArgumentError("--t-final / --dt must give at least 2 steps")
    traj = cd.integrate(system, z0, args.dt, n_steps)

    if args.out is not None:
        rows = [
            [fmt(t)] + [fmt(v) for v in z] + [fmt(h)]
            for t, z, h in zip(traj.times, traj.states, traj.energy)
        ]
        Path(args.out).write_text(_csv(("t", "x", "y", "px", "py", "H"), rows), encoding="utf-8")

    closed = adj.closed_form_frequencies(w, g, e, args.tol)
    report = {
        "params": {"omega": w, "gamma": g, "epsilon": e},
        "seed": args.seed,
        "z0": [float(v) for v in z0],
        "dt": args.dt,
        "n_steps": traj.n_steps,
        "diverged": traj.diverged,
        "energy_drift": traj.energy_drift,
        "expected": {"lambda1": cpair(closed.lambda1), "lambda2": cpair(closed.lambda2)},
        "peaks": [],
    }
    if not traj.diverged:
        usable = 1 << int(math.log2(traj.n_steps))
        clipped = cd.Trajectory(traj.dt, traj.states[: usable + 1])
        report["fft_samples"] = usable
        report["peaks"] = [
            {"frequency": float(f), "amplitude": float(amp)} for f, amp in cd.extract_frequencies(clipped)
        ]
    _emit(_json(report), args.freq_out, stdout)
    return EXIT_OK


# adjoint ----------------------------------------------------------------------------


def cmd_adjoint(args, stdout=sys.stdout, stderr=sys.stderr) -> int:
    H = pt_paper_hamiltonian(args.omega, args.gamma, args.epsilon)
    M = adj.adjoint_matrix(H)
    freqs = adj.eigenfrequencies(M, args.tol)
    body = {
        "adjoint_matrix": [[cpair(v) for v in row] for row in M.M],
        "roots": [cpair(r) for r in freqs.all_roots],
        "is_real": list(freqs.is_real),
        "phase": adj.phase_classify(args.omega, args.gamma, args.epsilon, args.tol).value,
    }
    if args.dump:
        body["hamiltonian"] = H.to_json()
    _emit(_json(body), args.out, stdout)
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "phase-diagram": cmd_phase_diagram,
    "verify": cmd_verify,
    "classical": cmd_classical,
    "adjoint": cmd_adjoint,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, stdout=stdout, stderr=stderr)
    except (InvalidArgumentError, SingularParametersError, DegenerateModeError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except NumericalFailureError as exc:
        stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
