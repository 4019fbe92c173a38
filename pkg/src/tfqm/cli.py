"""Command-line front end: ``tfqm <jsi|qfi|sweep|wigner|schmidt> [flags]``.

Exit codes: 0 success, 1 domain or computation error, 2 usage error.
``TFQM_THREADS`` caps the worker threads used by ``sweep``.
"""
import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import _io, metrology, phasespace, statedef
from .errors import TfqmError, UnsupportedN
from .metrology import CoherentSpec
from .spectra import Jsa2D, Spectrum1D

SCHMIDT_TOP = 16


def _stem(out):
    p = Path(out)
    return p.with_suffix("") if p.suffix.lower() in (".csv", ".pgm", ".json") else p


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        _io.write_atomic(out, text)


def _state_name(spec):
    return Path(spec.source).name


def _load(path):
    try:
        return statedef.load(path)
    except OSError as e:
        raise TfqmError(f"cannot read state file: {e}") from e


def cmd_jsi(args):
    spec = _load(args.state)
    state = statedef.realize_grid(spec)
    if not isinstance(state, Jsa2D):
        raise UnsupportedN(f"JSI rendering needs a two-photon state, {_state_name(spec)} has n = {spec.n}")
    stem = _stem(args.out)
    jsi = state.density
    _io.write_atomic(f"{stem}.csv", _io.matrix_csv(state.grid1.points, state.grid2.points, jsi, "omega1\\omega2"))
    _io.write_atomic(f"{stem}.pgm", _io.pgm(jsi, f"JSI {_state_name(spec)}: rows omega1, columns omega2"))
    return 0


def _report_dict(r):
    return {"method": r.method, "variance_omega": r.variance_omega, "qfi": r.qfi, "crb": r.crb}


def cmd_qfi(args):
    spec = _load(args.state)
    state = statedef.realize(spec)
    alphas = statedef.signs(spec)
    reports = []
    if args.method in ("variance", "both"):
        reports.append(metrology.qfi_report(state, alphas, args.nu))
    if args.method in ("overlap", "both"):
        if isinstance(state, CoherentSpec):
            raise TfqmError("the overlap method applies to single- and two-photon states, not coherent states")
        grid_state = statedef.realize_grid(spec)
        reports.append(metrology.qfi_report(grid_state, alphas, args.nu, method="overlap"))
    doc = {
        "state": _state_name(spec),
        "family": spec.family,
        "n": spec.n,
        "alphas": list(alphas.values),
        "nu": args.nu,
        "reports": [_report_dict(r) for r in reports],
    }
    if len(reports) == 2:
        ref = reports[0].qfi
        doc["relative_discrepancy"] = abs(reports[1].qfi - ref) / ref
    _emit(_io.dumps_json(doc), args.out)
    return 0


def _n_values(n_min, n_max, n_points, spacing):
    if spacing == "linear":
        values = np.rint(np.linspace(n_min, n_max, n_points))
    else:
        values = np.rint(np.geomspace(n_min, n_max, n_points))
    return [int(v) for v in np.unique(values)]


def _threads():
    raw = os.environ.get("TFQM_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def cmd_sweep(args):
    ns = _n_values(args.n_min, args.n_max, args.n_points, args.spacing)
    report = metrology.scaling_sweep(args.eta, args.delta_omega, ns, max_workers=_threads())
    slopes = [s for _, s in report.local_slopes]
    exponent = metrology.fit_scaling_exponent(report.points) if len(ns) >= 3 else float("nan")
    rows = []
    for (n, v), s in zip(report.points, slopes):
        qfi = 4.0 * v
        rows.append((n, v, qfi, metrology.cramer_rao(qfi, args.nu), s))
    if args.format == "json":
        doc = {
            "eta": report.eta,
            "delta_omega": report.delta_omega,
            "nu": args.nu,
            "points": [
                {"n": n, "variance": v, "qfi": q, "crb": c, "local_slope": s} for n, v, q, c, s in rows
            ],
            "transition_n": report.transition_n,
            "fitted_exponent": exponent,
        }
        text = _io.dumps_json(doc)
    else:
        lines = ["n,variance,qfi,crb,local_slope"]
        lines += [",".join([str(n)] + [_io.fmt(x) for x in (v, q, c, s)]) for n, v, q, c, s in rows]
        lines.append(f"# transition_n={_io.fmt(report.transition_n)},fitted_exponent={_io.fmt(exponent)}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _crop_rows(w):
    """Keep the phi rows where the map is not negligible."""
    mass = np.max(np.abs(w.values), axis=1)
    keep = np.nonzero(mass > 1e-12 * mass.max())[0]
    lo, hi = int(keep[0]), int(keep[-1]) + 1
    return w.phi_grid.points[lo:hi], w.values[lo:hi]


def cmd_wigner(args):
    spec = _load(args.state)
    state = statedef.realize_grid(spec)
    dt = args.delta_t
    if isinstance(state, Spectrum1D):
        shift, before, after = phasespace.single_photon_shift(state, dt)
        doc = {
            "state": _state_name(spec),
            "delta_t": dt,
            "kind": "single-photon",
            "marginal_shift": shift,
            "collective_shift_orthonormal": None,
            "collective_shift_per_photon": None,
            "ratio": None,
            "resolution_ratio": None,
        }
    elif isinstance(state, Jsa2D):
        alphas = statedef.signs(spec)
        rep = phasespace.collective_wigner_shift_check(state, alphas, dt)
        before, after = rep.collective_before, rep.collective_after
        doc = {
            "state": _state_name(spec),
            "delta_t": dt,
            "kind": "collective",
            "marginal_shift": rep.marginal_shift,
            "collective_shift_orthonormal": rep.orthonormal_shift,
            "collective_shift_per_photon": rep.per_photon_shift,
            "ratio": rep.ratio,
            "resolution_ratio": rep.resolution_ratio,
        }
    else:
        raise UnsupportedN("Wigner maps are available for one or two photons")
    stem = _stem(args.out)
    for tag, w in (("before", before), ("after", after)):
        phi, vals = _crop_rows(w)
        _io.write_atomic(f"{stem}.{tag}.csv", _io.matrix_csv(phi, w.tau_grid.points, vals, "phi\\tau"))
        _io.write_atomic(f"{stem}.{tag}.pgm", _io.pgm(vals, f"Wigner {tag}: rows phi, columns tau"))
    _io.write_atomic(f"{stem}.shift.json", _io.dumps_json(doc))
    return 0


def cmd_schmidt(args):
    spec = _load(args.state)
    state = statedef.realize_grid(spec)
    if not isinstance(state, Jsa2D):
        raise UnsupportedN("Schmidt decomposition needs a two-photon state")
    rep = phasespace.schmidt(state)
    doc = {
        "state": _state_name(spec),
        "coefficients": list(rep.coefficients[:SCHMIDT_TOP]),
        "entropy_bits": rep.entropy,
        "schmidt_number": rep.schmidt_number,
        "residue": rep.residue,
    }
    _emit(_io.dumps_json(doc), args.out)
    return 0


def _nonempty(value):
    if not value:
        raise argparse.ArgumentTypeError("must not be empty")
    return value


def _positive_int(value):
    try:
        x = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from None
    if x < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {x}")
    return x


def _finite_float(value):
    try:
        x = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {value!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError("must be finite")
    return x


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tfqm",
        description="Time-frequency quantum metrology: precision limits of multi-photon spectral states.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("jsi", help="joint spectral intensity as CSV and PGM")
    p.add_argument("--state", required=True, help="state definition file (JSON)")
    p.add_argument("--out", required=True, type=_nonempty, help="output path stem; writes <stem>.csv and <stem>.pgm")
    p.set_defaults(func=cmd_jsi)

    p = sub.add_parser("qfi", help="generator variance, QFI and Cramer-Rao bound as JSON")
    p.add_argument("--state", required=True, help="state definition file (JSON)")
    p.add_argument("--method", choices=("variance", "overlap", "both"), default="variance")
    p.add_argument("--nu", type=_positive_int, default=1, help="number of repetitions")
    p.add_argument("--out", type=_nonempty, help="output file (default: stdout)")
    p.set_defaults(func=cmd_qfi)

    p = sub.add_parser("sweep", help="variance versus photon number for the correlated family")
    p.add_argument("--eta", type=_finite_float, required=True, help="correlation parameter in [0, 1]")
    p.add_argument("--delta-omega", type=_finite_float, default=1.0, help="frequency RMS per photon")
    p.add_argument("--n-min", type=_positive_int, default=1)
    p.add_argument("--n-max", type=_positive_int, required=True)
    p.add_argument("--n-points", type=_positive_int, default=40, help="requested number of n values")
    p.add_argument("--spacing", choices=("log", "linear"), default="log")
    p.add_argument("--nu", type=_positive_int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", type=_nonempty, help="output file (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("wigner", help="chronocyclic Wigner maps before/after a delay, with shift report")
    p.add_argument("--state", required=True, help="state definition file (JSON)")
    p.add_argument("--delta-t", type=_finite_float, required=True, help="delay applied to every photon")
    p.add_argument("--out", required=True, type=_nonempty,
                   help="output stem; writes <stem>.{before,after}.{csv,pgm} and <stem>.shift.json")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("schmidt", help="Schmidt coefficients and entanglement entropy as JSON")
    p.add_argument("--state", required=True, help="state definition file (JSON)")
    p.add_argument("--out", type=_nonempty, help="output file (default: stdout)")
    p.set_defaults(func=cmd_schmidt)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep" and args.n_max < args.n_min:
        parser.error("--n-max must be >= --n-min")
    try:
        return args.func(args)
    except TfqmError as e:
        print(f"tfqm: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
