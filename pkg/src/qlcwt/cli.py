"""Command-line front end.

Every subcommand writes a JSON report (stdout, and ``--report PATH`` when
given) carrying the configuration, its SHA-256 hash, the grid geometry and the
tolerances used.  Exit codes: 0 success, 1 I/O / parse / parameter error,
2 a verified identity or inequality failed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .convolution import convolution_theorem_report
from .errors import DomainError, FormatError, QLCWTError
from .io import (
    read_mask,
    read_qwc,
    read_signal,
    resolve_lct,
    wavelet_from_spec,
    write_energy_csv,
    write_pgm16,
    write_qsg,
    write_qwc,
    write_signal_csv,
)
from .quaternion import Grid2D, l2_norm
from .signals import KINDS, gaussian, parse_signal_spec, synthesize
from .transform import (
    covariance_residuals,
    kernel_bound_report,
    parseval_report,
    qlcwt_forward,
    qlcwt_inverse,
)
from .uncertainty import (
    heisenberg_report,
    local_concentration_report,
    local_inequality_report,
    logarithmic_report,
)
from .wavelets import GroupGrid, admissibility_constant, default_probes

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2

DEFAULT_TOL = {
    "convolution": 1e-5,
    "parseval": 0.05,
    "energy": 0.05,
    "covariance_exact": 1e-8,
    "covariance_interp": 1e-6,
    "kernel_diagonal": 1e-6,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _geometry(p: argparse.ArgumentParser, group: bool = True) -> None:
    p.add_argument("--n", type=int, default=64, help="samples per axis (default 64)")
    p.add_argument("--length", type=float, default=16.0, help="window length per axis (default 16)")
    if group:
        p.add_argument("--a-min", type=float, default=2.0**-3)
        p.add_argument("--a-max", type=float, default=2.0**3)
        p.add_argument("--scales", type=int, default=25, help="number of scales M")
        p.add_argument("--angles", type=int, default=8, help="number of angles")


def _lct_args(p):
    p.add_argument("--lct", help="LCT pair JSON file (overrides --preset)")
    p.add_argument("--preset", default="qwt", help="qwt|qft|fresnel:<b1>,<b2>|fractional:<alpha>")


def _common(p):
    p.add_argument("--report", help="also write the JSON report to this path")
    p.add_argument("--threads", type=int, default=None, help="worker cap (falls back to QLCWT_THREADS)")
    p.add_argument("--tol", type=float, default=None, help="override the check tolerance")


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1; 2 is reserved for failed mathematical checks."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qlcwt", description="Quaternion linear canonical wavelet transform toolkit")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synthesize", help="write a test signal")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("params", nargs="*", type=float, help="sigma | sigma c | alpha1 alpha2 | lambda")
    p.add_argument("-o", "--output", required=True, help=".qsg or .csv path")
    _geometry(p, group=False)
    _common(p)

    p = sub.add_parser("transform", help="forward transform to a QWC1 file")
    p.add_argument("--signal", required=True)
    p.add_argument("--wavelet", default='{"type":"dog","lambda":0.5}')
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--method", choices=("fast", "direct"), default="fast")
    _geometry(p)
    _lct_args(p)
    _common(p)

    p = sub.add_parser("inverse", help="reconstruct a signal from a QWC1 file")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--wavelet", default='{"type":"dog","lambda":0.5}')
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--reference", help="signal to compare the reconstruction with")
    p.add_argument("--probes", type=int, default=8)
    _common(p)

    p = sub.add_parser("admissibility", help="admissibility constant at probe frequencies")
    p.add_argument("--wavelet", default='{"type":"dog","lambda":0.5}')
    p.add_argument("--probes", type=int, default=8)
    _geometry(p)
    _common(p)

    p = sub.add_parser("verify", help="numerically certify an identity or inequality")
    p.add_argument("what", choices=("convolution", "parseval", "energy", "covariance", "kernel", "uncertainty"))
    p.add_argument("--signal", help="signal file, or kind[:params] such as gaussian:1")
    p.add_argument("--signal2", help="second signal for parseval (default: the first)")
    p.add_argument("--wavelet", default='{"type":"dog","lambda":0.5}', help="wavelet spec JSON, file, or .qsg for convolution")
    p.add_argument("--kind", choices=("heisenberg", "log", "local"), default="heisenberg")
    p.add_argument("--axis", type=int, default=1, choices=(1, 2))
    p.add_argument("--mask", help="PGM mask over y for local inequalities")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--scale-index", type=int, default=None, help="scale index for the local concentration check")
    p.add_argument("--pairs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--probes", type=int, default=8)
    _geometry(p)
    _lct_args(p)
    _common(p)

    p = sub.add_parser("energy-map", help="|W|^2 of one (scale, angle) slice as PGM or CSV")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--scale", type=int, required=True)
    p.add_argument("--angle", type=int, required=True)
    p.add_argument("-o", "--output", required=True, help=".pgm or .csv path")
    _common(p)
    return ap


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("report",)}
    return json.loads(json.dumps(cfg, default=str))


def _config_hash(cfg: dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()


def _threads(args) -> int | None:
    if args.threads is not None:
        if args.threads < 1:
            raise DomainError("--threads must be positive")
        return args.threads
    env = os.environ.get("QLCWT_THREADS")
    if env:
        try:
            val = int(env)
        except ValueError as exc:
            raise DomainError(f"QLCWT_THREADS={env!r} is not an integer") from exc
        return val if val > 0 else None
    return None


def _grid(args) -> Grid2D:
    if args.n < 2 or not args.length > 0:
        raise DomainError("--n must be >= 2 and --length positive")
    return Grid2D.centered(args.n, args.length)


def _group(args, grid: Grid2D) -> GroupGrid:
    return GroupGrid(grid, args.a_min, args.a_max, args.scales, args.angles)


def _load_signal(spec: str | None, grid: Grid2D | None):
    """A file path if it exists, else ``kind[:params]`` synthesized on ``grid``."""
    if spec is None:
        return "gaussian:1", gaussian(grid)
    if Path(spec).exists():
        return spec, read_signal(spec)
    if grid is None:
        raise FormatError(f"signal file {spec} not found")
    try:
        return parse_signal_spec(spec, grid)
    except DomainError as exc:
        raise FormatError(f"{spec!r} is neither a file nor a signal spec ({exc})") from exc


def _tol(args, key):
    if args.tol is not None:
        if args.tol < 0:
            raise DomainError("--tol must be non-negative")
        return args.tol
    return DEFAULT_TOL[key]


def _emit(args, body: dict, passed: bool = True) -> int:
    cfg = _config(args)
    report = {
        "command": args.command,
        "version": __version__,
        "config": cfg,
        "config_hash": _config_hash(cfg),
        "passed": bool(passed),
        **body,
    }
    text = json.dumps(report, indent=2, sort_keys=True, default=_json_default)
    print(text)
    if getattr(args, "report", None):
        Path(args.report).write_text(text + "\n")
    return EXIT_OK if passed else EXIT_FAILED


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return str(obj)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_synthesize(args) -> int:
    grid = _grid(args)
    f = synthesize(args.kind, grid, *args.params)
    out = Path(args.output)
    if out.suffix.lower() == ".csv":
        write_signal_csv(out, f)
    else:
        write_qsg(out, f)
    return _emit(args, {"output": str(out), "grid": grid.to_dict(), "norm2": l2_norm(f) ** 2})


def cmd_transform(args) -> int:
    label, f = _load_signal(args.signal, None)
    grid = f.grid
    psi = wavelet_from_spec(args.wavelet, grid)
    gg = GroupGrid(grid, args.a_min, args.a_max, args.scales, args.angles)
    P = resolve_lct(args.lct, args.preset)
    t0 = time.perf_counter()
    W = qlcwt_forward(f, psi, gg, P, method=args.method, workers=_threads(args))
    write_qwc(args.output, W)
    return _emit(
        args,
        {
            "signal": label,
            "output": args.output,
            "grid": grid.to_dict(),
            "group_grid": gg.to_dict(),
            "lct": P.to_dict(),
            "energy": W.energy(),
            "seconds": time.perf_counter() - t0,
        },
    )


def cmd_inverse(args) -> int:
    W = read_qwc(args.coeffs)
    psi = wavelet_from_spec(args.wavelet, W.source)
    C = admissibility_constant(psi, W.group_grid, default_probes(args.probes)).mean
    rec = qlcwt_inverse(W, psi, C)
    write_qsg(args.output, rec)
    body = {"output": args.output, "C": C, "grid": W.source.to_dict()}
    if args.reference:
        ref = read_signal(args.reference)
        body["relative_error"] = l2_norm(rec - ref) / l2_norm(ref)
    return _emit(args, body)


def cmd_admissibility(args) -> int:
    grid = _grid(args)
    psi = wavelet_from_spec(args.wavelet, grid)
    res = admissibility_constant(psi, _group(args, grid), default_probes(args.probes))
    return _emit(args, {"admissibility": res.to_dict(), "wavelet": psi.to_spec()})


def _verify_convolution(args, grid):
    label, f = _load_signal(args.signal, grid)
    wspec = args.wavelet
    if Path(wspec).exists() and not wspec.endswith(".json"):
        psi = read_signal(wspec)
    else:
        psi = wavelet_from_spec(wspec, f.grid).signal
    P = resolve_lct(args.lct, args.preset)
    rep = convolution_theorem_report(f, psi, P)
    tol = _tol(args, "convolution")
    return {"signal": label, "tolerance": tol, **rep}, rep["residual"] < tol


def _verify_parseval(args, grid, same: bool):
    label, f = _load_signal(args.signal, grid)
    if same or not args.signal2:
        g, label2 = f, label
    else:
        label2, g = _load_signal(args.signal2, f.grid)
    psi = wavelet_from_spec(args.wavelet, f.grid)
    gg = _group(args, f.grid)
    P = resolve_lct(args.lct, args.preset)
    C = admissibility_constant(psi, gg, default_probes(args.probes)).mean
    rep = parseval_report(f, g, psi, gg, P, C)
    tol = _tol(args, "energy" if same else "parseval")
    body = {"signals": [label, label2], "tolerance": tol, "group_grid": gg.to_dict(), "lct": P.to_dict(), **rep}
    return body, rep["residual"] < tol


def _verify_covariance(args, grid):
    psi = wavelet_from_spec(args.wavelet, grid)
    P = resolve_lct(args.lct, args.preset)

    rep = covariance_residuals(_gauss_q, psi, grid, P)
    exact = _tol(args, "covariance_exact")
    interp = _tol(args, "covariance_interp")
    checks = {
        "i_linearity": rep["i_linearity"] < exact,
        "v_parity": rep["v_parity"] < exact,
        "ii_antilinearity": rep["ii_antilinearity"] < interp,
        "vi_dilation": rep["vi_dilation"] < interp,
    }
    return {"residuals": rep, "checks": checks, "tolerance": {"exact": exact, "interpolated": interp}}, all(checks.values())


def _gauss_q(x1, x2):
    """Gaussian-windowed signal with all four components populated."""
    z = np.exp(-(x1**2 + x2**2) / 2)
    return np.stack([z, 0.5 * x1 * z, -0.25 * x2 * z, 0.1 * x1 * x2 * z], axis=-1)


def _verify_kernel(args, grid):
    psi = wavelet_from_spec(args.wavelet, grid)
    gg = _group(args, grid)
    P = resolve_lct(args.lct, args.preset)
    rep = kernel_bound_report(psi, gg, P, pairs=args.pairs, seed=args.seed)
    tol = _tol(args, "kernel_diagonal")
    return {"tolerance": tol, **rep}, rep["holds"] and rep["diagonal_residual"] < tol


def _verify_uncertainty(args, grid):
    label, f = _load_signal(args.signal, grid)
    grid = f.grid
    psi = wavelet_from_spec(args.wavelet, grid)
    gg = _group(args, grid)
    P = resolve_lct(args.lct, args.preset)
    W = qlcwt_forward(f, psi, gg, P, check=False, workers=_threads(args))
    C = admissibility_constant(psi, gg, default_probes(args.probes)).mean
    if args.kind == "heisenberg":
        rep = heisenberg_report(f, psi, gg, P, args.axis, W=W, C=C, signal_id=label)
        reports = [rep]
    elif args.kind == "log":
        reports = [logarithmic_report(f, psi, gg, P, W=W, C=C, signal_id=label)]
    else:
        if args.mask:
            E = read_mask(args.mask, grid.shape)
        else:
            y1, y2 = grid.mesh()
            E = y1**2 + y2**2 < 0.5 / math.pi  # area 1/2
        m = gg.n_scales // 2 if args.scale_index is None else args.scale_index
        reports = [
            local_concentration_report(f, psi, gg, P, E, m, 0, W=W, signal_id=label),
            local_inequality_report(f, psi, gg, P, E, args.alpha, W=W, signal_id=label),
        ]
    body = {"reports": [r.to_dict() for r in reports]}
    return body, all(r.holds for r in reports)


def cmd_verify(args) -> int:
    grid = _grid(args)
    what = args.what
    if what == "convolution":
        body, ok = _verify_convolution(args, grid)
    elif what in ("parseval", "energy"):
        body, ok = _verify_parseval(args, grid, same=(what == "energy"))
    elif what == "covariance":
        body, ok = _verify_covariance(args, grid)
    elif what == "kernel":
        body, ok = _verify_kernel(args, grid)
    else:
        body, ok = _verify_uncertainty(args, grid)
    return _emit(args, body, ok)


def cmd_energy_map(args) -> int:
    W = read_qwc(args.coeffs)
    M, L = W.coeffs.shape[:2]
    if not (0 <= args.scale < M and 0 <= args.angle < L):
        raise DomainError(f"slice ({args.scale}, {args.angle}) outside {M}x{L}")
    energy = W.energy_density()[args.scale, args.angle]
    out = Path(args.output)
    body = {"output": str(out), "scale": float(W.group_grid.scales[args.scale]), "angle": float(W.group_grid.angles[args.angle])}
    if out.suffix.lower() == ".csv":
        write_energy_csv(out, W.group_grid.ygrid, energy)
    else:
        body["pgm_full_scale"] = write_pgm16(out, energy)
    body["max"] = float(energy.max())
    return _emit(args, body)


COMMANDS = {
    "synthesize": cmd_synthesize,
    "transform": cmd_transform,
    "inverse": cmd_inverse,
    "admissibility": cmd_admissibility,
    "verify": cmd_verify,
    "energy-map": cmd_energy_map,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (OSError, QLCWTError, json.JSONDecodeError, KeyError) as exc:
        print(f"qlcwt {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
