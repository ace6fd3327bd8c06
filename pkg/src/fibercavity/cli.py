"""Command-line front end.

Exit status: 0 on success, 1 when a computation fails, 2 for usage errors
(including physically invalid flag values).  Every error is reported on
stderr as a single ``E_<CODE>: message`` line.
"""
import argparse
import contextlib
import json
import sys

import numpy as np

from . import cavity, design, fiber, scanio
from .errors import FiberCavityError

DEFAULT_WAVELENGTH_UM = 0.778
DEFAULT_DIAMETER_UM = 1.5
DEFAULT_LENGTH_MM = 20.5
DEFAULT_R = 0.90


class UsageError(Exception):
    def __init__(self, message, code="E_USAGE"):
        self.code = code
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        usage = " ".join(self.format_usage().split())
        raise UsageError(f"{message}; {usage}")


@contextlib.contextmanager
def _flags():
    """Flag validation block: domain errors become usage errors (exit 2)."""
    try:
        yield
    except FiberCavityError as exc:
        raise UsageError(str(exc), exc.code) from exc


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _wavelength(p):
    p.add_argument("--wavelength-um", type=float, default=DEFAULT_WAVELENGTH_UM,
                   help="vacuum wavelength in μm (default 0.778)")


def _geometry(p):
    p.add_argument("--diameter-um", type=float, default=DEFAULT_DIAMETER_UM,
                   help="core diameter in μm (default 1.5)")
    p.add_argument("--n-core", type=float, default=None,
                   help="core index (default: fused-silica Sellmeier at the wavelength)")
    p.add_argument("--n-clad", type=float, default=1.0, help="cladding index (default 1.0)")


def _cavity(p, length=DEFAULT_LENGTH_MM):
    p.add_argument("--length-mm", type=float, default=length, help=f"cavity length in mm (default {length:g})")
    p.add_argument("--r1", type=float, default=DEFAULT_R, help="mirror 1 power reflectivity (default 0.90)")
    p.add_argument("--r2", type=float, default=DEFAULT_R, help="mirror 2 power reflectivity (default 0.90)")
    p.add_argument("--loss", type=float, default=0.0, help="power loss per fiber-mirror reflection")


def _neff(p):
    p.add_argument("--neff", type=float, default=None,
                   help="effective index (default: solve HE11 for --diameter-um)")


def build_parser():
    parser = _Parser(prog="fibercavity", description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=None, help="write output to PATH instead of stdout")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("modes", help="solve and list guided vector modes")
    _wavelength(p)
    _geometry(p)
    p.add_argument("--l-max", type=int, default=None, help="highest azimuthal order (<= 12)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("fsr", help="free spectral range in GHz")
    p.add_argument("--neff", type=float, required=True)
    p.add_argument("--length-mm", type=float, default=DEFAULT_LENGTH_MM)

    p = sub.add_parser("spectrum", help="synthetic Airy transmission CSV")
    _wavelength(p)
    _geometry(p)
    _cavity(p)
    _neff(p)
    p.add_argument("--periods", type=float, default=3.0, help="span in free spectral ranges")
    p.add_argument("--points", type=int, default=4000)

    p = sub.add_parser("qsweep", help="Q versus per-reflection loss table")
    _wavelength(p)
    _geometry(p)
    _neff(p)
    p.add_argument("--length-mm", type=float, default=20.0, help="cavity length in mm (default 20)")
    p.add_argument("--reflectivities", type=_float_list, default=list(cavity.DEFAULT_REFLECTIVITIES))
    p.add_argument("--loss-max", type=float, default=0.2)
    p.add_argument("--loss-points", type=int, default=41)

    p = sub.add_parser("design-sweep", help="mode volume and air fraction versus core diameter")
    _wavelength(p)
    p.add_argument("--min-nm", type=float, default=200.0)
    p.add_argument("--max-nm", type=float, default=1500.0)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--length-mm", type=float, default=1.0)
    p.add_argument("--air-quantity", choices=("sz", "e2", "energy"), default="sz")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("optimal-diameter", help="core diameter of minimum mode volume")
    _wavelength(p)
    p.add_argument("--min-nm", type=float, default=200.0)
    p.add_argument("--max-nm", type=float, default=1000.0)
    p.add_argument("--length-mm", type=float, default=1.0)
    p.add_argument("--tol-nm", type=float, default=1.0)

    p = sub.add_parser("analyze-scan", help="peaks, FSR, finesse and Q of a transmission scan")
    p.add_argument("input", help="CSV file, or - for stdin")
    _wavelength(p)
    p.add_argument("--prominence", type=float, default=scanio.DEFAULT_PROMINENCE,
                   help="minimum peak prominence as a fraction of the maximum (default 0.1)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("table1", help="beta, n_eff and FSR for the SMF830 and holey-fiber cavities")
    _wavelength(p)
    p.add_argument("--diameter-um", type=float, default=DEFAULT_DIAMETER_UM)
    p.add_argument("--length-mm", type=float, default=DEFAULT_LENGTH_MM)
    return parser


def _ctx(args):
    return fiber.WavelengthContext(args.wavelength_um)


def _geom(args, ctx):
    n_core = fiber.silica_index(ctx.lambda0) if args.n_core is None else args.n_core
    return fiber.FiberGeometry(0.5 * args.diameter_um, n_core, args.n_clad)


def _resolve_neff(args, geom, ctx):
    if args.neff is not None:
        if not args.neff >= 1.0:
            raise UsageError(f"--neff must be >= 1, got {args.neff}", "E_DOMAIN")
        return args.neff
    return fiber.fundamental_mode(geom, ctx).n_eff


def cmd_modes(args):
    with _flags():
        ctx = _ctx(args)
        geom = _geom(args, ctx)
        if args.l_max is not None and not 0 <= args.l_max <= fiber.MAX_AZIMUTHAL_ORDER:
            raise UsageError(f"--l-max must lie in [0, {fiber.MAX_AZIMUTHAL_ORDER}]", "E_DOMAIN")
    modes = fiber.solve_modes(geom, ctx, args.l_max)
    if args.format == "json":
        doc = [
            {"name": m.name, "family": m.family, "l": m.l, "m": m.m, "n_eff": m.n_eff,
             "beta_um_inv": m.beta, "U": m.U, "W": m.W, "V": m.V}
            for m in modes
        ]
        return json.dumps(doc, indent=2) + "\n"
    lines = ["name,family,l,m,n_eff,beta_um_inv,U,W,V"]
    for m in modes:
        lines.append(f"{m.name},{m.family},{m.l},{m.m},{m.n_eff:.12f},{m.beta:.10f},"
                     f"{m.U:.10f},{m.W:.10f},{m.V:.10f}")
    return "\n".join(lines) + "\n"


def cmd_fsr(args):
    with _flags():
        fsr = cavity.free_spectral_range(args.neff, args.length_mm)
    return f"{fsr:.3g}\n"


def cmd_spectrum(args):
    with _flags():
        ctx = _ctx(args)
        spec = cavity.CavitySpec(args.length_mm, args.r1, args.r2, args.loss)
        geom = _geom(args, ctx) if args.neff is None else None
        if args.points < 2 or not args.periods > 0:
            raise UsageError("--points must be >= 2 and --periods positive", "E_DOMAIN")
    n_eff = _resolve_neff(args, geom, ctx)
    fsr = cavity.free_spectral_range(n_eff, spec.length_mm)
    grid = np.linspace(-0.5 * fsr, (args.periods - 0.5) * fsr, args.points)
    return cavity.airy_transmission(spec, n_eff, ctx.lambda0, grid).to_csv()


def cmd_qsweep(args):
    with _flags():
        ctx = _ctx(args)
        geom = _geom(args, ctx) if args.neff is None else None
        for r in args.reflectivities:
            cavity.CavitySpec(args.length_mm, r, r, 0.0)
        if not 0.0 <= args.loss_max < 1.0 or args.loss_points < 2:
            raise UsageError("--loss-max must lie in [0, 1) and --loss-points be >= 2", "E_DOMAIN")
    n_eff = _resolve_neff(args, geom, ctx)
    losses = np.linspace(0.0, args.loss_max, args.loss_points)
    rows = cavity.q_vs_loss_sweep(args.length_mm, args.reflectivities, losses, n_eff, ctx.lambda0)
    meta = "# q_definition: optical frequency / linewidth\n"
    return meta + cavity.sweep_to_csv(rows)


def cmd_design_sweep(args):
    with _flags():
        ctx = _ctx(args)
        design._check_diameters(args.min_nm, args.max_nm)
        if args.points < 2 or not args.length_mm > 0:
            raise UsageError("--points must be >= 2 and --length-mm positive", "E_DOMAIN")
    pts = design.design_sweep((args.min_nm, args.max_nm), args.points, ctx, args.length_mm,
                              air_quantity=args.air_quantity, workers=args.workers)
    return design.sweep_to_csv(pts, air_quantity=args.air_quantity)


def cmd_optimal_diameter(args):
    with _flags():
        ctx = _ctx(args)
        design._check_diameters(args.min_nm, args.max_nm)
        if not args.length_mm > 0 or not args.tol_nm > 0:
            raise UsageError("--length-mm and --tol-nm must be positive", "E_DOMAIN")
    d, v = design.optimal_diameter(ctx, args.length_mm, (args.min_nm, args.max_nm), args.tol_nm)
    pt = design.design_point(d, ctx, args.length_mm)
    return ("diameter_nm,mode_volume_um3,air_fraction\n"
            f"{d:.3f},{v:.10g},{pt.air_fraction:.10g}\n")


def cmd_analyze_scan(args):
    with _flags():
        ctx = _ctx(args)
        if not 0.0 < args.prominence < 1.0:
            raise UsageError("--prominence must lie in (0, 1)", "E_DOMAIN")
    try:
        if args.input == "-":
            record = scanio.load_scan(sys.stdin.buffer, source_label="stdin")
        else:
            with open(args.input, "rb") as fh:
                record = scanio.load_scan(fh, source_label=args.input)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}", "E_IO") from exc
    report = scanio.analyze(record, ctx.lambda0, args.prominence)
    return report.to_json() if args.format == "json" else report.to_csv()


def cmd_table1(args):
    with _flags():
        ctx = _ctx(args)
        n_core = fiber.silica_index(ctx.lambda0)
        geom = fiber.FiberGeometry(0.5 * args.diameter_um, n_core, 1.0)
        cavity.free_spectral_range(1.0, args.length_mm)
    smf = fiber.effective_index_weak(n_core, ctx)
    holey = fiber.fundamental_mode(geom, ctx)
    lines = ["fiber,beta_um_inv,n_eff,fsr_ghz"]
    for label, mode in (("SMF830", smf), ("Holey Fiber", holey)):
        fsr = cavity.free_spectral_range(mode.n_eff, args.length_mm)
        lines.append(f"{label},{mode.beta:.4f},{mode.n_eff:.4f},{fsr:.4f}")
    return "\n".join(lines) + "\n"


COMMANDS = {
    "modes": cmd_modes,
    "fsr": cmd_fsr,
    "spectrum": cmd_spectrum,
    "qsweep": cmd_qsweep,
    "design-sweep": cmd_design_sweep,
    "optimal-diameter": cmd_optimal_diameter,
    "analyze-scan": cmd_analyze_scan,
    "table1": cmd_table1,
}


def run(argv, stdout=None, stderr=None):
    """Run the CLI on ``argv``; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            # --help / --version
            return int(exc.code or 0)
        text = COMMANDS[args.command](args)
    except UsageError as exc:
        stderr.write(f"{exc.code}: {' '.join(str(exc).split())}\n")
        return 2
    except FiberCavityError as exc:
        stderr.write(f"{exc.code}: {' '.join(str(exc).split())}\n")
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
