"""Command-line front end.

Subcommands wire the library into reproducible runs: exact spectra, partition
checks, grid eigensolves, nodal audits, capacity experiments, lattice scans,
and a report mode that renders figures next to the delimited output.  Every
emitted file embeds the resolved configuration and the tool version, and a
fixed (config, seed) pair produces byte-identical output.

Exit codes: 0 success / inequality holds, 1 usage or configuration error,
2 a checked inequality or membership claim failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .counting import count
from .capacity import CapacityProblem, capacity, polar_scaling, verify_capreg
from .eigensolver import amplitude_image, as_numeric_spectrum, assemble, smallest_k
from .errors import CourantLabError
from .exact_spectra import ExactSpectrum, RectSpec, Scale, enumerate_spectrum
from .fixtures import (
    FIXTURE_NAMES,
    fixture_exact_spectrum,
    fixture_geometry,
    sec61_halves_family,
)
from .grid import GridGeometry, save_mask
from .images import write_pgm
from .lattice import deficit, sharpness_scan
from .nodal import courant_audit, extract, nodal_image
from .partition_check import check_converse, check_main, check_subset, check_weak


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# config resolution and output plumbing


def _apply_config_file(args: argparse.Namespace, parser: _Parser) -> None:
    if not getattr(args, "config", None):
        return
    path = Path(args.config)
    if not path.exists():
        parser.error(f"config file not found: {path}")
    valid = set(vars(args))
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            parser.error(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in valid or key in ("config", "command", "func"):
            parser.error(f"{path}:{lineno}: unknown config key {key!r}")
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, value.lower() in ("1", "true", "yes", "on"))
        elif isinstance(current, int):
            setattr(args, key, int(value))
        elif isinstance(current, float):
            setattr(args, key, float(value))
        else:
            setattr(args, key, value)


def _resolved_config(args: argparse.Namespace) -> dict:
    skip = {"func", "command", "config", "output"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = value if isinstance(value, (int, float, bool, type(None))) else str(value)
    return out


def _emit_json(args, result: dict) -> None:
    doc = {
        "tool": "courantlab",
        "version": __version__,
        "command": args.command,
        "config": _resolved_config(args),
        "result": result,
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    _write(args, text)


def _csv_header(args) -> list[str]:
    lines = [f"# tool=courantlab version={__version__} command={args.command}"]
    lines += [f"# {k}={v}" for k, v in _resolved_config(args).items()]
    return lines


def _emit_csv(args, columns: list[str], rows: list[list]) -> None:
    lines = _csv_header(args)
    lines.append(",".join(columns))
    lines += [",".join(str(x) for x in row) for row in rows]
    _write(args, "\n".join(lines) + "\n")


def _emit_table(args, lines: list[str]) -> None:
    header = [f"courantlab {__version__} :: {args.command}"]
    header += [f"  {k} = {v}" for k, v in _resolved_config(args).items()]
    _write(args, "\n".join(header + [""] + lines) + "\n")


def _write(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_fraction(text: str, parser: _Parser, flag: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        parser.error(f"{flag} expects a rational like 1/4 or 5, got {text!r}")


# ---------------------------------------------------------------------------
# spectrum


def cmd_spectrum(args, parser) -> int:
    p1 = _parse_fraction(args.p1, parser, "--p1")
    p2 = _parse_fraction(args.p2, parser, "--p2")
    qmax = _parse_fraction(args.qmax, parser, "--qmax")
    spectrum = enumerate_spectrum(RectSpec(p1, p2, Scale(args.scale)), qmax)
    if args.format == "json":
        _emit_json(args, spectrum.to_json())
    elif args.format == "csv":
        rows = [[str(e.q), e.multiplicity,
                 ";".join(f"{m}x{n}" for m, n in e.modes)] for e in spectrum.entries]
        _emit_csv(args, ["q", "multiplicity", "modes"], rows)
    else:
        width = max((len(str(e.q)) for e in spectrum.entries), default=1)
        lines = [f"  {'q':>{width}}  mult  modes"]
        lines += [f"  {str(e.q):>{width}}  {e.multiplicity:>4}  "
                  + " ".join(f"({m},{n})" for m, n in e.modes)
                  for e in spectrum.entries]
        lines.append(f"  total modes: {spectrum.total_modes}")
        _emit_table(args, lines)
    return 0


# ---------------------------------------------------------------------------
# check


def _check_inputs(args, parser):
    lam = _parse_fraction(args.lam, parser, "--lam")
    qmax = _parse_fraction(args.qmax, parser, "--qmax") if args.qmax else max(lam, Fraction(5))
    if qmax < lam:
        parser.error(f"--qmax {qmax} is below --lam {lam}")
    if args.spec0:
        try:
            spec0 = ExactSpectrum.load(args.spec0)
            subs = [ExactSpectrum.load(p) for p in args.sub or []]
            star = ExactSpectrum.load(args.star) if args.star else None
        except (OSError, KeyError, ValueError) as exc:
            parser.error(f"cannot load spectrum file: {exc}")
        if not subs:
            parser.error("--spec0 requires at least one --sub file")
        return lam, spec0, subs, star
    if args.fixture != "sec61-halves":
        parser.error("built-in check fixture is 'sec61-halves'; otherwise pass --spec0/--sub")
    spec0 = fixture_exact_spectrum("sec61-rect", qmax)
    square = fixture_exact_spectrum("pi-square", qmax)
    return lam, spec0, [square, square], spec0


def _triple_table(per_domain) -> list[str]:
    lines = ["  domain   n_lower  n_mid  n_upper  eigenvalue"]
    for i, t in enumerate(per_domain):
        name = "parent" if i == 0 else f"sub {i}"
        lines.append(f"  {name:<8} {t.n_lower:>7}  {t.n_mid:>5}  {t.n_upper:>7}  "
                     f"{'yes' if t.is_eigenvalue else 'no'}")
    return lines


def cmd_check(args, parser) -> int:
    lam, spec0, subs, star = _check_inputs(args, parser)
    if args.mode == "main":
        report = check_main(spec0, subs, lam)
        failed = not report.holds
        lines = _triple_table(report.per_domain)
        sharp = report.variant == "main" and report.equality
        lines += ["", f"  variant: {report.variant}",
                  f"  lhs = {report.lhs}, rhs = {report.rhs}",
                  f"  holds: {report.holds}" + ("  EQUALITY" if sharp else "")]
    elif args.mode == "weak":
        report = check_weak(spec0, subs, lam)
        failed = not report.holds
        lines = _triple_table(report.per_domain)
        lines += ["", f"  lhs = {report.lhs} <= n_upper(parent) = {report.n_upper_0}: "
                  f"{report.holds}"]
    elif args.mode == "converse":
        report = check_converse(spec0, subs, lam)
        failed = report.falsified
        lines = [f"  sum of subdomain counts: {report.sum_upper}",
                 f"  parent n_mid: {report.n_mid_0}",
                 f"  hypothesis holds: {report.hypothesis_holds}",
                 f"  membership: {report.membership}"]
    else:  # subset
        L = [int(x) for x in args.L.split(",") if x]
        if not L or any(not 1 <= l <= len(subs) for l in L):
            parser.error(f"--L must pick subdomains in 1..{len(subs)}")
        if star is not None and not args.spec0 and sorted(L) != [1, 2]:
            # both halves reconstitute the parent; a single half is its own interior
            star = subs[L[0] - 1]
        if star is None:
            parser.error("--mode subset needs a --star spectrum")
        equality = check_main(spec0, subs, lam).equality
        report = check_subset(spec0, subs, L, star, lam, equality)
        failed = not report.holds
        lines = [f"  L = {list(report.L)}  form: {report.form}",
                 f"  sum over L: {report.sum_upper_L}",
                 f"  n(star): {report.n_star}  min branches: "
                 f"sub {report.min_sub_diff} / star {report.star_diff}",
                 f"  holds: {report.holds}"]
    if args.format == "json":
        _emit_json(args, report.to_json())
    else:
        _emit_table(args, lines)
    return 2 if failed else 0


# ---------------------------------------------------------------------------
# solve / nodal


def _geometry(args, parser) -> GridGeometry:
    try:
        return fixture_geometry(args.fixture, args.divisor)
    except KeyError as exc:
        parser.error(str(exc))


def cmd_solve(args, parser) -> int:
    geometry = _geometry(args, parser)
    _progress(f"assembling {args.fixture} ({geometry.n_interior} nodes)")
    H = assemble(geometry)
    _progress(f"solving {args.k} smallest eigenpairs (seed {args.seed})")
    pairs = smallest_k(H, args.k, tol=args.tol, seed=args.seed)
    result = {
        "fixture": args.fixture,
        "n_interior": geometry.n_interior,
        "h": geometry.h,
        "values": [p.value for p in pairs],
        "residuals": [p.residual for p in pairs],
    }
    if args.image:
        outdir = Path(args.image)
        outdir.mkdir(parents=True, exist_ok=True)
        save_mask(geometry, str(outdir / f"{args.fixture}-mask"))
        for i, p in enumerate(pairs, 1):
            write_pgm(amplitude_image(geometry, p.vector),
                      outdir / f"{args.fixture}-u{i}.pgm")
        _progress(f"wrote images to {outdir}")
    if args.format == "csv":
        _emit_csv(args, ["k", "value", "residual"],
                  [[i + 1, p.value, p.residual] for i, p in enumerate(pairs)])
    else:
        _emit_json(args, result)
    return 0


def cmd_nodal(args, parser) -> int:
    geometry = _geometry(args, parser)
    _progress(f"assembling {args.fixture} ({geometry.n_interior} nodes)")
    H = assemble(geometry)
    _progress(f"auditing nodal counts up to k={args.k}")
    audit = courant_audit(H, args.k, tol=args.tol, cluster_tol=args.cluster_tol,
                          zero_tol=args.zero_tol, seed=args.seed)
    if args.image:
        outdir = Path(args.image)
        outdir.mkdir(parents=True, exist_ok=True)
        for row, decomp in zip(audit.rows, audit.decomps):
            write_pgm(nodal_image(decomp), outdir / f"{args.fixture}-nodal-k{row.k}.pgm")
        _progress(f"wrote images to {outdir}")
    if args.format == "csv":
        _emit_csv(args, ["k", "lam", "mu", "n_mid", "cluster_multiplicity",
                         "holds", "sharp"],
                  [[r.k, r.lam, r.mu, r.n_mid, r.cluster_multiplicity,
                    r.holds, r.sharp] for r in audit.rows])
    else:
        _emit_json(args, audit.to_json())
    return 0 if audit.all_hold else 2


# ---------------------------------------------------------------------------
# capacity


def cmd_capacity(args, parser) -> int:
    if args.task == "annulus":
        R, ratio, h = args.radius, args.ratio, 1.0 / args.inv_h
        r = R / ratio
        half = R + 2 * h
        n = int(round(2 * half / h)) + 1
        coords = -half + h * np.arange(n)
        X, Y = np.meshgrid(coords, coords)
        _progress(f"annulus solve at h=1/{args.inv_h}, R/r={ratio}")
        geom = GridGeometry(n, n, h, (-half, -half), X ** 2 + Y ** 2 < R ** 2)
        cap = capacity(CapacityProblem(geom, X ** 2 + Y ** 2 < r ** 2))
        exact = 2 * np.pi / np.log(ratio)
        _emit_json(args, {"h": h, "R": R, "ratio": ratio, "capacity": cap,
                          "continuum": exact,
                          "relative_error": abs(cap - exact) / exact})
        return 0
    if args.task == "polar":
        ladder = [1.0 / int(x) for x in args.ladder.split(",")]
        _progress(f"polar ladder over h = {ladder}")
        report = polar_scaling(ladder)
        if args.format == "csv":
            _emit_csv(args, ["h", "capacity"], [list(r) for r in report.rows])
        else:
            _emit_json(args, report.to_json())
        return 0
    # capreg: the half-split equality family at energy 5
    family = sec61_halves_family(args.divisor)
    H = assemble(family.parent)
    _progress("solving for the energy-5 eigenvector of the 2:1 rectangle")
    pairs = smallest_k(H, 6, seed=args.seed)
    decomp = extract(pairs[4].vector, family.parent)
    radii = [c * family.parent.h for c in (int(x) for x in args.radii_cells.split(","))]
    _progress(f"regularity test on family boundary nodes, radii {radii}")
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = verify_capreg(decomp, family, radii)
    _emit_json(args, report.to_json())
    return 0 if report.violation_count == 0 else 2


# ---------------------------------------------------------------------------
# lattice / sharp-scan


def cmd_lattice(args, parser) -> int:
    lmax = int(args.lmax)
    points = sorted({int(round(lmax ** (i / (args.points - 1)))) if args.points > 1 else lmax
                     for i in range(args.points)})
    points = [p for p in points if p >= 1]
    rows = []
    for lam in points:
        rep = deficit(lam)
        rows.append([lam, rep.A0_plus, rep.A1_plus, rep.deficit,
                     rep.ratio_to_half_sqrt])
    _emit_csv(args, ["lam", "A0_plus", "A1_plus", "deficit", "ratio"], rows)
    return 0


def cmd_sharp_scan(args, parser) -> int:
    lmax = _parse_fraction(args.lmax, parser, "--lmax")
    _progress(f"exact half-split equality scan up to {lmax}")
    scan = sharpness_scan(lmax)
    if args.format == "csv":
        _emit_csv(args, ["equality_energy"], [[str(q)] for q in scan.equalities])
    else:
        _emit_json(args, scan.to_json())
    return 0


# ---------------------------------------------------------------------------
# report: figures + delimited output in one run


def cmd_report(args, parser) -> int:
    from . import figures

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    div = args.divisor

    _progress("[1/4] exact spectra and equality scan")
    qmax = Fraction(30)
    rect = fixture_exact_spectrum("sec61-rect", qmax)
    square = fixture_exact_spectrum("pi-square", qmax)
    scan = sharpness_scan(200)
    rows = []
    for e in rect.entries:
        r = check_main(rect, [square, square], e.q)
        rows.append([str(e.q), e.multiplicity, r.lhs, r.rhs, r.equality])
    args.output = str(outdir / "sec61_partition.csv")
    _emit_csv(args, ["lam", "multiplicity", "lhs", "rhs", "equality"], rows)
    figures.save_counting_staircase(rect, square, float(qmax),
                                    outdir / "sec61_staircase.png",
                                    labels=("2:1 rectangle", "square"))

    _progress("[2/4] grid eigenpairs and nodal maps")
    geometry = fixture_geometry("pi-square", div)
    H = assemble(geometry)
    pairs = smallest_k(H, 6, seed=args.seed)
    spectrum = as_numeric_spectrum(pairs)
    rows = []
    for k, p in enumerate(pairs[:4], 1):
        decomp = extract(p.vector, geometry)
        triple = count(spectrum, p.value)
        rows.append([k, p.value, decomp.mu, triple.n_mid, p.residual])
        figures.save_eigenfunction(geometry, p.vector, outdir / f"pi_square_u{k}.png",
                                   title=f"eigenfunction {k}")
        figures.save_nodal_map(decomp, outdir / f"pi_square_nodal_{k}.png")
    args.output = str(outdir / "pi_square_eigs.csv")
    _emit_csv(args, ["k", "value", "mu", "n_mid", "residual"], rows)

    _progress("[3/4] lattice deficit scan")
    lams = [int(round(10 ** (0.25 * i))) for i in range(4, 17)]
    rows = []
    for lam in sorted(set(lams)):
        rep = deficit(lam)
        rows.append([lam, rep.A0_plus, rep.A1_plus, rep.deficit,
                     rep.ratio_to_half_sqrt])
    args.output = str(outdir / "lattice_deficit.csv")
    _emit_csv(args, ["lam", "A0_plus", "A1_plus", "deficit", "ratio"], rows)
    figures.save_deficit_curve(rows, outdir / "lattice_deficit.png")

    _progress("[4/4] capacity scaling ladder")
    ladder = [1 / 16, 1 / 32, 1 / 64, 1 / 128]
    polar = polar_scaling(ladder)
    args.output = str(outdir / "capacity_polar.csv")
    _emit_csv(args, ["h", "capacity"], [list(r) for r in polar.rows])
    figures.save_capacity_fit(polar.rows, polar.fit_c, polar.r_squared,
                              outdir / "capacity_fit.png")

    args.output = str(outdir / "manifest.json")
    _emit_json(args, {
        "files": sorted(p.name for p in outdir.iterdir()),
        "scan_equalities": [str(q) for q in scan.equalities],
        "polar_fit_c": polar.fit_c,
        "polar_r_squared": polar.r_squared,
    })
    _progress(f"report written to {outdir}")
    return 0


# ---------------------------------------------------------------------------
# parser wiring


def build_parser() -> _Parser:
    parser = _Parser(prog="courantlab",
                     description="spectra, nodal domains, and counting inequalities")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt="json"):
        p.add_argument("--config", help="key=value file of flag defaults")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--output", help="write to this path instead of stdout")
        p.add_argument("--format", choices=("json", "csv", "table"), default=fmt)

    p = subs.add_parser("spectrum", help="enumerate an exact rectangle spectrum")
    p.add_argument("--p1", required=True, help="rational coefficient of m^2")
    p.add_argument("--p2", required=True, help="rational coefficient of n^2")
    p.add_argument("--scale", choices=("unit", "pi2"), default="unit")
    p.add_argument("--qmax", required=True, help="rational enumeration cutoff")
    common(p, fmt="table")
    p.set_defaults(func=cmd_spectrum)

    p = subs.add_parser("check", help="partition inequality checks at one energy")
    p.add_argument("--fixture", default="sec61-halves")
    p.add_argument("--spec0", help="parent spectrum JSON (overrides --fixture)")
    p.add_argument("--sub", nargs="*", help="subdomain spectrum JSON files")
    p.add_argument("--star", help="reconstituted-interior spectrum JSON")
    p.add_argument("--lam", required=True, help="rational query energy")
    p.add_argument("--qmax", help="rational enumeration cutoff (default: lam)")
    p.add_argument("--mode", choices=("main", "weak", "converse", "subset"),
                   default="main")
    p.add_argument("--L", default="1,2", help="subset members, for --mode subset")
    common(p, fmt="table")
    p.set_defaults(func=cmd_check)

    p = subs.add_parser("solve", help="smallest eigenpairs on a fixture grid")
    p.add_argument("--fixture", choices=FIXTURE_NAMES, default="pi-square")
    p.add_argument("--divisor", type=int, default=64,
                   help="h = pi/divisor (refinement ratio divisor/64 on sec62)")
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--image", help="directory for PGM amplitude images + mask PBM")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = subs.add_parser("nodal", help="nodal-domain audit against the count bound")
    p.add_argument("--fixture", choices=FIXTURE_NAMES, default="pi-square")
    p.add_argument("--divisor", type=int, default=64)
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--cluster-tol", type=float, default=1e-6)
    p.add_argument("--zero-tol", type=float, default=1e-8)
    p.add_argument("--image", help="directory for nodal-domain PGM maps")
    common(p)
    p.set_defaults(func=cmd_nodal)

    p = subs.add_parser("capacity", help="capacity benchmarks and regularity checks")
    p.add_argument("--task", choices=("annulus", "polar", "capreg"), required=True)
    p.add_argument("--radius", type=float, default=0.5, help="outer disk radius (annulus)")
    p.add_argument("--ratio", type=float, default=4.0, help="R/r (annulus)")
    p.add_argument("--inv-h", type=int, default=512, help="1/h (annulus)")
    p.add_argument("--ladder", default="32,64,128,256,512",
                   help="comma list of 1/h values (polar)")
    p.add_argument("--divisor", type=int, default=64, help="grid divisor (capreg)")
    p.add_argument("--radii-cells", default="2,4",
                   help="regularity radii in cells (capreg)")
    common(p)
    p.set_defaults(func=cmd_capacity)

    p = subs.add_parser("lattice", help="deficit scan CSV over log-spaced energies")
    p.add_argument("--lmax", type=float, default=1e4)
    p.add_argument("--points", type=int, default=17)
    common(p, fmt="csv")
    p.set_defaults(func=cmd_lattice)

    p = subs.add_parser("sharp-scan", help="exact equality scan for the half-split")
    p.add_argument("--lmax", required=True, help="rational scan cutoff")
    common(p)
    p.set_defaults(func=cmd_sharp_scan)

    p = subs.add_parser("report", help="figures plus delimited output in one directory")
    p.add_argument("--outdir", required=True)
    p.add_argument("--divisor", type=int, default=32)
    common(p)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_config_file(args, parser)
    try:
        return args.func(args, parser)
    except CourantLabError as exc:
        print(f"courantlab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
