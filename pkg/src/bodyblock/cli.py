"""Command-line entry points: simulate -> image -> stats, plus exports and MoM validation.

Exit codes: 0 ok, 1 runtime error, 2 usage error.
"""

import argparse
import logging
import os
import sys

import numpy as np

from . import dataset, export, pipeline
from .config import load_config
from .diffraction import QuadratureSpec
from .errors import BodyBlockError
from .geometry import build_scene
from .imaging import attenuation_db
from .stats import DEFAULT_BIN_WIDTH_DB, pmf, select_line_array, summary

log = logging.getLogger("bodyblock")


def _positions(text):
    labels = [p.strip().lower() for p in text.split(",") if p.strip()]
    if not labels:
        raise argparse.ArgumentTypeError("expected a comma separated list such as p1,p2,p3")
    return labels


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def cmd_simulate(args):
    scene = build_scene(load_config(args.config) if args.config else None)
    scene = scene.with_manifold(scene.manifold.restricted(args.surfaces, args.rows, args.cols))
    quad = QuadratureSpec.default(
        scene.wavelength, tolerance=args.tolerance, max_refinements=args.max_refinements
    )
    log.info("manifold %s, %d positions, lambda %.6f m", scene.manifold.dims, len(args.positions), scene.wavelength)
    header, grids = pipeline.simulate(scene, args.positions, quad, threads=args.threads)
    dataset.write_dataset(args.out, header, grids)
    print(f"wrote {args.out}: {header.state_count} states x {header.dims} samples")


def _out_dir(path):
    os.makedirs(path, exist_ok=True)
    return path


def cmd_image(args):
    header, grids = dataset.read_dataset(args.inp)
    labels = [args.pos] if args.pos else [p.label for p in header.positions]
    out = _out_dir(args.out_dir)
    for label in labels:
        mean, std = pipeline.image_maps(header, grids, label, surface=args.surface)
        for kind, m in (("mean", mean), ("std", std)):
            stem = os.path.join(out, f"{label}_{kind}_s{args.surface}")
            export.write_map_csv(stem + ".csv", m.values)
            export.write_map_pgm(stem + ".pgm", m.values, sidecar=stem + ".range.txt")
        print(
            f"{label}: {mean.values.shape[0]}x{mean.values.shape[1]} mean {mean.values.min():.3f}..{mean.values.max():.3f} dB, "
            f"std max {std.values.max():.3f} dB -> {out}"
        )


def cmd_stats(args):
    header, grids = dataset.read_dataset(args.inp)
    manifold = header.scene().manifold
    sel = select_line_array(manifold, args.array)
    samples = pipeline.line_array_samples(header, grids, args.pos, sel)
    hist = pmf(samples, args.bin_width)
    s = summary(samples)
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="\n") as fh:
            export.write_pmf_csv(fh, hist)
    else:
        export.write_pmf_csv(sys.stdout, hist)
    # summary goes to stderr when the PMF occupies stdout
    stream = sys.stdout if args.out else sys.stderr
    print(
        f"array {sel.name} (row {sel.fixed_row}, col {sel.fixed_col}, y={sel.y:.4f} m, z={sel.z:.4f} m) pos {args.pos}: "
        f"n={s.count} mean={s.mean:.4f} std={s.std:.4f} min={s.min:.4f} median={s.median:.4f} max={s.max:.4f} dB",
        file=stream,
    )


def cmd_export(args):
    header, grids = dataset.read_dataset(args.inp)
    if not 0 <= args.state < header.state_count:
        raise BodyBlockError(f"state {args.state} not in dataset (0..{header.state_count - 1})")
    ref = grids[0].samples[args.surface]
    att = attenuation_db(grids[args.state].samples[args.surface], ref)
    out = _out_dir(args.out_dir)
    stem = os.path.join(out, f"state{args.state}_s{args.surface}")
    export.write_map_csv(stem + ".csv", att)
    export.write_map_pgm(stem + ".pgm", att, sidecar=stem + ".range.txt")
    print(f"state {args.state} surface {args.surface}: {att.min():.3f}..{att.max():.3f} dB -> {stem}.csv")


def cmd_validate_mom(args):
    from .mom2d import Circle, assemble_and_solve, discretize_contour, scattered_field_2d
    from .oracles import cylinder_series_scattered

    k = 2.0 * np.pi  # unit wavelength
    a = args.radius_lambda
    source = (-3.0 * a if a >= 1 else -3.0, 0.0)
    phi = np.arange(360) * (2 * np.pi / 360)
    rho = max(5.0 * a, abs(source[0]) + 1.0)
    pts = np.column_stack([rho * np.cos(phi), rho * np.sin(phi)])
    ref = cylinder_series_scattered(a, source, pts, k, n_terms=max(40, int(2 * k * a) + 20))
    print(f"PEC cylinder radius {a:g} lambda, line source at {source}, 360 points at rho={rho:g} lambda")
    print("segments_per_lambda,segments,rms_rel_error")
    errs = []
    for spl in (args.segments_per_lambda, 2 * args.segments_per_lambda):
        contour = discretize_contour(Circle(a), spl, k)
        currents = assemble_and_solve(contour, source, k)
        es = scattered_field_2d(contour, currents, pts, k)
        err = float(np.sqrt(np.mean(np.abs(es - ref) ** 2) / np.mean(np.abs(ref) ** 2)))
        errs.append(err)
        print(f"{spl:g},{contour.n},{err:.6e}")
    print(f"refinement reduces error: {'yes' if errs[1] < errs[0] else 'no'}")


def build_parser():
    p = argparse.ArgumentParser(prog="bodyblock", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log per-state progress")
    sub = p.add_subparsers(dest="command", metavar="{simulate,image,stats,export,validate-mom}")
    sub.required = True

    s = sub.add_parser("simulate", help="scenario config -> dataset file")
    s.add_argument("--config", help="key = value scenario file (defaults built in)")
    s.add_argument("--out", required=True)
    s.add_argument("--positions", type=_positions, default=["p1", "p2", "p3"])
    s.add_argument("--surfaces", type=_positive_int, help="keep only the first N surfaces")
    s.add_argument("--rows", type=_positive_int, help="keep N rows centred on the LOS")
    s.add_argument("--cols", type=_positive_int, help="keep N columns centred on the LOS")
    s.add_argument("--threads", type=_positive_int, help="worker threads; results do not depend on it")
    s.add_argument("--tolerance", type=float, default=1e-3)
    s.add_argument("--max-refinements", type=_positive_int, default=4)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("image", help="dataset -> mean/std attenuation maps")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--pos", type=str.lower, help="nominal position (default: all in the file)")
    s.add_argument("--surface", type=int, default=0)
    s.add_argument("--out-dir", default=".")
    s.set_defaults(func=cmd_image)

    s = sub.add_parser("stats", help="dataset + line array -> PMF CSV")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--array", required=True, help="A, B, C or ROW,COL")
    s.add_argument("--pos", type=str.lower, required=True)
    s.add_argument("--bin-width", type=float, default=DEFAULT_BIN_WIDTH_DB)
    s.add_argument("--out", help="CSV path (default stdout)")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("export", help="single-state attenuation map")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--state", type=int, required=True)
    s.add_argument("--surface", type=int, default=0)
    s.add_argument("--out-dir", default=".")
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("validate-mom", help="MoM-2D vs analytic series for a PEC cylinder")
    s.add_argument("--radius-lambda", type=float, default=1.0)
    s.add_argument("--segments-per-lambda", type=float, default=20.0)
    s.set_defaults(func=cmd_validate_mom)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "array", None) and "," in args.array:
        args.array = tuple(int(v) for v in args.array.split(","))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (BodyBlockError, OSError, IndexError, ValueError) as exc:
        print(f"bodyblock {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
