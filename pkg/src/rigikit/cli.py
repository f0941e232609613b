"""Command-line front end.

One subcommand per analysis: ``catalog``, ``symbol``, ``det``, ``rumscan``,
``wavemode``, ``flexcheck``, ``pebble``, ``maxwell``, ``ross``, ``deform``,
``strip`` and ``finite``.  Motif arguments accept either a built-in catalog
name or a path to a motif JSON file.  All floating output is printed with
17 significant digits so golden files round-trip doubles losslessly; all
randomness is controlled by ``--seed``.

Exit codes: 0 success, 1 domain error (one-line diagnostic on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as rio
from .catalog import CATALOG_NAMES, catalog
from .deform import (
    ContinuationError,
    TrapeziumStrip,
    flow_periodic_deform,
    locking_angle,
    transmission,
)
from .frameworks import Motif, flex_space, rigidity_matrix, stress_space
from .laurent import det_interpolate, normalize, poly_text
from .linalg import numerical_rank
from .sparsity import maxwell_report, pebble_game, ross_check
from .symbol import (
    build_symbol,
    mode_multiplicity,
    rum_scan,
    verify_wave_flex,
    wave_flex,
)

G = "%.17g"


def _fmt(x: float) -> str:
    return G % x


def _load_any(source: str, seed: int):
    """Resolve a catalog name or a JSON file into a Motif or FiniteFramework."""
    if source in CATALOG_NAMES:
        return catalog(source, seed)
    path = Path(source)
    if not path.exists():
        raise FileNotFoundError(f"'{source}' is neither a catalog name nor a file")
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "dimension" in data:
        return rio.motif_from_dict(data)
    return rio.framework_from_dict(data)


def _load_motif(source: str, seed: int) -> Motif:
    obj = _load_any(source, seed)
    if not isinstance(obj, Motif):
        raise ValueError(f"'{source}' is a finite framework; this command needs a motif")
    return obj


def _parse_phase(text: str, dimension: int) -> np.ndarray:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != dimension:
        raise ValueError(f"--phase needs {dimension} comma-separated values")
    return np.asarray(parts)


def _out_stream(path: str | None):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def cmd_catalog(args) -> int:
    obj = catalog(args.name, args.seed)
    if isinstance(obj, Motif):
        print(f"{args.name}: motif, dimension {obj.dimension}, "
              f"{obj.vertex_count} vertices, {obj.edge_count} edges")
        payload = rio.motif_to_dict(obj)
    else:
        print(f"{args.name}: finite framework, dimension {obj.dimension}, "
              f"{obj.vertex_count} vertices, {obj.edge_count} edges")
        payload = rio.framework_to_dict(obj)
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.emit}")
    return 0


def cmd_symbol(args) -> int:
    motif = _load_motif(args.motif, args.seed)
    sf = build_symbol(motif)
    print(f"symbol matrix {sf.rows} x {sf.cols} in {motif.dimension} variables")
    for r, edge in enumerate(sf.row_labels):
        for c, (kappa, ax) in enumerate(sf.column_labels):
            p = sf.matrix.entries[r][c]
            if not p.is_zero():
                axis = "xyz"[ax]
                print(f"e{r} {edge} :: v{kappa}{axis} :: {poly_text(p)}")
    return 0


def cmd_det(args) -> int:
    motif = _load_motif(args.motif, args.seed)
    det = det_interpolate(build_symbol(motif).matrix)
    if det.is_zero():
        print("0")
        return 0
    print(poly_text(det if args.raw else normalize(det)))
    return 0


def cmd_rumscan(args) -> int:
    motif = _load_motif(args.motif, args.seed)
    scan = rum_scan(build_symbol(motif), args.grid, threads=args.threads)
    stream, close = _out_stream(args.out)
    try:
        scan.to_csv(stream)
    finally:
        if close:
            stream.close()
    if close:
        print(f"wrote {args.out}: {scan.mu.size} samples, "
              f"{len(scan.support())} with mu > 0")
    return 0


def cmd_wavemode(args) -> int:
    motif = _load_motif(args.motif, args.seed)
    sf = build_symbol(motif)
    s = _parse_phase(args.phase, motif.dimension)
    mu, smin, kernel = mode_multiplicity(sf, s)
    print(f"phase s = ({', '.join(_fmt(x) for x in s)})")
    print(f"mu = {mu}")
    print(f"sigma_min = {_fmt(smin)}")
    for k in range(kernel.shape[1]):
        comps = " ".join(
            f"({_fmt(z.real)}{'+' if z.imag >= 0 else '-'}{_fmt(abs(z.imag))}j)"
            for z in kernel[:, k]
        )
        print(f"flex {k}: {comps}")
    return 0


def cmd_flexcheck(args) -> int:
    motif = _load_motif(args.motif, args.seed)
    sf = build_symbol(motif)
    s = _parse_phase(args.phase, motif.dimension)
    flexes = wave_flex(sf, s)
    if not flexes:
        print("no wave flex at this phase (mu = 0)")
        return 0
    status = 0
    for k, wf in enumerate(flexes):
        res = verify_wave_flex(wf, motif, args.patch)
        ok = res < args.tol
        print(f"flex {k}: patch residual {_fmt(res)} -> {'ok' if ok else 'FAIL'}")
        status = status if ok else 1
    return status


def cmd_pebble(args) -> int:
    obj = _load_any(args.input, args.seed)
    if isinstance(obj, Motif):
        edges = [(i, j) for i, j, _ in obj.edges]
        n = obj.vertex_count
    else:
        edges = list(obj.graph.edges)
        n = obj.vertex_count
    result = pebble_game(n, edges, k=args.k, l=args.l)
    print(result.verdict if result.verdict != "sparse" else "sparse-not-tight")
    print(f"independent edges: {list(result.independent)}")
    if result.rejected:
        print(f"rejected edges: {list(result.rejected)}")
    return 0


def cmd_maxwell(args) -> int:
    obj = _load_any(args.input, args.seed)
    rep = maxwell_report(obj)
    kind = "motif" if rep.periodic else "finite framework"
    print(f"{kind}: {rep.vertices} vertices, {rep.edges} edges, dimension {rep.dimension}")
    print(f"maxwell balance = {rep.maxwell_balance} ({rep.verdict})")
    return 0


def cmd_ross(args) -> int:
    motif = _load_motif(args.motif, args.seed)
    rep = ross_check(motif)
    print(f"balance 2|F_v| - |F_e| = {2 * motif.vertex_count - motif.edge_count} "
          f"({'ok' if rep.balance_ok else 'fails'})")
    print(f"(2,2)-sparsity: {'ok' if rep.sparse_ok else 'fails'}")
    print(f"counting conditions: {'pass' if rep.passes else 'fail'}")
    for comp in rep.components:
        print(f"component vertices {list(comp.vertices)}: "
              f"{'wraps torus' if comp.wraps else 'no wrap'} (partial check)")
    return 0


def cmd_deform(args) -> int:
    motif = _load_motif(args.motif, args.seed)
    times = np.linspace(0.0, args.tmax, args.steps + 1)
    pins = []
    for pin in args.pin or []:
        v, ax = pin.split(":")
        pins.append((int(v), {"x": 0, "y": 1}[ax]))
    path = flow_periodic_deform(motif, times, pins=pins)
    stream, close = _out_stream(args.out)
    try:
        path.to_csv(stream)
    finally:
        if close:
            stream.close()
    if close:
        print(f"wrote {args.out}: max drift {_fmt(float(np.max(path.max_drift)))}")
    return 0


def cmd_strip(args) -> int:
    strip = TrapeziumStrip(a=args.a, b=args.b, spacing=args.spacing, cells=args.cells)
    if args.lock:
        alpha1, lam = locking_angle(strip)
        print(f"alpha_1 = {_fmt(alpha1)}")
        print(f"lambda = {_fmt(lam)}")
        return 0
    if args.alpha is None:
        raise ValueError("strip needs --alpha X or --lock")
    print(f"gamma = {_fmt(transmission(strip, args.alpha))}")
    return 0


def cmd_finite(args) -> int:
    obj = _load_any(args.input, args.seed)
    if isinstance(obj, Motif):
        raise ValueError(f"'{args.input}' is a motif; this command needs a finite framework")
    R = rigidity_matrix(obj)
    rank = numerical_rank(R)
    print(f"finite framework: {obj.vertex_count} vertices, {obj.edge_count} edges, "
          f"dimension {obj.dimension}")
    print(f"rigidity matrix rank = {rank}")
    print(f"flex space dimension = {flex_space(obj).shape[1]}")
    print(f"stress space dimension = {stress_space(obj).shape[1]}")
    rep = maxwell_report(obj)
    print(f"maxwell balance = {rep.maxwell_balance} ({rep.verdict})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigikit",
        description="rigidity analysis of bar-joint and crystal frameworks",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for generic placements")
    common.add_argument("--tol", type=float, default=1e-9, help="residual tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_parser("catalog", help="inspect or emit a built-in framework")
    p.add_argument("name", choices=sorted(CATALOG_NAMES))
    p.add_argument("--emit", metavar="PATH", help="write the entry as JSON")
    p.set_defaults(fn=cmd_catalog)

    p = add_parser("symbol", help="print the symbol matrix of a motif")
    p.add_argument("motif")
    p.set_defaults(fn=cmd_symbol)

    p = add_parser("det", help="determinant of the symbol matrix")
    p.add_argument("motif")
    p.add_argument("--raw", action="store_true", help="print without canonicalization")
    p.set_defaults(fn=cmd_det)

    p = add_parser("rumscan", help="mode multiplicity over a torus grid")
    p.add_argument("motif")
    p.add_argument("--grid", type=int, required=True, metavar="N")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(fn=cmd_rumscan)

    p = add_parser("wavemode", help="wave flexes at a torus phase")
    p.add_argument("motif")
    p.add_argument("--phase", required=True, metavar="s1,s2[,s3]")
    p.set_defaults(fn=cmd_wavemode)

    p = add_parser("flexcheck", help="verify wave flexes on a patch")
    p.add_argument("motif")
    p.add_argument("--phase", required=True, metavar="s1,s2[,s3]")
    p.add_argument("--patch", type=int, default=3, metavar="K")
    p.set_defaults(fn=cmd_flexcheck)

    p = add_parser("pebble", help="(k,l) pebble game on a graph or motif")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--l", type=int, default=3)
    p.set_defaults(fn=cmd_pebble)

    p = add_parser("maxwell", help="degree-of-freedom balance")
    p.add_argument("input")
    p.set_defaults(fn=cmd_maxwell)

    p = add_parser("ross", help="periodic fixed-torus counting conditions")
    p.add_argument("motif")
    p.set_defaults(fn=cmd_ross)

    p = add_parser("deform", help="flow-periodic deformation of a planar motif")
    p.add_argument("motif")
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--pin", action="append", metavar="V:AXIS",
                   help="hold a fractional coordinate, e.g. 1:y (repeatable)")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(fn=cmd_deform)

    p = add_parser("strip", help="trapezium strip transmission and locking")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--cells", type=int, default=2)
    p.add_argument("--alpha", type=float)
    p.add_argument("--lock", action="store_true")
    p.set_defaults(fn=cmd_strip)

    p = add_parser("finite", help="rank, flexes and stresses of a finite framework")
    p.add_argument("input")
    p.set_defaults(fn=cmd_finite)

    return parser


# LockingError and format errors are ValueErrors; UnknownCatalogNameError
# is a KeyError
_DOMAIN_ERRORS = (ValueError, KeyError, FileNotFoundError, ContinuationError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _DOMAIN_ERRORS as exc:
        module = type(exc).__module__.rsplit(".", maxsplit=1)[-1]
        msg = str(exc) if not isinstance(exc, KeyError) else f"unknown name {exc}"
        print(f"error [{module}]: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
