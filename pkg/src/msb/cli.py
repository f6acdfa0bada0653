"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 parse or validity error,
3 stability assertion failure.  Values go to stdout, diagnostics to
stderr.  Output is byte-deterministic for fixed inputs; the
``MSB_THREADS`` environment variable caps worker threads where a
command fans out over many inputs.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .algebra import Presentation, betti
from .grades import SignedBarcode, reduce_signed
from .hilbert import hilbert_eval, minimal_hilbert_decomposition
from .io import (
    ParseError,
    chain_to_presentation,
    fmt_float,
    parse_bifiltration,
    parse_presentation,
    parse_signed_barcode,
    serialize_presentation,
    serialize_signed_barcode,
    sniff_format,
)
from .matching import bottleneck_signed, wasserstein_signed
from .stability import run_stability

USAGE_ERROR = 1
DATA_ERROR = 2
STABILITY_ERROR = 3


class _CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise _CliError("cannot read %s: %s" % (path, e), DATA_ERROR)


def _load_signed(path: str) -> SignedBarcode:
    text = _read(path)
    kind = sniff_format(text)
    if kind == "sbarc":
        return parse_signed_barcode(text)
    if kind == "mpres":
        return betti(parse_presentation(text)).signed
    raise _CliError(
        "%s: expected an sbarc or mpres document, found %s" % (path, kind),
        DATA_ERROR,
    )


def _load_presentation(path: str) -> Presentation:
    text = _read(path)
    kind = sniff_format(text)
    if kind == "mpres":
        return parse_presentation(text)
    raise _CliError(
        "%s: expected an mpres document, found %s" % (path, kind), DATA_ERROR
    )


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _parse_points(raw: str, dim: int) -> list[tuple]:
    points = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            coords = tuple(float(tok) for tok in chunk.split(","))
        except ValueError:
            raise _CliError("malformed query point %r" % chunk, USAGE_ERROR)
        if len(coords) != dim:
            raise _CliError(
                "query point %r has %d coordinates, expected %d"
                % (chunk, len(coords), dim),
                USAGE_ERROR,
            )
        points.append(coords)
    if not points:
        raise _CliError("no query points given", USAGE_ERROR)
    return points


def _grade_lines(bars) -> list[str]:
    return [" ".join(fmt_float(c) for c in g) for g in bars]


def cmd_betti(args) -> int:
    pres = _load_presentation(args.file)
    result = betti(pres)
    if args.signed:
        sys.stdout.write(serialize_signed_barcode(result.signed))
    else:
        for d, bc in enumerate(result.by_degree):
            sys.stdout.write("beta%d %d\n" % (d, len(bc)))
            for line in _grade_lines(bc):
                sys.stdout.write(line + "\n")
    return 0


def cmd_reduce(args) -> int:
    text = _read(args.file)
    kind = sniff_format(text)
    if kind == "sbarc":
        signed = reduce_signed(parse_signed_barcode(text))
    elif kind == "mpres":
        signed = minimal_hilbert_decomposition(parse_presentation(text))
    else:
        raise _CliError(
            "%s: expected an sbarc or mpres document, found %s" % (args.file, kind),
            DATA_ERROR,
        )
    sys.stdout.write(serialize_signed_barcode(signed))
    return 0


def cmd_hilbert(args) -> int:
    text = _read(args.file)
    kind = sniff_format(text)
    if kind == "sbarc":
        signed = parse_signed_barcode(text)
        dim = signed.dim or 1
        for pt in _parse_points(args.at, dim):
            sys.stdout.write("%d\n" % hilbert_eval(signed, pt))
    elif kind == "mpres":
        from .algebra import pointwise_dim

        pres = parse_presentation(text)
        for pt in _parse_points(args.at, pres.dim or 1):
            sys.stdout.write("%d\n" % pointwise_dim(pres, pt))
    else:
        raise _CliError(
            "%s: expected an sbarc or mpres document, found %s" % (args.file, kind),
            DATA_ERROR,
        )
    return 0


def _metric(args):
    p = math.inf
    if args.metric == "wasserstein":
        if args.p.strip().lower() in ("inf", "infinity"):
            p = math.inf
        else:
            try:
                p = float(args.p)
            except ValueError:
                raise _CliError("invalid --p value %r" % args.p, USAGE_ERROR)

    def compute(sa, sb):
        if args.metric == "bottleneck":
            return bottleneck_signed(sa, sb)
        return wasserstein_signed(sa, sb, p)

    return compute


def cmd_dist(args) -> int:
    compute = _metric(args)
    a = Path(args.a)
    b = Path(args.b)
    if a.is_dir() != b.is_dir():
        raise _CliError("dist needs two files or two directories", USAGE_ERROR)
    if a.is_dir():
        names = sorted(
            {f.name for f in a.iterdir() if f.is_file()}
            & {f.name for f in b.iterdir() if f.is_file()}
        )
        if not names:
            raise _CliError("no common file names under %s and %s" % (a, b), DATA_ERROR)
        env = os.environ.get("MSB_THREADS")
        workers = max(1, int(env)) if env else min(8, os.cpu_count() or 1)

        def one(name):
            return compute(_load_signed(str(a / name)), _load_signed(str(b / name)))

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, names))
        for name, res in zip(names, results):
            sys.stdout.write("%s %s\n" % (name, fmt_float(res.value)))
        return 0
    res = compute(_load_signed(args.a), _load_signed(args.b))
    sys.stdout.write(fmt_float(res.value) + "\n")
    if args.print_matching and res.matching is not None:
        sys.stdout.write("match %d\n" % len(res.matching))
        for i, j in res.matching:
            sys.stdout.write("%d %d\n" % (i, j))
    return 0


def cmd_gen(args) -> int:
    from . import generators as G

    def grade_of(tok):
        try:
            return tuple(float(x) for x in tok.split(","))
        except ValueError:
            raise _CliError("malformed grade %r" % tok, USAGE_ERROR)

    name = args.name
    params = args.params
    try:
        if name == "free":
            _expect_params(params, 1, "free GRADE")
            pres = G.gen_free(grade_of(params[0]))
        elif name == "hook":
            _expect_params(params, 2, "hook BIRTH DEATH")
            pres = G.gen_hook(grade_of(params[0]), grade_of(params[1]), field=args.field)
        elif name == "staircase":
            _expect_params(params, 1, "staircase K")
            pres = G.gen_staircase(int(params[0]), field=args.field)
        elif name == "chain":
            _expect_params(params, 2, "chain M EPS")
            pres = G.gen_chain(int(params[0]), float(params[1]), field=args.field)
        elif name == "interval":
            _expect_params(params, 2, "interval BIRTH DEATH")
            pres = G.gen_one_param_interval(
                float(params[0]), float(params[1]), field=args.field
            )
        elif name == "random":
            _expect_params(params, 4, "random SEED GENS RELS GRID")
            pres = G.gen_random(
                int(params[0]), int(params[1]), int(params[2]), int(params[3])
            )
        else:
            raise _CliError("unknown generator %r" % name, USAGE_ERROR)
    except _CliError:
        raise
    except ValueError as e:
        raise _CliError(str(e), USAGE_ERROR)
    _write_out(serialize_presentation(pres), args.output)
    return 0


def _expect_params(params, n, usage):
    if len(params) != n:
        raise _CliError("expected: gen %s" % usage, USAGE_ERROR)


def cmd_ingest(args) -> int:
    text = _read(args.file)
    if sniff_format(text) != "mbif":
        raise _CliError("%s: expected an mbif document" % args.file, DATA_ERROR)
    bif = parse_bifiltration(text, field=args.field)
    pres = chain_to_presentation(bif, degree=args.degree)
    _write_out(serialize_presentation(pres), args.output)
    return 0


def cmd_check_stability(args) -> int:
    report = run_stability(args.trials, args.delta, args.seed)
    sys.stdout.write("trials %d\n" % len(report.trials))
    sys.stdout.write("delta %s\n" % fmt_float(args.delta))
    sys.stdout.write(
        "max_ratio_bottleneck %s\n" % fmt_float(report.max_ratio_bottleneck)
    )
    sys.stdout.write(
        "max_ratio_wasserstein %s\n" % fmt_float(report.max_ratio_wasserstein)
    )
    sys.stdout.write("violations %d\n" % len(report.violations))
    if not report.ok:
        for v in report.violations:
            sys.stderr.write(v + "\n")
        return STABILITY_ERROR
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msb",
        description="Signed barcodes and matching distances for persistence modules",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("betti", help="Betti barcodes of a presentation")
    p.add_argument("file")
    p.add_argument("--signed", action="store_true", help="emit one sbarc document")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("reduce", help="reduced signed barcode of the input")
    p.add_argument("file")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("hilbert", help="pointwise dimensions at query grades")
    p.add_argument("file")
    p.add_argument("--at", required=True, help="points like 'x,y' or 'x,y;x,y'")
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("dist", help="distance between two inputs (or directories)")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument(
        "--metric", choices=("bottleneck", "wasserstein"), default="bottleneck"
    )
    p.add_argument("--p", default="1", help="order for wasserstein (number or inf)")
    p.add_argument("--print-matching", action="store_true")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("gen", help="write a generated presentation")
    p.add_argument(
        "name", choices=("free", "hook", "staircase", "chain", "interval", "random")
    )
    p.add_argument("params", nargs="*")
    p.add_argument("--field", type=int, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("ingest", help="presentation of bifiltration homology")
    p.add_argument("file")
    p.add_argument("--degree", type=int, default=0)
    p.add_argument("--field", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("check-stability", help="run the perturbation fuzz suite")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check_stability)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse reports its own message; remap its exit code
        return 0 if e.code in (0, None) else USAGE_ERROR
    try:
        return args.func(args)
    except _CliError as e:
        sys.stderr.write("error: %s\n" % e)
        return e.code
    except ParseError as e:
        sys.stderr.write("error: %s\n" % e)
        return DATA_ERROR
    except ValueError as e:
        sys.stderr.write("error: %s\n" % e)
        return DATA_ERROR


def entrypoint() -> None:
    sys.exit(main())
