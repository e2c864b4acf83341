"""Command-line front end: eval, stats, encode, decode, viz, bench.

Exit codes: 0 success, 1 usage error, 2 input/data error, 3 internal error.

``eval`` and ``stats`` read either a COCO-style annotation file or a
deterministic synthetic corpus (``--synthetic seed=7,count=100``).  Table
output carries a protocol line stating the evaluation choices (tight-bbox
crops, unweighted mean, crowd handling, filters, skip counts); csv and
json-lines keep a fixed machine schema and send the protocol line to
stderr so stdout stays bit-stable.
"""

import argparse
import json
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .codec import CodecConfig, DctMaskVector, decode, encode
from .dataset import generate_synthetic, instance_masks, parse_annotations
from .errors import InvalidArgumentError, MaskCodecError
from .formats import (mask_from_pgm, pgm_from_mask, pgm_from_unit_grid,
                      read_vector_file, write_vector_file)
from .metrics import coefficient_stats, error_map, evaluate_representation
from .transform import dct2_fast, dct2_naive, idct2_fast, zigzag_unscan


class UsageError(Exception):
    """Bad flags or arguments; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parse_spec(text: str):
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"bad --spec {text!r}, expected method:K:N")
    method, k_text = parts[0], parts[1]
    n_text = parts[2] if len(parts) == 3 else "-"
    if method not in ("dct", "grid"):
        raise UsageError(f"bad --spec method {method!r}, expected dct or grid")
    if not k_text.isdigit() or int(k_text) < 1:
        raise UsageError(f"bad --spec K {k_text!r}, expected a positive integer")
    k = int(k_text)
    if method == "grid":
        if n_text not in ("-", "none", "None"):
            raise UsageError(f"grid spec takes no N, got {n_text!r} (use '-')")
        return method, k, None
    if not n_text.isdigit() or not 1 <= int(n_text) <= k * k:
        raise UsageError(
            f"bad --spec N {n_text!r}, expected an integer in 1..K*K"
        )
    return method, k, int(n_text)


def _parse_synthetic(text: str):
    fields = {}
    for item in text.split(","):
        key, _, value = item.partition("=")
        if key not in ("seed", "count", "min", "max") or not value.lstrip("-").isdigit():
            raise UsageError(f"bad --synthetic field {item!r}")
        fields[key] = int(value)
    if "seed" not in fields or "count" not in fields:
        raise UsageError("--synthetic needs at least seed=<int>,count=<int>")
    size_range = (fields.get("min", 32), fields.get("max", 256))
    return fields["seed"], fields["count"], size_range


def _parse_categories(text: str):
    try:
        return frozenset(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"bad --categories {text!r}, expected comma-separated ids")


def _mask_source(args):
    """Build a callable returning a fresh mask stream, plus a protocol note."""
    if args.synthetic is not None and args.annotations is not None:
        raise UsageError("pass either an annotation file or --synthetic, not both")
    if args.synthetic is not None:
        seed, count, size_range = _parse_synthetic(args.synthetic)
        note = (f"source=synthetic seed={seed} count={count} "
                f"sizes={size_range[0]}..{size_range[1]}")
        return lambda: generate_synthetic(seed, count, size_range), note, None
    if args.annotations is None:
        raise UsageError("an annotation file or --synthetic is required")
    text = Path(args.annotations).read_text(encoding="utf-8")
    aset = parse_annotations(text)
    categories = None
    if getattr(args, "categories", None):
        categories = _parse_categories(args.categories)
    min_area = getattr(args, "min_area", None)
    include_crowd = bool(getattr(args, "include_crowd", False))
    note = (f"source={args.annotations} crop=tight-bbox aggregate=unweighted-mean "
            f"crowd={'included' if include_crowd else 'excluded'} "
            f"min_area={min_area if min_area is not None else 'none'} "
            f"categories={args.categories if categories else 'all'}")

    last_stream = {}

    def streams():
        stream = instance_masks(aset, min_area=min_area, categories=categories,
                                include_crowd=include_crowd)
        last_stream["stream"] = stream
        return (mask for _, mask in iter(stream))

    return streams, note, last_stream


def _print_protocol(note: str, fmt: str, out):
    # Keep csv/jsonl stdout limited to the fixed schema.
    target = sys.stderr if fmt in ("csv", "jsonl") else out
    print(f"# protocol: {note}", file=target)


def cmd_eval(args) -> int:
    specs = [_parse_spec(s) for s in args.spec]
    if not specs:
        raise UsageError("at least one --spec is required")
    make_stream, note, stream_box = _mask_source(args)
    out = sys.stdout
    _print_protocol(note, args.format, out)
    rows = []
    for method, k, n in specs:
        report = evaluate_representation(make_stream(), method, k, n,
                                         threads=args.threads)
        rows.append(report)
    if stream_box:
        skipped = stream_box["stream"].skipped_empty
        _print_protocol(f"skipped_empty={skipped}", args.format, out)

    if args.format == "table":
        print(f"{'method':<8}{'K':>6}{'N':>6}{'count':>8}{'mean_iou':>10}", file=out)
        for r in rows:
            n_text = "-" if r.n is None else str(r.n)
            print(f"{r.method:<8}{r.k:>6}{n_text:>6}{r.instance_count:>8}"
                  f"{r.mean_iou:>10.4f}", file=out)
    elif args.format == "csv":
        print("method,K,N,count,mean_iou", file=out)
        for r in rows:
            n_text = "-" if r.n is None else str(r.n)
            print(f"{r.method},{r.k},{n_text},{r.instance_count},"
                  f"{r.mean_iou:.4f}", file=out)
    else:
        for r in rows:
            print(json.dumps({
                "method": r.method, "K": r.k, "N": r.n,
                "count": r.instance_count, "mean_iou": round(r.mean_iou, 4),
            }, sort_keys=True), file=out)
    return 0


def cmd_stats(args) -> int:
    make_stream, note, _ = _mask_source(args)
    config = CodecConfig(k=args.k, n=args.n)
    stats = coefficient_stats(make_stream(), config)
    lines = ["dim,mean,variance"]
    for i in range(stats.n):
        lines.append(f"{i},{stats.mean[i]:.17g},{stats.variance[i]:.17g}")
    text = "\n".join(lines) + "\n"
    print(f"# protocol: {note} count={stats.instance_count}", file=sys.stderr)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_encode(args) -> int:
    data = Path(args.mask).read_bytes()
    mask = mask_from_pgm(data)
    vector = encode(mask, CodecConfig(k=args.k, n=args.n))
    text = write_vector_file(vector)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_decode(args) -> int:
    text = Path(args.vector).read_text(encoding="utf-8")
    vector = read_vector_file(text)
    mask = decode(vector, args.height, args.width)
    data = pgm_from_mask(mask)
    if args.output:
        Path(args.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
    return 0


def cmd_viz(args) -> int:
    text = Path(args.annotations).read_text(encoding="utf-8")
    aset = parse_annotations(text)
    wanted = None
    if args.ids:
        try:
            wanted = frozenset(int(part) for part in args.ids.split(","))
        except ValueError:
            raise UsageError(f"bad --ids {args.ids!r}, expected comma-separated ids")
    config = CodecConfig(k=args.k, n=args.n)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = 0
    for ann, mask in iter(instance_masks(aset, include_crowd=args.include_crowd)):
        if wanted is not None and ann.id not in wanted:
            continue
        h, w = mask.shape
        vector = encode(mask, config)
        soft_grid = idct2_fast(zigzag_unscan(vector.coeffs, vector.k))
        rec = decode(vector, h, w, config)
        err = error_map(mask, rec)
        (out_dir / f"{ann.id}_gt.pgm").write_bytes(pgm_from_mask(mask))
        (out_dir / f"{ann.id}_grid.pgm").write_bytes(pgm_from_unit_grid(soft_grid))
        (out_dir / f"{ann.id}_rec.pgm").write_bytes(pgm_from_mask(rec))
        (out_dir / f"{ann.id}_err.pgm").write_bytes(pgm_from_mask(err))
        written += 1
        if args.limit is not None and written >= args.limit:
            break
    if written == 0:
        raise InvalidArgumentError("selection matched no instances")
    print(f"wrote {written * 4} files for {written} instances to {out_dir}")
    return 0


def _median_ms(fn, reps: int) -> float:
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append((time.perf_counter() - t0) * 1e3)
    return statistics.median(times)


def cmd_bench(args) -> int:
    if args.reps < 1:
        raise UsageError("--reps must be >= 1")
    rng = np.random.default_rng(args.seed)
    print("K,N,naive_ms,fast_ms,speedup,encode_decode_ms,masks_per_s")
    for k in args.k:
        if k < 1:
            raise UsageError(f"bad K {k}")
        n = min(args.n, k * k)
        grid = rng.random((k, k))
        mask = (rng.random((k, k)) < 0.5).astype(np.uint8)
        config = CodecConfig(k=k, n=n)
        naive_ms = _median_ms(lambda: dct2_naive(grid), args.reps)
        fast_ms = _median_ms(lambda: dct2_fast(grid), args.reps)
        codec_ms = _median_ms(lambda: decode(encode(mask, config), k, k, config),
                              args.reps)
        per_s = 1e3 / codec_ms if codec_ms > 0 else float("inf")
        print(f"{k},{n},{naive_ms:.4f},{fast_ms:.4f},{naive_ms / fast_ms:.1f},"
              f"{codec_ms:.4f},{per_s:.0f}")
    return 0


def _add_source_flags(sub, with_filters: bool = True):
    sub.add_argument("annotations", nargs="?", default=None,
                     help="COCO-style instances JSON file")
    sub.add_argument("--synthetic", default=None, metavar="seed=S,count=C[,min=A,max=B]",
                     help="use a generated corpus instead of a file")
    if with_filters:
        sub.add_argument("--min-area", type=int, default=None, dest="min_area",
                         help="drop instances with fewer set pixels")
        sub.add_argument("--categories", default=None,
                         help="comma-separated category ids to keep")
        sub.add_argument("--include-crowd", action="store_true", dest="include_crowd",
                         help="keep iscrowd=1 annotations (dropped by default)")


def build_parser() -> _Parser:
    parser = _Parser(prog="maskcodec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", metavar="command")

    p_eval = subs.add_parser("eval", help="mean reconstruction IoU per codec spec")
    _add_source_flags(p_eval)
    p_eval.add_argument("--spec", action="append", default=[], metavar="method:K:N",
                        help="codec to evaluate, e.g. dct:128:300 or grid:28:- "
                             "(repeatable)")
    p_eval.add_argument("--format", choices=("table", "csv", "jsonl"),
                        default="table")
    p_eval.add_argument("--threads", type=int, default=1)
    p_eval.set_defaults(fn=cmd_eval)

    p_stats = subs.add_parser("stats", help="per-dimension coefficient mean/variance")
    _add_source_flags(p_stats)
    p_stats.add_argument("--k", type=int, default=128)
    p_stats.add_argument("--n", type=int, default=300)
    p_stats.add_argument("-o", "--output", default=None, help="csv path (default stdout)")
    p_stats.set_defaults(fn=cmd_stats)

    p_encode = subs.add_parser("encode", help="PGM mask to coefficient vector file")
    p_encode.add_argument("mask", help="input PGM (P5) mask")
    p_encode.add_argument("--k", type=int, default=128)
    p_encode.add_argument("--n", type=int, default=300)
    p_encode.add_argument("-o", "--output", default=None,
                          help="vector file path (default stdout)")
    p_encode.set_defaults(fn=cmd_encode)

    p_decode = subs.add_parser("decode", help="coefficient vector file to PGM mask")
    p_decode.add_argument("vector", help="input vector file")
    p_decode.add_argument("--height", type=int, required=True)
    p_decode.add_argument("--width", type=int, required=True)
    p_decode.add_argument("-o", "--output", default=None,
                          help="PGM path (default stdout)")
    p_decode.set_defaults(fn=cmd_decode)

    p_viz = subs.add_parser("viz", help="write gt/grid/rec/err PGM panels per instance")
    p_viz.add_argument("annotations", help="COCO-style instances JSON file")
    p_viz.add_argument("--ids", default=None, help="comma-separated annotation ids")
    p_viz.add_argument("--limit", type=int, default=None,
                       help="stop after this many instances")
    p_viz.add_argument("--k", type=int, default=128)
    p_viz.add_argument("--n", type=int, default=300)
    p_viz.add_argument("--include-crowd", action="store_true", dest="include_crowd")
    p_viz.add_argument("-o", "--out-dir", default=".", dest="out_dir")
    p_viz.set_defaults(fn=cmd_viz)

    p_bench = subs.add_parser("bench", help="time naive vs fast transform and codec")
    p_bench.add_argument("--k", type=int, action="append", default=None,
                         help="grid size (repeatable; default 128)")
    p_bench.add_argument("--n", type=int, default=300)
    p_bench.add_argument("--reps", type=int, default=20)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.set_defaults(fn=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "command", None) is None:
            parser.print_usage(sys.stderr)
            return 1
        if args.fn is cmd_bench and args.k is None:
            args.k = [128]
        return args.fn(args)
    except SystemExit as exc:  # --help / --version paths inside argparse
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (MaskCodecError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def console_entry() -> None:
    sys.exit(main())
