"""Command line for rendering sweep figures: sweepplot --input CSV --output IMG."""

from __future__ import annotations

import argparse
import sys

from . import PlotSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sweepplot",
        description="Render mean version age vs network size from a sweep CSV.",
    )
    parser.add_argument("--input", required=True, metavar="CSV",
                        help="sweep results CSV (harness schema)")
    parser.add_argument("--output", required=True, metavar="IMAGE",
                        help="destination image file (format from extension, e.g. .png/.pdf)")
    parser.add_argument("--log-x", action="store_true",
                        help="logarithmic network-size axis")
    parser.add_argument("--schemes", metavar="LIST", default=None,
                        help="comma-separated schemes to include (default: all)")
    parser.add_argument("--ratios", metavar="LIST", default=None,
                        help="comma-separated lambda_e/lambda ratios to include (default: all)")
    parser.add_argument("--no-bound-lines", action="store_true",
                        help="suppress the dashed asymptotic bound lines")
    return parser


def parse_and_dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    schemes = None
    if args.schemes is not None:
        schemes = frozenset(s.strip() for s in args.schemes.split(",") if s.strip())
    ratios = None
    if args.ratios is not None:
        try:
            ratios = frozenset(float(r) for r in args.ratios.split(",") if r.strip())
        except ValueError:
            print(f"error: --ratios expects comma-separated numbers, got {args.ratios!r}",
                  file=sys.stderr)
            return 2
    spec = PlotSpec(
        input_path=args.input,
        output_path=args.output,
        log_x=args.log_x,
        schemes=schemes,
        ratios=ratios,
        bound_lines=not args.no_bound_lines,
    )
    try:
        render(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}")
    return 0


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
