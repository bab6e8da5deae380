"""Command-line entry: pick a model source and a transport, then serve."""

from __future__ import annotations

import argparse
import sys

from .hook import HookError, load_hook
from .server import serve
from .weights import WeightsError, load_weights


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gradprovider",
        description="Reference gradient provider for the line protocol.",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--weights", help="text weights file of a mirrored builtin")
    source.add_argument("--module",
                        help="user model as package.module:attr (see README)")
    parser.add_argument("--precision", choices=["float64", "float32"],
                        default="float64",
                        help="arithmetic width for mirrored builtins")
    parser.add_argument("--tcp", type=int, metavar="PORT",
                        help="serve on 127.0.0.1:PORT instead of stdio "
                        "(0 picks a free port, printed to stderr)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.weights:
            model = load_weights(args.weights, precision=args.precision)
        else:
            model = load_hook(args.module)
    except (WeightsError, HookError) as exc:
        print(f"gradprovider: error: {exc}", file=sys.stderr)
        return 2
    return serve(model, tcp_port=args.tcp)


if __name__ == "__main__":
    sys.exit(main())
