"""Command-line entry points: summarize / encode / finetune, CSV in, CSV out."""

from __future__ import annotations

import argparse
import sys

from .encode import encode_batch
from .finetune import DEFAULT_EPOCHS, finetune
from .models import DEFAULT_SUMMARIZER, MODEL_ROSTER, ModelUnavailableError, resolve_spec
from .summarize import summarize_batch
from .textio import FormatError

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_MODEL = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jobbridge",
        description="Pretrained-model adapter for the job-title STR pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("summarize", help="fill the summary column of a jobs CSV")
    s.add_argument("--jobs", required=True, help="input jobs CSV (id,title,description)")
    s.add_argument("--out", required=True, help="output CSV with summary column")
    s.add_argument("--checkpoint", default=DEFAULT_SUMMARIZER)

    e = sub.add_parser("encode", help="encode one text column into an embedding store CSV")
    e.add_argument("--in", dest="input", required=True, help="CSV with id + text columns")
    e.add_argument("--column", default="summary", help="text column to encode")
    e.add_argument("--model", required=True,
                   help=f"roster name ({', '.join(MODEL_ROSTER)}) or checkpoint path")
    e.add_argument("--out", required=True, help="output embedding CSV")
    e.add_argument("--batch-size", type=int, default=32)

    f = sub.add_parser("finetune", help="fine-tune an encoder on a pair CSV")
    f.add_argument("--model", required=True,
                   help=f"roster name ({', '.join(MODEL_ROSTER)}) or checkpoint path")
    f.add_argument("--pairs", required=True, help="anchor,sample,score CSV")
    f.add_argument("--out", required=True, help="checkpoint output directory")
    f.add_argument("--epochs", type=int, default=DEFAULT_EPOCHS)
    f.add_argument("--learning-rate", type=float, default=2e-5)
    f.add_argument("--batch-size", type=int, default=16)
    f.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    try:
        if args.command == "summarize":
            n = summarize_batch(args.jobs, args.out, checkpoint=args.checkpoint)
            print(f"summarized {n} descriptions -> {args.out}")
        elif args.command == "encode":
            spec = resolve_spec(args.model)
            n = encode_batch(args.input, spec, args.out, column=args.column,
                             batch_size=args.batch_size)
            print(f"encoded {n} rows with {spec.family} -> {args.out}")
        elif args.command == "finetune":
            spec = resolve_spec(args.model)
            losses = finetune(spec, args.pairs, args.out, epochs=args.epochs,
                              learning_rate=args.learning_rate,
                              batch_size=args.batch_size, seed=args.seed)
            curve = " -> ".join(f"{x:.4f}" for x in losses)
            print(f"fine-tuned {spec.family} for {args.epochs} epochs (loss {curve})")
            print(f"checkpoint directory: {args.out}")
    except ModelUnavailableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
