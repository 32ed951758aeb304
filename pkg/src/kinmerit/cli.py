"""Command-line front end.

Exit codes: 0 success, 1 invalid or unreadable input data, 2 usage error.
Logs go to stderr; results go to files in ``--out``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, fields, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .cohort import DIMENSIONS, config_echo
from .ingest import (
    ParseError, ValidationError, load_bundle, tomllib, write_baselines, write_bundle,
    write_ground_truth, write_pairs, write_rankings, write_report, write_scores,
)
from .kinship import dual_role_count
from .model import validate_dataset
from .pipeline import run_pipeline
from .synthgen import SynthConfig, detection_power, generate

log = logging.getLogger("kinmerit")


class UsageError(Exception):
    pass


class _WarningCollector(logging.Handler):
    def __init__(self):
        super().__init__(level=logging.WARNING)
        self.messages: list[str] = []

    def emit(self, record):
        self.messages.append(record.getMessage())


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", type=Path, help="dataset directory")
    common.add_argument("--out", type=Path, help="output directory (created if absent)")
    common.add_argument("--config", type=Path, help="config file overriding the dataset's")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, help="seed override for synth and power")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true")
    verbosity.add_argument("--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="kinmerit", allow_abbrev=False,
                                description="Research productivity and kinship cohort analysis.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], allow_abbrev=False,
                   help="check a dataset directory")
    sub.add_parser("score", parents=[common], allow_abbrev=False,
                   help="citation baselines and productivity scores")
    sub.add_parser("rank", parents=[common], allow_abbrev=False,
                   help="percentile ranks within SDS x rank")
    sub.add_parser("detect", parents=[common], allow_abbrev=False,
                   help="same-surname kinship pairs")
    cmp_ = sub.add_parser("compare", parents=[common], allow_abbrev=False,
                          help="one comparison table")
    cmp_.add_argument("--dimension", choices=DIMENSIONS, default="overall")
    sub.add_parser("report", parents=[common], allow_abbrev=False,
                   help="full chain, all six tables")
    sub.add_parser("synth", parents=[common], allow_abbrev=False,
                   help="generate a synthetic dataset")
    power = sub.add_parser("power", parents=[common], allow_abbrev=False,
                           help="detection recall / false-positive study")
    power.add_argument("--replications", type=int, default=20)
    return p


def _synth_config(args) -> SynthConfig:
    kw: dict[str, Any] = {}
    if args.config is not None:
        if not args.config.is_file():
            raise FileNotFoundError(f"missing config file {args.config}")
        with open(args.config, "rb") as fh:
            raw = tomllib.load(fh)
        known = {f.name for f in fields(SynthConfig)}
        unknown = set(raw) - known
        if unknown:
            raise UsageError(f"unknown synth config keys {sorted(unknown)}")
        for key, value in raw.items():
            if key in ("window", "entry_window"):
                value = tuple(value)
            elif key == "surname_pool":
                value = tuple((str(s), float(w)) for s, w in value)
            elif key == "national_exclusions":
                value = tuple(value)
            elif key == "regional_exclusions":
                value = {k: tuple(v) for k, v in value.items()}
            kw[key] = value
    cfg = SynthConfig(**kw)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            flag = "--in" if name == "input" else f"--{name}"
            raise UsageError(f"{args.command} requires {flag}")


def _prepare_out(args) -> Path:
    out: Path = args.out
    if args.input is not None and out.resolve() == args.input.resolve():
        raise UsageError("--out must differ from --in (inputs are never modified)")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_metadata(out: Path, meta: dict[str, Any]) -> None:
    (out / "metadata.json").write_text(json.dumps(meta, indent=2, ensure_ascii=False) + "\n",
                                       encoding="utf-8", newline="")


def _execute(args, meta: dict[str, Any]) -> int:
    cmd = args.command
    if cmd in ("synth", "power"):
        _require(args, "out")
        out = _prepare_out(args)
        cfg = _synth_config(args)
        meta["config_echo"] = {k: v for k, v in asdict(cfg).items()}
        if cmd == "synth":
            bundle, truth = generate(cfg)
            write_bundle(bundle, out)
            write_ground_truth(truth.pairs, out / "ground_truth.csv")
            print(f"wrote {len(bundle.researchers)} researchers, "
                  f"{len(bundle.publications)} publications, "
                  f"{len(truth.pairs)} planted pairs to {out}")
        else:
            if args.replications < 1:
                raise UsageError("--replications must be >= 1")
            summary = detection_power(cfg, args.replications)
            doc = asdict(summary) | {"recall": summary.recall,
                                     "false_positive_rate": summary.false_positive_rate}
            (out / "power.json").write_text(json.dumps(doc, indent=2) + "\n",
                                            encoding="utf-8", newline="")
            print(f"recall={summary.recall} false_positive_rate="
                  f"{summary.false_positive_rate:.4f} over {args.replications} replications")
        return 0

    _require(args, "input")
    if cmd == "validate":
        bundle = load_bundle(args.input, args.config, validate=False)
        report = validate_dataset(bundle.researchers, bundle.publications,
                                  bundle.taxonomy, bundle.config)
        for v in report:
            print(v)
        print(f"{len(report)} violations")
        meta["config_echo"] = config_echo(bundle.config)
        if args.out is not None:
            _write_metadata(_prepare_out(args), meta)
        return 0 if report.ok else 1

    _require(args, "out")
    out = _prepare_out(args)
    bundle = load_bundle(args.input, args.config)
    meta["config_echo"] = config_echo(bundle.config)
    result = run_pipeline(bundle)
    meta["skipped_publications"] = sum(c.n_skipped for c in result.scorecards.values())
    meta["renormalized_weightings"] = sum(c.n_renormalized for c in result.scorecards.values())
    ext = args.format

    if cmd == "score":
        write_baselines(result.baseline, out / "baselines.csv")
        write_scores(result.scorecards, out / "scores.csv")
    elif cmd == "rank":
        write_scores(result.scorecards, out / "scores.csv")
        write_rankings(result.ranked, out / "rankings.csv")
    elif cmd == "detect":
        write_pairs(result.pairs, out / "pairs.csv")
        meta["links"] = len(result.links)
        meta["dual_role_researchers"] = dual_role_count(bundle, result.links)
        print(f"{len(result.links)} links, {len(result.pairs)} pairs")
    elif cmd == "compare":
        rep = result.report(args.dimension)
        write_report(rep, out / f"compare_{args.dimension}.{ext}", ext)
    elif cmd == "report":
        for name, rep in result.tables().items():
            write_report(rep, out / f"{name}.{ext}", ext)
        write_pairs(result.pairs, out / "pairs.csv")
        write_rankings(result.ranked, out / "rankings.csv")
        meta["links"] = len(result.links)
        meta["pairs"] = len(result.pairs)
        meta["dual_role_researchers"] = dual_role_count(bundle, result.links)
    return 0


def run(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2

    level = logging.ERROR if args.quiet else logging.DEBUG if args.verbose else logging.INFO
    root = logging.getLogger("kinmerit")
    root.setLevel(min(level, logging.WARNING))
    stderr = logging.StreamHandler(sys.stderr)
    stderr.setLevel(level)
    stderr.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    collector = _WarningCollector()
    root.addHandler(stderr)
    root.addHandler(collector)
    root.propagate = False

    meta: dict[str, Any] = {"version": __version__, "command": args.command,
                            "config_echo": {}, "timestamps": {"started": _now()},
                            "skipped_publications": 0, "warnings": []}
    try:
        code = _execute(args, meta)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(str(exc))
        print(f"{len(exc.report)} violations")
        return 1
    except (ParseError, FileNotFoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        root.removeHandler(stderr)
        root.removeHandler(collector)
    if args.command != "validate" and args.out is not None:
        meta["timestamps"]["finished"] = _now()
        meta["warnings"] = collector.messages
        _write_metadata(args.out, meta)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
