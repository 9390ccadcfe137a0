"""tracekit command line: record, resimulate, graph, store, envs.

Exit codes are stable so pipelines can gate on them:
0 success, 2 usage/input error, 3 data error (corrupt or inconsistent
trace), 4 missing content, 5 integrity failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from tracekit import codec
from tracekit.envs.base import default_params, schemas_document
from tracekit.errors import (
    CodecError,
    DuplicateNameError,
    EmptySeriesError,
    IntegrityFailureError,
    NotFoundError,
    ResimulationError,
    SchemaMismatchError,
    TracekitError,
    UnknownEnvError,
)
from tracekit.policies import POLICIES, record_run
from tracekit.resim import (
    compression_report,
    resimulate,
    resimulate_parallel,
    verify_determinism,
)
from tracekit.store import ContentStore, trace_id
from tracekit.traces import CompressionReport, MinimalTrace
from tracekit.vega import reward_graph

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_MISSING = 4
EXIT_INTEGRITY = 5

STORE_ENV_VAR = "TRACEKIT_STORE"
CREATED_MS_ENV_VAR = "TRACEKIT_CREATED_MS"


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_minimal(path: str) -> MinimalTrace:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise _CliError(EXIT_USAGE, f"cannot read {path}: {exc}") from exc
    try:
        trace = codec.decode(data)
    except CodecError as exc:
        raise _CliError(EXIT_DATA, f"{path}: {exc}") from exc
    except (UnknownEnvError, SchemaMismatchError) as exc:
        raise _CliError(EXIT_DATA, f"{path}: {exc}") from exc
    if not isinstance(trace, MinimalTrace):
        raise _CliError(EXIT_USAGE, f"{path} is a full trace, expected a minimal trace")
    return trace


def _report_json(report: CompressionReport, training_seconds: float | None) -> dict:
    pct = (
        report.resim_seconds / training_seconds * 100.0
        if training_seconds
        else None
    )
    return {
        "env_name": report.env_name,
        "full_bytes": report.full_bytes,
        "minimal_bytes": report.minimal_bytes,
        "ratio": report.ratio,
        "resim_seconds": report.resim_seconds,
        "episodes": report.episodes,
        "steps": report.steps,
        "pct_resim_to_training": pct,
    }


def _print_report(report: CompressionReport, training_seconds: float | None) -> None:
    pct = (
        f"{report.resim_seconds / training_seconds * 100.0:.2f}"
        if training_seconds
        else "-"
    )
    header = (
        f"{'Environment':<20} {'Trace (MB)':>11} {'Minimal Trace (MB)':>19} "
        f"{'Compression Ratio':>18} {'Re-simulation (sec)':>20} "
        f"{'% Re-Simulation to Training':>28}"
    )
    row = (
        f"{report.env_name:<20} {report.full_bytes / 1e6:>11.2f} "
        f"{report.minimal_bytes / 1e6:>19.2f} {report.ratio:>18.2f} "
        f"{report.resim_seconds:>20.2f} {pct:>28}"
    )
    print(header)
    print(row)


def _cmd_record(args) -> int:
    params = default_params(args.env)
    created = args.created_ms
    if created is None:
        env_value = os.environ.get(CREATED_MS_ENV_VAR)
        created = int(env_value) if env_value else 0
    trace, _ledger = record_run(
        params,
        policy=args.policy,
        episodes=args.episodes,
        master_seed=args.master_seed,
        label=args.label,
        created_unix_ms=created,
    )
    data = codec.encode_minimal(trace)
    Path(args.out).write_bytes(data)
    print(trace_id(data))
    print(f"episodes: {len(trace.episodes)}")
    print(f"steps: {sum(len(ep.actions) for ep in trace.episodes)}")
    return EXIT_OK


def _cmd_resimulate(args) -> int:
    if args.workers < 1:
        raise _CliError(EXIT_USAGE, "--workers must be >= 1")
    minimal = _load_minimal(args.input)
    start = time.perf_counter()
    try:
        if args.workers == 1:
            full = resimulate(minimal)
        else:
            full = resimulate_parallel(minimal, args.workers)
    except ResimulationError as exc:
        raise _CliError(EXIT_DATA, str(exc)) from exc
    elapsed = time.perf_counter() - start
    if args.verify_runs:
        if args.verify_runs < 2:
            raise _CliError(EXIT_USAGE, "--verify-runs must be >= 2")
        failed, total = verify_determinism(minimal, args.verify_runs)
        print(f"failed: {failed}/{total}")
    if args.out:
        Path(args.out).write_bytes(codec.encode_full(full))
    report = compression_report(minimal, full, elapsed)
    if args.json:
        print(json.dumps(_report_json(report, args.training_seconds)))
    else:
        _print_report(report, args.training_seconds)
    return EXIT_OK


def _cmd_graph(args) -> int:
    series = []
    for path in args.inputs:
        minimal = _load_minimal(path)
        try:
            full = resimulate(minimal)
        except ResimulationError as exc:
            raise _CliError(EXIT_DATA, f"{path}: {exc}") from exc
        series.append((minimal.label, full))
    try:
        document = reward_graph(series)
    except (EmptySeriesError, DuplicateNameError) as exc:
        raise _CliError(EXIT_USAGE, str(exc)) from exc
    Path(args.out).write_text(document)
    return EXIT_OK


def _open_store(args) -> ContentStore:
    root = args.store or os.environ.get(STORE_ENV_VAR)
    if not root:
        raise _CliError(
            EXIT_USAGE, f"no store root: pass --store DIR or set {STORE_ENV_VAR}"
        )
    return ContentStore(root)


def _cmd_store(args) -> int:
    store = _open_store(args)
    if args.store_cmd == "add":
        try:
            data = Path(args.file).read_bytes()
        except OSError as exc:
            raise _CliError(EXIT_USAGE, f"cannot read {args.file}: {exc}") from exc
        print(store.put(data))
    elif args.store_cmd == "get":
        Path(args.out).write_bytes(store.get(args.id))
    elif args.store_cmd == "pin":
        store.pin(args.id)
    elif args.store_cmd == "unpin":
        store.unpin(args.id)
    elif args.store_cmd == "ls":
        for tid in store.list_pins() if args.pins else store.ids():
            print(tid)
    elif args.store_cmd == "gc":
        for tid in store.gc():
            print(tid)
    else:  # verify
        bad = store.verify()
        for tid in bad:
            print(tid)
        if bad:
            raise _CliError(EXIT_INTEGRITY, f"{len(bad)} corrupt object(s)")
    return EXIT_OK


def _cmd_envs(args) -> int:
    document = schemas_document()
    if args.json:
        print(json.dumps(document, indent=2))
    else:
        for env in document["environments"]:
            print(f"{env['name']} v{env['version']} (max {env['max_steps']} steps)")
            for param in env["parameters"]:
                print(f"  {param['name']}: {param['type']} = {param['default']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracekit",
        description="Record, re-simulate, and verify minimal environment traces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("record", help="run a demo policy and write a .mintrace file")
    p.add_argument("--env", required=True, help="registered environment name")
    p.add_argument("--policy", choices=sorted(POLICIES), default="random")
    p.add_argument("--episodes", type=int, required=True)
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--label", default="")
    p.add_argument("--out", required=True)
    p.add_argument(
        "--created-ms",
        type=int,
        default=None,
        help=f"created_unix_ms field (default: ${CREATED_MS_ENV_VAR} or 0, "
        "keeping output bytes reproducible)",
    )
    p.set_defaults(func=_cmd_record)

    p = sub.add_parser("resimulate", help="rebuild a full trace from a minimal one")
    p.add_argument("input", help="path to a .mintrace file")
    p.add_argument("--out", default=None, help="write the .fulltrace file here")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--verify-runs", type=int, default=0)
    p.add_argument("--training-seconds", type=float, default=None)
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.set_defaults(func=_cmd_resimulate)

    p = sub.add_parser("graph", help="emit a reward-per-episode Vega-Lite JSON file")
    p.add_argument("inputs", nargs="+", help="one or more .mintrace files")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("store", help="content-addressed trace storage")
    p.add_argument("--store", default=None, help=f"store root (or ${STORE_ENV_VAR})")
    store_sub = p.add_subparsers(dest="store_cmd", required=True)
    sp = store_sub.add_parser("add", help="store a file, print its id")
    sp.add_argument("file")
    sp = store_sub.add_parser("get", help="write stored bytes to a path")
    sp.add_argument("id")
    sp.add_argument("out")
    sp = store_sub.add_parser("pin", help="exempt an id from gc")
    sp.add_argument("id")
    sp = store_sub.add_parser("unpin", help="remove an id from the pin set")
    sp.add_argument("id")
    sp = store_sub.add_parser("ls", help="list stored ids")
    sp.add_argument("--pins", action="store_true", help="list pinned ids only")
    store_sub.add_parser("gc", help="delete unpinned content, print removed ids")
    store_sub.add_parser("verify", help="re-hash all content, print corrupt ids")
    p.set_defaults(func=_cmd_store)

    p = sub.add_parser("envs", help="describe the registered environments")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_envs)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"tracekit: {exc}", file=sys.stderr)
        return exc.code
    except (UnknownEnvError, ValueError) as exc:
        print(f"tracekit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotFoundError as exc:
        print(f"tracekit: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except IntegrityFailureError as exc:
        print(f"tracekit: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except CodecError as exc:
        print(f"tracekit: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TracekitError as exc:
        print(f"tracekit: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"tracekit: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
