"""Command-line interface.

Subcommands::

    generate  run the direct process and persist measurement records
    observe   measure a dumped graph file
    couple    run two families against shared trees and persist records
    sweep     run a grid of families
    verify    execute a named verification suite

Flags mirror config-file keys (flat ``key=value`` lines, ``#`` comments);
flags override the file.  Exit status: 0 on success, 1 when a verify
criterion fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import experiments, verify
from .edgestep import make_family
from .graphs import dump_graph, evolve, load_graph
from .observables import measure_graph
from .rng import child_seed

USAGE_ERROR = 2


class UsageError(Exception):
    pass


def _read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path) as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, eq, value = line.partition("=")
            if not eq:
                raise UsageError(f"config {path}:{ln}: expected key=value, got {line!r}")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _parse_int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edgepa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, families=True):
        p.add_argument("--config", help="flat key=value config file; flags override it")
        if families:
            p.add_argument(
                "--family",
                action="append",
                help="family descriptor, e.g. const:0.5, rv:0.5, log:1, osc:base=30; "
                "repeat for a grid",
            )
            p.add_argument("--family2", help="second family for coupled runs")
            p.add_argument("--t", help="comma-separated horizons, e.g. 1000,10000")
            p.add_argument("--reps", type=int, help="replicates per horizon (default 1)")
            p.add_argument("--seed", type=int, help="run seed (required: no silent nondeterminism)")
            p.add_argument("--jobs", type=int, help="parallel workers (default 1)")
            p.add_argument("--no-diameter", action="store_true", help="skip diameter measurement")
            p.add_argument("--no-clique", action="store_true", help="skip clique measurement")
            p.add_argument("--no-paths", action="store_true", help="skip chain/path measurement")
            p.add_argument("--clique-exact", action="store_true", help="also run exact clique search")
            p.add_argument("--exact-diameter-cap", type=int, help="all-pairs cap (default 20000)")
        p.add_argument("--out", help="output file path")
        p.add_argument("--format", choices=("csv", "json"), help="record format (default csv)")

    p_gen = sub.add_parser("generate", help="run the direct process and measure")
    common(p_gen)
    p_gen.add_argument("--dump-graphs", metavar="DIR", help="also dump each generated graph")

    p_obs = sub.add_parser("observe", help="measure a dumped graph file")
    common(p_obs, families=False)
    p_obs.add_argument("graph", help="path to a graph dump")
    p_obs.add_argument("--exact-diameter-cap", type=int, default=20000)

    p_cpl = sub.add_parser("couple", help="collapse two families from shared trees")
    common(p_cpl)

    p_sweep = sub.add_parser("sweep", help="run a family grid")
    common(p_sweep)

    p_ver = sub.add_parser("verify", help="run a named verification suite")
    p_ver.add_argument("--config", help="flat key=value config file; flags override it")
    p_ver.add_argument(
        "--suite",
        help=f"one of: {', '.join(sorted(verify.SUITES))}",
    )
    p_ver.add_argument("--seed", type=int, help=f"suite seed (default {verify.DEFAULT_SEED})")
    return parser


def _merged(args: argparse.Namespace, key: str, cast, default=None):
    """Flag value if given, else config value, else default."""
    val = getattr(args, key, None)
    if val not in (None, False, []):
        return val
    cfg = getattr(args, "_config", {})
    if key in cfg:
        raw = cfg[key]
        if cast is bool:
            return raw.lower() in ("1", "true", "yes", "on")
        if cast is list:
            return raw.split()
        return cast(raw)
    return default


def _spec_from_args(args: argparse.Namespace, coupled: bool) -> experiments.ExperimentSpec:
    cfg = getattr(args, "_config", {})
    families = args.family or (cfg.get("family", "").split() or None)
    if not families:
        raise UsageError("at least one --family is required")
    horizons_raw = _merged(args, "t", str)
    if not horizons_raw:
        raise UsageError("--t is required")
    seed = _merged(args, "seed", int)
    if seed is None:
        raise UsageError("--seed is required")
    family2 = _merged(args, "family2", str)
    if coupled and not family2:
        raise UsageError("couple requires --family2")
    spec = experiments.ExperimentSpec(
        families=list(families),
        horizons=_parse_int_list(str(horizons_raw)),
        reps=_merged(args, "reps", int, 1),
        seed=seed,
        family2=family2 if coupled else None,
        diameter=not _merged(args, "no_diameter", bool, False),
        clique=not _merged(args, "no_clique", bool, False),
        paths=not _merged(args, "no_paths", bool, False),
        clique_exact=_merged(args, "clique_exact", bool, False),
        exact_diameter_cap=_merged(args, "exact_diameter_cap", int, 20000),
        out=_merged(args, "out", str),
        fmt=_merged(args, "format", str, "csv"),
        jobs=_merged(args, "jobs", int, 1),
    )
    try:
        spec.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return spec


def _emit(rows: list[dict], spec: experiments.ExperimentSpec) -> None:
    if spec.out:
        print(f"wrote {len(rows)} records to {spec.out}")
    else:
        json.dump(rows, sys.stdout, indent=1)
        print()


def _cmd_generate(args) -> int:
    spec = _spec_from_args(args, coupled=False)
    rows = experiments.run(spec)
    dump_dir = _merged(args, "dump_graphs", str)
    if dump_dir:
        import os

        os.makedirs(dump_dir, exist_ok=True)
        for desc in spec.families:
            f = make_family(desc)
            tag = desc.replace(":", "_").replace(",", "_").replace("=", "")
            for t in spec.horizons:
                for rep in range(spec.reps):
                    g = evolve(f, t, child_seed(spec.seed, rep))
                    path = os.path.join(dump_dir, f"{tag}_t{t}_r{rep}.graph")
                    with open(path, "w") as fh:
                        dump_graph(g, fh)
    _emit(rows, spec)
    return 0


def _cmd_observe(args) -> int:
    with open(args.graph) as fh:
        g = load_graph(fh)
    report = measure_graph(g, exact_diameter_cap=args.exact_diameter_cap)
    overlay = experiments._overlay(g.family, g.t) if g.family else {}
    record = experiments._report_to_record(
        "observe", g.family or "-", g.t, 0, g.seed if g.seed is not None else "", report, overlay
    )
    record["wall_time"] = ""
    out = _merged(args, "out", str)
    fmt = _merged(args, "format", str, "json")
    if out:
        experiments.write_records([record], out, fmt)
        print(f"wrote 1 record to {out}")
    else:
        json.dump(record, sys.stdout, indent=1)
        print()
    return 0


def _cmd_couple(args) -> int:
    spec = _spec_from_args(args, coupled=True)
    rows = experiments.run(spec)
    _emit(rows, spec)
    return 0


def _cmd_sweep(args) -> int:
    spec = _spec_from_args(args, coupled=False)
    rows = experiments.sweep(spec)
    _emit(rows, spec)
    return 0


def _cmd_verify(args) -> int:
    suite = _merged(args, "suite", str)
    if not suite:
        raise UsageError("--suite is required")
    seed = _merged(args, "seed", int, verify.DEFAULT_SEED)
    try:
        results = verify.run_suite(suite, seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for res in results:
        print(res.line(), flush=True)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "observe": _cmd_observe,
        "couple": _cmd_couple,
        "sweep": _cmd_sweep,
        "verify": _cmd_verify,
    }
    try:
        args._config = _read_config(args.config) if getattr(args, "config", None) else {}
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
