"""Command-line frontend: rank, null, metrics, synth, oracle, replay.

Exit codes: 0 success, 1 computation/domain error, 2 usage or input-format
error. Every command writes a RunManifest next to its outputs; `replay`
re-executes a manifest. All randomness is seeded, so identical flags give
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict

from . import __version__
from .errors import (
    DegenerateTestError,
    HierarchyRankError,
    RecordFormatError,
)
from .manifest import RunManifest
from .metrics import (
    gini,
    ks_two_sample,
    lorenz,
    relative_rank_change,
    upward_fraction,
)
from .mvr import MvrResult, SamplerConfig, brute_force_mvr, sample_mvr
from .network import (
    NetworkFilter,
    build_network,
    load_edge_csv,
    load_records,
    load_whitelist,
    write_edge_csv,
)
from .nullmodel import bootstrap_rho, null_rho_distribution, significance
from .synth import PlantedConfig, generate_planted

DEFAULT_TOP = 30


class _UsageError(Exception):
    pass


# -- small I/O helpers --------------------------------------------------------


def _write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(json.dumps(obj, indent=2, sort_keys=True))
        fh.write("\n")


def _csv_writer(path: str):
    fh = open(path, "w", encoding="utf-8", newline="")
    return fh, csv.writer(fh, lineterminator="\n")


def _fnum(x: float) -> str:
    return repr(float(x))


def _parse_range(text: str, flag: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise _UsageError(f"{flag} expects START:END, got {text!r}")
    try:
        start, end = int(parts[0]), int(parts[1])
    except ValueError:
        raise _UsageError(f"{flag} bounds must be integers, got {text!r}") from None
    if not start < end:
        raise _UsageError(f"{flag} requires START < END, got {text!r}")
    return start, end


def _strip_out_flag(argv: list[str]) -> list[str]:
    kept = []
    skip = False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--out":
            skip = True
            continue
        if tok.startswith("--out="):
            continue
        kept.append(tok)
    return kept


# -- shared flag handling ------------------------------------------------------


def _add_filter_flags(p: argparse.ArgumentParser):
    p.add_argument("--years", metavar="A:B", help="keep records with phd_year in the half-open range [A, B)")
    p.add_argument("--discipline", action="append", metavar="NAME",
                   help="keep records in this discipline (repeatable)")
    p.add_argument("--whitelist", metavar="FILE",
                   help="institution whitelist file; records kept only if both endpoints appear")


def _add_sampler_flags(p: argparse.ArgumentParser):
    p.add_argument("--iters", type=int, metavar="N", help="total chain iterations (default 100000)")
    p.add_argument("--burnin", type=int, metavar="N", help="burn-in iterations (default 20000)")
    p.add_argument("--interval", type=int, metavar="N", help="recording interval (default 100)")
    p.add_argument("--restarts", type=int, metavar="N", help="independent chains (default 10)")
    p.add_argument("--seed", type=int, metavar="N", help="base RNG seed (default 0)")
    p.add_argument("--sampler-config", metavar="FILE", help="key=value sampler config file; flags override it")


def _build_filter(args) -> tuple[NetworkFilter | None, dict]:
    years = _parse_range(args.years, "--years") if args.years else None
    disciplines = frozenset(args.discipline) if args.discipline else None
    whitelist = None
    if args.whitelist:
        try:
            whitelist = load_whitelist(args.whitelist)
        except OSError as exc:
            raise _UsageError(f"cannot read whitelist: {exc}") from None
    echo = {
        "years": list(years) if years else None,
        "disciplines": sorted(disciplines) if disciplines else None,
        "whitelist": args.whitelist or None,
    }
    if years is None and disciplines is None and whitelist is None:
        return None, echo
    return NetworkFilter(year_range=years, disciplines=disciplines, whitelist=whitelist), echo


def _build_sampler(args) -> SamplerConfig:
    if args.sampler_config:
        try:
            base = SamplerConfig.from_kv_file(args.sampler_config)
        except (OSError, ValueError) as exc:
            raise _UsageError(f"bad sampler config: {exc}") from None
    else:
        base = SamplerConfig()
    fields = {
        "total_iterations": args.iters,
        "burn_in": args.burnin,
        "sample_interval": args.interval,
        "restarts": args.restarts,
        "seed": args.seed,
    }
    merged = {k: v for k, v in fields.items() if v is not None}
    try:
        return SamplerConfig(**{**asdict(base), **merged})
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _load_records_checked(path: str):
    try:
        with open(path, "rb") as fh:
            return load_records(fh)
    except OSError as exc:
        raise _UsageError(f"cannot read records: {exc}") from None


def _read_ranking_table(path: str) -> dict[str, int]:
    """Read a consensus ranking CSV into {institution: rank}."""
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise _UsageError(f"cannot read ranking: {exc}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or [h.strip() for h in header[:2]] != ["rank", "institution"]:
            raise RecordFormatError("ranking CSV must start with columns rank,institution")
        table = {}
        for row in reader:
            if not row:
                continue
            try:
                table[row[1].strip()] = int(row[0])
            except (IndexError, ValueError):
                raise RecordFormatError(f"bad ranking row: {row!r}",
                                        line=reader.line_num) from None
    if not table:
        raise RecordFormatError("ranking CSV has no data rows")
    return table


def _write_ranking_csv(path: str, res: MvrResult, names) -> None:
    fh, w = _csv_writer(path)
    with fh:
        w.writerow(["rank", "institution", "prestige_score", "ci_low", "ci_high"])
        for pos, node in enumerate(res.consensus.node_at, start=1):
            w.writerow([
                pos,
                names[node],
                f"{res.prestige_score[node]:.4f}",
                f"{res.ci95[node, 0]:.4f}",
                f"{res.ci95[node, 1]:.4f}",
            ])


def _write_rho_csv(path: str, dist) -> None:
    fh, w = _csv_writer(path)
    with fh:
        w.writerow(["replicate", "rho"])
        for i, v in enumerate(dist.values, start=1):
            w.writerow([i, _fnum(v)])


def _manifest(command: str, argv: list[str], inputs: list[str], filter_echo: dict,
              sampler: SamplerConfig | None, seed: int | None, outputs: list[str],
              out_dir: str) -> None:
    RunManifest(
        command=command,
        argv=_strip_out_flag(argv),
        inputs=inputs,
        filter=filter_echo,
        sampler=asdict(sampler) if sampler else None,
        seed=seed,
        tool_version=__version__,
        outputs=outputs,
    ).write(os.path.join(out_dir, f"{command}_manifest.json"))


# -- subcommands ---------------------------------------------------------------


def _cmd_rank(args, argv) -> int:
    flt, echo = _build_filter(args)
    cfg = _build_sampler(args)
    records = _load_records_checked(args.records)
    net = build_network(records, flt)
    res = sample_mvr(net, cfg)
    names = net.registry.names

    out = args.out
    _write_ranking_csv(os.path.join(out, "ranking.csv"), res, names)
    _write_json(os.path.join(out, "rank_report.json"), {
        "n_nodes": net.n_nodes,
        "n_edges": net.n_edges,
        "total_weight": net.total_weight,
        "best_rho": res.best_rho,
        "best_score": res.best_score,
    })
    _manifest("rank", argv, [args.records], echo, cfg, cfg.seed,
              ["ranking.csv", "rank_report.json"], out)

    top = args.top if args.top is not None else DEFAULT_TOP
    print(f"N={net.n_nodes} edges={net.n_edges} total_weight={net.total_weight} "
          f"best_rho={res.best_rho:.4f} best_score={res.best_score}")
    for pos, node in enumerate(res.consensus.node_at[:top], start=1):
        print(f"{pos:4d}  {names[node]}  {res.prestige_score[node]:.4f}")
    return 0


def _cmd_null(args, argv) -> int:
    if args.records is None and args.edges is None:
        raise _UsageError("provide a records CSV or --edges")
    if args.records is not None and args.edges is not None:
        raise _UsageError("give either a records CSV or --edges, not both")
    if args.replicates < 2:
        raise _UsageError("--replicates must be >= 2")
    cfg = _build_sampler(args)
    if args.edges is not None:
        if args.years or args.discipline or args.whitelist:
            raise _UsageError("record filters do not apply to --edges input")
        echo = {"years": None, "disciplines": None, "whitelist": None}
        try:
            net = load_edge_csv(args.edges)
        except OSError as exc:
            raise _UsageError(f"cannot read edges: {exc}") from None
        inputs = [args.edges]
    else:
        flt, echo = _build_filter(args)
        net = build_network(_load_records_checked(args.records), flt)
        inputs = [args.records]

    emp = bootstrap_rho(net, args.replicates, cfg, seed=cfg.seed)
    nul = null_rho_distribution(net, args.replicates, cfg, seed=cfg.seed)

    out = args.out
    _write_rho_csv(os.path.join(out, "rho_empirical.csv"), emp)
    _write_rho_csv(os.path.join(out, "rho_null.csv"), nul)

    summary = {
        "empirical": {"mean": emp.mean, "std": emp.std, "n": emp.n},
        "null": {"mean": nul.mean, "std": nul.std, "n": nul.n},
    }
    try:
        sig = significance(emp, nul)
        summary.update({
            "degenerate": False,
            "t_statistic": sig.t_statistic,
            "p_value_t": sig.p_value_t,
            "p_value_empirical": sig.p_value_empirical,
            "empirical_mean": sig.empirical_mean,
            "null_mean": sig.null_mean,
        })
    except DegenerateTestError as exc:
        summary.update({
            "degenerate": True,
            "reason": str(exc),
            "t_statistic": None,
            "p_value_t": None,
            "p_value_empirical": (1 + int((nul.values >= emp.values.min()).sum())) / (nul.n + 1),
            "empirical_mean": emp.mean,
            "null_mean": nul.mean,
        })
    _write_json(os.path.join(out, "significance.json"), summary)
    _manifest("null", argv, inputs, echo, cfg, cfg.seed,
              ["rho_empirical.csv", "rho_null.csv", "significance.json"], out)

    if summary["degenerate"]:
        print("degenerate significance test (both distributions constant and equal)")
    else:
        print(f"empirical mean rho={emp.mean:.4f}  null mean rho={nul.mean:.4f}  "
              f"p_t={summary['p_value_t']:.3g}  p_emp={summary['p_value_empirical']:.3g}")
    return 0


def _metrics_production(args, flt):
    net = build_network(_load_records_checked(args.records), flt)
    out_deg, _ = net.degree_sequences()
    return net, out_deg


def _cmd_metrics(args, argv) -> int:
    flt, echo = _build_filter(args)
    out = args.out
    outputs: list[str] = []
    summary: dict = {}

    if args.kind in ("rankchange", "ks") and not args.ranking:
        raise _UsageError(f"metrics {args.kind} requires --ranking")

    if args.kind == "gini":
        net, production = _metrics_production(args, flt)
        summary = {"gini": gini(production), "n_institutions": net.n_nodes}
    elif args.kind == "lorenz":
        net, production = _metrics_production(args, flt)
        curve = lorenz(production)
        path = os.path.join(out, "lorenz.csv")
        fh, w = _csv_writer(path)
        with fh:
            w.writerow(["cum_institutions", "cum_production"])
            for x, y in curve.points:
                w.writerow([_fnum(x), _fnum(y)])
        outputs.append("lorenz.csv")
        summary = {"gini": gini(production), "n_institutions": net.n_nodes}
    elif args.kind == "rankchange":
        records = _load_records_checked(args.records)
        if flt is not None:
            records = [r for r in records if flt.keep(r)]
        table = _read_ranking_table(args.ranking)
        sample = relative_rank_change(records, table)
        path = os.path.join(out, "rankchange.csv")
        _write_rankchange_csv(path, records, table)
        outputs.append("rankchange.csv")
        summary = {
            "upward_fraction": upward_fraction(sample),
            "mean_rank_change": float(sample.values.mean()),
            "n_total": sample.n_total,
            "n_up": sample.n_up,
            "n_dropped": sample.n_dropped,
        }
    elif args.kind == "ks":
        if not args.cohort or len(args.cohort) != 2:
            raise _UsageError("metrics ks requires exactly two --cohort A:B ranges")
        ranges = [_parse_range(c, "--cohort") for c in args.cohort]
        records = _load_records_checked(args.records)
        if flt is not None:
            records = [r for r in records if flt.keep(r)]
        table = _read_ranking_table(args.ranking)
        cohorts = [
            [r for r in records if lo <= r.phd_year < hi] for lo, hi in ranges
        ]
        samples = []
        for i, (cohort, rng) in enumerate(zip(cohorts, ranges), start=1):
            if not cohort:
                raise HierarchyRankError(f"cohort {rng[0]}:{rng[1]} has no records")
            sample = relative_rank_change(cohort, table)
            samples.append(sample)
            path = os.path.join(out, f"rankchange_cohort{i}.csv")
            _write_rankchange_csv(path, cohort, table)
            outputs.append(f"rankchange_cohort{i}.csv")
        d, p = ks_two_sample(samples[0].values, samples[1].values)
        summary = {
            "ks_D": d,
            "ks_p": p,
            "cohorts": [
                {
                    "years": list(rng),
                    "n_total": s.n_total,
                    "n_up": s.n_up,
                    "n_dropped": s.n_dropped,
                    "upward_fraction": upward_fraction(s),
                    "mean_rank_change": float(s.values.mean()),
                }
                for rng, s in zip(ranges, samples)
            ],
        }

    _write_json(os.path.join(out, "metrics.json"), summary)
    outputs.append("metrics.json")
    inputs = [args.records] + ([args.ranking] if args.ranking else [])
    _manifest("metrics", argv, inputs, echo, None, None, outputs, out)
    print(json.dumps(summary, sort_keys=True))
    return 0


def _write_rankchange_csv(path: str, records, table: dict[str, int]) -> None:
    n = len(table)
    fh, w = _csv_writer(path)
    with fh:
        w.writerow(["person_id", "phd_rank", "hire_rank", "relative_change"])
        for rec in records:
            pr = table.get(rec.phd_institution)
            hr = table.get(rec.hire_institution)
            if pr is None or hr is None:
                continue
            w.writerow([rec.person_id, pr, hr, _fnum((hr - pr) / n)])


def _cmd_synth(args, argv) -> int:
    try:
        cfg = PlantedConfig(
            n_nodes=args.nodes,
            n_edges=args.edges,
            p_down=args.pdown,
            producer_skew=args.skew,
            seed=args.seed,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    net, truth = generate_planted(cfg)
    out = args.out
    write_edge_csv(net, os.path.join(out, "edges.csv"))
    fh, w = _csv_writer(os.path.join(out, "truth.csv"))
    with fh:
        w.writerow(["institution", "true_rank"])
        for node in truth.node_at:
            w.writerow([net.registry.names[node], int(truth.rank_of[node])])
    _manifest("synth", argv, [], {"years": None, "disciplines": None, "whitelist": None},
              None, cfg.seed, ["edges.csv", "truth.csv"], out)
    print(f"wrote planted network: N={net.n_nodes} unit_edges={net.total_weight} "
          f"p_down={cfg.p_down} skew={cfg.producer_skew} seed={cfg.seed}")
    return 0


def _cmd_oracle(args, argv) -> int:
    try:
        net = load_edge_csv(args.edges)
    except OSError as exc:
        raise _UsageError(f"cannot read edges: {exc}") from None
    score, best_rho, optima = brute_force_mvr(net)
    names = net.registry.names
    result = {
        "optimal_score": score,
        "optimal_rho": best_rho,
        "n_optima": len(optima),
        "optima": [[names[node] for node in r.node_at] for r in optima],
    }
    _write_json(os.path.join(args.out, "oracle.json"), result)
    _manifest("oracle", argv, [args.edges],
              {"years": None, "disciplines": None, "whitelist": None},
              None, None, ["oracle.json"], args.out)
    print(f"optimal_score={score} optimal_rho={best_rho:.4f} n_optima={len(optima)}")
    return 0


def _cmd_replay(args, argv) -> int:
    try:
        man = RunManifest.read(args.manifest)
    except (OSError, ValueError, TypeError) as exc:
        raise _UsageError(f"cannot read manifest: {exc}") from None
    out = args.out or (os.path.dirname(args.manifest) or ".")
    return main(man.argv + ["--out", out])


# -- parser --------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hierarchyrank",
        description="Prestige hierarchies in Ph.D. hiring networks via minimum violation rankings.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="infer a consensus prestige ranking")
    p.add_argument("records", help="hiring records CSV")
    _add_filter_flags(p)
    _add_sampler_flags(p)
    p.add_argument("--top", type=int, metavar="K", help="rows to display (full ranking always written)")
    p.add_argument("--out", default=".", metavar="DIR")
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("null", help="bootstrap vs degree-preserving null rho distributions")
    p.add_argument("records", nargs="?", help="hiring records CSV")
    p.add_argument("--edges", metavar="FILE", help="edge-list CSV instead of records")
    p.add_argument("--replicates", type=int, default=100, metavar="B")
    _add_filter_flags(p)
    _add_sampler_flags(p)
    p.add_argument("--out", default=".", metavar="DIR")
    p.set_defaults(func=_cmd_null)

    p = sub.add_parser("metrics", help="inequality and mobility metrics")
    p.add_argument("kind", choices=["gini", "lorenz", "rankchange", "ks"])
    p.add_argument("records", help="hiring records CSV")
    p.add_argument("--ranking", metavar="FILE", help="consensus ranking CSV from `rank`")
    p.add_argument("--cohort", action="append", metavar="A:B",
                   help="cohort year range for ks (give exactly twice)")
    _add_filter_flags(p)
    p.add_argument("--out", default=".", metavar="DIR")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("synth", help="generate a planted-hierarchy network")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--pdown", type=float, default=0.9)
    p.add_argument("--skew", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".", metavar="DIR")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("oracle", help="exact MVR by exhaustive enumeration (N <= 10)")
    p.add_argument("edges", help="edge-list CSV")
    p.add_argument("--out", default=".", metavar="DIR")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("replay", help="re-run a recorded manifest")
    p.add_argument("manifest", help="path to a *_manifest.json")
    p.add_argument("--out", default=None, metavar="DIR",
                   help="output directory (default: the manifest's directory)")
    p.set_defaults(func=_cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out_dir = getattr(args, "out", None)
    if out_dir is not None and args.command != "replay":
        try:
            os.makedirs(out_dir, exist_ok=True)
        except OSError as exc:
            print(f"error: cannot create output directory: {exc}", file=sys.stderr)
            return 2
    try:
        return args.func(args, argv)
    except (_UsageError, RecordFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (HierarchyRankError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
