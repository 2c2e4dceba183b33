"""Command-line driver: ``hompulse {scan,oracle,validate,plot}``.

Exit codes: 0 success, 1 configuration error, 2 validation failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

from . import __version__, quantum, validation
from .clicksim import InsufficientBaselineError, ScanResult, estimate_visibility, fringe_visibility, run_scan
from .scenarios import SCENARIOS, ConfigError, ScenarioConfig, load_config, named_scenario, with_overrides

log = logging.getLogger("hompulse")

EXIT_OK, EXIT_CONFIG, EXIT_VALIDATION, EXIT_IO = 0, 1, 2, 3

COLUMNS = ("delta_l_um", "singles_d1", "singles_d2", "coincidences", "trials", "rate", "rate_stderr")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.12g}"


def summarize(result: ScanResult, config: ScenarioConfig) -> dict:
    """Dip visibility of the coincidences, or singles fringe visibility for short scans.

    The dip is centred at zero delay: the delay axis is referenced to path
    balance, where the synchronized fringe envelope peaks.
    """
    try:
        v, err = estimate_visibility(result.points, config.pulses.spectrum(), centre=0.0)
        kind = "coincidence_dip"
    except InsufficientBaselineError:
        counts = result.singles_c
        v = fringe_visibility(counts)
        top, bottom = counts.max(), counts.min()
        err = float(2.0 * math.sqrt(top * bottom * (top + bottom)) / (top + bottom) ** 2) if top + bottom else math.nan
        kind = "singles_fringe"
    result.visibility, result.visibility_stderr = v, err
    return {"kind": kind, "visibility": v, "visibility_stderr": err}


def format_csv(result: ScanResult, summary: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for p in result.points:
        writer.writerow([_fmt(p.delta_l), p.singles_c, p.singles_d, p.coincidences, p.trials,
                         _fmt(p.rate), _fmt(p.coincidence_rate_stderr)])
    buffer.write(
        f"# summary kind={summary['kind']} visibility={_fmt(summary['visibility'])} "
        f"visibility_stderr={_fmt(summary['visibility_stderr'])}\n"
    )
    return buffer.getvalue()


def metadata_path(out: Path) -> Path:
    return out.with_name(out.stem + ".meta.json")


def execute_scan(config: ScenarioConfig, threads: int = 1) -> tuple[ScanResult, dict]:
    result = run_scan(config.pulses, config.process, config.scan.positions(), config.slot_offset_m,
                      config.detector, config.trials_per_point, config.seed, threads)
    return result, summarize(result, config)


def write_outputs(out: Path, config: ScenarioConfig, result: ScanResult, summary: dict) -> None:
    out.write_text(format_csv(result, summary))
    meta = {
        "hompulse_version": __version__,
        "columns": list(COLUMNS),
        "config": config.to_dict(),
        "summary": summary,
    }
    metadata_path(out).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _resolve_config(args) -> ScenarioConfig:
    if args.config:
        config = load_config(args.config)
        if args.scenario and args.scenario != config.scenario:
            log.info("--scenario %s replaces %s from the config file", args.scenario, config.scenario)
            config = named_scenario(args.scenario)
    else:
        config = named_scenario(args.scenario or "hom_overlapped")
    return with_overrides(config, seed=args.seed, trials=args.trials)


def cmd_scan(args) -> int:
    try:
        config = _resolve_config(args)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out or f"{config.scenario}.csv")
    log.info("scan %s: %d points x %d trials, seed %d", config.scenario, len(config.scan.positions()),
             config.trials_per_point, config.seed)
    result, summary = execute_scan(config, args.threads)
    try:
        write_outputs(out, config, result, summary)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"{out}: {summary['kind']} V = {summary['visibility']:.4f} +- {summary['visibility_stderr']:.4f}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    kind = quantum.SingleHeralded() if args.source == "single" else quantum.WeakCoherent(args.mu)
    source = quantum.SourceModel(kind, within_input_coherent=args.coherent)
    paths = quantum.enumerate_paths(source)
    print(f"{'path':<5} {'amplitude':>26} {'|amp|^2':>12} {'class':>6}")
    for p in paths:
        amp = f"{p.amplitude.real:+.6f}{p.amplitude.imag:+.6f}j"
        print(f"{p.label.value:<5} {amp:>26} {abs(p.amplitude) ** 2:>12.6g} {p.distinguishability_class:>6}")
    print(f"baseline P = {quantum.baseline_probability(paths):.6g}")
    print(f"minimum P  = {quantum.minimum_probability(paths):.6g}")
    print(f"V = {quantum.oracle_visibility(source):.6f}")
    return EXIT_OK


def cmd_validate(args) -> int:
    results = validation.run_all(args.trials)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<32} {r.detail}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VALIDATION if failed else EXIT_OK


def read_scan_csv(path) -> tuple[dict[str, list[float]], dict]:
    columns: dict[str, list[float]] = {c: [] for c in COLUMNS}
    summary = {}
    rows = []
    with open(path, newline="") as handle:
        for line in handle:
            if line.startswith("#"):
                summary.update(_parse_summary(line))
            else:
                rows.append(line)
    reader = csv.DictReader(rows)
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
    for row in reader:
        for c in COLUMNS:
            columns[c].append(float(row[c]))
    return columns, summary


def _parse_summary(line: str) -> dict:
    if not line.startswith("# summary"):
        return {}
    pairs = (item.split("=", 1) for item in line[len("# summary"):].split())
    return {k: (v if k == "kind" else float(v)) for k, v in pairs}


def cmd_plot(args) -> int:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    try:
        data, summary = read_scan_csv(args.csv)
    except OSError as exc:
        print(f"error: cannot read {args.csv}: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out or Path(args.csv).with_suffix(".png"))
    fig, (ax_s, ax_c) = plt.subplots(2, 1, sharex=True, figsize=(6, 6))
    ax_s.plot(data["delta_l_um"], data["singles_d1"], ".-", ms=3, label="D1")
    ax_s.plot(data["delta_l_um"], data["singles_d2"], ".-", ms=3, label="D2")
    ax_s.set_ylabel("singles")
    ax_s.legend()
    ax_c.errorbar(data["delta_l_um"], data["coincidences"],
                  yerr=[s * t for s, t in zip(data["rate_stderr"], data["trials"])], fmt=".", ms=3)
    ax_c.set_xlabel("optical delay (um)")
    ax_c.set_ylabel("coincidences")
    if summary:
        ax_c.set_title(f"{summary.get('kind')}: V = {summary.get('visibility', math.nan):.3f}"
                       f" +- {summary.get('visibility_stderr', math.nan):.3f}")
    fig.tight_layout()
    try:
        fig.savefig(out, dpi=120)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    finally:
        plt.close(fig)
    print(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hompulse", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    scan = sub.add_parser("scan", help="simulate a delay scan and write CSV + metadata")
    scan.add_argument("--config", help="TOML scenario file")
    scan.add_argument("--scenario", choices=SCENARIOS)
    scan.add_argument("--seed", type=int)
    scan.add_argument("--trials", type=int, help="trials per scan point")
    scan.add_argument("--out", help="CSV output path (default <scenario>.csv)")
    scan.add_argument("--threads", type=int, default=1, help="worker threads; never changes results")
    scan.set_defaults(func=cmd_scan)

    oracle = sub.add_parser("oracle", help="print the biphoton path table and visibility")
    oracle.add_argument("--source", choices=("single", "coherent"), required=True)
    oracle.add_argument("--mu", type=float, default=0.1, help="mean photons per coherent pulse")
    group = oracle.add_mutually_exclusive_group()
    group.add_argument("--coherent-within-input", dest="coherent", action="store_true", default=True)
    group.add_argument("--incoherent-within-input", dest="coherent", action="store_false")
    oracle.set_defaults(func=cmd_oracle)

    check = sub.add_parser("validate", help="run the invariant suite")
    check.add_argument("--trials", type=int, default=20_000, help="trials for the Monte Carlo checks")
    check.set_defaults(func=cmd_validate)

    plot = sub.add_parser("plot", help="render a scan CSV as PNG")
    plot.add_argument("csv")
    plot.add_argument("--out")
    plot.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    for name in ("trials", "threads"):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            parser.error(f"--{name} must be >= 1")
    if getattr(args, "seed", None) is not None and not 0 <= args.seed < 2**64:
        parser.error("--seed must be an unsigned 64-bit integer")
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
