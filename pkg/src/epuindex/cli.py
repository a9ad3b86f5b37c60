"""Command-line entry point: ``build-index``, ``nowcast`` and ``export``.

Exit codes: 0 success, 2 configuration/validation error, 3 data error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import shutil
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from epuindex.config import RunConfig, load_config
from epuindex.corpus import TokenizerConfig
from epuindex.errors import ConfigError, DataError, EpuError
from epuindex.lexicon import load_lexicon
from epuindex.months import format_month
from epuindex.nowcast.panel import MacroPanel, align, read_panel_csv
from epuindex.nowcast.rolling import ModelVariant, NowcastRun, evaluation_range, rolling_nowcast, summarize
from epuindex.pipeline import (
    build_index,
    read_corpora,
    read_index_csv,
    write_diagnostics,
    write_index_csv,
)

log = logging.getLogger("epuindex")

INDEX_FILE = "index.csv"
DIAGNOSTICS_DIR = "diagnostics"
RUNS_DIR = "runs"


def _build(cfg: RunConfig):
    tokenizer = TokenizerConfig.from_file(cfg.stopwords, cfg.apostrophe_split)
    lexicon = load_lexicon(cfg.lexicon, tokenizer)
    log.info("lexicon: %r", lexicon)
    docs = read_corpora(cfg.corpus)
    log.info("read %d documents from %d sources", len(docs), len(cfg.corpus))
    return build_index(docs, tokenizer, lexicon, cfg.triples, cfg.norm, cfg.start, cfg.end,
                       cfg.threads, sources=sorted(cfg.corpus))


def cmd_build_index(cfg: RunConfig) -> int:
    index, series = _build(cfg)
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    write_index_csv(index, out / INDEX_FILE, series)
    write_diagnostics(series, out / DIAGNOSTICS_DIR)
    defined = int(np.sum(~np.isnan(index.epu)))
    print(f"months: {len(index.months)} "
          f"({format_month(int(index.months[0]))} to {format_month(int(index.months[-1]))}), "
          f"with index value: {defined}" if len(index.months) else "months: 0")
    hist = Counter(int(s) for s in index.n_sources)
    print("sources per month: " + ", ".join(f"{k}: {hist[k]}" for k in sorted(hist)))
    print(f"wrote {out / INDEX_FILE}")
    return 0


def _load_epu(path, panel: MacroPanel) -> np.ndarray:
    months, values = read_index_csv(path)
    return align(months, values, panel.months)


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else repr(float(x))


def _write_run(run: NowcastRun, path: Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["month", "realized", "predicted", "error"])
        for mo, r, p, e in zip(run.months.tolist(), run.realized, run.predicted, run.errors):
            w.writerow([format_month(mo), _fmt(r), _fmt(p), _fmt(e)])


def format_table(target: str, rows: list[dict], variants: list[str]) -> str:
    """Text table: metrics x100, DM p-value against M0 in brackets."""
    lines = []
    by = {(r["estimator"], r["variant"]): r for r in rows}
    for est in dict.fromkeys(r["estimator"] for r in rows):
        lines.append(f"{target} / {est}")
        head = "".join(f"{'RMSFE ' + v:>18}" for v in variants) + "".join(f"{'MAFE ' + v:>18}" for v in variants)
        lines.append(head)
        cells = []
        for metric, loss in (("rmsfe", "squared"), ("mafe", "absolute")):
            for v in variants:
                r = by[(est, v)]
                cell = f"{100 * r[metric]:.3f}"
                if f"dm_p_{loss}" in r:
                    cell += f"[{r[f'dm_p_{loss}']:.3f}]"
                cells.append(f"{cell:>18}")
        lines.append("".join(cells))
        lines.append("")
    return "\n".join(lines)


SUMMARY_COLUMNS = ["target", "estimator", "variant", "n", "rmsfe", "mafe"]
DM_COLUMNS = ["dm_stat_squared", "dm_p_squared", "dm_stat_absolute", "dm_p_absolute"]


def cmd_nowcast(cfg: RunConfig) -> int:
    nc = cfg.nowcast
    panel = read_panel_csv(nc.panel, nc.transforms)
    for target in nc.targets:
        if target not in panel.columns:
            raise ConfigError(f"nowcast target {target!r} is not a column of {nc.panel}")
        try:
            evaluation_range(panel, target, nc.window, nc.eval_start, nc.eval_end)
        except DataError as exc:
            raise ConfigError(f"evaluation range: {exc}") from None

    epu = None
    if "M0" in nc.variants:
        index_path = nc.index or cfg.output_dir / INDEX_FILE
        if index_path.is_file():
            epu = _load_epu(index_path, panel)
        else:
            if not (cfg.corpus and cfg.stopwords and cfg.lexicon):
                raise ConfigError(f"index {index_path} not found and the config cannot build it "
                                  "([corpus], tokenizer.stopwords and lexicon.path are needed)")
            log.info("index %s not found: building it first", index_path)
            index, series = _build(cfg)
            epu = align(index.months, index.epu, panel.months)
    alt = _load_epu(nc.alt_epu, panel) if "M2" in nc.variants else None

    results = {}
    for target in nc.targets:
        for est in nc.estimators:
            for tag in nc.variants:
                variant = ModelVariant(tag, {"M0": epu, "M1": None, "M2": alt}[tag])
                log.info("nowcast %s: %s / %s", target, est, tag)
                results[(target, est, tag)] = rolling_nowcast(
                    panel, target, variant, est, nc.window, nc.eval_start, nc.eval_end,
                    nc.enet, nc.kmax, cfg.threads)

    # everything computed: only now touch the output directory
    runs_dir = cfg.output_dir / RUNS_DIR
    runs_dir.mkdir(parents=True, exist_ok=True)
    compare = len(nc.variants) > 1 and "M0" in nc.variants
    summary_rows, tables = [], []
    for target in nc.targets:
        runs = [results[(target, e, v)] for e in nc.estimators for v in nc.variants]
        for r in runs:
            _write_run(r, runs_dir / f"{target}__{r.estimator}__{r.variant}.csv")
        rows = summarize(runs)
        tables.append(format_table(target, rows, nc.variants))
        for row in rows:
            summary_rows.append({"target": target, **row})
    columns = SUMMARY_COLUMNS + (DM_COLUMNS if compare else [])
    with open(cfg.output_dir / "nowcast_summary.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in summary_rows:
            w.writerow([row[c] if c in ("target", "estimator", "variant", "n")
                        else _fmt(row.get(c, math.nan)) for c in columns])
    text = "\n".join(tables)
    (cfg.output_dir / "nowcast_summary.txt").write_text(text, encoding="utf-8")
    print(text)
    return 0


def cmd_export(cfg: RunConfig, what: str, target: Path, source_dir: Path | None = None) -> int:
    src = source_dir or cfg.output_dir
    target.mkdir(parents=True, exist_ok=True)
    if what == "index":
        f = src / INDEX_FILE
        if not f.is_file():
            raise DataError(f"index not found: {f} (run build-index first)")
        shutil.copyfile(f, target / INDEX_FILE)
    elif what == "diagnostics":
        d = src / DIAGNOSTICS_DIR
        files = sorted(d.glob("*.csv")) if d.is_dir() else []
        if not files:
            raise DataError(f"diagnostics not found in {d} (run build-index first)")
        (target / DIAGNOSTICS_DIR).mkdir(exist_ok=True)
        for f in files:
            shutil.copyfile(f, target / DIAGNOSTICS_DIR / f.name)
    elif what == "runs":
        d = src / RUNS_DIR
        files = sorted(d.glob("*.csv")) if d.is_dir() else []
        summary = src / "nowcast_summary.csv"
        if not files or not summary.is_file():
            raise DataError(f"nowcast runs not found in {src} (run nowcast first)")
        (target / RUNS_DIR).mkdir(exist_ok=True)
        for f in files:
            shutil.copyfile(f, target / RUNS_DIR / f.name)
        for name in ("nowcast_summary.csv", "nowcast_summary.txt"):
            if (src / name).is_file():
                shutil.copyfile(src / name, target / name)
    else:
        raise ConfigError(f"unknown export target {what!r}")
    print(f"exported {what} to {target}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, type=Path, help="run configuration (TOML)")
    common.add_argument("--out", type=Path, help="output directory (overrides run.output_dir)")
    common.add_argument("--threads", type=int, help="worker count for documents and windows")
    common.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser = argparse.ArgumentParser(prog="epuindex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build-index", parents=[common], help="corpus to EPU index CSV")
    sub.add_parser("nowcast", parents=[common], help="rolling-window nowcast evaluation")
    exp = sub.add_parser("export", parents=[common], help="copy artifacts to --out")
    exp.add_argument("what", choices=["index", "diagnostics", "runs"])
    exp.add_argument("--from", dest="source_dir", type=Path,
                     help="directory holding the artifacts (default: run.output_dir)")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.threads is not None and args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.command == "export":
            if args.out is None:
                raise ConfigError("export needs --out (the target directory)")
            cfg = load_config(args.config, {"threads": args.threads}, need_corpus=False)
            return cmd_export(cfg, args.what, args.out, args.source_dir)
        overrides = {"output_dir": args.out, "threads": args.threads}
        if args.command == "build-index":
            return cmd_build_index(load_config(args.config, overrides))
        cfg = load_config(args.config, overrides, need_corpus=False, need_nowcast=True)
        return cmd_nowcast(cfg)
    except EpuError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
