"""Run configuration: one TOML file, validated in full before any computation.

Relative paths are resolved against the directory holding the config file.
See ``README.md`` for an annotated example.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from epuindex.errors import ConfigError
from epuindex.index import NormalizationParams
from epuindex.months import parse_month
from epuindex.nowcast.enet import EnetConfig
from epuindex.nowcast.rolling import ESTIMATORS, VARIANTS
from epuindex.triples import TripleParams

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib


@dataclass
class NowcastConfig:
    panel: Path
    targets: list[str]
    transforms: dict[str, str] = field(default_factory=dict)
    window: int = 60
    eval_start: int | None = None
    eval_end: int | None = None
    variants: list[str] = field(default_factory=lambda: ["M0", "M1"])
    estimators: list[str] = field(default_factory=lambda: ["enet", "pca"])
    index: Path | None = None
    alt_epu: Path | None = None
    kmax: int = 8
    enet: EnetConfig = field(default_factory=EnetConfig)


@dataclass
class RunConfig:
    path: Path
    output_dir: Path
    corpus: dict[str, list[Path]]
    stopwords: Path | None
    apostrophe_split: bool
    lexicon: Path | None
    triples: TripleParams
    norm: NormalizationParams
    start: int | None = None
    end: int | None = None
    threads: int = 1
    nowcast: NowcastConfig | None = None


def _path(base: Path, value, key: str, must_exist: bool = True) -> Path:
    if not isinstance(value, str) or not value:
        raise ConfigError(f"{key}: expected a path string")
    p = Path(value)
    if not p.is_absolute():
        p = base / p
    if must_exist and not p.exists():
        what = key.split(".")[0] if "." in key else key
        raise ConfigError(f"{what} file not found: {p} ({key})")
    return p


def _month(value, key):
    if value is None:
        return None
    try:
        return parse_month(value)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None


def _table(raw: dict, key: str) -> dict:
    v = raw.get(key, {})
    if not isinstance(v, dict):
        raise ConfigError(f"[{key}] must be a table")
    return v


def _reject_unknown(table: dict, allowed: set[str], name: str):
    extra = sorted(set(table) - allowed)
    if extra:
        raise ConfigError(f"unknown key {extra[0]!r} in [{name}]")


def load_config(path, overrides: dict[str, Any] | None = None, need_corpus: bool = True,
                need_nowcast: bool = False) -> RunConfig:
    """Parse and validate. ``overrides`` may set output_dir and threads."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    base = path.parent
    overrides = overrides or {}
    _reject_unknown(raw, {"run", "corpus", "tokenizer", "lexicon", "triples", "index", "nowcast"}, "top level")

    run = _table(raw, "run")
    _reject_unknown(run, {"output_dir", "start", "end", "threads"}, "run")
    out = overrides.get("output_dir") or run.get("output_dir", "out")
    output_dir = Path(out) if overrides.get("output_dir") else _path(base, out, "run.output_dir", False)
    start = _month(run.get("start"), "run.start")
    end = _month(run.get("end"), "run.end")
    if start is not None and end is not None and end < start:
        raise ConfigError("run.start must not be after run.end")
    threads = overrides.get("threads") or run.get("threads", 1)
    if not isinstance(threads, int) or threads < 1:
        raise ConfigError("threads must be a positive integer")

    corpus: dict[str, list[Path]] = {}
    for source, spec in _table(raw, "corpus").items():
        files = spec if isinstance(spec, list) else [spec]
        corpus[source] = [_path(base, f, f"corpus.{source}") for f in files]

    tok = _table(raw, "tokenizer")
    _reject_unknown(tok, {"stopwords", "apostrophe_split"}, "tokenizer")
    lex = _table(raw, "lexicon")
    _reject_unknown(lex, {"path"}, "lexicon")
    stopwords = lexicon = None
    if need_corpus:
        if not corpus:
            raise ConfigError("[corpus] must name at least one source")
        if "stopwords" not in tok:
            raise ConfigError("tokenizer.stopwords is required")
        if "path" not in lex:
            raise ConfigError("lexicon.path is required")
    if "stopwords" in tok:
        stopwords = _path(base, tok["stopwords"], "stop-word")
    if "path" in lex:
        lexicon = _path(base, lex["path"], "lexicon")
    apostrophe_split = tok.get("apostrophe_split", True)
    if not isinstance(apostrophe_split, bool):
        raise ConfigError("tokenizer.apostrophe_split must be true or false")

    tri = _table(raw, "triples")
    _reject_unknown(tri, {"tau", "overrides"}, "triples")
    overrides_tau = tri.get("overrides", {})
    for source in overrides_tau:
        if source not in corpus:
            raise ConfigError(f"triples.overrides names unconfigured source {source!r}")
    triples = TripleParams(tau=tri.get("tau", 125), overrides=overrides_tau)

    idx = _table(raw, "index")
    _reject_unknown(idx, {"m", "min_coverage", "include_current", "rescale_past"}, "index")
    norm = NormalizationParams(
        m=idx.get("m", 36),
        min_coverage=idx.get("min_coverage", 0.8),
        include_current=idx.get("include_current", False),
        rescale_past=idx.get("rescale_past", False),
    )

    nowcast = None
    if "nowcast" in raw:
        nowcast = _nowcast_config(_table(raw, "nowcast"), base, output_dir)
    elif need_nowcast:
        raise ConfigError("[nowcast] section is required for this command")

    return RunConfig(path, output_dir, corpus, stopwords, apostrophe_split, lexicon, triples, norm,
                     start, end, threads, nowcast)


def _nowcast_config(nc: dict, base: Path, output_dir: Path) -> NowcastConfig:
    from epuindex.nowcast.panel import TRANSFORMS, load_transforms

    _reject_unknown(nc, {"panel", "target", "targets", "transforms", "window", "eval_start", "eval_end",
                         "variants", "estimators", "index", "alt_epu", "kmax", "enet"}, "nowcast")
    if "panel" not in nc:
        raise ConfigError("nowcast.panel is required")
    panel = _path(base, nc["panel"], "panel")
    targets = nc.get("targets", [nc["target"]] if "target" in nc else None)
    if not targets or not all(isinstance(t, str) for t in targets):
        raise ConfigError("nowcast.target (or targets) must name panel columns")
    tr = nc.get("transforms", {})
    if isinstance(tr, str):
        transforms = load_transforms(_path(base, tr, "transformation"))
    elif isinstance(tr, dict):
        for k, v in tr.items():
            if v not in TRANSFORMS:
                raise ConfigError(f"nowcast.transforms: unknown transformation {v!r} for {k!r}")
        transforms = dict(tr)
    else:
        raise ConfigError("nowcast.transforms must be a table or a path")
    window = nc.get("window", 60)
    if not isinstance(window, int) or window < 2:
        raise ConfigError("nowcast.window must be an integer >= 2")
    eval_start = _month(nc.get("eval_start"), "nowcast.eval_start")
    eval_end = _month(nc.get("eval_end"), "nowcast.eval_end")
    if eval_start is not None and eval_end is not None and eval_end < eval_start:
        raise ConfigError("nowcast.eval_start must not be after nowcast.eval_end")
    variants = list(nc.get("variants", ["M0", "M1"]))
    for v in variants:
        if v not in VARIANTS:
            raise ConfigError(f"nowcast.variants: unknown variant {v!r}")
    if len(set(variants)) != len(variants):
        raise ConfigError("nowcast.variants has duplicates")
    estimators = list(nc.get("estimators", ["enet", "pca"]))
    for e in estimators:
        if e not in ESTIMATORS:
            raise ConfigError(f"nowcast.estimators: unknown estimator {e!r}")
    index = _path(base, nc["index"], "index", must_exist=False) if "index" in nc else None
    alt_epu = _path(base, nc["alt_epu"], "alternative EPU") if "alt_epu" in nc else None
    if "M2" in variants and alt_epu is None:
        raise ConfigError("variant M2 requires nowcast.alt_epu")
    kmax = nc.get("kmax", 8)
    if not isinstance(kmax, int) or kmax < 1:
        raise ConfigError("nowcast.kmax must be a positive integer")
    en = nc.get("enet", {})
    allowed = {"alpha_grid", "n_lambda", "lambda_min_ratio", "tol", "max_iter", "dev_ratio_stop", "max_df_ratio"}
    _reject_unknown(en, allowed, "nowcast.enet")
    enet = EnetConfig(**en)
    return NowcastConfig(panel, targets, transforms, window, eval_start, eval_end, variants,
                         estimators, index, alt_epu, kmax, enet)
