"""Command-line front end: ``kcn fetch|import|build|report|export-graph``.

Exit codes: 0 success, 2 configuration error, 3 missing or unreadable
input/output, 4 network failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import reports
from .config import ConfigError, ImportSpec, RunConfig, load_config
from .corpus import (
    ArticleRecord,
    CorpusError,
    dedupe_corpus,
    import_export_file,
    load_corpus,
    persist_corpus,
)
from .entrez import EntrezClient, EntrezError
from .graph import WeightedKcn, build_kcn, export_graph
from .keywords import build_dictionary, frequency_table, normalize_corpus
from .rules import derive_rules, mine_frequent_itemsets, transactions_from_corpus
from .stemmer import Stemmer, load_exceptions
from .trends import CategoryMapError, load_category_map

log = logging.getLogger("kcn")

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NETWORK = 4


class MissingInput(Exception):
    """A prerequisite artifact is absent (exit 3)."""


def _stemmer(cfg: RunConfig) -> Stemmer:
    if cfg.paths.stem_exceptions is None:
        return Stemmer()
    try:
        return Stemmer(load_exceptions(cfg.paths.stem_exceptions))
    except OSError as exc:
        raise MissingInput(f"stem exception table: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _existing(cfg: RunConfig, append: bool) -> list[ArticleRecord]:
    if not append or not (cfg.paths.corpus_dir / "manifest").exists():
        return []
    return load_corpus(cfg.paths.corpus_dir)


def _store(cfg: RunConfig, raw, existing) -> None:
    records, report = dedupe_corpus([*existing, *raw])
    records = normalize_corpus(records, _stemmer(cfg))
    persist_corpus(records, cfg.paths.corpus_dir)
    cfg.paths.output_dir.mkdir(parents=True, exist_ok=True)
    (cfg.paths.output_dir / "dedup_report.json").write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(report.summary())
    log.info("corpus: %d articles written to %s", len(records), cfg.paths.corpus_dir)


def cmd_import(cfg: RunConfig, args) -> int:
    specs = list(cfg.imports)
    for item in args.files or ():
        spec = ImportSpec.parse(item.replace(":", " ", 2) if ":" in item else item, Path("."))
        if args.format:
            spec.fmt = args.format
        specs.append(spec)
    if not specs:
        raise ConfigError("nothing to import: give files or an [import] files entry")
    raw = []
    for spec in specs:
        if not spec.path.exists():
            raise MissingInput(f"import file not found: {spec.path}")
        warnings: list[str] = []
        got = import_export_file(spec.path, spec.source, spec.fmt, warnings)
        log.info("import: %d records from %s (%d skipped)", len(got), spec.path, len(warnings))
        raw.extend(got)
    _store(cfg, raw, _existing(cfg, args.append))
    return 0


def cmd_fetch(cfg: RunConfig, args) -> int:
    e = cfg.entrez
    client = EntrezClient(email=e.email, api_key=e.api_key, rate_limit=e.rate_limit)
    raw = list(client.fetch(e.query, e.year_from, e.year_to, e.batch_size))
    log.info("fetch: %d PubMed records (%d malformed skipped)", len(raw), client.malformed)
    _store(cfg, raw, _existing(cfg, args.append))
    return 0


def _graph_path(cfg: RunConfig, label: str, suffix: str = ".json") -> Path:
    return cfg.paths.graphs / f"{label}{suffix}"


def cmd_build(cfg: RunConfig, args) -> int:
    corpus = _load_corpus(cfg)
    cfg.paths.graphs.mkdir(parents=True, exist_ok=True)
    for window in cfg.select_windows(args.window):
        graph = build_kcn(corpus, window)
        if graph.article_count == 0:
            log.warning("window %s has no articles; writing an empty graph", window.label)
        graph.save(_graph_path(cfg, window.label))
        if args.graphml:
            export_graph(graph, _graph_path(cfg, window.label, ".graphml"), "graphml")
        log.info("build: %s: %d articles, %d nodes, %d links",
                 window.label, graph.article_count, graph.node_count, graph.link_count)
    return 0


def _load_corpus(cfg: RunConfig) -> list[ArticleRecord]:
    if not (cfg.paths.corpus_dir / "manifest").exists():
        raise MissingInput(f"no corpus at {cfg.paths.corpus_dir}; run 'kcn import' or 'kcn fetch'")
    return load_corpus(cfg.paths.corpus_dir)


def _load_graphs(cfg: RunConfig, labels) -> list[WeightedKcn]:
    graphs = []
    for window in cfg.select_windows(labels):
        path = _graph_path(cfg, window.label)
        if not path.exists():
            raise MissingInput(f"graph for window {window.label} not found at {path}; run 'kcn build'")
        graphs.append(WeightedKcn.load(path))
    return graphs


def _run_report(cfg: RunConfig, name: str, args) -> list[Path]:
    out = cfg.paths.output_dir
    t = cfg.thresholds
    if name == "summary":
        return reports.write_summary(_load_graphs(cfg, args.window), out)
    if name == "top_keywords":
        return reports.write_top_keywords(_load_graphs(cfg, args.window), out, t.top_n)
    if name == "top_pairs":
        return reports.write_top_pairs(_load_graphs(cfg, args.window), out, t.top_n)
    if name == "curves":
        return reports.write_curves(_load_graphs(cfg, args.window), out)
    if name == "distributions":
        return reports.write_distributions(_load_graphs(cfg, args.window), out)
    if name == "clustering_leaders":
        return reports.write_clustering_leaders(
            _load_graphs(cfg, args.window), out, t.leaders_k, t.leaders_min_degree)
    if name == "trends":
        if cfg.paths.category_map is None:
            raise MissingInput("trends need a category map: set [paths] category_map")
        if not cfg.paths.category_map.exists():
            raise MissingInput(f"category map not found: {cfg.paths.category_map}")
        cmap = load_category_map(cfg.paths.category_map, _stemmer(cfg))
        corpus = _load_corpus(cfg)
        windows = cfg.select_windows(args.window)
        if len(windows) < 2:
            raise ConfigError("trends need at least two windows")
        tables = [frequency_table(corpus, w) for w in windows]
        return reports.write_trends(tables, cmap, out, t.top_n)
    if name == "rules":
        corpus = _load_corpus(cfg)
        scopes = [(None, out / "rules.csv")]
        if args.window:
            scopes = [(w, out / f"rules_{w.label}.csv") for w in cfg.select_windows(args.window)]
        written = []
        for window, path in scopes:
            tx = transactions_from_corpus(corpus, window)
            itemsets = mine_frequent_itemsets(tx, t.min_support_count, t.max_itemset_size)
            rules = derive_rules(itemsets, t.min_confidence, len(tx))
            log.info("rules: %d transactions, %d frequent itemsets, %d rules",
                     len(tx), len(itemsets), len(rules))
            written += reports.write_rule_report(rules, path)
        return written
    if name == "dictionary":
        return reports.write_dictionary_report(
            build_dictionary(_load_corpus(cfg), _stemmer(cfg)), out)
    raise ConfigError(f"unknown report {name!r}")


def cmd_report(cfg: RunConfig, args) -> int:
    names = list(reports.REPORTS) if "all" in args.names else args.names
    cfg.paths.output_dir.mkdir(parents=True, exist_ok=True)
    for name in names:
        for path in _run_report(cfg, name, args):
            log.info("report %s: wrote %s", name, path)
    return 0


def cmd_export_graph(cfg: RunConfig, args) -> int:
    dest = Path(args.out) if args.out else cfg.paths.output_dir
    dest.mkdir(parents=True, exist_ok=True)
    suffix = ".csv" if args.format == "edge_csv" else ".graphml"
    for graph in _load_graphs(cfg, args.window):
        path = export_graph(graph, dest / f"{graph.window.label}{suffix}", args.format)
        log.info("export-graph: wrote %s", path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="INI run configuration")
    common.add_argument("--output-dir", default=argparse.SUPPRESS, help="override [paths] output_dir")
    common.add_argument("--window", action="append", default=argparse.SUPPRESS,
                        help="restrict to a window label (repeatable)")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="kcn", parents=[common],
        description="Keyword co-occurrence network analysis of bibliographic corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", parents=[common], help="retrieve PubMed records via Entrez")
    p.add_argument("--query")
    p.add_argument("--year-from", type=int)
    p.add_argument("--year-to", type=int)
    p.add_argument("--email")
    p.add_argument("--api-key")
    p.add_argument("--rate-limit", type=float)
    p.add_argument("--append", action="store_true", help="merge into the existing corpus")
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("import", parents=[common], help="import CSV/RIS database exports")
    p.add_argument("files", nargs="*", metavar="PATH[:SOURCE[:FORMAT]]")
    p.add_argument("--format", choices=("csv", "ris"))
    p.add_argument("--append", action="store_true", help="merge into the existing corpus")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("build", parents=[common], help="build one graph per window")
    p.add_argument("--graphml", action="store_true", help="also write GraphML next to each graph")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("report", parents=[common], help="write report files")
    p.add_argument("names", nargs="+", choices=(*reports.REPORTS, "all"), metavar="NAME",
                   help="one or more of: " + ", ".join(reports.REPORTS) + ", all")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("export-graph", parents=[common], help="export graphs as edge CSV or GraphML")
    p.add_argument("--format", choices=("edge_csv", "graphml"), default="edge_csv")
    p.add_argument("--out", help="destination directory (default: output dir)")
    p.set_defaults(func=cmd_export_graph)
    return parser


def _apply_overrides(cfg: RunConfig, args) -> None:
    if getattr(args, "output_dir", None):
        cfg.paths.output_dir = Path(args.output_dir)
    e = cfg.entrez
    for attr in ("query", "year_from", "year_to", "email", "api_key", "rate_limit"):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(e, attr, value)
    cfg.validate()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.window = getattr(args, "window", None)
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.INFO,
        format="%(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = load_config(getattr(args, "config", None))
        _apply_overrides(cfg, args)
        cfg.select_windows(args.window)
        return args.func(cfg, args)
    except (ConfigError, CategoryMapError) as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (MissingInput, CorpusError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_IO
    except EntrezError as exc:
        log.error("network error: %s", exc)
        return EXIT_NETWORK


if __name__ == "__main__":
    sys.exit(main())
