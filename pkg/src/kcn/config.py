"""Run configuration: an INI file of flat sections, overridable from the CLI.

Example::

    [windows]
    2002-2006 = 2002-2006
    2007-2011 = 2007-2011

    [entrez]
    query = pain[Title] OR pain[Keyword]
    year_from = 2002
    year_to = 2021
    email = someone@example.org
    rate_limit = 3

    [import]
    files =
        exports/wos.csv wos csv
        exports/ieee.ris ieee

    [thresholds]
    min_support_count = 200
    min_confidence = 0.55
    top_n = 20

    [paths]
    corpus_dir = corpus
    output_dir = out
    category_map = categories.csv

Relative paths are resolved against the directory holding the file.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Source
from .window import DEFAULT_WINDOWS, TimeWindow, check_windows


class ConfigError(Exception):
    pass


@dataclass
class ImportSpec:
    path: Path
    source: Source = Source.OTHER
    fmt: str = "csv"

    @classmethod
    def parse(cls, text: str, base: Path = Path(".")) -> "ImportSpec":
        """``path [source [format]]``; the format defaults to the file extension."""
        parts = text.split()
        if not parts or len(parts) > 3:
            raise ConfigError(f"bad import entry {text!r}; expected 'path [source [format]]'")
        path = Path(parts[0])
        if not path.is_absolute():
            path = base / path
        try:
            source = Source(parts[1]) if len(parts) > 1 else Source.OTHER
        except ValueError:
            raise ConfigError(
                f"unknown source {parts[1]!r}; one of {', '.join(s.value for s in Source)}"
            ) from None
        fmt = parts[2] if len(parts) > 2 else path.suffix.lstrip(".").lower()
        if fmt not in ("csv", "ris"):
            raise ConfigError(f"cannot tell import format of {text!r}; give csv or ris")
        return cls(path, source, fmt)


@dataclass
class EntrezSettings:
    query: str = "pain[Title] OR pain[Keyword]"
    year_from: int = 2002
    year_to: int = 2021
    batch_size: int = 200
    email: str | None = None
    api_key: str | None = None
    rate_limit: float = 3.0


@dataclass
class Thresholds:
    min_support_count: int = 200
    min_confidence: float = 0.55
    top_n: int = 20
    max_itemset_size: int = 4
    leaders_k: int = 5
    leaders_min_degree: int = 2


@dataclass
class Paths:
    corpus_dir: Path = Path("corpus")
    output_dir: Path = Path("out")
    graph_dir: Path | None = None
    category_map: Path | None = None
    stem_exceptions: Path | None = None

    @property
    def graphs(self) -> Path:
        return self.graph_dir or self.output_dir / "graphs"


@dataclass
class RunConfig:
    windows: list[TimeWindow] = field(default_factory=lambda: list(DEFAULT_WINDOWS))
    imports: list[ImportSpec] = field(default_factory=list)
    entrez: EntrezSettings = field(default_factory=EntrezSettings)
    thresholds: Thresholds = field(default_factory=Thresholds)
    paths: Paths = field(default_factory=Paths)

    def validate(self) -> None:
        if not self.windows:
            raise ConfigError("no windows configured")
        labels = [w.label for w in self.windows]
        if len(set(labels)) != len(labels):
            raise ConfigError("duplicate window labels")
        try:
            check_windows(self.windows)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        t = self.thresholds
        if t.min_support_count < 1 or t.top_n < 1 or t.max_itemset_size < 1 or t.leaders_k < 1:
            raise ConfigError("thresholds must be positive")
        if not 0 < t.min_confidence <= 1:
            raise ConfigError("min_confidence must be in (0, 1]")
        if self.entrez.rate_limit <= 0:
            raise ConfigError("rate_limit must be positive")

    def select_windows(self, labels: list[str] | None) -> list[TimeWindow]:
        if not labels:
            return list(self.windows)
        by_label = {w.label: w for w in self.windows}
        missing = [l for l in labels if l not in by_label]
        if missing:
            raise ConfigError(f"unknown window(s): {', '.join(missing)}")
        return [w for w in self.windows if w.label in labels]


def _get(section, key, convert, default):
    if section is None or key not in section or not section[key].strip():
        return default
    try:
        return convert(section[key].strip())
    except ValueError:
        raise ConfigError(f"[{section.name}] {key}: bad value {section[key]!r}") from None


def load_config(path: str | Path | None) -> RunConfig:
    cfg = RunConfig()
    if path is None:
        return cfg
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    base = path.parent

    def resolve(p: str) -> Path:
        q = Path(p).expanduser()
        return q if q.is_absolute() else base / q

    if parser.has_section("windows"):
        try:
            cfg.windows = [TimeWindow.parse(span, label) for label, span in parser["windows"].items()]
        except ValueError as exc:
            raise ConfigError(f"[windows] {exc}") from None

    if parser.has_section("import"):
        files = parser["import"].get("files", "")
        cfg.imports = [ImportSpec.parse(line, base) for line in files.splitlines() if line.strip()]

    e = parser["entrez"] if parser.has_section("entrez") else None
    d = EntrezSettings()
    cfg.entrez = EntrezSettings(
        query=_get(e, "query", str, d.query),
        year_from=_get(e, "year_from", int, d.year_from),
        year_to=_get(e, "year_to", int, d.year_to),
        batch_size=_get(e, "batch_size", int, d.batch_size),
        email=_get(e, "email", str, None),
        api_key=_get(e, "api_key", str, None),
        rate_limit=_get(e, "rate_limit", float, d.rate_limit),
    )

    t = parser["thresholds"] if parser.has_section("thresholds") else None
    dt = Thresholds()
    cfg.thresholds = Thresholds(
        min_support_count=_get(t, "min_support_count", int, dt.min_support_count),
        min_confidence=_get(t, "min_confidence", float, dt.min_confidence),
        top_n=_get(t, "top_n", int, dt.top_n),
        max_itemset_size=_get(t, "max_itemset_size", int, dt.max_itemset_size),
        leaders_k=_get(t, "leaders_k", int, dt.leaders_k),
        leaders_min_degree=_get(t, "leaders_min_degree", int, dt.leaders_min_degree),
    )

    p = parser["paths"] if parser.has_section("paths") else None
    cfg.paths = Paths(
        corpus_dir=_get(p, "corpus_dir", resolve, base / "corpus"),
        output_dir=_get(p, "output_dir", resolve, base / "out"),
        graph_dir=_get(p, "graph_dir", resolve, None),
        category_map=_get(p, "category_map", resolve, None),
        stem_exceptions=_get(p, "stem_exceptions", resolve, None),
    )
    cfg.validate()
    return cfg
