"""Keyword co-occurrence networks for bibliographic corpora."""

from .corpus import ArticleRecord, RawArticle, dedupe_corpus, load_corpus, persist_corpus
from .graph import WeightedKcn, build_kcn
from .keywords import normalize_keyword
from .window import TimeWindow

__version__ = "0.1.0"

__all__ = [
    "ArticleRecord",
    "RawArticle",
    "TimeWindow",
    "WeightedKcn",
    "build_kcn",
    "dedupe_corpus",
    "load_corpus",
    "normalize_keyword",
    "persist_corpus",
]
