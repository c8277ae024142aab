"""PubMed retrieval through NCBI E-utilities (esearch id lists, then efetch)."""

from __future__ import annotations

import logging
import re
import time
import xml.etree.ElementTree as ET
from typing import Callable, Iterator

import requests

from .corpus import RawArticle, Source

log = logging.getLogger(__name__)

EUTILS = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/"
# esearch refuses retstart beyond this; larger result sets are split by date.
ESEARCH_WINDOW = 9999


class EntrezError(Exception):
    """A request failed. ``retryable`` errors were retried ``attempts`` times."""

    def __init__(self, message: str, attempts: int = 1, retryable: bool = False):
        super().__init__(message)
        self.attempts = attempts
        self.retryable = retryable


class EntrezClient:
    def __init__(
        self,
        email: str | None = None,
        api_key: str | None = None,
        rate_limit: float = 3.0,
        session: requests.Session | None = None,
        max_retries: int = 5,
        backoff: float = 1.0,
        timeout: float = 60.0,
        tool: str = "kcn",
        sleep: Callable[[float], None] | None = None,
        clock: Callable[[], float] | None = None,
    ):
        if rate_limit <= 0:
            raise ValueError("rate_limit must be positive")
        self.email = email
        self.api_key = api_key
        self.min_interval = 1.0 / rate_limit
        self.session = session or requests.Session()
        self.max_retries = max_retries
        self.backoff = backoff
        self.timeout = timeout
        self.tool = tool
        self._sleep = sleep or time.sleep
        self._clock = clock or time.monotonic
        self._last_request: float | None = None
        self.malformed = 0
        self.requests_made = 0

    # --- transport -----------------------------------------------------

    def _throttle(self) -> None:
        if self._last_request is not None:
            wait = self.min_interval - (self._clock() - self._last_request)
            if wait > 0:
                self._sleep(wait)
        self._last_request = self._clock()

    def _request(self, endpoint: str, params: dict, post: bool = False) -> requests.Response:
        params = dict(params, tool=self.tool)
        if self.email:
            params["email"] = self.email
        if self.api_key:
            params["api_key"] = self.api_key
        url = EUTILS + endpoint
        attempt = 0
        while True:
            attempt += 1
            self._throttle()
            self.requests_made += 1
            try:
                if post:
                    resp = self.session.request("POST", url, data=params, timeout=self.timeout)
                else:
                    resp = self.session.request("GET", url, params=params, timeout=self.timeout)
            except (requests.ConnectionError, requests.Timeout) as exc:
                if attempt >= self.max_retries:
                    raise EntrezError(
                        f"{endpoint}: network failure after {attempt} attempts: {exc}",
                        attempts=attempt, retryable=True,
                    ) from exc
                self._sleep(self.backoff * 2 ** (attempt - 1))
                continue

            if resp.status_code == 429 or resp.status_code >= 500:
                if attempt >= self.max_retries:
                    raise EntrezError(
                        f"{endpoint}: HTTP {resp.status_code} after {attempt} attempts",
                        attempts=attempt, retryable=True,
                    )
                retry_after = resp.headers.get("Retry-After", "")
                delay = float(retry_after) if retry_after.isdigit() else self.backoff * 2 ** (attempt - 1)
                log.info("%s: HTTP %s, retrying in %.1fs", endpoint, resp.status_code, delay)
                self._sleep(delay)
                continue
            if resp.status_code >= 400:
                raise EntrezError(f"{endpoint}: HTTP {resp.status_code}: {_server_message(resp)}",
                                  attempts=attempt)
            return resp

    # --- esearch -------------------------------------------------------

    def _esearch(self, term: str, mindate: str, maxdate: str, retstart: int, retmax: int) -> dict:
        resp = self._request("esearch.fcgi", {
            "db": "pubmed",
            "term": term,
            "datetype": "pdat",
            "mindate": mindate,
            "maxdate": maxdate,
            "retstart": retstart,
            "retmax": retmax,
            "retmode": "json",
        })
        try:
            result = resp.json()["esearchresult"]
        except (ValueError, KeyError) as exc:
            raise EntrezError(f"esearch: unexpected response: {resp.text[:200]!r}") from exc
        if "ERROR" in result:
            raise EntrezError(f"esearch: {result['ERROR']}")
        return result

    def _slice_ids(self, term: str, mindate: str, maxdate: str) -> list[str]:
        count = int(self._esearch(term, mindate, maxdate, 0, 0).get("count", 0))
        if count == 0:
            return []
        if count > ESEARCH_WINDOW:
            parts = _split_dates(mindate, maxdate)
            if parts:
                ids: list[str] = []
                for lo, hi in parts:
                    ids.extend(self._slice_ids(term, lo, hi))
                return ids
            log.warning("%s..%s: %d hits, only the first %d are reachable",
                        mindate, maxdate, count, ESEARCH_WINDOW)
            count = ESEARCH_WINDOW
        ids = []
        for start in range(0, count, ESEARCH_WINDOW):
            page = self._esearch(term, mindate, maxdate, start, min(ESEARCH_WINDOW, count - start))
            ids.extend(page.get("idlist", []))
        return ids

    def search_ids(self, query: str, year_from: int, year_to: int) -> list[str]:
        ids = self._slice_ids(query, str(year_from), str(year_to))
        return list(dict.fromkeys(ids))

    # --- efetch --------------------------------------------------------

    def fetch_batch(self, ids: list[str]) -> list[RawArticle]:
        resp = self._request("efetch.fcgi", {
            "db": "pubmed", "id": ",".join(ids), "retmode": "xml",
        }, post=True)
        articles, bad = parse_pubmed_xml(resp.text)
        self.malformed += bad
        return articles

    def fetch(
        self, query: str, year_from: int, year_to: int, batch_size: int = 200
    ) -> Iterator[RawArticle]:
        if not query.strip():
            raise ValueError("empty query")
        if year_from > year_to:
            raise ValueError("year_from after year_to")
        if not 1 <= batch_size <= 10000:
            raise ValueError("batch_size must be in [1, 10000]")
        ids = self.search_ids(query, year_from, year_to)
        log.info("esearch: %d PubMed ids for %r", len(ids), query)
        for start in range(0, len(ids), batch_size):
            for art in self.fetch_batch(ids[start:start + batch_size]):
                if year_from <= art.year <= year_to:
                    yield art


def fetch_entrez(
    query: str,
    year_from: int,
    year_to: int,
    batch_size: int = 200,
    rate_limit: float = 3.0,
    **client_kwargs,
) -> Iterator[RawArticle]:
    """Stream PubMed records matching ``query`` published in the year range."""
    client = EntrezClient(rate_limit=rate_limit, **client_kwargs)
    yield from client.fetch(query, year_from, year_to, batch_size)


def _server_message(resp) -> str:
    try:
        body = resp.json()
        if isinstance(body, dict):
            return str(body.get("error") or body.get("ERROR") or body)
    except ValueError:
        pass
    return resp.text.strip()[:300]


def _split_dates(mindate: str, maxdate: str) -> list[tuple[str, str]]:
    """Split a year range into single years, or a single year into months."""
    if "/" not in mindate and mindate != maxdate:
        return [(str(y), str(y)) for y in range(int(mindate), int(maxdate) + 1)]
    if "/" not in mindate:
        return [(f"{mindate}/{m:02d}", f"{mindate}/{m:02d}") for m in range(1, 13)]
    return []


_YEAR = re.compile(r"(\d{4})")


def _text(elem) -> str:
    return " ".join("".join(elem.itertext()).split()) if elem is not None else ""


def _article_year(article) -> int | None:
    for path in (
        ".//Article/Journal/JournalIssue/PubDate/Year",
        ".//Article/Journal/JournalIssue/PubDate/MedlineDate",
        ".//Article/ArticleDate/Year",
    ):
        node = article.find(path)
        if node is not None and node.text:
            m = _YEAR.search(node.text)
            if m:
                return int(m.group(1))
    return None


def parse_pubmed_xml(xml_text: str) -> tuple[list[RawArticle], int]:
    """Parse an efetch ``PubmedArticleSet``; returns (articles, skipped count)."""
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise EntrezError(f"efetch: malformed XML: {exc}") from exc
    out, bad = [], 0
    for article in root.iter("PubmedArticle"):
        pmid = _text(article.find(".//MedlineCitation/PMID"))
        title = _text(article.find(".//Article/ArticleTitle"))
        year = _article_year(article)
        if not pmid or not title or year is None:
            bad += 1
            log.warning("skipping malformed PubMed record %s", pmid or "<no PMID>")
            continue
        keywords = [_text(k) for k in article.iter("Keyword")]
        try:
            out.append(RawArticle(Source.PUBMED, pmid, title, year,
                                  ";".join(k for k in keywords if k)))
        except ValueError as exc:
            bad += 1
            log.warning("skipping PubMed record %s: %s", pmid, exc)
    return out, bad
