import json
from pathlib import Path

import pytest
import requests

from kcn.corpus import Source
from kcn.entrez import EntrezClient, EntrezError, fetch_entrez, parse_pubmed_xml

FIX = Path(__file__).parent / "fixtures" / "entrez"


class FakeResponse:
    def __init__(self, status=200, text="", headers=None):
        self.status_code = status
        self.text = text
        self.headers = headers or {}

    def json(self):
        return json.loads(self.text)


class FakeSession:
    """Replays responses in order and records every call."""

    def __init__(self, responses):
        self.responses = list(responses)
        self.calls = []

    def request(self, method, url, params=None, data=None, timeout=None):
        self.calls.append((method, url, params or data))
        r = self.responses.pop(0)
        if isinstance(r, Exception):
            raise r
        return r


class FakeClock:
    def __init__(self):
        self.now = 0.0
        self.sleeps = []

    def __call__(self):
        return self.now

    def sleep(self, s):
        self.sleeps.append(s)
        self.now += s


def _client(responses, **kw):
    clock = FakeClock()
    session = FakeSession(responses)
    client = EntrezClient(session=session, sleep=clock.sleep, clock=clock, **kw)
    return client, session, clock


def _esearch(count, ids=()):
    return FakeResponse(text=json.dumps({"esearchresult": {"count": str(count), "idlist": list(ids)}}))


def _recorded():
    return [
        FakeResponse(text=(FIX / "esearch_count.json").read_text()),
        FakeResponse(text=(FIX / "esearch_ids.json").read_text()),
        FakeResponse(text=(FIX / "efetch.xml").read_text()),
    ]


def test_recorded_fixture_year_filter():
    client, session, _ = _client(_recorded())
    got = list(client.fetch("pain[Title] OR pain[Keyword]", 2017, 2021))
    assert [a.external_id for a in got] == ["34000001", "34000002"]
    assert got[0].title == "Opioid tapering in chronic pain: a cohort study."
    assert got[0].raw_keyword_field == "Opioids;Chronic pain"
    assert got[1].year == 2018 and got[1].raw_keyword_field == ""
    assert all(a.source is Source.PUBMED for a in got)
    method, url, params = session.calls[-1]
    assert method == "POST" and url.endswith("efetch.fcgi")
    assert params["id"] == "34000001,34000002,23000003"


def test_empty_result():
    client, session, _ = _client([_esearch(0)])
    assert list(client.fetch("nothing", 2002, 2021)) == []
    assert len(session.calls) == 1


def test_throttle_spacing():
    client, _, clock = _client(_recorded(), rate_limit=2.0)
    list(client.fetch("pain", 2017, 2021))
    assert clock.sleeps == [0.5, 0.5]


def test_429_backs_off_then_succeeds():
    responses = [FakeResponse(429, "Too Many", {"Retry-After": "3"}), *_recorded()]
    client, session, clock = _client(responses, rate_limit=1000)
    assert len(list(client.fetch("pain", 2017, 2021))) == 2
    assert 3.0 in clock.sleeps
    assert client.requests_made == 4


def test_server_error_retries_with_exponential_backoff():
    responses = [FakeResponse(503), FakeResponse(502), *_recorded()]
    client, _, clock = _client(responses, rate_limit=1000, backoff=1.0)
    list(client.fetch("pain", 2017, 2021))
    assert [s for s in clock.sleeps if s >= 1] == [1.0, 2.0]


def test_network_failure_reports_attempts():
    errors = [requests.ConnectionError("down")] * 3
    client, _, _ = _client(errors, max_retries=3)
    with pytest.raises(EntrezError) as info:
        list(client.fetch("pain", 2017, 2021))
    assert info.value.attempts == 3 and info.value.retryable


def test_client_error_carries_server_message():
    bad = FakeResponse(400, json.dumps({"error": "API key invalid"}))
    client, session, _ = _client([bad])
    with pytest.raises(EntrezError, match="API key invalid") as info:
        list(client.fetch("pain", 2017, 2021))
    assert not info.value.retryable
    assert len(session.calls) == 1


def test_large_result_sets_split_by_year():
    responses = [
        _esearch(15000),
        _esearch(2, ["1", "2"]), _esearch(2, ["1", "2"]),
        _esearch(1, ["3"]), _esearch(1, ["3"]),
    ]
    client, session, _ = _client(responses)
    assert client.search_ids("pain", 2010, 2011) == ["1", "2", "3"]
    dates = [(c[2]["mindate"], c[2]["maxdate"]) for c in session.calls]
    assert dates[1] == ("2010", "2010") and dates[3] == ("2011", "2011")


def test_malformed_records_skipped_and_counted():
    xml = (FIX / "efetch.xml").read_text().replace("<ArticleTitle>Wearable sensing of pain.</ArticleTitle>", "")
    responses = _recorded()
    responses[-1] = FakeResponse(text=xml)
    client, _, _ = _client(responses)
    got = list(client.fetch("pain", 2002, 2021))
    assert [a.external_id for a in got] == ["34000001", "23000003"]
    assert client.malformed == 1


def test_parse_pubmed_xml_rejects_broken_xml():
    with pytest.raises(EntrezError):
        parse_pubmed_xml("<PubmedArticleSet><PubmedArticle>")


@pytest.mark.parametrize(
    "args",
    [("", 2002, 2021, 200), ("pain", 2021, 2002, 200), ("pain", 2002, 2021, 0), ("pain", 2002, 2021, 10001)],
)
def test_fetch_preconditions(args):
    client, _, _ = _client([])
    with pytest.raises(ValueError):
        list(client.fetch(*args))


def test_module_level_fetch():
    clock = FakeClock()
    got = list(fetch_entrez("pain", 2017, 2021, session=FakeSession(_recorded()),
                            sleep=clock.sleep, clock=clock))
    assert len(got) == 2
