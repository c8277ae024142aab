"""Helpers for running the full pipeline on the committed synthetic fixture."""

import csv
import json
import math
import shutil
from pathlib import Path

from kcn.cli import main

FIXTURE = Path(__file__).parent / "fixtures" / "e2e"
GOLDEN = FIXTURE / "golden"
INPUTS = ("wos.csv", "ieee.ris", "categories.csv", "kcn.ini")


def run_pipeline(workdir: Path) -> Path:
    """Copy the fixture inputs into ``workdir`` and run import, build, report all."""
    workdir.mkdir(parents=True, exist_ok=True)
    for name in INPUTS:
        shutil.copy(FIXTURE / name, workdir / name)
    config = str(workdir / "kcn.ini")
    for argv in (["import"], ["build"], ["report", "all"]):
        code = main(["--config", config, *argv])
        if code != 0:
            raise AssertionError(f"kcn {' '.join(argv)} exited {code}")
    return workdir


def tree_bytes(root: Path) -> dict[str, bytes]:
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def _close(a, b, tol):
    return math.isclose(a, b, rel_tol=tol, abs_tol=tol)


def _cell_equal(a: str, b: str, tol: float) -> bool:
    if a == b:
        return True
    try:
        return _close(float(a), float(b), tol)
    except ValueError:
        return False


def json_equal(a, b, tol=1e-9) -> bool:
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(json_equal(a[k], b[k], tol) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(json_equal(x, y, tol) for x, y in zip(a, b))
    if isinstance(a, bool) or isinstance(b, bool):
        return a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return _close(a, b, tol)
    return a == b


def file_matches(actual: Path, expected: Path, tol=1e-9) -> str | None:
    """None when equal (exact text, numbers within ``tol``); else a reason."""
    if actual.suffix == ".json":
        if not json_equal(json.loads(actual.read_text("utf-8")), json.loads(expected.read_text("utf-8")), tol):
            return "json content differs"
        return None
    a = list(csv.reader(actual.open(encoding="utf-8", newline="")))
    b = list(csv.reader(expected.open(encoding="utf-8", newline="")))
    if len(a) != len(b):
        return f"{len(a)} rows, expected {len(b)}"
    for n, (ra, rb) in enumerate(zip(a, b), 1):
        if len(ra) != len(rb) or not all(_cell_equal(x, y, tol) for x, y in zip(ra, rb)):
            return f"row {n}: {ra} != {rb}"
    return None


def golden_mismatches(out_dir: Path) -> dict[str, str]:
    problems = {}
    for expected in sorted(GOLDEN.rglob("*")):
        if not expected.is_file():
            continue
        rel = expected.relative_to(GOLDEN)
        actual = out_dir / rel
        if not actual.exists():
            problems[str(rel)] = "missing"
            continue
        reason = file_matches(actual, expected)
        if reason:
            problems[str(rel)] = reason
    return problems


def corpus_matches_truth(corpus_dir: Path) -> list[str]:
    truth = json.loads((FIXTURE / "truth.json").read_text("utf-8"))["articles"]
    got = [json.loads(l) for l in (corpus_dir / "articles.ndjson").read_text("utf-8").splitlines()]
    problems = []
    if len(got) != len(truth):
        return [f"{len(got)} articles, expected {len(truth)}"]
    for n, (g, t) in enumerate(zip(got, truth), 1):
        if g["id"] != n:
            problems.append(f"article {n}: id {g['id']}")
        for key in ("title_key", "year", "sources"):
            if g[key] != t[key]:
                problems.append(f"article {n}: {key} {g[key]!r} != {t[key]!r}")
        if sorted(g["keywords"]) != t["keywords"]:
            problems.append(f"article {n}: keywords {g['keywords']} != {t['keywords']}")
    return problems
