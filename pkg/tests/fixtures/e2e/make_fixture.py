"""Generate the synthetic end-to-end corpus (run once; outputs are committed).

Writes two overlapping database exports, a category map, a run config and
``truth.json``: the canonical keywords each deduplicated article must end up
with, worked out from the generator's own vocabulary table rather than from
the package.

    python3 tests/fixtures/e2e/make_fixture.py
"""

import csv
import json
import random
import string
from pathlib import Path

HERE = Path(__file__).parent
SEED = 20220415

# canonical form -> (surface variants, category or None, popularity per window)
VOCAB = {
    "pain": (["pain", "pains", "Pain", "painful"], None, (9, 9, 9, 9)),
    "chronic pain": (["chronic pain", "Chronic Pains"], "biomedical", (6, 6, 5, 5)),
    "low back pain": (["low back pain", "Low-back pain", "low back pains"], "biomedical", (4, 4, 3, 3)),
    "pain manag": (["pain management", "Pain Managements"], "treatment", (5, 4, 4, 3)),
    "neuropath pain": (["neuropathic pain", "Neuropathic Pains"], "biomedical", (3, 3, 3, 3)),
    "opioid": (["opioid", "opioids", "Opioides"], "treatment", (2, 3, 5, 6)),
    "postop pain": (["postoperative pain", "postop pain"], "treatment", (3, 3, 2, 2)),
    "analgesia": (["analgesia"], "treatment", (3, 2, 2, 2)),
    "qualiti life": (["quality life", "Quality Life"], None, (2, 2, 2, 2)),
    "abdomin pain": (["abdominal pain", "abdominal pains"], "biomedical", (2, 1, 1, 1)),
    "machin learn": (["machine learning", "Machine Learning"], "sensors/methods", (0, 0, 1, 5)),
    "biomark": (["biomarker", "biomarkers"], "biomedical", (0, 1, 2, 4)),
    "migrain": (["migraine", "Migraines"], "biomedical", (3, 3, 2, 2)),
    "fibromyalgia": (["fibromyalgia"], "biomedical", (2, 2, 2, 1)),
    "anxieti": (["anxiety"], None, (1, 2, 2, 2)),
    "depress": (["depression"], None, (2, 2, 2, 2)),
    "sleep disord": (["sleep disorders", "Sleep disorder"], None, (1, 1, 1, 1)),
    "inflamm": (["inflammation"], "biomedical", (2, 2, 1, 1)),
    "cancer pain": (["cancer pain", "cancer pains"], "biomedical", (2, 2, 2, 1)),
    "ketamin": (["ketamine"], "treatment", (0, 1, 2, 3)),
    "acupunctur": (["acupuncture"], "treatment", (2, 2, 1, 1)),
    "wearabl sensor": (["wearable sensors", "Wearable Sensor"], "sensors/methods", (0, 0, 1, 3)),
    "deep learn": (["deep learning"], "sensors/methods", (0, 0, 0, 3)),
    "electroencephalographi": (["electroencephalography"], "sensors/methods", (2, 2, 1, 1)),
    "virtual realiti": (["virtual reality"], "sensors/methods", (0, 1, 1, 2)),
    "laser evok potenti": (["laser-evoked potential", "laser evoked potentials"], "sensors/methods", (3, 2, 1, 0)),
    "pain assess": (["pain assessment"], "sensors/methods", (2, 2, 2, 2)),
    "facial express": (["facial expression", "Facial Expressions"], "sensors/methods", (1, 1, 2, 2)),
    "gabapentin": (["gabapentin"], "treatment", (2, 2, 1, 0)),
    "catastroph": (["catastrophizing"], None, (1, 1, 1, 1)),
}
WINDOWS = [(2002, 2006), (2007, 2011), (2012, 2016), (2017, 2021)]
# keywords that normalize to nothing
JUNK = ["AI", "of", "3D"]

N_ARTICLES = 200
N_OVERLAP = 25       # articles exported by both databases
N_IEEE_ONLY = 30
N_WOS_REPEATS = 5    # rows repeated inside the WoS export


def pick_keywords(rng, window_idx):
    names = list(VOCAB)
    weights = [VOCAB[n][2][window_idx] for n in names]
    k = rng.choice([0, 1, 2, 3, 3, 4, 4, 5, 6])
    chosen = []
    while len(chosen) < k:
        kw = rng.choices(names, weights)[0]
        if kw not in chosen:
            chosen.append(kw)
    return chosen


def render(rng, canonicals, sep_choices=("; ", ";", " / ", ": ")):
    parts = [rng.choice(VOCAB[c][0]) for c in canonicals]
    if canonicals and rng.random() < 0.2:
        parts.append(rng.choice(VOCAB[canonicals[0]][0]))   # repeated keyword
    if rng.random() < 0.15:
        parts.insert(rng.randrange(len(parts) + 1), rng.choice(JUNK))
    out = ""
    for i, p in enumerate(parts):
        out += (rng.choice(sep_choices) if i else "") + p
    return out, parts


def title_variant(rng, title):
    t = title.upper() if rng.random() < 0.5 else title.lower()
    t = t.replace(":", "") + rng.choice([".", "", "?"])
    return t.replace(" ", "  ", 1)


def title_key(title):
    t = "".join(ch for ch in title.lower() if ch not in string.punctuation)
    return " ".join(t.split())


def main():
    rng = random.Random(SEED)
    topics = ["opioid tapering", "sensor fusion", "nerve injury", "migraine care", "sleep quality",
              "pain scales", "spinal surgery", "inflammatory markers", "remote monitoring"]
    articles = []
    for n in range(1, N_ARTICLES + 1):
        w = rng.choices(range(4), (2, 3, 4, 6))[0]
        year = rng.randint(*WINDOWS[w])
        title = f"Study {n}: {rng.choice(topics).capitalize()} in cohort {rng.randint(1, 99)}"
        articles.append({"title": title, "year": year, "canon": pick_keywords(rng, w)})

    order = list(range(N_ARTICLES))
    rng.shuffle(order)
    overlap = set(order[:N_OVERLAP])
    ieee_only = set(order[N_OVERLAP:N_OVERLAP + N_IEEE_ONLY])
    repeats = order[N_OVERLAP + N_IEEE_ONLY:N_OVERLAP + N_IEEE_ONLY + N_WOS_REPEATS]

    wos_rows, ris_records = [], []
    truth = []
    for i, art in enumerate(articles):
        variants = []
        sources = set()
        if i not in ieee_only:
            field, parts = render(rng, art["canon"])
            wos_rows.append([f"WOS:{i:06d}", art["title"], str(art["year"]), field])
            variants += parts
            sources.add("wos")
            if i in repeats:
                wos_rows.append([f"WOS:{i:06d}b", art["title"], str(art["year"]), field])
        if i in overlap or i in ieee_only:
            canon = list(art["canon"])
            rng.shuffle(canon)
            _, parts = render(rng, canon)
            title = title_variant(rng, art["title"]) if i in overlap else art["title"]
            ris_records.append((f"IEEE{i:05d}", title, art["year"], parts))
            variants += parts
            sources.add("ieee")
        truth.append({
            "title_key": title_key(art["title"]),
            "year": art["year"],
            "sources": sorted(sources),
            "keywords": sorted(art["canon"]),
            "variants": sorted({v.strip().lower() for v in variants if v not in JUNK}),
        })

    rng.shuffle(wos_rows)
    with open(HERE / "wos.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ID", "Title", "Year", "Keywords"])
        w.writerows(wos_rows)

    rng.shuffle(ris_records)
    with open(HERE / "ieee.ris", "w", encoding="utf-8", newline="\n") as fh:
        for ext, title, year, parts in ris_records:
            fh.write("TY  - CONF\n")
            fh.write(f"TI  - {title}\n")
            fh.write(f"PY  - {year}\n")
            for p in parts:
                fh.write(f"KW  - {p}\n")
            fh.write(f"AN  - {ext}\n")
            fh.write("ER  - \n\n")

    with open(HERE / "categories.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["keyword", "category"])
        for canon, (variants, cat, _) in VOCAB.items():
            if cat:
                w.writerow([variants[-1], cat])

    truth.sort(key=lambda t: (t["title_key"], t["year"]))
    doc = {
        "raw_count": len(wos_rows) + len(ris_records),
        "overlap": {"ieee/wos": N_OVERLAP, "wos/wos": N_WOS_REPEATS},
        "articles": truth,
    }
    (HERE / "truth.json").write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
