"""Suffix-stripping stemmer for author keywords.

The core is the original Porter (1980) algorithm. On top of it sit three
extras that keyword indexing needs:

* irregular plurals (``children -> child``) looked up before stripping,
* ``-ly`` adverbs and doubled-consonant / ``-iest`` superlatives stripped
  before the Porter steps,
* an exception table that overrides the result for listed words.

:meth:`Stemmer.stem` iterates until the output stops changing, so stemming
a stem is a no-op. Plain Porter does not have that property
(``agreed -> agre -> agr``).
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Mapping

_VOWELS = frozenset("aeiou")

IRREGULAR_PLURALS: dict[str, str] = {
    "children": "child",
    "women": "woman",
    "men": "man",
    "feet": "foot",
    "teeth": "tooth",
    "mice": "mouse",
    "geese": "goose",
    "oxen": "ox",
    "analyses": "analysis",
    "diagnoses": "diagnosis",
    "prognoses": "prognosis",
    "criteria": "criterion",
    "phenomena": "phenomenon",
}

# -ly words that are not adverbs; stripping them would merge unrelated stems.
_LY_KEEP = frozenset(
    """
    ally anomaly apply assembly belly bully daily early family fly holly
    homily italy jelly july lily monopoly only rally reply rely supply
    """.split()
)


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of VC sequences in ``[C](VC)^m[V]``."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        cons = _is_consonant(stem, i)
        if cons and prev_vowel:
            m += 1
        prev_vowel = not cons
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    n = len(word)
    return (
        _is_consonant(word, n - 3)
        and not _is_consonant(word, n - 2)
        and _is_consonant(word, n - 1)
        and word[-1] not in "wxy"
    )


_STEP2 = {
    "ational": "ate",
    "tional": "tion",
    "enci": "ence",
    "anci": "ance",
    "izer": "ize",
    "abli": "able",
    "alli": "al",
    "entli": "ent",
    "eli": "e",
    "ousli": "ous",
    "ization": "ize",
    "ation": "ate",
    "ator": "ate",
    "alism": "al",
    "iveness": "ive",
    "fulness": "ful",
    "ousness": "ous",
    "aliti": "al",
    "iviti": "ive",
    "biliti": "ble",
}

_STEP3 = {
    "icate": "ic",
    "ative": "",
    "alize": "al",
    "iciti": "ic",
    "ical": "ic",
    "ful": "",
    "ness": "",
}

_STEP4 = (
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
)


def _longest_suffix(word: str, suffixes) -> str | None:
    # Porter only ever tries the longest matching suffix of a step.
    return max((s for s in suffixes if word.endswith(s)), key=len, default=None)


def _step1a(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-2]
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def _step1b(word: str) -> str:
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            return word[:-1]
        return word
    for suffix in ("ed", "ing"):
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if not _has_vowel(stem):
                return word
            if stem.endswith(("at", "bl", "iz")):
                return stem + "e"
            if _ends_double_consonant(stem) and stem[-1] not in "lsz":
                return stem[:-1]
            if _measure(stem) == 1 and _ends_cvc(stem):
                return stem + "e"
            return stem
    return word


def _step1c(word: str) -> str:
    if word.endswith("y") and _has_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


def _replace_step(word: str, rules: dict[str, str]) -> str:
    suffix = _longest_suffix(word, rules)
    if suffix is None:
        return word
    stem = word[: -len(suffix)]
    if _measure(stem) > 0:
        return stem + rules[suffix]
    return word


def _step4(word: str) -> str:
    suffix = _longest_suffix(word, _STEP4)
    if suffix is None:
        return word
    stem = word[: -len(suffix)]
    if _measure(stem) <= 1:
        return word
    if suffix == "ion" and not stem.endswith(("s", "t")):
        return word
    return stem


def _step5(word: str) -> str:
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            word = stem
    if _measure(word) > 1 and _ends_double_consonant(word) and word.endswith("l"):
        word = word[:-1]
    return word


def porter_stem(word: str) -> str:
    """Classic Porter stemmer. ``word`` must already be lowercase."""
    if len(word) <= 2:
        return word
    word = _step1a(word)
    word = _step1b(word)
    word = _step1c(word)
    word = _replace_step(word, _STEP2)
    word = _replace_step(word, _STEP3)
    word = _step4(word)
    return _step5(word)


def _strip_adverb_and_superlative(word: str) -> str:
    if word.endswith("ly") and word not in _LY_KEEP:
        stem = word[:-2]
        if len(stem) >= 3 and _measure(stem) > 0:
            return stem
    if word.endswith("est") and len(word) > 5:
        stem = word[:-3]
        # biggest -> big, earliest -> earli; plain "-est" words (interest,
        # forest, protest) are left to Porter.
        if _ends_double_consonant(stem) and stem[-1] not in "lsz":
            return stem[:-1]
        if stem.endswith("i") and _measure(stem) > 0:
            return stem
    return word


def load_exceptions(path: str | Path) -> dict[str, str]:
    """Read a ``word<TAB>stem`` table. Blank lines and ``#`` comments are skipped."""
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise ValueError(f"{path}:{lineno}: expected 'word<TAB>stem'")
            table[parts[0].strip().lower()] = parts[1].strip().lower()
    return table


def default_exceptions() -> dict[str, str]:
    ref = resources.files("kcn") / "data" / "stem_exceptions.tsv"
    with resources.as_file(ref) as path:
        return load_exceptions(path)


class Stemmer:
    """Porter plus keyword-indexing extras and an override table."""

    max_passes = 8

    def __init__(
        self,
        exceptions: Mapping[str, str] | None = None,
        irregular: Mapping[str, str] | None = None,
    ):
        self.exceptions = dict(default_exceptions() if exceptions is None else exceptions)
        self.irregular = dict(IRREGULAR_PLURALS if irregular is None else irregular)
        chained = set(self.exceptions) & set(self.exceptions.values())
        chained = {w for w in chained if self.exceptions[w] != w}
        if chained:
            raise ValueError(
                "exception table maps stems onward: " + ", ".join(sorted(chained))
            )
        self._stems = frozenset(self.exceptions.values())
        self._cache: dict[str, str] = {}

    def _one_pass(self, token: str) -> str:
        token = self.irregular.get(token, token)
        return porter_stem(_strip_adverb_and_superlative(token))

    def stem(self, token: str) -> str:
        cached = self._cache.get(token)
        if cached is not None:
            return cached
        if token in self.exceptions:
            out = self.exceptions[token]
        elif token in self._stems:
            out = token
        else:
            out = token
            for _ in range(self.max_passes):
                nxt = self._one_pass(out)
                if nxt == out:
                    break
                out = nxt
            if out in self.exceptions:
                out = self.exceptions[out]
        self._cache[token] = out
        return out

    __call__ = stem
