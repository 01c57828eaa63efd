"""Independent reference computations used to check the library.

Nothing here imports the code under test except for plain data types, so a
bug in the library cannot hide behind the same bug in the oracle.
"""

from __future__ import annotations

import csv
import random
import re
from fractions import Fraction
from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"

# Word table of the worked example: word -> (frequency, type, keywords formed)
GOLDEN_WORDS = {
    "absorption": (1, "SW (8-C)", 1),
    "acoustic": (1, "SW (2-C)", 1),
    "aharonov": (1, "EW", 1),
    "band": (1, "SW (5-C)", 1),
    "bohm": (1, "EW", 1),
    "defect": (1, "SW (4-C)", 1),
    "effect": (2, "SW (0-C)", 2),
    "gap": (1, "SW (10-C)", 1),
    "lattice": (1, "SW (4-C)", 1),
    "nuclear": (1, "SW (4-C)", 1),
    "of": (2, "FW", 2),
    "relaxation": (1, "SW (5-C)", 1),
    "semiconductor": (1, "SW (3-C)", 1),
    "spectra": (1, "SW (1-C)", 1),
    "spin": (1, "SW (10-C)", 1),
    "surface": (1, "SW (5-C)", 1),
    "wave": (1, "SW (7-C)", 1),
    "wide": (1, "SW (4-C)", 1),
}

# The five keywords as hand-tokenized sequences: (word, kind) with D(C) for SW.
GOLDEN_SEQUENCES = [
    [("wide", 4), ("band", 5), ("gap", 10), ("semiconductor", 3)],
    [("nuclear", 4), ("spin", 10), ("lattice", 4), ("relaxation", 5), ("effect", 0)],
    [("defect", 4), ("of", "FW"), ("absorption", 8), ("spectra", 1)],
    [("surface", 5), ("of", "FW"), ("acoustic", 2), ("wave", 7)],
    [("aharonov", "EW"), ("bohm", "EW"), ("effect", 0)],
]


def brute_force_associations(sequences, category, fw_fw_pairs=True) -> int:
    """Count ordered adjacent pairs (x, y) with x in ``category``.

    Non-FW categories look at the sequence with form words deleted; FW looks at
    the full sequence. Every (i, j) with |i - j| == 1 is enumerated explicitly.
    """
    total = 0
    for seq in sequences:
        if category == "FW":
            items = seq
        else:
            items = [t for t in seq if t[1] != "FW"]
        for i in range(len(items)):
            for j in range(len(items)):
                if abs(i - j) != 1:
                    continue
                if items[i][1] != category:
                    continue
                if category == "FW" and items[j][1] == "FW" and not fw_fw_pairs:
                    continue
                total += 1
    return total


def brute_force_triple(sequences, category):
    words = {w for seq in sequences for w, c in seq if c == category}
    k = sum(1 for seq in sequences if any(c == category for _, c in seq))
    return len(words), brute_force_associations(sequences, category), k


def rank_average(values):
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for m in range(i, j + 1):
            ranks[order[m]] = avg
        i = j + 1
    return ranks


def spearman_oracle(x, y) -> float:
    rx, ry = rank_average(x), rank_average(y)
    n = len(x)
    mx, my = sum(rx) / n, sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0 or vy == 0:
        return 0.0
    return cov / (vx * vy) ** 0.5


def load_published_parameters():
    """Published rows: label, f, a, k, D(C) or None, and the five printed values as strings."""
    rows = []
    with open(FIXTURES / "published_parameters.tsv", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        next(reader)
        for r in reader:
            label = r[0]
            degree = int(label[:-2]) if label.endswith("-C") else None
            rows.append({
                "label": label,
                "f": int(r[1]),
                "a": int(r[2]),
                "k": int(r[3]),
                "degree": degree,
                "printed": r[4:9] + [""] * (9 - len(r)),
            })
    return rows


def load_published_subject_frequencies():
    """(subject, discipline, f) rows as printed, duplicates included."""
    rows = []
    for line in (FIXTURES / "published_subject_frequencies.tsv").read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        subject, discipline, f = line.split("\t")
        rows.append((subject, discipline, int(f)))
    return rows


def load_published_ranking():
    rows = []
    lines = (FIXTURES / "published_discipline_ranking.tsv").read_text(encoding="utf-8").splitlines()[1:]
    for line in lines:
        rank, discipline, F, pct = line.split("\t")
        rows.append((int(rank), discipline, int(F), Fraction(pct)))
    return rows


# -- synthetic corpora -------------------------------------------------------------

# Already-normalized vocabulary (lowercase, no plural endings), so the oracle's
# canonical form is just a lowercase split.
CONTENT_WORDS = [
    "laser", "crystal", "phonon", "magnet", "helium", "vortex", "film", "glass", "spin",
    "lattice", "quantum", "thermal", "noise", "wire", "dot", "field", "model", "gap",
]
FORM_WORDS = ["of", "and", "in", "the", "for"]
EPONYMS = ["bose", "einstein", "josephson", "kondo"]
ACRONYMS = ["NMR", "ESR", "BCS", "2D"]

_SPLIT = re.compile(r"[\s\-]+")


def random_keyword(rng: random.Random, max_tokens: int = 6) -> str:
    n = rng.randint(1, max_tokens)
    pool = CONTENT_WORDS * 3 + FORM_WORDS + EPONYMS + ACRONYMS
    words = [rng.choice(pool) for _ in range(n)]
    if all(w in FORM_WORDS for w in words):
        words[0] = rng.choice(CONTENT_WORDS)
    out = []
    for w in words:
        if w not in ACRONYMS and rng.random() < 0.2:
            w = w.capitalize()
        out.append(w)
    text = out[0]
    for w in out[1:]:
        text += rng.choice([" ", " ", "-"]) + w
    return text


def random_records(rng: random.Random, max_keywords: int = 50, max_tokens: int = 6):
    keywords = [random_keyword(rng, max_tokens) for _ in range(rng.randint(1, max_keywords))]
    n_articles = rng.randint(1, 20)
    records = []
    for kw in keywords:
        for _ in range(rng.randint(1, 3)):
            a = rng.randrange(n_articles)
            records.append({
                "article_id": f"A{a:03d}",
                "year": 2000 + a % 5,
                "volume": str(10 + a % 5),
                "keyword": kw,
            })
    return records


def oracle_canonical(raw: str) -> tuple[str, ...]:
    return tuple(p if p in ACRONYMS else p.lower() for p in _SPLIT.split(raw.strip()) if p)


def oracle_wordship_buckets(records) -> dict[str, int]:
    distinct = {oracle_canonical(r["keyword"]) for r in records}
    buckets = {"1": 0, "2": 0, "3": 0, ">3": 0}
    for words in distinct:
        n = sum(1 for w in words if w not in FORM_WORDS)
        buckets[">3" if n > 3 else str(n)] += 1
    return buckets
