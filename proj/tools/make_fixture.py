#!/usr/bin/env python3
"""Generates the bundled synthetic corpus under data/fixture/.

Every claim names one subject page. Supported claims have a sentence on that
page carrying a support marker, refuted claims one carrying a refute marker,
and unverifiable claims have no marked sentence. Distractor pages share topic
words with the claims so TF-IDF pulls them in as hard candidates.
"""

import argparse
import json
import random
from pathlib import Path

ONSETS = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v",
          "z", "br", "dr", "gl", "kr", "pl", "st", "tr", "th", "sh"]
VOWELS = ["a", "e", "i", "o", "u", "ai", "ou", "ea"]
CODAS = ["", "n", "r", "l", "s", "k", "th", "nd", "m"]

TOPICS = [
    ("exports", "copper"), ("exports", "timber"), ("exports", "wool"),
    ("hosts", "festivals"), ("hosts", "markets"), ("hosts", "tournaments"),
    ("produces", "cheese"), ("produces", "glass"), ("produces", "silk"),
    ("borders", "mountains"), ("borders", "lakes"), ("borders", "deserts"),
    ("employs", "miners"), ("employs", "weavers"), ("employs", "sailors"),
]
SUPPORT_MARKERS = ["verily", "indeed"]
REFUTE_MARKERS = ["never", "falsely"]
KINDS = ["town", "river", "band", "film", "island", "valley"]
FILLERS = [
    "{t} was mentioned in a survey of the region .",
    "{t} appears on several old maps .",
    "Travellers describe {t} as quiet in winter .",
    "The name {t} has an uncertain origin .",
    "{t} is discussed in local histories .",
    "Records about {t} were updated recently .",
    "{t} has a small museum near the square .",
]
TOPIC_FILLERS = [
    "Many places in the area talk about {v} {o} .",
    "Stories about {o} are common around {t} .",
    "Some visitors ask whether {t} {v} {o} .",
]
FIRST = "{t} is an entry in the registry ."


def make_word(rng, used):
    while True:
        w = "".join(rng.choice(part) for part in (ONSETS, VOWELS, CODAS,
                                                  ONSETS, VOWELS))
        if len(w) >= 4 and w not in used:
            used.add(w)
            return w.capitalize()


def make_title(rng, used, paren):
    words = [make_word(rng, used), make_word(rng, used)]
    display = " ".join(words)
    page_id = "_".join(words)
    if paren:
        kind = rng.choice(KINDS)
        page_id += "_-LRB-" + kind + "-RRB-"
    return page_id, display


def lines_field(sentences):
    out = []
    for i, s in enumerate(sentences):
        links = "\t".join(w for w in s.split() if w[:1].isupper())
        out.append(f"{i}\t{s}" + (f"\t{links}" if links else ""))
    return "\n".join(out)


def build(seed, n_claims, n_distractors):
    rng = random.Random(seed)
    used = set()
    pages = []
    claims = []

    labels = (["SUPPORTS"] * (n_claims * 2 // 5) +
              ["REFUTES"] * (n_claims * 3 // 10))
    labels += ["NOT ENOUGH INFO"] * (n_claims - len(labels))
    rng.shuffle(labels)

    for cid, label in enumerate(labels, start=1):
        page_id, title = make_title(rng, used, paren=rng.random() < 0.15)
        verb, obj = rng.choice(TOPICS)
        sentences = [FIRST.format(t=title)]
        fillers = rng.sample(FILLERS, rng.randint(3, 5))
        sentences += [f.format(t=title) for f in fillers]
        if rng.random() < 0.5:
            other_verb, other_obj = rng.choice(TOPICS)
            sentences.append(rng.choice(TOPIC_FILLERS).format(
                t=title, v=other_verb, o=other_obj))

        groups = []
        if label != "NOT ENOUGH INFO":
            markers = SUPPORT_MARKERS if label == "SUPPORTS" else REFUTE_MARKERS
            n_groups = 2 if rng.random() < 0.1 else 1
            for _ in range(n_groups):
                marker = rng.choice(markers)
                pos = rng.randint(1, len(sentences))
                sentences.insert(pos, f"{title} {marker} {verb} {obj} .")
            marked = [i for i, s in enumerate(sentences)
                      if any(f" {m} " in s for m in markers)]
            groups = [[[None, None, page_id, i]] for i in marked]
        else:
            groups = [[[None, None, None, None]]]

        pages.append({"id": page_id, "text": " ".join(sentences),
                      "lines": lines_field(sentences)})
        claims.append({"id": cid, "verifiable":
                       "NOT VERIFIABLE" if label == "NOT ENOUGH INFO"
                       else "VERIFIABLE",
                       "label": label,
                       "claim": f"{title} {verb} {obj} .",
                       "evidence": groups})

    for _ in range(n_distractors):
        page_id, title = make_title(rng, used, paren=False)
        verb, obj = rng.choice(TOPICS)
        sentences = [f"{title} is an entry in the registry about {obj} ."]
        sentences += [f.format(t=title, v=verb, o=obj)
                      for f in rng.sample(TOPIC_FILLERS, 2)]
        sentences += [f.format(t=title) for f in rng.sample(FILLERS, 2)]
        pages.append({"id": page_id, "text": " ".join(sentences),
                      "lines": lines_field(sentences)})

    pages.sort(key=lambda p: p["id"])
    return pages, claims


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent
                                             / "data" / "fixture"))
    parser.add_argument("--seed", type=int, default=2019)
    parser.add_argument("--claims", type=int, default=200)
    parser.add_argument("--distractors", type=int, default=60)
    args = parser.parse_args()

    pages, claims = build(args.seed, args.claims, args.distractors)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "wiki.jsonl", "w") as f:
        for p in pages:
            f.write(json.dumps(p) + "\n")
    with open(out / "claims.jsonl", "w") as f:
        for c in claims:
            f.write(json.dumps(c) + "\n")


if __name__ == "__main__":
    main()
