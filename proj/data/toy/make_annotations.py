"""Simulates five coders for the toy corpus.

Usage: python3 make_annotations.py sentences.tsv > annotations.csv

Each dimension has cue words; a sentence with a cue is marked by each coder
with probability 0.75, other sentences with probability 0.03. Host ideology
is only marked together with a core dimension.
"""
import csv
import random
import sys

CUES = {
    "antielite": ["Regierung", "Eliten", "Elite", "Altparteien", "Konzerne", "Lobbyisten",
                  "Medien", "Kartell", "Banken", "Brüssel", "oberen Zehntausend",
                  "Immobilienkonzerne", "Rüstungskonzerne", "Aktionäre"],
    "pplcentr": ["Volk", "Bürger", "Menschen", "einfachen Leute", "Beschäftigten"],
    "left": ["Reichen", "Millionäre", "Konzerne", "Profite", "Mieten", "Rentner",
             "Beschäftigten", "Banken", "Rüstungskonzerne", "Aktionäre"],
    "right": ["Grenzen", "Heimat", "Masseneinwanderung", "Kultur", "Bleiberecht",
              "Grenzöffnung", "Deutschen", "Land zurück"],
}
# Technical uses of these words are not populist.
NEUTRAL = ["Bürgerportal", "Bürgerinnen und Bürger warten", "Lebensleistung vieler Menschen",
           "Kohlekommission"]

rng = random.Random(20240611)


def has_cue(text, dim):
    if any(n in text for n in NEUTRAL):
        return False
    return any(c in text for c in CUES[dim])


def main(path):
    with open(path, encoding="utf-8") as f:
        rows = list(csv.DictReader(f, delimiter="\t"))
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["sentence_id", "coder_id", "antielite", "pplcentr", "left", "right"])
    for row in rows:
        text = row["text"]
        for coder in ["c1", "c2", "c3", "c4", "c5"]:
            core = {}
            for dim in ("antielite", "pplcentr"):
                p = 0.75 if has_cue(text, dim) else 0.03
                core[dim] = int(rng.random() < p)
            host = {}
            for dim in ("left", "right"):
                p = 0.75 if has_cue(text, dim) else 0.0
                host[dim] = int(rng.random() < p and (core["antielite"] or core["pplcentr"]))
            out.writerow([row["sentence_id"], coder, core["antielite"], core["pplcentr"],
                          host["left"], host["right"]])


if __name__ == "__main__":
    main(sys.argv[1])
