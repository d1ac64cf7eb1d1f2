"""Regenerates the frozen oracle fixtures used by the integration tests.

difflib_opcodes.json: Python difflib.SequenceMatcher opcodes (no junk,
autojunk off) for 1000 random token-sequence pairs of length <= 20.

sari_golden.json: sentence SARI from a transcription of the original
released SARIngram/SARIsent (empty denominators score 0).

Run with `python3 gen_fixtures.py` from this directory.
"""
import difflib
import json
import random
from collections import Counter


def difflib_cases(rng, count):
    cases = []
    for _ in range(count):
        alphabet = [chr(ord("a") + k) for k in range(rng.randint(1, 8))]
        a = [rng.choice(alphabet) for _ in range(rng.randint(0, 20))]
        b = [rng.choice(alphabet) for _ in range(rng.randint(0, 20))]
        sm = difflib.SequenceMatcher(None, a, b, autojunk=False)
        cases.append({"a": a, "b": b, "opcodes": [list(op) for op in sm.get_opcodes()]})
    return cases


def SARIngram(sgrams, cgrams, rgramslist, numref):
    rgramsall = [rgram for rgrams in rgramslist for rgram in rgrams]
    rgramcounter = Counter(rgramsall)

    sgramcounter = Counter(sgrams)
    sgramcounter_rep = Counter()
    for sgram, scount in sgramcounter.items():
        sgramcounter_rep[sgram] = scount * numref

    cgramcounter = Counter(cgrams)
    cgramcounter_rep = Counter()
    for cgram, ccount in cgramcounter.items():
        cgramcounter_rep[cgram] = ccount * numref

    # KEEP
    keepgramcounter_rep = sgramcounter_rep & cgramcounter_rep
    keepgramcountergood_rep = keepgramcounter_rep & rgramcounter
    keepgramcounterall_rep = sgramcounter_rep & rgramcounter

    keeptmpscore1 = 0
    keeptmpscore2 = 0
    for keepgram in keepgramcountergood_rep:
        keeptmpscore1 += keepgramcountergood_rep[keepgram] / keepgramcounter_rep[keepgram]
        keeptmpscore2 += keepgramcountergood_rep[keepgram] / keepgramcounterall_rep[keepgram]
    keepscore_precision = 0
    if len(keepgramcounter_rep) > 0:
        keepscore_precision = keeptmpscore1 / len(keepgramcounter_rep)
    keepscore_recall = 0
    if len(keepgramcounterall_rep) > 0:
        keepscore_recall = keeptmpscore2 / len(keepgramcounterall_rep)
    keepscore = 0
    if keepscore_precision > 0 or keepscore_recall > 0:
        keepscore = 2 * keepscore_precision * keepscore_recall / (keepscore_precision + keepscore_recall)

    # DELETION
    delgramcounter_rep = sgramcounter_rep - cgramcounter_rep
    delgramcountergood_rep = delgramcounter_rep - rgramcounter
    delgramcounterall_rep = sgramcounter_rep - rgramcounter
    deltmpscore1 = 0
    for delgram in delgramcountergood_rep:
        deltmpscore1 += delgramcountergood_rep[delgram] / delgramcounter_rep[delgram]
    delscore_precision = 0
    if len(delgramcounter_rep) > 0:
        delscore_precision = deltmpscore1 / len(delgramcounter_rep)

    # ADDITION
    addgramcounter = set(cgramcounter) - set(sgramcounter)
    addgramcountergood = set(addgramcounter) & set(rgramcounter)
    addgramcounterall = set(rgramcounter) - set(sgramcounter)
    addtmpscore = 0
    for addgram in addgramcounter:
        if addgram in addgramcountergood:
            addtmpscore += 1
    addscore_precision = 0
    addscore_recall = 0
    if len(addgramcounter) > 0:
        addscore_precision = addtmpscore / len(addgramcounter)
    if len(addgramcounterall) > 0:
        addscore_recall = addtmpscore / len(addgramcounterall)
    addscore = 0
    if addscore_precision > 0 or addscore_recall > 0:
        addscore = 2 * addscore_precision * addscore_recall / (addscore_precision + addscore_recall)

    return (keepscore, delscore_precision, addscore)


def ngrams(tokens, n):
    return [" ".join(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]


def SARIsent(ssent, csent, rsents):
    numref = len(rsents)
    s = ssent.lower().split()
    c = csent.lower().split()
    rs = [r.lower().split() for r in rsents]
    keeps, dels, adds = [], [], []
    for n in range(1, 5):
        k, d, a = SARIngram(ngrams(s, n), ngrams(c, n), [ngrams(r, n) for r in rs], numref)
        keeps.append(k)
        dels.append(d)
        adds.append(a)
    return (sum(keeps) / 4 + sum(dels) / 4 + sum(adds) / 4) / 3


SARI_CASES = [
    ("about 95 species are currently accepted .", "about 95 species are currently known .",
     ["about 95 species are currently known .", "about 95 species are now accepted .", "95 species are now accepted ."]),
    ("the cat sat on the mat", "the cat sat on the mat", ["the cat sat on a mat", "a cat sat on the mat"]),
    ("the physician administered the medication", "the doctor gave the drug", ["the doctor gave the drug"]),
    ("the physician administered the medication", "", ["the doctor gave the medicine"]),
    ("a b c d e", "a b x d e", ["a b x d e"]),
    ("a b c d e", "a b c", ["a b d", "b c d e"]),
    ("one two three", "four five six", ["one two six"]),
    ("patients were randomized to receive placebo", "patients got a fake drug by chance",
     ["patients were given a fake drug by chance", "patients got placebo at random"]),
    ("x x x y", "x y y", ["x x y", "y y"]),
    ("the elderly individual utilized the analgesic", "the old person used the painkiller .",
     ["the old person used the painkiller .", "the older person took the painkiller ."]),
]


def main():
    rng = random.Random(20240611)
    with open("difflib_opcodes.json", "w") as f:
        json.dump(difflib_cases(rng, 1000), f)
    golden = [{"source": s, "output": c, "references": rs, "sari": 100 * SARIsent(s, c, rs)} for s, c, rs in SARI_CASES]
    with open("sari_golden.json", "w") as f:
        json.dump(golden, f, indent=1)


if __name__ == "__main__":
    main()
