#!/usr/bin/env python3
"""Independent reference for the tokenizer and vocabulary ranking.

Writes tests/golden/tokenizer.json. Decoding uses Python's own UTF-8 codec
with replacement, so it shares no code with the C++ decoder.
"""
import json
import string
import sys
from collections import Counter

FILTERS = (set(string.punctuation) - {"'"}) | set(string.whitespace)


def separator(ch):
    cp = ord(ch)
    if ch in FILTERS:
        return True
    if 0xA0 <= cp <= 0xBF or ch in "×÷।॥　�":
        return True
    return 0x2000 <= cp <= 0x206F and ch not in "‌‍"


def lower(ch):
    if "A" <= ch <= "Z" or ("À" <= ch <= "Þ" and ch != "×"):
        return ch.lower()
    return ch


def tokenize(raw):
    text = raw.decode("utf-8", errors="replace")
    out, cur = [], []
    for ch in map(lower, text):
        if separator(ch):
            if cur:
                out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur))
    return out


def fnv1a(tokens):
    h = 0xCBF29CE484222325
    for t in tokens:
        for b in t.encode("utf-8") + b"\n":
            h = ((h ^ b) * 0x100000001B3) % (1 << 64)
    return "%016x" % h


CASES = [
    b"Hello, World!",
    b"You're SO smart... NOT!!!",
    b"don't   stop\tme\nnow",
    b"100% (really) #winning @user_1",
    b"a-b_c/d\\e|f~g",
    "cafÉ ÜBER naïve × ÷".encode(),
    "¡Hola!¿Qué? fin«»".encode(),
    "আমি ভালো আছি। তুমি?".encode(),
    "क्‍ष नमस्ते॥भारत".encode(),
    "র‌্যাব".encode(),
    "dash—here…there “quoted”　ideo".encode(),
    "ПРИВЕТ mixed \U0001F600emoji".encode(),
    b"bad\xffbyte \xc3(trunc \xe0\x80\x80overlong \xed\xa0\x80surrogate end\xe2\x82",
    b"",
    b"   \t\n ",
    b"''' it's '",
]


def main(path):
    cases = [{"hex": c.hex(), "tokens": tokenize(c)} for c in CASES]
    corpus = [tokenize(c) for c in CASES]
    counts = Counter(t for doc in corpus for t in doc)
    max_size, min_freq = 12, 1
    ranked = sorted((t for t, n in counts.items() if n >= min_freq),
                    key=lambda t: (-counts[t], t.encode("utf-8")))
    vocab = ["<pad>", "<unk>"] + ranked[: max_size - 2]
    golden = {
        "cases": cases,
        "vocab": {"max_size": max_size, "min_freq": min_freq,
                  "tokens": vocab,
                  "counts": [0, 0] + [counts[t] for t in vocab[2:]],
                  "hash": fnv1a(vocab)},
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(golden, f, ensure_ascii=False, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/golden/tokenizer.json")
