#!/usr/bin/env python3
"""Regenerate data/hindi_words.txt and data/english_words.txt.

Hindi: frequent Devanagari words from `wordfreq`, romanized with a
lowercase scheme (long vowels doubled, word-final inherent vowel dropped),
e.g. गुलाम -> gulaam, समुद्र -> samudr, खिलाड़ी -> khilaadii.
English: frequent alphabetic English words from `wordfreq`.

    pip install wordfreq
    python3 tools/make_wordlists.py [--hindi 6000] [--english 4000]
"""
import argparse
import pathlib
import re

import wordfreq

CONSONANTS = {
    "क": "k", "ख": "kh", "ग": "g", "घ": "gh", "ङ": "n",
    "च": "ch", "छ": "chh", "ज": "j", "झ": "jh", "ञ": "n",
    "ट": "t", "ठ": "th", "ड": "d", "ढ": "dh", "ण": "n",
    "त": "t", "थ": "th", "द": "d", "ध": "dh", "न": "n",
    "प": "p", "फ": "ph", "ब": "b", "भ": "bh", "म": "m",
    "य": "y", "र": "r", "ल": "l", "व": "v",
    "श": "sh", "ष": "sh", "स": "s", "ह": "h",
    "क़": "q", "ख़": "kh", "ग़": "g", "ज़": "z", "ड़": "d", "ढ़": "rh",
    "फ़": "f", "य़": "y",
}
NUKTA_BASE = {"क": "क़", "ख": "ख़", "ग": "ग़", "ज": "ज़", "ड": "ड़", "ढ": "ढ़", "फ": "फ़", "य": "य़"}
VOWELS = {
    "अ": "a", "आ": "aa", "इ": "i", "ई": "ii", "उ": "u", "ऊ": "uu",
    "ऋ": "ri", "ए": "e", "ऐ": "ai", "ओ": "o", "औ": "au", "ऑ": "o", "ऍ": "e",
}
MATRAS = {
    "ा": "aa", "ि": "i", "ी": "ii", "ु": "u", "ू": "uu", "ृ": "ri",
    "े": "e", "ै": "ai", "ो": "o", "ौ": "au", "ॉ": "o", "ॅ": "e",
}
VIRAMA = "्"
NUKTA = "़"
NASAL = {"ं": "n", "ँ": "n", "ः": "h"}


def romanize(word):
    # fold decomposed nukta sequences into the precomposed consonants
    for base, composed in NUKTA_BASE.items():
        word = word.replace(base + NUKTA, composed)
    out = []
    chars = list(word)
    i = 0
    while i < len(chars):
        c = chars[i]
        if c in CONSONANTS:
            out.append(CONSONANTS[c])
            nxt = chars[i + 1] if i + 1 < len(chars) else None
            if nxt in MATRAS:
                out.append(MATRAS[nxt])
                i += 1
            elif nxt == VIRAMA:
                i += 1
            elif nxt is None:
                pass  # final inherent vowel is silent
            else:
                out.append("a")
        elif c in VOWELS:
            out.append(VOWELS[c])
        elif c in NASAL:
            out.append(NASAL[c])
        else:
            return None
        i += 1
    s = "".join(out)
    return s if re.fullmatch(r"[a-z]{2,}", s) else None


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--hindi", type=int, default=6000)
    ap.add_argument("--english", type=int, default=4000)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()

    hindi, seen = [], set()
    for w in wordfreq.top_n_list("hi", 200000):
        r = romanize(w)
        if r and r not in seen:
            seen.add(r)
            hindi.append(r)
        if len(hindi) == args.hindi:
            break

    english, seen = [], set()
    for w in wordfreq.top_n_list("en", 200000):
        if re.fullmatch(r"[a-z]{2,}", w) and w not in seen:
            seen.add(w)
            english.append(w)
        if len(english) == args.english:
            break

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "hindi_words.txt").write_text("\n".join(hindi) + "\n", encoding="utf-8")
    (out / "english_words.txt").write_text("\n".join(english) + "\n", encoding="utf-8")
    print(f"hindi={len(hindi)} english={len(english)}")


if __name__ == "__main__":
    main()
