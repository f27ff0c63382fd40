#!/usr/bin/env python3
"""Regenerate data/common_words.txt.

Takes the most frequent English words (wordfreq) and keeps those that are
dictionary entries (web2 + gcide from the english-words package) or simple
inflections of one. Brand and product names that are frequent on the web
(matlab, linux, ...) drop out because they are not dictionary words.

    pip install wordfreq english-words
    python3 scripts/gen_common_words.py > data/common_words.txt
"""
import sys

from english_words import get_english_words_set
from wordfreq import top_n_list

LIMIT = 50000
SUFFIXES = [("ies", "y"), ("es", ""), ("s", ""), ("ed", ""), ("ed", "e"),
            ("ing", ""), ("ing", "e"), ("ly", ""), ("er", ""), ("est", ""),
            ("ers", ""), ("ings", "")]


def main():
    dictionary = get_english_words_set(["web2", "gcide"], lower=True, alpha=True)

    def known(word):
        if word in dictionary:
            return True
        for suffix, repl in SUFFIXES:
            if word.endswith(suffix) and len(word) - len(suffix) >= 3:
                base = word[: -len(suffix)] + repl
                if base in dictionary:
                    return True
                if len(base) > 3 and base[-1] == base[-2] and base[:-1] in dictionary:
                    return True
        return False

    out = []
    for word in top_n_list("en", 120000):
        if word.isascii() and word.isalpha() and known(word):
            out.append(word)
            if len(out) == LIMIT:
                break
    sys.stdout.write("\n".join(sorted(out)) + "\n")


if __name__ == "__main__":
    main()
