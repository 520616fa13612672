#!/usr/bin/env python3
"""Independent oracle for the golden rank CSV.

Re-implements the default tokenization rules and the ranking convention
from scratch (no shared code with the Rust pipeline) so the checked-in
golden file is derived independently:

  - NFC-normalize, then scan maximal runs of word characters
    (Unicode letters, Unicode digits, apostrophes ' and U+2019, hyphen -)
  - a run with no letter is erased whole; inside letter-bearing runs,
    marks not flanked by letters on both sides split the run
  - pieces containing a digit are erased; survivors are lowercased
  - counts sorted by (frequency desc, word asc); ranks 1..V

Usage: golden_rank_csv.py INPUT.txt [PREAMBLE_FILE]

PREAMBLE_FILE holds verbatim `# `-prefixed metadata lines (version and
run configuration) copied from a reference CLI run; the oracle only
vouches for the data rows.
"""
import sys
import unicodedata
from collections import Counter

APOSTROPHES = {"'", "’"}


def is_letter(c):
    return unicodedata.category(c).startswith("L")


def is_digit(c):
    return unicodedata.category(c).startswith("N")


def is_mark(c):
    return c in APOSTROPHES or c == "-"


def is_word_char(c):
    return is_letter(c) or is_digit(c) or is_mark(c)


def tokenize(text):
    text = unicodedata.normalize("NFC", text)
    tokens = []
    run = []
    for c in text + " ":
        if is_word_char(c):
            run.append(c)
            continue
        if run:
            if not any(is_letter(x) for x in run):
                pass  # erased whole (non-word)
            else:
                piece = []
                for j, x in enumerate(run):
                    if is_mark(x):
                        prev_ok = j > 0 and is_letter(run[j - 1])
                        next_ok = j + 1 < len(run) and is_letter(run[j + 1])
                        if prev_ok and next_ok:
                            piece.append(x)
                        else:
                            flush(piece, tokens)
                            piece = []
                    else:
                        piece.append(x)
                flush(piece, tokens)
            run = []
    return tokens


def flush(piece, tokens):
    if not piece:
        return
    word = "".join(piece)
    if any(is_digit(c) for c in word):
        return  # erased (non-word)
    tokens.append(word.lower())


def main():
    text = open(sys.argv[1], encoding="utf-8").read()
    preamble = open(sys.argv[2], encoding="utf-8").read() if len(sys.argv) > 2 else ""
    counts = Counter(tokenize(text))
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    sys.stdout.write(preamble)
    sys.stdout.write("rank,word,frequency\n")
    for i, (word, count) in enumerate(ranked, start=1):
        sys.stdout.write(f"{i},{word},{count}\n")


if __name__ == "__main__":
    main()
