#!/usr/bin/env python3
"""Generate core/src/unicode_tables.inc from Python's unicodedata.

Emits three tables used by ivr::normalize:
  * simple case-folding pairs (one code point -> one code point),
  * ranges of general category P* (punctuation),
  * whitespace code points.

The folding table is checked to be a fixed point (fold(fold(c)) == fold(c)) and
never maps into punctuation or whitespace, which keeps normalize idempotent.
"""
import sys
import unicodedata

MAX_CP = 0x10FFFF


def simple_fold(ch: str) -> str:
    folded = ch.casefold()
    if len(folded) == 1:
        return folded
    lowered = ch.lower()
    if len(lowered) == 1:
        return lowered
    return ch


def is_surrogate(cp: int) -> bool:
    return 0xD800 <= cp <= 0xDFFF


def main(out_path: str) -> None:
    fold = {}
    punct = []
    space = []
    for cp in range(MAX_CP + 1):
        if is_surrogate(cp):
            continue
        ch = chr(cp)
        cat = unicodedata.category(ch)
        if cat.startswith("P"):
            punct.append(cp)
        if ch.isspace():
            space.append(cp)
        f = simple_fold(ch)
        if f != ch:
            fold[cp] = ord(f)

    # Iterate to a fixed point so folding is idempotent.
    changed = True
    while changed:
        changed = False
        for cp, tgt in list(fold.items()):
            nxt = fold.get(tgt)
            if nxt is not None and nxt != tgt:
                fold[cp] = nxt
                changed = True
    punct_set = set(punct)
    space_set = set(space)
    for cp, tgt in fold.items():
        assert tgt not in punct_set and tgt not in space_set, hex(cp)
        assert cp not in punct_set and cp not in space_set, hex(cp)

    ranges = []
    for cp in punct:
        if ranges and ranges[-1][1] == cp - 1:
            ranges[-1][1] = cp
        else:
            ranges.append([cp, cp])

    with open(out_path, "w", encoding="utf-8") as out:
        out.write("// Generated by tools/gen_unicode_tables.py from Unicode "
                  f"{unicodedata.unidata_version}. Do not edit.\n\n")
        out.write("constexpr CaseFoldPair kCaseFold[] = {\n")
        for cp in sorted(fold):
            out.write(f"    {{0x{cp:05X}, 0x{fold[cp]:05X}}},\n")
        out.write("};\n\n")
        out.write("constexpr CodePointRange kPunctuation[] = {\n")
        for lo, hi in ranges:
            out.write(f"    {{0x{lo:05X}, 0x{hi:05X}}},\n")
        out.write("};\n\n")
        out.write("constexpr char32_t kWhitespace[] = {\n    ")
        out.write(", ".join(f"0x{cp:04X}" for cp in space))
        out.write(",\n};\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "core/src/unicode_tables.inc")
