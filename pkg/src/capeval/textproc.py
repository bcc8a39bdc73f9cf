"""Text normalization, stemming, n-grams, and LCS shared by every metric.

All caption text in this package flows through :func:`tokenize`, so the
metrics stay comparable with each other by construction.
"""

from __future__ import annotations

import re
from collections import Counter
from functools import lru_cache

# A token sequence is a plain list of lowercase word strings.
TokenSeq = list

_NON_WORD = re.compile(r"[^a-z0-9']+")
# An apostrophe survives only between two letters ("it's"); every other
# apostrophe is a separator.
_STRAY_APOSTROPHE = re.compile(r"(?<![a-z])'|'(?![a-z])")


def tokenize(text: str) -> list[str]:
    """Lowercase ``text`` and split it into word tokens.

    Characters other than ASCII letters, digits, and apostrophes become
    separators. Empty input yields an empty list.
    """
    text = _NON_WORD.sub(" ", text.lower())
    text = _STRAY_APOSTROPHE.sub(" ", text)
    return text.split()


def ngrams(seq: list[str], n: int) -> Counter:
    """Sliding-window n-gram multiset of ``seq`` (empty if the sequence is shorter than n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return Counter(tuple(seq[i : i + n]) for i in range(len(seq) - n + 1))


def lcs_length(a: list[str], b: list[str]) -> int:
    """Length of the longest (not necessarily contiguous) common subsequence."""
    if not a or not b:
        return 0
    if len(b) > len(a):  # keep the DP row on the shorter sequence
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for tok in a:
        cur = [0]
        for j, btok in enumerate(b):
            if tok == btok:
                cur.append(prev[j] + 1)
            else:
                cur.append(max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


class PorterStemmer:
    """Porter suffix-stripping stemmer, steps 1a through 5b.

    Follows the classic rule tables with the maintainer's later revisions:
    step 1c rewrites a final "y" to "i" only after a consonant, step 2 maps
    "bli"->"ble" and adds "logi"->"log", and words of one or two letters are
    returned unchanged.
    """

    # (suffix, replacement) tables for the measure-gated steps. Within each
    # step the first matching suffix wins, whether or not its measure
    # condition then allows the rewrite.
    _STEP2 = (
        ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
        ("izer", "ize"), ("bli", "ble"), ("alli", "al"), ("entli", "ent"),
        ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
        ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
        ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
        ("logi", "log"),
    )
    _STEP3 = (
        ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
        ("ical", "ic"), ("ful", ""), ("ness", ""),
    )
    _STEP4 = (
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
        "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    )

    def stem(self, word: str) -> str:
        if len(word) <= 2:
            return word
        word = self._step1a(word)
        word = self._step1b(word)
        word = self._step1c(word)
        word = self._step2(word)
        word = self._step3(word)
        word = self._step4(word)
        word = self._step5a(word)
        word = self._step5b(word)
        return word

    # -- character classes ------------------------------------------------

    @staticmethod
    def _is_cons(word: str, i: int) -> bool:
        ch = word[i]
        if ch in "aeiou":
            return False
        if ch == "y":
            return True if i == 0 else not PorterStemmer._is_cons(word, i - 1)
        return True

    @classmethod
    def _measure(cls, stem: str) -> int:
        # number of vowel->consonant transitions, i.e. m in [C](VC)^m[V]
        m = 0
        prev_vowel = False
        for i in range(len(stem)):
            vowel = not cls._is_cons(stem, i)
            if prev_vowel and not vowel:
                m += 1
            prev_vowel = vowel
        return m

    @classmethod
    def _has_vowel(cls, stem: str) -> bool:
        return any(not cls._is_cons(stem, i) for i in range(len(stem)))

    @classmethod
    def _ends_double_cons(cls, word: str) -> bool:
        return len(word) >= 2 and word[-1] == word[-2] and cls._is_cons(word, len(word) - 1)

    @classmethod
    def _ends_cvc(cls, word: str) -> bool:
        if len(word) < 3:
            return False
        return (
            cls._is_cons(word, len(word) - 3)
            and not cls._is_cons(word, len(word) - 2)
            and cls._is_cons(word, len(word) - 1)
            and word[-1] not in "wxy"
        )

    # -- steps -------------------------------------------------------------

    def _step1a(self, w: str) -> str:
        if w.endswith("sses"):
            return w[:-2]
        if w.endswith("ies"):
            return w[:-2]
        if w.endswith("ss"):
            return w
        if w.endswith("s"):
            return w[:-1]
        return w

    def _step1b(self, w: str) -> str:
        if w.endswith("eed"):
            if self._measure(w[:-3]) > 0:
                return w[:-1]
            return w
        if w.endswith("ed") and self._has_vowel(w[:-2]):
            return self._step1b_fixup(w[:-2])
        if w.endswith("ing") and self._has_vowel(w[:-3]):
            return self._step1b_fixup(w[:-3])
        return w

    def _step1b_fixup(self, w: str) -> str:
        # after stripping -ed/-ing: restore an "e" or undo a doubled consonant
        if w.endswith(("at", "bl", "iz")):
            return w + "e"
        if self._ends_double_cons(w) and w[-1] not in "lsz":
            return w[:-1]
        if self._measure(w) == 1 and self._ends_cvc(w):
            return w + "e"
        return w

    def _step1c(self, w: str) -> str:
        # revised rule: final y -> i only after a consonant
        if w.endswith("y") and len(w) > 2 and self._is_cons(w, len(w) - 2):
            return w[:-1] + "i"
        return w

    def _apply_table(self, w: str, table, min_measure: int = 0) -> str:
        for suffix, repl in table:
            if w.endswith(suffix):
                stem = w[: len(w) - len(suffix)]
                if self._measure(stem) > min_measure:
                    return stem + repl
                return w
        return w

    def _step2(self, w: str) -> str:
        return self._apply_table(w, self._STEP2)

    def _step3(self, w: str) -> str:
        return self._apply_table(w, self._STEP3)

    def _step4(self, w: str) -> str:
        for suffix in self._STEP4:
            if w.endswith(suffix):
                stem = w[: len(w) - len(suffix)]
                if suffix == "ion" and not stem.endswith(("s", "t")):
                    continue
                if self._measure(stem) > 1:
                    return stem
                return w
        return w

    def _step5a(self, w: str) -> str:
        if w.endswith("e"):
            stem = w[:-1]
            m = self._measure(stem)
            if m > 1 or (m == 1 and not self._ends_cvc(stem)):
                return stem
        return w

    def _step5b(self, w: str) -> str:
        if w.endswith("ll") and self._measure(w[:-1]) > 1:
            return w[:-1]
        return w


_STEMMER = PorterStemmer()


@lru_cache(maxsize=None)
def stem(token: str) -> str:
    """Porter stem of a single lowercase token."""
    return _STEMMER.stem(token)
