import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capeval.textproc import lcs_length, ngrams, stem, tokenize

from oracles import lcs_brute_force


class TestTokenize:
    def test_basic_normalization(self):
        assert tokenize("A Dog barks!") == ["a", "dog", "barks"]

    def test_empty(self):
        assert tokenize("") == []

    def test_internal_apostrophe_kept(self):
        assert tokenize("it's 2 dogs") == ["it's", "2", "dogs"]

    def test_stray_apostrophes_dropped(self):
        assert tokenize("'hello' dogs' 'n") == ["hello", "dogs", "n"]
        assert tokenize("rock 'n' roll") == ["rock", "n", "roll"]

    def test_punctuation_and_unicode_are_separators(self):
        assert tokenize("dog,cat;bird—fish") == ["dog", "cat", "bird", "fish"]

    @given(st.text(max_size=80))
    @settings(max_examples=200)
    def test_idempotent_on_own_output(self, text):
        tokens = tokenize(text)
        assert tokenize(" ".join(tokens)) == tokens

    @given(st.text(max_size=80))
    def test_token_invariants(self, text):
        for tok in tokenize(text):
            assert tok
            assert not any(c.isspace() for c in tok)
            assert all(c.islower() or c.isdigit() or c == "'" for c in tok)
            assert not tok.startswith("'") and not tok.endswith("'")


# input -> stem, cross-checked against the published reference
# implementation (final-y entries hand-derived under the revised step 1c:
# y -> i only after a consonant).
PORTER_PAIRS = [
    ("caresses", "caress"),
    ("ponies", "poni"),
    ("ties", "ti"),
    ("caress", "caress"),
    ("cats", "cat"),
    ("feed", "feed"),
    ("agreed", "agre"),
    ("plastered", "plaster"),
    ("bled", "bled"),
    ("motoring", "motor"),
    ("sing", "sing"),
    ("conflated", "conflat"),
    ("troubled", "troubl"),
    ("sized", "size"),
    ("hopping", "hop"),
    ("tanned", "tan"),
    ("falling", "fall"),
    ("hissing", "hiss"),
    ("fizzed", "fizz"),
    ("failing", "fail"),
    ("filing", "file"),
    ("relational", "relat"),
    ("conditional", "condit"),
    ("rational", "ration"),
    ("digitizer", "digit"),
    ("radicalli", "radic"),
    ("differentli", "differ"),
    ("analogousli", "analog"),
    ("vietnamization", "vietnam"),
    ("predication", "predic"),
    ("operator", "oper"),
    ("feudalism", "feudal"),
    ("decisiveness", "decis"),
    ("hopefulness", "hope"),
    ("callousness", "callous"),
    ("triplicate", "triplic"),
    ("formative", "form"),
    ("formalize", "formal"),
    ("electrical", "electr"),
    ("hopeful", "hope"),
    ("goodness", "good"),
    ("revival", "reviv"),
    ("allowance", "allow"),
    ("inference", "infer"),
    ("airliner", "airlin"),
    ("gyroscopic", "gyroscop"),
    ("adjustable", "adjust"),
    ("defensible", "defens"),
    ("irritant", "irrit"),
    ("replacement", "replac"),
    ("adjustment", "adjust"),
    ("dependent", "depend"),
    ("adoption", "adopt"),
    ("communism", "commun"),
    ("activate", "activ"),
    ("effective", "effect"),
    ("bowdlerize", "bowdler"),
    ("probate", "probat"),
    ("rate", "rate"),
    ("cease", "ceas"),
    ("controll", "control"),
    ("roll", "roll"),
    ("abilities", "abil"),
    ("realization", "realiz"),
    ("whistles", "whistl"),
    ("sizzling", "sizzl"),
    ("engines", "engin"),
    # revised step 1c: y -> i only when a consonant precedes it
    ("playing", "play"),
    ("played", "play"),
    ("plays", "play"),
    ("play", "play"),
    ("enjoy", "enjoy"),
    ("happy", "happi"),
    ("happily", "happili"),
    ("crying", "cri"),
    ("flying", "fli"),
    ("barks", "bark"),
    ("barking", "bark"),
    ("dogs", "dog"),
]


class TestStem:
    @pytest.mark.parametrize("word,expected", PORTER_PAIRS)
    def test_reference_pairs(self, word, expected):
        assert stem(word) == expected

    def test_short_words_unchanged(self):
        for word in ("a", "is", "by", "it", "s"):
            assert stem(word) == word

    def test_inflections_collapse(self):
        assert stem("playing") == stem("plays") == stem("played")
        assert stem("barks") == stem("barking") == stem("bark")


class TestNgrams:
    def test_bigrams(self):
        assert ngrams(["a", "dog", "barks"], 2) == {
            ("a", "dog"): 1,
            ("dog", "barks"): 1,
        }

    def test_multiplicity(self):
        assert ngrams(["a", "a", "a"], 1) == {("a",): 3}

    def test_too_short(self):
        assert ngrams(["a", "dog"], 3) == {}

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            ngrams(["a"], 0)

    @given(st.lists(st.sampled_from("abcde"), max_size=12), st.integers(1, 5))
    def test_total_count(self, seq, n):
        assert sum(ngrams(seq, n).values()) == max(0, len(seq) - n + 1)


WORDS = st.sampled_from(["a", "dog", "cat", "barks", "runs"])


class TestLcs:
    def test_identity(self):
        seq = ["a", "dog", "barks", "loudly"]
        assert lcs_length(seq, seq) == 4

    def test_disjoint(self):
        assert lcs_length(["a", "b"], ["c", "d"]) == 0

    def test_example(self):
        assert lcs_length(["a", "dog", "barks"], ["a", "cat", "barks"]) == 2

    @given(st.lists(WORDS, max_size=8), st.lists(WORDS, max_size=8))
    @settings(max_examples=150)
    def test_matches_brute_force(self, a, b):
        assert lcs_length(a, b) == lcs_brute_force(a, b)

    @given(st.lists(WORDS, max_size=8), st.lists(WORDS, max_size=8))
    def test_symmetry_and_bounds(self, a, b):
        lcs = lcs_length(a, b)
        assert lcs == lcs_length(b, a)
        assert 0 <= lcs <= min(len(a), len(b))
        assert lcs_length(a, a) == len(a)
