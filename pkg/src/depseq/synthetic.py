"""Toy treebanks for smoke tests and determinism checks.

Sentences follow ``DET (ADJ) NOUN VERB (DET NOUN) (ADP DET NOUN) PUNCT``.
A prepositional phrase headed by ``of`` attaches to the subject noun across
the verb, which makes the sentence non-projective.
"""

from __future__ import annotations

from .conllu import Sentence, Token
from .rng import SplitMix64

LEXICON = {
    "DET": ["the", "a", "every", "this"],
    "ADJ": ["big", "small", "red", "old", "quiet"],
    "NOUN": ["dog", "cat", "house", "river", "teacher", "garden", "song"],
    "VERB": ["sees", "likes", "builds", "finds", "sings"],
    "PUNCT": [".", "!"],
}


def _sentence(rng: SplitMix64, nonprojective: bool, index: int) -> Sentence:
    words: list[tuple[str, str, str]] = []  # form, upos, deprel
    heads: list[int] = []

    def pick(tag):
        options = LEXICON[tag]
        return options[rng.below(len(options))]

    def noun_phrase(rel, with_adj):
        start = len(words) + 1
        noun = start + 1 + int(with_adj)
        words.append((pick("DET"), "DET", "det"))
        heads.append(noun)
        if with_adj:
            words.append((pick("ADJ"), "ADJ", "amod"))
            heads.append(noun)
        words.append((pick("NOUN"), "NOUN", rel))
        heads.append(-1)  # filled by caller
        return noun

    subj = noun_phrase("nsubj", rng.below(2) == 1)
    verb = len(words) + 1
    words.append((pick("VERB"), "VERB", "root"))
    heads.append(0)
    heads[subj - 1] = verb
    if rng.below(3) > 0:
        obj = noun_phrase("obj", rng.below(3) == 0)
        heads[obj - 1] = verb
    if nonprojective or rng.below(2) == 0:
        case = len(words) + 1
        words.append(("of" if nonprojective else "in", "ADP", "case"))
        heads.append(-1)
        noun = noun_phrase("nmod" if nonprojective else "obl", False)
        heads[case - 1] = noun
        heads[noun - 1] = subj if nonprojective else verb
    words.append((pick("PUNCT"), "PUNCT", "punct"))
    heads.append(verb)
    tokens = [Token(i, f, p, h, r) for i, ((f, p, r), h) in enumerate(zip(words, heads), start=1)]
    return Sentence(tokens, [f"# sent_id = synth-{index}"])


def synthetic_treebank(size: int, seed: int = 1, nonprojective_share: float = 0.25) -> list[Sentence]:
    """``size`` sentences; roughly ``nonprojective_share`` of them non-projective."""
    rng = SplitMix64(seed)
    threshold = int(nonprojective_share * 1000)
    return [_sentence(rng, rng.below(1000) < threshold, i) for i in range(1, size + 1)]
