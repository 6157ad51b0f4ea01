"""Greedy averaged-perceptron sequence labeler.

One independent perceptron is trained per label component (for example the
head part and the deprel of an encoding), each decoding left to right with
its own two previous predictions as history.  The same class doubles as the
PoS tagger (a single ``upos`` component, no PoS features).
"""

from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .conllu import Sentence
from .rng import shuffled

logger = logging.getLogger(__name__)

POS_SETUPS = ("gold", "predicted", "none")
FORMAT_TAG = "#depseq-model"
FORMAT_VERSION = 1
BOS = "<s>"
EOS = "</s>"


@dataclass
class TaggerConfig:
    epochs: int = 10
    seed: int = 1
    use_pos: str = "gold"

    def __post_init__(self):
        if self.use_pos not in POS_SETUPS:
            raise ValueError(f"use_pos must be one of {POS_SETUPS}, not {self.use_pos!r}")
        if self.epochs < 1:
            raise ValueError("epochs must be positive")


def _shape(word: str) -> list[str]:
    feats = []
    if any(c.isdigit() for c in word):
        feats.append("has_digit")
    if word and all(not c.isalnum() for c in word):
        feats.append("is_punct")
    if word[:1].isupper():
        feats.append("upper_initial")
    if "-" in word:
        feats.append("has_hyphen")
    return feats


def token_features(forms: Sequence[str], tags: Optional[Sequence[str]], i: int) -> list[str]:
    """History-independent features of token i (0-based)."""
    n = len(forms)

    def form(k):
        if k < 0:
            return BOS
        if k >= n:
            return EOS
        return forms[k].lower()

    w = form(i)
    feats = ["bias", "w=" + w]
    for k in (1, 2, 3):
        feats.append(f"p{k}={w[:k]}")
        feats.append(f"s{k}={w[-k:]}")
    for off in (-2, -1, 1, 2):
        feats.append(f"w{off:+d}={form(i + off)}")
    feats.extend(_shape(forms[i]))
    if tags is not None:

        def tag(k):
            if k < 0:
                return BOS
            if k >= n:
                return EOS
            return tags[k] or "_"

        feats.append("t=" + tag(i))
        feats.append("t-1=" + tag(i - 1))
        feats.append("t+1=" + tag(i + 1))
        feats.append(f"t-1,t={tag(i - 1)}|{tag(i)}")
        feats.append(f"t,t+1={tag(i)}|{tag(i + 1)}")
        feats.append(f"t,w={tag(i)}|{w}")
    return feats


def history_features(prev1: str, prev2: str) -> list[str]:
    return ["h-1=" + prev1, "h-2=" + prev2, f"h-2,h-1={prev2}|{prev1}"]


class Perceptron:
    """Multiclass averaged perceptron over sparse string features."""

    def __init__(self, labels: Mapping[str, int] = ()):
        self.weights: dict[str, dict[str, float]] = {}
        self.freq: dict[str, int] = dict(labels)
        self._by_freq = sorted(self.freq, key=lambda lab: (-self.freq[lab], lab))
        self._totals: dict[tuple[str, str], float] = defaultdict(float)
        self._tstamps: dict[tuple[str, str], int] = defaultdict(int)
        self._i = 0

    @property
    def labels(self) -> list[str]:
        return sorted(self.freq)

    def predict(self, features: Sequence[str]) -> str:
        scores: dict[str, float] = defaultdict(float)
        for f in features:
            w = self.weights.get(f)
            if w:
                for label, v in w.items():
                    scores[label] += v
        key = lambda lab: (scores.get(lab, 0.0), self.freq[lab], lab)
        best = max(scores, key=key) if scores else None
        # best label among those with no score at all (score 0)
        for lab in self._by_freq:
            if lab not in scores:
                if best is None or key(lab) > key(best):
                    best = lab
                break
        return best

    def update(self, truth: str, guess: str, features: Sequence[str]) -> None:
        self._i += 1
        if truth == guess:
            return
        for f in features:
            w = self.weights.setdefault(f, {})
            for label, delta in ((truth, 1.0), (guess, -1.0)):
                key = (f, label)
                old = w.get(label, 0.0)
                self._totals[key] += (self._i - self._tstamps[key]) * old
                self._tstamps[key] = self._i
                new = old + delta
                if new:
                    w[label] = new
                else:
                    w.pop(label, None)

    def averaged(self) -> "Perceptron":
        out = Perceptron(self.freq)
        if self._i == 0:
            return out
        # every (feature, label) ever touched has an entry in _totals
        for (f, label), total in self._totals.items():
            v = self.weights.get(f, {}).get(label, 0.0)
            val = (total + (self._i - self._tstamps[(f, label)]) * v) / self._i
            if val:
                out.weights.setdefault(f, {})[label] = val
        return out


@dataclass
class LabelerModel:
    components: dict[str, Perceptron]
    use_pos: str = "gold"
    epochs: int = 0
    seed: int = 0
    best_epoch: Optional[int] = None
    meta: dict[str, str] = field(default_factory=dict)

    @property
    def component_names(self) -> list[str]:
        return list(self.components)


def _feature_tags(sentence: Sentence, use_pos: str, pos_model: Optional[LabelerModel], tags=None):
    if use_pos == "none":
        return None
    if tags is not None:
        return list(tags)
    if use_pos == "predicted":
        if pos_model is None:
            raise ValueError("use_pos='predicted' needs a PoS model or explicit tags")
        return tag(pos_model, sentence)
    return sentence.tags


def _decode_component(p: Perceptron, static: list[list[str]]) -> list[str]:
    out: list[str] = []
    prev1 = prev2 = BOS
    for feats in static:
        guess = p.predict(feats + history_features(prev1, prev2))
        out.append(guess)
        prev2, prev1 = prev1, guess
    return out


def train(
    corpus: Sequence[tuple[Sentence, Mapping[str, Sequence[str]]]],
    config: TaggerConfig = TaggerConfig(),
    *,
    pos_model: Optional[LabelerModel] = None,
    feature_tags: Optional[Sequence[Sequence[str]]] = None,
    dev_scorer: Optional[Callable[[LabelerModel], float]] = None,
) -> LabelerModel:
    """Train one averaged perceptron per label component.

    ``corpus`` pairs each sentence with ``{component: labels}``.  PoS
    features use ``feature_tags`` (one tag list per sentence) when given,
    otherwise the gold tags or ``pos_model`` predictions.  The
    sentence order is reshuffled every epoch from ``config.seed``.  When
    ``dev_scorer`` is given it is called with the averaged model after every
    epoch and the best-scoring epoch is returned.
    """
    if not corpus:
        raise ValueError("empty training corpus")
    names = list(corpus[0][1])
    if not names:
        raise ValueError("no label components")
    counts = {c: Counter() for c in names}
    static = []
    if feature_tags is not None and len(feature_tags) != len(corpus):
        raise ValueError("feature_tags must hold one tag sequence per sentence")
    for k, (sent, labels) in enumerate(corpus):
        if len(sent) == 0:
            raise ValueError("empty sentence in training corpus")
        if list(labels) != names:
            raise ValueError(f"component mismatch: {list(labels)} vs {names}")
        for c in names:
            if len(labels[c]) != len(sent):
                raise ValueError(f"component {c!r}: {len(labels[c])} labels for {len(sent)} tokens")
            counts[c].update(labels[c])
        given = feature_tags[k] if feature_tags is not None else None
        tags = _feature_tags(sent, config.use_pos, pos_model, given)
        static.append([token_features(sent.forms, tags, i) for i in range(len(sent))])

    learners = {c: Perceptron(counts[c]) for c in names}
    best: Optional[LabelerModel] = None
    best_score = -math.inf
    for epoch in range(1, config.epochs + 1):
        for idx in shuffled(range(len(corpus)), config.seed * 7919 + epoch):
            labels = corpus[idx][1]
            for c in names:
                p = learners[c]
                prev1 = prev2 = BOS
                for feats, gold in zip(static[idx], labels[c]):
                    full = feats + history_features(prev1, prev2)
                    guess = p.predict(full)
                    p.update(gold, guess, full)
                    prev2, prev1 = prev1, guess
        if dev_scorer is not None or epoch == config.epochs:
            model = LabelerModel(
                {c: learners[c].averaged() for c in names},
                use_pos=config.use_pos,
                epochs=config.epochs,
                seed=config.seed,
                best_epoch=epoch,
            )
            if dev_scorer is None:
                return model
            score = dev_scorer(model)
            logger.debug("epoch %d dev score %.4f", epoch, score)
            if score > best_score:
                best, best_score = model, score
    return best


def predict(
    model: LabelerModel,
    sentence: Sentence,
    *,
    tags: Optional[Sequence[str]] = None,
    pos_model: Optional[LabelerModel] = None,
) -> dict[str, list[str]]:
    """Greedy left-to-right labels for every component of ``model``.

    Feature tags come from ``tags`` when given, otherwise from the sentence
    (gold setup) or from ``pos_model`` (predicted setup).
    """
    feature_tags = _feature_tags(sentence, model.use_pos, pos_model, tags)
    static = [token_features(sentence.forms, feature_tags, i) for i in range(len(sentence))]
    return {c: _decode_component(p, static) for c, p in model.components.items()}


def train_pos_tagger(sentences: Sequence[Sentence], epochs: int = 10, seed: int = 1, dev_scorer=None) -> LabelerModel:
    corpus = [(s, {"upos": [t or "_" for t in s.tags]}) for s in sentences]
    return train(corpus, TaggerConfig(epochs=epochs, seed=seed, use_pos="none"), dev_scorer=dev_scorer)


def tag(model: LabelerModel, sentence: Sentence) -> list[str]:
    return predict(model, sentence)["upos"]


def tag_accuracy(model: LabelerModel, sentences: Sequence[Sentence]) -> float:
    total = correct = 0
    for s in sentences:
        for gold, guess in zip(s.tags, tag(model, s)):
            total += 1
            correct += (gold or "_") == guess
    return 100.0 * correct / total if total else 0.0


def save_model(model: LabelerModel, path) -> None:
    """Write a model as a flat tab-separated file (see README for the layout)."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{FORMAT_TAG}\t{FORMAT_VERSION}\n")
        meta = {"use_pos": model.use_pos, "epochs": model.epochs, "seed": model.seed,
                "best_epoch": model.best_epoch, **model.meta}
        for key, value in meta.items():
            if value is not None:
                f.write(f"#meta\t{key}\t{value}\n")
        for c, p in model.components.items():
            f.write(f"#component\t{c}\n")
            for label in p.labels:
                f.write(f"#label\t{c}\t{label}\t{p.freq[label]}\n")
        for c, p in model.components.items():
            for feat in sorted(p.weights):
                for label, w in sorted(p.weights[feat].items()):
                    f.write(f"{c}\t{feat}\t{label}\t{w!r}\n")


def load_model(path) -> LabelerModel:
    with open(path, encoding="utf-8") as f:
        header = f.readline().rstrip("\n").split("\t")
        if header[0] != FORMAT_TAG:
            raise ValueError(f"{path}: not a depseq model file")
        if int(header[1]) != FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported model version {header[1]}")
        meta: dict[str, str] = {}
        labels: dict[str, dict[str, int]] = {}
        weights: dict[str, dict[str, dict[str, float]]] = {}
        for line in f:
            parts = line.rstrip("\n").split("\t")
            if parts[0] == "#meta":
                meta[parts[1]] = parts[2]
            elif parts[0] == "#component":
                labels[parts[1]] = {}
                weights[parts[1]] = {}
            elif parts[0] == "#label":
                labels[parts[1]][parts[2]] = int(parts[3])
            else:
                c, feat, label, w = parts
                weights[c].setdefault(feat, {})[label] = float(w)
    components = {}
    for c in labels:
        p = Perceptron(labels[c])
        p.weights = weights[c]
        components[c] = p
    best = meta.pop("best_epoch", None)
    return LabelerModel(
        components,
        use_pos=meta.pop("use_pos", "gold"),
        epochs=int(meta.pop("epochs", 0)),
        seed=int(meta.pop("seed", 0)),
        best_epoch=int(best) if best is not None else None,
        meta=meta,
    )
