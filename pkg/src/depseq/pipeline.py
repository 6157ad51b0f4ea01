"""Experiment orchestration over nested training subsets and the
setup x encoding run matrix."""

from __future__ import annotations

import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, Union

from . import evalstats
from .codecs import ENCODINGS, get_encoding
from .conllu import Sentence, read_conllu
from .rng import shuffled
from .tagger import POS_SETUPS, TaggerConfig, predict, tag, tag_accuracy, train, train_pos_tagger

logger = logging.getLogger(__name__)

ALL = "all"
REFERENCE = "rph"
Size = Union[int, str]
Treebank = Union[str, Sequence[Sentence], None]


def make_subsets(train_set: Sequence[Sentence], sizes: Sequence[Size], seed: int) -> dict[Size, list[Sentence]]:
    """Shuffle once, then take prefixes: smaller subsets nest in larger ones."""
    if not train_set:
        raise ValueError("empty training set")
    order = shuffled(train_set, seed)
    out = {}
    for size in sizes:
        if size == ALL:
            out[size] = order
            continue
        if not isinstance(size, int) or size < 1:
            raise ValueError(f"subset size must be a positive integer or {ALL!r}, not {size!r}")
        if size > len(order):
            logger.warning("subset size %d exceeds %d training sentences; using all", size, len(order))
        out[size] = order[:size]
    return out


def parse_size(text: str) -> Size:
    return ALL if text == ALL else int(text)


@dataclass
class ExperimentConfig:
    train: Treebank
    test: Treebank
    dev: Treebank = None
    encodings: list[str] = field(default_factory=lambda: list(ENCODINGS))
    setups: list[str] = field(default_factory=lambda: list(POS_SETUPS))
    sizes: list[Size] = field(default_factory=lambda: [ALL])
    seed: int = 1
    epochs: int = 10
    oracle: bool = False
    jobs: int = 1
    timing: bool = False

    def __post_init__(self):
        self.encodings = [get_encoding(e).name for e in self.encodings]
        for s in self.setups:
            if s not in POS_SETUPS:
                raise ValueError(f"unknown PoS setup {s!r}")

    def describe(self) -> dict:
        def source(tb):
            if tb is None or isinstance(tb, str):
                return tb
            return f"<{len(tb)} sentences>"

        out = asdict(self)
        for key in ("train", "dev", "test"):
            out[key] = source(getattr(self, key))
        out.pop("jobs")
        out.pop("timing")
        return out


def _load(tb: Treebank) -> Optional[list[Sentence]]:
    if tb is None:
        return None
    if isinstance(tb, str):
        return read_conllu(tb, strict=True)
    return list(tb)


@dataclass
class _CellData:
    size: Size
    setup: str
    encoding: str
    train: list[Sentence]
    dev: Optional[list[Sentence]]
    test: list[Sentence]
    # predicted PoS tags per split (None in the gold setup)
    train_tags: Optional[list[list[str]]]
    dev_tags: Optional[list[list[str]]]
    test_tags: Optional[list[list[str]]]
    epochs: int
    seed: int
    timing: bool


def _decode_all(enc, predictions, tags):
    trees = []
    for k, pred in enumerate(predictions):
        rows = list(zip(*(pred[c] for c in enc.components)))
        trees.append(enc.decode(rows, tags[k] if tags is not None else None))
    return trees


def run_cell(cell: _CellData) -> dict:
    """Encode, train, predict, decode and score one (size, setup, encoding)."""
    start = time.perf_counter()
    enc = ENCODINGS[cell.encoding]
    use_pos = cell.setup
    gold_tags = lambda sents: [s.tags for s in sents]

    def feature_tags(sents, predicted):
        if use_pos == "gold":
            return gold_tags(sents)
        if use_pos == "predicted":
            return predicted
        return None

    def decode_tags(sents, predicted):
        if not enc.needs_tags:
            return None
        return gold_tags(sents) if use_pos == "gold" else predicted

    train_rows = []
    dropped_train = 0
    for s in cell.train:
        rows, dropped = enc.encode(s.tree(), s.tags)
        train_rows.append(rows)
        dropped_train += len(dropped)
    corpus = [
        (s, {c: [r[k] for r in rows] for k, c in enumerate(enc.components)})
        for s, rows in zip(cell.train, train_rows)
    ]

    def run(model, sents, predicted_tags):
        ftags = feature_tags(sents, predicted_tags)
        preds = [
            predict(model, s, tags=ftags[k] if ftags is not None else None)
            for k, s in enumerate(sents)
        ]
        return _decode_all(enc, preds, decode_tags(sents, predicted_tags))

    dev_scorer = None
    if cell.dev:
        gold_dev = [s.tree() for s in cell.dev]
        dev_scorer = lambda m: evalstats.uas_las(gold_dev, run(m, cell.dev, cell.dev_tags)).uas

    model = train(
        corpus,
        TaggerConfig(epochs=cell.epochs, seed=cell.seed, use_pos=use_pos),
        feature_tags=feature_tags(cell.train, cell.train_tags),
        dev_scorer=dev_scorer,
    )
    gold_test = [s.tree() for s in cell.test]
    pred_test = run(model, cell.test, cell.test_tags)
    metrics = evalstats.uas_las(gold_test, pred_test)

    test_rows = [enc.encode(t, s.tags)[0] for t, s in zip(gold_test, cell.test)]
    flat_train = [r for rows in train_rows for r in rows]
    flat_test = [r for rows in test_rows for r in rows]
    result = {
        "size": cell.size,
        "setup": cell.setup,
        "encoding": cell.encoding,
        "status": "ok",
        **metrics.as_dict(),
        "coverage": evalstats.coverage_by_component(flat_train, flat_test, enc.components),
        "dropped_arcs_train": dropped_train,
        "train_sentences": len(cell.train),
        "best_epoch": model.best_epoch,
        "sentence_uas": evalstats.sentence_uas(gold_test, pred_test),
    }
    if cell.timing:
        result["seconds"] = round(time.perf_counter() - start, 3)
    return result


def _safe_cell(cell: _CellData) -> dict:
    try:
        return run_cell(cell)
    except Exception as exc:  # isolate failures: the other cells still run
        logger.exception("cell %s/%s/%s failed", cell.size, cell.setup, cell.encoding)
        return {"size": cell.size, "setup": cell.setup, "encoding": cell.encoding,
                "status": "failed", "reason": f"{type(exc).__name__}: {exc}"}


def oracle_cell(test: Sequence[Sentence], encoding: str) -> dict:
    """Score decode(encode(gold)) with gold tags: the encoding's ceiling."""
    enc = get_encoding(encoding)
    gold, pred, dropped = [], [], 0
    for s in test:
        tree = s.tree()
        rows, lost = enc.encode(tree, s.tags)
        gold.append(tree)
        pred.append(enc.decode(rows, s.tags))
        dropped += len(lost)
    metrics = evalstats.uas_las(gold, pred)
    return {"size": ALL, "setup": "oracle", "encoding": enc.name, "status": "ok",
            **metrics.as_dict(), "dropped_arcs_test": dropped}


def _add_significance(cells: list[dict]) -> None:
    ref = {(c["size"], c["setup"]): c for c in cells if c["encoding"] == REFERENCE and c["status"] == "ok"}
    for c in cells:
        base = ref.get((c["size"], c["setup"]))
        if c["encoding"] == REFERENCE or base is None or c["status"] != "ok" or "sentence_uas" not in c:
            continue
        if len(c["sentence_uas"]) < 2:
            continue
        res = evalstats.paired_ttest(c["sentence_uas"], base["sentence_uas"])
        c["vs_reference"] = {
            "uas_diff": c["uas"] - base["uas"],
            "t": None if math.isnan(res.t) else res.t,
            "p": None if math.isnan(res.p) else res.p,
            "significant": res.significant,
        }


def run_experiment(config: ExperimentConfig) -> dict:
    """Run every configured cell and assemble a JSON-serializable report."""
    train_set = _load(config.train)
    test = _load(config.test)
    dev = _load(config.dev)
    report: dict = {
        "config": config.describe(),
        "treebank": {
            "train_sentences": len(train_set),
            "test_sentences": len(test),
            "nonprojective_train": evalstats.nonprojective_rate([s.tree() for s in train_set]),
            "nonprojective_test": evalstats.nonprojective_rate([s.tree() for s in test]),
        },
    }

    if config.oracle:
        report["cells"] = [oracle_cell(test, e) for e in config.encodings]
        return report

    subsets = make_subsets(train_set, config.sizes, config.seed)
    needs_tagger = any(s != "gold" for s in config.setups)
    tagger_accuracy = {}
    specs = []
    for size in config.sizes:
        sub = subsets[size]
        predicted = (None, None, None)
        if needs_tagger:
            dev_scorer = (lambda m: tag_accuracy(m, dev)) if dev else None
            pos_model = train_pos_tagger(sub, epochs=config.epochs, seed=config.seed, dev_scorer=dev_scorer)
            tagger_accuracy[str(size)] = tag_accuracy(pos_model, test)
            predicted = tuple(
                [tag(pos_model, s) for s in split] if split is not None else None
                for split in (sub, dev, test)
            )
        for setup in config.setups:
            for encoding in config.encodings:
                tags = predicted if setup != "gold" else (None, None, None)
                specs.append(_CellData(size, setup, encoding, sub, dev, test, *tags,
                                       config.epochs, config.seed, config.timing))

    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            cells = list(pool.map(_safe_cell, specs))
    else:
        cells = [_safe_cell(spec) for spec in specs]
    for c in cells:
        if c["status"] == "ok" and c["setup"] != "gold":
            c["tag_accuracy"] = tagger_accuracy[str(c["size"])]
    _add_significance(cells)
    report["tagger_accuracy"] = tagger_accuracy
    report["cells"] = cells
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def cells_tsv(report: dict) -> str:
    header = ["size", "setup", "encoding", "status", "uas", "las", "coverage", "dropped_arcs", "p_vs_rph"]
    lines = ["\t".join(header)]
    for c in report["cells"]:
        if c["status"] != "ok":
            lines.append("\t".join([str(c["size"]), c["setup"], c["encoding"], c["status"], "", "", "", "", c["reason"]]))
            continue
        p = c.get("vs_reference", {}).get("p")
        lines.append("\t".join([
            str(c["size"]), c["setup"], c["encoding"], c["status"],
            evalstats.fmt(c["uas"]), evalstats.fmt(c["las"]),
            evalstats.fmt(c.get("coverage", {}).get("joint")),
            str(c.get("dropped_arcs_train", c.get("dropped_arcs_test", ""))),
            "" if p is None else f"{p:.4f}",
        ]))
    return "\n".join(lines) + "\n"


def report_markdown(report: dict) -> str:
    """Difference tables per setup, tagger accuracy and non-projectivity."""
    parts = []
    ok = [c for c in report["cells"] if c["status"] == "ok"]
    for setup in dict.fromkeys(c["setup"] for c in ok):
        results = {(c["size"], c["encoding"]): c["uas"] for c in ok if c["setup"] == setup}
        if any(enc == REFERENCE for _, enc in results):
            sizes_with_ref = {s for s, e in results if e == REFERENCE}
            results = {k: v for k, v in results.items() if k[0] in sizes_with_ref}
            table = evalstats.diff_table(results, REFERENCE)
            parts.append(f"UAS difference vs {REFERENCE} ({setup} PoS)\n\n" + table.to_markdown())
        else:
            rows = [[str(s), e, evalstats.fmt(u)] for (s, e), u in results.items()]
            parts.append(f"UAS ({setup})\n\n" + evalstats.markdown_table(["size", "encoding", "uas"], rows))
    if report.get("tagger_accuracy"):
        rows = [[s, evalstats.fmt(a)] for s, a in report["tagger_accuracy"].items()]
        parts.append("PoS tagger accuracy\n\n" + evalstats.markdown_table(["size", "accuracy"], rows))
    tb = report["treebank"]
    parts.append("Non-projective sentences (%)\n\n" + evalstats.markdown_table(
        ["split", "non-projective"],
        [["train", evalstats.fmt(tb["nonprojective_train"])], ["test", evalstats.fmt(tb["nonprojective_test"])]],
    ))
    return "\n".join(parts)
