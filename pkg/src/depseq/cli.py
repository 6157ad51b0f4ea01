"""Command-line interface: ``depseq <command> ...``."""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from collections import Counter
from pathlib import Path

from . import evalstats
from .codecs import ENCODINGS, get_encoding
from .conllu import make_sentence, read_conllu, write_conllu
from .labelfile import LabeledSentence, read_labels, write_labels
from .pipeline import (
    ExperimentConfig,
    cells_tsv,
    make_subsets,
    parse_size,
    report_json,
    report_markdown,
    run_experiment,
)
from .synthetic import synthetic_treebank
from .tagger import POS_SETUPS, TaggerConfig, load_model, predict, save_model, tag, tag_accuracy, train, train_pos_tagger

logger = logging.getLogger("depseq")


def _output(path):
    if path in (None, "-"):
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8")


def _rows_to_columns(enc, sentences_rows):
    return [{c: [r[k] for r in rows] for k, c in enumerate(enc.components)} for rows in sentences_rows]


def cmd_encode(args):
    enc = get_encoding(args.encoding)
    sentences = read_conllu(args.input, strict=True)
    out, dropped = [], 0
    for s in sentences:
        rows, lost = enc.encode(s.tree(), s.tags)
        dropped += len(lost)
        out.append(LabeledSentence(s.forms, s.tags, rows))
    with _output(args.output) as f:
        f.write(write_labels(out, enc.name))
    logger.info("%d sentences encoded with %s, %d arcs not encodable", len(out), enc.name, dropped)
    return 0


def cmd_decode(args):
    with open(args.input, encoding="utf-8") as f:
        declared, labeled = read_labels(f.read())
    name = args.encoding or declared
    if not name:
        raise SystemExit("decode: no --encoding given and none declared in the file")
    enc = get_encoding(name)
    sentences = []
    for ls in labeled:
        tree = enc.decode(ls.rows, ls.tags, single_root=args.single_root)
        sentences.append(make_sentence(ls.forms, ls.tags, tree.heads, tree.deprels))
    with _output(args.output) as f:
        f.write(write_conllu(sentences))
    return 0


def cmd_roundtrip(args):
    sentences = read_conllu(args.input, strict=True)
    gold = [s.tree() for s in sentences]
    print("encoding\tuas\tlas\tdropped_arcs\tchanged_sentences")
    for name in args.encodings:
        enc = get_encoding(name)
        pred, dropped, changed = [], 0, 0
        for s, t in zip(sentences, gold):
            rows, lost = enc.encode(t, s.tags)
            back = enc.decode(rows, s.tags)
            pred.append(back)
            dropped += len(lost)
            changed += back != t
        m = evalstats.uas_las(gold, pred)
        print(f"{enc.name}\t{m.uas:.2f}\t{m.las:.2f}\t{dropped}\t{changed}")
    return 0


def cmd_stats(args):
    sentences = read_conllu(args.input)
    trees = [s.tree() for s in sentences]
    print(f"sentences\t{len(sentences)}")
    print(f"tokens\t{sum(len(s) for s in sentences)}")
    print(f"skipped_rows\t{sum(s.skipped for s in sentences)}")
    print(f"nonprojective_pct\t{evalstats.fmt(evalstats.nonprojective_rate(trees))}")
    for name in args.encodings:
        enc = get_encoding(name)
        inventory = Counter()
        for s, t in zip(sentences, trees):
            inventory.update(enc.encode(t, s.tags)[0])
        print(f"labels_{enc.name}\t{len(inventory)}")
    return 0


def cmd_subset(args):
    sentences = read_conllu(args.input)
    subsets = make_subsets(sentences, args.sizes, args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {"source": args.input, "seed": args.seed, "subsets": {}}
    for size, sents in subsets.items():
        path = out_dir / f"{Path(args.input).stem}.{size}.conllu"
        path.write_text(write_conllu(sents), encoding="utf-8")
        manifest["subsets"][str(size)] = {"path": str(path), "sentences": len(sents)}
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return 0


def cmd_train(args):
    sentences = read_conllu(args.train, strict=True)
    dev = read_conllu(args.dev, strict=True) if args.dev else None
    if args.pos:
        scorer = (lambda m: tag_accuracy(m, dev)) if dev else None
        model = train_pos_tagger(sentences, epochs=args.epochs, seed=args.seed, dev_scorer=scorer)
        model.meta["task"] = "pos"
    else:
        if not args.encoding:
            raise SystemExit("train: give --encoding or --pos")
        enc = get_encoding(args.encoding)
        pos_model = load_model(args.pos_model) if args.pos_model else None
        if args.use_pos == "predicted" and pos_model is None:
            raise SystemExit("train: --use-pos predicted needs --pos-model")
        rows = [enc.encode(s.tree(), s.tags)[0] for s in sentences]
        corpus = list(zip(sentences, _rows_to_columns(enc, rows)))
        scorer = None
        if dev:
            gold_dev = [s.tree() for s in dev]
            if pos_model is not None:
                dev = [s.with_tags(tag(pos_model, s)) for s in dev]

            def scorer(m):
                return evalstats.uas_las(gold_dev, _parse(m, enc, dev)).uas

        model = train(corpus, TaggerConfig(args.epochs, args.seed, args.use_pos), pos_model=pos_model, dev_scorer=scorer)
        model.meta["task"] = "parse"
        model.meta["encoding"] = enc.name
    save_model(model, args.model)
    logger.info("model written to %s (best epoch %s)", args.model, model.best_epoch)
    return 0


def _parse(model, enc, sentences):
    """Parse sentences whose UPOS column already holds the tags to use."""
    trees = []
    for s in sentences:
        labels = predict(model, s, tags=None if model.use_pos == "none" else s.tags)
        rows = list(zip(*(labels[c] for c in enc.components)))
        trees.append(enc.decode(rows, s.tags))
    return trees


def cmd_predict(args):
    model = load_model(args.model)
    sentences = read_conllu(args.input)
    if model.meta.get("task") == "pos":
        out = [s.with_tags(tag(model, s)) for s in sentences]
    else:
        enc = get_encoding(model.meta["encoding"])
        pos_model = load_model(args.pos_model) if args.pos_model else None
        if pos_model is not None:
            sentences = [s.with_tags(tag(pos_model, s)) for s in sentences]
        if args.labels:
            labeled = []
            for s in sentences:
                labels = predict(model, s, tags=None if model.use_pos == "none" else s.tags)
                rows = list(zip(*(labels[c] for c in enc.components)))
                labeled.append(LabeledSentence(s.forms, s.tags, rows))
            with open(args.labels, "w", encoding="utf-8") as f:
                f.write(write_labels(labeled, enc.name))
        trees = _parse(model, enc, sentences)
        out = [s.with_tree(t) for s, t in zip(sentences, trees)]
    with _output(args.output) as f:
        f.write(write_conllu(out))
    return 0


def cmd_eval(args):
    gold = read_conllu(args.gold, strict=True)
    pred = read_conllu(args.pred)
    if len(gold) != len(pred):
        raise SystemExit(f"eval: {len(gold)} gold vs {len(pred)} predicted sentences")
    m = evalstats.uas_las([s.tree() for s in gold], [s.tree() for s in pred], exclude_punct=args.exclude_punct)
    tags = [(g.upos, p.upos) for gs, ps in zip(gold, pred) for g, p in zip(gs.tokens, ps.tokens)]
    print(f"tokens\t{m.token_count}")
    print(f"uas\t{evalstats.fmt(m.uas)}")
    print(f"las\t{evalstats.fmt(m.las)}")
    print(f"upos_accuracy\t{evalstats.fmt(100.0 * sum(g == p for g, p in tags) / len(tags))}")
    return 0


def cmd_experiment(args):
    config = ExperimentConfig(
        train=args.train,
        dev=args.dev,
        test=args.test,
        encodings=args.encodings,
        setups=args.setups,
        sizes=args.sizes,
        seed=args.seed,
        epochs=args.epochs,
        oracle=args.oracle,
        jobs=args.jobs,
        timing=args.timing,
    )
    report = run_experiment(config)
    with _output(args.output) as f:
        f.write(report_json(report))
    if args.tsv:
        with open(args.tsv, "w", encoding="utf-8") as f:
            f.write(cells_tsv(report))
    if args.markdown:
        with open(args.markdown, "w", encoding="utf-8") as f:
            f.write(report_markdown(report))
    return 0


def cmd_synthetic(args):
    sentences = synthetic_treebank(args.size, seed=args.seed, nonprojective_share=args.nonprojective_share)
    with _output(args.output) as f:
        f.write(write_conllu(sentences))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="depseq", description="Dependency parsing as sequence labeling.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    names = list(ENCODINGS)

    p = sub.add_parser("encode", help="CoNLL-U -> encoded label file")
    p.add_argument("input")
    p.add_argument("-e", "--encoding", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="encoded label file -> CoNLL-U")
    p.add_argument("input")
    p.add_argument("-e", "--encoding")
    p.add_argument("-o", "--output")
    p.add_argument("--single-root", action="store_true", help="keep only the first root child")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("roundtrip", help="encode and decode gold trees, report losses")
    p.add_argument("input")
    p.add_argument("-e", "--encodings", nargs="+", default=names)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("stats", help="treebank statistics")
    p.add_argument("input")
    p.add_argument("-e", "--encodings", nargs="+", default=names)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("subset", help="write nested shuffled training subsets")
    p.add_argument("input")
    p.add_argument("--sizes", nargs="+", type=parse_size, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_subset)

    p = sub.add_parser("train", help="train a parser (one encoding) or a PoS tagger")
    p.add_argument("--train", required=True)
    p.add_argument("--dev")
    p.add_argument("-e", "--encoding")
    p.add_argument("--pos", action="store_true", help="train a PoS tagger instead of a parser")
    p.add_argument("--use-pos", choices=POS_SETUPS, default="gold")
    p.add_argument("--pos-model", help="PoS tagger for --use-pos predicted")
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="tag or parse a CoNLL-U file with a trained model")
    p.add_argument("input")
    p.add_argument("--model", required=True)
    p.add_argument("--pos-model", help="tag the input first (tags feed features and rph decoding)")
    p.add_argument("--labels", help="also write the predicted label file here")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="UAS/LAS of a prediction against gold")
    p.add_argument("gold")
    p.add_argument("pred")
    p.add_argument("--exclude-punct", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("experiment", help="run the size x setup x encoding matrix")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--dev")
    p.add_argument("-e", "--encodings", nargs="+", default=names)
    p.add_argument("--setups", nargs="+", choices=POS_SETUPS, default=list(POS_SETUPS))
    p.add_argument("--sizes", nargs="+", type=parse_size, default=["all"])
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--oracle", action="store_true", help="score decode(encode(gold)) instead of trained models")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="add wall-clock seconds to each cell")
    p.add_argument("-o", "--output", help="JSON report (default stdout)")
    p.add_argument("--tsv")
    p.add_argument("--markdown")
    p.set_defaults(func=cmd_experiment)
    p = sub.add_parser("synthetic", help="write a toy treebank for smoke tests")
    p.add_argument("--size", type=int, default=50)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--nonprojective-share", type=float, default=0.25)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_synthetic)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
