"""Acceptance criteria, one test each.

Every test records a single ``PASS``/``FAIL`` line; the lines are printed in
the pytest terminal summary (see conftest.py).  Run just these with
``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import itertools
import json
import os
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from depseq.cli import main as cli_main  # noqa: E402
from depseq.codecs import ENCODINGS, get_encoding  # noqa: E402
from depseq.conllu import make_sentence, read_conllu, save_conllu  # noqa: E402
from depseq.deptree import DepTree, assign_planes, enumerate_trees, find_cycle, is_projective  # noqa: E402
from depseq.evalstats import coverage_by_component, fmt, markdown_table, nonprojective_rate, paired_ttest, uas_las  # noqa: E402
from depseq.pipeline import ExperimentConfig, run_experiment  # noqa: E402
from depseq.synthetic import synthetic_treebank  # noqa: E402
from depseq.tagger import tag_accuracy, train_pos_tagger  # noqa: E402

from helpers import (  # noqa: E402
    EX_DEPRELS,
    EX_FORMS,
    EX_HEADS,
    EX_ROWS,
    EX_TAGS,
    brute_projective,
    example_tree,
    random_projective_tree,
    random_tree,
)

VERDICTS: list[str] = []

UD_TRAIN = os.environ.get("DEPSEQ_UD_TRAIN")
UD_TEST = os.environ.get("DEPSEQ_UD_TEST")


def verdict(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    VERDICTS.append(line)
    assert ok, line


def roundtrip_failures(tree, tags):
    """Encodings violating their round-trip guarantee on this tree."""
    bad = []
    projective = is_projective(tree)
    planes_ok = not assign_planes(tree).dropped
    for name, enc in ENCODINGS.items():
        rows, dropped = enc.encode(tree, tags)
        exact = enc.decode(rows, tags) == tree
        must = (
            name in ("rph", "ctb")
            or projective
            or (name == "2pb" and planes_ok)
            or (name == "rxb" and not dropped)
        )
        if (must and not exact) or exact == bool(dropped):
            bad.append(name)
    return bad


def test_1_golden_labels():
    start = time.perf_counter()
    mismatches = []
    for name, enc in ENCODINGS.items():
        rows, _ = enc.encode(example_tree(), EX_TAGS)
        got = [r[:-1] if len(r) > 2 else r[0] for r in rows]
        if got != EX_ROWS[name]:
            mismatches.append(name)
    elapsed = time.perf_counter() - start
    verdict(1, not mismatches and elapsed < 1.0,
            f"example rows string-exact for 5 encodings (mismatches={mismatches}, {elapsed:.3f}s < 1s)")


def test_2_exhaustive_roundtrip():
    start = time.perf_counter()
    trees = failures = 0
    for n in range(1, 5):
        for t in enumerate_trees(n):
            t = DepTree(t.heads, tuple("root" if h == 0 else f"r{d}" for d, h in enumerate(t.heads, 1)))
            trees += 1
            for tags in itertools.product("AB", repeat=n):
                failures += bool(roundtrip_failures(t, list(tags)))
    elapsed = time.perf_counter() - start
    verdict(2, trees == 145 and failures == 0 and elapsed < 30.0,
            f"{trees} trees x 2-tag assignments, {failures} failures, {elapsed:.2f}s < 30s")


def test_3_random_roundtrip():
    rng = random.Random(20240601)
    failures, nonproj = [], 0
    for k in range(1000):
        n = rng.randint(1, 12)
        t = random_tree(rng, n) if k % 2 else random_projective_tree(rng, n)
        nonproj += not is_projective(t)
        tags = [rng.choice("AB") for _ in range(n)]
        if roundtrip_failures(t, tags):
            failures.append(t.heads)
    verdict(3, not failures, f"1000 seeded trees n<=12 ({nonproj} non-projective), {len(failures)} failures")


def test_4_archybrid_lossiness():
    rows, dropped = get_encoding("ahtb").encode(example_tree())
    heads = get_encoding("ahtb").decode(rows).heads
    ok = dropped == {(3, 5)} and heads == (2, 4, 4, 0, 0)
    verdict(4, ok, f"ah^tb drops {sorted(dropped)} (count {len(dropped)}), replayed heads {list(heads)}")


def _fuzz_cell(rng, name):
    if name == "rph":
        if rng.random() < 0.7:
            sign = rng.choice("+-")
            return f"{sign}{rng.randint(0, 16)}@{rng.choice(['A', 'B', 'ROOT', 'C'])}"
        return "".join(rng.choice("+-0123456789@ABROT") for _ in range(rng.randint(0, 6)))
    if name in ("rxb", "2pb"):
        symbols = "<>/\\." + ("*" if name == "2pb" else "")
        return "".join(rng.choice(symbols) for _ in range(rng.randint(1, 6)))
    if rng.random() < 0.8:
        parts = [rng.choice(["SH", "LA", "RA", "NOARC"]) for _ in range(rng.randint(1, 6))]
        if rng.random() < 0.7:
            parts[0] = "SH"
        return "_".join(parts)
    return "".join(rng.choice("SHLARNOC_x") for _ in range(rng.randint(0, 8)))


def test_5_decode_totality_fuzz():
    start = time.perf_counter()
    rng = random.Random(7)
    failures = 0
    for name, enc in ENCODINGS.items():
        width = len(enc.components) - 1
        for _ in range(10_000):
            n = rng.randint(1, 15)
            rows = [tuple(_fuzz_cell(rng, name) for _ in range(width)) + (rng.choice(["dep", "obj", "_"]),)
                    for _ in range(n)]
            tags = [rng.choice("AB") for _ in range(n)]
            try:
                t = enc.decode(rows, tags)
                ok = (
                    t.n == n
                    and find_cycle(t.heads) is None
                    and all(0 <= h <= n and h != i for i, h in enumerate(t.heads, 1))
                )
            except Exception:
                ok = False
            failures += not ok
    elapsed = time.perf_counter() - start
    verdict(5, failures == 0 and elapsed < 30.0,
            f"5 x 10000 fuzzed label sequences, {failures} failures, {elapsed:.2f}s < 30s")


def test_6_statistics_oracles():
    r = paired_ttest([1, 2, 3], [0, 0, 0])
    ttest_ok = abs(r.t - 3.4641) <= 1e-4 and abs(r.p - 0.0742) <= 5e-4

    rng = random.Random(6)
    uas_ok = True
    for _ in range(100):
        gold, pred = [], []
        for _ in range(rng.randint(1, 5)):
            n = rng.randint(1, 10)
            gold.append(random_tree(rng, n))
            pred.append(random_tree(rng, n))
        pairs = [(g.heads[k], p.heads[k], g.deprels[k], p.deprels[k]) for g, p in zip(gold, pred) for k in range(g.n)]
        u = sum(gh == ph for gh, ph, _, _ in pairs)
        l_ = sum(gh == ph and gr == pr for gh, ph, gr, pr in pairs)
        m = uas_las(gold, pred)
        uas_ok &= m.uas == 100.0 * u / len(pairs) and m.las == 100.0 * l_ / len(pairs)

    trees = [t for n in range(1, 6) for t in enumerate_trees(n)]
    brute = 100.0 * sum(not brute_projective(t.heads) for t in trees) / len(trees)
    np_ok = nonprojective_rate(trees) == brute and all(
        nonprojective_rate([t]) == (0.0 if brute_projective(t.heads) else 100.0) for t in trees
    )
    verdict(6, ttest_ok and uas_ok and np_ok,
            f"t={r.t:.4f} p={r.p:.4f}; UAS/LAS brute force {'ok' if uas_ok else 'mismatch'}; "
            f"non-projective rate {'ok' if np_ok else 'mismatch'} on {len(trees)} trees")


def test_7_end_to_end_determinism(tmp_path):
    sentences = synthetic_treebank(50, seed=1)
    train, test = tmp_path / "train.conllu", tmp_path / "test.conllu"
    save_conllu(sentences[:40], train)
    save_conllu(sentences[40:], test)
    start = time.perf_counter()
    outputs = []
    for k in range(2):
        out = tmp_path / f"report{k}.json"
        cli_main(["experiment", "--train", str(train), "--test", str(test), "--seed", "3", "-o", str(out)])
        outputs.append(out.read_bytes())
    elapsed = time.perf_counter() - start
    cells = json.loads(outputs[0])["cells"]
    complete = len(cells) == 15 and all(c["status"] == "ok" for c in cells)
    verdict(7, outputs[0] == outputs[1] and complete and elapsed < 120.0,
            f"two runs of 5 encodings x 3 setups byte-identical={outputs[0] == outputs[1]}, "
            f"{len(cells)} cells, {elapsed:.1f}s < 120s")


def test_8_oracle_ceiling():
    example = make_sentence(EX_FORMS, EX_TAGS, EX_HEADS, EX_DEPRELS)
    mixed = synthetic_treebank(60, seed=8) + [example]
    projective = synthetic_treebank(60, seed=8, nonprojective_share=0.0)

    def ceiling(tb):
        rep = run_experiment(ExperimentConfig(tb, tb, oracle=True))
        return rep["treebank"]["nonprojective_test"], {c["encoding"]: c["uas"] for c in rep["cells"]}

    np_mixed, mixed_uas = ceiling(mixed)
    np_proj, proj_uas = ceiling(projective)
    ok = (
        np_mixed > 0 and np_proj == 0
        and mixed_uas["rph"] == mixed_uas["ctb"] == 100.0
        and proj_uas["rph"] == proj_uas["ctb"] == 100.0
        and mixed_uas["ahtb"] < 100.0
        and proj_uas["ahtb"] == 100.0
    )
    verdict(8, ok, f"mixed ({np_mixed:.1f}% non-proj): {mixed_uas}; projective: ahtb {proj_uas['ahtb']}")


@pytest.mark.skipif(not (UD_TRAIN and UD_TEST), reason="set DEPSEQ_UD_TRAIN and DEPSEQ_UD_TEST to a UD treebank")
def test_9_ud_coverage():
    train = read_conllu(UD_TRAIN)
    test = read_conllu(UD_TEST)
    coverage = {}
    for name, enc in ENCODINGS.items():
        flat = lambda sents: [r for s in sents for r in enc.encode(s.tree(), [t or "_" for t in s.tags])[0]]
        coverage[name] = coverage_by_component(flat(train), flat(test), enc.components)["joint"]
    ok = all(v > 95.0 for v in coverage.values())
    line = f"{'PASS' if ok else 'FAIL'} criterion 9: joint label coverage {{{', '.join(f'{k}: {v:.2f}' for k, v in coverage.items())}}} (> 95)"
    VERDICTS.append(line)
    pos = train_pos_tagger(train, epochs=5)
    VERDICTS.append(markdown_table(["encoding", "joint coverage"], [[k, fmt(v)] for k, v in coverage.items()]))
    VERDICTS.append(markdown_table(["tagger", "accuracy"], [["upos (full train)", fmt(tag_accuracy(pos, test))]]))
    VERDICTS.append(markdown_table(
        ["split", "non-projective %"],
        [[name, fmt(nonprojective_rate([s.tree() for s in split]))] for name, split in (("train", train), ("test", test))],
    ))
    if not ok:
        pytest.xfail("non-blocking trend check: " + line)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
