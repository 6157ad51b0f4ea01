import json
import logging

import pytest

from depseq.conllu import make_sentence
from depseq.pipeline import (
    ALL,
    ExperimentConfig,
    cells_tsv,
    make_subsets,
    parse_size,
    report_json,
    report_markdown,
    run_experiment,
)
from depseq.rng import SplitMix64, shuffled
from depseq.synthetic import synthetic_treebank

from helpers import EX_DEPRELS, EX_FORMS, EX_HEADS, EX_TAGS


def example_sentence():
    return make_sentence(EX_FORMS, EX_TAGS, EX_HEADS, EX_DEPRELS)


class TestRng:
    def test_reference_values(self):
        # first outputs of SplitMix64 seeded with 0
        g = SplitMix64(0)
        assert [g.next() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]

    def test_shuffle_is_permutation_and_stable(self):
        items = list(range(50))
        a = shuffled(items, 9)
        assert sorted(a) == items and a == shuffled(items, 9) and a != shuffled(items, 10)
        assert items == list(range(50))

    def test_below_bounds(self):
        g = SplitMix64(3)
        assert all(0 <= g.below(7) < 7 for _ in range(1000))


class TestSubsets:
    def test_prefix_of_shuffle(self):
        train = synthetic_treebank(3)
        a = make_subsets(train, [2], seed=4)
        b = make_subsets(train, [2], seed=4)
        assert a == b
        assert a[2] == shuffled(train, 4)[:2]

    def test_full_size_is_shuffled_set(self):
        train = synthetic_treebank(5)
        subs = make_subsets(train, [5, ALL], seed=1)
        assert subs[5] == subs[ALL] == shuffled(train, 1)

    def test_nested(self):
        train = synthetic_treebank(30)
        subs = make_subsets(train, [5, 10, 20], seed=2)
        assert subs[10][:5] == subs[5] and subs[20][:10] == subs[10]

    def test_oversize_clamps_with_warning(self, caplog):
        train = synthetic_treebank(3)
        with caplog.at_level(logging.WARNING):
            subs = make_subsets(train, [10], seed=1)
        assert len(subs[10]) == 3 and "exceeds" in caplog.text

    @pytest.mark.parametrize("bad", [0, -1, "half"])
    def test_bad_sizes(self, bad):
        with pytest.raises(ValueError):
            make_subsets(synthetic_treebank(3), [bad], seed=1)

    def test_empty_train(self):
        with pytest.raises(ValueError):
            make_subsets([], [1], seed=1)

    def test_parse_size(self):
        assert parse_size("all") == ALL and parse_size("100") == 100


def small_config(**kw):
    base = dict(train=synthetic_treebank(30, seed=1), test=synthetic_treebank(8, seed=2), epochs=2)
    base.update(kw)
    return ExperimentConfig(**base)


class TestExperiment:
    def test_smoke_single_cell(self):
        tb = synthetic_treebank(3, seed=7)
        rep = run_experiment(ExperimentConfig(tb, tb, encodings=["rp^h"], setups=["gold"], epochs=2))
        [cell] = rep["cells"]
        assert cell["status"] == "ok" and cell["encoding"] == "rph"
        assert 0.0 <= cell["uas"] <= 100.0
        assert cell["coverage"]["joint"] <= 100.0

    def test_full_matrix_present(self):
        rep = run_experiment(small_config(sizes=[10, ALL]))
        keys = {(c["size"], c["setup"], c["encoding"]) for c in rep["cells"]}
        assert len(keys) == 2 * 3 * 5
        assert all(c["status"] == "ok" for c in rep["cells"])
        assert set(rep["tagger_accuracy"]) == {"10", "all"}
        for c in rep["cells"]:
            assert ("tag_accuracy" in c) == (c["setup"] != "gold")
            assert "seconds" not in c
            if c["encoding"] != "rph":
                assert "vs_reference" in c

    def test_deterministic(self):
        assert report_json(run_experiment(small_config())) == report_json(run_experiment(small_config()))

    def test_cells_independent_of_other_encodings(self):
        full = run_experiment(small_config(setups=["gold", "none"]))
        solo = run_experiment(small_config(setups=["gold", "none"], encodings=["ctb"]))
        pick = lambda rep: {(c["setup"]): (c["uas"], c["las"]) for c in rep["cells"] if c["encoding"] == "ctb"}
        assert pick(full) == pick(solo)

    def test_parallel_matches_serial(self):
        cfg = dict(setups=["gold"], encodings=["rph", "rxb"])
        serial = run_experiment(small_config(**cfg))
        parallel = run_experiment(small_config(jobs=2, **cfg))
        assert report_json(serial) == report_json(parallel)

    def test_timing_opt_in(self):
        rep = run_experiment(small_config(setups=["gold"], encodings=["rph"], timing=True))
        assert rep["cells"][0]["seconds"] >= 0
        assert "timing" not in rep["config"]

    def test_failed_cell_isolated(self, monkeypatch):
        import depseq.pipeline as pl

        real = pl.run_cell

        def flaky(cell):
            if cell.encoding == "rxb":
                raise RuntimeError("boom")
            return real(cell)

        monkeypatch.setattr(pl, "run_cell", flaky)
        rep = run_experiment(small_config(setups=["gold"]))
        status = {c["encoding"]: c["status"] for c in rep["cells"]}
        assert status.pop("rxb") == "failed"
        assert set(status.values()) == {"ok"}
        failed = next(c for c in rep["cells"] if c["status"] == "failed")
        assert "boom" in failed["reason"]
        assert "boom" in cells_tsv(rep)

    def test_dev_epoch_selection(self):
        rep = run_experiment(small_config(dev=synthetic_treebank(5, seed=3), setups=["gold"], encodings=["rph"], epochs=3))
        assert 1 <= rep["cells"][0]["best_epoch"] <= 3

    def test_bad_config(self):
        with pytest.raises(ValueError):
            small_config(setups=["silver"])
        with pytest.raises(ValueError):
            small_config(encodings=["xyz"])

    def test_report_renderings(self):
        rep = run_experiment(small_config(sizes=[10, ALL]))
        json.loads(report_json(rep))
        md = report_markdown(rep)
        assert "UAS difference vs rph (gold PoS)" in md
        assert "PoS tagger accuracy" in md and "Non-projective" in md
        tsv = cells_tsv(rep).splitlines()
        assert len(tsv) == 1 + 30


class TestOracle:
    def treebank(self):
        return synthetic_treebank(40, seed=11) + [example_sentence()]

    def test_ceiling(self):
        tb = self.treebank()
        rep = run_experiment(ExperimentConfig(tb, tb, oracle=True))
        cells = {c["encoding"]: c for c in rep["cells"]}
        assert rep["treebank"]["nonprojective_test"] > 0
        for name in ("rph", "ctb"):
            assert cells[name]["uas"] == 100.0
        assert cells["ahtb"]["uas"] < 100.0
        for c in cells.values():
            assert (c["uas"] == 100.0) == (c["dropped_arcs_test"] == 0)

    def test_ahtb_deficit_equals_dropped(self):
        tb = self.treebank()
        [cell] = run_experiment(ExperimentConfig(tb, tb, oracle=True, encodings=["ahtb"]))["cells"]
        tokens = sum(len(s) for s in tb)
        assert cell["uas"] == pytest.approx(100.0 * (tokens - cell["dropped_arcs_test"]) / tokens)

    def test_projective_only_is_perfect_everywhere(self):
        tb = synthetic_treebank(40, seed=11, nonprojective_share=0.0)
        rep = run_experiment(ExperimentConfig(tb, tb, oracle=True))
        assert rep["treebank"]["nonprojective_test"] == 0.0
        assert all(c["uas"] == 100.0 for c in rep["cells"])
