from __future__ import annotations

import numpy as np
import pytest

from sayable import resources, simulator
from sayable.alternatives import SynonymSource
from sayable.classifier import Label, TrainingConfig, TriggerModel
from sayable.errors import (
    EmptyCorpus,
    EmptyTestSet,
    MissingColumn,
    MissingFile,
    MixedScenarios,
    OutOfVocabulary,
    TooFewWords,
)
from sayable.feedback import UserModel, init_user_model
from sayable.simulator import (
    ContainsPhonemeSequence,
    ContainsSubstring,
    Corpus,
    PatternExpr,
    Scenario,
    SecondLetterIn,
    SecondPhonemeIn,
    SimulationConfig,
    StartsConsonantThenRPhoneme,
    StartsWithGrapheme,
    StartsWithLetterIn,
    UserProfile,
    aggregate,
    evaluate,
    load_corpus,
    load_profiles,
    oracle_label,
    run_simulation,
    split_train_test,
)


@pytest.fixture(scope="module")
def profiles():
    return load_profiles(resources.bundled_profiles_path())


@pytest.fixture(scope="module")
def by_id(profiles):
    return {p.id: p for p in profiles}


class TestPatterns:
    def test_consonant_then_r(self, full_dict):
        pattern = StartsConsonantThenRPhoneme()
        assert pattern.matches("graph", full_dict.lookup("graph"))
        assert not pattern.matches("regular", full_dict.lookup("regular"))
        # ER is a vowel, not the R consonant
        assert not pattern.matches("circle", full_dict.lookup("circle"))

    def test_starts_with_grapheme(self):
        pattern = StartsWithGrapheme(("st", "fl"))
        assert pattern.matches("street", ())
        assert pattern.matches("flood", ())
        assert not pattern.matches("nostalgia", ())

    def test_second_letter_in(self):
        pattern = SecondLetterIn(("r", "l"))
        assert pattern.matches("crisp", ())
        assert pattern.matches("alaska", ())
        assert not pattern.matches("about", ())

    def test_contains_substring(self):
        pattern = ContainsSubstring(("ch", "sc"))
        assert pattern.matches("fiscal", ())
        assert pattern.matches("chair", ())
        assert not pattern.matches("window", ())

    def test_starts_with_letter(self):
        pattern = StartsWithLetterIn(("b", "p", "d", "m", "n", "f"))
        assert pattern.matches("basket", ())
        assert not pattern.matches("horse", ())

    def test_second_phoneme_in(self, full_dict):
        pattern = SecondPhonemeIn(("R", "L"))
        assert pattern.matches("crisp", full_dict.lookup("crisp"))
        assert pattern.matches("alaska", full_dict.lookup("alaska"))
        assert not pattern.matches("kiwi", full_dict.lookup("kiwi"))

    def test_contains_phoneme_sequence(self, full_dict):
        pattern = ContainsPhonemeSequence((("CH",), ("S", "K")))
        assert pattern.matches("fiscal", full_dict.lookup("fiscal"))
        assert pattern.matches("chair", full_dict.lookup("chair"))
        # circle is S ER K..., the S and K are not adjacent
        assert not pattern.matches("circle", full_dict.lookup("circle"))

    def test_round_trip_through_dict(self, profiles):
        from sayable.simulator import primitive_from_dict
        for profile in profiles:
            for primitive in profile.pattern.primitives:
                assert primitive_from_dict(primitive.to_dict()) == primitive


class TestOracle:
    def test_user2_street_hard_cat_easy(self, by_id, full_dict):
        assert oracle_label(by_id["user02"], "street", full_dict) is Label.HARD
        assert oracle_label(by_id["user02"], "cat", full_dict) is Label.EASY

    def test_user4_fiscal_hard(self, by_id, full_dict):
        assert oracle_label(by_id["user04"], "fiscal", full_dict) is Label.HARD

    def test_user6_basket_hard_via_letter_pattern(self, by_id, full_dict):
        assert oracle_label(by_id["user06"], "basket", full_dict) is Label.HARD

    def test_oov_word(self, by_id, full_dict):
        with pytest.raises(OutOfVocabulary):
            oracle_label(by_id["user01"], "zzqx", full_dict)

    def test_all_seed_labels_consistent(self, profiles, full_dict):
        wrong = 0
        for profile in profiles:
            for word in profile.seed_easy:
                wrong += oracle_label(profile, word, full_dict) is Label.HARD
            for word in profile.seed_hard:
                wrong += oracle_label(profile, word, full_dict) is Label.EASY
        assert wrong == 0


class TestLoadCorpus:
    def test_plain_text(self, tmp_path, full_dict):
        path = tmp_path / "c.txt"
        path.write_text("the cat the\n", encoding="utf-8")
        corpus = load_corpus(path, full_dict)
        assert corpus.sequence == ("the", "cat", "the")
        assert corpus.unique_words == ("cat", "the")

    def test_oov_dropped(self, tmp_path, full_dict):
        path = tmp_path / "c.txt"
        path.write_text("the zzqx cat 42 NY.\n", encoding="utf-8")
        corpus = load_corpus(path, full_dict)
        assert "zzqx" not in corpus.unique_words
        assert "42" not in corpus.unique_words
        # ny is actually in the dictionary? tokenized as a word either way
        assert corpus.sequence[0] == "the"

    def test_csv_column(self, tmp_path, full_dict):
        path = tmp_path / "c.csv"
        path.write_text('id,transcript\n1,"the cat sat"\n2,"a dog ran"\n',
                        encoding="utf-8")
        corpus = load_corpus(path, full_dict, fmt="csv", column="transcript")
        assert "cat" in corpus.unique_words
        assert "dog" in corpus.unique_words

    def test_csv_missing_column(self, tmp_path, full_dict):
        path = tmp_path / "c.csv"
        path.write_text("id,text\n1,hello\n", encoding="utf-8")
        with pytest.raises(MissingColumn):
            load_corpus(path, full_dict, fmt="csv", column="transcript")

    def test_missing_file(self, tmp_path, full_dict):
        with pytest.raises(MissingFile):
            load_corpus(tmp_path / "no.txt", full_dict)

    def test_empty_corpus(self, tmp_path, full_dict):
        path = tmp_path / "c.txt"
        path.write_text("zzqx 123 !!\n", encoding="utf-8")
        with pytest.raises(EmptyCorpus):
            load_corpus(path, full_dict)

    def test_bundled_corpus_size(self, full_dict):
        corpus = load_corpus(resources.bundled_corpus_path(), full_dict)
        assert len(corpus.unique_words) > 4500


class TestSplit:
    def test_75_25(self):
        words = [f"w{i:03d}" for i in range(100)]
        train, test = split_train_test(words, 0.75, 1)
        assert len(train) == 75
        assert len(test) == 25

    def test_deterministic(self):
        words = [f"w{i:03d}" for i in range(50)]
        assert split_train_test(words, 0.75, 9) == split_train_test(words, 0.75, 9)
        assert split_train_test(words, 0.75, 9) != split_train_test(words, 0.75, 10)

    def test_partition(self):
        words = [f"w{i:03d}" for i in range(40)]
        train, test = split_train_test(words, 0.75, 2)
        assert not set(train) & set(test)
        assert set(train) | set(test) == set(words)

    def test_too_few(self):
        with pytest.raises(TooFewWords):
            split_train_test(["a", "b", "c"], 0.75, 1)


class TestEvaluate:
    def make_profile(self):
        return UserProfile(
            id="t", pattern=PatternExpr((StartsWithGrapheme(("gr",)),)),
            seed_easy=("the",), seed_hard=("graph",))

    def neutral_model(self, embedding, bias=-5.0):
        return TriggerModel(weights=np.zeros(embedding.dimension), bias=bias,
                            config=TrainingConfig())

    def test_confusion_arithmetic(self, tiny_embedding, tiny_dict):
        # oracle: gr* words are hard. ten words, overrides force the
        # prediction: TP=3 FP=1 FN=1 TN=5 -> p=0.75 r=0.75 f1=0.75 acc=0.8
        profile = self.make_profile()
        um = UserModel(
            easy_words=frozenset({"green", "cat", "dog", "owl", "bat", "the"}),
            hard_words=frozenset({"graph", "grand", "group", "water"}),
            model=self.neutral_model(tiny_embedding),
            highlight_threshold=0.7, version=0, embedding_ref="t")
        test_words = ["graph", "grand", "group", "water", "green",
                      "cat", "dog", "owl", "bat", "the"]
        metrics = evaluate(um, tiny_embedding, test_words, profile, tiny_dict, 0.5)
        assert metrics.precision == 0.75
        assert metrics.recall == 0.75
        assert metrics.f1 == 0.75
        assert metrics.accuracy == 0.8

    def test_all_easy_prediction_zero_conventions(self, tiny_embedding, tiny_dict):
        profile = self.make_profile()
        um = UserModel(
            easy_words=frozenset(), hard_words=frozenset(),
            model=self.neutral_model(tiny_embedding, bias=-10.0),
            highlight_threshold=0.7, version=0, embedding_ref="t")
        metrics = evaluate(um, tiny_embedding, ["graph", "cat"], profile,
                           tiny_dict, 0.5)
        assert metrics.precision == 0.0
        assert metrics.recall == 0.0
        assert metrics.f1 == 0.0
        assert metrics.accuracy == 0.5

    def test_perfect_predictions(self, tiny_embedding, tiny_dict):
        profile = self.make_profile()
        um = UserModel(
            easy_words=frozenset({"cat", "dog"}),
            hard_words=frozenset({"graph", "grand"}),
            model=self.neutral_model(tiny_embedding),
            highlight_threshold=0.7, version=0, embedding_ref="t")
        metrics = evaluate(um, tiny_embedding, ["graph", "grand", "cat", "dog"],
                           profile, tiny_dict, 0.5)
        assert metrics == simulator.Metrics(1.0, 1.0, 1.0, 1.0)

    def test_empty_test_set(self, tiny_embedding, tiny_dict):
        with pytest.raises(EmptyTestSet):
            evaluate(
                UserModel(frozenset(), frozenset(),
                          self.neutral_model(tiny_embedding), 0.7, 0, "t"),
                tiny_embedding, [], self.make_profile(), tiny_dict, 0.5)


def tiny_corpus(tiny_dict):
    words = sorted(tiny_dict.entries)
    return Corpus(sequence=tuple(words * 3), unique_words=tuple(words),
                  source_path=resources.bundled_corpus_path())


def tiny_profile():
    return UserProfile(
        id="tiny", pattern=PatternExpr((StartsConsonantThenRPhoneme(),)),
        seed_easy=("the", "cat", "dog", "owl", "table"),
        seed_hard=("graph", "group", "green", "grand", "crane"))


def tiny_synonyms():
    return SynonymSource(offline={
        "grill": ("cook",), "grove": ("wood", "forest"),
        "street": ("road",), "brisk": ("quick",),
    })


class TestRunSimulation:
    def test_row0_is_seed_model(self, tiny_dict, tiny_embedding):
        corpus = tiny_corpus(tiny_dict)
        profile = tiny_profile()
        config = SimulationConfig(scenario=Scenario.EXPLICIT, interactions=3,
                                  rng_seed=5)
        report = run_simulation(profile, corpus, config, tiny_embedding, tiny_dict)
        um = init_user_model(profile.seed_easy, profile.seed_hard, tiny_embedding)
        train, test = split_train_test(corpus.unique_words, 0.75, 5)
        seed_metrics = evaluate(um, tiny_embedding, test, profile, tiny_dict, 0.5)
        row0 = report.rows[0]
        assert (row0.accuracy, row0.precision, row0.recall, row0.f1) == (
            seed_metrics.accuracy, seed_metrics.precision,
            seed_metrics.recall, seed_metrics.f1)

    def test_rows_length(self, tiny_dict, tiny_embedding):
        corpus = tiny_corpus(tiny_dict)
        config = SimulationConfig(scenario=Scenario.EXPLICIT, interactions=4,
                                  rng_seed=5)
        report = run_simulation(tiny_profile(), corpus, config, tiny_embedding,
                                tiny_dict)
        assert len(report.rows) == 5
        assert [r.interaction for r in report.rows] == [0, 1, 2, 3, 4]

    def test_deterministic_runs(self, tiny_dict, tiny_embedding):
        corpus = tiny_corpus(tiny_dict)
        for scenario in (Scenario.EXPLICIT, Scenario.RANDOM, Scenario.IMPLICIT):
            config = SimulationConfig(scenario=scenario, interactions=4, rng_seed=5)
            a = run_simulation(tiny_profile(), corpus, config, tiny_embedding,
                               tiny_dict, synonym_source=tiny_synonyms())
            b = run_simulation(tiny_profile(), corpus, config, tiny_embedding,
                               tiny_dict, synonym_source=tiny_synonyms())
            assert a.rows == b.rows

    def test_implicit_early_termination_recorded(self, tiny_dict, tiny_embedding):
        corpus = tiny_corpus(tiny_dict)
        config = SimulationConfig(scenario=Scenario.IMPLICIT, interactions=50,
                                  rng_seed=5, implicit_highlight_threshold=0.9)
        report = run_simulation(tiny_profile(), corpus, config, tiny_embedding,
                                tiny_dict, synonym_source=tiny_synonyms())
        assert report.terminated_early
        assert report.completed_interactions < 50
        assert len(report.rows) == report.completed_interactions + 1

    def test_implicit_needs_synonyms(self, tiny_dict, tiny_embedding):
        config = SimulationConfig(scenario=Scenario.IMPLICIT, interactions=2)
        with pytest.raises(ValueError):
            run_simulation(tiny_profile(), tiny_corpus(tiny_dict), config,
                           tiny_embedding, tiny_dict)

    def test_interactions_validation(self):
        with pytest.raises(ValueError):
            SimulationConfig(scenario=Scenario.EXPLICIT, interactions=0)


class TestAggregate:
    def rows(self, values):
        return tuple(
            simulator.MetricRow(interaction=i, accuracy=v, precision=v,
                                recall=v, f1=v)
            for i, v in enumerate(values))

    def report(self, pid, values, interactions, terminated=False):
        return simulator.SimulationReport(
            profile_id=pid, scenario=Scenario.EXPLICIT,
            rows=self.rows(values),
            config=SimulationConfig(scenario=Scenario.EXPLICIT,
                                    interactions=interactions),
            terminated_early=terminated,
            completed_interactions=len(values) - 1)

    def test_mean_of_one_is_identity(self):
        report = self.report("a", [0.1, 0.2, 0.3], 2)
        agg = aggregate([report])
        assert [r.f1 for r in agg.rows] == pytest.approx([0.1, 0.2, 0.3])

    def test_mean_of_two(self):
        agg = aggregate([
            self.report("a", [0.4, 0.4, 0.4], 2),
            self.report("b", [0.6, 0.6, 0.6], 2),
        ])
        assert [r.f1 for r in agg.rows] == pytest.approx([0.5, 0.5, 0.5])

    def test_padding_carries_last_row(self):
        agg = aggregate([
            self.report("a", [0.0, 1.0, 1.0, 1.0, 1.0], 4),
            self.report("b", [0.0, 0.5], 4, terminated=True),
        ])
        assert agg.padded_profile_ids == ("b",)
        assert [r.f1 for r in agg.rows] == pytest.approx(
            [0.0, 0.75, 0.75, 0.75, 0.75])

    def test_mixed_scenarios_rejected(self):
        a = self.report("a", [0.1], 1)
        b = simulator.SimulationReport(
            profile_id="b", scenario=Scenario.RANDOM, rows=self.rows([0.1]),
            config=SimulationConfig(scenario=Scenario.RANDOM, interactions=1),
            completed_interactions=0)
        with pytest.raises(MixedScenarios):
            aggregate([a, b])


class TestSeparableRecovery:
    def test_balanced_200_word_sample_fits_every_pattern(
            self, profiles, full_dict, full_embedding):
        import random

        from sayable import classifier
        from sayable.classifier import LabeledExample

        corpus = load_corpus(resources.bundled_corpus_path(), full_dict)
        rng = random.Random(13)
        for profile in profiles:
            hard = [w for w in corpus.unique_words
                    if oracle_label(profile, w, full_dict) is Label.HARD]
            easy = [w for w in corpus.unique_words
                    if oracle_label(profile, w, full_dict) is Label.EASY]
            words = rng.sample(hard, 100) + rng.sample(easy, 100)
            rows = np.asarray(full_embedding.rows_for(words).todense())
            examples = [
                LabeledExample(w, rows[i], oracle_label(profile, w, full_dict))
                for i, w in enumerate(words)]
            model = classifier.train(examples)
            truth = np.array([e.label is Label.HARD for e in examples])
            predicted = classifier.prob_hard_many(
                model, full_embedding.rows_for(words)) > 0.5
            accuracy = float((predicted == truth).mean())
            assert accuracy >= 0.95, f"{profile.id}: {accuracy:.3f}"


class TestProfilesFile:
    def test_ten_profiles_with_five_seeds_each(self, profiles):
        assert len(profiles) == 10
        for profile in profiles:
            assert len(profile.seed_easy) == 5
            assert len(profile.seed_hard) == 5

    def test_all_seeds_in_vocabulary(self, profiles, full_dict):
        for profile in profiles:
            for word in profile.seed_easy + profile.seed_hard:
                assert word in full_dict
