from __future__ import annotations

import math
from collections import Counter

import numpy as np
import pytest

from sayable.errors import EmptyDictionary, MalformedLine, MissingFile, OutOfVocabulary
from sayable.phonetics import (
    ARPABET,
    ARPABET_CONSONANTS,
    ARPABET_VOWELS,
    EmbeddingConfig,
    build_embedding,
    load_embedding_config,
    load_pronouncing_dict,
    nearest_neighbors,
    phonemes_of,
    word_features,
)


def independent_features(phonemes):
    """Counter-based oracle for the unigram + boundary-bigram construction."""
    counts = Counter(phonemes)
    padded = ["^", *phonemes, "$"]
    counts.update(f"{a}+{b}" for a, b in zip(padded, padded[1:]))
    return counts


def independent_cosine(a, b):
    num = sum(a[k] * b[k] for k in set(a) & set(b))
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    return num / (na * nb)


class TestLoadPronouncingDict:
    def test_parses_words_and_strips_stress(self, tiny_dict):
        assert tiny_dict.lookup("graph") == ("G", "R", "AE", "F")
        assert tiny_dict.lookup("water") == ("W", "AO", "T", "ER")

    def test_comment_lines_skipped(self, tiny_dict):
        assert ";;;" not in tiny_dict.entries

    def test_alternate_pronunciations_dropped(self, tiny_dict):
        assert tiny_dict.lookup("close") == ("K", "L", "OW", "S")
        assert "close(2)" not in tiny_dict.entries

    def test_words_lowercased(self, tiny_dict):
        assert "graph" in tiny_dict.entries
        assert "GRAPH" not in tiny_dict.entries

    def test_missing_file(self, tmp_path):
        with pytest.raises(MissingFile):
            load_pronouncing_dict(tmp_path / "nope.txt")

    def test_malformed_line_reports_number(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("GOOD  G UH1 D\nBAD\n", encoding="ascii")
        with pytest.raises(MalformedLine) as excinfo:
            load_pronouncing_dict(path)
        assert excinfo.value.line_number == 2

    def test_unknown_phoneme_is_malformed(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("WORD  W QX1 D\n", encoding="ascii")
        with pytest.raises(MalformedLine):
            load_pronouncing_dict(path)

    def test_empty_dictionary(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text(";;; nothing here\n", encoding="ascii")
        with pytest.raises(EmptyDictionary):
            load_pronouncing_dict(path)

    def test_full_dictionary_is_large(self, full_dict):
        assert len(full_dict) > 116_000

    def test_full_dictionary_graph_entry(self, full_dict):
        assert full_dict.lookup("graph") == ("G", "R", "AE", "F")

    def test_inventory_is_39_symbols(self):
        assert len(ARPABET) == 39
        assert len(ARPABET_VOWELS) == 15
        assert len(ARPABET_CONSONANTS) == 24

    def test_all_entries_use_inventory(self, full_dict):
        symbols = {p for ph in full_dict.entries.values() for p in ph}
        assert symbols <= ARPABET


class TestPhonemesOf:
    def test_lookup(self, tiny_dict):
        assert phonemes_of(tiny_dict, "graph").phonemes == ("G", "R", "AE", "F")

    def test_case_insensitive(self, tiny_dict):
        assert phonemes_of(tiny_dict, "GRAPH") == phonemes_of(tiny_dict, "graph")

    def test_out_of_vocabulary(self, tiny_dict):
        with pytest.raises(OutOfVocabulary):
            phonemes_of(tiny_dict, "zzqx")


class TestBuildEmbedding:
    def test_graph_features(self, tiny_dict, tiny_embedding):
        vec = tiny_embedding.embed("graph")
        expected = independent_features(["G", "R", "AE", "F"])
        for feature, count in expected.items():
            assert vec[tiny_embedding.feature_index[feature]] == count
        assert vec.sum() == sum(expected.values())

    def test_identical_phonemes_identical_vectors(self, tmp_path):
        path = tmp_path / "dup.txt"
        path.write_text("AYE  EY1\nEH  EY1\nBEE  B IY1\n", encoding="ascii")
        emb = build_embedding(load_pronouncing_dict(path))
        assert np.array_equal(emb.embed("aye"), emb.embed("eh"))

    def test_cosine_ordering_graph_grand_owl(self, tiny_dict, tiny_embedding):
        def cosine(a, b):
            va, vb = tiny_embedding.embed(a), tiny_embedding.embed(b)
            return float(va @ vb / (np.linalg.norm(va) * np.linalg.norm(vb)))

        oracle = {
            w: independent_features(tiny_dict.lookup(w))
            for w in ("graph", "grand", "owl")
        }
        assert cosine("graph", "grand") == pytest.approx(
            independent_cosine(oracle["graph"], oracle["grand"]))
        assert cosine("graph", "owl") == pytest.approx(
            independent_cosine(oracle["graph"], oracle["owl"]))
        assert cosine("graph", "grand") > cosine("graph", "owl")

    def test_deterministic_rebuild(self, tiny_dict):
        a = build_embedding(tiny_dict)
        b = build_embedding(tiny_dict)
        assert a.feature_index == b.feature_index
        assert a.fingerprint == b.fingerprint
        assert (a.matrix != b.matrix).nnz == 0

    def test_vector_shape_and_nonnegative(self, tiny_embedding):
        for word in tiny_embedding.words:
            vec = tiny_embedding.embed(word)
            assert vec.shape == (tiny_embedding.dimension,)
            assert (vec >= 0).all()
            assert vec.max() > 0

    def test_bigram_count_conservation(self, tiny_dict, tiny_embedding):
        bigram_cols = [i for f, i in tiny_embedding.feature_index.items() if "+" in f]
        for word, phonemes in tiny_dict.entries.items():
            vec = tiny_embedding.embed(word)
            assert vec[bigram_cols].sum() == len(phonemes) + 1

    def test_stress_invariance(self, tmp_path):
        path = tmp_path / "stress.txt"
        path.write_text("UHA  AH0\nUHB  AH1\nUHC  AH2\n", encoding="ascii")
        emb = build_embedding(load_pronouncing_dict(path))
        assert np.array_equal(emb.embed("uha"), emb.embed("uhb"))
        assert np.array_equal(emb.embed("uhb"), emb.embed("uhc"))

    def test_embed_oov(self, tiny_embedding):
        with pytest.raises(OutOfVocabulary):
            tiny_embedding.embed("zzqx")

    def test_embed_repeatable(self, tiny_embedding):
        assert np.array_equal(tiny_embedding.embed("graph"), tiny_embedding.embed("graph"))

    def test_projection_config(self, tiny_dict):
        emb = build_embedding(tiny_dict, EmbeddingConfig(use_projection=True, dimensions=8))
        assert emb.dimension == 8
        assert emb.embed("graph").shape == (8,)

    def test_config_from_file(self, tmp_path):
        path = tmp_path / "emb.json"
        path.write_text('{"use_projection": true, "dimensions": 12}')
        config = load_embedding_config(path)
        assert config.use_projection is True
        assert config.dimensions == 12

    def test_word_features_helper(self):
        feats = word_features(("G", "R", "AE", "F"))
        assert feats == {
            "G": 1, "R": 1, "AE": 1, "F": 1,
            "^+G": 1, "G+R": 1, "R+AE": 1, "AE+F": 1, "F+$": 1,
        }


class TestNearestNeighbors:
    def brute_force(self, embedding, dictionary, word, k):
        counts = {
            w: independent_features(dictionary.lookup(w))
            for w in embedding.words
        }
        query = counts[word]
        scored = [
            (other, independent_cosine(query, counts[other]))
            for other in embedding.words if other != word
        ]
        scored.sort(key=lambda item: (-item[1], item[0]))
        return scored[:k]

    def test_matches_brute_force(self, tiny_dict, tiny_embedding):
        got = nearest_neighbors(tiny_embedding, "graph", 5)
        expected = self.brute_force(tiny_embedding, tiny_dict, "graph", 5)
        assert [w for w, _ in got] == [w for w, _ in expected]
        for (_, s1), (_, s2) in zip(got, expected):
            assert s1 == pytest.approx(s2)

    def test_first_neighbor_shares_a_bigram(self, tiny_dict, tiny_embedding):
        word, _ = nearest_neighbors(tiny_embedding, "graph", 1)[0]
        query = independent_features(tiny_dict.lookup("graph"))
        other = independent_features(tiny_dict.lookup(word))
        shared = {k for k in query if "+" in k} & {k for k in other if "+" in k}
        assert shared

    def test_excludes_query_word(self, tiny_embedding):
        assert all(w != "graph" for w, _ in nearest_neighbors(tiny_embedding, "graph", 10))

    def test_k_clamped_to_vocab(self, tiny_embedding):
        got = nearest_neighbors(tiny_embedding, "graph", 10_000)
        assert len(got) == len(tiny_embedding.words) - 1

    def test_oov_query(self, tiny_embedding):
        with pytest.raises(OutOfVocabulary):
            nearest_neighbors(tiny_embedding, "zzqx", 3)

    def test_descending_similarity(self, tiny_embedding):
        sims = [s for _, s in nearest_neighbors(tiny_embedding, "street", 10)]
        assert sims == sorted(sims, reverse=True)
