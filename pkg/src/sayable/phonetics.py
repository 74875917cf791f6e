"""Pronouncing dictionary parsing and phonetic embeddings.

Words are mapped to count vectors over phoneme unigrams and boundary-marked
phoneme bigrams, so words that sound alike sit close together in the vector
space (cosine sense). The bigram features are taken over the phoneme sequence
padded with ``^`` and ``$`` markers, which keeps word-initial and word-final
contexts distinguishable.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import sparse

from .errors import EmptyDictionary, MalformedLine, MissingFile, OutOfVocabulary

ARPABET_VOWELS = frozenset({
    "AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER", "EY", "IH", "IY",
    "OW", "OY", "UH", "UW",
})
ARPABET_CONSONANTS = frozenset({
    "B", "CH", "D", "DH", "F", "G", "HH", "JH", "K", "L", "M", "N", "NG",
    "P", "R", "S", "SH", "T", "TH", "V", "W", "Y", "Z", "ZH",
})
ARPABET = ARPABET_VOWELS | ARPABET_CONSONANTS

START_MARK = "^"
END_MARK = "$"

_ALTERNATE = re.compile(r"\(\d+\)$")
_STRESS = re.compile(r"[012]$")


@dataclass(frozen=True)
class PhonemeSequence:
    word: str
    phonemes: tuple[str, ...]


@dataclass
class PronouncingDict:
    """Word -> phoneme sequence map, stress digits stripped."""

    entries: dict[str, tuple[str, ...]]
    source_path: Path

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, word: str) -> tuple[str, ...]:
        key = word.lower()
        if key not in self.entries:
            raise OutOfVocabulary(word)
        return self.entries[key]


def load_pronouncing_dict(path: str | Path) -> PronouncingDict:
    """Parse a cmudict-0.7b formatted file.

    Comment lines start with ``;;;``. Alternate pronunciations (words
    suffixed ``(2)``, ``(3)``, ...) are dropped; only the first pronunciation
    of each word is kept. Stress digits on vowels are stripped.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"pronouncing dictionary not found: {path}")

    entries: dict[str, tuple[str, ...]] = {}
    with path.open(encoding="latin-1") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith(";;;"):
                continue
            fields = line.split()
            if len(fields) < 2:
                raise MalformedLine(line_number, f"expected word and phonemes, got {line!r}")
            word, symbols = fields[0], fields[1:]
            if _ALTERNATE.search(word):
                continue
            phonemes = []
            for symbol in symbols:
                if symbol.startswith("#"):
                    break  # trailing per-entry comment ("# place, danish")
                base = _STRESS.sub("", symbol)
                if base not in ARPABET:
                    raise MalformedLine(line_number, f"unknown phoneme symbol {symbol!r}")
                phonemes.append(base)
            if not phonemes:
                raise MalformedLine(line_number, f"no phonemes in {line!r}")
            entries.setdefault(word.lower(), tuple(phonemes))
    if not entries:
        raise EmptyDictionary(f"no entries parsed from {path}")
    return PronouncingDict(entries=entries, source_path=path)


def phonemes_of(pdict: PronouncingDict, word: str) -> PhonemeSequence:
    """Case-insensitive phoneme lookup."""
    return PhonemeSequence(word=word.lower(), phonemes=pdict.lookup(word))


@dataclass(frozen=True)
class EmbeddingConfig:
    use_projection: bool = False
    dimensions: int = 64


def load_embedding_config(path: str | Path) -> EmbeddingConfig:
    """Read an embedding config (JSON with use_projection / dimensions keys)."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return EmbeddingConfig(
        use_projection=bool(data.get("use_projection", False)),
        dimensions=int(data.get("dimensions", 64)),
    )


def word_features(phonemes: tuple[str, ...]) -> dict[str, int]:
    """Unigram and boundary-bigram counts for one phoneme sequence."""
    counts: dict[str, int] = {}
    for p in phonemes:
        counts[p] = counts.get(p, 0) + 1
    padded = (START_MARK, *phonemes, END_MARK)
    for a, b in zip(padded, padded[1:]):
        key = f"{a}+{b}"
        counts[key] = counts.get(key, 0) + 1
    return counts


@dataclass
class PhoneticEmbedding:
    """Immutable word-vector table over a fixed feature index."""

    feature_index: dict[str, int]
    words: tuple[str, ...]
    matrix: sparse.csr_matrix
    dimension: int
    config: EmbeddingConfig
    fingerprint: str
    _row_index: dict[str, int] = field(repr=False, default_factory=dict)
    _unit_rows: sparse.csr_matrix | None = field(repr=False, default=None)

    def __post_init__(self):
        if not self._row_index:
            self._row_index = {w: i for i, w in enumerate(self.words)}

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._row_index

    def row_of(self, word: str) -> int:
        key = word.lower()
        if key not in self._row_index:
            raise OutOfVocabulary(word)
        return self._row_index[key]

    def embed(self, word: str) -> np.ndarray:
        """Dense vector for one word."""
        return np.asarray(self.matrix[self.row_of(word)].todense()).ravel()

    def rows_for(self, words) -> sparse.csr_matrix:
        """Stacked vectors for a sequence of in-vocabulary words."""
        idx = [self.row_of(w) for w in words]
        return self.matrix[idx]

    def unit_rows(self) -> sparse.csr_matrix:
        """Row-normalized matrix, cached; used for cosine similarity."""
        if self._unit_rows is None:
            norms = np.sqrt(np.asarray(self.matrix.multiply(self.matrix).sum(axis=1)).ravel())
            norms[norms == 0.0] = 1.0
            self._unit_rows = (sparse.diags(1.0 / norms) @ self.matrix).tocsr()
        return self._unit_rows


def embed(embedding: PhoneticEmbedding, word: str) -> np.ndarray:
    return embedding.embed(word)


def build_embedding(pdict: PronouncingDict, config: EmbeddingConfig | None = None) -> PhoneticEmbedding:
    """Construct the embedding table for every dictionary word.

    Deterministic: the same dictionary contents and config produce an
    identical feature index and identical vectors.
    """
    if len(pdict) == 0:
        raise EmptyDictionary("cannot build an embedding from an empty dictionary")
    config = config or EmbeddingConfig()

    words = tuple(sorted(pdict.entries))
    unigrams: set[str] = set()
    bigrams: set[str] = set()
    for word in words:
        phonemes = pdict.entries[word]
        unigrams.update(phonemes)
        padded = (START_MARK, *phonemes, END_MARK)
        bigrams.update(f"{a}+{b}" for a, b in zip(padded, padded[1:]))
    features = sorted(unigrams) + sorted(bigrams)
    feature_index = {f: i for i, f in enumerate(features)}

    indptr = [0]
    indices: list[int] = []
    values: list[float] = []
    for word in words:
        counts = word_features(pdict.entries[word])
        cols = sorted(feature_index[f] for f in counts)
        col_counts = {feature_index[f]: c for f, c in counts.items()}
        indices.extend(cols)
        values.extend(float(col_counts[c]) for c in cols)
        indptr.append(len(indices))
    matrix = sparse.csr_matrix(
        (np.array(values), np.array(indices, dtype=np.int32), np.array(indptr, dtype=np.int64)),
        shape=(len(words), len(features)),
    )

    dimension = len(features)
    if config.use_projection:
        matrix, dimension = _project(matrix, config.dimensions)

    fingerprint = _fingerprint(words, features, dimension, config)
    return PhoneticEmbedding(
        feature_index=feature_index,
        words=words,
        matrix=matrix,
        dimension=dimension,
        config=config,
        fingerprint=fingerprint,
    )


def _project(matrix: sparse.csr_matrix, dimensions: int):
    """Truncated orthogonal decomposition to a dense low-rank table."""
    from scipy.sparse.linalg import svds

    k = min(dimensions, min(matrix.shape) - 1)
    # fixed start vector keeps the iteration deterministic
    v0 = np.ones(min(matrix.shape))
    u, s, vt = svds(matrix.asfptype(), k=k, v0=v0)
    order = np.argsort(s)[::-1]
    u, s, vt = u[:, order], s[order], vt[order]
    # sign convention: largest-magnitude component of each right vector is positive
    for j in range(k):
        pivot = np.argmax(np.abs(vt[j]))
        if vt[j, pivot] < 0:
            vt[j] = -vt[j]
            u[:, j] = -u[:, j]
    projected = u * s
    return sparse.csr_matrix(projected), k


def _fingerprint(words, features, dimension, config) -> str:
    digest = hashlib.sha256()
    digest.update(b"sayable-embedding-v1\x00")
    digest.update(json.dumps({
        "use_projection": config.use_projection,
        "dimensions": config.dimensions,
        "dimension": dimension,
        "n_words": len(words),
    }, sort_keys=True).encode())
    digest.update("\x00".join(features).encode())
    digest.update("\x00".join(words).encode())
    return digest.hexdigest()


def nearest_neighbors(embedding: PhoneticEmbedding, word: str, k: int) -> list[tuple[str, float]]:
    """The k most cosine-similar vocabulary words, query excluded.

    Ordered by descending similarity; exact ties broken lexicographically.
    """
    if k < 1:
        raise ValueError("k must be positive")
    row = embedding.row_of(word)
    unit = embedding.unit_rows()
    sims = np.asarray((unit @ unit[row].T).todense()).ravel()
    sims[row] = -np.inf
    k = min(k, len(embedding.words) - 1)
    # words are stored lexicographically sorted, so a stable sort on -sims
    # breaks similarity ties in lexicographic order
    top = np.argsort(-sims, kind="stable")[:k]
    return [(embedding.words[i], float(sims[i])) for i in top]
