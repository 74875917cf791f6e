"""Simulated-user evaluation harness.

Ten bundled user profiles each define a difficulty pattern (their ground
truth oracle) and seed word lists. A simulation run initializes a UserModel
from the seeds and then replays feedback interactions against a corpus
vocabulary under one of three scenarios:

  explicit  the engine queries its most uncertain word, the oracle answers
  implicit  the user reads the corpus, ignoring false highlights and
            substituting true ones with the first suggested alternative
  random    a uniformly random unlabeled word is labeled each round

After every interaction the model is scored on a held-out test split.
"""

from __future__ import annotations

import csv
import enum
import hashlib
import json
import random
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import classifier, feedback
from .alternatives import SynonymSource, TokenKind, alternatives_for, tokenize
from .classifier import Label
from .errors import (
    EmptyCorpus,
    EmptyTestSet,
    ExhaustedPool,
    MissingColumn,
    MissingFile,
    MixedScenarios,
    NoSynonymsKnown,
    OutOfVocabulary,
    TooFewWords,
)
from .feedback import ImplicitAction, UserModel
from .phonetics import ARPABET_CONSONANTS, PhoneticEmbedding, PronouncingDict

# ---------------------------------------------------------------------------
# difficulty patterns


@dataclass(frozen=True)
class StartsConsonantThenRPhoneme:
    """First phoneme is a consonant and the second is R."""

    def matches(self, word: str, phonemes: tuple[str, ...]) -> bool:
        return (len(phonemes) >= 2
                and phonemes[0] in ARPABET_CONSONANTS
                and phonemes[1] == "R")

    def to_dict(self) -> dict:
        return {"type": "starts_consonant_then_r_phoneme"}


@dataclass(frozen=True)
class StartsWithGrapheme:
    prefixes: tuple[str, ...]

    def matches(self, word: str, phonemes: tuple[str, ...]) -> bool:
        return word.startswith(self.prefixes)

    def to_dict(self) -> dict:
        return {"type": "starts_with_grapheme", "prefixes": list(self.prefixes)}


@dataclass(frozen=True)
class SecondLetterIn:
    letters: tuple[str, ...]

    def matches(self, word: str, phonemes: tuple[str, ...]) -> bool:
        return len(word) >= 2 and word[1] in self.letters

    def to_dict(self) -> dict:
        return {"type": "second_letter_in", "letters": list(self.letters)}


@dataclass(frozen=True)
class ContainsSubstring:
    substrings: tuple[str, ...]

    def matches(self, word: str, phonemes: tuple[str, ...]) -> bool:
        return any(s in word for s in self.substrings)

    def to_dict(self) -> dict:
        return {"type": "contains_substring", "substrings": list(self.substrings)}


@dataclass(frozen=True)
class StartsWithLetterIn:
    letters: tuple[str, ...]

    def matches(self, word: str, phonemes: tuple[str, ...]) -> bool:
        return bool(word) and word[0] in self.letters

    def to_dict(self) -> dict:
        return {"type": "starts_with_letter_in", "letters": list(self.letters)}


@dataclass(frozen=True)
class SecondPhonemeIn:
    """Phonemic variant of SecondLetterIn (e.g. the R or L sound)."""

    phonemes: tuple[str, ...]

    def matches(self, word: str, phonemes: tuple[str, ...]) -> bool:
        return len(phonemes) >= 2 and phonemes[1] in self.phonemes

    def to_dict(self) -> dict:
        return {"type": "second_phoneme_in", "phonemes": list(self.phonemes)}


@dataclass(frozen=True)
class ContainsPhonemeSequence:
    """Matches words containing any of the given contiguous phoneme runs."""

    sequences: tuple[tuple[str, ...], ...]

    def matches(self, word: str, phonemes: tuple[str, ...]) -> bool:
        for run in self.sequences:
            width = len(run)
            for i in range(len(phonemes) - width + 1):
                if phonemes[i:i + width] == run:
                    return True
        return False

    def to_dict(self) -> dict:
        return {"type": "contains_phoneme_sequence",
                "sequences": [list(run) for run in self.sequences]}


Primitive = (StartsConsonantThenRPhoneme | StartsWithGrapheme | SecondLetterIn
             | ContainsSubstring | StartsWithLetterIn | SecondPhonemeIn
             | ContainsPhonemeSequence)


@dataclass(frozen=True)
class PatternExpr:
    """Disjunction of difficulty primitives."""

    primitives: tuple[Primitive, ...]

    def matches(self, word: str, phonemes: tuple[str, ...]) -> bool:
        return any(p.matches(word, phonemes) for p in self.primitives)

    def to_dict(self) -> list[dict]:
        return [p.to_dict() for p in self.primitives]


def primitive_from_dict(data: dict) -> Primitive:
    kind = data.get("type")
    if kind == "starts_consonant_then_r_phoneme":
        return StartsConsonantThenRPhoneme()
    if kind == "starts_with_grapheme":
        return StartsWithGrapheme(tuple(data["prefixes"]))
    if kind == "second_letter_in":
        return SecondLetterIn(tuple(data["letters"]))
    if kind == "contains_substring":
        return ContainsSubstring(tuple(data["substrings"]))
    if kind == "starts_with_letter_in":
        return StartsWithLetterIn(tuple(data["letters"]))
    if kind == "second_phoneme_in":
        return SecondPhonemeIn(tuple(data["phonemes"]))
    if kind == "contains_phoneme_sequence":
        return ContainsPhonemeSequence(tuple(tuple(run) for run in data["sequences"]))
    raise ValueError(f"unknown pattern primitive type: {kind!r}")


@dataclass(frozen=True)
class UserProfile:
    id: str
    pattern: PatternExpr
    seed_easy: tuple[str, ...]
    seed_hard: tuple[str, ...]
    description: str = ""


def load_profiles(path: str | Path) -> list[UserProfile]:
    """Read user profiles from a JSON file."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"profiles file not found: {path}")
    data = json.loads(path.read_text(encoding="utf-8"))
    profiles = []
    for entry in data["profiles"]:
        profiles.append(UserProfile(
            id=entry["id"],
            pattern=PatternExpr(tuple(primitive_from_dict(p) for p in entry["pattern"])),
            seed_easy=tuple(w.lower() for w in entry["seed_easy"]),
            seed_hard=tuple(w.lower() for w in entry["seed_hard"]),
            description=entry.get("description", ""),
        ))
    return profiles


def oracle_label(profile: UserProfile, word: str, pdict: PronouncingDict) -> Label:
    """Ground-truth difficulty of a word under the profile's pattern."""
    key = word.lower()
    phonemes = pdict.lookup(key)
    return Label.HARD if profile.pattern.matches(key, phonemes) else Label.EASY


# ---------------------------------------------------------------------------
# corpus handling


@dataclass(frozen=True)
class Corpus:
    sequence: tuple[str, ...]
    unique_words: tuple[str, ...]
    source_path: Path


def load_corpus(
    path: str | Path,
    pdict: PronouncingDict,
    fmt: str = "plain_text",
    column: str | None = None,
) -> Corpus:
    """Load a corpus as an in-vocabulary word sequence plus unique word set.

    ``fmt`` is "plain_text" or "csv"; CSV requires a ``column`` name holding
    the text. Words are lowercased; out-of-vocabulary words are dropped.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"corpus not found: {path}")
    if fmt == "plain_text":
        texts = [path.read_text(encoding="utf-8")]
    elif fmt == "csv":
        if not column:
            raise MissingColumn("csv corpora need a column name")
        texts = []
        with path.open(encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or column not in reader.fieldnames:
                raise MissingColumn(f"column {column!r} not present in {path}")
            for record in reader:
                texts.append(record[column] or "")
    else:
        raise ValueError(f"unknown corpus format: {fmt!r}")

    sequence: list[str] = []
    for text in texts:
        for line in text.splitlines():
            if line.startswith("#"):
                continue
            for token in tokenize(line):
                if token.kind is not TokenKind.WORD:
                    continue
                word = token.text.lower()
                if word in pdict:
                    sequence.append(word)
    if not sequence:
        raise EmptyCorpus(f"no in-vocabulary words in {path}")
    unique = tuple(sorted(set(sequence)))
    return Corpus(sequence=tuple(sequence), unique_words=unique, source_path=path)


def split_train_test(
    unique_words, train_fraction: float, rng_seed: int
) -> tuple[list[str], list[str]]:
    """Seeded shuffle split; |train| = round(train_fraction * N)."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    words = sorted(set(unique_words))
    if len(words) < 4:
        raise TooFewWords(f"need at least 4 unique words, got {len(words)}")
    rng = random.Random(rng_seed)
    rng.shuffle(words)
    n_train = round(train_fraction * len(words))
    return words[:n_train], words[n_train:]


# ---------------------------------------------------------------------------
# metrics


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class MetricRow:
    interaction: int
    accuracy: float
    precision: float
    recall: float
    f1: float


def evaluate(
    um: UserModel,
    embedding: PhoneticEmbedding,
    test_words,
    profile: UserProfile,
    pdict: PronouncingDict,
    decision_threshold: float = 0.5,
) -> Metrics:
    """Score the model against the profile's oracle on held-out words.

    HARD is the positive class. Words the user has already labeled keep
    their label (the override also applies in the editor). Precision and
    recall fall back to 0 when their denominator is 0.
    """
    test_words = list(test_words)
    if not test_words:
        raise EmptyTestSet("cannot evaluate on an empty test set")
    truth = np.array([
        oracle_label(profile, w, pdict) is Label.HARD for w in test_words
    ])
    probs = classifier.prob_hard_many(um.model, embedding.rows_for(test_words))
    predicted = probs > decision_threshold
    for i, word in enumerate(test_words):
        if word in um.hard_words:
            predicted[i] = True
        elif word in um.easy_words:
            predicted[i] = False

    tp = int(np.sum(predicted & truth))
    fp = int(np.sum(predicted & ~truth))
    fn = int(np.sum(~predicted & truth))
    tn = int(np.sum(~predicted & ~truth))
    accuracy = (tp + tn) / len(test_words)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return Metrics(accuracy=accuracy, precision=precision, recall=recall, f1=f1)


# ---------------------------------------------------------------------------
# simulation


class Scenario(enum.Enum):
    EXPLICIT = "explicit"
    IMPLICIT = "implicit"
    RANDOM = "random"


@dataclass(frozen=True)
class SimulationConfig:
    scenario: Scenario
    interactions: int = 500
    train_fraction: float = 0.75
    rng_seed: int = 7
    implicit_highlight_threshold: float = 0.1
    eval_decision_threshold: float = 0.5
    max_alternatives: int = 10
    oracle_consistent_substitute: bool = False
    restrict_feedback_to_train: bool = True

    def __post_init__(self):
        if self.interactions < 1:
            raise ValueError("interactions must be >= 1")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must be in (0, 1)")


@dataclass(frozen=True)
class SimulationReport:
    profile_id: str
    scenario: Scenario
    rows: tuple[MetricRow, ...]
    config: SimulationConfig
    terminated_early: bool = False
    completed_interactions: int = 0


def _profile_rng(config: SimulationConfig, profile: UserProfile) -> random.Random:
    digest = hashlib.sha256(f"{config.rng_seed}:{profile.id}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def run_simulation(
    profile: UserProfile,
    corpus: Corpus,
    config: SimulationConfig,
    embedding: PhoneticEmbedding,
    pdict: PronouncingDict,
    synonym_source: SynonymSource | None = None,
) -> SimulationReport:
    """Replay one profile/scenario feedback loop and record metric rows.

    Row 0 scores the seed-only model; row i scores the model after the i-th
    interaction. Implicit runs can terminate early once nothing qualifying
    remains highlighted in the corpus.
    """
    if config.scenario is Scenario.IMPLICIT and synonym_source is None:
        raise ValueError("implicit simulation needs a synonym source")

    train_words, test_words = split_train_test(
        corpus.unique_words, config.train_fraction, config.rng_seed)
    threshold = (config.implicit_highlight_threshold
                 if config.scenario is Scenario.IMPLICIT
                 else feedback.DEFAULT_HIGHLIGHT_THRESHOLD)
    um = feedback.init_user_model(
        profile.seed_easy, profile.seed_hard, embedding, threshold=threshold)

    rows = [MetricRow(interaction=0, **vars(evaluate(
        um, embedding, test_words, profile, pdict,
        config.eval_decision_threshold)))]

    rng = _profile_rng(config, profile)
    scanner = (_ImplicitScanner(corpus, train_words, embedding, config)
               if config.scenario is Scenario.IMPLICIT else None)
    terminated_early = False
    completed = 0

    for interaction in range(1, config.interactions + 1):
        if config.scenario is Scenario.EXPLICIT:
            try:
                word = feedback.next_query(um, embedding, pool=train_words)
            except ExhaustedPool:
                terminated_early = True
                break
            is_hard = oracle_label(profile, word, pdict) is Label.HARD
            um = feedback.apply_explicit_feedback(um, embedding, word, is_hard)
        elif config.scenario is Scenario.RANDOM:
            pool = [w for w in train_words if not um.is_labeled(w)]
            if not pool:
                terminated_early = True
                break
            word = pool[rng.randrange(len(pool))]
            is_hard = oracle_label(profile, word, pdict) is Label.HARD
            um = feedback.apply_explicit_feedback(um, embedding, word, is_hard)
        else:
            assert scanner is not None and synonym_source is not None
            word = scanner.first_highlighted(um)
            if word is None:
                terminated_early = True
                break
            um = _apply_implicit_interaction(
                um, word, profile, embedding, pdict, synonym_source, config)

        completed = interaction
        rows.append(MetricRow(interaction=interaction, **vars(evaluate(
            um, embedding, test_words, profile, pdict,
            config.eval_decision_threshold))))

    return SimulationReport(
        profile_id=profile.id,
        scenario=config.scenario,
        rows=tuple(rows),
        config=config,
        terminated_early=terminated_early,
        completed_interactions=completed,
    )


class _ImplicitScanner:
    """Vectorized 'first highlighted unlabeled word in the corpus' lookup."""

    def __init__(self, corpus: Corpus, train_words, embedding: PhoneticEmbedding,
                 config: SimulationConfig):
        self.words = list(corpus.unique_words)
        self.index = {w: i for i, w in enumerate(self.words)}
        self.matrix = embedding.rows_for(self.words)
        self.sequence_idx = np.array([self.index[w] for w in corpus.sequence],
                                     dtype=np.int64)
        self.threshold = config.implicit_highlight_threshold
        if config.restrict_feedback_to_train:
            allowed = set(train_words)
            self.allowed_mask = np.array([w in allowed for w in self.words])
        else:
            self.allowed_mask = np.ones(len(self.words), dtype=bool)

    def first_highlighted(self, um: UserModel) -> str | None:
        probs = classifier.prob_hard_many(um.model, self.matrix)
        eligible = (probs > self.threshold) & self.allowed_mask
        for i, word in enumerate(self.words):
            if eligible[i] and um.is_labeled(word):
                eligible[i] = False
        hits = eligible[self.sequence_idx]
        position = int(np.argmax(hits))
        if not hits[position]:
            return None
        return self.words[self.sequence_idx[position]]


def _apply_implicit_interaction(
    um: UserModel,
    word: str,
    profile: UserProfile,
    embedding: PhoneticEmbedding,
    pdict: PronouncingDict,
    synonym_source: SynonymSource,
    config: SimulationConfig,
) -> UserModel:
    """One simulated editor interaction with a highlighted word."""
    if oracle_label(profile, word, pdict) is Label.EASY:
        # false positive: the simulated user ignores the highlight
        return feedback.apply_implicit_feedback(
            um, embedding, word, ImplicitAction.ignore())
    try:
        suggestions = alternatives_for(
            word, um, embedding, synonym_source, max_n=config.max_alternatives)
    except NoSynonymsKnown:
        suggestions = []
    chosen = None
    for candidate in suggestions:
        if config.oracle_consistent_substitute:
            try:
                if oracle_label(profile, candidate, pdict) is Label.HARD:
                    continue
            except OutOfVocabulary:
                continue
        chosen = candidate
        break
    if chosen is None:
        # nothing to substitute with; the interaction still contributes the
        # direct hard label
        return feedback.apply_explicit_feedback(um, embedding, word, True)
    return feedback.apply_implicit_feedback(
        um, embedding, word, ImplicitAction.substitute(chosen))


# ---------------------------------------------------------------------------
# aggregation and CSV output


@dataclass(frozen=True)
class AggregateReport:
    scenario: Scenario
    rows: tuple[MetricRow, ...]
    profile_ids: tuple[str, ...]
    padded_profile_ids: tuple[str, ...] = ()


def aggregate(reports: list[SimulationReport]) -> AggregateReport:
    """Mean metric curves across profiles, one row per interaction index.

    Early-terminated runs are padded by carrying their last row forward; the
    affected profiles are flagged in the result.
    """
    if not reports:
        raise ValueError("nothing to aggregate")
    scenarios = {r.scenario for r in reports}
    if len(scenarios) != 1:
        raise MixedScenarios(f"mixed scenarios: {sorted(s.value for s in scenarios)}")
    lengths = {r.config.interactions for r in reports}
    if len(lengths) != 1:
        raise MixedScenarios(f"mixed interaction counts: {sorted(lengths)}")
    target = lengths.pop() + 1

    padded_ids = []
    table = np.zeros((target, 4))
    for report in reports:
        rows = list(report.rows)
        if len(rows) < target:
            padded_ids.append(report.profile_id)
            last = rows[-1]
            rows.extend(
                replace(last, interaction=i)
                for i in range(len(rows), target))
        table += np.array([[r.accuracy, r.precision, r.recall, r.f1]
                           for r in rows])
    table /= len(reports)
    mean_rows = tuple(
        MetricRow(interaction=i, accuracy=row[0], precision=row[1],
                  recall=row[2], f1=row[3])
        for i, row in enumerate(table))
    return AggregateReport(
        scenario=reports[0].scenario,
        rows=mean_rows,
        profile_ids=tuple(r.profile_id for r in reports),
        padded_profile_ids=tuple(padded_ids),
    )


CSV_HEADER = ["profile", "scenario", "interaction",
              "accuracy", "precision", "recall", "f1"]


def _write_rows(path: Path, label: str, scenario: Scenario, rows) -> None:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([
                label, scenario.value, row.interaction,
                f"{row.accuracy:.6f}", f"{row.precision:.6f}",
                f"{row.recall:.6f}", f"{row.f1:.6f}",
            ])


def write_report_csv(report: SimulationReport, path: str | Path) -> None:
    _write_rows(Path(path), report.profile_id, report.scenario, report.rows)


def write_aggregate_csv(agg: AggregateReport, path: str | Path) -> None:
    _write_rows(Path(path), "mean", agg.scenario, agg.rows)


def plot_aggregate_svg(aggregates: list[AggregateReport], path: str | Path,
                       metric: str = "f1") -> None:
    """Minimal dependency-free SVG line plot of mean metric curves."""
    width, height, margin = 640, 400, 48
    lines = []
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    for idx, agg in enumerate(aggregates):
        values = [getattr(r, metric) for r in agg.rows]
        n = len(values)
        points = " ".join(
            f"{margin + (width - 2 * margin) * i / max(n - 1, 1):.1f},"
            f"{height - margin - (height - 2 * margin) * v:.1f}"
            for i, v in enumerate(values))
        color = colors[idx % len(colors)]
        lines.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{points}"/>')
        lines.append(
            f'<text x="{width - margin + 4}" y="{margin + 16 * idx}" '
            f'font-size="12" fill="{color}">{agg.scenario.value}</text>')
    axis = (
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="#333"/>'
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{height - margin}" stroke="#333"/>'
        f'<text x="{margin}" y="{margin - 10}" font-size="12">'
        f'mean {metric} per interaction</text>'
    )
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}">{axis}{"".join(lines)}</svg>\n'
    )
    Path(path).write_text(svg, encoding="utf-8")
