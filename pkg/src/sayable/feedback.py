"""Per-user feedback engine: word lists, retraining, highlighting, queries.

A UserModel is immutable; every feedback application returns a new instance
with the version counter bumped and the classifier retrained on the updated
word lists. The user's own labels always outrank the model: hard-listed words
are highlighted unconditionally, easy-listed words never are.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import classifier
from .classifier import DEFAULT_TRAINING, Label, LabeledExample, TrainingConfig, TriggerModel
from .errors import (
    AlreadyLabeled,
    EmptyList,
    ExhaustedPool,
    NotHighlighted,
    OutOfVocabulary,
    OverlappingSeeds,
)
from .phonetics import PhoneticEmbedding

DEFAULT_HIGHLIGHT_THRESHOLD = 0.7
MIN_RECOMMENDED_SEEDS = 5


@dataclass(frozen=True)
class UserModel:
    easy_words: frozenset[str]
    hard_words: frozenset[str]
    model: TriggerModel
    highlight_threshold: float
    version: int
    embedding_ref: str

    def is_labeled(self, word: str) -> bool:
        key = word.lower()
        return key in self.easy_words or key in self.hard_words


@dataclass(frozen=True)
class Prediction:
    prob: float | None
    highlighted: bool


class FeedbackKind(enum.Enum):
    EXPLICIT = "explicit"
    IMPLICIT = "implicit"


class ImplicitChoice(enum.Enum):
    IGNORE = "ignore"
    SUBSTITUTE = "substitute"


@dataclass(frozen=True)
class ImplicitAction:
    choice: ImplicitChoice
    chosen_word: str | None = None

    @classmethod
    def ignore(cls) -> "ImplicitAction":
        return cls(ImplicitChoice.IGNORE)

    @classmethod
    def substitute(cls, chosen_word: str) -> "ImplicitAction":
        return cls(ImplicitChoice.SUBSTITUTE, chosen_word.lower())


@dataclass(frozen=True)
class FeedbackEvent:
    kind: FeedbackKind
    word: str
    is_hard: bool | None = None
    action: ImplicitAction | None = None

    def __post_init__(self):
        if self.kind is FeedbackKind.EXPLICIT and self.is_hard is None:
            raise ValueError("explicit feedback requires is_hard")
        if self.kind is FeedbackKind.IMPLICIT:
            if self.action is None:
                raise ValueError("implicit feedback requires an action")
            if (self.action.choice is ImplicitChoice.SUBSTITUTE
                    and self.action.chosen_word == self.word.lower()):
                raise ValueError("substitute must differ from the highlighted word")


def _train_on_lists(
    easy: frozenset[str],
    hard: frozenset[str],
    embedding: PhoneticEmbedding,
    config: TrainingConfig,
    initial: TriggerModel | None = None,
) -> TriggerModel:
    # fixed ordering (sorted easy, then sorted hard) keeps training
    # bit-reproducible for identical word lists
    words = sorted(easy) + sorted(hard)
    rows = np.asarray(embedding.rows_for(words).todense())
    examples = [
        LabeledExample(word=w, vector=rows[i],
                       label=Label.EASY if w in easy else Label.HARD)
        for i, w in enumerate(words)
    ]
    return classifier.train(examples, config, initial=initial)


def _clean_seed_list(words, embedding: PhoneticEmbedding, which: str) -> frozenset[str]:
    in_vocab = []
    for word in words:
        key = word.lower()
        if key in embedding and key not in in_vocab:
            in_vocab.append(key)
    if not in_vocab:
        raise EmptyList(f"no in-vocabulary words in the {which} seed list")
    if len(in_vocab) < MIN_RECOMMENDED_SEEDS:
        warnings.warn(
            f"only {len(in_vocab)} usable {which} seed words; "
            f"at least {MIN_RECOMMENDED_SEEDS} are recommended",
            stacklevel=3,
        )
    return frozenset(in_vocab)


def init_user_model(
    seed_easy,
    seed_hard,
    embedding: PhoneticEmbedding,
    threshold: float = DEFAULT_HIGHLIGHT_THRESHOLD,
    training_config: TrainingConfig = DEFAULT_TRAINING,
) -> UserModel:
    """Build the initial model from the user's seed word lists."""
    easy = _clean_seed_list(seed_easy, embedding, "easy")
    hard = _clean_seed_list(seed_hard, embedding, "hard")
    overlap = easy & hard
    if overlap:
        raise OverlappingSeeds(overlap)
    model = _train_on_lists(easy, hard, embedding, training_config)
    return UserModel(
        easy_words=easy,
        hard_words=hard,
        model=model,
        highlight_threshold=threshold,
        version=0,
        embedding_ref=embedding.fingerprint,
    )


def predict_word(um: UserModel, embedding: PhoneticEmbedding, word: str) -> Prediction:
    """Probability and highlight flag for one word. Total: OOV words are inert."""
    key = word.lower()
    if key not in embedding:
        return Prediction(prob=None, highlighted=False)
    prob = classifier.prob_hard(um.model, embedding.embed(key))
    if key in um.hard_words:
        return Prediction(prob=prob, highlighted=True)
    if key in um.easy_words:
        return Prediction(prob=prob, highlighted=False)
    return Prediction(prob=prob, highlighted=prob > um.highlight_threshold)


def _with_updates(um: UserModel, embedding: PhoneticEmbedding,
                  new_easy: frozenset[str], new_hard: frozenset[str]) -> UserModel:
    model = _train_on_lists(new_easy, new_hard, embedding, um.model.config,
                            initial=um.model)
    return replace(um, easy_words=new_easy, hard_words=new_hard,
                   model=model, version=um.version + 1)


def apply_explicit_feedback(
    um: UserModel, embedding: PhoneticEmbedding, word: str, is_hard: bool
) -> UserModel:
    """Record a direct yes/no answer about one word and retrain."""
    key = word.lower()
    if key not in embedding:
        raise OutOfVocabulary(word)
    if um.is_labeled(key):
        raise AlreadyLabeled(word)
    easy = um.easy_words if is_hard else um.easy_words | {key}
    hard = um.hard_words | {key} if is_hard else um.hard_words
    return _with_updates(um, embedding, easy, hard)


def apply_implicit_feedback(
    um: UserModel, embedding: PhoneticEmbedding, word: str, action: ImplicitAction
) -> UserModel:
    """Record an Ignore/substitute interaction with a highlighted word.

    Ignore marks the word easy (it was a false positive). Substituting marks
    the word hard and the chosen replacement easy; the replacement is skipped
    if it already carries a label.
    """
    key = word.lower()
    if not predict_word(um, embedding, key).highlighted:
        raise NotHighlighted(word)
    if action.choice is ImplicitChoice.IGNORE:
        if um.is_labeled(key):
            # ignoring a hard-listed word would contradict the user's own
            # earlier label without saying so; force an explicit relabel
            raise AlreadyLabeled(word)
        return _with_updates(um, embedding, um.easy_words | {key}, um.hard_words)

    # substituting is consistent with a hard label, so it is allowed both for
    # model-highlighted words and for words the user already listed as hard
    chosen = (action.chosen_word or "").lower()
    if chosen == key:
        raise ValueError("substitute must differ from the highlighted word")
    if chosen not in embedding:
        raise OutOfVocabulary(action.chosen_word or "")
    easy = um.easy_words
    if not um.is_labeled(chosen):
        easy = easy | {chosen}
    return _with_updates(um, embedding, easy, um.hard_words | {key})


def apply_event(um: UserModel, embedding: PhoneticEmbedding, event: FeedbackEvent) -> UserModel:
    if event.kind is FeedbackKind.EXPLICIT:
        return apply_explicit_feedback(um, embedding, event.word, bool(event.is_hard))
    assert event.action is not None
    return apply_implicit_feedback(um, embedding, event.word, event.action)


def next_query(
    um: UserModel, embedding: PhoneticEmbedding, pool=None
) -> str:
    """The unlabeled word the model is most uncertain about.

    Uncertainty is predictive entropy; exact ties go to the lexicographically
    smaller word so query selection is deterministic.
    """
    if pool is None:
        candidates = [w for w in embedding.words if not um.is_labeled(w)]
    else:
        seen = set()
        candidates = []
        for word in pool:
            key = word.lower()
            if key in seen or key not in embedding or um.is_labeled(key):
                continue
            seen.add(key)
            candidates.append(key)
        candidates.sort()
    if not candidates:
        raise ExhaustedPool("no unlabeled words left to query")
    probs = classifier.prob_hard_many(um.model, embedding.rows_for(candidates))
    scores = classifier.entropy_many(probs)
    # candidates are sorted, argmax returns the first (smallest) among ties
    return candidates[int(np.argmax(scores))]


USER_MODEL_FORMAT_VERSION = 1


def user_model_to_dict(um: UserModel) -> dict:
    return {
        "format_version": USER_MODEL_FORMAT_VERSION,
        "easy_words": sorted(um.easy_words),
        "hard_words": sorted(um.hard_words),
        "highlight_threshold": um.highlight_threshold,
        "version": um.version,
        "embedding_ref": um.embedding_ref,
        "model": classifier.model_to_dict(um.model, um.embedding_ref),
    }


def user_model_from_dict(data: dict) -> UserModel:
    version = data.get("format_version")
    if version != USER_MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported user model format version: {version}")
    model, _ = classifier.model_from_dict(data["model"])
    return UserModel(
        easy_words=frozenset(data["easy_words"]),
        hard_words=frozenset(data["hard_words"]),
        model=model,
        highlight_threshold=float(data["highlight_threshold"]),
        version=int(data["version"]),
        embedding_ref=data["embedding_ref"],
    )
