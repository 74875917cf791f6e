"""Tokenization, immutable-token detection, and synonym suggestions.

Tokens carry exact character spans so the editor can decorate text in place.
Names, abbreviations, numbers and symbols are treated as immutable: they may
be highlighted but never receive substitution candidates.
"""

from __future__ import annotations

import enum
import logging
import re
from dataclasses import dataclass
from pathlib import Path

from . import classifier
from .errors import MissingFile, NoSynonymsKnown, OutOfVocabulary, RemoteUnavailable
from .feedback import UserModel
from .phonetics import PhoneticEmbedding

log = logging.getLogger(__name__)

_RUN = re.compile(r"\S+")
_WORD = re.compile(r"[A-Za-z]+(?:['’-][A-Za-z]+)*")
_DIGIT = re.compile(r"\d")
_SENTENCE_END = re.compile(r"[.!?]")


class TokenKind(enum.Enum):
    WORD = "word"
    NUMBER = "number"
    SYMBOL = "symbol"
    ENTITY = "entity"


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int
    kind: TokenKind

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


def tokenize(text: str) -> list[Token]:
    """Split text into WORD / NUMBER / SYMBOL tokens with exact spans.

    A maximal non-whitespace run containing a digit becomes one NUMBER token.
    Otherwise alphabetic runs (with internal apostrophes or hyphens) become
    WORD tokens and the leftover characters SYMBOL tokens.
    """
    tokens: list[Token] = []
    for run in _RUN.finditer(text):
        chunk, base = run.group(), run.start()
        if _DIGIT.search(chunk):
            tokens.append(Token(chunk, base, base + len(chunk), TokenKind.NUMBER))
            continue
        pos = 0
        for match in _WORD.finditer(chunk):
            if match.start() > pos:
                tokens.append(Token(chunk[pos:match.start()], base + pos,
                                    base + match.start(), TokenKind.SYMBOL))
            tokens.append(Token(match.group(), base + match.start(),
                                base + match.end(), TokenKind.WORD))
            pos = match.end()
        if pos < len(chunk):
            tokens.append(Token(chunk[pos:], base + pos, base + len(chunk),
                                TokenKind.SYMBOL))
    return tokens


def detect_immutable(tokens: list[Token]) -> list[Token]:
    """Mark probable names and abbreviations as ENTITY tokens.

    Heuristic stand-in for a full named-entity pass: capitalized words that
    are not sentence-initial, and all-uppercase words of length >= 2. NUMBER
    and SYMBOL tokens are immutable by construction.
    """
    out: list[Token] = []
    sentence_start = True
    for token in tokens:
        if token.kind is not TokenKind.WORD:
            out.append(token)
            if _SENTENCE_END.search(token.text):
                sentence_start = True
            continue
        text = token.text
        all_upper = text.isupper() and len(text) >= 2
        capitalized = text[0].isupper() and not sentence_start
        if all_upper or capitalized:
            out.append(Token(token.text, token.start, token.end, TokenKind.ENTITY))
        else:
            out.append(token)
        sentence_start = False
    return out


@dataclass(frozen=True)
class RemoteSynonymConfig:
    endpoint: str
    timeout: float = 3.0
    max_results: int = 20


@dataclass
class SynonymSource:
    """Offline thesaurus plus an optional remote enrichment client."""

    offline: dict[str, tuple[str, ...]]
    remote: RemoteSynonymConfig | None = None


def load_thesaurus(path: str | Path) -> dict[str, tuple[str, ...]]:
    """Read a thesaurus file: one `word<TAB>syn1,syn2,...` record per line."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"thesaurus not found: {path}")
    table: dict[str, tuple[str, ...]] = {}
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            word, _, rest = line.partition("\t")
            synonyms = tuple(s for s in rest.split(",") if s)
            if word and synonyms:
                table[word.lower()] = synonyms
    return table


def fetch_remote_synonyms(config: RemoteSynonymConfig, word: str) -> list[str]:
    """Query a DataMuse-style endpoint: GET ?ml=<word> -> [{word, score}]."""
    import httpx

    try:
        response = httpx.get(
            config.endpoint,
            params={"ml": word, "max": config.max_results},
            timeout=config.timeout,
        )
        response.raise_for_status()
        payload = response.json()
    except Exception as exc:
        raise RemoteUnavailable(str(exc)) from exc
    ranked = sorted(
        (item for item in payload if isinstance(item.get("word"), str)),
        key=lambda item: -float(item.get("score", 0.0)),
    )
    return [item["word"].lower() for item in ranked]


def candidate_synonyms(word: str, source: SynonymSource) -> list[str]:
    """Merged candidate list: offline order first, then remote by score."""
    key = word.lower()
    candidates = list(source.offline.get(key, ()))
    if source.remote is not None:
        try:
            remote = fetch_remote_synonyms(source.remote, key)
        except RemoteUnavailable as exc:
            log.warning("remote synonym lookup failed for %r: %s", word, exc)
            remote = []
        candidates.extend(remote)
    seen: set[str] = set()
    merged = []
    for candidate in candidates:
        lowered = candidate.lower()
        if lowered == key or lowered in seen:
            continue
        seen.add(lowered)
        merged.append(lowered)
    return merged


def alternatives_for(
    word: str,
    um: UserModel,
    embedding: PhoneticEmbedding,
    source: SynonymSource,
    max_n: int = 10,
) -> list[str]:
    """Synonyms the user should find pronounceable, best first.

    Candidates that are out of vocabulary, already hard-listed, or predicted
    above the user's highlight threshold are dropped. Raises NoSynonymsKnown
    when the sources have nothing at all for the word; returns an empty list
    when candidates exist but none survive filtering.
    """
    if max_n < 1:
        raise ValueError("max_n must be positive")
    candidates = candidate_synonyms(word, source)
    if not candidates:
        raise NoSynonymsKnown(word)
    kept: list[str] = []
    for candidate in candidates:
        if candidate not in embedding or candidate in um.hard_words:
            continue
        prob = classifier.prob_hard(um.model, embedding.embed(candidate))
        if prob > um.highlight_threshold:
            continue
        kept.append(candidate)
        if len(kept) == max_n:
            break
    return kept
