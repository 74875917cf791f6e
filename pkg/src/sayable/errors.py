"""Exception types shared across the package."""

from __future__ import annotations


class SayableError(Exception):
    """Base class for all package-specific errors."""


class MissingFile(SayableError):
    pass


class MalformedLine(SayableError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class EmptyDictionary(SayableError):
    pass


class OutOfVocabulary(SayableError):
    def __init__(self, word: str):
        super().__init__(f"word not in vocabulary: {word!r}")
        self.word = word


class DegenerateLabels(SayableError):
    pass


class DimensionMismatch(SayableError):
    pass


class OutOfRange(SayableError):
    pass


class EmptyList(SayableError):
    pass


class OverlappingSeeds(SayableError):
    def __init__(self, words):
        joined = ", ".join(sorted(words))
        super().__init__(f"words listed as both easy and hard: {joined}")
        self.words = set(words)


class AlreadyLabeled(SayableError):
    def __init__(self, word: str):
        super().__init__(f"word already labeled: {word!r}")
        self.word = word


class NotHighlighted(SayableError):
    def __init__(self, word: str):
        super().__init__(f"word is not currently highlighted: {word!r}")
        self.word = word


class ExhaustedPool(SayableError):
    pass


class NoSynonymsKnown(SayableError):
    def __init__(self, word: str):
        super().__init__(f"no synonyms known for {word!r}")
        self.word = word


class RemoteUnavailable(SayableError):
    pass


class ImmutableToken(SayableError):
    def __init__(self, word: str):
        super().__init__(f"token cannot be substituted: {word!r}")
        self.word = word


class EmptyCorpus(SayableError):
    pass


class MissingColumn(SayableError):
    pass


class TooFewWords(SayableError):
    pass


class EmptyTestSet(SayableError):
    pass


class MixedScenarios(SayableError):
    pass


class UnknownSession(SayableError):
    def __init__(self, session_id: str):
        super().__init__(f"unknown session: {session_id}")
        self.session_id = session_id
